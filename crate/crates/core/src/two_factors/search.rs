//! Exact, budget-bounded search for 2-factorisations of a regular graph with
//! prescribed cycle types.
//!
//! Factors are built one at a time. Within a factor, cycles start at the least
//! uncovered vertex and are traversed so that the second vertex is smaller
//! than the last. When the remaining factors all share a type, the one
//! containing the least remaining edge at vertex 0 is built first. On a
//! complete graph the first factor is fixed to consecutive vertices. Vertices
//! are bitmask-indexed, so at most 128 vertices are supported.

use super::{Result, TwoFactorError};
use crate::graphs::{edge, CycleType, Edge, VertexGraph};

pub const DEFAULT_BUDGET: u64 = 10_000_000;
const MAX_VERTICES: u32 = 128;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Vec<VertexGraph>),
    /// Exhaustive: no factorisation exists.
    NotFound,
    /// The node budget ran out before the search finished.
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub outcome: SearchOutcome,
    pub nodes: u64,
}

impl SearchReport {
    pub fn factors(&self) -> Option<&[VertexGraph]> {
        match &self.outcome {
            SearchOutcome::Found(f) => Some(f),
            _ => None,
        }
    }
}

/// Splits `g` into `t = deg/2` copies of `F`, or with `plus_hamilton` into one
/// copy of `F` and one Hamilton cycle (then `g` must be 4-regular).
pub fn backtrack_2fact(
    g: &VertexGraph,
    f: &CycleType,
    plus_hamilton: bool,
    budget: u64,
) -> Result<SearchReport> {
    let degree = g.regular_degree().ok_or(TwoFactorError::NotEvenRegular)?;
    if degree == 0 || degree % 2 == 1 {
        return Err(TwoFactorError::NotEvenRegular);
    }
    let types = if plus_hamilton {
        if degree != 4 {
            return Err(TwoFactorError::Precondition(format!(
                "a copy of F plus a Hamilton cycle needs a 4-regular graph, degree is {degree}"
            )));
        }
        vec![f.clone(), CycleType::hamilton(g.n())]
    } else {
        vec![f.clone(); degree / 2]
    };
    search_two_factorisation(g, &types, budget)
}

/// Splits `g` into 2-factors whose cycle types are `types`, in that order.
pub fn search_two_factorisation(
    g: &VertexGraph,
    types: &[CycleType],
    budget: u64,
) -> Result<SearchReport> {
    let n = g.n();
    if n > MAX_VERTICES {
        return Err(TwoFactorError::TooLarge {
            n,
            max: MAX_VERTICES,
        });
    }
    let degree = g.regular_degree().ok_or(TwoFactorError::NotEvenRegular)?;
    if degree % 2 == 1 || degree == 0 {
        return Err(TwoFactorError::NotEvenRegular);
    }
    if degree != 2 * types.len() {
        return Err(TwoFactorError::FactorCountMismatch {
            degree,
            factors: types.len(),
        });
    }
    if let Some(bad) = types.iter().find(|t| t.order() != n) {
        return Err(TwoFactorError::OrderMismatch {
            expected: n,
            found: bad.order(),
        });
    }
    let mut s = Searcher::new(g, types, budget);
    let found = s.factor(0);
    let outcome = if found {
        let graphs = s
            .done
            .iter()
            .map(|edges| VertexGraph::from_edges(n, edges.iter().copied()))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        SearchOutcome::Found(graphs)
    } else if s.exceeded {
        SearchOutcome::BudgetExceeded
    } else {
        SearchOutcome::NotFound
    };
    Ok(SearchReport {
        outcome,
        nodes: s.nodes,
    })
}

#[inline]
fn bit(v: u32) -> u128 {
    1u128 << v
}

struct Searcher<'a> {
    n: u32,
    full: u128,
    complete: bool,
    avail: Vec<u128>,
    types: &'a [CycleType],
    /// `same_tail[k]`: all of `types[k..]` are equal.
    same_tail: Vec<bool>,
    counts: Vec<u32>,
    covered: u128,
    path: Vec<u32>,
    path_mask: u128,
    current: Vec<Edge>,
    done: Vec<Vec<Edge>>,
    nodes: u64,
    budget: u64,
    exceeded: bool,
}

impl<'a> Searcher<'a> {
    fn new(g: &VertexGraph, types: &'a [CycleType], budget: u64) -> Self {
        let n = g.n();
        let mut avail = vec![0u128; n as usize];
        for &(u, v) in g.edges() {
            avail[u as usize] |= bit(v);
            avail[v as usize] |= bit(u);
        }
        let same_tail = (0..types.len())
            .map(|k| types[k..].iter().all(|t| *t == types[k]))
            .collect();
        Searcher {
            n,
            full: if n == 128 { u128::MAX } else { bit(n) - 1 },
            complete: g.is_complete(),
            avail,
            types,
            same_tail,
            counts: vec![0; n as usize + 1],
            covered: 0,
            path: Vec::with_capacity(n as usize),
            path_mask: 0,
            current: Vec::new(),
            done: Vec::new(),
            nodes: 0,
            budget,
            exceeded: false,
        }
    }

    fn take(&mut self, u: u32, v: u32) {
        self.avail[u as usize] &= !bit(v);
        self.avail[v as usize] &= !bit(u);
    }

    fn give(&mut self, u: u32, v: u32) {
        self.avail[u as usize] |= bit(v);
        self.avail[v as usize] |= bit(u);
    }

    fn reset_counts(&mut self, k: usize) {
        self.counts.iter_mut().for_each(|c| *c = 0);
        for &l in self.types[k].lengths() {
            self.counts[l as usize] += 1;
        }
    }

    fn max_remaining(&self) -> usize {
        (0..self.counts.len())
            .rev()
            .find(|&l| self.counts[l] > 0)
            .unwrap_or(0)
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exceeded = true;
        }
        !self.exceeded
    }

    fn factor(&mut self, k: usize) -> bool {
        if k + 1 == self.types.len() {
            return self.finish_last(k);
        }
        self.reset_counts(k);
        self.covered = 0;
        self.current.clear();
        if k == 0 && self.complete {
            return self.canonical_first();
        }
        self.next_cycle(k)
    }

    /// On `K_n` every copy of `F` is equivalent, so the first factor is fixed.
    fn canonical_first(&mut self) -> bool {
        let mut edges = Vec::new();
        let mut base = 0;
        for &l in self.types[0].lengths() {
            for i in 0..l {
                edges.push(edge(base + i, base + (i + 1) % l));
            }
            base += l;
        }
        for &(u, v) in &edges {
            self.take(u, v);
        }
        self.done.push(edges.clone());
        if self.factor(1) {
            return true;
        }
        self.done.pop();
        for &(u, v) in &edges {
            self.give(u, v);
        }
        false
    }

    /// The leftover graph must itself be a 2-factor of the last type.
    fn finish_last(&mut self, k: usize) -> bool {
        if !self.tick() {
            return false;
        }
        let mut seen = 0u128;
        let mut lengths = Vec::new();
        for v in 0..self.n {
            if self.avail[v as usize].count_ones() != 2 {
                return false;
            }
        }
        for start in 0..self.n {
            if seen & bit(start) != 0 {
                continue;
            }
            let mut len = 0;
            let (mut prev, mut cur) = (u32::MAX, start);
            loop {
                seen |= bit(cur);
                len += 1;
                let nb = self.avail[cur as usize];
                let a = nb.trailing_zeros();
                let b = 127 - nb.leading_zeros();
                let next = if a != prev { a } else { b };
                prev = cur;
                cur = next;
                if cur == start {
                    break;
                }
            }
            lengths.push(len);
        }
        lengths.sort_unstable();
        if lengths != self.types[k].lengths() {
            return false;
        }
        let mut edges = Vec::new();
        for u in 0..self.n {
            let mut nb = self.avail[u as usize] & !((bit(u) << 1).wrapping_sub(1));
            while nb != 0 {
                let v = nb.trailing_zeros();
                nb &= nb - 1;
                edges.push((u, v));
            }
        }
        self.done.push(edges);
        true
    }

    fn next_cycle(&mut self, k: usize) -> bool {
        if self.covered == self.full {
            return self.descend(k);
        }
        let start = (!self.covered & self.full).trailing_zeros();
        self.path.clear();
        self.path.push(start);
        self.path_mask = bit(start);
        let free = self.full & !self.covered & !bit(start);
        if self.covered == 0 && self.same_tail[k] {
            let nb = self.avail[start as usize] & free;
            if nb == 0 {
                return false;
            }
            let x = nb.trailing_zeros();
            return self.step(k, start, x, true);
        }
        let mut nb = self.avail[start as usize] & free;
        while nb != 0 {
            let w = nb.trailing_zeros();
            nb &= nb - 1;
            if self.step(k, start, w, false) {
                return true;
            }
            if self.exceeded {
                return false;
            }
        }
        false
    }

    /// Completed factor `k`: save per-factor state, recurse, restore.
    fn descend(&mut self, k: usize) -> bool {
        let counts = self.counts.clone();
        let current = std::mem::take(&mut self.current);
        self.done.push(current.clone());
        if self.factor(k + 1) {
            return true;
        }
        self.done.pop();
        self.counts = counts;
        self.current = current;
        self.covered = self.full;
        false
    }

    fn step(&mut self, k: usize, from: u32, to: u32, forced: bool) -> bool {
        self.take(from, to);
        self.current.push(edge(from, to));
        self.path.push(to);
        self.path_mask |= bit(to);
        let ok = self.feasible_open() && self.extend(k, forced);
        if !ok {
            self.path_mask &= !bit(to);
            self.path.pop();
            self.current.pop();
            self.give(from, to);
        }
        ok
    }

    /// Every uncovered vertex off the path needs two usable edges.
    fn feasible_open(&self) -> bool {
        let start = self.path[0];
        let cur = *self.path.last().expect("non-empty path");
        let free = self.full & !self.covered & !self.path_mask;
        let reach = free | bit(start) | bit(cur);
        let mut rest = free;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            if (self.avail[v as usize] & reach).count_ones() < 2 {
                return false;
            }
        }
        (self.avail[cur as usize] & (free | bit(start))) != 0
    }

    fn feasible_closed(&self) -> bool {
        let free = self.full & !self.covered;
        let mut rest = free;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            if (self.avail[v as usize] & free).count_ones() < 2 {
                return false;
            }
        }
        true
    }

    fn extend(&mut self, k: usize, forced: bool) -> bool {
        if !self.tick() {
            return false;
        }
        let start = self.path[0];
        let cur = *self.path.last().expect("non-empty path");
        let len = self.path.len();
        if len >= 3
            && self.counts[len] > 0
            && self.avail[cur as usize] & bit(start) != 0
            && (forced || self.path[1] < cur)
        {
            if self.close(k, start, cur, len) {
                return true;
            }
            if self.exceeded {
                return false;
            }
        }
        if len < self.max_remaining() {
            let free = self.full & !self.covered & !self.path_mask;
            let mut nb = self.avail[cur as usize] & free;
            while nb != 0 {
                let w = nb.trailing_zeros();
                nb &= nb - 1;
                if self.step(k, cur, w, forced) {
                    return true;
                }
                if self.exceeded {
                    return false;
                }
            }
        }
        false
    }

    fn close(&mut self, k: usize, start: u32, cur: u32, len: usize) -> bool {
        self.take(cur, start);
        self.current.push(edge(cur, start));
        self.counts[len] -= 1;
        let saved_path = self.path.clone();
        let saved_mask = self.path_mask;
        self.covered |= self.path_mask;
        let ok = self.feasible_closed() && self.next_cycle(k);
        if !ok {
            self.covered &= !saved_mask;
            self.path = saved_path;
            self.path_mask = saved_mask;
            self.counts[len] += 1;
            self.current.pop();
            self.give(cur, start);
        }
        ok
    }
}

/// Cycle types for which a 2-factorisation of `Cay(Z_n; ±{1,2,3,4})` is
/// known not to exist, or is not known to exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pm1234Exception {
    Definite,
    /// One of four families whose status is open, numbered 1 to 4.
    Possible(u8),
}

pub fn pm1234_exception(f: &CycleType) -> Option<Pm1234Exception> {
    let n = f.order();
    let (threes, fours) = (f.nu(3), f.nu(4));
    let len = f.lengths().len();
    if f.lengths() == [4, 5] || f.lengths() == [3, 3, 3, 3, 3] {
        return Some(Pm1234Exception::Definite);
    }
    if threes == len && matches!(n % 9, 3 | 6) && n >= 21 {
        return Some(Pm1234Exception::Possible(1));
    }
    if fours == len && n % 8 == 4 && n >= 20 {
        return Some(Pm1234Exception::Possible(2));
    }
    if fours == 1 && threes + 1 == len && n % 3 == 1 && n >= 19 {
        return Some(Pm1234Exception::Possible(3));
    }
    if threes == 1 && fours + 1 == len && n % 8 == 7 && n >= 23 {
        return Some(Pm1234Exception::Possible(4));
    }
    None
}
