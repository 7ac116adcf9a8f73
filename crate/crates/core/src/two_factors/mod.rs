//! 2-factorisations of the circulants `Cay(Z_n; ±{1,2,3})` and
//! `Cay(Z_n; ±{1,3,4})` built from J-gadgets, plus an exact backtracking
//! search for arbitrary regular graphs.
//!
//! A J-gadget of flavour `{a,b,c}` and order `m` is the path-like graph on
//! `0..m+w` (with `w = c`) whose edges are `{i,i+a}, {i+a,i+c}, {i,i+c}` for
//! `i < m`, split into three 2-regular parts with fixed missing vertices.
//! Gadgets concatenate by translation and wrap onto `Z_n` by reducing
//! vertices modulo `n`.

mod cycle_power;
mod gadgets;
mod plan;
mod search;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::graphs::{
    self, circulant, cycle_type, edge, ConnectionSet, CycleType, Edge, GraphError, VertexGraph,
};

pub use cycle_power::{
    cycle_power_factorise, cycle_power_search, PowerSearchOutcome, PowerSearchReport,
};
pub use gadgets::{j123_c3, j123_cycle, j134_c8, j134_c8_triple, j134_cycle};
pub use plan::{factorise_123, factorise_134, plan_123, plan_134, Block, BlockPlan, BlockRecipe};
pub use search::{
    backtrack_2fact, pm1234_exception, search_two_factorisation, Pm1234Exception, SearchOutcome,
    SearchReport, DEFAULT_BUDGET,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwoFactorError {
    #[error("{what} is unsupported for m = {m}; supported range: {range}")]
    Unsupported {
        what: &'static str,
        m: u32,
        range: &'static str,
    },
    #[error("gadget {flavor} m = {m}, part H{part}: {reason}")]
    InvalidGadget {
        flavor: Flavor,
        m: u32,
        part: usize,
        reason: String,
    },
    #[error("cannot combine gadgets of flavours {0} and {1}")]
    FlavorMismatch(Flavor, Flavor),
    #[error("wrap needs n >= {min}, got {n}")]
    WrapTooSmall { n: u32, min: u32 },
    #[error(
        "triangle condition fails: {triangles} triangles but only {partners} eligible partners"
    )]
    ConditionViolated { triangles: usize, partners: usize },
    #[error("cycle type order {found} differs from n = {expected}")]
    OrderMismatch { expected: u32, found: u32 },
    #[error("order {order} below the minimum {min}")]
    OrderTooSmall { order: u32, min: u32 },
    #[error("girth {girth} below 6")]
    GirthViolation { girth: u32 },
    #[error("graph is not regular of even degree")]
    NotEvenRegular,
    #[error("graph has degree {degree} but {factors} factor types were requested")]
    FactorCountMismatch { degree: usize, factors: usize },
    #[error("search supports at most {max} vertices, got {n}")]
    TooLarge { n: u32, max: u32 },
    #[error("{0}")]
    Precondition(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub type Result<T> = std::result::Result<T, TwoFactorError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    J123,
    J134,
}

impl Flavor {
    /// The largest step, which is also the number of extra vertices.
    pub fn width(self) -> u32 {
        match self {
            Flavor::J123 => 3,
            Flavor::J134 => 4,
        }
    }

    pub fn steps(self) -> [u32; 3] {
        match self {
            Flavor::J123 => [1, 2, 3],
            Flavor::J134 => [1, 3, 4],
        }
    }

    pub fn connection_set(self, n: u32) -> graphs::Result<ConnectionSet> {
        ConnectionSet::symmetric(n, &self.steps())
    }

    pub fn min_wrap_order(self) -> u32 {
        match self {
            Flavor::J123 => 7,
            Flavor::J134 => 9,
        }
    }

    /// Vertices each part must avoid.
    pub fn omitted(self, m: u32, part: usize) -> Vec<u32> {
        match (self, part) {
            (Flavor::J123, 0) => vec![m, m + 1, m + 2],
            (Flavor::J123, 1) => vec![0, 2, m + 1],
            (Flavor::J123, _) => vec![0, 1, m + 2],
            (Flavor::J134, 0) => vec![m, m + 1, m + 2, m + 3],
            (Flavor::J134, 1) => vec![0, 3, m + 1, m + 2],
            (Flavor::J134, _) => vec![0, 1, 2, m + 3],
        }
    }

    /// Edge set of the underlying gadget graph `J_m`.
    pub fn base_edges(self, m: u32) -> BTreeSet<Edge> {
        let c = self.width();
        (0..m)
            .flat_map(|i| [edge(i, i + 1), edge(i + 1, i + c), edge(i, i + c)])
            .collect()
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::J123 => "j123",
            Flavor::J134 => "j134",
        })
    }
}

/// A decomposition of `J_m` into three parts, each a copy of one 2-regular
/// graph of order `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JGadget {
    flavor: Flavor,
    m: u32,
    parts: [VertexGraph; 3],
    cycle_type: CycleType,
}

impl JGadget {
    /// Builds and validates a gadget. Every invariant is checked: the parts
    /// partition `J_m`, each is 2-regular, each misses exactly its prescribed
    /// vertices, and all three have the same cycle type.
    pub fn new(flavor: Flavor, m: u32, parts: [Vec<Edge>; 3]) -> Result<Self> {
        let n = m + flavor.width();
        let invalid = |part: usize, reason: String| TwoFactorError::InvalidGadget {
            flavor,
            m,
            part: part + 1,
            reason,
        };
        let mut graphs_out = Vec::with_capacity(3);
        let mut union = BTreeSet::new();
        let mut total = 0usize;
        let mut common: Option<CycleType> = None;
        for (k, list) in parts.into_iter().enumerate() {
            let g = VertexGraph::from_edges(n, list.iter().copied())
                .map_err(|e| invalid(k, e.to_string()))?;
            if g.edge_count() != list.len() {
                return Err(invalid(k, "repeated edge".into()));
            }
            let ct = cycle_type(&g).map_err(|e| invalid(k, e.to_string()))?;
            let expected: BTreeSet<u32> = (0..n)
                .filter(|v| !flavor.omitted(m, k).contains(v))
                .collect();
            if g.support() != expected {
                return Err(invalid(
                    k,
                    "vertex set differs from the required one".into(),
                ));
            }
            match &common {
                None => common = Some(ct),
                Some(c) if *c != ct => {
                    return Err(invalid(k, format!("cycle type {ct} differs from {c}")))
                }
                Some(_) => {}
            }
            total += g.edge_count();
            union.extend(g.edges().iter().copied());
            graphs_out.push(g);
        }
        if total != union.len() || union != flavor.base_edges(m) {
            return Err(invalid(0, "parts do not partition the gadget edges".into()));
        }
        let parts: [VertexGraph; 3] = graphs_out.try_into().expect("three parts");
        Ok(JGadget {
            flavor,
            m,
            parts,
            cycle_type: common.expect("three parts"),
        })
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn parts(&self) -> &[VertexGraph; 3] {
        &self.parts
    }

    pub fn cycle_type(&self) -> &CycleType {
        &self.cycle_type
    }

    /// Cycles of each part as vertex sequences, for display.
    pub fn part_cycles(&self) -> [Vec<Vec<u32>>; 3] {
        self.parts.clone().map(|g| cycles_of(&g))
    }

    /// Joins two gadgets by translating the second by `m1`.
    pub fn concat(&self, other: &JGadget) -> Result<JGadget> {
        if self.flavor != other.flavor {
            return Err(TwoFactorError::FlavorMismatch(self.flavor, other.flavor));
        }
        let shift = self.m;
        let parts = [0, 1, 2].map(|k| {
            self.parts[k]
                .edges()
                .iter()
                .copied()
                .chain(
                    other.parts[k]
                        .edges()
                        .iter()
                        .map(|&(u, v)| (u + shift, v + shift)),
                )
                .collect::<Vec<_>>()
        });
        JGadget::new(self.flavor, self.m + other.m, parts)
    }

    /// Identifies vertex `n + i` with `i`, yielding three edge-disjoint
    /// 2-factors of the flavour's circulant on `Z_n` with `n = m`.
    pub fn wrap(&self) -> Result<[VertexGraph; 3]> {
        let n = self.m;
        let min = self.flavor.min_wrap_order();
        if n < min {
            return Err(TwoFactorError::WrapTooSmall { n, min });
        }
        let wrapped = self
            .parts
            .clone()
            .map(|g| VertexGraph::from_edges(n, g.edges().iter().map(|&(u, v)| (u % n, v % n))));
        let [a, b, c] = wrapped;
        let out = [a?, b?, c?];
        let target = circulant(n, &self.flavor.connection_set(n)?)?;
        let count: usize = out.iter().map(VertexGraph::edge_count).sum();
        let union = out[0].union(&out[1]).union(&out[2]);
        if count != union.edge_count() || union != target {
            return Err(TwoFactorError::InvalidGadget {
                flavor: self.flavor,
                m: self.m,
                part: 0,
                reason: "wrapped parts do not decompose the circulant".into(),
            });
        }
        Ok(out)
    }
}

/// Cycles of a 2-regular graph, each starting at its least vertex.
pub fn cycles_of(g: &VertexGraph) -> Vec<Vec<u32>> {
    let adj = g.adjacency();
    let mut seen = vec![false; adj.len()];
    let mut out = Vec::new();
    for start in 0..adj.len() {
        if seen[start] || adj[start].is_empty() {
            continue;
        }
        let mut cyc = vec![start as u32];
        seen[start] = true;
        let mut prev = start;
        let mut cur = adj[start][0] as usize;
        while cur != start {
            seen[cur] = true;
            cyc.push(cur as u32);
            let next = if adj[cur][0] as usize != prev {
                adj[cur][0]
            } else {
                adj[cur][1]
            } as usize;
            prev = cur;
            cur = next;
        }
        out.push(cyc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_edge_counts() {
        assert_eq!(Flavor::J123.base_edges(4).len(), 12);
        assert_eq!(Flavor::J134.base_edges(6).len(), 18);
        assert!(Flavor::J134.base_edges(2).contains(&(1, 5)));
    }

    #[test]
    fn validation_rejects_bad_parts() {
        let g = j123_cycle(4).unwrap();
        let mut parts = g
            .parts()
            .clone()
            .map(|h| h.edges().iter().copied().collect::<Vec<_>>());
        parts.swap(0, 1);
        assert!(matches!(
            JGadget::new(Flavor::J123, 4, parts),
            Err(TwoFactorError::InvalidGadget { .. })
        ));
    }

    #[test]
    fn concat_and_wrap() {
        let g = j123_cycle(4)
            .unwrap()
            .concat(&j123_cycle(5).unwrap())
            .unwrap();
        assert_eq!(g.m(), 9);
        assert_eq!(g.cycle_type().lengths(), &[4, 5]);
        let factors = g.wrap().unwrap();
        for f in &factors {
            assert_eq!(cycle_type(f).unwrap().lengths(), &[4, 5]);
        }
        let k7 = j123_cycle(7).unwrap().wrap().unwrap();
        assert!(k7[0].union(&k7[1]).union(&k7[2]).is_complete());
        assert_eq!(
            j123_cycle(6).unwrap().wrap(),
            Err(TwoFactorError::WrapTooSmall { n: 6, min: 7 })
        );
    }

    #[test]
    fn concat_is_associative() {
        let (a, b, c) = (
            j123_cycle(4).unwrap(),
            j123_cycle(5).unwrap(),
            j123_c3(8).unwrap(),
        );
        let left = a.concat(&b).unwrap().concat(&c).unwrap();
        let right = a.concat(&b.concat(&c).unwrap()).unwrap();
        assert_eq!(left, right);
        assert!(matches!(
            a.concat(&j134_cycle(6).unwrap()),
            Err(TwoFactorError::FlavorMismatch(..))
        ));
    }

    #[test]
    fn cycles_listing() {
        let g = j123_cycle(4).unwrap();
        assert_eq!(g.part_cycles()[0], vec![vec![0, 1, 2, 3]]);
    }
}
