//! Search for a factorisation of `K_n - I` into copies of the `k`-th power of
//! an `n`-cycle, `C_n^k = Cay(Z_n; ±{1..k})`, for some perfect matching `I`.
//!
//! One copy is taken to be the canonical circulant. Each further copy is a
//! cyclic vertex sequence in which every two entries at cyclic distance at
//! most `k` are adjacent in what is left of `K_n`. Whatever remains after all
//! copies are placed is 1-regular, hence a perfect matching.
//!
//! Symmetry reductions: every sequence starts at vertex 0 and is read in the
//! direction with `seq[1] < seq[n-1]`. The second copy is also required to
//! contain the edge `{0, k+1}`. Since `I` holds only `n/2` of the `n` edges
//! of difference `k+1`, some other copy contains one of them, and rotating
//! fixes the canonical copy while moving that edge to `{0, k+1}`.

use super::{Result, TwoFactorError};
use crate::graphs::{circulant, complete_graph, edge, ConnectionSet, VertexGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PowerSearchOutcome {
    Found {
        factors: Vec<VertexGraph>,
        /// `sequences[j][i]` is the vertex of factor `j` playing the role of
        /// `i` in the canonical circulant.
        sequences: Vec<Vec<u32>>,
        matching: VertexGraph,
    },
    NotFound,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSearchReport {
    pub outcome: PowerSearchOutcome,
    pub nodes: u64,
}

pub fn cycle_power_factorise(n: u32, k: u32, budget: u64) -> Result<PowerSearchReport> {
    cycle_power_search(n, k, budget, true)
}

/// As [`cycle_power_factorise`], optionally without the `{0, k+1}` reduction
/// for the second copy (only the direction rule is then applied).
pub fn cycle_power_search(
    n: u32,
    k: u32,
    budget: u64,
    anchored: bool,
) -> Result<PowerSearchReport> {
    if n > 128 {
        return Err(TwoFactorError::TooLarge { n, max: 128 });
    }
    if n % 2 == 1 || k == 0 || n < 2 * k + 2 || !(n - 2).is_multiple_of(2 * k) {
        return Err(TwoFactorError::Precondition(format!(
            "K_{n} - I does not split by degree into copies of C_{n}^{k}"
        )));
    }
    let copies = ((n - 2) / (2 * k)) as usize;
    let steps: Vec<u32> = (1..=k).collect();
    let canonical = circulant(n, &ConnectionSet::symmetric(n, &steps)?)?;
    let rest = complete_graph(n).difference(&canonical);
    let mut avail = vec![0u128; n as usize];
    for &(u, v) in rest.edges() {
        avail[u as usize] |= 1 << v;
        avail[v as usize] |= 1 << u;
    }
    let mut s = PowerSearch {
        n,
        k,
        copies,
        anchored,
        avail,
        seqs: vec![(0..n).collect()],
        nodes: 0,
        budget,
        exceeded: false,
    };
    let found = s.copy(1);
    let outcome = if found {
        let factors = s
            .seqs
            .iter()
            .map(|seq| {
                let mut inverse = vec![0u32; n as usize];
                for (i, &v) in seq.iter().enumerate() {
                    inverse[i] = v;
                }
                canonical.relabel(&inverse)
            })
            .collect();
        let mut matching = VertexGraph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if s.avail[u as usize] >> v & 1 == 1 {
                    matching.add_edge(u, v)?;
                }
            }
        }
        PowerSearchOutcome::Found {
            factors,
            sequences: s.seqs.clone(),
            matching,
        }
    } else if s.exceeded {
        PowerSearchOutcome::BudgetExceeded
    } else {
        PowerSearchOutcome::NotFound
    };
    Ok(PowerSearchReport {
        outcome,
        nodes: s.nodes,
    })
}

struct PowerSearch {
    n: u32,
    k: u32,
    copies: usize,
    anchored: bool,
    avail: Vec<u128>,
    seqs: Vec<Vec<u32>>,
    nodes: u64,
    budget: u64,
    exceeded: bool,
}

impl PowerSearch {
    fn copy_edges(&self, seq: &[u32]) -> Vec<(u32, u32)> {
        let n = self.n as usize;
        (0..n)
            .flat_map(|i| (1..=self.k as usize).map(move |d| (i, (i + d) % n)))
            .map(|(i, j)| edge(seq[i], seq[j]))
            .collect()
    }

    fn copy(&mut self, j: usize) -> bool {
        if j == self.copies {
            return self.avail.iter().all(|row| row.count_ones() == 1);
        }
        let mut seq = vec![0u32];
        let anchor = (j == 1 && self.anchored).then_some(self.k + 1);
        self.place(j, &mut seq, 1, anchor)
    }

    fn place(&mut self, j: usize, seq: &mut Vec<u32>, used: u128, anchor: Option<u32>) -> bool {
        let n = self.n as usize;
        let k = self.k as usize;
        let i = seq.len();
        if i == n {
            if anchor.is_none() && seq[1] > seq[n - 1] {
                return false;
            }
            let edges = self.copy_edges(seq);
            for &(u, v) in &edges {
                self.avail[u as usize] &= !(1 << v);
                self.avail[v as usize] &= !(1 << u);
            }
            self.seqs.push(seq.clone());
            if self.copy(j + 1) {
                return true;
            }
            self.seqs.pop();
            for &(u, v) in &edges {
                self.avail[u as usize] |= 1 << v;
                self.avail[v as usize] |= 1 << u;
            }
            return false;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exceeded = true;
            return false;
        }
        if let Some(a) = anchor {
            if i == k + 1 && used >> a & 1 == 0 {
                return false;
            }
        }
        let full = (1u128 << n) - 1;
        let mut cand = full & !used;
        for d in 1..=k.min(i) {
            cand &= self.avail[seq[i - d] as usize];
        }
        for d in 1..=k {
            if i + d >= n {
                cand &= self.avail[seq[i + d - n] as usize];
            }
        }
        while cand != 0 {
            let v = cand.trailing_zeros();
            cand &= cand - 1;
            seq.push(v);
            let ok = self.place(j, seq, used | 1 << v, anchor);
            seq.pop();
            if ok {
                return true;
            }
            if self.exceeded {
                return false;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_found(n: u32, k: u32, outcome: &PowerSearchOutcome) {
        let PowerSearchOutcome::Found {
            factors, matching, ..
        } = outcome
        else {
            panic!("expected a factorisation, got {outcome:?}");
        };
        let mut union = matching.clone();
        let mut count = matching.edge_count();
        for f in factors {
            assert_eq!(f.regular_degree(), Some(2 * k as usize));
            union = union.union(f);
            count += f.edge_count();
        }
        assert_eq!(matching.regular_degree(), Some(1));
        assert!(union.is_complete());
        assert_eq!(count as u32, n * (n - 1) / 2);
    }

    #[test]
    fn k10_minus_matching_into_squares() {
        let r = cycle_power_factorise(10, 2, 1_000_000).unwrap();
        check_found(10, 2, &r.outcome);
    }

    #[test]
    fn hamilton_cycles_of_k8_minus_matching() {
        let r = cycle_power_factorise(8, 1, 1_000_000).unwrap();
        check_found(8, 1, &r.outcome);
    }

    #[test]
    fn rejects_bad_degrees() {
        assert!(cycle_power_factorise(12, 4, 10).is_err());
        assert!(cycle_power_factorise(9, 1, 10).is_err());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let r = cycle_power_factorise(18, 2, 1_000).unwrap();
        assert_eq!(r.outcome, PowerSearchOutcome::BudgetExceeded);
    }

    #[test]
    fn anchoring_agrees_with_plain_search() {
        for (n, k) in [(10, 2), (14, 2), (12, 1), (18, 4), (26, 4)] {
            let a = cycle_power_search(n, k, 50_000_000, true).unwrap();
            let b = cycle_power_search(n, k, 50_000_000, false).unwrap();
            assert_ne!(b.outcome, PowerSearchOutcome::BudgetExceeded);
            assert_eq!(
                matches!(a.outcome, PowerSearchOutcome::Found { .. }),
                matches!(b.outcome, PowerSearchOutcome::Found { .. }),
                "n = {n}, k = {k}"
            );
        }
    }
}
