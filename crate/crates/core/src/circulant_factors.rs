//! Factorisations of `K_p`, `K_2p - I` and `sK_p` into isomorphic circulant
//! graphs.
//!
//! Every factor carries an isomorphism witness to its target circulant: a
//! unit multiplier for prime order (`factor = Cay(Z_p; alpha * S)`) or an
//! explicit vertex map for the dihedral constructions.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graphs::{
    self, circulant, dihedral_cayley, dihedral_iso_pm12, dihedral_iso_pm1234,
    pm1234_dihedral_connection, ConnectionSet, DihedralElement, GraphError, VertexGraph,
};
use crate::numtheory::{
    self, classify_prime, coset_reps, inv_mod, is_prime, mul_mod, multiplicative_order,
    order_in_quotient, power_class, quartic_run_witness, subgroup_generated, FieldContext,
    NumTheoryError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("connection set representatives do not lie in distinct cosets of G/H")]
    CosetConditionFailed,
    #[error("2bs = {two_bs} does not divide p - 1 = {p_minus_1}")]
    DivisibilityFailed { two_bs: u64, p_minus_1: u64 },
    #[error("order of {k} modulo {p} is {order}, not divisible by 4")]
    OrderConditionFailed { p: u64, k: u64, order: u64 },
    #[error("{p} is not in the required residue class: {expected}")]
    ClassMismatch { p: u64, expected: &'static str },
    #[error("run length d = {d} differs from 3*{alpha} + 4*{beta}")]
    ArithmeticMismatch { d: u64, alpha: u64, beta: u64 },
    #[error("no such factorisation exists for p = {p}")]
    NoSolution { p: u64 },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error(transparent)]
    NumTheory(#[from] NumTheoryError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub type Result<T> = std::result::Result<T, FactorError>;

/// The graph being decomposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseGraph {
    Complete {
        n: u32,
    },
    CompleteMinusOneFactor {
        n: u32,
    },
    /// `lambda K_n`.
    Multigraph {
        n: u32,
        lambda: u32,
    },
}

impl BaseGraph {
    pub fn order(&self) -> u32 {
        match *self {
            BaseGraph::Complete { n }
            | BaseGraph::CompleteMinusOneFactor { n }
            | BaseGraph::Multigraph { n, .. } => n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoWitness {
    /// The factor equals `Cay(Z_n; alpha * target)`.
    Multiplier(u64),
    /// `factor.relabel(map) == Cay(Z_n; target)`.
    VertexMap(Vec<u32>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CirculantFactor {
    pub graph: VertexGraph,
    pub target: ConnectionSet,
    pub witness: IsoWitness,
}

impl CirculantFactor {
    /// Carries a subgraph of `Cay(Z_n; target)` onto the matching subgraph of
    /// this factor.
    pub fn pull_back(&self, sub: &VertexGraph) -> VertexGraph {
        let n = self.graph.n();
        let map: Vec<u32> = match &self.witness {
            IsoWitness::Multiplier(alpha) => (0..n)
                .map(|v| mul_mod(v as u64, *alpha, n as u64) as u32)
                .collect(),
            IsoWitness::VertexMap(forward) => {
                let mut inverse = vec![0u32; forward.len()];
                for (v, &img) in forward.iter().enumerate() {
                    inverse[img as usize] = v as u32;
                }
                inverse
            }
        };
        sub.relabel(&map)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Provenance {
    pub construction: String,
    pub parameters: BTreeMap<String, String>,
}

impl Provenance {
    pub fn new(construction: &str) -> Self {
        Provenance {
            construction: construction.to_string(),
            parameters: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorisation {
    pub base: BaseGraph,
    pub factors: Vec<CirculantFactor>,
    pub removed_one_factor: Option<VertexGraph>,
    pub provenance: Provenance,
}

fn check_prime(p: u32) -> Result<()> {
    if p < 3 || !is_prime(p as u64) {
        return Err(NumTheoryError::NotOddPrime(p as u64).into());
    }
    Ok(())
}

fn join(xs: &[u32]) -> String {
    xs.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

/// Partition `Z_p^*` into translates `x S` with `x` ranging over the products
/// of `A = {omega^(k b s)}` and coset representatives of `G = (Z_p^*)^b`.
///
/// Requires `2bs | p - 1` and that the positive representatives of `S` lie in
/// the `s` distinct cosets of `G / H` with `H = (Z_p^*)^(bs)`.
pub fn coset_partition_factorise(p: u32, s: &ConnectionSet, b: u64) -> Result<Factorisation> {
    check_prime(p)?;
    if s.n() != p {
        return Err(FactorError::PreconditionFailed(format!(
            "connection set has order {}, expected {p}",
            s.n()
        )));
    }
    if b == 0 {
        return Err(FactorError::PreconditionFailed("b must be positive".into()));
    }
    let reps = s.half();
    let s_count = reps.len() as u64;
    let p64 = p as u64;
    let two_bs = 2 * b * s_count;
    if !(p64 - 1).is_multiple_of(two_bs) {
        return Err(FactorError::DivisibilityFailed {
            two_bs,
            p_minus_1: p64 - 1,
        });
    }
    let a = (p64 - 1) / two_bs;
    let g = power_class(p64, b)?;
    let h = power_class(p64, b * s_count)?;
    for (idx, &d) in reps.iter().enumerate() {
        if !g.contains(&(d as u64)) {
            return Err(FactorError::CosetConditionFailed);
        }
        for &e in &reps[..idx] {
            if h.contains(&mul_mod(d as u64, inv_mod(e as u64, p64), p64)) {
                return Err(FactorError::CosetConditionFailed);
            }
        }
    }
    let ctx = FieldContext::new(p64)?;
    let g_desc = subgroup_generated(p64, &[ctx.omega_pow(b) as i64])?;
    let b_reps = coset_reps(p64, &g_desc)?;
    let mut factors = Vec::with_capacity((a * b) as usize);
    for y in &b_reps {
        for k in 0..a {
            let x = mul_mod(ctx.omega_pow(k * b * s_count), *y, p64);
            factors.push(CirculantFactor {
                graph: circulant(p, &s.scaled(x))?,
                target: s.clone(),
                witness: IsoWitness::Multiplier(x),
            });
        }
    }
    Ok(Factorisation {
        base: BaseGraph::Complete { n: p },
        factors,
        removed_one_factor: None,
        provenance: Provenance::new("coset_partition")
            .with("p", p)
            .with("S", join(&reps))
            .with("a", a)
            .with("b", b)
            .with("omega", ctx.omega),
    })
}

/// `K_p` into `Cay(Z_p; ±{1, k})` when `4 | ord(k)`.
pub fn factorise_pm_1k(p: u32, k: u32) -> Result<Factorisation> {
    check_prime(p)?;
    let p64 = p as u64;
    if p % 4 != 1 {
        return Err(FactorError::ClassMismatch {
            p: p64,
            expected: "p = 1 (mod 4)",
        });
    }
    let k64 = k as u64 % p64;
    if k64 == 0 {
        return Err(FactorError::PreconditionFailed("k must be a unit".into()));
    }
    let order = multiplicative_order(p64, k64);
    if !order.is_multiple_of(4) {
        return Err(FactorError::OrderConditionFailed {
            p: p64,
            k: k64,
            order,
        });
    }
    let s = ConnectionSet::symmetric(p, &[1, k64 as u32])?;
    let mut f = coset_partition_factorise(p, &s, (p64 - 1) / order)?;
    f.provenance = Provenance::new("pm_1k")
        .with("p", p)
        .with("k", k64)
        .with("order_k", order)
        .with("b", (p64 - 1) / order);
    Ok(f)
}

/// `K_p` into `Cay(Z_p; ±{1,2,3})` when 2, 3 are non-cubes and 6 is a cube.
pub fn factorise_pm_123(p: u32) -> Result<Factorisation> {
    check_prime(p)?;
    if !classify_prime(p as u64)?.is_pm123_class() {
        return Err(FactorError::ClassMismatch {
            p: p as u64,
            expected: "2, 3 non-cubes and 6 a cube",
        });
    }
    let mut f = coset_partition_factorise(p, &ConnectionSet::symmetric(p, &[1, 2, 3])?, 1)?;
    f.provenance = Provenance::new("pm_123_cubic").with("p", p);
    Ok(f)
}

/// `K_p` into `Cay(Z_p; ±{1,3,4})` when 2, 3 and 6 are all non-cubes.
pub fn factorise_pm_134(p: u32) -> Result<Factorisation> {
    check_prime(p)?;
    if !classify_prime(p as u64)?.is_pm134_class() {
        return Err(FactorError::ClassMismatch {
            p: p as u64,
            expected: "2, 3 and 6 non-cubes",
        });
    }
    let mut f = coset_partition_factorise(p, &ConnectionSet::symmetric(p, &[1, 3, 4])?, 1)?;
    f.provenance = Provenance::new("pm_134_cubic").with("p", p);
    Ok(f)
}

/// Split a run length `d` as `3 alpha + 4 beta` using the fewest fours:
/// `beta = 0, 1, 2` for `d = 0, 1, 2 (mod 3)`. `None` for `d` in `{1, 2, 5}`.
pub fn mixed_run_counts(d: u64) -> Option<(u64, u64)> {
    let beta = match d % 3 {
        0 => 0,
        1 => 1,
        _ => 2,
    };
    (d >= 4 * beta).then(|| ((d - 4 * beta) / 3, beta))
}

/// `K_p` into `alpha (p-1)/(2d)` copies of `Cay(Z_p; ±{1,2,3})` and
/// `beta (p-1)/(2d)` copies of `Cay(Z_p; ±{1,2,3,4})`, where `d` is the order
/// of `2H` in `Z_p^*/H` and `H = <-1, 6>`.
///
/// The cosets `H, 2H, .., 2^(d-1) H` are tiled by `alpha` runs of three
/// followed by `beta` runs of four. A run starting at exponent `e` is centred
/// on `H_i = 2^(e+1) H`, and `3 H_i = 2^e H` because `6` lies in `H`.
pub fn mixed_123_1234_factorise(p: u32, alpha: u64, beta: u64) -> Result<Factorisation> {
    check_prime(p)?;
    if p < 7 {
        return Err(FactorError::PreconditionFailed(format!(
            "p = {p} too small for ±{{1,2,3}}"
        )));
    }
    let p64 = p as u64;
    let h = subgroup_generated(p64, &[-1, 6])?;
    let d = order_in_quotient(p64, 2, &h)?;
    if d != 3 * alpha + 4 * beta {
        return Err(FactorError::ArithmeticMismatch { d, alpha, beta });
    }
    if beta > 0 && p < 11 {
        return Err(FactorError::PreconditionFailed(format!(
            "p = {p} too small for ±{{1,2,3,4}}"
        )));
    }
    let s3 = ConnectionSet::symmetric(p, &[1, 2, 3])?;
    let s4 = ConnectionSet::symmetric(p, &[1, 2, 3, 4])?;
    let half = h.half_representatives();

    // Multipliers x such that ±{x, 2x, 3x(, 4x)} tile G = <-1, 6, 2>.
    let mut runs: Vec<(u64, bool)> = Vec::new();
    let mut exponent = 0u64;
    for run in 0..alpha + beta {
        let quad = run >= alpha;
        let centre = numtheory::pow_mod(2, exponent + 1, p64);
        for &x in &half {
            runs.push((mul_mod(centre, x, p64), quad));
        }
        exponent += if quad { 4 } else { 3 };
    }

    let g = subgroup_generated(p64, &[-1, 6, 2])?;
    let reps = coset_reps(p64, &g)?;
    let mut factors = Vec::with_capacity(reps.len() * runs.len());
    for &gi in &reps {
        for &(x, quad) in &runs {
            let m = mul_mod(gi, x, p64);
            let target = if quad { &s4 } else { &s3 };
            factors.push(CirculantFactor {
                graph: circulant(p, &target.scaled(m))?,
                target: target.clone(),
                witness: IsoWitness::Multiplier(m),
            });
        }
    }
    Ok(Factorisation {
        base: BaseGraph::Complete { n: p },
        factors,
        removed_one_factor: None,
        provenance: Provenance::new("mixed_123_1234")
            .with("p", p)
            .with("d", d)
            .with("alpha", alpha)
            .with("beta", beta)
            .with("H_order", h.order()),
    })
}

/// `I = Cay(D_2p; {s_0})`.
fn dihedral_one_factor(p: u32) -> Result<VertexGraph> {
    Ok(dihedral_cayley(p, &[DihedralElement::s(p, 0)])?)
}

/// `K_2p - I` into the `(p-1)/2` graphs `X_i = Cay(D_2p; {r_±2i, s_i, s_-i})`,
/// each isomorphic to `Cay(Z_2p; ±{1,2})`.
pub fn dihedral_pm_12_factorise(p: u32) -> Result<Factorisation> {
    check_prime(p)?;
    let target = ConnectionSet::symmetric(2 * p, &[1, 2])?;
    let mut factors = Vec::with_capacity((p as usize - 1) / 2);
    for i in 1..=(p as i64 - 1) / 2 {
        let conn = [
            DihedralElement::r(p, 2 * i),
            DihedralElement::r(p, -2 * i),
            DihedralElement::s(p, i),
            DihedralElement::s(p, -i),
        ];
        factors.push(CirculantFactor {
            graph: dihedral_cayley(p, &conn)?,
            target: target.clone(),
            witness: IsoWitness::VertexMap(dihedral_iso_pm12(p, 2 * i, -i)?),
        });
    }
    Ok(Factorisation {
        base: BaseGraph::CompleteMinusOneFactor { n: 2 * p },
        factors,
        removed_one_factor: Some(dihedral_one_factor(p)?),
        provenance: Provenance::new("dihedral_pm_12").with("p", p),
    })
}

/// `K_2p - I` into `(p-1)/4` copies of `Cay(Z_2p; ±{1,2,3,4})` for
/// `p = 5 (mod 8)`, `p != 13`.
pub fn dihedral_pm_1234_factorise(p: u32) -> Result<Factorisation> {
    check_prime(p)?;
    let p64 = p as u64;
    if p % 8 != 5 {
        return Err(FactorError::PreconditionFailed(format!(
            "p = {p} is not 5 (mod 8)"
        )));
    }
    if p == 13 {
        return Err(FactorError::NoSolution { p: 13 });
    }
    let x = quartic_run_witness(p64)?.ok_or(FactorError::NoSolution { p: p64 })?;
    let quartics = power_class(p64, 4)?;
    let target = ConnectionSet::symmetric(2 * p, &[1, 2, 3, 4])?;
    let mut factors = Vec::with_capacity(quartics.len());
    for &h in &quartics {
        let j = mul_mod(h, x, p64) as i64;
        factors.push(CirculantFactor {
            graph: dihedral_cayley(p, &pm1234_dihedral_connection(p, h as i64, j))?,
            target: target.clone(),
            witness: IsoWitness::VertexMap(dihedral_iso_pm1234(p, h as i64, j)?),
        });
    }
    Ok(Factorisation {
        base: BaseGraph::CompleteMinusOneFactor { n: 2 * p },
        factors,
        removed_one_factor: Some(dihedral_one_factor(p)?),
        provenance: Provenance::new("dihedral_pm_1234")
            .with("p", p)
            .with("x", x),
    })
}

/// `sK_p` into the `(p-1)/2` circulants `Cay(Z_p; omega^i S)`.
pub fn multiplier_orbit_factorise(p: u32, s: &ConnectionSet) -> Result<Factorisation> {
    check_prime(p)?;
    if s.n() != p {
        return Err(FactorError::PreconditionFailed(format!(
            "connection set has order {}, expected {p}",
            s.n()
        )));
    }
    let ctx = FieldContext::new(p as u64)?;
    let factors = (0..(p as u64 - 1) / 2)
        .map(|i| {
            let x = ctx.omega_pow(i);
            Ok(CirculantFactor {
                graph: circulant(p, &s.scaled(x))?,
                target: s.clone(),
                witness: IsoWitness::Multiplier(x),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Factorisation {
        base: BaseGraph::Multigraph {
            n: p,
            lambda: (s.len() / 2) as u32,
        },
        factors,
        removed_one_factor: None,
        provenance: Provenance::new("multiplier_orbit")
            .with("p", p)
            .with("S", join(&s.half()))
            .with("omega", ctx.omega),
    })
}

/// Canonical copy of the target circulant of a factor.
pub fn target_graph(factor: &CirculantFactor) -> graphs::Result<VertexGraph> {
    circulant(factor.target.n(), &factor.target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    /// Edge multiplicities of the union of all factors plus `I`.
    fn multiplicities(f: &Factorisation) -> HashMap<(u32, u32), u32> {
        let mut counts = HashMap::new();
        let extra = f.removed_one_factor.iter();
        for g in f.factors.iter().map(|c| &c.graph).chain(extra) {
            for &e in g.edges() {
                *counts.entry(e).or_insert(0) += 1;
            }
        }
        counts
    }

    fn assert_covers(f: &Factorisation, lambda: u32) {
        let n = f.base.order();
        let counts = multiplicities(f);
        assert_eq!(counts.len() as u32, n * (n - 1) / 2);
        assert!(counts.values().all(|&c| c == lambda));
    }

    #[test]
    fn hamilton_decomposition() {
        let f =
            coset_partition_factorise(11, &ConnectionSet::symmetric(11, &[1]).unwrap(), 1).unwrap();
        assert_eq!(f.factors.len(), 5);
        assert_covers(&f, 1);
    }

    #[test]
    fn k7_single_factor() {
        let f = coset_partition_factorise(7, &ConnectionSet::symmetric(7, &[1, 2, 3]).unwrap(), 1)
            .unwrap();
        assert_eq!(f.factors.len(), 1);
        assert!(f.factors[0].graph.is_complete());
    }

    #[test]
    fn p919_with_b3() {
        let s = ConnectionSet::symmetric(919, &[1, 2, 3]).unwrap();
        let f = coset_partition_factorise(919, &s, 3).unwrap();
        assert_eq!(f.factors.len(), 153);
        assert_covers(&f, 1);
        // 1, 2 and 3 are all cubes, so b = 1 cannot work
        assert_eq!(
            coset_partition_factorise(919, &s, 1),
            Err(FactorError::CosetConditionFailed)
        );
        assert!(matches!(
            coset_partition_factorise(919, &s, 5),
            Err(FactorError::DivisibilityFailed { .. })
        ));
    }

    #[test]
    fn pm_1k_examples() {
        assert_eq!(factorise_pm_1k(5, 2).unwrap().factors.len(), 1);
        let f = factorise_pm_1k(13, 5).unwrap();
        assert_eq!(f.factors.len(), 3);
        assert_covers(&f, 1);
        assert_eq!(
            factorise_pm_1k(13, 3),
            Err(FactorError::OrderConditionFailed {
                p: 13,
                k: 3,
                order: 3
            })
        );
    }

    #[test]
    fn cubic_class_examples() {
        let f = factorise_pm_123(37).unwrap();
        assert_eq!(f.factors.len(), 6);
        assert_covers(&f, 1);
        let g = factorise_pm_134(13).unwrap();
        assert_eq!(g.factors.len(), 2);
        assert_covers(&g, 1);
        assert!(matches!(
            factorise_pm_123(13),
            Err(FactorError::ClassMismatch { .. })
        ));
    }

    #[test]
    fn mixed_examples() {
        let f = mixed_123_1234_factorise(101, 2, 1).unwrap();
        let threes = f.factors.iter().filter(|c| c.target.len() == 6).count();
        let fours = f.factors.iter().filter(|c| c.target.len() == 8).count();
        assert_eq!((threes, fours), (10, 5));
        assert_covers(&f, 1);
        assert_eq!(
            mixed_123_1234_factorise(101, 0, 1),
            Err(FactorError::ArithmeticMismatch {
                d: 10,
                alpha: 0,
                beta: 1
            })
        );
        let k7 = mixed_123_1234_factorise(7, 1, 0).unwrap();
        assert_eq!(k7.factors.len(), 1);
        assert!(k7.factors[0].graph.is_complete());
    }

    #[test]
    fn split_helper() {
        assert_eq!(mixed_run_counts(10), Some((2, 1)));
        assert_eq!(mixed_run_counts(3), Some((1, 0)));
        assert_eq!(mixed_run_counts(8), Some((0, 2)));
        for d in [1, 2, 5] {
            assert_eq!(mixed_run_counts(d), None);
        }
        for d in 6..200 {
            let (a, b) = mixed_run_counts(d).unwrap();
            assert_eq!(3 * a + 4 * b, d);
        }
    }

    #[test]
    fn dihedral_pm_12() {
        let f = dihedral_pm_12_factorise(3).unwrap();
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].graph.regular_degree(), Some(4));
        assert_covers(&f, 1);
        assert_eq!(dihedral_pm_12_factorise(5).unwrap().factors.len(), 2);
        let f11 = dihedral_pm_12_factorise(11).unwrap();
        assert_eq!(f11.factors.len(), 5);
        for c in &f11.factors {
            let IsoWitness::VertexMap(map) = &c.witness else {
                panic!("expected a vertex map")
            };
            assert_eq!(c.graph.relabel(map), target_graph(c).unwrap());
        }
    }

    #[test]
    fn dihedral_pm_1234() {
        assert_eq!(
            dihedral_pm_1234_factorise(13),
            Err(FactorError::NoSolution { p: 13 })
        );
        assert!(matches!(
            dihedral_pm_1234_factorise(17),
            Err(FactorError::PreconditionFailed(_))
        ));
        let f5 = dihedral_pm_1234_factorise(5).unwrap();
        assert_eq!(f5.factors.len(), 1);
        assert_eq!(f5.provenance.parameters["x"], "1");
        assert_covers(&f5, 1);
        let f29 = dihedral_pm_1234_factorise(29).unwrap();
        assert_eq!(f29.factors.len(), 7);
        assert_covers(&f29, 1);
    }

    #[test]
    fn multiplier_orbits() {
        let f =
            multiplier_orbit_factorise(5, &ConnectionSet::symmetric(5, &[1, 2]).unwrap()).unwrap();
        assert_eq!(f.factors.len(), 2);
        assert_covers(&f, 2);
        let g = multiplier_orbit_factorise(7, &ConnectionSet::symmetric(7, &[1, 2, 3]).unwrap())
            .unwrap();
        assert_eq!(g.factors.len(), 3);
        assert_covers(&g, 3);
        let h =
            multiplier_orbit_factorise(13, &ConnectionSet::symmetric(13, &[1]).unwrap()).unwrap();
        assert_covers(&h, 1);
    }

    #[test]
    fn pull_back_inverts_witness() {
        let f = dihedral_pm_1234_factorise(29).unwrap();
        for c in &f.factors {
            let canon = target_graph(c).unwrap();
            assert_eq!(c.pull_back(&canon), c.graph);
        }
        let g = factorise_pm_123(37).unwrap();
        for c in &g.factors {
            assert_eq!(c.pull_back(&target_graph(c).unwrap()), c.graph);
        }
    }
}
