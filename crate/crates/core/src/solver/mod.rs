//! Routing problems to constructions, assembling certificates, and checking
//! them independently.

mod route;
mod verify;

use std::fmt;

use thiserror::Error;

use crate::circulant_factors::{
    BaseGraph, CirculantFactor, FactorError, Factorisation, Provenance,
};
use crate::graphs::{ConnectionSet, CycleType, GraphError, VertexGraph};
use crate::numtheory::is_prime;
use crate::two_factors::{TwoFactorError, DEFAULT_BUDGET};

pub use route::{solve, solve_multigraph, solve_op, solve_prescribed_with_hamilton};
pub use verify::{verify_certificate, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("invalid problem: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    TwoFactor(#[from] TwoFactorError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub type Result<T> = std::result::Result<T, SolverError>;

/// Cycle types of order at most 12 for which no solution exists.
pub const KNOWN_EXCEPTIONS: [&[u32]; 4] = [&[3, 3], &[4, 5], &[3, 3, 5], &[3, 3, 3, 3]];

pub fn is_known_exception(f: &CycleType) -> bool {
    KNOWN_EXCEPTIONS.iter().any(|e| f.lengths() == *e)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProblemSpec {
    /// 2-factorise `K_n`, `n` odd, into copies of `F`.
    OpOdd { n: u32, f: CycleType },
    /// 2-factorise `K_n - I`, `n` even, into copies of `F`.
    OpEven { n: u32, f: CycleType },
    /// 2-factorise `lambda K_p` into copies of `F`.
    Multigraph { p: u32, lambda: u32, f: CycleType },
    /// 2-factorise `K_2p - I` into one copy of each listed type and
    /// `(p-1)/2` Hamilton cycles.
    Prescribed { p: u32, types: Vec<CycleType> },
    /// Factorise a base graph into circulants: `count` factors isomorphic to
    /// `Cay(Z_n; S)` for each listed `(S, count)`.
    CirculantFactorisation {
        base: BaseGraph,
        targets: Vec<(ConnectionSet, usize)>,
    },
}

impl ProblemSpec {
    /// The Oberwolfach problem for `F`: odd or even according to its order.
    pub fn op(f: CycleType) -> Self {
        let n = f.order();
        if n % 2 == 1 {
            ProblemSpec::OpOdd { n, f }
        } else {
            ProblemSpec::OpEven { n, f }
        }
    }

    pub fn multigraph(lambda: u32, p: u32, f: CycleType) -> Result<Self> {
        let spec = ProblemSpec::Multigraph { p, lambda, f };
        spec.validate()?;
        Ok(spec)
    }

    pub fn prescribed(p: u32, types: Vec<CycleType>) -> Result<Self> {
        let spec = ProblemSpec::Prescribed { p, types };
        spec.validate()?;
        Ok(spec)
    }

    pub fn order(&self) -> u32 {
        match self {
            ProblemSpec::OpOdd { n, .. } | ProblemSpec::OpEven { n, .. } => *n,
            ProblemSpec::Multigraph { p, .. } => *p,
            ProblemSpec::Prescribed { p, .. } => 2 * p,
            ProblemSpec::CirculantFactorisation { base, .. } => base.order(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ProblemSpec::OpOdd { .. } => "op-odd",
            ProblemSpec::OpEven { .. } => "op-even",
            ProblemSpec::Multigraph { .. } => "multigraph",
            ProblemSpec::Prescribed { .. } => "prescribed",
            ProblemSpec::CirculantFactorisation { .. } => "circulant-factorisation",
        }
    }

    /// Checks the structural invariants of each problem kind.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(SolverError::InvalidSpec(msg));
        match self {
            ProblemSpec::OpOdd { n, f } => {
                if n % 2 == 0 || *n != f.order() {
                    return bad(format!(
                        "op-odd needs odd n = order(F), got n = {n}, F = {f}"
                    ));
                }
            }
            ProblemSpec::OpEven { n, f } => {
                if n % 2 == 1 || *n != f.order() {
                    return bad(format!(
                        "op-even needs even n = order(F), got n = {n}, F = {f}"
                    ));
                }
            }
            ProblemSpec::Multigraph { p, lambda, f } => {
                if *p < 3 || !is_prime(*p as u64) {
                    return bad(format!("multigraph order {p} is not an odd prime"));
                }
                if *lambda == 0 {
                    return bad("multiplicity must be positive".into());
                }
                if f.order() != *p {
                    return bad(format!("F = {f} does not have order {p}"));
                }
            }
            ProblemSpec::Prescribed { p, types } => {
                if *p < 3 || !is_prime(*p as u64) {
                    return bad(format!("{p} is not an odd prime"));
                }
                if types.len() as u32 != (p - 1) / 2 {
                    return bad(format!(
                        "expected {} prescribed types, got {}",
                        (p - 1) / 2,
                        types.len()
                    ));
                }
                if let Some(t) = types.iter().find(|t| t.order() != 2 * p) {
                    return bad(format!("type {t} does not have order {}", 2 * p));
                }
            }
            ProblemSpec::CirculantFactorisation { base, targets } => {
                if targets.iter().any(|(s, _)| s.n() != base.order()) {
                    return bad("target circulant order differs from the base".into());
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemSpec::OpOdd { f, .. } | ProblemSpec::OpEven { f, .. } => write!(out, "OP({f})"),
            ProblemSpec::Multigraph { p, lambda, f } => write!(out, "{lambda}K_{p} into {f}"),
            ProblemSpec::Prescribed { p, types } => {
                let list: Vec<String> = types.iter().map(ToString::to_string).collect();
                write!(
                    out,
                    "K_{} - I into {} plus Hamilton cycles",
                    2 * p,
                    list.join(" ")
                )
            }
            ProblemSpec::CirculantFactorisation { base, targets } => {
                let list: Vec<String> = targets.iter().map(|(s, c)| format!("{c} x {s}")).collect();
                write!(out, "{base:?} into {}", list.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Solved,
    NoSolution(String),
    Unsupported(String),
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Solved => "solved",
            Status::NoSolution(_) => "no-solution",
            Status::Unsupported(_) => "unsupported",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexEncoding {
    Cyclic,
    /// `r_k` is vertex `k`, `s_k` is vertex `p + k`.
    Dihedral,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CirculantStage {
    pub base: BaseGraph,
    pub encoding: VertexEncoding,
    pub factors: Vec<CirculantFactor>,
    pub removed_one_factor: Option<VertexGraph>,
}

impl CirculantStage {
    pub fn from_factorisation(f: &Factorisation, encoding: VertexEncoding) -> Self {
        CirculantStage {
            base: f.base,
            encoding,
            factors: f.factors.clone(),
            removed_one_factor: f.removed_one_factor.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    TypeF,
    /// Realises the listed type with this index.
    Prescribed(usize),
    Hamilton,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Construction,
    Search,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoFactor {
    pub graph: VertexGraph,
    pub role: Role,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoFactorStage {
    /// `(stage, factor)` of the circulant factor this stage splits; `None`
    /// when the 2-factors cover the base graph directly.
    pub parent: Option<(usize, usize)>,
    pub source: Source,
    pub factors: Vec<TwoFactor>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stage {
    Circulant(CirculantStage),
    TwoFactors(TwoFactorStage),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub spec: ProblemSpec,
    pub status: Status,
    pub stages: Vec<Stage>,
    pub provenance: Vec<Provenance>,
}

impl Certificate {
    pub fn unsupported(spec: ProblemSpec, reason: impl Into<String>) -> Self {
        Certificate {
            spec,
            status: Status::Unsupported(reason.into()),
            stages: Vec::new(),
            provenance: Vec::new(),
        }
    }

    pub fn no_solution(spec: ProblemSpec, reason: impl Into<String>) -> Self {
        Certificate {
            spec,
            status: Status::NoSolution(reason.into()),
            stages: Vec::new(),
            provenance: Vec::new(),
        }
    }

    /// All 2-factors of the solution, in stage order.
    pub fn two_factors(&self) -> Vec<&TwoFactor> {
        self.stages
            .iter()
            .filter_map(|s| match s {
                Stage::TwoFactors(t) => Some(t.factors.iter()),
                Stage::Circulant(_) => None,
            })
            .flatten()
            .collect()
    }
}

/// Wraps a circulant factorisation as a certificate for `spec`, which should
/// be a [`ProblemSpec::CirculantFactorisation`].
pub fn lift_factorisation(spec: ProblemSpec, f: &Factorisation) -> Certificate {
    let encoding = match f.base {
        BaseGraph::CompleteMinusOneFactor { .. } => VertexEncoding::Dihedral,
        _ => VertexEncoding::Cyclic,
    };
    Certificate {
        spec,
        status: Status::Solved,
        stages: vec![Stage::Circulant(CirculantStage::from_factorisation(
            f, encoding,
        ))],
        provenance: vec![f.provenance.clone()],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    /// Node limit for each backtracking search.
    pub budget: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            budget: DEFAULT_BUDGET,
        }
    }
}
