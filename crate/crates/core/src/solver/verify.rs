//! Certificate checking. Everything here recomputes what it needs from the
//! raw edge lists, without the constructions or the graph helpers that
//! produced the certificate.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{is_known_exception, Certificate, ProblemSpec, Role, Stage, Status};
use crate::circulant_factors::{BaseGraph, CirculantFactor, IsoWitness};
use crate::graphs::{ConnectionSet, VertexGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid { check: &'static str, detail: String },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

type Check = std::result::Result<(), (&'static str, String)>;

fn fail(check: &'static str, detail: impl Into<String>) -> Check {
    Err((check, detail.into()))
}

pub fn verify_certificate(cert: &Certificate) -> Verdict {
    match check_all(cert) {
        Ok(()) => Verdict::Valid,
        Err((check, detail)) => Verdict::Invalid { check, detail },
    }
}

fn check_all(cert: &Certificate) -> Check {
    if let Err(e) = cert.spec.validate() {
        return fail("spec", e.to_string());
    }
    match &cert.status {
        Status::Unsupported(_) => Ok(()),
        Status::NoSolution(_) => check_no_solution(&cert.spec),
        Status::Solved => match &cert.spec {
            ProblemSpec::CirculantFactorisation { base, targets } => {
                check_circulant_solution(cert, *base, targets)
            }
            _ => check_two_factor_solution(cert),
        },
    }
}

fn check_no_solution(spec: &ProblemSpec) -> Check {
    let recognised = match spec {
        ProblemSpec::OpOdd { f, .. } | ProblemSpec::OpEven { f, .. } => is_known_exception(f),
        ProblemSpec::CirculantFactorisation { base, targets } => {
            *base == BaseGraph::CompleteMinusOneFactor { n: 26 }
                && targets.len() == 1
                && targets[0]
                    .0
                    .elements()
                    .iter()
                    .copied()
                    .eq([1, 2, 3, 4, 22, 23, 24, 25])
        }
        _ => false,
    };
    if recognised {
        Ok(())
    } else {
        fail(
            "status",
            format!("{spec} is not a recognised non-existence case"),
        )
    }
}

/// Edges `{x, x + s}` of `Cay(Z_n; S)`.
fn cayley_edges(n: u32, elements: impl IntoIterator<Item = u64>) -> BTreeSet<(u32, u32)> {
    let n64 = n as u64;
    let mut out = BTreeSet::new();
    for s in elements {
        for x in 0..n64 {
            let y = (x + s) % n64;
            if x != y {
                out.insert((x.min(y) as u32, x.max(y) as u32));
            }
        }
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Sorted cycle lengths of a spanning 2-regular graph, or `None`.
fn cycle_lengths(g: &VertexGraph) -> Option<Vec<u32>> {
    let n = g.n() as usize;
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in g.edges() {
        nbrs[u as usize].push(v as usize);
        nbrs[v as usize].push(u as usize);
    }
    if nbrs.iter().any(|a| a.len() != 2) {
        return None;
    }
    let mut seen = vec![false; n];
    let mut lengths = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let (mut prev, mut cur, mut len) = (usize::MAX, start, 0u32);
        loop {
            seen[cur] = true;
            len += 1;
            let next = if nbrs[cur][0] != prev {
                nbrs[cur][0]
            } else {
                nbrs[cur][1]
            };
            prev = cur;
            cur = next;
            if cur == start {
                break;
            }
        }
        lengths.push(len);
    }
    lengths.sort_unstable();
    Some(lengths)
}

fn is_perfect_matching(g: &VertexGraph) -> bool {
    let mut deg = vec![0u32; g.n() as usize];
    for &(u, v) in g.edges() {
        deg[u as usize] += 1;
        deg[v as usize] += 1;
    }
    deg.iter().all(|&d| d == 1)
}

/// Every pair's required multiplicity in the base graph.
fn base_multiplicity(
    base: BaseGraph,
    removed: Option<&VertexGraph>,
) -> Box<dyn Fn(u32, u32) -> u32 + '_> {
    match base {
        BaseGraph::Complete { .. } => Box::new(|_, _| 1),
        BaseGraph::Multigraph { lambda, .. } => Box::new(move |_, _| lambda),
        BaseGraph::CompleteMinusOneFactor { .. } => {
            Box::new(move |u, v| u32::from(!removed.is_some_and(|i| i.has_edge(u, v))))
        }
    }
}

fn check_cover<'a>(
    base: BaseGraph,
    removed: Option<&VertexGraph>,
    parts: impl IntoIterator<Item = &'a VertexGraph>,
    check: &'static str,
) -> Check {
    let n = base.order();
    let mut counts: HashMap<(u32, u32), u32> = HashMap::new();
    for g in parts {
        if g.n() != n {
            return fail(check, format!("part on {} vertices, expected {n}", g.n()));
        }
        for &e in g.edges() {
            *counts.entry(e).or_default() += 1;
        }
    }
    if matches!(base, BaseGraph::CompleteMinusOneFactor { .. }) {
        match removed {
            Some(i) if i.n() == n && is_perfect_matching(i) => {}
            _ => {
                return fail(
                    check,
                    "the removed 1-factor is missing or not a perfect matching",
                )
            }
        }
    }
    let want = base_multiplicity(base, removed);
    for u in 0..n {
        for v in u + 1..n {
            let got = counts.get(&(u, v)).copied().unwrap_or(0);
            if got != want(u, v) {
                return fail(
                    check,
                    format!(
                        "edge {{{u},{v}}} covered {got} times, expected {}",
                        want(u, v)
                    ),
                );
            }
        }
    }
    Ok(())
}

fn check_witness(n: u32, idx: (usize, usize), c: &CirculantFactor) -> Check {
    let label = format!("factor {} of stage {}", idx.1, idx.0);
    if c.graph.n() != n || c.target.n() != n {
        return fail("witness", format!("{label} has the wrong order"));
    }
    let target = c.target.elements().iter().map(|&s| s as u64);
    match &c.witness {
        IsoWitness::Multiplier(alpha) => {
            if gcd(*alpha % n as u64, n as u64) != 1 {
                return fail(
                    "witness",
                    format!("{label}: multiplier {alpha} is not a unit mod {n}"),
                );
            }
            let scaled = target.map(|s| s * (alpha % n as u64) % n as u64);
            if c.graph.edges() != &cayley_edges(n, scaled) {
                return fail(
                    "witness",
                    format!("{label} is not the circulant of {alpha} times its target"),
                );
            }
        }
        IsoWitness::VertexMap(map) => {
            let image: BTreeSet<u32> = map.iter().copied().collect();
            if map.len() != n as usize || image.len() != n as usize || image.iter().any(|&v| v >= n)
            {
                return fail(
                    "witness",
                    format!("{label}: vertex map is not a permutation"),
                );
            }
            let mapped: BTreeSet<(u32, u32)> = c
                .graph
                .edges()
                .iter()
                .map(|&(u, v)| {
                    let (a, b) = (map[u as usize], map[v as usize]);
                    (a.min(b), a.max(b))
                })
                .collect();
            if mapped != cayley_edges(n, target) {
                return fail(
                    "witness",
                    format!("{label}: vertex map does not carry it onto its target"),
                );
            }
        }
    }
    Ok(())
}

/// Witnesses and cover of every circulant stage.
fn check_circulant_stages(cert: &Certificate) -> Check {
    for (s, stage) in cert.stages.iter().enumerate() {
        let Stage::Circulant(c) = stage else { continue };
        let n = c.base.order();
        if n != cert.spec.order() {
            return fail("stage-cover", format!("stage {s} has order {n}"));
        }
        for (i, f) in c.factors.iter().enumerate() {
            check_witness(n, (s, i), f)?;
        }
        let graphs = c.factors.iter().map(|f| &f.graph);
        let removed = c.removed_one_factor.as_ref();
        let parts: Vec<&VertexGraph> = match (c.base, removed) {
            (BaseGraph::CompleteMinusOneFactor { .. }, Some(i)) => graphs.chain([i]).collect(),
            (BaseGraph::CompleteMinusOneFactor { .. }, None) => {
                return fail(
                    "stage-cover",
                    format!("stage {s} declares no removed 1-factor"),
                );
            }
            (_, Some(_)) => {
                return fail(
                    "stage-cover",
                    format!("stage {s} removes a 1-factor from a graph that has none"),
                );
            }
            (_, None) => graphs.collect(),
        };
        let whole = match c.base {
            BaseGraph::CompleteMinusOneFactor { n } => BaseGraph::Complete { n },
            b => b,
        };
        check_cover(whole, None, parts, "stage-cover")
            .map_err(|(k, d)| (k, format!("stage {s}: {d}")))?;
    }
    Ok(())
}

fn check_circulant_solution(
    cert: &Certificate,
    base: BaseGraph,
    targets: &[(ConnectionSet, usize)],
) -> Check {
    let stages: Vec<_> = cert
        .stages
        .iter()
        .filter_map(|s| match s {
            Stage::Circulant(c) => Some(c),
            Stage::TwoFactors(_) => None,
        })
        .collect();
    let [stage] = stages.as_slice() else {
        return fail(
            "arity",
            format!("expected one circulant stage, found {}", stages.len()),
        );
    };
    if stage.base != base {
        return fail(
            "cover",
            format!("stage base {:?} differs from {base:?}", stage.base),
        );
    }
    let expected: usize = targets.iter().map(|(_, c)| c).sum();
    if stage.factors.len() != expected {
        return fail(
            "arity",
            format!("{} factors, expected {expected}", stage.factors.len()),
        );
    }
    let mut want: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for (s, c) in targets {
        *want
            .entry(s.elements().iter().copied().collect())
            .or_default() += c;
    }
    let mut got: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for f in &stage.factors {
        *got.entry(f.target.elements().iter().copied().collect())
            .or_default() += 1;
    }
    if want != got {
        return fail("arity", "factor targets do not match the requested counts");
    }
    check_circulant_stages(cert)
}

fn check_two_factor_solution(cert: &Certificate) -> Check {
    let spec = &cert.spec;
    let n = spec.order();
    let (base, expected) = match spec {
        ProblemSpec::OpOdd { .. } => (BaseGraph::Complete { n }, (n - 1) / 2),
        ProblemSpec::OpEven { .. } => (BaseGraph::CompleteMinusOneFactor { n }, (n - 2) / 2),
        ProblemSpec::Multigraph { p, lambda, .. } => (
            BaseGraph::Multigraph {
                n: *p,
                lambda: *lambda,
            },
            lambda * (p - 1) / 2,
        ),
        ProblemSpec::Prescribed { p, .. } => (BaseGraph::CompleteMinusOneFactor { n }, p - 1),
        ProblemSpec::CirculantFactorisation { .. } => unreachable!("handled separately"),
    };

    let factors = cert.two_factors();
    if factors.len() != expected as usize {
        return fail(
            "arity",
            format!("{} 2-factors, expected {expected}", factors.len()),
        );
    }

    let removed: Vec<&VertexGraph> = cert
        .stages
        .iter()
        .filter_map(|s| match s {
            Stage::Circulant(c) => c.removed_one_factor.as_ref(),
            Stage::TwoFactors(_) => None,
        })
        .collect();
    let removed = match (base, removed.as_slice()) {
        (BaseGraph::CompleteMinusOneFactor { .. }, [i]) => Some(*i),
        (BaseGraph::CompleteMinusOneFactor { .. }, _) => {
            return fail(
                "cover",
                format!("expected one removed 1-factor, found {}", removed.len()),
            );
        }
        (_, []) => None,
        (_, _) => {
            return fail(
                "cover",
                "a removed 1-factor is declared for a graph without one",
            )
        }
    };
    check_cover(base, removed, factors.iter().map(|t| &t.graph), "cover")?;

    let mut used = BTreeSet::new();
    for (k, t) in factors.iter().enumerate() {
        let Some(lengths) = cycle_lengths(&t.graph) else {
            return fail(
                "two-regular",
                format!("2-factor {k} is not spanning and 2-regular"),
            );
        };
        let want: Vec<u32> = match (spec, t.role) {
            (ProblemSpec::OpOdd { f, .. }, Role::TypeF)
            | (ProblemSpec::OpEven { f, .. }, Role::TypeF)
            | (ProblemSpec::Multigraph { f, .. }, Role::TypeF) => f.lengths().to_vec(),
            (ProblemSpec::Prescribed { types, .. }, Role::Prescribed(i)) if i < types.len() => {
                if !used.insert(i) {
                    return fail("cycle-type", format!("prescribed type {i} realised twice"));
                }
                types[i].lengths().to_vec()
            }
            (ProblemSpec::Prescribed { .. }, Role::Hamilton) => vec![n],
            (_, role) => {
                return fail(
                    "cycle-type",
                    format!("2-factor {k} has unexpected role {role:?}"),
                )
            }
        };
        if lengths != want {
            let check = if t.role == Role::Hamilton {
                "hamilton"
            } else {
                "cycle-type"
            };
            return fail(
                check,
                format!("2-factor {k} has cycle lengths {lengths:?}, expected {want:?}"),
            );
        }
    }
    if let ProblemSpec::Prescribed { types, .. } = spec {
        if used.len() != types.len() {
            return fail("cycle-type", "not every prescribed type is realised");
        }
    }

    check_circulant_stages(cert)?;
    check_stage_links(cert)
}

/// Each 2-factor stage with a parent splits exactly that circulant factor,
/// and every circulant factor is split exactly once.
fn check_stage_links(cert: &Certificate) -> Check {
    let mut children: HashMap<(usize, usize), usize> = HashMap::new();
    for (s, stage) in cert.stages.iter().enumerate() {
        let Stage::TwoFactors(t) = stage else {
            continue;
        };
        let Some((ps, pi)) = t.parent else { continue };
        let parent = match cert.stages.get(ps) {
            Some(Stage::Circulant(c)) if ps < s => c.factors.get(pi),
            _ => None,
        };
        let Some(parent) = parent else {
            return fail(
                "stage-cover",
                format!("stage {s} names a missing parent ({ps}, {pi})"),
            );
        };
        *children.entry((ps, pi)).or_default() += 1;
        let total: usize = t.factors.iter().map(|f| f.graph.edge_count()).sum();
        let union: BTreeSet<(u32, u32)> = t
            .factors
            .iter()
            .flat_map(|f| f.graph.edges().iter().copied())
            .collect();
        if total != union.len() || &union != parent.graph.edges() {
            return fail(
                "stage-cover",
                format!("stage {s} does not partition factor {pi} of stage {ps}"),
            );
        }
    }
    for (s, stage) in cert.stages.iter().enumerate() {
        let Stage::Circulant(c) = stage else { continue };
        for i in 0..c.factors.len() {
            let k = children.get(&(s, i)).copied().unwrap_or(0);
            if k != 1 {
                return fail(
                    "stage-cover",
                    format!("factor {i} of stage {s} is split {k} times"),
                );
            }
        }
    }
    Ok(())
}
