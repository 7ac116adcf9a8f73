use std::collections::HashMap;

use super::{
    is_known_exception, Certificate, CirculantStage, ProblemSpec, Result, Role, SolverConfig,
    SolverError, Source, Stage, Status, TwoFactor, TwoFactorStage, VertexEncoding,
};
use crate::circulant_factors::{
    dihedral_pm_1234_factorise, dihedral_pm_12_factorise, factorise_pm_134,
    mixed_123_1234_factorise, mixed_run_counts, multiplier_orbit_factorise, BaseGraph,
    CirculantFactor, FactorError, Factorisation, IsoWitness, Provenance,
};
use crate::graphs::{circulant, complete_graph, ConnectionSet, CycleType, VertexGraph};
use crate::numtheory::{classify_prime, is_prime};
use crate::two_factors::{
    factorise_123, factorise_134, plan_123, plan_134, pm1234_exception, search_two_factorisation,
    Pm1234Exception, SearchOutcome, SearchReport,
};

/// Dispatches on the problem kind.
pub fn solve(spec: &ProblemSpec, config: &SolverConfig) -> Result<Certificate> {
    match spec {
        ProblemSpec::OpOdd { .. } | ProblemSpec::OpEven { .. } => solve_op(spec, config),
        ProblemSpec::Multigraph { p, lambda, f } => solve_multigraph(*lambda, *p, f, config),
        ProblemSpec::Prescribed { p, types } => solve_prescribed_with_hamilton(*p, types, config),
        ProblemSpec::CirculantFactorisation { .. } => Err(SolverError::InvalidSpec(
            "circulant factorisations are produced by the constructions directly".into(),
        )),
    }
}

fn numtheory_err(e: crate::numtheory::NumTheoryError) -> SolverError {
    SolverError::Factor(FactorError::NumTheory(e))
}

fn exception_label(f: &CycleType) -> String {
    match pm1234_exception(f) {
        None => "none".into(),
        Some(Pm1234Exception::Definite) => "definite".into(),
        Some(Pm1234Exception::Possible(k)) => format!("possible family {k}"),
    }
}

fn search_provenance(graph: &str, types: &[CycleType], report: &SearchReport) -> Provenance {
    let outcome = match report.outcome {
        SearchOutcome::Found(_) => "found",
        SearchOutcome::NotFound => "not-found",
        SearchOutcome::BudgetExceeded => "budget-exceeded",
    };
    let list: Vec<String> = types.iter().map(ToString::to_string).collect();
    Provenance::new("two_factor_search")
        .with("graph", graph)
        .with("types", list.join(" "))
        .with("nodes", report.nodes)
        .with("outcome", outcome)
}

fn search_failure(graph: &str, report: &SearchReport, budget: u64) -> String {
    match report.outcome {
        SearchOutcome::BudgetExceeded => {
            format!("search on {graph} exhausted its budget of {budget} nodes")
        }
        _ => format!("search on {graph} found no suitable 2-factorisation"),
    }
}

/// 2-factors of a canonical circulant, copied onto each selected factor.
fn transport(
    stage: usize,
    factors: &[CirculantFactor],
    selected: impl IntoIterator<Item = usize>,
    canonical: &[VertexGraph],
    roles: &[Role],
    source: Source,
) -> Vec<Stage> {
    selected
        .into_iter()
        .map(|i| {
            Stage::TwoFactors(TwoFactorStage {
                parent: Some((stage, i)),
                source,
                factors: canonical
                    .iter()
                    .zip(roles)
                    .map(|(g, &role)| TwoFactor {
                        graph: factors[i].pull_back(g),
                        role,
                    })
                    .collect(),
            })
        })
        .collect()
}

fn solved(spec: &ProblemSpec, stages: Vec<Stage>, provenance: Vec<Provenance>) -> Certificate {
    Certificate {
        spec: spec.clone(),
        status: Status::Solved,
        stages,
        provenance,
    }
}

fn pm(n: u32, steps: &[u32]) -> Result<ConnectionSet> {
    Ok(ConnectionSet::symmetric(n, steps)?)
}

/// Solves `OP(F)` by the first applicable route: known non-existence, the
/// dihedral `±{1,2,3,4}` factorisation for `n = 2p` with `p = 5 (mod 8)`,
/// the mixed `±{1,2,3}` / `±{1,2,3,4}` factorisation for prime `n`, then
/// the cubic `±{1,3,4}` factorisation for prime `n` when `F` has girth 6.
pub fn solve_op(spec: &ProblemSpec, config: &SolverConfig) -> Result<Certificate> {
    spec.validate()?;
    let (n, f) = match spec {
        ProblemSpec::OpOdd { n, f } | ProblemSpec::OpEven { n, f } => (*n, f),
        _ => return Err(SolverError::InvalidSpec("expected an OP problem".into())),
    };
    if is_known_exception(f) {
        return Ok(Certificate::no_solution(
            spec.clone(),
            format!("OP({f}) is known to have no solution"),
        ));
    }
    if n % 2 == 0 {
        let p = n / 2;
        if p >= 5 && is_prime(p as u64) && p % 8 == 5 {
            return if p == 13 {
                op_direct_search(spec, f, config)
            } else {
                op_dihedral_1234(spec, p, f, config)
            };
        }
        return Ok(Certificate::unsupported(
            spec.clone(),
            format!("n = {n} is not twice a prime congruent to 5 mod 8"),
        ));
    }
    if n >= 7 && is_prime(n as u64) {
        let class = classify_prime(n as u64).map_err(numtheory_err)?;
        if class.mixed_class && f.triangle_condition() {
            return op_mixed(spec, n, f, class.mixed_run_length.unwrap_or(0), config);
        }
        if class.is_pm134_class() && f.girth() >= 6 {
            return op_pm134(spec, n, f);
        }
        return Ok(Certificate::unsupported(
            spec.clone(),
            format!(
                "no construction covers F = {f} at p = {n} ({})",
                class.class_label()
            ),
        ));
    }
    Ok(Certificate::unsupported(
        spec.clone(),
        format!("n = {n} is neither a prime nor twice a prime congruent to 5 mod 8"),
    ))
}

fn op_dihedral_1234(
    spec: &ProblemSpec,
    p: u32,
    f: &CycleType,
    config: &SolverConfig,
) -> Result<Certificate> {
    let n = 2 * p;
    let fact = dihedral_pm_1234_factorise(p)?;
    let canonical = circulant(n, &pm(n, &[1, 2, 3, 4])?)?;
    let types = vec![f.clone(); 4];
    let report = search_two_factorisation(&canonical, &types, config.budget)?;
    let graph = format!("Cay(Z_{n}; ±{{1,2,3,4}})");
    let mut provenance = vec![
        fact.provenance.clone(),
        search_provenance(&graph, &types, &report).with("pm1234_exception", exception_label(f)),
    ];
    let Some(found) = report.factors() else {
        let mut cert =
            Certificate::unsupported(spec.clone(), search_failure(&graph, &report, config.budget));
        cert.provenance.append(&mut provenance);
        return Ok(cert);
    };
    let mut stages = vec![Stage::Circulant(CirculantStage::from_factorisation(
        &fact,
        VertexEncoding::Dihedral,
    ))];
    stages.extend(transport(
        0,
        &fact.factors,
        0..fact.factors.len(),
        found,
        &[Role::TypeF; 4],
        Source::Search,
    ));
    Ok(solved(spec, stages, provenance))
}

/// `K_26 - I` has no factorisation into `Cay(Z_26; ±{1,2,3,4})`, so it is
/// 2-factorised directly, viewed as `Cay(Z_26; ±{1..12})` minus `{i, i+13}`.
fn op_direct_search(
    spec: &ProblemSpec,
    f: &CycleType,
    config: &SolverConfig,
) -> Result<Certificate> {
    let n = spec.order();
    let half = n / 2;
    let steps: Vec<u32> = (1..half).collect();
    let target = pm(n, &steps)?;
    let graph = circulant(n, &target)?;
    let matching = VertexGraph::from_edges(n, (0..half).map(|i| (i, i + half)))?;
    let types = vec![f.clone(); (half - 1) as usize];
    let report = search_two_factorisation(&graph, &types, config.budget)?;
    let label = format!("K_{n} - I");
    let provenance = vec![
        Provenance::new("direct_search")
            .with("n", n)
            .with("reason", "no circulant route"),
        search_provenance(&label, &types, &report),
    ];
    let Some(found) = report.factors() else {
        let mut cert =
            Certificate::unsupported(spec.clone(), search_failure(&label, &report, config.budget));
        cert.provenance = provenance;
        return Ok(cert);
    };
    let stage = CirculantStage {
        base: BaseGraph::CompleteMinusOneFactor { n },
        encoding: VertexEncoding::Cyclic,
        factors: vec![CirculantFactor {
            graph,
            target,
            witness: IsoWitness::Multiplier(1),
        }],
        removed_one_factor: Some(matching),
    };
    let factors = found
        .iter()
        .map(|g| TwoFactor {
            graph: g.clone(),
            role: Role::TypeF,
        })
        .collect();
    let stages = vec![
        Stage::Circulant(stage),
        Stage::TwoFactors(TwoFactorStage {
            parent: Some((0, 0)),
            source: Source::Search,
            factors,
        }),
    ];
    Ok(solved(spec, stages, provenance))
}

fn plan_label(blocks: &[crate::two_factors::Block]) -> String {
    blocks
        .iter()
        .map(|b| {
            let parts: Vec<String> = b.lengths.iter().map(u32::to_string).collect();
            format!("[{}]", parts.join(","))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn op_mixed(
    spec: &ProblemSpec,
    p: u32,
    f: &CycleType,
    d: u64,
    config: &SolverConfig,
) -> Result<Certificate> {
    let Some((alpha, beta)) = mixed_run_counts(d) else {
        return Ok(Certificate::unsupported(
            spec.clone(),
            format!("run length d = {d} is not of the form 3a + 4b"),
        ));
    };
    let fact = mixed_123_1234_factorise(p, alpha, beta)?;
    let plan = plan_123(f)?;
    let gadget_factors = factorise_123(p, f)?;
    let mut provenance = vec![
        fact.provenance.clone(),
        Provenance::new("j_gadget_123")
            .with("n", p)
            .with("F", f)
            .with("blocks", plan_label(&plan.blocks)),
    ];
    let s3 = pm(p, &[1, 2, 3])?;
    let idx3: Vec<usize> = (0..fact.factors.len())
        .filter(|&i| fact.factors[i].target == s3)
        .collect();
    let idx4: Vec<usize> = (0..fact.factors.len())
        .filter(|&i| fact.factors[i].target != s3)
        .collect();
    let mut stages = vec![Stage::Circulant(CirculantStage::from_factorisation(
        &fact,
        VertexEncoding::Cyclic,
    ))];
    stages.extend(transport(
        0,
        &fact.factors,
        idx3,
        &gadget_factors,
        &[Role::TypeF; 3],
        Source::Construction,
    ));
    if !idx4.is_empty() {
        let canonical = circulant(p, &pm(p, &[1, 2, 3, 4])?)?;
        let types = vec![f.clone(); 4];
        let report = search_two_factorisation(&canonical, &types, config.budget)?;
        let graph = format!("Cay(Z_{p}; ±{{1,2,3,4}})");
        provenance.push(
            search_provenance(&graph, &types, &report).with("pm1234_exception", exception_label(f)),
        );
        let Some(found) = report.factors() else {
            let mut cert = Certificate::unsupported(
                spec.clone(),
                search_failure(&graph, &report, config.budget),
            );
            cert.provenance = provenance;
            return Ok(cert);
        };
        stages.extend(transport(
            0,
            &fact.factors,
            idx4,
            found,
            &[Role::TypeF; 4],
            Source::Search,
        ));
    }
    Ok(solved(spec, stages, provenance))
}

fn op_pm134(spec: &ProblemSpec, p: u32, f: &CycleType) -> Result<Certificate> {
    let fact = factorise_pm_134(p)?;
    let plan = plan_134(f)?;
    let gadget_factors = factorise_134(p, f)?;
    let provenance = vec![
        fact.provenance.clone(),
        Provenance::new("j_gadget_134")
            .with("n", p)
            .with("F", f)
            .with("blocks", plan_label(&plan.blocks)),
    ];
    let mut stages = vec![Stage::Circulant(CirculantStage::from_factorisation(
        &fact,
        VertexEncoding::Cyclic,
    ))];
    stages.extend(transport(
        0,
        &fact.factors,
        0..fact.factors.len(),
        &gadget_factors,
        &[Role::TypeF; 3],
        Source::Construction,
    ));
    Ok(solved(spec, stages, provenance))
}

/// `K_2p - I` into one copy of each listed type plus `(p-1)/2` Hamilton
/// cycles: each `Cay(Z_2p; ±{1,2})` factor of the dihedral factorisation is
/// split by search into a prescribed 2-factor and a Hamilton cycle.
pub fn solve_prescribed_with_hamilton(
    p: u32,
    types: &[CycleType],
    config: &SolverConfig,
) -> Result<Certificate> {
    let spec = ProblemSpec::prescribed(p, types.to_vec())?;
    let n = 2 * p;
    let fact = dihedral_pm_12_factorise(p)?;
    let canonical = circulant(n, &pm(n, &[1, 2])?)?;
    let graph = format!("Cay(Z_{n}; ±{{1,2}})");
    let mut provenance = vec![fact.provenance.clone()];
    let mut stages = vec![Stage::Circulant(CirculantStage::from_factorisation(
        &fact,
        VertexEncoding::Dihedral,
    ))];
    let mut cache: HashMap<CycleType, Vec<VertexGraph>> = HashMap::new();
    for (i, t) in types.iter().enumerate() {
        if !cache.contains_key(t) {
            let pair = [t.clone(), CycleType::hamilton(n)];
            let report = search_two_factorisation(&canonical, &pair, config.budget)?;
            provenance.push(search_provenance(&graph, &pair, &report));
            match report.factors() {
                Some(found) => {
                    cache.insert(t.clone(), found.to_vec());
                }
                None => {
                    let mut cert = Certificate::unsupported(
                        spec,
                        search_failure(&graph, &report, config.budget),
                    );
                    cert.provenance = provenance;
                    return Ok(cert);
                }
            }
        }
        stages.extend(transport(
            0,
            &fact.factors,
            [i],
            &cache[t],
            &[Role::Prescribed(i), Role::Hamilton],
            Source::Search,
        ));
    }
    Ok(solved(&spec, stages, provenance))
}

/// Splits `lambda` into layers of 4 and 3: all 4s when `lambda = 0 (mod 4)`,
/// otherwise as many 4s as possible. `None` for `lambda` in `{1, 2, 5}`.
pub fn multiplicity_layers(lambda: u32) -> Option<Vec<u32>> {
    let threes = match lambda % 4 {
        0 => 0,
        1 => 3,
        2 => 2,
        _ => 1,
    };
    if lambda < 3 * threes {
        return None;
    }
    let fours = (lambda - 3 * threes) / 4;
    let mut layers = vec![4; fours as usize];
    layers.extend(std::iter::repeat_n(3, threes as usize));
    Some(layers)
}

/// 2-factorises `lambda K_p` into `F` layer by layer. A layer of 3 uses the
/// multiplier orbit of `±{1,2,3}` with gadget 2-factorisations; a layer of 4
/// uses the orbit of `±{1,2,3,4}` with searched ones. Small primes, and
/// types among the `±{1,2,3,4}` exceptions, use copies of a searched
/// solution of `OP(F)` on `K_p`.
pub fn solve_multigraph(
    lambda: u32,
    p: u32,
    f: &CycleType,
    config: &SolverConfig,
) -> Result<Certificate> {
    let spec = ProblemSpec::multigraph(lambda, p, f.clone())?;
    let Some(layers) = multiplicity_layers(lambda) else {
        return Ok(Certificate::unsupported(
            spec,
            format!(
                "lambda = {lambda} is not covered (needs lambda = 3, lambda >= 6 or 4 | lambda)"
            ),
        ));
    };
    if layers.contains(&3) && !f.triangle_condition() {
        return Ok(Certificate::unsupported(
            spec,
            format!("layers of multiplicity 3 need the triangle condition, which {f} fails"),
        ));
    }
    let mut stages = Vec::new();
    let mut provenance = vec![Provenance::new("multiplicity_layers").with(
        "layers",
        layers
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join("+"),
    )];
    let mut op_copy: Option<Vec<VertexGraph>> = None;
    let mut pm1234_cache: Option<Vec<VertexGraph>> = None;
    for &size in &layers {
        let use_copies =
            p <= 5 || (size == 4 && p == 7) || (size == 4 && pm1234_exception(f).is_some());
        if use_copies {
            if op_copy.is_none() {
                let types = vec![f.clone(); (p as usize - 1) / 2];
                let report = search_two_factorisation(&complete_graph(p), &types, config.budget)?;
                let label = format!("K_{p}");
                provenance.push(search_provenance(&label, &types, &report));
                match report.factors() {
                    Some(found) => op_copy = Some(found.to_vec()),
                    None => {
                        let mut cert = Certificate::unsupported(
                            spec,
                            search_failure(&label, &report, config.budget),
                        );
                        cert.provenance = provenance;
                        return Ok(cert);
                    }
                }
            }
            let copy = op_copy.as_ref().expect("just computed");
            let factors = (0..size)
                .flat_map(|_| copy.iter())
                .map(|g| TwoFactor {
                    graph: g.clone(),
                    role: Role::TypeF,
                })
                .collect();
            stages.push(Stage::TwoFactors(TwoFactorStage {
                parent: None,
                source: Source::Search,
                factors,
            }));
            continue;
        }
        let steps: &[u32] = if size == 3 { &[1, 2, 3] } else { &[1, 2, 3, 4] };
        let fact: Factorisation = multiplier_orbit_factorise(p, &pm(p, steps)?)?;
        provenance.push(fact.provenance.clone());
        let stage_idx = stages.len();
        stages.push(Stage::Circulant(CirculantStage::from_factorisation(
            &fact,
            VertexEncoding::Cyclic,
        )));
        if size == 3 {
            let canonical = factorise_123(p, f)?;
            stages.extend(transport(
                stage_idx,
                &fact.factors,
                0..fact.factors.len(),
                &canonical,
                &[Role::TypeF; 3],
                Source::Construction,
            ));
        } else {
            if pm1234_cache.is_none() {
                let canonical = circulant(p, &pm(p, &[1, 2, 3, 4])?)?;
                let types = vec![f.clone(); 4];
                let report = search_two_factorisation(&canonical, &types, config.budget)?;
                let graph = format!("Cay(Z_{p}; ±{{1,2,3,4}})");
                provenance.push(search_provenance(&graph, &types, &report));
                match report.factors() {
                    Some(found) => pm1234_cache = Some(found.to_vec()),
                    None => {
                        let mut cert = Certificate::unsupported(
                            spec,
                            search_failure(&graph, &report, config.budget),
                        );
                        cert.provenance = provenance;
                        return Ok(cert);
                    }
                }
            }
            stages.extend(transport(
                stage_idx,
                &fact.factors,
                0..fact.factors.len(),
                pm1234_cache.as_ref().expect("just computed"),
                &[Role::TypeF; 4],
                Source::Search,
            ));
        }
    }
    Ok(solved(&spec, stages, provenance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{verify_certificate, Verdict};

    fn ct(lengths: &[u32]) -> CycleType {
        CycleType::new(lengths.to_vec()).unwrap()
    }

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    fn assert_solved(cert: &Certificate) {
        assert_eq!(cert.status, Status::Solved, "{}", cert.spec);
        assert_eq!(verify_certificate(cert), Verdict::Valid, "{}", cert.spec);
    }

    #[test]
    fn layers() {
        assert_eq!(multiplicity_layers(4), Some(vec![4]));
        assert_eq!(multiplicity_layers(8), Some(vec![4, 4]));
        assert_eq!(multiplicity_layers(3), Some(vec![3]));
        assert_eq!(multiplicity_layers(7), Some(vec![4, 3]));
        assert_eq!(multiplicity_layers(6), Some(vec![3, 3]));
        assert_eq!(multiplicity_layers(9), Some(vec![3, 3, 3]));
        assert_eq!(multiplicity_layers(13), Some(vec![4, 3, 3, 3]));
        for bad in [1, 2, 5] {
            assert_eq!(multiplicity_layers(bad), None);
        }
        for lambda in 6..100 {
            assert_eq!(
                multiplicity_layers(lambda).unwrap().iter().sum::<u32>(),
                lambda
            );
        }
    }

    #[test]
    fn op_routes() {
        let c = solve_op(&ProblemSpec::op(ct(&[4, 5])), &cfg()).unwrap();
        assert!(matches!(c.status, Status::NoSolution(_)));
        assert_solved(&solve_op(&ProblemSpec::op(ct(&[10])), &cfg()).unwrap());
        assert_solved(&solve_op(&ProblemSpec::op(ct(&[6, 7])), &cfg()).unwrap());
        assert_solved(&solve_op(&ProblemSpec::op(ct(&[7])), &cfg()).unwrap());
        assert_solved(&solve_op(&ProblemSpec::op(ct(&[3, 4, 5, 7, 8, 10])), &cfg()).unwrap());
        let none = solve_op(&ProblemSpec::op(ct(&[3, 6])), &cfg()).unwrap();
        assert!(matches!(none.status, Status::Unsupported(_)));
    }

    #[test]
    fn mixed_route_with_searched_factors() {
        // d = 7 at p = 43 gives both kinds of circulant factor
        let f = ct(&[6, 7, 30]);
        assert_solved(&solve_op(&ProblemSpec::op(f), &cfg()).unwrap());
    }

    #[test]
    fn prescribed_examples() {
        assert_solved(&solve_prescribed_with_hamilton(3, &[ct(&[3, 3])], &cfg()).unwrap());
        let c = solve_prescribed_with_hamilton(5, &[ct(&[3, 3, 4]), ct(&[10])], &cfg()).unwrap();
        assert_solved(&c);
        assert_eq!(
            c.two_factors()
                .iter()
                .filter(|t| t.role == Role::Hamilton)
                .count(),
            2
        );
        assert!(solve_prescribed_with_hamilton(5, &[ct(&[10])], &cfg()).is_err());
    }

    #[test]
    fn multigraph_examples() {
        assert_solved(&solve_multigraph(4, 7, &ct(&[3, 4]), &cfg()).unwrap());
        assert_solved(&solve_multigraph(3, 7, &ct(&[7]), &cfg()).unwrap());
        assert_solved(&solve_multigraph(7, 5, &ct(&[5]), &cfg()).unwrap());
        assert_solved(&solve_multigraph(4, 11, &ct(&[3, 3, 5]), &cfg()).unwrap());
        let c = solve_multigraph(5, 7, &ct(&[7]), &cfg()).unwrap();
        assert!(matches!(c.status, Status::Unsupported(_)));
    }
}
