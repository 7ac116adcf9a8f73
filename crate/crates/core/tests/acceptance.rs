//! Acceptance suite. Each criterion prints one PASS or FAIL line; the process
//! exits non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use obf_core::circulant_factors::{
    dihedral_pm_1234_factorise, dihedral_pm_12_factorise, factorise_pm_123, factorise_pm_134,
    factorise_pm_1k, mixed_123_1234_factorise, mixed_run_counts, multiplier_orbit_factorise,
    FactorError, Factorisation,
};
use obf_core::graphs::circulant;
use obf_core::numtheory::{
    classify_prime, is_prime, mixed_run_length, multiplicative_order, quartic_run_witness,
    T_SIGNATURES,
};
use obf_core::solver::{
    lift_factorisation, solve_multigraph, solve_op, solve_prescribed_with_hamilton,
    verify_certificate, Role, SolverConfig, Stage, Verdict,
};
use obf_core::two_factors::{
    backtrack_2fact, cycle_power_factorise, j123_c3, j123_cycle, j134_c8, j134_c8_triple,
    j134_cycle, JGadget, PowerSearchOutcome, SearchOutcome,
};
use obf_core::{Certificate, ConnectionSet, CycleType, ProblemSpec, Status};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const PM123_BELOW_1000: &str = "7, 37, 139, 163, 181, 241, 313, 337, 349, 379, 409, 421, 541, 571, 607, 631, 751, 859, 877, 937";
const PM134_BELOW_1000: &str =
    "13, 19, 79, 97, 199, 211, 331, 373, 463, 487, 673, 709, 769, 823, 829, 883, 907";

fn ct(lengths: &[u32]) -> CycleType {
    CycleType::new(lengths.to_vec()).unwrap()
}

fn primes(range: std::ops::Range<u64>) -> impl Iterator<Item = u64> {
    range.filter(|&p| is_prime(p))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let spent = start.elapsed();
    ensure(spent <= limit, || {
        format!("took {spent:.2?}, limit {limit:?}")
    })
}

fn joined(ps: &[u64]) -> String {
    ps.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
}

/// Cubic residues of `p`, by listing `x^3`.
fn cubes(p: u64) -> BTreeSet<u64> {
    (1..p).map(|x| x * x % p * x % p).collect()
}

fn prime_lists() -> Outcome {
    let start = Instant::now();
    let mut pm123 = Vec::new();
    let mut pm134 = Vec::new();
    for p in primes(7..1000) {
        let c = classify_prime(p).map_err(|e| e.to_string())?;
        if c.is_pm123_class() {
            pm123.push(p);
        }
        if c.is_pm134_class() {
            pm134.push(p);
        }
    }
    ensure(joined(&pm123) == PM123_BELOW_1000, || {
        format!("±{{1,2,3}} list: {}", joined(&pm123))
    })?;
    ensure(joined(&pm134) == PM134_BELOW_1000, || {
        format!("±{{1,3,4}} list: {}", joined(&pm134))
    })?;
    within(Duration::from_secs(1), start)?;
    Ok(format!(
        "{} and {} primes below 1000 match",
        pm123.len(),
        pm134.len()
    ))
}

fn t_signatures() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for p in primes(7..10_000).filter(|p| p % 6 == 1) {
        let sig = classify_prime(p)
            .map_err(|e| e.to_string())?
            .t_signature
            .ok_or("no signature")?;
        let cubes = cubes(p);
        let (two, three, six) = (cubes.contains(&2), cubes.contains(&3), cubes.contains(&6));
        let cubic_123 = !two && !three && six;
        let cubic_134 = !two && !three && !six;
        ensure(matches!(sig, (2, 1) | (5, 5)) == cubic_123, || {
            format!("p = {p}: {sig:?} vs ±{{1,2,3}} cube test")
        })?;
        ensure(matches!(sig, (2, 5) | (5, 1)) == cubic_134, || {
            format!("p = {p}: {sig:?} vs ±{{1,3,4}} cube test")
        })?;
        checked += 1;
    }
    let mut counts: BTreeMap<(u8, u8), u64> = BTreeMap::new();
    let mut total = 0u64;
    for p in primes(7..1_000_000).filter(|p| p % 6 == 1) {
        let sig = obf_core::numtheory::t_signature(p).map_err(|e| e.to_string())?;
        *counts.entry(sig).or_default() += 1;
        total += 1;
    }
    let mut worst = 0f64;
    for sig in T_SIGNATURES {
        let freq = counts.get(&sig).copied().unwrap_or(0) as f64 / total as f64;
        worst = worst.max((freq - 1.0 / 9.0).abs());
        ensure((freq - 1.0 / 9.0).abs() <= 0.03, || {
            format!("{sig:?} has frequency {freq:.4}")
        })?;
    }
    ensure(counts.len() == 9, || {
        format!("{} distinct signatures", counts.len())
    })?;
    within(Duration::from_secs(60), start)?;
    Ok(format!(
        "{checked} primes below 10^4 agree with the cube tests; {total} primes below 10^6, max deviation {worst:.4}"
    ))
}

fn quartic_witnesses() -> Outcome {
    let start = Instant::now();
    let mut missing = Vec::new();
    let mut count = 0;
    for p in primes(5..100_001).filter(|p| p % 4 == 1) {
        let witness = quartic_run_witness(p).map_err(|e| e.to_string())?;
        count += 1;
        // y and z share a quartic coset iff y/z is a fourth power, i.e. (y/z)^((p-1)/4) = 1
        let coset = |y: u64| obf_core::numtheory::pow_mod(y, (p - 1) / 4, p);
        match witness {
            Some(x) => {
                let cs: BTreeSet<u64> = (x..x + 4).map(|y| coset(y % p)).collect();
                ensure(x + 3 < p && cs.len() == 4, || {
                    format!("p = {p}: witness {x} is wrong")
                })?;
            }
            None => {
                let fourth: BTreeSet<u64> = (1..p)
                    .map(|x| obf_core::numtheory::pow_mod(x, 4, p))
                    .collect();
                let same =
                    |a: u64, b: u64| fourth.contains(&(a * obf_core::numtheory::inv_mod(b, p) % p));
                let any =
                    (1..p - 3).any(|x| (0..4).all(|i| (i + 1..4).all(|j| !same(x + i, x + j))));
                ensure(!any, || {
                    format!("p = {p}: a witness exists but none was reported")
                })?;
                missing.push(p);
            }
        }
    }
    ensure(missing == [13, 17], || {
        format!("no witness for {missing:?}")
    })?;
    within(Duration::from_secs(60), start)?;
    Ok(format!(
        "{count} primes checked, exceptions exactly {{13, 17}}"
    ))
}

fn check_factorisation(
    name: &str,
    f: &Factorisation,
    targets: Vec<(ConnectionSet, usize)>,
) -> Result<(), String> {
    let spec = ProblemSpec::CirculantFactorisation {
        base: f.base,
        targets,
    };
    match verify_certificate(&lift_factorisation(spec, f)) {
        Verdict::Valid => Ok(()),
        Verdict::Invalid { check, detail } => Err(format!("{name}: {check}: {detail}")),
    }
}

fn pm(n: u32, steps: &[u32]) -> ConnectionSet {
    ConnectionSet::symmetric(n, steps).unwrap()
}

fn constructions() -> Outcome {
    let start = Instant::now();
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for p in primes(3..301) {
        let p32 = p as u32;
        let c = classify_prime(p).map_err(|e| e.to_string())?;
        let label = |s: &str| format!("{s} p = {p}");

        if p % 4 == 1 {
            for k in 2..p {
                if !multiplicative_order(p, k).is_multiple_of(4) {
                    continue;
                }
                let f = factorise_pm_1k(p32, k as u32).map_err(|e| label(&e.to_string()))?;
                let s = pm(p32, &[1, k as u32]);
                let a_b = ((p - 1) / 4) as usize;
                ensure(f.factors.len() == a_b, || label("±{1,k} factor count"))?;
                check_factorisation(&label(&format!("±{{1,{k}}}")), &f, vec![(s, a_b)])?;
                *counts.entry("±{1,k}").or_default() += 1;
            }
        }
        if c.is_pm123_class() {
            let f = factorise_pm_123(p32).map_err(|e| e.to_string())?;
            let k = (p as usize - 1) / 6;
            check_factorisation(&label("±{1,2,3}"), &f, vec![(pm(p32, &[1, 2, 3]), k)])?;
            *counts.entry("cubic ±{1,2,3}").or_default() += 1;
        }
        if c.is_pm134_class() {
            let f = factorise_pm_134(p32).map_err(|e| e.to_string())?;
            let k = (p as usize - 1) / 6;
            check_factorisation(&label("±{1,3,4}"), &f, vec![(pm(p32, &[1, 3, 4]), k)])?;
            *counts.entry("cubic ±{1,3,4}").or_default() += 1;
        }
        if p >= 7 {
            let d = mixed_run_length(p).map_err(|e| e.to_string())?;
            let mut pairs: Vec<(u64, u64)> = (0..=d / 4)
                .filter(|b| (d - 4 * b) % 3 == 0)
                .map(|b| ((d - 4 * b) / 3, b))
                .collect();
            if let Some(h) = mixed_run_counts(d) {
                ensure(pairs.contains(&h), || label("helper split"))?;
            } else {
                ensure(pairs.is_empty() && matches!(d, 1 | 2 | 5), || {
                    label("helper refused")
                })?;
            }
            pairs.retain(|&(_, b)| b == 0 || p >= 11);
            for (alpha, beta) in pairs {
                let f = mixed_123_1234_factorise(p32, alpha, beta)
                    .map_err(|e| label(&e.to_string()))?;
                let copies = ((p - 1) / (2 * d)) as usize;
                let mut targets = Vec::new();
                if alpha > 0 {
                    targets.push((pm(p32, &[1, 2, 3]), alpha as usize * copies));
                }
                if beta > 0 {
                    targets.push((pm(p32, &[1, 2, 3, 4]), beta as usize * copies));
                }
                check_factorisation(&label(&format!("mixed ({alpha},{beta})")), &f, targets)?;
                *counts.entry("mixed").or_default() += 1;
            }
        }
        let f = dihedral_pm_12_factorise(p32).map_err(|e| e.to_string())?;
        let k = (p as usize - 1) / 2;
        ensure(f.factors.len() == k, || label("dihedral ±{1,2} count"))?;
        check_factorisation(
            &label("dihedral ±{1,2}"),
            &f,
            vec![(pm(2 * p32, &[1, 2]), k)],
        )?;
        *counts.entry("dihedral ±{1,2}").or_default() += 1;

        if p % 8 == 5 && p != 13 {
            let f = dihedral_pm_1234_factorise(p32).map_err(|e| e.to_string())?;
            let k = (p as usize - 1) / 4;
            ensure(f.factors.len() == k, || label("dihedral ±{1,2,3,4} count"))?;
            check_factorisation(
                &label("dihedral ±{1,2,3,4}"),
                &f,
                vec![(pm(2 * p32, &[1, 2, 3, 4]), k)],
            )?;
            *counts.entry("dihedral ±{1,2,3,4}").or_default() += 1;
        }
        for s in 1..=4u32 {
            if 2 * s >= p32 {
                break;
            }
            let steps: Vec<u32> = (1..=s).collect();
            let conn = pm(p32, &steps);
            let f = multiplier_orbit_factorise(p32, &conn).map_err(|e| e.to_string())?;
            check_factorisation(
                &label(&format!("orbit s = {s}")),
                &f,
                vec![(conn, (p as usize - 1) / 2)],
            )?;
            *counts.entry("multiplier orbit").or_default() += 1;
        }
    }
    within(Duration::from_secs(300), start)?;
    let summary: Vec<String> = counts.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    Ok(summary.join(", "))
}

fn k26_negative() -> Outcome {
    let start = Instant::now();
    let refused = matches!(
        dihedral_pm_1234_factorise(13),
        Err(FactorError::NoSolution { p: 13 })
    );
    ensure(refused, || "construction did not refuse p = 13".into())?;
    let report = cycle_power_factorise(26, 4, 100_000_000).map_err(|e| e.to_string())?;
    let search = match report.outcome {
        PowerSearchOutcome::NotFound => "search exhausted: no factorisation exists",
        PowerSearchOutcome::BudgetExceeded => "search budget exceeded",
        PowerSearchOutcome::Found { .. } => return Err("search found a factorisation".into()),
    };
    let spec = ProblemSpec::CirculantFactorisation {
        base: obf_core::circulant_factors::BaseGraph::CompleteMinusOneFactor { n: 26 },
        targets: vec![(pm(26, &[1, 2, 3, 4]), 3)],
    };
    let cert = Certificate::no_solution(spec, search);
    ensure(verify_certificate(&cert).is_valid(), || {
        "no-solution certificate rejected".into()
    })?;
    within(Duration::from_secs(300), start)?;
    Ok(format!(
        "construction refuses; {search} ({} nodes)",
        report.nodes
    ))
}

fn gadgets() -> Outcome {
    let start = Instant::now();
    let mut built = 0;
    let mut run =
        |name: &str,
         ms: Vec<u32>,
         f: fn(u32) -> Result<JGadget, obf_core::two_factors::TwoFactorError>| {
            for m in ms {
                f(m).map_err(|e| format!("{name} m = {m}: {e}"))?;
                built += 1;
            }
            Ok::<_, String>(())
        };
    run("j123_cycle", (4..=200).collect(), j123_cycle)?;
    run(
        "j123_c3",
        std::iter::once(8).chain(10..=200).collect(),
        j123_c3,
    )?;
    run(
        "j134_cycle",
        [6, 7].into_iter().chain(9..=200).collect(),
        j134_cycle,
    )?;
    run("j134_c8", (14..=200).collect(), j134_c8)?;
    j134_c8_triple().map_err(|e| format!("j134_c8_triple: {e}"))?;
    built += 1;
    within(Duration::from_secs(30), start)?;
    Ok(format!("{built} gadgets validated"))
}

fn assert_solved(cert: &Certificate) -> Result<(), String> {
    ensure(cert.status == Status::Solved, || {
        format!("{}: {:?}", cert.spec, cert.status)
    })?;
    match verify_certificate(cert) {
        Verdict::Valid => Ok(()),
        Verdict::Invalid { check, detail } => Err(format!("{}: {check}: {detail}", cert.spec)),
    }
}

fn end_to_end_op() -> Outcome {
    let start = Instant::now();
    let config = SolverConfig::default();
    let types10 = CycleType::all_of_order(10);
    for f in &types10 {
        assert_solved(&solve_op(&ProblemSpec::op(f.clone()), &config).map_err(|e| e.to_string())?)?;
    }
    for f in [ct(&[13]), ct(&[6, 7])] {
        let cert = solve_op(&ProblemSpec::op(f), &config).map_err(|e| e.to_string())?;
        assert_solved(&cert)?;
        let route = cert.provenance.first().map(|p| p.construction.as_str());
        ensure(route == Some("pm_134_cubic"), || {
            format!("{}: routed via {route:?}", cert.spec)
        })?;
    }
    let girth6: Vec<_> = CycleType::all_of_order(13)
        .into_iter()
        .filter(|f| f.girth() >= 6)
        .collect();
    ensure(girth6 == [ct(&[6, 7]), ct(&[13])], || {
        format!("girth >= 6 types of order 13: {girth6:?}")
    })?;
    for f in [ct(&[3, 3]), ct(&[4, 5]), ct(&[3, 3, 5]), ct(&[3, 3, 3, 3])] {
        let cert = solve_op(&ProblemSpec::op(f), &config).map_err(|e| e.to_string())?;
        ensure(matches!(cert.status, Status::NoSolution(_)), || {
            format!("{}: {:?}", cert.spec, cert.status)
        })?;
        ensure(verify_certificate(&cert).is_valid(), || {
            format!("{}: rejected", cert.spec)
        })?;
    }
    within(Duration::from_secs(600), start)?;
    Ok(format!(
        "all {} cycle types of order 10 solved (the criterion counts 10; only {} exist), [13] and [6,7] via ±{{1,3,4}}, 4 exceptions refused",
        types10.len(),
        types10.len()
    ))
}

fn pm1234_exceptions_small() -> Outcome {
    let start = Instant::now();
    let g = circulant(9, &pm(9, &[1, 2, 3, 4])).map_err(|e| e.to_string())?;
    let none = backtrack_2fact(&g, &ct(&[4, 5]), false, 100_000_000).map_err(|e| e.to_string())?;
    ensure(none.outcome == SearchOutcome::NotFound, || {
        format!("[4,5]: {:?}", none.outcome)
    })?;
    let some =
        backtrack_2fact(&g, &ct(&[3, 3, 3]), false, 100_000_000).map_err(|e| e.to_string())?;
    ensure(some.factors().is_some(), || {
        format!("[3,3,3]: {:?}", some.outcome)
    })?;
    within(Duration::from_secs(300), start)?;
    Ok(format!(
        "[4,5] refuted in {} nodes, [3,3,3] found in {}",
        none.nodes, some.nodes
    ))
}

fn prescribed_with_hamilton() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let config = SolverConfig::default();
    let mut solved = 0;
    for p in [3u32, 5, 7] {
        let pool = CycleType::all_of_order(2 * p);
        for _ in 0..20 {
            let types: Vec<CycleType> = (0..(p - 1) / 2)
                .map(|_| pool.choose(&mut rng).expect("non-empty").clone())
                .collect();
            let cert =
                solve_prescribed_with_hamilton(p, &types, &config).map_err(|e| e.to_string())?;
            assert_solved(&cert)?;
            let hamilton = cert
                .two_factors()
                .iter()
                .filter(|t| t.role == Role::Hamilton)
                .count();
            ensure(hamilton == (p as usize - 1) / 2, || {
                format!("{}: {hamilton} Hamilton factors", cert.spec)
            })?;
            solved += 1;
        }
    }
    within(Duration::from_secs(600), start)?;
    Ok(format!(
        "{solved} random prescribed lists solved and verified"
    ))
}

fn multigraphs() -> Outcome {
    let start = Instant::now();
    let config = SolverConfig::default();
    let cases: [(u32, u32, &[u32]); 8] = [
        (4, 3, &[3]),
        (4, 5, &[5]),
        (4, 7, &[7]),
        (4, 7, &[3, 4]),
        (3, 7, &[7]),
        (8, 5, &[5]),
        (7, 5, &[5]),
        (8, 7, &[3, 4]),
    ];
    for (lambda, p, f) in cases {
        let cert = solve_multigraph(lambda, p, &ct(f), &config).map_err(|e| e.to_string())?;
        assert_solved(&cert)?;
        let layered = cert.stages.iter().any(|s| matches!(s, Stage::Circulant(_)));
        ensure(p <= 5 || lambda % 4 == 0 || layered, || {
            format!("{}: no circulant layer", cert.spec)
        })?;
    }
    let five = solve_multigraph(5, 7, &ct(&[7]), &config).map_err(|e| e.to_string())?;
    ensure(matches!(five.status, Status::Unsupported(_)), || {
        format!("5K_7: {:?}", five.status)
    })?;
    within(Duration::from_secs(600), start)?;
    Ok(format!(
        "{} multigraph cases verified, lambda = 5 at p = 7 unsupported",
        cases.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("prime lists below 1000", prime_lists),
        ("t-signature correspondence and frequencies", t_signatures),
        ("quartic run witnesses up to 10^5", quartic_witnesses),
        ("circulant constructions for p <= 300", constructions),
        ("K_26 - I has no ±{1,2,3,4} factorisation", k26_negative),
        ("gadget ranges", gadgets),
        ("end-to-end OP at orders 10 and 13", end_to_end_op),
        ("±{1,2,3,4} exceptions at order 9", pm1234_exceptions_small),
        (
            "prescribed types plus Hamilton cycles",
            prescribed_with_hamilton,
        ),
        ("multigraphs", multigraphs),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let spent = start.elapsed();
        match outcome {
            Ok(detail) => println!(
                "criterion {:>2} PASS  {name} ({spent:.2?}): {detail}",
                i + 1
            ),
            Err(detail) => {
                failures += 1;
                println!(
                    "criterion {:>2} FAIL  {name} ({spent:.2?}): {detail}",
                    i + 1
                );
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
