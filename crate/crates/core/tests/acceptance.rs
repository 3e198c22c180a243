//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semimatch::band::{all_regular_bands, builtin_b7, random_band, ZeroRectBand};
use semimatch::colour::{
    instance_from_matching, involution_from_plan, solve, verify_plan, ColourError, ExchangePlan, SolveOutcome,
};
use semimatch::corpus::corpus;
use semimatch::matching::{
    equivalence_report, find_involution_matching, find_permutation_matching, hall_violator, is_h_preserving,
    verify_involution_matching, verify_permutation_matching, PermutationMatching,
};
use semimatch::oracle::involution_backtracking;
use semimatch::search::{probe_order_preserving, search_q4, Q4Config};
use semimatch::semigroup::FiniteSemigroup;
use semimatch::transform::{enumerate, q_class_partition, q_class_regular_degree, tn_matching_via_q_classes, Family, DEFAULT_CAP};

type Check = Result<String, String>;

fn criterion(id: usize, name: &str, limit: Duration, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let result = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let (pass, detail) = match result {
        Ok(d) if in_time => (true, d),
        Ok(d) => (false, format!("{d}; too slow")),
        Err(d) => (false, d),
    };
    println!(
        "criterion {id} [{}] {name}: {detail} ({:.3}s, limit {:.1}s)",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs_f64()
    );
    pass
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn counterexample_b() -> Check {
    let s = builtin_b7().to_semigroup();
    ensure(find_permutation_matching(&s).map_err(|e| e.to_string())?.is_none(), || "matching found".into())?;
    let v = hall_violator(&s).map_err(|e| e.to_string())?.ok_or("no Hall violator")?;
    let subset: Vec<String> = v.subset.iter().map(|&a| s.label(a)).collect();
    let image: Vec<String> = v.image.iter().map(|&a| s.label(a)).collect();
    ensure(subset == ["(2,2)", "(2,3)"], || format!("violator {subset:?}"))?;
    ensure(image.len() == 1 && v.verify(&s), || format!("V(A) = {image:?}"))?;
    Ok(format!("no matching; A = {{{}}}, V(A) = {{{}}}", subset.join(", "), image.join(", ")))
}

fn transformation_matchings() -> Check {
    let mut degrees = Vec::new();
    for n in 2..=4 {
        let tm = enumerate(Family::Tn, n, DEFAULT_CAP).map_err(|e| e.to_string())?;
        let result = tn_matching_via_q_classes(&tm).map_err(|e| format!("T_{n}: {e}"))?;
        ensure(verify_permutation_matching(&tm.semigroup, result.matching.images()).unwrap_or(false), || {
            format!("T_{n} matching fails verification")
        })?;
        let graph = semimatch::InverseGraph::build(&tm.semigroup).map_err(|e| e.to_string())?;
        for rank in 1..=n {
            for q in q_class_partition(&tm, rank).map_err(|e| e.to_string())? {
                let d = q_class_regular_degree(&graph, &q)
                    .ok_or_else(|| format!("T_{n} Q-class {:?} is not regular", q.signature))?;
                if n == 4 {
                    degrees.push(format!("{:?}:{d}", q.signature));
                }
            }
        }
    }
    Ok(format!("T_2, T_3, T_4 matchings verified; T_4 Q-class degrees {}", degrees.join(" ")))
}

fn exhaustive_bands() -> Vec<ZeroRectBand> {
    (1..=3).flat_map(|m| (1..=4).flat_map(move |n| all_regular_bands(m, n))).collect()
}

fn equivalence_consistency() -> Check {
    let mut semigroups: Vec<FiniteSemigroup> = exhaustive_bands().iter().map(ZeroRectBand::to_semigroup).collect();
    let bands = semigroups.len();
    semigroups.extend(corpus(500, 0, 12).into_iter().map(|e| e.semigroup));
    let mut violations = Vec::new();
    let mut lifted = 0;
    for (k, s) in semigroups.iter().enumerate() {
        match equivalence_report(s) {
            Err(e) => violations.push(format!("#{k}: {e}")),
            Ok(r) => {
                let [i, _, _, _, v, vi] = r.verdicts;
                if i != v || i != vi {
                    violations.push(format!("#{k}: verdicts {:?}", r.verdicts));
                }
                if vi {
                    match &r.h_preserving_matching {
                        Some(p) if is_h_preserving(&s.green_relations(), p.images()) => lifted += 1,
                        _ => violations.push(format!("#{k}: no H-preserving matching")),
                    }
                }
            }
        }
    }
    ensure(violations.is_empty(), || format!("{} violations, first {}", violations.len(), violations[0]))?;
    Ok(format!("{bands} bands + 500 corpus semigroups, 0 violations, {lifted} H-preserving matchings lifted"))
}

/// Seeded regular bands with `m | n`, `m ≤ 6`, `n ≤ 12`, that have a matching.
fn divisible_bands_with_matching(count: usize) -> Vec<(ZeroRectBand, PermutationMatching)> {
    let mut out = Vec::with_capacity(count);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    while out.len() < count {
        let m = rng.gen_range(1..=6);
        let n = m * rng.gen_range(1..=12 / m);
        let density = [0.5, 0.6, 0.7, 0.8, 0.9, 1.0][rng.gen_range(0..6)];
        let b = random_band(m, n, density, rng.gen()).expect("valid parameters");
        if let Some(p) = find_permutation_matching(&b.to_semigroup()).expect("bands are regular") {
            out.push((b, p));
        }
    }
    out
}

fn harem_construction(bands: &[(ZeroRectBand, PermutationMatching)]) -> Check {
    let mut ok = 0;
    for (k, (b, _)) in bands.iter().enumerate() {
        let harem = b.harem_functions().map_err(|e| format!("#{k}: {e}"))?.ok_or(format!("#{k}: no harem family"))?;
        ensure(harem.is_valid_for(b), || format!("#{k}: invalid harem family"))?;
        let inv = b.harem_involution().map_err(|e| format!("#{k}: {e}"))?.ok_or(format!("#{k}: no involution"))?;
        ensure(verify_involution_matching(&b.to_semigroup(), inv.matching.images()).unwrap_or(false), || {
            format!("#{k}: involution fails verification")
        })?;
        ok += 1;
    }
    ensure(ok == bands.len(), || format!("{ok}/{}", bands.len()))?;
    Ok(format!("{ok}/{} harem involutions verified", bands.len()))
}

/// Breaks a plan: undo one exchange, or add one between balls of different
/// girls and colours when the plan is all vacuous.
fn corrupt(inst: &semimatch::colour::ColourInstance, plan: &ExchangePlan) -> Option<ExchangePlan> {
    let mut exchanges = plan.exchanges();
    if exchanges.pop().is_none() {
        let balls = inst.balls();
        let (x, y) = (0..balls.len())
            .flat_map(|x| (x + 1..balls.len()).map(move |y| (x, y)))
            .find(|&(x, y)| balls[x].girl != balls[y].girl && balls[x].colour != balls[y].colour)?;
        exchanges.push((x, y));
    }
    ExchangePlan::from_exchanges(plan.len(), &exchanges).ok()
}

fn colour_pipeline(bands: &[(ZeroRectBand, PermutationMatching)]) -> Check {
    let (mut solved, mut unsolvable, mut exhausted, mut corrupted) = (0, 0, 0, 0);
    for (k, (b, phi)) in bands.iter().enumerate() {
        let inst = instance_from_matching(b, phi).map_err(|e| format!("#{k}: {e}"))?;
        match solve(&inst, Some(2_000_000)) {
            SolveOutcome::Solved { plan, .. } => {
                ensure(verify_plan(&inst, &plan).unwrap_or(false), || format!("#{k}: plan fails verification"))?;
                let inv = involution_from_plan(b, phi, &inst, &plan).map_err(|e| format!("#{k}: {e}"))?;
                ensure(verify_involution_matching(&b.to_semigroup(), inv.images()).unwrap_or(false), || {
                    format!("#{k}: involution fails verification")
                })?;
                solved += 1;
                if let Some(bad) = corrupt(&inst, &plan) {
                    ensure(!verify_plan(&inst, &bad).unwrap_or(true), || format!("#{k}: corrupted plan verifies"))?;
                    match involution_from_plan(b, phi, &inst, &bad) {
                        Err(ColourError::WellDefinednessViolation { .. }) => corrupted += 1,
                        other => return Err(format!("#{k}: corrupted plan gave {other:?}")),
                    }
                }
            }
            SolveOutcome::Unsolvable { .. } => unsolvable += 1,
            SolveOutcome::BudgetExhausted { .. } => exhausted += 1,
        }
    }
    Ok(format!(
        "{solved} solved and converted, {unsolvable} unsolvable, {exhausted} over budget; \
         {corrupted} corrupted plans all rejected"
    ))
}

fn involution_soundness() -> Check {
    let mut semigroups: Vec<FiniteSemigroup> = corpus(500, 10_000, 10).into_iter().map(|e| e.semigroup).collect();
    semigroups.extend(exhaustive_bands().iter().map(ZeroRectBand::to_semigroup));
    let mut disagreements = 0;
    let mut positive = 0;
    for s in &semigroups {
        let engine = find_involution_matching(s).map_err(|e| e.to_string())?;
        if let Some(i) = &engine {
            ensure(verify_involution_matching(s, i.images()).unwrap_or(false), || "unverified involution".into())?;
            positive += 1;
        }
        if engine.is_some() != involution_backtracking(s).is_some() {
            disagreements += 1;
        }
    }
    ensure(disagreements == 0, || format!("{disagreements} disagreements"))?;
    Ok(format!("{} semigroups, {positive} with involution matchings, 0 disagreements", semigroups.len()))
}

fn open_question_probes() -> Check {
    let mut summary = Vec::new();
    for n in 1..=8 {
        let f = probe_order_preserving(n, n <= 3, 5).map_err(|e| e.to_string())?;
        ensure(f.order as u64 == f.expected_order, || format!("|O_{n}| = {} vs {}", f.order, f.expected_order))?;
        if n <= 3 {
            ensure(f.oracle_agrees == Some(true), || format!("O_{n}: engine and oracle disagree"))?;
        }
        if let Some(p) = &f.matching {
            let s = enumerate(Family::On, n, DEFAULT_CAP).map_err(|e| e.to_string())?.semigroup;
            ensure(verify_permutation_matching(&s, p.images()).unwrap_or(false), || format!("O_{n} matching unverified"))?;
        }
        summary.push(format!("O_{n}({}):{}", f.order, if f.has_matching { "yes" } else { "no" }));
    }
    let report = search_q4(&Q4Config::default()).map_err(|e| e.to_string())?;
    ensure(report.disagreements.is_empty(), || format!("{} oracle disagreements", report.disagreements.len()))?;
    let bands: usize = report.shapes.iter().map(|s| s.bands).sum();
    for sep in &report.separators {
        ensure(sep.oracle_confirms == Some(true), || format!("uncertified separator {:?}", sep.pattern))?;
    }
    Ok(format!(
        "{}; search-q4 over {bands} bands found {} separators",
        summary.join(" "),
        report.separators.len()
    ))
}

fn main() -> ExitCode {
    let results = [
        criterion(1, "counterexample B7", Duration::from_millis(100), counterexample_b),
        criterion(2, "T_n matchings via Q-classes", Duration::from_secs(30), transformation_matchings),
        criterion(3, "equivalent matching criteria", Duration::from_secs(120), equivalence_consistency),
        {
            let start = Instant::now();
            let bands = divisible_bands_with_matching(100);
            let sampling = start.elapsed();
            let harem = criterion(4, "harem involutions", Duration::from_secs(60).saturating_sub(sampling), || {
                harem_construction(&bands)
            });
            let colour = criterion(5, "colour alignment pipeline", Duration::from_secs(120), || colour_pipeline(&bands));
            harem && colour
        },
        criterion(6, "involution decision soundness", Duration::from_secs(300), involution_soundness),
        criterion(7, "open-question probes", Duration::from_secs(600), open_question_probes),
    ];
    if results.iter().all(|&r| r) {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: some criteria failed");
        ExitCode::FAILURE
    }
}
