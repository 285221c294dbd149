//! Acceptance suite: one PASS/FAIL line per criterion, details indented below.
//! Runs as a plain binary (`harness = false`) so the lines always reach the output.

mod common;

use std::time::{Duration, Instant};

use proptest::test_runner::{Config, TestRunner};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toda_lp::lp::*;
use toda_lp::toda::*;
use toda_lp::{Rational, VarTable};

use common::*;

/// Cap on term products per multiplication and on terms per layer before a
/// symbolic run stops. Peak memory stays near 1.5 GB.
const SWEEP_TERM_BUDGET: usize = 1_000_000;

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

type Criterion = (&'static str, fn() -> Outcome);

fn run_isolated(n: usize, name: &str) -> bool {
    use std::io::Write;
    std::io::stdout().flush().ok();
    let status = std::env::current_exe()
        .and_then(|exe| std::process::Command::new(exe).env("ACCEPTANCE_ONLY", n.to_string()).status());
    match status {
        Ok(s) if s.success() => true,
        Ok(s) if s.code() == Some(1) => false,
        Ok(s) => {
            println!("criterion {n} FAIL: {name}: child process ended abnormally ({s})");
            false
        }
        Err(e) => {
            println!("criterion {n} FAIL: {name}: could not start child process: {e}");
            false
        }
    }
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("golden LP examples", golden_lp),
        ("Laurent property sweep", laurent_sweep),
        ("coprimeness", coprimeness),
        ("c_t recurrence", c_recurrence),
        ("mu_infinity realises one time step", mu_infinity),
        ("closed form after partial mutation", lemma),
        ("reduction to two dimensions", reduction),
        ("degree growth", degree),
        ("core algebra properties", properties),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        if only.is_some_and(|o| o != n) {
            continue;
        }
        if only.is_none() {
            // One child per criterion, so memory held after a large sweep is
            // returned before the next one starts.
            if !run_isolated(n, name) {
                failed.push(n);
            }
            continue;
        }
        let start = Instant::now();
        let out = run();
        let verdict = if out.pass { "PASS" } else { "FAIL" };
        println!("criterion {n} {verdict}: {name}: {} [{:.1?}]", out.summary, start.elapsed());
        for d in &out.details {
            println!("    {d}");
        }
        if !out.pass {
            failed.push(n);
        }
    }
    if only.is_some() {
        std::process::exit(i32::from(!failed.is_empty()));
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}

fn golden_lp() -> Outcome {
    let start = Instant::now();
    let mut table = VarTable::new();
    let seed = parse_seed(include_str!("../../../seeds/lp_abc.seed"), &mut table).unwrap();
    let poly = |s: &str, table: &mut VarTable| toda_lp::laurent::parse(s, table).unwrap();
    let mut checks = Vec::new();

    let c = seed.position(table.symbol("c")).unwrap();
    let hat = compute_hat(&seed, c, DEFAULT_HAT_BOUND).unwrap().hat;
    let expected_hat = poly("a^-1*b^2 + a^-1*b + a^2 + a", &mut table);
    checks.push(("hat of c is F_c / a", hat == expected_hat));

    let (mu_c, _) = mutate(&seed, c, Some("d"), &mut table, DEFAULT_HAT_BOUND).unwrap();
    let expected = parse_seed("a = b + 1\nb = a^2 + d^2\nd = b^2 + b + a^3 + a^2\n", &mut table).unwrap();
    checks.push(("mutation at c", mu_c.same_as(&expected)));

    let d = mu_c.position(table.symbol("d")).unwrap();
    let (back, rec) = mutate(&mu_c, d, None, &mut table, DEFAULT_HAT_BOUND).unwrap();
    checks.push(("mutation at d restores the seed with d' = c", back.same_as(&seed) && rec.new_var == table.symbol("c")));

    let [a, b, cv] = ["a", "b", "c"].map(|n| table.symbol(n));
    let step = |v, n: &str| MutationStep {
        var: v,
        new_name: Some(n.to_string()),
    };
    let (cb, _) = mutate_sequence(&seed, &[step(cv, "d"), step(b, "f")], &mut table, DEFAULT_HAT_BOUND).unwrap();
    let (bc, _) = mutate_sequence(&seed, &[step(b, "f"), step(cv, "d")], &mut table, DEFAULT_HAT_BOUND).unwrap();
    let (f1, f2) = (poly("f + d^2", &mut table), poly("1 + f + d^2", &mut table));
    checks.push(("mu_b mu_c gives F_a = f + d^2", cb.exchange_of(a) == Some(&f1)));
    checks.push(("mu_c mu_b gives F_a = 1 + f + d^2", bc.exchange_of(a) == Some(&f2)));

    let elapsed = start.elapsed();
    let all = checks.iter().all(|c| c.1);
    Outcome {
        pass: all && elapsed < Duration::from_secs(1),
        summary: format!("{}/{} exact matches in {elapsed:.1?} (limit 1s)", checks.iter().filter(|c| c.1).count(), checks.len()),
        details: checks.iter().filter(|c| !c.1).map(|c| format!("mismatch: {}", c.0)).collect(),
    }
}

fn laurent_sweep() -> Outcome {
    let opts = StepOptions {
        term_budget: Some(SWEEP_TERM_BUDGET),
        center_target: None,
    };
    let cases = sweep_cases();
    let mut details = Vec::new();
    let (mut violations, mut full_reach, mut divisions) = (0, 0, 0usize);
    for p in &cases {
        let mut table = VarTable::new();
        let ev = init_symbolic(p, 4, &mut table).evolve_with(5, opts);
        divisions += ev.divisions_ok();
        let max_terms = ev.layers.last().map(|l| l.values.values().map(|v| v.len()).max().unwrap_or(0)).unwrap_or(0);
        let images = line_image_evolution(p, 4, 5, 2024);
        if ev.violated() || images.halted.is_some() {
            violations += 1;
        }
        if ev.reached_t() == 5 {
            full_reach += 1;
        }
        let stop = match &ev.halted {
            None => "complete".to_string(),
            Some(StepError::BudgetExceeded { t, estimate, .. }) => format!("budget stop before t={t} (estimate {estimate} terms)"),
            Some(e) => format!("VIOLATION {e}"),
        };
        let img = match &images.halted {
            None => format!("images t={} ok", images.reached_t()),
            Some(e) => format!("images FAILED {e}"),
        };
        details.push(format!(
            "{}: symbolic t={} ({} divisions, max {} terms, {stop}); {img}",
            describe(p),
            ev.reached_t(),
            ev.divisions_ok(),
            max_terms
        ));
    }
    Outcome {
        pass: violations == 0,
        summary: format!(
            "{} cases, {violations} failed divisions; {divisions} exact symbolic divisions; symbolic t=5 reached in {full_reach} cases within {SWEEP_TERM_BUDGET} terms, line images reach t=5 on the full window in all others",
            cases.len()
        ),
        details,
    }
}

fn coprimeness() -> Outcome {
    let opts = StepOptions {
        term_budget: Some(SWEEP_TERM_BUDGET),
        center_target: None,
    };
    let unit = TodaParams::unit(1, 1).unwrap();
    let cases = sweep_cases();
    let mut details = Vec::new();
    let (mut nonunits, mut unit_skip, mut violations, mut full_reach) = (0, 1.0, 0, 0);
    for p in cases.iter().cloned() {
        let mut table = VarTable::new();
        let ev = init_symbolic(&p, 3, &mut table).evolve_with(4, opts);
        if ev.violated() {
            violations += 1;
        }
        let rep = coprimeness_matrix(&ev.layers, DEFAULT_PAIR_TERM_BUDGET);
        if ev.reached_t() == 4 {
            full_reach += 1;
        }
        nonunits += rep.nonunits;
        if p == unit {
            unit_skip = rep.skipped_fraction;
        }
        details.push(format!(
            "{}: t<={} {} pairs, {} units, {} non-units, skipped {:.1}%",
            describe(&p),
            ev.reached_t(),
            rep.pairs,
            rep.units,
            rep.nonunits,
            100.0 * rep.skipped_fraction
        ));
        for e in rep.exceptions.iter().filter(|e| e.verdict == PairVerdict::NonunitGcd) {
            details.push(format!("  non-unit gcd: {:?} and {:?}", e.first, e.second));
        }
    }
    Outcome {
        pass: nonunits == 0 && violations == 0 && unit_skip < 0.5,
        summary: format!(
            "{nonunits} non-unit pairs; unit case skipped {:.1}% (must be < 50%); t=4 reached in {full_reach} of {} cases within {SWEEP_TERM_BUDGET} terms, the rest compared up to t=3",
            100.0 * unit_skip,
            cases.len()
        ),
        details,
    }
}

fn c_recurrence() -> Outcome {
    let unit = TodaParams::unit(1, 1).unwrap();
    let seq = c_sequence(&unit, rat(1), rat(1), 6);
    let expected: Vec<Rational> = [1, 1, 2, 8, 64, 1024, 32768].map(rat).to_vec();
    let values_ok = seq.values == expected;

    let lattice = init_all_ones::<Rational>(&unit, 5).evolve(5);
    let center = LatticePoint::origin(2);
    let lattice_ok = lattice.reached_t() == 5
        && lattice.layers.iter().all(|l| l.get(&center) == Some(&seq.values[l.t as usize]));

    let mut details = vec![format!(
        "unit case: {:?}; all-ones lattice center agrees for t<=5: {lattice_ok}",
        seq.values.iter().map(|v| v.to_string()).collect::<Vec<_>>()
    )];
    let mut sweep_ok = true;
    for p in sweep_cases() {
        let f = c_sequence_factored(&p, 12);
        // Cross-check the factored form against direct rational iteration while the numbers stay small.
        let direct = c_sequence(&p, rat(1), rat(1), 12.min(direct_reach(&f)));
        let agree = direct
            .values
            .iter()
            .enumerate()
            .all(|(t, v)| f.value(t, 20_000.0).map(Rational::from_integer).as_ref() == Some(v));
        let ok = f.integral_certified && f.increasing_from_2_certified && agree && direct.all_integral;
        sweep_ok &= ok;
        details.push(format!(
            "{}: integral {} increasing {} (certified to t=12, direct check to t={}), log10 c_12 = {:.4e}",
            describe(&p),
            f.integral_certified,
            f.increasing_from_2_certified,
            direct.values.len() - 1,
            f.log10_values[12]
        ));
    }
    Outcome {
        pass: values_ok && lattice_ok && sweep_ok,
        summary: format!(
            "unit sequence exact: {values_ok}; lattice cross-check: {lattice_ok}; integrality and increase to t=12 for all swept sets: {sweep_ok}"
        ),
        details,
    }
}

/// Last index whose value has at most 20000 digits.
fn direct_reach(f: &FactoredCSequence) -> u32 {
    f.log10_values.iter().take_while(|&&l| l <= 20_000.0).count() as u32 - 1
}

fn mu_infinity() -> Outcome {
    let mut runs = 0;
    let mut failures = Vec::new();
    for (a, b) in [(1, 1), (2, 1)] {
        for p in all_small_patterns(a, b) {
            let m = LatticePoint::origin(p.dim());
            for order in 1..=5u64 {
                let mut table = VarTable::new();
                runs += 1;
                match mu_infinity_check(&p, 3, &m, Some(order), &mut table) {
                    Ok(r) if r.passed => {}
                    Ok(r) => failures.push(format!("{} order {order}: {:?}", describe(&p), r.mismatch_detail)),
                    Err(e) => failures.push(format!("{} order {order}: {e}", describe(&p))),
                }
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        summary: format!(
            "{runs} runs (every k,l in {{1,2}} for (1,1) and (2,1), radius 3, 5 shuffled orders each), {} mismatches",
            failures.len()
        ),
        details: failures,
    }
}

fn lemma() -> Outcome {
    let cases = [
        TodaParams::unit(1, 1).unwrap(),
        TodaParams::new(1, 1, vec![2, 1], vec![1, 3]).unwrap(),
        TodaParams::unit(2, 1).unwrap(),
        TodaParams::new(2, 1, vec![1, 2, 1], vec![2, 1, 3]).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let (mut runs, mut failures) = (0, Vec::new());
    let mut details = Vec::new();
    for p in &cases {
        let m = LatticePoint::origin(p.dim());
        let stencil: Vec<LatticePoint> = (0..p.dim()).flat_map(|i| [m.shifted(i, 1), m.shifted(i, -1)]).collect();
        let mut subsets = 0;
        for mask in 0..(1u32 << stencil.len()) {
            let k: Vec<LatticePoint> =
                stencil.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, n)| n.clone()).collect();
            subsets += 1;
            for _ in 0..3 {
                let mut order = k.clone();
                order.shuffle(&mut rng);
                let mut table = VarTable::new();
                runs += 1;
                match lemma_check(p, 2, &m, &order, &mut table) {
                    Ok(r) if r.equal => {}
                    Ok(r) => failures.push(format!("{} K={order:?}: {} vs {}", describe(p), r.engine, r.formula)),
                    Err(e) => failures.push(format!("{} K={order:?}: {e}", describe(p))),
                }
            }
        }
        details.push(format!("{}: {subsets} subsets x 3 orders", describe(p)));
    }
    details.extend(failures.iter().cloned());
    Outcome {
        pass: failures.is_empty(),
        summary: format!("{runs} engine runs, {} disagree with the closed form", failures.len()),
        details,
    }
}

fn reduction() -> Outcome {
    let cases = [
        TodaParams::unit(2, 1).unwrap(),
        TodaParams::new(2, 1, vec![1, 2, 1], vec![2, 1, 2]).unwrap(),
        TodaParams::unit(2, 2).unwrap(),
        TodaParams::new(2, 2, vec![2, 1, 1, 2], vec![1, 1, 2, 1]).unwrap(),
    ];
    let mut details = Vec::new();
    let mut ok = true;
    for p in &cases {
        let mut table = VarTable::new();
        match reduction_consistency_symbolic(p, 3, 3, &mut table) {
            Ok(r) => {
                ok &= r.consistent;
                details.push(format!(
                    "{}: reduced {:?}, {} values compared, {} mismatches",
                    describe(p),
                    r.reduced,
                    r.compared,
                    r.mismatches.len()
                ));
            }
            Err(e) => {
                ok = false;
                details.push(format!("{}: {e}", describe(p)));
            }
        }
    }
    Outcome {
        pass: ok,
        summary: format!("{} parameter sets, symbolic class data, t<=3, radius 3", cases.len()),
        details,
    }
}

/// Ratio threshold for the non-integrable case, frozen from the exact spans
/// 1, 1, 4, 11, 29, 76 (ratios 2.75, 2.64, 2.62) and the t=6 lower bound.
const NONINTEGRABLE_RATIO_FLOOR: f64 = 1.3;

fn exact_center_spans(p: &TodaParams, t_max: u32) -> Vec<i64> {
    let mut table = VarTable::new();
    let opts = StepOptions {
        term_budget: None,
        center_target: Some(t_max),
    };
    let ev = init_symbolic(p, t_max as i64 - 1, &mut table).evolve_with(t_max, opts);
    assert!(ev.halted.is_none(), "{:?}", ev.halted);
    degree_growth(&ev.layers).unwrap().layers.iter().map(|l| l.stats.span().unwrap()).collect()
}

fn degree() -> Outcome {
    let unit = TodaParams::unit(1, 1).unwrap();
    let spans = exact_center_spans(&unit, 6);
    let ratios: Vec<f64> = (3..=6).map(|t| spans[t] as f64 / spans[t - 1] as f64).collect();
    let decreasing = ratios.windows(2).all(|w| w[1] < w[0]);

    let p = TodaParams::new(1, 1, vec![2, 1], vec![1, 1]).unwrap();
    let exact = exact_center_spans(&p, 5);
    let bounds = span_lower_bounds(&p, 6, 1, 4);
    let (floor_ok, growth_line) = match &bounds {
        Ok(b) => {
            let lb6 = b[6].span_at_least;
            let mut r: Vec<f64> = (3..=5).map(|t| exact[t] as f64 / exact[t - 1] as f64).collect();
            r.push(lb6 as f64 / exact[5] as f64);
            (
                r.iter().all(|&x| x >= NONINTEGRABLE_RATIO_FLOOR),
                format!(
                    "k=(2,1), l=(1,1): exact spans {exact:?}, span_6 >= {lb6}; ratios t=3..6 {:?} (last is a lower bound)",
                    r.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>()
                ),
            )
        }
        Err(e) => (false, format!("k=(2,1), l=(1,1): line images failed: {e}")),
    };
    Outcome {
        pass: decreasing && floor_ok,
        summary: format!(
            "unit ratios strictly decreasing: {decreasing}; k=(2,1) ratios >= {NONINTEGRABLE_RATIO_FLOOR}: {floor_ok} (indicative only)"
        ),
        details: vec![
            format!(
                "unit: exact center spans {spans:?}; ratios t=3..6 {:?}",
                ratios.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>()
            ),
            growth_line,
        ],
    }
}

fn properties() -> Outcome {
    let config = Config {
        cases: PROPERTY_CASES,
        failure_persistence: None,
        ..Config::default()
    };
    let mut details = Vec::new();
    let mut ok = true;
    let mut record = |name: &str, result: Result<(), String>| {
        ok &= result.is_ok();
        details.push(match result {
            Ok(()) => format!("{name}: {PROPERTY_CASES} cases ok"),
            Err(e) => format!("{name}: FAILED {e}"),
        });
    };
    let mut runner = TestRunner::new(config.clone());
    record(
        "ring axioms",
        runner
            .run(&(laurent_strategy(), laurent_strategy(), laurent_strategy()), ring_axioms)
            .map_err(|e| e.to_string()),
    );
    let mut runner = TestRunner::new(config.clone());
    record(
        "evaluation homomorphism",
        runner
            .run(&(laurent_strategy(), laurent_strategy(), point_strategy()), evaluation_homomorphism)
            .map_err(|e| e.to_string()),
    );
    let mut runner = TestRunner::new(config.clone());
    record(
        "exact_div inverts mul",
        runner.run(&(laurent_strategy(), nonzero_laurent_strategy()), div_mul_inverse).map_err(|e| e.to_string()),
    );
    let mut runner = TestRunner::new(config.clone());
    record(
        "gcd symmetry and unit-correctness",
        runner
            .run(
                &(small_poly_strategy(), small_poly_strategy(), small_poly_strategy(), unit_strategy()),
                gcd_properties,
            )
            .map_err(|e| e.to_string()),
    );
    let mut runner = TestRunner::new(config);
    record("serialize/parse round trip", runner.run(&laurent_strategy(), text_round_trip).map_err(|e| e.to_string()));
    Outcome {
        pass: ok,
        summary: format!("5 randomized suites of {PROPERTY_CASES} cases"),
        details,
    }
}

