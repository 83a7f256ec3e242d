//! Acceptance gate: one line per criterion, then a single assertion.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use detsum::engine::verify_identity;
use detsum::exact::int;
use detsum::onn::transversal_dets;
use detsum::perms::factorial;
use detsum::svrtan::SearchOptions;
use detsum::{
    alon_tarsi_count, alternating_sum, as_engine_instance, choice_det, colorful_form, invariant_at_identity,
    nonzero_term_census, random, rota_search, svrtan_search, verify_onn, verify_svrtan, ExecConfig, SearchOutcome,
    Shape, SpinorInstance,
};
use num_traits::Zero;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn cfg() -> ExecConfig {
    ExecConfig::default()
}

fn shapes() -> Vec<Shape> {
    [vec![2, 2], vec![3, 2], vec![2, 2, 2], vec![3, 3]]
        .into_iter()
        .map(|s| Shape::new(s).unwrap())
        .collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn general_identity() -> Outcome {
    let mut checked = 0;
    for (k, shape) in shapes().iter().enumerate() {
        let mut rng = random::rng(1000 + k as u64);
        for _ in 0..50 {
            let f = random::dense_form(&mut rng, shape).map_err(|e| e.to_string())?;
            let a = random::matrix_tuple(&mut rng, shape);
            let report = verify_identity(&f, &a, &cfg()).map_err(|e| e.to_string())?;
            ensure(report.holds(), || format!("shape {:?}: {} != {}", shape.sizes(), report.lhs, report.rhs))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} dense forms on 4 shapes"))
}

fn corollary_consistency() -> Outcome {
    let mut checked = 0;
    for (k, shape) in shapes().iter().enumerate() {
        let mut rng = random::rng(1000 + k as u64);
        for _ in 0..50 {
            let f = random::dense_form(&mut rng, shape).map_err(|e| e.to_string())?;
            let _ = random::matrix_tuple(&mut rng, shape);
            let invariant = invariant_at_identity(&f, &cfg()).map_err(|e| e.to_string())?;
            let mut samples = random::rng(2000 + checked);
            for _ in 0..3 {
                let a = random::nonsingular_tuple(&mut samples, shape).map_err(|e| e.to_string())?;
                let sum = alternating_sum(&f, &a, &cfg()).map_err(|e| e.to_string())?;
                let ratio = sum / a.det_product().map_err(|e| e.to_string())?;
                ensure(ratio == invariant, || format!("shape {:?}: ratio {ratio} != {invariant}", shape.sizes()))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} forms x 3 nonsingular samples"))
}

fn onn_identity() -> Outcome {
    for (n, count) in [(2usize, 100u64), (3, 100), (4, 10)] {
        for seed in 0..count {
            let inst = random::colorful_instance(n, seed).map_err(|e| e.to_string())?;
            let report = verify_onn(&inst, &cfg()).map_err(|e| e.to_string())?;
            ensure(report.holds(), || format!("n = {n}, seed = {seed}: {} != {}", report.lhs, report.rhs))?;
            ensure(n != 3 || report.lhs.is_zero(), || format!("n = 3, seed = {seed}: nonzero sum"))?;
        }
    }
    Ok("100 at n=2, 100 at n=3 (all zero), 10 at n=4".into())
}

fn alon_tarsi_cross_oracle() -> Outcome {
    let mut values = Vec::new();
    for n in 1..=4 {
        let latin = alon_tarsi_count(n, &cfg()).map_err(|e| e.to_string())?;
        let engine = invariant_at_identity(&colorful_form(n).map_err(|e| e.to_string())?, &cfg())
            .map_err(|e| e.to_string())?;
        ensure(engine == int(latin as i64), || format!("n = {n}: latin {latin}, engine {engine}"))?;
        values.push(latin);
    }
    ensure(values[..3] == [1, 2, 0], || format!("l(1..3) = {:?}", &values[..3]))?;
    Ok(format!("l(1..4) = {values:?}"))
}

fn svrtan_formula() -> Outcome {
    for (n, count) in [(2usize, 100u64), (3, 100), (4, 100), (5, 100), (6, 10)] {
        for seed in 0..count {
            let inst = random::spinor_instance(n, seed).map_err(|e| e.to_string())?;
            let report = verify_svrtan(&inst, &cfg()).map_err(|e| e.to_string())?;
            ensure(report.holds(), || format!("n = {n}, seed = {seed}: {} != {}", report.lhs, report.rhs))?;
        }
    }
    for n in 1..=6 {
        let report = verify_svrtan(&SpinorInstance::standard(n).unwrap(), &cfg()).map_err(|e| e.to_string())?;
        let expected = int(factorial(n).unwrap() as i64);
        ensure(report.lhs == expected, || format!("standard bases, n = {n}: {}", report.lhs))?;
    }
    Ok("100 each at n=2..5, 10 at n=6, standard bases give n! for n<=6".into())
}

fn tournament_census() -> Outcome {
    let mut counts = Vec::new();
    for n in 2..=5 {
        let c = nonzero_term_census(n, &cfg()).map_err(|e| e.to_string())?;
        ensure(c.holds(), || format!("n = {n}: {c:?}"))?;
        counts.push(format!("{}/{}", c.nonzero, c.total));
    }
    Ok(format!("nonzero terms {}", counts.join(", ")))
}

fn constructive_guarantees() -> Outcome {
    for n in [2usize, 4] {
        for seed in 0..100 {
            let inst = random::colorful_instance(n, seed).map_err(|e| e.to_string())?;
            match rota_search(&inst, detsum::onn::DEFAULT_NODE_CAP).map_err(|e| e.to_string())? {
                SearchOutcome::Found { witness, .. } => {
                    let dets = transversal_dets(&inst, &witness).map_err(|e| e.to_string())?;
                    ensure(dets.iter().all(|d| !d.is_zero()), || format!("rota n = {n}, seed = {seed}: bad witness"))?;
                }
                SearchOutcome::Exhausted { .. } => return Err(format!("rota n = {n}, seed = {seed}: exhausted")),
            }
        }
    }
    for n in 2..=6 {
        for seed in 0..100 {
            let inst = random::spinor_instance(n, seed).map_err(|e| e.to_string())?;
            match svrtan_search(&inst, &SearchOptions::default()).map_err(|e| e.to_string())? {
                SearchOutcome::Found { witness, .. } => {
                    let d = choice_det(&inst, &witness).map_err(|e| e.to_string())?;
                    ensure(!d.is_zero(), || format!("spinor n = {n}, seed = {seed}: bad witness"))?;
                }
                SearchOutcome::Exhausted { .. } => return Err(format!("spinor n = {n}, seed = {seed}: exhausted")),
            }
        }
    }
    Ok("rota 100 each at n=2,4; spinor 100 each at n=2..6; witnesses re-verified".into())
}

fn dual_path() -> Outcome {
    for n in 3..=5 {
        for seed in 0..25 {
            let inst = random::spinor_instance(n, 500 + seed).map_err(|e| e.to_string())?;
            let (form, tuple) = as_engine_instance(&inst).map_err(|e| e.to_string())?;
            let engine = verify_identity(&form, &tuple, &cfg()).map_err(|e| e.to_string())?;
            let direct = verify_svrtan(&inst, &cfg()).map_err(|e| e.to_string())?;
            ensure(engine.lhs == direct.lhs && engine.rhs == direct.rhs, || {
                format!("n = {n}, seed = {seed}: engine {}/{} direct {}/{}", engine.lhs, engine.rhs, direct.lhs, direct.rhs)
            })?;
        }
    }
    Ok("25 each at n=3,4,5".into())
}

fn cli_output(args: &[&str], threads: u32) -> (Vec<u8>, Option<i32>) {
    let out = Command::new(env!("CARGO_BIN_EXE_detsum"))
        .args(args)
        .args(["--threads", &threads.to_string(), "--format", "json"])
        .env_remove("DETSUM_THREADS")
        .output()
        .expect("binary runs");
    (out.stdout, out.status.code())
}

fn determinism() -> Outcome {
    let runs: &[&[&str]] = &[
        &["verify-general", "--shape", "3,3", "--seed", "4"],
        &["invariant", "--form", "colorful", "--n", "4"],
        &["invariant", "--form", "dense", "--shape", "2,2,2", "--seed", "9"],
        &["alon-tarsi", "--n", "5"],
        &["verify-onn", "--n", "3", "--seed", "11"],
        &["verify-onn", "--n", "4", "--seed", "12"],
        &["rota-search", "--n", "4", "--seed", "13"],
        &["verify-svrtan", "--n", "6", "--seed", "14"],
        &["svrtan-search", "--n", "6", "--seed", "15"],
        &["census", "--n", "5"],
    ];
    for args in runs {
        let reference = cli_output(args, 1);
        ensure(reference.1 == Some(0), || format!("{args:?} exited with {:?}", reference.1))?;
        for t in [2, 8] {
            let other = cli_output(args, t);
            ensure(other == reference, || format!("{args:?}: output differs at {t} threads"))?;
        }
    }
    Ok(format!("{} commands at 1, 2 and 8 threads", runs.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("general identity", general_identity),
        ("corollary consistency", corollary_consistency),
        ("colorful identity", onn_identity),
        ("signed Latin count cross-oracle", alon_tarsi_cross_oracle),
        ("n! formula", svrtan_formula),
        ("tournament census", tournament_census),
        ("constructive searches", constructive_guarantees),
        ("dual-path equivalence", dual_path),
        ("thread-count determinism", determinism),
    ];
    let mut failed = Vec::new();
    let mut stderr = std::io::stderr();
    for (k, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = check();
        let elapsed: Duration = started.elapsed();
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        writeln!(stderr, "criterion {}: {status} {name} ({detail}; {:.1} s)", k + 1, elapsed.as_secs_f64()).unwrap();
        if outcome.is_err() {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
