//! `verify`: the built-in cross-verification suites.
//!
//! Runs the teleportation oracle-equivalence checks, the analytic-vs-numeric
//! rate grid, and the simulation loop-closure checks. Any failure lists the
//! observed and expected values and makes the command exit non-zero.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::FileConfig;
use crate::{AppError, CmdResult, VerifyArgs};
use teleqkd_core::keyrate::{
    bb84_alt_rate, bb84_std_rate, gr10_mod_rate, gr10_rate, numeric_rate, p_from_entanglement,
    threshold, LambdaVector, ObservedStats, PurificationSpec, RateOptions, ThresholdOutcome,
    ThresholdTarget,
};
use teleqkd_core::simproto::{
    estimate_errors, expected_raw_key_size, run_protocol, AttackModel, ProtocolConfig,
    ProtocolKind,
};
use teleqkd_core::teleport::{
    bob_state_after_correction, measurement_probs, oracle_teleport, BellOutcome, TeleportParams,
};

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn check(name: &'static str, pass: bool, detail: String) -> Check {
    Check { name, pass, detail }
}

fn teleport_suite(trials: u64, seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_prob: f64 = 0.0;
    let mut worst_fid: f64 = 1.0;
    let mut branches = 0u64;
    for _ in 0..trials {
        let raw: [f64; 4] = std::array::from_fn(|_| rng.random::<f64>() - 0.5);
        let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        let tp = TeleportParams::new(
            Complex64::new(raw[0] / norm, raw[1] / norm),
            Complex64::new(raw[2] / norm, raw[3] / norm),
            rng.random::<f64>(),
            rng.random::<f64>(),
        )
        .expect("normalized draw");
        let probs = measurement_probs(&tp);
        for j in BellOutcome::ALL {
            let p = probs.probs()[j.index()];
            if p <= 1e-6 {
                continue;
            }
            let (op, ostate) = oracle_teleport(j, &tp).expect("supported branch");
            let closed = bob_state_after_correction(j, &tp).expect("supported branch");
            worst_prob = worst_prob.max((op - p).abs());
            worst_fid = worst_fid.min(ostate.fidelity(&closed).expect("qubit dims"));
            branches += 1;
        }
    }
    vec![
        check(
            "teleport oracle probabilities",
            worst_prob <= 1e-10,
            format!("worst |oracle - closed| = {worst_prob:.3e} over {branches} branches (tolerance 1e-10)"),
        ),
        check(
            "teleport oracle states",
            worst_fid >= 1.0 - 1e-10,
            format!("worst fidelity = 1 - {:.3e} (tolerance 1e-10)", 1.0 - worst_fid),
        ),
    ]
}

fn keyrate_suite(inject_fault: bool) -> Vec<Check> {
    let opts = RateOptions::default();
    let mut worst: f64 = 0.0;
    let fault = if inject_fault { 1e-3 } else { 0.0 };
    for i in 0..5 {
        for j in 0..5 {
            let ex = 0.02 + 0.2 * i as f64 / 4.0;
            let ez = 0.02 + 0.2 * j as f64 / 4.0;
            let num = numeric_rate(&PurificationSpec::Bb84Std, &ObservedStats::bb84(ex, ez), &opts)
                .expect("feasible grid point");
            let ana = bb84_std_rate(ex, ez, &opts).expect("feasible grid point").rate + fault;
            worst = worst.max((num.rate - ana).abs());

            let ex_alt = ez / 2.0 + 0.01 + 0.2 * i as f64 / 4.0;
            let num = numeric_rate(
                &PurificationSpec::Bb84Alt,
                &ObservedStats::bb84(ex_alt, ez),
                &opts,
            )
            .expect("feasible grid point");
            let ana = bb84_alt_rate(ex_alt, ez, &opts).expect("feasible grid point").rate;
            worst = worst.max((num.rate - ana).abs());

            let num = numeric_rate(&PurificationSpec::Gr10, &ObservedStats::gr10(ex), &opts)
                .expect("feasible grid point");
            worst = worst.max((num.rate - gr10_rate(ex, &opts).unwrap().rate).abs());

            let p = 0.27 + 0.22 * i as f64 / 4.0;
            let dx = 0.4 * j as f64 / 4.0;
            let num = numeric_rate(
                &PurificationSpec::Gr10Mod { p },
                &ObservedStats::gr10_mod(p, dx),
                &opts,
            )
            .expect("feasible grid point");
            worst = worst.max((num.rate - gr10_mod_rate(p, dx, &opts).unwrap().rate).abs());
        }
    }
    let mut checks = vec![check(
        "analytic vs numeric rates",
        worst <= 1e-6,
        format!("worst |analytic - numeric| = {worst:.3e} over 4 x 25 grid points (tolerance 1e-6)"),
    )];

    let root = match threshold(&ThresholdTarget::Bb84StdSymmetric, &opts) {
        Ok(ThresholdOutcome::Root(r)) => r,
        _ => f64::NAN,
    };
    checks.push(check(
        "bb84-std symmetric threshold",
        (root - 0.110027864438).abs() <= 1e-4,
        format!("root = {root:.6}, expected 0.110028"),
    ));
    let root = match threshold(&ThresholdTarget::Bb84AltSymmetric, &opts) {
        Ok(ThresholdOutcome::Root(r)) => r,
        _ => f64::NAN,
    };
    checks.push(check(
        "bb84-alt symmetric threshold",
        (root - 0.126193083277).abs() <= 1e-4,
        format!("root = {root:.6}, expected 0.126193"),
    ));
    checks
}

fn sigma(p: f64, n: u64) -> f64 {
    (p.clamp(1e-9, 1.0 - 1e-9) * (1.0 - p.clamp(1e-9, 1.0 - 1e-9)) / n as f64).sqrt()
}

fn simproto_suite(seed: u64) -> Vec<Check> {
    let rounds = 20_000u64;
    let mut checks = Vec::new();
    let base = |kind, attack, seed| ProtocolConfig {
        kind,
        rounds,
        n1: 1.0,
        n2: 1.0,
        disclose_fraction: 0.5,
        attack,
        seed,
    };

    // purification loop closure: simulated error statistics must match the
    // weights that generated them
    let lambdas = LambdaVector::new([0.7921, 0.0979, 0.0979, 0.0121]).unwrap();
    let cfg = base(
        ProtocolKind::Bb84,
        AttackModel::Purification {
            spec: PurificationSpec::Bb84Std,
            lambdas,
        },
        seed,
    );
    let est = estimate_errors(&run_protocol(&cfg).unwrap(), None).unwrap();
    for (name, stat) in [
        ("loop closure bb84-std eps-z", est.eps_z.unwrap()),
        ("loop closure bb84-std eps-x", est.eps_x.unwrap()),
    ] {
        let dev = (stat.value - 0.11).abs();
        let tol = 3.0 * sigma(0.11, stat.samples);
        checks.push(check(
            name,
            dev <= tol,
            format!("estimated {:.4}, expected 0.1100 +- {tol:.4}", stat.value),
        ));
    }

    let lambdas = LambdaVector::new([0.86, 0.06, 0.04, 0.04]).unwrap();
    let cfg = base(
        ProtocolKind::Bb84,
        AttackModel::Purification {
            spec: PurificationSpec::Bb84Alt,
            lambdas,
        },
        seed + 1,
    );
    let est = estimate_errors(&run_protocol(&cfg).unwrap(), None).unwrap();
    let ez = est.eps_z.unwrap();
    checks.push(check(
        "loop closure bb84-alt eps-z",
        (ez.value - 0.08).abs() <= 3.0 * sigma(0.08, ez.samples),
        format!("estimated {:.4}, expected 0.0800", ez.value),
    ));

    let lambdas = LambdaVector::new([0.83, 0.07, 0.05, 0.05]).unwrap();
    let cfg = base(
        ProtocolKind::Gr10,
        AttackModel::Purification {
            spec: PurificationSpec::Gr10,
            lambdas,
        },
        seed + 2,
    );
    let est = estimate_errors(&run_protocol(&cfg).unwrap(), None).unwrap();
    let ex = est.eps_x.unwrap();
    checks.push(check(
        "loop closure gr10 eps-x",
        (ex.value - 0.12).abs() <= 3.0 * sigma(0.12, ex.samples),
        format!("estimated {:.4}, expected 0.1200", ex.value),
    ));

    let p = p_from_entanglement(1.0, 0.5).unwrap();
    let lam_plus = 2.0 * p * (1.0 - 0.05);
    let lambdas = LambdaVector::new([0.03, 0.03, lam_plus - 0.03, 1.0 - lam_plus - 0.03]).unwrap();
    let mut cfg = base(
        ProtocolKind::Gr10Modified,
        AttackModel::Purification {
            spec: PurificationSpec::Gr10Mod { p },
            lambdas,
        },
        seed + 3,
    );
    cfg.n1 = 1.0;
    cfg.n2 = 0.5;
    let est = estimate_errors(&run_protocol(&cfg).unwrap(), Some(p)).unwrap();
    let rel = est.rel_deviation.unwrap();
    checks.push(check(
        "loop closure gr10-mod delta-x",
        (rel.value - 0.05).abs() <= 3.0 * sigma(lam_plus, rel.samples) / (2.0 * p),
        format!("estimated {:.4}, expected 0.0500", rel.value),
    ));

    // no-attack agreement follows the entanglement parameters
    let mut cfg = base(ProtocolKind::Gr10Modified, AttackModel::None, seed + 4);
    cfg.n1 = 1.0;
    cfg.n2 = 0.5;
    let t = run_protocol(&cfg).unwrap();
    let agree = t.records.iter().filter(|r| r.alice_bit == r.bob_bit).count() as f64
        / rounds as f64;
    checks.push(check(
        "gr10-mod ideal agreement",
        (agree - 2.0 * p).abs() <= 3.0 * sigma(2.0 * p, rounds),
        format!("agreement {agree:.4}, expected {:.4}", 2.0 * p),
    ));

    // raw-key accounting
    let mut cfg = base(ProtocolKind::Gr10, AttackModel::None, seed + 5);
    cfg.n1 = 0.5;
    let t = run_protocol(&cfg).unwrap();
    let expect = expected_raw_key_size(&cfg).unwrap();
    let tol = 3.0 * sigma(expect / rounds as f64, rounds) * rounds as f64;
    checks.push(check(
        "gr10 raw-key size",
        (t.summary.kept as f64 - expect).abs() <= tol,
        format!("kept {}, expected {expect:.0} +- {tol:.0}", t.summary.kept),
    ));
    checks
}

pub fn run(mut args: VerifyArgs, mut cfg: FileConfig) -> CmdResult {
    cfg.fill("trials", &mut args.trials)?;
    cfg.fill("seed", &mut args.seed)?;
    cfg.fill_flag("inject-fault", &mut args.inject_fault)?;
    cfg.finish()?;

    let trials = args.trials.unwrap_or(500);
    let seed = args.seed.unwrap_or(7);
    let mut checks = Vec::new();
    match args.suite.as_str() {
        "all" => {
            checks.extend(teleport_suite(trials, seed));
            checks.extend(keyrate_suite(args.inject_fault));
            checks.extend(simproto_suite(seed));
        }
        "teleport" => checks.extend(teleport_suite(trials, seed)),
        "keyrate" => checks.extend(keyrate_suite(args.inject_fault)),
        "simproto" => checks.extend(simproto_suite(seed)),
        other => {
            return Err(AppError::Invalid(format!(
                "unknown suite `{other}` (expected all, teleport, keyrate, or simproto)"
            )))
        }
    }

    let mut failures = 0;
    for c in &checks {
        let verdict = if c.pass { "ok  " } else { "FAIL" };
        println!("{verdict} {name}: {detail}", name = c.name, detail = c.detail);
        if !c.pass {
            failures += 1;
        }
    }
    if failures > 0 {
        return Err(AppError::Internal(format!(
            "{failures} of {} verification checks failed",
            checks.len()
        )));
    }
    println!("all {} verification checks passed", checks.len());
    Ok(())
}
