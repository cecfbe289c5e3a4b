//! `curve`: sweep one parameter and emit `x,r[,p,beta]` CSV rows.

use std::io::Write;

use super::{analytic_rate, require, ModelInputs};
use crate::config::FileConfig;
use crate::{AppError, CmdResult, CurveArgs, Model, SweepParam};
use teleqkd_core::fmt::sig9;
use teleqkd_core::keyrate::RateOptions;

/// One curve: the fixed agreement parameter (gr10-mod families) and its
/// `(x, r)` rows.
type Block = (Option<f64>, Vec<(f64, f64)>);

struct Sweep {
    xs: Vec<f64>,
    blocks: Vec<Block>,
}

fn grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    let span = hi - lo;
    (0..steps)
        .map(|i| lo + span * i as f64 / (steps - 1) as f64)
        .collect()
}

pub fn run(mut args: CurveArgs, mut cfg: FileConfig) -> CmdResult {
    cfg.fill_enum("model", &mut args.model)?;
    cfg.fill_enum("param", &mut args.param)?;
    cfg.fill("lo", &mut args.lo)?;
    cfg.fill("hi", &mut args.hi)?;
    cfg.fill("steps", &mut args.steps)?;
    cfg.fill_list("p", &mut args.p)?;
    cfg.fill("delta-x", &mut args.delta_x)?;
    cfg.fill("beta", &mut args.beta)?;
    cfg.fill("out", &mut args.out)?;
    cfg.finish()?;

    let model = require(args.model, "model")?;
    let param = require(args.param, "param")?;
    let lo = require(args.lo, "lo")?;
    let hi = require(args.hi, "hi")?;
    let steps = require(args.steps, "steps")?;
    let out = require(args.out, "out")?;
    let opts = RateOptions::with_beta(args.beta.unwrap_or(1.0));
    opts.validate()?;
    if lo >= hi || !lo.is_finite() || !hi.is_finite() {
        return Err(AppError::Invalid(format!(
            "sweep range needs lo < hi, got [{lo}, {hi}]"
        )));
    }
    if steps < 2 {
        return Err(AppError::Invalid(format!(
            "sweep needs at least 2 steps, got {steps}"
        )));
    }

    let xs = grid(lo, hi, steps);
    let rate_at = |inputs: &ModelInputs| analytic_rate(model, inputs, &opts);
    // Every value is computed before the file is created, so invalid input
    // never leaves a partial CSV behind.
    let sweep = match (model, param) {
        (Model::Bb84Std | Model::Bb84Alt, SweepParam::Eps) => {
            let rows = xs
                .iter()
                .map(|&x| {
                    let inputs = ModelInputs {
                        eps_x: Some(x),
                        eps_z: Some(x),
                        ..ModelInputs::default()
                    };
                    Ok((x, rate_at(&inputs)?.rate))
                })
                .collect::<Result<Vec<_>, AppError>>()?;
            Sweep {
                xs,
                blocks: vec![(None, rows)],
            }
        }
        (Model::Gr10, SweepParam::EpsX) => {
            let rows = xs
                .iter()
                .map(|&x| {
                    let inputs = ModelInputs {
                        eps_x: Some(x),
                        ..ModelInputs::default()
                    };
                    Ok((x, rate_at(&inputs)?.rate))
                })
                .collect::<Result<Vec<_>, AppError>>()?;
            Sweep {
                xs,
                blocks: vec![(None, rows)],
            }
        }
        (Model::Gr10Mod, SweepParam::DeltaX) => {
            if args.p.is_empty() {
                return Err(AppError::Invalid(
                    "gr10-mod delta-x sweeps need at least one --p value".into(),
                ));
            }
            let mut blocks = Vec::new();
            for &p in &args.p {
                let rows = xs
                    .iter()
                    .map(|&x| {
                        let inputs = ModelInputs {
                            p: Some(p),
                            delta_x: Some(x),
                            ..ModelInputs::default()
                        };
                        Ok((x, rate_at(&inputs)?.rate))
                    })
                    .collect::<Result<Vec<_>, AppError>>()?;
                blocks.push((Some(p), rows));
            }
            Sweep { xs, blocks }
        }
        (Model::Gr10Mod, SweepParam::P) => {
            let dx = require(args.delta_x, "delta-x")?;
            let rows = xs
                .iter()
                .map(|&x| {
                    let inputs = ModelInputs {
                        p: Some(x),
                        delta_x: Some(dx),
                        ..ModelInputs::default()
                    };
                    Ok((x, rate_at(&inputs)?.rate))
                })
                .collect::<Result<Vec<_>, AppError>>()?;
            Sweep {
                xs,
                blocks: vec![(None, rows)],
            }
        }
        (m, p) => {
            return Err(AppError::Invalid(format!(
                "model {} cannot sweep parameter {:?}",
                m.name(),
                p
            )))
        }
    };
    debug_assert!(sweep.xs.windows(2).all(|w| w[0] < w[1]));

    let mut file = std::io::BufWriter::new(std::fs::File::create(&out)?);
    let with_p = sweep.blocks.iter().any(|(p, _)| p.is_some());
    if with_p {
        writeln!(file, "x,r,p,beta")?;
    } else {
        writeln!(file, "x,r")?;
    }
    for (p, rows) in &sweep.blocks {
        for &(x, r) in rows {
            match p {
                Some(p) => writeln!(file, "{},{},{},{}", sig9(x), sig9(r), sig9(*p), sig9(opts.beta))?,
                None => writeln!(file, "{},{}", sig9(x), sig9(r))?,
            }
        }
    }
    file.flush()?;
    let total_rows: usize = sweep.blocks.iter().map(|(_, rows)| rows.len()).sum();
    println!("wrote {total_rows} rows to {}", out.display());
    Ok(())
}
