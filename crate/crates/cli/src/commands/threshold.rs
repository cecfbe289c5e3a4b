//! `threshold`: locate the security boundary of a model.

use super::require;
use crate::config::FileConfig;
use crate::{AppError, CmdResult, Model, SweepParam, ThresholdArgs};
use teleqkd_core::keyrate::{threshold, RateOptions, ThresholdOutcome, ThresholdTarget};

fn target_for(args: &ThresholdArgs, model: Model) -> Result<ThresholdTarget, AppError> {
    match model {
        Model::Bb84Std | Model::Bb84Alt => {
            if !args.symmetric {
                return Err(AppError::Invalid(format!(
                    "threshold for {} scans the symmetric error rate; pass --symmetric",
                    model.name()
                )));
            }
            Ok(match model {
                Model::Bb84Std => ThresholdTarget::Bb84StdSymmetric,
                _ => ThresholdTarget::Bb84AltSymmetric,
            })
        }
        Model::Gr10 => Ok(ThresholdTarget::Gr10),
        Model::Gr10Mod => match args.scan {
            Some(SweepParam::DeltaX) => Ok(ThresholdTarget::Gr10ModDeltaX {
                p: require(args.p, "p")?,
            }),
            Some(SweepParam::P) => Ok(ThresholdTarget::Gr10ModP {
                rel_deviation: require(args.delta_x, "delta-x")?,
            }),
            _ => Err(AppError::Invalid(
                "gr10-mod thresholds need --in delta-x (with --p) or --in p (with --delta-x)"
                    .into(),
            )),
        },
    }
}

pub fn run(mut args: ThresholdArgs, mut cfg: FileConfig) -> CmdResult {
    cfg.fill_enum("model", &mut args.model)?;
    cfg.fill_flag("symmetric", &mut args.symmetric)?;
    cfg.fill_enum("in", &mut args.scan)?;
    cfg.fill("p", &mut args.p)?;
    cfg.fill("delta-x", &mut args.delta_x)?;
    cfg.fill("beta", &mut args.beta)?;
    cfg.finish()?;

    let model = require(args.model, "model")?;
    let opts = RateOptions::with_beta(args.beta.unwrap_or(1.0));
    opts.validate()?;
    let target = target_for(&args, model)?;

    println!("model        {}", model.name());
    println!("parameter    {}", target.parameter_name());
    match threshold(&target, &opts)? {
        ThresholdOutcome::Root(root) => println!("threshold    {root:.6}"),
        ThresholdOutcome::NoSignChange => {
            println!("threshold    none (r does not change sign on the scanned interval)")
        }
    }
    Ok(())
}
