pub mod analyze;
pub mod curve;
pub mod simulate;
pub mod threshold;
pub mod verify;

use crate::{AppError, Model};
use teleqkd_core::keyrate::{
    bb84_alt_rate, bb84_std_rate, gr10_mod_rate, gr10_rate, RateOptions, RateResult,
};

/// Unwraps a required option with a uniform message naming the flag.
pub fn require<T>(value: Option<T>, flag: &str) -> Result<T, AppError> {
    value.ok_or_else(|| AppError::Invalid(format!("missing required option --{flag}")))
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Bb84Std => "bb84-std",
            Model::Bb84Alt => "bb84-alt",
            Model::Gr10 => "gr10",
            Model::Gr10Mod => "gr10-mod",
        }
    }
}

/// Observed statistics a command collected for one model evaluation.
#[derive(Debug, Clone, Copy, Default)]
pub struct ModelInputs {
    pub eps_x: Option<f64>,
    pub eps_z: Option<f64>,
    pub p: Option<f64>,
    pub delta_x: Option<f64>,
}

/// Dispatches to the model's closed-form rate, checking that the required
/// statistics are present.
pub fn analytic_rate(
    model: Model,
    inputs: &ModelInputs,
    opts: &RateOptions,
) -> Result<RateResult, AppError> {
    let r = match model {
        Model::Bb84Std => bb84_std_rate(
            require(inputs.eps_x, "eps-x")?,
            require(inputs.eps_z, "eps-z")?,
            opts,
        )?,
        Model::Bb84Alt => bb84_alt_rate(
            require(inputs.eps_x, "eps-x")?,
            require(inputs.eps_z, "eps-z")?,
            opts,
        )?,
        Model::Gr10 => gr10_rate(require(inputs.eps_x, "eps-x")?, opts)?,
        Model::Gr10Mod => gr10_mod_rate(
            require(inputs.p, "p")?,
            require(inputs.delta_x, "delta-x")?,
            opts,
        )?,
    };
    Ok(r)
}
