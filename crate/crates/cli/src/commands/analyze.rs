//! `analyze`: one rate evaluation with the full breakdown.

use super::{analytic_rate, require, ModelInputs};
use crate::config::FileConfig;
use crate::{AnalyzeArgs, CmdResult};
use teleqkd_core::fmt::sig9;
use teleqkd_core::keyrate::RateOptions;

pub fn run(mut args: AnalyzeArgs, mut cfg: FileConfig) -> CmdResult {
    cfg.fill_enum("model", &mut args.model)?;
    cfg.fill("eps-x", &mut args.eps_x)?;
    cfg.fill("eps-z", &mut args.eps_z)?;
    cfg.fill("p", &mut args.p)?;
    cfg.fill("delta-x", &mut args.delta_x)?;
    cfg.fill("beta", &mut args.beta)?;
    cfg.finish()?;

    let model = require(args.model, "model")?;
    let opts = RateOptions::with_beta(args.beta.unwrap_or(1.0));
    opts.validate()?;
    let inputs = ModelInputs {
        eps_x: args.eps_x,
        eps_z: args.eps_z,
        p: args.p,
        delta_x: args.delta_x,
    };
    let result = analytic_rate(model, &inputs, &opts)?;

    println!("model        {}", model.name());
    for (name, value) in [
        ("eps-x", inputs.eps_x),
        ("eps-z", inputs.eps_z),
        ("p", inputs.p),
        ("delta-x", inputs.delta_x),
    ] {
        if let Some(v) = value {
            println!("{name:<12} {}", sig9(v));
        }
    }
    println!("beta         {}", sig9(opts.beta));
    println!("r            {}", sig9(result.rate));
    println!("I(A:B)       {}", sig9(result.mutual_info));
    println!("chi(A:E)     {}", sig9(result.holevo));
    let lam = result.lambdas.values();
    println!(
        "lambda       {} {} {} {}",
        sig9(lam[0]),
        sig9(lam[1]),
        sig9(lam[2]),
        sig9(lam[3])
    );
    let verdict = if result.secure() {
        "secure (r > 0)"
    } else {
        "insecure (r <= 0)"
    };
    println!("verdict      {verdict}");
    Ok(())
}
