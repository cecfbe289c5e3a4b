//! `simulate`: run a protocol, write the transcript and summary CSV, and
//! feed the estimated errors into the matching rate model.

use std::io::Write;
use std::path::PathBuf;

use super::require;
use crate::config::FileConfig;
use crate::{AppError, Attack, BasisPolicy, CmdResult, Model, Protocol, SimulateArgs};
use teleqkd_core::fmt::sig9;
use teleqkd_core::keyrate::{
    bb84_std_rate, gr10_mod_rate, gr10_rate, p_from_entanglement, LambdaVector, PurificationSpec,
    RateOptions, RateResult,
};
use teleqkd_core::simproto::{
    estimate_errors, run_protocol, summary_csv_header, summary_csv_row, AttackModel,
    ErrorEstimate, InterceptBasis, ProtocolConfig, ProtocolKind, RateStat,
};

fn parse_lambdas(raw: &str) -> Result<LambdaVector, AppError> {
    let parts: Vec<f64> = raw
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| AppError::Invalid(format!("--lambdas: cannot parse `{s}`")))
        })
        .collect::<Result<_, _>>()?;
    let values: [f64; 4] = parts
        .try_into()
        .map_err(|_| AppError::Invalid("--lambdas needs exactly four weights".into()))?;
    Ok(LambdaVector::new(values)?)
}

fn attack_model(args: &SimulateArgs) -> Result<AttackModel, AppError> {
    Ok(match args.attack.unwrap_or(Attack::None) {
        Attack::None => AttackModel::None,
        Attack::Depolarizing => AttackModel::Depolarizing {
            eps: require(args.attack_eps, "attack-eps")?,
        },
        Attack::InterceptResend => AttackModel::InterceptResend {
            basis: match args.intercept_basis.unwrap_or(BasisPolicy::Random) {
                BasisPolicy::Z => InterceptBasis::Z,
                BasisPolicy::X => InterceptBasis::X,
                BasisPolicy::Random => InterceptBasis::Random,
            },
        },
        Attack::Purification => {
            let model = require(args.pur_model, "pur-model")?;
            let lambdas = parse_lambdas(&require(args.lambdas.clone(), "lambdas")?)?;
            let spec = match model {
                Model::Bb84Std => PurificationSpec::Bb84Std,
                Model::Bb84Alt => PurificationSpec::Bb84Alt,
                Model::Gr10 => PurificationSpec::Gr10,
                Model::Gr10Mod => {
                    let n1 = args.n1.unwrap_or(1.0);
                    let n2 = args.n2.unwrap_or(1.0);
                    PurificationSpec::Gr10Mod {
                        p: p_from_entanglement(n1, n2)?,
                    }
                }
            };
            AttackModel::Purification { spec, lambdas }
        }
    })
}

/// The matching rate model for the protocol's estimated statistics, when the
/// needed statistics are available.
fn derived_rate(
    kind: ProtocolKind,
    est: &ErrorEstimate,
    ideal_p: Option<f64>,
    opts: &RateOptions,
) -> Result<Option<(RateResult, &'static str)>, AppError> {
    let value = |s: &Option<RateStat>| s.as_ref().map(|r| r.value);
    Ok(match kind {
        ProtocolKind::Bb84 | ProtocolKind::Bb84KeepAll => {
            match (value(&est.eps_x), value(&est.eps_z)) {
                (Some(ex), Some(ez)) => Some((bb84_std_rate(ex, ez, opts)?, "bb84-std")),
                _ => None,
            }
        }
        ProtocolKind::Gr10 => value(&est.eps_x)
            .map(|ex| gr10_rate(ex, opts).map(|r| (r, "gr10")))
            .transpose()?,
        ProtocolKind::Gr10Modified => match (ideal_p, value(&est.rel_deviation)) {
            // sampling noise can push the estimate marginally below zero
            (Some(p), Some(dx)) => Some((gr10_mod_rate(p, dx.max(0.0), opts)?, "gr10-mod")),
            _ => None,
        },
    })
}

pub fn run(mut args: SimulateArgs, mut cfg: FileConfig) -> CmdResult {
    cfg.fill_enum("protocol", &mut args.protocol)?;
    cfg.fill("rounds", &mut args.rounds)?;
    cfg.fill("n1", &mut args.n1)?;
    cfg.fill("n2", &mut args.n2)?;
    cfg.fill("disclose-fraction", &mut args.disclose_fraction)?;
    cfg.fill_enum("attack", &mut args.attack)?;
    cfg.fill("attack-eps", &mut args.attack_eps)?;
    cfg.fill_enum("intercept-basis", &mut args.intercept_basis)?;
    cfg.fill_enum("pur-model", &mut args.pur_model)?;
    cfg.fill("lambdas", &mut args.lambdas)?;
    cfg.fill("seed", &mut args.seed)?;
    cfg.fill("beta", &mut args.beta)?;
    cfg.fill("out-dir", &mut args.out_dir)?;
    cfg.fill("transcript", &mut args.transcript)?;
    cfg.fill("summary", &mut args.summary)?;
    cfg.finish()?;

    let kind = match require(args.protocol, "protocol")? {
        Protocol::Bb84 => ProtocolKind::Bb84,
        Protocol::Bb84KeepAll => ProtocolKind::Bb84KeepAll,
        Protocol::Gr10 => ProtocolKind::Gr10,
        Protocol::Gr10Mod => ProtocolKind::Gr10Modified,
    };
    let config = ProtocolConfig {
        kind,
        rounds: require(args.rounds, "rounds")?,
        n1: args.n1.unwrap_or(1.0),
        n2: args.n2.unwrap_or(1.0),
        disclose_fraction: args.disclose_fraction.unwrap_or(0.5),
        attack: attack_model(&args)?,
        seed: require(args.seed, "seed")?,
    };
    config.validate()?;
    let opts = RateOptions::with_beta(args.beta.unwrap_or(1.0));
    opts.validate()?;

    let out_dir = args
        .out_dir
        .or_else(|| std::env::var_os("TELEQKD_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let transcript_path = args
        .transcript
        .unwrap_or_else(|| out_dir.join("transcript.txt"));
    let summary_path = args.summary.unwrap_or_else(|| out_dir.join("summary.csv"));

    let transcript = run_protocol(&config)?;
    let ideal_p = match kind {
        ProtocolKind::Gr10Modified => Some(p_from_entanglement(config.n1, config.n2)?),
        _ => None,
    };
    let est = estimate_errors(&transcript, ideal_p)?;
    let derived = derived_rate(kind, &est, ideal_p, &opts)?;

    std::fs::write(&transcript_path, transcript.to_lines())?;
    let mut summary = std::io::BufWriter::new(std::fs::File::create(&summary_path)?);
    writeln!(summary, "{}", summary_csv_header())?;
    writeln!(summary, "{}", summary_csv_row(&transcript, &est))?;
    summary.flush()?;

    println!("protocol     {}", kind.name());
    println!("rounds       {}", config.rounds);
    println!("seed         {}", config.seed);
    println!("kept         {}", transcript.summary.kept);
    println!("discarded    {}", transcript.summary.discarded);
    println!("disclosed    {}", transcript.summary.disclosed);
    let stat_line = |name: &str, stat: &Option<RateStat>| {
        if let Some(s) = stat {
            println!("{name:<12} {} (n = {})", sig9(s.value), s.samples);
        }
    };
    stat_line("eps-z", &est.eps_z);
    stat_line("eps-x", &est.eps_x);
    println!(
        "agreement    {} (n = {})",
        sig9(est.agreement.value),
        est.agreement.samples
    );
    stat_line("delta-x", &est.deviation);
    stat_line("rel-delta-x", &est.rel_deviation);
    if let Some(p) = ideal_p {
        println!("ideal-p      {}", sig9(p));
    }
    match derived {
        Some((r, model)) => {
            println!("rate-model   {model}");
            println!("r            {}", sig9(r.rate));
            let verdict = if r.secure() {
                "secure (r > 0)"
            } else {
                "insecure (r <= 0)"
            };
            println!("verdict      {verdict}");
        }
        None => println!("r            unavailable (needed statistics were not estimated)"),
    }
    println!("transcript   {}", transcript_path.display());
    println!("summary      {}", summary_path.display());
    Ok(())
}
