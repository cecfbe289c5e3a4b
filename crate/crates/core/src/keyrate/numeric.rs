//! Purification-built numeric rate: the independent cross-check of the
//! closed-form rates.
//!
//! For a candidate weight vector λ the tripartite pure state
//! `|Ψ⟩ = Σⱼ √λⱼ |basisⱼ⟩_AB |eⱼ⟩_E` is constructed on a 16-dimensional
//! space (qubit ⊗ qubit ⊗ 4-dim register). Everything downstream (the
//! measurement joint distribution, Eve's conditional states, and their
//! entropies) is evaluated numerically through the state algebra, never
//! through the closed forms.

use rayon::prelude::*;

use super::optimize::golden_section_min;
use super::{
    devetak_winter, validate_bb84_alt, validate_error_pair, validate_gr10_mod, LambdaVector,
    ObservedStats, PurificationSpec, RateOptions, RateResult,
};
use crate::error::{QkdError, Result};
use crate::qstate::{
    holevo, make_basis, mutual_information, project_pure, projection_prob, reduced_density,
    ComplexScalar, ConditionalEnsemble, JointDistribution, OrthonormalBasis, StateVector,
};

/// Grid density of the scan over the model's free parameter.
const SCAN_POINTS: usize = 10_000;
/// Refinement tolerance of the golden-section stage.
const REFINE_TOL: f64 = 1e-10;

fn build_with(basis: &OrthonormalBasis, lambdas: &LambdaVector) -> Result<StateVector> {
    let mut amps = vec![ComplexScalar::new(0.0, 0.0); 16];
    for (j, w) in lambdas.values().into_iter().enumerate() {
        let sw = w.max(0.0).sqrt();
        for ab in 0..4 {
            amps[ab * 4 + j] = basis.vector(j).amp(ab) * sw;
        }
    }
    StateVector::new(amps)
}

/// Builds the tripartite purification `Σⱼ √λⱼ |basisⱼ⟩_AB |eⱼ⟩_E`.
///
/// Eve's register states `|eⱼ⟩` are the computational basis of the
/// 4-dimensional factor; ordering is (Alice, Bob, Eve) with Alice most
/// significant.
pub fn build_purification(spec: &PurificationSpec, lambdas: &LambdaVector) -> Result<StateVector> {
    build_with(&make_basis(spec.basis_kind())?, lambdas)
}

/// The two numerically derived ingredients of a rate evaluation.
#[derive(Debug, Clone)]
pub struct PurificationParts {
    /// Joint distribution of Alice's and Bob's bits in the model's
    /// preparation/measurement basis.
    pub joint: JointDistribution,
    /// Eve's conditional states `{p_A(a), ρ_{E|a}}`.
    pub ensemble: ConditionalEnsemble,
}

/// Measurement pair encoding bit 0 and bit 1 for the model.
fn measurement_pair(spec: &PurificationSpec) -> (StateVector, StateVector) {
    match spec {
        PurificationSpec::Bb84Std | PurificationSpec::Bb84Alt => {
            (StateVector::zero(), StateVector::one())
        }
        PurificationSpec::Gr10 | PurificationSpec::Gr10Mod { .. } => {
            (StateVector::plus(), StateVector::minus())
        }
    }
}

/// Precomputed per-model pieces shared by every evaluation of a scan.
struct EvalContext {
    basis: OrthonormalBasis,
    m0: StateVector,
    m1: StateVector,
}

impl EvalContext {
    fn new(spec: &PurificationSpec) -> Result<Self> {
        let (m0, m1) = measurement_pair(spec);
        Ok(Self {
            basis: make_basis(spec.basis_kind())?,
            m0,
            m1,
        })
    }
}

fn parts_with(ctx: &EvalContext, lambdas: &LambdaVector) -> Result<PurificationParts> {
    let psi = build_with(&ctx.basis, lambdas)?;
    let dims3 = [2usize, 2, 4];
    let mut joint = [[0.0f64; 2]; 2];
    let mut members = Vec::with_capacity(2);
    for (a, ma) in [(0usize, &ctx.m0), (1, &ctx.m1)] {
        let alice = project_pure(&psi, ma, 0, &dims3)?;
        if let Some(cond) = alice.conditional {
            for (b, mb) in [(0usize, &ctx.m0), (1, &ctx.m1)] {
                joint[a][b] = alice.prob * projection_prob(&cond, mb, 0, &[2, 4])?;
            }
            let rho_e = reduced_density(&cond, &[false, true], &[2, 4])?;
            members.push((alice.prob, rho_e));
        }
    }
    let joint = JointDistribution::new(joint)?;
    let ensemble = ConditionalEnsemble::new(members)?;
    Ok(PurificationParts { joint, ensemble })
}

fn eval_with(ctx: &EvalContext, lambdas: &LambdaVector, opts: &RateOptions) -> Result<RateResult> {
    let parts = parts_with(ctx, lambdas)?;
    let mutual_info = mutual_information(&parts.joint);
    let holevo_bound = holevo(&parts.ensemble)?;
    let rate = devetak_winter(mutual_info, holevo_bound, opts)?;
    Ok(RateResult {
        rate,
        lambdas: lambdas.clone(),
        mutual_info,
        holevo: holevo_bound,
    })
}

/// Evaluates the purification numerically: joint bit distribution via pure
/// state projections, Eve conditionals via projection and partial trace.
///
/// Projecting Alice first leaves a pure conditional on (Bob, Eve), so
/// `ρ_{E|a}` is its Bob-traced projector; this is the same operator the
/// mixed-state route `project(Tr_B ρ_ABE, ·)` produces.
pub fn purification_parts(
    spec: &PurificationSpec,
    lambdas: &LambdaVector,
) -> Result<PurificationParts> {
    parts_with(&EvalContext::new(spec)?, lambdas)
}

/// One fully numeric rate evaluation at a fixed weight vector.
pub fn evaluate_lambdas(
    spec: &PurificationSpec,
    lambdas: &LambdaVector,
    opts: &RateOptions,
) -> Result<RateResult> {
    eval_with(&EvalContext::new(spec)?, lambdas, opts)
}

/// The one-parameter λ family compatible with the observed statistics of a
/// model. Scanning it realizes the minimization over Eve's free parameter.
enum Family {
    /// Weights fully fixed by the observations.
    Fixed(LambdaVector),
    Scan {
        lo: f64,
        hi: f64,
        make: Box<dyn Fn(f64) -> LambdaVector + Sync + Send>,
    },
}

fn lambda_vec(values: [f64; 4]) -> LambdaVector {
    LambdaVector::new(values.map(|v| v.max(0.0))).expect("family weights are a distribution")
}

impl Family {
    fn for_model(spec: &PurificationSpec, stats: &ObservedStats) -> Result<Family> {
        match spec {
            PurificationSpec::Bb84Std => {
                let (ex, ez) = stats.require_error_pair("bb84-std")?;
                validate_error_pair(ex, ez)?;
                // v parametrizes the split of ε_z between λ3 and λ4; the
                // weight positivity of λ2 bounds it from below.
                let lo = if ez > 0.0 { (1.0 - ex / ez).max(0.0) } else { 0.0 };
                let make = move |v: f64| {
                    let u = (1.0 - ex - v * ez) / (1.0 - ez);
                    lambda_vec([
                        u * (1.0 - ez),
                        (1.0 - u) * (1.0 - ez),
                        v * ez,
                        (1.0 - v) * ez,
                    ])
                };
                Ok(Family::Scan {
                    lo,
                    hi: 1.0,
                    make: Box::new(make),
                })
            }
            PurificationSpec::Bb84Alt => {
                let (ex, ez) = stats.require_error_pair("bb84-alt")?;
                validate_bb84_alt(ex, ez)?;
                Ok(Family::Fixed(lambda_vec([
                    1.0 - ex - ez / 2.0,
                    ex - ez / 2.0,
                    ez / 2.0,
                    ez / 2.0,
                ])))
            }
            PurificationSpec::Gr10 => {
                let ex = stats.eps_x.ok_or_else(|| {
                    QkdError::Config("gr10 rate needs eps_x".into())
                })?;
                validate_error_pair(ex, 0.0)?;
                let hi = ex.min(1.0 - ex);
                let make = move |t: f64| lambda_vec([1.0 - ex - t, ex - t, t, t]);
                Ok(Family::Scan {
                    lo: 0.0,
                    hi,
                    make: Box::new(make),
                })
            }
            PurificationSpec::Gr10Mod { p } => {
                let p = *p;
                let dx = stats.rel_deviation.ok_or_else(|| {
                    QkdError::Config("gr10-mod rate needs the relative deviation".into())
                })?;
                if let Some(sp) = stats.p {
                    if (sp - p).abs() > 1e-9 {
                        return Err(QkdError::Infeasible(format!(
                            "observed p = {sp} disagrees with the purification's p = {p}"
                        )));
                    }
                }
                validate_gr10_mod(p, dx)?;
                let lam_plus = 2.0 * p * (1.0 - dx);
                let lam_minus = 1.0 - lam_plus;
                let hi = lam_plus.min(lam_minus);
                let make =
                    move |t: f64| lambda_vec([t, t, lam_plus - t, lam_minus - t]);
                Ok(Family::Scan {
                    lo: 0.0,
                    hi,
                    make: Box::new(make),
                })
            }
        }
    }
}

/// Numeric secret-key fraction: builds the purification for every candidate
/// λ, evaluates mutual information and the Holevo quantity through the state
/// algebra, and minimizes the rate over the model's free parameter with a
/// dense scan plus golden-section refinement.
pub fn numeric_rate(
    spec: &PurificationSpec,
    stats: &ObservedStats,
    opts: &RateOptions,
) -> Result<RateResult> {
    opts.validate()?;
    let family = Family::for_model(spec, stats)?;
    let ctx = EvalContext::new(spec)?;
    match family {
        Family::Fixed(lambdas) => eval_with(&ctx, &lambdas, opts),
        Family::Scan { lo, hi, make } => {
            if hi - lo <= REFINE_TOL {
                return eval_with(&ctx, &make(lo), opts);
            }
            let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
            let rates: Vec<f64> = (0..SCAN_POINTS)
                .into_par_iter()
                .with_min_len(256)
                .map(|i| {
                    let t = lo + step * i as f64;
                    eval_with(&ctx, &make(t), opts).map(|r| r.rate)
                })
                .collect::<Result<Vec<_>>>()?;
            let best = rates
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)
                .expect("scan is non-empty");
            let bracket_lo = lo + step * best.saturating_sub(1) as f64;
            let bracket_hi = (lo + step * (best + 1) as f64).min(hi);
            let t_min = golden_section_min(
                |t| eval_with(&ctx, &make(t), opts).map(|r| r.rate),
                bracket_lo,
                bracket_hi,
                REFINE_TOL,
            )?;
            let mut result = eval_with(&ctx, &make(t_min), opts)?;
            for t in [lo, hi] {
                let candidate = eval_with(&ctx, &make(t), opts)?;
                if candidate.rate < result.rate {
                    result = candidate;
                }
            }
            Ok(result)
        }
    }
}
