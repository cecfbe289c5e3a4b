//! Asymptotic secret-key fractions and security thresholds.
//!
//! Four purification models are analyzed: the standard BB84 decomposition
//! over the Bell basis, the alternative BB84 decomposition over the
//! Bell-pair/product basis, the GR10 decomposition in the x-basis, and the
//! modified-GR10 decomposition over the rotated (ξ) basis. Each model has a
//! closed-form rate here and an independent purification-built evaluation in
//! [`numeric_rate`] that must agree with it.
//!
//! A rate `r > 0` (strictly) classifies the observed statistics as secure;
//! rates are reported as computed, including negative values.
//!
//! ```
//! use teleqkd_core::keyrate::{bb84_std_rate, gr10_rate, RateOptions};
//!
//! let opts = RateOptions::default();
//! let bb84 = bb84_std_rate(0.05, 0.05, &opts).unwrap();
//! assert!((bb84.rate - 0.4272060857680875).abs() < 1e-12);
//! // the GR10 rate coincides with the symmetric BB84 rate pointwise
//! let gr10 = gr10_rate(0.05, &opts).unwrap();
//! assert!((gr10.rate - bb84.rate).abs() < 1e-12);
//! ```

mod numeric;
mod optimize;

pub use numeric::{
    build_purification, evaluate_lambdas, numeric_rate, purification_parts, PurificationParts,
};

use optimize::{bisect_root, find_sign_change};

use crate::error::{QkdError, Result};
use crate::qstate::{BasisKind, DOMAIN_SLACK};

/// Tolerance on threshold roots, absolute in the scanned parameter.
pub const THRESHOLD_TOL: f64 = 1e-6;

/// Intervals scanned for a sign change before bisection.
const THRESHOLD_SCAN_STEPS: usize = 512;

/// Which purification model the analysis uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PurificationSpec {
    /// BB84 over the four Bell states.
    Bb84Std,
    /// BB84 over `{Φ⁺, Φ⁻, |01⟩, |10⟩}`; forces λ3 = λ4.
    Bb84Alt,
    /// GR10 over the x-basis variant of the alternative decomposition;
    /// forces λ3 = λ4.
    Gr10,
    /// Modified GR10 over the rotated basis with agreement probability
    /// `p ∈ (¼, ½]`; forces λ1 = λ2.
    Gr10Mod { p: f64 },
}

impl PurificationSpec {
    /// The orthonormal basis underlying the purification.
    pub fn basis_kind(&self) -> BasisKind {
        match self {
            Self::Bb84Std => BasisKind::Bell,
            Self::Bb84Alt => BasisKind::Tilde,
            Self::Gr10 => BasisKind::XBell,
            Self::Gr10Mod { p } => BasisKind::Xi { p: *p },
        }
    }
}

/// Schmidt weights of a purification; non-negative, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaVector {
    values: [f64; 4],
}

impl LambdaVector {
    /// Validates non-negativity (tiny negatives within [`DOMAIN_SLACK`] are
    /// clamped) and unit sum.
    pub fn new(values: [f64; 4]) -> Result<Self> {
        let mut clean = [0.0; 4];
        for (slot, v) in clean.iter_mut().zip(values) {
            if !v.is_finite() || v < -DOMAIN_SLACK {
                return Err(QkdError::Domain(format!("negative weight {v}")));
            }
            *slot = v.max(0.0);
        }
        let total: f64 = clean.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(QkdError::InvalidState(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(Self { values: clean })
    }

    pub fn values(&self) -> [f64; 4] {
        self.values
    }

    /// Weight by one-based index `j ∈ {1,..,4}`.
    pub fn get(&self, j: usize) -> f64 {
        self.values[j - 1]
    }

    /// Checks the model's structural constraint (λ3 = λ4 for the alternative
    /// BB84 and GR10 decompositions, λ1 = λ2 for modified GR10).
    pub fn check_constraint(&self, spec: &PurificationSpec) -> Result<()> {
        let dev = match spec {
            PurificationSpec::Bb84Std => 0.0,
            PurificationSpec::Bb84Alt | PurificationSpec::Gr10 => {
                (self.values[2] - self.values[3]).abs()
            }
            PurificationSpec::Gr10Mod { .. } => (self.values[0] - self.values[1]).abs(),
        };
        if dev > 1e-9 {
            return Err(QkdError::Infeasible(format!(
                "weights violate the model constraint by {dev:.3e}"
            )));
        }
        Ok(())
    }
}

/// Measured or assumed statistics feeding the rate formulas. Absent fields
/// are simply unknown; each model states what it needs.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ObservedStats {
    /// z-basis error rate.
    pub eps_z: Option<f64>,
    /// x-basis error rate.
    pub eps_x: Option<f64>,
    /// Relative deviation of agreement (modified GR10).
    pub rel_deviation: Option<f64>,
    /// Ideal agreement parameter `p` (modified GR10).
    pub p: Option<f64>,
}

impl ObservedStats {
    pub fn bb84(eps_x: f64, eps_z: f64) -> Self {
        Self {
            eps_x: Some(eps_x),
            eps_z: Some(eps_z),
            ..Self::default()
        }
    }

    pub fn gr10(eps_x: f64) -> Self {
        Self {
            eps_x: Some(eps_x),
            ..Self::default()
        }
    }

    pub fn gr10_mod(p: f64, rel_deviation: f64) -> Self {
        Self {
            rel_deviation: Some(rel_deviation),
            p: Some(p),
            ..Self::default()
        }
    }

    fn require_error_pair(&self, model: &str) -> Result<(f64, f64)> {
        match (self.eps_x, self.eps_z) {
            (Some(ex), Some(ez)) => Ok((ex, ez)),
            _ => Err(QkdError::Config(format!(
                "{model} rate needs both eps_x and eps_z"
            ))),
        }
    }
}

/// Post-processing options; `beta` is the reconciliation efficiency applied
/// multiplicatively to the mutual information.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateOptions {
    pub beta: f64,
}

impl Default for RateOptions {
    fn default() -> Self {
        Self { beta: 1.0 }
    }
}

impl RateOptions {
    pub fn with_beta(beta: f64) -> Self {
        Self { beta }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(QkdError::Domain(format!(
                "reconciliation efficiency β = {} ∉ [0, 1]",
                self.beta
            )));
        }
        Ok(())
    }
}

/// A secret-key-fraction evaluation: the rate, the weights at Eve's optimum,
/// and the two terms it was built from (`rate = β·mutual_info − holevo`).
#[derive(Debug, Clone)]
pub struct RateResult {
    pub rate: f64,
    pub lambdas: LambdaVector,
    pub mutual_info: f64,
    pub holevo: f64,
}

impl RateResult {
    /// Strict security classification.
    pub fn secure(&self) -> bool {
        self.rate > 0.0
    }
}

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

fn h(x: f64) -> f64 {
    -plogp(x) - plogp(1.0 - x)
}

fn sum_lambda_log(values: [f64; 4]) -> f64 {
    values.into_iter().map(plogp).sum()
}

pub(crate) fn validate_error_pair(eps_x: f64, eps_z: f64) -> Result<()> {
    for (name, v) in [("eps_x", eps_x), ("eps_z", eps_z)] {
        if !((-DOMAIN_SLACK..=0.5 + DOMAIN_SLACK).contains(&v)) {
            return Err(QkdError::Infeasible(format!("{name} = {v} ∉ [0, 1/2]")));
        }
    }
    Ok(())
}

pub(crate) fn validate_bb84_alt(eps_x: f64, eps_z: f64) -> Result<()> {
    validate_error_pair(eps_x, eps_z)?;
    if eps_x - eps_z / 2.0 < -DOMAIN_SLACK {
        return Err(QkdError::Infeasible(format!(
            "eps_z = {eps_z} > 2·eps_x = {} violates λ2 ≥ 0 of the alternative decomposition",
            2.0 * eps_x
        )));
    }
    if 1.0 - eps_x - eps_z / 2.0 < -DOMAIN_SLACK {
        return Err(QkdError::Infeasible(format!(
            "eps_x + eps_z/2 = {} > 1 violates λ1 ≥ 0 of the alternative decomposition",
            eps_x + eps_z / 2.0
        )));
    }
    Ok(())
}

pub(crate) fn validate_gr10_mod(p: f64, rel_deviation: f64) -> Result<()> {
    if !(p > 0.25 && p <= 0.5 + DOMAIN_SLACK) {
        return Err(QkdError::Infeasible(format!("p = {p} ∉ (1/4, 1/2]")));
    }
    if !((-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&rel_deviation)) {
        return Err(QkdError::Infeasible(format!(
            "relative deviation {rel_deviation} ∉ [0, 1]"
        )));
    }
    Ok(())
}

/// Devetak–Winter bound `r = β·I(A:B) − χ(A:E)`; may be negative.
pub fn devetak_winter(mutual_info: f64, holevo: f64, opts: &RateOptions) -> Result<f64> {
    opts.validate()?;
    if mutual_info < -1e-9 || holevo < -1e-9 {
        return Err(QkdError::Domain(format!(
            "mutual information {mutual_info} and Holevo quantity {holevo} must be non-negative"
        )));
    }
    Ok(opts.beta * mutual_info - holevo)
}

/// Standard BB84 rate. Eve's optimal weights are the product form
/// `λ = (1−εx, εx) ⊗ (1−εz, εz)`, giving `r = 1 − h(εx) − h(εz)` at β = 1.
pub fn bb84_std_rate(eps_x: f64, eps_z: f64, opts: &RateOptions) -> Result<RateResult> {
    validate_error_pair(eps_x, eps_z)?;
    let lambdas = LambdaVector::new([
        (1.0 - eps_x) * (1.0 - eps_z),
        eps_x * (1.0 - eps_z),
        eps_z * (1.0 - eps_x),
        eps_z * eps_x,
    ])?;
    let mutual_info = 1.0 - h(eps_z);
    let holevo = -sum_lambda_log(lambdas.values()) - h(eps_z);
    let rate = devetak_winter(mutual_info, holevo, opts)?;
    Ok(RateResult {
        rate,
        lambdas,
        mutual_info,
        holevo,
    })
}

/// Alternative-decomposition BB84 rate. The extra constraint λ3 = λ4 fixes
/// all weights from the observations, so no minimization is needed:
/// `λ1 = 1 − εx − εz/2`, `λ2 = εx − εz/2`, `λ3 = λ4 = εz/2`.
pub fn bb84_alt_rate(eps_x: f64, eps_z: f64, opts: &RateOptions) -> Result<RateResult> {
    validate_bb84_alt(eps_x, eps_z)?;
    let lam = eps_z / 2.0;
    let lambdas = LambdaVector::new([
        (1.0 - eps_x - lam).max(0.0),
        (eps_x - lam).max(0.0),
        lam,
        lam,
    ])?;
    let mutual_info = 1.0 - h(eps_z);
    let holevo = -sum_lambda_log(lambdas.values()) - h(eps_z);
    let rate = devetak_winter(mutual_info, holevo, opts)?;
    Ok(RateResult {
        rate,
        lambdas,
        mutual_info,
        holevo,
    })
}

/// GR10 rate. Eve's optimum is the shared weight `λ3 = λ4 = εx(1−εx)`,
/// giving `r = 1 − 2h(εx)` at β = 1.
pub fn gr10_rate(eps_x: f64, opts: &RateOptions) -> Result<RateResult> {
    validate_error_pair(eps_x, 0.0)?;
    let lam = eps_x * (1.0 - eps_x);
    let lambdas = LambdaVector::new([
        (1.0 - eps_x - lam).max(0.0),
        (eps_x - lam).max(0.0),
        lam,
        lam,
    ])?;
    let mutual_info = 1.0 - h(eps_x);
    let holevo = -sum_lambda_log(lambdas.values()) - h(eps_x);
    let rate = devetak_winter(mutual_info, holevo, opts)?;
    Ok(RateResult {
        rate,
        lambdas,
        mutual_info,
        holevo,
    })
}

/// Modified-GR10 rate at agreement parameter `p` and relative deviation
/// `Δx`. With `λ₊ = 2p(1−Δx)` and `λ₋ = 1−λ₊`, Eve's optimum is
/// `λ1 = λ2 = λ₊λ₋`, giving `r = β[1 − h(λ₊)] − h(λ₊)`.
pub fn gr10_mod_rate(p: f64, rel_deviation: f64, opts: &RateOptions) -> Result<RateResult> {
    validate_gr10_mod(p, rel_deviation)?;
    let lam_plus = 2.0 * p * (1.0 - rel_deviation);
    let lam_minus = 1.0 - lam_plus;
    let lam = lam_plus * lam_minus;
    let lambdas = LambdaVector::new([
        lam,
        lam,
        (lam_plus - lam).max(0.0),
        (lam_minus - lam).max(0.0),
    ])?;
    let mutual_info = 1.0 - h(lam_plus);
    let holevo = -sum_lambda_log(lambdas.values()) - h(lam_plus);
    let rate = devetak_winter(mutual_info, holevo, opts)?;
    Ok(RateResult {
        rate,
        lambdas,
        mutual_info,
        holevo,
    })
}

/// Ideal agreement probability of the modified GR10 protocol as a function
/// of the two entanglement parameters:
/// `p = ¼ + (n1+n2)²(1+n1n2)² / (4(1+n1²)²(1+n2²)²)`.
///
/// Symmetric in its arguments and monotonically increasing in each; ranges
/// over `[¼, ½]`.
pub fn p_from_entanglement(n1: f64, n2: f64) -> Result<f64> {
    for (name, v) in [("n1", n1), ("n2", n2)] {
        if !((-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&v)) {
            return Err(QkdError::Domain(format!("{name} = {v} ∉ [0, 1]")));
        }
    }
    let num = (n1 + n2).powi(2) * (1.0 + n1 * n2).powi(2);
    let den = 4.0 * (1.0 + n1 * n1).powi(2) * (1.0 + n2 * n2).powi(2);
    Ok(0.25 + num / den)
}

/// Which rate curve to scan for the security boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdTarget {
    /// Symmetric standard BB84: scan `ε = εx = εz`.
    Bb84StdSymmetric,
    /// Symmetric alternative BB84: scan `ε = εx = εz`.
    Bb84AltSymmetric,
    /// GR10: scan `εx`.
    Gr10,
    /// Modified GR10 at fixed `p`: scan the relative deviation.
    Gr10ModDeltaX { p: f64 },
    /// Modified GR10 at fixed relative deviation: scan `p`.
    Gr10ModP { rel_deviation: f64 },
}

impl ThresholdTarget {
    /// Name of the scanned parameter, for reporting.
    pub fn parameter_name(&self) -> &'static str {
        match self {
            Self::Bb84StdSymmetric | Self::Bb84AltSymmetric => "eps",
            Self::Gr10 => "eps-x",
            Self::Gr10ModDeltaX { .. } => "delta-x",
            Self::Gr10ModP { .. } => "p",
        }
    }

    fn interval(&self) -> (f64, f64) {
        match self {
            Self::Bb84StdSymmetric | Self::Bb84AltSymmetric | Self::Gr10 => (0.0, 0.5),
            Self::Gr10ModDeltaX { .. } => (0.0, 1.0),
            Self::Gr10ModP { .. } => (0.25 + 1e-9, 0.5),
        }
    }

    fn rate_at(&self, x: f64, opts: &RateOptions) -> Result<f64> {
        let r = match self {
            Self::Bb84StdSymmetric => bb84_std_rate(x, x, opts)?,
            Self::Bb84AltSymmetric => bb84_alt_rate(x, x, opts)?,
            Self::Gr10 => gr10_rate(x, opts)?,
            Self::Gr10ModDeltaX { p } => gr10_mod_rate(*p, x, opts)?,
            Self::Gr10ModP { rel_deviation } => gr10_mod_rate(x, *rel_deviation, opts)?,
        };
        Ok(r.rate)
    }
}

/// Result of a threshold search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdOutcome {
    /// The scanned parameter where the rate crosses zero, to
    /// [`THRESHOLD_TOL`].
    Root(f64),
    /// The rate never changes sign on the scanned interval.
    NoSignChange,
}

/// Locates the security boundary `r(·) = 0` of the selected model by a
/// coarse sign-change scan followed by bisection. Reports the first crossing
/// of the scanned interval.
pub fn threshold(target: &ThresholdTarget, opts: &RateOptions) -> Result<ThresholdOutcome> {
    opts.validate()?;
    let (lo, hi) = target.interval();
    let f = |x: f64| target.rate_at(x, opts);
    match find_sign_change(f, lo, hi, THRESHOLD_SCAN_STEPS)? {
        None => Ok(ThresholdOutcome::NoSignChange),
        Some((a, b)) if a == b => Ok(ThresholdOutcome::Root(a)),
        Some((a, b)) => {
            let root = bisect_root(f, a, b, THRESHOLD_TOL)?;
            Ok(ThresholdOutcome::Root(root))
        }
    }
}
