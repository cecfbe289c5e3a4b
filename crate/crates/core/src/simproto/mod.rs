//! Seeded Monte Carlo execution of BB84 and GR10 (original and modified) as
//! Alice/Bob/Eve state machines.
//!
//! Every round derives its own random stream from `(seed, round index)`, so
//! rounds are mutually independent and may execute in any order or in
//! parallel while producing bit-identical transcripts.
//!
//! Announcements (basis choices, the Bell outcome `j`, the `m`/`n` values)
//! are logged in plaintext in the [`Transcript`], modeling the authenticated
//! public channel; no authentication cryptography is simulated.
//!
//! ```
//! use teleqkd_core::simproto::{
//!     run_protocol, sift, AttackModel, ProtocolConfig, ProtocolKind,
//! };
//!
//! let cfg = ProtocolConfig {
//!     kind: ProtocolKind::Bb84,
//!     rounds: 2_000,
//!     n1: 1.0,
//!     n2: 1.0,
//!     disclose_fraction: 0.5,
//!     attack: AttackModel::None,
//!     seed: 42,
//! };
//! let transcript = run_protocol(&cfg).unwrap();
//! let (alice, bob) = sift(&transcript);
//! assert_eq!(alice, bob); // noiseless channel: raw keys agree exactly
//! ```

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{QkdError, Result};
use crate::fmt::sig9;
use crate::keyrate::{LambdaVector, PurificationSpec};
use crate::qstate::{
    make_basis, project_pure, BasisKind, ComplexScalar, JointDistribution, StateVector,
    ZERO_PROB_TOL,
};
use crate::teleport::{
    bob_state_after_correction, correction_for, measurement_probs, success_probability,
    BellOutcome, TeleportParams,
};

/// Which protocol the state machines execute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolKind {
    Bb84,
    /// BB84 without basis sifting: every round is kept.
    Bb84KeepAll,
    Gr10,
    /// GR10 without any sifting: every round is kept.
    Gr10Modified,
}

impl ProtocolKind {
    pub fn is_gr10_family(self) -> bool {
        matches!(self, Self::Gr10 | Self::Gr10Modified)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Bb84 => "bb84",
            Self::Bb84KeepAll => "bb84-keep-all",
            Self::Gr10 => "gr10",
            Self::Gr10Modified => "gr10-mod",
        }
    }
}

/// Preparation/measurement basis of a BB84 party.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasBasis {
    Z,
    X,
}

/// Which basis Eve measures in during an intercept-resend attack.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterceptBasis {
    Z,
    X,
    /// Fresh uniform choice every round.
    Random,
}

/// Eve/noise acting on the quantum channel.
#[derive(Debug, Clone, PartialEq)]
pub enum AttackModel {
    None,
    /// Pauli channel with weights `(1−3ε/2, ε/2, ε/2, ε/2)` over
    /// `(𝟙, X, Z, ZX)`, producing `εx = εz = ε` on same-basis BB84 rounds.
    Depolarizing { eps: f64 },
    /// Eve measures the transiting qubit and resends the outcome state.
    InterceptResend { basis: InterceptBasis },
    /// Collective attack described by a purification: state transport is
    /// bypassed and bit pairs are sampled from the joint distribution of
    /// `Σ λⱼ |basisⱼ⟩⟨basisⱼ|` in the protocol's measurement bases.
    Purification {
        spec: PurificationSpec,
        lambdas: LambdaVector,
    },
}

/// Full configuration of a Monte Carlo run.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    pub kind: ProtocolKind,
    pub rounds: u64,
    /// First entanglement parameter (GR10 family only).
    pub n1: f64,
    /// Second entanglement parameter (GR10 family only).
    pub n2: f64,
    /// Probability that a sifted round is disclosed for error estimation.
    pub disclose_fraction: f64,
    pub attack: AttackModel,
    pub seed: u64,
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(QkdError::Config("rounds must be at least 1".into()));
        }
        if !(self.disclose_fraction > 0.0 && self.disclose_fraction < 1.0) {
            return Err(QkdError::Config(format!(
                "disclose fraction {} ∉ (0, 1)",
                self.disclose_fraction
            )));
        }
        if self.kind.is_gr10_family() {
            for (name, v) in [("n1", self.n1), ("n2", self.n2)] {
                if !(v > 0.0 && v <= 1.0) {
                    return Err(QkdError::Config(format!("{name} = {v} ∉ (0, 1]")));
                }
            }
        }
        match &self.attack {
            AttackModel::Depolarizing { eps } => {
                if !(0.0..2.0 / 3.0).contains(eps) {
                    return Err(QkdError::Config(format!(
                        "depolarizing strength {eps} ∉ [0, 2/3)"
                    )));
                }
            }
            AttackModel::Purification { spec, lambdas } => {
                // reject an unconstructible basis early (p out of range)
                make_basis(spec.basis_kind())?;
                let _ = lambdas;
            }
            _ => {}
        }
        Ok(())
    }
}

/// Per-round parameter a party announces: a BB84 basis or a GR10
/// entanglement/measurement parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PartyParam {
    Basis(MeasBasis),
    Entanglement(f64),
}

impl fmt::Display for PartyParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Basis(MeasBasis::Z) => write!(f, "z"),
            Self::Basis(MeasBasis::X) => write!(f, "x"),
            Self::Entanglement(v) => write!(f, "{v}"),
        }
    }
}

/// Everything one protocol round produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub round: u64,
    pub alice_bit: bool,
    pub alice_param: PartyParam,
    pub bob_param: PartyParam,
    /// Announced Bell outcome (GR10 family only).
    pub outcome: Option<BellOutcome>,
    pub bob_bit: bool,
    pub sifted: bool,
    pub disclosed: bool,
}

impl RoundRecord {
    /// One line of the plain-text transcript format:
    /// `round,alice_bit,alice_param,bob_param,j,bob_bit,sifted,disclosed`.
    pub fn to_line(&self) -> String {
        let j = self
            .outcome
            .map(|o| o.label().to_string())
            .unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{}",
            self.round,
            self.alice_bit as u8,
            self.alice_param,
            self.bob_param,
            j,
            self.bob_bit as u8,
            self.sifted as u8,
            self.disclosed as u8
        )
    }
}

/// Aggregate counts of a transcript.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TranscriptSummary {
    pub kept: u64,
    pub discarded: u64,
    pub disclosed: u64,
}

/// Full record of a Monte Carlo run.
#[derive(Debug, Clone, PartialEq)]
pub struct Transcript {
    pub config: ProtocolConfig,
    pub records: Vec<RoundRecord>,
    pub summary: TranscriptSummary,
}

impl Transcript {
    /// Line-oriented plain-text serialization, one round per line.
    pub fn to_lines(&self) -> String {
        let mut out = String::with_capacity(self.records.len() * 24);
        for r in &self.records {
            out.push_str(&r.to_line());
            out.push('\n');
        }
        out
    }

    /// Recomputes the summary from the records.
    pub fn recount(&self) -> TranscriptSummary {
        summarize(&self.records)
    }
}

fn summarize(records: &[RoundRecord]) -> TranscriptSummary {
    let kept = records.iter().filter(|r| r.sifted).count() as u64;
    let disclosed = records.iter().filter(|r| r.disclosed).count() as u64;
    TranscriptSummary {
        kept,
        discarded: records.len() as u64 - kept,
        disclosed,
    }
}

/// A rate estimate together with the sample size it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateStat {
    pub value: f64,
    pub samples: u64,
}

/// Error statistics estimated from the disclosed sample of a transcript.
/// A statistic whose subsample is empty is absent, not zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorEstimate {
    pub eps_z: Option<RateStat>,
    pub eps_x: Option<RateStat>,
    /// Fraction of disclosed rounds where the bits agree.
    pub agreement: RateStat,
    /// Deviation of the disagreement from its attack-free value (modified
    /// GR10, needs the ideal agreement parameter).
    pub deviation: Option<RateStat>,
    /// Relative deviation of agreement `Δx = δx / (2p)`.
    pub rel_deviation: Option<RateStat>,
}

/// The independent random stream of one round, derived from the master seed
/// and the round index. Counter-based: no state is shared between rounds.
pub fn round_rng(seed: u64, round: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(round);
    rng
}

fn q(re: f64) -> ComplexScalar {
    ComplexScalar::new(re, 0.0)
}

fn encode_bb84(bit: bool, basis: MeasBasis) -> StateVector {
    match (basis, bit) {
        (MeasBasis::Z, false) => StateVector::zero(),
        (MeasBasis::Z, true) => StateVector::one(),
        (MeasBasis::X, false) => StateVector::plus(),
        (MeasBasis::X, true) => StateVector::minus(),
    }
}

fn basis_states(basis: MeasBasis) -> (StateVector, StateVector) {
    match basis {
        MeasBasis::Z => (StateVector::zero(), StateVector::one()),
        MeasBasis::X => (StateVector::plus(), StateVector::minus()),
    }
}

/// Projective single-qubit measurement; returns the bit (1 for the second
/// basis state).
fn measure_bit<R: Rng + ?Sized>(state: &StateVector, basis: MeasBasis, rng: &mut R) -> bool {
    let (_, one) = basis_states(basis);
    let p1 = one.inner(state).expect("qubit dims match").norm_sqr();
    rng.random_bool(p1.clamp(0.0, 1.0))
}

#[derive(Clone, Copy)]
enum Pauli {
    X,
    Z,
    Zx,
}

/// Applies a Pauli to one qubit of a multi-qubit pure state. Qubits are
/// indexed from the left (most significant factor first).
fn apply_pauli(state: &StateVector, target: usize, pauli: Pauli) -> StateVector {
    let dim = state.dim();
    let qubits = dim.trailing_zeros() as usize;
    let shift = qubits - 1 - target;
    let mask = 1usize << shift;
    let mut amps = state.amps().to_vec();
    match pauli {
        Pauli::X => {
            for i in 0..dim {
                if i & mask == 0 {
                    amps.swap(i, i | mask);
                }
            }
        }
        Pauli::Z => {
            for (i, a) in amps.iter_mut().enumerate() {
                if i & mask != 0 {
                    *a = -*a;
                }
            }
        }
        Pauli::Zx => {
            for i in 0..dim {
                if i & mask == 0 {
                    amps.swap(i, i | mask);
                    amps[i | mask] = -amps[i | mask];
                }
            }
        }
    }
    StateVector::new(amps).expect("Pauli preserves the norm")
}

/// Eve measures qubit `target` in `basis` and resends the outcome state; the
/// rest of the state collapses onto the matching conditional.
fn measure_and_resend<R: Rng + ?Sized>(
    state: &StateVector,
    target: usize,
    basis: MeasBasis,
    rng: &mut R,
) -> StateVector {
    let (e0, e1) = basis_states(basis);
    let dim = state.dim();
    let qubits = dim.trailing_zeros() as usize;
    let shift = qubits - 1 - target;
    let rest_dim = dim / 2;
    let low = (1usize << shift) - 1;
    let expand = |r: usize, a: usize| ((r & !low) << 1) | (a << shift) | (r & low);

    let mut c0 = vec![q(0.0); rest_dim];
    let mut c1 = vec![q(0.0); rest_dim];
    for (r, (v0, v1)) in c0.iter_mut().zip(&mut c1).enumerate() {
        let lo = state.amp(expand(r, 0));
        let hi = state.amp(expand(r, 1));
        *v0 = e0.amp(0).conj() * lo + e0.amp(1).conj() * hi;
        *v1 = e1.amp(0).conj() * lo + e1.amp(1).conj() * hi;
    }
    let cond = [c0, c1];
    let p1: f64 = cond[1].iter().map(|a| a.norm_sqr()).sum();
    let outcome = usize::from(rng.random_bool(p1.clamp(0.0, 1.0)));
    let eigen = if outcome == 0 { e0 } else { e1 };
    let norm: f64 = cond[outcome].iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let mut amps = vec![q(0.0); dim];
    for r in 0..rest_dim {
        let c = cond[outcome][r] / norm;
        amps[expand(r, 0)] = eigen.amp(0) * c;
        amps[expand(r, 1)] = eigen.amp(1) * c;
    }
    StateVector::new(amps).expect("collapse preserves the norm")
}

/// Applies the attack to one qubit of a transiting pure state.
///
/// The purification attack is not a per-qubit channel: it replaces state
/// transport entirely and is handled by the protocol driver, so requesting
/// it here is a configuration error.
pub fn apply_attack<R: Rng + ?Sized>(
    state: &StateVector,
    target: usize,
    model: &AttackModel,
    rng: &mut R,
) -> Result<StateVector> {
    let qubits = state.dim().trailing_zeros() as usize;
    if target >= qubits {
        return Err(QkdError::Dimension(format!(
            "attack target qubit {target} out of range for dim {}",
            state.dim()
        )));
    }
    match model {
        AttackModel::None => Ok(state.clone()),
        AttackModel::Depolarizing { eps } => {
            if !(0.0..2.0 / 3.0).contains(eps) {
                return Err(QkdError::Config(format!(
                    "depolarizing strength {eps} ∉ [0, 2/3)"
                )));
            }
            let u: f64 = rng.random();
            let id_weight = 1.0 - 1.5 * eps;
            let step = eps / 2.0;
            Ok(if u < id_weight {
                state.clone()
            } else if u < id_weight + step {
                apply_pauli(state, target, Pauli::X)
            } else if u < id_weight + 2.0 * step {
                apply_pauli(state, target, Pauli::Z)
            } else {
                apply_pauli(state, target, Pauli::Zx)
            })
        }
        AttackModel::InterceptResend { basis } => {
            let basis = match basis {
                InterceptBasis::Z => MeasBasis::Z,
                InterceptBasis::X => MeasBasis::X,
                InterceptBasis::Random => {
                    if rng.random_bool(0.5) {
                        MeasBasis::X
                    } else {
                        MeasBasis::Z
                    }
                }
            };
            Ok(measure_and_resend(state, target, basis, rng))
        }
        AttackModel::Purification { .. } => Err(QkdError::Config(
            "purification attack replaces state transport; run it through the protocol driver"
                .into(),
        )),
    }
}

/// Joint bit distribution when Alice and Bob measure the purification's
/// two-qubit reduction `Σ λⱼ |basisⱼ⟩⟨basisⱼ|` in the given bases.
pub fn purification_joint(
    spec: &PurificationSpec,
    lambdas: &LambdaVector,
    alice_basis: MeasBasis,
    bob_basis: MeasBasis,
) -> Result<JointDistribution> {
    let basis = make_basis(spec.basis_kind())?;
    let (a0, a1) = basis_states(alice_basis);
    let (b0, b1) = basis_states(bob_basis);
    let mut p = [[0.0f64; 2]; 2];
    for (a, sa) in [(0usize, &a0), (1, &a1)] {
        for (b, sb) in [(0usize, &b0), (1, &b1)] {
            let outcome = sa.tensor(sb)?;
            p[a][b] = basis
                .vectors()
                .iter()
                .zip(lambdas.values())
                .map(|(v, w)| w * outcome.inner(v).expect("dims match").norm_sqr())
                .sum();
        }
    }
    JointDistribution::new(p)
}

fn sample_joint<R: Rng + ?Sized>(joint: &JointDistribution, rng: &mut R) -> (bool, bool) {
    let mut u: f64 = rng.random();
    for (a, b) in [(false, false), (false, true), (true, false), (true, true)] {
        let p = joint.prob(a as usize, b as usize);
        if u < p {
            return (a, b);
        }
        u -= p;
    }
    (true, true)
}

/// Samples an index from unnormalized weights, excluding entries below
/// [`ZERO_PROB_TOL`] by renormalizing over the support.
fn sample_index<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().filter(|&&w| w >= ZERO_PROB_TOL).sum();
    let mut u: f64 = rng.random::<f64>() * total;
    let mut last = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w < ZERO_PROB_TOL {
            continue;
        }
        if u < w {
            return i;
        }
        u -= w;
        last = i;
    }
    last
}

/// GR10 keeps a round when the announced parameter choices match and the
/// outcome is 2 or 3. Matching is on the announced choice (n1 versus n2), so
/// the match probability is exactly ½ even when the two values coincide.
fn is_kept(kind: ProtocolKind, choices_match: bool, j: BellOutcome) -> bool {
    match kind {
        ProtocolKind::Gr10 => {
            choices_match && matches!(j, BellOutcome::Phi2 | BellOutcome::Phi3)
        }
        ProtocolKind::Gr10Modified => true,
        _ => unreachable!("BB84 rounds have no Bell outcome"),
    }
}

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn teleport_params_for_bit(bit: bool, m: f64, n: f64) -> TeleportParams {
    let beta = if bit { -FRAC_1_SQRT_2 } else { FRAC_1_SQRT_2 };
    TeleportParams::new(q(FRAC_1_SQRT_2), q(beta), m, n)
        .expect("|±⟩ amplitudes are normalized")
}

fn bb84_round<R: Rng + ?Sized>(
    cfg: &ProtocolConfig,
    round: u64,
    rng: &mut R,
) -> Result<RoundRecord> {
    let alice_basis = if rng.random_bool(0.5) { MeasBasis::X } else { MeasBasis::Z };
    let bob_basis = if rng.random_bool(0.5) { MeasBasis::X } else { MeasBasis::Z };
    let (alice_bit, bob_bit) = match &cfg.attack {
        AttackModel::Purification { spec, lambdas } => {
            let joint = purification_joint(spec, lambdas, alice_basis, bob_basis)?;
            sample_joint(&joint, rng)
        }
        attack => {
            let alice_bit = rng.random_bool(0.5);
            let flying = encode_bb84(alice_bit, alice_basis);
            let flying = apply_attack(&flying, 0, attack, rng)?;
            let bob_bit = measure_bit(&flying, bob_basis, rng);
            (alice_bit, bob_bit)
        }
    };
    let sifted = cfg.kind == ProtocolKind::Bb84KeepAll || alice_basis == bob_basis;
    let disclosed = sifted && rng.random_bool(cfg.disclose_fraction);
    Ok(RoundRecord {
        round,
        alice_bit,
        alice_param: PartyParam::Basis(alice_basis),
        bob_param: PartyParam::Basis(bob_basis),
        outcome: None,
        bob_bit,
        sifted,
        disclosed,
    })
}

fn gr10_round<R: Rng + ?Sized>(
    cfg: &ProtocolConfig,
    round: u64,
    rng: &mut R,
) -> Result<RoundRecord> {
    let bob_pick = rng.random_bool(0.5);
    let alice_pick = rng.random_bool(0.5);
    let n = if bob_pick { cfg.n2 } else { cfg.n1 };
    let m = if alice_pick { cfg.n2 } else { cfg.n1 };
    let choices_match = bob_pick == alice_pick;

    let (j, alice_bit, bob_bit) = match &cfg.attack {
        AttackModel::Purification { spec, lambdas } => {
            // Outcome statistics of the ideal measurement; with |α| = |β|
            // they do not depend on the encoded bit.
            let probs = measurement_probs(&teleport_params_for_bit(false, m, n));
            let j = BellOutcome::ALL[sample_index(probs.probs(), rng)];
            if is_kept(cfg.kind, choices_match, j) {
                // The purification describes the post-selected ensemble:
                // sample both bits from its x-basis joint distribution.
                let joint = purification_joint(spec, lambdas, MeasBasis::X, MeasBasis::X)?;
                let (a, b) = sample_joint(&joint, rng);
                (j, a, b)
            } else {
                // Discarded rounds follow the attack-free mechanics.
                let alice_bit = rng.random_bool(0.5);
                let bob = bob_state_after_correction(j, &teleport_params_for_bit(alice_bit, m, n))?;
                let bob_bit = measure_bit(&bob, MeasBasis::X, rng);
                (j, alice_bit, bob_bit)
            }
        }
        attack => {
            let alice_bit = rng.random_bool(0.5);
            let encoded = if alice_bit { StateVector::minus() } else { StateVector::plus() };
            // Bob prepares |Φ1ⁿ⟩ and sends the first qubit to Alice.
            let channel = StateVector::from_unnormalized(vec![q(1.0), q(0.0), q(0.0), q(n)])?;
            let channel = apply_attack(&channel, 0, attack, rng)?;
            let full = encoded.tensor(&channel)?;
            let basis = make_basis(BasisKind::GenBell { m })?;
            let mut probs = [0.0f64; 4];
            let mut branches = Vec::with_capacity(4);
            for (i, v) in basis.vectors().iter().enumerate() {
                let branch = project_pure(&full, v, 0, &[4, 2])?;
                probs[i] = branch.prob;
                branches.push(branch.conditional);
            }
            let idx = sample_index(&probs, rng);
            let j = BellOutcome::ALL[idx];
            let bob = branches[idx].take().expect("sampled branch has support");
            let bob = correction_for(j).apply(&bob);
            let bob_bit = measure_bit(&bob, MeasBasis::X, rng);
            (j, alice_bit, bob_bit)
        }
    };

    let sifted = is_kept(cfg.kind, choices_match, j);
    let disclosed = sifted && rng.random_bool(cfg.disclose_fraction);
    Ok(RoundRecord {
        round,
        alice_bit,
        alice_param: PartyParam::Entanglement(m),
        bob_param: PartyParam::Entanglement(n),
        outcome: Some(j),
        bob_bit,
        sifted,
        disclosed,
    })
}

/// Executes one round of the configured protocol. Deterministic in
/// `(config, round)`.
pub fn simulate_round(cfg: &ProtocolConfig, round: u64) -> Result<RoundRecord> {
    let mut rng = round_rng(cfg.seed, round);
    match cfg.kind {
        ProtocolKind::Bb84 | ProtocolKind::Bb84KeepAll => bb84_round(cfg, round, &mut rng),
        ProtocolKind::Gr10 | ProtocolKind::Gr10Modified => gr10_round(cfg, round, &mut rng),
    }
}

/// Runs all rounds (in parallel; the transcript is aggregated in round
/// order) and returns the full transcript.
pub fn run_protocol(cfg: &ProtocolConfig) -> Result<Transcript> {
    cfg.validate()?;
    let records: Vec<RoundRecord> = (0..cfg.rounds)
        .into_par_iter()
        .map(|round| simulate_round(cfg, round))
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(&records);
    Ok(Transcript {
        config: cfg.clone(),
        records,
        summary,
    })
}

/// Extracts the raw keys: the bit pairs of all sifted rounds, in round order.
pub fn sift(t: &Transcript) -> (Vec<u8>, Vec<u8>) {
    t.records
        .iter()
        .filter(|r| r.sifted)
        .map(|r| (r.alice_bit as u8, r.bob_bit as u8))
        .unzip()
}

/// Estimates error statistics from the disclosed rounds.
///
/// For the modified GR10 protocol the deviation statistics additionally need
/// the ideal agreement parameter `p` (see
/// [`crate::keyrate::p_from_entanglement`]); without it only the agreement
/// rate is reported.
pub fn estimate_errors(t: &Transcript, ideal_p: Option<f64>) -> Result<ErrorEstimate> {
    let disclosed: Vec<&RoundRecord> =
        t.records.iter().filter(|r| r.disclosed && r.sifted).collect();
    if disclosed.is_empty() {
        return Err(QkdError::Config(
            "no disclosed rounds to estimate errors from".into(),
        ));
    }
    let rate_over = |rows: &[&RoundRecord]| -> Option<RateStat> {
        if rows.is_empty() {
            return None;
        }
        let errors = rows.iter().filter(|r| r.alice_bit != r.bob_bit).count();
        Some(RateStat {
            value: errors as f64 / rows.len() as f64,
            samples: rows.len() as u64,
        })
    };
    let agree = disclosed.iter().filter(|r| r.alice_bit == r.bob_bit).count();
    let agreement = RateStat {
        value: agree as f64 / disclosed.len() as f64,
        samples: disclosed.len() as u64,
    };

    let mut est = ErrorEstimate {
        eps_z: None,
        eps_x: None,
        agreement,
        deviation: None,
        rel_deviation: None,
    };
    match t.config.kind {
        ProtocolKind::Bb84 | ProtocolKind::Bb84KeepAll => {
            let in_basis = |basis: MeasBasis| -> Vec<&RoundRecord> {
                disclosed
                    .iter()
                    .copied()
                    .filter(|r| {
                        r.alice_param == PartyParam::Basis(basis)
                            && r.bob_param == PartyParam::Basis(basis)
                    })
                    .collect()
            };
            est.eps_z = rate_over(&in_basis(MeasBasis::Z));
            est.eps_x = rate_over(&in_basis(MeasBasis::X));
        }
        ProtocolKind::Gr10 => {
            est.eps_x = rate_over(&disclosed);
        }
        ProtocolKind::Gr10Modified => {
            if let Some(p0) = ideal_p {
                if !(p0 > 0.25 && p0 <= 0.5 + 1e-12) {
                    return Err(QkdError::Config(format!(
                        "ideal agreement parameter p = {p0} ∉ (1/4, 1/2]"
                    )));
                }
                let delta = 2.0 * p0 - agreement.value;
                est.deviation = Some(RateStat {
                    value: delta,
                    samples: agreement.samples,
                });
                est.rel_deviation = Some(RateStat {
                    value: delta / (2.0 * p0),
                    samples: agreement.samples,
                });
            }
        }
    }
    Ok(est)
}

/// Expected raw-key size of a GR10-family run.
///
/// The original protocol keeps a round with probability
/// `(p_suc(n1)/2 + p_suc(n2)/2)/2`; the modified protocol keeps every round.
/// BB84 kinds are rejected: their sift statistics live in the transcript
/// summary.
pub fn expected_raw_key_size(cfg: &ProtocolConfig) -> Result<f64> {
    cfg.validate()?;
    match cfg.kind {
        ProtocolKind::Gr10 => {
            let per_round =
                (success_probability(cfg.n1) / 2.0 + success_probability(cfg.n2) / 2.0) / 2.0;
            Ok(per_round * cfg.rounds as f64)
        }
        ProtocolKind::Gr10Modified => Ok(cfg.rounds as f64),
        _ => Err(QkdError::Config(
            "expected raw-key size applies to the gr10 family only".into(),
        )),
    }
}

/// Header of the summary CSV consumed by the command-line front end.
pub fn summary_csv_header() -> &'static str {
    "protocol,rounds,seed,kept,discarded,disclosed,eps_z,eps_z_samples,eps_x,eps_x_samples,\
     agreement,agreement_samples,delta_x,rel_delta_x,deviation_samples"
}

/// One CSV row with the transcript counts and error estimates; absent
/// statistics serialize as empty fields.
pub fn summary_csv_row(t: &Transcript, est: &ErrorEstimate) -> String {
    let opt = |s: &Option<RateStat>| -> (String, String) {
        match s {
            Some(rs) => (sig9(rs.value), rs.samples.to_string()),
            None => (String::new(), String::new()),
        }
    };
    let (ez, ezn) = opt(&est.eps_z);
    let (ex, exn) = opt(&est.eps_x);
    let (dx, dxn) = opt(&est.deviation);
    let (rdx, _) = opt(&est.rel_deviation);
    format!(
        "{},{},{},{},{},{},{ez},{ezn},{ex},{exn},{},{},{dx},{rdx},{dxn}",
        t.config.kind.name(),
        t.config.rounds,
        t.config.seed,
        t.summary.kept,
        t.summary.discarded,
        t.summary.disclosed,
        sig9(est.agreement.value),
        est.agreement.samples,
    )
}
