//! Probabilistic teleportation over a partially entangled channel.
//!
//! Alice teleports `α|0⟩ + β|1⟩` through `(|00⟩ + n|11⟩)/√(1+n²)` by
//! projecting her two qubits onto the generalized Bell basis with parameter
//! `m`. Everything here exists twice: in closed form, and as a brute-force
//! three-qubit circuit ([`oracle_teleport`]) used to verify the closed forms.
//!
//! Under the matching condition `m = n`, outcomes 2 and 3 teleport exactly;
//! their combined weight is [`success_probability`]`(n) = 2n²/(1+n²)²`.

use rand::Rng;

use crate::error::{QkdError, Result};
use crate::qstate::{
    make_basis, project_pure, BasisKind, ComplexScalar, ProbabilityDistribution, StateVector,
    DOMAIN_SLACK, STATE_TOL, ZERO_PROB_TOL,
};

/// Input amplitudes and the two protocol parameters.
///
/// `m` is Alice's measurement-basis parameter, `n` the channel entanglement
/// parameter; both lie in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TeleportParams {
    pub alpha: ComplexScalar,
    pub beta: ComplexScalar,
    pub m: f64,
    pub n: f64,
}

impl TeleportParams {
    pub fn new(alpha: ComplexScalar, beta: ComplexScalar, m: f64, n: f64) -> Result<Self> {
        let norm_sq = alpha.norm_sqr() + beta.norm_sqr();
        if (norm_sq - 1.0).abs() > STATE_TOL {
            return Err(QkdError::InvalidState(format!(
                "|α|² + |β|² = {norm_sq} is not 1"
            )));
        }
        for (name, v) in [("m", m), ("n", n)] {
            if !((-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&v)) {
                return Err(QkdError::Domain(format!("{name} = {v} ∉ [0, 1]")));
            }
        }
        Ok(Self {
            alpha,
            beta,
            m: m.clamp(0.0, 1.0),
            n: n.clamp(0.0, 1.0),
        })
    }

    /// The teleported state `α|0⟩ + β|1⟩`.
    pub fn input_state(&self) -> StateVector {
        StateVector::new_unchecked(vec![self.alpha, self.beta])
    }
}

/// Which generalized Bell state Alice's measurement yielded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellOutcome {
    Phi1,
    Phi2,
    Phi3,
    Phi4,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] = [Self::Phi1, Self::Phi2, Self::Phi3, Self::Phi4];

    /// One-based outcome label `j ∈ {1, 2, 3, 4}`.
    pub fn label(self) -> u8 {
        match self {
            Self::Phi1 => 1,
            Self::Phi2 => 2,
            Self::Phi3 => 3,
            Self::Phi4 => 4,
        }
    }

    /// Zero-based index into probability vectors and bases.
    pub fn index(self) -> usize {
        self.label() as usize - 1
    }

    pub fn from_label(j: u8) -> Result<Self> {
        match j {
            1 => Ok(Self::Phi1),
            2 => Ok(Self::Phi2),
            3 => Ok(Self::Phi3),
            4 => Ok(Self::Phi4),
            _ => Err(QkdError::Domain(format!("Bell outcome {j} ∉ {{1,2,3,4}}"))),
        }
    }
}

/// Label of the unitary Bob applies for a given outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrectionLabel {
    I,
    Z,
    X,
    ZX,
}

/// Bob's correction unitary: `U₁ = 𝟙`, `U₂ = σz`, `U₃ = σx`, `U₄ = σzσx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectionOp {
    pub label: CorrectionLabel,
    pub matrix: [[ComplexScalar; 2]; 2],
}

impl CorrectionOp {
    /// Applies the 2×2 unitary to a qubit state.
    pub fn apply(&self, state: &StateVector) -> StateVector {
        let a = self.matrix[0][0] * state.amp(0) + self.matrix[0][1] * state.amp(1);
        let b = self.matrix[1][0] * state.amp(0) + self.matrix[1][1] * state.amp(1);
        StateVector::new_unchecked(vec![a, b])
    }
}

/// The correction unitary matching a Bell outcome.
pub fn correction_for(j: BellOutcome) -> CorrectionOp {
    let zero = ComplexScalar::new(0.0, 0.0);
    let one = ComplexScalar::new(1.0, 0.0);
    let neg = ComplexScalar::new(-1.0, 0.0);
    match j {
        BellOutcome::Phi1 => CorrectionOp {
            label: CorrectionLabel::I,
            matrix: [[one, zero], [zero, one]],
        },
        BellOutcome::Phi2 => CorrectionOp {
            label: CorrectionLabel::Z,
            matrix: [[one, zero], [zero, neg]],
        },
        BellOutcome::Phi3 => CorrectionOp {
            label: CorrectionLabel::X,
            matrix: [[zero, one], [one, zero]],
        },
        BellOutcome::Phi4 => CorrectionOp {
            label: CorrectionLabel::ZX,
            matrix: [[zero, one], [neg, zero]],
        },
    }
}

fn denominator(m: f64, n: f64) -> f64 {
    (1.0 + m * m) * (1.0 + n * n)
}

/// `f₁²`: relative weight of outcomes 1 and 4.
fn f1_sq(a_sq: f64, b_sq: f64, m: f64, n: f64) -> f64 {
    (a_sq + m * m * n * n * b_sq) / denominator(m, n)
}

/// `f₂²`: relative weight of outcomes 2 and 3.
fn f2_sq(a_sq: f64, b_sq: f64, m: f64, n: f64) -> f64 {
    (m * m * a_sq + n * n * b_sq) / denominator(m, n)
}

/// Probabilities of Alice's four generalized Bell outcomes.
pub fn measurement_probs(tp: &TeleportParams) -> ProbabilityDistribution {
    let a_sq = tp.alpha.norm_sqr();
    let b_sq = tp.beta.norm_sqr();
    let probs = vec![
        f1_sq(a_sq, b_sq, tp.m, tp.n),
        f2_sq(a_sq, b_sq, tp.m, tp.n),
        f2_sq(b_sq, a_sq, tp.m, tp.n),
        f1_sq(b_sq, a_sq, tp.m, tp.n),
    ];
    ProbabilityDistribution::new(probs).expect("outcome probabilities sum to 1")
}

/// Bob's qubit after he applies the correction for outcome `j`, in closed
/// form. Outcomes of zero probability are rejected.
pub fn bob_state_after_correction(j: BellOutcome, tp: &TeleportParams) -> Result<StateVector> {
    let p = measurement_probs(tp).probs()[j.index()];
    if p < ZERO_PROB_TOL {
        return Err(QkdError::ZeroProbability);
    }
    let (m, n) = (tp.m, tp.n);
    let mn = m * n;
    let amps = match j {
        BellOutcome::Phi1 => vec![tp.alpha, tp.beta * mn],
        BellOutcome::Phi2 => vec![tp.alpha * m, tp.beta * n],
        BellOutcome::Phi3 => vec![tp.alpha * n, tp.beta * m],
        BellOutcome::Phi4 => vec![tp.alpha * mn, tp.beta],
    };
    StateVector::from_unnormalized(amps)
}

/// Brute-force circuit oracle for one teleportation branch.
///
/// Builds `|φ⟩_A ⊗ |Φ₁ⁿ⟩_{A'B}` as an eight-dimensional vector, projects
/// Alice's two qubits onto the generalized Bell state `|Φⱼᵐ⟩`, applies Bob's
/// correction to the residual qubit, and returns the branch probability with
/// the corrected state. Independent of the closed forms above.
pub fn oracle_teleport(j: BellOutcome, tp: &TeleportParams) -> Result<(f64, StateVector)> {
    let channel = StateVector::from_unnormalized(vec![
        ComplexScalar::new(1.0, 0.0),
        ComplexScalar::new(0.0, 0.0),
        ComplexScalar::new(0.0, 0.0),
        ComplexScalar::new(tp.n, 0.0),
    ])?;
    let full = tp.input_state().tensor(&channel)?;
    let basis = make_basis(BasisKind::GenBell { m: tp.m })?;
    let branch = project_pure(&full, basis.vector(j.index()), 0, &[4, 2])?;
    match branch.conditional {
        Some(residual) => Ok((branch.prob, correction_for(j).apply(&residual))),
        None => Err(QkdError::ZeroProbability),
    }
}

/// Probability that the original protocol succeeds (matching condition met
/// and outcome in `{2, 3}`): `2n²/(1+n²)²`.
pub fn success_probability(n: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&n));
    let d = 1.0 + n * n;
    2.0 * n * n / (d * d)
}

/// Bob's four possible post-correction states when a `|±⟩` input meets
/// outcome 2 or 3: the encoding the protocol actually produces.
#[derive(Debug, Clone)]
pub struct TildeStates {
    /// `|0̃⟩`: input `|+⟩`, outcome 2.
    pub zero: StateVector,
    /// `|+̃⟩`: input `|+⟩`, outcome 3.
    pub plus: StateVector,
    /// `|−̃⟩`: input `|−⟩`, outcome 2.
    pub minus: StateVector,
    /// `|1̃⟩`: input `|−⟩`, outcome 3.
    pub one: StateVector,
}

/// The non-orthogonal encoding induced when `m ≠ n`.
///
/// `{|0̃⟩, |1̃⟩}` and `{|+̃⟩, |−̃⟩}` are each orthonormal, and
/// `⟨0̃|+̃⟩ = 2nm/(n²+m²)`.
pub fn tilde_states(n: f64, m: f64) -> Result<TildeStates> {
    if n == 0.0 && m == 0.0 {
        return Err(QkdError::Domain("tilde states need n or m non-zero".into()));
    }
    let c = |x: f64| ComplexScalar::new(x, 0.0);
    Ok(TildeStates {
        zero: StateVector::from_unnormalized(vec![c(m), c(n)])?,
        plus: StateVector::from_unnormalized(vec![c(n), c(m)])?,
        minus: StateVector::from_unnormalized(vec![c(m), c(-n)])?,
        one: StateVector::from_unnormalized(vec![c(n), c(-m)])?,
    })
}

/// Probability that Bob assigns the wrong bit on a kept round with channel
/// parameter `n` and measurement parameter `m`: `(m−n)²/(2(n²+m²))`.
pub fn mismatch_error(n: f64, m: f64) -> Result<f64> {
    if n == 0.0 && m == 0.0 {
        return Err(QkdError::Domain("mismatch error needs n or m non-zero".into()));
    }
    let d = m - n;
    Ok(d * d / (2.0 * (n * n + m * m)))
}

/// Samples one teleportation round: draws the outcome from
/// [`measurement_probs`] and returns it with the matching corrected state.
///
/// Outcomes of (numerically) zero probability are excluded by renormalizing
/// over the support.
pub fn teleport_round<R: Rng + ?Sized>(
    tp: &TeleportParams,
    rng: &mut R,
) -> (BellOutcome, StateVector) {
    let probs = measurement_probs(tp);
    let support: Vec<(BellOutcome, f64)> = BellOutcome::ALL
        .iter()
        .zip(probs.probs())
        .filter(|(_, &p)| p >= ZERO_PROB_TOL)
        .map(|(&j, &p)| (j, p))
        .collect();
    let total: f64 = support.iter().map(|(_, p)| p).sum();
    let mut u: f64 = rng.random::<f64>() * total;
    let mut chosen = support[support.len() - 1].0;
    for &(j, p) in &support {
        if u < p {
            chosen = j;
            break;
        }
        u -= p;
    }
    let state = bob_state_after_correction(chosen, tp)
        .expect("sampled outcome has positive probability");
    (chosen, state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::new(re, im)
    }

    fn plus_input(m: f64, n: f64) -> TeleportParams {
        TeleportParams::new(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0), m, n).unwrap()
    }

    fn random_params(rng: &mut ChaCha8Rng) -> TeleportParams {
        let raw = [
            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
        ];
        let norm = (raw[0].norm_sqr() + raw[1].norm_sqr()).sqrt();
        TeleportParams::new(
            raw[0] / norm,
            raw[1] / norm,
            rng.random::<f64>(),
            rng.random::<f64>(),
        )
        .unwrap()
    }

    #[test]
    fn maximally_entangled_is_uniform() {
        let tp = TeleportParams::new(c(0.6, 0.0), c(0.0, 0.8), 1.0, 1.0).unwrap();
        for p in measurement_probs(&tp).probs() {
            assert!((p - 0.25).abs() < 1e-12);
        }
        for j in BellOutcome::ALL {
            let out = bob_state_after_correction(j, &tp).unwrap();
            assert!((out.fidelity(&tp.input_state()).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn probabilities_half_entanglement() {
        let tp = TeleportParams::new(c(1.0, 0.0), c(0.0, 0.0), 0.5, 0.5).unwrap();
        let p = measurement_probs(&tp);
        let expect = [0.64, 0.16, 0.16, 0.04];
        for (got, want) in p.probs().iter().zip(expect) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn success_probability_reference_points() {
        assert!((success_probability(1.0) - 0.5).abs() < 1e-15);
        assert_eq!(success_probability(0.0), 0.0);
        assert!((success_probability(0.5) - 0.32).abs() < 1e-15);
    }

    #[test]
    fn matched_success_outcomes_sum_to_success_probability() {
        for n in [0.1, 0.3, 0.5, 0.8, 1.0] {
            let tp = plus_input(n, n);
            let p = measurement_probs(&tp);
            let got = p.probs()[1] + p.probs()[2];
            assert!((got - success_probability(n)).abs() < 1e-12);
        }
    }

    #[test]
    fn matching_condition_restores_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let mut tp = random_params(&mut rng);
            tp.n = tp.m;
            for j in [BellOutcome::Phi2, BellOutcome::Phi3] {
                if measurement_probs(&tp).probs()[j.index()] < 1e-9 {
                    continue;
                }
                let out = bob_state_after_correction(j, &tp).unwrap();
                let f = out.fidelity(&tp.input_state()).unwrap();
                assert!((f - 1.0).abs() < 1e-12, "fidelity {f}");
            }
        }
    }

    #[test]
    fn partial_entanglement_closed_form() {
        // outcome 1, α=β=1/√2, m=0.5, n=1 → (1, 0.5)/√1.25
        let tp = plus_input(0.5, 1.0);
        let out = bob_state_after_correction(BellOutcome::Phi1, &tp).unwrap();
        let expect = StateVector::from_unnormalized(vec![c(1.0, 0.0), c(0.5, 0.0)]).unwrap();
        assert!((out.fidelity(&expect).unwrap() - 1.0).abs() < 1e-12);
        assert!((out.amp(0).re - 0.894427190999916).abs() < 1e-12);
        assert!((out.amp(1).re - 0.447213595499958).abs() < 1e-12);
    }

    #[test]
    fn zero_probability_outcome_rejected() {
        // α=1, β=0, m=n=0 kills outcomes 2 and 3
        let tp = TeleportParams::new(c(1.0, 0.0), c(0.0, 0.0), 0.0, 0.0).unwrap();
        assert!(matches!(
            bob_state_after_correction(BellOutcome::Phi2, &tp),
            Err(QkdError::ZeroProbability)
        ));
    }

    #[test]
    fn oracle_matching_condition() {
        let tp = plus_input(0.7, 0.7);
        let (_, state) = oracle_teleport(BellOutcome::Phi2, &tp).unwrap();
        assert!((state.fidelity(&StateVector::plus()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_standard_teleportation() {
        let tp = TeleportParams::new(c(0.6, 0.0), c(0.0, 0.8), 1.0, 1.0).unwrap();
        let (prob, state) = oracle_teleport(BellOutcome::Phi1, &tp).unwrap();
        assert!((prob - 0.25).abs() < 1e-12);
        assert!((state.fidelity(&tp.input_state()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_agrees_with_closed_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0usize;
        for _ in 0..500 {
            let tp = random_params(&mut rng);
            let probs = measurement_probs(&tp);
            for j in BellOutcome::ALL {
                let p = probs.probs()[j.index()];
                if p <= 1e-6 {
                    continue;
                }
                let (op, ostate) = oracle_teleport(j, &tp).unwrap();
                assert!((op - p).abs() <= 1e-10, "probability deviation {}", (op - p).abs());
                let cstate = bob_state_after_correction(j, &tp).unwrap();
                let f = ostate.fidelity(&cstate).unwrap();
                assert!(f >= 1.0 - 1e-10, "fidelity {f}");
                checked += 1;
            }
        }
        assert!(checked > 1500);
    }

    #[test]
    fn probs_sum_to_one_on_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for im in 0..50 {
            for inn in 0..50 {
                let m = im as f64 / 49.0;
                let n = inn as f64 / 49.0;
                for _ in 0..10 {
                    let mut tp = random_params(&mut rng);
                    tp.m = m;
                    tp.n = n;
                    let total: f64 = measurement_probs(&tp).probs().iter().sum();
                    assert!((total - 1.0).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn swap_symmetry_of_probabilities() {
        // (α, β, j) → (β, α, 5−j) leaves the outcome probability unchanged
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let tp = random_params(&mut rng);
            let swapped = TeleportParams::new(tp.beta, tp.alpha, tp.m, tp.n).unwrap();
            let p = measurement_probs(&tp);
            let q = measurement_probs(&swapped);
            for j in 0..4 {
                assert!((p.probs()[j] - q.probs()[3 - j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tilde_states_reference_points() {
        // n = m collapses the encoding onto |±⟩
        let t = tilde_states(0.6, 0.6).unwrap();
        assert!((t.zero.fidelity(&StateVector::plus()).unwrap() - 1.0).abs() < 1e-12);
        assert!((t.plus.fidelity(&StateVector::plus()).unwrap() - 1.0).abs() < 1e-12);
        assert!((t.one.fidelity(&StateVector::minus()).unwrap() - 1.0).abs() < 1e-12);
        assert!((t.minus.fidelity(&StateVector::minus()).unwrap() - 1.0).abs() < 1e-12);

        // overlap ⟨0̃|+̃⟩ = 2nm/(n²+m²)
        for (n, m) in [(1.0, 0.5), (0.8, 0.2), (0.4, 0.9)] {
            let t = tilde_states(n, m).unwrap();
            let overlap = t.zero.inner(&t.plus).unwrap();
            assert!((overlap.re - 2.0 * n * m / (n * n + m * m)).abs() < 1e-12);
            assert!(overlap.im.abs() < 1e-15);
        }

        let t = tilde_states(1.0, 0.0).unwrap();
        assert!(t.zero.inner(&t.plus).unwrap().norm() < 1e-15);

        assert!(tilde_states(0.0, 0.0).is_err());
    }

    #[test]
    fn tilde_pairs_are_orthonormal() {
        let t = tilde_states(0.9, 0.3).unwrap();
        assert!(t.zero.inner(&t.one).unwrap().norm() < 1e-12);
        assert!(t.plus.inner(&t.minus).unwrap().norm() < 1e-12);
    }

    #[test]
    fn mismatch_error_reference_points() {
        assert_eq!(mismatch_error(0.7, 0.7).unwrap(), 0.0);
        assert!((mismatch_error(1.0, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((mismatch_error(1.0, 0.5).unwrap() - 0.1).abs() < 1e-15);
        assert!(mismatch_error(0.0, 0.0).is_err());
    }

    #[test]
    fn mismatch_error_matches_tilde_states_on_grid() {
        // the closed form equals |⟨wrong bit|tilde⟩|² for every kept branch
        for i in 0..20 {
            for k in 0..20 {
                let n = 0.05 + 0.95 * i as f64 / 19.0;
                let m = 0.05 + 0.95 * k as f64 / 19.0;
                let err = mismatch_error(n, m).unwrap();
                let t = tilde_states(n, m).unwrap();
                let minus = StateVector::minus();
                let plus = StateVector::plus();
                for (state, wrong) in [
                    (&t.zero, &minus),
                    (&t.plus, &minus),
                    (&t.minus, &plus),
                    (&t.one, &plus),
                ] {
                    let p_wrong = state.inner(wrong).unwrap().norm_sqr();
                    assert!((p_wrong - err).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn round_sampling_matches_probabilities() {
        let tp = TeleportParams::new(c(0.6, 0.0), c(0.8, 0.0), 1.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let trials = 100_000;
        let mut counts = [0usize; 4];
        for _ in 0..trials {
            let (j, _) = teleport_round(&tp, &mut rng);
            counts[j.index()] += 1;
        }
        let sigma = (0.25 * 0.75 / trials as f64).sqrt();
        for c in counts {
            let freq = c as f64 / trials as f64;
            assert!((freq - 0.25).abs() < 3.0 * sigma, "frequency {freq}");
        }
    }

    #[test]
    fn round_success_rate_half_entanglement() {
        let tp = plus_input(0.5, 0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let trials = 100_000;
        let mut success = 0usize;
        for _ in 0..trials {
            let (j, _) = teleport_round(&tp, &mut rng);
            if matches!(j, BellOutcome::Phi2 | BellOutcome::Phi3) {
                success += 1;
            }
        }
        let p = success_probability(0.5);
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        let freq = success as f64 / trials as f64;
        assert!((freq - p).abs() < 3.0 * sigma, "frequency {freq} vs {p}");
    }

    #[test]
    fn fixed_seed_replays_identically() {
        let tp = plus_input(0.3, 0.9);
        let draw = |seed: u64| -> Vec<u8> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..200).map(|_| teleport_round(&tp, &mut rng).0.label()).collect()
        };
        assert_eq!(draw(42), draw(42));
        assert_ne!(draw(42), draw(43));
    }
}
