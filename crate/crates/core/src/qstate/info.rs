//! Classical and quantum information measures, all in bits.

use super::{DensityOperator, DOMAIN_SLACK, STATE_TOL};
use crate::error::{QkdError, Result};

/// `p log₂ p`, with the `0 log 0 = 0` convention as an explicit branch.
fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

/// Binary entropy `h(x) = −x log₂ x − (1−x) log₂ (1−x)`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !x.is_finite() || !(-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&x) {
        return Err(QkdError::Domain(format!("binary entropy of {x} ∉ [0, 1]")));
    }
    let x = x.clamp(0.0, 1.0);
    Ok(-plogp(x) - plogp(1.0 - x))
}

/// Discrete probability distribution: non-negative entries summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    probs: Vec<f64>,
}

impl ProbabilityDistribution {
    /// Validates non-negativity (with [`DOMAIN_SLACK`] slack, tiny negatives
    /// are clamped to zero) and unit total.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(QkdError::Dimension("empty distribution".into()));
        }
        let mut clean = Vec::with_capacity(probs.len());
        for p in probs {
            if !p.is_finite() || p < -DOMAIN_SLACK {
                return Err(QkdError::Domain(format!("negative probability {p}")));
            }
            clean.push(p.max(0.0));
        }
        let total: f64 = clean.iter().sum();
        if (total - 1.0).abs() > STATE_TOL {
            return Err(QkdError::InvalidState(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self { probs: clean })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Shannon entropy `H = −Σ p log₂ p`; lies in `[0, log₂ n]`.
pub fn shannon_entropy(d: &ProbabilityDistribution) -> f64 {
    -d.probs.iter().copied().map(plogp).sum::<f64>()
}

/// Joint distribution of one bit held by Alice and one held by Bob.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDistribution {
    p: [[f64; 2]; 2],
}

impl JointDistribution {
    pub fn new(p: [[f64; 2]; 2]) -> Result<Self> {
        let mut clean = [[0.0; 2]; 2];
        let mut total = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                let v = p[a][b];
                if !v.is_finite() || v < -DOMAIN_SLACK {
                    return Err(QkdError::Domain(format!("negative joint probability {v}")));
                }
                clean[a][b] = v.max(0.0);
                total += clean[a][b];
            }
        }
        if (total - 1.0).abs() > STATE_TOL {
            return Err(QkdError::InvalidState(format!(
                "joint probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self { p: clean })
    }

    pub fn prob(&self, a: usize, b: usize) -> f64 {
        self.p[a][b]
    }

    /// Marginal over Alice's bit (row sums).
    pub fn marginal_alice(&self) -> [f64; 2] {
        [self.p[0][0] + self.p[0][1], self.p[1][0] + self.p[1][1]]
    }

    /// Marginal over Bob's bit (column sums).
    pub fn marginal_bob(&self) -> [f64; 2] {
        [self.p[0][0] + self.p[1][0], self.p[0][1] + self.p[1][1]]
    }
}

/// Conditional entropy `H(B|A) = Σ_a p_A(a) H(B|A=a)`.
///
/// Rows with zero marginal contribute zero.
pub fn conditional_entropy(j: &JointDistribution) -> f64 {
    let pa = j.marginal_alice();
    let mut h = 0.0;
    for (a, &weight) in pa.iter().enumerate() {
        if weight <= 0.0 {
            continue;
        }
        for b in 0..2 {
            h -= weight * plogp(j.prob(a, b) / weight);
        }
    }
    h
}

/// Mutual information `I(A:B) = H(B) − H(B|A)`.
pub fn mutual_information(j: &JointDistribution) -> f64 {
    let pb = j.marginal_bob();
    let hb = -plogp(pb[0]) - plogp(pb[1]);
    hb - conditional_entropy(j)
}

/// Ensemble `{p_A(a), ρ_{E|a}}` of conditional states with their weights.
#[derive(Debug, Clone)]
pub struct ConditionalEnsemble {
    members: Vec<(f64, DensityOperator)>,
}

impl ConditionalEnsemble {
    /// Weights must form a probability distribution and all states must share
    /// one dimension.
    pub fn new(members: Vec<(f64, DensityOperator)>) -> Result<Self> {
        ProbabilityDistribution::new(members.iter().map(|(w, _)| *w).collect())?;
        let dim = members[0].1.dim();
        if members.iter().any(|(_, rho)| rho.dim() != dim) {
            return Err(QkdError::Dimension(
                "ensemble members have different dimensions".into(),
            ));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[(f64, DensityOperator)] {
        &self.members
    }

    /// The ensemble average `Σ_a p(a) ρ_a`.
    pub fn average(&self) -> Result<DensityOperator> {
        let dim = self.members[0].1.dim();
        let mut entries = vec![super::ComplexScalar::new(0.0, 0.0); dim * dim];
        for (w, rho) in &self.members {
            for (e, r) in entries.iter_mut().zip(rho.entries()) {
                *e += r * *w;
            }
        }
        DensityOperator::new(dim, entries)
    }
}

/// Von Neumann entropy `S(ρ) = −Tr(ρ log₂ ρ)` via the eigenvalue spectrum.
///
/// Eigenvalues in `[-EIG_CLAMP_TOL, 0)` are clamped to zero; anything below
/// rejects the state.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    let mut buf = [0.0; 16];
    let n = super::eig::eigenvalues_into(rho.dim(), rho.entries(), &mut buf);
    let mut s = 0.0;
    for &v in &buf[..n] {
        if v < -super::EIG_CLAMP_TOL {
            return Err(QkdError::InvalidState(format!(
                "negative eigenvalue {v:.3e} in density operator"
            )));
        }
        s -= plogp(v.max(0.0));
    }
    Ok(s)
}

/// Holevo quantity `χ = S(Σ p_a ρ_a) − Σ p_a S(ρ_a)`.
pub fn holevo(e: &ConditionalEnsemble) -> Result<f64> {
    let avg = e.average()?;
    let mut chi = von_neumann_entropy(&avg)?;
    for (w, rho) in e.members() {
        if *w > 0.0 {
            chi -= w * von_neumann_entropy(rho)?;
        }
    }
    Ok(chi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{ComplexScalar, StateVector};

    #[test]
    fn binary_entropy_reference_points() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        // independently computed: h(0.11)
        assert!((binary_entropy(0.11).unwrap() - 0.499915958164528).abs() < 1e-12);
        assert!(binary_entropy(1.1).is_err());
        assert!(binary_entropy(-0.01).is_err());
    }

    #[test]
    fn shannon_entropy_reference_points() {
        let uniform = ProbabilityDistribution::new(vec![0.25; 4]).unwrap();
        assert!((shannon_entropy(&uniform) - 2.0).abs() < 1e-12);
        let point = ProbabilityDistribution::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(shannon_entropy(&point), 0.0);
        // product weights (0.89, 0.11) ⊗ (0.89, 0.11): entropy 2·h(0.11)
        let lam = ProbabilityDistribution::new(vec![0.7921, 0.0979, 0.0979, 0.0121]).unwrap();
        assert!((shannon_entropy(&lam) - 0.999831916329056).abs() < 1e-10);
    }

    #[test]
    fn conditional_entropy_reference_points() {
        let correlated = JointDistribution::new([[0.5, 0.0], [0.0, 0.5]]).unwrap();
        assert_eq!(conditional_entropy(&correlated), 0.0);
        let coins = JointDistribution::new([[0.25, 0.25], [0.25, 0.25]]).unwrap();
        assert!((conditional_entropy(&coins) - 1.0).abs() < 1e-12);
        // h(0.11) when the error rate is 0.11
        let noisy = JointDistribution::new([[0.445, 0.055], [0.055, 0.445]]).unwrap();
        assert!((conditional_entropy(&noisy) - 0.499915958164528).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_reference_points() {
        let correlated = JointDistribution::new([[0.5, 0.0], [0.0, 0.5]]).unwrap();
        assert!((mutual_information(&correlated) - 1.0).abs() < 1e-12);
        let indep = JointDistribution::new([[0.25, 0.25], [0.25, 0.25]]).unwrap();
        assert!(mutual_information(&indep).abs() < 1e-12);
        // 1 − h(0.11)
        let noisy = JointDistribution::new([[0.445, 0.055], [0.055, 0.445]]).unwrap();
        assert!((mutual_information(&noisy) - 0.500084041835472).abs() < 1e-12);
    }

    #[test]
    fn zero_marginal_rows_contribute_zero() {
        let j = JointDistribution::new([[0.6, 0.4], [0.0, 0.0]]).unwrap();
        let h = conditional_entropy(&j);
        assert!((h - binary_entropy(0.6).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn von_neumann_reference_points() {
        let mixed = DensityOperator::from_diagonal(&[0.5, 0.5]).unwrap();
        assert!((von_neumann_entropy(&mixed).unwrap() - 1.0).abs() < 1e-12);
        let pure = StateVector::plus().projector();
        assert!(von_neumann_entropy(&pure).unwrap().abs() < 1e-10);
        let diag = DensityOperator::from_diagonal(&[0.7921, 0.0979, 0.0979, 0.0121]).unwrap();
        assert!((von_neumann_entropy(&diag).unwrap() - 0.999831916329056).abs() < 1e-10);
    }

    #[test]
    fn holevo_reference_points() {
        let rho = DensityOperator::from_diagonal(&[0.3, 0.7]).unwrap();
        let same = ConditionalEnsemble::new(vec![(0.5, rho.clone()), (0.5, rho)]).unwrap();
        assert!(holevo(&same).unwrap().abs() < 1e-10);

        let e0 = StateVector::zero().projector();
        let e1 = StateVector::one().projector();
        let orth = ConditionalEnsemble::new(vec![(0.5, e0), (0.5, e1)]).unwrap();
        assert!((holevo(&orth).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn entropy_bridge_diagonal_equals_shannon() {
        // seeded LCG keeps the case count pinned at 100
        let mut state = 0xfeed5eedu64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let raw: Vec<f64> = (0..4).map(|_| next() + 1e-6).collect();
            let total: f64 = raw.iter().sum();
            let probs: Vec<f64> = raw.iter().map(|p| p / total).collect();
            let d = ProbabilityDistribution::new(probs.clone()).unwrap();
            let rho = DensityOperator::from_diagonal(&probs).unwrap();
            let dev = (von_neumann_entropy(&rho).unwrap() - shannon_entropy(&d)).abs();
            assert!(dev < 1e-9, "entropy bridge deviation {dev}");
        }
    }

    #[test]
    fn chain_rule_conditional_entropy() {
        let mut state = 0xabcdef12u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let raw = [[next() + 1e-9, next() + 1e-9], [next() + 1e-9, next() + 1e-9]];
            let total: f64 = raw.iter().flatten().sum();
            let p = [
                [raw[0][0] / total, raw[0][1] / total],
                [raw[1][0] / total, raw[1][1] / total],
            ];
            let j = JointDistribution::new(p).unwrap();
            let joint_flat =
                ProbabilityDistribution::new(vec![p[0][0], p[0][1], p[1][0], p[1][1]]).unwrap();
            let pa = j.marginal_alice();
            let ha = -(pa[0] * pa[0].log2() + pa[1] * pa[1].log2());
            let dev = (conditional_entropy(&j) - (shannon_entropy(&joint_flat) - ha)).abs();
            assert!(dev < 1e-9, "chain rule deviation {dev}");
        }
    }

    #[test]
    fn holevo_nonnegative_on_random_ensembles() {
        let mut state = 0x5151u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for _ in 0..100 {
            let mut members = Vec::new();
            for _ in 0..2 {
                let amps: Vec<ComplexScalar> = (0..4)
                    .map(|_| ComplexScalar::new(next(), next()))
                    .collect();
                let psi = StateVector::from_unnormalized(amps).unwrap();
                members.push(psi.projector());
            }
            let w = 0.25 + 0.5 * (next() + 0.5);
            let e =
                ConditionalEnsemble::new(vec![(w, members.remove(0)), (1.0 - w, members.remove(0))])
                    .unwrap();
            let chi = holevo(&e).unwrap();
            assert!(chi >= -1e-9, "negative Holevo quantity {chi}");
        }
    }
}
