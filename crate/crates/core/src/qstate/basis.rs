//! The four-vector orthonormal bases used as entanglement-based
//! representations and as teleportation measurement bases.

use num_complex::Complex64;

use super::{ComplexScalar, StateVector, DOMAIN_SLACK};
use crate::error::{QkdError, Result};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Which four-vector basis to construct.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasisKind {
    /// The four Bell states.
    Bell,
    /// Bell pair `Φ±` completed by the product states `|01⟩`, `|10⟩`.
    Tilde,
    /// The [`BasisKind::Tilde`] construction written in the x-basis:
    /// `(|++⟩+|−−⟩)/√2`, `(|+−⟩+|−+⟩)/√2`, `|01⟩`, `|10⟩`.
    XBell,
    /// Rotated Bell pair mixing `Φ1`, `Φ2` with weights `√(2p)`, `√(1−2p)`,
    /// completed by `Φ3`, `Φ4`. Requires `p ∈ (¼, ½]`.
    Xi { p: f64 },
    /// Generalized Bell states with entanglement parameter `m ∈ [0, 1]`,
    /// e.g. `(|00⟩ + m|11⟩)/√(1+m²)`.
    GenBell { m: f64 },
}

/// Four pairwise-orthonormal vectors on the two-qubit space.
#[derive(Debug, Clone)]
pub struct OrthonormalBasis {
    kind: BasisKind,
    vectors: [StateVector; 4],
}

impl OrthonormalBasis {
    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn vectors(&self) -> &[StateVector; 4] {
        &self.vectors
    }

    /// Basis vector by zero-based index.
    pub fn vector(&self, index: usize) -> &StateVector {
        &self.vectors[index]
    }
}

fn re(x: f64) -> ComplexScalar {
    Complex64::new(x, 0.0)
}

fn vec4(a: f64, b: f64, c: f64, d: f64) -> StateVector {
    StateVector::from_unnormalized(vec![re(a), re(b), re(c), re(d)])
        .expect("basis vector is non-zero")
}

/// Constructs the requested basis, exactly as defined by its closed form.
pub fn make_basis(kind: BasisKind) -> Result<OrthonormalBasis> {
    let vectors = match kind {
        BasisKind::Bell => [
            vec4(1.0, 0.0, 0.0, 1.0),
            vec4(1.0, 0.0, 0.0, -1.0),
            vec4(0.0, 1.0, 1.0, 0.0),
            vec4(0.0, 1.0, -1.0, 0.0),
        ],
        BasisKind::Tilde => [
            vec4(1.0, 0.0, 0.0, 1.0),
            vec4(1.0, 0.0, 0.0, -1.0),
            vec4(0.0, 1.0, 0.0, 0.0),
            vec4(0.0, 0.0, 1.0, 0.0),
        ],
        BasisKind::XBell => {
            let pp = StateVector::plus().tensor(&StateVector::plus())?;
            let pm = StateVector::plus().tensor(&StateVector::minus())?;
            let mp = StateVector::minus().tensor(&StateVector::plus())?;
            let mm = StateVector::minus().tensor(&StateVector::minus())?;
            let combine = |x: &StateVector, y: &StateVector| {
                let amps = x
                    .amps()
                    .iter()
                    .zip(y.amps())
                    .map(|(a, b)| (a + b) * FRAC_1_SQRT_2)
                    .collect();
                StateVector::new(amps).expect("x-basis Bell state is normalized")
            };
            [
                combine(&pp, &mm),
                combine(&pm, &mp),
                vec4(0.0, 1.0, 0.0, 0.0),
                vec4(0.0, 0.0, 1.0, 0.0),
            ]
        }
        BasisKind::Xi { p } => {
            if !(p > 0.25 && p <= 0.5 + DOMAIN_SLACK) {
                return Err(QkdError::Domain(format!(
                    "xi basis parameter p = {p} ∉ (1/4, 1/2]"
                )));
            }
            let p = p.min(0.5);
            let cp = (2.0 * p).sqrt();
            let cm = (1.0 - 2.0 * p).max(0.0).sqrt();
            let s = FRAC_1_SQRT_2;
            // √(2p)·Φ1 + √(1−2p)·Φ2 and √(2p)·Φ2 − √(1−2p)·Φ1
            [
                vec4(s * (cp + cm), 0.0, 0.0, s * (cp - cm)),
                vec4(s * (cp - cm), 0.0, 0.0, -s * (cp + cm)),
                vec4(0.0, 1.0, 1.0, 0.0),
                vec4(0.0, 1.0, -1.0, 0.0),
            ]
        }
        BasisKind::GenBell { m } => {
            if !((-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&m)) {
                return Err(QkdError::Domain(format!(
                    "generalized Bell parameter m = {m} ∉ [0, 1]"
                )));
            }
            let m = m.clamp(0.0, 1.0);
            [
                vec4(1.0, 0.0, 0.0, m),
                vec4(m, 0.0, 0.0, -1.0),
                vec4(0.0, 1.0, m, 0.0),
                vec4(0.0, m, -1.0, 0.0),
            ]
        }
    };
    Ok(OrthonormalBasis { kind, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_gram_identity(basis: &OrthonormalBasis) {
        for i in 0..4 {
            for j in 0..4 {
                let g = basis.vector(i).inner(basis.vector(j)).unwrap();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (g.re - expect).abs() < 1e-9 && g.im.abs() < 1e-9,
                    "{:?}: Gram entry ({i},{j}) = {g}",
                    basis.kind()
                );
            }
        }
    }

    #[test]
    fn bell_first_vector() {
        let b = make_basis(BasisKind::Bell).unwrap();
        let v = b.vector(0);
        assert!((v.amp(0).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(v.amp(1).norm() < 1e-15);
        assert!(v.amp(2).norm() < 1e-15);
        assert!((v.amp(3).re - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn genbell_at_m_one_matches_bell_signs() {
        // |Φ2¹⟩ = (|00⟩−|11⟩)/√2, |Φ4¹⟩ = (|01⟩−|10⟩)/√2
        let g = make_basis(BasisKind::GenBell { m: 1.0 }).unwrap();
        let b = make_basis(BasisKind::Bell).unwrap();
        for j in 0..4 {
            let f = g.vector(j).fidelity(b.vector(j)).unwrap();
            assert!((f - 1.0).abs() < 1e-12, "vector {j} fidelity {f}");
        }
        let v2 = g.vector(1);
        assert!((v2.amp(0).re - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((v2.amp(3).re + FRAC_1_SQRT_2).abs() < 1e-12);
        let v4 = g.vector(3);
        assert!((v4.amp(1).re - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((v4.amp(2).re + FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn xi_at_half_p_reduces_to_bell() {
        let xi = make_basis(BasisKind::Xi { p: 0.5 }).unwrap();
        let bell = make_basis(BasisKind::Bell).unwrap();
        for j in 0..4 {
            let f = xi.vector(j).fidelity(bell.vector(j)).unwrap();
            assert!((f - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn xbell_equals_tilde_in_computational_basis() {
        let x = make_basis(BasisKind::XBell).unwrap();
        let t = make_basis(BasisKind::Tilde).unwrap();
        for j in 0..4 {
            let f = x.vector(j).fidelity(t.vector(j)).unwrap();
            assert!((f - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn param_ranges_rejected() {
        assert!(make_basis(BasisKind::Xi { p: 0.25 }).is_err());
        assert!(make_basis(BasisKind::Xi { p: 0.51 }).is_err());
        assert!(make_basis(BasisKind::GenBell { m: -0.1 }).is_err());
        assert!(make_basis(BasisKind::GenBell { m: 1.1 }).is_err());
    }

    #[test]
    fn orthonormality_over_sampled_params() {
        assert_gram_identity(&make_basis(BasisKind::Bell).unwrap());
        assert_gram_identity(&make_basis(BasisKind::Tilde).unwrap());
        assert_gram_identity(&make_basis(BasisKind::XBell).unwrap());
        for k in 0..64 {
            let m = k as f64 / 63.0;
            assert_gram_identity(&make_basis(BasisKind::GenBell { m }).unwrap());
            let p = 0.25 + 1e-9 + (0.25 - 1e-9) * (k as f64 + 1.0) / 64.0;
            assert_gram_identity(&make_basis(BasisKind::Xi { p }).unwrap());
        }
    }
}
