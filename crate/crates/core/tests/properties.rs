//! Property tests over randomly generated states and parameters.

use proptest::prelude::*;

use teleqkd_core::qstate::{
    make_basis, partial_trace, project, BasisKind, ComplexScalar, StateVector,
};
use teleqkd_core::teleport::{
    bob_state_after_correction, measurement_probs, oracle_teleport, BellOutcome, TeleportParams,
};

fn arb_amplitudes(dim: usize) -> impl Strategy<Value = Vec<ComplexScalar>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim).prop_filter_map(
        "norm large enough to normalize",
        |raw| {
            let norm_sq: f64 = raw.iter().map(|(re, im)| re * re + im * im).sum();
            if norm_sq < 1e-6 {
                return None;
            }
            let scale = norm_sq.sqrt().recip();
            Some(
                raw.into_iter()
                    .map(|(re, im)| ComplexScalar::new(re * scale, im * scale))
                    .collect(),
            )
        },
    )
}

fn arb_state(dim: usize) -> impl Strategy<Value = StateVector> {
    arb_amplitudes(dim).prop_map(|amps| StateVector::new(amps).expect("normalized"))
}

fn arb_teleport_params() -> impl Strategy<Value = TeleportParams> {
    (arb_amplitudes(2), 0.0f64..=1.0, 0.0f64..=1.0)
        .prop_map(|(amps, m, n)| TeleportParams::new(amps[0], amps[1], m, n).expect("valid"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Tracing out the second factor of a product recovers the first, and
    /// vice versa.
    #[test]
    fn partial_trace_inverts_tensor(a in arb_state(2), b in arb_state(4)) {
        let joint = a.tensor(&b).unwrap().projector();
        let left = partial_trace(&joint, &[true, false], &[2, 4]).unwrap();
        let right = partial_trace(&joint, &[false, true], &[2, 4]).unwrap();
        let expect_left = a.projector();
        let expect_right = b.projector();
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((left.entry(i, j) - expect_left.entry(i, j)).norm() < 1e-9);
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                prop_assert!((right.entry(i, j) - expect_right.entry(i, j)).norm() < 1e-9);
            }
        }
    }

    /// Projection probabilities over a complete basis always sum to one.
    #[test]
    fn projection_probabilities_complete(psi in arb_state(8), m in 0.0f64..=1.0) {
        let basis = make_basis(BasisKind::GenBell { m }).unwrap();
        let rho = psi.projector();
        let total: f64 = basis
            .vectors()
            .iter()
            .map(|v| project(&rho, v, 0, &[4, 2]).unwrap().prob)
            .sum();
        prop_assert!((total - 1.0).abs() < 1e-9, "total {total}");
    }

    /// The four outcome probabilities form a distribution and respect the
    /// swap symmetry (α, β, j) → (β, α, 5−j).
    #[test]
    fn teleport_probabilities_distribution(tp in arb_teleport_params()) {
        let probs = measurement_probs(&tp);
        let total: f64 = probs.probs().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        let swapped = TeleportParams::new(tp.beta, tp.alpha, tp.m, tp.n).unwrap();
        let q = measurement_probs(&swapped);
        for j in 0..4 {
            prop_assert!((probs.probs()[j] - q.probs()[3 - j]).abs() < 1e-12);
        }
    }

    /// The brute-force circuit agrees with the closed forms on every branch
    /// of positive probability.
    #[test]
    fn oracle_matches_closed_forms(tp in arb_teleport_params()) {
        let probs = measurement_probs(&tp);
        for j in BellOutcome::ALL {
            let p = probs.probs()[j.index()];
            if p <= 1e-6 {
                continue;
            }
            let (op, ostate) = oracle_teleport(j, &tp).unwrap();
            prop_assert!((op - p).abs() <= 1e-10);
            let closed = bob_state_after_correction(j, &tp).unwrap();
            prop_assert!(ostate.fidelity(&closed).unwrap() >= 1.0 - 1e-10);
        }
    }

    /// Deterministic numeric formatting survives a parse round-trip at its
    /// stated precision.
    #[test]
    fn sig9_roundtrip(x in -1.0e6f64..1.0e6) {
        let s = teleqkd_core::fmt::sig9(x);
        let back: f64 = s.parse().unwrap();
        let tol = 1e-8 * x.abs().max(1e-8);
        prop_assert!((back - x).abs() <= tol, "{x} -> {s} -> {back}");
    }
}
