//! Shared fixtures for the criterion benchmarks.

use teleqkd_core::simproto::{AttackModel, ProtocolConfig, ProtocolKind};

/// A mid-size GR10 run with partial entanglement and a depolarizing channel.
pub fn gr10_config(rounds: u64) -> ProtocolConfig {
    ProtocolConfig {
        kind: ProtocolKind::Gr10,
        rounds,
        n1: 0.5,
        n2: 1.0,
        disclose_fraction: 0.5,
        attack: AttackModel::Depolarizing { eps: 0.03 },
        seed: 17,
    }
}

/// A mid-size BB84 run under intercept-resend.
pub fn bb84_config(rounds: u64) -> ProtocolConfig {
    ProtocolConfig {
        kind: ProtocolKind::Bb84,
        rounds,
        n1: 1.0,
        n2: 1.0,
        disclose_fraction: 0.5,
        attack: AttackModel::InterceptResend {
            basis: teleqkd_core::simproto::InterceptBasis::Random,
        },
        seed: 18,
    }
}
