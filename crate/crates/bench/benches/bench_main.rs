use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use teleqkd_bench::{bb84_config, gr10_config};
use teleqkd_core::keyrate::{
    bb84_std_rate, gr10_mod_rate, numeric_rate, threshold, ObservedStats, PurificationSpec,
    RateOptions, ThresholdTarget,
};
use teleqkd_core::qstate::{eig_hermitian, make_basis, partial_trace, BasisKind};
use teleqkd_core::simproto::{run_protocol, simulate_round};
use teleqkd_core::teleport::{
    measurement_probs, oracle_teleport, BellOutcome, TeleportParams,
};

fn keyrate_benches(c: &mut Criterion) {
    let opts = RateOptions::default();
    c.bench_function("keyrate/bb84_std_rate", |b| {
        b.iter(|| bb84_std_rate(black_box(0.05), black_box(0.07), &opts).unwrap().rate)
    });
    c.bench_function("keyrate/gr10_mod_rate", |b| {
        b.iter(|| gr10_mod_rate(black_box(0.47), black_box(0.04), &opts).unwrap().rate)
    });
    c.bench_function("keyrate/threshold_bb84_std_symmetric", |b| {
        b.iter(|| threshold(&ThresholdTarget::Bb84StdSymmetric, &opts).unwrap())
    });
    let mut slow = c.benchmark_group("keyrate/numeric");
    slow.sample_size(10);
    slow.bench_function("numeric_rate_bb84_std", |b| {
        b.iter(|| {
            numeric_rate(
                &PurificationSpec::Bb84Std,
                &ObservedStats::bb84(black_box(0.05), black_box(0.05)),
                &opts,
            )
            .unwrap()
            .rate
        })
    });
    slow.finish();
}

fn teleport_benches(c: &mut Criterion) {
    let tp = TeleportParams::new(
        teleqkd_core::qstate::ComplexScalar::new(0.6, 0.0),
        teleqkd_core::qstate::ComplexScalar::new(0.0, 0.8),
        0.7,
        0.4,
    )
    .unwrap();
    c.bench_function("teleport/measurement_probs", |b| {
        b.iter(|| measurement_probs(black_box(&tp)))
    });
    c.bench_function("teleport/oracle_teleport", |b| {
        b.iter(|| oracle_teleport(BellOutcome::Phi2, black_box(&tp)).unwrap())
    });
}

fn qstate_benches(c: &mut Criterion) {
    let bell = make_basis(BasisKind::Bell).unwrap();
    let rho = bell
        .vector(0)
        .tensor(&teleqkd_core::qstate::StateVector::plus())
        .unwrap()
        .projector();
    c.bench_function("qstate/partial_trace_8_to_2", |b| {
        b.iter(|| partial_trace(black_box(&rho), &[true, false, false], &[2, 2, 2]).unwrap())
    });
    let eve = bell.vector(3).projector();
    c.bench_function("qstate/eig_hermitian_4x4", |b| {
        b.iter(|| eig_hermitian(4, black_box(eve.entries())).unwrap())
    });
}

fn simproto_benches(c: &mut Criterion) {
    c.bench_function("simproto/gr10_round", |b| {
        let cfg = gr10_config(1);
        let mut round = 0u64;
        b.iter(|| {
            round += 1;
            simulate_round(black_box(&cfg), round).unwrap()
        })
    });
    let mut group = c.benchmark_group("simproto/run_protocol");
    group.sample_size(10);
    group.bench_function("gr10_10k_rounds", |b| {
        b.iter_batched(
            || gr10_config(10_000),
            |cfg| run_protocol(&cfg).unwrap().summary,
            BatchSize::LargeInput,
        )
    });
    group.bench_function("bb84_10k_rounds", |b| {
        b.iter_batched(
            || bb84_config(10_000),
            |cfg| run_protocol(&cfg).unwrap().summary,
            BatchSize::LargeInput,
        )
    });
    group.finish();
}

criterion_group!(
    benches,
    keyrate_benches,
    teleport_benches,
    qstate_benches,
    simproto_benches
);
criterion_main!(benches);
