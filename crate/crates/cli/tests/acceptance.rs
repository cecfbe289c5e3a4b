//! Acceptance: identical configuration and seed produce byte-identical
//! transcript and summary files across repeated `simulate` runs.

use std::path::Path;
use std::process::Command;

fn run_simulate(dir: &Path, tag: &str) -> (Vec<u8>, Vec<u8>) {
    let transcript = dir.join(format!("transcript-{tag}.txt"));
    let summary = dir.join(format!("summary-{tag}.csv"));
    let status = Command::new(env!("CARGO_BIN_EXE_teleqkd"))
        .args([
            "simulate",
            "--protocol",
            "gr10",
            "--rounds",
            "20000",
            "--n1",
            "0.5",
            "--n2",
            "1",
            "--seed",
            "20260809",
            "--attack",
            "depolarizing",
            "--attack-eps",
            "0.03",
        ])
        .arg("--transcript")
        .arg(&transcript)
        .arg("--summary")
        .arg(&summary)
        .status()
        .expect("simulate runs");
    assert!(status.success());
    (
        std::fs::read(&transcript).expect("transcript written"),
        std::fs::read(&summary).expect("summary written"),
    )
}

#[test]
fn criterion_12_simulate_determinism() {
    let dir = tempfile::tempdir().expect("tempdir");
    let (t1, s1) = run_simulate(dir.path(), "a");
    let (t2, s2) = run_simulate(dir.path(), "b");
    let pass = t1 == t2 && s1 == s2 && !t1.is_empty() && !s1.is_empty();
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!(
        "[{verdict}] 12 simulate determinism: transcript {} bytes and summary {} bytes identical across reruns",
        t1.len(),
        s1.len()
    );
    assert!(pass, "criterion 12: outputs differ between identical runs");
}
