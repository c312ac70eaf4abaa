//! Acceptance: determinism and runtime of the command-line front end.

use std::process::Command;
use std::time::Instant;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pinch"))
}

#[test]
fn criterion_11_verify_is_byte_identical_and_fast() {
    let start = Instant::now();
    let run = || {
        bin()
            .args(["verify", "--seed", "42"])
            .output()
            .expect("verify runs")
    };
    let first = run();
    let second = run();
    assert!(first.status.success(), "verify found violations");
    assert!(second.status.success());
    assert!(!first.stdout.is_empty());
    assert_eq!(
        first.stdout, second.stdout,
        "verify --seed 42 must be byte-identical across runs"
    );

    // A quick end-to-end pass over the other subcommands, still inside the
    // wall-clock budget.
    let sweep = bin()
        .args([
            "sweep",
            "--family",
            "cylinder",
            "--n",
            "4",
            "--param-min",
            "0.5",
            "--param-max",
            "2.0",
            "--param-steps",
            "4",
        ])
        .output()
        .expect("sweep runs");
    assert!(sweep.status.success());

    let manifolds =
        std::env::temp_dir().join(format!("pinch_acceptance_{}.json", std::process::id()));
    std::fs::write(
        &manifolds,
        r#"{"entries": [
            {"model": "round_sphere", "n": 3, "r": 1.0},
            {"model": "clifford_product", "n": 4, "lambda": 1.0}
        ], "options": {"budget": 8}}"#,
    )
    .unwrap();
    let analyze = bin()
        .args(["analyze", manifolds.to_str().unwrap(), "--seed", "42"])
        .output()
        .expect("analyze runs");
    assert!(analyze.status.success());
    let analyze_again = bin()
        .args(["analyze", manifolds.to_str().unwrap(), "--seed", "42"])
        .output()
        .expect("analyze runs");
    assert_eq!(analyze.stdout, analyze_again.stdout);
    std::fs::remove_file(manifolds).ok();

    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 300.0,
        "acceptance run took {elapsed:?}"
    );
    println!(
        "ACCEPTANCE 11 determinism (byte-identical verify and analyze) and runtime: PASS ({elapsed:?})"
    );
}
