//! End-to-end behaviour of the `ptosc` binary: artifact formats, exit codes,
//! environment overrides and determinism.

use std::path::Path;
use std::process::{Command, Output};

fn ptosc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptosc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn help_documents_exit_codes() {
    let out = ptosc(&["--help"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    for needle in [
        "Exit codes",
        "usage error",
        "numerical failure",
        "verification failure",
    ] {
        assert!(text.contains(needle), "help is missing `{needle}`");
    }
}

#[test]
fn spectrum_header_carries_reference_ground_state() {
    let out = ptosc(&[
        "spectrum",
        "--omega",
        "1",
        "--gamma",
        "0.05",
        "--epsilon",
        "0.5",
        "--nmax",
        "2",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(
        text.contains("# a_re=2.539434939"),
        "ground-state parameter missing from header:\n{text}"
    );
    assert!(text.contains("# phase=Unbroken"));
    assert!(text.contains("n,k,e_re,e_im"));
    // nmax 2 gives 9 rows
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count() - 1, 9);
}

#[test]
fn decoupled_spectrum_is_real_with_degeneracy_warning() {
    let out = ptosc(&["spectrum", "--gamma", "0", "--epsilon", "0", "--nmax", "2"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("# warning=degenerate mode frequencies"));
    for line in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let e_im = line.split(',').nth(3).unwrap();
        let value: f64 = e_im.parse().unwrap();
        assert_eq!(value, 0.0, "imaginary energy in {line}");
    }
}

#[test]
fn overcoupled_spectrum_is_broken_high_with_complex_rows() {
    let out = ptosc(&["spectrum", "--epsilon", "1.2", "--nmax", "2"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("# phase=BrokenHigh"), "{text}");
    let some_complex = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .any(|line| {
            let e_im: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
            e_im != 0.0
        });
    assert!(some_complex, "expected complex energies:\n{text}");
}

#[test]
fn spectrum_json_has_sorted_keys() {
    let out = ptosc(&[
        "spectrum",
        "--omega",
        "1",
        "--gamma",
        "0.05",
        "--epsilon",
        "0.5",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let a = text.find("\"a\"").unwrap();
    let lambda = text.find("\"lambda1\"").unwrap();
    let rows = text.find("\"rows\"").unwrap();
    assert!(a < lambda && lambda < rows, "keys out of order:\n{text}");
}

#[test]
fn showcase_grid_spans_all_three_regions() {
    let out = ptosc(&[
        "phase-diagram",
        "--grid-gamma",
        "0.05:0.5:3",
        "--grid-epsilon",
        "0.05:1.5:3",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.starts_with("gamma,epsilon,region,lambda1_re,lambda1_im,lambda2_re,lambda2_im"));
    for region in ["Unbroken", "BrokenLow", "BrokenHigh"] {
        assert!(text.contains(region), "missing region {region}:\n{text}");
    }
    // epsilon varies fastest
    let first_two: Vec<&str> = text.lines().skip(1).take(2).collect();
    let gamma0: f64 = first_two[0].split(',').next().unwrap().parse().unwrap();
    let gamma1: f64 = first_two[1].split(',').next().unwrap().parse().unwrap();
    assert_eq!(gamma0, gamma1, "gamma should be the slow axis");
}

#[test]
fn rescaled_grid_reproduces_unit_frequency_labels() {
    let base = ptosc(&[
        "phase-diagram",
        "--omega",
        "1",
        "--grid-gamma",
        "0.05:0.5:3",
        "--grid-epsilon",
        "0.05:1.5:3",
    ]);
    // gamma scales with omega, epsilon with omega^2
    let scaled = ptosc(&[
        "phase-diagram",
        "--omega",
        "2",
        "--grid-gamma",
        "0.1:1:3",
        "--grid-epsilon",
        "0.2:6:3",
    ]);
    assert!(base.status.success() && scaled.status.success());
    let labels = |text: &str| -> Vec<String> {
        text.lines()
            .skip(1)
            .map(|l| l.split(',').nth(2).unwrap().to_string())
            .collect()
    };
    assert_eq!(labels(&stdout_of(&base)), labels(&stdout_of(&scaled)));
}

#[test]
fn single_point_grid_is_unbroken_at_reference_params() {
    let out = ptosc(&[
        "phase-diagram",
        "--grid-gamma",
        "0.05:0.05:1",
        "--grid-epsilon",
        "0.5:0.5:1",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().contains("Unbroken"));
}

#[test]
fn usage_errors_exit_with_code_2() {
    // unknown flag
    assert_eq!(ptosc(&["spectrum", "--bogus"]).status.code(), Some(2));
    // domain violation
    assert_eq!(ptosc(&["spectrum", "--omega", "-1"]).status.code(), Some(2));
    // malformed grid
    assert_eq!(
        ptosc(&["phase-diagram", "--grid-gamma", "0:1"])
            .status
            .code(),
        Some(2)
    );
    // classical needs --out
    assert_eq!(
        ptosc(&["classical", "--epsilon", "0.5"]).status.code(),
        Some(2)
    );
    // sample count not a power of two
    let tmp = std::env::temp_dir().join("ptosc_cli_badsteps.csv");
    assert_eq!(
        ptosc(&[
            "classical",
            "--epsilon",
            "0.5",
            "--t-final",
            "100",
            "--dt",
            "0.05",
            "--out",
            tmp.to_str().unwrap(),
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn environment_variables_override_defaults() {
    let out = Command::new(env!("CARGO_BIN_EXE_ptosc"))
        .args(["spectrum", "--nmax", "1"])
        .env("PTOSC_EPSILON", "1.2")
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("# phase=BrokenHigh"));
}

#[test]
fn verify_passes_at_reference_params() {
    let out = ptosc(&[
        "verify",
        "--omega",
        "1",
        "--gamma",
        "0.05",
        "--epsilon",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("\"failures\": 0"));
    assert!(!text.contains("\"status\": \"fail\""));
}

#[test]
fn verify_negative_control_fails_with_exit_1() {
    let out = ptosc(&[
        "verify",
        "--omega",
        "1",
        "--gamma",
        "0.05",
        "--epsilon",
        "0.5",
        "--perturb-a",
        "1e-3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_of(&out).contains("\"status\": \"fail\""));
}

#[test]
fn verify_at_boundary_skips_exceptional_point_checks() {
    // exactly on the lower transition for gamma = 0.3
    let eps = 2.0 * 0.3 * (1.0f64 - 0.09).sqrt();
    let out = ptosc(&[
        "verify",
        "--omega",
        "1",
        "--gamma",
        "0.3",
        "--epsilon",
        &format!("{eps:.17}"),
    ]);
    assert_eq!(out.status.code(), Some(0), "skips must not fail");
    let text = stdout_of(&out);
    assert!(text.contains("\"status\": \"skipped\""), "{text}");
    assert!(text.contains("\"phase\": \"Boundary\""));
    assert!(!text.contains("\"status\": \"fail\""));
}

#[test]
fn verify_in_broken_phase_checks_divergence_and_skips_oracle() {
    let out = ptosc(&[
        "verify",
        "--omega",
        "1",
        "--gamma",
        "0.5",
        "--epsilon",
        "0.1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("\"phase\": \"BrokenLow\""));
    // oracle checks are skipped, the divergence check runs and passes
    assert!(text.contains("\"name\": \"ground_state_residual\""));
    assert!(!text.contains("\"status\": \"fail\""));
    let divergence = text
        .split("\"name\": \"trajectory_divergence\"")
        .nth(1)
        .expect("divergence check present");
    assert!(divergence.contains("\"status\": \"pass\""), "{divergence}");
}

#[test]
fn classical_writes_trajectory_and_frequency_report() {
    let tmp = std::env::temp_dir().join("ptosc_cli_traj.csv");
    let out = ptosc(&[
        "classical",
        "--omega",
        "1",
        "--gamma",
        "0.05",
        "--epsilon",
        "0.5",
        "--seed",
        "3",
        "--out",
        tmp.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report = stdout_of(&out);
    assert!(report.contains("\"peaks\""));
    assert!(report.contains("\"seed\": 3"));
    let csv = std::fs::read_to_string(&tmp).unwrap();
    assert!(csv.contains("# seed=3"));
    assert!(csv.contains("t,x,y,px,py,H"));
    // 8192 samples plus headers
    assert_eq!(
        csv.lines().filter(|l| !l.starts_with('#')).count() - 1,
        8192
    );
    std::fs::remove_file(&tmp).ok();
}

#[test]
fn broken_phase_classical_run_reports_divergence() {
    let tmp = std::env::temp_dir().join("ptosc_cli_diverged.csv");
    let out = ptosc(&[
        "classical",
        "--omega",
        "1",
        "--gamma",
        "0.5",
        "--epsilon",
        "0.1",
        "--out",
        tmp.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "a diverging run is still a result");
    let report = stdout_of(&out);
    assert!(report.contains("\"diverged\": true"));
    assert!(report.contains("\"peaks\": []"));
    std::fs::remove_file(&tmp).ok();
}

#[test]
fn adjoint_dump_serializes_the_hamiltonian() {
    let out = ptosc(&[
        "adjoint",
        "--omega",
        "1",
        "--gamma",
        "0.05",
        "--epsilon",
        "0.5",
        "--dump",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("\"hamiltonian\""));
    assert!(text.contains("\"c0\": [0.0000000000000000e0, 0.0000000000000000e0]"));
    assert!(text.contains("\"n_dof\": 2"));
    assert!(text.contains("\"eigenvalues\""));
    // A has 16 row-major [re, im] entries; spot-check A[0][1] = (1 - gamma^2)/2
    let expected = format!("{:.16e}", (1.0 - 0.05f64 * 0.05) / 2.0);
    assert!(
        text.contains(&expected),
        "missing A[0][1] = {expected}:\n{text}"
    );
}

#[test]
fn adjoint_without_dump_omits_the_hamiltonian() {
    let out = ptosc(&["adjoint", "--epsilon", "0.5"]);
    assert!(out.status.success());
    assert!(!stdout_of(&out).contains("\"hamiltonian\""));
}

fn run_phase_diagram_to(path: &Path) {
    let out = ptosc(&[
        "phase-diagram",
        "--grid-gamma",
        "0:1:40",
        "--grid-epsilon",
        "0:1.5:40",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
}

#[test]
fn phase_diagram_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.csv");
    let second = dir.path().join("b.csv");
    run_phase_diagram_to(&first);
    run_phase_diagram_to(&second);
    let a = std::fs::read(&first).unwrap();
    let b = std::fs::read(&second).unwrap();
    assert_eq!(a, b, "identical configs must give identical bytes");
    assert!(!a.is_empty());
}
