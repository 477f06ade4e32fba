//! Acceptance suite: the binding checks for the whole artifact, one test per
//! criterion, each printing a PASS line with the observed margins.
//!
//! Run with `cargo test -p ptosc --test acceptance -- --nocapture`.

use std::time::Instant;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ptosc_core::classical::{extract_frequencies, ClassicalSystem};
use ptosc_core::gaussian::GaussianOracle;
use ptosc_core::matrix::CMatrix;
use ptosc_core::operator::{OscillatorParams, QuadraticHamiltonian};
use ptosc_core::roots;
use ptosc_core::spectrum::{
    energy, multiset_max_deviation, AdjointMatrix, GroundStateParams, ModeFrequencies, PhaseRegion,
};

type C64 = Complex<f64>;

fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

const REFERENCE: OscillatorParams<f64> = OscillatorParams {
    omega: 1.0,
    gamma: 0.05,
    epsilon: 0.5,
};

const GRID_STEPS: usize = 50;

fn grid_params() -> Vec<OscillatorParams<f64>> {
    let mut points = Vec::with_capacity(GRID_STEPS * GRID_STEPS);
    for i in 0..GRID_STEPS {
        let gamma = i as f64 / (GRID_STEPS - 1) as f64;
        for j in 0..GRID_STEPS {
            let epsilon = 1.5 * j as f64 / (GRID_STEPS - 1) as f64;
            points.push(OscillatorParams::new(1.0, gamma, epsilon));
        }
    }
    points
}

fn reference_adjoint(p: OscillatorParams<f64>) -> CMatrix<f64> {
    let k = p.omega * p.omega - p.gamma * p.gamma;
    let i = |x: f64| c(0.0, x);
    CMatrix::from_rows(&[
        vec![i(p.gamma), i(0.0), i(p.epsilon), i(k)],
        vec![i(0.0), i(-p.gamma), i(k), i(p.epsilon)],
        vec![i(0.0), i(-1.0), i(-p.gamma), i(0.0)],
        vec![i(-1.0), i(0.0), i(0.0), i(p.gamma)],
    ])
}

fn random_unbroken(rng: &mut ChaCha8Rng) -> OscillatorParams<f64> {
    let omega: f64 = rng.random_range(0.5..2.0);
    let gamma = rng.random_range(0.0..0.62) * omega / 2f64.sqrt();
    let lo = 2.0 * gamma * (omega * omega - gamma * gamma).sqrt();
    let epsilon = lo + rng.random_range(0.05..0.95) * (omega * omega - lo);
    OscillatorParams::new(omega, gamma, epsilon)
}

#[test]
fn criterion_01_reference_ground_state_values() {
    // warm up, then time a single solve
    let gs = GroundStateParams::solve(REFERENCE).unwrap();
    let start = Instant::now();
    let gs_timed = GroundStateParams::solve(REFERENCE).unwrap();
    let elapsed = start.elapsed();
    assert_eq!(gs.a(), gs_timed.a());

    let delta_dev = (gs.delta() - c(0.964630863, 0.0)).norm();
    let a_dev = (gs.a() - c(0.2539434939, 0.0)).norm();
    assert!(delta_dev < 1e-8, "Delta deviates by {delta_dev:e}");
    assert!(a_dev < 1e-9, "a deviates by {a_dev:e}");
    assert!(
        elapsed.as_micros() < 1000,
        "ground-state solve took {elapsed:?}, budget 1 ms"
    );
    println!(
        "criterion 01 reference ground state: PASS (Delta dev {delta_dev:.2e}, a dev {a_dev:.2e}, {elapsed:?})"
    );
}

#[test]
fn criterion_02_adjoint_matrix_golden_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let p = OscillatorParams::new(
            rng.random_range(0.2..3.0),
            rng.random_range(0.0..1.5),
            rng.random_range(0.0..3.0),
        );
        let h = QuadraticHamiltonian::coupled_gain_loss(p);
        let m = AdjointMatrix::from_hamiltonian(&h);
        worst = worst.max(m.matrix().sub(&reference_adjoint(p)).max_abs());
    }
    assert!(worst < 1e-14, "worst entry deviation {worst:e}");
    println!("criterion 02 adjoint matrix golden form: PASS (worst entry dev {worst:.2e} over 100 triples)");
}

#[test]
fn criterion_03_frequency_cross_check_on_grid() {
    let start = Instant::now();
    let mut worst_multiset: f64 = 0.0;
    let mut worst_identity: f64 = 0.0;
    for p in grid_params() {
        let h = QuadraticHamiltonian::coupled_gain_loss(p);
        let m = AdjointMatrix::from_hamiltonian(&h);
        let numeric = ModeFrequencies::from_matrix(&m, 1e-9).unwrap();
        let closed = ModeFrequencies::closed_form(p, 1e-9);
        worst_multiset = worst_multiset.max(multiset_max_deviation(
            numeric.all_roots(),
            closed.all_roots(),
        ));
        let (l1, l2) = (numeric.lambda1(), numeric.lambda2());
        let sum_dev =
            (l1 * l1 + l2 * l2 - c(2.0 * p.omega * p.omega - 4.0 * p.gamma * p.gamma, 0.0)).norm();
        let prod_dev =
            (l1 * l1 * (l2 * l2) - c(p.omega.powi(4) - p.epsilon * p.epsilon, 0.0)).norm();
        worst_identity = worst_identity.max(sum_dev).max(prod_dev);
    }
    let elapsed = start.elapsed();
    assert!(
        worst_multiset < 1e-9,
        "worst multiset dev {worst_multiset:e}"
    );
    assert!(
        worst_identity < 1e-10,
        "worst identity dev {worst_identity:e}"
    );
    assert!(
        elapsed.as_secs_f64() < 5.0,
        "grid took {elapsed:?}, budget 5 s"
    );
    println!(
        "criterion 03 frequency cross-check on {GRID_STEPS}x{GRID_STEPS} grid: PASS \
         (multiset dev {worst_multiset:.2e}, identity dev {worst_identity:.2e}, {elapsed:?})"
    );
}

#[test]
fn criterion_04_frequency_split_at_random_unbroken_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let p = random_unbroken(&mut rng);
        assert_eq!(PhaseRegion::classify(p, 1e-9), PhaseRegion::Unbroken);
        let gs = GroundStateParams::solve(p).unwrap();
        let freqs = ModeFrequencies::closed_form(p, 1e-9);
        worst = worst.max((freqs.lambda1() - (gs.delta() + gs.a())).norm());
        worst = worst.max((freqs.lambda2() - (gs.delta() - gs.a())).norm());

        let h = QuadraticHamiltonian::coupled_gain_loss(p);
        let m = AdjointMatrix::from_hamiltonian(&h);
        let numeric = ModeFrequencies::from_matrix(&m, 1e-9).unwrap();
        worst = worst.max((numeric.lambda1() - (gs.delta() + gs.a())).norm());
        worst = worst.max((numeric.lambda2() - (gs.delta() - gs.a())).norm());
    }
    assert!(worst < 1e-10, "worst split deviation {worst:e}");
    println!(
        "criterion 04 lambda = Delta +- a at 100 unbroken points: PASS (worst dev {worst:.2e})"
    );
}

#[test]
fn criterion_05_oracle_residuals_and_annihilation() {
    let start = Instant::now();
    let oracle = GaussianOracle::with_default_cap(REFERENCE).unwrap();
    let mut worst: f64 = 0.0;
    for n in 0..=4u32 {
        for k in 0..=(4 - n) {
            let psi = oracle.build_state(n, k).unwrap();
            let r = oracle.eigen_residual(&psi, oracle.energy(n, k)).unwrap();
            assert!(r < 1e-9, "state ({n},{k}) residual {r:e}");
            worst = worst.max(r);
        }
    }
    let report = oracle.annihilation_check().unwrap();
    assert!(
        report.magnitudes[1] < 1e-12 && report.magnitudes[2] < 1e-12,
        "Z2/Z3 must annihilate the ground state: {:?}",
        report.magnitudes
    );
    assert!(
        report.magnitudes[0] > 1e-3 && report.magnitudes[3] > 1e-3,
        "Z1/Z4 must not annihilate the ground state: {:?}",
        report.magnitudes
    );
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "oracle took {elapsed:?}, budget 1 s"
    );
    println!(
        "criterion 05 oracle residuals (n+k <= 4) and annihilation pattern: PASS \
         (worst residual {worst:.2e}, vanishing {:.2e}/{:.2e}, surviving {:.2e}/{:.2e}, {elapsed:?})",
        report.magnitudes[1], report.magnitudes[2], report.magnitudes[0], report.magnitudes[3]
    );
}

#[test]
fn criterion_06_spectrum_unbounded_below() {
    let freqs = ModeFrequencies::closed_form(REFERENCE, 1e-9);
    let gs = GroundStateParams::solve(REFERENCE).unwrap();
    let mut previous = f64::INFINITY;
    for k in 0..=20 {
        let e = energy(0, k, &freqs, &gs).re;
        assert!(e < previous, "E(0,{k}) = {e} did not decrease");
        previous = e;
    }
    assert!(previous < -13.0, "E(0,20) = {previous}, expected below -13");
    println!(
        "criterion 06 spectrum unbounded below: PASS (E(0,k) strictly decreasing, E(0,20) = {previous:.6})"
    );
}

#[test]
fn criterion_07_classical_quantum_identity() {
    // spectral identity over the full grid
    let mut worst: f64 = 0.0;
    for p in grid_params() {
        let h = QuadraticHamiltonian::coupled_gain_loss(p);
        let sys = ClassicalSystem::from_hamiltonian(&h).unwrap();
        let adjoint = AdjointMatrix::from_hamiltonian(&h);
        let k_eigs = roots::eigenvalues(&sys.k_matrix()).unwrap();
        let rotated: Vec<C64> = roots::eigenvalues(adjoint.matrix())
            .unwrap()
            .iter()
            .map(|z| c(0.0, 1.0) * z)
            .collect();
        worst = worst.max(multiset_max_deviation(&k_eigs, &rotated));
    }
    assert!(worst < 1e-10, "worst spectral identity deviation {worst:e}");

    // frequency extraction at the reference point
    let start = Instant::now();
    let h = QuadraticHamiltonian::coupled_gain_loss(REFERENCE);
    let sys = ClassicalSystem::from_hamiltonian(&h).unwrap();
    let traj = sys.integrate(&[0.9, -0.3, 0.4, 0.7], 0.05, 8192).unwrap();
    let peaks = extract_frequencies(&traj).unwrap();
    let elapsed = start.elapsed();
    assert!(peaks.len() >= 2, "found {} peaks", peaks.len());
    let freqs = ModeFrequencies::closed_form(REFERENCE, 1e-9);
    let mut got: Vec<f64> = peaks[..2].iter().map(|p| p.frequency).collect();
    got.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let dev1 = (got[1] - freqs.lambda1().re).abs();
    let dev2 = (got[0] - freqs.lambda2().re).abs();
    assert!(dev1 < 0.01, "lambda1 peak off by {dev1:e}");
    assert!(dev2 < 0.01, "lambda2 peak off by {dev2:e}");
    assert!(
        elapsed.as_secs_f64() < 2.0,
        "per-point run took {elapsed:?}, budget 2 s"
    );
    println!(
        "criterion 07 classical/quantum identity: PASS (spectral identity dev {worst:.2e}, \
         peak devs {dev1:.2e}/{dev2:.2e} rad, {elapsed:?} per point)"
    );
}

#[test]
fn criterion_08_phase_classifier_agreement() {
    let mut checked = 0usize;
    for p in grid_params() {
        let region = PhaseRegion::classify(p, 1e-9);
        if region == PhaseRegion::Boundary {
            continue;
        }
        let h = QuadraticHamiltonian::coupled_gain_loss(p);
        let m = AdjointMatrix::from_hamiltonian(&h);
        let numeric = ModeFrequencies::from_matrix(&m, 1e-9).unwrap();
        assert_eq!(
            region == PhaseRegion::Unbroken,
            numeric.all_real(),
            "classifier/reality mismatch at gamma={}, epsilon={}",
            p.gamma,
            p.epsilon
        );
        checked += 1;
    }

    // three-region coverage on the showcase grid
    let mut seen = std::collections::BTreeSet::new();
    for &gamma in &[0.05, 0.275, 0.5] {
        for &epsilon in &[0.05, 0.775, 1.5] {
            let p = OscillatorParams::new(1.0, gamma, epsilon);
            seen.insert(PhaseRegion::classify(p, 1e-9).as_str());
        }
    }
    for region in ["Unbroken", "BrokenLow", "BrokenHigh"] {
        assert!(seen.contains(region), "showcase grid missing {region}");
    }
    println!(
        "criterion 08 phase classifier agreement: PASS ({checked} non-boundary grid points, all three regions on showcase grid)"
    );
}

#[test]
fn criterion_09_frequency_scaling() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let omega: f64 = rng.random_range(0.5..4.0);
        let p = OscillatorParams::new(
            omega,
            rng.random_range(0.0..1.0) * omega,
            rng.random_range(0.0..1.5) * omega * omega,
        );
        let (unit, scale) = p.rescaled().unwrap();
        let f = ModeFrequencies::closed_form(p, 1e-9);
        let g = ModeFrequencies::closed_form(unit, 1e-9);
        worst = worst.max((f.lambda1() - c(scale, 0.0) * g.lambda1()).norm());
        worst = worst.max((f.lambda2() - c(scale, 0.0) * g.lambda2()).norm());
    }
    assert!(worst < 1e-10, "worst scaling deviation {worst:e}");
    println!("criterion 09 frequency scaling: PASS (worst dev {worst:.2e} over 50 triples)");
}

#[test]
fn criterion_10_phase_diagram_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let run = |path: &std::path::Path| {
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_ptosc"))
            .args([
                "phase-diagram",
                "--grid-gamma",
                "0:1:50",
                "--grid-epsilon",
                "0:1.5:50",
                "--out",
                path.to_str().unwrap(),
            ])
            .output()
            .expect("binary runs");
        assert!(out.status.success());
    };
    let first = dir.path().join("first.csv");
    let second = dir.path().join("second.csv");
    run(&first);
    run(&second);
    let a = std::fs::read(&first).unwrap();
    let b = std::fs::read(&second).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "two identical runs must produce byte-identical files");
    println!(
        "criterion 10 phase-diagram determinism: PASS (two runs, {} bytes, byte-identical)",
        a.len()
    );
}
