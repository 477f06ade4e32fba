//! Classical flow generated by a real quadratic Hamiltonian.
//!
//! Hamilton's equations for H = z^T A z are linear, dz/dt = K z with
//! K = 2 J A, and the Poisson-bracket/commutator correspondence makes the
//! eigenvalues of K exactly i times the eigenvalues of the adjoint matrix.
//! Trajectories are integrated with fixed-step classical RK4 and mode
//! frequencies are read off a Hann-windowed FFT with parabolic peak
//! refinement.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fft::{fft_in_place, hann, refine_peak};
use crate::operator::QuadraticHamiltonian;
use crate::scalar::{lit, Scalar};

/// Absolute phase-space bound beyond which a trajectory counts as diverged.
pub const DIVERGENCE_GUARD: f64 = 1e12;

/// Linear classical system dz/dt = K z for z = (x_1..x_N, p_1..p_N),
/// carrying the real coefficient matrix for energy evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalSystem<T> {
    dim: usize,
    k: Vec<T>,
    a: Vec<T>,
}

impl<T: Scalar> ClassicalSystem<T> {
    /// Read the flow matrix off a quadratic Hamiltonian with real
    /// coefficients: K = 2 J A.
    pub fn from_hamiltonian(h: &QuadraticHamiltonian<T>) -> Result<Self> {
        if !h.is_real(T::zero()) {
            return Err(Error::InvalidArgument(
                "classical reading requires a real coefficient matrix".into(),
            ));
        }
        let n_dof = h.n_dof();
        let dim = 2 * n_dof;
        let mut a = vec![T::zero(); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                a[i * dim + j] = h.coefficients()[(i, j)].re;
            }
        }
        // K = 2 J A: row i of J has a single +-1, so rows of K are shifted
        // rows of A.
        let mut k = vec![T::zero(); dim * dim];
        let two = lit::<T>(2.0);
        for i in 0..dim {
            let (src, sign) = if i < n_dof {
                (i + n_dof, T::one())
            } else {
                (i - n_dof, -T::one())
            };
            for j in 0..dim {
                k[i * dim + j] = two * sign * a[src * dim + j];
            }
        }
        Ok(Self { dim, k, a })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn k_entry(&self, i: usize, j: usize) -> T {
        self.k[i * self.dim + j]
    }

    /// Flow matrix as a complex matrix (for spectral comparisons).
    pub fn k_matrix(&self) -> crate::matrix::CMatrix<T> {
        crate::matrix::CMatrix::from_fn(self.dim, self.dim, |i, j| {
            Complex::new(self.k_entry(i, j), T::zero())
        })
    }

    /// Classical energy H(z) = z^T A z.
    pub fn energy(&self, z: &[T]) -> T {
        assert_eq!(z.len(), self.dim);
        let mut acc = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc = acc + z[i] * self.a[i * self.dim + j] * z[j];
            }
        }
        acc
    }

    fn derivative(&self, z: &[T], out: &mut [T]) {
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.k[i * self.dim..(i + 1) * self.dim]
                .iter()
                .zip(z)
                .fold(T::zero(), |acc, (k, zj)| acc + *k * *zj);
        }
    }

    /// Fixed-step RK4 integration. The trajectory stores `n_steps` states at
    /// t = 0, dt, ..., (n_steps - 1) dt; if any component exceeds the
    /// divergence guard the trajectory is truncated and flagged.
    pub fn integrate(&self, z0: &[T], dt: T, n_steps: usize) -> Result<Trajectory<T>> {
        if dt <= T::zero() {
            return Err(Error::InvalidArgument(format!(
                "time step must be positive, got {dt}"
            )));
        }
        if n_steps < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 trajectory samples, got {n_steps}"
            )));
        }
        if z0.len() != self.dim {
            return Err(Error::InvalidArgument(format!(
                "initial state has dimension {}, system has {}",
                z0.len(),
                self.dim
            )));
        }
        let guard = lit::<T>(DIVERGENCE_GUARD);
        let dim = self.dim;
        let mut data = Vec::with_capacity(n_steps * dim);
        data.extend_from_slice(z0);
        let mut z = z0.to_vec();
        let mut k1 = vec![T::zero(); dim];
        let mut k2 = vec![T::zero(); dim];
        let mut k3 = vec![T::zero(); dim];
        let mut k4 = vec![T::zero(); dim];
        let mut tmp = vec![T::zero(); dim];
        let half = lit::<T>(0.5);
        let sixth = T::one() / lit::<T>(6.0);
        let two = lit::<T>(2.0);
        let mut diverged = false;
        for _ in 1..n_steps {
            self.derivative(&z, &mut k1);
            for i in 0..dim {
                tmp[i] = z[i] + half * dt * k1[i];
            }
            self.derivative(&tmp, &mut k2);
            for i in 0..dim {
                tmp[i] = z[i] + half * dt * k2[i];
            }
            self.derivative(&tmp, &mut k3);
            for i in 0..dim {
                tmp[i] = z[i] + dt * k3[i];
            }
            self.derivative(&tmp, &mut k4);
            for i in 0..dim {
                z[i] = z[i] + dt * sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]);
            }
            if z.iter().any(|v| !v.is_finite() || v.abs() > guard) {
                diverged = true;
                break;
            }
            data.extend_from_slice(&z);
        }
        Ok(Trajectory {
            dim,
            dt,
            data,
            diverged,
        })
    }

    /// Largest relative energy drift along a trajectory.
    pub fn energy_drift(&self, traj: &Trajectory<T>) -> T {
        let e0 = self.energy(traj.state(0));
        let scale = if e0.abs() > T::one() {
            e0.abs()
        } else {
            T::one()
        };
        let mut worst = T::zero();
        for i in 1..traj.len() {
            let d = (self.energy(traj.state(i)) - e0).abs() / scale;
            if d > worst {
                worst = d;
            }
        }
        worst
    }
}

/// A uniformly sampled phase-space trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    dim: usize,
    dt: T,
    data: Vec<T>,
    diverged: bool,
}

impl<T: Scalar> Trajectory<T> {
    /// Wrap externally produced samples (row-major states of width `dim`).
    pub fn from_states(dim: usize, dt: T, data: Vec<T>) -> Result<Self> {
        if dim == 0 || !data.len().is_multiple_of(dim) || data.len() / dim < 2 {
            return Err(Error::InvalidArgument(
                "trajectory data must hold at least two states of the given width".into(),
            ));
        }
        if dt <= T::zero() {
            return Err(Error::InvalidArgument(format!(
                "time step must be positive, got {dt}"
            )));
        }
        Ok(Self {
            dim,
            dt,
            data,
            diverged: false,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    /// Number of stored states.
    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn state(&self, i: usize) -> &[T] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn time(&self, i: usize) -> T {
        lit::<T>(i as f64) * self.dt
    }

    pub fn diverged(&self) -> bool {
        self.diverged
    }

    /// Largest absolute value over all states and components.
    pub fn sup_norm(&self) -> T {
        self.data
            .iter()
            .map(|v| v.abs())
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }
}

/// A refined spectral peak: angular frequency in rad/time and the physical
/// oscillation amplitude at that frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak<T> {
    pub frequency: T,
    pub amplitude: T,
}

/// Angular frequencies present in the first phase-space component of a
/// trajectory, strongest first.
///
/// Hann-windowed FFT over all samples (the count must be a power of two),
/// local maxima dominant over a +-4 bin neighbourhood, vertex refined by a
/// parabola through the log-magnitudes. Peaks below 1e-3 of the strongest
/// magnitude are discarded.
pub fn extract_frequencies<T: Scalar>(traj: &Trajectory<T>) -> Result<Vec<Peak<T>>> {
    if traj.diverged() {
        return Err(Error::InvalidArgument(
            "cannot extract frequencies from a diverged trajectory".into(),
        ));
    }
    let n = traj.len();
    if !n.is_power_of_two() || n < 8 {
        return Err(Error::InvalidArgument(format!(
            "frequency extraction needs a power-of-two sample count >= 8, got {n}"
        )));
    }

    let mut buf: Vec<Complex<T>> = (0..n)
        .map(|j| Complex::new(traj.state(j)[0] * hann::<T>(j, n), T::zero()))
        .collect();
    let window_sum = (0..n).fold(T::zero(), |acc, j| acc + hann::<T>(j, n));
    fft_in_place(&mut buf);

    let half = n / 2;
    let mags: Vec<T> = buf[..half].iter().map(|z| z.norm()).collect();
    let max_mag = mags[1..]
        .iter()
        .fold(T::zero(), |a, &b| if b > a { b } else { a });
    if max_mag <= T::zero() {
        return Ok(Vec::new());
    }
    let floor = lit::<T>(1e-3) * max_mag;
    let tiny = lit::<T>(1e-30) * max_mag;
    let log_mags: Vec<T> = mags.iter().map(|&m| (m + tiny).ln()).collect();

    let neighbourhood = 4usize;
    let mut peaks = Vec::new();
    for k in 1..(half - 1) {
        let m = mags[k];
        if m < floor {
            continue;
        }
        let lo = k.saturating_sub(neighbourhood);
        let hi = (k + neighbourhood).min(half - 1);
        let dominant = (lo..=hi).all(|j| mags[j] <= m || j == k);
        if !dominant || mags[k - 1] >= m || mags[k + 1] > m {
            continue;
        }
        let (delta, log_peak) = refine_peak(&log_mags, k);
        let bin = lit::<T>(k as f64) + delta;
        let frequency = lit::<T>(2.0) * T::PI() * bin / (lit::<T>(n as f64) * traj.dt());
        let amplitude = lit::<T>(2.0) * log_peak.exp() / window_sum;
        peaks.push(Peak {
            frequency,
            amplitude,
        });
    }
    peaks.sort_by(|p, q| {
        q.amplitude
            .partial_cmp(&p.amplitude)
            .expect("finite amplitudes")
            .then(
                p.frequency
                    .partial_cmp(&q.frequency)
                    .expect("finite frequencies"),
            )
    });
    Ok(peaks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{Monomial, OscillatorParams};
    use crate::roots;
    use crate::spectrum::{multiset_max_deviation, AdjointMatrix, ModeFrequencies};

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    const REFERENCE: OscillatorParams<f64> = OscillatorParams {
        omega: 1.0,
        gamma: 0.05,
        epsilon: 0.5,
    };

    fn unit_oscillator(w: f64) -> ClassicalSystem<f64> {
        let h = QuadraticHamiltonian::from_monomials(
            1,
            &[
                Monomial::new(c(0.5, 0.0), 1, 1),
                Monomial::new(c(w * w / 2.0, 0.0), 0, 0),
            ],
        )
        .unwrap();
        ClassicalSystem::from_hamiltonian(&h).unwrap()
    }

    #[test]
    fn unit_oscillator_flow_matrix() {
        let w = 1.4;
        let sys = unit_oscillator(w);
        assert!((sys.k_entry(0, 1) - 1.0).abs() < 1e-15);
        assert!((sys.k_entry(1, 0) + w * w).abs() < 1e-15);
        assert!(sys.k_entry(0, 0).abs() < 1e-15);
        assert!(sys.k_entry(1, 1).abs() < 1e-15);
    }

    #[test]
    fn complex_coefficients_are_rejected() {
        let h =
            QuadraticHamiltonian::from_monomials(1, &[Monomial::new(c(0.0, 1.0), 0, 0)]).unwrap();
        assert!(matches!(
            ClassicalSystem::from_hamiltonian(&h),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn flow_spectrum_is_i_times_adjoint_spectrum() {
        let h = QuadraticHamiltonian::coupled_gain_loss(REFERENCE);
        let sys = ClassicalSystem::from_hamiltonian(&h).unwrap();
        let adjoint = AdjointMatrix::from_hamiltonian(&h);
        let k_eigs = roots::eigenvalues(&sys.k_matrix()).unwrap();
        let m_eigs = roots::eigenvalues(adjoint.matrix()).unwrap();
        let rotated: Vec<C> = m_eigs.iter().map(|z| c(0.0, 1.0) * z).collect();
        let dev = multiset_max_deviation(&k_eigs, &rotated);
        assert!(dev < 1e-10, "deviation {dev:e}");

        // the imaginary parts are the mode frequencies
        let freqs = ModeFrequencies::closed_form(REFERENCE, 1e-9);
        let expected: Vec<C> = vec![
            c(0.0, freqs.lambda1().re),
            c(0.0, -freqs.lambda1().re),
            c(0.0, freqs.lambda2().re),
            c(0.0, -freqs.lambda2().re),
        ];
        assert!(multiset_max_deviation(&k_eigs, &expected) < 1e-10);
    }

    #[test]
    fn broken_phase_flow_has_growing_mode() {
        let params = OscillatorParams::new(1.0, 0.5, 0.1);
        let h = QuadraticHamiltonian::coupled_gain_loss(params);
        let sys = ClassicalSystem::from_hamiltonian(&h).unwrap();
        let eigs = roots::eigenvalues(&sys.k_matrix()).unwrap();
        let max_re = eigs.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        assert!(max_re > 0.01, "expected instability, max Re = {max_re}");
    }

    #[test]
    fn zero_flow_keeps_state_constant() {
        let h = QuadraticHamiltonian::<f64>::from_monomials(1, &[]).unwrap();
        let sys = ClassicalSystem::from_hamiltonian(&h).unwrap();
        let traj = sys.integrate(&[1.0, -2.0], 0.1, 10).unwrap();
        assert_eq!(traj.len(), 10);
        for i in 0..traj.len() {
            assert_eq!(traj.state(i), &[1.0, -2.0]);
        }
    }

    #[test]
    fn oscillator_returns_after_one_period() {
        let sys = unit_oscillator(1.0);
        let steps = 628usize;
        let dt = 2.0 * std::f64::consts::PI / steps as f64;
        let traj = sys.integrate(&[1.0, 0.0], dt, steps + 1).unwrap();
        let last = traj.state(steps);
        assert!((last[0] - 1.0).abs() < 1e-8, "x drifted to {}", last[0]);
        assert!(last[1].abs() < 1e-8, "p drifted to {}", last[1]);
    }

    #[test]
    fn energy_is_conserved_at_reference_params() {
        let h = QuadraticHamiltonian::coupled_gain_loss(REFERENCE);
        let sys = ClassicalSystem::from_hamiltonian(&h).unwrap();
        let z0 = [0.7, -0.4, 0.2, 0.5];
        let traj = sys.integrate(&z0, 0.01, 20_001).unwrap();
        assert!(!traj.diverged());
        let drift = sys.energy_drift(&traj);
        assert!(drift < 1e-8, "energy drift {drift:e}");
    }

    #[test]
    fn broken_phase_trajectory_diverges() {
        let params = OscillatorParams::new(1.0, 0.5, 0.1);
        let h = QuadraticHamiltonian::coupled_gain_loss(params);
        let sys = ClassicalSystem::from_hamiltonian(&h).unwrap();
        let traj = sys.integrate(&[0.1, 0.1, 0.1, 0.1], 0.05, 10_000).unwrap();
        assert!(traj.diverged());
        assert!(extract_frequencies(&traj).is_err());
    }

    #[test]
    fn integrate_validates_arguments() {
        let sys = unit_oscillator(1.0);
        assert!(sys.integrate(&[1.0, 0.0], 0.0, 100).is_err());
        assert!(sys.integrate(&[1.0, 0.0], 0.1, 1).is_err());
        assert!(sys.integrate(&[1.0, 0.0, 3.0], 0.1, 100).is_err());
    }

    #[test]
    fn synthetic_cosine_peak() {
        // angular frequency 1.0 sampled 4096 times at dt = 0.05 (T = 204.8)
        let n = 4096;
        let dt = 0.05;
        let data: Vec<f64> = (0..n).map(|j| (j as f64 * dt).cos()).collect();
        let traj = Trajectory::from_states(1, dt, data).unwrap();
        let peaks = extract_frequencies(&traj).unwrap();
        assert!(!peaks.is_empty());
        assert!(
            (peaks[0].frequency - 1.0).abs() < 0.01,
            "peak at {}",
            peaks[0].frequency
        );
        assert!((peaks[0].amplitude - 1.0).abs() < 0.05);
    }

    #[test]
    fn two_mode_peaks_match_mode_frequencies() {
        let h = QuadraticHamiltonian::coupled_gain_loss(REFERENCE);
        let sys = ClassicalSystem::from_hamiltonian(&h).unwrap();
        let traj = sys.integrate(&[0.9, -0.3, 0.4, 0.7], 0.05, 8192).unwrap();
        let peaks = extract_frequencies(&traj).unwrap();
        assert!(peaks.len() >= 2, "found {} peaks", peaks.len());
        let freqs = ModeFrequencies::closed_form(REFERENCE, 1e-9);
        let mut got: Vec<f64> = peaks[..2].iter().map(|p| p.frequency).collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((got[0] - freqs.lambda2().re).abs() < 0.01, "{}", got[0]);
        assert!((got[1] - freqs.lambda1().re).abs() < 0.01, "{}", got[1]);
    }

    #[test]
    fn boundary_params_give_single_coalesced_peak() {
        let gamma = 0.3f64;
        let eps = 2.0 * gamma * (1.0 - gamma * gamma).sqrt();
        let params = OscillatorParams::new(1.0, gamma, eps);
        let h = QuadraticHamiltonian::coupled_gain_loss(params);
        let sys = ClassicalSystem::from_hamiltonian(&h).unwrap();
        let traj = sys.integrate(&[0.5, 0.2, -0.3, 0.4], 0.05, 8192).unwrap();
        assert!(!traj.diverged());
        let peaks = extract_frequencies(&traj).unwrap();
        assert_eq!(peaks.len(), 1, "peaks: {peaks:?}");
        let freqs = ModeFrequencies::closed_form(params, 1e-9);
        assert!((peaks[0].frequency - freqs.lambda1().re).abs() < 0.02);
    }
}
