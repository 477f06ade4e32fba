//! Spectral analysis of quadratic Hamiltonians, specialized to a pair of
//! coupled oscillators with balanced gain and loss.
//!
//! The crate computes, for H = p_x p_y + gamma (y p_y - x p_x)
//! + (omega^2 - gamma^2) x y + eps/2 (x^2 + y^2):
//!
//! - the adjoint matrix representation [H, O_i] = sum_j M_ji O_j and its
//!   eigenvalues, the quantum mode frequencies ([`spectrum`]);
//! - closed-form frequencies, ground-state parameters (a, b, c, Delta) and
//!   the energy ladder E(n, k) = n lambda1 - k lambda2 + a;
//! - ladder operators Z with [H, Z] = lambda Z;
//! - the PT-phase diagram (unbroken/broken regions with exceptional-point
//!   boundaries);
//! - an exact polynomial-times-Gaussian wavefunction algebra that verifies
//!   eigenfunctions, energies and annihilation patterns independently of any
//!   closed form ([`gaussian`]);
//! - the classical flow dz/dt = K z, whose spectrum is i times the quantum
//!   one, with RK4 trajectories and FFT frequency extraction ([`classical`]).
//!
//! All numerics are generic over the floating-point scalar through
//! [`scalar::Scalar`]; the `*64` aliases below fix the common `f64` choice.

pub mod classical;
pub mod error;
pub mod fft;
pub mod gaussian;
pub mod matrix;
pub mod operator;
pub mod roots;
pub mod scalar;
pub mod spectrum;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Complex number over `f64`.
pub type C64 = num_complex::Complex<f64>;
/// Complex number over `f32`.
pub type C32 = num_complex::Complex<f32>;

pub type Hamiltonian64 = operator::QuadraticHamiltonian<f64>;
pub type OscillatorParams64 = operator::OscillatorParams<f64>;
pub type AdjointMatrix64 = spectrum::AdjointMatrix<f64>;
pub type ModeFrequencies64 = spectrum::ModeFrequencies<f64>;
pub type GroundStateParams64 = spectrum::GroundStateParams<f64>;
pub type LadderOperator64 = spectrum::LadderOperator<f64>;
pub type GaussianOracle64 = gaussian::GaussianOracle<f64>;
pub type PolyGaussian64 = gaussian::PolyGaussian<f64>;
pub type ClassicalSystem64 = classical::ClassicalSystem<f64>;
pub type Trajectory64 = classical::Trajectory<f64>;
