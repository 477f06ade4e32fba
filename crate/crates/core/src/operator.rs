//! Quadratic Hamiltonians over canonical variables.
//!
//! A Hamiltonian here is a quadratic form
//!
//!   H = Σ_ij A_ij O_i O_j + c0
//!
//! over the operator basis O = (x_1 .. x_N, p_1 .. p_N) with A symmetric.
//! Since A is symmetric the double sum equals the Weyl-symmetrized form, and
//! any ordering constant picked up while symmetrizing a raw monomial such as
//! y*p_y lands in the scalar `c0`. Commutators are encoded by the standard
//! symplectic form J: [O_i, O_j] = i J_ij.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::scalar::{lit, Scalar};

/// Ordered canonical basis (x_1 .. x_N, p_1 .. p_N): size is exactly 2N.
///
/// Indices 0..N are coordinates, N..2N the conjugate momenta, so J is in its
/// block-standard form and printed matrices have a documented row order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CanonicalBasis {
    n_dof: usize,
}

impl CanonicalBasis {
    pub fn new(n_dof: usize) -> Result<Self> {
        if n_dof == 0 {
            return Err(Error::InvalidArgument(
                "number of degrees of freedom must be at least 1".into(),
            ));
        }
        Ok(Self { n_dof })
    }

    pub fn n_dof(&self) -> usize {
        self.n_dof
    }

    /// Number of basis operators, 2N.
    pub fn len(&self) -> usize {
        2 * self.n_dof
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Entry J_ij of the symplectic form: [O_i, O_j] = i J_ij.
    pub fn symplectic_entry<T: Scalar>(&self, i: usize, j: usize) -> T {
        let n = self.n_dof;
        if j == i + n {
            T::one()
        } else if i == j + n {
            -T::one()
        } else {
            T::zero()
        }
    }
}

/// The standard symplectic form J for `n_dof` degrees of freedom:
/// J_{k, N+k} = 1, J_{N+k, k} = -1, all else zero.
pub fn symplectic_form<T: Scalar>(n_dof: usize) -> Result<CMatrix<T>> {
    let basis = CanonicalBasis::new(n_dof)?;
    let n = basis.len();
    Ok(CMatrix::from_fn(n, n, |i, j| {
        Complex::new(basis.symplectic_entry(i, j), T::zero())
    }))
}

/// Model parameters of the coupled oscillator pair with balanced gain and
/// loss: base frequency, gain/loss rate and coupling strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams<T> {
    pub omega: T,
    pub gamma: T,
    pub epsilon: T,
}

impl<T: Scalar> OscillatorParams<T> {
    pub fn new(omega: T, gamma: T, epsilon: T) -> Self {
        Self {
            omega,
            gamma,
            epsilon,
        }
    }

    /// Rescale to unit base frequency: (omega, gamma, epsilon) maps to
    /// (1, gamma/omega, epsilon/omega^2) and every mode frequency (and the
    /// ground-state parameter a) picks up one factor of omega.
    ///
    /// Returns the rescaled parameters together with the scale factor.
    pub fn rescaled(&self) -> Result<(Self, T)> {
        if self.omega <= T::zero() {
            return Err(Error::InvalidArgument(format!(
                "rescaling requires omega > 0, got {}",
                self.omega
            )));
        }
        let w = self.omega;
        Ok((
            Self {
                omega: T::one(),
                gamma: self.gamma / w,
                epsilon: self.epsilon / (w * w),
            },
            w,
        ))
    }
}

/// A quadratic monomial `coefficient * O_i O_j` in raw (unsymmetrized)
/// operator order.
#[derive(Debug, Clone, Copy)]
pub struct Monomial<T> {
    pub coeff: Complex<T>,
    pub factor1: usize,
    pub factor2: usize,
}

impl<T> Monomial<T> {
    pub fn new(coeff: Complex<T>, factor1: usize, factor2: usize) -> Self {
        Self {
            coeff,
            factor1,
            factor2,
        }
    }
}

/// Weyl-symmetrized quadratic Hamiltonian: symmetric coefficient matrix A,
/// ordering constant c0 and, when built from the gain/loss model, the source
/// parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticHamiltonian<T> {
    basis: CanonicalBasis,
    a: CMatrix<T>,
    c0: Complex<T>,
    params: Option<OscillatorParams<T>>,
}

impl<T: Scalar> QuadraticHamiltonian<T> {
    /// Accumulate a list of raw quadratic monomials into symmetric form.
    ///
    /// Each term `coeff * O_i O_j` contributes coeff/2 at A_ij and A_ji plus
    /// the reordering constant coeff * i J_ij / 2 to c0, so the result is
    /// independent of how the caller ordered the factors.
    pub fn from_monomials(n_dof: usize, terms: &[Monomial<T>]) -> Result<Self> {
        let basis = CanonicalBasis::new(n_dof)?;
        let n = basis.len();
        let mut a = CMatrix::zeros(n, n);
        let mut c0 = Complex::zero();
        let half = Complex::new(lit::<T>(0.5), T::zero());
        for term in terms {
            let (i, j) = (term.factor1, term.factor2);
            if i >= n || j >= n {
                return Err(Error::InvalidArgument(format!(
                    "monomial index ({i}, {j}) out of range for basis of size {n}"
                )));
            }
            let h = term.coeff * half;
            a[(i, j)] = a[(i, j)] + h;
            a[(j, i)] = a[(j, i)] + h;
            // O_i O_j = (O_i O_j + O_j O_i)/2 + [O_i, O_j]/2, and [O_i, O_j] = i J_ij
            let jij = basis.symplectic_entry::<T>(i, j);
            c0 = c0 + term.coeff * Complex::new(T::zero(), jij) * half;
        }
        Ok(Self {
            basis,
            a,
            c0,
            params: None,
        })
    }

    /// The coupled gain/loss oscillator pair over (x, y, p_x, p_y):
    ///
    ///   H = p_x p_y + gamma (y p_y - x p_x) + (omega^2 - gamma^2) x y
    ///       + epsilon/2 (x^2 + y^2)
    ///
    /// The two ordering constants from y p_y and -x p_x cancel, so c0 = 0
    /// exactly.
    pub fn coupled_gain_loss(params: OscillatorParams<T>) -> Self {
        let w2g2 = params.omega * params.omega - params.gamma * params.gamma;
        let re = |x: T| Complex::new(x, T::zero());
        let terms = [
            Monomial::new(re(T::one()), 2, 3),                  // p_x p_y
            Monomial::new(re(params.gamma), 1, 3),              // gamma y p_y
            Monomial::new(re(-params.gamma), 0, 2),             // -gamma x p_x
            Monomial::new(re(w2g2), 0, 1),                      // (omega^2 - gamma^2) x y
            Monomial::new(re(params.epsilon / lit(2.0)), 0, 0), // eps/2 x^2
            Monomial::new(re(params.epsilon / lit(2.0)), 1, 1), // eps/2 y^2
        ];
        let mut h = Self::from_monomials(2, &terms).expect("indices are in range");
        h.params = Some(params);
        h
    }

    pub fn basis(&self) -> CanonicalBasis {
        self.basis
    }

    pub fn n_dof(&self) -> usize {
        self.basis.n_dof()
    }

    /// Symmetric coefficient matrix A.
    pub fn coefficients(&self) -> &CMatrix<T> {
        &self.a
    }

    /// Ordering constant c0.
    pub fn ordering_constant(&self) -> Complex<T> {
        self.c0
    }

    pub fn params(&self) -> Option<OscillatorParams<T>> {
        self.params
    }

    /// Largest deviation of A from exact symmetry (zero by construction).
    pub fn asymmetry(&self) -> T {
        self.a.sub(&self.a.transpose()).max_abs()
    }

    /// True when every entry of A is real to within `tol`.
    pub fn is_real(&self, tol: T) -> bool {
        self.a.entries().iter().all(|z| z.im.abs() <= tol)
    }

    /// Image of the Hamiltonian under the combined parity/time-reversal map
    /// of the gain/loss pair (requires N = 2):
    ///
    ///   parity        x -> -y, y -> -x, p_x -> -p_y, p_y -> -p_x
    ///   time reversal p -> -p plus complex conjugation
    ///
    /// Net substitution x -> -y, y -> -x, p_x -> p_y, p_y -> p_x applied to a
    /// conjugated coefficient matrix. The model Hamiltonian is a fixed point.
    pub fn parity_time_image(&self) -> Result<Self> {
        if self.n_dof() != 2 {
            return Err(Error::InvalidArgument(format!(
                "parity/time-reversal map is defined for 2 degrees of freedom, got {}",
                self.n_dof()
            )));
        }
        // S encodes O_i -> sum_j S_ij O_j for the net PT substitution.
        let mut s = CMatrix::<T>::zeros(4, 4);
        let one = Complex::one();
        s[(0, 1)] = -one;
        s[(1, 0)] = -one;
        s[(2, 3)] = one;
        s[(3, 2)] = one;
        // (S O)^T A* (S O) = O^T (S^T A* S) O
        let a = s.transpose().mul(&self.a.conj()).mul(&s);
        Ok(Self {
            basis: self.basis,
            a,
            c0: self.c0.conj(),
            params: self.params,
        })
    }

    /// Max-entry distance to the PT image; zero means PT symmetric.
    pub fn pt_defect(&self) -> Result<T> {
        let image = self.parity_time_image()?;
        let d = self.a.sub(&image.a).max_abs();
        let dc = (self.c0 - image.c0).norm();
        Ok(if d > dc { d } else { dc })
    }
}
