//! Adjoint (regular) matrix representation and everything derived from it:
//! mode frequencies, ladder operators, ground-state parameters, energies and
//! the PT-phase classification.
//!
//! The adjoint matrix H_ij of a quadratic Hamiltonian is defined by
//! [H, O_i] = sum_j M_ji O_j over the canonical basis; its eigenvalues are
//! the natural frequencies of the system and its eigenvectors give the
//! coefficients of ladder operators Z with [H, Z] = lambda Z.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::operator::{symplectic_form, CanonicalBasis, OscillatorParams, QuadraticHamiltonian};
use crate::roots;
use crate::scalar::{lit, Scalar};

/// Default relative tolerance for calling a frequency real and for the width
/// of the boundary band in phase classification.
pub const DEFAULT_REALITY_TOL: f64 = 1e-9;

/// Roots closer than this (relative to the root scale) are treated as one
/// coalesced mode, matching the cluster handling in the root finder.
const DEGENERACY_TOL: f64 = 1e-6;

/// The adjoint matrix M with [H, O_i] = sum_j M_ji O_j.
///
/// For a symmetric coefficient matrix A this is M = 2i A J, which follows
/// from [O_i O_j, O_k] = i (J_jk O_i + J_ik O_j).
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointMatrix<T> {
    basis: CanonicalBasis,
    m: CMatrix<T>,
}

impl<T: Scalar> AdjointMatrix<T> {
    pub fn from_hamiltonian(h: &QuadraticHamiltonian<T>) -> Self {
        let j = symplectic_form::<T>(h.n_dof()).expect("basis guarantees n_dof >= 1");
        let two_i = Complex::new(T::zero(), lit::<T>(2.0));
        Self {
            basis: h.basis(),
            m: h.coefficients().mul(&j).scale(two_i),
        }
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.m
    }

    pub fn basis(&self) -> CanonicalBasis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }
}

/// Mode frequencies: the eigenvalues of the adjoint matrix, paired under
/// negation, with a principal representative per pair.
///
/// The principal representative of a pair is the member with Re > 0 (or
/// Im >= 0 when the real part vanishes to tolerance). Pairs are ordered by
/// the squares lambda^2, descending lexicographically in (Re, Im), which
/// reproduces the closed-form ordering in every phase.
#[derive(Debug, Clone)]
pub struct ModeFrequencies<T> {
    principal: Vec<Complex<T>>,
    all_roots: Vec<Complex<T>>,
    real_flags: Vec<bool>,
    tol: T,
}

impl<T: Scalar> ModeFrequencies<T> {
    /// Numerical route: characteristic polynomial of M and simultaneous root
    /// iteration, then pairing under negation.
    pub fn from_matrix(m: &AdjointMatrix<T>, tol: T) -> Result<Self> {
        if tol <= T::zero() {
            return Err(Error::InvalidArgument(format!(
                "reality tolerance must be positive, got {tol}"
            )));
        }
        let all_roots = roots::eigenvalues(&m.m)?;
        Self::from_roots(all_roots, tol)
    }

    /// Closed-form route for the gain/loss pair:
    ///
    ///   lambda_{1,2} = sqrt(+-sqrt(eps^2 + 4 gamma^4 - 4 gamma^2 omega^2)
    ///                       - 2 gamma^2 + omega^2)
    ///
    /// with principal complex square roots throughout.
    pub fn closed_form(params: OscillatorParams<T>, tol: T) -> Self {
        let OscillatorParams {
            omega,
            gamma,
            epsilon,
        } = params;
        let w2 = omega * omega;
        let g2 = gamma * gamma;
        let four = lit::<T>(4.0);
        let rad = Complex::new(
            epsilon * epsilon + four * g2 * g2 - four * g2 * w2,
            T::zero(),
        );
        let s = rad.sqrt();
        let base = Complex::new(w2 - g2 - g2, T::zero());
        let l1 = (base + s).sqrt();
        let l2 = (base - s).sqrt();
        let principal = vec![l1, l2];
        let all_roots = vec![l1, l2, -l1, -l2];
        let real_flags = principal.iter().map(|z| is_real_within(*z, tol)).collect();
        Self {
            principal,
            all_roots,
            real_flags,
            tol,
        }
    }

    fn from_roots(all_roots: Vec<Complex<T>>, tol: T) -> Result<Self> {
        let n = all_roots.len();
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "expected an even number of roots, got {n}"
            )));
        }
        let scale = all_roots
            .iter()
            .map(|z| z.norm())
            .fold(T::one(), |a, b| if b > a { b } else { a });

        // Greedy pairing under negation: repeatedly take the largest
        // remaining root and its best partner -lambda.
        let mut remaining = all_roots.clone();
        let mut reps: Vec<Complex<T>> = Vec::with_capacity(n / 2);
        while !remaining.is_empty() {
            let (i, _) = remaining
                .iter()
                .enumerate()
                .max_by(|(_, a), (_, b)| {
                    a.norm()
                        .partial_cmp(&b.norm())
                        .expect("root magnitudes are finite")
                })
                .expect("remaining is non-empty");
            let u = remaining.swap_remove(i);
            let (j, mismatch) = remaining
                .iter()
                .enumerate()
                .map(|(j, v)| (j, (u + v).norm()))
                .min_by(|(_, a), (_, b)| a.partial_cmp(b).expect("finite"))
                .expect("roots pair up");
            if mismatch > lit::<T>(1e-6) * scale {
                return Err(Error::NumericalFailure {
                    context: "negation pairing of adjoint eigenvalues",
                    iterations: 0,
                    residual: mismatch.to_f64().unwrap_or(f64::NAN),
                });
            }
            let v = remaining.swap_remove(j);
            // Antisymmetrized representative, canonical sign.
            let rep = (u - v) / Complex::new(lit::<T>(2.0), T::zero());
            reps.push(canonical_sign(rep, tol));
        }

        // Order pairs by lambda^2, descending lexicographically in (Re, Im).
        reps.sort_by(|a, b| {
            let (a2, b2) = (a * a, b * b);
            (b2.re, b2.im)
                .partial_cmp(&(a2.re, a2.im))
                .expect("finite squares")
        });

        let real_flags = reps.iter().map(|z| is_real_within(*z, tol)).collect();
        Ok(Self {
            principal: reps,
            all_roots,
            real_flags,
            tol,
        })
    }

    /// Principal representative of the i-th pair.
    pub fn principal(&self) -> &[Complex<T>] {
        &self.principal
    }

    /// First (largest-lambda^2) principal frequency.
    pub fn lambda1(&self) -> Complex<T> {
        self.principal[0]
    }

    /// Second principal frequency. Panics for systems with fewer than two
    /// degrees of freedom.
    pub fn lambda2(&self) -> Complex<T> {
        self.principal[1]
    }

    /// The raw root multiset, closed under negation.
    pub fn all_roots(&self) -> &[Complex<T>] {
        &self.all_roots
    }

    pub fn is_real(&self, i: usize) -> bool {
        self.real_flags[i]
    }

    pub fn all_real(&self) -> bool {
        self.real_flags.iter().all(|&f| f)
    }

    pub fn tolerance(&self) -> T {
        self.tol
    }

    /// True when the two principal frequencies coalesce (exceptional point).
    pub fn is_degenerate(&self) -> bool {
        if self.principal.len() < 2 {
            return false;
        }
        let scale = self
            .principal
            .iter()
            .map(|z| z.norm())
            .fold(T::one(), |a, b| if b > a { b } else { a });
        for i in 0..self.principal.len() {
            for j in (i + 1)..self.principal.len() {
                if (self.principal[i] - self.principal[j]).norm()
                    <= lit::<T>(DEGENERACY_TOL) * scale
                {
                    return true;
                }
            }
        }
        false
    }
}

fn is_real_within<T: Scalar>(z: Complex<T>, tol: T) -> bool {
    z.im.abs() < tol * (T::one() + z.norm())
}

fn canonical_sign<T: Scalar>(z: Complex<T>, tol: T) -> Complex<T> {
    let tie = tol * (T::one() + z.norm());
    if z.re > tie {
        z
    } else if z.re < -tie {
        -z
    } else if z.im >= T::zero() {
        z
    } else {
        -z
    }
}

/// Ground-state parameters of the gain/loss pair.
///
/// xi_{1,2} = (omega^2 - 2 gamma^2 -+ sqrt(omega^4 - eps^2)) / 2 are the two
/// roots of the defining quartic in a^2; the branch a = +sqrt(xi_1) is fixed
/// throughout, the other three sign/branch combinations are exposed read-only
/// through `branch_roots`. b and c follow by b = eps/(2(a + i gamma)),
/// c = eps/(2(a - i gamma)), and Delta = sqrt(bc - gamma^2).
#[derive(Debug, Clone, PartialEq)]
pub struct GroundStateParams<T> {
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    delta: Complex<T>,
    xi1: Complex<T>,
    xi2: Complex<T>,
    branch_roots: [Complex<T>; 4],
}

impl<T: Scalar> GroundStateParams<T> {
    pub fn solve(params: OscillatorParams<T>) -> Result<Self> {
        let OscillatorParams {
            omega,
            gamma,
            epsilon,
        } = params;
        if epsilon == T::zero() {
            return Err(Error::InvalidArgument(
                "ground-state parameters require a nonzero coupling".into(),
            ));
        }
        let w2 = omega * omega;
        let g2 = gamma * gamma;
        let two = lit::<T>(2.0);
        let s = Complex::new(w2 * w2 - epsilon * epsilon, T::zero()).sqrt();
        let base = Complex::new(w2 - two * g2, T::zero());
        let xi1 = (base - s) / Complex::new(two, T::zero());
        let xi2 = (base + s) / Complex::new(two, T::zero());
        let a = xi1.sqrt();
        let r1 = xi1.sqrt();
        let r2 = xi2.sqrt();
        let branch_roots = [-r1, r1, -r2, r2];
        let i_gamma = Complex::new(T::zero(), gamma);
        let den_plus = (a + i_gamma) * Complex::new(two, T::zero());
        let den_minus = (a - i_gamma) * Complex::new(two, T::zero());
        let tiny = lit::<T>(1e-300);
        if den_plus.norm() < tiny || den_minus.norm() < tiny {
            return Err(Error::SingularParameters(
                "a + i gamma vanishes, b and c are undefined".into(),
            ));
        }
        let eps_c = Complex::new(epsilon, T::zero());
        let b = eps_c / den_plus;
        let c = eps_c / den_minus;
        let delta = (b * c - Complex::new(g2, T::zero())).sqrt();
        Ok(Self {
            a,
            b,
            c,
            delta,
            xi1,
            xi2,
            branch_roots,
        })
    }

    pub fn a(&self) -> Complex<T> {
        self.a
    }

    pub fn b(&self) -> Complex<T> {
        self.b
    }

    pub fn c(&self) -> Complex<T> {
        self.c
    }

    pub fn delta(&self) -> Complex<T> {
        self.delta
    }

    pub fn xi1(&self) -> Complex<T> {
        self.xi1
    }

    pub fn xi2(&self) -> Complex<T> {
        self.xi2
    }

    /// All four quartic roots (-sqrt(xi1), +sqrt(xi1), -sqrt(xi2), +sqrt(xi2));
    /// the chosen branch is the second entry.
    pub fn branch_roots(&self) -> [Complex<T>; 4] {
        self.branch_roots
    }

    /// Residual of the defining quartic
    /// 4a^4 + 4a^2(2 gamma^2 - omega^2) + eps^2 + 4 gamma^2(gamma^2 - omega^2).
    pub fn quartic_residual(&self, params: OscillatorParams<T>) -> T {
        let OscillatorParams {
            omega,
            gamma,
            epsilon,
        } = params;
        let w2 = omega * omega;
        let g2 = gamma * gamma;
        let four = lit::<T>(4.0);
        let two = lit::<T>(2.0);
        let a2 = self.a * self.a;
        let re = |x: T| Complex::new(x, T::zero());
        let value = re(four) * a2 * a2
            + re(four) * a2 * re(two * g2 - w2)
            + re(epsilon * epsilon + four * g2 * (g2 - w2));
        value.norm()
    }
}

/// Energy level E(n, k) = n lambda1 - k lambda2 + a.
pub fn energy<T: Scalar>(
    n: u32,
    k: u32,
    freqs: &ModeFrequencies<T>,
    gs: &GroundStateParams<T>,
) -> Complex<T> {
    let nf = Complex::new(lit::<T>(f64::from(n)), T::zero());
    let kf = Complex::new(lit::<T>(f64::from(k)), T::zero());
    nf * freqs.lambda1() - kf * freqs.lambda2() + gs.a()
}

/// A ladder operator Z = sum_i c_i O_i with [H, Z] = lambda Z, i.e. an
/// eigenvector of the adjoint matrix, normalized so that its largest entry
/// is exactly 1.
#[derive(Debug, Clone)]
pub struct LadderOperator<T> {
    coeffs: Vec<Complex<T>>,
    lambda: Complex<T>,
}

impl<T: Scalar> LadderOperator<T> {
    /// Solve (M - lambda I) C = 0 for the given eigenvalue.
    ///
    /// Fails with `InvalidArgument` when lambda is not an eigenvalue of M and
    /// with `DegenerateMode` when it coincides with a repeated root, where the
    /// matrix is defective and no unique ladder direction exists.
    pub fn solve(adjoint: &AdjointMatrix<T>, lambda: Complex<T>) -> Result<Self> {
        let m = &adjoint.m;
        let n = m.nrows();
        let eigs = roots::eigenvalues(m)?;
        let scale = eigs
            .iter()
            .map(|z| z.norm())
            .fold(T::one(), |a, b| if b > a { b } else { a });
        let nearest = eigs
            .iter()
            .map(|z| (z - lambda).norm())
            .fold(T::infinity(), |a, b| if b < a { b } else { a });
        if nearest > lit::<T>(1e-8) * scale {
            let distance = nearest.to_f64().unwrap_or(f64::NAN);
            return Err(Error::InvalidArgument(format!(
                "{lambda} is not an eigenvalue of the adjoint matrix (nearest root is {distance:.3e} away)"
            )));
        }
        let close = eigs
            .iter()
            .filter(|z| (**z - lambda).norm() <= lit::<T>(DEGENERACY_TOL) * scale)
            .count();
        if close >= 2 {
            return Err(Error::DegenerateMode(format!("{lambda}")));
        }

        // Nullspace of G = M - lambda I by elimination with partial pivoting;
        // the rank defect lands on the last pivot, so set that variable to 1
        // and back-substitute.
        let mut g = m.clone();
        for i in 0..n {
            g[(i, i)] = g[(i, i)] - lambda;
        }
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&r, &s| {
                    g[(r, col)]
                        .norm()
                        .partial_cmp(&g[(s, col)].norm())
                        .expect("finite")
                })
                .expect("rows remain");
            if pivot_row != col {
                for j in 0..n {
                    let tmp = g[(col, j)];
                    g[(col, j)] = g[(pivot_row, j)];
                    g[(pivot_row, j)] = tmp;
                }
            }
            let pivot = g[(col, col)];
            if pivot.is_zero() {
                continue;
            }
            for r in (col + 1)..n {
                let factor = g[(r, col)] / pivot;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    g[(r, j)] = g[(r, j)] - factor * g[(col, j)];
                }
            }
        }
        let pivot_floor = lit::<T>(1e-8) * (T::one() + m.max_abs());
        for i in 0..(n - 1) {
            if g[(i, i)].norm() < pivot_floor {
                return Err(Error::DegenerateMode(format!(
                    "rank defect above the last pivot for eigenvalue {lambda}"
                )));
            }
        }
        let mut coeffs = vec![Complex::<T>::zero(); n];
        coeffs[n - 1] = Complex::one();
        for i in (0..(n - 1)).rev() {
            let mut acc = Complex::<T>::zero();
            for j in (i + 1)..n {
                acc = acc + g[(i, j)] * coeffs[j];
            }
            coeffs[i] = -acc / g[(i, i)];
        }

        // Residual check against the original matrix.
        let mut shifted = m.clone();
        for i in 0..n {
            shifted[(i, i)] = shifted[(i, i)] - lambda;
        }
        let residual_vec = shifted.matvec(&coeffs);
        let rnorm = vec_norm(&residual_vec);
        let cnorm = vec_norm(&coeffs);
        if rnorm > lit::<T>(1e-10) * cnorm * (T::one() + m.max_abs()) {
            return Err(Error::NumericalFailure {
                context: "ladder coefficient nullspace solve",
                iterations: 0,
                residual: (rnorm / cnorm).to_f64().unwrap_or(f64::NAN),
            });
        }

        // Normalize the largest-magnitude entry to exactly 1.
        let (imax, _) = coeffs
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.norm().partial_cmp(&b.norm()).expect("finite"))
            .expect("nonzero vector");
        let pivot = coeffs[imax];
        for z in &mut coeffs {
            *z = *z / pivot;
        }

        Ok(Self { coeffs, lambda })
    }

    pub fn coefficients(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn lambda(&self) -> Complex<T> {
        self.lambda
    }

    /// Residual ||(M - lambda I) C|| / ||C|| against a given adjoint matrix.
    pub fn commutation_residual(&self, adjoint: &AdjointMatrix<T>) -> T {
        let n = adjoint.m.nrows();
        let mut shifted = adjoint.m.clone();
        for i in 0..n {
            shifted[(i, i)] = shifted[(i, i)] - self.lambda;
        }
        vec_norm(&shifted.matvec(&self.coeffs)) / vec_norm(&self.coeffs)
    }
}

fn vec_norm<T: Scalar>(v: &[Complex<T>]) -> T {
    v.iter()
        .map(|z| z.norm_sqr())
        .fold(T::zero(), |a, b| a + b)
        .sqrt()
}

/// PT-phase of the gain/loss pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseRegion {
    /// All mode frequencies real: 2 gamma sqrt(omega^2 - gamma^2) < eps < omega^2
    /// (and 2 gamma^2 < omega^2, where the window is meaningful).
    Unbroken,
    /// Coupling below the lower transition (or gain too strong for any real
    /// spectrum): complex frequencies.
    BrokenLow,
    /// Coupling above omega^2: one real pair, one imaginary pair.
    BrokenHigh,
    /// Within the tolerance band of a transition line, where frequencies
    /// coalesce (exceptional point) or vanish.
    Boundary,
}

impl PhaseRegion {
    /// Classify by the real-frequency window with a tolerance band around
    /// both transition lines.
    ///
    /// The window condition alone is the textbook statement for the gain/loss
    /// regime; for 2 gamma^2 >= omega^2 (including gamma > omega) no real
    /// spectrum exists and classification follows the reality of the
    /// closed-form frequencies instead.
    pub fn classify<T: Scalar>(params: OscillatorParams<T>, tol: T) -> PhaseRegion {
        let OscillatorParams {
            omega,
            gamma,
            epsilon,
        } = params;
        debug_assert!(omega > T::zero() && gamma >= T::zero() && epsilon >= T::zero());
        let w2 = omega * omega;
        let band = tol * if w2 > T::one() { w2 } else { T::one() };
        let disc = w2 - gamma * gamma;
        let left = if disc >= T::zero() {
            Some(lit::<T>(2.0) * gamma * disc.sqrt())
        } else {
            None
        };
        let near_left = left.map(|l| (epsilon - l).abs() <= band).unwrap_or(false);
        let near_right = (epsilon - w2).abs() <= band;
        if near_left || near_right {
            return PhaseRegion::Boundary;
        }
        if let Some(l) = left {
            let sum_positive = w2 - lit::<T>(2.0) * gamma * gamma > T::zero();
            if epsilon > l && epsilon < w2 && sum_positive {
                return PhaseRegion::Unbroken;
            }
        }
        if epsilon > w2 {
            PhaseRegion::BrokenHigh
        } else {
            PhaseRegion::BrokenLow
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            PhaseRegion::Unbroken => "Unbroken",
            PhaseRegion::BrokenLow => "BrokenLow",
            PhaseRegion::BrokenHigh => "BrokenHigh",
            PhaseRegion::Boundary => "Boundary",
        }
    }
}

impl std::fmt::Display for PhaseRegion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Smallest achievable max-deviation over all pairings of two equal-size
/// complex multisets. Exhaustive over permutations; intended for the small
/// root sets handled here.
pub fn multiset_max_deviation<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    assert_eq!(a.len(), b.len(), "multisets must have equal size");
    let n = a.len();
    let mut used = vec![false; n];
    let mut best = T::infinity();
    fn rec<T: Scalar>(
        a: &[Complex<T>],
        b: &[Complex<T>],
        used: &mut [bool],
        i: usize,
        current: T,
        best: &mut T,
    ) {
        if current >= *best {
            return;
        }
        if i == a.len() {
            *best = current;
            return;
        }
        for j in 0..b.len() {
            if !used[j] {
                let d = (a[i] - b[j]).norm();
                let next = if d > current { d } else { current };
                if next < *best {
                    used[j] = true;
                    rec(a, b, used, i + 1, next, best);
                    used[j] = false;
                }
            }
        }
    }
    rec(a, b, &mut used, 0, T::zero(), &mut best);
    best
}
