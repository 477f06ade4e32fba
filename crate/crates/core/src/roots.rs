//! Characteristic polynomials and polynomial root finding for the small
//! dense matrices of this crate.
//!
//! Eigenvalues are found in two steps: the Faddeev-LeVerrier recurrence
//! produces the characteristic polynomial from traces of matrix powers, and
//! Durand-Kerner iteration finds all roots simultaneously. The matrices never
//! exceed 8x8, so this beats pulling in a general eigensolver.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::scalar::{lit, Scalar};

/// Iteration cap for Durand-Kerner.
pub const MAX_ROOT_ITERATIONS: usize = 200;

/// Monic coefficients of det(lambda I - M), low degree first:
/// p(lambda) = lambda^n + c[n-1] lambda^(n-1) + ... + c[0].
///
/// Faddeev-LeVerrier: M_1 = M, c_{n-k} = -tr(M_k)/k, M_{k+1} = M (M_k + c_{n-k} I).
pub fn characteristic_polynomial<T: Scalar>(m: &CMatrix<T>) -> Vec<Complex<T>> {
    assert!(
        m.is_square(),
        "characteristic polynomial needs a square matrix"
    );
    let n = m.nrows();
    let mut coeffs = vec![Complex::zero(); n];
    let mut mk = m.clone();
    for k in 1..=n {
        let ck = -mk.trace() / Complex::new(lit::<T>(k as f64), T::zero());
        coeffs[n - k] = ck;
        if k < n {
            let mut shifted = mk;
            for i in 0..n {
                shifted[(i, i)] = shifted[(i, i)] + ck;
            }
            mk = m.mul(&shifted);
        }
    }
    coeffs
}

/// Horner evaluation of the monic polynomial with low-first coefficients
/// `c`, together with a running bound on the evaluation roundoff.
fn eval_monic<T: Scalar>(c: &[Complex<T>], z: Complex<T>) -> (Complex<T>, T) {
    let mut p = Complex::one();
    let mut scale = T::one(); // sum of |c_k| |z|^k, from the top down
    let az = z.norm();
    for ck in c.iter().rev() {
        p = p * z + ck;
        scale = scale * az + ck.norm();
    }
    (p, scale)
}

/// Fujiwara bound on the magnitude of every root of the monic polynomial.
fn root_bound<T: Scalar>(c: &[Complex<T>]) -> T {
    let n = c.len();
    let mut bound = T::zero();
    for (k, ck) in c.iter().enumerate() {
        let mag = ck.norm();
        if mag > T::zero() {
            let exponent = T::one() / lit::<T>((n - k) as f64);
            let candidate = mag.powf(exponent);
            if candidate > bound {
                bound = candidate;
            }
        }
    }
    lit::<T>(2.0) * bound + lit::<T>(1e-3)
}

/// All roots of a monic polynomial (low-first coefficients, degree = c.len())
/// by Durand-Kerner iteration.
///
/// Stops when the largest update drops below `update_tol` relative to the
/// root scale, or when every residual |p(z_i)| is at the roundoff floor of
/// the Horner evaluation (the attainable limit near multiple roots). Roots
/// closer than ~1e-6 of the root scale are treated as one multiple root and
/// snapped to their cluster mean, which restores full accuracy for the
/// double roots that occur on phase boundaries.
pub fn polynomial_roots<T: Scalar>(c: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let n = c.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![-c[0]]);
    }

    let update_tol = {
        let spec = lit::<T>(1e-14);
        let floor = lit::<T>(4.0) * T::epsilon();
        if spec > floor {
            spec
        } else {
            floor
        }
    };
    let noise = lit::<T>(8.0 * n as f64) * T::epsilon();

    // Standard non-symmetric starting configuration on a circle of the
    // Fujiwara radius.
    let r = root_bound(c);
    let seed = Complex::new(lit::<T>(0.4), lit::<T>(0.9));
    let mut z: Vec<Complex<T>> = Vec::with_capacity(n);
    let mut w = Complex::new(r, T::zero()) * seed;
    for _ in 0..n {
        z.push(w);
        w = w * seed;
    }

    let mut last_update = T::infinity();
    let mut last_residual = T::infinity();
    for _iter in 0..MAX_ROOT_ITERATIONS {
        let mut max_update = T::zero();
        let mut max_excess = T::zero();
        for i in 0..n {
            let (p, scale) = eval_monic(c, z[i]);
            let residual = p.norm();
            let floor = noise * scale;
            if residual > floor {
                let excess = residual / (T::one() + scale);
                if excess > max_excess {
                    max_excess = excess;
                }
            }
            let mut denom = Complex::one();
            for j in 0..n {
                if j != i {
                    denom = denom * (z[i] - z[j]);
                }
            }
            if denom.is_zero() {
                // coincident iterates: nudge deterministically
                z[i] = z[i] + Complex::new(update_tol + update_tol, T::zero());
                max_update = T::infinity();
                continue;
            }
            let step = p / denom;
            z[i] = z[i] - step;
            let s = step.norm();
            if s > max_update {
                max_update = s;
            }
        }
        let zscale = z
            .iter()
            .map(|zi| zi.norm())
            .fold(T::one(), |a, b| if b > a { b } else { a });
        last_update = max_update;
        last_residual = max_excess;
        if max_update <= update_tol * zscale || max_excess.is_zero() {
            snap_clusters(c, &mut z);
            return Ok(z);
        }
    }
    Err(Error::NumericalFailure {
        context: "Durand-Kerner root iteration",
        iterations: MAX_ROOT_ITERATIONS,
        residual: last_residual
            .to_f64()
            .unwrap_or(f64::NAN)
            .max(last_update.to_f64().unwrap_or(f64::NAN)),
    })
}

fn poly_derivative<T: Scalar>(p: &[Complex<T>]) -> Vec<Complex<T>> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, ck)| *ck * Complex::new(lit::<T>(k as f64), T::zero()))
        .collect()
}

fn eval_poly<T: Scalar>(p: &[Complex<T>], z: Complex<T>) -> Complex<T> {
    p.iter().rev().fold(Complex::zero(), |acc, ck| acc * z + ck)
}

/// Resolve clusters of nearly coincident iterates, where simultaneous
/// iteration stagnates at the ~eps^(1/m) radius of an m-fold root. The root
/// is a simple zero of the (m-1)-th derivative, so a few Newton steps on
/// that derivative starting from the cluster centroid recover it to full
/// precision; all cluster members are snapped to the result.
fn snap_clusters<T: Scalar>(coeffs: &[Complex<T>], z: &mut [Complex<T>]) {
    let n = z.len();
    let scale = z
        .iter()
        .map(|zi| zi.norm())
        .fold(T::one(), |a, b| if b > a { b } else { a });
    let tol = lit::<T>(1e-6) * scale;
    let mut assigned = vec![usize::MAX; n];
    let mut next_cluster = 0;
    for i in 0..n {
        if assigned[i] == usize::MAX {
            assigned[i] = next_cluster;
            next_cluster += 1;
        }
        for j in (i + 1)..n {
            if assigned[j] == usize::MAX && (z[i] - z[j]).norm() <= tol {
                assigned[j] = assigned[i];
            }
        }
    }
    // full coefficient list including the leading 1
    let mut full: Vec<Complex<T>> = coeffs.to_vec();
    full.push(Complex::one());
    for cluster in 0..next_cluster {
        let members: Vec<usize> = (0..n).filter(|&i| assigned[i] == cluster).collect();
        let m = members.len();
        if m < 2 {
            continue;
        }
        let count = Complex::new(lit::<T>(m as f64), T::zero());
        let centroid = members
            .iter()
            .fold(Complex::<T>::zero(), |acc, &i| acc + z[i])
            / count;
        let mut d = full.clone();
        for _ in 0..(m - 1) {
            d = poly_derivative(&d);
        }
        let dd = poly_derivative(&d);
        let mut refined = centroid;
        for _ in 0..4 {
            let denom = eval_poly(&dd, refined);
            if denom.is_zero() {
                break;
            }
            let step = eval_poly(&d, refined) / denom;
            refined = refined - step;
            if step.norm() <= T::epsilon() * (T::one() + refined.norm()) {
                break;
            }
        }
        // accept the polish only if it stayed within the cluster and improved
        let target = if (refined - centroid).norm() <= tol
            && eval_poly(&d, refined).norm() <= eval_poly(&d, centroid).norm()
        {
            refined
        } else {
            centroid
        };
        for &i in &members {
            z[i] = target;
        }
    }
}

/// Eigenvalues of a square complex matrix via the characteristic polynomial.
pub fn eigenvalues<T: Scalar>(m: &CMatrix<T>) -> Result<Vec<Complex<T>>> {
    polynomial_roots(&characteristic_polynomial(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    fn sort_key(z: &C) -> (i64, i64) {
        ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64)
    }

    #[test]
    fn charpoly_of_diagonal_matrix() {
        let m = CMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(-3.0, 0.0)],
        ]);
        // (x-2)(x+3) = x^2 + x - 6
        let p = characteristic_polynomial(&m);
        assert!((p[0] - c(-6.0, 0.0)).norm() < 1e-14);
        assert!((p[1] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn charpoly_of_rotation_generator() {
        // i*[[0,1],[-1,0]] has eigenvalues +-1: p = x^2 - 1
        let m = CMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, -1.0), c(0.0, 0.0)],
        ]);
        let p = characteristic_polynomial(&m);
        assert!((p[0] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(p[1].norm() < 1e-15);
    }

    #[test]
    fn roots_of_quartic_with_known_roots() {
        // (x-1)(x+2)(x-3i)(x+3i) = (x^2+x-2)(x^2+9)
        //  = x^4 + x^3 + 7x^2 + 9x - 18
        let coeffs = vec![c(-18.0, 0.0), c(9.0, 0.0), c(7.0, 0.0), c(1.0, 0.0)];
        let mut roots = polynomial_roots(&coeffs).unwrap();
        roots.sort_by_key(sort_key);
        let mut expected = vec![c(1.0, 0.0), c(-2.0, 0.0), c(0.0, 3.0), c(0.0, -3.0)];
        expected.sort_by_key(sort_key);
        for (r, e) in roots.iter().zip(&expected) {
            assert!((r - e).norm() < 1e-12, "{r} vs {e}");
        }
    }

    #[test]
    fn double_roots_are_recovered_exactly() {
        // (x^2-1)^2: double roots at +-1; plain Durand-Kerner stalls at
        // ~1e-8 here, cluster snapping must clean that up.
        let coeffs = vec![c(1.0, 0.0), c(0.0, 0.0), c(-2.0, 0.0), c(0.0, 0.0)];
        let mut roots = polynomial_roots(&coeffs).unwrap();
        roots.sort_by_key(sort_key);
        assert!((roots[0] - c(-1.0, 0.0)).norm() < 1e-12, "{}", roots[0]);
        assert!((roots[1] - c(-1.0, 0.0)).norm() < 1e-12, "{}", roots[1]);
        assert!((roots[2] - c(1.0, 0.0)).norm() < 1e-12, "{}", roots[2]);
        assert!((roots[3] - c(1.0, 0.0)).norm() < 1e-12, "{}", roots[3]);
    }

    #[test]
    fn eigenvalues_of_rotation_generator() {
        let m = CMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, -1.0), c(0.0, 0.0)],
        ]);
        let mut ev = eigenvalues(&m).unwrap();
        ev.sort_by_key(sort_key);
        assert!((ev[0] - c(-1.0, 0.0)).norm() < 1e-13);
        assert!((ev[1] - c(1.0, 0.0)).norm() < 1e-13);
    }
}
