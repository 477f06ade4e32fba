//! Power-of-two FFT, Hann window and parabolic peak refinement for the
//! frequency extraction in `classical`.

use num_complex::Complex;

use crate::scalar::{lit, Scalar};

/// In-place radix-2 decimation-in-time FFT. Length must be a power of two.
pub fn fft_in_place<T: Scalar>(buf: &mut [Complex<T>]) {
    let n = buf.len();
    assert!(n.is_power_of_two(), "FFT length must be a power of two");
    if n < 2 {
        return;
    }

    // bit-reversal permutation
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            buf.swap(i, j);
        }
    }

    let mut len = 2usize;
    while len <= n {
        let angle = -lit::<T>(2.0) * T::PI() / lit::<T>(len as f64);
        let w_len = Complex::new(angle.cos(), angle.sin());
        for chunk in buf.chunks_mut(len) {
            let mut w = Complex::new(T::one(), T::zero());
            let half = len / 2;
            for off in 0..half {
                let u = chunk[off];
                let v = chunk[off + half] * w;
                chunk[off] = u + v;
                chunk[off + half] = u - v;
                w = w * w_len;
            }
        }
        len <<= 1;
    }
}

/// Periodic Hann window value w[j] = (1 - cos(2 pi j / n)) / 2.
pub fn hann<T: Scalar>(j: usize, n: usize) -> T {
    let phase = lit::<T>(2.0) * T::PI() * lit::<T>(j as f64) / lit::<T>(n as f64);
    (T::one() - phase.cos()) * lit::<T>(0.5)
}

/// Parabolic refinement of a spectral peak at bin `k` from the
/// log-magnitudes of bins k-1, k, k+1. Returns the fractional bin offset in
/// (-1/2, 1/2) and the interpolated log-magnitude at the vertex.
pub fn refine_peak<T: Scalar>(log_mag: &[T], k: usize) -> (T, T) {
    let alpha = log_mag[k - 1];
    let beta = log_mag[k];
    let gamma = log_mag[k + 1];
    let denom = alpha - beta - beta + gamma;
    if denom == T::zero() {
        return (T::zero(), beta);
    }
    let delta = lit::<T>(0.5) * (alpha - gamma) / denom;
    let peak = beta - lit::<T>(0.25) * (alpha - gamma) * delta;
    (delta, peak)
}
