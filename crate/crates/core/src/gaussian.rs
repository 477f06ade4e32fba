//! Exact operator algebra on polynomial-times-Gaussian wavefunctions.
//!
//! States have the form P(x, y) exp(-(b x^2 + c y^2 + 2 a x y)) with a
//! complex coefficient table for P. The class is closed under multiplication
//! by x or y and under d/dx, d/dy, hence under the Hamiltonian and under any
//! linear combination of (x, y, p_x, p_y) — so eigenvalue residuals and
//! annihilation statements reduce to exact coefficient arithmetic, with no
//! quadrature anywhere.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::operator::{OscillatorParams, QuadraticHamiltonian};
use crate::scalar::{lit, Scalar};
use crate::spectrum::{
    AdjointMatrix, GroundStateParams, LadderOperator, ModeFrequencies, DEFAULT_REALITY_TOL,
};

/// Default cap on the total degree of the polynomial factor; enough for
/// states up to n+k = 8 with headroom for Hamiltonian applications.
pub const DEFAULT_DEGREE_CAP: usize = 16;

/// Relative coefficient threshold below which an oracle result counts as the
/// zero state.
pub const VANISH_TOL: f64 = 1e-12;

/// Two-variable polynomial with complex coefficients and a total-degree cap.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly2<T> {
    cap: usize,
    coeffs: Vec<Complex<T>>, // (cap+1) x (cap+1) table, row j = power of x
}

impl<T: Scalar> Poly2<T> {
    pub fn zero(cap: usize) -> Self {
        Self {
            cap,
            coeffs: vec![Complex::zero(); (cap + 1) * (cap + 1)],
        }
    }

    pub fn constant(cap: usize, value: Complex<T>) -> Self {
        let mut p = Self::zero(cap);
        p.coeffs[0] = value;
        p
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn coeff(&self, j: usize, k: usize) -> Complex<T> {
        if j <= self.cap && k <= self.cap {
            self.coeffs[j * (self.cap + 1) + k]
        } else {
            Complex::zero()
        }
    }

    pub fn set_coeff(&mut self, j: usize, k: usize, value: Complex<T>) -> Result<()> {
        if j + k > self.cap {
            return Err(Error::DegreeCapacity {
                needed: j + k,
                cap: self.cap,
            });
        }
        self.coeffs[j * (self.cap + 1) + k] = value;
        Ok(())
    }

    fn for_each_nonzero(&self, mut f: impl FnMut(usize, usize, Complex<T>)) {
        for j in 0..=self.cap {
            for k in 0..=(self.cap - j) {
                let c = self.coeffs[j * (self.cap + 1) + k];
                if !c.is_zero() {
                    f(j, k, c);
                }
            }
        }
    }

    /// Total degree of the highest nonzero monomial, or None for the zero
    /// polynomial.
    pub fn degree(&self) -> Option<usize> {
        let mut deg = None;
        self.for_each_nonzero(|j, k, _| {
            let d = j + k;
            if deg.is_none_or(|m| d > m) {
                deg = Some(d);
            }
        });
        deg
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn max_abs(&self) -> T {
        self.coeffs
            .iter()
            .map(|c| c.norm())
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            cap: self.cap,
            coeffs: self.coeffs.iter().map(|c| *c * s).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.cap, rhs.cap, "degree caps must agree");
        Self {
            cap: self.cap,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| *a + *b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.cap, rhs.cap, "degree caps must agree");
        Self {
            cap: self.cap,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| *a - *b)
                .collect(),
        }
    }

    /// Multiply by x (shift the x power up by one).
    pub fn mul_x(&self) -> Result<Self> {
        let mut out = Self::zero(self.cap);
        let mut overflow = None;
        self.for_each_nonzero(|j, k, c| {
            if j + 1 + k > self.cap {
                overflow = Some(j + 1 + k);
            } else {
                out.coeffs[(j + 1) * (self.cap + 1) + k] = c;
            }
        });
        match overflow {
            Some(needed) => Err(Error::DegreeCapacity {
                needed,
                cap: self.cap,
            }),
            None => Ok(out),
        }
    }

    /// Multiply by y.
    pub fn mul_y(&self) -> Result<Self> {
        let mut out = Self::zero(self.cap);
        let mut overflow = None;
        self.for_each_nonzero(|j, k, c| {
            if j + k + 1 > self.cap {
                overflow = Some(j + k + 1);
            } else {
                out.coeffs[j * (self.cap + 1) + k + 1] = c;
            }
        });
        match overflow {
            Some(needed) => Err(Error::DegreeCapacity {
                needed,
                cap: self.cap,
            }),
            None => Ok(out),
        }
    }

    /// Plain polynomial derivative with respect to x.
    pub fn dx(&self) -> Self {
        let mut out = Self::zero(self.cap);
        self.for_each_nonzero(|j, k, c| {
            if j > 0 {
                out.coeffs[(j - 1) * (self.cap + 1) + k] =
                    c * Complex::new(lit::<T>(j as f64), T::zero());
            }
        });
        out
    }

    /// Plain polynomial derivative with respect to y.
    pub fn dy(&self) -> Self {
        let mut out = Self::zero(self.cap);
        self.for_each_nonzero(|j, k, c| {
            if k > 0 {
                out.coeffs[j * (self.cap + 1) + k - 1] =
                    c * Complex::new(lit::<T>(k as f64), T::zero());
            }
        });
        out
    }

    /// Parity of the monomial support under (x, y) -> (-x, -y): Some(0) for
    /// purely even total degree, Some(1) for purely odd, None for mixed or
    /// zero. Exact check on the coefficient table, no tolerance.
    pub fn parity(&self) -> Option<u8> {
        let mut seen = [false, false];
        self.for_each_nonzero(|j, k, _| {
            seen[(j + k) % 2] = true;
        });
        match seen {
            [true, false] => Some(0),
            [false, true] => Some(1),
            _ => None,
        }
    }

    pub fn eval(&self, x: T, y: T) -> Complex<T> {
        let mut acc = Complex::zero();
        self.for_each_nonzero(|j, k, c| {
            acc = acc + c * Complex::new(x.powi(j as i32) * y.powi(k as i32), T::zero());
        });
        acc
    }
}

/// Quadratic exponent of a Gaussian factor exp(-(b x^2 + c y^2 + 2 a x y)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianExponent<T> {
    /// Half the cross-term coefficient (the xy term reads 2 a x y).
    pub a: Complex<T>,
    /// Coefficient of x^2.
    pub b: Complex<T>,
    /// Coefficient of y^2.
    pub c: Complex<T>,
}

impl<T: Scalar> GaussianExponent<T> {
    /// Square integrability: the real part of the quadratic form must be
    /// positive definite, i.e. Re b > 0, Re c > 0 and Re b Re c > (Re a)^2.
    pub fn is_normalizable(&self) -> bool {
        self.b.re > T::zero()
            && self.c.re > T::zero()
            && self.b.re * self.c.re > self.a.re * self.a.re
    }
}

/// A wavefunction P(x, y) exp(-(b x^2 + c y^2 + 2 a x y)).
#[derive(Debug, Clone, PartialEq)]
pub struct PolyGaussian<T> {
    exponent: GaussianExponent<T>,
    poly: Poly2<T>,
}

impl<T: Scalar> PolyGaussian<T> {
    pub fn new(exponent: GaussianExponent<T>, poly: Poly2<T>) -> Self {
        Self { exponent, poly }
    }

    /// The Gaussian with P = 1.
    pub fn unit(exponent: GaussianExponent<T>, cap: usize) -> Self {
        Self::new(exponent, Poly2::constant(cap, Complex::one()))
    }

    pub fn exponent(&self) -> GaussianExponent<T> {
        self.exponent
    }

    pub fn poly(&self) -> &Poly2<T> {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::new(self.exponent, self.poly.scale(s))
    }

    /// Sum of two states sharing one Gaussian factor.
    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.exponent != rhs.exponent {
            return Err(Error::InvalidArgument(
                "cannot add states with different Gaussian exponents".into(),
            ));
        }
        Ok(Self::new(self.exponent, self.poly.add(&rhs.poly)))
    }

    /// d/dx acting on the full state, expressed on the polynomial factor:
    /// dP/dx - P (2 b x + 2 a y).
    fn dx_poly(&self) -> Result<Poly2<T>> {
        let two = Complex::new(lit::<T>(2.0), T::zero());
        let gradient = self
            .poly
            .mul_x()?
            .scale(two * self.exponent.b)
            .add(&self.poly.mul_y()?.scale(two * self.exponent.a));
        Ok(self.poly.dx().sub(&gradient))
    }

    /// d/dy acting on the full state: dP/dy - P (2 c y + 2 a x).
    fn dy_poly(&self) -> Result<Poly2<T>> {
        let two = Complex::new(lit::<T>(2.0), T::zero());
        let gradient = self
            .poly
            .mul_y()?
            .scale(two * self.exponent.c)
            .add(&self.poly.mul_x()?.scale(two * self.exponent.a));
        Ok(self.poly.dy().sub(&gradient))
    }

    fn with_poly(&self, poly: Poly2<T>) -> Self {
        Self::new(self.exponent, poly)
    }

    /// Value of the state at a real point.
    pub fn eval(&self, x: T, y: T) -> Complex<T> {
        let q = self.exponent.b * Complex::new(x * x, T::zero())
            + self.exponent.c * Complex::new(y * y, T::zero())
            + self.exponent.a * Complex::new(lit::<T>(2.0) * x * y, T::zero());
        self.poly.eval(x, y) * (-q).exp()
    }
}

/// A first-degree operator
/// alpha_x x + alpha_y y - i alpha_px d/dx - i alpha_py d/dy,
/// i.e. a linear combination of the canonical basis with momenta realized
/// as -i d.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearOperatorAction<T> {
    pub x: Complex<T>,
    pub y: Complex<T>,
    pub px: Complex<T>,
    pub py: Complex<T>,
}

impl<T: Scalar> LinearOperatorAction<T> {
    pub fn new(x: Complex<T>, y: Complex<T>, px: Complex<T>, py: Complex<T>) -> Self {
        Self { x, y, px, py }
    }

    /// Coefficients of a ladder operator over the basis (x, y, p_x, p_y).
    pub fn from_ladder(op: &LadderOperator<T>) -> Result<Self> {
        let c = op.coefficients();
        if c.len() != 4 {
            return Err(Error::InvalidArgument(format!(
                "wavefunction action needs a 4-operator basis, got {}",
                c.len()
            )));
        }
        Ok(Self::new(c[0], c[1], c[2], c[3]))
    }

    /// Basis coefficient vector (x, y, p_x, p_y).
    pub fn coefficients(&self) -> [Complex<T>; 4] {
        [self.x, self.y, self.px, self.py]
    }

    /// Apply to a state. The exponent is unchanged; the polynomial degree
    /// grows by at most one.
    pub fn apply(&self, psi: &PolyGaussian<T>) -> Result<PolyGaussian<T>> {
        let minus_i = Complex::new(T::zero(), -T::one());
        let mut out = psi.poly.mul_x()?.scale(self.x);
        out = out.add(&psi.poly.mul_y()?.scale(self.y));
        out = out.add(&psi.dx_poly()?.scale(minus_i * self.px));
        out = out.add(&psi.dy_poly()?.scale(minus_i * self.py));
        Ok(psi.with_poly(out))
    }
}

/// Apply the gain/loss Hamiltonian
/// H = p_x p_y + gamma (y p_y - x p_x) + (omega^2 - gamma^2) x y
///     + eps/2 (x^2 + y^2)
/// as a differential operator. Exact coefficient arithmetic; the polynomial
/// degree grows by at most two.
pub fn apply_hamiltonian<T: Scalar>(
    params: OscillatorParams<T>,
    psi: &PolyGaussian<T>,
) -> Result<PolyGaussian<T>> {
    let OscillatorParams {
        omega,
        gamma,
        epsilon,
    } = params;
    let re = |x: T| Complex::new(x, T::zero());
    let minus_i = Complex::new(T::zero(), -T::one());

    // p_y psi and p_x psi as polynomial factors
    let py_p = psi.dy_poly()?.scale(minus_i);
    let px_p = psi.dx_poly()?.scale(minus_i);

    // p_x (p_y psi)
    let pxpy = psi.with_poly(py_p.clone()).dx_poly()?.scale(minus_i);

    let mut out = pxpy;
    // gamma (y p_y - x p_x)
    out = out.add(&py_p.mul_y()?.scale(re(gamma)));
    out = out.add(&px_p.mul_x()?.scale(re(-gamma)));
    // (omega^2 - gamma^2) x y
    let w2g2 = omega * omega - gamma * gamma;
    out = out.add(&psi.poly.mul_x()?.mul_y()?.scale(re(w2g2)));
    // eps/2 (x^2 + y^2)
    let half_eps = re(epsilon / lit(2.0));
    out = out.add(&psi.poly.mul_x()?.mul_x()?.scale(half_eps));
    out = out.add(&psi.poly.mul_y()?.mul_y()?.scale(half_eps));

    Ok(psi.with_poly(out))
}

/// Relative eigenvalue-equation residual: the largest coefficient of
/// (H - E) psi divided by the largest coefficient of psi. Returns infinity if
/// the two sides end up with different Gaussian factors.
pub fn eigen_residual<T: Scalar>(
    params: OscillatorParams<T>,
    psi: &PolyGaussian<T>,
    energy: Complex<T>,
) -> Result<T> {
    if psi.is_zero() {
        return Err(Error::InvalidArgument(
            "eigenvalue residual of the zero state is undefined".into(),
        ));
    }
    let h_psi = apply_hamiltonian(params, psi)?;
    if h_psi.exponent() != psi.exponent() {
        return Ok(T::infinity());
    }
    let diff = h_psi.poly.sub(&psi.poly.scale(energy));
    Ok(diff.max_abs() / psi.poly.max_abs())
}

/// Magnitudes of the four ladder operators applied to the ground state,
/// relative to the ground-state coefficient scale.
#[derive(Debug, Clone, Copy)]
pub struct AnnihilationReport<T> {
    /// Max-abs result coefficient for Z1, Z2, Z3, Z4.
    pub magnitudes: [T; 4],
    /// Whether each result vanishes below `VANISH_TOL`.
    pub vanishes: [bool; 4],
}

impl<T: Scalar> AnnihilationReport<T> {
    /// The characteristic pattern of this model: Z2 and Z3 annihilate the
    /// ground state while Z1 and Z4 do not (so the ladder continues downward
    /// without end).
    pub fn pattern_holds(&self, nonzero_floor: T) -> bool {
        !self.vanishes[0]
            && self.vanishes[1]
            && self.vanishes[2]
            && !self.vanishes[3]
            && self.magnitudes[0] > nonzero_floor
            && self.magnitudes[3] > nonzero_floor
    }
}

/// Assembled verification context: frequencies, ground-state parameters and
/// the four ladder actions Z1..Z4 associated with +lambda1, +lambda2,
/// -lambda1, -lambda2.
#[derive(Debug, Clone)]
pub struct GaussianOracle<T> {
    params: OscillatorParams<T>,
    freqs: ModeFrequencies<T>,
    gs: GroundStateParams<T>,
    ladders: [LinearOperatorAction<T>; 4],
    cap: usize,
}

impl<T: Scalar> GaussianOracle<T> {
    pub fn new(params: OscillatorParams<T>, cap: usize) -> Result<Self> {
        let freqs = ModeFrequencies::closed_form(params, lit::<T>(DEFAULT_REALITY_TOL));
        if freqs.is_degenerate() {
            return Err(Error::DegenerateMode(format!(
                "mode frequencies coalesce at omega={}, gamma={}, epsilon={}",
                params.omega, params.gamma, params.epsilon
            )));
        }
        let gs = GroundStateParams::solve(params)?;
        let h = QuadraticHamiltonian::coupled_gain_loss(params);
        let adjoint = AdjointMatrix::from_hamiltonian(&h);
        let shifts = [
            freqs.lambda1(),
            freqs.lambda2(),
            -freqs.lambda1(),
            -freqs.lambda2(),
        ];
        let mut ladders = Vec::with_capacity(4);
        for lambda in shifts {
            let op = LadderOperator::solve(&adjoint, lambda)?;
            ladders.push(LinearOperatorAction::from_ladder(&op)?);
        }
        Ok(Self {
            params,
            freqs,
            gs,
            ladders: [ladders[0], ladders[1], ladders[2], ladders[3]],
            cap,
        })
    }

    pub fn with_default_cap(params: OscillatorParams<T>) -> Result<Self> {
        Self::new(params, DEFAULT_DEGREE_CAP)
    }

    pub fn params(&self) -> OscillatorParams<T> {
        self.params
    }

    pub fn frequencies(&self) -> &ModeFrequencies<T> {
        &self.freqs
    }

    pub fn ground_state_params(&self) -> &GroundStateParams<T> {
        &self.gs
    }

    /// Ladder action Z_i (1-based index 1..=4).
    pub fn ladder(&self, index: usize) -> LinearOperatorAction<T> {
        self.ladders[index - 1]
    }

    /// The exact ground state. The ladder-parameter triple (a, b, c) enters
    /// the exponent with a factor 1/2,
    ///
    ///   psi_00 = exp(-(b x^2 + c y^2 + 2 a x y) / 2),
    ///
    /// which is what makes H psi_00 = a psi_00 hold identically: the x^2
    /// coefficient of (H psi)/psi is eps/2 - b (a + i gamma), vanishing
    /// precisely for b = eps / (2 (a + i gamma)), and symmetrically for c.
    pub fn ground_state(&self) -> PolyGaussian<T> {
        let half = Complex::new(lit::<T>(0.5), T::zero());
        let exponent = GaussianExponent {
            a: self.gs.a() * half,
            b: self.gs.b() * half,
            c: self.gs.c() * half,
        };
        PolyGaussian::unit(exponent, self.cap)
    }

    /// Ladder-built eigenstate psi_nk = Z1^n Z4^k psi_00 with eigenvalue
    /// n lambda1 - k lambda2 + a. Requires a real, non-degenerate spectrum.
    pub fn build_state(&self, n: u32, k: u32) -> Result<PolyGaussian<T>> {
        if !self.freqs.all_real() {
            return Err(Error::InvalidArgument(
                "ladder-built eigenstates require real mode frequencies".into(),
            ));
        }
        let mut psi = self.ground_state();
        for _ in 0..n {
            psi = self.ladders[0].apply(&psi)?;
        }
        for _ in 0..k {
            psi = self.ladders[3].apply(&psi)?;
        }
        Ok(psi)
    }

    /// Energy of psi_nk.
    pub fn energy(&self, n: u32, k: u32) -> Complex<T> {
        crate::spectrum::energy(n, k, &self.freqs, &self.gs)
    }

    /// Residual of H psi = E psi for a given state.
    pub fn eigen_residual(&self, psi: &PolyGaussian<T>, energy: Complex<T>) -> Result<T> {
        eigen_residual(self.params, psi, energy)
    }

    /// Apply each of Z1..Z4 to the ground state and report which results
    /// vanish.
    pub fn annihilation_check(&self) -> Result<AnnihilationReport<T>> {
        let psi = self.ground_state();
        let scale = psi.poly().max_abs();
        let mut magnitudes = [T::zero(); 4];
        let mut vanishes = [false; 4];
        for (i, z) in self.ladders.iter().enumerate() {
            let out = z.apply(&psi)?;
            let mag = out.poly().max_abs() / scale;
            magnitudes[i] = mag;
            vanishes[i] = mag < lit::<T>(VANISH_TOL);
        }
        Ok(AnnihilationReport {
            magnitudes,
            vanishes,
        })
    }
}
