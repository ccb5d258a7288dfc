//! Polynomials, rational functions and the small transcendental extension
//! (rational × z^μ × exp(polynomial)) used by the closed-form catalogs.

use num_complex::Complex64;

use crate::loopalg::cr;

/// Dense polynomial, `coeffs[k]` the coefficient of `z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<Complex64>);

impl Poly {
    pub fn zero() -> Self {
        Poly(vec![])
    }

    pub fn constant(v: Complex64) -> Self {
        Poly(vec![v])
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Poly(coeffs.iter().map(|&x| cr(x)).collect())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = cr(0.0);
        for &c in self.0.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly::zero();
        }
        Poly(
            self.0[1..]
                .iter()
                .enumerate()
                .map(|(k, &c)| c * cr((k + 1) as f64))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.norm() == 0.0)
    }
}

/// Rational function with declared punctures (poles the caller promises to
/// stay away from).
#[derive(Debug, Clone)]
pub struct RationalFn {
    pub num: Poly,
    pub den: Poly,
    pub punctures: Vec<Complex64>,
}

impl RationalFn {
    pub fn zero() -> Self {
        Self {
            num: Poly::zero(),
            den: Poly::constant(cr(1.0)),
            punctures: vec![],
        }
    }

    pub fn constant(v: Complex64) -> Self {
        Self {
            num: Poly::constant(v),
            den: Poly::constant(cr(1.0)),
            punctures: vec![],
        }
    }

    /// num / den with declared punctures at the den roots supplied by the
    /// caller (no root finding happens here).
    pub fn new(num: Poly, den: Poly, punctures: Vec<Complex64>) -> Self {
        assert!(!den.is_zero(), "denominator must not be identically zero");
        Self { num, den, punctures }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    /// Derivative by the quotient rule; punctures carry over.
    pub fn derivative(&self) -> RationalFn {
        let n = &self.num;
        let d = &self.den;
        let num = poly_sub(&poly_mul(&n.derivative(), d), &poly_mul(n, &d.derivative()));
        let den = poly_mul(d, d);
        RationalFn::new(num, den, self.punctures.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

pub fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.0.is_empty() || b.0.is_empty() {
        return Poly::zero();
    }
    let mut out = vec![cr(0.0); a.0.len() + b.0.len() - 1];
    for (i, &x) in a.0.iter().enumerate() {
        for (j, &y) in b.0.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    Poly(out)
}

pub fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.0.len().max(b.0.len());
    let mut out = vec![cr(0.0); n];
    for (k, v) in out.iter_mut().enumerate() {
        let x = a.0.get(k).copied().unwrap_or(cr(0.0));
        let y = b.0.get(k).copied().unwrap_or(cr(0.0));
        *v = x - y;
    }
    Poly(out)
}

/// Coefficient function of the form `c · R(z) · z^μ · exp(p(z))`, with the
/// principal branch for non-integer μ (plane slit along the negative real
/// axis). Covers every catalog entry without a symbolic engine.
#[derive(Debug, Clone)]
pub struct CoefFn {
    pub scale: Complex64,
    pub rational: RationalFn,
    pub mu: f64,
    pub exp_poly: Poly,
}

impl CoefFn {
    pub fn rational(r: RationalFn) -> Self {
        Self {
            scale: cr(1.0),
            rational: r,
            mu: 0.0,
            exp_poly: Poly::zero(),
        }
    }

    pub fn constant(v: Complex64) -> Self {
        Self::rational(RationalFn::constant(v))
    }

    /// `c · z^μ` on the slit plane.
    pub fn power(scale: Complex64, mu: f64) -> Self {
        Self {
            scale,
            rational: RationalFn::constant(cr(1.0)),
            mu,
            exp_poly: Poly::zero(),
        }
    }

    /// `c · exp(p(z))`.
    pub fn exp_poly(scale: Complex64, p: Poly) -> Self {
        Self {
            scale,
            rational: RationalFn::constant(cr(1.0)),
            mu: 0.0,
            exp_poly: p,
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut v = self.scale * self.rational.eval(z);
        if self.mu != 0.0 {
            v *= z.powf(self.mu);
        }
        if !self.exp_poly.is_zero() {
            v *= self.exp_poly.eval(z).exp();
        }
        v
    }

    /// Evaluation with an explicitly continued branch: z = ρ e^{iθ} with θ
    /// unwrapped, so z^μ = ρ^μ e^{iμθ} follows the analytic continuation
    /// along a path rather than the principal branch.
    pub fn eval_polar(&self, rho: f64, theta: f64) -> Complex64 {
        let z = Complex64::from_polar(rho, theta);
        let mut v = self.scale * self.rational.eval(z);
        if self.mu != 0.0 {
            v *= Complex64::from_polar(rho.powf(self.mu), self.mu * theta);
        }
        if !self.exp_poly.is_zero() {
            v *= self.exp_poly.eval(z).exp();
        }
        v
    }

    pub fn punctures(&self) -> &[Complex64] {
        &self.rational.punctures
    }

    /// Whether evaluation needs the slit along the negative real axis.
    pub fn has_branch_cut(&self) -> bool {
        self.mu != 0.0 && self.mu.fract() != 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loopalg::c;

    #[test]
    fn rational_eval_and_derivative() {
        // (z^2 + 1)/(z - 2)
        let r = RationalFn::new(
            Poly::from_real(&[1.0, 0.0, 1.0]),
            Poly::from_real(&[-2.0, 1.0]),
            vec![c(2.0, 0.0)],
        );
        let z = c(1.0, 1.0);
        let v = r.eval(z);
        let want = (z * z + cr(1.0)) / (z - cr(2.0));
        assert!((v - want).norm() < 1e-14);

        let d = r.derivative();
        let h = 1e-6;
        let fd = (r.eval(z + cr(h)) - r.eval(z - cr(h))) / cr(2.0 * h);
        assert!((d.eval(z) - fd).norm() < 1e-8);
    }

    #[test]
    fn coef_fn_power_exp() {
        // 2 · z^0.8 · e^{-z}
        let f = CoefFn {
            scale: cr(2.0),
            rational: RationalFn::constant(cr(1.0)),
            mu: 0.8,
            exp_poly: Poly::from_real(&[0.0, -1.0]),
        };
        let z = c(0.5, 0.25);
        let want = cr(2.0) * z.powf(0.8) * (-z).exp();
        assert!((f.eval(z) - want).norm() < 1e-14);
        assert!(f.has_branch_cut());
    }
}
