//! Arithmetic and analysis for twisted 2x2 matrix loops stored as truncated
//! Laurent series in the spectral parameter.
//!
//! A loop `a(λ) = Σ_{j=-N..N} a_j λ^j` is kept densely over the window
//! `[-N, N]`. The twisted condition `a(-λ) = σ3 a(λ) σ3` means diagonal
//! entries live on even powers and off-diagonal entries on odd powers;
//! every operation here preserves that sparsity pattern exactly (products
//! and sums of exact zeros stay exact zeros in floating point).
//!
//! Products are Cauchy products restricted to the window; whatever falls
//! outside is accumulated into `trunc_loss` rather than raised as an error,
//! so callers can decide when to enlarge the window.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

// ---------------------------------------------------------------------------
// 2x2 complex matrices
// ---------------------------------------------------------------------------

/// A 2x2 complex matrix, the coefficient type of every loop in the pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub m: [[Complex64; 2]; 2],
}

impl Mat2 {
    pub fn new(a11: Complex64, a12: Complex64, a21: Complex64, a22: Complex64) -> Self {
        Self {
            m: [[a11, a12], [a21, a22]],
        }
    }

    pub fn zero() -> Self {
        Self::new(cr(0.0), cr(0.0), cr(0.0), cr(0.0))
    }

    pub fn identity() -> Self {
        Self::new(cr(1.0), cr(0.0), cr(0.0), cr(1.0))
    }

    pub fn diag(a: Complex64, d: Complex64) -> Self {
        Self::new(a, cr(0.0), cr(0.0), d)
    }

    /// Pauli matrix σ1 = [[0,1],[1,0]].
    pub fn sigma1() -> Self {
        Self::new(cr(0.0), cr(1.0), cr(1.0), cr(0.0))
    }

    /// Pauli matrix σ2 = [[0,-i],[i,0]].
    pub fn sigma2() -> Self {
        Self::new(cr(0.0), -I, I, cr(0.0))
    }

    /// Pauli matrix σ3 = [[1,0],[0,-1]].
    pub fn sigma3() -> Self {
        Self::new(cr(1.0), cr(0.0), cr(0.0), cr(-1.0))
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn conj_transpose(&self) -> Self {
        Self::new(
            self.m[0][0].conj(),
            self.m[1][0].conj(),
            self.m[0][1].conj(),
            self.m[1][1].conj(),
        )
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.m[0][0], self.m[1][0], self.m[0][1], self.m[1][1])
    }

    pub fn conj(&self) -> Self {
        Self::new(
            self.m[0][0].conj(),
            self.m[0][1].conj(),
            self.m[1][0].conj(),
            self.m[1][1].conj(),
        )
    }

    pub fn adjugate(&self) -> Self {
        Self::new(self.m[1][1], -self.m[0][1], -self.m[1][0], self.m[0][0])
    }

    pub fn inv(&self) -> Result<Self> {
        let d = self.det();
        if d.norm() < 1e-300 {
            return Err(Error::SingularInput("2x2 matrix has zero determinant".into()));
        }
        Ok(self.adjugate().scale(cr(1.0) / d))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(
            s * self.m[0][0],
            s * self.m[0][1],
            s * self.m[1][0],
            s * self.m[1][1],
        )
    }

    /// Entrywise max modulus.
    pub fn norm(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_traceless(&self, tol: f64) -> bool {
        self.trace().norm() <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (*self - self.conj_transpose()).norm() <= tol
    }

    pub fn is_det_one(&self, tol: f64) -> bool {
        (self.det() - cr(1.0)).norm() <= tol
    }

    /// Unitary with determinant one.
    pub fn is_su2(&self, tol: f64) -> bool {
        let u = *self * self.conj_transpose();
        (u - Self::identity()).norm() <= tol && self.is_det_one(tol)
    }

    /// Matrix exponential by scaling and squaring with a Taylor tail.
    pub fn exp(&self) -> Self {
        let norm = self.norm();
        let k = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as u32
        } else {
            0
        };
        let scaled = self.scale(cr(1.0 / (1u64 << k) as f64));
        let mut term = Self::identity();
        let mut sum = Self::identity();
        for n in 1..=24 {
            term = (term * scaled).scale(cr(1.0 / n as f64));
            sum = sum + term;
            if term.norm() < 1e-18 {
                break;
            }
        }
        let mut out = sum;
        for _ in 0..k {
            out = out * out;
        }
        out
    }
}

impl std::ops::Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.m[0][0] + o.m[0][0],
            self.m[0][1] + o.m[0][1],
            self.m[1][0] + o.m[1][0],
            self.m[1][1] + o.m[1][1],
        )
    }
}

impl std::ops::Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.m[0][0] - o.m[0][0],
            self.m[0][1] - o.m[0][1],
            self.m[1][0] - o.m[1][0],
            self.m[1][1] - o.m[1][1],
        )
    }
}

impl std::ops::Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.m[0][0] * o.m[0][0] + self.m[0][1] * o.m[1][0],
            self.m[0][0] * o.m[0][1] + self.m[0][1] * o.m[1][1],
            self.m[1][0] * o.m[0][0] + self.m[1][1] * o.m[1][0],
            self.m[1][0] * o.m[0][1] + self.m[1][1] * o.m[1][1],
        )
    }
}

impl std::ops::Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(cr(-1.0))
    }
}

// ---------------------------------------------------------------------------
// Points of the unit circle
// ---------------------------------------------------------------------------

/// A point of the unit circle, `λ = e^{iθ}`, exactly unimodular by
/// construction.
#[derive(Debug, Clone, Copy)]
pub struct UnitCirclePoint {
    pub angle: f64,
    pub value: Complex64,
}

impl UnitCirclePoint {
    pub fn new(angle: f64) -> Self {
        Self {
            angle,
            value: Complex64::from_polar(1.0, angle),
        }
    }
}

/// `k` equispaced points of the unit circle.
pub fn unit_circle_points(k: usize) -> Vec<UnitCirclePoint> {
    (0..k)
        .map(|j| UnitCirclePoint::new(2.0 * std::f64::consts::PI * j as f64 / k as f64))
        .collect()
}

// ---------------------------------------------------------------------------
// Scalar Laurent loops (determinants and their reciprocals)
// ---------------------------------------------------------------------------

/// A scalar truncated Laurent series over the same window convention as
/// [`TwistedLoop`].
#[derive(Debug, Clone)]
pub struct ScalarLoop {
    order: usize,
    coeffs: Vec<Complex64>,
}

impl ScalarLoop {
    pub fn zero(order: usize) -> Self {
        Self {
            order,
            coeffs: vec![cr(0.0); 2 * order + 1],
        }
    }

    pub fn constant(v: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.set(0, v);
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, j: i64) -> Complex64 {
        let n = self.order as i64;
        if j < -n || j > n {
            cr(0.0)
        } else {
            self.coeffs[(j + n) as usize]
        }
    }

    pub fn set(&mut self, j: i64, v: Complex64) {
        let n = self.order as i64;
        assert!(j >= -n && j <= n, "index {j} outside window [-{n}, {n}]");
        self.coeffs[(j + n) as usize] = v;
    }

    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        assert!(lambda.norm() > 0.0, "scalar loop cannot be evaluated at 0");
        let n = self.order as i64;
        // Horner on λ^{j+n}, then shift by λ^{-n}.
        let mut acc = cr(0.0);
        for j in (0..self.coeffs.len()).rev() {
            acc = acc * lambda + self.coeffs[j];
        }
        acc * lambda.powi(-(n as i32))
    }

    pub fn mul(&self, other: &ScalarLoop, out_order: usize) -> ScalarLoop {
        let mut out = ScalarLoop::zero(out_order);
        let (na, nb, no) = (self.order as i64, other.order as i64, out_order as i64);
        for ja in -na..=na {
            let a = self.get(ja);
            if a.norm() == 0.0 {
                continue;
            }
            for jb in -nb..=nb {
                let k = ja + jb;
                if k < -no || k > no {
                    continue;
                }
                let v = out.get(k) + a * other.get(jb);
                out.set(k, v);
            }
        }
        out
    }

    pub fn sup_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Reciprocal as a Laurent series, by Newton iteration
    /// `x <- x (2 - d x)`; requires the constant term to dominate the tail.
    pub fn reciprocal(&self) -> Result<ScalarLoop> {
        let d0 = self.get(0);
        if d0.norm() < 1e-12 {
            return Err(Error::SingularLoop { min_det: d0.norm() });
        }
        let mut x = ScalarLoop::constant(cr(1.0) / d0, self.order);
        for _ in 0..12 {
            // x (2 - d x)
            let dx = self.mul(&x, self.order);
            let mut two_minus = dx.clone();
            for v in two_minus.coeffs.iter_mut() {
                *v = -*v;
            }
            let c0 = two_minus.get(0) + cr(2.0);
            two_minus.set(0, c0);
            let next = x.mul(&two_minus, self.order);
            let delta: f64 = next
                .coeffs
                .iter()
                .zip(x.coeffs.iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            x = next;
            if delta < 1e-16 {
                break;
            }
        }
        Ok(x)
    }
}

// ---------------------------------------------------------------------------
// Twisted matrix loops
// ---------------------------------------------------------------------------

/// Truncated matrix Laurent loop, optionally carrying the twisted parity
/// structure. The universal currency of the pipeline: potentials evaluated
/// at a point, solutions φ, unitary frames F, plus factors B, monodromy
/// matrices and dressings are all values of this type.
#[derive(Debug, Clone)]
pub struct TwistedLoop {
    order: usize,
    twisted: bool,
    coeffs: Vec<Mat2>,
    trunc_loss: f64,
}

impl TwistedLoop {
    pub fn zero(order: usize, twisted: bool) -> Self {
        Self {
            order,
            twisted,
            coeffs: vec![Mat2::zero(); 2 * order + 1],
            trunc_loss: 0.0,
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut l = Self::zero(order, true);
        l.set_coeff(0, Mat2::identity());
        l
    }

    /// A loop with a single term `m λ^j`.
    pub fn monomial(m: Mat2, j: i64, order: usize, twisted: bool) -> Self {
        let mut l = Self::zero(order, twisted);
        l.set_coeff(j, m);
        l
    }

    pub fn from_coeffs(terms: &[(i64, Mat2)], order: usize, twisted: bool) -> Self {
        let mut l = Self::zero(order, twisted);
        for &(j, m) in terms {
            l.set_coeff(j, l.coeff(j) + m);
        }
        l
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_twisted(&self) -> bool {
        self.twisted
    }

    pub fn trunc_loss(&self) -> f64 {
        self.trunc_loss
    }

    pub fn with_loss(mut self, loss: f64) -> Self {
        self.trunc_loss = loss;
        self
    }

    pub fn coeff(&self, j: i64) -> Mat2 {
        let n = self.order as i64;
        if j < -n || j > n {
            Mat2::zero()
        } else {
            self.coeffs[(j + n) as usize]
        }
    }

    pub fn set_coeff(&mut self, j: i64, m: Mat2) {
        let n = self.order as i64;
        assert!(j >= -n && j <= n, "index {j} outside window [-{n}, {n}]");
        self.coeffs[(j + n) as usize] = m;
    }

    /// Max entry norm over coefficients with |j| >= k.
    pub fn tail_norm(&self, k: usize) -> f64 {
        let n = self.order as i64;
        let mut t = 0.0f64;
        for j in -n..=n {
            if j.unsigned_abs() as usize >= k {
                t = t.max(self.coeff(j).norm());
            }
        }
        t
    }

    /// A loop is resolved at `tol` when the outermost window ring is below it.
    pub fn resolved(&self, tol: f64) -> bool {
        self.order == 0 || self.tail_norm(self.order - 1) < tol
    }

    pub fn sup_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(Mat2::norm).fold(0.0, f64::max)
    }

    /// Max deviation from the twisted sparsity pattern.
    pub fn parity_residual(&self) -> f64 {
        let n = self.order as i64;
        let mut r = 0.0f64;
        for j in -n..=n {
            let m = self.coeff(j);
            if j.rem_euclid(2) == 0 {
                r = r.max(m.m[0][1].norm()).max(m.m[1][0].norm());
            } else {
                r = r.max(m.m[0][0].norm()).max(m.m[1][1].norm());
            }
        }
        r
    }

    /// Zero out entries violating twisted parity and mark the loop twisted.
    pub fn enforce_parity(mut self) -> Self {
        let n = self.order as i64;
        for j in -n..=n {
            let mut m = self.coeff(j);
            if j.rem_euclid(2) == 0 {
                m.m[0][1] = cr(0.0);
                m.m[1][0] = cr(0.0);
            } else {
                m.m[0][0] = cr(0.0);
                m.m[1][1] = cr(0.0);
            }
            self.set_coeff(j, m);
        }
        self.twisted = true;
        self
    }

    /// Pad or truncate to a new window; truncation is accumulated as loss.
    pub fn resize(&self, new_order: usize) -> Self {
        let mut out = Self::zero(new_order, self.twisted);
        out.trunc_loss = self.trunc_loss;
        let n = self.order as i64;
        let no = new_order as i64;
        for j in -n..=n {
            if j < -no || j > no {
                out.trunc_loss += self.coeff(j).norm();
            } else {
                out.set_coeff(j, self.coeff(j));
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.max(other.order);
        let mut out = Self::zero(order, self.twisted && other.twisted);
        out.trunc_loss = self.trunc_loss + other.trunc_loss;
        let n = order as i64;
        for j in -n..=n {
            out.set_coeff(j, self.coeff(j) + other.coeff(j));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(cr(-1.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for m in out.coeffs.iter_mut() {
            *m = m.scale(s);
        }
        out
    }

    /// Multiply by the monomial λ^k (index shift).
    pub fn shift(&self, k: i64) -> Self {
        let mut out = Self::zero(self.order, false);
        out.trunc_loss = self.trunc_loss;
        let n = self.order as i64;
        for j in -n..=n {
            let jj = j + k;
            if jj < -n || jj > n {
                out.trunc_loss += self.coeff(j).norm();
            } else {
                out.set_coeff(jj, self.coeff(j));
            }
        }
        out.twisted = self.twisted && k % 2 == 0;
        out
    }

    /// Cauchy product restricted to the window `[-out_order, out_order]`;
    /// coefficients falling outside are added to the reported loss.
    pub fn mul_window(&self, other: &Self, out_order: usize) -> Self {
        let mut out = Self::zero(out_order, self.twisted && other.twisted);
        let (na, nb, no) = (self.order as i64, other.order as i64, out_order as i64);
        let mut loss = self.trunc_loss + other.trunc_loss;
        for ja in -na..=na {
            let a = self.coeff(ja);
            if a.norm() == 0.0 {
                continue;
            }
            for jb in -nb..=nb {
                let b = other.coeff(jb);
                if b.norm() == 0.0 {
                    continue;
                }
                let k = ja + jb;
                let prod = a * b;
                if k < -no || k > no {
                    loss += prod.norm();
                } else {
                    out.set_coeff(k, out.coeff(k) + prod);
                }
            }
        }
        out.trunc_loss = loss;
        out
    }

    /// Group multiplication; the result window is the larger of the two.
    pub fn mul(&self, other: &Self) -> Self {
        self.mul_window(other, self.order.max(other.order))
    }

    pub fn eval(&self, lambda: Complex64) -> Mat2 {
        assert!(
            lambda.norm() > 0.0,
            "loop evaluation is undefined at λ = 0"
        );
        let mut acc = Mat2::zero();
        for j in (0..self.coeffs.len()).rev() {
            acc = acc.scale(lambda) + self.coeffs[j];
        }
        acc.scale(lambda.powi(-(self.order as i32)))
    }

    /// Exact termwise derivative in λ. The window is kept; the (tiny)
    /// λ^{-N-1} term produced by the λ^{-N} coefficient is counted as loss.
    pub fn dlambda(&self) -> Self {
        let n = self.order as i64;
        let mut out = Self::zero(self.order, false);
        out.trunc_loss = self.trunc_loss;
        for j in -n..=n {
            let m = self.coeff(j).scale(cr(j as f64));
            if j - 1 < -n {
                out.trunc_loss += m.norm();
            } else {
                out.set_coeff(j - 1, m);
            }
        }
        // differentiation flips the parity pattern, so the result of a
        // twisted input is twisted only after multiplying back by λ.
        out.twisted = false;
        out
    }

    /// The involution a*(λ) = conj(a(1/λ̄))^t; coefficientwise this is
    /// (a*)_j = (a_{-j})^†. On the unit circle a*(λ) = a(λ)^†.
    pub fn star(&self) -> Self {
        let n = self.order as i64;
        let mut out = Self::zero(self.order, self.twisted);
        out.trunc_loss = self.trunc_loss;
        for j in -n..=n {
            out.set_coeff(j, self.coeff(-j).conj_transpose());
        }
        out
    }

    /// Entrywise conjugate of every coefficient. As a function this is
    /// λ ↦ conj(a(λ̄)), the object appearing in the Smyth reflection lemma.
    pub fn conj_coeffs(&self) -> Self {
        let mut out = self.clone();
        for m in out.coeffs.iter_mut() {
            *m = m.conj();
        }
        out
    }

    /// Sampled unitarity check on the circle: max of ‖a a† - I‖ and |det - 1|
    /// over `k` points (defaults to 4N+8 when `k = 0`).
    pub fn unitarity_residual(&self, k: usize) -> f64 {
        let k = if k == 0 { 4 * self.order + 8 } else { k };
        let mut r = 0.0f64;
        for p in unit_circle_points(k) {
            let a = self.eval(p.value);
            let u = a * a.conj_transpose();
            r = r.max((u - Mat2::identity()).norm());
            r = r.max((a.det() - cr(1.0)).norm());
        }
        r
    }

    pub fn is_unitary(&self, tol: f64) -> (bool, f64) {
        let r = self.unitarity_residual(0);
        (r <= tol, r)
    }

    /// Determinant as a scalar Laurent loop over the doubled window.
    pub fn det_loop(&self) -> ScalarLoop {
        let n = self.order as i64;
        let mut det = ScalarLoop::zero(2 * self.order);
        for ja in -n..=n {
            let a = self.coeff(ja);
            for jb in -n..=n {
                let b = self.coeff(jb);
                let k = ja + jb;
                let v = det.get(k) + a.m[0][0] * b.m[1][1] - a.m[0][1] * b.m[1][0];
                det.set(k, v);
            }
        }
        det
    }

    pub fn min_sampled_abs_det(&self, k: usize) -> f64 {
        let k = if k == 0 { 4 * self.order + 8 } else { k };
        unit_circle_points(k)
            .iter()
            .map(|p| self.eval(p.value).det().norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Loop inverse via the adjugate divided by the determinant series.
    pub fn inv(&self) -> Result<Self> {
        let min_det = self.min_sampled_abs_det(0);
        if min_det < 1e-12 {
            return Err(Error::SingularLoop { min_det });
        }
        let n = self.order as i64;
        let mut adj = Self::zero(self.order, self.twisted);
        for j in -n..=n {
            adj.set_coeff(j, self.coeff(j).adjugate());
        }
        let det = self.det_loop();
        let recip = det.reciprocal()?;
        // adj * recip, truncated back to the window
        let mut out = Self::zero(self.order, self.twisted);
        let nr = recip.order() as i64;
        let mut loss = self.trunc_loss;
        for ja in -n..=n {
            let a = adj.coeff(ja);
            if a.norm() == 0.0 {
                continue;
            }
            for jr in -nr..=nr {
                let s = recip.get(jr);
                if s.norm() == 0.0 {
                    continue;
                }
                let k = ja + jr;
                let prod = a.scale(s);
                if k < -n || k > n {
                    loss += prod.norm();
                } else {
                    out.set_coeff(k, out.coeff(k) + prod);
                }
            }
        }
        out.trunc_loss = loss;
        Ok(out)
    }

    /// Exponential of a loop-algebra element, by scaling and squaring with
    /// window-truncated products.
    pub fn exp(&self) -> Self {
        let bound: f64 = self.coeffs.iter().map(Mat2::norm).sum();
        let k = if bound > 0.5 {
            (bound / 0.5).log2().ceil() as u32
        } else {
            0
        };
        let scaled = self.scale(cr(1.0 / (1u64 << k) as f64));
        let mut term = Self::identity(self.order);
        term.twisted = self.twisted;
        let mut sum = term.clone();
        for m in 1..=26 {
            term = term.mul_window(&scaled, self.order).scale(cr(1.0 / m as f64));
            sum = sum.add(&term);
            if term.sup_coeff_norm() < 1e-18 {
                break;
            }
        }
        let mut out = sum;
        for _ in 0..k {
            out = out.mul_window(&out.clone(), self.order);
        }
        out
    }

    /// Shift from the twisted to the untwisted setting: on the diagonal
    /// a(λ) → a(√λ), off the diagonal with λ^{∓1/2} factors, realized as an
    /// index shift (twistedness guarantees integer exponents).
    pub fn untwist(&self) -> Self {
        assert!(self.twisted, "untwist requires a twisted loop");
        let n = self.order as i64;
        let new_order = self.order.div_ceil(2) + 1;
        let mut out = Self::zero(new_order, false);
        out.trunc_loss = self.trunc_loss;
        for j in -n..=n {
            let m = self.coeff(j);
            if j.rem_euclid(2) == 0 {
                // diagonal at even 2k -> k
                let k = j / 2;
                let mut t = out.coeff(k);
                t.m[0][0] += m.m[0][0];
                t.m[1][1] += m.m[1][1];
                out.set_coeff(k, t);
            } else {
                // top-right at odd 2k+1 -> k; bottom-left at odd 2k+1 -> k+1
                let k_tr = (j - 1).div_euclid(2);
                let k_bl = (j + 1).div_euclid(2);
                let mut t = out.coeff(k_tr);
                t.m[0][1] += m.m[0][1];
                out.set_coeff(k_tr, t);
                let mut t = out.coeff(k_bl);
                t.m[1][0] += m.m[1][0];
                out.set_coeff(k_bl, t);
            }
        }
        out
    }

    /// Inverse of [`untwist`](Self::untwist).
    pub fn retwist(&self) -> Self {
        let n = self.order as i64;
        let new_order = 2 * self.order + 1;
        let mut out = Self::zero(new_order, true);
        out.trunc_loss = self.trunc_loss;
        for k in -n..=n {
            let m = self.coeff(k);
            let mut t = out.coeff(2 * k);
            t.m[0][0] += m.m[0][0];
            t.m[1][1] += m.m[1][1];
            out.set_coeff(2 * k, t);
            let mut t = out.coeff(2 * k + 1);
            t.m[0][1] += m.m[0][1];
            out.set_coeff(2 * k + 1, t);
            let mut t = out.coeff(2 * k - 1);
            t.m[1][0] += m.m[1][0];
            out.set_coeff(2 * k - 1, t);
        }
        out
    }

    /// Max sampled ‖a(λ) - b(λ)‖ over the unit circle.
    pub fn circle_distance(&self, other: &Self, k: usize) -> f64 {
        let k = if k == 0 {
            4 * self.order.max(other.order) + 8
        } else {
            k
        };
        unit_circle_points(k)
            .iter()
            .map(|p| (self.eval(p.value) - other.eval(p.value)).norm())
            .fold(0.0, f64::max)
    }

    /// Max coefficientwise distance.
    pub fn coeff_distance(&self, other: &Self) -> f64 {
        let n = self.order.max(other.order) as i64;
        (-n..=n)
            .map(|j| (self.coeff(j) - other.coeff(j)).norm())
            .fold(0.0, f64::max)
    }
}
