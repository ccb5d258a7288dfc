//! Holomorphic potentials: representation, validation, built-in families,
//! gauging and off-diagonalization.
//!
//! A potential is `ξ = A(z, λ) dz` with `A = Σ_{j=-1..J} A_j(z) λ^j`,
//! traceless twisted coefficients. Rational coefficient functions are the
//! default (exact evaluation, textual configs); gauge outputs that are not
//! rational live behind the same evaluation trait as sampled closures.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::loopalg::{cr, Mat2, TwistedLoop};
use crate::mesh::DomainSpec;
use crate::rational::{Poly, RationalFn};

/// Loop-valued map of the base coordinate (gauges, frames of reference).
pub type LoopMap = Arc<dyn Fn(Complex64) -> TwistedLoop + Send + Sync>;

/// Pointwise evaluation of a potential's coefficient matrix `A(z, ·)`.
pub trait PotentialEval: Send + Sync {
    /// `A(z, λ)` as a small twisted loop; `ξ = A dz`.
    fn coeff_matrix(&self, z: Complex64) -> TwistedLoop;
    fn punctures(&self) -> Vec<Complex64>;
    fn domain(&self) -> DomainSpec;
}

/// 2x2 matrix of rational functions, one Laurent coefficient of ξ.
pub type RationalMat = [[RationalFn; 2]; 2];

fn zero_mat() -> RationalMat {
    [
        [RationalFn::zero(), RationalFn::zero()],
        [RationalFn::zero(), RationalFn::zero()],
    ]
}

/// Potential with rational coefficient functions.
#[derive(Debug, Clone)]
pub struct HolomorphicPotential {
    /// (j, matrix) pairs, j ≥ -1.
    pub terms: Vec<(i64, RationalMat)>,
    pub domain: DomainSpec,
}

/// Outcome of validating a potential against its structural requirements.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

impl HolomorphicPotential {
    pub fn new(terms: Vec<(i64, RationalMat)>, domain: DomainSpec) -> Self {
        Self { terms, domain }
    }

    pub fn lambda_span(&self) -> usize {
        self.terms
            .iter()
            .map(|(j, _)| j.unsigned_abs() as usize)
            .max()
            .unwrap_or(1)
            .max(1)
    }

    /// Structural checks at sampled points: tracelessness, twisted parity,
    /// and the branch-point guard (upper-right entry of the λ^{-1} term must
    /// not vanish on the domain).
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        for (j, _) in &self.terms {
            if *j < -1 {
                rep.errors.push(format!("term at λ^{j} below λ^-1"));
            }
        }
        let samples = self.domain.sample_points(64);
        for &z in &samples {
            for (j, m) in &self.terms {
                let a11 = m[0][0].eval(z);
                let a22 = m[1][1].eval(z);
                if (a11 + a22).norm() > 1e-9 * (1.0 + a11.norm() + a22.norm()) {
                    rep.errors
                        .push(format!("trace of the λ^{j} coefficient nonzero at z = {z}"));
                    break;
                }
                let (d, o) = (a11.norm() + a22.norm(), m[0][1].eval(z).norm() + m[1][0].eval(z).norm());
                let bad = if j.rem_euclid(2) == 0 { o } else { d };
                if bad > 1e-9 * (1.0 + d + o) {
                    rep.errors.push(format!(
                        "λ^{j} coefficient violates twisted parity at z = {z}"
                    ));
                    break;
                }
            }
        }
        // branch-point guard
        if let Some((_, m)) = self.terms.iter().find(|(j, _)| *j == -1) {
            for &z in &samples {
                if m[0][1].eval(z).norm() < 1e-10 {
                    rep.warnings.push(format!(
                        "branch point risk: upper-right entry of the λ^-1 term vanishes near z = {z}"
                    ));
                    break;
                }
            }
        } else {
            rep.errors.push("potential has no λ^-1 term".into());
        }
        rep
    }
}

impl PotentialEval for HolomorphicPotential {
    fn coeff_matrix(&self, z: Complex64) -> TwistedLoop {
        let span = self.lambda_span();
        let mut a = TwistedLoop::zero(span, true);
        for (j, m) in &self.terms {
            let val = Mat2::new(
                m[0][0].eval(z),
                m[0][1].eval(z),
                m[1][0].eval(z),
                m[1][1].eval(z),
            );
            a.set_coeff(*j, a.coeff(*j) + val);
        }
        a
    }

    fn punctures(&self) -> Vec<Complex64> {
        let mut p: Vec<Complex64> = Vec::new();
        for (_, m) in &self.terms {
            for row in m {
                for r in row {
                    for &q in &r.punctures {
                        if !p.iter().any(|&e| (e - q).norm() < 1e-12) {
                            p.push(q);
                        }
                    }
                }
            }
        }
        p
    }

    fn domain(&self) -> DomainSpec {
        self.domain.clone()
    }
}

/// Potential given only through a sampling closure (gauge outputs,
/// pullbacks to covering coordinates).
#[derive(Clone)]
pub struct SampledPotential {
    pub eval: Arc<dyn Fn(Complex64) -> TwistedLoop + Send + Sync>,
    pub punctures: Vec<Complex64>,
    pub domain: DomainSpec,
}

impl PotentialEval for SampledPotential {
    fn coeff_matrix(&self, z: Complex64) -> TwistedLoop {
        (self.eval)(z)
    }
    fn punctures(&self) -> Vec<Complex64> {
        self.punctures.clone()
    }
    fn domain(&self) -> DomainSpec {
        self.domain.clone()
    }
}

/// Pull a potential on the punctured z-plane back through `z = e^w`:
/// `A_w(w) = A(e^w) · e^w`. Turns log-polar meshing of annuli into plain
/// rectangle integration.
pub fn pullback_log(potential: Arc<dyn PotentialEval>, domain_w: DomainSpec) -> SampledPotential {
    SampledPotential {
        eval: Arc::new(move |w: Complex64| {
            let z = w.exp();
            potential.coeff_matrix(z).scale(z)
        }),
        punctures: vec![],
        domain: domain_w,
    }
}

// ---------------------------------------------------------------------------
// Built-in families
// ---------------------------------------------------------------------------

/// Built-in potential families with their parameters.
#[derive(Debug, Clone)]
pub enum BuiltinFamily {
    /// λ^{-1} [[0,1],[1,0]] dz on ℂ.
    Cylinder,
    /// λ^{-1} [[0,1],[0,0]] dz on ℂ.
    Sphere,
    /// D dz/z on ℂ∖{0} with D = [[r, sλ^{-1}+t̄λ],[s̄λ+tλ^{-1}, -r]].
    Delaunay { r: f64, s: Complex64, t: Complex64 },
    /// λ^{-1} [[0,1],[c z^k,0]] dz on ℂ.
    Smyth { c: Complex64, k: u32 },
}

pub fn builtin(family: &BuiltinFamily, domain: DomainSpec) -> Result<HolomorphicPotential> {
    let one = RationalFn::constant(cr(1.0));
    match family {
        BuiltinFamily::Cylinder => {
            let mut m = zero_mat();
            m[0][1] = one.clone();
            m[1][0] = one;
            Ok(HolomorphicPotential::new(vec![(-1, m)], domain))
        }
        BuiltinFamily::Sphere => {
            let mut m = zero_mat();
            m[0][1] = one;
            Ok(HolomorphicPotential::new(vec![(-1, m)], domain))
        }
        BuiltinFamily::Delaunay { r, s, t } => {
            if ((*s) * (*t)).im.abs() > 1e-12 {
                return Err(Error::BadParams {
                    family: "delaunay".into(),
                    reason: format!("s·t must be real, got {}", s * t),
                });
            }
            let over_z = |v: Complex64| {
                RationalFn::new(
                    Poly::constant(v),
                    Poly(vec![cr(0.0), cr(1.0)]),
                    vec![cr(0.0)],
                )
            };
            let mut m_m1 = zero_mat();
            m_m1[0][1] = over_z(*s);
            m_m1[1][0] = over_z(*t);
            let mut m_0 = zero_mat();
            m_0[0][0] = over_z(cr(*r));
            m_0[1][1] = over_z(cr(-*r));
            let mut m_p1 = zero_mat();
            m_p1[0][1] = over_z(t.conj());
            m_p1[1][0] = over_z(s.conj());
            Ok(HolomorphicPotential::new(
                vec![(-1, m_m1), (0, m_0), (1, m_p1)],
                domain,
            ))
        }
        BuiltinFamily::Smyth { c, k } => {
            let mut m = zero_mat();
            m[0][1] = one;
            let mut zk = vec![cr(0.0); *k as usize + 1];
            zk[*k as usize] = *c;
            m[1][0] = RationalFn::new(Poly(zk), Poly::constant(cr(1.0)), vec![]);
            Ok(HolomorphicPotential::new(vec![(-1, m)], domain))
        }
    }
}

// ---------------------------------------------------------------------------
// Gauging
// ---------------------------------------------------------------------------

/// Gauge by a constant (z- and λ-independent) invertible matrix `g`:
/// `ξ → g^{-1} ξ g`, exact on rational data.
pub fn gauge_by_constant_matrix(
    xi: &HolomorphicPotential,
    g: Mat2,
) -> Result<HolomorphicPotential> {
    let ginv = g
        .inv()
        .map_err(|_| Error::NotPlusLoop { reason: "gauge matrix is singular".into() })?;
    let conj_rat = |m: &RationalMat| -> RationalMat {
        let mut out = zero_mat();
        for r in 0..2 {
            for c_ in 0..2 {
                // (g^{-1} M g)[r][c] = Σ_{i,j} ginv[r][i] M[i][j] g[j][c]
                // combined over the product of the participating denominators
                let mut parts: Vec<(Complex64, RationalFn)> = Vec::new();
                for i in 0..2 {
                    for j in 0..2 {
                        let w = ginv.m[r][i] * g.m[j][c_];
                        if w.norm() > 0.0 && !m[i][j].is_zero() {
                            parts.push((w, m[i][j].clone()));
                        }
                    }
                }
                if parts.is_empty() {
                    continue;
                }
                let mut den = Poly::constant(cr(1.0));
                for (_, rf) in &parts {
                    den = crate::rational::poly_mul(&den, &rf.den);
                }
                let mut num = Poly::zero();
                for (idx, (w, rf)) in parts.iter().enumerate() {
                    let mut term = rf.num.clone();
                    for (idx2, (_, rf2)) in parts.iter().enumerate() {
                        if idx2 != idx {
                            term = crate::rational::poly_mul(&term, &rf2.den);
                        }
                    }
                    let scaled = Poly(term.0.iter().map(|&t| t * *w).collect());
                    num = crate::rational::poly_sub(&num, &Poly(scaled.0.iter().map(|&t| -t).collect()));
                }
                let punct: Vec<Complex64> = parts
                    .iter()
                    .flat_map(|(_, rf)| rf.punctures.clone())
                    .collect();
                out[r][c_] = RationalFn::new(num, den, punct);
            }
        }
        out
    };
    Ok(HolomorphicPotential::new(
        xi.terms.iter().map(|(j, m)| (*j, conj_rat(m))).collect(),
        xi.domain.clone(),
    ))
}

/// General gauge `ξ → p₊^{-1} ξ p₊ + p₊^{-1} dp₊` with a plus-loop-valued
/// map `p₊(z)` and its z-derivative supplied as closures; the result is a
/// sampled potential.
pub fn gauge(
    xi: Arc<dyn PotentialEval>,
    p_plus: LoopMap,
    dp_plus: LoopMap,
) -> Result<SampledPotential> {
    // plus-loop sanity at one probe point of the domain
    let probe = xi.domain().sample_points(1)[0];
    let p0 = p_plus(probe);
    let neg = (1..=p0.order() as i64)
        .map(|j| p0.coeff(-j).norm())
        .fold(0.0, f64::max);
    if neg > 1e-12 {
        return Err(Error::NotPlusLoop {
            reason: format!("negative λ-modes of size {neg:.3e} at z = {probe}"),
        });
    }
    let punctures = xi.punctures();
    let domain = xi.domain();
    Ok(SampledPotential {
        eval: Arc::new(move |z| {
            let p = p_plus(z);
            let dp = dp_plus(z);
            let pinv = crate::factor::plus_loop_inverse(&p).expect("gauge loop must be invertible");
            let order = p.order().max(xi.coeff_matrix(z).order());
            let a = xi.coeff_matrix(z);
            pinv.mul_window(&a, order)
                .mul_window(&p, order)
                .add(&pinv.mul_window(&dp, order))
        }),
        punctures,
        domain,
    })
}

/// Gauss-Legendre 16-point nodes/weights on [-1, 1].
const GL_NODES: [f64; 8] = [
    0.09501250983763744,
    0.2816035507792589,
    0.45801677765722737,
    0.6178762444026438,
    0.755404408355003,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];
const GL_WEIGHTS: [f64; 8] = [
    0.189450610455069,
    0.18260341504492358,
    0.16915651939500254,
    0.14959598881657674,
    0.12462897125553388,
    0.09515851168249279,
    0.062253523938647894,
    0.027152459411754096,
];

/// ∫ f over the straight segment [a, b] by composite 16-point Gauss-Legendre
/// with panel doubling until two refinements agree.
pub fn segment_quadrature<F>(a: Complex64, b: Complex64, tol: f64, f: F) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let eval_panels = |panels: usize| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            let t0 = p as f64 / panels as f64;
            let t1 = (p + 1) as f64 / panels as f64;
            let za = a + (b - a) * cr(t0);
            let zb = a + (b - a) * cr(t1);
            let mid = (za + zb) * cr(0.5);
            let half = (zb - za) * cr(0.5);
            for i in 0..8 {
                let (x, w) = (GL_NODES[i], GL_WEIGHTS[i]);
                acc += (f(mid + half * cr(x)) + f(mid - half * cr(x))) * half * cr(w);
            }
        }
        acc
    };
    let mut panels = 1;
    let mut prev = eval_panels(panels);
    for _ in 0..10 {
        panels *= 2;
        let next = eval_panels(panels);
        if (next - prev).norm() < tol * (1.0 + next.norm()) {
            return next;
        }
        prev = next;
    }
    prev
}

/// Remove the diagonal λ-part of a potential by the gauge solving
/// `dp₊ = p₊ A_diag dz`, `p₊(z_*) = I`. Because A_diag is diagonal the
/// solution is the exponential of the path integral, so `p₊` is exact up to
/// quadrature error. Returns the gauged (sampled) potential and the gauge.
pub fn off_diagonalize(
    xi: Arc<dyn PotentialEval>,
    z_star: Complex64,
) -> Result<(SampledPotential, LoopMap)> {
    let span = xi.coeff_matrix(z_star).order();
    let xi_for_gauge = xi.clone();
    // g(z) = ∫ A_11(z') dz' coefficientwise (a scalar plus-loop, even powers)
    let integral_coeffs = move |z: Complex64| -> Vec<Complex64> {
        (0..=span as i64)
            .map(|j| {
                if j.rem_euclid(2) == 1 {
                    Complex64::new(0.0, 0.0)
                } else {
                    segment_quadrature(z_star, z, 1e-12, |w| {
                        xi_for_gauge.coeff_matrix(w).coeff(j).m[0][0]
                    })
                }
            })
            .collect()
    };
    let p_fn = {
        let integral = integral_coeffs.clone();
        move |z: Complex64| -> TwistedLoop {
            let coeffs = integral(z);
            let mut x = TwistedLoop::zero(span, true);
            for (j, &v) in coeffs.iter().enumerate() {
                x.set_coeff(j as i64, Mat2::diag(v, -v));
            }
            x.exp()
        }
    };
    let p_arc: LoopMap = Arc::new(p_fn);
    let xi2 = xi.clone();
    let p_for_out = p_arc.clone();
    let punctures = xi.punctures();
    let domain = xi.domain();
    let gauged = SampledPotential {
        eval: Arc::new(move |z| {
            let a = xi2.coeff_matrix(z);
            let order = a.order();
            // strip the diagonal part, conjugate the off-diagonal part
            let mut a_off = TwistedLoop::zero(order, true);
            for j in -(order as i64)..=order as i64 {
                let m = a.coeff(j);
                a_off.set_coeff(
                    j,
                    Mat2::new(cr(0.0), m.m[0][1], m.m[1][0], cr(0.0)),
                );
            }
            let p = p_for_out(z);
            let pinv = crate::factor::plus_loop_inverse(&p).expect("diagonal gauge is invertible");
            p.mul_window(&a_off, order).mul_window(&pinv, order)
        }),
        punctures,
        domain,
    };
    Ok((gauged, p_arc))
}

/// Sample points of the unit circle in z (used by validation of Delaunay-
/// type domains).
pub fn circle_samples(k: usize) -> Vec<Complex64> {
    (0..k)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / k as f64))
        .collect()
}
