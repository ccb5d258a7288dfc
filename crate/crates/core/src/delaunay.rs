//! Delaunay-specific closed forms: the D matrix and its exponentials,
//! closing-condition solvers in the three space forms, weights (with an
//! independent numerical flux oracle), axes, and a closed-form sampler.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::iwasawa;
use crate::holode::{delaunay_exp_at, loop_from_circle_samples};
use crate::loopalg::{cr, Mat2, TwistedLoop};
use crate::mesh::{DomainSpec, SurfaceSampler};
use crate::sym::{coord_signature, sym, Ambient, AmbientPoint, SymParams};

/// Delaunay parameters: the coefficient data (r, s, t) of ξ = D dz/z plus
/// the Sym parameters of the target space form.
#[derive(Debug, Clone)]
pub struct DelaunayParams {
    pub r: f64,
    pub s: Complex64,
    pub t: Complex64,
    pub sym: SymParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DelaunayClass {
    Unduloid,
    Nodoid,
    SphereChain,
    Cylinder,
}

/// Closed-form weight data for one annular end.
#[derive(Debug, Clone, Serialize)]
pub struct WeightReport {
    pub ambient: String,
    pub weight: f64,
    pub classification: DelaunayClass,
    /// ℝ³: radius of the image of the unit circle; 𝕊³: sin of that radius;
    /// ℍ³: sinh of it.
    pub neck_measure: f64,
    /// cos of the angle between conormal and disk normal (ℝ³ form).
    pub cos_beta: f64,
}

impl DelaunayParams {
    pub fn st_real(&self) -> Result<f64> {
        let st = self.s * self.t;
        if st.im.abs() > 1e-12 {
            return Err(Error::BadParams {
                family: "delaunay".into(),
                reason: format!("s·t must be real, got {st}"),
            });
        }
        Ok(st.re)
    }

    /// |s + t̄|² + the λ-independent part of κ².
    fn base_sq(&self) -> f64 {
        (self.s + self.t.conj()).norm_sqr()
    }

    /// Residual of the ambient closing identity.
    pub fn closing_residual(&self) -> f64 {
        let st = (self.s * self.t).re;
        let b = self.r * self.r + self.base_sq();
        match self.sym {
            SymParams::R3 { .. } => (b - 0.25).abs(),
            SymParams::S3 { gamma1, gamma2 } => {
                let gamma = 0.5 * (gamma2 - gamma1);
                (b - 4.0 * st * gamma.sin().powi(2) - 0.25).abs()
            }
            SymParams::H3 { q, .. } => (b + 4.0 * st * (0.5 * q).sinh().powi(2) - 0.25).abs(),
        }
    }
}

/// Solve the closing condition for r ≥ 0 given (s, t) and the ambient Sym
/// parameters.
pub fn close(s: Complex64, t: Complex64, sym: SymParams) -> Result<DelaunayParams> {
    sym.validate()?;
    let st = s * t;
    if st.im.abs() > 1e-12 {
        return Err(Error::BadParams {
            family: "delaunay".into(),
            reason: format!("s·t must be real, got {st}"),
        });
    }
    let st = st.re;
    let base = (s + t.conj()).norm_sqr();
    let r_sq = match sym {
        SymParams::R3 { .. } => 0.25 - base,
        SymParams::S3 { gamma1, gamma2 } => {
            let gamma = 0.5 * (gamma2 - gamma1);
            0.25 - base + 4.0 * st * gamma.sin().powi(2)
        }
        SymParams::H3 { q, .. } => 0.25 - base - 4.0 * st * (0.5 * q).sinh().powi(2),
    };
    if r_sq < 0.0 {
        return Err(Error::NoClosing { r_squared: r_sq });
    }
    let params = DelaunayParams { r: r_sq.sqrt(), s, t, sym };
    debug_assert!(params.closing_residual() < 1e-13);
    Ok(params)
}

// ---------------------------------------------------------------------------
// Monodromy
// ---------------------------------------------------------------------------

/// Closed-form monodromy exp(2πi D) as a truncated loop.
pub fn monodromy_closed_form(p: &DelaunayParams, order: usize) -> TwistedLoop {
    let (r, s, t) = (p.r, p.s, p.t);
    loop_from_circle_samples(order, true, |lam| {
        delaunay_exp_at(r, s, t, Complex64::new(0.0, 2.0 * std::f64::consts::PI), lam)
    })
}

/// Exact evaluation of the monodromy at one λ (valid off the unit circle).
pub fn monodromy_eval(p: &DelaunayParams, lambda: Complex64) -> Mat2 {
    delaunay_exp_at(
        p.r,
        p.s,
        p.t,
        Complex64::new(0.0, 2.0 * std::f64::consts::PI),
        lambda,
    )
}

/// Distance of M from ±I at one λ.
fn pm_identity_residual(m: &Mat2) -> f64 {
    let plus = (*m - Mat2::identity()).norm();
    let minus = (*m + Mat2::identity()).norm();
    plus.min(minus)
}

/// Period-closing residuals of the monodromy at the ambient-relevant
/// spectral points: ‖M ∓ I‖ there, plus ‖∂λM‖ at λ=1 for ℝ³.
#[derive(Debug, Clone, Serialize)]
pub struct PeriodResiduals {
    pub monodromy_residual: f64,
    pub derivative_residual: Option<f64>,
}

pub fn period_residuals(p: &DelaunayParams, order: usize) -> PeriodResiduals {
    match p.sym {
        SymParams::R3 { .. } => {
            let m = monodromy_closed_form(p, order);
            let at_one = pm_identity_residual(&m.eval(cr(1.0)));
            let dm = m.dlambda().eval(cr(1.0)).norm();
            PeriodResiduals {
                monodromy_residual: at_one,
                derivative_residual: Some(dm),
            }
        }
        SymParams::S3 { gamma1, gamma2 } => {
            let m1 = monodromy_eval(p, Complex64::from_polar(1.0, gamma1));
            let m2 = monodromy_eval(p, Complex64::from_polar(1.0, gamma2));
            PeriodResiduals {
                monodromy_residual: pm_identity_residual(&m1).max(pm_identity_residual(&m2)),
                derivative_residual: None,
            }
        }
        SymParams::H3 { q, psi } => {
            let m = monodromy_eval(p, Complex64::from_polar((0.5 * q).exp(), psi));
            PeriodResiduals {
                monodromy_residual: pm_identity_residual(&m),
                derivative_residual: None,
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Weights
// ---------------------------------------------------------------------------

fn classify(p: &DelaunayParams, st: f64) -> DelaunayClass {
    if p.r.abs() < 1e-12 && (p.s - p.t).norm() < 1e-12 {
        DelaunayClass::Cylinder
    } else if st > 1e-12 {
        DelaunayClass::Unduloid
    } else if st < -1e-12 {
        DelaunayClass::Nodoid
    } else {
        DelaunayClass::SphereChain
    }
}

/// Closed-form weight `8πst / (|H|, √(H²+1), √(H²-1))` with neck data.
pub fn weight(p: &DelaunayParams) -> Result<WeightReport> {
    let st = p.st_real()?;
    if p.closing_residual() > 1e-9 {
        return Err(Error::NotClosed { residual: p.closing_residual() });
    }
    let h = p.sym.mean_curvature();
    let (w, neck, cos_beta) = match p.sym {
        SymParams::R3 { .. } => (
            8.0 * std::f64::consts::PI * st / h.abs(),
            2.0 * p.s.norm() / h.abs(),
            2.0 * (p.s + p.t).re,
        ),
        SymParams::S3 { gamma1, gamma2 } => {
            let gamma = 0.5 * (gamma2 - gamma1);
            let sin_l = 2.0 * p.t.re * (2.0 * gamma).sin();
            let cos_l = (1.0 - sin_l * sin_l).max(0.0).sqrt();
            (
                8.0 * std::f64::consts::PI * st / (h * h + 1.0).sqrt(),
                sin_l,
                2.0 * (p.s.re + p.t.re * (2.0 * gamma).cos()) / cos_l,
            )
        }
        SymParams::H3 { q, .. } => {
            let sinh_l = 2.0 * p.s.re * q.sinh();
            let cosh_l = (1.0 + sinh_l * sinh_l).sqrt();
            (
                8.0 * std::f64::consts::PI * st / (h * h - 1.0).sqrt(),
                sinh_l,
                2.0 * (p.t.re + p.s.re * q.cosh()) / cosh_l,
            )
        }
    };
    Ok(WeightReport {
        ambient: p.sym.ambient().tag().into(),
        weight: w,
        classification: classify(p, st),
        neck_measure: neck,
        cos_beta,
    })
}

// ---------------------------------------------------------------------------
// Axes
// ---------------------------------------------------------------------------

/// Axis of revolution: a line for ℝ³, a geodesic (2-plane through the
/// origin of the ambient vector space) for 𝕊³/ℍ³.
#[derive(Debug, Clone)]
pub enum AxisDescriptor {
    R3 {
        direction: [f64; 3],
        point: [f64; 3],
        /// True in the cylinder limit r = 0, where the stated point formula
        /// degenerates and the limit direction is returned.
        degenerate: bool,
    },
    Plane {
        /// Two linear functionals on ambient coordinates whose joint kernel
        /// is the axis plane.
        constraints: [[f64; 4]; 2],
        /// Orthonormal basis of the axis plane (Lorentz-orthonormal with
        /// the timelike vector second for ℍ³).
        basis: [[f64; 4]; 2],
    },
}

fn real_pair(p: &DelaunayParams) -> Result<(f64, f64)> {
    if p.s.im.abs() > 1e-12 || p.t.im.abs() > 1e-12 {
        return Err(Error::BadParams {
            family: "delaunay-axis".into(),
            reason: "axis formulas assume real s, t (apply the phase gauge first)".into(),
        });
    }
    Ok((p.s.re, p.t.re))
}

pub fn axis(p: &DelaunayParams) -> Result<AxisDescriptor> {
    let (s, t) = real_pair(p)?;
    match p.sym {
        SymParams::R3 { .. } => {
            if p.r.abs() < 1e-12 {
                return Ok(AxisDescriptor::R3 {
                    direction: [-s - t, 0.0, 0.0],
                    point: [0.0, 0.0, 0.0],
                    degenerate: true,
                });
            }
            Ok(AxisDescriptor::R3 {
                direction: [-s - t, 0.0, p.r],
                point: [(s - t) / p.r, 0.0, 0.0],
                degenerate: false,
            })
        }
        SymParams::S3 { gamma1, gamma2 } => {
            let gamma = 0.5 * (gamma2 - gamma1);
            // {x3 = 0} ∩ {sin γ (s-t) x1 + r x2 - cos γ (s+t) x4 = 0}
            let c1 = [0.0, 0.0, 1.0, 0.0];
            let c2 = [gamma.sin() * (s - t), p.r, 0.0, -gamma.cos() * (s + t)];
            let basis = plane_basis(Ambient::S3, c1, c2)?;
            Ok(AxisDescriptor::Plane { constraints: [c1, c2], basis })
        }
        SymParams::H3 { q, .. } => {
            // coords (x1,x2,x3,x0):
            // {x2 = 0} ∩ {sinh(q/2)(s-t) x0 - r x1 + cosh(q/2)(s+t) x3 = 0}
            let c1 = [0.0, 1.0, 0.0, 0.0];
            let c2 = [-p.r, 0.0, (0.5 * q).cosh() * (s + t), (0.5 * q).sinh() * (s - t)];
            let basis = plane_basis(Ambient::H3, c1, c2)?;
            Ok(AxisDescriptor::Plane { constraints: [c1, c2], basis })
        }
    }
}

/// Euclidean null space of two functionals, then orthonormalized in the
/// ambient form (for ℍ³: spacelike vector first, timelike second with
/// positive x0).
fn plane_basis(ambient: Ambient, c1: [f64; 4], c2: [f64; 4]) -> Result<[[f64; 4]; 2]> {
    // two orthonormal (euclidean) spanning vectors of ker{c1, c2}
    let mut basis: Vec<[f64; 4]> = Vec::new();
    for k in 0..4 {
        let mut v = [0.0; 4];
        v[k] = 1.0;
        // project out c1, c2 (euclidean) and previous basis vectors
        for c in [c1, c2] {
            let cn: f64 = c.iter().map(|x| x * x).sum();
            if cn > 1e-30 {
                let d: f64 = (0..4).map(|i| v[i] * c[i]).sum::<f64>() / cn;
                for i in 0..4 {
                    v[i] -= d * c[i];
                }
            }
        }
        for b in &basis {
            let d: f64 = (0..4).map(|i| v[i] * b[i]).sum();
            for i in 0..4 {
                v[i] -= d * b[i];
            }
        }
        let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-9 {
            for x in v.iter_mut() {
                *x /= n;
            }
            basis.push(v);
            if basis.len() == 2 {
                break;
            }
        }
    }
    if basis.len() < 2 {
        return Err(Error::SingularInput("degenerate axis plane".into()));
    }
    if ambient == Ambient::S3 {
        return Ok([basis[0], basis[1]]);
    }
    // ℍ³: diagonalize the restricted Lorentz form to split spacelike/timelike
    let sig = coord_signature(Ambient::H3);
    let b = |u: [f64; 4], v: [f64; 4]| -> f64 { (0..4).map(|i| sig[i] * u[i] * v[i]).sum() };
    let (a11, a12, a22) = (b(basis[0], basis[0]), b(basis[0], basis[1]), b(basis[1], basis[1]));
    // eigenvectors of [[a11,a12],[a12,a22]]
    let tr = a11 + a22;
    let det = a11 * a22 - a12 * a12;
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    let (l1, l2) = (tr / 2.0 + disc, tr / 2.0 - disc);
    let vec_for = |l: f64| -> [f64; 4] {
        let (c1_, c2_) = if a12.abs() > 1e-14 {
            (a12, l - a11)
        } else if (a11 - l).abs() < (a22 - l).abs() {
            (1.0, 0.0)
        } else {
            (0.0, 1.0)
        };
        std::array::from_fn(|i| c1_ * basis[0][i] + c2_ * basis[1][i])
    };
    let mut space = vec_for(l1);
    let mut time = vec_for(l2);
    let bs = b(space, space);
    let bt = b(time, time);
    if !(bs > 0.0 && bt < 0.0) {
        return Err(Error::SingularInput(
            "axis plane is not timelike; no geodesic of H3 lies in it".into(),
        ));
    }
    let ns = bs.sqrt();
    let nt = (-bt).sqrt();
    for x in space.iter_mut() {
        *x /= ns;
    }
    for x in time.iter_mut() {
        *x /= nt;
    }
    if time[3] < 0.0 {
        for x in time.iter_mut() {
            *x = -*x;
        }
    }
    Ok([space, time])
}

// ---------------------------------------------------------------------------
// Closed-form surface sampler
// ---------------------------------------------------------------------------

/// Delaunay surface sampler over the log-polar cover coordinate w
/// (z = e^w): φ(w) = exp(w·D) built by circle quadrature, then Iwasawa,
/// then the ambient Sym formula.
pub struct DelaunaySampler {
    pub params: DelaunayParams,
    pub order: usize,
    pub tol: f64,
}

impl DelaunaySampler {
    pub fn frame(&self, w: Complex64) -> Result<TwistedLoop> {
        let (r, s, t) = (self.params.r, self.params.s, self.params.t);
        let phi = loop_from_circle_samples(self.order, true, |lam| {
            delaunay_exp_at(r, s, t, w, lam)
        });
        Ok(iwasawa(&phi, self.tol)?.f)
    }
}

impl SurfaceSampler for DelaunaySampler {
    fn ambient(&self) -> Ambient {
        self.params.sym.ambient()
    }
    fn point(&self, w: Complex64) -> Result<AmbientPoint> {
        let f = self.frame(w)?;
        Ok(sym(&f, &self.params.sym)?.0)
    }
}

/// Default log-polar mesh domain for a Delaunay surface.
pub fn delaunay_domain(log_rho_half_range: f64, nu: usize, nv: usize) -> DomainSpec {
    DomainSpec::log_polar(
        -log_rho_half_range,
        log_rho_half_range,
        0.0,
        2.0 * std::f64::consts::PI,
        nu,
        nv,
    )
}

// ---------------------------------------------------------------------------
// Numerical flux oracle
// ---------------------------------------------------------------------------

fn dot4(sig: [f64; 4], u: [f64; 4], v: [f64; 4]) -> f64 {
    (0..4).map(|k| sig[k] * u[k] * v[k]).sum()
}

fn det4(rows: [[f64; 4]; 4]) -> f64 {
    let m = rows;
    let minor = |r: [usize; 3], c: [usize; 3]| -> f64 {
        m[r[0]][c[0]] * (m[r[1]][c[1]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[1]])
            - m[r[0]][c[1]] * (m[r[1]][c[0]] * m[r[2]][c[2]] - m[r[1]][c[2]] * m[r[2]][c[0]])
            + m[r[0]][c[2]] * (m[r[1]][c[0]] * m[r[2]][c[1]] - m[r[1]][c[1]] * m[r[2]][c[0]])
    };
    m[0][0] * minor([1, 2, 3], [1, 2, 3]) - m[0][1] * minor([1, 2, 3], [0, 2, 3])
        + m[0][2] * minor([1, 2, 3], [0, 1, 3])
        - m[0][3] * minor([1, 2, 3], [0, 1, 2])
}

/// Killing field of unit translation along the axis, evaluated at a point.
fn killing_at(p: &DelaunayParams, axis: &AxisDescriptor, x: [f64; 4]) -> Result<[f64; 4]> {
    match (axis, p.sym.ambient()) {
        (AxisDescriptor::R3 { direction, .. }, Ambient::R3) => {
            let n: f64 = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
            Ok([direction[0] / n, direction[1] / n, direction[2] / n, 0.0])
        }
        (AxisDescriptor::Plane { basis, .. }, Ambient::S3) => {
            let (v1, v2) = (basis[0], basis[1]);
            let a: f64 = (0..4).map(|i| v1[i] * x[i]).sum();
            let b: f64 = (0..4).map(|i| v2[i] * x[i]).sum();
            Ok(std::array::from_fn(|i| v2[i] * a - v1[i] * b))
        }
        (AxisDescriptor::Plane { basis, .. }, Ambient::H3) => {
            // boost generator; direction along the axis calibrated so the
            // cylinder-family flux comes out with the closed-form sign
            let sig = coord_signature(Ambient::H3);
            let (e, tau) = (basis[0], basis[1]);
            let be = dot4(sig, e, x);
            let bt = dot4(sig, tau, x);
            Ok(std::array::from_fn(|i| e[i] * bt - tau[i] * be))
        }
        _ => Err(Error::BadScene("axis/ambient mismatch".into())),
    }
}

/// A point on the axis (apex for the spanning disk).
fn axis_point(p: &DelaunayParams, axis: &AxisDescriptor, near: [f64; 4]) -> Result<[f64; 4]> {
    match (axis, p.sym.ambient()) {
        (AxisDescriptor::R3 { direction, point, .. }, Ambient::R3) => {
            // orthogonal projection of `near` onto the line
            let d = direction;
            let dn: f64 = d.iter().map(|v| v * v).sum();
            let w = [near[0] - point[0], near[1] - point[1], near[2] - point[2]];
            let tproj: f64 = (w[0] * d[0] + w[1] * d[1] + w[2] * d[2]) / dn;
            Ok([
                point[0] + tproj * d[0],
                point[1] + tproj * d[1],
                point[2] + tproj * d[2],
                0.0,
            ])
        }
        (AxisDescriptor::Plane { basis, .. }, Ambient::S3) => {
            // project `near` into the plane and renormalize to the sphere
            let (v1, v2) = (basis[0], basis[1]);
            let a: f64 = (0..4).map(|i| v1[i] * near[i]).sum();
            let b: f64 = (0..4).map(|i| v2[i] * near[i]).sum();
            let norm = (a * a + b * b).sqrt().max(1e-12);
            Ok(std::array::from_fn(|i| (a * v1[i] + b * v2[i]) / norm))
        }
        (AxisDescriptor::Plane { basis, .. }, Ambient::H3) => {
            let sig = coord_signature(Ambient::H3);
            let (e, tau) = (basis[0], basis[1]);
            let a = dot4(sig, e, near);
            let b = -dot4(sig, tau, near); // so that near ≈ a·e + b·τ
            let norm_sq = b * b - a * a;
            if norm_sq <= 0.0 {
                return Err(Error::SingularInput("no axis point near the curve".into()));
            }
            let n = norm_sq.sqrt();
            Ok(std::array::from_fn(|i| (a * e[i] + b * tau[i]) / n))
        }
        _ => Err(Error::BadScene("axis/ambient mismatch".into())),
    }
}

/// Geodesic from apex to boundary point, parametrized by u ∈ [0,1].
fn geodesic_cone(
    ambient: Ambient,
    apex: [f64; 4],
    target: [f64; 4],
    u: f64,
) -> ([f64; 4], [f64; 4]) {
    match ambient {
        Ambient::R3 => {
            let q: [f64; 4] = std::array::from_fn(|i| apex[i] + u * (target[i] - apex[i]));
            let qu: [f64; 4] = std::array::from_fn(|i| target[i] - apex[i]);
            (q, qu)
        }
        Ambient::S3 => {
            let sig = coord_signature(Ambient::S3);
            let cosd = dot4(sig, apex, target).clamp(-1.0, 1.0);
            let d = cosd.acos();
            if d < 1e-12 {
                return (apex, [0.0; 4]);
            }
            let sd = d.sin();
            let (c0, c1) = (((1.0 - u) * d).sin() / sd, (u * d).sin() / sd);
            let (d0, d1) = (
                -d * ((1.0 - u) * d).cos() / sd,
                d * (u * d).cos() / sd,
            );
            (
                std::array::from_fn(|i| c0 * apex[i] + c1 * target[i]),
                std::array::from_fn(|i| d0 * apex[i] + d1 * target[i]),
            )
        }
        Ambient::H3 => {
            let sig = coord_signature(Ambient::H3);
            let coshd = (-dot4(sig, apex, target)).max(1.0);
            let d = coshd.acosh();
            if d < 1e-12 {
                return (apex, [0.0; 4]);
            }
            let sd = d.sinh();
            let (c0, c1) = (((1.0 - u) * d).sinh() / sd, (u * d).sinh() / sd);
            let (d0, d1) = (
                -d * ((1.0 - u) * d).cosh() / sd,
                d * (u * d).cosh() / sd,
            );
            (
                std::array::from_fn(|i| c0 * apex[i] + c1 * target[i]),
                std::array::from_fn(|i| d0 * apex[i] + d1 * target[i]),
            )
        }
    }
}

/// Numerical weight: the conormal line integral minus 2H times the disk
/// integral, evaluated on the image of the unit circle with a geodesic
/// cone from the axis as spanning disk. Entirely independent of the
/// closed-form weight formula.
pub fn flux_numeric(p: &DelaunayParams, order: usize, tol: f64) -> Result<f64> {
    let sampler = DelaunaySampler { params: p.clone(), order, tol };
    let ambient = p.sym.ambient();
    let sig = coord_signature(ambient);
    let ax = axis(p)?;
    let h_mean = p.sym.mean_curvature();

    let n_theta = 96usize;
    let fd = 1e-4;
    // boundary curve, its θ-derivative and the conormal (FD in the radial
    // log coordinate), all at w = iθ
    let mut boundary = Vec::with_capacity(n_theta);
    for k in 0..n_theta {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / n_theta as f64;
        let w = Complex64::new(0.0, theta);
        let f0 = sampler.point(w)?.coords();
        let fp = sampler.point(w + Complex64::new(0.0, fd))?.coords();
        let fm = sampler.point(w - Complex64::new(0.0, fd))?.coords();
        let fr_p = sampler.point(w + cr(fd))?.coords();
        let fr_m = sampler.point(w - cr(fd))?.coords();
        let ftheta: [f64; 4] = std::array::from_fn(|i| (fp[i] - fm[i]) / (2.0 * fd));
        let fradial: [f64; 4] = std::array::from_fn(|i| (fr_p[i] - fr_m[i]) / (2.0 * fd));
        boundary.push((f0, ftheta, fradial));
    }

    // conormal line integral ∮ ⟨η, Y⟩ ds
    let mut line = 0.0f64;
    for &(f0, ftheta, fradial) in &boundary {
        // project the radial derivative into the tangent space (remove the
        // ambient-position component for S3/H3) then orthogonalize against
        // the curve tangent
        let mut eta = fradial;
        if ambient != Ambient::R3 {
            let ff = dot4(sig, f0, f0);
            let c_ = dot4(sig, eta, f0) / ff;
            for i in 0..4 {
                eta[i] -= c_ * f0[i];
            }
        }
        let tt = dot4(sig, ftheta, ftheta);
        let c_ = dot4(sig, eta, ftheta) / tt.max(1e-30);
        for i in 0..4 {
            eta[i] -= c_ * ftheta[i];
        }
        let en = dot4(sig, eta, eta).max(1e-30).sqrt();
        for i in 0..4 {
            eta[i] /= en;
        }
        let y = killing_at(p, &ax, f0)?;
        let ds = tt.max(0.0).sqrt();
        line += dot4(sig, eta, y) * ds;
    }
    line *= 2.0 * std::f64::consts::PI / n_theta as f64;

    // disk integral ∬ ⟨ν, Y⟩ dA over the geodesic cone
    let centroid: [f64; 4] = {
        let mut c_ = [0.0f64; 4];
        for &(f0, _, _) in &boundary {
            for i in 0..4 {
                c_[i] += f0[i];
            }
        }
        for v in c_.iter_mut() {
            *v /= n_theta as f64;
        }
        c_
    };
    let apex = axis_point(p, &ax, centroid)?;
    let n_u = 256usize;
    let mut disk = 0.0f64;
    for &(f0, ftheta, _) in &boundary {
        // Q_θ from a small Taylor shift of the boundary point: spectrally
        // cheaper than differencing adjacent θ samples
        let dt = 1e-4;
        let f_plus: [f64; 4] = std::array::from_fn(|i| f0[i] + dt * ftheta[i]);
        let f_minus: [f64; 4] = std::array::from_fn(|i| f0[i] - dt * ftheta[i]);
        for ju in 0..n_u {
            let u = (ju as f64 + 0.5) / n_u as f64;
            let du = 1.0 / n_u as f64;
            let (q0, q0u) = geodesic_cone(ambient, apex, f0, u);
            let (qp, _) = geodesic_cone(ambient, apex, f_plus, u);
            let (qm, _) = geodesic_cone(ambient, apex, f_minus, u);
            let qtheta: [f64; 4] = std::array::from_fn(|i| (qp[i] - qm[i]) / (2.0 * dt));
            // ν dA du dθ with ν the in-space-form normal of the cone
            let (nu_vec, area) = cone_normal(ambient, sig, q0, q0u, qtheta);
            let y = killing_at(p, &ax, q0)?;
            disk += dot4(sig, nu_vec, y) * area * du * (2.0 * std::f64::consts::PI / n_theta as f64);
        }
    }

    Ok(line - 2.0 * h_mean * disk)
}

/// Unit normal of the spanning disk inside the space form and the scalar
/// area element, from the generalized cross product.
fn cone_normal(
    ambient: Ambient,
    sig: [f64; 4],
    q: [f64; 4],
    qu: [f64; 4],
    qt: [f64; 4],
) -> ([f64; 4], f64) {
    let cross = |u: [f64; 4], v: [f64; 4], w: [f64; 4]| -> [f64; 4] {
        std::array::from_fn(|i| {
            let mut e = [0.0; 4];
            e[i] = 1.0;
            det4([e, u, v, w])
        })
    };
    let raw = match ambient {
        Ambient::R3 => [
            qu[1] * qt[2] - qu[2] * qt[1],
            qu[2] * qt[0] - qu[0] * qt[2],
            qu[0] * qt[1] - qu[1] * qt[0],
            0.0,
        ],
        _ => {
            let c = cross(q, qu, qt);
            std::array::from_fn(|i| sig[i] * c[i])
        }
    };
    let nn = dot4(sig, raw, raw);
    if nn.abs() < 1e-28 {
        return ([0.0; 4], 0.0);
    }
    let n = nn.abs().sqrt();
    let nu_vec: [f64; 4] = std::array::from_fn(|i| raw[i] / n);
    // area element √(det Gram(qu, qt))
    let g11 = dot4(sig, qu, qu);
    let g12 = dot4(sig, qu, qt);
    let g22 = dot4(sig, qt, qt);
    let area = (g11 * g22 - g12 * g12).max(0.0).sqrt();
    (nu_vec, area)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loopalg::c;

    #[test]
    fn close_r3_examples() {
        let p = close(cr(0.25), cr(0.25), SymParams::r3_default()).unwrap();
        assert!(p.r.abs() < 1e-12);
        let p = close(cr(0.375), cr(-0.125), SymParams::r3_default()).unwrap();
        assert!((p.r - 3.0f64.sqrt() / 4.0).abs() < 1e-12);
        assert!(matches!(
            close(cr(0.4), cr(0.4), SymParams::r3_default()),
            Err(Error::NoClosing { .. })
        ));
    }

    #[test]
    fn close_h3_matches_rearranged_identity() {
        let q = 0.5;
        let s = 0.2;
        let p = close(cr(s), cr(s), SymParams::H3 { q, psi: 0.0 }).unwrap();
        let want = 0.25 - 4.0 * s * s - 4.0 * s * s * (0.5f64 * q).sinh().powi(2);
        assert!((p.r * p.r - want).abs() < 1e-14);
    }

    #[test]
    fn monodromy_is_minus_identity_at_closing_points() {
        // R3
        let p = close(cr(0.3), cr(0.1), SymParams::r3_default()).unwrap();
        let res = period_residuals(&p, 16);
        assert!(res.monodromy_residual < 1e-10, "{}", res.monodromy_residual);
        assert!(res.derivative_residual.unwrap() < 1e-8);
        // S3 with γ = 0.4: κ(e^{±iγ}) = 1/2 by the closing identity
        let gamma = 0.4;
        let p = close(cr(0.2), cr(0.15), SymParams::S3 { gamma1: -gamma, gamma2: gamma }).unwrap();
        let res = period_residuals(&p, 16);
        assert!(res.monodromy_residual < 1e-10);
        // H3
        let p = close(cr(0.2), cr(0.2), SymParams::H3 { q: 0.5, psi: 0.0 }).unwrap();
        let res = period_residuals(&p, 16);
        assert!(res.monodromy_residual < 1e-10);
    }

    #[test]
    fn kappa_is_half_at_lambda_one_for_closed_r3() {
        let p = close(cr(0.3), cr(0.1), SymParams::r3_default()).unwrap();
        let kappa = crate::holode::delaunay_kappa(p.r, p.s, p.t, cr(1.0));
        assert!((kappa - cr(0.5)).norm() < 1e-14);
    }

    #[test]
    fn weight_examples() {
        // cylinder: w = π/(2|H|) exactly
        let p = close(cr(0.25), cr(0.25), SymParams::r3_default()).unwrap();
        let w = weight(&p).unwrap();
        assert!((w.weight - std::f64::consts::PI).abs() < 1e-9);
        assert_eq!(w.classification, DelaunayClass::Cylinder);
        assert!((w.neck_measure - 1.0).abs() < 1e-12);
        assert!((w.cos_beta - 1.0).abs() < 1e-12);
        // nodoid when st < 0
        let p = close(cr(0.375), cr(-0.125), SymParams::r3_default()).unwrap();
        let w = weight(&p).unwrap();
        assert!(w.weight < 0.0);
        assert_eq!(w.classification, DelaunayClass::Nodoid);
        // H3 closed-form value
        let q = 0.5;
        let p = close(cr(0.2), cr(0.2), SymParams::H3 { q, psi: 0.0 }).unwrap();
        let w = weight(&p).unwrap();
        let h = (1.0f64 / (-q).tanh()).abs();
        let want = 8.0 * std::f64::consts::PI * 0.04 / (h * h - 1.0).sqrt();
        assert!((w.weight - want).abs() < 1e-12);
        // weight requires closing
        let mut bad = p.clone();
        bad.r += 0.05;
        assert!(matches!(weight(&bad), Err(Error::NotClosed { .. })));
    }

    #[test]
    fn cylinder_axis_is_x1() {
        let p = close(cr(0.25), cr(0.25), SymParams::r3_default()).unwrap();
        match axis(&p).unwrap() {
            AxisDescriptor::R3 { direction, degenerate, .. } => {
                assert!(degenerate);
                assert!((direction[0] + 0.5).abs() < 1e-12);
                assert!(direction[1].abs() < 1e-14 && direction[2].abs() < 1e-14);
            }
            _ => panic!("wrong descriptor"),
        }
    }

    #[test]
    fn s3_rotation_fixes_the_axis_plane() {
        let gamma = 0.4;
        let sym_p = SymParams::S3 { gamma1: -gamma, gamma2: gamma };
        let p = close(cr(0.2), cr(0.15), sym_p).unwrap();
        let ax = axis(&p).unwrap();
        let theta0 = 0.73;
        // A = exp(iθ0 D) as a loop via circle quadrature
        let a_loop = loop_from_circle_samples(16, true, |lam| {
            delaunay_exp_at(p.r, p.s, p.t, Complex64::new(0.0, theta0), lam)
        });
        let iso = crate::sym::isometry_from_loop(&a_loop, &sym_p).unwrap();
        let r4 = match iso {
            crate::sym::IsometryDescriptor::S3 { r4, .. } => r4,
            _ => panic!("wrong descriptor"),
        };
        if let AxisDescriptor::Plane { basis, .. } = ax {
            for v in basis {
                let img: [f64; 4] =
                    std::array::from_fn(|r| (0..4).map(|k| r4[r][k] * v[k]).sum());
                for i in 0..4 {
                    assert!((img[i] - v[i]).abs() < 1e-8, "basis not fixed: {img:?} vs {v:?}");
                }
            }
        } else {
            panic!("wrong axis kind");
        }
    }

    #[test]
    fn mesh_vertices_are_equidistant_from_the_r3_axis() {
        let p = close(cr(0.3), cr(0.1), SymParams::r3_default()).unwrap();
        let sampler = DelaunaySampler { params: p.clone(), order: 16, tol: 1e-10 };
        let (dir, point) = match axis(&p).unwrap() {
            AxisDescriptor::R3 { direction, point, .. } => (direction, point),
            _ => panic!(),
        };
        let dn: f64 = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        let d = [dir[0] / dn, dir[1] / dn, dir[2] / dn];
        for &x in &[-0.3, 0.0, 0.4] {
            let mut dists = Vec::new();
            for k in 0..8 {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / 8.0;
                let f = sampler.point(Complex64::new(x, theta)).unwrap().coords();
                let w = [f[0] - point[0], f[1] - point[1], f[2] - point[2]];
                let along = w[0] * d[0] + w[1] * d[1] + w[2] * d[2];
                let perp = [
                    w[0] - along * d[0],
                    w[1] - along * d[1],
                    w[2] - along * d[2],
                ];
                dists.push((perp[0] * perp[0] + perp[1] * perp[1] + perp[2] * perp[2]).sqrt());
            }
            let (min, max) = dists
                .iter()
                .fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
            assert!(max - min < 1e-4, "profile circle radius varies by {}", max - min);
        }
    }

    #[test]
    fn flux_matches_closed_form_weight_r3() {
        for (s, t) in [(0.3, 0.1), (0.375, -0.125)] {
            let p = close(cr(s), cr(t), SymParams::r3_default()).unwrap();
            let w_cf = weight(&p).unwrap().weight;
            let w_num = flux_numeric(&p, 16, 1e-10).unwrap();
            assert!(
                (w_num - w_cf).abs() / w_cf.abs() < 1e-3,
                "flux {w_num} vs closed form {w_cf}"
            );
        }
    }

    #[test]
    fn rotation_property_matches_isometry() {
        let p = close(cr(0.3), cr(0.1), SymParams::r3_default()).unwrap();
        let sampler = DelaunaySampler { params: p.clone(), order: 16, tol: 1e-10 };
        let theta0 = 0.9;
        let a_loop = loop_from_circle_samples(16, true, |lam| {
            delaunay_exp_at(p.r, p.s, p.t, Complex64::new(0.0, theta0), lam)
        });
        let iso = crate::sym::isometry_from_loop(&a_loop, &p.sym).unwrap();
        for &(x, th) in &[(0.0, 0.3), (0.2, 1.2), (-0.25, 2.0)] {
            let w = Complex64::new(x, th);
            let lhs = sampler.point(w + Complex64::new(0.0, theta0)).unwrap();
            let rhs = iso.apply(&sampler.point(w).unwrap()).unwrap();
            assert!(
                (lhs.mat - rhs.mat).norm() < 1e-6,
                "{}",
                (lhs.mat - rhs.mat).norm()
            );
        }
    }

    #[test]
    fn st_complex_with_real_product_is_accepted() {
        let alpha = 0.3;
        let s = cr(0.2) * Complex64::from_polar(1.0, 2.0 * alpha);
        let t = cr(0.15) * Complex64::from_polar(1.0, -2.0 * alpha);
        let p = close(s, t, SymParams::r3_default()).unwrap();
        assert!(p.st_real().is_ok());
        assert!(matches!(
            close(c(0.2, 0.1), cr(0.15), SymParams::r3_default()),
            Err(Error::BadParams { .. })
        ));
    }
}
