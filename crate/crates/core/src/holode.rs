//! Integration of `dφ = φ ξ` along paths, monodromy matrices, and the
//! closed-form φ oracles for the families that admit them.
//!
//! The integrator is classical fourth-order Runge-Kutta on the matrix ODE,
//! applied per λ-coefficient block, with step control by step-doubling
//! comparison. Integrands are rational or entire at desk scale, so no
//! stiffness handling is needed.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::loopalg::{c, cr, unit_circle_points, Mat2, TwistedLoop};
use crate::potential::PotentialEval;

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

/// A path in the domain: a chain of straight segments or a circular arc
/// (possibly several turns; negative turns reverse orientation).
#[derive(Debug, Clone)]
pub enum PathSpec {
    Segments(Vec<Complex64>),
    Circle {
        center: Complex64,
        radius: f64,
        turns: f64,
        start_angle: f64,
    },
}

/// Smooth parametrized piece with endpoints and derivative.
#[derive(Debug, Clone)]
enum Piece {
    Line(Complex64, Complex64),
    Arc {
        center: Complex64,
        radius: f64,
        a0: f64,
        a1: f64,
    },
}

impl Piece {
    fn point(&self, t: f64) -> Complex64 {
        match self {
            Piece::Line(a, b) => a + (b - a) * cr(t),
            Piece::Arc { center, radius, a0, a1 } => {
                center + Complex64::from_polar(*radius, a0 + (a1 - a0) * t)
            }
        }
    }
    fn velocity(&self, t: f64) -> Complex64 {
        match self {
            Piece::Line(a, b) => b - a,
            Piece::Arc { center, radius, a0, a1 } => {
                let z = Complex64::from_polar(*radius, a0 + (a1 - a0) * t);
                let _ = center;
                z * c(0.0, a1 - a0)
            }
        }
    }
    fn length(&self) -> f64 {
        match self {
            Piece::Line(a, b) => (b - a).norm(),
            Piece::Arc { radius, a0, a1, .. } => radius * (a1 - a0).abs(),
        }
    }
}

impl PathSpec {
    pub fn segment(a: Complex64, b: Complex64) -> Self {
        PathSpec::Segments(vec![a, b])
    }

    pub fn circle(center: Complex64, radius: f64, turns: f64) -> Self {
        PathSpec::Circle {
            center,
            radius,
            turns,
            start_angle: 0.0,
        }
    }

    pub fn start(&self) -> Complex64 {
        match self {
            PathSpec::Segments(v) => v[0],
            PathSpec::Circle { center, radius, start_angle, .. } => {
                center + Complex64::from_polar(*radius, *start_angle)
            }
        }
    }

    pub fn end(&self) -> Complex64 {
        match self {
            PathSpec::Segments(v) => *v.last().unwrap(),
            PathSpec::Circle { center, radius, turns, start_angle } => {
                center + Complex64::from_polar(*radius, start_angle + 2.0 * PI * turns)
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            PathSpec::Segments(v) => (v[0] - v.last().unwrap()).norm() < 1e-12,
            PathSpec::Circle { turns, .. } => (turns - turns.round()).abs() < 1e-12,
        }
    }

    pub fn length(&self) -> f64 {
        self.pieces().iter().map(Piece::length).sum()
    }

    fn pieces(&self) -> Vec<Piece> {
        match self {
            PathSpec::Segments(v) => {
                assert!(v.len() >= 2, "segment chain needs at least two nodes");
                v.windows(2).map(|w| Piece::Line(w[0], w[1])).collect()
            }
            PathSpec::Circle { center, radius, turns, start_angle } => {
                assert!(*radius > 0.0, "circle radius must be positive");
                // quarter-turn pieces keep per-piece curvature manageable
                let total = 2.0 * PI * turns;
                let n = (total.abs() / (PI / 2.0)).ceil().max(1.0) as usize;
                (0..n)
                    .map(|k| Piece::Arc {
                        center: *center,
                        radius: *radius,
                        a0: start_angle + total * k as f64 / n as f64,
                        a1: start_angle + total * (k + 1) as f64 / n as f64,
                    })
                    .collect()
            }
        }
    }

    /// Minimum sampled distance from the path to any puncture.
    pub fn clearance(&self, punctures: &[Complex64]) -> f64 {
        if punctures.is_empty() {
            return f64::INFINITY;
        }
        let mut best = f64::INFINITY;
        for piece in self.pieces() {
            for k in 0..=64 {
                let z = piece.point(k as f64 / 64.0);
                for &p in punctures {
                    best = best.min((z - p).norm());
                }
            }
        }
        best
    }

    pub fn check_clearance(&self, punctures: &[Complex64], min_clearance: f64) -> Result<()> {
        let d = self.clearance(punctures);
        if d < min_clearance {
            let worst = punctures
                .iter()
                .copied()
                .min_by(|a, b| {
                    let da = self.clearance(&[*a]);
                    let db = self.clearance(&[*b]);
                    da.partial_cmp(&db).unwrap()
                })
                .unwrap();
            return Err(Error::PathThroughPole { at: worst, dist: d });
        }
        Ok(())
    }
}

/// A path from `a` to `b` keeping clear of the given punctures: the direct
/// segment when possible, otherwise a dog-leg through a laterally shifted
/// midpoint.
pub fn route_avoiding(punctures: &[Complex64], a: Complex64, b: Complex64) -> Result<PathSpec> {
    let direct = PathSpec::segment(a, b);
    if direct.clearance(punctures) >= 1e-6 {
        return Ok(direct);
    }
    let dir = (b - a) / cr((b - a).norm().max(1e-300));
    let perp = dir * c(0.0, 1.0);
    for k in 1..=8 {
        for sign in [1.0f64, -1.0] {
            let mid = (a + b) * cr(0.5) + perp * cr(sign * 0.05 * k as f64);
            let path = PathSpec::Segments(vec![a, mid, b]);
            if path.clearance(punctures) >= 1e-6 {
                return Ok(path);
            }
        }
    }
    direct.check_clearance(punctures, 1e-6)?;
    Ok(direct)
}

// ---------------------------------------------------------------------------
// The integrator
// ---------------------------------------------------------------------------

fn rhs(phi: &TwistedLoop, a: &TwistedLoop, vel: Complex64, order: usize) -> TwistedLoop {
    phi.mul_window(a, order).scale(vel)
}

fn rk4_step(
    phi: &TwistedLoop,
    piece: &Piece,
    t: f64,
    h: f64,
    potential: &dyn PotentialEval,
    order: usize,
) -> TwistedLoop {
    let eval = |tt: f64| -> (TwistedLoop, Complex64) {
        (potential.coeff_matrix(piece.point(tt)), piece.velocity(tt))
    };
    let (a1, v1) = eval(t);
    let k1 = rhs(phi, &a1, v1, order);
    let (a2, v2) = eval(t + 0.5 * h);
    let k2 = rhs(&phi.add(&k1.scale(cr(0.5 * h))), &a2, v2, order);
    let k3 = rhs(&phi.add(&k2.scale(cr(0.5 * h))), &a2, v2, order);
    let (a4, v4) = eval(t + h);
    let k4 = rhs(&phi.add(&k3.scale(cr(h))), &a4, v4, order);
    phi.add(
        &k1.add(&k2.scale(cr(2.0)))
            .add(&k3.scale(cr(2.0)))
            .add(&k4)
            .scale(cr(h / 6.0)),
    )
}

/// Integrate `dφ = φ ξ` from `phi0` along `path`. Fourth-order Runge-Kutta
/// per λ-coefficient block; adaptive step by halving until the
/// step-doubling error estimate passes `tol` (scaled per unit length).
/// Determinant drift is monitored, never renormalized.
pub fn integrate(
    phi0: &TwistedLoop,
    potential: &dyn PotentialEval,
    path: &PathSpec,
    tol: f64,
) -> Result<TwistedLoop> {
    path.check_clearance(&potential.punctures(), 1e-6)?;
    let total_len: f64 = path.length().max(1e-300);
    let mut phi = phi0.clone();
    let order = phi.order();
    for piece in path.pieces() {
        let plen = piece.length();
        if plen == 0.0 {
            continue;
        }
        let mut t = 0.0f64;
        let mut h = 0.125f64;
        while t < 1.0 {
            h = h.min(1.0 - t);
            if h * plen < 1e-12 * total_len {
                return Err(Error::StepUnderflow {
                    step: h * plen,
                    path_len: total_len,
                });
            }
            let full = rk4_step(&phi, &piece, t, h, potential, order);
            let half = rk4_step(&phi, &piece, t, 0.5 * h, potential, order);
            let two_half = rk4_step(&half, &piece, t + 0.5 * h, 0.5 * h, potential, order);
            let err = full.coeff_distance(&two_half) / 15.0;
            let scale = 1.0 + phi.sup_coeff_norm();
            let budget = tol * (h * plen / total_len) * scale;
            if err <= budget {
                phi = two_half;
                t += h;
                if err < 0.01 * budget {
                    h *= 2.0;
                }
            } else {
                h *= 0.5;
            }
        }
    }
    let drift = unit_circle_points(8)
        .iter()
        .map(|p| (phi.eval(p.value).det() - cr(1.0)).norm())
        .fold(0.0, f64::max);
    if drift > 1e-6 {
        return Err(Error::DetDrift { drift });
    }
    Ok(phi)
}

/// Integrate a plain 2x2 holomorphic matrix ODE `dF = F·Ω(z) dz` along a
/// path (Bryant and flat-surface representations). Same RK4/step-doubling
/// scheme as the loop integrator; the determinant is monitored against
/// drift.
pub fn integrate_mat2<F>(
    f0: Mat2,
    coeff: &F,
    path: &PathSpec,
    tol: f64,
    punctures: &[Complex64],
) -> Result<Mat2>
where
    F: Fn(Complex64) -> Mat2 + ?Sized,
{
    path.check_clearance(punctures, 1e-6)?;
    let total_len: f64 = path.length().max(1e-300);
    let mut f = f0;
    for piece in path.pieces() {
        let plen = piece.length();
        if plen == 0.0 {
            continue;
        }
        let step = |y: Mat2, t: f64, h: f64| -> Mat2 {
            let rhs = |yy: Mat2, tt: f64| -> Mat2 {
                (yy * coeff(piece.point(tt))).scale(piece.velocity(tt))
            };
            let k1 = rhs(y, t);
            let k2 = rhs(y + k1.scale(cr(0.5 * h)), t + 0.5 * h);
            let k3 = rhs(y + k2.scale(cr(0.5 * h)), t + 0.5 * h);
            let k4 = rhs(y + k3.scale(cr(h)), t + h);
            y + (k1 + k2.scale(cr(2.0)) + k3.scale(cr(2.0)) + k4).scale(cr(h / 6.0))
        };
        let mut t = 0.0f64;
        let mut h = 0.125f64;
        while t < 1.0 {
            h = h.min(1.0 - t);
            if h * plen < 1e-12 * total_len {
                return Err(Error::StepUnderflow { step: h * plen, path_len: total_len });
            }
            let full = step(f, t, h);
            let half = step(f, t, 0.5 * h);
            let two_half = step(half, t + 0.5 * h, 0.5 * h);
            let err = (full - two_half).norm() / 15.0;
            let budget = tol * (h * plen / total_len) * (1.0 + f.norm());
            if err <= budget {
                f = two_half;
                t += h;
                if err < 0.01 * budget {
                    h *= 2.0;
                }
            } else {
                h *= 0.5;
            }
        }
    }
    let drift = (f.det() - cr(1.0)).norm();
    if drift > 1e-8 {
        return Err(Error::DetDrift { drift });
    }
    Ok(f)
}

// ---------------------------------------------------------------------------
// Solved φ fields
// ---------------------------------------------------------------------------

/// A solved φ(z, λ) field: potential, base point, initial condition and
/// step control. Pure evaluation; bulk grid strategies live in the mesh
/// sampler.
#[derive(Clone)]
pub struct PhiSolution {
    potential: Arc<dyn PotentialEval>,
    base: Complex64,
    phi0: TwistedLoop,
    tol: f64,
}

impl PhiSolution {
    pub fn new(potential: Arc<dyn PotentialEval>, base: Complex64, order: usize, tol: f64) -> Self {
        Self {
            potential,
            base,
            phi0: TwistedLoop::identity(order),
            tol,
        }
    }

    pub fn with_initial(mut self, phi0: TwistedLoop) -> Self {
        self.phi0 = phi0;
        self
    }

    /// Dressing by a constant plus loop: `φ → h₊ φ`. The potential is
    /// unchanged; the monodromy transforms by conjugation with h₊.
    pub fn dressed(&self, h_plus: &TwistedLoop) -> Self {
        let mut out = self.clone();
        out.phi0 = h_plus.mul_window(&self.phi0, self.phi0.order());
        out
    }

    pub fn potential(&self) -> &Arc<dyn PotentialEval> {
        &self.potential
    }

    pub fn base(&self) -> Complex64 {
        self.base
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn order(&self) -> usize {
        self.phi0.order()
    }

    /// φ at `z`, integrating from the base point. A straight path is used
    /// when clear of punctures; otherwise small perpendicular detours are
    /// attempted.
    pub fn value_at(&self, z: Complex64) -> Result<TwistedLoop> {
        let path = self.route(self.base, z)?;
        integrate(&self.phi0, self.potential.as_ref(), &path, self.tol)
    }

    /// Continue an already-known value `phi_at_from` from `from` to `z`.
    pub fn continue_from(
        &self,
        from: Complex64,
        phi_at_from: &TwistedLoop,
        z: Complex64,
    ) -> Result<TwistedLoop> {
        let path = self.route(from, z)?;
        integrate(phi_at_from, self.potential.as_ref(), &path, self.tol)
    }

    fn route(&self, a: Complex64, b: Complex64) -> Result<PathSpec> {
        route_avoiding(&self.potential.punctures(), a, b)
    }

    /// Monodromy along a closed loop, `M = φ(τ(z)) φ(z)^{-1}`, together
    /// with a base-point-independence residual (the monodromy is recomputed
    /// from a second point on the loop and compared after conjugation).
    pub fn monodromy(&self, loop_path: &PathSpec) -> Result<(TwistedLoop, f64)> {
        if !loop_path.is_closed() {
            return Err(Error::BadScene("monodromy path must be closed".into()));
        }
        let z0 = loop_path.start();
        let phi_z0 = self.value_at(z0)?;
        let transport = integrate(
            &TwistedLoop::identity(self.order()),
            self.potential.as_ref(),
            loop_path,
            self.tol,
        )?;
        let m = phi_z0
            .mul_window(&transport, self.order())
            .mul_window(&phi_z0.inv()?, self.order());

        // independence check from a second base point on the loop
        let shifted = match loop_path {
            PathSpec::Circle { center, radius, turns, start_angle } => PathSpec::Circle {
                center: *center,
                radius: *radius,
                turns: *turns,
                start_angle: start_angle + 1.0,
            },
            PathSpec::Segments(v) => {
                let mut w: Vec<Complex64> = v[..v.len() - 1].to_vec();
                let shift = 1 % w.len();
                w.rotate_left(shift);
                w.push(w[0]);
                PathSpec::Segments(w)
            }
        };
        let z1 = shifted.start();
        let phi_z1 = self.value_at(z1)?;
        let transport1 = integrate(
            &TwistedLoop::identity(self.order()),
            self.potential.as_ref(),
            &shifted,
            self.tol,
        )?;
        let m1 = phi_z1
            .mul_window(&transport1, self.order())
            .mul_window(&phi_z1.inv()?, self.order());
        let residual = m.circle_distance(&m1, 0);
        Ok((m, residual))
    }
}

// ---------------------------------------------------------------------------
// Closed-form φ oracles
// ---------------------------------------------------------------------------

/// Families with a closed-form fundamental solution.
#[derive(Debug, Clone)]
pub enum ClosedFormFamily {
    Cylinder,
    Sphere,
    /// Principal log branch, slit along the negative real axis.
    Delaunay { r: f64, s: Complex64, t: Complex64 },
    SmythK0 { c: Complex64 },
}

/// The Delaunay coefficient matrix D(λ).
pub fn delaunay_d_matrix(r: f64, s: Complex64, t: Complex64, lambda: Complex64) -> Mat2 {
    Mat2::new(
        cr(r),
        s / lambda + t.conj() * lambda,
        s.conj() * lambda + t / lambda,
        cr(-r),
    )
}

/// κ(λ) with κ² = r² + |s+t̄|² + st(λ-λ^{-1})²; all closed forms are even
/// in κ, so the branch of the square root is immaterial.
pub fn delaunay_kappa(r: f64, s: Complex64, t: Complex64, lambda: Complex64) -> Complex64 {
    let lm = lambda - cr(1.0) / lambda;
    let kappa_sq = cr(r * r + (s + t.conj()).norm_sqr()) + s * t * lm * lm;
    kappa_sq.sqrt()
}

/// exp(w·D) evaluated exactly at one λ via D² = κ² I:
/// cosh(wκ) I + κ^{-1} sinh(wκ) D.
pub fn delaunay_exp_at(
    r: f64,
    s: Complex64,
    t: Complex64,
    w: Complex64,
    lambda: Complex64,
) -> Mat2 {
    let kappa = delaunay_kappa(r, s, t, lambda);
    let d = delaunay_d_matrix(r, s, t, lambda);
    let (ch, sh_over_k) = if kappa.norm() < 1e-8 {
        // even series in κ²: cosh(wκ) ≈ 1 + (wκ)²/2, sinh(wκ)/κ ≈ w(1 + (wκ)²/6)
        let wk2 = (w * kappa) * (w * kappa);
        (cr(1.0) + wk2 * cr(0.5), w * (cr(1.0) + wk2 / cr(6.0)))
    } else {
        ((w * kappa).cosh(), (w * kappa).sinh() / kappa)
    };
    Mat2::diag(ch, ch) + d.scale(sh_over_k)
}

/// Laurent window of a λ-sampled matrix function by trapezoidal quadrature
/// over the unit circle (spectrally accurate for smooth symbols).
pub fn loop_from_circle_samples<F>(order: usize, twisted: bool, f: F) -> TwistedLoop
where
    F: Fn(Complex64) -> Mat2,
{
    let k = (8 * (order + 1)).max(256);
    let samples: Vec<Mat2> = (0..k)
        .map(|j| f(Complex64::from_polar(1.0, 2.0 * PI * j as f64 / k as f64)))
        .collect();
    let mut out = TwistedLoop::zero(order, false);
    for j in -(order as i64)..=order as i64 {
        let mut acc = Mat2::zero();
        for (idx, m) in samples.iter().enumerate() {
            let ang = -2.0 * PI * (idx as f64) * (j as f64) / k as f64;
            acc = acc + m.scale(Complex64::from_polar(1.0, ang));
        }
        out.set_coeff(j, acc.scale(cr(1.0 / k as f64)));
    }
    if twisted {
        out.enforce_parity()
    } else {
        out
    }
}

/// Closed-form φ(z) for the families that have one.
pub fn closed_form_phi(family: &ClosedFormFamily, z: Complex64, order: usize) -> Result<TwistedLoop> {
    match family {
        ClosedFormFamily::Cylinder => {
            // exp(z σ1 λ^{-1}): λ^{-k} coefficient is z^k σ1^k / k!
            let mut out = TwistedLoop::zero(order, true);
            let mut zk = cr(1.0);
            let mut fact = 1.0f64;
            for kk in 0..=order {
                if kk > 0 {
                    zk *= z;
                    fact *= kk as f64;
                }
                let m = if kk % 2 == 0 {
                    Mat2::diag(zk / cr(fact), zk / cr(fact))
                } else {
                    Mat2::new(cr(0.0), zk / cr(fact), zk / cr(fact), cr(0.0))
                };
                out.set_coeff(-(kk as i64), m);
            }
            Ok(out)
        }
        ClosedFormFamily::Sphere => {
            let mut out = TwistedLoop::identity(order);
            out.set_coeff(-1, Mat2::new(cr(0.0), z, cr(0.0), cr(0.0)));
            Ok(out)
        }
        ClosedFormFamily::SmythK0 { c: cc } => {
            // exp(λ^{-1} z N), N = [[0,1],[c,0]], N² = c·I
            let mut out = TwistedLoop::zero(order, true);
            let mut coef = cr(1.0); // z^k / k!
            for kk in 0..=order {
                if kk > 0 {
                    coef *= z / cr(kk as f64);
                }
                let m = if kk % 2 == 0 {
                    let cm = cc.powu((kk / 2) as u32);
                    Mat2::diag(coef * cm, coef * cm)
                } else {
                    let cm = cc.powu((kk / 2) as u32);
                    Mat2::new(cr(0.0), coef * cm, coef * cm * cc, cr(0.0))
                };
                out.set_coeff(-(kk as i64), m);
            }
            Ok(out)
        }
        ClosedFormFamily::Delaunay { r, s, t } => {
            if z.norm() < 1e-12 {
                return Err(Error::BadParams {
                    family: "delaunay".into(),
                    reason: "closed form undefined at z = 0".into(),
                });
            }
            let w = z.ln(); // principal branch
            let (r, s, t) = (*r, *s, *t);
            Ok(loop_from_circle_samples(order, true, |lambda| {
                delaunay_exp_at(r, s, t, w, lambda)
            }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::DomainSpec;
    use crate::potential::{builtin, BuiltinFamily};

    fn square() -> DomainSpec {
        DomainSpec::rectangle(-1.0, 1.0, -1.0, 1.0, 9, 9)
    }

    #[test]
    fn zero_potential_is_identity_transport() {
        let xi = crate::potential::HolomorphicPotential::new(
            vec![(
                -1,
                [
                    [
                        crate::rational::RationalFn::zero(),
                        crate::rational::RationalFn::zero(),
                    ],
                    [
                        crate::rational::RationalFn::zero(),
                        crate::rational::RationalFn::zero(),
                    ],
                ],
            )],
            square(),
        );
        let phi0 = TwistedLoop::identity(4);
        let out = integrate(&phi0, &xi, &PathSpec::segment(cr(0.0), c(0.5, 0.5)), 1e-10).unwrap();
        assert!(out.coeff_distance(&phi0) < 1e-14);
    }

    #[test]
    fn cylinder_integration_matches_closed_form() {
        let xi = builtin(&BuiltinFamily::Cylinder, square()).unwrap();
        let z = c(0.5, 0.0);
        let got = integrate(
            &TwistedLoop::identity(16),
            &xi,
            &PathSpec::segment(cr(0.0), z),
            1e-11,
        )
        .unwrap();
        let want = closed_form_phi(&ClosedFormFamily::Cylinder, z, 16).unwrap();
        assert!(got.coeff_distance(&want) < 1e-9, "{}", got.coeff_distance(&want));
    }

    #[test]
    fn sphere_integration_is_exact() {
        let xi = builtin(&BuiltinFamily::Sphere, square()).unwrap();
        let z = c(0.3, 0.8);
        let got = integrate(
            &TwistedLoop::identity(8),
            &xi,
            &PathSpec::segment(cr(0.0), z),
            1e-11,
        )
        .unwrap();
        let want = closed_form_phi(&ClosedFormFamily::Sphere, z, 8).unwrap();
        assert!(got.coeff_distance(&want) < 1e-12);
    }

    #[test]
    fn path_independence_on_simply_connected() {
        let xi = builtin(&BuiltinFamily::Smyth { c: cr(1.0), k: 1 }, square()).unwrap();
        let z = c(0.7, -0.5);
        let p1 = PathSpec::segment(cr(0.0), z);
        let p2 = PathSpec::Segments(vec![cr(0.0), c(0.7, 0.0), z]);
        let tol = 1e-10;
        let a = integrate(&TwistedLoop::identity(12), &xi, &p1, tol).unwrap();
        let b = integrate(&TwistedLoop::identity(12), &xi, &p2, tol).unwrap();
        assert!(a.coeff_distance(&b) < 10.0 * tol, "{}", a.coeff_distance(&b));
    }

    #[test]
    fn contractible_loop_has_trivial_monodromy() {
        let xi = builtin(&BuiltinFamily::Smyth { c: cr(1.0), k: 0 }, square()).unwrap();
        let phi = PhiSolution::new(Arc::new(xi), cr(0.0), 12, 1e-11);
        let (m, res) = phi
            .monodromy(&PathSpec::circle(c(0.2, 0.1), 0.4, 1.0))
            .unwrap();
        assert!(m.coeff_distance(&TwistedLoop::identity(12)) < 1e-9);
        assert!(res < 1e-9);
    }

    #[test]
    fn delaunay_monodromy_matches_closed_form() {
        let (r, s, t) = (0.3, cr(0.3), cr(0.1)); // r² + (s+t)² = 0.09+0.16 = 0.25 closed
        let dom = DomainSpec::log_polar(-0.5, 0.5, 0.0, 2.0 * PI, 9, 9);
        let xi = builtin(&BuiltinFamily::Delaunay { r, s, t }, dom).unwrap();
        let order = 16;
        let phi = PhiSolution::new(Arc::new(xi), cr(1.0), order, 1e-11);
        let (m, res) = phi.monodromy(&PathSpec::circle(cr(0.0), 1.0, 1.0)).unwrap();
        assert!(res < 1e-8, "base independence {res}");
        let want = loop_from_circle_samples(order, true, |lambda| {
            delaunay_exp_at(r, s, t, c(0.0, 2.0 * PI), lambda)
        });
        assert!(m.coeff_distance(&want) < 1e-8, "{}", m.coeff_distance(&want));
        // closed parameters: M(1) = -I
        assert!((m.eval(cr(1.0)) + Mat2::identity()).norm() < 1e-8);
        // and ∂λ M vanishes at λ = 1
        assert!(m.dlambda().eval(cr(1.0)).norm() < 1e-7);
    }

    #[test]
    fn delaunay_closed_form_phi_solves_ode() {
        let (r, s, t) = (0.2, cr(0.35), cr(0.1));
        let dom = DomainSpec::log_polar(-0.5, 0.5, -2.0, 2.0, 9, 9);
        let xi = builtin(&BuiltinFamily::Delaunay { r, s, t }, dom).unwrap();
        let order = 16;
        let z0 = cr(1.0);
        let z1 = c(1.2, 0.5);
        let phi0 = closed_form_phi(&ClosedFormFamily::Delaunay { r, s, t }, z0, order).unwrap();
        let got = integrate(&phi0, &xi, &PathSpec::segment(z0, z1), 1e-11).unwrap();
        let want = closed_form_phi(&ClosedFormFamily::Delaunay { r, s, t }, z1, order).unwrap();
        assert!(got.coeff_distance(&want) < 1e-8, "{}", got.coeff_distance(&want));
    }

    #[test]
    fn smyth_k0_closed_form_solves_ode() {
        let cc = c(0.8, 0.3);
        let xi = builtin(&BuiltinFamily::Smyth { c: cc, k: 0 }, square()).unwrap();
        let z = c(0.4, 0.6);
        let got = integrate(
            &TwistedLoop::identity(14),
            &xi,
            &PathSpec::segment(cr(0.0), z),
            1e-11,
        )
        .unwrap();
        let want = closed_form_phi(&ClosedFormFamily::SmythK0 { c: cc }, z, 14).unwrap();
        assert!(got.coeff_distance(&want) < 1e-9);
    }

    #[test]
    fn dressed_monodromy_is_conjugated() {
        let (r, s, t) = (0.3, cr(0.3), cr(0.1));
        let dom = DomainSpec::log_polar(-0.5, 0.5, 0.0, 2.0 * PI, 9, 9);
        let xi = builtin(&BuiltinFamily::Delaunay { r, s, t }, dom).unwrap();
        let order = 16;
        let phi = PhiSolution::new(Arc::new(xi), cr(1.0), order, 1e-11);
        let mut rng = crate::util::SplitMix64::new(42);
        let h = crate::factor::random_plus_loop(&mut rng, order, 0.4);
        let dressed = phi.dressed(&h);
        let circle = PathSpec::circle(cr(0.0), 1.0, 1.0);
        let (m, _) = phi.monodromy(&circle).unwrap();
        let (m_hat, _) = dressed.monodromy(&circle).unwrap();
        let want = h
            .mul_window(&m, order)
            .mul_window(&crate::factor::plus_loop_inverse(&h).unwrap(), order);
        assert!(m_hat.circle_distance(&want, 0) < 1e-9, "{}", m_hat.circle_distance(&want, 0));
    }

    #[test]
    fn integration_refuses_paths_through_punctures() {
        let dom = DomainSpec::log_polar(-0.5, 0.5, 0.0, 2.0 * PI, 9, 9);
        let xi = builtin(&BuiltinFamily::Delaunay { r: 0.25, s: cr(0.2), t: cr(0.1) }, dom).unwrap();
        let res = integrate(
            &TwistedLoop::identity(8),
            &xi,
            &PathSpec::segment(cr(-1.0), cr(1.0)),
            1e-10,
        );
        match res {
            Err(Error::PathThroughPole { .. }) => {}
            other => panic!("expected PathThroughPole, got {other:?}"),
        }
    }
}
