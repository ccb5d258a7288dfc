//! Sym-Bobenko formulas in the three space forms, ambient-space models,
//! conversions to display coordinates, metric helpers and isometries
//! induced by constant unitary loops.
//!
//! Matrix models: ℝ³ is the su₂ matrices (traceless anti-Hermitian), 𝕊³ is
//! SU₂ itself, ℍ³ is the Hermitian determinant-one positive-trace matrices
//! `F F̄ᵗ`. Coordinates: 𝕊³ matrices [[a,b],[-b̄,ā]] carry (x1,x2,x3,x4) =
//! (Re a, Im b, Re b, Im a); ℍ³ matrices [[x0+x3, x1+ix2],[x1-ix2, x0-x3]]
//! carry (x1,x2,x3,x0).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::loopalg::{cr, Mat2, TwistedLoop, I};

/// The three ambient space forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ambient {
    R3,
    S3,
    H3,
}

impl Ambient {
    pub fn tag(&self) -> &'static str {
        match self {
            Ambient::R3 => "r3",
            Ambient::S3 => "s3",
            Ambient::H3 => "h3",
        }
    }
}

/// Sym-formula parameters per ambient space.
#[derive(Debug, Clone, Copy)]
pub enum SymParams {
    /// Mean curvature H ≠ 0 and evaluation point λ₀ on the unit circle.
    R3 { h: f64, lambda0: Complex64 },
    /// Evaluation angles; requires (γ₂-γ₁)/π not an integer.
    S3 { gamma1: f64, gamma2: f64 },
    /// Evaluation at e^{q/2} e^{iψ}; requires q ≠ 0.
    H3 { q: f64, psi: f64 },
}

impl SymParams {
    pub fn r3_default() -> Self {
        SymParams::R3 { h: 0.5, lambda0: cr(1.0) }
    }

    pub fn ambient(&self) -> Ambient {
        match self {
            SymParams::R3 { .. } => Ambient::R3,
            SymParams::S3 { .. } => Ambient::S3,
            SymParams::H3 { .. } => Ambient::H3,
        }
    }

    /// The mean curvature the construction targets.
    pub fn mean_curvature(&self) -> f64 {
        match self {
            SymParams::R3 { h, .. } => *h,
            SymParams::S3 { gamma1, gamma2 } => 1.0 / (gamma2 - gamma1).tan(),
            SymParams::H3 { q, .. } => 1.0 / (-q).tanh(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SymParams::R3 { h, lambda0 } => {
                if *h == 0.0 {
                    return Err(Error::BadParams {
                        family: "sym-r3".into(),
                        reason: "H must be nonzero".into(),
                    });
                }
                if (lambda0.norm() - 1.0).abs() > 1e-9 {
                    return Err(Error::BadParams {
                        family: "sym-r3".into(),
                        reason: format!("λ₀ must lie on the unit circle, |λ₀| = {}", lambda0.norm()),
                    });
                }
                Ok(())
            }
            SymParams::S3 { gamma1, gamma2 } => {
                let ratio = (gamma2 - gamma1) / std::f64::consts::PI;
                if (ratio - ratio.round()).abs() < 1e-9 {
                    return Err(Error::BadGammas { gamma1: *gamma1, gamma2: *gamma2 });
                }
                Ok(())
            }
            SymParams::H3 { q, .. } => {
                if *q == 0.0 {
                    return Err(Error::ZeroQ);
                }
                Ok(())
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Ambient points
// ---------------------------------------------------------------------------

/// Tagged point of ℝ³ / 𝕊³ / ℍ³ in its 2x2 matrix model.
#[derive(Debug, Clone, Copy)]
pub struct AmbientPoint {
    pub ambient: Ambient,
    pub mat: Mat2,
}

/// su₂ matrix of an ℝ³ vector: (-i/2)[[-x3, x1+ix2],[x1-ix2, x3]].
pub fn su2_from_r3(v: [f64; 3]) -> Mat2 {
    let half = Complex64::new(0.0, -0.5);
    Mat2::new(
        half * cr(-v[2]),
        half * Complex64::new(v[0], v[1]),
        half * Complex64::new(v[0], -v[1]),
        half * cr(v[2]),
    )
}

/// Inverse of [`su2_from_r3`]; ignores any non-su₂ residual.
pub fn r3_from_su2(m: &Mat2) -> [f64; 3] {
    [
        -2.0 * m.m[0][1].im,
        2.0 * m.m[0][1].re,
        2.0 * m.m[0][0].im,
    ]
}

impl AmbientPoint {
    pub fn r3(mat: Mat2) -> Self {
        Self { ambient: Ambient::R3, mat }
    }
    pub fn s3(mat: Mat2) -> Self {
        Self { ambient: Ambient::S3, mat }
    }
    pub fn h3(mat: Mat2) -> Self {
        Self { ambient: Ambient::H3, mat }
    }

    pub fn from_r3_coords(v: [f64; 3]) -> Self {
        Self::r3(su2_from_r3(v))
    }

    /// Real coordinates: ℝ³ gives (x1,x2,x3,0), 𝕊³ gives (x1,x2,x3,x4),
    /// ℍ³ gives (x1,x2,x3,x0).
    pub fn coords(&self) -> [f64; 4] {
        let m = &self.mat;
        match self.ambient {
            Ambient::R3 => {
                let v = r3_from_su2(m);
                [v[0], v[1], v[2], 0.0]
            }
            Ambient::S3 => [m.m[0][0].re, m.m[0][1].im, m.m[0][1].re, m.m[0][0].im],
            Ambient::H3 => [
                m.m[0][1].re,
                m.m[0][1].im,
                0.5 * (m.m[0][0].re - m.m[1][1].re),
                0.5 * (m.m[0][0].re + m.m[1][1].re),
            ],
        }
    }

    /// Distance from the model's defining constraints.
    pub fn validity_residual(&self) -> f64 {
        let m = &self.mat;
        match self.ambient {
            Ambient::R3 => (*m + m.conj_transpose())
                .norm()
                .max(m.trace().norm()),
            Ambient::S3 => {
                ((*m * m.conj_transpose()) - Mat2::identity())
                    .norm()
                    .max((m.det() - cr(1.0)).norm())
            }
            Ambient::H3 => {
                let herm = (*m - m.conj_transpose()).norm();
                let det = (m.det() - cr(1.0)).norm();
                let tr = if m.trace().re > 0.0 { 0.0 } else { 1.0 };
                herm.max(det).max(tr)
            }
        }
    }

    /// Display triple: identity for ℝ³, stereographic projection for 𝕊³,
    /// Poincaré ball for ℍ³.
    pub fn display(&self) -> Result<[f64; 3]> {
        let x = self.coords();
        match self.ambient {
            Ambient::R3 => Ok([x[0], x[1], x[2]]),
            Ambient::S3 => {
                if (1.0 - x[3]).abs() < 1e-12 {
                    return Err(Error::ProjectionPole);
                }
                let d = 1.0 - x[3];
                Ok([x[0] / d, x[1] / d, x[2] / d])
            }
            Ambient::H3 => {
                let m = &self.mat;
                let den = 2.0 + m.m[0][0].re + m.m[1][1].re;
                Ok([
                    (m.m[0][1] + m.m[0][1].conj()).re / den,
                    (I * (m.m[0][1].conj() - m.m[0][1])).re / den,
                    (m.m[0][0].re - m.m[1][1].re) / den,
                ])
            }
        }
    }
}

/// Inverse stereographic projection ℝ³ → 𝕊³ ⊂ ℝ⁴.
pub fn stereographic_inverse(p: [f64; 3]) -> [f64; 4] {
    let n2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
    let d = n2 + 1.0;
    [2.0 * p[0] / d, 2.0 * p[1] / d, 2.0 * p[2] / d, (n2 - 1.0) / d]
}

// ---------------------------------------------------------------------------
// Bilinear forms
// ---------------------------------------------------------------------------

/// ℝ³ inner product of su₂ matrices, ⟨x,y⟩ = -2 trace(x·y).
pub fn metric_r3(x: &Mat2, y: &Mat2) -> f64 {
    (-2.0 * (*x * *y).trace()).re
}

/// Complex bilinear ℝ⁴ form in the 𝕊³ matrix model, ½ trace(X σ₂ Yᵗ σ₂).
pub fn metric_s3(x: &Mat2, y: &Mat2) -> Complex64 {
    cr(0.5) * (*x * y.adjugate()).trace()
}

/// Complex bilinear ℝ^{3,1} form in the Hermitian model, -½ trace(X σ₂ Yᵗ σ₂)
/// (equal to -det X on the diagonal).
pub fn metric_h3(x: &Mat2, y: &Mat2) -> Complex64 {
    cr(-0.5) * (*x * y.adjugate()).trace()
}

/// Signature of the ambient coordinate bilinear form on (x1,x2,x3,x4/x0).
pub fn coord_signature(ambient: Ambient) -> [f64; 4] {
    match ambient {
        Ambient::R3 => [1.0, 1.0, 1.0, 0.0],
        Ambient::S3 => [1.0, 1.0, 1.0, 1.0],
        Ambient::H3 => [1.0, 1.0, 1.0, -1.0],
    }
}

// ---------------------------------------------------------------------------
// Sym formulas
// ---------------------------------------------------------------------------

fn check_unitary(f: &TwistedLoop) -> Result<()> {
    let (ok, residual) = f.is_unitary(1e-6);
    if !ok {
        return Err(Error::NotUnitary { residual });
    }
    Ok(())
}

/// Sym-Bobenko formula in ℝ³:
/// `f = (1/2H)[-(1/2) F diag(i,-i) F^{-1} - iλ (∂_λ F) F^{-1}]` at λ₀,
/// normal `N = F (1/2) diag(i,-i) F^{-1}` at λ₀.
pub fn sym_r3(f_loop: &TwistedLoop, h: f64, lambda0: Complex64) -> Result<(AmbientPoint, AmbientPoint)> {
    SymParams::R3 { h, lambda0 }.validate()?;
    check_unitary(f_loop)?;
    let f0 = f_loop.eval(lambda0);
    let f0_inv = f0.inv()?;
    let df = f_loop.dlambda().eval(lambda0);
    let j = Mat2::diag(I, -I);
    let term1 = (f0 * j * f0_inv).scale(cr(-0.5));
    let term2 = (df * f0_inv).scale(-I * lambda0);
    let f_mat = (term1 + term2).scale(cr(1.0 / (2.0 * h)));
    let n_mat = (f0 * j * f0_inv).scale(cr(0.5));
    Ok((AmbientPoint::r3(f_mat), AmbientPoint::r3(n_mat)))
}

/// Sym-type formula in 𝕊³ with evaluations at e^{iγ₁}, e^{iγ₂};
/// the resulting surface has CMC H = cot(γ₂-γ₁).
pub fn sym_s3(f_loop: &TwistedLoop, gamma1: f64, gamma2: f64) -> Result<(AmbientPoint, AmbientPoint)> {
    SymParams::S3 { gamma1, gamma2 }.validate()?;
    let l1 = Complex64::from_polar(1.0, gamma1);
    let l2 = Complex64::from_polar(1.0, gamma2);
    let f1 = f_loop.eval(l1);
    let f2 = f_loop.eval(l2);
    for m in [&f1, &f2] {
        if !m.is_su2(1e-6) {
            return Err(Error::NotUnitary {
                residual: ((*m * m.conj_transpose()) - Mat2::identity()).norm(),
            });
        }
    }
    let half = Complex64::from_polar(1.0, 0.5 * (gamma1 - gamma2));
    let f2_inv = f2.inv()?;
    let f_mat = f1 * Mat2::diag(half, cr(1.0) / half) * f2_inv;
    let n_mat = (f1 * Mat2::diag(half, -(cr(1.0) / half)) * f2_inv).scale(I);
    Ok((AmbientPoint::s3(f_mat), AmbientPoint::s3(n_mat)))
}

/// Sym-type formula in ℍ³ with evaluation at λ = e^{q/2} e^{iψ};
/// the resulting surface has CMC H = coth(-q).
pub fn sym_h3(f_loop: &TwistedLoop, q: f64, psi: f64) -> Result<(AmbientPoint, AmbientPoint)> {
    SymParams::H3 { q, psi }.validate()?;
    let lam = Complex64::from_polar((0.5 * q).exp(), psi);
    let f0 = f_loop.eval(lam);
    let f_tilde = f0 * Mat2::diag(cr((0.25 * q).exp()), cr((-0.25 * q).exp()));
    let f_mat = f_tilde * f_tilde.conj_transpose();
    let n_mat = f_tilde * Mat2::sigma3() * f_tilde.conj_transpose();
    Ok((AmbientPoint::h3(f_mat), AmbientPoint::h3(n_mat)))
}

/// Evaluate the Sym formula selected by `params`.
pub fn sym(f_loop: &TwistedLoop, params: &SymParams) -> Result<(AmbientPoint, AmbientPoint)> {
    match params {
        SymParams::R3 { h, lambda0 } => sym_r3(f_loop, *h, *lambda0),
        SymParams::S3 { gamma1, gamma2 } => sym_s3(f_loop, *gamma1, *gamma2),
        SymParams::H3 { q, psi } => sym_h3(f_loop, *q, *psi),
    }
}

/// The fixed involution relating the hat-frame Sym variant to [`sym_r3`]:
/// `f ↦ -σ₃ fᵗ σ₃` (a rotation by π about the x1-axis).
pub fn hat_frame_involution(m: &Mat2) -> Mat2 {
    -(Mat2::sigma3() * m.transpose() * Mat2::sigma3())
}

// ---------------------------------------------------------------------------
// Isometries induced by constant unitary loops
// ---------------------------------------------------------------------------

/// Description of the ambient isometry induced by left multiplication of
/// frames by a z-independent loop.
#[derive(Debug, Clone)]
pub enum IsometryDescriptor {
    R3 {
        /// A(λ₀), the rotation part as an SU₂ matrix.
        rot: Mat2,
        /// Translation term in su₂ matrix form.
        trans: Mat2,
        /// Direction contained in the rotation axis, (-b2, b1, a2).
        axis: [f64; 3],
        /// Rotation angle arccos(a1² - a2² - |b|²).
        angle: f64,
        /// Counterclockwise about `axis` iff a1 > 0.
        counterclockwise: bool,
        /// Translation vector (1/2H)·coords of the ∂λ term.
        translation: [f64; 3],
        /// 3x3 rotation matrix acting on coordinates.
        rot3: [[f64; 3]; 3],
    },
    S3 {
        a1: Mat2,
        a2: Mat2,
        /// 4x4 rotation on (x1,x2,x3,x4).
        r4: [[f64; 4]; 4],
    },
    H3 {
        a: Mat2,
        /// 4x4 Lorentz transformation on (x1,x2,x3,x0).
        r4: [[f64; 4]; 4],
    },
}

fn coords_of(ambient: Ambient, m: Mat2) -> [f64; 4] {
    AmbientPoint { ambient, mat: m }.coords()
}

fn basis_matrix(ambient: Ambient, k: usize) -> Mat2 {
    match ambient {
        Ambient::R3 => {
            let mut v = [0.0; 3];
            v[k] = 1.0;
            su2_from_r3(v)
        }
        Ambient::S3 => {
            // (x1,x2,x3,x4) = (Re a, Im b, Re b, Im a) for [[a,b],[-b̄,ā]]
            let (a, b) = match k {
                0 => (cr(1.0), cr(0.0)),
                1 => (cr(0.0), I),
                2 => (cr(0.0), cr(1.0)),
                _ => (I, cr(0.0)),
            };
            Mat2::new(a, b, -b.conj(), a.conj())
        }
        Ambient::H3 => {
            // [[x0+x3, x1+ix2],[x1-ix2, x0-x3]]
            let (x1, x2, x3, x0) = match k {
                0 => (1.0, 0.0, 0.0, 0.0),
                1 => (0.0, 1.0, 0.0, 0.0),
                2 => (0.0, 0.0, 1.0, 0.0),
                _ => (0.0, 0.0, 0.0, 1.0),
            };
            Mat2::new(
                cr(x0 + x3),
                Complex64::new(x1, x2),
                Complex64::new(x1, -x2),
                cr(x0 - x3),
            )
        }
    }
}

/// Isometry induced by a constant-in-z unitary loop under the Sym formula
/// of the given parameters.
pub fn isometry_from_loop(a_loop: &TwistedLoop, params: &SymParams) -> Result<IsometryDescriptor> {
    params.validate()?;
    match params {
        SymParams::R3 { h, lambda0 } => {
            check_unitary(a_loop)?;
            let a0 = a_loop.eval(*lambda0);
            let a = a0.m[0][0];
            let b = a0.m[0][1];
            let (a1, a2) = (a.re, a.im);
            let (b1, b2) = (b.re, b.im);
            let axis = [-b2, b1, a2];
            let angle = (a1 * a1 - a2 * a2 - (b1 * b1 + b2 * b2)).clamp(-1.0, 1.0).acos();
            let a0_inv = a0.inv()?;
            let trans = (a_loop.dlambda().eval(*lambda0) * a0_inv)
                .scale(-I * *lambda0)
                .scale(cr(1.0 / (2.0 * h)));
            let mut rot3 = [[0.0; 3]; 3];
            for (k, col) in (0..3).map(|k| (k, basis_matrix(Ambient::R3, k))) {
                let img = coords_of(Ambient::R3, a0 * col * a0_inv);
                for r in 0..3 {
                    rot3[r][k] = img[r];
                }
            }
            Ok(IsometryDescriptor::R3 {
                rot: a0,
                trans,
                axis,
                angle,
                counterclockwise: a1 > 0.0,
                translation: r3_from_su2(&trans),
                rot3,
            })
        }
        SymParams::S3 { gamma1, gamma2 } => {
            check_unitary(a_loop)?;
            let a1 = a_loop.eval(Complex64::from_polar(1.0, *gamma1));
            let a2 = a_loop.eval(Complex64::from_polar(1.0, *gamma2));
            let a2_inv = a2.inv()?;
            let mut r4 = [[0.0; 4]; 4];
            for k in 0..4 {
                let img = coords_of(Ambient::S3, a1 * basis_matrix(Ambient::S3, k) * a2_inv);
                for r in 0..4 {
                    r4[r][k] = img[r];
                }
            }
            Ok(IsometryDescriptor::S3 { a1, a2, r4 })
        }
        SymParams::H3 { q, psi } => {
            let lam = Complex64::from_polar((0.5 * q).exp(), *psi);
            let a = a_loop.eval(lam);
            let mut r4 = [[0.0; 4]; 4];
            for k in 0..4 {
                let img = coords_of(Ambient::H3, a * basis_matrix(Ambient::H3, k) * a.conj_transpose());
                for r in 0..4 {
                    r4[r][k] = img[r];
                }
            }
            Ok(IsometryDescriptor::H3 { a, r4 })
        }
    }
}

impl IsometryDescriptor {
    /// Apply the isometry to an ambient point (matrix model).
    pub fn apply(&self, p: &AmbientPoint) -> Result<AmbientPoint> {
        match (self, p.ambient) {
            (IsometryDescriptor::R3 { rot, trans, .. }, Ambient::R3) => {
                let rot_inv = rot.inv()?;
                Ok(AmbientPoint::r3((*rot * p.mat * rot_inv) + *trans))
            }
            (IsometryDescriptor::S3 { a1, a2, .. }, Ambient::S3) => {
                Ok(AmbientPoint::s3(*a1 * p.mat * a2.inv()?))
            }
            (IsometryDescriptor::H3 { a, .. }, Ambient::H3) => {
                Ok(AmbientPoint::h3(*a * p.mat * a.conj_transpose()))
            }
            _ => Err(Error::BadScene("isometry/point ambient mismatch".into())),
        }
    }
}
