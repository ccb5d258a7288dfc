//! Independent finite-difference verifier of claimed geometric properties:
//! conformality, fundamental forms, mean and Gaussian curvatures, Hopf
//! differential holomorphy, Gauss and Codazzi residuals, harmonicity of the
//! normal, Smyth reflective symmetry and the Lawson relations.
//!
//! Everything here is computed from surface samples alone (second-order
//! central differences on a 5x5 stencil); no quantity is taken from the
//! pipeline being verified. Normals are computed from the sampled frame:
//! the ℝ³ normal is f_x × f_y / |·|; in 𝕊³ and ℍ³ the normal solves the
//! ambient orthogonality conditions via the generalized 4-vector cross
//! product, with a fixed per-ambient orientation constant calibrated once
//! against the Sym-formula normal conventions.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::loopalg::{cr, TwistedLoop, Mat2};
use crate::mesh::SurfaceSampler;
use crate::sym::{coord_signature, sym, Ambient, AmbientPoint, SymParams};

/// Orientation of the 4-vector normal relative to the Sym-formula normals,
/// calibrated once on Delaunay surfaces and the horosphere and frozen.
const ORIENT_S3: f64 = 1.0;
const ORIENT_H3: f64 = 1.0;

type C4 = [Complex64; 4];
type R4 = [f64; 4];

fn to_c4(v: R4) -> C4 {
    [cr(v[0]), cr(v[1]), cr(v[2]), cr(v[3])]
}

fn lincomb(a: f64, u: R4, b: f64, v: R4) -> R4 {
    [
        a * u[0] + b * v[0],
        a * u[1] + b * v[1],
        a * u[2] + b * v[2],
        a * u[3] + b * v[3],
    ]
}

fn bilinear(sig: [f64; 4], u: &C4, v: &C4) -> Complex64 {
    (0..4).map(|k| cr(sig[k]) * u[k] * v[k]).sum()
}

fn bilinear_r(sig: [f64; 4], u: R4, v: R4) -> f64 {
    (0..4).map(|k| sig[k] * u[k] * v[k]).sum()
}

fn euclid_norm(u: R4) -> f64 {
    bilinear_r([1.0; 4], u, u).sqrt()
}

/// Generalized 4-vector cross product: ⟨cross4(u,v,w), x⟩ = det[x;u;v;w].
fn cross4(u: R4, v: R4, w: R4) -> R4 {
    let minor = |c0: usize, c1: usize, c2: usize| -> f64 {
        u[c0] * (v[c1] * w[c2] - v[c2] * w[c1]) - u[c1] * (v[c0] * w[c2] - v[c2] * w[c0])
            + u[c2] * (v[c0] * w[c1] - v[c1] * w[c0])
    };
    [
        minor(1, 2, 3),
        -minor(0, 2, 3),
        minor(0, 1, 3),
        -minor(0, 1, 2),
    ]
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// Per-sample diagnostic record.
#[derive(Debug, Clone, Serialize)]
pub struct GeomSample {
    pub z: [f64; 2],
    pub conformal_defect: f64,
    /// 4e^{2u}, the conformal factor of the metric 4e^{2u}|dz|².
    pub metric_factor: f64,
    pub mean_curvature: f64,
    pub k_extrinsic: f64,
    pub k_intrinsic: f64,
    pub hopf_re: f64,
    pub hopf_im: f64,
    pub hopf_dbar: f64,
    pub gauss_residual: f64,
    pub codazzi_residual: f64,
    pub harmonicity: f64,
}

/// Aggregated verification report.
#[derive(Debug, Clone, Serialize)]
pub struct GeomReport {
    pub ambient: String,
    pub stencil: f64,
    pub samples: Vec<GeomSample>,
    pub conformal_defect_max: f64,
    #[serde(rename = "H_mean")]
    pub h_mean: f64,
    #[serde(rename = "H_max_dev")]
    pub h_max_dev: f64,
    #[serde(rename = "K_intrinsic_mean")]
    pub k_intrinsic_mean: f64,
    pub gauss_residual_max: f64,
    pub codazzi_residual_max: f64,
    pub harmonicity_max: f64,
    pub hopf_dbar_max: f64,
}

impl GeomReport {
    /// Max |H - target| over the samples.
    pub fn h_max_dev_from(&self, target: f64) -> f64 {
        self.samples
            .iter()
            .map(|s| (s.mean_curvature - target).abs())
            .fold(0.0, f64::max)
    }

    pub fn k_intrinsic_abs_max(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.k_intrinsic.abs())
            .fold(0.0, f64::max)
    }

    pub fn k_intrinsic_max_signed(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.k_intrinsic)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Verifier options.
#[derive(Debug, Clone)]
pub struct GeomOptions {
    /// Stencil spacing in the parameter plane.
    pub stencil: f64,
    /// Constant spectral factor divided out of the Hopf differential before
    /// the holomorphy test (λ₀^{-2}, e^{-i(γ1+γ2)}, e^{-2iψ}).
    pub hopf_factor: Complex64,
}

impl Default for GeomOptions {
    fn default() -> Self {
        Self {
            stencil: 1e-3,
            hopf_factor: cr(1.0),
        }
    }
}

impl GeomOptions {
    pub fn for_sym(params: &SymParams, domain_scale: f64) -> Self {
        let hopf_factor = match params {
            SymParams::R3 { lambda0, .. } => lambda0.powi(-2),
            SymParams::S3 { gamma1, gamma2 } => Complex64::from_polar(1.0, -(gamma1 + gamma2)),
            SymParams::H3 { psi, .. } => Complex64::from_polar(1.0, -2.0 * psi),
        };
        Self {
            stencil: 1e-3 * domain_scale.max(1e-3),
            hopf_factor,
        }
    }
}

// ---------------------------------------------------------------------------
// The per-probe computation
// ---------------------------------------------------------------------------

struct Stencil {
    sig: [f64; 4],
    ambient: Ambient,
    h: f64,
    /// f on the 5x5 grid, [ix][iy] with offsets -2..=2.
    f: [[R4; 5]; 5],
}

impl Stencil {
    fn value(&self, ix: i32, iy: i32) -> R4 {
        self.f[(ix + 2) as usize][(iy + 2) as usize]
    }

    fn fx(&self, ix: i32, iy: i32) -> R4 {
        lincomb(
            1.0 / (2.0 * self.h),
            self.value(ix + 1, iy),
            -1.0 / (2.0 * self.h),
            self.value(ix - 1, iy),
        )
    }

    fn fy(&self, ix: i32, iy: i32) -> R4 {
        lincomb(
            1.0 / (2.0 * self.h),
            self.value(ix, iy + 1),
            -1.0 / (2.0 * self.h),
            self.value(ix, iy - 1),
        )
    }

    fn fz(&self, ix: i32, iy: i32) -> C4 {
        let (fx, fy) = (self.fx(ix, iy), self.fy(ix, iy));
        std::array::from_fn(|k| (cr(fx[k]) - Complex64::new(0.0, 1.0) * fy[k]) * cr(0.5))
    }

    fn fzbar(&self, ix: i32, iy: i32) -> C4 {
        let (fx, fy) = (self.fx(ix, iy), self.fy(ix, iy));
        std::array::from_fn(|k| (cr(fx[k]) + Complex64::new(0.0, 1.0) * fy[k]) * cr(0.5))
    }

    /// Unit normal at an interior stencil node from the sampled frame.
    fn normal(&self, ix: i32, iy: i32) -> Result<R4> {
        let fx = self.fx(ix, iy);
        let fy = self.fy(ix, iy);
        match self.ambient {
            Ambient::R3 => {
                let n = [
                    fx[1] * fy[2] - fx[2] * fy[1],
                    fx[2] * fy[0] - fx[0] * fy[2],
                    fx[0] * fy[1] - fx[1] * fy[0],
                    0.0,
                ];
                let len = euclid_norm(n);
                if len < 1e-12 {
                    return Err(Error::DegenerateMetric { value: len });
                }
                Ok([n[0] / len, n[1] / len, n[2] / len, 0.0])
            }
            Ambient::S3 | Ambient::H3 => {
                let f = self.value(ix, iy);
                let raw = cross4(f, fx, fy);
                // lower the index with the ambient signature so that the
                // result is orthogonal in the bilinear form
                let mut n: R4 = std::array::from_fn(|k| self.sig[k] * raw[k]);
                let orient = if self.ambient == Ambient::S3 { ORIENT_S3 } else { ORIENT_H3 };
                let nn = bilinear_r(self.sig, n, n);
                if nn.abs() < 1e-20 {
                    return Err(Error::DegenerateMetric { value: nn.abs() });
                }
                let scale = orient / nn.abs().sqrt();
                for v in n.iter_mut() {
                    *v *= scale;
                }
                Ok(n)
            }
        }
    }
}

/// Quantities entering the curvature computation at one cross node.
struct CrossData {
    u: f64,
    q: Complex64,
    h_mean: f64,
    normal: R4,
}

fn cross_data(st: &Stencil, ix: i32, iy: i32) -> Result<CrossData> {
    let sig = st.sig;
    let fz = st.fz(ix, iy);
    let fzb = st.fzbar(ix, iy);
    let e2u = bilinear(sig, &fz, &fzb).re / 2.0;
    if e2u < 1e-10 {
        return Err(Error::DegenerateMetric { value: e2u });
    }
    let n = st.normal(ix, iy)?;
    let nc = to_c4(n);
    // second derivatives centered at (ix, iy); only available on the cross
    let h2 = st.h * st.h;
    let lap: R4 = {
        let (a, b, c_, d, e) = (
            st.value(ix + 1, iy),
            st.value(ix - 1, iy),
            st.value(ix, iy + 1),
            st.value(ix, iy - 1),
            st.value(ix, iy),
        );
        std::array::from_fn(|k| (a[k] + b[k] + c_[k] + d[k] - 4.0 * e[k]) / h2)
    };
    let fzzb: C4 = std::array::from_fn(|k| cr(lap[k] * 0.25));
    let h_mean = bilinear(sig, &fzzb, &nc).re / (2.0 * e2u);
    // f_zz at the cross node (uses the surrounding 3x3 block)
    let fxx: R4 = {
        let (a, b, c_) = (st.value(ix + 1, iy), st.value(ix, iy), st.value(ix - 1, iy));
        std::array::from_fn(|k| (a[k] - 2.0 * b[k] + c_[k]) / h2)
    };
    let fyy: R4 = {
        let (a, b, c_) = (st.value(ix, iy + 1), st.value(ix, iy), st.value(ix, iy - 1));
        std::array::from_fn(|k| (a[k] - 2.0 * b[k] + c_[k]) / h2)
    };
    let fxy: R4 = {
        let (a, b, c_, d) = (
            st.value(ix + 1, iy + 1),
            st.value(ix + 1, iy - 1),
            st.value(ix - 1, iy + 1),
            st.value(ix - 1, iy - 1),
        );
        std::array::from_fn(|k| (a[k] - b[k] - c_[k] + d[k]) / (4.0 * h2))
    };
    let fzz: C4 = std::array::from_fn(|k| {
        (cr(fxx[k] - fyy[k]) - Complex64::new(0.0, 2.0) * fxy[k]) * cr(0.25)
    });
    let q = bilinear(sig, &fzz, &nc);
    Ok(CrossData {
        u: 0.5 * e2u.ln(),
        q,
        h_mean,
        normal: n,
    })
}

/// Analyze the surface at one probe point with stencil spacing `h`.
pub fn analyze_at(
    sampler: &dyn SurfaceSampler,
    z0: Complex64,
    h: f64,
    hopf_factor: Complex64,
) -> Result<GeomSample> {
    let ambient = sampler.ambient();
    let sig = coord_signature(ambient);
    let mut f = [[[0.0; 4]; 5]; 5];
    for ix in -2i32..=2 {
        for iy in -2i32..=2 {
            let z = z0 + Complex64::new(ix as f64 * h, iy as f64 * h);
            f[(ix + 2) as usize][(iy + 2) as usize] = sampler.point(z)?.coords();
        }
    }
    let st = Stencil { sig, ambient, h, f };

    let center = cross_data(&st, 0, 0)?;
    let e2u = (2.0 * center.u).exp();
    let fz = st.fz(0, 0);
    let conformal_defect = bilinear(sig, &fz, &fz).norm() / (2.0 * e2u);

    // cross neighbors for u_zz̄, Codazzi and harmonicity
    let east = cross_data(&st, 1, 0)?;
    let west = cross_data(&st, -1, 0)?;
    let north = cross_data(&st, 0, 1)?;
    let south = cross_data(&st, 0, -1)?;

    let u_lap = (east.u + west.u + north.u + south.u - 4.0 * center.u) / (h * h);
    let u_zzbar = 0.25 * u_lap;
    // Intrinsic curvature from the first fundamental form alone (Brioschi);
    // in conformal charts this reduces to -e^{-2u} u_zz̄, but unlike that
    // formula it stays valid on non-conformal parametrizations (the flat-
    // surface chart is one). A wider stencil keeps the third-order
    // differencing well conditioned.
    let k_intrinsic = brioschi_k(sampler, z0, 10.0 * h)?;

    // extrinsic curvature from the shape operator S = g^{-1} b
    let (fx, fy) = (st.fx(0, 0), st.fy(0, 0));
    let nx: R4 = lincomb(1.0 / (2.0 * h), east.normal, -1.0 / (2.0 * h), west.normal);
    let ny: R4 = lincomb(1.0 / (2.0 * h), north.normal, -1.0 / (2.0 * h), south.normal);
    let g11 = bilinear_r(sig, fx, fx);
    let g12 = bilinear_r(sig, fx, fy);
    let g22 = bilinear_r(sig, fy, fy);
    let b11 = -bilinear_r(sig, nx, fx);
    let b12 = -bilinear_r(sig, ny, fx);
    let b21 = -bilinear_r(sig, nx, fy);
    let b22 = -bilinear_r(sig, ny, fy);
    let det_g = g11 * g22 - g12 * g12;
    let k_extrinsic = (b11 * b22 - b12 * b21) / det_g;

    // Gauss residual: 4 u_zz̄ + 4 e^{2u} (H² + ε) - Q Q̄ e^{-2u}
    let eps = match ambient {
        Ambient::R3 => 0.0,
        Ambient::S3 => 1.0,
        Ambient::H3 => -1.0,
    };
    let gauss_lhs = 4.0 * u_zzbar + 4.0 * e2u * (center.h_mean * center.h_mean + eps)
        - center.q.norm_sqr() / e2u;
    let gauss_scale = (4.0 * u_zzbar.abs())
        .max(4.0 * e2u * (center.h_mean * center.h_mean + eps.abs()))
        .max(center.q.norm_sqr() / e2u)
        .max(1e-30);
    let gauss_residual = gauss_lhs.abs() / gauss_scale;

    // Codazzi residual: Q_z̄ - 2 H_z e^{2u}
    let ddx = |a: Complex64, b: Complex64| (a - b) / cr(2.0 * h);
    let q_x = ddx(east.q, west.q);
    let q_y = ddx(north.q, south.q);
    let q_zbar = (q_x + Complex64::new(0.0, 1.0) * q_y) * cr(0.5);
    let h_x = (east.h_mean - west.h_mean) / (2.0 * h);
    let h_y = (north.h_mean - south.h_mean) / (2.0 * h);
    let h_z = Complex64::new(h_x, -h_y) * cr(0.5);
    let codazzi_lhs = q_zbar - cr(2.0 * e2u) * h_z;
    let codazzi_scale = center.q.norm().max(2.0 * e2u).max(1e-30);
    let codazzi_residual = codazzi_lhs.norm() / codazzi_scale;
    let hopf_dbar = q_zbar.norm() / codazzi_scale;

    // harmonicity: tangential component of N_zz̄ relative to its magnitude
    let n_lap: R4 = std::array::from_fn(|k| {
        (east.normal[k] + west.normal[k] + north.normal[k] + south.normal[k]
            - 4.0 * center.normal[k])
            / (h * h)
    });
    let n_zzbar: R4 = std::array::from_fn(|k| 0.25 * n_lap[k]);
    let harmonicity = {
        let bx = bilinear_r(sig, n_zzbar, fx);
        let by = bilinear_r(sig, n_zzbar, fy);
        // tangential coefficients t = g^{-1} (bx, by)
        let t1 = (g22 * bx - g12 * by) / det_g;
        let t2 = (-g12 * bx + g11 * by) / det_g;
        let tang: R4 = lincomb(t1, fx, t2, fy);
        let denom = euclid_norm(n_zzbar).max(1e-30);
        euclid_norm(tang) / denom
    };

    let q_norm = center.q / hopf_factor;
    Ok(GeomSample {
        z: [z0.re, z0.im],
        conformal_defect,
        metric_factor: 4.0 * e2u,
        mean_curvature: center.h_mean,
        k_extrinsic,
        k_intrinsic,
        hopf_re: q_norm.re,
        hopf_im: q_norm.im,
        hopf_dbar,
        gauss_residual,
        codazzi_residual,
        harmonicity,
    })
}

/// Gaussian curvature from the first fundamental form by the Brioschi
/// formula, second-order central differences on a 5x5 stencil of spacing
/// `h`. E, F, G are the induced-metric coefficients in the (x, y) chart.
fn brioschi_k(sampler: &dyn SurfaceSampler, z0: Complex64, h: f64) -> Result<f64> {
    let sig = coord_signature(sampler.ambient());
    let mut f = [[[0.0; 4]; 5]; 5];
    for ix in -2i32..=2 {
        for iy in -2i32..=2 {
            let z = z0 + Complex64::new(ix as f64 * h, iy as f64 * h);
            f[(ix + 2) as usize][(iy + 2) as usize] = sampler.point(z)?.coords();
        }
    }
    let val = |ix: i32, iy: i32| -> R4 { f[(ix + 2) as usize][(iy + 2) as usize] };
    // E, F, G on the inner 3x3 block
    let mut e = [[0.0f64; 3]; 3];
    let mut ff = [[0.0f64; 3]; 3];
    let mut g = [[0.0f64; 3]; 3];
    for ix in -1i32..=1 {
        for iy in -1i32..=1 {
            let fx: R4 = std::array::from_fn(|k| {
                (val(ix + 1, iy)[k] - val(ix - 1, iy)[k]) / (2.0 * h)
            });
            let fy: R4 = std::array::from_fn(|k| {
                (val(ix, iy + 1)[k] - val(ix, iy - 1)[k]) / (2.0 * h)
            });
            e[(ix + 1) as usize][(iy + 1) as usize] = bilinear_r(sig, fx, fx);
            ff[(ix + 1) as usize][(iy + 1) as usize] = bilinear_r(sig, fx, fy);
            g[(ix + 1) as usize][(iy + 1) as usize] = bilinear_r(sig, fy, fy);
        }
    }
    let du = |m: &[[f64; 3]; 3]| (m[2][1] - m[0][1]) / (2.0 * h);
    let dv = |m: &[[f64; 3]; 3]| (m[1][2] - m[1][0]) / (2.0 * h);
    let duu = |m: &[[f64; 3]; 3]| (m[2][1] - 2.0 * m[1][1] + m[0][1]) / (h * h);
    let dvv = |m: &[[f64; 3]; 3]| (m[1][2] - 2.0 * m[1][1] + m[1][0]) / (h * h);
    let duv = |m: &[[f64; 3]; 3]| (m[2][2] - m[2][0] - m[0][2] + m[0][0]) / (4.0 * h * h);
    let (e0, f0, g0) = (e[1][1], ff[1][1], g[1][1]);
    let det3 = |m: [[f64; 3]; 3]| -> f64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let m1 = [
        [
            -0.5 * dvv(&e) + duv(&ff) - 0.5 * duu(&g),
            0.5 * du(&e),
            du(&ff) - 0.5 * dv(&e),
        ],
        [dv(&ff) - 0.5 * du(&g), e0, f0],
        [0.5 * dv(&g), f0, g0],
    ];
    let m2 = [
        [0.0, 0.5 * dv(&e), 0.5 * du(&g)],
        [0.5 * dv(&e), e0, f0],
        [0.5 * du(&g), f0, g0],
    ];
    let den = (e0 * g0 - f0 * f0).powi(2);
    if den.abs() < 1e-30 {
        return Err(Error::DegenerateMetric { value: den });
    }
    Ok((det3(m1) - det3(m2)) / den)
}

/// Run the verifier over a set of probe points.
pub fn analyze(
    sampler: &dyn SurfaceSampler,
    probes: &[Complex64],
    options: &GeomOptions,
) -> Result<GeomReport> {
    let samples = crate::util::try_map_collect(probes.to_vec(), |z| {
        analyze_at(sampler, z, options.stencil, options.hopf_factor)
    })?;
    let n = samples.len().max(1) as f64;
    let h_mean = samples.iter().map(|s| s.mean_curvature).sum::<f64>() / n;
    let agg = |f: &dyn Fn(&GeomSample) -> f64| samples.iter().map(f).fold(0.0, f64::max);
    Ok(GeomReport {
        ambient: sampler.ambient().tag().into(),
        stencil: options.stencil,
        conformal_defect_max: agg(&|s| s.conformal_defect),
        h_mean,
        h_max_dev: agg(&|s| (s.mean_curvature - h_mean).abs()),
        k_intrinsic_mean: samples.iter().map(|s| s.k_intrinsic).sum::<f64>() / n,
        gauss_residual_max: agg(&|s| s.gauss_residual),
        codazzi_residual_max: agg(&|s| s.codazzi_residual),
        harmonicity_max: agg(&|s| s.harmonicity),
        hopf_dbar_max: agg(&|s| s.hopf_dbar),
        samples,
    })
}

/// Uniform interior probe grid for a domain, shrunk away from the boundary
/// so the 5x5 stencil stays inside.
pub fn probe_grid(domain: &crate::mesh::DomainSpec, per_side: usize) -> Vec<Complex64> {
    domain.sample_points(per_side * per_side)
}

// ---------------------------------------------------------------------------
// Frame-level checks: Smyth symmetry and Lawson relations
// ---------------------------------------------------------------------------

/// A z-indexed family of unitary frames (the Iwasawa F of a pipeline).
pub type FrameField = Arc<dyn Fn(Complex64) -> Result<TwistedLoop> + Send + Sync>;

/// Sampler over a frame field through a Sym formula.
pub struct FrameSampler {
    pub frame: FrameField,
    pub params: SymParams,
}

impl SurfaceSampler for FrameSampler {
    fn ambient(&self) -> Ambient {
        self.params.ambient()
    }
    fn point(&self, z: Complex64) -> Result<AmbientPoint> {
        let f = (self.frame)(z)?;
        Ok(sym(&f, &self.params)?.0)
    }
}

/// Reflection matrix A_ℓ = diag(e^{iπℓ/(k+2)}, e^{-iπℓ/(k+2)}).
pub fn smyth_reflection(k: u32, ell: u32) -> Mat2 {
    let ang = std::f64::consts::PI * ell as f64 / (k as f64 + 2.0);
    Mat2::diag(
        Complex64::from_polar(1.0, ang),
        Complex64::from_polar(1.0, -ang),
    )
}

/// Frame-level Smyth residual: max over sampled z and λ of
/// ‖F(R_ℓ(z), λ) - A_ℓ conj(F(z, λ̄)) A_ℓ^{-1}‖ with
/// R_ℓ(z) = e^{2πiℓ/(k+2)} z̄. Requires real c and φ(0) = I upstream.
pub fn smyth_symmetry_check(
    frame: &FrameField,
    k: u32,
    ell: u32,
    zs: &[Complex64],
    lambdas: &[Complex64],
) -> Result<f64> {
    let a = smyth_reflection(k, ell);
    let a_inv = a.inv()?;
    let rot = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * ell as f64 / (k as f64 + 2.0));
    let mut residual = 0.0f64;
    for &z in zs {
        let f_ref = frame(rot * z.conj())?;
        let f_conj = frame(z)?.conj_coeffs();
        for &lam in lambdas {
            let lhs = f_ref.eval(lam);
            let rhs = a * f_conj.eval(lam) * a_inv;
            residual = residual.max((lhs - rhs).norm());
        }
    }
    Ok(residual)
}

/// Surface-level Smyth residual: max over z of
/// ‖f(R_ℓ(z)) + A_ℓ conj(f(z)) A_ℓ^{-1}‖ at λ = 1.
pub fn smyth_surface_check(
    frame: &FrameField,
    k: u32,
    ell: u32,
    zs: &[Complex64],
    h: f64,
) -> Result<f64> {
    let a = smyth_reflection(k, ell);
    let a_inv = a.inv()?;
    let rot = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * ell as f64 / (k as f64 + 2.0));
    let mut residual = 0.0f64;
    for &z in zs {
        let (f1, _) = sym(&frame(rot * z.conj())?, &SymParams::R3 { h, lambda0: cr(1.0) })?;
        let (f0, _) = sym(&frame(z)?, &SymParams::R3 { h, lambda0: cr(1.0) })?;
        let rhs = (a * f0.mat.conj() * a_inv).scale(cr(-1.0));
        residual = residual.max((f1.mat - rhs).norm());
    }
    Ok(residual)
}

/// Lawson-relation measurement: one frame, Sym into all three space forms
/// with parameter choices mapping to the same metric/Hopf data, mean
/// curvatures measured independently by [`analyze`].
#[derive(Debug, Clone, Serialize)]
pub struct LawsonReport {
    pub h_r3: f64,
    pub h_s3: f64,
    pub h_h3: f64,
    /// |H_s² + 1 - H_r²|
    pub residual_sr: f64,
    /// |H_r² + 1 - H_h²|
    pub residual_rh: f64,
}

pub fn lawson_check(
    frame: FrameField,
    gamma: f64,
    probes: &[Complex64],
    stencil: f64,
) -> Result<LawsonReport> {
    // Parameter correspondence at equal (u, Q): H_s = cot 2γ becomes the
    // measured value, H_r = 1/sin 2γ (so H_s²+1 = H_r²), H_h = √(H_r²+1).
    let h_r_target = 1.0 / (2.0 * gamma).sin();
    let h_h_target = (h_r_target * h_r_target + 1.0).sqrt();
    // coth(-q) = h_h  =>  q = -arcoth(h_h)
    let q = -0.5 * ((h_h_target + 1.0) / (h_h_target - 1.0)).ln();

    let mk = |params: SymParams| FrameSampler { frame: frame.clone(), params };
    let opts = |params: &SymParams| GeomOptions {
        stencil,
        hopf_factor: GeomOptions::for_sym(params, 1.0).hopf_factor,
    };
    let p_r = SymParams::R3 { h: h_r_target, lambda0: cr(1.0) };
    let p_s = SymParams::S3 { gamma1: -gamma, gamma2: gamma };
    let p_h = SymParams::H3 { q, psi: 0.0 };
    let rep_r = analyze(&mk(p_r), probes, &opts(&p_r))?;
    let rep_s = analyze(&mk(p_s), probes, &opts(&p_s))?;
    let rep_h = analyze(&mk(p_h), probes, &opts(&p_h))?;
    let (h_r, h_s, h_h) = (rep_r.h_mean, rep_s.h_mean, rep_h.h_mean);
    Ok(LawsonReport {
        h_r3: h_r,
        h_s3: h_s,
        h_h3: h_h,
        residual_sr: (h_s * h_s + 1.0 - h_r * h_r).abs(),
        residual_rh: (h_r * h_r + 1.0 - h_h * h_h).abs(),
    })
}
