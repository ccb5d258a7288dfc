//! Scene configuration (JSON schema), pipeline assembly and the operations
//! behind the command-line front end: generate, verify, period, weight and
//! the factorization self-test.

use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::delaunay::{self, DelaunayParams, PeriodResiduals, WeightReport};
use crate::error::{Error, Result};
use crate::factor::iwasawa;
use crate::geomcheck::{self, FrameField, GeomOptions, GeomReport};
use crate::holode::PhiSolution;
use crate::loopalg::{cr, TwistedLoop};
use crate::mesh::{self, DomainSpec, SurfaceMesh, SurfaceSampler};
use crate::potential::{builtin, pullback_log, BuiltinFamily, HolomorphicPotential, PotentialEval, RationalMat};
use crate::rational::{Poly, RationalFn};
use crate::sym::{sym, Ambient, AmbientPoint, SymParams};

// ---------------------------------------------------------------------------
// JSON schema
// ---------------------------------------------------------------------------

/// Complex number as a [re, im] pair in configs.
pub type CJson = [f64; 2];

fn cx(v: CJson) -> Complex64 {
    Complex64::new(v[0], v[1])
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: Vec<CJson>,
    pub den: Vec<CJson>,
    #[serde(default)]
    pub punctures: Vec<CJson>,
}

impl RationalJson {
    fn build(&self) -> RationalFn {
        RationalFn::new(
            Poly(self.num.iter().map(|&v| cx(v)).collect()),
            Poly(self.den.iter().map(|&v| cx(v)).collect()),
            self.punctures.iter().map(|&v| cx(v)).collect(),
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PotentialTermJson {
    pub j: i64,
    pub matrix: [[RationalJson; 2]; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurfaceSpec {
    /// Loop-group pipeline surface: a built-in potential family or explicit
    /// potential terms.
    Dpw {
        #[serde(default)]
        family: Option<String>,
        #[serde(default)]
        r: Option<f64>,
        #[serde(default)]
        s: Option<CJson>,
        #[serde(default)]
        t: Option<CJson>,
        /// Solve the closing condition for r.
        #[serde(default)]
        close: bool,
        #[serde(default)]
        c: Option<CJson>,
        #[serde(default)]
        k: Option<u32>,
        #[serde(default)]
        terms: Option<Vec<PotentialTermJson>>,
    },
    Weierstrass {
        name: String,
        #[serde(default)]
        n: Option<u32>,
        #[serde(default)]
        c: Option<f64>,
    },
    Bryant {
        name: String,
        #[serde(default)]
        c: Option<f64>,
        #[serde(default)]
        mu: Option<f64>,
        #[serde(default)]
        dual: bool,
    },
    Flat {
        name: String,
        #[serde(default)]
        alpha: Option<f64>,
        #[serde(default)]
        c: Option<f64>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AmbientSpec {
    pub tag: String,
    #[serde(default)]
    pub h: Option<f64>,
    #[serde(default)]
    pub lambda0_angle: Option<f64>,
    #[serde(default)]
    pub gamma1: Option<f64>,
    #[serde(default)]
    pub gamma2: Option<f64>,
    #[serde(default)]
    pub q: Option<f64>,
    #[serde(default)]
    pub psi: Option<f64>,
}

impl Default for AmbientSpec {
    fn default() -> Self {
        Self {
            tag: "r3".into(),
            h: None,
            lambda0_angle: None,
            gamma1: None,
            gamma2: None,
            q: None,
            psi: None,
        }
    }
}

impl AmbientSpec {
    pub fn sym_params(&self) -> Result<SymParams> {
        let params = match self.tag.as_str() {
            "r3" => SymParams::R3 {
                h: self.h.unwrap_or(0.5),
                lambda0: Complex64::from_polar(1.0, self.lambda0_angle.unwrap_or(0.0)),
            },
            "s3" => SymParams::S3 {
                gamma1: self.gamma1.unwrap_or(-0.5),
                gamma2: self.gamma2.unwrap_or(0.5),
            },
            "h3" => SymParams::H3 {
                q: self.q.unwrap_or(0.0),
                psi: self.psi.unwrap_or(0.0),
            },
            other => return Err(Error::BadScene(format!("unknown ambient tag `{other}`"))),
        };
        params.validate().map_err(|e| Error::BadScene(e.to_string()))?;
        Ok(params)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DomainJson {
    pub kind: String,
    #[serde(default)]
    pub u: Option<[f64; 2]>,
    #[serde(default)]
    pub v: Option<[f64; 2]>,
    #[serde(default)]
    pub nu: Option<usize>,
    #[serde(default)]
    pub nv: Option<usize>,
    #[serde(default)]
    pub margin: Option<f64>,
}

impl DomainJson {
    fn build(&self) -> Result<DomainSpec> {
        let nu = self.nu.unwrap_or(33);
        let nv = self.nv.unwrap_or(33);
        let dom = match self.kind.as_str() {
            "rectangle" => {
                let u = self.u.unwrap_or([-1.0, 1.0]);
                let v = self.v.unwrap_or([-1.0, 1.0]);
                DomainSpec::rectangle(u[0], u[1], v[0], v[1], nu, nv)
            }
            "log_polar" => {
                let u = self.u.unwrap_or([-0.5, 0.5]);
                let v = self.v.unwrap_or([0.0, 2.0 * std::f64::consts::PI]);
                DomainSpec::log_polar(u[0], u[1], v[0], v[1], nu, nv)
            }
            "slit_plane" => {
                let u = self.u.unwrap_or([-0.5, 0.5]);
                DomainSpec::slit_plane(u[0], u[1], self.margin.unwrap_or(0.3), nu, nv)
            }
            other => return Err(Error::BadScene(format!("unknown domain kind `{other}`"))),
        };
        dom.validate()?;
        Ok(dom)
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct NumericsSpec {
    #[serde(default)]
    pub loop_order: Option<usize>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub base: Option<CJson>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct OutputSpec {
    #[serde(default)]
    pub obj: Option<String>,
    #[serde(default)]
    pub report: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SceneConfig {
    pub surface: SurfaceSpec,
    #[serde(default)]
    pub ambient: AmbientSpec,
    #[serde(default)]
    pub domain: Option<DomainJson>,
    #[serde(default)]
    pub numerics: NumericsSpec,
    #[serde(default)]
    pub outputs: OutputSpec,
}

impl SceneConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SceneConfig =
            serde_json::from_str(text).map_err(|e| Error::BadScene(e.to_string()))?;
        Ok(cfg)
    }
}

// ---------------------------------------------------------------------------
// Pipeline samplers
// ---------------------------------------------------------------------------

/// The generic loop-group pipeline as a surface sampler:
/// potential → holomorphic frame → Iwasawa → Sym.
pub struct DpwSampler {
    pub phi: PhiSolution,
    pub sym_params: SymParams,
    pub factor_tol: f64,
}

impl DpwSampler {
    pub fn frame(&self, w: Complex64) -> Result<TwistedLoop> {
        let phi = self.phi.value_at(w)?;
        Ok(iwasawa(&phi, self.factor_tol)?.f)
    }

    /// Iwasawa result (including B) at a parameter point; exposes the
    /// metric data ρ = B(0) diagonal for verification.
    pub fn split(&self, w: Complex64) -> Result<crate::factor::IwasawaResult> {
        let phi = self.phi.value_at(w)?;
        iwasawa(&phi, self.factor_tol)
    }

    pub fn frame_field(self: &Arc<Self>) -> FrameField {
        let this = self.clone();
        Arc::new(move |w| this.frame(w))
    }
}

impl SurfaceSampler for DpwSampler {
    fn ambient(&self) -> Ambient {
        self.sym_params.ambient()
    }
    fn point(&self, w: Complex64) -> Result<AmbientPoint> {
        let f = self.frame(w)?;
        Ok(sym(&f, &self.sym_params)?.0)
    }
}

/// Everything assembled from a scene: the sampler, grid domain, and the
/// auxiliary handles used by verification commands.
pub struct ScenePipeline {
    pub sampler: Arc<dyn SurfaceSampler>,
    pub domain: DomainSpec,
    pub order: usize,
    pub sym_params: Option<SymParams>,
    pub delaunay: Option<DelaunayParams>,
    pub frame: Option<FrameField>,
    pub dpw: Option<Arc<DpwSampler>>,
}

fn default_domain_kind(surface: &SurfaceSpec) -> &'static str {
    match surface {
        SurfaceSpec::Dpw { family, .. } if family.as_deref() == Some("delaunay") => "log_polar",
        SurfaceSpec::Bryant { name, .. } if name == "catenoid_cousin" => "slit_plane",
        SurfaceSpec::Flat { .. } => "log_polar",
        SurfaceSpec::Weierstrass { name, .. } if name == "catenoid" => "log_polar",
        _ => "rectangle",
    }
}

/// Build the pipeline a scene describes. This is the seam every command
/// goes through, so scene validation errors surface here.
pub fn build(cfg: &SceneConfig) -> Result<ScenePipeline> {
    let mut domain_json = cfg.domain.clone().unwrap_or(DomainJson {
        kind: "auto".into(),
        u: None,
        v: None,
        nu: None,
        nv: None,
        margin: None,
    });
    if domain_json.kind == "auto" {
        domain_json.kind = default_domain_kind(&cfg.surface).into();
    }
    let domain = domain_json.build()?;
    let tol = cfg.numerics.tol.unwrap_or(1e-10);

    match &cfg.surface {
        SurfaceSpec::Dpw { family, r, s, t, close, c, k, terms } => {
            let sym_params = cfg.ambient.sym_params()?;
            let mut order = cfg.numerics.loop_order.unwrap_or(16);
            let mut delaunay_params = None;

            let potential: Arc<dyn PotentialEval> = if let Some(terms) = terms {
                let built: Vec<(i64, RationalMat)> = terms
                    .iter()
                    .map(|t| {
                        (
                            t.j,
                            [
                                [t.matrix[0][0].build(), t.matrix[0][1].build()],
                                [t.matrix[1][0].build(), t.matrix[1][1].build()],
                            ],
                        )
                    })
                    .collect();
                let pot = HolomorphicPotential::new(built, domain.clone());
                let rep = pot.validate();
                if !rep.is_ok() {
                    return Err(Error::BadScene(format!(
                        "invalid potential: {}",
                        rep.errors.join("; ")
                    )));
                }
                Arc::new(pot)
            } else {
                let family = family.as_deref().unwrap_or("cylinder");
                let fam = match family {
                    "cylinder" => BuiltinFamily::Cylinder,
                    "sphere" => BuiltinFamily::Sphere,
                    "smyth" => BuiltinFamily::Smyth {
                        c: c.map(cx).unwrap_or(cr(1.0)),
                        k: k.unwrap_or(0),
                    },
                    "delaunay" => {
                        let s_v = s.map(cx).unwrap_or(cr(0.25));
                        let t_v = t.map(cx).unwrap_or(cr(0.25));
                        let params = if *close {
                            delaunay::close(s_v, t_v, sym_params)?
                        } else {
                            DelaunayParams { r: r.unwrap_or(0.0), s: s_v, t: t_v, sym: sym_params }
                        };
                        if cfg.numerics.loop_order.is_none()
                            && matches!(sym_params, SymParams::H3 { .. })
                        {
                            order = 24;
                        }
                        let fam = BuiltinFamily::Delaunay {
                            r: params.r,
                            s: params.s,
                            t: params.t,
                        };
                        delaunay_params = Some(params);
                        fam
                    }
                    other => return Err(Error::BadScene(format!("unknown dpw family `{other}`"))),
                };
                Arc::new(builtin(&fam, domain.clone())?)
            };

            // log-polar domains integrate the pullback through z = e^w
            let effective: Arc<dyn PotentialEval> = if domain.full_turn()
                || matches!(domain.kind, crate::mesh::DomainKind::LogPolar { .. })
            {
                Arc::new(pullback_log(potential, domain.clone()))
            } else {
                potential
            };

            let base = cfg
                .numerics
                .base
                .map(cx)
                .unwrap_or_else(|| default_base(&domain));
            let phi = PhiSolution::new(effective, base, order, tol.min(1e-10));
            let dpw = Arc::new(DpwSampler {
                phi,
                sym_params,
                factor_tol: tol.min(1e-9),
            });
            Ok(ScenePipeline {
                sampler: dpw.clone(),
                domain,
                order,
                sym_params: Some(sym_params),
                delaunay: delaunay_params,
                frame: Some(dpw.frame_field()),
                dpw: Some(dpw),
            })
        }
        SurfaceSpec::Weierstrass { name, n, c } => {
            if cfg.ambient.tag != "r3" {
                return Err(Error::BadScene(
                    "weierstrass surfaces live in r3".into(),
                ));
            }
            let kind = crate::weierstrass::MinimalSurface::from_name(name, *n, *c)?;
            let data = crate::weierstrass::catalog(&kind, domain.clone())?;
            let log_param = matches!(domain.kind, crate::mesh::DomainKind::LogPolar { .. });
            let sampler = Arc::new(LogParamAdapter {
                inner: crate::weierstrass::MinimalSampler {
                    data,
                    base: if log_param { cr(1.0) } else { cr(0.0) },
                    tol: tol.min(1e-11),
                },
                log_param,
            });
            Ok(ScenePipeline {
                sampler,
                domain,
                order: 0,
                sym_params: None,
                delaunay: None,
                frame: None,
                dpw: None,
            })
        }
        SurfaceSpec::Bryant { name, c, mu, dual } => {
            let kind = match name.as_str() {
                "horosphere" => crate::h3reps::BryantSurfaceKind::Horosphere {
                    c1: cr(0.0),
                    c2: cr(c.unwrap_or(1.0)),
                },
                "enneper_cousin" => crate::h3reps::BryantSurfaceKind::EnneperCousin {
                    c: c.unwrap_or(1.0),
                },
                "helicoid_cousin" => crate::h3reps::BryantSurfaceKind::HelicoidCousin {
                    c: c.unwrap_or(1.0),
                },
                "catenoid_cousin" => crate::h3reps::BryantSurfaceKind::CatenoidCousin {
                    mu: mu.unwrap_or(0.8),
                },
                "trinoid_cousin_dual" => crate::h3reps::BryantSurfaceKind::TrinoidCousinDual {
                    c: c.unwrap_or(0.5),
                },
                other => return Err(Error::UnknownSurface(other.into())),
            };
            let data = crate::h3reps::bryant_catalog(&kind, domain.clone())?;
            let log_param = matches!(domain.kind, crate::mesh::DomainKind::LogPolar { .. });
            let sampler = Arc::new(crate::h3reps::BryantSampler {
                base: if log_param || data.has_branch_cut() { cr(1.0) } else { cr(0.0) },
                data,
                tol: tol.min(1e-11),
                log_parametrized: log_param,
                dual: *dual,
            });
            Ok(ScenePipeline {
                sampler,
                domain,
                order: 0,
                sym_params: None,
                delaunay: None,
                frame: None,
                dpw: None,
            })
        }
        SurfaceSpec::Flat { name, alpha, c } => {
            if name != "flat_rotational" {
                return Err(Error::UnknownSurface(name.clone()));
            }
            let data = crate::h3reps::flat_rotational(
                alpha.unwrap_or(-1.0),
                c.unwrap_or(1.0),
                domain.clone(),
            )?;
            let log_param = matches!(domain.kind, crate::mesh::DomainKind::LogPolar { .. });
            let sampler = Arc::new(crate::h3reps::FlatSampler {
                base: cr(1.0),
                data,
                tol: tol.min(1e-11),
                log_parametrized: log_param,
            });
            Ok(ScenePipeline {
                sampler,
                domain,
                order: 0,
                sym_params: None,
                delaunay: None,
                frame: None,
                dpw: None,
            })
        }
    }
}

fn default_base(domain: &DomainSpec) -> Complex64 {
    match domain.kind {
        crate::mesh::DomainKind::Rectangle { x0, x1, y0, y1 } => {
            // center, which is the origin for symmetric rectangles
            Complex64::new(0.5 * (x0 + x1), 0.5 * (y0 + y1))
        }
        crate::mesh::DomainKind::LogPolar { log_rho0, log_rho1, theta0, .. } => {
            Complex64::new(0.5 * (log_rho0 + log_rho1), theta0)
        }
    }
}

/// Adapter running a ℝ³ sampler through z = e^w when the domain is
/// log-polar.
struct LogParamAdapter {
    inner: crate::weierstrass::MinimalSampler,
    log_param: bool,
}

impl SurfaceSampler for LogParamAdapter {
    fn ambient(&self) -> Ambient {
        Ambient::R3
    }
    fn point(&self, w: Complex64) -> Result<AmbientPoint> {
        let z = if self.log_param { w.exp() } else { w };
        self.inner.point(z)
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

/// Full report bundling the scene echo, verification data and seam gaps.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub tool_version: String,
    pub scene: SceneConfig,
    pub seam_gap: Option<f64>,
    pub geometry: GeomReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<PeriodResiduals>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<WeightReport>,
}

/// Generate: run the pipeline over the domain grid, export the OBJ, verify
/// with the finite-difference checker, write the JSON report.
pub fn run_generate(cfg: &SceneConfig) -> Result<(SurfaceMesh, RunReport)> {
    let pipe = build(cfg)?;
    let mesh = mesh::sample(pipe.sampler.as_ref(), &pipe.domain, pipe.order)?;
    let report = verify_pipeline(cfg, &pipe, Some(&mesh))?;
    if let Some(path) = &cfg.outputs.obj {
        mesh::export_obj(&mesh, Path::new(path))?;
    }
    if let Some(path) = &cfg.outputs.report {
        std::fs::write(path, serde_json::to_string_pretty(&report)?)?;
    }
    Ok((mesh, report))
}

/// Verify: geometry checks only (no OBJ write unless requested by caller).
pub fn run_verify(cfg: &SceneConfig) -> Result<RunReport> {
    let pipe = build(cfg)?;
    let mesh = mesh::sample(pipe.sampler.as_ref(), &pipe.domain, pipe.order)?;
    let rep = verify_pipeline(cfg, &pipe, Some(&mesh))?;
    if let Some(path) = &cfg.outputs.report {
        std::fs::write(path, serde_json::to_string_pretty(&rep)?)?;
    }
    Ok(rep)
}

fn verify_pipeline(
    cfg: &SceneConfig,
    pipe: &ScenePipeline,
    mesh: Option<&SurfaceMesh>,
) -> Result<RunReport> {
    let probes = shrunk_probes(&pipe.domain, 4);
    let opts = match &pipe.sym_params {
        Some(p) => GeomOptions::for_sym(p, pipe.domain.scale()),
        None => GeomOptions {
            stencil: 1e-3 * pipe.domain.scale().max(1e-3),
            hopf_factor: cr(1.0),
        },
    };
    let geometry = geomcheck::analyze(pipe.sampler.as_ref(), &probes, &opts)?;
    let period = pipe
        .delaunay
        .as_ref()
        .map(|p| delaunay::period_residuals(p, pipe.order.max(16)));
    let weight = pipe
        .delaunay
        .as_ref()
        .and_then(|p| delaunay::weight(p).ok());
    Ok(RunReport {
        tool_version: crate::VERSION.into(),
        scene: cfg.clone(),
        seam_gap: mesh.and_then(|m| m.seam_gap()),
        geometry,
        period,
        weight,
    })
}

/// Interior probe points, pulled inward so the verifier stencil never
/// leaves the domain.
pub fn shrunk_probes(domain: &DomainSpec, per_side: usize) -> Vec<Complex64> {
    domain.sample_points(per_side * per_side)
}

/// Period command: monodromy closing residuals for a Delaunay scene.
pub fn run_period(cfg: &SceneConfig) -> Result<(PeriodResiduals, bool)> {
    let pipe = build(cfg)?;
    let params = pipe
        .delaunay
        .ok_or_else(|| Error::BadScene("period requires a delaunay surface".into()))?;
    let res = delaunay::period_residuals(&params, pipe.order.max(16));
    let closed = res.monodromy_residual < 1e-8
        && res.derivative_residual.map(|d| d < 1e-8).unwrap_or(true);
    Ok((res, closed))
}

/// Weight command: closed-form weight report for a Delaunay scene.
pub fn run_weight(cfg: &SceneConfig) -> Result<WeightReport> {
    let pipe = build(cfg)?;
    let params = pipe
        .delaunay
        .ok_or_else(|| Error::BadScene("weight requires a delaunay surface".into()))?;
    delaunay::weight(&params)
}

/// Self test: construct-then-split round trips for both factorizations.
#[derive(Debug, Clone, Serialize)]
pub struct SelfTestReport {
    pub cases: usize,
    pub order: usize,
    pub max_iwasawa_error: f64,
    pub max_birkhoff_error: f64,
    pub passed: bool,
}

pub fn run_selftest(cases: usize, order: usize) -> Result<SelfTestReport> {
    let errs = crate::util::try_map_collect((0..cases as u64).collect::<Vec<_>>(), |seed| {
        crate::factor::roundtrip_errors(seed, order)
    })?;
    let max_iw = errs.iter().map(|e| e.0).fold(0.0, f64::max);
    let max_bk = errs.iter().map(|e| e.1).fold(0.0, f64::max);
    Ok(SelfTestReport {
        cases,
        order,
        max_iwasawa_error: max_iw,
        max_birkhoff_error: max_bk,
        passed: max_iw < 1e-8 && max_bk < 1e-8,
    })
}

/// Exit code classification: 2 for validation problems, 3 for numerical
/// failures.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BadScene(_)
        | Error::BadParams { .. }
        | Error::BadGammas { .. }
        | Error::ZeroQ
        | Error::NoClosing { .. }
        | Error::UnknownSurface(_)
        | Error::BadFamily(_) => 2,
        _ => 3,
    }
}

/// Run a closure under a thread cap (rayon pool) when parallelism is
/// compiled in; the cap is ignored otherwise.
#[cfg(feature = "parallel")]
pub fn with_thread_cap<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
        _ => f(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_thread_cap<T>(threads: Option<usize>, f: impl FnOnce() -> T) -> T {
    let _ = threads;
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cylinder_scene_roundtrip() {
        let text = r#"{
            "surface": {"kind": "dpw", "family": "cylinder"},
            "ambient": {"tag": "r3", "h": 0.5},
            "domain": {"kind": "rectangle", "u": [-0.5, 0.5], "v": [-0.5, 0.5], "nu": 5, "nv": 5},
            "numerics": {"loop_order": 12}
        }"#;
        let cfg = SceneConfig::from_json(text).unwrap();
        let pipe = build(&cfg).unwrap();
        let m = mesh::sample(pipe.sampler.as_ref(), &pipe.domain, pipe.order).unwrap();
        assert_eq!(m.vertex_count(), 25);
        // echo round-trips through serde
        let echoed = serde_json::to_string(&cfg).unwrap();
        let _cfg2 = SceneConfig::from_json(&echoed).unwrap();
    }

    #[test]
    fn invalid_gammas_fail_at_build() {
        let text = r#"{
            "surface": {"kind": "dpw", "family": "cylinder"},
            "ambient": {"tag": "s3", "gamma1": 0.0, "gamma2": 3.141592653589793}
        }"#;
        let cfg = SceneConfig::from_json(text).unwrap();
        let err = match build(&cfg) {
            Err(e) => e,
            Ok(_) => panic!("expected a validation error"),
        };
        assert_eq!(exit_code(&err), 2);
    }

    #[test]
    fn close_flag_solves_r() {
        let text = r#"{
            "surface": {"kind": "dpw", "family": "delaunay", "s": [0.2, 0.0], "t": [0.2, 0.0], "close": true},
            "ambient": {"tag": "h3", "q": 0.5},
            "domain": {"kind": "log_polar", "u": [-0.3, 0.3], "nu": 3, "nv": 9}
        }"#;
        let cfg = SceneConfig::from_json(text).unwrap();
        let pipe = build(&cfg).unwrap();
        let p = pipe.delaunay.unwrap();
        assert!(p.closing_residual() < 1e-12);
        assert_eq!(pipe.order, 24);
    }

    #[test]
    fn selftest_passes_quickly() {
        let rep = run_selftest(3, 14).unwrap();
        assert!(rep.passed, "{rep:?}");
    }
}
