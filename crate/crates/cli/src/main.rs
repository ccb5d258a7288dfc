//! Command-line front end: wires scene configs into the surface pipeline.
//!
//! Exit codes: 0 success, 2 scene/parameter validation error, 3 numerical
//! failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dpw_forge::scene::{self, SceneConfig};

#[derive(Parser)]
#[command(name = "dpw-forge", version, about = "CMC surfaces in R3, S3 and H3 via the loop-group method")]
struct Cli {
    /// Worker thread cap (DPW_FORGE_THREADS as fallback).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct SceneArgs {
    /// Scene config JSON file; explicit flags override its fields.
    #[arg(long)]
    scene: Option<PathBuf>,
    /// Surface selector: dpw family (cylinder|sphere|delaunay|smyth) or a
    /// catalog name for --representation weierstrass|bryant|flat.
    #[arg(long)]
    surface: Option<String>,
    /// Representation the surface name belongs to (default dpw).
    #[arg(long)]
    representation: Option<String>,
    /// Ambient space: r3 | s3 | h3.
    #[arg(long)]
    ambient: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    h: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    q: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    psi: Option<f64>,
    /// Delaunay coefficient r (ignored with --close).
    #[arg(long, allow_negative_numbers = true)]
    r: Option<f64>,
    /// Delaunay coefficient s (real part; use the scene file for complex).
    #[arg(long, allow_negative_numbers = true)]
    s: Option<f64>,
    /// Delaunay coefficient t.
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    /// Solve the closing condition for r.
    #[arg(long)]
    close: bool,
    /// Smyth exponent k / catalog integer parameter n.
    #[arg(long)]
    k: Option<u32>,
    /// Scalar parameter c for smyth/catalog surfaces.
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Catenoid-cousin exponent μ.
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    /// Flat rotational-family exponent α.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long)]
    loop_order: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    #[arg(long)]
    nu: Option<usize>,
    #[arg(long)]
    nv: Option<usize>,
    /// Output OBJ path.
    #[arg(long)]
    obj: Option<PathBuf>,
    /// Output JSON report path.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline: mesh, OBJ export, verification report.
    Generate(SceneArgs),
    /// Run only the finite-difference verification of a scene.
    Verify(SceneArgs),
    /// Print the monodromy closing residuals of a Delaunay scene.
    Period(SceneArgs),
    /// Print the closed-form weight report of a Delaunay scene.
    Weight(SceneArgs),
    /// Factorization round-trip self-test.
    Selftest {
        /// Number of random cases.
        #[arg(long, default_value_t = 25)]
        cases: usize,
        /// Loop truncation order.
        #[arg(long, default_value_t = 16)]
        order: usize,
    },
}

fn load_scene(args: &SceneArgs) -> Result<SceneConfig, dpw_forge::Error> {
    let mut cfg = match &args.scene {
        Some(path) => SceneConfig::from_json(&std::fs::read_to_string(path)?)?,
        None => SceneConfig {
            surface: scene::SurfaceSpec::Dpw {
                family: Some("cylinder".into()),
                r: None,
                s: None,
                t: None,
                close: false,
                c: None,
                k: None,
                terms: None,
            },
            ambient: Default::default(),
            domain: None,
            numerics: Default::default(),
            outputs: Default::default(),
        },
    };
    apply_overrides(&mut cfg, args)?;
    Ok(cfg)
}

/// Flags override scene-file fields.
fn apply_overrides(cfg: &mut SceneConfig, args: &SceneArgs) -> Result<(), dpw_forge::Error> {
    if let Some(name) = &args.surface {
        let rep = args.representation.as_deref().unwrap_or("dpw");
        cfg.surface = match rep {
            "dpw" => scene::SurfaceSpec::Dpw {
                family: Some(name.clone()),
                r: args.r,
                s: args.s.map(|v| [v, 0.0]),
                t: args.t.map(|v| [v, 0.0]),
                close: args.close,
                c: args.c.map(|v| [v, 0.0]),
                k: args.k,
                terms: None,
            },
            "weierstrass" => scene::SurfaceSpec::Weierstrass {
                name: name.clone(),
                n: args.k,
                c: args.c,
            },
            "bryant" => scene::SurfaceSpec::Bryant {
                name: name.clone(),
                c: args.c,
                mu: args.mu,
                dual: false,
            },
            "flat" => scene::SurfaceSpec::Flat {
                name: name.clone(),
                alpha: args.alpha,
                c: args.c,
            },
            other => {
                return Err(dpw_forge::Error::BadScene(format!(
                    "unknown representation `{other}`"
                )))
            }
        };
    } else if let scene::SurfaceSpec::Dpw { r, s, t, close, c, k, .. } = &mut cfg.surface {
        if let Some(v) = args.r {
            *r = Some(v);
        }
        if let Some(v) = args.s {
            *s = Some([v, 0.0]);
        }
        if let Some(v) = args.t {
            *t = Some([v, 0.0]);
        }
        if args.close {
            *close = true;
        }
        if let Some(v) = args.c {
            *c = Some([v, 0.0]);
        }
        if let Some(v) = args.k {
            *k = Some(v);
        }
    }
    if let Some(tag) = &args.ambient {
        cfg.ambient.tag = tag.clone();
    }
    if args.h.is_some() {
        cfg.ambient.h = args.h;
    }
    if args.gamma1.is_some() {
        cfg.ambient.gamma1 = args.gamma1;
    }
    if args.gamma2.is_some() {
        cfg.ambient.gamma2 = args.gamma2;
    }
    if args.q.is_some() {
        cfg.ambient.q = args.q;
    }
    if args.psi.is_some() {
        cfg.ambient.psi = args.psi;
    }
    if args.loop_order.is_some() {
        cfg.numerics.loop_order = args.loop_order;
    }
    if args.tol.is_some() {
        cfg.numerics.tol = args.tol;
    }
    if args.nu.is_some() || args.nv.is_some() {
        let mut dom = cfg.domain.clone().unwrap_or(scene::DomainJson {
            kind: "auto".into(),
            u: None,
            v: None,
            nu: None,
            nv: None,
            margin: None,
        });
        if args.nu.is_some() {
            dom.nu = args.nu;
        }
        if args.nv.is_some() {
            dom.nv = args.nv;
        }
        cfg.domain = Some(dom);
    }
    if let Some(p) = &args.obj {
        cfg.outputs.obj = Some(p.display().to_string());
    }
    if let Some(p) = &args.report {
        cfg.outputs.report = Some(p.display().to_string());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), dpw_forge::Error> {
    match &cli.command {
        Command::Generate(args) => {
            let cfg = load_scene(args)?;
            let (mesh, report) = scene::run_generate(&cfg)?;
            eprintln!(
                "generated {} vertices, {} triangles (ambient {})",
                mesh.vertex_count(),
                mesh.faces.len(),
                mesh.ambient.tag()
            );
            if let Some(gap) = report.seam_gap {
                eprintln!("seam gap: {gap:.3e}");
            }
            eprintln!(
                "H mean {:.6}, conformal defect max {:.3e}, gauss residual max {:.3e}",
                report.geometry.h_mean,
                report.geometry.conformal_defect_max,
                report.geometry.gauss_residual_max
            );
            if cfg.outputs.obj.is_none() && cfg.outputs.report.is_none() {
                println!("{}", serde_json::to_string_pretty(&report)?);
            }
            Ok(())
        }
        Command::Verify(args) => {
            let cfg = load_scene(args)?;
            let report = scene::run_verify(&cfg)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(())
        }
        Command::Period(args) => {
            let cfg = load_scene(args)?;
            let (res, closed) = scene::run_period(&cfg)?;
            println!("monodromy residual: {:.3e}", res.monodromy_residual);
            if let Some(d) = res.derivative_residual {
                println!("lambda-derivative residual: {d:.3e}");
            }
            println!("{}", if closed { "CLOSED" } else { "OPEN" });
            Ok(())
        }
        Command::Weight(args) => {
            let cfg = load_scene(args)?;
            let rep = scene::run_weight(&cfg)?;
            println!("{}", serde_json::to_string_pretty(&rep)?);
            Ok(())
        }
        Command::Selftest { cases, order } => {
            let rep = scene::run_selftest(*cases, *order)?;
            println!("{}", serde_json::to_string_pretty(&rep)?);
            if !rep.passed {
                return Err(dpw_forge::Error::NoConvergence {
                    residual: rep.max_iwasawa_error.max(rep.max_birkhoff_error),
                    max_size: 0,
                });
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| std::env::var("DPW_FORGE_THREADS").ok().and_then(|v| v.parse().ok()));
    let result = scene::with_thread_cap(threads, move || run(cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(scene::exit_code(&e) as u8)
        }
    }
}
