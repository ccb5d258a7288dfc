//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured values. Run with `cargo test --test acceptance -- --nocapture`
//! to see the per-criterion summary.

use std::sync::Arc;
use std::time::Instant;

use dpw_forge::delaunay::{self, DelaunayClass, DelaunayParams, DelaunaySampler};
use dpw_forge::factor::{self, gram_schmidt_sl2, iwasawa};
use dpw_forge::geomcheck::{self, analyze, analyze_at, GeomOptions};
use dpw_forge::holode::{self, PathSpec};
use dpw_forge::loopalg::{c, cr, unit_circle_points, Mat2, TwistedLoop};
use dpw_forge::mesh::{self, DomainSpec};
use dpw_forge::scene::{build, SceneConfig};
use dpw_forge::sym::SymParams;
use dpw_forge::util::SplitMix64;
use dpw_forge::weierstrass::{self, MinimalSampler, MinimalSurface};
use num_complex::Complex64;

fn scene(json: &str) -> SceneConfig {
    SceneConfig::from_json(json).expect("scene parses")
}

fn pass(id: u32, name: &str, detail: String) {
    println!("ACCEPTANCE {id:02} {name}: PASS ({detail})");
}

// -------------------------------------------------------------------------
// 1. Cylinder golden test
// -------------------------------------------------------------------------
#[test]
fn criterion_01_cylinder_golden() {
    let t0 = Instant::now();
    let cfg = scene(
        r#"{
        "surface": {"kind": "dpw", "family": "cylinder"},
        "ambient": {"tag": "r3", "h": 0.5},
        "domain": {"kind": "rectangle", "u": [-1, 1], "v": [-1, 1], "nu": 33, "nv": 33},
        "numerics": {"loop_order": 16}
    }"#,
    );
    let pipe = build(&cfg).unwrap();
    let m = mesh::sample(pipe.sampler.as_ref(), &pipe.domain, pipe.order).unwrap();
    let mut max_dev = 0.0f64;
    for iu in 0..33 {
        for iv in 0..33 {
            let z = pipe.domain.grid_point(iu, iv);
            let (x, y) = (z.re, z.im);
            let want = [-4.0 * x, -(4.0 * y).sin(), -(4.0 * y).cos()];
            let got = m.vertices[iu * 33 + iv];
            for k in 0..3 {
                max_dev = max_dev.max((got[k] - want[k]).abs());
            }
        }
    }
    let elapsed = t0.elapsed();
    assert!(max_dev < 1e-6, "pointwise deviation {max_dev}");
    assert!(elapsed.as_secs_f64() < 10.0, "runtime {elapsed:?}");
    pass(1, "cylinder golden", format!("max dev {max_dev:.2e}, {elapsed:?}"));
}

// -------------------------------------------------------------------------
// 2. Sphere golden test
// -------------------------------------------------------------------------
#[test]
fn criterion_02_sphere_golden() {
    let cfg = scene(
        r#"{
        "surface": {"kind": "dpw", "family": "sphere"},
        "ambient": {"tag": "r3", "h": 0.5},
        "domain": {"kind": "rectangle", "u": [-1, 1], "v": [-1, 1], "nu": 33, "nv": 33},
        "numerics": {"loop_order": 16}
    }"#,
    );
    let pipe = build(&cfg).unwrap();
    let m = mesh::sample(pipe.sampler.as_ref(), &pipe.domain, pipe.order).unwrap();
    let mut max_dev = 0.0f64;
    for iu in 0..33 {
        for iv in 0..33 {
            let z = pipe.domain.grid_point(iu, iv);
            let (x, y) = (z.re, z.im);
            let d = 1.0 + x * x + y * y;
            let want = [-4.0 * x / d, -4.0 * y / d, (-1.0 + 3.0 * x * x + 3.0 * y * y) / d];
            let got = m.vertices[iu * 33 + iv];
            for k in 0..3 {
                max_dev = max_dev.max((got[k] - want[k]).abs());
            }
        }
    }
    assert!(max_dev < 1e-6, "pointwise deviation {max_dev}");

    // explicit Iwasawa factors at 10 sample points
    let mut rng = SplitMix64::new(2024);
    let mut max_factor_dev = 0.0f64;
    for _ in 0..10 {
        let z = Complex64::new(rng.next_signed(), rng.next_signed());
        let mut phi = TwistedLoop::identity(16);
        phi.set_coeff(-1, Mat2::new(cr(0.0), z, cr(0.0), cr(0.0)));
        let r = iwasawa(&phi, 1e-10).unwrap();
        let s = 1.0 / (1.0 + z.norm_sqr()).sqrt();
        let mut f_want = TwistedLoop::zero(16, true);
        f_want.set_coeff(0, Mat2::diag(cr(s), cr(s)));
        f_want.set_coeff(-1, Mat2::new(cr(0.0), z * cr(s), cr(0.0), cr(0.0)));
        f_want.set_coeff(1, Mat2::new(cr(0.0), cr(0.0), -z.conj() * cr(s), cr(0.0)));
        let mut b_want = TwistedLoop::zero(16, true);
        b_want.set_coeff(0, Mat2::diag(cr(s), cr(1.0 / s)));
        b_want.set_coeff(1, Mat2::new(cr(0.0), cr(0.0), z.conj() * cr(s), cr(0.0)));
        max_factor_dev = max_factor_dev
            .max(r.f.coeff_distance(&f_want))
            .max(r.b.coeff_distance(&b_want));
    }
    assert!(max_factor_dev < 1e-8, "factor deviation {max_factor_dev}");
    pass(
        2,
        "sphere golden",
        format!("surface dev {max_dev:.2e}, factor dev {max_factor_dev:.2e}"),
    );
}

// -------------------------------------------------------------------------
// 3. Factorization round-trips
// -------------------------------------------------------------------------
#[test]
fn criterion_03_factorization_roundtrip() {
    let mut max_iw = 0.0f64;
    let mut max_bk = 0.0f64;
    for seed in 0..100u64 {
        let (e_iw, e_bk) = factor::roundtrip_errors(seed, 16).unwrap();
        max_iw = max_iw.max(e_iw);
        max_bk = max_bk.max(e_bk);
    }
    assert!(max_iw < 1e-8, "iwasawa roundtrip residual {max_iw}");
    assert!(max_bk < 1e-8, "birkhoff roundtrip residual {max_bk}");

    // constant SL2C matrices match the closed-form Gram-Schmidt split
    let mut rng = SplitMix64::new(7);
    let mut max_gs = 0.0f64;
    for _ in 0..20 {
        let m = Mat2::new(
            rng.next_complex(),
            rng.next_complex(),
            rng.next_complex(),
            rng.next_complex(),
        );
        if m.det().norm() < 0.1 {
            continue;
        }
        let m = m.scale(cr(1.0) / m.det().sqrt());
        let l = TwistedLoop::monomial(m, 0, 8, false);
        let r = iwasawa(&l, 1e-12).unwrap();
        let (u, t) = gram_schmidt_sl2(&m).unwrap();
        max_gs = max_gs
            .max((r.f.coeff(0) - u).norm())
            .max((r.b.coeff(0) - t).norm());
    }
    assert!(max_gs < 1e-12, "gram-schmidt deviation {max_gs}");
    pass(
        3,
        "factorization round-trip",
        format!("iwasawa {max_iw:.2e}, birkhoff {max_bk:.2e}, gram-schmidt {max_gs:.2e}"),
    );
}

// -------------------------------------------------------------------------
// 4. Delaunay closing (positive and negative controls)
// -------------------------------------------------------------------------
fn closed_parameter_sets() -> Vec<DelaunayParams> {
    let g = 0.4;
    let s3 = SymParams::S3 { gamma1: -g, gamma2: g };
    let h3 = SymParams::H3 { q: 0.5, psi: 0.0 };
    vec![
        delaunay::close(cr(0.25), cr(0.25), SymParams::r3_default()).unwrap(),
        delaunay::close(cr(0.3), cr(0.1), SymParams::r3_default()).unwrap(),
        delaunay::close(cr(0.375), cr(-0.125), SymParams::r3_default()).unwrap(),
        delaunay::close(cr(0.35), cr(0.05), SymParams::r3_default()).unwrap(),
        delaunay::close(cr(0.2), cr(0.15), s3).unwrap(),
        delaunay::close(cr(0.3), cr(-0.1), s3).unwrap(),
        delaunay::close(cr(0.25), cr(0.2), s3).unwrap(),
        delaunay::close(cr(0.2), cr(0.2), h3).unwrap(),
        delaunay::close(cr(0.3), cr(-0.08), h3).unwrap(),
        delaunay::close(cr(0.15), cr(0.15), h3).unwrap(),
    ]
}

#[test]
fn criterion_04_delaunay_closing() {
    let mut max_period = 0.0f64;
    let mut max_seam = 0.0f64;
    for p in closed_parameter_sets() {
        let order = if matches!(p.sym, SymParams::H3 { .. }) { 24 } else { 16 };
        let res = delaunay::period_residuals(&p, order);
        max_period = max_period
            .max(res.monodromy_residual)
            .max(res.derivative_residual.unwrap_or(0.0));
        let sampler = DelaunaySampler { params: p.clone(), order, tol: 1e-10 };
        let dom = delaunay::delaunay_domain(0.25, 4, 33);
        let m = mesh::sample(&sampler, &dom, order).unwrap();
        max_seam = max_seam.max(m.seam_gap().unwrap());
    }
    assert!(max_period < 1e-8, "monodromy residual {max_period}");
    assert!(max_seam < 1e-6, "seam gap {max_seam}");

    // negative control: perturbed r breaks the closing visibly
    let mut min_bad_seam = f64::INFINITY;
    for mut p in closed_parameter_sets() {
        p.r += 0.04;
        let order = if matches!(p.sym, SymParams::H3 { .. }) { 24 } else { 16 };
        let sampler = DelaunaySampler { params: p, order, tol: 1e-10 };
        let dom = delaunay::delaunay_domain(0.2, 3, 17);
        let m = mesh::sample(&sampler, &dom, order).unwrap();
        min_bad_seam = min_bad_seam.min(m.seam_gap().unwrap());
    }
    assert!(min_bad_seam > 1e-2, "perturbed seam gap only {min_bad_seam}");
    pass(
        4,
        "delaunay closing",
        format!(
            "period {max_period:.2e}, seam {max_seam:.2e}, perturbed seam ≥ {min_bad_seam:.2e}"
        ),
    );
}

// -------------------------------------------------------------------------
// 5. Curvature verification across the space forms
// -------------------------------------------------------------------------
fn probes_for(domain: &DomainSpec) -> Vec<Complex64> {
    domain.sample_points(9)
}

#[test]
fn criterion_05_curvature_verification() {
    struct Case {
        name: &'static str,
        json: String,
        target_h: f64,
    }
    let g = 0.4f64;
    let q = 0.5f64;
    let cot2g = 1.0 / (2.0 * g).tan();
    let coth_mq = 1.0 / (-q).tanh();
    let cases = vec![
        Case {
            name: "cylinder r3",
            json: r#"{"surface": {"kind": "dpw", "family": "cylinder"},
                      "ambient": {"tag": "r3", "h": 0.5},
                      "domain": {"kind": "rectangle", "u": [-0.8, 0.8], "v": [-0.8, 0.8], "nu": 5, "nv": 5},
                      "numerics": {"tol": 1e-12}}"#
                .into(),
            target_h: 0.5,
        },
        Case {
            name: "sphere r3",
            json: r#"{"surface": {"kind": "dpw", "family": "sphere"},
                      "ambient": {"tag": "r3", "h": 0.5},
                      "domain": {"kind": "rectangle", "u": [-0.8, 0.8], "v": [-0.8, 0.8], "nu": 5, "nv": 5},
                      "numerics": {"tol": 1e-12}}"#
                .into(),
            target_h: 0.5,
        },
        Case {
            name: "smyth k=1 r3",
            json: r#"{"surface": {"kind": "dpw", "family": "smyth", "c": [1,0], "k": 1},
                      "ambient": {"tag": "r3", "h": 0.5},
                      "domain": {"kind": "rectangle", "u": [-0.7, 0.7], "v": [-0.7, 0.7], "nu": 5, "nv": 5},
                      "numerics": {"tol": 1e-12}}"#
                .into(),
            target_h: 0.5,
        },
        Case {
            name: "delaunay r3",
            json: r#"{"surface": {"kind": "dpw", "family": "delaunay", "s": [0.3,0], "t": [0.1,0], "close": true},
                      "ambient": {"tag": "r3", "h": 0.5},
                      "domain": {"kind": "log_polar", "u": [-0.3, 0.3], "nu": 5, "nv": 9},
                      "numerics": {"tol": 1e-12}}"#
                .into(),
            target_h: 0.5,
        },
        Case {
            name: "delaunay s3",
            json: format!(
                r#"{{"surface": {{"kind": "dpw", "family": "delaunay", "s": [0.2,0], "t": [0.15,0], "close": true}},
                    "ambient": {{"tag": "s3", "gamma1": {}, "gamma2": {}}},
                    "domain": {{"kind": "log_polar", "u": [-0.3, 0.3], "nu": 5, "nv": 9}},
                    "numerics": {{"tol": 1e-12}}}}"#,
                -g, g
            ),
            target_h: cot2g,
        },
        Case {
            name: "cylinder-potential s3",
            json: format!(
                r#"{{"surface": {{"kind": "dpw", "family": "cylinder"}},
                    "ambient": {{"tag": "s3", "gamma1": {}, "gamma2": {}}},
                    "domain": {{"kind": "rectangle", "u": [-0.6, 0.6], "v": [-0.6, 0.6], "nu": 5, "nv": 5}},
                    "numerics": {{"tol": 1e-12}}}}"#,
                -g, g
            ),
            target_h: cot2g,
        },
        Case {
            name: "delaunay h3",
            json: format!(
                r#"{{"surface": {{"kind": "dpw", "family": "delaunay", "s": [0.2,0], "t": [0.2,0], "close": true}},
                    "ambient": {{"tag": "h3", "q": {q}}},
                    "domain": {{"kind": "log_polar", "u": [-0.3, 0.3], "nu": 5, "nv": 9}},
                    "numerics": {{"tol": 1e-12}}}}"#
            ),
            target_h: coth_mq,
        },
    ];
    let mut summary = Vec::new();
    for case in cases {
        let cfg = scene(&case.json);
        let pipe = build(&cfg).unwrap();
        let opts = GeomOptions::for_sym(pipe.sym_params.as_ref().unwrap(), 1.0);
        let rep = analyze(pipe.sampler.as_ref(), &probes_for(&pipe.domain), &opts).unwrap();
        let h_dev = rep.h_max_dev_from(case.target_h);
        assert!(h_dev < 1e-3, "{}: H deviation {h_dev}", case.name);
        assert!(
            rep.conformal_defect_max < 1e-5,
            "{}: conformal defect {}",
            case.name,
            rep.conformal_defect_max
        );
        assert!(
            rep.gauss_residual_max < 1e-3,
            "{}: gauss residual {}",
            case.name,
            rep.gauss_residual_max
        );
        assert!(
            rep.codazzi_residual_max < 1e-3,
            "{}: codazzi residual {}",
            case.name,
            rep.codazzi_residual_max
        );
        assert!(
            rep.hopf_dbar_max < 1e-3,
            "{}: dbar Q {}",
            case.name,
            rep.hopf_dbar_max
        );
        summary.push(format!("{} H dev {:.1e}", case.name, h_dev));
    }
    pass(5, "curvature verification", summary.join("; "));
}

// -------------------------------------------------------------------------
// 6. Weierstrass catalog
// -------------------------------------------------------------------------
#[test]
fn criterion_06_weierstrass() {
    let square = DomainSpec::rectangle(-1.0, 1.0, -1.0, 1.0, 9, 9);
    // Enneper and helicoid closed forms
    let enneper = weierstrass::catalog(&MinimalSurface::Enneper { c: 1.0 }, square.clone()).unwrap();
    let helicoid = weierstrass::catalog(&MinimalSurface::Helicoid { c: 1.0 }, square.clone()).unwrap();
    let mut max_closed = 0.0f64;
    for &(x, y) in &[(0.5, 0.3), (-0.7, 0.2), (0.1, -0.9), (1.0, 0.0)] {
        let z = c(x, y);
        let got = weierstrass::eval_minimal(&enneper, z, cr(0.0), None, 1e-11)
            .unwrap()
            .coords();
        let want = [
            x + x * y * y - x * x * x / 3.0,
            -y - x * x * y + y * y * y / 3.0,
            x * x - y * y,
        ];
        for k in 0..3 {
            max_closed = max_closed.max((got[k] - want[k]).abs());
        }
        let got = weierstrass::eval_minimal(&helicoid, z, cr(0.0), None, 1e-11)
            .unwrap()
            .coords();
        let want = [2.0 * x.sinh() * y.sin(), -2.0 * x.sinh() * y.cos(), -2.0 * y];
        for k in 0..3 {
            max_closed = max_closed.max((got[k] - want[k]).abs());
        }
    }
    assert!(max_closed < 1e-6, "closed-form deviation {max_closed}");

    // catenoid period: purely imaginary on the unit circle
    let catenoid = weierstrass::catalog(&MinimalSurface::Catenoid { c: 1.0 }, square.clone()).unwrap();
    let rep = weierstrass::period_check(&catenoid, &PathSpec::circle(cr(0.0), 1.0, 1.0), 1e-8).unwrap();
    assert!(rep.real_part_norm < 1e-8, "catenoid period {}", rep.real_part_norm);

    // (z, c i z^{-2} dz): period (0,0,4cπ) with the loop oriented to match
    let c_ = 1.0;
    let twisted = weierstrass::WeierstrassData {
        g: enneper.g.clone(),
        eta: dpw_forge::rational::CoefFn {
            scale: Complex64::new(0.0, c_),
            rational: dpw_forge::rational::RationalFn::new(
                dpw_forge::rational::Poly::constant(cr(1.0)),
                dpw_forge::rational::Poly(vec![cr(0.0), cr(0.0), cr(1.0)]),
                vec![cr(0.0)],
            ),
            mu: 0.0,
            exp_poly: dpw_forge::rational::Poly::zero(),
        },
        domain: square.clone(),
    };
    let rep = weierstrass::period_check(&twisted, &PathSpec::circle(cr(0.0), 1.0, -1.0), 1e-8).unwrap();
    let want = 4.0 * c_ * std::f64::consts::PI;
    let dev = (rep.vector[0].re.abs())
        .max(rep.vector[1].re.abs())
        .max((rep.vector[2].re - want).abs());
    assert!(dev < 1e-6, "period vector deviation {dev}");
    assert!(!rep.closed);

    // geomcheck H ≈ 0 on every catalog mesh
    let mut max_h = 0.0f64;
    let cases: Vec<(&str, MinimalSurface, DomainSpec)> = vec![
        ("plane", MinimalSurface::Plane { c1: cr(0.2), c2: cr(1.0) }, square.clone()),
        ("enneper", MinimalSurface::Enneper { c: 1.0 }, square.clone()),
        ("enneper_higher", MinimalSurface::EnneperHigher { n: 2, c: 1.0 }, square.clone()),
        ("helicoid", MinimalSurface::Helicoid { c: 1.0 }, square.clone()),
        (
            "catenoid",
            MinimalSurface::Catenoid { c: 1.0 },
            DomainSpec::rectangle(0.6, 1.6, 0.2, 1.2, 9, 9),
        ),
        (
            "jorge_meeks",
            MinimalSurface::JorgeMeeks { n: 3, c: 1.0 },
            DomainSpec::rectangle(-0.3, 0.3, -0.3, 0.3, 9, 9),
        ),
        (
            "scherk_singly",
            MinimalSurface::ScherkSingly { c: 1.0 },
            DomainSpec::rectangle(-0.35, 0.35, -0.35, 0.35, 9, 9),
        ),
        (
            "richmond",
            MinimalSurface::Richmond { c: 1.0 },
            DomainSpec::rectangle(0.5, 1.5, 0.2, 1.0, 9, 9),
        ),
        (
            "lopez_ros",
            MinimalSurface::LopezRos { rho: 1.0 },
            DomainSpec::rectangle(-0.35, 0.35, -0.35, 0.35, 9, 9),
        ),
    ];
    for (name, kind, dom) in cases {
        let data = weierstrass::catalog(&kind, dom.clone()).unwrap();
        let base = dom.sample_points(1)[0];
        let sampler = MinimalSampler { data, base, tol: 1e-12 };
        let rep = analyze(&sampler, &probes_for(&dom), &GeomOptions::default()).unwrap();
        let h_dev = rep.h_max_dev_from(0.0);
        assert!(h_dev < 1e-4, "{name}: |H| = {h_dev}");
        max_h = max_h.max(h_dev);
    }
    pass(
        6,
        "weierstrass",
        format!("closed forms {max_closed:.2e}, periods ok, catalog |H| ≤ {max_h:.2e}"),
    );
}

// -------------------------------------------------------------------------
// 7. Bryant and flat surfaces in H3
// -------------------------------------------------------------------------
#[test]
fn criterion_07_bryant_flat() {
    use dpw_forge::h3reps::*;
    let square = DomainSpec::rectangle(-1.0, 1.0, -1.0, 1.0, 9, 9);

    // horosphere closed form
    let data = bryant_catalog(
        &BryantSurfaceKind::Horosphere { c1: cr(0.0), c2: cr(1.0) },
        square.clone(),
    )
    .unwrap();
    let mut max_horo = 0.0f64;
    for &(x, y) in &[(0.4, 0.2), (-0.6, 0.5), (0.9, -0.8)] {
        let w = c(x, y);
        let f = bryant_integrate(&data, w, cr(0.0), None, Mat2::identity(), 1e-12).unwrap();
        let p = bryant_surface(&f).unwrap();
        let want = Mat2::new(cr(1.0), w.conj(), w, cr(1.0 + w.norm_sqr()));
        max_horo = max_horo.max((p.mat - want).norm());
    }
    assert!(max_horo < 1e-8, "horosphere deviation {max_horo}");

    // geomcheck on Bryant meshes: H ≈ 1, K_intrinsic ≤ tol (sign check),
    // and the metric identity (1+|g|²)²|ω|² = 4e^{2u}
    let bryant_cases: Vec<(&str, BryantData, DomainSpec, Complex64)> = vec![
        (
            "horosphere",
            bryant_catalog(&BryantSurfaceKind::Horosphere { c1: cr(0.0), c2: cr(1.0) }, square.clone())
                .unwrap(),
            square.clone(),
            cr(0.0),
        ),
        (
            "enneper_cousin",
            bryant_catalog(&BryantSurfaceKind::EnneperCousin { c: 0.7 }, square.clone()).unwrap(),
            DomainSpec::rectangle(-0.7, 0.7, -0.7, 0.7, 9, 9),
            cr(0.0),
        ),
        (
            "catenoid_cousin",
            bryant_catalog(
                &BryantSurfaceKind::CatenoidCousin { mu: 0.8 },
                DomainSpec::slit_plane(-0.3, 0.3, 0.5, 9, 9),
            )
            .unwrap(),
            DomainSpec::rectangle(0.7, 1.4, -0.5, 0.5, 9, 9),
            cr(1.0),
        ),
    ];
    let mut max_h_dev = 0.0f64;
    let mut max_metric_rel = 0.0f64;
    for (name, data, dom, base) in bryant_cases {
        let sampler = BryantSampler {
            data: data.clone(),
            base,
            tol: 1e-12,
            log_parametrized: false,
            dual: false,
        };
        let probes = probes_for(&dom);
        let rep = analyze(&sampler, &probes, &GeomOptions::default()).unwrap();
        let h_dev = rep.h_max_dev_from(1.0);
        assert!(h_dev < 1e-3, "{name}: H deviation {h_dev}");
        assert!(
            rep.k_intrinsic_max_signed() < 1e-3,
            "{name}: K_intrinsic max {}",
            rep.k_intrinsic_max_signed()
        );
        max_h_dev = max_h_dev.max(h_dev);
        for &z in &probes {
            let g = data.g.eval(z);
            let om = data.omega.eval(z);
            let predicted = (1.0 + g.norm_sqr()).powi(2) * om.norm_sqr();
            let s = analyze_at(&sampler, z, 1e-3, cr(1.0)).unwrap();
            let rel = (s.metric_factor - predicted).abs() / predicted;
            assert!(rel < 1e-3, "{name}: metric identity rel {rel} at {z}");
            max_metric_rel = max_metric_rel.max(rel);
        }
    }

    // flat meshes: |K_intrinsic| below tolerance
    let mut max_k = 0.0f64;
    for alpha in [-1.0, -2.0] {
        let dom = DomainSpec::rectangle(0.8, 1.6, 0.2, 1.0, 9, 9);
        let data = flat_rotational(alpha, 1.0, dom.clone()).unwrap();
        let sampler = FlatSampler { data, base: cr(1.0), tol: 1e-12, log_parametrized: false };
        let rep = analyze(&sampler, &probes_for(&dom), &GeomOptions::default()).unwrap();
        max_k = max_k.max(rep.k_intrinsic_abs_max());
    }
    assert!(max_k < 1e-3, "flat K_intrinsic {max_k}");
    pass(
        7,
        "bryant/flat",
        format!(
            "horosphere {max_horo:.2e}, H dev {max_h_dev:.2e}, metric rel {max_metric_rel:.2e}, flat |K| {max_k:.2e}"
        ),
    );
}

// -------------------------------------------------------------------------
// 8. Delaunay weights: closed form vs numerical flux
// -------------------------------------------------------------------------
#[test]
fn criterion_08_delaunay_weights() {
    // cylinder: exactly π/(2|H|)
    let p = delaunay::close(cr(0.25), cr(0.25), SymParams::r3_default()).unwrap();
    let w = delaunay::weight(&p).unwrap();
    assert!((w.weight - std::f64::consts::PI).abs() < 1e-9);
    assert_eq!(w.classification, DelaunayClass::Cylinder);

    let g = 0.4;
    let q = 0.5;
    let sets = vec![
        delaunay::close(cr(0.3), cr(0.1), SymParams::r3_default()).unwrap(),
        delaunay::close(cr(0.375), cr(-0.125), SymParams::r3_default()).unwrap(),
        delaunay::close(cr(0.2), cr(0.15), SymParams::S3 { gamma1: -g, gamma2: g }).unwrap(),
        delaunay::close(cr(0.3), cr(-0.1), SymParams::S3 { gamma1: -g, gamma2: g }).unwrap(),
        delaunay::close(cr(0.2), cr(0.2), SymParams::H3 { q, psi: 0.0 }).unwrap(),
        delaunay::close(cr(0.3), cr(-0.08), SymParams::H3 { q, psi: 0.0 }).unwrap(),
    ];
    let mut max_rel = 0.0f64;
    for p in sets {
        let order = if matches!(p.sym, SymParams::H3 { .. }) { 24 } else { 16 };
        let w_cf = delaunay::weight(&p).unwrap().weight;
        let w_num = delaunay::flux_numeric(&p, order, 1e-10).unwrap();
        let rel = ((w_num - w_cf) / w_cf).abs();
        assert!(rel < 1e-3, "flux {w_num} vs closed {w_cf} (rel {rel})");
        max_rel = max_rel.max(rel);
    }
    pass(
        8,
        "delaunay weights",
        format!("cylinder exact, flux rel ≤ {max_rel:.2e} over 6 sets"),
    );
}

// -------------------------------------------------------------------------
// 9. Smyth symmetry
// -------------------------------------------------------------------------
#[test]
fn criterion_09_smyth_symmetry() {
    let lambdas: Vec<Complex64> = unit_circle_points(6).iter().map(|p| p.value).collect();
    let mut worst = 0.0f64;
    for k in 0..3u32 {
        let cfg = scene(&format!(
            r#"{{"surface": {{"kind": "dpw", "family": "smyth", "c": [1,0], "k": {k}}},
                "ambient": {{"tag": "r3", "h": 0.5}},
                "domain": {{"kind": "rectangle", "u": [-0.8, 0.8], "v": [-0.8, 0.8], "nu": 17, "nv": 17}}}}"#
        ));
        let pipe = build(&cfg).unwrap();
        let frame = pipe.frame.clone().unwrap();
        let zs = pipe.domain.grid();
        for ell in 0..(k + 2) {
            let r = geomcheck::smyth_symmetry_check(&frame, k, ell, &zs, &lambdas).unwrap();
            assert!(r < 1e-6, "k={k} l={ell}: frame residual {r}");
            worst = worst.max(r);
        }
        // surface-level reflection at a few points
        let probe: Vec<Complex64> = zs.iter().copied().step_by(37).collect();
        let rs = geomcheck::smyth_surface_check(&frame, k, 1, &probe, 0.5).unwrap();
        assert!(rs < 1e-6, "k={k}: surface residual {rs}");
        worst = worst.max(rs);
    }
    pass(9, "smyth symmetry", format!("max residual {worst:.2e} over k ∈ {{0,1,2}}"));
}

// -------------------------------------------------------------------------
// 10. Dressing / monodromy conjugation
// -------------------------------------------------------------------------
#[test]
fn criterion_10_dressing_monodromy() {
    let order = 16;
    let dom = DomainSpec::log_polar(-0.5, 0.5, 0.0, 2.0 * std::f64::consts::PI, 9, 9);
    let mut rng = SplitMix64::new(99);
    let mut worst = 0.0f64;
    for trial in 0..20 {
        // random Delaunay data (closing not required for the conjugation law)
        let s = cr(0.15 + 0.15 * rng.next_f64());
        let t = cr(0.05 + 0.1 * rng.next_f64());
        let r = 0.1 + 0.2 * rng.next_f64();
        let xi = dpw_forge::potential::builtin(
            &dpw_forge::potential::BuiltinFamily::Delaunay { r, s, t },
            dom.clone(),
        )
        .unwrap();
        let phi = holode::PhiSolution::new(Arc::new(xi), cr(1.0), order, 1e-11);
        let h_plus = factor::random_plus_loop(&mut rng, order, 0.2);
        let circle = PathSpec::circle(cr(0.0), 1.0, 1.0);
        let (m_plain, _) = phi.monodromy(&circle).unwrap();
        let (m_dressed, _) = phi.dressed(&h_plus).monodromy(&circle).unwrap();
        let want = h_plus
            .mul_window(&m_plain, order)
            .mul_window(&factor::plus_loop_inverse(&h_plus).unwrap(), order);
        let dev = m_dressed.circle_distance(&want, 0);
        assert!(dev < 1e-9, "trial {trial}: conjugation deviation {dev}");
        worst = worst.max(dev);
    }
    pass(10, "dressing/monodromy", format!("max conjugation deviation {worst:.2e}"));
}
