//! Cross-module oracles: gauge and dressing invariances, normalized
//! potentials re-integrated end to end, the explicit Smyth splitting, the
//! Lawson relations and the loop-group metric identity.

use std::sync::Arc;

use dpw_forge::delaunay::{self, DelaunaySampler};
use dpw_forge::factor::{iwasawa, normalized_potential_at};
use dpw_forge::geomcheck::{analyze_at, lawson_check};
use dpw_forge::holode::{closed_form_phi, ClosedFormFamily, PhiSolution};
use dpw_forge::loopalg::{c, cr, Mat2, TwistedLoop};
use dpw_forge::mesh::{DomainSpec, SurfaceSampler};
use dpw_forge::potential::{
    builtin, off_diagonalize, pullback_log, BuiltinFamily, PotentialEval, SampledPotential,
};
use dpw_forge::scene::{build, SceneConfig};
use dpw_forge::sym::{sym_r3, SymParams};
use num_complex::Complex64;

fn w_domain() -> DomainSpec {
    DomainSpec::rectangle(-0.4, 0.4, -0.5, 0.5, 5, 5)
}

/// φ for the Delaunay potential pulled back to the cover coordinate w,
/// based at w = 0 with φ(0) = I.
fn delaunay_cover_phi(r: f64, s: f64, t: f64, order: usize) -> PhiSolution {
    let dom = w_domain();
    let xi = builtin(
        &BuiltinFamily::Delaunay { r, s: cr(s), t: cr(t) },
        DomainSpec::log_polar(-0.4, 0.4, -0.5, 0.5, 5, 5),
    )
    .unwrap();
    let pulled = pullback_log(Arc::new(xi), dom);
    PhiSolution::new(Arc::new(pulled), cr(0.0), order, 1e-11)
}

#[test]
fn normalized_potential_trivial_families() {
    // sphere: already a normalized potential with a ≡ 1, b ≡ 0
    let dom = DomainSpec::rectangle(-1.0, 1.0, -1.0, 1.0, 5, 5);
    let xi = builtin(&BuiltinFamily::Sphere, dom.clone()).unwrap();
    let phi = PhiSolution::new(Arc::new(xi), cr(0.0), 12, 1e-11);
    let np = normalized_potential_at(&phi, cr(0.0), &[0.1, 0.2, 0.3]).unwrap();
    for &z in &[cr(0.05), c(0.1, 0.1), c(-0.12, 0.04)] {
        assert!((np.eval_a(z) - cr(1.0)).norm() < 1e-9);
        assert!(np.eval_b(z).norm() < 1e-9);
    }

    // smyth k = 0, parameter c: a ≡ 1, b ≡ c
    let cc = c(0.7, 0.0);
    let xi = builtin(&BuiltinFamily::Smyth { c: cc, k: 0 }, dom).unwrap();
    let phi = PhiSolution::new(Arc::new(xi), cr(0.0), 12, 1e-11);
    let np = normalized_potential_at(&phi, cr(0.0), &[0.1, 0.2, 0.3]).unwrap();
    for &z in &[cr(0.08), c(-0.1, 0.06)] {
        assert!((np.eval_a(z) - cr(1.0)).norm() < 1e-9);
        assert!((np.eval_b(z) - cc).norm() < 1e-9);
    }
}

#[test]
fn normalized_potential_reproduces_the_surface() {
    // Delaunay on the cover: the potential has a diagonal λ⁰ part, so the
    // normalized potential differs from it; re-integrating must give the
    // same immersion (the Birkhoff factor is a gauge).
    let order = 16;
    let (r, s, t) = (0.3, 0.3, 0.1);
    let phi = delaunay_cover_phi(r, s, t, order);
    let np = normalized_potential_at(&phi, cr(0.0), &[0.1, 0.2, 0.3]).unwrap();
    assert!(np.radius >= 0.3);

    let np = Arc::new(np);
    let np2 = np.clone();
    let xi_norm = SampledPotential {
        eval: Arc::new(move |z: Complex64| {
            let mut a = TwistedLoop::zero(1, true);
            a.set_coeff(-1, Mat2::new(cr(0.0), np2.eval_a(z), np2.eval_b(z), cr(0.0)));
            a
        }),
        punctures: vec![],
        domain: w_domain(),
    };
    let phi_norm = PhiSolution::new(Arc::new(xi_norm), cr(0.0), order, 1e-11);

    for &w in &[c(0.08, 0.1), c(-0.1, 0.05), c(0.12, -0.08)] {
        let f_orig = iwasawa(&phi.value_at(w).unwrap(), 1e-10).unwrap();
        let f_norm = iwasawa(&phi_norm.value_at(w).unwrap(), 1e-10).unwrap();
        let (p_orig, _) = sym_r3(&f_orig.f, 0.5, cr(1.0)).unwrap();
        let (p_norm, _) = sym_r3(&f_norm.f, 0.5, cr(1.0)).unwrap();
        let dev = (p_orig.mat - p_norm.mat).norm();
        assert!(dev < 1e-6, "surface deviation {dev} at {w}");
        // metric factors agree as well
        let m_orig = analyze_at(&FrameAt(&phi), w, 1e-3, cr(1.0)).unwrap().metric_factor;
        let m_norm = analyze_at(&FrameAt(&phi_norm), w, 1e-3, cr(1.0)).unwrap().metric_factor;
        assert!(((m_orig - m_norm) / m_orig).abs() < 1e-6);
    }
}

/// Minimal sampler wrapping a PhiSolution through Iwasawa and the ℝ³ Sym
/// formula, for verification probes.
struct FrameAt<'a>(&'a PhiSolution);
impl SurfaceSampler for FrameAt<'_> {
    fn ambient(&self) -> dpw_forge::sym::Ambient {
        dpw_forge::sym::Ambient::R3
    }
    fn point(&self, z: Complex64) -> dpw_forge::Result<dpw_forge::sym::AmbientPoint> {
        let f = iwasawa(&self.0.value_at(z)?, 1e-10)?.f;
        Ok(sym_r3(&f, 0.5, cr(1.0))?.0)
    }
}

#[test]
fn off_diagonalization_leaves_the_surface_unchanged() {
    // Delaunay on the cover has the diagonal r·dw part; gauging it away
    // must not change the immersion (same unitary factor).
    let order = 16;
    let (r, s, t) = (0.3, 0.3, 0.1);
    let phi = delaunay_cover_phi(r, s, t, order);
    let (gauged, p_gauge) = off_diagonalize(phi.potential().clone(), cr(0.0)).unwrap();
    // the gauged potential is off-diagonal at sample points
    for &w in &[c(0.1, 0.2), c(-0.2, 0.1)] {
        let a = gauged.coeff_matrix(w);
        for j in -1..=1i64 {
            assert!(a.coeff(j).m[0][0].norm() < 1e-9);
            assert!(a.coeff(j).m[1][1].norm() < 1e-9);
        }
    }
    let phi_gauged = PhiSolution::new(Arc::new(gauged), cr(0.0), order, 1e-11);
    for &w in &[c(0.15, 0.2), c(-0.2, -0.1)] {
        let f_orig = iwasawa(&phi.value_at(w).unwrap(), 1e-10).unwrap().f;
        let f_gauged = iwasawa(&phi_gauged.value_at(w).unwrap(), 1e-10).unwrap().f;
        let (p0, _) = sym_r3(&f_orig, 0.5, cr(1.0)).unwrap();
        let (p1, _) = sym_r3(&f_gauged, 0.5, cr(1.0)).unwrap();
        let dev = (p0.mat - p1.mat).norm();
        assert!(dev < 1e-7, "gauge changed the surface by {dev}");
    }
    let _ = p_gauge;
}

#[test]
fn dressing_by_constant_unitary_is_a_rigid_motion() {
    let order = 16;
    let dom = DomainSpec::rectangle(-0.6, 0.6, -0.6, 0.6, 5, 5);
    let xi = builtin(&BuiltinFamily::Smyth { c: cr(1.0), k: 0 }, dom).unwrap();
    let phi = PhiSolution::new(Arc::new(xi), cr(0.0), order, 1e-11);
    // constant-in-λ unitary dressing
    let u = Mat2::new(c(0.8, 0.0), c(0.0, 0.6), c(0.0, 0.6), c(0.8, 0.0));
    assert!(u.is_su2(1e-12));
    let h_plus = TwistedLoop::monomial(u, 0, order, false);
    let dressed = phi.dressed(&h_plus);
    let params = SymParams::r3_default();
    let iso = dpw_forge::sym::isometry_from_loop(&h_plus, &params).unwrap();
    for &z in &[c(0.2, 0.1), c(-0.3, 0.25)] {
        let f_plain = iwasawa(&phi.value_at(z).unwrap(), 1e-10).unwrap().f;
        let f_dress = iwasawa(&dressed.value_at(z).unwrap(), 1e-10).unwrap().f;
        let (p_plain, _) = sym_r3(&f_plain, 0.5, cr(1.0)).unwrap();
        let (p_dress, _) = sym_r3(&f_dress, 0.5, cr(1.0)).unwrap();
        let moved = iso.apply(&p_plain).unwrap();
        let dev = (p_dress.mat - moved.mat).norm();
        assert!(dev < 1e-8, "dressing deviates from the rigid motion by {dev}");
    }
}

#[test]
fn smyth_k0_unimodular_c_has_explicit_iwasawa_split() {
    // For |c| = 1 the splitting is the cylinder-style explicit one:
    // F = exp((λ^{-1}z - λ z̄ c^{-1}) N), B = exp(λ z̄ c^{-1} N).
    let order = 16;
    let cc = Complex64::from_polar(1.0, 0.7);
    let n_mat = Mat2::new(cr(0.0), cr(1.0), cc, cr(0.0));
    for &z in &[c(0.3, 0.2), c(-0.25, 0.4)] {
        let phi = closed_form_phi(&ClosedFormFamily::SmythK0 { c: cc }, z, order).unwrap();
        let split = iwasawa(&phi, 1e-10).unwrap();
        let f_explicit = TwistedLoop::from_coeffs(
            &[
                (-1, n_mat.scale(z)),
                (1, n_mat.scale(-z.conj() / cc)),
            ],
            order,
            true,
        )
        .exp();
        let b_explicit = TwistedLoop::monomial(n_mat.scale(z.conj() / cc), 1, order, true).exp();
        assert!(
            split.f.coeff_distance(&f_explicit) < 1e-8,
            "F deviation {}",
            split.f.coeff_distance(&f_explicit)
        );
        assert!(
            split.b.coeff_distance(&b_explicit) < 1e-8,
            "B deviation {}",
            split.b.coeff_distance(&b_explicit)
        );
    }
}

#[test]
fn lawson_relations_hold_for_shared_frames() {
    // one frame, Sym into all three space forms; measured mean curvatures
    // must satisfy H_s² + 1 = H_r² and H_r² + 1 = H_h²
    let cfg = SceneConfig::from_json(
        r#"{
        "surface": {"kind": "dpw", "family": "smyth", "c": [1,0], "k": 0},
        "ambient": {"tag": "r3", "h": 0.5},
        "domain": {"kind": "rectangle", "u": [-0.6, 0.6], "v": [-0.6, 0.6], "nu": 5, "nv": 5},
        "numerics": {"tol": 1e-12}
    }"#,
    )
    .unwrap();
    let pipe = build(&cfg).unwrap();
    let frame = pipe.frame.clone().unwrap();
    let probes = [c(0.1, 0.2), c(-0.2, 0.1)];
    for gamma in [0.5, std::f64::consts::FRAC_PI_4] {
        let rep = lawson_check(frame.clone(), gamma, &probes, 1e-3).unwrap();
        assert!(rep.residual_sr < 1e-3, "γ={gamma}: {rep:?}");
        assert!(rep.residual_rh < 1e-3, "γ={gamma}: {rep:?}");
    }
    // γ₂-γ₁ = π/2 makes the spherical surface minimal
    let rep = lawson_check(frame, std::f64::consts::FRAC_PI_4, &probes, 1e-3).unwrap();
    assert!(rep.h_s3.abs() < 1e-3, "H_s = {}", rep.h_s3);
    assert!((rep.h_r3.abs() - 1.0).abs() < 1e-3, "H_r = {}", rep.h_r3);
}

#[test]
fn iwasawa_diagonal_term_matches_the_metric() {
    // 4 e^{2u} = 4 ρ⁴ |a_{-1}|² / H² with ρ the B(0) diagonal entry
    let cfg = SceneConfig::from_json(
        r#"{
        "surface": {"kind": "dpw", "family": "smyth", "c": [1,0], "k": 1},
        "ambient": {"tag": "r3", "h": 0.5},
        "domain": {"kind": "rectangle", "u": [-0.7, 0.7], "v": [-0.7, 0.7], "nu": 5, "nv": 5},
        "numerics": {"tol": 1e-12}
    }"#,
    )
    .unwrap();
    let pipe = build(&cfg).unwrap();
    let dpw = pipe.dpw.clone().unwrap();
    let h = 0.5f64;
    for &z in &[c(0.2, 0.1), c(-0.3, 0.2), c(0.1, -0.35)] {
        let split = dpw.split(z).unwrap();
        let rho = split.b0_diag.0;
        // |a_{-1}| = 1 for the Smyth potential, so 4ρ⁴|a_{-1}|²/H² = 16ρ⁴
        let predicted = 4.0 * rho.powi(4) / (h * h);
        let s = analyze_at(pipe.sampler.as_ref(), z, 1e-3, cr(1.0)).unwrap();
        let rel = ((s.metric_factor - predicted) / predicted).abs();
        assert!(rel < 1e-3, "metric identity relative error {rel} at {z}");
    }
}

#[test]
fn delaunay_closed_form_sampler_matches_generic_pipeline() {
    // the dedicated closed-form sampler and the generic integrate-then-split
    // pipeline must produce the same immersion
    let (r, s, t) = (0.3, 0.3, 0.1);
    let p = delaunay::DelaunayParams {
        r,
        s: cr(s),
        t: cr(t),
        sym: SymParams::r3_default(),
    };
    let closed = DelaunaySampler { params: p, order: 16, tol: 1e-10 };
    let phi = delaunay_cover_phi(r, s, t, 16);
    for &w in &[c(0.1, 0.3), c(-0.2, 0.2)] {
        let a = closed.point(w).unwrap();
        let f = iwasawa(&phi.value_at(w).unwrap(), 1e-10).unwrap().f;
        let (b, _) = sym_r3(&f, 0.5, cr(1.0)).unwrap();
        let dev = (a.mat - b.mat).norm();
        assert!(dev < 1e-8, "sampler mismatch {dev} at {w}");
    }
}
