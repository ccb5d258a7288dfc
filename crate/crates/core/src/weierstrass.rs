//! Minimal surfaces in ℝ³ from Weierstrass data (g, η): evaluation by
//! contour quadrature, period checks, Gauss map, metric factor, and the
//! catalog of rational-data examples.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::holode::PathSpec;
use crate::loopalg::cr;
use crate::mesh::{DomainSpec, SurfaceSampler};
use crate::rational::{CoefFn, Poly, RationalFn};
use crate::sym::{Ambient, AmbientPoint};

/// Weierstrass data: meromorphic g and the coefficient h of η = h(z) dz.
#[derive(Debug, Clone)]
pub struct WeierstrassData {
    pub g: CoefFn,
    pub eta: CoefFn,
    pub domain: DomainSpec,
}

impl WeierstrassData {
    pub fn punctures(&self) -> Vec<Complex64> {
        let mut p: Vec<Complex64> = self.g.punctures().to_vec();
        for &q in self.eta.punctures() {
            if !p.iter().any(|&e| (e - q).norm() < 1e-12) {
                p.push(q);
            }
        }
        p
    }

    /// The integrand triple (1-g², i(1+g²), 2g)·h at a point.
    pub fn integrand(&self, z: Complex64) -> [Complex64; 3] {
        let g = self.g.eval(z);
        let h = self.eta.eval(z);
        [
            (cr(1.0) - g * g) * h,
            Complex64::new(0.0, 1.0) * (cr(1.0) + g * g) * h,
            cr(2.0) * g * h,
        ]
    }
}

/// Result of a period (closedness) check around a loop.
#[derive(Debug, Clone)]
pub struct PeriodReport {
    /// ∮ (1-g², i(1+g²), 2g) η around the loop.
    pub vector: [Complex64; 3],
    /// Euclidean norm of the real part; the immersion closes iff this
    /// vanishes.
    pub real_part_norm: f64,
    pub closed: bool,
}

// ---------------------------------------------------------------------------
// Quadrature along paths
// ---------------------------------------------------------------------------

/// Adaptive composite Gauss-Legendre integral of the Weierstrass triple
/// along a path (panel count doubles until two refinements agree).
pub fn contour_integral(data: &WeierstrassData, path: &PathSpec, tol: f64) -> Result<[Complex64; 3]> {
    path.check_clearance(&data.punctures(), 1e-6)?;
    let nodes: [f64; 8] = [
        0.09501250983763744,
        0.2816035507792589,
        0.45801677765722737,
        0.6178762444026438,
        0.755404408355003,
        0.8656312023878318,
        0.9445750230732326,
        0.9894009349916499,
    ];
    let weights: [f64; 8] = [
        0.189450610455069,
        0.18260341504492358,
        0.16915651939500254,
        0.14959598881657674,
        0.12462897125553388,
        0.09515851168249279,
        0.062253523938647894,
        0.027152459411754096,
    ];
    let pieces = path_pieces(path);
    let eval = |panels: usize| -> [Complex64; 3] {
        let mut acc = [cr(0.0); 3];
        for (point, velocity) in &pieces {
            for p in 0..panels {
                let t0 = p as f64 / panels as f64;
                let t1 = (p + 1) as f64 / panels as f64;
                let mid = 0.5 * (t0 + t1);
                let half = 0.5 * (t1 - t0);
                for i in 0..8 {
                    for sgn in [-1.0f64, 1.0] {
                        let t = mid + sgn * half * nodes[i];
                        let z = point(t);
                        let v = velocity(t);
                        let f = data.integrand(z);
                        for k in 0..3 {
                            acc[k] += f[k] * v * cr(half * weights[i]);
                        }
                    }
                }
            }
        }
        acc
    };
    let mut panels = 2;
    let mut prev = eval(panels);
    for _ in 0..12 {
        panels *= 2;
        let next = eval(panels);
        let diff = (0..3)
            .map(|k| (next[k] - prev[k]).norm())
            .fold(0.0, f64::max);
        let scale = 1.0 + (0..3).map(|k| next[k].norm()).fold(0.0, f64::max);
        if diff < tol * scale {
            return Ok(next);
        }
        prev = next;
    }
    Ok(prev)
}

type PieceFns = (Box<dyn Fn(f64) -> Complex64>, Box<dyn Fn(f64) -> Complex64>);

fn path_pieces(path: &PathSpec) -> Vec<PieceFns> {
    match path {
        PathSpec::Segments(v) => v
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0], w[1]);
                let point = Box::new(move |t: f64| a + (b - a) * cr(t)) as Box<dyn Fn(f64) -> Complex64>;
                let vel = Box::new(move |_t: f64| b - a) as Box<dyn Fn(f64) -> Complex64>;
                (point, vel)
            })
            .collect(),
        PathSpec::Circle { center, radius, turns, start_angle } => {
            let (c0, r, tn, a0) = (*center, *radius, *turns, *start_angle);
            let total = 2.0 * std::f64::consts::PI * tn;
            let point = Box::new(move |t: f64| c0 + Complex64::from_polar(r, a0 + total * t))
                as Box<dyn Fn(f64) -> Complex64>;
            let vel = Box::new(move |t: f64| {
                Complex64::from_polar(r, a0 + total * t) * Complex64::new(0.0, total)
            }) as Box<dyn Fn(f64) -> Complex64>;
            vec![(point, vel)]
        }
    }
}

/// f(z) = Re ∫ (1-g², i(1+g²), 2g) η from `base` to `z` along `path`
/// (straight segment when `path` is `None`).
pub fn eval_minimal(
    data: &WeierstrassData,
    z: Complex64,
    base: Complex64,
    path: Option<&PathSpec>,
    tol: f64,
) -> Result<AmbientPoint> {
    let default_path;
    let path = match path {
        Some(p) => p,
        None => {
            default_path = crate::holode::route_avoiding(&data.punctures(), base, z)?;
            &default_path
        }
    };
    let v = contour_integral(data, path, tol)?;
    Ok(AmbientPoint::from_r3_coords([v[0].re, v[1].re, v[2].re]))
}

/// Contour-integrate the triple around a closed loop and classify.
pub fn period_check(data: &WeierstrassData, loop_path: &PathSpec, tol: f64) -> Result<PeriodReport> {
    if !loop_path.is_closed() {
        return Err(Error::BadScene("period check requires a closed loop".into()));
    }
    let vector = contour_integral(data, loop_path, tol.min(1e-10))?;
    let real_part_norm =
        (vector[0].re.powi(2) + vector[1].re.powi(2) + vector[2].re.powi(2)).sqrt();
    Ok(PeriodReport {
        vector,
        real_part_norm,
        closed: real_part_norm < tol,
    })
}

/// Unit normal from the Gauss map g (stereographic form), plus g itself.
pub fn gauss_map(data: &WeierstrassData, z: Complex64) -> ([f64; 3], Complex64) {
    let g = data.g.eval(z);
    let d = g.norm_sqr() + 1.0;
    if !g.is_finite() || g.norm() > 1e150 {
        return ([0.0, 0.0, 1.0], g);
    }
    (
        [
            (g + g.conj()).re / d,
            (Complex64::new(0.0, 1.0) * (g.conj() - g)).re / d,
            (g.norm_sqr() - 1.0) / d,
        ],
        g,
    )
}

/// Conformal factor 4e^{2u} = (1+|g|²)² |h|².
pub fn metric_factor(data: &WeierstrassData, z: Complex64) -> f64 {
    let g = data.g.eval(z);
    let h = data.eta.eval(z);
    (1.0 + g.norm_sqr()).powi(2) * h.norm_sqr()
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

/// Catalog of minimal surfaces with explicit Weierstrass data.
#[derive(Debug, Clone)]
pub enum MinimalSurface {
    /// (c1, c2 dz) on ℂ.
    Plane { c1: Complex64, c2: Complex64 },
    /// (z, c dz) on ℂ.
    Enneper { c: f64 },
    /// (z^n, c dz) on ℂ.
    EnneperHigher { n: u32, c: f64 },
    /// (e^z, c i e^{-z} dz) on ℂ.
    Helicoid { c: f64 },
    /// (z, c z^{-2} dz) on ℂ∖{0}.
    Catenoid { c: f64 },
    /// (z^{n-1}, c (z^n - 1)^{-2} dz), punctured at the n-th roots of unity.
    JorgeMeeks { n: u32, c: f64 },
    /// (z, i c (z⁴-1)^{-1} dz), punctured at ±1, ±i.
    ScherkSingly { c: f64 },
    /// (z², c z^{-2} dz) on ℂ∖{0}.
    Richmond { c: f64 },
    /// (ρ (z²+3)/(z²-1), ρ^{-1} dz), punctured at ±1.
    LopezRos { rho: f64 },
}

impl MinimalSurface {
    pub fn from_name(name: &str, n: Option<u32>, c: Option<f64>) -> Result<Self> {
        let c_def = c.unwrap_or(1.0);
        Ok(match name {
            "plane" => MinimalSurface::Plane { c1: cr(0.0), c2: cr(c_def) },
            "enneper" => MinimalSurface::Enneper { c: c_def },
            "enneper_higher" => MinimalSurface::EnneperHigher { n: n.unwrap_or(2), c: c_def },
            "helicoid" => MinimalSurface::Helicoid { c: c_def },
            "catenoid" => MinimalSurface::Catenoid { c: c_def },
            "jorge_meeks" => MinimalSurface::JorgeMeeks { n: n.unwrap_or(3), c: c_def },
            "scherk_singly" => MinimalSurface::ScherkSingly { c: c_def },
            "richmond" => MinimalSurface::Richmond { c: c_def },
            "lopez_ros" => MinimalSurface::LopezRos { rho: c_def.abs().max(1e-6) },
            other => return Err(Error::UnknownSurface(other.into())),
        })
    }
}

fn monomial(k: u32, coef: Complex64) -> RationalFn {
    let mut num = vec![cr(0.0); k as usize + 1];
    num[k as usize] = coef;
    RationalFn::new(Poly(num), Poly::constant(cr(1.0)), vec![])
}

/// Build the Weierstrass data for a catalog surface, punctures included.
pub fn catalog(surface: &MinimalSurface, domain: DomainSpec) -> Result<WeierstrassData> {
    let data = match surface {
        MinimalSurface::Plane { c1, c2 } => WeierstrassData {
            g: CoefFn::constant(*c1),
            eta: CoefFn::constant(*c2),
            domain,
        },
        MinimalSurface::Enneper { c } => WeierstrassData {
            g: CoefFn::rational(monomial(1, cr(1.0))),
            eta: CoefFn::constant(cr(*c)),
            domain,
        },
        MinimalSurface::EnneperHigher { n, c } => WeierstrassData {
            g: CoefFn::rational(monomial(*n, cr(1.0))),
            eta: CoefFn::constant(cr(*c)),
            domain,
        },
        MinimalSurface::Helicoid { c } => WeierstrassData {
            g: CoefFn::exp_poly(cr(1.0), Poly::from_real(&[0.0, 1.0])),
            eta: CoefFn::exp_poly(Complex64::new(0.0, *c), Poly::from_real(&[0.0, -1.0])),
            domain,
        },
        MinimalSurface::Catenoid { c } => WeierstrassData {
            g: CoefFn::rational(monomial(1, cr(1.0))),
            eta: CoefFn::rational(RationalFn::new(
                Poly::constant(cr(*c)),
                Poly(vec![cr(0.0), cr(0.0), cr(1.0)]),
                vec![cr(0.0)],
            )),
            domain,
        },
        MinimalSurface::JorgeMeeks { n, c } => {
            let roots: Vec<Complex64> = (0..*n)
                .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / *n as f64))
                .collect();
            // (z^n - 1)^2
            let mut zn = vec![cr(0.0); *n as usize + 1];
            zn[0] = cr(-1.0);
            zn[*n as usize] = cr(1.0);
            let znm1 = Poly(zn);
            let den = crate::rational::poly_mul(&znm1, &znm1);
            WeierstrassData {
                g: CoefFn::rational(monomial(n - 1, cr(1.0))),
                eta: CoefFn::rational(RationalFn::new(Poly::constant(cr(*c)), den, roots)),
                domain,
            }
        }
        MinimalSurface::ScherkSingly { c } => {
            let punct = vec![cr(1.0), cr(-1.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)];
            WeierstrassData {
                g: CoefFn::rational(monomial(1, cr(1.0))),
                eta: CoefFn::rational(RationalFn::new(
                    Poly::constant(Complex64::new(0.0, *c)),
                    Poly(vec![cr(-1.0), cr(0.0), cr(0.0), cr(0.0), cr(1.0)]),
                    punct,
                )),
                domain,
            }
        }
        MinimalSurface::Richmond { c } => WeierstrassData {
            g: CoefFn::rational(monomial(2, cr(1.0))),
            eta: CoefFn::rational(RationalFn::new(
                Poly::constant(cr(*c)),
                Poly(vec![cr(0.0), cr(0.0), cr(1.0)]),
                vec![cr(0.0)],
            )),
            domain,
        },
        MinimalSurface::LopezRos { rho } => WeierstrassData {
            g: CoefFn::rational(RationalFn::new(
                Poly(vec![cr(3.0 * rho), cr(0.0), cr(*rho)]),
                Poly(vec![cr(-1.0), cr(0.0), cr(1.0)]),
                vec![cr(1.0), cr(-1.0)],
            )),
            eta: CoefFn::constant(cr(1.0 / rho)),
            domain,
        },
    };
    Ok(data)
}

// ---------------------------------------------------------------------------
// Surface sampler
// ---------------------------------------------------------------------------

/// Minimal-surface sampler: integrates the representation from a base
/// point to each requested parameter value.
pub struct MinimalSampler {
    pub data: WeierstrassData,
    pub base: Complex64,
    pub tol: f64,
}

impl SurfaceSampler for MinimalSampler {
    fn ambient(&self) -> Ambient {
        Ambient::R3
    }
    fn point(&self, z: Complex64) -> Result<AmbientPoint> {
        eval_minimal(&self.data, z, self.base, None, self.tol)
    }
}
