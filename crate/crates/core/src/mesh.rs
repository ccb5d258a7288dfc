//! Domain grids, surface sampling into triangle meshes, and OBJ export.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sym::{Ambient, AmbientPoint};
use crate::util;

/// Parameter-plane domain. The grid always lives in a (u, v) rectangle of
/// the parameter coordinate handed to samplers: for `Rectangle` that
/// coordinate is z = x + iy itself; for `LogPolar` it is w = log ρ + iθ
/// (samplers built over an annulus pull their potential back by z = e^w).
#[derive(Debug, Clone)]
pub enum DomainKind {
    Rectangle { x0: f64, x1: f64, y0: f64, y1: f64 },
    LogPolar { log_rho0: f64, log_rho1: f64, theta0: f64, theta1: f64 },
}

#[derive(Debug, Clone)]
pub struct DomainSpec {
    pub kind: DomainKind,
    /// Grid resolution along u (x or log ρ).
    pub nu: usize,
    /// Grid resolution along v (y or θ).
    pub nv: usize,
    /// Required distance from punctures and slits.
    pub clearance: f64,
}

impl DomainSpec {
    pub fn rectangle(x0: f64, x1: f64, y0: f64, y1: f64, nu: usize, nv: usize) -> Self {
        Self {
            kind: DomainKind::Rectangle { x0, x1, y0, y1 },
            nu,
            nv,
            clearance: 1e-6,
        }
    }

    pub fn log_polar(log_rho0: f64, log_rho1: f64, theta0: f64, theta1: f64, nu: usize, nv: usize) -> Self {
        Self {
            kind: DomainKind::LogPolar { log_rho0, log_rho1, theta0, theta1 },
            nu,
            nv,
            clearance: 1e-6,
        }
    }

    /// Plane slit along the negative real axis, parametrized log-polarly
    /// with an angular margin away from the slit.
    pub fn slit_plane(log_rho0: f64, log_rho1: f64, margin: f64, nu: usize, nv: usize) -> Self {
        Self::log_polar(
            log_rho0,
            log_rho1,
            -std::f64::consts::PI + margin,
            std::f64::consts::PI - margin,
            nu,
            nv,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.nu < 2 || self.nv < 2 {
            return Err(Error::BadScene(format!(
                "resolution must be at least 2x2, got {}x{}",
                self.nu, self.nv
            )));
        }
        if self.clearance <= 0.0 {
            return Err(Error::BadScene("clearance must be positive".into()));
        }
        Ok(())
    }

    fn ranges(&self) -> (f64, f64, f64, f64) {
        match self.kind {
            DomainKind::Rectangle { x0, x1, y0, y1 } => (x0, x1, y0, y1),
            DomainKind::LogPolar { log_rho0, log_rho1, theta0, theta1 } => {
                (log_rho0, log_rho1, theta0, theta1)
            }
        }
    }

    /// Parameter point at grid index (iu, iv).
    pub fn grid_point(&self, iu: usize, iv: usize) -> Complex64 {
        let (u0, u1, v0, v1) = self.ranges();
        let fu = if self.nu == 1 { 0.0 } else { iu as f64 / (self.nu - 1) as f64 };
        let fv = if self.nv == 1 { 0.0 } else { iv as f64 / (self.nv - 1) as f64 };
        Complex64::new(u0 + (u1 - u0) * fu, v0 + (v1 - v0) * fv)
    }

    /// Row-major parameter grid, index = iu * nv + iv.
    pub fn grid(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.nu * self.nv);
        for iu in 0..self.nu {
            for iv in 0..self.nv {
                out.push(self.grid_point(iu, iv));
            }
        }
        out
    }

    /// Roughly-uniform interior sample points for validation sweeps.
    pub fn sample_points(&self, k: usize) -> Vec<Complex64> {
        let side = (k as f64).sqrt().ceil().max(1.0) as usize;
        let (u0, u1, v0, v1) = self.ranges();
        let mut out = Vec::with_capacity(side * side);
        for i in 0..side {
            for j in 0..side {
                let fu = (i as f64 + 0.5) / side as f64;
                let fv = (j as f64 + 0.5) / side as f64;
                out.push(Complex64::new(u0 + (u1 - u0) * fu, v0 + (v1 - v0) * fv));
                if out.len() == k {
                    return out;
                }
            }
        }
        out
    }

    /// Whether the v-range covers a full turn (a closing seam exists).
    pub fn full_turn(&self) -> bool {
        match self.kind {
            DomainKind::LogPolar { theta0, theta1, .. } => {
                (theta1 - theta0 - 2.0 * std::f64::consts::PI).abs() < 1e-9
            }
            _ => false,
        }
    }

    /// The geometric domain scale (diagonal of the parameter rectangle).
    pub fn scale(&self) -> f64 {
        let (u0, u1, v0, v1) = self.ranges();
        ((u1 - u0).powi(2) + (v1 - v0).powi(2)).sqrt()
    }
}

// ---------------------------------------------------------------------------
// Surface samplers
// ---------------------------------------------------------------------------

/// A surface presented as a map from the parameter plane to an ambient
/// point. All pipeline outputs (loop-group, Weierstrass, Bryant, flat) are
/// exposed this way, to the mesher and to the finite-difference verifier
/// alike.
pub trait SurfaceSampler: Send + Sync {
    fn ambient(&self) -> Ambient;
    fn point(&self, z: Complex64) -> Result<AmbientPoint>;
}

// ---------------------------------------------------------------------------
// Meshes
// ---------------------------------------------------------------------------

/// Sampled immersion grid with display vertices, raw ambient coordinates,
/// triangle connectivity and seam metadata.
#[derive(Debug, Clone)]
pub struct SurfaceMesh {
    pub ambient: Ambient,
    pub nu: usize,
    pub nv: usize,
    /// Display coordinates (ℝ³ identity, 𝕊³ stereographic, ℍ³ Poincaré).
    pub vertices: Vec<[f64; 3]>,
    /// Raw ambient coordinates, 4 components.
    pub ambient_coords: Vec<[f64; 4]>,
    /// Triangles, 0-based vertex indices.
    pub faces: Vec<[usize; 3]>,
    /// Paired boundary columns to compare when the domain closes up.
    pub seam: Option<(Vec<usize>, Vec<usize>)>,
    /// λ window used by the pipeline that produced the mesh (0 when not
    /// applicable).
    pub lambda_order: usize,
}

impl SurfaceMesh {
    /// Max ambient-coordinate distance between paired seam vertices.
    pub fn seam_gap(&self) -> Option<f64> {
        let (a, b) = self.seam.as_ref()?;
        let mut gap = 0.0f64;
        for (&i, &j) in a.iter().zip(b.iter()) {
            let (p, q) = (self.ambient_coords[i], self.ambient_coords[j]);
            let d = (0..4)
                .map(|k| (p[k] - q[k]).abs())
                .fold(0.0, f64::max);
            gap = gap.max(d);
        }
        Some(gap)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
}

/// Evaluate the sampler over the domain grid and assemble the triangle
/// mesh. Vertex evaluation runs in parallel; assembly is deterministic.
pub fn sample(
    sampler: &dyn SurfaceSampler,
    domain: &DomainSpec,
    lambda_order: usize,
) -> Result<SurfaceMesh> {
    domain.validate()?;
    let grid = domain.grid();
    let points = util::try_map_collect(grid, |z| {
        sampler.point(z).map_err(|e| (z, e))
    })
    .map_err(|(z, e)| Error::BadScene(format!("sampling failed at parameter {z}: {e}")))?;

    let mut vertices = Vec::with_capacity(points.len());
    let mut ambient_coords = Vec::with_capacity(points.len());
    for (idx, p) in points.iter().enumerate() {
        let v = p.display()?;
        if !v.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFiniteVertex { index: idx });
        }
        vertices.push(v);
        ambient_coords.push(p.coords());
    }

    let (nu, nv) = (domain.nu, domain.nv);
    let mut faces = Vec::with_capacity(2 * (nu - 1) * (nv - 1));
    for iu in 0..nu - 1 {
        for iv in 0..nv - 1 {
            let a = iu * nv + iv;
            let b = iu * nv + iv + 1;
            let c = (iu + 1) * nv + iv;
            let d = (iu + 1) * nv + iv + 1;
            faces.push([a, b, d]);
            faces.push([a, d, c]);
        }
    }

    let seam = if domain.full_turn() {
        let left: Vec<usize> = (0..nu).map(|iu| iu * nv).collect();
        let right: Vec<usize> = (0..nu).map(|iu| iu * nv + nv - 1).collect();
        Some((left, right))
    } else {
        None
    };

    Ok(SurfaceMesh {
        ambient: sampler.ambient(),
        nu,
        nv,
        vertices,
        ambient_coords,
        faces,
        seam,
        lambda_order,
    })
}

/// Write the mesh as Wavefront OBJ text: header comments, one `v` line per
/// vertex with nine decimal digits, 1-based `f` lines. Identical meshes
/// produce byte-identical files.
pub fn export_obj(mesh: &SurfaceMesh, path: &Path) -> Result<()> {
    for (idx, v) in mesh.vertices.iter().enumerate() {
        if !v.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFiniteVertex { index: idx });
        }
    }
    let mut out = String::new();
    write_obj_string(mesh, &mut out);
    let mut file = std::fs::File::create(path)?;
    file.write_all(out.as_bytes())?;
    Ok(())
}

pub fn write_obj_string(mesh: &SurfaceMesh, out: &mut String) {
    use std::fmt::Write as _;
    let _ = writeln!(out, "# dpw-forge");
    let _ = writeln!(out, "# lambda_order {}", mesh.lambda_order);
    let _ = writeln!(out, "# ambient {}", mesh.ambient.tag());
    for v in &mesh.vertices {
        let _ = writeln!(out, "v {:.9} {:.9} {:.9}", v[0], v[1], v[2]);
    }
    for f in &mesh.faces {
        let _ = writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
    }
}

/// Parse the `v` lines of an OBJ produced by [`export_obj`] (round-trip
/// verification helper).
pub fn parse_obj_vertices(text: &str) -> Vec<[f64; 3]> {
    text.lines()
        .filter(|l| l.starts_with("v "))
        .map(|l| {
            let mut it = l.split_whitespace().skip(1);
            let mut v = [0.0; 3];
            for x in v.iter_mut() {
                *x = it.next().unwrap().parse().unwrap();
            }
            v
        })
        .collect()
}
