//! Iwasawa and Birkhoff decompositions of twisted loops, plus the
//! finite-dimensional Gram-Schmidt analogs used as oracles.
//!
//! Iwasawa splitting `φ = F·B` (F unitary on the circle, B holomorphic in
//! the disk with positive diagonal constant term) is computed by Bauer
//! spectral factorization: form `P = φ*φ`, positive Hermitian on the
//! circle, assemble the block-Toeplitz matrix of its Fourier coefficients,
//! Cholesky-factor it, and read the converged last block row as the
//! coefficients of B. The section size doubles until the `φ - FB` residual
//! passes the requested tolerance, so acceptance is always by residual.
//!
//! Birkhoff splitting `φ = B₋·B₊` (B₋ normalized to I at infinity) solves
//! the block-Toeplitz linear system expressing that the strictly negative
//! Fourier modes of `B₋^{-1}φ` vanish; a numerically singular system is
//! exactly the "outside the big cell" failure mode.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::holode::PhiSolution;
use crate::loopalg::{cr, unit_circle_points, Mat2, TwistedLoop};
use crate::util::SplitMix64;

/// Result of Iwasawa splitting `φ ≈ F·B`.
#[derive(Debug, Clone)]
pub struct IwasawaResult {
    /// Unitary part, `F ∈ ΛSU₂` up to the reported residual.
    pub f: TwistedLoop,
    /// Plus part; coefficients only at j ≥ 0, constant term positive diagonal.
    pub b: TwistedLoop,
    /// Max sampled ‖φ - FB‖ on the unit circle.
    pub residual: f64,
    /// Diagonal of B(0), the (ρ, ρ^{-1}) pair entering the induced metric.
    pub b0_diag: (f64, f64),
}

/// Result of Birkhoff splitting `φ ≈ B₋·B₊`.
#[derive(Debug, Clone)]
pub struct BirkhoffResult {
    /// Minus part, constant term exactly I.
    pub b_minus: TwistedLoop,
    /// Plus part.
    pub b_plus: TwistedLoop,
    pub residual: f64,
    pub in_big_cell: bool,
}

// ---------------------------------------------------------------------------
// Finite-dimensional analogs
// ---------------------------------------------------------------------------

/// Unique splitting of an SL₂ℂ matrix into SU₂ times upper triangular with
/// positive diagonal; equivalent to Gram-Schmidt orthogonalization of the
/// columns.
pub fn gram_schmidt_sl2(m: &Mat2) -> Result<(Mat2, Mat2)> {
    let a = m.m[0][0];
    let b = m.m[0][1];
    let cc = m.m[1][0];
    let d = m.m[1][1];
    let nsq = a.norm_sqr() + cc.norm_sqr();
    if nsq < 1e-300 {
        return Err(Error::SingularInput(
            "first column of the input has zero norm".into(),
        ));
    }
    let n = nsq.sqrt();
    let u = Mat2::new(a / n, -cc.conj() / n, cc / n, a.conj() / n);
    let t = Mat2::new(
        cr(n),
        (a.conj() * b + cc.conj() * d) / n,
        cr(0.0),
        cr(1.0 / n),
    );
    Ok((u, t))
}

/// Finite-dimensional Birkhoff analog: lower unitriangular times upper
/// triangular, defined when the upper-left entry is nonzero.
pub fn birkhoff_finite_sl2(m: &Mat2) -> Result<(Mat2, Mat2)> {
    let a = m.m[0][0];
    if a.norm() < 1e-14 {
        return Err(Error::OutsideBigCell { cond: f64::INFINITY });
    }
    let lower = Mat2::new(cr(1.0), cr(0.0), m.m[1][0] / a, cr(1.0));
    let upper = Mat2::new(a, m.m[0][1], cr(0.0), cr(1.0) / a);
    Ok((lower, upper))
}

// ---------------------------------------------------------------------------
// Banded Hermitian Cholesky (scalar level)
// ---------------------------------------------------------------------------

/// In-band lower Cholesky of a Hermitian positive definite banded matrix.
/// `band[i][d]` holds the entry (i, i-d), d = 0..=bw. Returns false if a
/// pivot fails to be positive.
fn banded_cholesky_in_place(band: &mut [Vec<Complex64>], bw: usize) -> bool {
    let n = band.len();
    for i in 0..n {
        let j_lo = i.saturating_sub(bw);
        for k in j_lo..=i {
            let mut sum = band[i][i - k];
            let j_start = j_lo.max(k.saturating_sub(bw));
            for j in j_start..k {
                let lij = band[i][i - j];
                let lkj = band[k][k - j];
                sum -= lij * lkj.conj();
            }
            if k == i {
                let re = sum.re;
                if re <= 0.0 || !re.is_finite() {
                    return false;
                }
                band[i][0] = cr(re.sqrt());
            } else {
                band[i][i - k] = sum / band[k][0];
            }
        }
    }
    true
}

/// One Bauer sweep: factor `P ≈ B*B` reading B from the last block row of
/// the Cholesky factor of the m-block Toeplitz section.
fn bauer_sweep(p: &TwistedLoop, out_order: usize, m_blocks: usize, twisted: bool) -> Option<TwistedLoop> {
    let band_blocks = p.order(); // P_j nonzero only for |j| <= order(P)
    let bw = 2 * band_blocks + 1;
    let ns = 2 * m_blocks;
    // T_block[i][k] = P_{k-i}; scalar entry (I, K) with I = 2i+r, K = 2k+s.
    let mut band: Vec<Vec<Complex64>> = vec![vec![cr(0.0); bw + 1]; ns];
    for bi in 0..m_blocks {
        for bk in bi.saturating_sub(band_blocks)..=bi {
            let pj = p.coeff(bk as i64 - bi as i64);
            for r in 0..2 {
                for s in 0..2 {
                    let i_s = 2 * bi + r;
                    let k_s = 2 * bk + s;
                    if k_s <= i_s && i_s - k_s <= bw {
                        band[i_s][i_s - k_s] = pj.m[r][s];
                    }
                }
            }
        }
    }
    if !banded_cholesky_in_place(&mut band, bw) {
        return None;
    }
    // B_k = (L_block[m-1][m-1-k])^H
    let last = m_blocks - 1;
    let mut b = TwistedLoop::zero(out_order, false);
    for k in 0..=out_order.min(last) {
        let bk = last - k;
        let mut blk = Mat2::zero();
        for r in 0..2 {
            for s in 0..2 {
                let i_s = 2 * last + r;
                let k_s = 2 * bk + s;
                if k_s <= i_s && i_s - k_s <= bw {
                    blk.m[r][s] = band[i_s][i_s - k_s];
                }
            }
        }
        b.set_coeff(k as i64, blk.conj_transpose());
    }
    Some(if twisted { b.enforce_parity() } else { b })
}

/// Inverse of a plus loop (coefficients only at j ≥ 0) as a plus-loop power
/// series over the same window.
pub fn plus_loop_inverse(b: &TwistedLoop) -> Result<TwistedLoop> {
    let n = b.order();
    let b0inv = b.coeff(0).inv().map_err(|_| Error::SingularLoop {
        min_det: b.coeff(0).det().norm(),
    })?;
    let mut inv = TwistedLoop::zero(n, false);
    inv.set_coeff(0, b0inv);
    for k in 1..=n as i64 {
        // Σ_{j=0..k} B_j C_{k-j} = 0  =>  C_k = -B0^{-1} Σ_{j=1..k} B_j C_{k-j}
        let mut acc = Mat2::zero();
        for j in 1..=k {
            acc = acc + b.coeff(j) * inv.coeff(k - j);
        }
        inv.set_coeff(k, (b0inv * acc).scale(cr(-1.0)));
    }
    if b.is_twisted() {
        inv = inv.enforce_parity();
    }
    Ok(inv)
}

/// Inverse of a minus loop with constant term I (series in λ^{-1}).
fn minus_loop_inverse_unipotent(c_loop: &TwistedLoop) -> TwistedLoop {
    let n = c_loop.order();
    let mut inv = TwistedLoop::zero(n, false);
    inv.set_coeff(0, Mat2::identity());
    for k in 1..=n as i64 {
        let mut acc = Mat2::zero();
        for j in 1..=k {
            acc = acc + c_loop.coeff(-j) * inv.coeff(-(k - j));
        }
        inv.set_coeff(-k, -acc);
    }
    if c_loop.is_twisted() {
        inv = inv.enforce_parity();
    }
    inv
}

fn factorization_residual(phi: &TwistedLoop, f: &TwistedLoop, b: &TwistedLoop) -> f64 {
    let k = 4 * phi.order() + 8;
    unit_circle_points(k)
        .iter()
        .map(|p| {
            let lhs = phi.eval(p.value);
            let rhs = f.eval(p.value) * b.eval(p.value);
            (lhs - rhs).norm()
        })
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Iwasawa decomposition
// ---------------------------------------------------------------------------

/// Iwasawa decomposition `φ = F·B` with the Λ₊^ℝ normalization (constant
/// term of B diagonal with positive real entries).
pub fn iwasawa(phi: &TwistedLoop, tol: f64) -> Result<IwasawaResult> {
    let min_det = phi.min_sampled_abs_det(0);
    if min_det < 1e-12 {
        return Err(Error::SingularLoop { min_det });
    }
    let drift = unit_circle_points(4 * phi.order() + 8)
        .iter()
        .map(|p| (phi.eval(p.value).det() - cr(1.0)).norm())
        .fold(0.0, f64::max);
    if drift > 1e-6 {
        return Err(Error::NotSl2 { drift });
    }

    let n = phi.order();
    let p = phi.star().mul_window(phi, 2 * n);
    let mut m_blocks = (4 * n).max(24);
    let mut best_residual = f64::INFINITY;
    loop {
        if let Some(b) = bauer_sweep(&p, n, m_blocks, phi.is_twisted()) {
            let binv = plus_loop_inverse(&b)?;
            let f = phi.mul_window(&binv, n);
            let residual = factorization_residual(phi, &f, &b);
            if residual <= tol {
                let b0 = b.coeff(0);
                return Ok(IwasawaResult {
                    f,
                    b,
                    residual,
                    b0_diag: (b0.m[0][0].re, b0.m[1][1].re),
                });
            }
            best_residual = best_residual.min(residual);
        }
        m_blocks *= 2;
        if m_blocks > 8192 {
            return Err(Error::NoConvergence {
                residual: best_residual,
                max_size: 8192,
            });
        }
    }
}

// ---------------------------------------------------------------------------
// Birkhoff decomposition
// ---------------------------------------------------------------------------

/// Dense complex LU solve with partial pivoting; returns the solution for
/// each right-hand side and a rough condition estimate max|U_ii|/min|U_ii|.
fn lu_solve(a: &mut [Vec<Complex64>], rhs: &mut [Vec<Complex64>]) -> Option<f64> {
    let n = a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let (mut pmax, mut prow) = (0.0f64, col);
        for (row, arow) in a.iter().enumerate().skip(col) {
            let v = arow[col].norm();
            if v > pmax {
                pmax = v;
                prow = row;
            }
        }
        if pmax == 0.0 {
            return None;
        }
        if prow != col {
            a.swap(col, prow);
            perm.swap(col, prow);
            for r in rhs.iter_mut() {
                r.swap(col, prow);
            }
        }
        let pivot = a[col][col];
        for row in col + 1..n {
            let factor = a[row][col] / pivot;
            a[row][col] = factor;
            for k in col + 1..n {
                let v = a[col][k];
                a[row][k] -= factor * v;
            }
            for r in rhs.iter_mut() {
                let v = r[col];
                r[row] -= factor * v;
            }
        }
    }
    let mut dmax = 0.0f64;
    let mut dmin = f64::INFINITY;
    for (i, arow) in a.iter().enumerate() {
        let v = arow[i].norm();
        dmax = dmax.max(v);
        dmin = dmin.min(v);
    }
    // back substitution
    for r in rhs.iter_mut() {
        for i in (0..n).rev() {
            let mut acc = r[i];
            for (k, &aik) in a[i].iter().enumerate().skip(i + 1) {
                acc -= aik * r[k];
            }
            r[i] = acc / a[i][i];
        }
    }
    Some(if dmin > 0.0 { dmax / dmin } else { f64::INFINITY })
}

/// Birkhoff decomposition `φ = B₋·B₊`, `B₋(∞) = I`, valid on the big cell.
pub fn birkhoff(phi: &TwistedLoop, _tol: f64) -> Result<BirkhoffResult> {
    let n = phi.order();
    let k_unknowns = n.max(1);
    // Rows r of C_k solve  Σ_k (C_k)[r,:] φ_{m+k} = -(φ_m)[r,:]  for m = -1..-K.
    let dim = 2 * k_unknowns;
    let mut rhs: Vec<Vec<Complex64>> = vec![vec![cr(0.0); dim]; 2];
    let mut sys: Vec<Vec<Complex64>> = vec![vec![cr(0.0); dim]; dim];
    for m_idx in 1..=k_unknowns {
        let m = -(m_idx as i64);
        for col_c in 0..2 {
            let eq = (m_idx - 1) * 2 + col_c;
            for k in 1..=k_unknowns {
                let phi_mk = phi.coeff(m + k as i64);
                for s in 0..2 {
                    sys[eq][(k - 1) * 2 + s] = phi_mk.m[s][col_c];
                }
            }
            let phi_m = phi.coeff(m);
            for (r, rh) in rhs.iter_mut().enumerate() {
                rh[eq] = -phi_m.m[r][col_c];
            }
        }
    }
    let cond = lu_solve(&mut sys, &mut rhs).ok_or(Error::OutsideBigCell { cond: f64::INFINITY })?;
    if cond > 1e12 {
        return Err(Error::OutsideBigCell { cond });
    }
    // C = I + Σ_{k>=1} C_k λ^{-k}
    let mut c_loop = TwistedLoop::zero(n, false);
    c_loop.set_coeff(0, Mat2::identity());
    for k in 1..=k_unknowns {
        let mut m = Mat2::zero();
        for r in 0..2 {
            for s in 0..2 {
                m.m[r][s] = rhs[r][(k - 1) * 2 + s];
            }
        }
        c_loop.set_coeff(-(k as i64), m);
    }
    if phi.is_twisted() {
        c_loop = c_loop.enforce_parity();
        c_loop.set_coeff(0, Mat2::identity());
    }
    // B₊ = nonnegative modes of C·φ; B₋ = C^{-1}.
    let prod = c_loop.mul_window(phi, 2 * n);
    let mut b_plus = TwistedLoop::zero(n, phi.is_twisted());
    for j in 0..=n as i64 {
        b_plus.set_coeff(j, prod.coeff(j));
    }
    let b_minus = minus_loop_inverse_unipotent(&c_loop);
    let residual = factorization_residual(phi, &b_minus, &b_plus);
    Ok(BirkhoffResult {
        b_minus,
        b_plus,
        residual,
        in_big_cell: true,
    })
}

// ---------------------------------------------------------------------------
// Normalized potentials via pointwise Birkhoff splitting
// ---------------------------------------------------------------------------

/// Taylor data of the meromorphic pair (a, b) of a normalized potential
/// `ξ = λ^{-1} [[0, a(z)],[b(z), 0]] dz`, valid on the reported disk.
#[derive(Debug, Clone)]
pub struct NormalizedPotential {
    pub center: Complex64,
    pub a_taylor: Vec<Complex64>,
    pub b_taylor: Vec<Complex64>,
    pub radius: f64,
}

impl NormalizedPotential {
    pub fn eval_a(&self, z: Complex64) -> Complex64 {
        horner(&self.a_taylor, z - self.center)
    }
    pub fn eval_b(&self, z: Complex64) -> Complex64 {
        horner(&self.b_taylor, z - self.center)
    }
}

fn horner(coeffs: &[Complex64], dz: Complex64) -> Complex64 {
    let mut acc = cr(0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * dz + c;
    }
    acc
}

/// Recover the normalized potential near `z_*` from a solved φ field by
/// pointwise Birkhoff splitting. The λ^{-1} coefficient of the split is
/// `G₊(0)·A_{-1}(z)·G₊(0)^{-1}`, so only the constant term of the plus
/// factor is needed. The returned radius is the largest sampled circle on
/// which every split succeeded.
pub fn normalized_potential_at(
    phi: &PhiSolution,
    z_star: Complex64,
    radii: &[f64],
) -> Result<NormalizedPotential> {
    let phi_star = phi.value_at(z_star)?;
    let phi_star_inv = phi_star.inv()?;
    let n_samples = 16usize;
    let mut best: Option<(f64, Vec<Complex64>, Vec<Complex64>)> = None;
    for &rho in radii {
        let mut a_vals = Vec::with_capacity(n_samples);
        let mut b_vals = Vec::with_capacity(n_samples);
        let mut ok = true;
        for k in 0..n_samples {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n_samples as f64;
            let z = z_star + Complex64::from_polar(rho, theta);
            let g = phi_star_inv.mul(&phi.value_at(z)?);
            match birkhoff(&g, 1e-9) {
                Ok(split) => {
                    let g0 = split.b_plus.coeff(0);
                    let g0inv = match g0.inv() {
                        Ok(m) => m,
                        Err(_) => {
                            ok = false;
                            break;
                        }
                    };
                    let a_m1 = phi.potential().coeff_matrix(z).coeff(-1);
                    let conj = g0 * a_m1 * g0inv;
                    a_vals.push(conj.m[0][1]);
                    b_vals.push(conj.m[1][0]);
                }
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            best = Some((rho, a_vals, b_vals));
        } else {
            break;
        }
    }
    let (radius, a_vals, b_vals) =
        best.ok_or(Error::OutsideBigCell { cond: f64::INFINITY })?;
    let taylor = |vals: &[Complex64]| -> Vec<Complex64> {
        let k = vals.len();
        (0..k / 2)
            .map(|m| {
                let mut acc = cr(0.0);
                for (j, &v) in vals.iter().enumerate() {
                    let ang = -2.0 * std::f64::consts::PI * (j * m) as f64 / k as f64;
                    acc += v * Complex64::from_polar(1.0, ang);
                }
                acc / cr(k as f64) / cr(radius.powi(m as i32))
            })
            .collect()
    };
    Ok(NormalizedPotential {
        center: z_star,
        a_taylor: taylor(&a_vals),
        b_taylor: taylor(&b_vals),
        radius,
    })
}

// ---------------------------------------------------------------------------
// Random loops for self-tests and round-trip oracles
// ---------------------------------------------------------------------------

/// Random element of the twisted su₂ loop algebra (anti-symmetric under the
/// star involution, traceless coefficients) with geometric coefficient decay.
pub fn random_su2_algebra_loop(rng: &mut SplitMix64, order: usize, decay: f64) -> TwistedLoop {
    let n = order as i64;
    let mut y = TwistedLoop::zero(order, true);
    for j in -n..=n {
        let a = decay.powi(j.unsigned_abs() as i32);
        let mut m = Mat2::zero();
        if j.rem_euclid(2) == 0 {
            let d = rng.next_complex() * cr(a);
            m.m[0][0] = d;
            m.m[1][1] = -d;
        } else {
            m.m[0][1] = rng.next_complex() * cr(a);
            m.m[1][0] = rng.next_complex() * cr(a);
        }
        y.set_coeff(j, m);
    }
    // X = (Y - Y*)/2 satisfies X* = -X and stays twisted and traceless.
    y.sub(&y.star()).scale(cr(0.5))
}

/// Random twisted unitary loop, the exponential of a random Λsu₂ element.
pub fn random_unitary_loop(rng: &mut SplitMix64, order: usize, decay: f64) -> TwistedLoop {
    random_su2_algebra_loop(rng, order, decay).exp()
}

/// Random twisted plus loop with positive diagonal constant term and
/// determinant one (exponential of a traceless plus-loop element with real
/// diagonal constant term).
pub fn random_plus_loop(rng: &mut SplitMix64, order: usize, decay: f64) -> TwistedLoop {
    let mut x = TwistedLoop::zero(order, true);
    let d = cr(rng.next_signed() * 0.5);
    x.set_coeff(0, Mat2::diag(d, -d));
    for j in 1..=order as i64 {
        let a = decay.powi(j as i32);
        let mut m = Mat2::zero();
        if j % 2 == 0 {
            let v = rng.next_complex() * cr(a);
            m.m[0][0] = v;
            m.m[1][1] = -v;
        } else {
            m.m[0][1] = rng.next_complex() * cr(a);
            m.m[1][0] = rng.next_complex() * cr(a);
        }
        x.set_coeff(j, m);
    }
    x.exp()
}

/// Random twisted strictly-minus unipotent loop (constant term I).
pub fn random_minus_loop(rng: &mut SplitMix64, order: usize, decay: f64) -> TwistedLoop {
    let mut x = TwistedLoop::zero(order, true);
    for j in 1..=order as i64 {
        let a = decay.powi(j as i32);
        let mut m = Mat2::zero();
        if j % 2 == 0 {
            let v = rng.next_complex() * cr(a);
            m.m[0][0] = v;
            m.m[1][1] = -v;
        } else {
            m.m[0][1] = rng.next_complex() * cr(a);
            m.m[1][0] = rng.next_complex() * cr(a);
        }
        x.set_coeff(-j, m);
    }
    x.exp()
}

/// One construct-then-split round trip for each factorization; returns the
/// (iwasawa, birkhoff) recovery errors. Used by the self-test command and
/// the acceptance suite.
pub fn roundtrip_errors(seed: u64, order: usize) -> Result<(f64, f64)> {
    let mut rng = SplitMix64::new(seed);
    // decay fast enough that the truncated windows are resolved well below
    // the factorization tolerance
    let f0 = random_unitary_loop(&mut rng, order, 0.2);
    let b0 = random_plus_loop(&mut rng, order, 0.2);
    let phi = f0.mul_window(&b0, order);
    let iw = iwasawa(&phi, 1e-9)?;
    let err_iw = iw
        .f
        .coeff_distance(&f0)
        .max(iw.b.coeff_distance(&b0))
        .max(iw.residual);

    let bm0 = random_minus_loop(&mut rng, order, 0.2);
    let bp0 = random_plus_loop(&mut rng, order, 0.2);
    let phi2 = bm0.mul_window(&bp0, order);
    let bk = birkhoff(&phi2, 1e-9)?;
    let err_bk = bk
        .b_minus
        .coeff_distance(&bm0)
        .max(bk.b_plus.coeff_distance(&bp0))
        .max(bk.residual);
    Ok((err_iw, err_bk))
}
