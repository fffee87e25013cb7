//! Fully normalized complex spherical harmonics (Condon–Shortley phase) and
//! the tangential vector harmonics
//!
//! `U_n^m = Grad Y_n^m / sqrt(n(n+1))`, `V_n^m = x̂ × U_n^m`.
//!
//! Surface gradients come from associated-Legendre derivative recurrences.
//! The `m ≥ 1` recurrences are run on `P̄_n^m / sin θ`, which stays finite at
//! the poles, so no special casing of `θ ∈ {0, π}` is needed.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{CVec3, Error, Result, Vec3};

/// Flat index of `(n, m)` among vector harmonics with `n ≥ 1`.
#[inline]
pub fn vsh_index(n: usize, m: i64) -> usize {
    debug_assert!(n >= 1 && m.unsigned_abs() as usize <= n);
    (n * n - 1) + (m + n as i64) as usize
}

/// Number of `(n, m)` pairs with `1 ≤ n ≤ nmax`.
#[inline]
pub fn vsh_count(nmax: usize) -> usize {
    nmax * (nmax + 2)
}

/// Spherical angles and local frame of a unit direction.
#[derive(Debug, Clone, Copy)]
struct Frame {
    cos_t: f64,
    sin_t: f64,
    phi: f64,
    e_theta: Vec3,
    e_phi: Vec3,
}

impl Frame {
    fn new(x: &Vec3) -> Self {
        let sin_t = x.x.hypot(x.y);
        let cos_t = x.z;
        let phi = x.y.atan2(x.x);
        let (sp, cp) = phi.sin_cos();
        Self { cos_t, sin_t, phi, e_theta: Vec3::new(cos_t * cp, cos_t * sp, -sin_t), e_phi: Vec3::new(-sp, cp, 0.0) }
    }
}

/// Normalized associated Legendre values for `0 ≤ m ≤ n ≤ nmax` at one angle.
///
/// `p` holds `P̄_n^m(cos θ)`, `q` holds `P̄_n^m / sin θ` (m ≥ 1), `dp` holds
/// `d P̄_n^m / dθ`. Storage is triangular, index `n(n+1)/2 + m`.
#[derive(Debug, Clone)]
pub(crate) struct Legendre {
    p: Vec<f64>,
    q: Vec<f64>,
    dp: Vec<f64>,
}

#[inline]
fn tri(n: usize, m: usize) -> usize {
    n * (n + 1) / 2 + m
}

impl Legendre {
    pub(crate) fn new(nmax: usize, cos_t: f64, sin_t: f64) -> Self {
        let size = tri(nmax, nmax) + 1;
        let mut p = vec![0.0; size];
        let mut q = vec![0.0; size];
        let mut dp = vec![0.0; size];
        let x = cos_t;
        let p00 = 1.0 / (4.0 * PI).sqrt();

        // m = 0 column
        p[0] = p00;
        if nmax >= 1 {
            p[tri(1, 0)] = 3f64.sqrt() * x * p00;
        }
        for n in 2..=nmax {
            let nf = n as f64;
            let a = ((4.0 * nf * nf - 1.0) / (nf * nf)).sqrt();
            let b = (((nf - 1.0) * (nf - 1.0)) / (4.0 * (nf - 1.0) * (nf - 1.0) - 1.0)).sqrt();
            p[tri(n, 0)] = a * (x * p[tri(n - 1, 0)] - b * p[tri(n - 2, 0)]);
        }

        // m ≥ 1 columns, run on q = P̄ / sin θ
        let mut pmm_prev = p00;
        for m in 1..=nmax {
            let mf = m as f64;
            let qmm = -((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * pmm_prev;
            q[tri(m, m)] = qmm;
            pmm_prev = qmm * sin_t;
            if m < nmax {
                q[tri(m + 1, m)] = (2.0 * mf + 3.0).sqrt() * x * qmm;
            }
            for n in (m + 2)..=nmax {
                let nf = n as f64;
                let a = ((4.0 * nf * nf - 1.0) / (nf * nf - mf * mf)).sqrt();
                let b = (((nf - 1.0) * (nf - 1.0) - mf * mf) / (4.0 * (nf - 1.0) * (nf - 1.0) - 1.0)).sqrt();
                q[tri(n, m)] = a * (x * q[tri(n - 1, m)] - b * q[tri(n - 2, m)]);
            }
            for n in m..=nmax {
                p[tri(n, m)] = q[tri(n, m)] * sin_t;
            }
        }

        // θ-derivatives
        for n in 1..=nmax {
            let nf = n as f64;
            dp[tri(n, 0)] = (nf * (nf + 1.0)).sqrt() * p[tri(n, 1)];
            for m in 1..=n {
                let mf = m as f64;
                let lower = if n > m {
                    ((2.0 * nf + 1.0) / (2.0 * nf - 1.0) * (nf - mf) * (nf + mf)).sqrt() * q[tri(n - 1, m)]
                } else {
                    0.0
                };
                dp[tri(n, m)] = nf * x * q[tri(n, m)] - lower;
            }
        }
        Self { p, q, dp }
    }

    #[inline]
    pub(crate) fn p(&self, n: usize, m: usize) -> f64 {
        self.p[tri(n, m)]
    }
}

fn check_nm(n: usize, m: i64) -> Result<()> {
    if m.unsigned_abs() as usize > n {
        return Err(Error::Domain(format!("|m| = {} exceeds n = {n}", m.abs())));
    }
    Ok(())
}

fn check_unit(x: &Vec3) -> Result<()> {
    if ((x.norm()) - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!("direction {x:?} is not a unit vector")));
    }
    Ok(())
}

#[inline]
fn neg_one_pow(m: i64) -> f64 {
    if m.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `Y_n^m(x̂)`.
pub fn sph_harmonic(n: usize, m: i64, x: &Vec3) -> Result<Complex64> {
    check_nm(n, m)?;
    check_unit(x)?;
    let f = Frame::new(x);
    let leg = Legendre::new(n, f.cos_t, f.sin_t);
    let ma = m.unsigned_abs() as usize;
    let y = leg.p(n, ma) * Complex64::from_polar(1.0, ma as f64 * f.phi);
    Ok(if m < 0 { neg_one_pow(m) * y.conj() } else { y })
}

/// `U_n^m(x̂)`.
pub fn vsh_u(n: usize, m: i64, x: &Vec3) -> Result<CVec3> {
    if n == 0 {
        return Err(Error::Domain("U_0^0 has no tangential gradient".into()));
    }
    check_nm(n, m)?;
    check_unit(x)?;
    let basis = VshBasis::new(n, x);
    Ok(basis.u(n, m))
}

/// `V_n^m(x̂) = x̂ × U_n^m(x̂)`.
pub fn vsh_v(n: usize, m: i64, x: &Vec3) -> Result<CVec3> {
    if n == 0 {
        return Err(Error::Domain("V_0^0 has no tangential gradient".into()));
    }
    check_nm(n, m)?;
    check_unit(x)?;
    let basis = VshBasis::new(n, x);
    Ok(basis.v(n, m))
}

/// All `U_n^m`, `V_n^m` with `1 ≤ n ≤ nmax` at a single direction.
#[derive(Debug, Clone)]
pub struct VshBasis {
    nmax: usize,
    u: Vec<CVec3>,
    v: Vec<CVec3>,
}

impl VshBasis {
    /// `x` must be a unit vector; this is not re-checked here.
    pub fn new(nmax: usize, x: &Vec3) -> Self {
        let f = Frame::new(x);
        let leg = Legendre::new(nmax, f.cos_t, f.sin_t);
        let count = vsh_count(nmax);
        let mut u = vec![CVec3::zeros(); count];
        let mut v = vec![CVec3::zeros(); count];
        let et = f.e_theta.map(|c| Complex64::new(c, 0.0));
        let ep = f.e_phi.map(|c| Complex64::new(c, 0.0));
        let xc = x.map(|c| Complex64::new(c, 0.0));
        for n in 1..=nmax {
            let nf = n as f64;
            let scale = 1.0 / (nf * (nf + 1.0)).sqrt();
            for m in 0..=n {
                let phase = Complex64::from_polar(scale, m as f64 * f.phi);
                let dth = leg.dp[tri(n, m)];
                let dph = if m == 0 { 0.0 } else { m as f64 * leg.q[tri(n, m)] };
                // Grad Y = dP̄/dθ e_θ + (i m P̄ / sin θ) e_φ, times e^{imφ}
                let g = et * (phase * dth) + ep * (phase * Complex64::new(0.0, dph));
                let vg = xc.cross(&g);
                u[vsh_index(n, m as i64)] = g;
                v[vsh_index(n, m as i64)] = vg;
                if m > 0 {
                    let s = neg_one_pow(m as i64);
                    u[vsh_index(n, -(m as i64))] = g.map(|c| c.conj() * s);
                    v[vsh_index(n, -(m as i64))] = vg.map(|c| c.conj() * s);
                }
            }
        }
        Self { nmax, u, v }
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    #[inline]
    pub fn u(&self, n: usize, m: i64) -> CVec3 {
        self.u[vsh_index(n, m)]
    }

    #[inline]
    pub fn v(&self, n: usize, m: i64) -> CVec3 {
        self.v[vsh_index(n, m)]
    }

    /// `U` values in flat [`vsh_index`] order.
    pub fn u_all(&self) -> &[CVec3] {
        &self.u
    }

    /// `V` values in flat [`vsh_index`] order.
    pub fn v_all(&self) -> &[CVec3] {
        &self.v
    }
}
