//! Wigner rotation matrices for spherical multipoles.
//!
//! For a rotation `R` the matrix `D^n` satisfies
//! `Y_n^m(Rᵀ x̂) = Σ_{m'} D^n_{m'm} Y_n^{m'}(x̂)`, and the same matrix rotates
//! the vector harmonics: `R U_n^m(Rᵀ x̂) = Σ_{m'} D^n_{m'm} U_n^{m'}(x̂)`.
//!
//! The small-d matrix uses the explicit factorial sum, which is accurate for
//! moderate degrees (n ≲ 30).

use nalgebra::Matrix3;
use num_complex::Complex64;

/// Extracts z-y-z Euler angles `(α, β, γ)` with `R = Rz(α) Ry(β) Rz(γ)`.
pub fn zyz_angles(r: &Matrix3<f64>) -> (f64, f64, f64) {
    let cb = r[(2, 2)].clamp(-1.0, 1.0);
    let sb = r[(0, 2)].hypot(r[(1, 2)]);
    let beta = sb.atan2(cb);
    if sb > 1e-12 {
        let alpha = r[(1, 2)].atan2(r[(0, 2)]);
        let gamma = r[(2, 1)].atan2(-r[(2, 0)]);
        (alpha, beta, gamma)
    } else if cb > 0.0 {
        (r[(1, 0)].atan2(r[(0, 0)]), 0.0, 0.0)
    } else {
        ((-r[(1, 0)]).atan2(-r[(0, 0)]), std::f64::consts::PI, 0.0)
    }
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Small Wigner matrix `d^n_{m'm}(β)`, row-major over `m', m ∈ [-n, n]`.
pub fn wigner_small_d(n: usize, beta: f64) -> Vec<f64> {
    let size = 2 * n + 1;
    let (s, c) = (beta / 2.0).sin_cos();
    let ni = n as i64;
    let mut d = vec![0.0; size * size];
    for mp in -ni..=ni {
        for m in -ni..=ni {
            let pref = 0.5
                * (ln_factorial((ni + mp) as usize)
                    + ln_factorial((ni - mp) as usize)
                    + ln_factorial((ni + m) as usize)
                    + ln_factorial((ni - m) as usize));
            let kmin = 0.max(m - mp);
            let kmax = (ni + m).min(ni - mp);
            let mut sum = 0.0;
            for k in kmin..=kmax {
                let denom = ln_factorial((ni + m - k) as usize)
                    + ln_factorial(k as usize)
                    + ln_factorial((mp - m + k) as usize)
                    + ln_factorial((ni - mp - k) as usize);
                let sign = if (mp - m + k).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                let pc = (2 * ni + m - mp - 2 * k) as i32;
                let ps = (mp - m + 2 * k) as i32;
                sum += sign * (pref - denom).exp() * c.powi(pc) * s.powi(ps);
            }
            d[((mp + ni) as usize) * size + (m + ni) as usize] = sum;
        }
    }
    d
}

/// Full Wigner matrix `D^n_{m'm}` for rotation `r`, row-major over `m', m`.
pub fn wigner_d(n: usize, r: &Matrix3<f64>) -> Vec<Complex64> {
    let (alpha, beta, gamma) = zyz_angles(r);
    let small = wigner_small_d(n, beta);
    let size = 2 * n + 1;
    let ni = n as i64;
    let mut out = vec![Complex64::new(0.0, 0.0); size * size];
    for mp in -ni..=ni {
        for m in -ni..=ni {
            let i = ((mp + ni) as usize) * size + (m + ni) as usize;
            let phase = Complex64::from_polar(1.0, -(mp as f64) * alpha - (m as f64) * gamma);
            out[i] = phase * small[i];
        }
    }
    out
}
