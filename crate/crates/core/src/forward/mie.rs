//! Mie series for homogeneous and perfectly conducting spheres.
//!
//! Riccati–Bessel functions `ψ_n(x) = x j_n(x)`, `χ_n(x) = −x y_n(x)` and
//! `ξ_n = ψ_n − iχ_n`; `ψ_n` is normalized from a downward (Miller)
//! recurrence, `χ_n` runs upward, and the interior field enters only through
//! the logarithmic derivative `D_n(mx)`, itself computed downward.

use num_complex::Complex64;

use crate::{CVec3, Error, Result, Vec3};

/// Constitutive parameters of a scatterer relative to the background.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Material {
    /// Perfect electric conductor.
    Pec,
    /// Homogeneous medium: relative permittivity, permeability, conductivity.
    Medium { eps: f64, mu: f64, sigma: f64 },
}

impl Material {
    pub fn medium(eps: f64, mu: f64, sigma: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite() && mu > 0.0 && mu.is_finite() && sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "medium needs ε > 0, μ > 0, σ ≥ 0 (got ε = {eps}, μ = {mu}, σ = {sigma})"
            )));
        }
        Ok(Material::Medium { eps, mu, sigma })
    }

    /// Non-magnetic lossless dielectric.
    pub fn dielectric(eps: f64) -> Result<Self> {
        Self::medium(eps, 1.0, 0.0)
    }

    /// True when the material differs from the background.
    pub fn has_contrast(&self) -> bool {
        match *self {
            Material::Pec => true,
            Material::Medium { eps, mu, sigma } => (eps - 1.0).abs() + (mu - 1.0).abs() + sigma.abs() > 0.0,
        }
    }

    /// Short text token, e.g. `pec` or `medium(4,1,0)`.
    pub fn token(&self) -> String {
        match *self {
            Material::Pec => "pec".into(),
            Material::Medium { eps, mu, sigma } => format!("medium({eps},{mu},{sigma})"),
        }
    }
}

/// Default truncation order for size parameter `x`.
pub fn truncation_order(x: f64) -> usize {
    x.ceil() as usize + 10
}

const TAIL_TOL: f64 = 1e-12;

/// Electric (`a`) and magnetic (`b`) Mie coefficients, index `n − 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MieCoefficients {
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
}

impl MieCoefficients {
    pub fn nmax(&self) -> usize {
        self.a.len()
    }

    /// Relative contribution of the last order to `Σ (2n+1)(|a_n|² + |b_n|²)`.
    pub fn tail_fraction(&self) -> f64 {
        let w = |n: usize| (2 * n + 1) as f64;
        let total: f64 = (1..=self.nmax()).map(|n| w(n) * (self.a[n - 1].norm_sqr() + self.b[n - 1].norm_sqr())).sum();
        if total == 0.0 {
            return 0.0;
        }
        let n = self.nmax();
        (w(n) * (self.a[n - 1].norm_sqr() + self.b[n - 1].norm_sqr()) / total).sqrt()
    }
}

/// `ψ_n(x)` for `0 ≤ n ≤ nmax`.
fn riccati_psi(nmax: usize, x: f64) -> Vec<f64> {
    let start = nmax + 16 + (x.abs() + 4.0 * x.abs().cbrt()) as usize;
    let mut f = vec![0.0; start + 2];
    f[start] = 1e-280;
    for n in (1..=start).rev() {
        f[n - 1] = (2 * n + 1) as f64 / x * f[n] - f[n + 1];
        if f[n - 1].abs() > 1e250 {
            for v in &mut f[n - 1..] {
                *v *= 1e-250;
            }
        }
    }
    // normalize against whichever closed form is better conditioned
    let (s, c) = x.sin_cos();
    let psi1 = s / x - c;
    let scale = if s.abs() >= psi1.abs() { s / f[0] } else { psi1 / f[1] };
    f.truncate(nmax + 1);
    f.iter_mut().for_each(|v| *v *= scale);
    f
}

/// `χ_n(x)` for `0 ≤ n ≤ nmax` (upward recurrence is stable).
fn riccati_chi(nmax: usize, x: f64) -> Vec<f64> {
    let mut c = vec![0.0; nmax + 1];
    let mut prev = -x.sin();
    c[0] = x.cos();
    for n in 1..=nmax {
        let next = (2 * n - 1) as f64 / x * c[n - 1] - prev;
        prev = c[n - 1];
        c[n] = next;
    }
    c
}

/// Logarithmic derivative `D_n(z) = ψ_n'(z)/ψ_n(z)`, `0 ≤ n ≤ nmax`.
fn log_derivative(nmax: usize, z: Complex64) -> Vec<Complex64> {
    let start = nmax + 16 + (z.norm() + 4.0 * z.norm().cbrt()) as usize;
    let mut d = Complex64::new(0.0, 0.0);
    let mut out = vec![Complex64::new(0.0, 0.0); nmax + 1];
    for n in (1..=start).rev() {
        let nz = Complex64::new(n as f64, 0.0) / z;
        d = nz - 1.0 / (d + nz);
        if n - 1 <= nmax {
            out[n - 1] = d;
        }
    }
    out
}

/// Mie coefficients for a sphere of `radius` at wavenumber `k`, orders `1..=nmax`.
pub fn mie_coefficients(radius: f64, material: &Material, k: f64, nmax: usize) -> Result<MieCoefficients> {
    let x = k * radius;
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidParameter(format!("size parameter k·a must be positive, got {x}")));
    }
    if (nmax as f64) < x + 10.0 {
        return Err(Error::Truncation(format!("order {nmax} is below k·a + 10 = {:.3}", x + 10.0)));
    }
    let psi = riccati_psi(nmax, x);
    let chi = riccati_chi(nmax, x);
    let xi = |n: usize| Complex64::new(psi[n], -chi[n]);
    let mut a = Vec::with_capacity(nmax);
    let mut b = Vec::with_capacity(nmax);
    match *material {
        Material::Pec => {
            for n in 1..=nmax {
                let nx = n as f64 / x;
                let dpsi = psi[n - 1] - nx * psi[n];
                let dxi = xi(n - 1) - nx * xi(n);
                a.push(dpsi / dxi);
                b.push(psi[n] / xi(n));
            }
        }
        Material::Medium { eps, mu, sigma } => {
            let m = (Complex64::new(eps, sigma / k) * mu).sqrt();
            let dn = log_derivative(nmax, m * x);
            for n in 1..=nmax {
                let nx = n as f64 / x;
                let dpsi = psi[n - 1] - nx * psi[n];
                let dxi = xi(n - 1) - nx * xi(n);
                let d = dn[n];
                a.push((m * dpsi - mu * psi[n] * d) / (m * dxi - mu * xi(n) * d));
                b.push((mu * dpsi - m * psi[n] * d) / (mu * dxi - m * xi(n) * d));
            }
        }
    }
    let coeffs = MieCoefficients { a, b };
    let tail = coeffs.tail_fraction();
    if !tail.is_finite() || tail > TAIL_TOL {
        return Err(Error::Truncation(format!(
            "Mie series not converged at order {nmax} for k·a = {x:.4} (tail {tail:.2e})"
        )));
    }
    Ok(coeffs)
}

/// Smallest order ≥ the default heuristic whose tail meets the tolerance.
pub fn converged_mie_coefficients(radius: f64, material: &Material, k: f64) -> Result<MieCoefficients> {
    let x = k * radius;
    let base = truncation_order(x);
    let mut last = None;
    for extra in [0, 5, 10, 20, 40] {
        match mie_coefficients(radius, material, k, base + extra) {
            Ok(c) => return Ok(c),
            Err(e @ Error::Truncation(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Amplitude functions `S1(Θ)`, `S2(Θ)` at `cos Θ = mu`.
pub fn amplitude_functions(c: &MieCoefficients, mu: f64) -> (Complex64, Complex64) {
    let mut s1 = Complex64::new(0.0, 0.0);
    let mut s2 = Complex64::new(0.0, 0.0);
    let (mut pi_prev, mut pi) = (0.0, 1.0);
    for n in 1..=c.nmax() {
        let nf = n as f64;
        let tau = nf * mu * pi - (nf + 1.0) * pi_prev;
        let w = (2.0 * nf + 1.0) / (nf * (nf + 1.0));
        s1 += w * (c.a[n - 1] * pi + c.b[n - 1] * tau);
        s2 += w * (c.a[n - 1] * tau + c.b[n - 1] * pi);
        let next = ((2.0 * nf + 1.0) * mu * pi - (nf + 1.0) * pi_prev) / nf;
        pi_prev = pi;
        pi = next;
    }
    (s1, s2)
}

/// Far-field amplitude of a sphere at the origin: incidence `p e^{ik x·d}`,
/// observation direction `xhat`.
pub fn sphere_amplitude(c: &MieCoefficients, k: f64, xhat: &Vec3, d: &Vec3, p: &Vec3) -> CVec3 {
    let mu = xhat.dot(d).clamp(-1.0, 1.0);
    let (s1, s2) = amplitude_functions(c, mu);
    let pref = Complex64::new(0.0, 1.0 / k);
    let perp = d.cross(xhat);
    let sin_t = perp.norm();
    if sin_t < 1e-12 {
        // forward/backward: S1 = ±S2 and the field is parallel to p
        return crate::complexify(p) * (pref * s1);
    }
    let e_phi = perp / sin_t;
    let e_par_in = (xhat - d * mu) / sin_t;
    let e_par_out = e_phi.cross(xhat);
    let out =
        crate::complexify(&e_par_out) * (s2 * p.dot(&e_par_in)) + crate::complexify(&e_phi) * (s1 * p.dot(&e_phi));
    out * pref
}
