//! Rigid poses `z + Π(θ, φ, ψ) Λ_τ G`.

use std::f64::consts::PI;

use nalgebra::Matrix3;

use crate::{Error, Result, Vec3};

/// Rotation `Rz(ψ) Ry(θ) Rx(φ)`:
///
/// ```text
/// ⎡ cθcψ   −cφsψ + sφsθcψ    sφsψ + cφsθcψ ⎤
/// ⎢ cθsψ    cφcψ + sφsθsψ   −sφcψ + cφsθsψ ⎥
/// ⎣ −sθ     sφcθ              cφcθ         ⎦
/// ```
pub fn euler_matrix(theta: f64, phi: f64, psi: f64) -> Matrix3<f64> {
    let (st, ct) = theta.sin_cos();
    let (sf, cf) = phi.sin_cos();
    let (sp, cp) = psi.sin_cos();
    Matrix3::new(
        ct * cp,
        -cf * sp + sf * st * cp,
        sf * sp + cf * st * cp,
        ct * sp,
        cf * cp + sf * st * sp,
        -sf * cp + cf * st * sp,
        -st,
        sf * ct,
        cf * ct,
    )
}

/// Euler angles `(θ, φ, ψ)` with `0 ≤ θ, φ ≤ 2π`, `0 ≤ ψ ≤ π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Euler {
    pub theta: f64,
    pub phi: f64,
    pub psi: f64,
}

impl Euler {
    pub fn new(theta: f64, phi: f64, psi: f64) -> Result<Self> {
        let ok = |v: f64, hi: f64| (0.0..=hi).contains(&v);
        if !(ok(theta, 2.0 * PI) && ok(phi, 2.0 * PI) && ok(psi, PI)) {
            return Err(Error::InvalidParameter(format!(
                "Euler angles out of range: θ = {theta}, φ = {phi} must lie in [0, 2π], ψ = {psi} in [0, π]"
            )));
        }
        Ok(Self { theta, phi, psi })
    }

    pub const fn identity() -> Self {
        Self { theta: 0.0, phi: 0.0, psi: 0.0 }
    }

    /// Rotation by `alpha ∈ [0, 2π)` about the z-axis, expressed within the
    /// admissible ranges (`ψ = α` for `α ≤ π`, else `θ = φ = π`, `ψ = α − π`).
    pub fn in_plane(alpha: f64) -> Result<Self> {
        let a = alpha.rem_euclid(2.0 * PI);
        if a <= PI {
            Self::new(0.0, 0.0, a)
        } else {
            Self::new(PI, PI, a - PI)
        }
    }

    pub fn matrix(&self) -> Matrix3<f64> {
        euler_matrix(self.theta, self.phi, self.psi)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.theta, self.phi, self.psi]
    }
}

/// Position, orientation and scale of a component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub z: Vec3,
    pub euler: Euler,
    pub tau: f64,
}

impl Pose {
    pub fn new(z: Vec3, euler: Euler, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!("scale τ must be positive, got {tau}")));
        }
        if !z.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidParameter("position must be finite".into()));
        }
        Ok(Self { z, euler, tau })
    }

    pub fn identity() -> Self {
        Self { z: Vec3::zeros(), euler: Euler::identity(), tau: 1.0 }
    }

    pub fn at(z: Vec3) -> Self {
        Self { z, ..Self::identity() }
    }
}
