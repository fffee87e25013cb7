//! Far-field oracle: Mie spheres, sphere-cluster shapes, posed components and
//! superposition scenes.
//!
//! A posed component `z + Π Λ_τ G` is evaluated by scaling (base shape at
//! `kτ`, amplitude times `τ`), then rotating (`U A(Uᵀx̂; Uᵀd, Uᵀp)`), then
//! translating (factor `e^{ik(d − x̂)·z}`). Scenes add their components'
//! patterns; inter-component coupling is neglected.

mod mie;
mod pose;
mod shape;
mod tmatrix;

pub use mie::{
    amplitude_functions, converged_mie_coefficients, mie_coefficients, sphere_amplitude, truncation_order, Material,
    MieCoefficients,
};
pub use pose::{euler_matrix, Euler, Pose};
pub use shape::{
    circle_profile, kite_profile, peanut_profile, PreparedShape, ShapeModel, ELEMENT_RADIUS, LATTICE_SPACING,
};
pub use tmatrix::TMatrix;

use crate::farfield::{translation_phase, FarFieldPattern, IncidentWave};
use crate::sph::{QuadratureRule, TangentialField};
use crate::{rmul, Error, Result, Vec3};

/// Far-field pattern of `model` placed with `pose`.
pub fn eval_far_field(
    model: &ShapeModel,
    pose: &Pose,
    wave: &IncidentWave,
    rule: &QuadratureRule,
) -> Result<FarFieldPattern> {
    let prepared = model.prepare(wave.k() * pose.tau)?;
    let u = pose.euler.matrix();
    let ut = u.transpose();
    let (d, p) = (wave.direction(), wave.polarization());
    let (dr, pr) = (ut * d, ut * p);
    let identity = pose.euler == Euler::identity();
    let values = rule
        .nodes()
        .iter()
        .map(|x| {
            let a = if identity {
                prepared.amplitude(x, &d, &p)
            } else {
                rmul(&u, &prepared.amplitude(&(ut * x), &dr, &pr))
            };
            a * (translation_phase(wave, x, &pose.z) * pose.tau)
        })
        .collect();
    Ok(FarFieldPattern::new(TangentialField::new(values, rule)?, *wave))
}

/// A posed shape.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneComponent {
    pub model: ShapeModel,
    pub pose: Pose,
}

impl SceneComponent {
    pub fn new(model: ShapeModel, pose: Pose) -> Self {
        Self { model, pose }
    }

    /// Radius of the ball around `pose.z` that contains the component.
    pub fn bounding_radius(&self) -> f64 {
        self.pose.tau * self.model.circumradius()
    }
}

/// Pairwise-disjoint posed components.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    components: Vec<SceneComponent>,
}

impl Scene {
    pub fn new(components: Vec<SceneComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter("scene has no components".into()));
        }
        for (i, a) in components.iter().enumerate() {
            for (j, b) in components.iter().enumerate().skip(i + 1) {
                let dist = (a.pose.z - b.pose.z).norm();
                let reach = a.bounding_radius() + b.bounding_radius();
                if dist <= reach {
                    return Err(Error::InvalidParameter(format!(
                        "components {i} ({}) and {j} ({}) overlap: centre distance {dist:.4} ≤ {reach:.4}",
                        a.model.id(),
                        b.model.id()
                    )));
                }
            }
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[SceneComponent] {
        &self.components
    }

    /// Minimum pairwise centre distance (infinite for a single component).
    pub fn separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, a) in self.components.iter().enumerate() {
            for b in &self.components[i + 1..] {
                best = best.min((a.pose.z - b.pose.z).norm());
            }
        }
        best
    }
}

/// Superposition of the components' far fields.
pub fn scene_far_field(scene: &Scene, wave: &IncidentWave, rule: &QuadratureRule) -> Result<FarFieldPattern> {
    let mut parts = scene.components.iter().map(|c| eval_far_field(&c.model, &c.pose, wave, rule));
    let mut total = parts.next().expect("scene is non-empty")?;
    for part in parts {
        total = total.add(&part?)?;
    }
    Ok(total)
}

/// Convenience: `Pose` at `z` with in-plane angle `alpha` and scale `tau`.
pub fn in_plane_pose(z: Vec3, alpha: f64, tau: f64) -> Result<Pose> {
    Pose::new(z, Euler::in_plane(alpha)?, tau)
}
