//! Reference shapes.
//!
//! A shape is a set of identical Mie spheres (one for a ball). Kite- and
//! peanut-like bodies fill the solid of revolution of their planar profile
//! about the x-axis with a cubic lattice of small spheres. Coupling between
//! elements is neglected, so the far field factorizes into the element
//! pattern times the array factor `Σ_s e^{ik(d − x̂)·c_s}`. This keeps
//! rotation, scaling and the profile's symmetries exact while giving each
//! shape its own anisotropic signature.

use std::f64::consts::PI;

use nalgebra::Matrix3;
use num_complex::Complex64;

use super::mie::{converged_mie_coefficients, sphere_amplitude, Material, MieCoefficients};
use crate::{CVec3, Error, Result, Vec3};

/// Default lattice spacing and element radius for bodies of revolution.
pub const LATTICE_SPACING: f64 = 0.35;
pub const ELEMENT_RADIUS: f64 = 0.15;

/// Peanut profile `r(s)(cos s, sin s)`, `r(s) = sqrt(3cos²s + 1)`.
pub fn peanut_profile(s: f64) -> (f64, f64) {
    let r = (3.0 * s.cos().powi(2) + 1.0).sqrt();
    (r * s.cos(), r * s.sin())
}

/// Kite profile `(cos s + 0.65 cos 2s − 0.65, 1.5 sin s)`.
pub fn kite_profile(s: f64) -> (f64, f64) {
    (s.cos() + 0.65 * (2.0 * s).cos() - 0.65, 1.5 * s.sin())
}

/// Unit-circle profile.
pub fn circle_profile(s: f64) -> (f64, f64) {
    (s.cos(), s.sin())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapeModel {
    id: String,
    material: Material,
    element_radius: f64,
    centers: Vec<Vec3>,
    circumradius: f64,
}

impl ShapeModel {
    /// Spheres of `element_radius` centred at `centers` (body frame).
    pub fn cluster(id: &str, centers: Vec<Vec3>, element_radius: f64, material: Material) -> Result<Self> {
        if id.is_empty() || id.chars().any(char::is_whitespace) {
            return Err(Error::InvalidParameter(format!("shape id must be a non-empty token, got {id:?}")));
        }
        if !material.has_contrast() {
            return Err(Error::InvalidParameter(format!(
                "material of shape {id:?} has no contrast with the background"
            )));
        }
        if !(element_radius > 0.0 && element_radius.is_finite()) {
            return Err(Error::InvalidParameter(format!("element radius must be positive, got {element_radius}")));
        }
        if centers.is_empty() {
            return Err(Error::InvalidParameter(format!("shape {id:?} has no elements")));
        }
        for (i, a) in centers.iter().enumerate() {
            for b in &centers[i + 1..] {
                if (a - b).norm() <= 2.0 * element_radius {
                    return Err(Error::InvalidParameter(format!("elements of shape {id:?} overlap")));
                }
            }
        }
        let circumradius = centers.iter().map(|c| c.norm()).fold(0.0, f64::max) + element_radius;
        Ok(Self { id: id.to_string(), material, element_radius, centers, circumradius })
    }

    pub fn sphere(id: &str, radius: f64, material: Material) -> Result<Self> {
        Self::cluster(id, vec![Vec3::zeros()], radius, material)
    }

    /// Unit ball, id `ball`.
    pub fn ball(material: Material) -> Self {
        Self::sphere("ball", 1.0, material).expect("valid ball")
    }

    /// Solid of revolution about the x-axis of the closed planar curve
    /// `profile(s)`, `s ∈ [0, 2π)`, sampled by a lattice of the given spacing.
    pub fn body_of_revolution<F: Fn(f64) -> (f64, f64)>(
        id: &str,
        profile: F,
        spacing: f64,
        element_radius: f64,
        material: Material,
    ) -> Result<Self> {
        if !(spacing > 2.0 * element_radius) {
            return Err(Error::InvalidParameter(format!(
                "lattice spacing {spacing} must exceed the element diameter {}",
                2.0 * element_radius
            )));
        }
        let samples = 2048;
        let poly: Vec<(f64, f64)> = (0..samples).map(|i| profile(2.0 * PI * i as f64 / samples as f64)).collect();
        let extent = poly.iter().map(|(x, y)| x.abs().max(y.abs())).fold(0.0, f64::max);
        let steps = (extent / spacing).ceil() as i64;
        let mut centers = Vec::new();
        for i in -steps..=steps {
            for j in -steps..=steps {
                for l in -steps..=steps {
                    let c = Vec3::new(i as f64, j as f64, l as f64) * spacing;
                    if point_in_polygon(c.x, c.y.hypot(c.z), &poly) {
                        centers.push(c);
                    }
                }
            }
        }
        Self::cluster(id, centers, element_radius, material)
    }

    /// Peanut body, id `peanut`.
    pub fn peanut_like(material: Material) -> Self {
        Self::body_of_revolution("peanut", peanut_profile, LATTICE_SPACING, ELEMENT_RADIUS, material)
            .expect("valid peanut")
    }

    /// Kite body, id `kite`.
    pub fn kite_like(material: Material) -> Self {
        Self::body_of_revolution("kite", kite_profile, LATTICE_SPACING, ELEMENT_RADIUS, material).expect("valid kite")
    }

    /// Built-in shape by token: `ball`, `peanut` or `kite`.
    pub fn builtin(token: &str, material: Material) -> Result<Self> {
        match token {
            "ball" => Ok(Self::ball(material)),
            "peanut" => Ok(Self::peanut_like(material)),
            "kite" => Ok(Self::kite_like(material)),
            other => Err(Error::InvalidParameter(format!("unknown shape {other:?} (expected ball, peanut or kite)"))),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn material(&self) -> &Material {
        &self.material
    }

    pub fn element_radius(&self) -> f64 {
        self.element_radius
    }

    pub fn centers(&self) -> &[Vec3] {
        &self.centers
    }

    /// Radius of the smallest origin-centred ball containing the body.
    pub fn circumradius(&self) -> f64 {
        self.circumradius
    }

    /// The body physically rotated by `r` (element centres mapped by `r`).
    pub fn rotated(&self, r: &Matrix3<f64>) -> Self {
        Self { centers: self.centers.iter().map(|c| r * c).collect(), ..self.clone() }
    }

    /// Element coefficients at wavenumber `k`.
    pub fn prepare(&self, k: f64) -> Result<PreparedShape<'_>> {
        let coeffs = converged_mie_coefficients(self.element_radius, &self.material, k)?;
        Ok(PreparedShape { shape: self, k, coeffs })
    }
}

/// Shape bound to a wavenumber; evaluates body-frame far fields.
#[derive(Debug, Clone)]
pub struct PreparedShape<'a> {
    shape: &'a ShapeModel,
    k: f64,
    coeffs: MieCoefficients,
}

impl PreparedShape<'_> {
    pub fn coefficients(&self) -> &MieCoefficients {
        &self.coeffs
    }

    /// Far-field amplitude of the unposed body.
    pub fn amplitude(&self, xhat: &Vec3, d: &Vec3, p: &Vec3) -> CVec3 {
        let element = sphere_amplitude(&self.coeffs, self.k, xhat, d, p);
        let q = (d - xhat) * self.k;
        let af: Complex64 = match self.shape.centers.as_slice() {
            [c] if c.norm() == 0.0 => Complex64::new(1.0, 0.0),
            cs => cs.iter().map(|c| Complex64::from_polar(1.0, q.dot(c))).sum(),
        };
        element * af
    }
}

fn point_in_polygon(x: f64, y: f64, poly: &[(f64, f64)]) -> bool {
    let mut inside = false;
    let n = poly.len();
    for i in 0..n {
        let (xi, yi) = poly[i];
        let (xj, yj) = poly[(i + n - 1) % n];
        if (yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi {
            inside = !inside;
        }
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_shapes() {
        let mat = Material::Pec;
        let p = ShapeModel::peanut_like(mat);
        let k = ShapeModel::kite_like(mat);
        assert!(p.centers().len() > 50 && k.centers().len() > 50, "{} {}", p.centers().len(), k.centers().len());
        assert!(p.circumradius() <= 2.0 + ELEMENT_RADIUS);
        assert!(k.circumradius() <= 2.07 + ELEMENT_RADIUS);
        assert_eq!(ShapeModel::ball(mat).circumradius(), 1.0);
        // the peanut lattice is invariant under x ↦ −x
        for c in p.centers() {
            assert!(p.centers().iter().any(|o| (o + c).norm() < 1e-12));
        }
        assert!(ShapeModel::builtin("cube", mat).is_err());
    }

    #[test]
    fn validation() {
        let m = Material::Pec;
        assert!(ShapeModel::sphere("", 1.0, m).is_err());
        assert!(ShapeModel::sphere("a b", 1.0, m).is_err());
        assert!(ShapeModel::sphere("s", -1.0, m).is_err());
        assert!(ShapeModel::sphere("s", 1.0, Material::dielectric(1.0).unwrap()).is_err());
        assert!(ShapeModel::cluster("c", vec![Vec3::zeros(), Vec3::x()], 0.6, m).is_err());
    }
}
