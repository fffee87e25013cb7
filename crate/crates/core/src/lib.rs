//! Direct-sampling location of multiple multi-scale electromagnetic scatterers
//! from a single (or a pair of) far-field measurement(s).
//!
//! The crate is organised bottom-up:
//!
//! * [`sph`] — scalar/vector spherical harmonics, Lebedev rules and the
//!   tangential inner product on the unit sphere.
//! * [`farfield`] — far-field pattern values, their transforms and text I/O.
//! * [`forward`] — Mie and synthetic T-matrix far-field oracles, posed
//!   components and superposition scenes.
//! * [`dictionary`] — augmented reference spaces over shape × orientation × scale.
//! * [`indicators`] — indicator functions, sampling grids and peak extraction.
//! * [`schemes`] — end-to-end locating drivers (S, AR, M and enhanced M).

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dictionary;
pub mod error;
pub mod farfield;
pub mod forward;
pub mod indicators;
pub mod schemes;
pub mod sph;

pub use error::{Error, Result};

use nalgebra::Vector3;
use num_complex::Complex64;

/// Real 3-vector.
pub type Vec3 = Vector3<f64>;
/// Complex 3-vector (field amplitude).
pub type CVec3 = Vector3<Complex64>;

/// Component-wise conjugated dot product `a · conj(b)`.
#[inline]
pub fn cdot(a: &CVec3, b: &CVec3) -> Complex64 {
    a.x * b.x.conj() + a.y * b.y.conj() + a.z * b.z.conj()
}

#[inline]
pub(crate) fn complexify(v: &Vec3) -> CVec3 {
    v.map(|c| Complex64::new(c, 0.0))
}

/// Applies a real matrix to a complex vector.
#[inline]
pub(crate) fn rmul(m: &nalgebra::Matrix3<f64>, v: &CVec3) -> CVec3 {
    CVec3::new(
        v.x * m[(0, 0)] + v.y * m[(0, 1)] + v.z * m[(0, 2)],
        v.x * m[(1, 0)] + v.y * m[(1, 1)] + v.z * m[(1, 2)],
        v.x * m[(2, 0)] + v.y * m[(2, 1)] + v.z * m[(2, 2)],
    )
}

/// Removes the radial part of `v` at direction `xhat`.
#[inline]
pub(crate) fn project_tangent(xhat: &Vec3, v: &CVec3) -> CVec3 {
    let r = v.x * xhat.x + v.y * xhat.y + v.z * xhat.z;
    CVec3::new(v.x - r * xhat.x, v.y - r * xhat.y, v.z - r * xhat.z)
}
