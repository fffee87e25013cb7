//! Spherical-harmonic machinery on the unit sphere.

mod field;
mod harmonics;
mod lebedev;
mod lebedev_tables;
pub mod wigner;

pub use field::{t2_inner, t2_norm, TangentialField};
pub use harmonics::{sph_harmonic, vsh_count, vsh_index, vsh_u, vsh_v, VshBasis};
pub use lebedev::{lebedev_rule, supported_point_counts, QuadratureRule, RuleId};
