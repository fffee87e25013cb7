//! Lebedev–Laikov quadrature on the unit sphere.
//!
//! Nodes are generated from octahedrally-invariant orbits; weights are scaled
//! so that they sum to `4π`, making quadrature sums direct approximations of
//! surface integrals.

use std::f64::consts::PI;

use super::lebedev_tables::{Orbit, TABLES};
use crate::{Error, Result, Vec3};

/// Identifier of a quadrature rule (its node count).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleId(pub usize);

impl std::fmt::Display for RuleId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "lebedev-{}", self.0)
    }
}

/// Nodes and weights of a spherical quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<Vec3>,
    weights: Vec<f64>,
    degree: usize,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[Vec3] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Highest polynomial degree integrated exactly.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn id(&self) -> RuleId {
        RuleId(self.nodes.len())
    }

    /// Quadrature sum of a scalar function over the sphere.
    pub fn integrate<F: Fn(&Vec3) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(x)).sum()
    }
}

/// Node counts accepted by [`lebedev_rule`].
pub fn supported_point_counts() -> Vec<usize> {
    TABLES.iter().map(|t| t.points).collect()
}

/// Builds the Lebedev rule with `point_count` nodes.
pub fn lebedev_rule(point_count: usize) -> Result<QuadratureRule> {
    let table = TABLES
        .iter()
        .find(|t| t.points == point_count)
        .ok_or_else(|| Error::UnsupportedRule { requested: point_count, supported: supported_point_counts() })?;
    let mut nodes = Vec::with_capacity(point_count);
    let mut weights = Vec::with_capacity(point_count);
    for orbit in table.orbits {
        let before = nodes.len();
        expand_orbit(orbit, &mut nodes);
        let w = 4.0 * PI * orbit.v;
        weights.extend(std::iter::repeat_n(w, nodes.len() - before));
    }
    debug_assert_eq!(nodes.len(), point_count);
    Ok(QuadratureRule { nodes, weights, degree: table.degree })
}

fn expand_orbit(orbit: &Orbit, out: &mut Vec<Vec3>) {
    match orbit.kind {
        1 => push_signed_perms(out, [1.0, 0.0, 0.0]),
        2 => push_signed_perms(out, [0.0, 0.5f64.sqrt(), 0.5f64.sqrt()]),
        3 => {
            let a = (1.0f64 / 3.0).sqrt();
            push_signed_perms(out, [a, a, a])
        }
        4 => {
            let a = orbit.a;
            let b = (1.0 - 2.0 * a * a).sqrt();
            push_signed_perms(out, [a, a, b])
        }
        5 => {
            let a = orbit.a;
            let b = (1.0 - a * a).sqrt();
            push_signed_perms(out, [a, b, 0.0])
        }
        6 => {
            let (a, b) = (orbit.a, orbit.b);
            let c = (1.0 - a * a - b * b).sqrt();
            push_signed_perms(out, [a, b, c])
        }
        k => unreachable!("unknown orbit kind {k}"),
    }
}

/// Pushes every distinct signed permutation of `base`, in a fixed order.
fn push_signed_perms(out: &mut Vec<Vec3>, base: [f64; 3]) {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let start = out.len();
    for perm in PERMS {
        for signs in 0..8u8 {
            let mut v = [base[perm[0]], base[perm[1]], base[perm[2]]];
            for (i, c) in v.iter_mut().enumerate() {
                if signs & (1 << i) != 0 && *c != 0.0 {
                    *c = -*c;
                }
            }
            let cand = Vec3::new(v[0], v[1], v[2]);
            if !out[start..].contains(&cand) {
                out.push(cand);
            }
        }
    }
}
