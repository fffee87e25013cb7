use num_complex::Complex64;

use super::{QuadratureRule, RuleId};
use crate::{cdot, project_tangent, CVec3, Error, Result};

/// Complex tangential vector field sampled at the nodes of a quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentialField {
    values: Vec<CVec3>,
    rule: RuleId,
}

impl TangentialField {
    /// Wraps `values` without projection. Length must match the rule.
    pub fn new(values: Vec<CVec3>, rule: &QuadratureRule) -> Result<Self> {
        if values.len() != rule.len() {
            return Err(Error::Dimension(format!("{} values for a {}-node rule", values.len(), rule.len())));
        }
        Ok(Self { values, rule: rule.id() })
    }

    /// Samples `f` at every node and projects onto the tangent plane.
    pub fn from_fn<F: FnMut(&crate::Vec3) -> CVec3>(rule: &QuadratureRule, mut f: F) -> Self {
        let values = rule.nodes().iter().map(|x| project_tangent(x, &f(x))).collect();
        Self { values, rule: rule.id() }
    }

    pub fn zeros(rule: &QuadratureRule) -> Self {
        Self { values: vec![CVec3::zeros(); rule.len()], rule: rule.id() }
    }

    pub fn values(&self) -> &[CVec3] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [CVec3] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<CVec3> {
        self.values
    }

    pub fn rule_id(&self) -> RuleId {
        self.rule
    }

    /// Largest pointwise Euclidean modulus.
    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest ratio `|x̂ · a| / |a|` over nodes with nonzero values.
    pub fn tangency_defect(&self, rule: &QuadratureRule) -> f64 {
        rule.nodes()
            .iter()
            .zip(&self.values)
            .filter(|(_, v)| v.norm() > 0.0)
            .map(|(x, v)| (v.x * x.x + v.y * x.y + v.z * x.z).norm() / v.norm())
            .fold(0.0, f64::max)
    }
}

fn check_rule(a: &TangentialField, rule: &QuadratureRule) -> Result<()> {
    if a.rule != rule.id() {
        return Err(Error::Dimension(format!("field sampled on {} but rule is {}", a.rule, rule.id())));
    }
    Ok(())
}

/// `⟨a, b⟩ = Σ_q w_q a_q · conj(b_q)`; conjugation on the second argument.
pub fn t2_inner(a: &TangentialField, b: &TangentialField, rule: &QuadratureRule) -> Result<Complex64> {
    check_rule(a, rule)?;
    check_rule(b, rule)?;
    Ok(a.values.iter().zip(&b.values).zip(rule.weights()).map(|((x, y), w)| cdot(x, y) * w).sum())
}

/// `‖a‖ = sqrt(Re ⟨a, a⟩)`.
pub fn t2_norm(a: &TangentialField, rule: &QuadratureRule) -> Result<f64> {
    check_rule(a, rule)?;
    Ok(a.values.iter().zip(rule.weights()).map(|(x, w)| w * x.norm_squared()).sum::<f64>().sqrt())
}
