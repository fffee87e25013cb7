//! Far-field patterns: incident-wave metadata, phase translation, arithmetic,
//! noise injection and the line-oriented text format.
//!
//! File grammar (whitespace separated, one record per line):
//!
//! ```text
//! k d1 d2 d3 p1 p2 p3 N
//! x1 x2 x3 ReA1 ImA1 ReA2 ImA2 ReA3 ImA3      (N lines)
//! ```

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::sph::{t2_inner, t2_norm, QuadratureRule, RuleId, TangentialField};
use crate::{project_tangent, CVec3, Error, Result, Vec3};

const WAVE_TOL: f64 = 1e-12;

/// Time-harmonic plane wave `p e^{ik x·d}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncidentWave {
    k: f64,
    d: Vec3,
    p: Vec3,
}

impl IncidentWave {
    pub fn new(k: f64, d: Vec3, p: Vec3) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::InvalidParameter(format!("wavenumber must be positive, got {k}")));
        }
        if (d.norm() - 1.0).abs() > WAVE_TOL {
            return Err(Error::InvalidParameter(format!(
                "incident direction must be a unit vector (|d| = {})",
                d.norm()
            )));
        }
        if !(p.norm() > 0.0) || !p.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidParameter("polarization must be a nonzero finite vector".into()));
        }
        if p.dot(&d).abs() > WAVE_TOL * p.norm() {
            return Err(Error::InvalidParameter(format!(
                "polarization must be orthogonal to the incident direction (p·d = {})",
                p.dot(&d)
            )));
        }
        Ok(Self { k, d, p })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn direction(&self) -> Vec3 {
        self.d
    }

    pub fn polarization(&self) -> Vec3 {
        self.p
    }

    /// Same direction and polarization at another wavenumber.
    pub fn with_k(&self, k: f64) -> Result<Self> {
        Self::new(k, self.d, self.p)
    }

    /// Equal `d` and `p` (the wavenumber may differ).
    pub fn same_illumination(&self, other: &Self) -> bool {
        (self.d - other.d).norm() <= WAVE_TOL && (self.p - other.p).norm() <= WAVE_TOL * self.p.norm().max(1.0)
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        (self.k - other.k).abs() <= WAVE_TOL * self.k.max(other.k) && self.same_illumination(other)
    }
}

/// Translation phase `e^{ik(d − x̂)·z}` at a single node.
#[inline]
pub fn translation_phase(wave: &IncidentWave, xhat: &Vec3, z: &Vec3) -> Complex64 {
    Complex64::from_polar(1.0, wave.k * (wave.d - xhat).dot(z))
}

/// Electric far-field pattern sampled on a quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct FarFieldPattern {
    field: TangentialField,
    wave: IncidentWave,
}

impl FarFieldPattern {
    pub fn new(field: TangentialField, wave: IncidentWave) -> Self {
        Self { field, wave }
    }

    pub fn zeros(rule: &QuadratureRule, wave: IncidentWave) -> Self {
        Self::new(TangentialField::zeros(rule), wave)
    }

    pub fn field(&self) -> &TangentialField {
        &self.field
    }

    pub fn values(&self) -> &[CVec3] {
        self.field.values()
    }

    pub fn wave(&self) -> &IncidentWave {
        &self.wave
    }

    pub fn rule_id(&self) -> RuleId {
        self.field.rule_id()
    }

    pub fn norm(&self, rule: &QuadratureRule) -> Result<f64> {
        t2_norm(&self.field, rule)
    }

    pub fn inner(&self, other: &Self, rule: &QuadratureRule) -> Result<Complex64> {
        t2_inner(&self.field, &other.field, rule)
    }

    pub fn max_modulus(&self) -> f64 {
        self.field.max_modulus()
    }

    fn map_values<F: FnMut(usize, &CVec3) -> CVec3>(&self, mut f: F) -> Self {
        let mut out = self.clone();
        for (q, v) in out.field.values_mut().iter_mut().enumerate() {
            *v = f(q, v);
        }
        out
    }

    /// Pattern of the same scatterer moved by `z`: multiplies node `q` by
    /// `e^{ik(d − x̂_q)·z}`.
    pub fn translate_phase(&self, z: &Vec3, rule: &QuadratureRule) -> Result<Self> {
        self.check_rule(rule)?;
        let nodes = rule.nodes();
        Ok(self.map_values(|q, v| v * translation_phase(&self.wave, &nodes[q], z)))
    }

    pub fn scale_amplitude(&self, c: Complex64) -> Self {
        self.map_values(|_, v| v * c)
    }

    pub fn subtract(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let rhs = other.values();
        Ok(self.map_values(|q, v| v - rhs[q]))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let rhs = other.values();
        Ok(self.map_values(|q, v| v + rhs[q]))
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.rule_id() != other.rule_id() {
            return Err(Error::Incompatible(format!("patterns sampled on {} and {}", self.rule_id(), other.rule_id())));
        }
        if !self.wave.approx_eq(&other.wave) {
            return Err(Error::Incompatible(format!("incident waves differ: {:?} vs {:?}", self.wave, other.wave)));
        }
        Ok(())
    }

    pub(crate) fn check_rule(&self, rule: &QuadratureRule) -> Result<()> {
        if self.rule_id() != rule.id() {
            return Err(Error::Dimension(format!("pattern sampled on {} but rule is {}", self.rule_id(), rule.id())));
        }
        Ok(())
    }

    /// Adds relative noise `δ ζ₁ max|A| e^{i2πζ₂}` independently to every
    /// Cartesian component of every node (`ζ₁, ζ₂ ~ U[−1, 1]`), then projects
    /// back onto the tangent plane. Deterministic for a given `seed`.
    pub fn apply_noise(&self, delta: f64, seed: u64, rule: &QuadratureRule) -> Result<Self> {
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::InvalidParameter(format!("noise level must be ≥ 0, got {delta}")));
        }
        self.check_rule(rule)?;
        if delta == 0.0 {
            return Ok(self.clone());
        }
        let scale = delta * self.max_modulus();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nodes = rule.nodes();
        Ok(self.map_values(|q, v| {
            let n = noise_draw(&mut rng, scale);
            project_tangent(&nodes[q], &(v + n))
        }))
    }
}

/// One raw perturbation vector; each component has modulus at most `scale`.
pub(crate) fn noise_draw<R: Rng>(rng: &mut R, scale: f64) -> CVec3 {
    let mut c = [Complex64::new(0.0, 0.0); 3];
    for slot in &mut c {
        let z1: f64 = rng.gen_range(-1.0..=1.0);
        let z2: f64 = rng.gen_range(-1.0..=1.0);
        *slot = Complex64::from_polar(scale * z1, 2.0 * PI * z2);
    }
    CVec3::new(c[0], c[1], c[2])
}

/// Writes `pattern` (with its rule's nodes) in the text format.
pub fn write_pattern<W: Write>(pattern: &FarFieldPattern, rule: &QuadratureRule, mut out: W) -> Result<()> {
    pattern.check_rule(rule)?;
    let w = pattern.wave();
    let (d, p) = (w.direction(), w.polarization());
    writeln!(
        out,
        "{:.16e} {:.16e} {:.16e} {:.16e} {:.16e} {:.16e} {:.16e} {}",
        w.k(),
        d.x,
        d.y,
        d.z,
        p.x,
        p.y,
        p.z,
        rule.len()
    )?;
    for (x, a) in rule.nodes().iter().zip(pattern.values()) {
        writeln!(
            out,
            "{:.16e} {:.16e} {:.16e} {:.16e} {:.16e} {:.16e} {:.16e} {:.16e} {:.16e}",
            x.x, x.y, x.z, a.x.re, a.x.im, a.y.re, a.y.im, a.z.re, a.z.im
        )?;
    }
    out.flush()?;
    Ok(())
}

fn parse_numbers(line: &str, lineno: usize, expect: usize) -> Result<Vec<f64>> {
    let vals: Vec<f64> = line
        .split_whitespace()
        .map(|t| t.parse::<f64>().map_err(|_| Error::Parse { line: lineno, message: format!("not a number: {t:?}") }))
        .collect::<Result<_>>()?;
    if vals.len() != expect {
        return Err(Error::Parse { line: lineno, message: format!("expected {expect} fields, found {}", vals.len()) });
    }
    Ok(vals)
}

/// Reads a pattern file onto `rule`. Nodes may appear in any order but must
/// coincide with the rule's nodes.
pub fn read_pattern<R: BufRead>(source: R, rule: &QuadratureRule) -> Result<FarFieldPattern> {
    let mut lines = source.lines().enumerate().filter_map(|(i, l)| match l {
        Ok(s) if s.trim().is_empty() => None,
        Ok(s) => Some(Ok((i + 1, s))),
        Err(e) => Some(Err(Error::from(e))),
    });
    let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, message: "empty pattern file".into() })??;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 8 {
        return Err(Error::Parse { line: hline, message: format!("header needs 8 fields, found {}", head.len()) });
    }
    let nums = parse_numbers(&head[..7].join(" "), hline, 7)?;
    let count: usize = head[7]
        .parse()
        .map_err(|_| Error::Parse { line: hline, message: format!("node count is not an integer: {:?}", head[7]) })?;
    let wave = IncidentWave::new(nums[0], Vec3::new(nums[1], nums[2], nums[3]), Vec3::new(nums[4], nums[5], nums[6]))
        .map_err(|e| Error::Parse { line: hline, message: e.to_string() })?;

    let mut records = Vec::with_capacity(count);
    let mut last_line = hline;
    for item in lines {
        let (lineno, text) = item?;
        last_line = lineno;
        if records.len() == count {
            return Err(Error::Parse {
                line: lineno,
                message: format!("more node records than the header count {count}"),
            });
        }
        let v = parse_numbers(&text, lineno, 9)?;
        records.push((
            lineno,
            Vec3::new(v[0], v[1], v[2]),
            CVec3::new(Complex64::new(v[3], v[4]), Complex64::new(v[5], v[6]), Complex64::new(v[7], v[8])),
        ));
    }
    if records.len() != count {
        return Err(Error::Parse {
            line: last_line,
            message: format!("header announces {count} nodes but {} were found", records.len()),
        });
    }
    if count != rule.len() {
        return Err(Error::Incompatible(format!("file holds {count} nodes, rule {} has {}", rule.id(), rule.len())));
    }

    let mut values = vec![None; count];
    for (lineno, x, a) in records {
        let slot =
            rule.nodes().iter().position(|n| (n - x).norm() < 1e-9).ok_or_else(|| {
                Error::Incompatible(format!("line {lineno}: node {x:?} is not on rule {}", rule.id()))
            })?;
        if values[slot].is_some() {
            return Err(Error::Parse { line: lineno, message: "duplicate node".into() });
        }
        values[slot] = Some(a);
    }
    let values = values.into_iter().map(|v| v.expect("all slots filled")).collect();
    Ok(FarFieldPattern::new(TangentialField::new(values, rule)?, wave))
}
