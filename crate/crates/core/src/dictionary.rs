//! Augmented reference spaces: far-field patterns of every shape × orientation
//! × scale, sorted by descending norm.
//!
//! Manifest grammar (`manifest.txt`, whitespace separated):
//!
//! ```text
//! # emscatter-dictionary k d1 d2 d3 p1 p2 p3 nodes
//! shape theta phi psi tau pattern-path norm radius      (one line per entry)
//! ```
//!
//! `radius` is the scaled circumradius of the entry's body; paths are
//! relative to the manifest's directory.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fs;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use rayon::prelude::*;

use crate::farfield::{read_pattern, write_pattern, FarFieldPattern, IncidentWave};
use crate::forward::{eval_far_field, Euler, Pose, ShapeModel};
use crate::sph::{QuadratureRule, RuleId};
use crate::{Error, Result, Vec3};

/// Orientations merged when their patterns differ by less than this (relative).
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Default relative distance below which two entries count as indistinct.
pub const DEFAULT_DISTINCT: f64 = 0.01;

/// Orientation sampling.
#[derive(Debug, Clone, PartialEq)]
pub enum OrientationGrid {
    /// Rotations about the z-axis by multiples of `step` in `[0, 2π)`.
    InPlane { step: f64 },
    /// `θ, φ ∈ {0, h, …, 2π − h}`, `ψ ∈ {0, h, …, π − h}`.
    Full3D { step: f64 },
    /// Explicit list.
    Fixed(Vec<Euler>),
}

impl OrientationGrid {
    fn divisions(range: f64, step: f64) -> Result<usize> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidParameter(format!("angular step must be positive, got {step}")));
        }
        let q = range / step;
        let n = q.round();
        if n < 1.0 || (q - n).abs() > 1e-9 * q.max(1.0) {
            return Err(Error::InvalidParameter(format!("angular step {step} does not divide {range} evenly")));
        }
        Ok(n as usize)
    }

    /// Grid orientations in generation order.
    pub fn orientations(&self) -> Result<Vec<Euler>> {
        match self {
            OrientationGrid::InPlane { step } => {
                let n = Self::divisions(2.0 * PI, *step)?;
                (0..n).map(|j| Euler::in_plane(j as f64 * step)).collect()
            }
            OrientationGrid::Full3D { step } => {
                let n = Self::divisions(2.0 * PI, *step)?;
                let m = Self::divisions(PI, *step)?;
                let mut out = Vec::with_capacity(n * n * m);
                for i in 0..n {
                    for j in 0..n {
                        for l in 0..m {
                            out.push(Euler::new(i as f64 * step, j as f64 * step, l as f64 * step)?);
                        }
                    }
                }
                Ok(out)
            }
            OrientationGrid::Fixed(list) => {
                if list.is_empty() {
                    return Err(Error::InvalidParameter("empty orientation list".into()));
                }
                Ok(list.clone())
            }
        }
    }

    /// Angular mesh size, if the grid is regular.
    pub fn step(&self) -> Option<f64> {
        match self {
            OrientationGrid::InPlane { step } | OrientationGrid::Full3D { step } => Some(*step),
            OrientationGrid::Fixed(_) => None,
        }
    }
}

/// One reference item: a shape at the origin with a given orientation and scale.
#[derive(Debug, Clone, PartialEq)]
pub struct DictionaryEntry {
    pub shape_id: String,
    pub euler: Euler,
    pub tau: f64,
    pub pattern: FarFieldPattern,
    pub norm: f64,
    /// Circumradius of the scaled body.
    pub radius: f64,
}

impl DictionaryEntry {
    pub fn pose_at(&self, z: Vec3) -> Pose {
        Pose { z, euler: self.euler, tau: self.tau }
    }

    fn order(&self, other: &Self) -> Ordering {
        other
            .norm
            .total_cmp(&self.norm)
            .then_with(|| self.shape_id.cmp(&other.shape_id))
            .then_with(|| self.euler.theta.total_cmp(&other.euler.theta))
            .then_with(|| self.euler.phi.total_cmp(&other.euler.phi))
            .then_with(|| self.euler.psi.total_cmp(&other.euler.psi))
            .then_with(|| self.tau.total_cmp(&other.tau))
    }
}

/// Entries sorted by descending norm, all generated with one wave and rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Dictionary {
    entries: Vec<DictionaryEntry>,
    wave: IncidentWave,
    rule: RuleId,
    step: Option<f64>,
    scales: Vec<f64>,
}

impl Dictionary {
    /// Assembles a dictionary from prebuilt entries (sorted here).
    pub fn from_entries(
        mut entries: Vec<DictionaryEntry>,
        wave: IncidentWave,
        rule: RuleId,
        step: Option<f64>,
    ) -> Result<Self> {
        for e in &entries {
            if e.pattern.rule_id() != rule || !e.pattern.wave().approx_eq(&wave) {
                return Err(Error::Incompatible(format!(
                    "entry {} was generated with a different wave or rule",
                    e.shape_id
                )));
            }
            if !(e.norm > 0.0) {
                return Err(Error::ZeroNorm(format!("entry {} has zero norm", e.shape_id)));
            }
        }
        entries.sort_by(DictionaryEntry::order);
        let mut scales: Vec<f64> = entries.iter().map(|e| e.tau).collect();
        scales.sort_by(f64::total_cmp);
        scales.dedup();
        Ok(Self { entries, wave, rule, step, scales })
    }

    pub fn entries(&self) -> &[DictionaryEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn wave(&self) -> &IncidentWave {
        &self.wave
    }

    pub fn rule_id(&self) -> RuleId {
        self.rule
    }

    pub fn angle_step(&self) -> Option<f64> {
        self.step
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    /// Keeps only entries satisfying `keep` (order preserved).
    pub fn filtered<F: Fn(&DictionaryEntry) -> bool>(&self, keep: F) -> Self {
        let entries = self.entries.iter().filter(|e| keep(e)).cloned().collect();
        Self { entries, ..self.clone() }
    }
}

fn relative_distance(a: &FarFieldPattern, b: &FarFieldPattern, na: f64, nb: f64) -> f64 {
    let diff: f64 = a.values().iter().zip(b.values()).map(|(u, v)| (u - v).norm_squared()).sum();
    let scale: f64 = if na >= nb { a.values() } else { b.values() }.iter().map(|u| u.norm_squared()).sum();
    (diff / scale).sqrt()
}

/// Synthesizes every (shape, orientation, scale) pattern at the origin,
/// collapses orientations that coincide by symmetry, and sorts.
pub fn build_dictionary(
    shapes: &[ShapeModel],
    orientations: &OrientationGrid,
    scales: &[f64],
    wave: &IncidentWave,
    rule: &QuadratureRule,
) -> Result<Dictionary> {
    if scales.is_empty() {
        return Err(Error::InvalidParameter("scale set is empty".into()));
    }
    if let Some(bad) = scales.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
        return Err(Error::InvalidParameter(format!("scales must be positive, got {bad}")));
    }
    for (i, s) in shapes.iter().enumerate() {
        if shapes[..i].iter().any(|o| o.id() == s.id()) {
            return Err(Error::InvalidParameter(format!("duplicate shape id {:?}", s.id())));
        }
    }
    let eulers = orientations.orientations()?;
    let groups: Vec<(&ShapeModel, f64)> = shapes.iter().flat_map(|s| scales.iter().map(move |&t| (s, t))).collect();
    let per_group: Vec<Vec<DictionaryEntry>> = groups
        .par_iter()
        .map(|&(shape, tau)| -> Result<Vec<DictionaryEntry>> {
            let mut kept: Vec<DictionaryEntry> = Vec::new();
            for e in &eulers {
                let pattern = eval_far_field(shape, &Pose { z: Vec3::zeros(), euler: *e, tau }, wave, rule)?;
                let norm = pattern.norm(rule)?;
                if !(norm > 0.0) {
                    return Err(Error::ZeroNorm(format!("shape {} has a vanishing pattern", shape.id())));
                }
                let duplicate =
                    kept.iter().any(|k| relative_distance(&k.pattern, &pattern, k.norm, norm) < SYMMETRY_TOL);
                if !duplicate {
                    kept.push(DictionaryEntry {
                        shape_id: shape.id().to_string(),
                        euler: *e,
                        tau,
                        pattern,
                        norm,
                        radius: tau * shape.circumradius(),
                    });
                }
            }
            Ok(kept)
        })
        .collect::<Result<_>>()?;
    Dictionary::from_entries(per_group.into_iter().flatten().collect(), *wave, rule.id(), orientations.step())
}

/// A pair of entries closer than the distinctness threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct DistinctnessViolation {
    pub first: usize,
    pub second: usize,
    pub distance: f64,
}

/// All entry pairs with relative distance below `delta`.
pub fn verify_distinct(dict: &Dictionary, delta: f64) -> Vec<DistinctnessViolation> {
    let e = dict.entries();
    let mut out = Vec::new();
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            let distance = relative_distance(&e[i].pattern, &e[j].pattern, e[i].norm, e[j].norm);
            if distance < delta {
                out.push(DistinctnessViolation { first: i, second: j, distance });
            }
        }
    }
    out
}

const MANIFEST: &str = "manifest.txt";
const MAGIC: &str = "# emscatter-dictionary";

/// Writes `manifest.txt` and one pattern file per entry into `dir`.
pub fn write_dictionary(dict: &Dictionary, rule: &QuadratureRule, dir: &Path) -> Result<()> {
    if dict.rule_id() != rule.id() {
        return Err(Error::Dimension(format!("dictionary uses {}, rule is {}", dict.rule_id(), rule.id())));
    }
    fs::create_dir_all(dir)?;
    let w = dict.wave();
    let (d, p) = (w.direction(), w.polarization());
    let mut manifest = format!(
        "{MAGIC} {:.16e} {:.16e} {:.16e} {:.16e} {:.16e} {:.16e} {:.16e} {}\n",
        w.k(),
        d.x,
        d.y,
        d.z,
        p.x,
        p.y,
        p.z,
        rule.len()
    );
    for (i, e) in dict.entries().iter().enumerate() {
        let name = format!("entry-{i:04}.pat");
        let file = fs::File::create(dir.join(&name))?;
        write_pattern(&e.pattern, rule, BufWriter::new(file))?;
        manifest.push_str(&format!(
            "{} {:.16e} {:.16e} {:.16e} {:.16e} {} {:.16e} {:.16e}\n",
            e.shape_id, e.euler.theta, e.euler.phi, e.euler.psi, e.tau, name, e.norm, e.radius
        ));
    }
    fs::write(dir.join(MANIFEST), manifest)?;
    Ok(())
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    tok.parse().map_err(|_| Error::Parse { line, message: format!("not a number: {tok:?}") })
}

/// Reads a dictionary written by [`write_dictionary`]; norms are recomputed
/// from the patterns.
pub fn read_dictionary(dir: &Path, rule: &QuadratureRule) -> Result<Dictionary> {
    let text = fs::read_to_string(dir.join(MANIFEST))?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Parse { line: 1, message: "empty manifest".into() })?;
    let rest = header
        .strip_prefix(MAGIC)
        .ok_or(Error::Parse { line: 1, message: format!("manifest must start with {MAGIC:?}") })?;
    let h: Vec<&str> = rest.split_whitespace().collect();
    if h.len() != 8 {
        return Err(Error::Parse { line: 1, message: format!("header needs 8 fields, found {}", h.len()) });
    }
    let v: Vec<f64> = h[..7].iter().map(|t| parse_f64(t, 1)).collect::<Result<_>>()?;
    let wave = IncidentWave::new(v[0], Vec3::new(v[1], v[2], v[3]), Vec3::new(v[4], v[5], v[6]))?;
    let nodes: usize = h[7].parse().map_err(|_| Error::Parse { line: 1, message: "bad node count".into() })?;
    if nodes != rule.len() {
        return Err(Error::Incompatible(format!("manifest uses {nodes} nodes, rule {} has {}", rule.id(), rule.len())));
    }
    let mut entries = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.len() != 8 {
            return Err(Error::Parse { line: lineno, message: format!("expected 8 fields, found {}", t.len()) });
        }
        let euler = Euler::new(parse_f64(t[1], lineno)?, parse_f64(t[2], lineno)?, parse_f64(t[3], lineno)?)?;
        let tau = parse_f64(t[4], lineno)?;
        let file = fs::File::open(dir.join(t[5]))?;
        let pattern = read_pattern(BufReader::new(file), rule)?;
        if !pattern.wave().approx_eq(&wave) {
            return Err(Error::Incompatible(format!("{} was generated with a different wave", t[5])));
        }
        let norm = pattern.norm(rule)?;
        entries.push(DictionaryEntry {
            shape_id: t[0].to_string(),
            euler,
            tau,
            pattern,
            norm,
            radius: parse_f64(t[7], lineno)?,
        });
    }
    Dictionary::from_entries(entries, wave, rule.id(), None)
}
