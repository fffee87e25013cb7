//! Locating drivers: Scheme S (small components), Scheme AR (regular
//! components against an augmented dictionary), Scheme M (AR followed by
//! local re-sampling and S on the residual) and its two-wavenumber variant.

use std::f64::consts::PI;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::dictionary::{Dictionary, DictionaryEntry};
use crate::farfield::{FarFieldPattern, IncidentWave};
use crate::forward::Euler;
use crate::indicators::{evaluate_grid, find_peaks, local_maxima, IndicatorField, IndicatorSpec, Peak, SamplingGrid};
use crate::sph::QuadratureRule;
use crate::{Error, Result, Vec3};

/// Shape token reported for components found by Scheme S.
pub const SMALL: &str = "small";

/// Peak extraction for Scheme S.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakParams {
    /// Keep maxima with value ≥ `threshold_frac ·` global maximum.
    pub threshold_frac: f64,
    /// Merge radius; `None` means half a wavelength.
    pub min_separation: Option<f64>,
}

impl Default for PeakParams {
    fn default() -> Self {
        Self { threshold_frac: 0.8, min_separation: None }
    }
}

impl PeakParams {
    fn separation(&self, wave: &IncidentWave) -> f64 {
        self.min_separation.unwrap_or(PI / wave.k())
    }

    fn validate(&self) -> Result<()> {
        if !(self.threshold_frac > 0.0 && self.threshold_frac <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "threshold fraction must lie in (0, 1], got {}",
                self.threshold_frac
            )));
        }
        if let Some(s) = self.min_separation {
            if !(s >= 0.0) {
                return Err(Error::InvalidParameter(format!("merge radius must be ≥ 0, got {s}")));
            }
        }
        Ok(())
    }
}

/// One located component.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoundComponent {
    pub position: [f64; 3],
    /// Dictionary shape id, or `"small"`.
    pub shape: String,
    pub euler: [f64; 3],
    pub tau: f64,
    /// Normalized `I_s` for small components, `|I − 1|` for regular ones.
    pub score: f64,
}

impl FoundComponent {
    pub fn position(&self) -> Vec3 {
        Vec3::from(self.position)
    }

    pub fn is_small(&self) -> bool {
        self.shape == SMALL
    }

    fn small(position: Vec3, score: f64) -> Self {
        Self { position: position.into(), shape: SMALL.into(), euler: [0.0; 3], tau: 0.0, score }
    }

    fn regular(position: Vec3, entry: &DictionaryEntry, score: f64) -> Self {
        Self {
            position: position.into(),
            shape: entry.shape_id.clone(),
            euler: entry.euler.as_array(),
            tau: entry.tau,
            score,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveInfo {
    pub k: f64,
    pub d: [f64; 3],
    pub p: [f64; 3],
}

impl From<&IncidentWave> for WaveInfo {
    fn from(w: &IncidentWave) -> Self {
        Self { k: w.k(), d: w.direction().into(), p: w.polarization().into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageValue {
    pub stage: String,
    pub value: f64,
}

/// Outcome of a scheme run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconstructionReport {
    pub scheme: String,
    pub waves: Vec<WaveInfo>,
    pub components: Vec<FoundComponent>,
    /// Norm of the data after removing what each stage explained.
    pub residual_norms: Vec<StageValue>,
    /// Wall-clock seconds per stage; omitted from [`to_json`](Self::to_json)
    /// unless requested so that repeated runs serialize identically.
    #[serde(skip)]
    pub timing: Vec<StageValue>,
}

impl ReconstructionReport {
    fn new(scheme: &str, waves: &[&IncidentWave]) -> Self {
        Self {
            scheme: scheme.into(),
            waves: waves.iter().map(|w| WaveInfo::from(*w)).collect(),
            components: Vec::new(),
            residual_norms: Vec::new(),
            timing: Vec::new(),
        }
    }

    pub fn regular(&self) -> impl Iterator<Item = &FoundComponent> {
        self.components.iter().filter(|c| !c.is_small())
    }

    pub fn small(&self) -> impl Iterator<Item = &FoundComponent> {
        self.components.iter().filter(|c| c.is_small())
    }

    /// Pretty JSON with keys in sorted order.
    pub fn to_json(&self, with_timing: bool) -> String {
        let mut value = serde_json::to_value(self).expect("report is serializable");
        if with_timing {
            value["timing"] = serde_json::to_value(&self.timing).expect("timing is serializable");
        }
        serde_json::to_string_pretty(&value).expect("report is serializable") + "\n"
    }

    fn time(&mut self, stage: &str, since: Instant) {
        self.timing.push(StageValue { stage: stage.into(), value: since.elapsed().as_secs_f64() });
    }
}

/// A report together with the indicator fields it was derived from.
#[derive(Debug, Clone)]
pub struct SchemeRun {
    pub report: ReconstructionReport,
    pub fields: Vec<(String, IndicatorField)>,
}

fn small_peaks(
    a: &FarFieldPattern,
    grid: &SamplingGrid,
    rule: &QuadratureRule,
    peaks: &PeakParams,
) -> Result<(IndicatorField, Vec<Peak>)> {
    peaks.validate()?;
    let field = evaluate_grid(IndicatorSpec::Small, a, grid, rule, true)?;
    let found = find_peaks(&field, peaks.threshold_frac, peaks.separation(a.wave()));
    Ok((field, found))
}

/// Scheme S: peaks of the normalized `I_s` over `grid`.
pub fn run_scheme_s(
    a: &FarFieldPattern,
    grid: &SamplingGrid,
    rule: &QuadratureRule,
    peaks: &PeakParams,
) -> Result<SchemeRun> {
    let t0 = Instant::now();
    let mut report = ReconstructionReport::new("S", &[a.wave()]);
    let (field, found) = small_peaks(a, grid, rule, peaks)?;
    report.components = found.iter().map(|p| FoundComponent::small(p.position, p.value)).collect();
    report.residual_norms.push(StageValue { stage: "S".into(), value: a.norm(rule)? });
    report.time("S", t0);
    Ok(SchemeRun { report, fields: vec![("S".into(), field)] })
}

/// Optional coarse Scheme S pass that crops the AR grid.
#[derive(Debug, Clone)]
pub struct Preprocess {
    /// Data at a low wavenumber (same `d`, `p`).
    pub pattern: FarFieldPattern,
    pub grid: SamplingGrid,
    pub peaks: PeakParams,
    /// AR nodes farther than this (per axis) from every coarse peak are dropped.
    pub half_width: f64,
}

#[derive(Debug, Clone)]
pub struct ArParams {
    /// Accept local maxima with `|I − 1| ≤ tol`.
    pub tol: f64,
    /// A candidate must also reach this fraction of its entry's maximum
    /// over the still-active nodes.
    pub significance: f64,
    /// Added to the scaled circumradius when trimming.
    pub margin: f64,
    pub preprocess: Option<Preprocess>,
}

impl Default for ArParams {
    fn default() -> Self {
        Self { tol: 0.2, significance: 0.8, margin: 0.0, preprocess: None }
    }
}

fn check_dictionary(a: &FarFieldPattern, dict: &Dictionary, rule: &QuadratureRule) -> Result<()> {
    if dict.rule_id() != rule.id() || a.rule_id() != rule.id() {
        return Err(Error::Incompatible(format!(
            "data on {}, dictionary on {}, rule {}",
            a.rule_id(),
            dict.rule_id(),
            rule.id()
        )));
    }
    if !dict.wave().approx_eq(a.wave()) {
        return Err(Error::Incompatible(format!(
            "dictionary generated at k = {} but data measured at k = {} (or different d, p)",
            dict.wave().k(),
            a.wave().k()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone)]
struct Candidate {
    entry: usize,
    node: usize,
    value: f64,
    /// `|⟨A, e_z B⟩/‖B‖² − 1|`: also sensitive to the phase of the match.
    mismatch: f64,
}

/// Regular components accepted by Scheme AR.
#[derive(Debug, Clone)]
pub struct ArDetection {
    pub entry: DictionaryEntry,
    pub position: Vec3,
    pub value: f64,
}

impl ArDetection {
    pub fn deviation(&self) -> f64 {
        (self.value - 1.0).abs()
    }
}

/// Indicator fields labelled by stage.
pub type NamedFields = Vec<(String, IndicatorField)>;

/// Core of Scheme AR; returns detections, the final trimmed grid and the
/// indicator fields of accepted entries.
pub fn scheme_ar_detections(
    a: &FarFieldPattern,
    dict: &Dictionary,
    grid: &SamplingGrid,
    rule: &QuadratureRule,
    params: &ArParams,
) -> Result<(Vec<ArDetection>, SamplingGrid, NamedFields)> {
    check_dictionary(a, dict, rule)?;
    if !(params.tol >= 0.0) || !(params.margin >= 0.0) {
        return Err(Error::InvalidParameter("AR tolerance and margin must be ≥ 0".into()));
    }
    if !(0.0..=1.0).contains(&params.significance) {
        return Err(Error::InvalidParameter(format!(
            "AR significance must lie in [0, 1], got {}",
            params.significance
        )));
    }
    let mut grid = grid.clone();
    let mut fields = Vec::new();
    if let Some(pre) = &params.preprocess {
        if !pre.pattern.wave().same_illumination(a.wave()) {
            return Err(Error::Precondition("preprocessing data must share d and p with the AR data".into()));
        }
        let (field, peaks) = small_peaks(&pre.pattern, &pre.grid, rule, &pre.peaks)?;
        let centers: Vec<Vec3> = peaks.iter().map(|p| p.position).collect();
        let hw = pre.half_width;
        grid.deactivate_where(|x| !centers.iter().any(|c| (x - c).amax() <= hw));
        fields.push(("preprocess-S".into(), field));
    }

    // collect candidates from every entry, in descending-norm order
    let entries = dict.entries();
    let per_entry: Vec<(IndicatorField, Vec<Candidate>)> = entries
        .par_iter()
        .enumerate()
        .map(|(j, e)| -> Result<_> {
            let field = evaluate_grid(IndicatorSpec::Regular(&e.pattern), a, &grid, rule, false)?;
            let mut cands = Vec::new();
            for node in local_maxima(&field) {
                let value = field.value_at(node).expect("evaluated node");
                if (value - 1.0).abs() <= params.tol {
                    let shifted = e.pattern.translate_phase(&grid.position(node), rule)?;
                    let c = a.inner(&shifted, rule)? / (e.norm * e.norm);
                    cands.push(Candidate { entry: j, node, value, mismatch: (c - 1.0).norm() });
                }
            }
            Ok((field, cands))
        })
        .collect::<Result<_>>()?;
    let mut cands: Vec<&Candidate> = per_entry.iter().flat_map(|(_, c)| c).collect();
    cands.sort_by(|x, y| x.mismatch.total_cmp(&y.mismatch).then(x.entry.cmp(&y.entry)).then(x.node.cmp(&y.node)));

    // accept best matches first; each acceptance trims the footprint
    let mut found = Vec::new();
    for c in cands {
        if grid.active_count() == 0 {
            break;
        }
        if !grid.is_active(c.node) {
            continue;
        }
        let field = &per_entry[c.entry].0;
        let top = field
            .nodes
            .iter()
            .zip(&field.values)
            .filter(|(&n, _)| grid.is_active(n))
            .map(|(_, &v)| v)
            .fold(0.0, f64::max);
        if c.value < params.significance * top {
            continue;
        }
        let e = &entries[c.entry];
        let position = grid.position(c.node);
        let r = e.radius + params.margin;
        grid.deactivate_where(|x| (x - position).norm() <= r);
        fields.push((format!("AR-{}-{}", found.len(), e.shape_id), per_entry[c.entry].0.clone()));
        found.push(ArDetection { entry: e.clone(), position, value: c.value });
    }
    Ok((found, grid, fields))
}

fn subtract_components(
    a: &FarFieldPattern,
    parts: &[(&FarFieldPattern, Vec3)],
    rule: &QuadratureRule,
) -> Result<FarFieldPattern> {
    let mut r = a.clone();
    for (p, z) in parts {
        r = r.subtract(&p.translate_phase(z, rule)?)?;
    }
    Ok(r)
}

/// Scheme AR over the dictionary.
pub fn run_scheme_ar(
    a: &FarFieldPattern,
    dict: &Dictionary,
    grid: &SamplingGrid,
    rule: &QuadratureRule,
    params: &ArParams,
) -> Result<SchemeRun> {
    let t0 = Instant::now();
    let mut report = ReconstructionReport::new("AR", &[a.wave()]);
    let (found, _, fields) = scheme_ar_detections(a, dict, grid, rule, params)?;
    report.components = found.iter().map(|d| FoundComponent::regular(d.position, &d.entry, d.deviation())).collect();
    let parts: Vec<_> = found.iter().map(|d| (&d.entry.pattern, d.position)).collect();
    let residual = subtract_components(a, &parts, rule)?;
    report.residual_norms.push(StageValue { stage: "AR".into(), value: residual.norm(rule)? });
    report.time("AR", t0);
    Ok(SchemeRun { report, fields })
}

/// How candidate tuples of regular positions are searched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TupleSearch {
    /// Full Cartesian product over the components' cubes (bounded by `cap`).
    Exhaustive,
    /// One component at a time, others held at their current positions.
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResampleConfig {
    /// Cells per cube edge; the cube has `subdivisions + 1` nodes per axis.
    pub subdivisions: usize,
    pub side: f64,
    /// Largest Cartesian product searched exhaustively.
    pub cap: usize,
    pub search: TupleSearch,
    /// Score only this many tuples with the smallest residual norm
    /// (`None`: score all).
    pub shortlist: Option<usize>,
    /// Search passes; each extra pass repeats the search on a cube one
    /// cell wide around the previous choice.
    pub passes: usize,
}

impl Default for ResampleConfig {
    fn default() -> Self {
        Self {
            subdivisions: 10,
            side: 1.0,
            cap: 1_000_000,
            search: TupleSearch::Exhaustive,
            shortlist: None,
            passes: 1,
        }
    }
}

impl ResampleConfig {
    fn validate(&self) -> Result<()> {
        if self.subdivisions < 2 || !(self.side > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "re-sampling cube needs ≥ 2 subdivisions and side > 0 (got {}, {})",
                self.subdivisions, self.side
            )));
        }
        if self.passes == 0 {
            return Err(Error::InvalidParameter("at least one re-sampling pass is required".into()));
        }
        if self.shortlist == Some(0) {
            return Err(Error::InvalidParameter("shortlist must be positive".into()));
        }
        Ok(())
    }

    pub fn cell(&self) -> f64 {
        self.side / self.subdivisions as f64
    }
}

/// Small-component extraction from a residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallParams {
    pub peaks: PeakParams,
    /// Minimum raw `I_s` for a residual peak to count as a component.
    pub min_value: f64,
}

impl Default for SmallParams {
    fn default() -> Self {
        Self { peaks: PeakParams::default(), min_value: 0.15 }
    }
}

/// Result of local re-sampling.
#[derive(Debug, Clone)]
pub struct ResampleOutcome {
    /// Refined regular positions, in input order.
    pub positions: Vec<Vec3>,
    /// Small components as (position, raw `I_s`).
    pub small: Vec<(Vec3, f64)>,
    /// Top raw `I_s` peak of the selected residual.
    pub score: f64,
    pub residual_norm: f64,
    /// Normalized `I_s` of the selected residual.
    pub field: IndicatorField,
}

/// Entry of `dict` with the same shape, orientation and scale as `entry`.
fn counterpart<'a>(dict: &'a Dictionary, entry: &DictionaryEntry) -> Result<&'a DictionaryEntry> {
    let close = |a: &Euler, b: &Euler| {
        (a.theta - b.theta).abs() < 1e-9 && (a.phi - b.phi).abs() < 1e-9 && (a.psi - b.psi).abs() < 1e-9
    };
    dict.entries()
        .iter()
        .find(|e| e.shape_id == entry.shape_id && (e.tau - entry.tau).abs() < 1e-12 && close(&e.euler, &entry.euler))
        .ok_or_else(|| {
            Error::Incompatible(format!(
                "dictionary at k = {} has no entry for {} (euler {:?}, τ = {})",
                dict.wave().k(),
                entry.shape_id,
                entry.euler.as_array(),
                entry.tau
            ))
        })
}

fn top_peak(field: &IndicatorField) -> f64 {
    local_maxima(field).into_iter().filter_map(|i| field.value_at(i)).fold(0.0, f64::max)
}

/// Local re-sampling: searches positions of the regular components over
/// fine cubes, subtracting their patterns from `a` and scoring each tuple by
/// the top `I_s` peak of the residual on `s_grid` (cubes and footprints
/// masked). Ties go to the smaller residual norm.
pub fn local_resample(
    a: &FarFieldPattern,
    found: &[ArDetection],
    dict: &Dictionary,
    config: &ResampleConfig,
    s_grid: &SamplingGrid,
    small: &SmallParams,
    rule: &QuadratureRule,
) -> Result<ResampleOutcome> {
    if found.is_empty() {
        return Err(Error::Precondition("local re-sampling needs at least one regular component".into()));
    }
    config.validate()?;
    small.peaks.validate()?;
    check_dictionary(a, dict, rule)?;
    let patterns: Vec<&FarFieldPattern> =
        found.iter().map(|d| counterpart(dict, &d.entry).map(|e| &e.pattern)).collect::<Result<_>>()?;
    let mut grid = s_grid.clone();
    let reach = config.side * 3f64.sqrt() / 2.0;
    for d in found {
        let r = d.entry.radius + reach;
        grid.deactivate_where(|x| (x - d.position).norm() <= r);
    }

    let residual_of = |tuple: &[Vec3]| -> Result<FarFieldPattern> {
        let parts: Vec<_> = patterns.iter().zip(tuple).map(|(p, z)| (*p, *z)).collect();
        subtract_components(a, &parts, rule)
    };
    // score = (top raw I_s peak, residual norm)
    let score_tuples = |tuples: Vec<Vec<Vec3>>| -> Result<(Vec<Vec3>, f64, f64)> {
        let mut normed: Vec<(Vec<Vec3>, f64)> = tuples
            .into_par_iter()
            .map(|t| {
                let n = residual_of(&t)?.norm(rule)?;
                Ok((t, n))
            })
            .collect::<Result<_>>()?;
        normed.sort_by(|x, y| x.1.total_cmp(&y.1));
        if let Some(k) = config.shortlist {
            normed.truncate(k);
        }
        let scored: Vec<(Vec<Vec3>, f64, f64)> = normed
            .into_par_iter()
            .map(|(t, n)| {
                if n == 0.0 {
                    return Ok((t, 0.0, n));
                }
                let r = residual_of(&t)?;
                let field = evaluate_grid(IndicatorSpec::Small, &r, &grid, rule, false)?;
                Ok((t, top_peak(&field), n))
            })
            .collect::<Result<_>>()?;
        Ok(scored
            .into_iter()
            .reduce(|best, c| if c.1 > best.1 || (c.1 == best.1 && c.2 < best.2) { c } else { best })
            .expect("at least one tuple"))
    };

    let search = |centers: &[Vec3], side: f64| -> Result<(Vec<Vec3>, f64, f64)> {
        let cubes: Vec<Vec<Vec3>> = centers
            .iter()
            .map(|c| {
                let cube = SamplingGrid::cube(*c, side, config.subdivisions)?;
                Ok((0..cube.len()).map(|i| cube.position(i)).collect())
            })
            .collect::<Result<_>>()?;
        match config.search {
            TupleSearch::Exhaustive => {
                let total = cubes.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len()));
                match total {
                    Some(n) if n <= config.cap => {}
                    _ => {
                        return Err(Error::InvalidParameter(format!(
                            "{} candidate tuples exceed the cap of {}; use coarser cubes or the greedy search",
                            total.map_or("too many".to_string(), |n| n.to_string()),
                            config.cap
                        )))
                    }
                }
                let mut tuples = Vec::new();
                let mut idx = vec![0usize; cubes.len()];
                'outer: loop {
                    tuples.push(idx.iter().zip(&cubes).map(|(&i, c)| c[i]).collect::<Vec<_>>());
                    for axis in 0..cubes.len() {
                        idx[axis] += 1;
                        if idx[axis] < cubes[axis].len() {
                            continue 'outer;
                        }
                        idx[axis] = 0;
                    }
                    break;
                }
                score_tuples(tuples)
            }
            TupleSearch::Greedy => {
                let mut current = centers.to_vec();
                let mut best = (current.clone(), 0.0, f64::INFINITY);
                for i in 0..cubes.len() {
                    let tuples = cubes[i]
                        .iter()
                        .map(|z| {
                            let mut t = current.clone();
                            t[i] = *z;
                            t
                        })
                        .collect();
                    best = score_tuples(tuples)?;
                    current = best.0.clone();
                }
                Ok(best)
            }
        }
    };

    // each further pass searches a cube one cell wide around the last choice
    let shrink = config.subdivisions as f64;
    let mut centers: Vec<Vec3> = found.iter().map(|d| d.position).collect();
    let mut side = config.side;
    let mut best = (centers.clone(), 0.0, f64::INFINITY);
    for _ in 0..config.passes {
        best = search(&centers, side)?;
        centers = best.0.clone();
        side /= shrink;
    }
    let (positions, score, residual_norm) = best;

    let residual = residual_of(&positions)?;
    let mut field = evaluate_grid(IndicatorSpec::Small, &residual, &grid, rule, false)?;
    let raw_max = field.max().map_or(0.0, |m| m.1);
    field.normalize();
    let peaks = find_peaks(&field, small.peaks.threshold_frac, small.peaks.separation(a.wave()));
    let mut small_found = Vec::new();
    for p in peaks {
        if p.value * raw_max < small.min_value {
            continue;
        }
        // refine on local lattices, one per pass, at the fine-cube spacings
        let (mut z, mut v) = (p.position, 0.0);
        let mut half = grid.spacing();
        let mut step = config.cell();
        for _ in 0..config.passes {
            let local = SamplingGrid::centered(z, half, step)?;
            let lf = evaluate_grid(IndicatorSpec::Small, &residual, &local, rule, false)?;
            let (idx, val) = lf.max().expect("non-empty local grid");
            z = local.position(idx);
            v = val;
            half = step;
            step /= shrink;
        }
        small_found.push((z, v));
    }
    Ok(ResampleOutcome { positions, small: small_found, score, residual_norm, field })
}

#[derive(Debug, Clone, Default)]
pub struct MParams {
    pub ar: ArParams,
    pub resample: ResampleConfig,
    pub small: SmallParams,
}

/// Scheme M on a single measurement.
pub fn run_scheme_m(
    a: &FarFieldPattern,
    dict: &Dictionary,
    ar_grid: &SamplingGrid,
    s_grid: &SamplingGrid,
    rule: &QuadratureRule,
    params: &MParams,
) -> Result<SchemeRun> {
    scheme_m_impl("M", a, a, dict, dict, ar_grid, s_grid, rule, params)
}

/// Enhanced Scheme M: AR on `a1`/`dict1`, re-sampling and Scheme S on
/// `a2`/`dict2`. Both measurements must share `d` and `p`.
#[allow(clippy::too_many_arguments)]
pub fn run_enhanced_m(
    a1: &FarFieldPattern,
    a2: &FarFieldPattern,
    dict1: &Dictionary,
    dict2: &Dictionary,
    ar_grid: &SamplingGrid,
    s_grid: &SamplingGrid,
    rule: &QuadratureRule,
    params: &MParams,
) -> Result<SchemeRun> {
    if !a1.wave().same_illumination(a2.wave()) {
        return Err(Error::Precondition("the two measurements must share incident direction and polarization".into()));
    }
    scheme_m_impl("enhanced-M", a1, a2, dict1, dict2, ar_grid, s_grid, rule, params)
}

#[allow(clippy::too_many_arguments)]
fn scheme_m_impl(
    name: &str,
    a1: &FarFieldPattern,
    a2: &FarFieldPattern,
    dict1: &Dictionary,
    dict2: &Dictionary,
    ar_grid: &SamplingGrid,
    s_grid: &SamplingGrid,
    rule: &QuadratureRule,
    params: &MParams,
) -> Result<SchemeRun> {
    check_dictionary(a2, dict2, rule)?;
    let waves: Vec<&IncidentWave> =
        if a1.wave().approx_eq(a2.wave()) { vec![a1.wave()] } else { vec![a1.wave(), a2.wave()] };
    let mut report = ReconstructionReport::new(name, &waves);
    let t0 = Instant::now();
    let (found, _, mut fields) = scheme_ar_detections(a1, dict1, ar_grid, rule, &params.ar)?;
    let parts: Vec<_> = found.iter().map(|d| (&d.entry.pattern, d.position)).collect();
    report
        .residual_norms
        .push(StageValue { stage: "AR".into(), value: subtract_components(a1, &parts, rule)?.norm(rule)? });
    report.time("AR", t0);

    let t1 = Instant::now();
    if found.is_empty() {
        // nothing regular: plain Scheme S on the full grid
        let (field, peaks) = small_peaks(a2, s_grid, rule, &params.small.peaks)?;
        report.components = peaks.iter().map(|p| FoundComponent::small(p.position, p.value)).collect();
        report.residual_norms.push(StageValue { stage: "S".into(), value: a2.norm(rule)? });
        fields.push(("S".into(), field));
        report.time("S", t1);
        return Ok(SchemeRun { report, fields });
    }
    let out = local_resample(a2, &found, dict2, &params.resample, s_grid, &params.small, rule)?;
    for (d, z) in found.iter().zip(&out.positions) {
        report.components.push(FoundComponent::regular(*z, &d.entry, d.deviation()));
    }
    for (z, v) in &out.small {
        report.components.push(FoundComponent::small(*z, *v));
    }
    report.residual_norms.push(StageValue { stage: "resample".into(), value: out.residual_norm });
    fields.push(("resample-S".into(), out.field));
    report.time("resample", t1);
    Ok(SchemeRun { report, fields })
}
