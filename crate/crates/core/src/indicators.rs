//! Indicator functions over sampling grids, peak extraction and trimming.
//!
//! Both indicators reduce to sums `S(z) = Σ_q c_q e^{ik x̂_q·z}` with fixed
//! coefficients `c_q = w_q A_q · conj(B_q)`, since
//! `|⟨A, e^{ik(d−x̂)·z} B⟩| = |S(z)|`. On a regular grid the phase factorizes
//! over the three axes, so a sweep costs one complex multiply-add per
//! (node, quadrature point) with precomputed per-axis tables.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dictionary::DictionaryEntry;
use crate::farfield::{translation_phase, FarFieldPattern};
use crate::sph::{QuadratureRule, VshBasis};
use crate::{cdot, Error, Result, Vec3};

/// Axis-aligned regular grid with an activity mask.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingGrid {
    origin: Vec3,
    spacing: f64,
    dims: [usize; 3],
    active: Vec<bool>,
}

/// Largest number of nodes a grid may hold.
pub const MAX_NODES: usize = 50_000_000;

impl SamplingGrid {
    /// Nodes `lo + h·(i, j, l)` that lie within the box `[lo, hi]`.
    pub fn new(lo: Vec3, hi: Vec3, spacing: f64) -> Result<Self> {
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidParameter(format!("grid spacing must be positive, got {spacing}")));
        }
        let mut dims = [0; 3];
        for a in 0..3 {
            let ext = hi[a] - lo[a];
            if !(ext >= 0.0 && ext.is_finite()) {
                return Err(Error::InvalidParameter(format!("empty grid box along axis {a}")));
            }
            dims[a] = (ext / spacing + 1e-9).floor() as usize + 1;
        }
        let n = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).filter(|&n| n <= MAX_NODES).ok_or_else(
            || Error::InvalidParameter(format!("grid of {dims:?} nodes exceeds {MAX_NODES}; use a coarser spacing")),
        )?;
        Ok(Self { origin: lo, spacing, dims, active: vec![true; n] })
    }

    /// Cube of side `side` centred at `center` with `subdivisions + 1` nodes per axis.
    pub fn cube(center: Vec3, side: f64, subdivisions: usize) -> Result<Self> {
        if subdivisions < 1 || !(side > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "cube needs side > 0 and at least one subdivision (got {side}, {subdivisions})"
            )));
        }
        let h = side / subdivisions as f64;
        let lo = center - Vec3::repeat(side / 2.0);
        let n = (subdivisions + 1).pow(3);
        Ok(Self { origin: lo, spacing: h, dims: [subdivisions + 1; 3], active: vec![true; n] })
    }

    /// Box centred at `center` with half-width `half` (rounded to whole cells).
    pub fn centered(center: Vec3, half: f64, spacing: f64) -> Result<Self> {
        let cells = (half / spacing).round().max(0.0);
        let r = Vec3::repeat(cells * spacing);
        Self::new(center - r, center + r, spacing)
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.active.len()
    }

    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
    }

    pub fn lower(&self) -> Vec3 {
        self.origin
    }

    pub fn upper(&self) -> Vec3 {
        self.origin
            + Vec3::new((self.dims[0] - 1) as f64, (self.dims[1] - 1) as f64, (self.dims[2] - 1) as f64) * self.spacing
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, l: usize) -> usize {
        i + self.dims[0] * (j + self.dims[1] * l)
    }

    #[inline]
    pub fn ijk(&self, idx: usize) -> [usize; 3] {
        let i = idx % self.dims[0];
        let r = idx / self.dims[0];
        [i, r % self.dims[1], r / self.dims[1]]
    }

    pub fn position(&self, idx: usize) -> Vec3 {
        let [i, j, l] = self.ijk(idx);
        self.origin + Vec3::new(i as f64, j as f64, l as f64) * self.spacing
    }

    pub fn is_active(&self, idx: usize) -> bool {
        self.active[idx]
    }

    pub fn active_count(&self) -> usize {
        self.active.iter().filter(|a| **a).count()
    }

    pub fn active_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.active[i]).collect()
    }

    /// Deactivates nodes where `pred(position)` holds.
    pub fn deactivate_where<F: Fn(&Vec3) -> bool>(&mut self, pred: F) {
        for idx in 0..self.len() {
            if self.active[idx] && pred(&self.position(idx)) {
                self.active[idx] = false;
            }
        }
    }

    /// Index of the node nearest to `x` (may be inactive).
    pub fn nearest(&self, x: &Vec3) -> usize {
        let mut c = [0; 3];
        for a in 0..3 {
            let t = ((x[a] - self.origin[a]) / self.spacing).round();
            c[a] = t.clamp(0.0, (self.dims[a] - 1) as f64) as usize;
        }
        self.index(c[0], c[1], c[2])
    }
}

/// Copy of `grid` with nodes within `radius + margin` of `center` deactivated.
pub fn trim(grid: &SamplingGrid, center: &Vec3, radius: f64, margin: f64) -> SamplingGrid {
    let mut out = grid.clone();
    let r = radius + margin;
    out.deactivate_where(|x| (x - center).norm() <= r);
    out
}

/// Which indicator a field holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndicatorKind {
    Small,
    Regular,
}

/// Indicator values at the active nodes of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorField {
    pub grid: SamplingGrid,
    /// Grid indices of the evaluated nodes, ascending.
    pub nodes: Vec<usize>,
    pub values: Vec<f64>,
    pub kind: IndicatorKind,
    pub normalized: bool,
}

impl IndicatorField {
    pub fn max(&self) -> Option<(usize, f64)> {
        self.values
            .iter()
            .enumerate()
            .fold(None, |best, (i, &v)| match best {
                Some((_, b)) if b >= v => best,
                _ => Some((i, v)),
            })
            .map(|(i, v)| (self.nodes[i], v))
    }

    /// Divides by the maximum so values lie in `[0, 1]`.
    pub fn normalize(&mut self) {
        if let Some((_, m)) = self.max() {
            if m > 0.0 {
                self.values.iter_mut().for_each(|v| *v /= m);
            }
        }
        self.normalized = true;
    }

    /// Value at grid index `idx`, if evaluated.
    pub fn value_at(&self, idx: usize) -> Option<f64> {
        self.nodes.binary_search(&idx).ok().map(|i| self.values[i])
    }

    /// `x y z value` per evaluated node.
    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        for (&idx, v) in self.nodes.iter().zip(&self.values) {
            let x = self.grid.position(idx);
            writeln!(out, "{:.10e} {:.10e} {:.10e} {:.10e}", x.x, x.y, x.z, v)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Per-node coefficients `w_q A_q · conj(e_z W_1^m)` for the six dipole harmonics.
fn small_coefficients(a: &FarFieldPattern, rule: &QuadratureRule) -> Vec<Vec<Complex64>> {
    let mut out: Vec<Vec<Complex64>> = (0..6).map(|_| Vec::with_capacity(rule.len())).collect();
    for ((x, w), v) in rule.nodes().iter().zip(rule.weights()).zip(a.values()) {
        let b = VshBasis::new(1, x);
        for (j, h) in b.u_all().iter().chain(b.v_all()).enumerate() {
            out[j].push(cdot(v, h) * *w);
        }
    }
    out
}

fn regular_coefficients(a: &FarFieldPattern, entry: &FarFieldPattern, rule: &QuadratureRule) -> Vec<Complex64> {
    a.values().iter().zip(entry.values()).zip(rule.weights()).map(|((u, v), w)| cdot(u, v) * *w).collect()
}

fn nonzero_norm(a: &FarFieldPattern, rule: &QuadratureRule, what: &str) -> Result<f64> {
    let n = a.norm(rule)?;
    if !(n > 0.0) {
        return Err(Error::ZeroNorm(format!("{what} has zero norm")));
    }
    Ok(n)
}

/// `I_s(z)`: fraction of `‖A‖²` captured by the translated dipole harmonics.
pub fn indicator_s(a: &FarFieldPattern, z: &Vec3, rule: &QuadratureRule) -> Result<f64> {
    a.check_rule(rule)?;
    let norm = nonzero_norm(a, rule, "measured pattern")?;
    let mut acc = 0.0;
    let mut sums = [Complex64::new(0.0, 0.0); 6];
    for ((x, w), v) in rule.nodes().iter().zip(rule.weights()).zip(a.values()) {
        let b = VshBasis::new(1, x);
        let ph = translation_phase(a.wave(), x, z);
        for (j, h) in b.u_all().iter().chain(b.v_all()).enumerate() {
            sums[j] += cdot(v, &(h * ph)) * *w;
        }
    }
    for s in sums {
        acc += s.norm_sqr();
    }
    Ok(acc / (norm * norm))
}

/// `I_r(z) = |⟨A, e^{ik(d−x̂)·z} A_entry⟩| / ‖A_entry‖²`.
pub fn indicator_r(a: &FarFieldPattern, entry: &DictionaryEntry, z: &Vec3, rule: &QuadratureRule) -> Result<f64> {
    check_pair(a, &entry.pattern, rule)?;
    let ne = nonzero_norm(&entry.pattern, rule, "dictionary entry")?;
    let shifted = entry.pattern.translate_phase(z, rule)?;
    Ok(a.inner(&shifted, rule)?.norm() / (ne * ne))
}

fn check_pair(a: &FarFieldPattern, b: &FarFieldPattern, rule: &QuadratureRule) -> Result<()> {
    a.check_rule(rule)?;
    a.check_compatible(b)
}

/// Which indicator to sweep.
#[derive(Debug, Clone, Copy)]
pub enum IndicatorSpec<'a> {
    Small,
    Regular(&'a FarFieldPattern),
}

/// `S_j(z) = Σ_q c_{jq} e^{ik x̂_q·z}` at every active node.
fn phase_sums(coeffs: &[Vec<Complex64>], k: f64, rule: &QuadratureRule, grid: &SamplingGrid) -> Vec<Vec<Complex64>> {
    let nq = rule.len();
    let [nx, ny, nz] = grid.dims();
    let h = grid.spacing();
    let o = grid.lower();
    // table[a][i * nq + q] = e^{ik x̂_q[a] (o[a] + i h)}
    let table = |axis: usize, n: usize| -> Vec<Complex64> {
        let mut t = Vec::with_capacity(n * nq);
        for i in 0..n {
            let c = o[axis] + i as f64 * h;
            t.extend(rule.nodes().iter().map(|x| Complex64::from_polar(1.0, k * x[axis] * c)));
        }
        t
    };
    let (tx, ty, tz) = (table(0, nx), table(1, ny), table(2, nz));
    let lines: Vec<(usize, usize)> = (0..nz).flat_map(|l| (0..ny).map(move |j| (j, l))).collect();
    let per_line: Vec<Vec<(usize, Vec<Complex64>)>> = lines
        .par_iter()
        .map(|&(j, l)| {
            let first = grid.index(0, j, l);
            if !(0..nx).any(|i| grid.is_active(first + i)) {
                return Vec::new();
            }
            let yz: Vec<Complex64> = (0..nq).map(|q| ty[j * nq + q] * tz[l * nq + q]).collect();
            let b: Vec<Vec<Complex64>> =
                coeffs.iter().map(|c| c.iter().zip(&yz).map(|(c, p)| c * p).collect()).collect();
            let mut out = Vec::new();
            for i in 0..nx {
                if !grid.is_active(first + i) {
                    continue;
                }
                let row = &tx[i * nq..(i + 1) * nq];
                let sums = b
                    .iter()
                    .map(|bj| {
                        let (mut re, mut im) = (0.0, 0.0);
                        for (u, v) in bj.iter().zip(row) {
                            re += u.re * v.re - u.im * v.im;
                            im += u.re * v.im + u.im * v.re;
                        }
                        Complex64::new(re, im)
                    })
                    .collect();
                out.push((first + i, sums));
            }
            out
        })
        .collect();
    per_line.into_iter().flatten().map(|(_, s)| s).collect()
}

/// Evaluates an indicator at every active node of `grid`.
pub fn evaluate_grid(
    spec: IndicatorSpec<'_>,
    a: &FarFieldPattern,
    grid: &SamplingGrid,
    rule: &QuadratureRule,
    normalize: bool,
) -> Result<IndicatorField> {
    a.check_rule(rule)?;
    let k = a.wave().k();
    let (kind, values) = match spec {
        IndicatorSpec::Small => {
            let norm = nonzero_norm(a, rule, "measured pattern")?;
            let coeffs = small_coefficients(a, rule);
            let sums = phase_sums(&coeffs, k, rule, grid);
            let v = sums.iter().map(|s| s.iter().map(|c| c.norm_sqr()).sum::<f64>() / (norm * norm)).collect();
            (IndicatorKind::Small, v)
        }
        IndicatorSpec::Regular(entry) => {
            check_pair(a, entry, rule)?;
            let ne = nonzero_norm(entry, rule, "dictionary entry")?;
            let coeffs = vec![regular_coefficients(a, entry, rule)];
            let sums = phase_sums(&coeffs, k, rule, grid);
            (IndicatorKind::Regular, sums.iter().map(|s| s[0].norm() / (ne * ne)).collect())
        }
    };
    let mut field =
        IndicatorField { grid: grid.clone(), nodes: grid.active_indices(), values, kind, normalized: false };
    if normalize {
        field.normalize();
    }
    Ok(field)
}

/// A local maximum of an indicator field.
#[derive(Debug, Clone, PartialEq)]
pub struct Peak {
    pub index: usize,
    pub position: Vec3,
    pub value: f64,
    pub cluster: usize,
}

/// Grid indices of nodes strictly larger than every active 26-neighbour.
pub fn local_maxima(field: &IndicatorField) -> Vec<usize> {
    let g = &field.grid;
    let dims = g.dims();
    let mut out = Vec::new();
    for (pos, &idx) in field.nodes.iter().enumerate() {
        let v = field.values[pos];
        let c = g.ijk(idx);
        let mut strict = true;
        'scan: for dl in -1i64..=1 {
            for dj in -1i64..=1 {
                for di in -1i64..=1 {
                    if di == 0 && dj == 0 && dl == 0 {
                        continue;
                    }
                    let n = [c[0] as i64 + di, c[1] as i64 + dj, c[2] as i64 + dl];
                    if (0..3).any(|a| n[a] < 0 || n[a] >= dims[a] as i64) {
                        continue;
                    }
                    let nidx = g.index(n[0] as usize, n[1] as usize, n[2] as usize);
                    if let Some(w) = field.value_at(nidx) {
                        if w >= v {
                            strict = false;
                            break 'scan;
                        }
                    }
                }
            }
        }
        if strict {
            out.push(idx);
        }
    }
    out
}

/// Strict local maxima with value ≥ `threshold_frac · max`, merged within
/// `min_separation` to the highest representative; sorted by value.
pub fn find_peaks(field: &IndicatorField, threshold_frac: f64, min_separation: f64) -> Vec<Peak> {
    let Some((_, global)) = field.max() else {
        return Vec::new();
    };
    let threshold = threshold_frac * global;
    let mut cands: Vec<(usize, f64)> = local_maxima(field)
        .into_iter()
        .map(|idx| (idx, field.value_at(idx).expect("evaluated node")))
        .filter(|(_, v)| *v >= threshold)
        .collect();
    cands.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut peaks: Vec<Peak> = Vec::new();
    for (idx, value) in cands {
        let position = field.grid.position(idx);
        if peaks.iter().all(|p| (p.position - position).norm() >= min_separation) {
            let cluster = peaks.len();
            peaks.push(Peak { index: idx, position, value, cluster });
        }
    }
    peaks
}
