//! Distribution functions and rearrangements of piecewise-linear fields.
//!
//! On one triangle with sorted vertex values `a <= b <= c` and area `A` the
//! superlevel measure is
//!
//! ```text
//! μ(t) = A                                  t < a
//!        A (1 - (t-a)² / ((b-a)(c-a)))      a <= t < b
//!        A (c-t)² / ((c-a)(c-b))            b <= t < c
//!        0                                  t >= c
//! ```
//!
//! so the total μ is a quadratic polynomial between consecutive vertex
//! values. Tables store μ at each level, its left limit `|{u >= t}|`, and μ
//! at interval midpoints, which pins every quadratic piece exactly.

use crate::error::{Error, Result};
use crate::fem::ScalarField;
use crate::geometry::{inverse_ball_area, Manifold};
use crate::mesh::Mesh;
use crate::quadrature::adaptive_simpson;
use crate::radial::RadialProfile;

pub const DEFAULT_UNIFORM_LEVELS: usize = 512;

/// Monotone table `t ↦ μ(t) = |{u > t}|`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionData {
    levels: Vec<f64>,
    measures: Vec<f64>,
    left_measures: Vec<f64>,
    mid_measures: Vec<f64>,
    total: f64,
    min_value: f64,
    max_value: f64,
    // ∫_{levels[k]}^{levels[last]} μ dt
    tail: Vec<f64>,
}

#[derive(Clone, Copy)]
struct Tri {
    a: f64,
    b: f64,
    c: f64,
    area: f64,
}

impl Tri {
    fn new(mut w: [f64; 3], area: f64) -> Self {
        w.sort_by(f64::total_cmp);
        Tri {
            a: w[0],
            b: w[1],
            c: w[2],
            area,
        }
    }

    /// `|{u > t}| ∩ T` for `a <= t < c`.
    fn partial(&self, t: f64) -> f64 {
        let Tri { a, b, c, area } = *self;
        if t < b {
            area * (1.0 - (t - a) * (t - a) / ((b - a) * (c - a)))
        } else {
            area * (c - t) * (c - t) / ((c - a) * (c - b))
        }
    }
}

/// μ at every point of the sorted list `ts`, summed in triangle order.
fn measures_at(tris: &[Tri], ts: &[f64]) -> Vec<f64> {
    let n = ts.len();
    let mut full = vec![0.0; n + 1];
    let mut out = vec![0.0; n];
    for tri in tris {
        // levels below a see the whole triangle
        let ka = ts.partition_point(|&t| t < tri.a);
        full[0] += tri.area;
        full[ka] -= tri.area;
        let kc = ts.partition_point(|&t| t < tri.c);
        for k in ka..kc {
            out[k] += tri.partial(ts[k]);
        }
    }
    let mut run = 0.0;
    for k in 0..n {
        run += full[k];
        out[k] += run;
    }
    out
}

fn check_levels(levels: &[f64]) -> Result<()> {
    if levels.is_empty() {
        return Err(Error::InvalidInput("level grid is empty".into()));
    }
    if levels.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidInput("level grid contains non-finite values".into()));
    }
    if let Some(k) = (1..levels.len()).find(|&k| levels[k] <= levels[k - 1]) {
        return Err(Error::InvalidInput(format!(
            "levels must be strictly increasing (levels[{}] = {} >= levels[{k}] = {})",
            k - 1,
            levels[k - 1],
            levels[k]
        )));
    }
    Ok(())
}

/// 512 uniform levels over the value range together with every vertex value.
pub fn default_levels(u: &ScalarField) -> Vec<f64> {
    let (lo, hi) = (u.min(), u.max());
    let mut levels: Vec<f64> = u.values().to_vec();
    if hi > lo {
        levels.extend((0..=DEFAULT_UNIFORM_LEVELS).map(|k| lo + (hi - lo) * k as f64 / DEFAULT_UNIFORM_LEVELS as f64));
    }
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    levels
}

/// Exact distribution function of `u` at the given strictly increasing levels.
pub fn distribution_function(u: &ScalarField, levels: &[f64]) -> Result<DistributionData> {
    check_levels(levels)?;
    let mesh: &Mesh = u.mesh();
    let v = u.values();
    let tris: Vec<Tri> = mesh
        .triangles()
        .iter()
        .zip(mesh.triangle_areas())
        .map(|(t, &a)| Tri::new(t.map(|i| v[i]), a))
        .collect();
    let measures = measures_at(&tris, levels);
    let mut left_measures = measures.clone();
    // only triangles flat at exactly t_k carry mass on {u = t_k}
    for tri in tris.iter().filter(|t| t.a == t.c) {
        if let Ok(k) = levels.binary_search_by(|x| x.total_cmp(&tri.a)) {
            left_measures[k] += tri.area;
        }
    }
    let mids: Vec<f64> = levels.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let mid_measures = measures_at(&tris, &mids);
    Ok(DistributionData::from_tables(
        levels.to_vec(),
        measures,
        left_measures,
        mid_measures,
        mesh.area(),
        u.min(),
        u.max(),
    ))
}

/// Distribution function on [`default_levels`].
pub fn distribution(u: &ScalarField) -> DistributionData {
    distribution_function(u, &default_levels(u)).expect("default levels are valid")
}

impl DistributionData {
    fn from_tables(
        levels: Vec<f64>,
        measures: Vec<f64>,
        left_measures: Vec<f64>,
        mid_measures: Vec<f64>,
        total: f64,
        min_value: f64,
        max_value: f64,
    ) -> Self {
        let n = levels.len();
        let mut tail = vec![0.0; n];
        for k in (0..n.saturating_sub(1)).rev() {
            let piece = (levels[k + 1] - levels[k]) / 6.0 * (measures[k] + 4.0 * mid_measures[k] + left_measures[k + 1]);
            tail[k] = tail[k + 1] + piece;
        }
        DistributionData {
            levels,
            measures,
            left_measures,
            mid_measures,
            total,
            min_value,
            max_value,
            tail,
        }
    }

    /// Table assembled from externally computed measures.
    pub(crate) fn from_parts(
        levels: Vec<f64>,
        measures: Vec<f64>,
        left_measures: Vec<f64>,
        mid_measures: Vec<f64>,
        total: f64,
        min_value: f64,
        max_value: f64,
    ) -> Result<Self> {
        check_levels(&levels)?;
        if measures.len() != levels.len()
            || left_measures.len() != levels.len()
            || mid_measures.len() + 1 != levels.len()
        {
            return Err(Error::InvalidInput("distribution table columns have mismatched lengths".into()));
        }
        Ok(Self::from_tables(levels, measures, left_measures, mid_measures, total, min_value, max_value))
    }

    /// Distribution of a step function taking `values[i]` on a cell of
    /// measure `areas[i]`.
    pub fn from_cells(values: &[f64], areas: &[f64]) -> Result<Self> {
        if values.is_empty() || values.len() != areas.len() {
            return Err(Error::InvalidInput("cells need matching, nonempty value and area lists".into()));
        }
        if areas.iter().any(|a| !(*a > 0.0 && a.is_finite())) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("cell areas must be positive and values finite".into()));
        }
        let mut levels = values.to_vec();
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        let above = |t: f64, strict: bool| -> f64 {
            values
                .iter()
                .zip(areas)
                .filter(|(v, _)| if strict { **v > t } else { **v >= t })
                .map(|(_, a)| a)
                .sum()
        };
        let measures: Vec<f64> = levels.iter().map(|&t| above(t, true)).collect();
        let left_measures: Vec<f64> = levels.iter().map(|&t| above(t, false)).collect();
        let mid_measures = measures[..measures.len() - 1].to_vec();
        let total = areas.iter().sum();
        let (lo, hi) = (levels[0], levels[levels.len() - 1]);
        Ok(Self::from_tables(levels, measures, left_measures, mid_measures, total, lo, hi))
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// μ(t_k) for each level.
    pub fn measures(&self) -> &[f64] {
        &self.measures
    }

    /// `|{u >= t_k}|` for each level.
    pub fn left_measures(&self) -> &[f64] {
        &self.left_measures
    }

    pub fn total_measure(&self) -> f64 {
        self.total
    }

    pub fn min_value(&self) -> f64 {
        self.min_value
    }

    pub fn max_value(&self) -> f64 {
        self.max_value
    }

    /// Value of μ on the open interval `(t_{k-1}, t_k)` at local coordinate `x ∈ [0, 1]`.
    fn piece(&self, k: usize, x: f64) -> f64 {
        let m0 = self.measures[k - 1];
        let m1 = self.left_measures[k];
        let mm = self.mid_measures[k - 1];
        let b = 4.0 * (mm - m0) - (m1 - m0);
        let c = (m1 - m0) - b;
        (m0 + x * (b + c * x)).clamp(m1.min(m0), m0.max(m1))
    }

    /// μ(t) by exact quadratic interpolation on the table.
    pub fn measure_at(&self, t: f64) -> f64 {
        let n = self.levels.len();
        if t < self.min_value {
            return self.total;
        }
        if t >= self.max_value {
            return 0.0;
        }
        if t < self.levels[0] {
            // below a table that does not start at the field minimum
            let x = (t - self.min_value) / (self.levels[0] - self.min_value);
            return self.total + x * (self.left_measures[0] - self.total);
        }
        let k = self.levels.partition_point(|&l| l <= t);
        if self.levels[k - 1] == t {
            return self.measures[k - 1];
        }
        if k == n {
            let x = (t - self.levels[n - 1]) / (self.max_value - self.levels[n - 1]);
            return (1.0 - x) * self.measures[n - 1];
        }
        let x = (t - self.levels[k - 1]) / (self.levels[k] - self.levels[k - 1]);
        self.piece(k, x)
    }

    /// `∫_t^∞ μ(τ) dτ`, exact on tables that cover the value range.
    pub fn integral_above(&self, t: f64) -> f64 {
        let n = self.levels.len();
        if t >= self.levels[n - 1] {
            if t >= self.max_value {
                return 0.0;
            }
            return 0.5 * self.measure_at(t) * (self.max_value - t);
        }
        let last_tail = 0.5 * self.measures[n - 1] * (self.max_value - self.levels[n - 1]);
        if t <= self.levels[0] {
            let lo = t.max(self.min_value);
            let below = if lo < self.levels[0] {
                0.5 * (self.measure_at(lo) + self.left_measures[0]) * (self.levels[0] - lo)
            } else {
                0.0
            };
            return self.total * (lo - t).max(0.0) + below + self.tail[0] + last_tail;
        }
        let k = self.levels.partition_point(|&l| l <= t);
        let (t0, t1) = (self.levels[k - 1], self.levels[k]);
        let x = (t - t0) / (t1 - t0);
        let xm = 0.5 * (x + 1.0);
        // Simpson is exact on the quadratic piece
        let part = (t1 - t) / 6.0 * (self.piece(k, x) + 4.0 * self.piece(k, xm) + self.left_measures[k]);
        part + self.tail[k] + last_tail
    }

    /// `∫ u^p = ∫_0^∞ p t^{p-1} μ(t) dt` for nonnegative fields, p = 1 or 2.
    /// Simpson is exact here since each piece of `t^{p-1} μ` is at most cubic.
    pub fn power_integral(&self, p: u32) -> Result<f64> {
        if !(1..=2).contains(&p) {
            return Err(Error::InvalidInput(format!("power_integral supports p = 1, 2; got {p}")));
        }
        if self.min_value < 0.0 {
            return Err(Error::InvalidInput(format!(
                "power_integral needs a nonnegative field, minimum is {}",
                self.min_value
            )));
        }
        let pf = p as f64;
        let w = |t: f64| pf * t.powi(p as i32 - 1);
        let simpson = |a: f64, b: f64, ma: f64, mb: f64| {
            if b <= a {
                return 0.0;
            }
            let c = 0.5 * (a + b);
            (b - a) / 6.0 * (w(a) * ma + 4.0 * w(c) * self.measure_at(c) + w(b) * mb)
        };
        let n = self.levels.len();
        // below the field minimum μ equals the total measure
        let mut sum = self.total * self.min_value.powi(p as i32);
        sum += simpson(self.min_value, self.levels[0], self.total, self.left_measures[0]);
        for k in 1..n {
            sum += simpson(self.levels[k - 1], self.levels[k], self.measures[k - 1], self.left_measures[k]);
        }
        sum += simpson(self.levels[n - 1], self.max_value, self.measures[n - 1], 0.0);
        Ok(sum)
    }

    /// Absorbs rounding just outside `[0, |Ω|]`.
    fn snap(&self, s: f64) -> f64 {
        let eps = 1e-12 * self.total;
        if s < 0.0 && s >= -eps {
            0.0
        } else if s > self.total && s <= self.total + eps {
            self.total
        } else {
            s
        }
    }

    /// Decreasing rearrangement `u*(s) = inf{t : μ(t) < s}` with `u*(0) = max u`.
    pub fn rearranged_value(&self, s: f64) -> Result<f64> {
        let s = self.snap(s);
        if !(0.0..=self.total).contains(&s) {
            return Err(Error::InvalidInput(format!(
                "s = {s} lies outside [0, {}]",
                self.total
            )));
        }
        if s == 0.0 {
            return Ok(self.max_value);
        }
        let k = self.measures.partition_point(|&m| m >= s);
        if k == self.levels.len() {
            // all tabulated μ >= s: crossing lies above the last level
            let last = self.levels.len() - 1;
            let x = 1.0 - s / self.measures[last];
            return Ok(self.levels[last] + x * (self.max_value - self.levels[last]));
        }
        if k == 0 {
            let t0 = self.levels[0];
            if self.left_measures[0] >= s || t0 <= self.min_value {
                return Ok(t0);
            }
            // table starts above the minimum: linear fill on [min, t_0]
            let x = (self.total - s) / (self.total - self.left_measures[0]);
            return Ok(self.min_value + x * (t0 - self.min_value));
        }
        if self.left_measures[k] >= s {
            return Ok(self.levels[k]);
        }
        // μ decreases through s inside (t_{k-1}, t_k)
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if self.piece(k, mid) >= s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (t0, t1) = (self.levels[k - 1], self.levels[k]);
        Ok(t0 + hi * (t1 - t0))
    }

    /// `∫_0^s u*(σ) dσ`.
    pub fn rearranged_integral(&self, s: f64) -> Result<f64> {
        let s = self.snap(s);
        let t = self.rearranged_value(s)?;
        Ok(s * t + self.integral_above(t))
    }

    /// Points of `[0, |Ω|]` where `u*` may fail to be smooth: every μ and
    /// left-limit value in the table.
    pub fn s_breakpoints(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self
            .measures
            .iter()
            .chain(&self.left_measures)
            .copied()
            .chain([0.0, self.total])
            .filter(|x| (0.0..=self.total).contains(x))
            .collect();
        s.sort_by(f64::total_cmp);
        s.dedup();
        s
    }
}

/// Sampled decreasing rearrangement, backed by its exact distribution table.
#[derive(Debug, Clone)]
pub struct RearrangedProfile {
    dist: DistributionData,
    s: Vec<f64>,
    values: Vec<f64>,
}

pub fn decreasing_rearrangement(d: &DistributionData, s_grid: &[f64]) -> Result<RearrangedProfile> {
    let values = s_grid
        .iter()
        .map(|&s| d.rearranged_value(s))
        .collect::<Result<Vec<_>>>()?;
    Ok(RearrangedProfile {
        dist: d.clone(),
        s: s_grid.to_vec(),
        values,
    })
}

impl RearrangedProfile {
    /// Profile sampled at the breakpoints of `d` and the midpoints between them.
    pub fn from_distribution(d: &DistributionData) -> Self {
        let bp = d.s_breakpoints();
        let mut grid = Vec::with_capacity(2 * bp.len());
        for w in bp.windows(2) {
            grid.push(w[0]);
            grid.push(0.5 * (w[0] + w[1]));
        }
        grid.push(*bp.last().expect("breakpoints include 0 and |Ω|"));
        decreasing_rearrangement(d, &grid).expect("grid lies in [0, |Ω|]")
    }

    pub fn distribution(&self) -> &DistributionData {
        &self.dist
    }

    pub fn s_grid(&self) -> &[f64] {
        &self.s
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn total_measure(&self) -> f64 {
        self.dist.total
    }

    /// Exact `u*(s)`.
    pub fn value(&self, s: f64) -> Result<f64> {
        self.dist.rearranged_value(s)
    }

    /// Exact `∫_0^s u*`.
    pub fn integral(&self, s: f64) -> Result<f64> {
        self.dist.rearranged_integral(s)
    }
}

/// Schwarz symmetrization: `h♯(r) = h*(θ·|B_r|)` on `[0, R₀]`, `|B_{R₀}| = |Ω|/θ`.
pub fn schwarz_profile(p: &RearrangedProfile, theta: f64, m: &Manifold) -> Result<RadialProfile> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::InvalidInput(format!("θ must lie in (0, 1], got {theta}")));
    }
    let total = p.total_measure();
    let n = m.dim();
    let kappa = m.kappa();
    // also validates |Ω|/θ against the volume of the model space
    let r0 = inverse_ball_area(kappa, n, total / theta)?;
    let mut s_nodes: Vec<f64> = p.s_grid().to_vec();
    s_nodes.extend([0.0, total]);
    s_nodes.sort_by(f64::total_cmp);
    s_nodes.dedup();
    let mut r = Vec::with_capacity(s_nodes.len());
    let mut values = Vec::with_capacity(s_nodes.len());
    for &s in &s_nodes {
        let radius = if s == total { r0 } else { inverse_ball_area(kappa, n, s / theta)? };
        if r.last().is_some_and(|&last: &f64| radius <= last) {
            continue;
        }
        r.push(radius);
        values.push(p.value(s)?);
    }
    if r.len() == 1 {
        r.push(r0);
        values.push(p.value(total)?);
    }
    RadialProfile::new(*m, r, values)
}

/// `∫_0^{|Ω|} f* g* ds − ∫_Ω f g dx`; nonnegative by Hardy–Littlewood.
pub fn hardy_littlewood_check(f: &ScalarField, g: &ScalarField) -> Result<f64> {
    f.check_same_mesh(g)?;
    if f.min() < 0.0 || g.min() < 0.0 {
        return Err(Error::InvalidInput("Hardy–Littlewood check needs nonnegative fields".into()));
    }
    let mesh = f.mesh();
    let (fv, gv) = (f.values(), g.values());
    let direct: f64 = mesh
        .triangles()
        .iter()
        .zip(mesh.triangle_areas())
        .map(|(t, &a)| {
            let fs: f64 = t.iter().map(|&i| fv[i]).sum();
            let gs: f64 = t.iter().map(|&i| gv[i]).sum();
            let fg: f64 = t.iter().map(|&i| fv[i] * gv[i]).sum();
            a / 12.0 * (fg + fs * gs)
        })
        .sum();
    let (df, dg) = (distribution(f), distribution(g));
    let mut nodes = df.s_breakpoints();
    nodes.extend(dg.s_breakpoints());
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    let scale = (f.max() * g.max() * mesh.area()).max(f64::MIN_POSITIVE);
    let tol = 1e-13 * scale / nodes.len() as f64;
    let mut rearranged = 0.0;
    for w in nodes.windows(2) {
        let prod = |s: f64| {
            let a = df.rearranged_value(s).unwrap_or(0.0);
            let b = dg.rearranged_value(s).unwrap_or(0.0);
            a * b
        };
        rearranged += adaptive_simpson(prod, w[0], w[1], tol)?;
    }
    Ok(rearranged - direct)
}

/// Result of the concentration check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcentrationMargin {
    pub margin: f64,
    /// Measure `s` where the minimum is attained.
    pub at: f64,
}

/// Bathtub form of the concentration condition: the minimum over an s-grid
/// of `(s/|Ω|)^{(n-2)/n} ∫_Ω f − ∫_0^s f*`.
pub fn concentration_check(fstar: &RearrangedProfile, n: usize, total: f64) -> Result<ConcentrationMargin> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("dimension must be at least 2, got {n}")));
    }
    if !(total > 0.0) {
        return Err(Error::InvalidInput(format!("total measure must be positive, got {total}")));
    }
    let omega = fstar.total_measure();
    let bp = fstar.distribution().s_breakpoints();
    let mut grid = Vec::with_capacity(8 * bp.len());
    for w in bp.windows(2) {
        for j in 0..8 {
            grid.push(w[0] + (w[1] - w[0]) * j as f64 / 8.0);
        }
    }
    grid.push(omega);
    let whole = fstar.integral(omega)?;
    let exponent = (n as f64 - 2.0) / n as f64;
    let mut best = ConcentrationMargin {
        margin: f64::INFINITY,
        at: 0.0,
    };
    for s in grid {
        let m = (s / total).powf(exponent) * whole - fstar.integral(s)?;
        if m < best.margin {
            best = ConcentrationMargin { margin: m, at: s };
        }
    }
    Ok(best)
}

/// Exact `∫_{u > t} g dx` for P1 fields `u`, `g` on the same mesh.
pub fn superlevel_integral(u: &ScalarField, g: &ScalarField, t: f64) -> Result<f64> {
    u.check_same_mesh(g)?;
    let mesh = u.mesh();
    let (uv, gv) = (u.values(), g.values());
    let mut total = 0.0;
    for t_idx in mesh.triangles() {
        let p = t_idx.map(|i| mesh.vertices()[i]);
        let w = t_idx.map(|i| uv[i]);
        let gw = t_idx.map(|i| gv[i]);
        let poly = clip_above(&p, &w, &gw, t);
        // fan triangulation, centroid rule is exact for linear g
        for k in 1..poly.len().saturating_sub(1) {
            let (a, b, c) = (poly[0], poly[k], poly[k + 1]);
            let area = crate::mesh::triangle_area(a.0, b.0, c.0);
            total += area * (a.1 + b.1 + c.1) / 3.0;
        }
    }
    Ok(total)
}

/// Sutherland–Hodgman clip of a triangle to `{u > t}`; carries the values of `g`.
fn clip_above(p: &[[f64; 3]; 3], w: &[f64; 3], g: &[f64; 3], t: f64) -> Vec<([f64; 3], f64)> {
    let mut out = Vec::with_capacity(4);
    for i in 0..3 {
        let j = (i + 1) % 3;
        let (ins_i, ins_j) = (w[i] > t, w[j] > t);
        if ins_i {
            out.push((p[i], g[i]));
        }
        if ins_i != ins_j {
            let x = (t - w[i]) / (w[j] - w[i]);
            let q = crate::mesh::lerp(p[i], p[j], x);
            out.push((q, g[i] + x * (g[j] - g[i])));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Manifold;
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn single(values: [f64; 3]) -> ScalarField {
        let mesh = Mesh::from_parts(
            Manifold::plane(),
            vec![[0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 1.5, 0.0]],
            vec![[0, 1, 2]],
            vec![[0, 1], [1, 2], [2, 0]],
            1.0,
            None,
        )
        .unwrap();
        ScalarField::new(Arc::new(mesh), values.to_vec()).unwrap()
    }

    #[test]
    fn single_triangle_exact() {
        let u = single([0.0, 0.0, 1.0]);
        let a = 1.5;
        let levels: Vec<f64> = (0..=100).map(|k| k as f64 / 100.0).collect();
        let d = distribution_function(&u, &levels).unwrap();
        for (t, m) in levels.iter().zip(d.measures()) {
            assert!((m - a * (1.0 - t) * (1.0 - t)).abs() < 1e-12);
        }
        for t in [0.013, 0.4567, 0.999] {
            assert!((d.measure_at(t) - a * (1.0 - t) * (1.0 - t)).abs() < 1e-12);
        }
        // ∫_0^1 A(1-t)² = A/3 = ∫u
        assert!((d.integral_above(0.0) - 0.5).abs() < 1e-14);
        // u*(s) = 1 - sqrt(s/A)
        for s in [0.1, 0.75, 1.4] {
            assert!((d.rearranged_value(s).unwrap() - (1.0 - (s / a).sqrt())).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_field() {
        let u = single([2.0, 2.0, 2.0]);
        let d = distribution(&u);
        assert_eq!(d.levels(), &[2.0]);
        assert_eq!(d.measures(), &[0.0]);
        assert_eq!(d.left_measures(), &[1.5]);
        assert_eq!(d.measure_at(1.9), 1.5);
        assert_eq!(d.measure_at(2.0), 0.0);
        for s in [0.0, 0.3, 1.5] {
            assert_eq!(d.rearranged_value(s).unwrap(), 2.0);
        }
        assert!((d.rearranged_integral(1.5).unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn two_valued_staircase() {
        // value 1 on measure 0.3, value 3 on measure 0.7
        let d = DistributionData::from_cells(&[1.0, 3.0], &[0.3, 0.7]).unwrap();
        assert_eq!(d.rearranged_value(0.5).unwrap(), 3.0);
        assert_eq!(d.rearranged_value(0.7).unwrap(), 3.0);
        assert_eq!(d.rearranged_value(0.71).unwrap(), 1.0);
        assert!((d.rearranged_integral(1.0).unwrap() - 2.4).abs() < 1e-14);
        assert!((d.rearranged_integral(0.5).unwrap() - 1.5).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_levels_and_s() {
        let u = single([0.0, 0.5, 1.0]);
        assert!(distribution_function(&u, &[]).is_err());
        assert!(distribution_function(&u, &[0.5, 0.2]).is_err());
        let d = distribution(&u);
        assert!(d.rearranged_value(-0.1).is_err());
        assert!(d.rearranged_value(1.6).is_err());
    }

    #[test]
    fn schwarz_of_paraboloid_profile() {
        // u*(s) = 1 - s/π on a set of measure π, θ = 1 gives u♯(r) = 1 - r²
        let cells: Vec<f64> = (0..2000).map(|k| 1.0 - (k as f64 + 0.5) / 2000.0).collect();
        let areas = vec![PI / 2000.0; 2000];
        let d = DistributionData::from_cells(&cells, &areas).unwrap();
        let p = RearrangedProfile::from_distribution(&d);
        let sharp = schwarz_profile(&p, 1.0, &Manifold::plane()).unwrap();
        assert!((sharp.r_max() - 1.0).abs() < 1e-12);
        for r in [0.1, 0.5, 0.9] {
            assert!((sharp.value(r) - (1.0 - r * r)).abs() < 2e-3);
        }
        let half = schwarz_profile(&p, 0.5, &Manifold::plane()).unwrap();
        assert!((half.r_max() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn hl_with_constant_is_zero() {
        let u = single([0.2, 1.0, 0.7]);
        let one = ScalarField::constant(u.mesh().clone(), 1.0).unwrap();
        assert!(hardy_littlewood_check(&u, &one).unwrap().abs() < 1e-12);
        assert!(hardy_littlewood_check(&u, &u).unwrap() >= -1e-12);
    }

    #[test]
    fn concentration_constant_n3() {
        let d = DistributionData::from_cells(&[2.0], &[3.0]).unwrap();
        let p = RearrangedProfile::from_distribution(&d);
        let c = concentration_check(&p, 3, 3.0).unwrap();
        assert!(c.margin.abs() < 1e-14);
        assert!(concentration_check(&p, 1, 3.0).is_err());
    }

    #[test]
    fn superlevel_integral_of_one_is_measure() {
        let u = single([0.0, 0.4, 1.0]);
        let one = ScalarField::constant(u.mesh().clone(), 1.0).unwrap();
        let d = distribution(&u);
        for t in [0.1, 0.4, 0.77] {
            let direct = superlevel_integral(&u, &one, t).unwrap();
            assert!((direct - d.measure_at(t)).abs() < 1e-14);
        }
    }
}
