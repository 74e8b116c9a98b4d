//! Numerical checks of the comparison statements between the solution `u`
//! on Ω and the radial solution `v` on the comparison ball Ω♯.
//!
//! Every check yields a [`CheckEntry`] with `margin = rhs − lhs` for
//! inequalities `lhs <= rhs` (and `−|rhs − lhs|` for identities). Verdicts
//! compare the margin with a tolerance; mesh-dependent checks use
//! `tol(h) = C·h·scale`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fem::{field_stats, FieldStats, ScalarField};
use crate::geometry::{ball_metrics, inverse_ball_area, iso_profile_a, iso_profile_flat, theta_of, Manifold};
use crate::mesh::{dist, lerp, BoundaryField};
use crate::quadrature::adaptive_simpson;
use crate::radial::{boundary_inverse_beta, monotonicity_report, RadialProfile};
use crate::rearrange::{
    concentration_check, distribution, distribution_function, hardy_littlewood_check, schwarz_profile,
    superlevel_integral, DistributionData, RearrangedProfile,
};

/// Constant `C` in `tol(h) = C·h·scale`. With 0.1 the disk equality case
/// stays below 0.15·tol on four refinement levels starting at h = 0.05.
pub const TOLERANCE_CONSTANT: f64 = 0.1;
/// Number of levels in τ-ladders.
pub const LADDER_LEVELS: usize = 64;

const EXACT_REL_TOL: f64 = 1e-8;
const EQUIMEASURABILITY_REL_TOL: f64 = 1e-6;
const HARDY_LITTLEWOOD_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "holds")]
    Holds,
    #[serde(rename = "holds-within-tolerance")]
    HoldsWithinTolerance,
    #[serde(rename = "violated")]
    Violated,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::HoldsWithinTolerance => "holds-within-tolerance",
            Verdict::Violated => "violated",
        }
    }

    pub fn passed(self) -> bool {
        self != Verdict::Violated
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `lhs <= rhs`
    Le,
    /// `lhs == rhs`
    Eq,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    /// Level, radius or measure where the worst margin occurs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at: Option<f64>,
    /// Largest `|rhs − lhs|` over the sampled points, for checks evaluated
    /// on a grid; measures the distance from equality.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_abs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckEntry {
    pub fn inequality(name: &str, lhs: f64, rhs: f64, tolerance: f64, at: Option<f64>) -> Self {
        Self::with_margin(name, lhs, rhs, rhs - lhs, tolerance, at)
    }

    /// Entry for a worst case whose margin is not simply `rhs − lhs` of the
    /// reported pair.
    pub fn with_margin(name: &str, lhs: f64, rhs: f64, margin: f64, tolerance: f64, at: Option<f64>) -> Self {
        CheckEntry {
            name: name.to_string(),
            relation: Relation::Le,
            lhs,
            rhs,
            margin,
            tolerance,
            verdict: verdict(margin, tolerance),
            at,
            max_abs: None,
            note: None,
        }
    }

    pub fn with_max_abs(mut self, max_abs: f64) -> Self {
        self.max_abs = Some(max_abs);
        self
    }

    pub fn identity(name: &str, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let margin = -(rhs - lhs).abs();
        let verdict = if margin == 0.0 {
            Verdict::Holds
        } else if -margin <= tolerance {
            Verdict::HoldsWithinTolerance
        } else {
            Verdict::Violated
        };
        CheckEntry {
            name: name.to_string(),
            relation: Relation::Eq,
            lhs,
            rhs,
            margin,
            tolerance,
            verdict,
            at: None,
            max_abs: None,
            note: None,
        }
    }
}

/// `holds` for margin >= 0, `holds-within-tolerance` down to `−tol`.
pub fn verdict(margin: f64, tolerance: f64) -> Verdict {
    if margin >= 0.0 {
        Verdict::Holds
    } else if margin >= -tolerance {
        Verdict::HoldsWithinTolerance
    } else {
        Verdict::Violated
    }
}

/// Running worst case over sampled points of an inequality `lhs <= rhs`.
struct Worst {
    margin: f64,
    lhs: f64,
    rhs: f64,
    at: f64,
    spread: f64,
}

impl Worst {
    fn new() -> Self {
        Worst {
            margin: f64::INFINITY,
            lhs: 0.0,
            rhs: 0.0,
            at: f64::NAN,
            spread: 0.0,
        }
    }

    fn push(&mut self, lhs: f64, rhs: f64, at: f64) {
        self.push_counted(lhs, rhs, at, true);
    }

    /// `spread` only follows points with `counted` set.
    fn push_counted(&mut self, lhs: f64, rhs: f64, at: f64, counted: bool) {
        let margin = rhs - lhs;
        if counted {
            self.spread = self.spread.max(margin.abs());
        }
        if margin < self.margin {
            *self = Worst { margin, lhs, rhs, at, spread: self.spread };
        }
    }

    fn entry(&self, name: &str, tolerance: f64) -> CheckEntry {
        if !self.margin.is_finite() {
            return CheckEntry::inequality(name, 0.0, 0.0, tolerance, None);
        }
        CheckEntry::with_margin(name, self.lhs, self.rhs, self.margin, tolerance, Some(self.at)).with_max_abs(self.spread)
    }
}

/// Mesh-dependent tolerance `C·h·scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub constant: f64,
    pub h: f64,
}

impl Tolerance {
    pub fn new(h: f64, scale_factor: f64) -> Self {
        Tolerance {
            constant: TOLERANCE_CONSTANT * scale_factor,
            h,
        }
    }

    pub fn of(&self, scale: f64) -> f64 {
        self.constant * self.h * scale.abs()
    }
}

/// 64 levels uniformly covering `[0.5·u₀, max u]`.
pub fn level_ladder(u0: f64, max: f64) -> Vec<f64> {
    let lo = 0.5 * u0;
    let mut out: Vec<f64> = (0..LADDER_LEVELS)
        .map(|k| lo + (max - lo) * k as f64 / (LADDER_LEVELS - 1) as f64)
        .collect();
    out.dedup();
    out
}

/// L¹ comparison: `‖u‖_{L¹(Ω)} <= θ‖v‖_{L¹(Ω♯)}`.
pub fn verify_l1(stats: &FieldStats, area: f64, v: &RadialProfile, theta: f64, tol: &Tolerance) -> Result<CheckEntry> {
    let m = v.manifold();
    let ball = ball_metrics(m.kappa(), m.dim(), v.r_max())?.area;
    if (theta * ball - area).abs() > 1e-8 * area {
        return Err(Error::InvalidInput(format!(
            "area bookkeeping mismatch: |Ω| = {area} but θ·|Ω♯| = {}",
            theta * ball
        )));
    }
    let rhs = theta * v.integrate(f64::abs)?;
    Ok(CheckEntry::inequality("l1", stats.l1, rhs, tol.of(rhs), None))
}

/// Superlevel comparison `μ_u(t) <= θ·μ_v(t)` on a shared level grid.
pub fn verify_pointwise(mu_u: &DistributionData, mu_v: &DistributionData, theta: f64, tol: &Tolerance) -> Result<CheckEntry> {
    if mu_u.levels() != mu_v.levels() {
        return Err(Error::InvalidInput("level grids of μ_u and μ_v are not aligned".into()));
    }
    let mut worst = Worst::new();
    for ((&t, &a), &b) in mu_u.levels().iter().zip(mu_u.measures()).zip(mu_v.measures()) {
        worst.push(a, theta * b, t);
    }
    Ok(worst.entry("pointwise", tol.of(mu_u.total_measure())))
}

/// Direct profile comparison `u♯(r) <= v(r)`.
pub fn verify_profile(u_sharp: &RadialProfile, v: &RadialProfile, tol: &Tolerance) -> CheckEntry {
    let mut worst = Worst::new();
    for &r in u_sharp.r().iter().chain(v.r()) {
        worst.push(u_sharp.value(r), v.value(r), r);
    }
    worst.entry("profile", tol.of(v.center_value()))
}

/// Boundary minima `u₀ <= v₀`.
pub fn verify_min_comparison(u0: f64, v0: f64, tol: &Tolerance) -> CheckEntry {
    CheckEntry::inequality("min", u0, v0, tol.of(v0), None)
}

/// Length of `{u = t}` inside Ω plus the part of ∂Ω where `u > t`.
pub fn superlevel_perimeter(u: &ScalarField, t: f64) -> f64 {
    let mesh = u.mesh();
    let w = u.values();
    let vs = mesh.vertices();
    let mut length = 0.0;
    for tri in mesh.triangles() {
        let mut pts = Vec::with_capacity(2);
        for k in 0..3 {
            let (i, j) = (tri[k], tri[(k + 1) % 3]);
            if (w[i] > t) != (w[j] > t) {
                let x = (t - w[i]) / (w[j] - w[i]);
                pts.push(lerp(vs[i], vs[j], x));
            }
        }
        if pts.len() == 2 {
            length += dist(pts[0], pts[1]);
        }
    }
    for (e, &[a, b]) in mesh.boundary().iter().enumerate() {
        let (wa, wb) = (w[a], w[b]);
        let len = mesh.boundary_edge_length(e);
        let frac = if wa > t && wb > t {
            1.0
        } else if wa > t || wb > t {
            (wa.max(wb) - t) / (wa - wb).abs()
        } else {
            0.0
        };
        length += frac * len;
    }
    length
}

/// Isoperimetric comparison `|∂Ω_t| >= θ·|∂B|`, `|B| = μ_u(t)/θ`, for
/// levels above the boundary minimum.
pub fn verify_isoperimetric(u: &ScalarField, levels: &[f64], theta: f64, m: &Manifold, tol: &Tolerance) -> Result<CheckEntry> {
    let u0 = field_stats(u).boundary_min;
    if let Some(&t) = levels.iter().find(|&&t| t < u0) {
        return Err(Error::InvalidInput(format!(
            "level {t} lies below the boundary minimum {u0}; the boundary would enter the level set"
        )));
    }
    let n = m.dim();
    let area = u.mesh().area();
    let d = distribution_function(u, &sorted_unique(levels))?;
    let mut worst = Worst::new();
    for (&t, &mu) in d.levels().iter().zip(d.measures()) {
        if mu <= 0.0 {
            continue;
        }
        let r = inverse_ball_area(m.kappa(), n, mu / theta)?;
        let ball = theta * ball_metrics(m.kappa(), n, r)?.perimeter;
        worst.push(ball, superlevel_perimeter(u, t), t);
    }
    let r_sharp = inverse_ball_area(m.kappa(), n, area / theta)?;
    let scale = theta * ball_metrics(m.kappa(), n, r_sharp)?.perimeter;
    Ok(worst.entry("isoperimetric", tol.of(scale)))
}

fn sorted_unique(levels: &[f64]) -> Vec<f64> {
    let mut l = levels.to_vec();
    l.sort_by(f64::total_cmp);
    l.dedup();
    l
}

/// `∫_{∂Ω_t ∩ ∂Ω} 1/(β u) dA`, exact for the linear boundary trace of `u`.
pub fn boundary_level_integral(u: &ScalarField, beta: &BoundaryField, t: f64) -> Result<f64> {
    let mesh = u.mesh();
    beta.check_against(mesh)?;
    let w = u.values();
    let mut total = 0.0;
    for (e, (&[a, b], &bv)) in mesh.boundary().iter().zip(beta.values()).enumerate() {
        let (wa, wb) = (w[a], w[b]);
        if wa <= 0.0 || wb <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "u must be positive on the boundary; edge {e} has values {wa}, {wb}"
            )));
        }
        let len = mesh.boundary_edge_length(e);
        let (lo, hi) = (wa.min(wb), wa.max(wb));
        if t >= hi {
            continue;
        }
        if hi - lo <= 1e-14 * hi {
            total += len / (bv * 0.5 * (lo + hi));
            continue;
        }
        let start = t.max(lo);
        total += len / (bv * (hi - lo)) * (hi / start).ln();
    }
    Ok(total)
}

/// `∫_0^∞ ∫_{∂Ω_t∩∂Ω} 1/(βu) dA dt` against `∫_{∂Ω} 1/β` (Fubini identity).
pub fn verify_fubini(u: &ScalarField, beta: &BoundaryField) -> Result<CheckEntry> {
    let mesh = u.mesh();
    let mut nodes: Vec<f64> = mesh.boundary().iter().map(|e| u.values()[e[0]]).collect();
    nodes.push(0.0);
    let nodes = sorted_unique(&nodes);
    let rhs = boundary_inverse_beta(beta, mesh)?;
    let tol = 1e-3 * EXACT_REL_TOL * rhs / nodes.len() as f64;
    let mut lhs = 0.0;
    for w in nodes.windows(2) {
        lhs += adaptive_simpson(
            |t| boundary_level_integral(u, beta, t).unwrap_or(f64::NAN),
            w[0],
            w[1],
            tol,
        )?;
    }
    Ok(CheckEntry::identity("fubini", lhs, rhs, EXACT_REL_TOL * rhs))
}

/// Isoperimetric profile with its small-volume limit at `s = 0`.
fn profile_a(m: &Manifold, s: f64) -> Result<f64> {
    if s <= 0.0 {
        Ok(iso_profile_flat(m.dim()))
    } else {
        iso_profile_a(m.kappa(), m.dim(), s)
    }
}

/// Integrated level inequality: for each τ of the ladder,
///
/// ```text
/// ∫_0^τ θ² μ̃(t)^{(2n−2)/n} / (a²(μ̃(t)) ∫_0^{μ(t)} f*) dt <= |Ω| − μ_u(τ) + ∫_{∂Ω} 1/β,
/// ```
///
/// with `μ̃ = μ_u/θ`. For `n = 2`, `f ≡ 1` in the plane the left side is
/// `θτ/a²`. The reported spread covers `τ >= equality_from`, the range where
/// the radial problem attains equality.
pub fn verify_level_inequality(
    mu_u: &DistributionData,
    beta_integral: f64,
    fstar: &RearrangedProfile,
    taus: &[f64],
    equality_from: f64,
    theta: f64,
    m: &Manifold,
    tol: &Tolerance,
) -> Result<CheckEntry> {
    let n = m.dim() as f64;
    let area = mu_u.total_measure();
    let integrand = |t: f64| -> f64 {
        let mu = mu_u.measure_at(t).max(area * 1e-14);
        let tilde = mu / theta;
        let a = profile_a(m, tilde).unwrap_or(f64::NAN);
        let mass = fstar.integral(mu.min(fstar.total_measure())).unwrap_or(f64::NAN);
        theta * theta * tilde.powf((2.0 * n - 2.0) / n) / (a * a * mass)
    };
    let taus = sorted_unique(taus);
    let max_u = mu_u.max_value();
    let mut nodes: Vec<f64> = mu_u.levels().iter().copied().filter(|&t| t > 0.0 && t < max_u).collect();
    nodes.extend(taus.iter().copied().filter(|&t| t > 0.0));
    nodes.push(0.0);
    let nodes = sorted_unique(&nodes);
    let scale = area + beta_integral;
    let qtol = 1e-12 * scale / nodes.len() as f64;
    let mut cumulative = 0.0;
    let mut next = 0;
    let mut worst = Worst::new();
    let mut record = |tau: f64, lhs: f64| {
        let rhs = area - mu_u.measure_at(tau) + beta_integral;
        worst.push_counted(lhs, rhs, tau, tau >= equality_from);
    };
    for w in nodes.windows(2) {
        while next < taus.len() && taus[next] <= w[0] {
            record(taus[next], cumulative);
            next += 1;
        }
        let hi = w[1].min(max_u);
        if hi > w[0] {
            cumulative += adaptive_simpson(integrand, w[0], hi, qtol)?;
        }
    }
    while next < taus.len() {
        record(taus[next], cumulative);
        next += 1;
    }
    Ok(worst.entry("level", tol.of(scale)))
}

/// `F(s) = ∫_0^s a²(σ) σ^{2/n−1} ∫_0^σ (f♯)* dσ` at each point, where
/// `(f♯)*(r) = f*(θr)`.
pub fn compute_f(points: &[f64], fstar: &RearrangedProfile, theta: f64, m: &Manifold) -> Result<Vec<f64>> {
    let n = m.dim() as f64;
    let total = fstar.total_measure() / theta;
    let integrand = |sigma: f64| -> f64 {
        if sigma <= 0.0 {
            return 0.0;
        }
        let a = profile_a(m, sigma).unwrap_or(f64::NAN);
        let inner = fstar.integral((theta * sigma).min(fstar.total_measure())).unwrap_or(f64::NAN) / theta;
        a * a * sigma.powf(2.0 / n - 1.0) * inner
    };
    let mut nodes: Vec<f64> = fstar
        .distribution()
        .s_breakpoints()
        .iter()
        .map(|s| s / theta)
        .filter(|&s| s < total)
        .collect();
    nodes.extend(points.iter().copied().filter(|&p| p > 0.0));
    nodes.push(0.0);
    let nodes = sorted_unique(&nodes);
    let mut cum = vec![0.0; nodes.len()];
    let scale = fstar.integral(fstar.total_measure())? * total / theta;
    let qtol = 1e-13 * scale.max(f64::MIN_POSITIVE) / nodes.len() as f64;
    for i in 1..nodes.len() {
        cum[i] = cum[i - 1] + adaptive_simpson(integrand, nodes[i - 1], nodes[i], qtol)?;
    }
    points
        .iter()
        .map(|&p| {
            if p < 0.0 {
                return Err(Error::InvalidInput(format!("F is defined for s >= 0, got {p}")));
            }
            let k = nodes.binary_search_by(|x| x.partial_cmp(&p).unwrap_or(std::cmp::Ordering::Less)).map_err(|_| {
                Error::InvalidInput(format!("F evaluation point {p} was not tabulated"))
            })?;
            Ok(cum[k])
        })
        .collect()
}

/// Integrated L¹ diagnostic for `τ > v₀`:
/// `∫_0^τ μ̃_u − ∫_0^τ μ_v <= F(μ_v(τ)) − F(μ̃_u(τ))`.
pub fn verify_integrated_l1(
    mu_u: &DistributionData,
    v: &RadialProfile,
    fstar: &RearrangedProfile,
    taus: &[f64],
    theta: f64,
    tol: &Tolerance,
) -> Result<Option<CheckEntry>> {
    let v0 = v.boundary_value();
    let taus: Vec<f64> = sorted_unique(taus).into_iter().filter(|&t| t > v0).collect();
    if taus.is_empty() {
        return Ok(None);
    }
    let m = v.manifold();
    let ball_area = |r: f64| ball_metrics(m.kappa(), m.dim(), r).map(|b| b.area);
    let mut points = Vec::with_capacity(2 * taus.len());
    for &t in &taus {
        points.push(mu_u.measure_at(t) / theta);
        points.push(ball_area(v.superlevel_radius(t))?);
    }
    let f_values = compute_f(&points, fstar, theta, m)?;
    let whole_u = mu_u.integral_above(0.0);
    let mut worst = Worst::new();
    for (k, &t) in taus.iter().enumerate() {
        let int_u = (whole_u - mu_u.integral_above(t)) / theta;
        let int_v = v.integrate(|x| x.min(t))?;
        worst.push(int_u - int_v, f_values[2 * k + 1] - f_values[2 * k], t);
    }
    let scale = v.integrate(f64::abs)?;
    Ok(Some(worst.entry("integrated_l1", tol.of(scale))))
}

/// Ordering chain `u₀ <= v₀ <= v(0)` and `u₀ <= max u`; reports the tightest link.
pub fn verify_ordering(stats: &FieldStats, v: &RadialProfile, tol: &Tolerance) -> CheckEntry {
    let (u0, v0, vc) = (stats.boundary_min, v.boundary_value(), v.center_value());
    let links = [(u0, v0), (v0, vc), (u0, stats.max)];
    let (lhs, rhs) = links
        .into_iter()
        .fold((0.0, f64::INFINITY), |best, (a, b)| if b - a < best.1 - best.0 { (a, b) } else { best });
    CheckEntry::inequality("ordering", lhs, rhs, tol.of(vc), None)
}

/// Inputs shared by the full check suite.
pub struct CheckInputs<'a> {
    pub u: &'a ScalarField,
    pub f: &'a ScalarField,
    pub beta: &'a BoundaryField,
    pub v: &'a RadialProfile,
    pub manifold: &'a Manifold,
    pub tolerance: Tolerance,
}

pub const ALL_CHECKS: [&str; 16] = [
    "l1",
    "pointwise",
    "profile",
    "min",
    "isoperimetric",
    "level",
    "integrated_l1",
    "ordering",
    "positivity",
    "boundary_minimum",
    "monotone",
    "fubini",
    "equimeasurability",
    "bathtub",
    "hardy_littlewood",
    "concentration",
];

/// Checks that require a constant source.
pub const CONSTANT_SOURCE_CHECKS: [&str; 2] = ["pointwise", "profile"];

/// Runs the named checks in the order of [`ALL_CHECKS`].
pub fn run_checks(inputs: &CheckInputs<'_>, names: &[String]) -> Result<Vec<CheckEntry>> {
    for name in names {
        if !ALL_CHECKS.contains(&name.as_str()) {
            return Err(Error::InvalidInput(format!("unknown check `{name}`")));
        }
    }
    let wants = |n: &str| names.iter().any(|x| x == n);
    let CheckInputs { u, f, beta, v, manifold, .. } = *inputs;
    let tol = &inputs.tolerance;
    let theta = theta_of(manifold);
    let stats = field_stats(u);
    let area = u.mesh().area();
    let f_constant = f.max() == f.min();
    if !f_constant {
        if let Some(name) = CONSTANT_SOURCE_CHECKS.iter().find(|c| wants(c)) {
            return Err(Error::InvalidInput(format!("check `{name}` requires a constant source")));
        }
    }
    let mu_u = distribution(u);
    let mu_f = distribution(f);
    let fstar = RearrangedProfile::from_distribution(&mu_f);
    let ladder = level_ladder(stats.boundary_min, stats.max);
    let beta_integral = boundary_inverse_beta(beta, u.mesh())?;

    let mut out = Vec::new();
    for name in ALL_CHECKS.iter().filter(|n| wants(n)) {
        match *name {
            "l1" => out.push(verify_l1(&stats, area, v, theta, tol)?),
            "pointwise" => {
                let a = distribution_function(u, &ladder)?;
                let b = v.distribution(&ladder)?;
                out.push(verify_pointwise(&a, &b, theta, tol)?);
            }
            "profile" => {
                let u_sharp = schwarz_profile(&RearrangedProfile::from_distribution(&mu_u), theta, manifold)?;
                out.push(verify_profile(&u_sharp, v, tol));
            }
            "min" => out.push(verify_min_comparison(stats.boundary_min, v.boundary_value(), tol)),
            "isoperimetric" => {
                let levels: Vec<f64> = ladder
                    .iter()
                    .copied()
                    .filter(|&t| t > stats.boundary_min && t < stats.max)
                    .collect();
                out.push(verify_isoperimetric(u, &levels, theta, manifold, tol)?);
            }
            "level" => out.push(verify_level_inequality(&mu_u, beta_integral, &fstar, &ladder, v.boundary_value(), theta, manifold, tol)?),
            "integrated_l1" => {
                if let Some(e) = verify_integrated_l1(&mu_u, v, &fstar, &ladder, theta, tol)? {
                    out.push(e);
                }
            }
            "ordering" => out.push(verify_ordering(&stats, v, tol)),
            "positivity" => out.push(CheckEntry::inequality("positivity", 0.0, stats.min, 0.0, None)),
            "boundary_minimum" => {
                let interior_min = u
                    .values()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !u.mesh().is_boundary_vertex(*i))
                    .map(|(_, &x)| x)
                    .fold(f64::INFINITY, f64::min);
                if interior_min.is_finite() {
                    out.push(CheckEntry::inequality(
                        "boundary_minimum",
                        stats.boundary_min,
                        interior_min,
                        tol.of(stats.max),
                        None,
                    ));
                }
            }
            "monotone" => out.push(CheckEntry::inequality("monotone", monotonicity_report(v), 0.0, 0.0, None)),
            "fubini" => out.push(verify_fubini(u, beta)?),
            "equimeasurability" => out.extend(equimeasurability(&stats, &mu_u, theta, manifold)?),
            "bathtub" => out.push(verify_bathtub(u, f, &fstar, &ladder)?),
            "hardy_littlewood" => {
                let margin = hardy_littlewood_check(f, u)?;
                out.push(CheckEntry::with_margin(
                    "hardy_littlewood",
                    0.0,
                    margin,
                    margin,
                    HARDY_LITTLEWOOD_TOL,
                    None,
                ));
            }
            "concentration" => {
                let c = concentration_check(&fstar, manifold.dim(), area)?;
                let tol_c = 1e-12 * fstar.integral(area)?;
                out.push(CheckEntry::with_margin("concentration", 0.0, c.margin, c.margin, tol_c, Some(c.at)));
            }
            _ => unreachable!("names were validated"),
        }
    }
    Ok(out)
}

/// `∫u^p = ∫(u*)^p = θ∫(u♯)^p` for p = 1, 2.
fn equimeasurability(
    stats: &FieldStats,
    mu_u: &DistributionData,
    theta: f64,
    m: &Manifold,
) -> Result<Vec<CheckEntry>> {
    let u_sharp = schwarz_profile(&RearrangedProfile::from_distribution(mu_u), theta, m)?;
    let mut out = Vec::new();
    for p in [1, 2] {
        let direct = if p == 1 { stats.l1 } else { stats.l2 * stats.l2 };
        let star = mu_u.power_integral(p)?;
        let sharp = theta * u_sharp.integrate(|x| x.powi(p as i32))?;
        let (a, b) = if (star - direct).abs() >= (sharp - direct).abs() { (direct, star) } else { (direct, sharp) };
        let name = format!("equimeasurability_p{p}");
        out.push(CheckEntry::identity(&name, a, b, EQUIMEASURABILITY_REL_TOL * direct.abs()));
    }
    Ok(out)
}

/// `∫_{u>t} f <= ∫_0^{μ_u(t)} f*` on the ladder.
fn verify_bathtub(u: &ScalarField, f: &ScalarField, fstar: &RearrangedProfile, ladder: &[f64]) -> Result<CheckEntry> {
    let d = distribution_function(u, &sorted_unique(ladder))?;
    let mut worst = Worst::new();
    for (&t, &mu) in d.levels().iter().zip(d.measures()) {
        let lhs = superlevel_integral(u, f, t)?;
        worst.push(lhs, fstar.integral(mu.min(fstar.total_measure()))?, t);
    }
    Ok(worst.entry("bathtub", EXACT_REL_TOL * f.integral().abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Manifold;
    use crate::mesh::Mesh;
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn strip() -> Arc<Mesh> {
        Arc::new(
            Mesh::from_parts(
                Manifold::plane(),
                vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]],
                vec![[0, 1, 2], [0, 2, 3]],
                vec![[0, 1], [1, 2], [2, 3], [3, 0]],
                1.0,
                None,
            )
            .unwrap(),
        )
    }

    #[test]
    fn verdict_rules() {
        assert_eq!(verdict(0.0, 0.1), Verdict::Holds);
        assert_eq!(verdict(-0.05, 0.1), Verdict::HoldsWithinTolerance);
        assert_eq!(verdict(-0.2, 0.1), Verdict::Violated);
        assert_eq!(CheckEntry::identity("x", 1.0, 1.0 + 1e-9, 1e-8).verdict, Verdict::HoldsWithinTolerance);
    }

    #[test]
    fn boundary_integral_examples() {
        let mesh = strip();
        let beta = BoundaryField::constant(&mesh, 1.0).unwrap();
        let c = ScalarField::constant(mesh.clone(), 2.0).unwrap();
        assert!((boundary_level_integral(&c, &beta, 0.0).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(boundary_level_integral(&c, &beta, 2.5).unwrap(), 0.0);
        // edge 0-1 carries u from 1 to 2; the others are at 2 or above the level
        let u = ScalarField::new(mesh.clone(), vec![1.0, 2.0, 3.0, 3.0]).unwrap();
        let edge01 = (2.0f64 / 1.5).ln();
        let edge12 = (3.0f64 / 2.0).ln();
        let edge23 = 1.0 / 3.0;
        let edge30 = (3.0f64 / 1.5).ln() / 2.0;
        let expected = edge01 + edge12 + edge23 + edge30;
        assert!((boundary_level_integral(&u, &beta, 1.5).unwrap() - expected).abs() < 1e-14);
        let fub = verify_fubini(&u, &beta).unwrap();
        assert!(fub.verdict.passed(), "{fub:?}");
    }

    #[test]
    fn f_table_flat_constant() {
        let d = DistributionData::from_cells(&[1.0], &[10.0]).unwrap();
        let fstar = RearrangedProfile::from_distribution(&d);
        let m = Manifold::plane();
        let f = compute_f(&[0.0, 1.0, 3.0], &fstar, 1.0, &m).unwrap();
        for (s, v) in [0.0, 1.0, 3.0].iter().zip(f) {
            assert!((v - s * s / (8.0 * PI)).abs() < 1e-13);
        }
    }

    #[test]
    fn perimeter_of_square_levels() {
        let mesh = strip();
        let u = ScalarField::new(mesh.clone(), vec![0.0, 1.0, 2.0, 1.0]).unwrap();
        // {u > 1} is the corner triangle at vertex 2 with legs 1 along the boundary
        let p = superlevel_perimeter(&u, 1.0);
        assert!((p - (2.0 + 2f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn ladder_covers_range() {
        let l = level_ladder(0.5, 0.75);
        assert_eq!(l.len(), 64);
        assert_eq!(l[0], 0.25);
        assert_eq!(l[63], 0.75);
    }
}
