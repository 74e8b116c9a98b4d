//! The symmetrized problem on the comparison ball: harmonic-mean Robin
//! constant, the radial ODE
//!
//! ```text
//! (sn^{n-1} φ')' = -sn^{n-1} h,   φ'(0) = 0,   φ'(R₀) + β̄ φ(R₀) = 0,
//! ```
//!
//! solved by nested adaptive quadrature, and closed-form oracles.

use crate::error::{Error, Result};
use crate::geometry::{ball_metrics, inverse_ball_area, myers_bound, sn_unchecked, theta_of, Manifold};
use crate::mesh::{BoundaryField, Mesh};
use crate::quadrature::adaptive_simpson;
use crate::rearrange::DistributionData;

const UNIFORM_NODES: usize = 2048;
const QUAD_TOL: f64 = 1e-12;

/// Function of geodesic radius on `[0, R₀]`, piecewise linear between
/// nodes, or cubic Hermite when nodal slopes are known.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    manifold: Manifold,
    r: Vec<f64>,
    values: Vec<f64>,
    slopes: Option<Vec<f64>>,
}

impl RadialProfile {
    pub fn new(manifold: Manifold, r: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if r.len() < 2 || r.len() != values.len() {
            return Err(Error::InvalidInput(
                "radial profile needs at least two nodes and one value per node".into(),
            ));
        }
        if r[0] != 0.0 {
            return Err(Error::InvalidInput(format!("radial grid must start at 0, got {}", r[0])));
        }
        if let Some(k) = (1..r.len()).find(|&k| !(r[k] > r[k - 1]) || !r[k].is_finite()) {
            return Err(Error::InvalidInput(format!("radial grid is not strictly increasing at node {k}")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("radial profile has non-finite values".into()));
        }
        let bound = myers_bound(manifold.kappa());
        let r_max = r[r.len() - 1];
        if r_max > bound {
            return Err(Error::Domain(format!("profile radius {r_max} exceeds the Myers bound {bound}")));
        }
        Ok(RadialProfile {
            manifold,
            r,
            values,
            slopes: None,
        })
    }

    pub fn manifold(&self) -> &Manifold {
        &self.manifold
    }

    pub fn dim(&self) -> usize {
        self.manifold.dim()
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Nodal derivatives, when the profile comes from [`solve_radial`].
    pub fn slopes(&self) -> Option<&[f64]> {
        self.slopes.as_deref()
    }

    /// Outer radius `R₀`.
    pub fn r_max(&self) -> f64 {
        self.r[self.r.len() - 1]
    }

    /// Value at the center.
    pub fn center_value(&self) -> f64 {
        self.values[0]
    }

    /// Value at `R₀`; for a solution this is `v₀ = φ(R₀)`.
    pub fn boundary_value(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Evaluates the profile, clamping `r` to `[0, R₀]`.
    pub fn value(&self, r: f64) -> f64 {
        let n = self.r.len();
        if r <= 0.0 {
            return self.values[0];
        }
        if r >= self.r[n - 1] {
            return self.values[n - 1];
        }
        let k = self.r.partition_point(|&x| x <= r);
        let (r0, r1) = (self.r[k - 1], self.r[k]);
        let (v0, v1) = (self.values[k - 1], self.values[k]);
        let len = r1 - r0;
        let x = (r - r0) / len;
        match &self.slopes {
            None => v0 + x * (v1 - v0),
            Some(d) => {
                let h00 = (1.0 + 2.0 * x) * (1.0 - x) * (1.0 - x);
                let h10 = x * (1.0 - x) * (1.0 - x);
                let h01 = x * x * (3.0 - 2.0 * x);
                let h11 = x * x * (x - 1.0);
                h00 * v0 + h10 * len * d[k - 1] + h01 * v1 + h11 * len * d[k]
            }
        }
    }

    /// `sup{r : value(r) > t}` (0 if the set is empty) for a nonincreasing profile.
    pub fn superlevel_radius(&self, t: f64) -> f64 {
        self.radius_where(|v| v > t)
    }

    fn radius_where<P: Fn(f64) -> bool>(&self, above: P) -> f64 {
        let n = self.r.len();
        if above(self.values[n - 1]) {
            return self.r[n - 1];
        }
        if !above(self.values[0]) {
            return 0.0;
        }
        // last node inside the superlevel set
        let k = self.values.iter().rposition(|&v| above(v)).expect("center is inside");
        let (mut lo, mut hi) = (self.r[k], self.r[k + 1]);
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if above(self.value(mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// `∫_{B_{R₀}} g(φ(r)) dx` by quadrature against the sphere area element.
    pub fn integrate<G: Fn(f64) -> f64>(&self, g: G) -> Result<f64> {
        let kappa = self.manifold.kappa();
        let n = self.dim();
        let shell = crate::geometry::unit_ball_volume(n) * n as f64;
        let mut total = 0.0;
        for w in self.r.windows(2) {
            let tol = QUAD_TOL * (w[1] - w[0]) / self.r_max();
            total += adaptive_simpson(
                |r| g(self.value(r)) * shell * sn_unchecked(kappa, r).powi(n as i32 - 1),
                w[0],
                w[1],
                tol,
            )?;
        }
        Ok(total)
    }

    /// Distribution function `t ↦ |{φ > t}|` of the radial function on its
    /// ball, tabulated at `levels` (nonincreasing profiles only).
    pub fn distribution(&self, levels: &[f64]) -> Result<DistributionData> {
        let kappa = self.manifold.kappa();
        let n = self.dim();
        let area = |r: f64| ball_metrics(kappa, n, r).map(|b| b.area);
        let total = area(self.r_max())?;
        let measures = levels
            .iter()
            .map(|&t| area(self.radius_where(|v| v > t)))
            .collect::<Result<Vec<_>>>()?;
        let left = levels
            .iter()
            .map(|&t| area(self.radius_where(|v| v >= t)))
            .collect::<Result<Vec<_>>>()?;
        let mids = levels
            .windows(2)
            .map(|w| area(self.radius_where(|v| v > 0.5 * (w[0] + w[1]))))
            .collect::<Result<Vec<_>>>()?;
        let lo = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        DistributionData::from_parts(levels.to_vec(), measures, left, mids, total, lo, hi)
    }
}

/// `∫_{∂Ω} 1/β` over the boundary edges.
pub fn boundary_inverse_beta(beta: &BoundaryField, mesh: &Mesh) -> Result<f64> {
    beta.check_against(mesh)?;
    Ok(beta
        .values()
        .iter()
        .enumerate()
        .map(|(e, b)| mesh.boundary_edge_length(e) / b)
        .sum())
}

/// Harmonic-mean Robin constant `β̄ = θ|∂Ω♯| / ∫_{∂Ω} β⁻¹`.
pub fn beta_bar(beta: &BoundaryField, mesh: &Mesh, m: &Manifold) -> Result<f64> {
    let inv = boundary_inverse_beta(beta, mesh)?;
    if !(inv > 0.0) {
        return Err(Error::InvalidInput("boundary has zero length".into()));
    }
    let theta = theta_of(m);
    let n = m.dim();
    let r0 = inverse_ball_area(m.kappa(), n, mesh.area() / theta)?;
    let perimeter = ball_metrics(m.kappa(), n, r0)?.perimeter;
    Ok(theta * perimeter / inv)
}

/// Solves the radial problem with source `h` (interpolated linearly and
/// clamped to be nonincreasing) on the ball of radius `r0`.
pub fn solve_radial(h: &RadialProfile, m: &Manifold, n: usize, r0: f64, beta_bar: f64) -> Result<RadialProfile> {
    let manifold = m.with_dim(n)?;
    let kappa = manifold.kappa();
    if !(beta_bar > 0.0 && beta_bar.is_finite()) {
        return Err(Error::InvalidInput(format!("β̄ must be positive, got {beta_bar}")));
    }
    if !(r0 > 0.0 && r0 < myers_bound(kappa)) {
        return Err(Error::Domain(format!(
            "R₀ = {r0} must lie in (0, {})",
            myers_bound(kappa)
        )));
    }
    if let Some(v) = h.values().iter().find(|&&v| v < 0.0) {
        return Err(Error::InvalidInput(format!("source profile takes the negative value {v}")));
    }
    if h.values().iter().all(|&v| v == 0.0) {
        return Err(Error::InvalidInput("source profile is identically zero".into()));
    }
    // running minimum keeps the source nonincreasing
    let mut clamped = h.values().to_vec();
    for k in 1..clamped.len() {
        clamped[k] = clamped[k].min(clamped[k - 1]);
    }
    let source = RadialProfile::new(*h.manifold(), h.r().to_vec(), clamped)?;
    let hv = |r: f64| source.value(r);
    let h0 = source.center_value();

    let mut grid: Vec<f64> = (0..=UNIFORM_NODES).map(|k| r0 * k as f64 / UNIFORM_NODES as f64).collect();
    grid.extend(source.r().iter().copied().filter(|&x| x > 0.0 && x < r0));
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|b, a| *b - *a <= 1e-12 * r0);
    let last = grid.len() - 1;
    grid[last] = r0;

    let pw = n as i32 - 1;
    let weight = |rho: f64| sn_unchecked(kappa, rho).powi(pw) * hv(rho);
    let series_cut = 1e-6 * r0;

    // cumulative ∫_0^{r_i} sn^{n-1} h
    let mut cum = vec![0.0; grid.len()];
    for i in 1..grid.len() {
        cum[i] = cum[i - 1] + adaptive_simpson(weight, grid[i - 1], grid[i], QUAD_TOL)?;
    }
    let slope_from = |rho: f64, inner: f64| -> f64 {
        if rho < series_cut {
            -h0 * rho / n as f64
        } else {
            -inner / sn_unchecked(kappa, rho).powi(pw)
        }
    };
    let slopes: Vec<f64> = grid.iter().zip(&cum).map(|(&r, &c)| slope_from(r, c)).collect();

    // ∫ φ' over each interval, with φ' re-integrated inside
    let mut pieces = vec![0.0; grid.len() - 1];
    for i in 0..grid.len() - 1 {
        let (a, b, base) = (grid[i], grid[i + 1], cum[i]);
        // an inner failure surfaces as a non-finite outer integral
        let dphi = |rho: f64| {
            if rho < series_cut {
                return -h0 * rho / n as f64;
            }
            adaptive_simpson(weight, a, rho, QUAD_TOL).map_or(f64::NAN, |inner| slope_from(rho, base + inner))
        };
        pieces[i] = adaptive_simpson(dphi, a, b, QUAD_TOL)?;
    }

    let boundary = -slopes[last] / beta_bar;
    let mut values = vec![0.0; grid.len()];
    values[last] = boundary;
    for i in (0..last).rev() {
        values[i] = values[i + 1] - pieces[i];
    }
    let mut profile = RadialProfile::new(manifold, grid, values)?;
    profile.slopes = Some(slopes);
    Ok(profile)
}

/// Largest difference quotient over consecutive nodes; negative for a
/// strictly decreasing profile.
pub fn monotonicity_report(v: &RadialProfile) -> f64 {
    v.r()
        .windows(2)
        .zip(v.values().windows(2))
        .map(|(r, f)| (f[1] - f[0]) / (r[1] - r[0]))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Exact planar solution for `f ≡ 1` on the disk of radius `radius`:
/// `φ(r) = (R² − r²)/4 + R/(2β)`, sampled on `points` uniform nodes.
pub fn closed_form_disk(radius: f64, beta: f64, points: usize) -> Result<RadialProfile> {
    if !(radius > 0.0 && beta > 0.0) || points < 2 {
        return Err(Error::InvalidInput("disk oracle needs R > 0, β > 0 and at least 2 nodes".into()));
    }
    let r: Vec<f64> = (0..points).map(|k| radius * k as f64 / (points - 1) as f64).collect();
    let values = r.iter().map(|&x| (radius * radius - x * x) / 4.0 + radius / (2.0 * beta)).collect();
    let slopes = r.iter().map(|&x| -x / 2.0).collect();
    let mut p = RadialProfile::new(Manifold::plane(), r, values)?;
    p.slopes = Some(slopes);
    Ok(p)
}

/// Constant source profile on `[0, r0]`.
pub fn constant_profile(m: &Manifold, r0: f64, value: f64) -> Result<RadialProfile> {
    RadialProfile::new(*m, vec![0.0, r0], vec![value, value])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit_source(m: &Manifold, r0: f64) -> RadialProfile {
        constant_profile(m, r0, 1.0).unwrap()
    }

    #[test]
    fn plane_disk_matches_closed_form() {
        let m = Manifold::plane();
        let v = solve_radial(&unit_source(&m, 1.0), &m, 2, 1.0, 1.0).unwrap();
        assert!((v.center_value() - 0.75).abs() < 1e-12);
        assert!((v.boundary_value() - 0.5).abs() < 1e-12);
        let exact = closed_form_disk(1.0, 1.0, 1000).unwrap();
        for (&r, &e) in exact.r().iter().zip(exact.values()) {
            assert!((v.value(r) - e).abs() < 1e-9);
        }
        assert!(monotonicity_report(&v) < 0.0);
    }

    #[test]
    fn sphere_cap_closed_form() {
        let m = Manifold::sphere(1.0).unwrap();
        let r0 = PI / 3.0;
        let v = solve_radial(&unit_source(&m, r0), &m, 2, r0, 1.0).unwrap();
        let b = (PI / 6.0).tan();
        assert!((v.boundary_value() - b).abs() < 1e-11);
        assert!((v.center_value() - (b - 2.0 * (PI / 6.0).cos().ln())).abs() < 1e-11);
        let d = v.slopes().unwrap();
        for (i, &r) in v.r().iter().enumerate().step_by(97) {
            assert!((d[i] + (r / 2.0).tan()).abs() < 1e-11);
        }
    }

    #[test]
    fn plane_three_dimensional() {
        let m = Manifold::plane();
        let v = solve_radial(&unit_source(&m, 1.0), &m, 3, 1.0, 1.0).unwrap();
        assert!((v.boundary_value() - 1.0 / 3.0).abs() < 1e-12);
        assert!((v.center_value() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_invalid_sources() {
        let m = Manifold::plane();
        let zero = constant_profile(&m, 1.0, 0.0).unwrap();
        assert!(solve_radial(&zero, &m, 2, 1.0, 1.0).is_err());
        let neg = RadialProfile::new(m, vec![0.0, 1.0], vec![1.0, -0.5]).unwrap();
        assert!(solve_radial(&neg, &m, 2, 1.0, 1.0).is_err());
        assert!(solve_radial(&unit_source(&m, 1.0), &m, 2, 1.0, 0.0).is_err());
    }

    #[test]
    fn disk_oracle_values() {
        assert_eq!(closed_form_disk(1.0, 1.0, 3).unwrap().center_value(), 0.75);
        assert!((closed_form_disk(1.0, 10.0, 3).unwrap().boundary_value() - 0.05).abs() < 1e-15);
        assert_eq!(closed_form_disk(2.0, 1.0, 3).unwrap().center_value(), 2.0);
    }

    #[test]
    fn radial_l1_of_disk() {
        let v = closed_form_disk(1.0, 1.0, 200).unwrap();
        let l1 = v.integrate(|x| x).unwrap();
        assert!((l1 - 5.0 * PI / 8.0).abs() < 1e-12);
    }

    #[test]
    fn radial_distribution_of_disk() {
        // μ_v(τ) = π(3 − 4τ) on [0.5, 0.75]
        let v = closed_form_disk(1.0, 1.0, 200).unwrap();
        let d = v.distribution(&[0.4, 0.5, 0.625, 0.7, 0.75]).unwrap();
        let m = d.measures();
        assert!((m[0] - PI).abs() < 1e-12);
        assert!((m[2] - PI / 2.0).abs() < 1e-12);
        assert!((m[3] - PI * (3.0 - 2.8)).abs() < 1e-12);
        assert_eq!(m[4], 0.0);
    }
}
