//! Closed-form metric quantities of the model spaces of constant curvature
//! `kappa >= 0`: the warping function `sn`, geodesic balls, the isoperimetric
//! profile and the volume ratio of the supported manifolds.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::gauss_kronrod;

/// Relative slack allowed when comparing a radius against the Myers bound.
const MYERS_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ManifoldKind {
    Plane,
    Sphere,
    Cone,
}

impl ManifoldKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ManifoldKind::Plane => "plane",
            ManifoldKind::Sphere => "sphere",
            ManifoldKind::Cone => "cone",
        }
    }
}

/// Ambient space: the Euclidean plane, the full round sphere of curvature
/// `kappa`, or a flat cone whose total angle is `cone_fraction * 2π`.
///
/// The comparison space for the sphere is the sphere itself; for the plane
/// and the cone it is the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Manifold {
    kind: ManifoldKind,
    kappa: f64,
    cone_fraction: f64,
    dim: usize,
}

impl Manifold {
    pub fn plane() -> Self {
        Manifold {
            kind: ManifoldKind::Plane,
            kappa: 0.0,
            cone_fraction: 1.0,
            dim: 2,
        }
    }

    pub fn sphere(kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "sphere curvature must be positive and finite, got {kappa}"
            )));
        }
        Ok(Manifold {
            kind: ManifoldKind::Sphere,
            kappa,
            cone_fraction: 1.0,
            dim: 2,
        })
    }

    pub fn cone(fraction: f64) -> Result<Self> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "cone angle fraction must lie in (0, 1], got {fraction}"
            )));
        }
        Ok(Manifold {
            kind: ManifoldKind::Cone,
            kappa: 0.0,
            cone_fraction: fraction,
            dim: 2,
        })
    }

    /// Same space in dimension `n`. Only the radial machinery supports `n > 2`.
    pub fn with_dim(mut self, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("dimension must be >= 2, got {n}")));
        }
        self.dim = n;
        Ok(self)
    }

    pub fn kind(&self) -> ManifoldKind {
        self.kind
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn cone_fraction(&self) -> f64 {
        self.cone_fraction
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn theta(&self) -> f64 {
        theta_of(self)
    }

    /// Radius `1/√κ` of the embedded sphere; `None` for flat spaces.
    pub fn sphere_radius(&self) -> Option<f64> {
        (self.kappa > 0.0).then(|| 1.0 / self.kappa.sqrt())
    }

    /// True when the space lies outside the smooth hypotheses of the
    /// comparison theorems (the cone apex is singular).
    pub fn beyond_hypotheses(&self) -> bool {
        self.kind == ManifoldKind::Cone && self.cone_fraction < 1.0
    }
}

/// Volume of the unit ball in `R^n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / n as f64 * unit_ball_volume(n - 2),
    }
}

/// Myers diameter bound `π/√κ` (infinite for `κ = 0`).
pub fn myers_bound(kappa: f64) -> f64 {
    if kappa > 0.0 {
        PI / kappa.sqrt()
    } else {
        f64::INFINITY
    }
}

fn check_radius(kappa: f64, r: f64) -> Result<f64> {
    if kappa < 0.0 || !kappa.is_finite() {
        return Err(Error::Domain(format!("curvature must be finite and >= 0, got {kappa}")));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("radius must be finite and >= 0, got {r}")));
    }
    let bound = myers_bound(kappa);
    if r > bound * (1.0 + MYERS_SLACK) {
        return Err(Error::Domain(format!(
            "radius {r} exceeds the Myers bound {bound} for kappa = {kappa}"
        )));
    }
    Ok(r.min(bound))
}

/// `sin(√κ r)/√κ` for `κ > 0`, `r` for `κ = 0`.
pub fn sn(kappa: f64, r: f64) -> Result<f64> {
    let r = check_radius(kappa, r)?;
    Ok(sn_unchecked(kappa, r))
}

pub(crate) fn sn_unchecked(kappa: f64, r: f64) -> f64 {
    if kappa == 0.0 {
        return r;
    }
    let k = kappa.sqrt();
    let x = k * r;
    if x < 1e-4 {
        let x2 = x * x;
        r * (1.0 - x2 / 6.0 * (1.0 - x2 / 20.0))
    } else {
        x.sin() / k
    }
}

/// Radius, volume and boundary measure of a geodesic ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BallSpec {
    pub radius: f64,
    pub area: f64,
    pub perimeter: f64,
}

/// Total volume of the model space (`+∞` when flat).
pub fn model_volume(kappa: f64, n: usize) -> f64 {
    if kappa > 0.0 {
        // |S^n| of radius 1/√κ
        (n + 1) as f64 * unit_ball_volume(n + 1) * kappa.powf(-(n as f64) / 2.0)
    } else {
        f64::INFINITY
    }
}

fn sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

pub(crate) fn ball_perimeter_unchecked(kappa: f64, n: usize, r: f64) -> f64 {
    sphere_area(n) * sn_unchecked(kappa, r).powi(n as i32 - 1)
}

fn ball_area_unchecked(kappa: f64, n: usize, r: f64) -> Result<f64> {
    if kappa == 0.0 {
        return Ok(unit_ball_volume(n) * r.powi(n as i32));
    }
    if n == 2 {
        let half = 0.5 * kappa.sqrt() * r;
        let s = half.sin();
        return Ok(4.0 * PI * s * s / kappa);
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    let flat = unit_ball_volume(n) * r.powi(n as i32);
    let tol = 1e-13 * flat.max(f64::MIN_POSITIVE);
    let integral = gauss_kronrod(|rho| sn_unchecked(kappa, rho).powi(n as i32 - 1), 0.0, r, tol)?;
    Ok(sphere_area(n) * integral)
}

/// Volume and perimeter of the geodesic ball of radius `r` in the
/// `n`-dimensional model space of curvature `kappa`.
pub fn ball_metrics(kappa: f64, n: usize, r: f64) -> Result<BallSpec> {
    if n < 2 {
        return Err(Error::Domain(format!("dimension must be >= 2, got {n}")));
    }
    let r = check_radius(kappa, r)?;
    Ok(BallSpec {
        radius: r,
        area: ball_area_unchecked(kappa, n, r)?,
        perimeter: ball_perimeter_unchecked(kappa, n, r),
    })
}

/// Radius of the geodesic ball of volume `area`.
pub fn inverse_ball_area(kappa: f64, n: usize, area: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("dimension must be >= 2, got {n}")));
    }
    if kappa < 0.0 || !kappa.is_finite() {
        return Err(Error::Domain(format!("curvature must be finite and >= 0, got {kappa}")));
    }
    if !(area >= 0.0) || !area.is_finite() {
        return Err(Error::Domain(format!("volume must be finite and >= 0, got {area}")));
    }
    let total = model_volume(kappa, n);
    if area > total * (1.0 + MYERS_SLACK) {
        return Err(Error::Domain(format!(
            "volume {area} exceeds the total volume {total} of the model space"
        )));
    }
    if area == 0.0 {
        return Ok(0.0);
    }
    if kappa == 0.0 {
        return Ok((area / unit_ball_volume(n)).powf(1.0 / n as f64));
    }
    let bound = myers_bound(kappa);
    if n == 2 {
        let q = (kappa * area / (4.0 * PI)).sqrt().min(1.0);
        return Ok((2.0 / kappa.sqrt() * q.asin()).min(bound));
    }
    // safeguarded Newton on the monotone map r -> |B_r|
    let mut lo = 0.0;
    let mut hi = bound;
    let mut r = (area / unit_ball_volume(n)).powf(1.0 / n as f64).min(0.5 * bound);
    for _ in 0..200 {
        let a = ball_area_unchecked(kappa, n, r)?;
        let diff = a - area;
        if diff.abs() <= 1e-14 * area {
            return Ok(r);
        }
        if diff > 0.0 {
            hi = r;
        } else {
            lo = r;
        }
        let p = ball_perimeter_unchecked(kappa, n, r);
        let newton = r - diff / p;
        r = if p > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 1e-15 * bound {
            return Ok(r);
        }
    }
    Ok(r)
}

/// Isoperimetric profile `a(s) = s^{(n-1)/n} / |∂B_s|` of the model space.
pub fn iso_profile_a(kappa: f64, n: usize, s: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("volume must be positive, got {s}")));
    }
    let total = model_volume(kappa, n);
    if s >= total {
        return Err(Error::Domain(format!(
            "volume {s} is not below the total volume {total} of the model space"
        )));
    }
    let r = inverse_ball_area(kappa, n, s)?;
    let p = ball_perimeter_unchecked(kappa, n, r);
    Ok(s.powf((n as f64 - 1.0) / n as f64) / p)
}

/// Limit of the isoperimetric profile as the volume tends to zero.
pub fn iso_profile_flat(n: usize) -> f64 {
    1.0 / (n as f64 * unit_ball_volume(n).powf(1.0 / n as f64))
}

/// Asymptotic volume ratio (flat cases) or volume fraction (compact case).
pub fn theta_of(m: &Manifold) -> f64 {
    match m.kind {
        ManifoldKind::Plane | ManifoldKind::Sphere => 1.0,
        ManifoldKind::Cone => m.cone_fraction,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sn_values() {
        assert_eq!(sn(0.0, 2.0).unwrap(), 2.0);
        assert_relative_eq!(sn(1.0, PI / 2.0).unwrap(), 1.0, epsilon = 1e-15);
        // sin(2·π/4)/2 = 0.5
        assert_relative_eq!(sn(4.0, PI / 4.0).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn sn_series_branch_is_continuous() {
        let kappa = 1.0;
        let below = sn(kappa, 0.999_999e-4).unwrap();
        let above = sn(kappa, 1.000_001e-4).unwrap();
        assert_relative_eq!(below, (0.999_999e-4f64).sin(), max_relative = 1e-15);
        assert_relative_eq!(above, (1.000_001e-4f64).sin(), max_relative = 1e-15);
        // continuity in kappa at zero
        assert_relative_eq!(sn(1e-20, 3.0).unwrap(), 3.0, max_relative = 1e-15);
    }

    #[test]
    fn sn_rejects_myers_violation() {
        assert!(matches!(sn(1.0, 3.2), Err(Error::Domain(_))));
        assert!(sn(1.0, PI).is_ok());
    }

    #[test]
    fn ball_metric_examples() {
        let b = ball_metrics(0.0, 2, 1.0).unwrap();
        assert_relative_eq!(b.area, PI, epsilon = 1e-15);
        assert_relative_eq!(b.perimeter, 2.0 * PI, epsilon = 1e-15);
        let b = ball_metrics(1.0, 2, PI / 2.0).unwrap();
        assert_relative_eq!(b.area, 2.0 * PI, epsilon = 1e-14);
        assert_relative_eq!(b.perimeter, 2.0 * PI, epsilon = 1e-14);
        let b = ball_metrics(1.0, 2, PI).unwrap();
        assert_relative_eq!(b.area, 4.0 * PI, epsilon = 1e-14);
        assert!(b.perimeter.abs() < 1e-14);
    }

    #[test]
    fn inverse_area_examples() {
        assert_relative_eq!(inverse_ball_area(0.0, 2, PI).unwrap(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(inverse_ball_area(1.0, 2, 2.0 * PI).unwrap(), PI / 2.0, epsilon = 1e-14);
        assert_eq!(inverse_ball_area(0.0, 2, 0.0).unwrap(), 0.0);
        assert!(inverse_ball_area(1.0, 2, 4.0 * PI * 1.01).is_err());
    }

    #[test]
    fn inverse_area_general_dimension() {
        for &(kappa, n) in &[(1.0, 3), (2.5, 4), (0.3, 3)] {
            for &r in &[1e-3, 0.2, 1.0, 0.9 * myers_bound(kappa)] {
                let a = ball_metrics(kappa, n, r).unwrap().area;
                let back = inverse_ball_area(kappa, n, a).unwrap();
                assert_relative_eq!(back, r, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn profile_examples() {
        let flat = 1.0 / (2.0 * PI.sqrt());
        for &s in &[0.1, 1.0, 50.0] {
            assert_relative_eq!(iso_profile_a(0.0, 2, s).unwrap(), flat, max_relative = 1e-14);
        }
        assert_relative_eq!(iso_profile_flat(2), flat, max_relative = 1e-15);
        let hemi = iso_profile_a(1.0, 2, 2.0 * PI).unwrap();
        assert_relative_eq!(hemi, (2.0 * PI).sqrt() / (2.0 * PI), max_relative = 1e-13);
        assert!(iso_profile_a(1.0, 2, 1.0).unwrap() < iso_profile_a(1.0, 2, 2.0).unwrap());
        assert!(iso_profile_a(1.0, 2, 4.0 * PI).is_err());
        assert!(iso_profile_a(0.0, 2, 0.0).is_err());
    }

    #[test]
    fn theta_values() {
        assert_eq!(Manifold::plane().theta(), 1.0);
        assert_eq!(Manifold::sphere(1.0).unwrap().theta(), 1.0);
        assert_eq!(Manifold::cone(0.75).unwrap().theta(), 0.75);
        assert!(Manifold::cone(1.5).is_err());
        assert!(Manifold::sphere(0.0).is_err());
    }

    #[test]
    fn unit_ball_volumes() {
        assert_relative_eq!(unit_ball_volume(2), PI, max_relative = 1e-15);
        assert_relative_eq!(unit_ball_volume(3), 4.0 * PI / 3.0, max_relative = 1e-15);
        assert_relative_eq!(unit_ball_volume(4), PI * PI / 2.0, max_relative = 1e-15);
    }
}
