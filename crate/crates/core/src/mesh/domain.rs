use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{cross, dot, lerp, norm, scale, sub, Point3};
use crate::error::{Error, Result};
use crate::geometry::{ball_metrics, myers_bound, Manifold, ManifoldKind};

/// Analytic description of a simply connected domain.
///
/// Planar shapes are centered at the origin unless they carry explicit
/// coordinates. Spherical caps are centered at the north pole. Cone disks
/// live in the unrolled sector chart `{0 <= angle <= 2π·fraction}` with the
/// apex at the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Disk { radius: f64 },
    Ellipse { a: f64, b: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
    AnnularSector { inner: f64, outer: f64, start: f64, sweep: f64 },
    SphericalCap { radius: f64 },
    /// Vertices are directions in R^3 (normalized internally); consecutive
    /// vertices are joined by minor great-circle arcs.
    GeodesicPolygon { vertices: Vec<[f64; 3]> },
    ConeDisk { center: [f64; 2], radius: f64 },
}

/// Map between a planar parameter chart and the embedded surface.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Chart {
    Flat,
    /// Azimuthal equidistant chart centered at the north pole.
    Equidistant { radius: f64 },
    /// Azimuthal equidistant chart centered at `center`.
    Azimuthal {
        radius: f64,
        center: Point3,
        e1: Point3,
        e2: Point3,
    },
    /// Central projection onto the tangent plane at `center`. Great circles
    /// map to straight lines.
    Gnomonic {
        radius: f64,
        center: Point3,
        e1: Point3,
        e2: Point3,
    },
}

impl Chart {
    pub(crate) fn to_surface(&self, p: [f64; 2]) -> Point3 {
        match *self {
            Chart::Flat => [p[0], p[1], 0.0],
            Chart::Equidistant { radius } => {
                let d = (p[0] * p[0] + p[1] * p[1]).sqrt();
                if d == 0.0 {
                    return [0.0, 0.0, radius];
                }
                let ang = d / radius;
                let s = radius * ang.sin() / d;
                [s * p[0], s * p[1], radius * ang.cos()]
            }
            Chart::Azimuthal { radius, center, e1, e2 } => {
                let d = (p[0] * p[0] + p[1] * p[1]).sqrt();
                if d == 0.0 {
                    return scale(center, radius);
                }
                let ang = d / radius;
                let (s, c) = (ang.sin() / d, ang.cos());
                [0, 1, 2].map(|k| radius * (c * center[k] + s * (p[0] * e1[k] + p[1] * e2[k])))
            }
            Chart::Gnomonic { radius, center, e1, e2 } => {
                let q = [
                    center[0] + p[0] * e1[0] + p[1] * e2[0],
                    center[1] + p[0] * e1[1] + p[1] * e2[1],
                    center[2] + p[0] * e1[2] + p[1] * e2[2],
                ];
                scale(q, radius / norm(q))
            }
        }
    }

    pub(crate) fn from_surface(&self, x: Point3) -> [f64; 2] {
        match *self {
            Chart::Flat => [x[0], x[1]],
            Chart::Equidistant { radius } => {
                let rho = (x[0] * x[0] + x[1] * x[1]).sqrt();
                if rho == 0.0 {
                    return [0.0, 0.0];
                }
                let d = radius * rho.atan2(x[2]);
                [d * x[0] / rho, d * x[1] / rho]
            }
            Chart::Azimuthal { radius, center, e1, e2 } => {
                let (a, b) = (dot(x, e1), dot(x, e2));
                let rho = (a * a + b * b).sqrt();
                if rho == 0.0 {
                    return [0.0, 0.0];
                }
                let d = radius * rho.atan2(dot(x, center));
                [d * a / rho, d * b / rho]
            }
            Chart::Gnomonic { center, e1, e2, .. } => {
                let c = dot(x, center);
                [dot(x, e1) / c, dot(x, e2) / c]
            }
        }
    }
}

impl DomainSpec {
    pub fn name(&self) -> &'static str {
        match self {
            DomainSpec::Disk { .. } => "disk",
            DomainSpec::Ellipse { .. } => "ellipse",
            DomainSpec::Polygon { .. } => "polygon",
            DomainSpec::AnnularSector { .. } => "annular_sector",
            DomainSpec::SphericalCap { .. } => "spherical_cap",
            DomainSpec::GeodesicPolygon { .. } => "geodesic_polygon",
            DomainSpec::ConeDisk { .. } => "cone_disk",
        }
    }

    pub fn validate(&self, m: &Manifold) -> Result<()> {
        let want = match self {
            DomainSpec::SphericalCap { .. } | DomainSpec::GeodesicPolygon { .. } => ManifoldKind::Sphere,
            DomainSpec::ConeDisk { .. } => ManifoldKind::Cone,
            _ => ManifoldKind::Plane,
        };
        if m.kind() != want {
            return Err(Error::InvalidSpec(format!(
                "{} domains need a {} manifold, got {}",
                self.name(),
                want.as_str(),
                m.kind().as_str()
            )));
        }
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidSpec(format!("{name} must be positive and finite, got {v}")))
            }
        };
        match self {
            DomainSpec::Disk { radius } => positive("radius", *radius),
            DomainSpec::Ellipse { a, b } => {
                positive("a", *a)?;
                positive("b", *b)
            }
            DomainSpec::Polygon { vertices } => {
                if vertices.len() < 3 {
                    return Err(Error::InvalidSpec("polygon needs at least 3 vertices".into()));
                }
                if vertices.iter().flatten().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidSpec("polygon has non-finite coordinates".into()));
                }
                check_simple(vertices)
            }
            DomainSpec::AnnularSector { inner, outer, start, sweep } => {
                positive("inner", *inner)?;
                positive("sweep", *sweep)?;
                if !start.is_finite() {
                    return Err(Error::InvalidSpec("start angle must be finite".into()));
                }
                if outer <= inner {
                    return Err(Error::InvalidSpec(format!(
                        "outer radius {outer} must exceed inner radius {inner}"
                    )));
                }
                if *sweep >= 2.0 * PI {
                    return Err(Error::InvalidSpec(
                        "sweep must be below 2π (the domain must be simply connected)".into(),
                    ));
                }
                Ok(())
            }
            DomainSpec::SphericalCap { radius } => {
                positive("radius", *radius)?;
                let bound = myers_bound(m.kappa());
                if *radius >= bound {
                    return Err(Error::InvalidSpec(format!(
                        "cap radius {radius} must be below π/√κ = {bound}"
                    )));
                }
                Ok(())
            }
            DomainSpec::GeodesicPolygon { vertices } => {
                if vertices.len() < 3 {
                    return Err(Error::InvalidSpec("geodesic polygon needs at least 3 vertices".into()));
                }
                if vertices.iter().any(|v| !(norm(*v) > 0.0) || !v.iter().all(|x| x.is_finite())) {
                    return Err(Error::InvalidSpec("geodesic polygon vertices must be nonzero directions".into()));
                }
                let c = polygon_direction_center(vertices);
                if vertices.iter().any(|v| dot(*v, c) / norm(*v) <= 1e-6) {
                    return Err(Error::InvalidSpec(
                        "geodesic polygon must lie in an open hemisphere".into(),
                    ));
                }
                // great circles are straight in the gnomonic chart
                let chart = gnomonic_chart(vertices, m);
                let loop_pts: Vec<[f64; 2]> = vertices
                    .iter()
                    .map(|v| chart.from_surface(scale(*v, 1.0 / norm(*v))))
                    .collect();
                check_simple(&loop_pts)
            }
            DomainSpec::ConeDisk { center, radius } => {
                positive("radius", *radius)?;
                let sector = 2.0 * PI * m.cone_fraction();
                let d = (center[0] * center[0] + center[1] * center[1]).sqrt();
                let phi = center[1].atan2(center[0]);
                let phi = if phi < 0.0 { phi + 2.0 * PI } else { phi };
                if !(phi > 0.0 && phi < sector) {
                    return Err(Error::InvalidSpec(format!(
                        "cone disk center angle {phi} lies outside the sector [0, {sector}]"
                    )));
                }
                // distance to each seam ray
                let ray_dist = |angle: f64| {
                    let rel = (phi - angle).abs();
                    if rel >= PI / 2.0 {
                        d
                    } else {
                        d * rel.sin()
                    }
                };
                let seam = ray_dist(0.0).min(ray_dist(sector));
                if *radius >= seam {
                    return Err(Error::InvalidSpec(format!(
                        "cone disk crosses the seam (radius {radius}, seam distance {seam})"
                    )));
                }
                if d - radius < 0.05 * 2.0 * radius {
                    return Err(Error::InvalidSpec(format!(
                        "cone disk comes within {} of the apex; at least {} is required",
                        d - radius,
                        0.1 * radius
                    )));
                }
                Ok(())
            }
        }
    }

    /// Exact area of the domain on its manifold.
    pub fn analytic_area(&self, m: &Manifold) -> f64 {
        match self {
            DomainSpec::Disk { radius } | DomainSpec::ConeDisk { radius, .. } => PI * radius * radius,
            DomainSpec::Ellipse { a, b } => PI * a * b,
            DomainSpec::Polygon { vertices } => signed_area(vertices).abs(),
            DomainSpec::AnnularSector { inner, outer, sweep, .. } => {
                0.5 * sweep * (outer * outer - inner * inner)
            }
            DomainSpec::SphericalCap { radius } => ball_metrics(m.kappa(), 2, *radius)
                .map(|b| b.area)
                .unwrap_or(f64::NAN),
            DomainSpec::GeodesicPolygon { vertices } => {
                // spherical excess
                let k = vertices.len();
                let dirs: Vec<Point3> = vertices.iter().map(|v| scale(*v, 1.0 / norm(*v))).collect();
                let mut angle_sum = 0.0;
                for i in 0..k {
                    let p = dirs[i];
                    let prev = dirs[(i + k - 1) % k];
                    let next = dirs[(i + 1) % k];
                    let t1 = sub(prev, scale(p, dot(prev, p)));
                    let t2 = sub(next, scale(p, dot(next, p)));
                    angle_sum += norm(cross(t1, t2)).atan2(dot(t1, t2));
                }
                (angle_sum - (k as f64 - 2.0) * PI) / m.kappa()
            }
        }
    }

    /// Analytic center on the surface.
    pub fn center(&self, m: &Manifold) -> Point3 {
        match self {
            DomainSpec::ConeDisk { center, .. } => [center[0], center[1], 0.0],
            DomainSpec::Polygon { vertices } => {
                let c = polygon_centroid(vertices);
                [c[0], c[1], 0.0]
            }
            DomainSpec::AnnularSector { .. } => {
                // area centroid
                let pts = self.boundary_loop(m, 1e-3 * self.scale_hint());
                let c = polygon_centroid(&pts);
                [c[0], c[1], 0.0]
            }
            DomainSpec::SphericalCap { .. } => [0.0, 0.0, m.sphere_radius().unwrap_or(1.0)],
            DomainSpec::GeodesicPolygon { vertices } => {
                scale(polygon_direction_center(vertices), m.sphere_radius().unwrap_or(1.0))
            }
            _ => [0.0, 0.0, 0.0],
        }
    }

    fn scale_hint(&self) -> f64 {
        match self {
            DomainSpec::Disk { radius }
            | DomainSpec::ConeDisk { radius, .. }
            | DomainSpec::SphericalCap { radius } => *radius,
            DomainSpec::Ellipse { a, b } => a.max(*b),
            DomainSpec::AnnularSector { outer, .. } => *outer,
            DomainSpec::Polygon { vertices } => vertices
                .iter()
                .map(|v| (v[0] * v[0] + v[1] * v[1]).sqrt())
                .fold(0.0, f64::max),
            DomainSpec::GeodesicPolygon { .. } => 1.0,
        }
    }

    /// Diameter of the domain in its chart.
    pub(crate) fn chart_diameter(&self, m: &Manifold) -> f64 {
        let pts = self.boundary_loop(m, 0.01 * self.scale_hint());
        let mut d: f64 = 0.0;
        for a in &pts {
            for b in &pts {
                d = d.max(((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt());
            }
        }
        d
    }

    pub(crate) fn chart(&self, m: &Manifold) -> Chart {
        match self {
            DomainSpec::SphericalCap { .. } => Chart::Equidistant {
                radius: m.sphere_radius().unwrap_or(1.0),
            },
            DomainSpec::GeodesicPolygon { vertices } => match gnomonic_chart(vertices, m) {
                // the equidistant chart is far less anisotropic away from the
                // center, which keeps lattice triangles well shaped
                Chart::Gnomonic { radius, center, e1, e2 } => Chart::Azimuthal { radius, center, e1, e2 },
                other => other,
            },
            _ => Chart::Flat,
        }
    }

    /// Anchor point of the interior lattice, in chart coordinates.
    pub(crate) fn lattice_anchor(&self) -> [f64; 2] {
        match self {
            DomainSpec::ConeDisk { center, .. } => *center,
            DomainSpec::Polygon { vertices } => polygon_centroid(vertices),
            _ => [0.0, 0.0],
        }
    }

    /// Counterclockwise boundary samples in chart coordinates with surface
    /// spacing at most `h`.
    pub(crate) fn boundary_loop(&self, m: &Manifold, h: f64) -> Vec<[f64; 2]> {
        let circle = |c: [f64; 2], r: f64, n: usize| -> Vec<[f64; 2]> {
            (0..n)
                .map(|k| {
                    let t = 2.0 * PI * k as f64 / n as f64;
                    [c[0] + r * t.cos(), c[1] + r * t.sin()]
                })
                .collect()
        };
        let count = |len: f64| ((len / h).ceil() as usize).max(1);
        match self {
            DomainSpec::Disk { radius } => circle([0.0, 0.0], *radius, count(2.0 * PI * radius).max(8)),
            DomainSpec::ConeDisk { center, radius } => circle(*center, *radius, count(2.0 * PI * radius).max(8)),
            // chart circumference bounds the surface one
            DomainSpec::SphericalCap { radius } => circle([0.0, 0.0], *radius, count(2.0 * PI * radius).max(8)),
            DomainSpec::Ellipse { a, b } => ellipse_loop(*a, *b, h),
            DomainSpec::Polygon { vertices } => {
                let mut v = vertices.clone();
                if signed_area(&v) < 0.0 {
                    v.reverse();
                }
                let mut out = Vec::new();
                for i in 0..v.len() {
                    let p = v[i];
                    let q = v[(i + 1) % v.len()];
                    let len = ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt();
                    let k = count(len);
                    for j in 0..k {
                        let t = j as f64 / k as f64;
                        out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
                    }
                }
                out
            }
            DomainSpec::AnnularSector { inner, outer, start, sweep } => {
                let mut out = Vec::new();
                let ko = count(outer * sweep);
                for j in 0..ko {
                    let t = start + sweep * j as f64 / ko as f64;
                    out.push([outer * t.cos(), outer * t.sin()]);
                }
                let end = start + sweep;
                let kr = count(outer - inner);
                for j in 0..kr {
                    let r = outer - (outer - inner) * j as f64 / kr as f64;
                    out.push([r * end.cos(), r * end.sin()]);
                }
                let ki = count(inner * sweep);
                for j in 0..ki {
                    let t = end - sweep * j as f64 / ki as f64;
                    out.push([inner * t.cos(), inner * t.sin()]);
                }
                for j in 0..kr {
                    let r = inner + (outer - inner) * j as f64 / kr as f64;
                    out.push([r * start.cos(), r * start.sin()]);
                }
                out
            }
            DomainSpec::GeodesicPolygon { vertices } => {
                let chart = self.chart(m);
                let radius = m.sphere_radius().unwrap_or(1.0);
                let dirs: Vec<Point3> = vertices.iter().map(|v| scale(*v, 1.0 / norm(*v))).collect();
                let mut out = Vec::new();
                for i in 0..dirs.len() {
                    let p = dirs[i];
                    let q = dirs[(i + 1) % dirs.len()];
                    let omega = norm(cross(p, q)).atan2(dot(p, q));
                    let k = count(radius * omega);
                    for j in 0..k {
                        let t = j as f64 / k as f64;
                        let x = slerp(p, q, omega, t);
                        out.push(chart.from_surface(scale(x, radius)));
                    }
                }
                if signed_area(&out) < 0.0 {
                    out.reverse();
                }
                out
            }
        }
    }

    /// Point on the exact boundary near the midpoint of the boundary edge `a`-`b`.
    pub(crate) fn project_boundary_midpoint(&self, m: &Manifold, a: Point3, b: Point3) -> Point3 {
        let mid = lerp(a, b, 0.5);
        let radial = |c: [f64; 2], r: f64| {
            let d = [mid[0] - c[0], mid[1] - c[1]];
            let len = (d[0] * d[0] + d[1] * d[1]).sqrt();
            [c[0] + r * d[0] / len, c[1] + r * d[1] / len, 0.0]
        };
        match self {
            DomainSpec::Disk { radius } => radial([0.0, 0.0], *radius),
            DomainSpec::ConeDisk { center, radius } => radial(*center, *radius),
            DomainSpec::Ellipse { a: ea, b: eb } => {
                let s = ((mid[0] / ea).powi(2) + (mid[1] / eb).powi(2)).sqrt();
                [mid[0] / s, mid[1] / s, 0.0]
            }
            DomainSpec::Polygon { .. } => mid,
            DomainSpec::AnnularSector { inner, outer, .. } => {
                let ra = (a[0] * a[0] + a[1] * a[1]).sqrt();
                let rb = (b[0] * b[0] + b[1] * b[1]).sqrt();
                let close = |x: f64, y: f64| (x - y).abs() <= 1e-9 * y;
                if close(ra, *outer) && close(rb, *outer) {
                    radial([0.0, 0.0], *outer)
                } else if close(ra, *inner) && close(rb, *inner) {
                    radial([0.0, 0.0], *inner)
                } else {
                    mid
                }
            }
            DomainSpec::SphericalCap { radius } => {
                let chart = self.chart(m);
                let r = m.sphere_radius().unwrap_or(1.0);
                let p = chart.from_surface(scale(mid, r / norm(mid)));
                let d = (p[0] * p[0] + p[1] * p[1]).sqrt();
                chart.to_surface([p[0] * radius / d, p[1] * radius / d])
            }
            DomainSpec::GeodesicPolygon { .. } => {
                let r = m.sphere_radius().unwrap_or(1.0);
                scale(mid, r / norm(mid))
            }
        }
    }
}

fn gnomonic_chart(vertices: &[Point3], m: &Manifold) -> Chart {
    let center = polygon_direction_center(vertices);
    let seed = if center[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let e1 = sub(seed, scale(center, dot(seed, center)));
    let e1 = scale(e1, 1.0 / norm(e1));
    let e2 = cross(center, e1);
    Chart::Gnomonic {
        radius: m.sphere_radius().unwrap_or(1.0),
        center,
        e1,
        e2,
    }
}

fn slerp(p: Point3, q: Point3, omega: f64, t: f64) -> Point3 {
    if omega < 1e-12 {
        return lerp(p, q, t);
    }
    let s = omega.sin();
    let wa = ((1.0 - t) * omega).sin() / s;
    let wb = (t * omega).sin() / s;
    [
        wa * p[0] + wb * q[0],
        wa * p[1] + wb * q[1],
        wa * p[2] + wb * q[2],
    ]
}

fn polygon_direction_center(vertices: &[[f64; 3]]) -> Point3 {
    let mut c = [0.0; 3];
    for v in vertices {
        let n = norm(*v);
        for k in 0..3 {
            c[k] += v[k] / n;
        }
    }
    scale(c, 1.0 / norm(c))
}

pub(crate) fn signed_area(pts: &[[f64; 2]]) -> f64 {
    let n = pts.len();
    0.5 * (0..n)
        .map(|i| {
            let p = pts[i];
            let q = pts[(i + 1) % n];
            p[0] * q[1] - q[0] * p[1]
        })
        .sum::<f64>()
}

fn polygon_centroid(pts: &[[f64; 2]]) -> [f64; 2] {
    let n = pts.len();
    let a = signed_area(pts);
    let mut cx = 0.0;
    let mut cy = 0.0;
    for i in 0..n {
        let p = pts[i];
        let q = pts[(i + 1) % n];
        let w = p[0] * q[1] - q[0] * p[1];
        cx += (p[0] + q[0]) * w;
        cy += (p[1] + q[1]) * w;
    }
    [cx / (6.0 * a), cy / (6.0 * a)]
}

fn segments_cross(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let orient = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    (d1 > 0.0) != (d2 > 0.0) && (d3 > 0.0) != (d4 > 0.0) && d1 != 0.0 && d2 != 0.0 && d3 != 0.0 && d4 != 0.0
}

fn check_simple(pts: &[[f64; 2]]) -> Result<()> {
    let n = pts.len();
    if signed_area(pts).abs() <= 0.0 {
        return Err(Error::InvalidSpec("polygon has zero area".into()));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if pts[i] == pts[j] {
                return Err(Error::InvalidSpec(format!("polygon vertices {i} and {j} coincide")));
            }
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            if segments_cross(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]) {
                return Err(Error::InvalidSpec(format!(
                    "polygon edges {i} and {j} intersect (polygon is not simple)"
                )));
            }
        }
    }
    Ok(())
}

fn ellipse_loop(a: f64, b: f64, h: f64) -> Vec<[f64; 2]> {
    // arc-length table on a fine parameter grid, then equal-length resampling
    let fine = 8192usize.max((64.0 * 2.0 * PI * a.max(b) / h) as usize);
    let mut cum = Vec::with_capacity(fine + 1);
    cum.push(0.0);
    let pt = |t: f64| [a * t.cos(), b * t.sin()];
    for k in 0..fine {
        let p = pt(2.0 * PI * k as f64 / fine as f64);
        let q = pt(2.0 * PI * (k + 1) as f64 / fine as f64);
        let l = ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt();
        cum.push(cum[k] + l);
    }
    let total = cum[fine];
    let n = ((total / h).ceil() as usize).max(8);
    let mut out = Vec::with_capacity(n);
    let mut k = 0;
    for j in 0..n {
        let target = total * j as f64 / n as f64;
        while cum[k + 1] < target {
            k += 1;
        }
        let frac = (target - cum[k]) / (cum[k + 1] - cum[k]);
        let t = 2.0 * PI * (k as f64 + frac) / fine as f64;
        out.push(pt(t));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polygon_loop_is_ccw_and_spaced() {
        let sq = DomainSpec::Polygon {
            vertices: vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]],
        };
        let pts = sq.boundary_loop(&Manifold::plane(), 0.25);
        assert_eq!(pts.len(), 16);
        assert!((signed_area(&pts) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn self_intersecting_polygon_rejected() {
        let bow = DomainSpec::Polygon {
            vertices: vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]],
        };
        assert!(bow.validate(&Manifold::plane()).is_err());
    }

    #[test]
    fn cone_disk_seam_and_apex_checks() {
        let cone = Manifold::cone(0.75).unwrap();
        let ang = 0.75 * PI; // sector bisector
        let ok = DomainSpec::ConeDisk {
            center: [ang.cos(), ang.sin()],
            radius: 0.5,
        };
        ok.validate(&cone).unwrap();
        let apex = DomainSpec::ConeDisk {
            center: [ang.cos(), ang.sin()],
            radius: 0.95,
        };
        assert!(apex.validate(&cone).is_err());
        let seam = DomainSpec::ConeDisk {
            center: [1.0, 0.2],
            radius: 0.5,
        };
        assert!(seam.validate(&cone).is_err());
    }

    #[test]
    fn wrong_manifold_rejected() {
        let cap = DomainSpec::SphericalCap { radius: 1.0 };
        assert!(cap.validate(&Manifold::plane()).is_err());
        assert!(cap.validate(&Manifold::sphere(1.0).unwrap()).is_ok());
        assert!(DomainSpec::SphericalCap { radius: 3.2 }
            .validate(&Manifold::sphere(1.0).unwrap())
            .is_err());
    }

    #[test]
    fn charts_round_trip() {
        let charts = [
            Chart::Equidistant { radius: 2.0 },
            DomainSpec::GeodesicPolygon {
                vertices: vec![[1.0, 0.0, 1.0], [0.0, 1.0, 1.0], [-1.0, -1.0, 1.0]],
            }
            .chart(&Manifold::sphere(0.25).unwrap()),
        ];
        for c in charts {
            for p in [[0.1, 0.2], [-0.5, 0.3], [0.0, 0.0]] {
                let q = c.from_surface(c.to_surface(p));
                assert!((q[0] - p[0]).abs() < 1e-13 && (q[1] - p[1]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn spherical_triangle_excess() {
        // octant triangle: three right angles, area π/2 on the unit sphere
        let oct = DomainSpec::GeodesicPolygon {
            vertices: vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        };
        let m = Manifold::sphere(1.0).unwrap();
        assert!((oct.analytic_area(&m) - PI / 2.0).abs() < 1e-13);
    }
}
