//! Mesh generation: exact boundary samples, a hexagonal interior lattice,
//! constrained Delaunay connectivity and constrained Laplacian smoothing,
//! all in a planar chart of the domain.

use spade::{ConstrainedDelaunayTriangulation, Point2, Triangulation};

use super::domain::Chart;
use super::{dist, norm, DomainSpec, Mesh};
use crate::error::{Error, Result};
use crate::geometry::{Manifold, ManifoldKind};

const MIN_ANGLE_DEG: f64 = 20.0;
const MAX_EDGE_FACTOR: f64 = 1.5;
const SMOOTHING_SWEEPS: usize = 12;
// interior lattice points closer than this (times h) to the boundary are dropped
const BOUNDARY_CLEARANCE: f64 = 0.55;
const GAP_FILL_PASSES: usize = 4;
// triangles with an edge longer than this (times h) receive a centroid point
const GAP_EDGE_FACTOR: f64 = 1.25;
// |2·area| / longest² below this marks a sliver
const SLIVER_RATIO: f64 = 1e-8;

/// Builds a mesh of `spec` on `m` with target edge length `h`.
pub fn build_mesh(spec: &DomainSpec, m: &Manifold, h: f64) -> Result<Mesh> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidInput(format!("target edge length must be positive, got {h}")));
    }
    spec.validate(m)?;
    let chart = spec.chart(m);
    let boundary = spec.boundary_loop(m, h);
    let nb = boundary.len();
    if nb < 3 {
        return Err(Error::Mesh("boundary sampling produced fewer than 3 points".into()));
    }

    let mut points = boundary.clone();
    points.extend(interior_lattice(&boundary, spec.lattice_anchor(), h));

    let mut triangles = triangulate(&points, &boundary)?;
    // fill gaps between the boundary and the lattice
    for _ in 0..GAP_FILL_PASSES {
        let extra = gap_points(&points, &triangles, h);
        if extra.is_empty() {
            break;
        }
        points.extend(extra);
        triangles = triangulate(&points, &boundary)?;
    }
    // spade's face order depends only on the input, but sorting makes the
    // output independent of its internals
    triangles.sort_unstable();

    smooth(&mut points, &triangles, nb);

    let vertices: Vec<[f64; 3]> = points.iter().map(|&p| chart.to_surface(p)).collect();
    let boundary_edges: Vec<[usize; 2]> = (0..nb).map(|i| [i, (i + 1) % nb]).collect();
    let mesh = Mesh::from_parts(*m, vertices, triangles, boundary_edges, h, Some(spec.clone()))?;
    check_quality(&mesh, spec, m, &chart)?;
    Ok(mesh)
}

fn triangulate(points: &[[f64; 2]], boundary: &[[f64; 2]]) -> Result<Vec<[usize; 3]>> {
    let nb = boundary.len();
    let constraints: Vec<[usize; 2]> = (0..nb).map(|i| [i, (i + 1) % nb]).collect();
    let cdt = ConstrainedDelaunayTriangulation::<Point2<f64>>::bulk_load_cdt(
        points.iter().map(|p| Point2::new(p[0], p[1])).collect(),
        constraints,
    )
    .map_err(|e| Error::Mesh(format!("triangulation failed: {e:?}")))?;
    if cdt.num_vertices() != points.len() {
        return Err(Error::Mesh("duplicate points in mesh generation".into()));
    }
    let mut triangles = Vec::new();
    for face in cdt.inner_faces() {
        let vs = face.vertices();
        // spade reports inner faces counterclockwise
        let t = [vs[0].fix().index(), vs[1].fix().index(), vs[2].fix().index()];
        let inside = if t.iter().all(|&i| i < nb) {
            // Samples along a straight edge are collinear only up to rounding,
            // so a centroid test is unreliable for the slivers they produce.
            // A face on three loop vertices is inside iff its counterclockwise
            // order follows the loop.
            let rot = t.iter().enumerate().min_by_key(|(_, &i)| i).map_or(0, |(k, _)| k);
            let (a, b, c) = (t[rot], t[(rot + 1) % 3], t[(rot + 2) % 3]);
            a < b && b < c
        } else {
            let c = [
                (points[t[0]][0] + points[t[1]][0] + points[t[2]][0]) / 3.0,
                (points[t[0]][1] + points[t[1]][1] + points[t[2]][1]) / 3.0,
            ];
            point_in_polygon(c, boundary)
        };
        if inside {
            triangles.push(t);
        }
    }
    flip_slivers(points, &mut triangles);
    Ok(triangles)
}

/// Flips the long edge of every near-degenerate triangle. Such slivers sit
/// on a straight run of boundary samples; the flip splits the neighbor
/// across the run instead.
fn flip_slivers(points: &[[f64; 2]], triangles: &mut [[usize; 3]]) {
    let d2 = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2);
    let is_sliver = |t: &[usize; 3]| {
        let (a, b, c) = (points[t[0]], points[t[1]], points[t[2]]);
        let longest = d2(a, b).max(d2(b, c)).max(d2(c, a));
        orient2d(a, b, c).abs() <= SLIVER_RATIO * longest
    };
    for _ in 0..triangles.len() {
        let Some(ti) = triangles.iter().position(is_sliver) else {
            return;
        };
        let t = triangles[ti];
        // rotate so that p -> q is the longest edge and b the apex
        let k = (0..3)
            .max_by(|&i, &j| {
                let li = d2(points[t[i]], points[t[(i + 1) % 3]]);
                let lj = d2(points[t[j]], points[t[(j + 1) % 3]]);
                li.total_cmp(&lj)
            })
            .unwrap_or(0);
        let (p, q, b) = (t[k], t[(k + 1) % 3], t[(k + 2) % 3]);
        let Some(ni) = triangles
            .iter()
            .position(|n| (0..3).any(|i| n[i] == q && n[(i + 1) % 3] == p))
        else {
            return;
        };
        let n = triangles[ni];
        let Some(&d) = n.iter().find(|&&v| v != p && v != q) else {
            return;
        };
        triangles[ti] = [p, d, b];
        triangles[ni] = [d, q, b];
    }
}

fn gap_points(points: &[[f64; 2]], triangles: &[[usize; 3]], h: f64) -> Vec<[f64; 2]> {
    let d = |a: [f64; 2], b: [f64; 2]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
    let mut out: Vec<[f64; 2]> = Vec::new();
    for t in triangles {
        let (a, b, c) = (points[t[0]], points[t[1]], points[t[2]]);
        if d(a, b).max(d(b, c)).max(d(c, a)) <= GAP_EDGE_FACTOR * h {
            continue;
        }
        let g = [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0];
        let clear = [a, b, c].iter().all(|&p| d(p, g) >= 0.4 * h) && out.iter().all(|&q| d(q, g) >= 0.5 * h);
        if clear {
            out.push(g);
        }
    }
    out
}

fn orient2d(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn point_in_polygon(p: [f64; 2], poly: &[[f64; 2]]) -> bool {
    let mut inside = false;
    let n = poly.len();
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a[1] > p[1]) != (b[1] > p[1]) && p[0] < (b[0] - a[0]) * (p[1] - a[1]) / (b[1] - a[1]) + a[0] {
            inside = !inside;
        }
        j = i;
    }
    inside
}

fn segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let q = [a[0] + t * d[0], a[1] + t * d[1]];
    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt()
}

fn interior_lattice(boundary: &[[f64; 2]], anchor: [f64; 2], h: f64) -> Vec<[f64; 2]> {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in boundary {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let dy = h * 3f64.sqrt() / 2.0;
    let j0 = ((lo[1] - anchor[1]) / dy).floor() as i64;
    let j1 = ((hi[1] - anchor[1]) / dy).ceil() as i64;
    let i0 = ((lo[0] - anchor[0]) / h).floor() as i64 - 1;
    let i1 = ((hi[0] - anchor[0]) / h).ceil() as i64 + 1;
    let n = boundary.len();
    let clearance = BOUNDARY_CLEARANCE * h;
    let mut out = Vec::new();
    for j in j0..=j1 {
        let y = anchor[1] + j as f64 * dy;
        let shift = if j.rem_euclid(2) == 1 { 0.5 * h } else { 0.0 };
        for i in i0..=i1 {
            let p = [anchor[0] + i as f64 * h + shift, y];
            if !point_in_polygon(p, boundary) {
                continue;
            }
            let near = (0..n).any(|k| segment_distance(p, boundary[k], boundary[(k + 1) % n]) < clearance);
            if !near {
                out.push(p);
            }
        }
    }
    out
}

fn chart_min_angle(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    let ang = |p: [f64; 2], q: [f64; 2], r: [f64; 2]| {
        let u = [q[0] - p[0], q[1] - p[1]];
        let v = [r[0] - p[0], r[1] - p[1]];
        (u[0] * v[1] - u[1] * v[0]).abs().atan2(u[0] * v[0] + u[1] * v[1])
    };
    ang(a, b, c).min(ang(b, c, a)).min(ang(c, a, b))
}

/// Gauss-Seidel Laplacian smoothing of interior vertices. A move is kept
/// only if every incident triangle stays positively oriented and the worst
/// incident angle does not get worse.
fn smooth(points: &mut [[f64; 2]], triangles: &[[usize; 3]], fixed: usize) {
    let n = points.len();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ti, t) in triangles.iter().enumerate() {
        for k in 0..3 {
            incident[t[k]].push(ti);
            for l in 0..3 {
                if l != k && !neighbors[t[k]].contains(&t[l]) {
                    neighbors[t[k]].push(t[l]);
                }
            }
        }
    }
    let worst = |points: &[[f64; 2]], v: usize| -> Option<f64> {
        let mut w = f64::INFINITY;
        for &ti in &incident[v] {
            let t = triangles[ti];
            let (a, b, c) = (points[t[0]], points[t[1]], points[t[2]]);
            if orient2d(a, b, c) <= 0.0 {
                return None;
            }
            w = w.min(chart_min_angle(a, b, c));
        }
        Some(w)
    };
    for _ in 0..SMOOTHING_SWEEPS {
        for v in fixed..n {
            if neighbors[v].is_empty() {
                continue;
            }
            let k = neighbors[v].len() as f64;
            let target = [
                neighbors[v].iter().map(|&u| points[u][0]).sum::<f64>() / k,
                neighbors[v].iter().map(|&u| points[u][1]).sum::<f64>() / k,
            ];
            let before = worst(points, v).unwrap_or(f64::NEG_INFINITY);
            let old = points[v];
            points[v] = target;
            match worst(points, v) {
                Some(after) if after >= before => {}
                _ => points[v] = old,
            }
        }
    }
}

fn check_quality(mesh: &Mesh, spec: &DomainSpec, m: &Manifold, chart: &Chart) -> Result<()> {
    let h = mesh.h();
    let max_edge = mesh.max_edge_length();
    if max_edge > MAX_EDGE_FACTOR * h {
        return Err(Error::Mesh(format!(
            "longest edge {max_edge:.4e} exceeds {MAX_EDGE_FACTOR}·h = {:.4e}",
            MAX_EDGE_FACTOR * h
        )));
    }
    let min_angle = mesh.min_angle_deg();
    if min_angle < MIN_ANGLE_DEG {
        return Err(Error::Mesh(format!(
            "smallest angle {min_angle:.2}° is below {MIN_ANGLE_DEG}°; try a smaller h"
        )));
    }
    if m.kind() == ManifoldKind::Cone {
        let diameter = spec.chart_diameter(m);
        let apex = [0.0, 0.0, 0.0];
        let closest = mesh.vertices().iter().map(|&v| dist(v, apex)).fold(f64::INFINITY, f64::min);
        if closest < 0.05 * diameter {
            return Err(Error::Mesh(format!(
                "vertex at distance {closest:.4e} from the cone apex (minimum {:.4e})",
                0.05 * diameter
            )));
        }
    }
    if let Chart::Equidistant { radius } | Chart::Azimuthal { radius, .. } | Chart::Gnomonic { radius, .. } = *chart {
        debug_assert!(mesh.vertices().iter().all(|&v| (norm(v) - radius).abs() <= 1e-9 * radius));
    }
    Ok(())
}
