//! Triangulations of bounded domains on the plane, the round sphere and
//! flat cones, with an oriented boundary chain.
//!
//! Vertices are stored as 3-D points: planar and cone charts use `z = 0`,
//! sphere meshes put every vertex exactly on the sphere of radius `1/√κ`
//! and use flat (chordal) triangles between them.

mod domain;
mod generate;
mod io;

use std::collections::HashMap;

pub use domain::DomainSpec;
pub use generate::build_mesh;
pub use io::{export_mesh, import_mesh};

use crate::error::{Error, Result};
use crate::geometry::{Manifold, ManifoldKind};

pub(crate) type Point3 = [f64; 3];

pub(crate) fn sub(a: Point3, b: Point3) -> Point3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn dot(a: Point3, b: Point3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: Point3, b: Point3) -> Point3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm(a: Point3) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn dist(a: Point3, b: Point3) -> f64 {
    norm(sub(a, b))
}

pub(crate) fn lerp(a: Point3, b: Point3, t: f64) -> Point3 {
    [
        a[0] + t * (b[0] - a[0]),
        a[1] + t * (b[1] - a[1]),
        a[2] + t * (b[2] - a[2]),
    ]
}

pub(crate) fn scale(a: Point3, s: f64) -> Point3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

/// Per-boundary-edge Robin coefficient, sampled at edge midpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryField {
    values: Vec<f64>,
}

impl BoundaryField {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::InvalidInput(format!(
                "Robin coefficient must be positive and finite; edge {i} has {v}"
            )));
        }
        Ok(BoundaryField { values })
    }

    pub fn constant(mesh: &Mesh, beta: f64) -> Result<Self> {
        Self::new(vec![beta; mesh.boundary().len()])
    }

    /// Samples `beta(midpoint)` on every boundary edge.
    pub fn from_fn<F: Fn(Point3) -> f64>(mesh: &Mesh, beta: F) -> Result<Self> {
        let values = mesh
            .boundary()
            .iter()
            .map(|&[a, b]| beta(lerp(mesh.vertices[a], mesh.vertices[b], 0.5)))
            .collect();
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values on the mesh produced by [`Mesh::refine`]: each child edge
    /// inherits its parent's coefficient.
    pub fn refined(&self) -> Self {
        BoundaryField {
            values: self.values.iter().flat_map(|&v| [v, v]).collect(),
        }
    }

    pub(crate) fn check_against(&self, mesh: &Mesh) -> Result<()> {
        if self.values.len() != mesh.boundary().len() {
            return Err(Error::InvalidInput(format!(
                "boundary field has {} values but the mesh has {} boundary edges",
                self.values.len(),
                mesh.boundary().len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Mesh {
    manifold: Manifold,
    vertices: Vec<Point3>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<[usize; 2]>,
    h: f64,
    domain: Option<DomainSpec>,
    areas: Vec<f64>,
    on_boundary: Vec<bool>,
}

impl Mesh {
    /// Assembles a mesh from raw parts and checks every structural invariant.
    pub fn from_parts(
        manifold: Manifold,
        vertices: Vec<Point3>,
        triangles: Vec<[usize; 3]>,
        boundary: Vec<[usize; 2]>,
        h: f64,
        domain: Option<DomainSpec>,
    ) -> Result<Self> {
        let areas = triangles
            .iter()
            .map(|t| triangle_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]))
            .collect::<Vec<_>>();
        let mut on_boundary = vec![false; vertices.len()];
        for e in &boundary {
            for &v in e {
                if v < on_boundary.len() {
                    on_boundary[v] = true;
                }
            }
        }
        let mesh = Mesh {
            manifold,
            vertices,
            triangles,
            boundary,
            h,
            domain,
            areas,
            on_boundary,
        };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn manifold(&self) -> &Manifold {
        &self.manifold
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Ordered, closed chain of directed boundary edges with the domain on the left.
    pub fn boundary(&self) -> &[[usize; 2]] {
        &self.boundary
    }

    /// Target edge length.
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn domain(&self) -> Option<&DomainSpec> {
        self.domain.as_ref()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle_areas(&self) -> &[f64] {
        &self.areas
    }

    /// Total area (sum of flat triangle areas).
    pub fn area(&self) -> f64 {
        self.areas.iter().sum()
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.on_boundary[v]
    }

    pub fn boundary_edge_length(&self, e: usize) -> f64 {
        let [a, b] = self.boundary[e];
        dist(self.vertices[a], self.vertices[b])
    }

    pub fn boundary_length(&self) -> f64 {
        (0..self.boundary.len()).map(|e| self.boundary_edge_length(e)).sum()
    }

    pub fn max_edge_length(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|t| {
                [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])]
                    .map(|(a, b)| dist(self.vertices[a], self.vertices[b]))
            })
            .fold(0.0, f64::max)
    }

    /// Smallest interior angle over all triangles, in degrees.
    pub fn min_angle_deg(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| min_angle(self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]))
            .fold(180.0, f64::min)
    }

    /// Center used for polar angles and radial expressions: the analytic
    /// center of the domain when known, otherwise the area centroid.
    pub fn center(&self) -> Point3 {
        if let Some(d) = &self.domain {
            return d.center(&self.manifold);
        }
        let mut c = [0.0; 3];
        for (t, &a) in self.triangles.iter().zip(&self.areas) {
            for &v in t {
                for k in 0..3 {
                    c[k] += a * self.vertices[v][k] / 3.0;
                }
            }
        }
        let c = scale(c, 1.0 / self.area());
        match self.manifold.sphere_radius() {
            Some(r) => scale(c, r / norm(c)),
            None => c,
        }
    }

    /// Intrinsic distance from `p` to [`Mesh::center`] (geodesic on the sphere).
    pub fn distance_from_center(&self, p: Point3) -> f64 {
        let c = self.center();
        match self.manifold.sphere_radius() {
            Some(r) => {
                let cosang = (dot(p, c) / (r * r)).clamp(-1.0, 1.0);
                let sinang = norm(cross(p, c)) / (r * r);
                r * sinang.atan2(cosang)
            }
            None => dist(p, c),
        }
    }

    /// Polar angle of `p` around [`Mesh::center`] in a fixed tangent frame.
    pub fn polar_angle(&self, p: Point3) -> f64 {
        let c = self.center();
        let (e1, e2) = tangent_frame(&self.manifold, c);
        let d = sub(p, c);
        dot(d, e2).atan2(dot(d, e1))
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        if self.triangles.is_empty() {
            return Err(Error::Mesh("mesh has no triangles".into()));
        }
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::Mesh(format!("target edge length must be positive, got {}", self.h)));
        }
        let sphere_r = self.manifold.sphere_radius();
        for (i, v) in self.vertices.iter().enumerate() {
            if !v.iter().all(|x| x.is_finite()) {
                return Err(Error::Mesh(format!("vertex {i} has non-finite coordinates")));
            }
            match sphere_r {
                Some(r) => {
                    if (norm(*v) - r).abs() > 1e-9 * r {
                        return Err(Error::Mesh(format!("vertex {i} is not on the sphere")));
                    }
                }
                None => {
                    if v[2] != 0.0 {
                        return Err(Error::Mesh(format!("vertex {i} leaves the planar chart")));
                    }
                }
            }
        }
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for (ti, t) in self.triangles.iter().enumerate() {
            if t.iter().any(|&v| v >= n) {
                return Err(Error::Mesh(format!("triangle {ti} references a missing vertex")));
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(Error::Mesh(format!("triangle {ti} repeats a vertex")));
            }
            if orientation(&self.manifold, self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]])
                <= 0.0
            {
                return Err(Error::Mesh(format!(
                    "triangle {ti} is not counterclockwise or has zero area"
                )));
            }
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                if directed.insert((a, b), ti).is_some() {
                    return Err(Error::Mesh(format!(
                        "directed edge ({a}, {b}) is used twice; triangles are not consistently oriented"
                    )));
                }
            }
        }
        // edges without a twin are exactly the boundary edges
        let mut open: Vec<(usize, usize)> = directed
            .keys()
            .filter(|&&(a, b)| !directed.contains_key(&(b, a)))
            .copied()
            .collect();
        open.sort_unstable();
        let mut chain: Vec<(usize, usize)> = self.boundary.iter().map(|e| (e[0], e[1])).collect();
        if self.boundary.is_empty() {
            return Err(Error::Mesh("boundary not closed: boundary chain is empty".into()));
        }
        for (i, e) in self.boundary.iter().enumerate() {
            if e[0] >= n || e[1] >= n {
                return Err(Error::Mesh(format!("boundary edge {i} references a missing vertex")));
            }
            let next = self.boundary[(i + 1) % self.boundary.len()];
            if e[1] != next[0] {
                return Err(Error::Mesh(format!(
                    "boundary not closed: edge {i} ends at {} but the next edge starts at {}",
                    e[1], next[0]
                )));
            }
        }
        let mut seen = vec![false; n];
        for e in &self.boundary {
            if std::mem::replace(&mut seen[e[0]], true) {
                return Err(Error::Mesh(format!(
                    "boundary not closed: vertex {} is visited twice by the boundary chain",
                    e[0]
                )));
            }
        }
        chain.sort_unstable();
        if chain != open {
            return Err(Error::Mesh(format!(
                "boundary not closed: chain of {} edges does not match the {} unshared triangle edges",
                chain.len(),
                open.len()
            )));
        }
        Ok(())
    }

    /// Parent edge of every vertex that [`Mesh::refine`] appends, in order.
    pub fn refinement_parents(&self) -> Vec<[usize; 2]> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for t in &self.triangles {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                if seen.insert((a.min(b), a.max(b))) {
                    out.push([a, b]);
                }
            }
        }
        out
    }

    /// Splits every triangle into four through its edge midpoints. New
    /// boundary vertices are placed on the exact domain boundary when the
    /// domain is known; sphere vertices are projected back to the sphere.
    pub fn refine(&self) -> Mesh {
        let mut vertices = self.vertices.clone();
        let boundary_edges: std::collections::HashSet<(usize, usize)> =
            self.boundary.iter().map(|e| (e[0], e[1])).collect();
        let mut mids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<Point3>| -> usize {
            let key = (a.min(b), a.max(b));
            if let Some(&m) = mids.get(&key) {
                return m;
            }
            let (pa, pb) = (vertices[a], vertices[b]);
            let on_boundary = boundary_edges.contains(&(a, b)) || boundary_edges.contains(&(b, a));
            let p = match (&self.domain, on_boundary) {
                (Some(d), true) => d.project_boundary_midpoint(&self.manifold, pa, pb),
                _ => surface_midpoint(&self.manifold, pa, pb),
            };
            vertices.push(p);
            let m = vertices.len() - 1;
            mids.insert(key, m);
            m
        };
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for t in &self.triangles {
            let ab = midpoint(t[0], t[1], &mut vertices);
            let bc = midpoint(t[1], t[2], &mut vertices);
            let ca = midpoint(t[2], t[0], &mut vertices);
            triangles.push([t[0], ab, ca]);
            triangles.push([ab, t[1], bc]);
            triangles.push([ca, bc, t[2]]);
            triangles.push([ab, bc, ca]);
        }
        let mut boundary = Vec::with_capacity(2 * self.boundary.len());
        for e in &self.boundary {
            let m = mids[&(e[0].min(e[1]), e[0].max(e[1]))];
            boundary.push([e[0], m]);
            boundary.push([m, e[1]]);
        }
        Mesh::from_parts(
            self.manifold,
            vertices,
            triangles,
            boundary,
            0.5 * self.h,
            self.domain.clone(),
        )
        .expect("midpoint refinement preserves mesh invariants")
    }
}

pub(crate) fn surface_midpoint(m: &Manifold, a: Point3, b: Point3) -> Point3 {
    let mid = lerp(a, b, 0.5);
    match m.sphere_radius() {
        Some(r) => scale(mid, r / norm(mid)),
        None => mid,
    }
}

pub(crate) fn triangle_area(a: Point3, b: Point3, c: Point3) -> f64 {
    0.5 * norm(cross(sub(b, a), sub(c, a)))
}

/// Signed orientation measure: positive for counterclockwise triangles seen
/// from the outward side.
pub(crate) fn orientation(m: &Manifold, a: Point3, b: Point3, c: Point3) -> f64 {
    let n = cross(sub(b, a), sub(c, a));
    match m.kind() {
        ManifoldKind::Sphere => {
            let centroid = [
                (a[0] + b[0] + c[0]) / 3.0,
                (a[1] + b[1] + c[1]) / 3.0,
                (a[2] + b[2] + c[2]) / 3.0,
            ];
            dot(n, centroid) / norm(centroid)
        }
        _ => n[2],
    }
}

pub(crate) fn min_angle(a: Point3, b: Point3, c: Point3) -> f64 {
    let ang = |p: Point3, q: Point3, r: Point3| {
        let u = sub(q, p);
        let v = sub(r, p);
        norm(cross(u, v)).atan2(dot(u, v)).to_degrees()
    };
    ang(a, b, c).min(ang(b, c, a)).min(ang(c, a, b))
}

/// Orthonormal tangent frame at `c`.
pub(crate) fn tangent_frame(m: &Manifold, c: Point3) -> (Point3, Point3) {
    match m.sphere_radius() {
        None => ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]),
        Some(_) => {
            let n = scale(c, 1.0 / norm(c));
            let seed = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
            let e1 = sub(seed, scale(n, dot(seed, n)));
            let e1 = scale(e1, 1.0 / norm(e1));
            let e2 = cross(n, e1);
            (e1, e2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Mesh {
        Mesh::from_parts(
            Manifold::plane(),
            vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]],
            vec![[0, 1, 2], [0, 2, 3]],
            vec![[0, 1], [1, 2], [2, 3], [3, 0]],
            1.0,
            None,
        )
        .unwrap()
    }

    #[test]
    fn square_invariants() {
        let m = unit_square();
        assert_eq!(m.area(), 1.0);
        assert_eq!(m.boundary_length(), 4.0);
        assert!(m.is_boundary_vertex(2));
    }

    #[test]
    fn clockwise_triangle_rejected() {
        let err = Mesh::from_parts(
            Manifold::plane(),
            vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            vec![[0, 2, 1]],
            vec![[0, 2], [2, 1], [1, 0]],
            1.0,
            None,
        )
        .unwrap_err();
        assert!(err.to_string().contains("counterclockwise"));
    }

    #[test]
    fn reversed_boundary_rejected() {
        let err = Mesh::from_parts(
            Manifold::plane(),
            vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            vec![[0, 1, 2]],
            vec![[0, 2], [2, 1], [1, 0]],
            1.0,
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Mesh(_)));
    }

    #[test]
    fn refinement_counts() {
        let m = unit_square();
        let r = m.refine();
        assert_eq!(r.triangles().len(), 8);
        assert_eq!(r.boundary().len(), 8);
        assert_eq!(r.num_vertices(), 9);
        assert_eq!(r.h(), 0.5);
        assert!((r.area() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn boundary_field_rejects_nonpositive() {
        assert!(BoundaryField::new(vec![1.0, 0.0]).is_err());
        assert!(BoundaryField::new(vec![1.0, -1.0]).is_err());
        assert_eq!(BoundaryField::new(vec![2.0]).unwrap().refined().values(), &[2.0, 2.0]);
    }
}
