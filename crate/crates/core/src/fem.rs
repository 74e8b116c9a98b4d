//! P1 finite elements for `-Δu = f` in Ω with `∂u/∂ν + βu = 0` on ∂Ω.

use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mesh::{BoundaryField, Mesh};

/// Nodal (piecewise-linear) field on a mesh.
#[derive(Debug, Clone)]
pub struct ScalarField {
    mesh: Arc<Mesh>,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(mesh: Arc<Mesh>, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.num_vertices() {
            return Err(Error::InvalidInput(format!(
                "field has {} values but the mesh has {} vertices",
                values.len(),
                mesh.num_vertices()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("field value at vertex {i} is not finite")));
        }
        Ok(ScalarField { mesh, values })
    }

    pub fn constant(mesh: Arc<Mesh>, c: f64) -> Result<Self> {
        let n = mesh.num_vertices();
        Self::new(mesh, vec![c; n])
    }

    /// Interpolates `f` at the vertices.
    pub fn from_fn<F: Fn([f64; 3]) -> f64>(mesh: Arc<Mesh>, f: F) -> Result<Self> {
        let values = mesh.vertices().iter().map(|&p| f(p)).collect();
        Self::new(mesh, values)
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Exact integral of the interpolant.
    pub fn integral(&self) -> f64 {
        self.mesh
            .triangles()
            .iter()
            .zip(self.mesh.triangle_areas())
            .map(|(t, &a)| a * (self.values[t[0]] + self.values[t[1]] + self.values[t[2]]) / 3.0)
            .sum()
    }

    /// Errors unless both fields live on the same mesh instance.
    pub fn check_same_mesh(&self, other: &ScalarField) -> Result<()> {
        if Arc::ptr_eq(&self.mesh, &other.mesh) {
            Ok(())
        } else {
            Err(Error::InvalidInput("fields live on different meshes".into()))
        }
    }
}

/// Symmetric sparse system `A u = b` in compressed-row form.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    rhs: Vec<f64>,
}

impl LinearSystem {
    pub fn dim(&self) -> usize {
        self.rhs.len()
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Entry `A[i][j]` (zero outside the sparsity pattern).
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let row = &self.cols[self.row_ptr[i]..self.row_ptr[i + 1]];
        match row.binary_search(&j) {
            Ok(k) => self.vals[self.row_ptr[i] + k],
            Err(_) => 0.0,
        }
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.vals[k] * x[self.cols[k]];
            }
            *yi = s;
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.get(i, i)).collect()
    }

    /// Whether `A` equals its transpose exactly.
    pub fn is_symmetric(&self) -> bool {
        (0..self.dim()).all(|i| {
            (self.row_ptr[i]..self.row_ptr[i + 1]).all(|k| self.get(self.cols[k], i) == self.vals[k])
        })
    }

    /// `‖A·1‖∞ / max|A_ij|`; zero (up to rounding) when constants lie in the
    /// kernel, as happens without a Robin term.
    pub fn constant_mode_residual(&self) -> f64 {
        let ones = vec![1.0; self.dim()];
        let mut y = vec![0.0; self.dim()];
        self.apply(&ones, &mut y);
        let scale = self.vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        y.iter().fold(0.0f64, |m, v| m.max(v.abs())) / scale
    }

    /// Energy `uᵀAu`.
    pub fn energy(&self, u: &[f64]) -> f64 {
        let mut y = vec![0.0; self.dim()];
        self.apply(u, &mut y);
        dot(u, &y)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn thread_pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = std::env::var("SYMCOMP_THREADS")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
        {
            builder = builder.num_threads(n);
        }
        builder.build().expect("failed to build assembly thread pool")
    })
}

type ElementMatrix = ([usize; 3], [[f64; 3]; 3], [f64; 3]);

fn element(mesh: &Mesh, f: &[f64], ti: usize) -> ElementMatrix {
    let t = mesh.triangles()[ti];
    let area = mesh.triangle_areas()[ti];
    let p = t.map(|v| mesh.vertices()[v]);
    // edge opposite each vertex, in counterclockwise order
    let e = [sub(p[2], p[1]), sub(p[0], p[2]), sub(p[1], p[0])];
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = dot(&e[i], &e[j]) / (4.0 * area);
        }
    }
    let fs = f[t[0]] + f[t[1]] + f[t[2]];
    let load = t.map(|v| area / 12.0 * (f[v] + fs));
    (t, k, load)
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Stiffness plus Robin boundary mass, and the P1 load vector of `f`.
pub fn assemble(mesh: &Mesh, f: &ScalarField, beta: &BoundaryField) -> Result<LinearSystem> {
    beta.check_against(mesh)?;
    assemble_inner(mesh, f, Some(beta))
}

/// Assembly without the boundary term (pure Neumann operator). The matrix is
/// singular with the constants as null vector.
pub fn assemble_neumann(mesh: &Mesh, f: &ScalarField) -> Result<LinearSystem> {
    assemble_inner(mesh, f, None)
}

fn assemble_inner(mesh: &Mesh, f: &ScalarField, beta: Option<&BoundaryField>) -> Result<LinearSystem> {
    if f.values().len() != mesh.num_vertices() {
        return Err(Error::InvalidInput("source field does not live on this mesh".into()));
    }
    let total = mesh.area();
    let threshold = 1e-14 * total;
    if let Some((index, &area)) = mesh.triangle_areas().iter().enumerate().find(|(_, &a)| a < threshold) {
        return Err(Error::DegenerateTriangle { index, area, threshold });
    }
    let fv = f.values();
    // element matrices in parallel, reduction in element order below
    let elements: Vec<ElementMatrix> = thread_pool().install(|| {
        (0..mesh.triangles().len())
            .into_par_iter()
            .map(|ti| element(mesh, fv, ti))
            .collect()
    });

    let n = mesh.num_vertices();
    let mut triplets: Vec<(usize, usize, f64)> = Vec::with_capacity(9 * elements.len() + 4 * mesh.boundary().len());
    let mut rhs = vec![0.0; n];
    for (t, k, load) in &elements {
        for i in 0..3 {
            rhs[t[i]] += load[i];
            for j in 0..3 {
                triplets.push((t[i], t[j], k[i][j]));
            }
        }
    }
    if let Some(beta) = beta {
        for (ei, (&[a, b], &bv)) in mesh.boundary().iter().zip(beta.values()).enumerate() {
            let m = bv * mesh.boundary_edge_length(ei) / 6.0;
            triplets.push((a, a, 2.0 * m));
            triplets.push((a, b, m));
            triplets.push((b, a, m));
            triplets.push((b, b, 2.0 * m));
        }
    }
    // stable sort keeps the per-entry summation order fixed
    triplets.sort_by_key(|&(i, j, _)| (i, j));
    let mut row_ptr = vec![0usize; n + 1];
    let mut cols = Vec::new();
    let mut vals: Vec<f64> = Vec::new();
    let mut last: Option<(usize, usize)> = None;
    for (i, j, v) in triplets {
        if last == Some((i, j)) {
            *vals.last_mut().expect("entry exists") += v;
        } else {
            cols.push(j);
            vals.push(v);
            row_ptr[i + 1] += 1;
            last = Some((i, j));
        }
    }
    for i in 0..n {
        row_ptr[i + 1] += row_ptr[i];
    }
    Ok(LinearSystem { row_ptr, cols, vals, rhs })
}

/// Outcome of a Poisson solve.
#[derive(Debug, Clone)]
pub struct PoissonSolution {
    pub u: ScalarField,
    pub iterations: usize,
    /// Relative algebraic residual `‖Au − b‖/‖b‖` of the returned field.
    pub residual: f64,
    /// Number of vertices where `u <= 0` (expected to be zero).
    pub positivity_violations: usize,
}

pub const SOLVER_TOLERANCE: f64 = 1e-10;

/// Solves the Robin problem with Jacobi-preconditioned conjugate gradients.
pub fn solve_poisson_robin(mesh: &Arc<Mesh>, f: &ScalarField, beta: &BoundaryField) -> Result<PoissonSolution> {
    if let Some(i) = f.values().iter().position(|&v| v < 0.0) {
        return Err(Error::InvalidInput(format!(
            "source must be nonnegative; vertex {i} has {}",
            f.values()[i]
        )));
    }
    if f.values().iter().all(|&v| v == 0.0) {
        return Err(Error::InvalidInput("source is identically zero".into()));
    }
    let sys = assemble(mesh, f, beta)?;
    let (u, iterations) = pcg(&sys, SOLVER_TOLERANCE)?;
    let residual = residual_norm(&sys, &u);
    let positivity_violations = u.iter().filter(|&&v| v <= 0.0).count();
    if positivity_violations > 0 {
        log::warn!("solution is nonpositive at {positivity_violations} vertices");
    }
    Ok(PoissonSolution {
        u: ScalarField::new(mesh.clone(), u)?,
        iterations,
        residual,
        positivity_violations,
    })
}

fn residual_norm(sys: &LinearSystem, u: &[f64]) -> f64 {
    let mut au = vec![0.0; sys.dim()];
    sys.apply(u, &mut au);
    let r: f64 = au.iter().zip(sys.rhs()).map(|(a, b)| (a - b).powi(2)).sum();
    let b: f64 = sys.rhs().iter().map(|b| b * b).sum();
    if b == 0.0 {
        return if r == 0.0 { 0.0 } else { f64::INFINITY };
    }
    (r / b).sqrt()
}

fn pcg(sys: &LinearSystem, tol: f64) -> Result<(Vec<f64>, usize)> {
    let n = sys.dim();
    let cap = ((50.0 * (n as f64).sqrt()).ceil() as usize).max(100);
    let inv_diag: Vec<f64> = sys.diagonal().iter().map(|d| 1.0 / d).collect();
    let b_norm = dot(sys.rhs(), sys.rhs()).sqrt();
    let mut x = vec![0.0; n];
    if b_norm == 0.0 {
        return Ok((x, 0));
    }
    let mut r = sys.rhs().to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(a, b)| a * b).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    for it in 1..=cap {
        sys.apply(&p, &mut ap);
        let alpha = rz / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if dot(&r, &r).sqrt() <= 0.5 * tol * b_norm {
            // confirm against the true residual before stopping
            sys.apply(&x, &mut ap);
            for i in 0..n {
                r[i] = sys.rhs()[i] - ap[i];
            }
            if dot(&r, &r).sqrt() <= tol * b_norm {
                return Ok((x, it));
            }
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::NoConvergence {
        iterations: cap,
        residual: residual_norm(sys, &x),
    })
}

/// Summary statistics of a nodal field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldStats {
    pub min: f64,
    pub max: f64,
    /// Minimum over boundary vertices (`u₀` for a Poisson solution).
    pub boundary_min: f64,
    pub l1: f64,
    pub l2: f64,
}

pub fn field_stats(u: &ScalarField) -> FieldStats {
    let mesh = u.mesh();
    let v = u.values();
    let boundary_min = mesh
        .boundary()
        .iter()
        .map(|e| v[e[0]])
        .fold(f64::INFINITY, f64::min);
    let mut l1 = 0.0;
    let mut l2sq = 0.0;
    for (t, &a) in mesh.triangles().iter().zip(mesh.triangle_areas()) {
        let w = t.map(|i| v[i]);
        l1 += abs_integral(w, a);
        let s = w[0] + w[1] + w[2];
        l2sq += a / 12.0 * (w[0] * w[0] + w[1] * w[1] + w[2] * w[2] + s * s);
    }
    FieldStats {
        min: u.min(),
        max: u.max(),
        boundary_min,
        l1,
        l2: l2sq.sqrt(),
    }
}

/// Exact `∫_T |u|` for a linear `u` with vertex values `w` on a triangle of area `area`.
fn abs_integral(w: [f64; 3], area: f64) -> f64 {
    let mean = (w[0] + w[1] + w[2]) / 3.0;
    if w.iter().all(|&x| x >= 0.0) {
        return area * mean;
    }
    if w.iter().all(|&x| x <= 0.0) {
        return -area * mean;
    }
    2.0 * positive_part_integral(w, area) - area * mean
}

/// Exact `∫_T max(u, 0)`.
fn positive_part_integral(mut w: [f64; 3], area: f64) -> f64 {
    w.sort_by(f64::total_cmp);
    let [a, b, c] = w;
    // ∫_0^c μ(t) dt with the per-triangle distribution function
    let mut total = 0.0;
    if b > 0.0 {
        let lo = a.max(0.0);
        // ∫_lo^b A (1 - (t-a)²/((b-a)(c-a))) dt
        let cube = |t: f64| (t - a).powi(3) / (3.0 * (b - a) * (c - a));
        total += area * ((b - lo) - (cube(b) - cube(lo)));
    }
    let lo = b.max(0.0);
    // ∫_lo^c A (c-t)²/((c-a)(c-b)) dt
    total += area * (c - lo).powi(3) / (3.0 * (c - a) * (c - b));
    total
}

/// Relative residual `‖Au − b‖₂/‖b‖₂`.
pub fn residual_check(sys: &LinearSystem, u: &ScalarField) -> Result<f64> {
    if u.values().len() != sys.dim() {
        return Err(Error::InvalidInput(format!(
            "field has {} values but the system has dimension {}",
            u.values().len(),
            sys.dim()
        )));
    }
    Ok(residual_norm(sys, u.values()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Manifold;
    use crate::mesh::{build_mesh, DomainSpec};

    fn square() -> Arc<Mesh> {
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
    fn single_triangle_rows_sum_to_zero() {
        let mesh = Mesh::from_parts(
            Manifold::plane(),
            vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            vec![[0, 1, 2]],
            vec![[0, 1], [1, 2], [2, 0]],
            1.0,
            None,
        )
        .unwrap();
        let mesh = Arc::new(mesh);
        let f = ScalarField::constant(mesh.clone(), 0.0).unwrap();
        let sys = assemble_neumann(&mesh, &f).unwrap();
        assert_eq!(sys.get(0, 0), 1.0);
        assert_eq!(sys.get(1, 1), 0.5);
        assert_eq!(sys.get(0, 1), -0.5);
        for i in 0..3 {
            let s: f64 = (0..3).map(|j| sys.get(i, j)).sum();
            assert!(s.abs() < 1e-15);
        }
        assert!(sys.constant_mode_residual() < 1e-15);
    }

    #[test]
    fn partition_of_unity_load() {
        let mesh = square();
        let f = ScalarField::constant(mesh.clone(), 1.0).unwrap();
        let beta = BoundaryField::constant(&mesh, 1.0).unwrap();
        let sys = assemble(&mesh, &f, &beta).unwrap();
        assert!((sys.rhs().iter().sum::<f64>() - 1.0).abs() <= 4.0 * f64::EPSILON);
        assert!(sys.is_symmetric());
        assert!(sys.constant_mode_residual() > 0.1);
    }

    #[test]
    fn rejects_bad_sources() {
        let mesh = square();
        let beta = BoundaryField::constant(&mesh, 1.0).unwrap();
        let zero = ScalarField::constant(mesh.clone(), 0.0).unwrap();
        assert!(solve_poisson_robin(&mesh, &zero, &beta).is_err());
        let neg = ScalarField::new(mesh.clone(), vec![1.0, -1.0, 1.0, 1.0]).unwrap();
        assert!(solve_poisson_robin(&mesh, &neg, &beta).is_err());
    }

    #[test]
    fn residual_of_zero_is_one() {
        let mesh = square();
        let f = ScalarField::constant(mesh.clone(), 1.0).unwrap();
        let beta = BoundaryField::constant(&mesh, 1.0).unwrap();
        let sys = assemble(&mesh, &f, &beta).unwrap();
        let zero = ScalarField::constant(mesh.clone(), 0.0).unwrap();
        assert_eq!(residual_check(&sys, &zero).unwrap(), 1.0);
    }

    #[test]
    fn abs_integral_matches_sampling() {
        let w = [-1.0, 0.5, 2.0];
        // right triangle (0,0),(1,0),(0,1), barycentric sampling
        let m = 400;
        let mut s = 0.0;
        for i in 0..m {
            for j in 0..(m - i) {
                let (x, y) = ((i as f64 + 1.0 / 3.0) / m as f64, (j as f64 + 1.0 / 3.0) / m as f64);
                let u = w[0] * (1.0 - x - y) + w[1] * x + w[2] * y;
                s += u.abs();
                if i + j + 1 < m {
                    let (x, y) = ((i as f64 + 2.0 / 3.0) / m as f64, (j as f64 + 2.0 / 3.0) / m as f64);
                    let u = w[0] * (1.0 - x - y) + w[1] * x + w[2] * y;
                    s += u.abs();
                }
            }
        }
        let sampled = s * 0.5 / (m * m) as f64;
        assert!((abs_integral(w, 0.5) - sampled).abs() < 1e-4);
    }

    #[test]
    fn disk_center_and_boundary() {
        let mesh = Arc::new(build_mesh(&DomainSpec::Disk { radius: 1.0 }, &Manifold::plane(), 0.05).unwrap());
        let f = ScalarField::constant(mesh.clone(), 1.0).unwrap();
        let beta = BoundaryField::constant(&mesh, 1.0).unwrap();
        let sol = solve_poisson_robin(&mesh, &f, &beta).unwrap();
        assert!(sol.residual <= SOLVER_TOLERANCE);
        assert_eq!(sol.positivity_violations, 0);
        let stats = field_stats(&sol.u);
        assert!((stats.max - 0.75).abs() < 0.0075);
        assert!((stats.boundary_min - 0.5).abs() < 0.005);
        assert_eq!(stats.min, stats.boundary_min);
        let l1 = 5.0 * std::f64::consts::PI / 8.0;
        assert!((stats.l1 - l1).abs() / l1 < 0.01);
    }
}
