//! Mesh → solve → symmetrize → radial solve → checks, over a refinement sequence.

use std::path::Path;
use std::sync::Arc;

use log::{info, warn};

use super::config::{BetaSpec, RunConfig, SourceSpec};
use super::expr::Expr;
use crate::compare::{run_checks, CheckEntry, CheckInputs, Tolerance, Verdict};
use crate::error::{Error, Result};
use crate::fem::{field_stats, solve_poisson_robin, FieldStats, PoissonSolution, ScalarField};
use crate::geometry::{inverse_ball_area, theta_of, Manifold};
use crate::mesh::{build_mesh, BoundaryField, DomainSpec, Mesh};
use crate::radial::{beta_bar, constant_profile, solve_radial, RadialProfile};
use crate::rearrange::{distribution, schwarz_profile, RearrangedProfile};

/// Everything computed on one mesh of the refinement sequence.
#[derive(Debug, Clone)]
pub struct LevelResult {
    pub level: u32,
    pub h: f64,
    pub mesh: Arc<Mesh>,
    pub f: ScalarField,
    pub beta: BoundaryField,
    pub solution: PoissonSolution,
    pub stats: FieldStats,
    pub v: RadialProfile,
    pub theta: f64,
    pub radius_sharp: f64,
    pub beta_bar: f64,
    pub checks: Vec<CheckEntry>,
    /// Max nodal error against the radial oracle, for centered geodesic balls
    /// with constant data.
    pub oracle_linf: Option<f64>,
}

fn read_numbers(cfg: &RunConfig, path: &Path, key: &str, expected: usize, what: &str) -> Result<Vec<f64>> {
    let full = cfg.resolve(path);
    let text = std::fs::read_to_string(&full).map_err(|e| Error::io(&full, e))?;
    let mut out = Vec::with_capacity(expected);
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v = line.parse::<f64>().map_err(|_| Error::Parse {
            line: i + 1,
            record: format!("{what} {}", out.len()),
            message: format!("cannot parse `{line}`"),
        })?;
        out.push(v);
    }
    if out.len() != expected {
        return Err(Error::config(
            key,
            format!("{} holds {} values but the mesh has {expected} {what}s", full.display(), out.len()),
        ));
    }
    Ok(out)
}

/// Nodal source on the unrefined mesh.
fn base_source(cfg: &RunConfig, mesh: &Arc<Mesh>) -> Result<ScalarField> {
    let f = match &cfg.source {
        SourceSpec::Constant { value } => ScalarField::constant(mesh.clone(), *value)?,
        SourceSpec::Expression { expr } => source_from_expr(&Expr::parse(expr)?, mesh)?,
        SourceSpec::NodalFile { path } => {
            let values = read_numbers(cfg, path, "source.path", mesh.num_vertices(), "vertex")?;
            ScalarField::new(mesh.clone(), values)?
        }
    };
    check_source(&f)?;
    Ok(f)
}

fn source_from_expr(expr: &Expr, mesh: &Arc<Mesh>) -> Result<ScalarField> {
    ScalarField::from_fn(mesh.clone(), |p| expr.eval([p[0], p[1], p[2], mesh.distance_from_center(p)]))
}

fn check_source(f: &ScalarField) -> Result<()> {
    if let Some((i, v)) = f.values().iter().enumerate().find(|(_, v)| !(**v >= 0.0 && v.is_finite())) {
        return Err(Error::config("source", format!("source must be finite and nonnegative; vertex {i} has {v}")));
    }
    if f.max() <= 0.0 {
        return Err(Error::config("source", "source vanishes identically"));
    }
    Ok(())
}

fn base_beta(cfg: &RunConfig, mesh: &Mesh) -> Result<BoundaryField> {
    match &cfg.beta {
        BetaSpec::EdgeFile { path } => {
            let values = read_numbers(cfg, path, "beta.path", mesh.boundary().len(), "boundary edge")?;
            if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
                return Err(Error::config("beta.path", format!("edge {i} has non-positive coefficient {v}")));
            }
            BoundaryField::new(values)
        }
        spec => {
            let vs = mesh.vertices();
            let values = mesh
                .boundary()
                .iter()
                .map(|e| {
                    let mid = [0, 1, 2].map(|k| 0.5 * (vs[e[0]][k] + vs[e[1]][k]));
                    spec.at_angle(mesh.polar_angle(mid)).expect("analytic β spec")
                })
                .collect();
            BoundaryField::new(values)
        }
    }
}

/// Linear interpolation of nodal values onto [`Mesh::refine`].
fn prolongate(f: &ScalarField, fine: &Arc<Mesh>) -> Result<ScalarField> {
    let mut values = f.values().to_vec();
    for [a, b] in f.mesh().refinement_parents() {
        values.push(0.5 * (values[a] + values[b]));
    }
    ScalarField::new(fine.clone(), values)
}

fn source_profile(f: &ScalarField, theta: f64, m: &Manifold, r0: f64) -> Result<RadialProfile> {
    if f.max() == f.min() {
        return constant_profile(m, r0, f.max());
    }
    schwarz_profile(&RearrangedProfile::from_distribution(&distribution(f)), theta, m)
}

/// Radial oracle when Ω is a geodesic ball about its center with constant data.
fn oracle_error(mesh: &Mesh, f: &ScalarField, beta: &BoundaryField, u: &ScalarField) -> Result<Option<f64>> {
    let radius = match mesh.domain() {
        Some(DomainSpec::Disk { radius }) | Some(DomainSpec::SphericalCap { radius }) => *radius,
        _ => return Ok(None),
    };
    let b = beta.values()[0];
    if f.max() != f.min() || beta.values().iter().any(|&x| x != b) {
        return Ok(None);
    }
    let m = mesh.manifold();
    let exact = solve_radial(&constant_profile(m, radius, f.max())?, m, 2, radius, b)?;
    let err = mesh
        .vertices()
        .iter()
        .zip(u.values())
        .map(|(&p, &x)| (x - exact.value(mesh.distance_from_center(p).min(radius))).abs())
        .fold(0.0, f64::max);
    Ok(Some(err))
}

/// Solves and checks one level.
pub fn analyze_level(
    cfg: &RunConfig,
    level: u32,
    mesh: Arc<Mesh>,
    f: ScalarField,
    beta: BoundaryField,
    tol_scale: f64,
) -> Result<LevelResult> {
    let m = *mesh.manifold();
    let h = cfg.h / f64::from(1u32 << level);
    info!("{}: level {level}, h = {h}, {} vertices", cfg.name, mesh.num_vertices());
    let solution = solve_poisson_robin(&mesh, &f, &beta)
        .map_err(|e| Error::InvalidInput(format!("{} level {level}: solve failed: {e}", cfg.name)))?;
    if solution.positivity_violations > 0 {
        warn!("{} level {level}: {} vertices with u <= 0", cfg.name, solution.positivity_violations);
    }
    let u = &solution.u;
    let stats = field_stats(u);
    let theta = theta_of(&m);
    let radius_sharp = inverse_ball_area(m.kappa(), 2, mesh.area() / theta)?;
    let bb = beta_bar(&beta, &mesh, &m)?;
    let hp = source_profile(&f, theta, &m, radius_sharp)?;
    let v = solve_radial(&hp, &m, 2, radius_sharp, bb)?;
    let inputs = CheckInputs {
        u,
        f: &f,
        beta: &beta,
        v: &v,
        manifold: &m,
        tolerance: Tolerance::new(h, tol_scale),
    };
    let checks = run_checks(&inputs, &cfg.check_names())?;
    let oracle_linf = oracle_error(&mesh, &f, &beta, u)?;
    Ok(LevelResult {
        level,
        h,
        mesh,
        f,
        beta,
        stats,
        solution,
        v,
        theta,
        radius_sharp,
        beta_bar: bb,
        checks,
        oracle_linf,
    })
}

/// Runs levels `0..=levels`; `keep` receives every level in order and may
/// retain what it needs (only the previous mesh is held internally).
pub fn run_levels(cfg: &RunConfig, levels: u32, tol_scale: f64, mut keep: impl FnMut(LevelResult)) -> Result<()> {
    if !(tol_scale > 0.0 && tol_scale.is_finite()) {
        return Err(Error::InvalidInput(format!("tolerance scale must be positive, got {tol_scale}")));
    }
    let m = cfg.manifold.build()?;
    let mesh = Arc::new(build_mesh(&cfg.domain, &m, cfg.h)?);
    let mut f = base_source(cfg, &mesh)?;
    let mut beta = base_beta(cfg, &mesh)?;
    let mut mesh = mesh;
    for level in 0..=levels {
        if level > 0 {
            let fine = Arc::new(mesh.refine());
            f = match &cfg.source {
                SourceSpec::Constant { value } => ScalarField::constant(fine.clone(), *value)?,
                SourceSpec::Expression { expr } => source_from_expr(&Expr::parse(expr)?, &fine)?,
                SourceSpec::NodalFile { .. } => prolongate(&f, &fine)?,
            };
            beta = beta.refined();
            mesh = fine;
        }
        let result = analyze_level(cfg, level, mesh.clone(), f.clone(), beta.clone(), tol_scale)?;
        keep(result);
    }
    Ok(())
}

/// Final verdicts: a violation at the finest level counts only when the
/// previous level also violates the same check.
pub fn confirm_verdicts(finest: &[CheckEntry], previous: Option<&[CheckEntry]>) -> Vec<CheckEntry> {
    finest
        .iter()
        .map(|e| {
            let mut e = e.clone();
            if e.verdict == Verdict::Violated {
                if let Some(prev) = previous {
                    let prev_violated = prev.iter().any(|p| p.name == e.name && p.verdict == Verdict::Violated);
                    if !prev_violated {
                        e.verdict = Verdict::HoldsWithinTolerance;
                        e.note = Some("below -tol at the finest level only; not confirmed by the previous level".into());
                    }
                }
            }
            e
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prolongation_is_linear_exact() {
        let m = Manifold::plane();
        let mesh = Arc::new(build_mesh(&DomainSpec::Disk { radius: 1.0 }, &m, 0.3).unwrap());
        let f = ScalarField::from_fn(mesh.clone(), |p| 2.0 + p[0] - 0.5 * p[1]).unwrap();
        let fine = Arc::new(mesh.refine());
        let g = prolongate(&f, &fine).unwrap();
        for (p, v) in fine.vertices().iter().zip(g.values()) {
            // boundary midpoints move onto the circle, interior ones do not
            let exact = 2.0 + p[0] - 0.5 * p[1];
            assert!((v - exact).abs() < 0.05, "{v} vs {exact}");
        }
        assert_eq!(g.values().len(), fine.num_vertices());
    }

    #[test]
    fn unconfirmed_violation_is_downgraded() {
        let bad = CheckEntry::inequality("l1", 2.0, 1.0, 0.1, None);
        let ok = CheckEntry::inequality("l1", 1.0, 1.0, 0.1, None);
        let out = confirm_verdicts(&[bad.clone()], Some(&[ok]));
        assert_eq!(out[0].verdict, Verdict::HoldsWithinTolerance);
        assert!(out[0].note.is_some());
        let out = confirm_verdicts(&[bad.clone()], Some(&[bad.clone()]));
        assert_eq!(out[0].verdict, Verdict::Violated);
        assert_eq!(confirm_verdicts(&[bad.clone()], None)[0].verdict, Verdict::Violated);
    }
}
