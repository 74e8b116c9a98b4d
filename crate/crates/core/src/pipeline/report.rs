//! Report assembly and artifact files.
//!
//! `report.json` (schema `symcomp-report v1`):
//!
//! | key           | content                                                        |
//! |---------------|----------------------------------------------------------------|
//! | `schema`      | `"symcomp-report v1"`                                          |
//! | `case`        | name, manifold, domain, source, beta, h, refinements, seed, θ, `beyond_hypotheses` |
//! | `summary`     | finest-level quantities: area, u₀, v₀, extrema, L¹ norms, β̄, R♯ |
//! | `checks`      | entries `{name, relation, lhs, rhs, margin, tolerance, verdict, at?, max_abs?, note?}` |
//! | `convergence` | one row per level: h, mesh size, solver iterations, oracle error, margins |
//! | `verdict`     | `"pass"` or `"violation"`                                      |
//! | `notes`       | caveats attached to the run                                    |

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use super::config::{BetaSpec, ManifoldSpec, RunConfig, SourceSpec};
use super::plot::{line_chart, Series};
use super::run::LevelResult;
use crate::compare::{level_ladder, CheckEntry, Verdict, TOLERANCE_CONSTANT};
use crate::error::{Error, Result};
use crate::mesh::{export_mesh, DomainSpec};
use crate::rearrange::{distribution, distribution_function, schwarz_profile, RearrangedProfile};

pub const REPORT_SCHEMA: &str = "symcomp-report v1";

const RIGIDITY_NOTE: &str = "margins near zero show equality within tolerance only; they do not establish that the domain is isometric to a ball";
const CONE_NOTE: &str = "flat cone: the apex singularity lies outside the smoothness hypotheses of the comparison theorems; results are exploratory";

#[derive(Debug, Clone, Serialize)]
pub struct CaseDescriptor {
    pub name: String,
    pub manifold: ManifoldSpec,
    pub domain: DomainSpec,
    pub source: SourceSpec,
    pub beta: BetaSpec,
    pub h: f64,
    pub refinements: u32,
    pub seed: u64,
    pub theta: f64,
    pub beyond_hypotheses: bool,
    pub tolerance_constant: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub vertices: usize,
    pub triangles: usize,
    pub area: f64,
    pub boundary_length: f64,
    pub radius_sharp: f64,
    pub beta_bar: f64,
    pub u_min: f64,
    pub u_max: f64,
    pub u0: f64,
    pub v0: f64,
    pub v_center: f64,
    pub l1_u: f64,
    pub solver_iterations: usize,
    pub solver_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_linf: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelMargin {
    pub name: String,
    pub margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_abs: Option<f64>,
    pub tolerance: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub level: u32,
    pub h: f64,
    pub vertices: usize,
    pub solver_iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_linf: Option<f64>,
    pub margins: Vec<LevelMargin>,
}

impl ConvergenceRow {
    pub fn from_level(r: &LevelResult) -> Self {
        ConvergenceRow {
            level: r.level,
            h: r.h,
            vertices: r.mesh.num_vertices(),
            solver_iterations: r.solution.iterations,
            oracle_linf: r.oracle_linf,
            margins: r
                .checks
                .iter()
                .map(|c| LevelMargin {
                    name: c.name.clone(),
                    margin: c.margin,
                    max_abs: c.max_abs,
                    tolerance: c.tolerance,
                    verdict: c.verdict,
                })
                .collect(),
        }
    }

    pub fn margin(&self, name: &str) -> Option<f64> {
        self.margins.iter().find(|m| m.name == name).map(|m| m.margin)
    }

    /// Distance from equality: the sampled spread when recorded, else |margin|.
    pub fn deviation(&self, name: &str) -> Option<f64> {
        self.margins
            .iter()
            .find(|m| m.name == name)
            .map(|m| m.max_abs.unwrap_or(m.margin.abs()))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub case: CaseDescriptor,
    pub summary: Summary,
    pub checks: Vec<CheckEntry>,
    pub convergence: Vec<ConvergenceRow>,
    pub verdict: &'static str,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(cfg: &RunConfig, finest: &LevelResult, checks: Vec<CheckEntry>, convergence: Vec<ConvergenceRow>, tol_scale: f64) -> Self {
        let m = finest.mesh.manifold();
        let beyond = m.beyond_hypotheses();
        let mut notes = vec![RIGIDITY_NOTE.to_string()];
        if beyond {
            notes.push(CONE_NOTE.to_string());
        }
        let passed = checks.iter().all(|c| c.verdict.passed());
        Report {
            schema: REPORT_SCHEMA,
            case: CaseDescriptor {
                name: cfg.name.clone(),
                manifold: cfg.manifold,
                domain: cfg.domain.clone(),
                source: cfg.source.clone(),
                beta: cfg.beta.clone(),
                h: cfg.h,
                refinements: finest.level,
                seed: cfg.seed,
                theta: finest.theta,
                beyond_hypotheses: beyond,
                tolerance_constant: TOLERANCE_CONSTANT * tol_scale,
            },
            summary: Summary {
                vertices: finest.mesh.num_vertices(),
                triangles: finest.mesh.triangles().len(),
                area: finest.mesh.area(),
                boundary_length: finest.mesh.boundary_length(),
                radius_sharp: finest.radius_sharp,
                beta_bar: finest.beta_bar,
                u_min: finest.stats.min,
                u_max: finest.stats.max,
                u0: finest.stats.boundary_min,
                v0: finest.v.boundary_value(),
                v_center: finest.v.center_value(),
                l1_u: finest.stats.l1,
                solver_iterations: finest.solution.iterations,
                solver_residual: finest.solution.residual,
                oracle_linf: finest.oracle_linf,
            },
            checks,
            convergence,
            verdict: if passed { "pass" } else { "violation" },
            notes,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }

    pub fn check(&self, name: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        s.push('\n');
        s
    }
}

pub fn checks_csv(checks: &[CheckEntry]) -> String {
    let mut out = String::from("name,relation,lhs,rhs,margin,tolerance,verdict,at\n");
    for c in checks {
        let rel = match c.relation {
            crate::compare::Relation::Le => "le",
            crate::compare::Relation::Eq => "eq",
        };
        let at = c.at.map(|a| a.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{rel},{},{},{},{},{},{at}",
            c.name,
            c.lhs,
            c.rhs,
            c.margin,
            c.tolerance,
            c.verdict.as_str()
        );
    }
    out
}

pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let names: Vec<&str> = rows
        .first()
        .map(|r| r.margins.iter().map(|m| m.name.as_str()).collect())
        .unwrap_or_default();
    let mut out = String::from("level,h,vertices,iterations,oracle_linf");
    for n in &names {
        let _ = write!(out, ",{n}");
    }
    out.push('\n');
    for r in rows {
        let _ = write!(
            out,
            "{},{},{},{},{}",
            r.level,
            r.h,
            r.vertices,
            r.solver_iterations,
            r.oracle_linf.map(|x| x.to_string()).unwrap_or_default()
        );
        for n in &names {
            let _ = write!(out, ",{}", r.margin(n).map(|x| x.to_string()).unwrap_or_default());
        }
        out.push('\n');
    }
    out
}

/// Log-log plot of the oracle error and |margin| of every check against h.
pub fn convergence_svg(name: &str, rows: &[ConvergenceRow]) -> String {
    let mut series = Vec::new();
    if rows.iter().all(|r| r.oracle_linf.is_some()) {
        series.push(Series {
            name: "oracle L∞ error",
            points: rows.iter().map(|r| (r.h, r.oracle_linf.unwrap_or(f64::NAN))).collect(),
            dashed: false,
        });
    }
    if let Some(first) = rows.first() {
        for m in &first.margins {
            series.push(Series {
                name: &m.name,
                points: rows.iter().filter_map(|r| r.deviation(&m.name).map(|x| (r.h, x))).collect(),
                dashed: true,
            });
        }
    }
    line_chart(&format!("{name}: convergence"), "h", "deviation from equality / error", &series, true)
}

fn write(dir: &Path, file: &str, content: &str) -> Result<()> {
    let p = dir.join(file);
    fs::write(&p, content).map_err(|e| Error::io(&p, e))
}

/// Writes mesh, field, distribution, profile, report and plot files.
pub fn write_artifacts(dir: &Path, finest: &LevelResult, report: &Report) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mesh = &finest.mesh;
    let u = &finest.solution.u;
    write(dir, "mesh.txt", &export_mesh(mesh, &finest.beta)?)?;

    let mut s = String::from("vertex,x,y,z,f,u\n");
    for (i, (p, (f, x))) in mesh
        .vertices()
        .iter()
        .zip(finest.f.values().iter().zip(u.values()))
        .enumerate()
    {
        let _ = writeln!(s, "{i},{},{},{},{f},{x}", p[0], p[1], p[2]);
    }
    write(dir, "solution.csv", &s)?;

    let ladder = level_ladder(finest.stats.boundary_min, finest.stats.max);
    let mu_u = distribution_function(u, &ladder)?;
    let mu_v = finest.v.distribution(&ladder)?;
    let mut s = String::from("t,mu_u,theta_mu_v\n");
    for ((t, a), b) in ladder.iter().zip(mu_u.measures()).zip(mu_v.measures()) {
        let _ = writeln!(s, "{t},{a},{}", finest.theta * b);
    }
    write(dir, "distribution.csv", &s)?;

    let rearranged = RearrangedProfile::from_distribution(&distribution(u));
    let mut s = String::from("s,u_star\n");
    for (x, y) in rearranged.s_grid().iter().zip(rearranged.values()) {
        let _ = writeln!(s, "{x},{y}");
    }
    write(dir, "rearrangement.csv", &s)?;

    let u_sharp = schwarz_profile(&rearranged, finest.theta, mesh.manifold())?;
    let v = &finest.v;
    let mut s = String::from("r,u_sharp,v\n");
    for &r in v.r() {
        let _ = writeln!(s, "{r},{},{}", u_sharp.value(r), v.value(r));
    }
    write(dir, "profiles.csv", &s)?;

    write(dir, "report.json", &report.to_json())?;
    write(dir, "checks.csv", &checks_csv(&report.checks))?;

    let name = &report.case.name;
    let mu_plot = line_chart(
        &format!("{name}: distribution functions"),
        "t",
        "measure",
        &[
            Series {
                name: "μ_u",
                points: ladder.iter().copied().zip(mu_u.measures().iter().copied()).collect(),
                dashed: false,
            },
            Series {
                name: "θ μ_v",
                points: ladder.iter().zip(mu_v.measures()).map(|(&t, &m)| (t, finest.theta * m)).collect(),
                dashed: true,
            },
        ],
        false,
    );
    write(dir, "distribution.svg", &mu_plot)?;
    let profile_plot = line_chart(
        &format!("{name}: radial profiles"),
        "r",
        "value",
        &[
            Series {
                name: "u♯",
                points: u_sharp.r().iter().copied().zip(u_sharp.values().iter().copied()).collect(),
                dashed: false,
            },
            Series {
                name: "v",
                points: v.r().iter().copied().zip(v.values().iter().copied()).collect(),
                dashed: true,
            },
        ],
        false,
    );
    write(dir, "profiles.svg", &profile_plot)?;
    if report.convergence.len() >= 2 {
        write(dir, "convergence.csv", &convergence_csv(&report.convergence))?;
        write(dir, "convergence.svg", &convergence_svg(name, &report.convergence))?;
    }
    Ok(())
}
