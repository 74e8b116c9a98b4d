//! Configuration-driven pipeline behind the `symcomp` binary.

pub mod config;
pub mod expr;
pub mod plot;
pub mod report;
pub mod run;
pub mod selftest;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

pub use config::{ArcSpec, BetaSpec, ManifoldSpec, RunConfig, SourceSpec};
pub use report::{ConvergenceRow, Report, REPORT_SCHEMA};
pub use run::LevelResult;
pub use selftest::{selftest, SelftestOutcome};

use crate::compare::CheckEntry;
use crate::error::{Error, Result};

/// Configurations shipped with the crate.
pub const BUNDLED: [(&str, &str); 10] = [
    ("disk_equality", include_str!("../../configs/disk_equality.json")),
    ("square_robin", include_str!("../../configs/square_robin.json")),
    ("square_two_arc", include_str!("../../configs/square_two_arc.json")),
    ("ellipse_robin", include_str!("../../configs/ellipse_robin.json")),
    ("ellipse_two_arc", include_str!("../../configs/ellipse_two_arc.json")),
    ("lshape_robin", include_str!("../../configs/lshape_robin.json")),
    ("lshape_two_arc", include_str!("../../configs/lshape_two_arc.json")),
    ("sphere_cap", include_str!("../../configs/sphere_cap.json")),
    ("cone_disk", include_str!("../../configs/cone_disk.json")),
    ("square_variable_source", include_str!("../../configs/square_variable_source.json")),
];

pub fn bundled(name: &str) -> Result<RunConfig> {
    let (_, text) = BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::InvalidInput(format!("no bundled config named `{name}`")))?;
    RunConfig::from_json(text)
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Output directory; overrides the config. `None` with `write = true`
    /// falls back to the config's `output`, then `out/<name>`.
    pub out: Option<PathBuf>,
    pub tol_scale: f64,
    pub write: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            out: None,
            tol_scale: 1.0,
            write: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: Report,
    pub out_dir: Option<PathBuf>,
    /// Finest level, kept for callers that inspect fields directly.
    pub finest: LevelResult,
}

fn output_dir(cfg: &RunConfig, opts: &RunOptions) -> PathBuf {
    opts.out
        .clone()
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| Path::new("out").join(&cfg.name))
}

/// Runs the configured refinement sequence and writes artifacts.
pub fn run(cfg: &RunConfig, opts: &RunOptions) -> Result<RunOutcome> {
    let mut rows = Vec::new();
    let mut previous: Option<Vec<CheckEntry>> = None;
    let mut finest: Option<LevelResult> = None;
    run::run_levels(cfg, cfg.refinements, opts.tol_scale, |r| {
        rows.push(ConvergenceRow::from_level(&r));
        if let Some(f) = finest.take() {
            previous = Some(f.checks);
        }
        finest = Some(r);
    })?;
    let finest = finest.expect("at least one level runs");
    let checks = run::confirm_verdicts(&finest.checks, previous.as_deref());
    let report = Report::new(cfg, &finest, checks, rows, opts.tol_scale);
    let out_dir = if opts.write {
        let dir = output_dir(cfg, opts);
        report::write_artifacts(&dir, &finest, &report)?;
        Some(dir)
    } else {
        None
    };
    Ok(RunOutcome { report, out_dir, finest })
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderRow {
    pub quantity: String,
    /// `log2(e_k / e_{k+1})` between consecutive levels, where `e` is the
    /// oracle error or a check's deviation from equality.
    pub orders: Vec<Option<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTable {
    pub name: String,
    pub rows: Vec<ConvergenceRow>,
    pub orders: Vec<OrderRow>,
}

fn orders_of(values: &[f64]) -> Vec<Option<f64>> {
    values
        .windows(2)
        .map(|w| {
            let r = (w[0] / w[1]).log2();
            r.is_finite().then_some(r)
        })
        .collect()
}

impl ConvergenceTable {
    pub fn order(&self, quantity: &str) -> Option<&[Option<f64>]> {
        self.orders.iter().find(|o| o.quantity == quantity).map(|o| o.orders.as_slice())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}: {} levels", self.name, self.rows.len());
        let _ = writeln!(out, "{:>5} {:>12} {:>9} {:>6} {:>12}", "level", "h", "vertices", "iters", "oracle_linf");
        for r in &self.rows {
            let oracle = r.oracle_linf.map_or("-".to_string(), |x| format!("{x:.3e}"));
            let _ = writeln!(
                out,
                "{:>5} {:>12.5e} {:>9} {:>6} {:>12}",
                r.level, r.h, r.vertices, r.solver_iterations, oracle
            );
        }
        let _ = writeln!(out, "empirical orders (log2 ratios between consecutive levels):");
        for o in &self.orders {
            let vals: Vec<String> = o
                .orders
                .iter()
                .map(|x| x.map_or("-".to_string(), |v| format!("{v:.2}")))
                .collect();
            let _ = writeln!(out, "  {:<24} {}", o.quantity, vals.join("  "));
        }
        out
    }
}

/// Refinement study with `levels` refinements (at least 2).
pub fn convergence(cfg: &RunConfig, levels: u32, tol_scale: f64, out: Option<&Path>) -> Result<ConvergenceTable> {
    if levels < 2 {
        return Err(Error::InvalidInput(format!(
            "a convergence study needs at least 2 refinements, got {levels}"
        )));
    }
    if levels > config::MAX_REFINEMENTS {
        return Err(Error::InvalidInput(format!(
            "at most {} refinements are supported, got {levels}",
            config::MAX_REFINEMENTS
        )));
    }
    let mut rows = Vec::new();
    run::run_levels(cfg, levels, tol_scale, |r| rows.push(ConvergenceRow::from_level(&r)))?;
    let mut orders = Vec::new();
    if rows.iter().all(|r| r.oracle_linf.is_some()) {
        let e: Vec<f64> = rows.iter().filter_map(|r| r.oracle_linf).collect();
        orders.push(OrderRow {
            quantity: "oracle_linf".into(),
            orders: orders_of(&e),
        });
    }
    for m in &rows[0].margins {
        let e: Vec<f64> = rows.iter().filter_map(|r| r.deviation(&m.name)).collect();
        if e.len() == rows.len() {
            orders.push(OrderRow {
                quantity: m.name.clone(),
                orders: orders_of(&e),
            });
        }
    }
    let table = ConvergenceTable {
        name: cfg.name.clone(),
        rows,
        orders,
    };
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let write = |file: &str, content: String| {
            let p = dir.join(file);
            fs::write(&p, content).map_err(|e| Error::io(&p, e))
        };
        write("convergence.csv", report::convergence_csv(&table.rows))?;
        write("convergence.svg", report::convergence_svg(&cfg.name, &table.rows))?;
        write(
            "convergence.json",
            serde_json::to_string_pretty(&table).expect("table serialization cannot fail") + "\n",
        )?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_configs_parse() {
        for (name, _) in BUNDLED {
            let cfg = bundled(name).unwrap();
            assert_eq!(cfg.name, name);
        }
    }

    #[test]
    fn orders_from_ratios() {
        let o = orders_of(&[1.0, 0.25, 0.0625, 0.0]);
        assert_eq!(o[0], Some(2.0));
        assert_eq!(o[1], Some(2.0));
        assert_eq!(o[2], None);
    }
}
