//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines show up in plain
//! `cargo test` output. Exits non-zero when any criterion fails.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use symcomp::compare::CheckEntry;
use symcomp::fem::{field_stats, solve_poisson_robin, ScalarField};
use symcomp::geometry::Manifold;
use symcomp::mesh::{build_mesh, BoundaryField, DomainSpec};
use symcomp::pipeline::selftest::{
    concentration_bruteforce_suite, hardy_littlewood_suite, single_triangle_error, SELFTEST_SEED,
};
use symcomp::pipeline::{bundled, convergence, run, Report, RunOptions, BUNDLED};

const PLANAR_STRICT: [&str; 6] = [
    "square_robin",
    "square_two_arc",
    "ellipse_robin",
    "ellipse_two_arc",
    "lshape_robin",
    "lshape_two_arc",
];

type Outcome = Result<String, String>;

struct Cases {
    reports: BTreeMap<&'static str, Report>,
    times: BTreeMap<&'static str, Duration>,
}

impl Cases {
    fn load() -> symcomp::Result<Self> {
        let mut reports = BTreeMap::new();
        let mut times = BTreeMap::new();
        for (name, _) in BUNDLED {
            let cfg = bundled(name)?;
            let start = Instant::now();
            let out = run(&cfg, &RunOptions { write: false, ..Default::default() })?;
            times.insert(name, start.elapsed());
            reports.insert(name, out.report);
        }
        Ok(Cases { reports, times })
    }

    fn check(&self, case: &str, name: &str) -> Result<&CheckEntry, String> {
        self.reports[case].check(name).ok_or_else(|| format!("{case}: no `{name}` entry"))
    }

    /// `margin >= -tol` for `name` on every listed case.
    fn not_violated(&self, cases: &[&str], name: &str) -> Outcome {
        let mut worst = f64::INFINITY;
        for case in cases {
            let c = self.check(case, name)?;
            if c.margin < -c.tolerance {
                return Err(format!("{case}: {name} margin {:.3e} < -tol {:.3e}", c.margin, c.tolerance));
            }
            worst = worst.min(c.margin / c.tolerance.max(f64::MIN_POSITIVE));
        }
        Ok(format!("worst margin/tol {worst:.3e} over {} cases", cases.len()))
    }
}

fn all_cases() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

fn disk_oracle() -> Outcome {
    let start = Instant::now();
    let m = Manifold::plane();
    let mesh = Arc::new(build_mesh(&DomainSpec::Disk { radius: 1.0 }, &m, 0.05).map_err(|e| e.to_string())?);
    let f = ScalarField::constant(mesh.clone(), 1.0).map_err(|e| e.to_string())?;
    let beta = BoundaryField::constant(&mesh, 1.0).map_err(|e| e.to_string())?;
    let sol = solve_poisson_robin(&mesh, &f, &beta).map_err(|e| e.to_string())?;
    let exact = |p: [f64; 3]| (1.0 - (p[0] * p[0] + p[1] * p[1])) / 4.0 + 0.5;
    let linf = mesh
        .vertices()
        .iter()
        .zip(sol.u.values())
        .map(|(&p, &u)| (u - exact(p)).abs())
        .fold(0.0, f64::max);
    let rel_linf = linf / 0.75;
    let l1 = field_stats(&sol.u).l1;
    let l1_exact = 5.0 * std::f64::consts::PI / 8.0;
    let rel_l1 = (l1 - l1_exact).abs() / l1_exact;
    let elapsed = start.elapsed();
    let msg = format!("relative L∞ {rel_linf:.2e}, relative L¹ {rel_l1:.2e}, {:.2} s", elapsed.as_secs_f64());
    if rel_linf <= 0.01 && rel_l1 <= 0.01 && elapsed <= Duration::from_secs(10) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn equality_pointwise_convergence() -> Outcome {
    let cfg = bundled("disk_equality").map_err(|e| e.to_string())?;
    let table = convergence(&cfg, 3, 1.0, None).map_err(|e| e.to_string())?;
    let mut devs = Vec::new();
    for row in &table.rows {
        let m = row.margins.iter().find(|m| m.name == "pointwise").ok_or("no pointwise margin")?;
        let dev = m.max_abs.unwrap_or(m.margin.abs());
        if dev > m.tolerance {
            return Err(format!("h = {}: deviation {dev:.3e} exceeds tol {:.3e}", row.h, m.tolerance));
        }
        devs.push(dev);
    }
    let orders = table.order("pointwise").ok_or("no pointwise orders")?;
    let orders: Vec<f64> = orders.iter().map(|o| o.unwrap_or(f64::NAN)).collect();
    let fmt = |v: &[f64], e: bool| {
        v.iter().map(|x| if e { format!("{x:.2e}") } else { format!("{x:.2}") }).collect::<Vec<_>>().join(" ")
    };
    let msg = format!("deviations {}, orders {}", fmt(&devs, true), fmt(&orders, false));
    if orders.iter().all(|&o| o >= 1.0) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn sphere_cap(cases: &Cases) -> Outcome {
    // h = 0.05 without refinement
    let mut cfg = bundled("sphere_cap").map_err(|e| e.to_string())?;
    cfg.refinements = 0;
    let out = run(&cfg, &RunOptions { write: false, ..Default::default() }).map_err(|e| e.to_string())?;
    let pole = out.report.summary.u_max;
    let rel = (pole - 0.86503).abs() / 0.86503;
    let l1 = cases.check("sphere_cap", "l1")?;
    let msg = format!(
        "pole value {pole:.5} (rel. error {rel:.2e}), L¹ margin {:.2e} vs tol {:.2e}",
        l1.margin, l1.tolerance
    );
    if rel <= 0.015 && l1.margin.abs() <= l1.tolerance {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn strict_l1(cases: &Cases) -> Outcome {
    let mut smallest = f64::INFINITY;
    for case in PLANAR_STRICT {
        let r = &cases.reports[case];
        if (r.case.h / f64::from(1u32 << r.case.refinements) - 0.025).abs() > 1e-12 {
            return Err(format!("{case}: finest h is not 0.025"));
        }
        let c = cases.check(case, "l1")?;
        if c.margin <= c.tolerance {
            return Err(format!("{case}: margin {:.3e} does not exceed tol {:.3e}", c.margin, c.tolerance));
        }
        if cases.times[case] > Duration::from_secs(60) {
            return Err(format!("{case}: {:.1} s", cases.times[case].as_secs_f64()));
        }
        smallest = smallest.min(c.margin / c.tolerance);
    }
    Ok(format!("smallest margin/tol {smallest:.1} over {} cases", PLANAR_STRICT.len()))
}

fn level_sets(cases: &Cases) -> Outcome {
    cases.not_violated(&PLANAR_STRICT, "pointwise")
}

fn boundary_minimum(cases: &Cases) -> Outcome {
    cases.not_violated(&all_cases(), "min")
}

fn integrated(cases: &Cases) -> Outcome {
    let all = all_cases();
    let level = cases.not_violated(&all, "level")?;
    let mut n_integrated = 0;
    for case in &all {
        if let Some(c) = cases.reports[case].check("integrated_l1") {
            n_integrated += 1;
            if c.margin < -c.tolerance {
                return Err(format!("{case}: integrated_l1 margin {:.3e} < -tol", c.margin));
            }
        }
    }
    let eq = cases.check("disk_equality", "level")?;
    let spread = eq.max_abs.ok_or("equality case records no spread")?;
    if spread > eq.tolerance {
        return Err(format!("equality spread {spread:.3e} exceeds tol {:.3e}", eq.tolerance));
    }
    Ok(format!(
        "level: {level}; integrated_l1 on {n_integrated} cases; equality spread {spread:.2e} vs tol {:.2e}",
        eq.tolerance
    ))
}

fn isoperimetric(cases: &Cases) -> Outcome {
    cases.not_violated(&all_cases(), "isoperimetric")
}

fn rearrangement_exactness(cases: &Cases) -> Outcome {
    let tri = single_triangle_error().map_err(|e| e.to_string())?;
    if tri > 1e-12 {
        return Err(format!("single triangle error {tri:.3e}"));
    }
    let mut worst_rel: f64 = 0.0;
    for case in all_cases() {
        for name in ["equimeasurability_p1", "equimeasurability_p2"] {
            let c = cases.check(case, name)?;
            worst_rel = worst_rel.max((c.lhs - c.rhs).abs() / c.lhs.abs());
        }
    }
    if worst_rel > 1e-6 {
        return Err(format!("equimeasurability relative error {worst_rel:.3e}"));
    }
    let hl = hardy_littlewood_suite(SELFTEST_SEED, 50).map_err(|e| e.to_string())?;
    let msg = format!("triangle {tri:.1e}, equimeasurability {worst_rel:.1e}, Hardy–Littlewood min margin {hl:.2e}");
    if hl >= -1e-8 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn concentration() -> Outcome {
    let c = concentration_bruteforce_suite(SELFTEST_SEED, 20).map_err(|e| e.to_string())?;
    let msg = format!("{}/{} agree ({} sources fail the condition)", c.agreements, c.sources, c.failing);
    if c.agreements == c.sources {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn cone_smoke(cases: &Cases) -> Outcome {
    let r = &cases.reports["cone_disk"];
    if !r.case.beyond_hypotheses || r.notes.len() < 2 {
        return Err("cone case is not flagged as beyond hypotheses".into());
    }
    let l1 = cases.not_violated(&["cone_disk"], "l1")?;
    let min = cases.not_violated(&["cone_disk"], "min")?;
    Ok(format!("θ = {:.2}; l1 {l1}; min {min}", r.case.theta))
}

fn selftest_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let start = Instant::now();
    for k in 0..2 {
        let status = Command::new(env!("CARGO_BIN_EXE_symcomp"))
            .args(["selftest", "--out"])
            .arg(dir.path().join(format!("run{k}")))
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(format!("selftest exit {:?}", status.status.code()));
        }
    }
    let elapsed = start.elapsed() / 2;
    let read = |k: usize, rel: &Path| std::fs::read(dir.path().join(format!("run{k}")).join(rel));
    let mut files = vec![Path::new("selftest.json").to_path_buf()];
    for name in all_cases() {
        files.push(Path::new(name).join("report.json"));
    }
    for f in &files {
        let (a, b) = (read(0, f).map_err(|e| e.to_string())?, read(1, f).map_err(|e| e.to_string())?);
        if a != b {
            return Err(format!("{} differs between runs", f.display()));
        }
    }
    let msg = format!("{} files identical, {:.1} s per selftest", files.len(), elapsed.as_secs_f64());
    if elapsed <= Duration::from_secs(300) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() -> ExitCode {
    let cases = match Cases::load() {
        Ok(c) => c,
        Err(e) => {
            println!("FAIL loading bundled cases: {e}");
            return ExitCode::FAILURE;
        }
    };
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("1 disk oracle", Box::new(disk_oracle)),
        ("2 equality case pointwise convergence", Box::new(equality_pointwise_convergence)),
        ("3 sphere cap oracle", Box::new(|| sphere_cap(&cases))),
        ("4 strict L1 comparison", Box::new(|| strict_l1(&cases))),
        ("5 distribution comparison", Box::new(|| level_sets(&cases))),
        ("6 boundary minimum comparison", Box::new(|| boundary_minimum(&cases))),
        ("7 integrated level inequalities", Box::new(|| integrated(&cases))),
        ("8 isoperimetric levels", Box::new(|| isoperimetric(&cases))),
        ("9 rearrangement exactness", Box::new(|| rearrangement_exactness(&cases))),
        ("10 concentration brute force", Box::new(concentration)),
        ("11 cone smoke test", Box::new(|| cone_smoke(&cases))),
        ("12 selftest determinism", Box::new(selftest_determinism)),
    ];
    let mut failed = 0;
    for (name, f) in &criteria {
        match f() {
            Ok(msg) => println!("PASS {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {name}: {msg}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
