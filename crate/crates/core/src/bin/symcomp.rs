use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use symcomp::mesh::{build_mesh, export_mesh, BoundaryField};
use symcomp::pipeline::{self, RunConfig, RunOptions};

#[derive(Parser)]
#[command(name = "symcomp", version, about = "Robin Poisson solves checked against their radial comparison problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configuration: mesh, solve, symmetrize, compare, write reports.
    Run {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Multiplies the tolerance constant.
        #[arg(long, default_value_t = 1.0)]
        tol_scale: f64,
    },
    /// Refinement study with empirical orders.
    Convergence {
        config: PathBuf,
        /// Number of refinements (at least 2); defaults to the config's count.
        #[arg(long)]
        levels: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        tol_scale: f64,
    },
    /// Generate the mesh of a configuration and export it.
    Mesh {
        config: PathBuf,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every bundled configuration and the invariant suites.
    Selftest {
        #[arg(long, default_value = "selftest-out")]
        out: PathBuf,
    },
}

fn mesh_command(config: &PathBuf, out: Option<PathBuf>) -> symcomp::Result<()> {
    let cfg = RunConfig::load(config)?;
    let m = cfg.manifold.build()?;
    let mesh = build_mesh(&cfg.domain, &m, cfg.h)?;
    let beta = match cfg.beta {
        pipeline::BetaSpec::EdgeFile { .. } => BoundaryField::constant(&mesh, 1.0)?,
        ref spec => BoundaryField::from_fn(&mesh, |p| spec.at_angle(mesh.polar_angle(p)).unwrap_or(1.0))?,
    };
    let text = export_mesh(&mesh, &beta)?;
    match out {
        Some(p) => std::fs::write(&p, text).map_err(|e| symcomp::Error::Io {
            context: p.display().to_string(),
            source: e,
        })?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out, tol_scale } => RunConfig::load(&config).and_then(|cfg| {
            let opts = RunOptions {
                out,
                tol_scale,
                write: true,
            };
            let outcome = pipeline::run(&cfg, &opts)?;
            for c in &outcome.report.checks {
                println!("{:<24} margin {:>+12.4e}  tol {:>10.3e}  {}", c.name, c.margin, c.tolerance, c.verdict.as_str());
            }
            if let Some(dir) = &outcome.out_dir {
                println!("artifacts in {}", dir.display());
            }
            Ok(outcome.report.passed())
        }),
        Command::Convergence {
            config,
            levels,
            out,
            tol_scale,
        } => RunConfig::load(&config).and_then(|cfg| {
            let table = pipeline::convergence(&cfg, levels.unwrap_or(cfg.refinements), tol_scale, out.as_deref())?;
            print!("{}", table.to_text());
            Ok(true)
        }),
        Command::Mesh { config, out } => mesh_command(&config, out).map(|_| true),
        Command::Selftest { out } => pipeline::selftest(Some(&out)).map(|o| {
            for r in &o.cases {
                println!("{:<24} {}", r.case.name, r.verdict);
            }
            for c in &o.invariants {
                println!("{:<32} {}", c.name, c.verdict.as_str());
            }
            o.passed
        }),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
