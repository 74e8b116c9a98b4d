//! Comparison checks on the unit square with a two-arc Robin coefficient:
//! the symmetrized problem dominates the original one with a strict margin.
//!
//! Run with `cargo run --release --example comparison_checks`.

use symcomp::pipeline::{bundled, run, RunOptions};

fn main() -> symcomp::Result<()> {
    for name in ["square_robin", "square_two_arc", "lshape_two_arc"] {
        let cfg = bundled(name)?;
        let out = run(&cfg, &RunOptions { write: false, ..Default::default() })?;
        let s = &out.report.summary;
        println!("{name}: β̄ = {:.4}, R♯ = {:.4}, u₀ = {:.4}, v₀ = {:.4}", s.beta_bar, s.radius_sharp, s.u0, s.v0);
        for check in ["l1", "pointwise", "profile", "min", "level"] {
            if let Some(c) = out.report.check(check) {
                println!(
                    "  {check:<10} lhs {:>10.5} rhs {:>10.5} margin {:>+10.3e} tol {:.2e}  {}",
                    c.lhs,
                    c.rhs,
                    c.margin,
                    c.tolerance,
                    c.verdict.as_str()
                );
            }
        }
    }
    Ok(())
}
