//! Spherical cap of radius π/3 on the unit sphere: FEM pole value against
//! the radial quadrature solution, and the comparison checks.
//!
//! Run with `cargo run --release --example sphere_cap`.

use symcomp::pipeline::{bundled, run, RunOptions};
use symcomp::radial::{constant_profile, solve_radial};

fn main() -> symcomp::Result<()> {
    let mut cfg = bundled("sphere_cap")?;
    cfg.refinements = 0;
    let m = cfg.manifold.build()?;
    let r0 = std::f64::consts::FRAC_PI_3;
    let v = solve_radial(&constant_profile(&m, r0, 1.0)?, &m, 2, r0, 1.0)?;
    let out = run(&cfg, &RunOptions { write: false, ..Default::default() })?;
    println!("pole value: FEM {:.5}, radial {:.5}", out.report.summary.u_max, v.center_value());
    for c in &out.report.checks {
        println!("  {:<22} margin {:>+11.3e}  {}", c.name, c.margin, c.verdict.as_str());
    }
    Ok(())
}
