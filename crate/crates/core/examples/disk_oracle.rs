//! Robin problem on the unit disk against the closed-form radial solution.
//!
//! Run with `cargo run --release --example disk_oracle`.

use std::sync::Arc;

use symcomp::fem::{field_stats, solve_poisson_robin, ScalarField};
use symcomp::geometry::Manifold;
use symcomp::mesh::{build_mesh, BoundaryField, DomainSpec};
use symcomp::radial::closed_form_disk;

fn main() -> symcomp::Result<()> {
    let beta = 1.0;
    let exact = closed_form_disk(1.0, beta, 201)?;
    println!("{:>8} {:>10} {:>12} {:>12}", "h", "vertices", "L∞ error", "‖u‖₁");
    for h in [0.2, 0.1, 0.05, 0.025] {
        let mesh = Arc::new(build_mesh(&DomainSpec::Disk { radius: 1.0 }, &Manifold::plane(), h)?);
        let f = ScalarField::constant(mesh.clone(), 1.0)?;
        let sol = solve_poisson_robin(&mesh, &f, &BoundaryField::constant(&mesh, beta)?)?;
        let err = mesh
            .vertices()
            .iter()
            .zip(sol.u.values())
            .map(|(p, u)| (u - exact.value(p[0].hypot(p[1]).min(1.0))).abs())
            .fold(0.0, f64::max);
        println!("{h:>8} {:>10} {err:>12.3e} {:>12.6}", mesh.num_vertices(), field_stats(&sol.u).l1);
    }
    println!("exact ‖u‖₁ = 5π/8 = {:.6}", 5.0 * std::f64::consts::PI / 8.0);
    Ok(())
}
