//! Radial comparison solutions: a Schwarz-symmetrized source on the plane
//! and constant sources on spherical caps of growing radius.
//!
//! Run with `cargo run --release --example radial_profiles`.

use symcomp::geometry::Manifold;
use symcomp::radial::{constant_profile, solve_radial, RadialProfile};

fn main() -> symcomp::Result<()> {
    let plane = Manifold::plane();
    let r = (0..=100).map(|k| k as f64 / 100.0).collect::<Vec<_>>();
    let values = r.iter().map(|x| 2.0 - x * x).collect();
    let source = RadialProfile::new(plane, r, values)?;
    let v = solve_radial(&source, &plane, 2, 1.0, 2.0)?;
    println!("plane, f♯ = 2 − r², β̄ = 2:");
    for x in [0.0, 0.25, 0.5, 0.75, 1.0] {
        println!("  v({x:.2}) = {:.6}", v.value(x));
    }
    let sphere = Manifold::sphere(1.0)?;
    println!("unit sphere caps, f = 1, β̄ = 1:");
    for r0 in [0.5, 1.0, std::f64::consts::FRAC_PI_3, 2.0, 2.8] {
        let v = solve_radial(&constant_profile(&sphere, r0, 1.0)?, &sphere, 2, r0, 1.0)?;
        println!("  r₀ = {r0:.4}: v(0) = {:.6}, v(r₀) = {:.6}", v.center_value(), v.boundary_value());
    }
    Ok(())
}
