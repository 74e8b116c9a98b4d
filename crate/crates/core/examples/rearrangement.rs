//! Distribution function and decreasing rearrangement of a P1 field, with
//! the equimeasurability and Hardy–Littlewood identities.
//!
//! Run with `cargo run --release --example rearrangement`.

use std::sync::Arc;

use symcomp::fem::{field_stats, ScalarField};
use symcomp::geometry::Manifold;
use symcomp::mesh::{build_mesh, DomainSpec};
use symcomp::rearrange::{distribution, hardy_littlewood_check};

fn main() -> symcomp::Result<()> {
    let domain = DomainSpec::Ellipse { a: 1.0, b: 0.5 };
    let mesh = Arc::new(build_mesh(&domain, &Manifold::plane(), 0.05)?);
    let u = ScalarField::from_fn(mesh.clone(), |p| (1.0 - p[0] * p[0] - 4.0 * p[1] * p[1]).max(0.0) + 0.3 * (1.0 + p[0]))?;
    let g = ScalarField::from_fn(mesh.clone(), |p| (3.0 * p[1]).cos().abs())?;

    let d = distribution(&u);
    println!("|Ω| = {:.6}, u ∈ [{:.4}, {:.4}]", d.total_measure(), d.min_value(), d.max_value());
    for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
        println!("  μ({t:.2}) = {:.6}", d.measure_at(t));
    }
    for s in [0.0, 0.5, 1.0, 1.5] {
        println!("  u*({s:.1}) = {:.6}", d.rearranged_value(s)?);
    }
    let stats = field_stats(&u);
    println!("∫u  = {:.12}  ∫u*  = {:.12}", stats.l1, d.power_integral(1)?);
    println!("∫u² = {:.12}  ∫u*² = {:.12}", stats.l2 * stats.l2, d.power_integral(2)?);
    println!("Hardy–Littlewood margin ∫f*g* − ∫fg = {:.6e}", hardy_littlewood_check(&u, &g)?);
    Ok(())
}
