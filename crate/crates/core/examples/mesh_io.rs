//! Mesh generation for every domain family and the text mesh format.
//!
//! Run with `cargo run --release --example mesh_io`.

use std::f64::consts::PI;

use symcomp::geometry::Manifold;
use symcomp::mesh::{build_mesh, export_mesh, import_mesh, BoundaryField, DomainSpec};

fn main() -> symcomp::Result<()> {
    let plane = Manifold::plane();
    let cases = [
        (DomainSpec::Disk { radius: 1.0 }, plane),
        (DomainSpec::Ellipse { a: 1.0, b: 0.5 }, plane),
        (
            DomainSpec::Polygon {
                vertices: vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]],
            },
            plane,
        ),
        (DomainSpec::AnnularSector { inner: 0.5, outer: 1.0, start: 0.0, sweep: 1.5 * PI }, plane),
        (DomainSpec::SphericalCap { radius: PI / 3.0 }, Manifold::sphere(1.0)?),
        (
            DomainSpec::GeodesicPolygon {
                vertices: vec![[1.0, 0.0, 1.0], [0.0, 1.0, 1.0], [-1.0, 0.0, 1.0], [0.0, -1.0, 1.0]],
            },
            Manifold::sphere(1.0)?,
        ),
        (DomainSpec::ConeDisk { center: [-0.7, 0.7], radius: 0.5 }, Manifold::cone(0.75)?),
    ];
    println!("{:<18} {:>8} {:>8} {:>10} {:>10} {:>9}", "domain", "verts", "tris", "area", "exact", "min angle");
    for (spec, m) in &cases {
        let mesh = build_mesh(spec, m, 0.1)?;
        println!(
            "{:<18} {:>8} {:>8} {:>10.5} {:>10.5} {:>9.2}",
            spec.name(),
            mesh.num_vertices(),
            mesh.triangles().len(),
            mesh.area(),
            spec.analytic_area(m),
            mesh.min_angle_deg()
        );
    }
    let (spec, m) = &cases[2];
    let mesh = build_mesh(spec, m, 0.25)?;
    let beta = BoundaryField::from_fn(&mesh, |p| if p[1] > 0.5 { 4.0 } else { 1.0 })?;
    let text = export_mesh(&mesh, &beta)?;
    let (back, _) = import_mesh(&text)?;
    println!("L-shape at h = 0.25: {} bytes, round trip exact: {}", text.len(), back.vertices() == mesh.vertices());
    println!("{}", text.lines().take(6).collect::<Vec<_>>().join("\n"));
    Ok(())
}
