use symcomp::geometry::Manifold;
use symcomp::mesh::{build_mesh, export_mesh, import_mesh, BoundaryField, DomainSpec};
use symcomp::Error;

fn round_trip(spec: DomainSpec, m: Manifold, h: f64) {
    let mesh = build_mesh(&spec, &m, h).unwrap();
    let beta = BoundaryField::from_fn(&mesh, |p| 1.0 + p[0].abs()).unwrap();
    let text = export_mesh(&mesh, &beta).unwrap();
    let (back, beta_back) = import_mesh(&text).unwrap();
    assert_eq!(back.vertices(), mesh.vertices());
    assert_eq!(back.triangles(), mesh.triangles());
    assert_eq!(back.boundary(), mesh.boundary());
    assert_eq!(beta_back.values(), beta.values());
    assert_eq!(back.manifold().kind(), m.kind());
    // exporting again is byte-identical
    assert_eq!(export_mesh(&back, &beta_back).unwrap(), text);
}

#[test]
fn round_trips_are_exact() {
    round_trip(DomainSpec::Ellipse { a: 1.0, b: 0.5 }, Manifold::plane(), 0.1);
    round_trip(DomainSpec::SphericalCap { radius: 1.0 }, Manifold::sphere(1.0).unwrap(), 0.1);
    round_trip(
        DomainSpec::GeodesicPolygon {
            vertices: vec![[1.0, 0.0, 1.0], [0.0, 1.0, 1.0], [-1.0, 0.0, 1.0], [0.0, -1.0, 1.0]],
        },
        Manifold::sphere(4.0).unwrap(),
        0.05,
    );
    round_trip(
        DomainSpec::ConeDisk {
            center: [-0.7, 0.7],
            radius: 0.4,
        },
        Manifold::cone(0.75).unwrap(),
        0.1,
    );
}

#[test]
fn generated_meshes_meet_quality_bounds() {
    let cases = [
        (DomainSpec::Disk { radius: 1.0 }, Manifold::plane()),
        (
            DomainSpec::Polygon {
                vertices: vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]],
            },
            Manifold::plane(),
        ),
        (
            DomainSpec::Polygon {
                vertices: vec![[0.0, 0.0], [1.0, 0.3], [0.2, 1.0]],
            },
            Manifold::plane(),
        ),
        (DomainSpec::SphericalCap { radius: 1.0 }, Manifold::sphere(1.0).unwrap()),
        (
            DomainSpec::GeodesicPolygon {
                vertices: vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            },
            Manifold::sphere(1.0).unwrap(),
        ),
    ];
    for (spec, m) in cases {
        for h in [0.1, 0.05] {
            let mesh = build_mesh(&spec, &m, h).unwrap();
            mesh.validate().unwrap();
            assert!(mesh.min_angle_deg() >= 20.0, "{} h={h}: {}", spec.name(), mesh.min_angle_deg());
            assert!(mesh.max_edge_length() <= 1.5 * h);
            let rel = (mesh.area() - spec.analytic_area(&m)).abs() / spec.analytic_area(&m);
            assert!(rel < 5e-3, "{} h={h}: area error {rel}", spec.name());
        }
    }
}

#[test]
fn malformed_files_report_the_line() {
    let mesh = build_mesh(&DomainSpec::Disk { radius: 1.0 }, &Manifold::plane(), 0.3).unwrap();
    let text = export_mesh(&mesh, &BoundaryField::constant(&mesh, 1.0).unwrap()).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines[4] = "0.1 not-a-number";
    match import_mesh(&lines.join("\n")) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
        other => panic!("expected a parse error, got {other:?}"),
    }
    assert!(import_mesh("symcomp-mesh v0\n").is_err());
    let truncated: String = text.lines().take(10).collect::<Vec<_>>().join("\n");
    assert!(import_mesh(&truncated).is_err());
}
