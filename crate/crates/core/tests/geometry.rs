use std::f64::consts::PI;

use approx::assert_relative_eq;
use symcomp::geometry::{ball_metrics, inverse_ball_area, iso_profile_a, iso_profile_flat, theta_of, Manifold};
use symcomp::mesh::{build_mesh, DomainSpec};

#[test]
fn sphere_balls_match_closed_forms() {
    for &r in &[0.1, 0.5, 1.0, 2.0, 3.0] {
        let b = ball_metrics(1.0, 2, r).unwrap();
        assert_relative_eq!(b.area, 2.0 * PI * (1.0 - r.cos()), max_relative = 1e-12);
        assert_relative_eq!(b.perimeter, 2.0 * PI * r.sin(), max_relative = 1e-12);
        assert_relative_eq!(inverse_ball_area(1.0, 2, b.area).unwrap(), r, max_relative = 1e-10);
    }
}

#[test]
fn three_dimensional_balls_invert() {
    for &(kappa, r) in &[(0.0, 0.7), (1.0, 0.7), (4.0, 1.2)] {
        let b = ball_metrics(kappa, 3, r).unwrap();
        assert_relative_eq!(inverse_ball_area(kappa, 3, b.area).unwrap(), r, max_relative = 1e-10);
    }
    assert_relative_eq!(ball_metrics(0.0, 3, 1.0).unwrap().area, 4.0 * PI / 3.0, max_relative = 1e-14);
}

#[test]
fn isoperimetric_profile() {
    // flat: s^{1/2} / (2√(πs))
    assert_relative_eq!(iso_profile_a(0.0, 2, 3.7).unwrap(), 1.0 / (2.0 * PI.sqrt()), max_relative = 1e-14);
    assert_relative_eq!(iso_profile_flat(2), 1.0 / (2.0 * PI.sqrt()), max_relative = 1e-14);
    // on the sphere the profile grows with the volume and starts at the flat value
    let small = iso_profile_a(1.0, 2, 1e-8).unwrap();
    assert_relative_eq!(small, iso_profile_flat(2), max_relative = 1e-6);
    assert!(iso_profile_a(1.0, 2, 6.0).unwrap() > iso_profile_a(1.0, 2, 2.0).unwrap());
    assert!(iso_profile_a(1.0, 2, 4.0 * PI).is_err());
    assert!(iso_profile_a(1.0, 2, 0.0).is_err());
}

#[test]
fn cone_theta_is_the_apex_volume_ratio() {
    // An annulus about the apex of the cone unrolls to a sector of opening
    // 2π·fraction; its area over the planar annulus is the volume ratio.
    let fraction = 0.75;
    let cone = Manifold::cone(fraction).unwrap();
    assert_eq!(theta_of(&cone), fraction);
    let plane = Manifold::plane();
    let sector = DomainSpec::AnnularSector {
        inner: 0.1,
        outer: 1.0,
        start: 0.0,
        sweep: 2.0 * PI * fraction,
    };
    let mesh = build_mesh(&sector, &plane, 0.05).unwrap();
    let ratio = mesh.area() / (PI * (1.0 - 0.1 * 0.1));
    assert_relative_eq!(ratio, fraction, max_relative = 2e-3);
    assert!(cone.beyond_hypotheses());
    assert!(!plane.beyond_hypotheses());
}

#[test]
fn manifold_argument_errors() {
    assert!(Manifold::sphere(0.0).is_err());
    assert!(Manifold::sphere(-1.0).is_err());
    assert!(Manifold::cone(0.0).is_err());
    assert!(Manifold::cone(1.5).is_err());
    assert!(ball_metrics(1.0, 2, 4.0).is_err());
    assert!(inverse_ball_area(1.0, 2, 13.0).is_err());
}
