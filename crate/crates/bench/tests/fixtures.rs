use wrast_bench::{grid, packet, plane_points, signal, two_wavelets};

#[test]
fn signal_lives_on_the_demo_grid() {
    let f = signal(0);
    assert!(f.grid.same_shape(&grid()));
    assert_eq!(f.values, signal(0).values);
    assert_ne!(f.values, signal(1).values);
}

#[test]
fn wave_fixtures_are_sized() {
    assert_eq!(two_wavelets(256).len(), 256);
    assert!(packet().sobolev_norm_sq() > 0.0);
    let pts = plane_points(5);
    assert_eq!(pts.len(), 25);
    assert!(pts.iter().all(|p| p.t_prime > 0.0));
}
