use hypext::oracle::*;
use hypext::pants::PantsSpec;

// 40-digit reference values, rounded to double
const INTERIOR_X_1_1_1: f64 = 2.1984358051716093;
const THRESHOLD_1_1: f64 = 3.0925204728028426;
const BOUNDARY_X_1_2_20: f64 = 10.000647499986831;

#[test]
fn bisection_finds_known_roots() {
    let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 0.0).unwrap();
    assert!((r.x - 2f64.sqrt()).abs() <= 2.0 * f64::EPSILON);
    let r = bisect(|x| x.cos() - x, 0.0, 1.0, 1e-14).unwrap();
    assert!((r.x - 0.7390851332151607).abs() < 1e-13);
    assert!(r.width <= 1e-14);
    assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
}

#[test]
fn finite_differences() {
    assert!((fd_difference(f64::sin, 0.3, 1e-6) / 2e-6 - 0.3f64.cos()).abs() < 1e-9);
    assert_eq!(fd_derivative_sign(|x| -x * x, 1.0, 1e-5), -1);
    assert_eq!(fd_derivative_sign(|x| x * x * x, 1.0, 1e-5), 1);
}

#[test]
fn oracle_roots_match_reference_values() {
    assert!((oracle_interior_root([1.0, 1.0, 1.0]).unwrap().x - INTERIOR_X_1_1_1).abs() < 1e-11);
    assert!((oracle_threshold(1.0, 1.0).unwrap().x - THRESHOLD_1_1).abs() < 1e-11);
    assert!((oracle_boundary_root([1.0, 2.0, 20.0]).unwrap().x - BOUNDARY_X_1_2_20).abs() < 1e-11);
}

#[test]
fn grid_search_approaches_the_interior_maximum() {
    let spec = PantsSpec::new(1.0, 1.0, 1.0).unwrap();
    let grid = GridSpec { resolution: 32, refinement_levels: 4, boundary_resolution: 256 };
    let (best, sides) = grid_max_systole(&spec, grid).unwrap();
    assert!(best.value <= INTERIOR_X_1_1_1 + 1e-12);
    assert!(INTERIOR_X_1_1_1 - best.value < 1e-4, "{}", best.value);
    assert!(best.boundary.is_none());
    assert!(sides.iter().all(|s| s.value < best.value));
    assert!(grid_max_systole(&spec, GridSpec { resolution: 8, ..grid }).is_err());
}

#[test]
fn constructions_have_the_expected_angles() {
    let tri = equilateral_triangle(1.0).unwrap();
    let defect = angle_defect(&tri).unwrap();
    let angles = polygon_angles(&tri).unwrap();
    assert!((angles.iter().sum::<f64>() + defect - std::f64::consts::PI).abs() < 1e-12);
    let sq = square(0.7).unwrap();
    let a = polygon_angles(&sq).unwrap();
    assert!(a.windows(2).all(|w| (w[0] - w[1]).abs() < 1e-12));
    assert!(regular_polygon(2, 1.0).is_err());
}

#[test]
fn hexagon_walk_closes_for_right_hexagons() {
    let emb = hypext::pants::embed_hexagon(&PantsSpec::new(1.0, 1.0, 1.0).unwrap()).unwrap();
    assert!(hexagon_walk_gap(emb.side_lengths()).unwrap() < 1e-10);
    assert!(hexagon_walk_gap([1.0; 6]).unwrap() > 1e-3);
}
