use std::f64::consts::PI;

use hypext::oracle::{oracle_radius, saccheri_base};
use hypext::radius_solver::*;
use hypext::roots::RootOptions;

// 40-digit reference values, rounded to double
const R_CHI_M1_N0_B1: f64 = 1.2636095392328894;
const R_CHI_M1_N1_B0: f64 = 1.1858500101887393;

#[test]
fn reference_radii() {
    let r = max_injrad(-1, 0, 1).unwrap().r;
    assert!((r - R_CHI_M1_N0_B1).abs() < 1e-11, "{r}");
    let r = max_injrad(-1, 1, 0).unwrap().r;
    assert!((r - R_CHI_M1_N1_B0).abs() < 1e-11, "{r}");
}

#[test]
fn solutions_satisfy_the_angle_equation() {
    for (chi, n, b, k) in [(-1, 0, 1, 1), (-3, 2, 1, 1), (-5, 1, 2, 3), (-2, 0, 0, 4), (-4, 3, 3, 2)] {
        let sig = Signature::new(chi, n, b, k).unwrap();
        let sol = packing_radius(&sig).unwrap();
        assert!((angle_sum(sol.r, &sig) - 2.0 * PI).abs() < 1e-10);
        assert!(sol.bracket.0 <= sol.r && sol.r <= sol.bracket.1);
        let orc = oracle_radius(chi, n, b, k).unwrap();
        assert!((orc.x - sol.r).abs() < 1e-11);
    }
}

#[test]
fn angle_sum_is_decreasing() {
    let sig = Signature::new(-3, 2, 1, 1).unwrap();
    let v: Vec<f64> = (1..=300).map(|j| angle_sum(j as f64 * 0.1, &sig)).collect();
    assert!(v.windows(2).all(|w| w[1] < w[0]));
    assert!(angle_sum_prime(1.0, &sig) < 0.0);
}

#[test]
fn loose_tolerance_still_converges() {
    let sig = Signature::new(-2, 1, 1, 1).unwrap();
    let opts = RootOptions { bracket_width: 1e-2, ..RootOptions::default() };
    let a = packing_radius_with(&sig, opts).unwrap().r;
    let b = packing_radius(&sig).unwrap().r;
    assert!((a - b).abs() < 1e-9);
}

#[test]
fn invalid_signatures_are_rejected() {
    assert!(matches!(Signature::new(1, 0, 0, 1), Err(hypext::error::Error::InvalidSignature(_))));
    assert!(Signature::new(0, 1, 1, 1).is_err());
    assert!(Signature::new(-1, -1, 0, 1).is_err());
    assert!(Signature::new(-1, 0, 1, 0).is_err());
    assert_eq!(Signature::new(-2, 1, 1, 1).unwrap().genus(), Some(1));
    assert_eq!(Signature::new(-2, 1, 0, 1).unwrap().genus(), None);
}

#[test]
fn boundary_length_is_the_base_of_the_saccheri_piece() {
    for r in [0.3, 1.2636095392328894, 2.5] {
        let base = saccheri_base(r, 2.0 * r).unwrap();
        assert!((base - boundary_length_at_max(r)).abs() < 1e-12, "{base} vs {}", boundary_length_at_max(r));
    }
}
