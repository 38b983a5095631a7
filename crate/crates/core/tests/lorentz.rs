use hypext::lorentz::*;
use proptest::prelude::*;

fn point() -> impl Strategy<Value = HPoint> {
    (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b)| HPoint::from_spatial(a, b))
}

fn line() -> impl Strategy<Value = HGeodesic> {
    (point(), point()).prop_filter_map("distinct points", |(p, q)| {
        if dist_point_point(&p, &q) > 1e-3 {
            geodesic_through(&p, &q).ok()
        } else {
            None
        }
    })
}

proptest! {
    #[test]
    fn distance_is_a_metric(p in point(), q in point(), r in point()) {
        let d = dist_point_point(&p, &q);
        prop_assert!(d >= 0.0);
        prop_assert!((d - dist_point_point(&q, &p)).abs() < 1e-12);
        prop_assert!(dist_point_point(&p, &r) <= d + dist_point_point(&q, &r) + 1e-10);
    }

    #[test]
    fn boosts_are_isometries(p in point(), q in point(), c in point()) {
        let m = boost_to_origin(&c);
        let d = dist_point_point(&p, &q);
        let e = dist_point_point(&p.transform(&m), &q.transform(&m));
        prop_assert!((d - e).abs() < 1e-9 * d.max(1.0));
        prop_assert!(dist_point_point(&c.transform(&m), &HPoint::origin()) < 1e-7);
    }

    #[test]
    fn reflection_is_an_involution_fixing_the_line(g in line(), p in point()) {
        let r = reflect_point(&g, &p);
        prop_assert!(dist_point_point(&reflect_point(&g, &r), &p) < 1e-8);
        prop_assert!((g.signed(&r) + g.signed(&p)).abs() < 1e-9);
        let f = g.foot(&p);
        prop_assert!(dist_point_point(&reflect_point(&g, &f), &f) < 1e-7);
    }

    #[test]
    fn foot_realizes_the_distance(g in line(), p in point()) {
        let f = g.foot(&p);
        prop_assert!(g.signed(&f).abs() < 1e-9);
        prop_assert!((dist_point_point(&p, &f) - dist_point_geodesic(&p, &g)).abs() < 1e-8);
    }

    #[test]
    fn flow_moves_by_arclength(p in point(), th in 0.0f64..std::f64::consts::TAU, t in -4.0f64..4.0) {
        let q = HPoint::from_spatial(p.coords()[1] + th.cos(), p.coords()[2] + th.sin());
        let v = HTangent::towards(&p, &q).unwrap();
        let x = flow(&p, &v.vector, t);
        prop_assert!((dist_point_point(&p, &x) - t.abs()).abs() < 1e-9);
    }

    #[test]
    fn segments_join_their_endpoints(p in point(), q in point()) {
        prop_assume!(dist_point_point(&p, &q) > 1e-3);
        let g = geodesic_through(&p, &q).unwrap();
        prop_assert!(g.signed(&p).abs() < 1e-9 && g.signed(&q).abs() < 1e-9);
        let s = Segment::new(&p, &q, &g).unwrap();
        prop_assert!((2.0 * s.half_length - dist_point_point(&p, &q)).abs() < 1e-9);
        prop_assert!(dist_point_point(&s.from_start(0.0), &p) < 1e-7);
        prop_assert!(dist_point_point(&s.from_start(2.0 * s.half_length), &q) < 1e-7);
    }

    #[test]
    fn disk_coordinates_round_trip(u in -0.9f64..0.9, v in -0.4f64..0.4) {
        let p = HPoint::from_disk(u, v).unwrap();
        let (a, b) = p.to_disk();
        prop_assert!((a - u).abs() < 1e-12 && (b - v).abs() < 1e-12);
    }
}

#[test]
fn perpendicular_lines_meet_at_the_expected_distance() {
    // the line x1 = 0 and the line at distance s perpendicular to x2 = 0
    let s = 1.7f64;
    let g1 = HGeodesic::from_normal(V3::new(0.0, 1.0, 0.0)).unwrap();
    let g2 = HGeodesic::from_normal(V3::new(s.sinh(), s.cosh(), 0.0)).unwrap();
    assert!((common_perpendicular_length(&g1, &g2).unwrap() - s).abs() < 1e-12);
    assert!(intersection(&g1, &g2).is_err());
}

#[test]
fn right_angle_at_the_origin() {
    let o = HPoint::origin();
    let a = HPoint::from_spatial(1.0, 0.0);
    let b = HPoint::from_spatial(0.0, 2.0);
    assert!((angle_at(&o, &a, &b).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
}

#[test]
fn points_off_the_sheet_are_rejected() {
    assert!(HPoint::new(V3::new(0.0, 1.0, 0.0)).is_err());
    assert!(HPoint::from_disk(1.0, 0.0).is_err());
}
