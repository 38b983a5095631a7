use hypext::cutlocus::*;
use hypext::error::Error;
use hypext::lorentz::{dist_point_geodesic, HPoint};
use hypext::pants::{embed_hexagon, PantsSpec};

fn hol(b: [f64; 3]) -> HolonomyGroup {
    holonomy_for(&PantsSpec::new(b[0], b[1], b[2]).unwrap()).unwrap()
}

#[test]
fn traces_match_the_boundary_lengths() {
    for b in [[1.0, 1.0, 1.0], [1.0, 2.0, 3.0], [1.0, 2.0, 20.0]] {
        let h = hol(b);
        for i in 0..3 {
            assert!((h.translation_lengths[i] - b[i]).abs() < 1e-8 * b[i], "{b:?} {:?}", h.translation_lengths);
            let tr = h.boundary_element(i).trace();
            assert!((tr - (1.0 + 2.0 * b[i].cosh())).abs() < 1e-8 * tr);
        }
        assert!(holonomy_is_tight(&h));
    }
}

#[test]
fn words_compose() {
    let h = hol([1.0, 1.0, 1.0]);
    // a = a1^-1, B = a2
    let w = h.word("aB").unwrap();
    let direct = h.letter(1) * h.letter(2);
    assert!((direct - lorentz_inverse(&h.generators[0]) * h.generators[1]).abs().max() < 1e-12);
    assert!((w - direct).abs().max() < 1e-12);
    let id = h.word("aA").unwrap();
    assert!((id - hypext::lorentz::M3::identity()).abs().max() < 1e-12);
    assert!(h.word("x").is_err());
}

#[test]
fn nearest_lift_on_the_home_sheet_is_the_boundary() {
    let h = hol([1.0, 2.0, 3.0]);
    let emb = &h.embedding;
    for i in 0..3 {
        let sample = sample_cut_locus(&h, i, 48, None).unwrap();
        let dom = CutDomain::new(&h, i);
        let mut seen = 0;
        for row in sample.rows.iter().filter(|r| r.sheet == 0) {
            let p = dom.from_frame(&HPoint::from_disk(row.u, row.v).unwrap());
            assert!(emb.contains(&p));
            let d = dist_point_geodesic(&p, &emb.boundary_geodesics[i]);
            assert!(row.dist1 <= d + 1e-10);
            seen += 1;
        }
        assert!(seen > 100);
    }
}

#[test]
fn spectrum_is_invariant_under_the_boundary_translation() {
    let h = hol([1.0, 1.0, 1.0]);
    let lifts = enumerate_lifts(&h, 0, 8);
    let c = h.embedding.centroid();
    let g = h.boundary_element(0);
    let a = distance_spectrum(&c, &lifts);
    let b = distance_spectrum(&c.transform(&g), &lifts);
    // the ball cuts the two lists differently; compare the bottom
    for k in 0..6 {
        assert!((a[k] - b[k]).abs() < 1e-9, "{k}: {} vs {}", a[k], b[k]);
    }
}

#[test]
fn lift_counts_grow_with_the_cap() {
    let h = hol([1.0, 2.0, 3.0]);
    let counts: Vec<usize> = (0..=8).map(|c| enumerate_lifts(&h, 2, c).len()).collect();
    assert_eq!(counts[0], 1);
    assert!(counts.windows(2).all(|w| w[1] >= w[0]), "{counts:?}");
    let big = enumerate_lifts(&h, 2, 8);
    assert_eq!(big.truncate(3).len(), counts[3]);
}

#[test]
fn symmetric_pants_give_a_symmetric_locus() {
    let h = hol([1.0, 1.0, 1.0]);
    let s = sample_cut_locus(&h, 2, 96, None).unwrap();
    assert!(flagged_symmetric(&s));
    assert_eq!(s.quadrilateral_count, 4);
    assert!(s.valence_estimates.iter().all(|&v| v >= 3));
}

#[test]
fn quadrilateral_counts() {
    for (b, which) in [([1.0, 2.0, 3.0], 0..3), ([0.5, 1.0, 1.5], 0..1)] {
        let h = hol(b);
        for i in which {
            let r = boundary_rays(&h, i, 256).unwrap();
            assert!(r.quadrilateral_count <= 6);
            assert_eq!(r.quadrilateral_count, 4, "{b:?} B{}", i + 1);
            assert_eq!(r.arcs.len(), r.quadrilateral_count);
        }
    }
}

#[test]
fn long_boundary_rays_stop() {
    let h = hol([1.0, 1.0, 40.0]);
    let r = boundary_rays(&h, 2, 1024).unwrap();
    assert_eq!(r.quadrilateral_count, 4);
}

#[test]
fn thin_domains_report_an_empty_grid() {
    let h = hol([1.0, 1.0, 40.0]);
    let e = sample_cut_locus(&h, 2, 64, None).unwrap_err();
    assert!(matches!(e, Error::EmptyGrid { resolution: 64 }), "{e}");
}

#[test]
fn stabilization_settles_quickly() {
    let h = hol([1.0, 1.0, 1.0]);
    let rep = stabilize(&h, 0, 48).unwrap();
    assert!(rep.stable_at.is_some());
    assert!(rep.lift_counts.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn systole_on_each_boundary_beats_the_sixth() {
    for b in [[1.0, 1.0, 1.0], [1.0, 2.0, 20.0], [0.5, 0.5, 15.0]] {
        let spec = PantsSpec::new(b[0], b[1], b[2]).unwrap();
        for i in 0..3 {
            let lb = verify_sys_lower_bound_with(&spec, i, 500).unwrap();
            assert!(lb.ok, "{b:?} B{}: {} < {}", i + 1, lb.max_boundary_sys, lb.bound);
            let emb = embed_hexagon(&spec).unwrap();
            assert!(emb.boundary_geodesics[i].signed(&lb.argmax).abs() < 1e-9 * lb.argmax.coords()[0]);
        }
    }
    assert!(verify_sys_lower_bound(&PantsSpec::new(1.0, 1.0, 1.0).unwrap(), 3).is_err());
}

#[test]
fn csv_has_a_header_and_one_line_per_row() {
    let h = hol([1.0, 1.0, 1.0]);
    let s = sample_cut_locus(&h, 0, 24, Some(2.0)).unwrap();
    let csv = rows_to_csv(&s.rows);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("u,v,sheet,dist1,dist2,flagged"));
    assert_eq!(lines.count(), s.rows.len());
    assert_eq!(s.epsilon, 2.0);
}
