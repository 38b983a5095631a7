use hypext::oracle::*;
use hypext::verify::run_criterion;

#[test]
fn bundled_file_parses_and_round_trips() {
    let fx = bundled_fixtures().unwrap();
    assert_eq!(fx.constants.len(), 17);
    let text = fx.to_json().unwrap();
    assert_eq!(FixtureFile::parse(&text).unwrap(), fx);
    assert_eq!(text, BUNDLED_FIXTURES);
    for f in &fx.constants {
        assert!(f.value.is_finite());
        assert!(f.command.starts_with("hypext fixtures"));
    }
}

#[test]
fn regenerated_values_agree() {
    let fx = bundled_fixtures().unwrap();
    let fresh = generate_fixtures("test", "today").unwrap();
    for f in &fresh.constants {
        let old = fx.get(&f.name).unwrap();
        assert!((old - f.value).abs() < 1e-11 * old.abs().max(1.0), "{}: {old} vs {}", f.name, f.value);
    }
}

#[test]
fn missing_fixture_is_named() {
    let fx = bundled_fixtures().unwrap();
    let e = fx.get("no_such_constant").unwrap_err().to_string();
    assert!(e.contains("no_such_constant"));
}

#[test]
fn corrupted_fixture_fails_its_criterion() {
    let mut fx = bundled_fixtures().unwrap();
    for f in fx.constants.iter_mut().filter(|f| f.name == "interior_root_1_1_1") {
        f.value += 1e-6;
    }
    let r = run_criterion(5, &fx);
    assert!(!r.passed);
    assert!(r.detail.contains("1_1_1") || r.detail.contains("(1, 1, 1)"), "{}", r.detail);
    assert!(run_criterion(4, &fx).passed);
}
