use medusa_core::builder::{ComplexKind, TargetSpec};
use medusa_core::complex::ColorScope;
use medusa_core::fixtures;
use medusa_core::pipeline::{analyze, oracle_report, run_analysis, write_bundle, AnalysisConfig, CheckStatus, InclusionSpec, Manifest};
use medusa_core::time::Rational;
use medusa_core::{parse_frames, write_frames, Error};

fn config(alpha0: &str) -> AnalysisConfig {
    serde_json::from_str(&format!(r#"{{"alpha0": {alpha0}, "oracle_check": true}}"#)).unwrap()
}

#[test]
fn static_point_gives_the_single_gap_row() {
    let ts = parse_frames(&write_frames(&fixtures::single_point(3))).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let (a, _) = run_analysis(&ts, &config("4.0"), dir.path()).unwrap();
    assert_eq!(a.targets.len(), 2);
    let csv = std::fs::read_to_string(dir.path().join("alpha-multi.diagram.csv")).unwrap();
    assert_eq!(csv.lines().nth(1).unwrap(), "0,Hor,0.000000,1.000000,1.000000,gap,0,0");
    assert_eq!(csv.lines().count(), 2);
    assert!(a.checks.iter().all(|c| c.status == CheckStatus::Agree));
}

#[test]
fn flip_gadget_reports_one_filler_and_agrees() {
    let ts = fixtures::flip_gadget();
    let mut cfg = config("100");
    cfg.targets = vec![TargetSpec::new(ComplexKind::Delaunay, ColorScope::Multi)];
    let dir = tempfile::tempdir().unwrap();
    let (a, _) = run_analysis(&ts, &cfg, dir.path()).unwrap();
    assert_eq!(a.targets[0].diagnostics.fillers(), 1);
    assert_eq!(a.targets[0].diagnostics.unresolved(), 0);
    let diag: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("diagnostics.json")).unwrap()).unwrap();
    let fillers: u64 = diag[0]["pairs"].as_array().unwrap().iter().map(|p| p["fillers"].as_u64().unwrap()).sum();
    assert_eq!(fillers, 1);
}

#[test]
fn unsupported_inclusion_maps_to_exit_three() {
    let ts = fixtures::hexagon_with_center(1.0);
    let mut cfg = config("1.0");
    cfg.inclusions = vec!["alpha:multi->alpha:mono1".parse().unwrap()];
    let err = analyze(&ts, &cfg).unwrap_err();
    assert!(matches!(err, Error::UnsupportedInclusion(_)));
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn image_bundle_hides_the_filled_ring() {
    let ts = fixtures::hexagon_with_center(1.0);
    let mut cfg = config("1.0");
    cfg.inclusions = vec![InclusionSpec::new(
        TargetSpec::new(ComplexKind::Alpha, ColorScope::Mono(2)),
        TargetSpec::new(ComplexKind::Alpha, ColorScope::Multi),
    )];
    let dir = tempfile::tempdir().unwrap();
    let (a, m) = run_analysis(&ts, &cfg, dir.path()).unwrap();
    let blue = &a.targets.iter().find(|t| t.spec.scope == ColorScope::Mono(2)).unwrap().diagram;
    assert!(blue.to_csv(Rational::from_integer(0)).contains("\n1,Hor,0.000000,1.000000,"));
    let img = std::fs::read_to_string(dir.path().join("image-alpha-mono2-in-alpha-multi.diagram.csv")).unwrap();
    assert!(!img.contains("\n1,"));
    assert!(m.artifacts.iter().any(|x| x.path == "image-alpha-mono2-in-alpha-multi.svg"));
    assert_eq!(a.checks.len(), 4);
}

#[test]
fn bundles_are_reproducible_and_hashed() {
    let ts = fixtures::hexagon_with_center(1.0);
    let cfg = config("1.0");
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let m1 = write_bundle(&analyze(&ts, &cfg).unwrap(), d1.path()).unwrap();
    let m2 = write_bundle(&analyze(&ts, &cfg).unwrap(), d2.path()).unwrap();
    assert_eq!(m1, m2);
    let text = std::fs::read_to_string(d1.path().join("manifest.json")).unwrap();
    assert_eq!(text, std::fs::read_to_string(d2.path().join("manifest.json")).unwrap());
    let parsed: Manifest = serde_json::from_str(&text).unwrap();
    for a in &parsed.artifacts {
        let bytes = std::fs::read(d1.path().join(&a.path)).unwrap();
        assert_eq!(medusa_core::pipeline::sha256_hex(&bytes), a.sha256);
    }
    assert_eq!((parsed.time_offset.as_str(), parsed.time_scale.as_str()), ("0", "1"));
}

#[test]
fn config_defaults_and_round_trip() {
    let cfg: AnalysisConfig = serde_json::from_str("{}").unwrap();
    assert_eq!(cfg.alpha0, Rational::from_integer(4));
    assert!(!cfg.oracle_check);
    let cfg: AnalysisConfig = serde_json::from_str(
        r#"{"alpha0": "0.6", "targets": ["alpha:mono1"], "inclusions": ["alpha:mono1->delaunay:mono1"], "min_persistence": 0.25}"#,
    )
    .unwrap();
    assert_eq!(cfg.alpha0, Rational::new(3, 5));
    let back: AnalysisConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
    assert_eq!(back, cfg);
    assert!(serde_json::from_str::<AnalysisConfig>(r#"{"alpha": 1}"#).is_err());
    assert!(matches!(config("-1").validate(), Err(Error::ConfigInvalid(_))));
}

#[test]
fn oracle_report_on_the_ring() {
    let ts = fixtures::hexagon_ring(1.0, 1);
    let rep = oracle_report(&ts, &config("0.6"), None).unwrap();
    assert!(rep.passed(), "{}", rep.to_text());
    assert_eq!(rep.raster.len(), 4);
    assert!(rep.raster.iter().all(|r| r.alpha == (1, 1) && r.raster == (1, 1) && r.generic));
}

#[test]
fn corrupted_medusa_is_caught() {
    let ts = fixtures::hexagon_ring(1.0, 1);
    let cfg = config("0.6");
    let a = analyze(&ts, &cfg).unwrap();
    let good = a.targets[0].medusa.to_text();
    let rep = oracle_report(&ts, &cfg, Some(&good)).unwrap();
    assert!(rep.passed(), "{}", rep.to_text());
    // drop the last cell (an edge closing the ring)
    let mut lines: Vec<&str> = good.lines().collect();
    lines.pop();
    let bad = lines.join("\n") + "\n";
    let rep = oracle_report(&ts, &cfg, Some(&bad)).unwrap();
    assert!(!rep.passed());
    assert!(!rep.checks[0].diff.is_empty());
}
