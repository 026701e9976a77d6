use ivhh::cli::run;
use ivhh::report::ReportDocument;
use ivhh::Interval;
use serde_json::Value;

fn ivhh(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["ivhh"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, ReportDocument, String) {
    let mut argv = args.to_vec();
    argv.extend(["--output", "json"]);
    let (code, out, err) = ivhh(&argv);
    assert!(err.is_empty(), "{err}");
    (code, ReportDocument::from_json(&out).unwrap(), out)
}

fn interval(v: &Value) -> Interval {
    serde_json::from_value(v.clone()).unwrap()
}

#[test]
fn mt1_example_report() {
    let (code, doc, _) = json(&["check", "--chain", "mt1", "--catalog", "paper-mt1-example"]);
    assert_eq!(code, 0);
    assert_eq!(doc.exit_code, 0);
    assert!(doc.holds);
    let terms = doc.results["chain"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 5);
    for (i, t) in terms.iter().enumerate() {
        assert_eq!(t["label"], format!("mt1.T{}", i + 1));
        let v = interval(&t["value"]);
        assert!(v.hausdorff(&Interval::new(0.75, 3.0).unwrap()) < 1e-8, "{v}");
    }
    assert_eq!(doc.results["links"].as_array().unwrap().len(), 4);
    assert_eq!(doc.results["config"]["quadrature_tol"].as_f64(), Some(1e-7));
}

#[test]
fn literal_aggregate_exits_one() {
    let (code, doc, _) =
        json(&["check", "--chain", "mt2", "--catalog", "paper-mt1-example", "--squared", "--variant", "paper-literal"]);
    assert_eq!(code, 1);
    let link = &doc.results["links"][0];
    assert_eq!(link["holds"], false);
    assert!((link["defect_lo"].as_f64().unwrap() - 1.0 / 9.0).abs() < 1e-8);
    let (code, _, _) = json(&["check", "--chain", "mt2", "--catalog", "paper-mt1-example", "--squared"]);
    assert_eq!(code, 0);
}

#[test]
fn integrate_id_example() {
    let (code, doc, _) = json(&["integrate", "--catalog", "paper-id-example", "--oracle"]);
    assert_eq!(code, 0);
    let v = interval(&doc.results["integral"]);
    assert!(v.hausdorff(&Interval::new(0.75, 2.0).unwrap()) < 1e-8);
    assert_eq!(doc.results["oracle"]["mesh"], 256);

    let (code, out, _) = ivhh(&["integrate", "--lower", "x^2+1", "--upper", "12-x^2", "--domain", "0,2"]);
    assert_eq!(code, 0);
    assert!(out.contains("integral"), "{out}");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["suite", "unknown"][..],
        &["check", "--catalog", "paper-mt1-example"],
        &["check", "--chain", "mt1", "--catalog", "nope"],
        &["check", "--chain", "mt1", "--catalog", "quadratic-band"],
        &["check", "--chain", "mt2", "--catalog", "paper-mt1-example"],
        &["check", "--chain", "mt1", "--catalog", "paper-mt1-example", "--tol", "0"],
        &["check", "--chain", "mt1", "--catalog", "paper-mt1-example", "--scalar"],
        &["check", "--chain", "zhtm1", "--catalog", "quadratic-band", "--h", "expr:(t-0.5)^2"],
        &["integrate", "--lower", "x**2", "--upper", "x", "--domain", "0,1"],
        &["integrate", "--lower", "x", "--upper", "x", "--domain", "1,0"],
        &["integrate", "--lower", "x", "--upper", "x"],
        &["integrate", "--catalog", "paper-id-example", "--nodes", "1"],
        &["convexity", "--mode", "h1d", "--catalog", "paper-mt1-example"],
        &["convexity", "--catalog", "paper-mt1-example", "--tol", "-1"],
        &["frobnicate"],
    ] {
        let (code, _, err) = ivhh(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn endpoint_order_violation_is_reported() {
    let (code, _, err) = ivhh(&["integrate", "--lower", "x", "--upper", "1-x", "--domain", "0,1"]);
    assert_eq!(code, 2);
    assert!(err.contains("error"), "{err}");
}

#[test]
fn help_goes_to_stdout() {
    let (code, out, _) = ivhh(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("check"));
}

#[test]
fn reports_round_trip_byte_for_byte() {
    let (_, doc, text) = json(&["convexity", "--mode", "joint", "--catalog", "paper-coord-counterexample", "--seed", "9"]);
    assert_eq!(doc.to_json().unwrap(), text.trim_end());
    let reparsed: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&reparsed).unwrap(), text.trim_end());
}

#[test]
fn identical_runs_give_identical_reports() {
    let args = ["convexity", "--mode", "coord", "--catalog", "paper-coord-counterexample", "--seed", "5", "--samples", "500"];
    let (_, a, _) = json(&args);
    let (_, b, _) = json(&args);
    assert_eq!(a.without_duration().to_json().unwrap(), b.without_duration().to_json().unwrap());

    let args = ["integrate", "--catalog", "paper-coord-counterexample", "--oracle", "--tags", "random", "--seed", "3"];
    let (_, a, _) = json(&args);
    let (_, b, _) = json(&args);
    assert_eq!(a.without_duration(), b.without_duration());
}

#[test]
fn convexity_modes() {
    let (code, doc, _) = json(&["convexity", "--mode", "joint", "--catalog", "paper-coord-counterexample"]);
    assert_eq!(code, 1);
    let top = &doc.results["verdict"]["witnesses"][0];
    assert!((top["defect"].as_f64().unwrap() - 0.25).abs() < 1e-12);

    let (code, doc, _) = json(&["convexity", "--catalog", "paper-coord-counterexample"]);
    assert_eq!(code, 0);
    assert_eq!(doc.results["verdict"]["sections"]["holds"], true);

    let (code, _, _) = ivhh(&["convexity", "--mode", "h1d", "--catalog", "quadratic-band", "--h", "pow:1"]);
    assert_eq!(code, 0);
    let (code, out, _) = ivhh(&["convexity", "--mode", "h1d", "--lower", "x^2", "--upper", "x^2", "--domain", "0,1"]);
    assert_eq!(code, 1);
    assert!(out.contains("violate"), "{out}");
    let (code, _, _) =
        ivhh(&["convexity", "--mode", "h1d", "--lower", "x^2", "--upper", "x^2", "--domain", "0,1", "--scalar"]);
    assert_eq!(code, 0);
}

#[test]
fn one_variable_chains() {
    let (code, doc, _) = json(&["check", "--chain", "zhtm1", "--catalog", "quadratic-band"]);
    assert_eq!(code, 0);
    let want = [(2.0, 11.0), (7.0 / 3.0, 32.0 / 3.0), (3.0, 10.0)];
    for (t, (lo, hi)) in doc.results["chain"]["terms"].as_array().unwrap().iter().zip(want) {
        assert!(interval(&t["value"]).hausdorff(&Interval::new(lo, hi).unwrap()) < 1e-8);
    }
    for chain in ["k3", "k4", "k5", "k6"] {
        let (code, doc, _) = json(&["check", "--chain", chain, "--catalog", "linear-double", "--g-catalog", "linear-triple"]);
        assert_eq!(code, 0, "{chain}");
        assert_eq!(doc.results["chain"]["chain"], chain);
    }
    let (code, _, _) = ivhh(&[
        "check", "--chain", "k4", "--lower", "x", "--upper", "2*x", "--domain", "1,2", "--g-lower", "x", "--g-upper", "3*x",
        "--h", "pow:1", "--h2", "t",
    ]);
    assert_eq!(code, 0);
    let (code, _, _) = ivhh(&["check", "--chain", "k2", "--lower", "x^2", "--upper", "x^2", "--domain", "0,1", "--scalar"]);
    assert_eq!(code, 0);
}

#[test]
fn golden_suite_passes() {
    let (code, doc, _) = json(&["suite", "paper-golden"]);
    assert_eq!(code, 0);
    assert!(doc.results["cases"].as_array().unwrap().iter().all(|c| c["holds"] == true));
}
