//! Behavior of the `diagon` binary: exit codes, report schema stability,
//! and flag handling.

use diagon_cli::{exit_code, RunReport};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn diagon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diagon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn parse_report(output: &Output) -> RunReport {
    serde_json::from_slice(&output.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not a report: {e}\n{}",
            String::from_utf8_lossy(&output.stdout)
        )
    })
}

#[test]
fn diagonalize_emits_report_and_exit_zero() {
    let out = diagon(&["diagonalize", fixture("shifted_parabola.dioph").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(exit_code::OK));
    let report = parse_report(&out);
    assert_eq!(report.command, "diagonalize");
    assert_eq!(report.diagonal_equation.as_deref(), Some("x1^2 - 5*x2 = 0"));
    let t = report.transform.unwrap();
    assert_eq!(t.matrix, vec![vec![(1, 1), (-3, 1)], vec![(0, 1), (2, 1)]]);
    assert_eq!(t.translation, vec![(-4, 1), (2, 1)]);
    assert_eq!(report.det, Some((2, 1)));
    assert_eq!(report.unimodular, Some(false));
    assert!(report.warnings.is_empty());
}

#[test]
fn diagonalize_already_diagonal_is_warning_free_identity() {
    let out = diagon(&["diagonalize", fixture("diag_difference.dioph").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(exit_code::OK));
    let report = parse_report(&out);
    assert_eq!(report.chain.as_deref(), Some(&[][..]));
    assert_eq!(report.diagonal_equation.as_deref(), Some("x1^2 - x2^2 = 0"));
    assert_eq!(report.unimodular, Some(true));
    assert!(report.warnings.is_empty());
}

#[test]
fn diagonalize_flags_non_integer_center() {
    let out = diagon(&["diagonalize", fixture("half_center.dioph").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(exit_code::OK));
    let report = parse_report(&out);
    assert!(report
        .warnings
        .iter()
        .any(|w| w.contains("preservation-unverified")));
    let t = report.transform.unwrap();
    assert_eq!(t.translation[0], (-1, 2));
}

#[test]
fn parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.dioph");
    std::fs::write(&bad, "x1 + lambda = 0\n").unwrap();
    let out = diagon(&["diagonalize", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(exit_code::PARSE));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 1"), "stderr: {stderr}");

    let missing = diagon(&["count", "/nonexistent/equation.dioph", "-n", "3"]);
    assert_eq!(missing.status.code(), Some(exit_code::PARSE));
}

#[test]
fn pipeline_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("unsplittable.dioph");
    std::fs::write(&path, "x1^3 + x1^2*x2 + x1*x2^2 + x2^3 = 0\n").unwrap();
    let out = diagon(&["diagonalize", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(exit_code::PIPELINE));
    assert!(out.stdout.is_empty(), "no report on failure");
}

#[test]
fn verify_exit_codes_cover_all_verdicts() {
    let preserved = diagon(&[
        "verify",
        fixture("cross_hyperbola.dioph").to_str().unwrap(),
        "--grid",
        "16,32,64,128",
    ]);
    assert_eq!(preserved.status.code(), Some(exit_code::OK));
    assert_eq!(
        parse_report(&preserved).verdict.as_deref(),
        Some("preserved")
    );

    // an absurdly tight tolerance turns a small exponent gap into a
    // divergent verdict
    let divergent = diagon(&[
        "verify",
        fixture("shifted_parabola.dioph").to_str().unwrap(),
        "--grid",
        "32,64,128,256",
        "--tol",
        "0.0001",
    ]);
    assert_eq!(divergent.status.code(), Some(exit_code::DIVERGENT));
    assert_eq!(
        parse_report(&divergent).verdict.as_deref(),
        Some("divergent")
    );

    let inconclusive = diagon(&[
        "verify",
        fixture("empty_circle.dioph").to_str().unwrap(),
        "--grid",
        "8,16,32",
    ]);
    assert_eq!(inconclusive.status.code(), Some(exit_code::INCONCLUSIVE));
    let report = parse_report(&inconclusive);
    assert_eq!(report.verdict.as_deref(), Some("inconclusive"));
    assert!(!report.warnings.is_empty());
}

#[test]
fn count_hypercube_and_pullback_regions() {
    let out = diagon(&[
        "count",
        fixture("cross_hyperbola.dioph").to_str().unwrap(),
        "-n",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(exit_code::OK));
    let report = parse_report(&out);
    let counts = report.counts.unwrap();
    assert_eq!((counts[0].n, counts[0].count), (3, 9));
    assert_eq!(counts[0].region, "hypercube");

    let pulled = diagon(&[
        "count",
        fixture("cross_hyperbola.dioph").to_str().unwrap(),
        "-n",
        "3",
        "--region",
        "pullback",
    ]);
    let report = parse_report(&pulled);
    let counts = report.counts.unwrap();
    assert_eq!((counts[0].n, counts[0].count), (3, 9));
    assert_eq!(counts[0].region, "pullback-image");
}

#[test]
fn count_ceiling_refusal_exits_six() {
    let out = diagon(&[
        "count",
        fixture("wide_scan.dioph").to_str().unwrap(),
        "-n",
        "10000",
    ]);
    assert_eq!(out.status.code(), Some(exit_code::CEILING));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("ceiling"), "stderr: {stderr}");
}

#[test]
fn ceiling_env_and_flag_precedence() {
    let via_env = Command::new(env!("CARGO_BIN_EXE_diagon"))
        .args([
            "count",
            fixture("cross_hyperbola.dioph").to_str().unwrap(),
            "-n",
            "50",
        ])
        .env("DIAGON_CEILING", "10")
        .output()
        .unwrap();
    assert_eq!(via_env.status.code(), Some(exit_code::CEILING));

    // an explicit flag overrides the environment
    let via_flag = Command::new(env!("CARGO_BIN_EXE_diagon"))
        .args([
            "count",
            fixture("cross_hyperbola.dioph").to_str().unwrap(),
            "-n",
            "50",
            "--ceiling",
            "1000000",
        ])
        .env("DIAGON_CEILING", "10")
        .output()
        .unwrap();
    assert_eq!(via_flag.status.code(), Some(exit_code::OK));
}

#[test]
fn fit_reports_samples_alpha_and_prediction() {
    let out = diagon(&[
        "fit",
        fixture("cone_3.dioph").to_str().unwrap(),
        "--grid",
        "50,100,200",
    ]);
    assert_eq!(out.status.code(), Some(exit_code::OK));
    let report = parse_report(&out);
    let fit = report.fit.unwrap();
    assert!(fit.alpha > 0.8 && fit.alpha < 1.5, "alpha = {}", fit.alpha);
    assert_eq!(report.counts.unwrap().len(), 3);
    // the cone is an indefinite unit ternary form, so the band check runs
    assert_eq!(report.verdict.as_deref(), Some("consistent"));
    assert_eq!(report.prediction.unwrap().exponent, (1, 1));
}

#[test]
fn fermat_constant_flag_tightens_the_band() {
    // squashing the multiplier turns healthy N log N growth into a
    // violation of the upper band
    let out = diagon(&[
        "fit",
        fixture("cone_3.dioph").to_str().unwrap(),
        "--grid",
        "50,100,200",
        "--fermat-constant",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(exit_code::OK));
    let report = parse_report(&out);
    assert_eq!(report.verdict.as_deref(), Some("upper-suspicious"));
}

#[test]
fn classify_reports_normal_form_for_unit_minor_cone() {
    let out = diagon(&["classify", fixture("cone_3.dioph").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(exit_code::OK));
    let report = parse_report(&out);
    assert_eq!(report.surface.as_deref(), Some("central-at-origin"));
    let sig = report.signature.unwrap();
    assert_eq!((sig.positive, sig.negative, sig.zero), (2, 1, 0));
    let nf = report.normal_form.unwrap();
    assert_eq!((nf.case, nf.solvable), (7, true));
}

#[test]
fn workers_flag_reproduces_counts() {
    let reference = diagon(&[
        "count",
        fixture("cone_3.dioph").to_str().unwrap(),
        "-n",
        "40",
    ]);
    let reference_count = parse_report(&reference).counts.unwrap()[0].count;
    for workers in ["1", "2", "4"] {
        let out = diagon(&[
            "--workers",
            workers,
            "count",
            fixture("cone_3.dioph").to_str().unwrap(),
            "-n",
            "40",
        ]);
        assert_eq!(
            parse_report(&out).counts.unwrap()[0].count,
            reference_count,
            "workers = {workers}"
        );
    }
}

#[test]
fn output_flag_writes_identical_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = diagon(&[
        "diagonalize",
        fixture("cross_hyperbola.dioph").to_str().unwrap(),
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(exit_code::OK));
    let from_stdout = parse_report(&out);
    let from_file: RunReport =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(from_stdout, from_file);
}

#[test]
fn text_mode_is_human_readable() {
    let out = diagon(&[
        "--text",
        "diagonalize",
        fixture("shifted_parabola.dioph").to_str().unwrap(),
    ]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("diagonal:  x1^2 - 5*x2 = 0"));
    assert!(serde_json::from_str::<RunReport>(&text).is_err());
}

#[test]
fn reports_round_trip_through_json() {
    let fixtures = [
        ("diagonalize", vec!["diagonalize"]),
        ("verify", vec!["verify", "--grid", "8,16,32"]),
        ("count", vec!["count", "-n", "5"]),
        ("fit", vec!["fit", "--grid", "8,16,32"]),
        ("classify", vec!["classify"]),
    ];
    let path = fixture("cross_hyperbola.dioph");
    for (name, args) in fixtures {
        let mut full: Vec<&str> = vec![args[0], path.to_str().unwrap()];
        full.extend(&args[1..]);
        let out = diagon(&full);
        let report = parse_report(&out);
        let json = report.to_json();
        let back: RunReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report, "round trip failed for {name}");
        assert_eq!(back.to_json(), json);
    }
}
