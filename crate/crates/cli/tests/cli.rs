use std::path::PathBuf;
use std::process::Command;

use arr_cli::{
    cmd_example, cmd_run, render_report, CliConfig, Format, EXIT_MISMATCH, EXIT_PASS, EXIT_USAGE,
};
use arr_core::invariants::is_smooth_ci;
use arr_core::scenarios::{self, golden};
use arr_core::{
    arrangement_top, ideal_equal, minimal_betti, ArrangementSpec, Ideal, Polynomial, PrimeField,
    Ring, ScenarioReport, Tier,
};

fn arr(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_arr"))
        .args(args)
        .env("ARR_THREADS", "2")
        .output()
        .unwrap();
    let mut text = String::from_utf8(out.stdout).unwrap();
    text.push_str(&String::from_utf8(out.stderr).unwrap());
    (out.status.code().unwrap(), text)
}

fn scenario_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("arr-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(format!("{name}.json"));
    std::fs::write(&p, body).unwrap();
    p
}

fn run_file(name: &str, body: &str) -> (i32, String) {
    let p = scenario_file(name, body);
    let mut out = Vec::new();
    let code = cmd_run(&CliConfig::default(), &p, &mut out);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn unknown_example_is_a_usage_error() {
    let (code, text) = arr(&["example", "nosuch"]);
    assert_eq!(code, EXIT_USAGE, "{text}");
    assert!(text.contains("unknown scenario `nosuch`"));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(
        arr(&["example", "plane-pencil-3", "--char", "4"]).0,
        EXIT_USAGE
    );
    assert_eq!(
        arr(&["example", "plane-pencil-3", "--order", "revlex"]).0,
        EXIT_USAGE
    );
    assert_eq!(arr(&["verify", "everything"]).0, EXIT_USAGE);
    assert_eq!(
        arr(&["example", "plane-pencil-3", "--budget-seconds", "0"]).0,
        EXIT_USAGE
    );
}

#[test]
fn plane_pencil_example_prints_ci_type() {
    let (code, text) = arr(&["example", "plane-pencil-4"]);
    assert_eq!(code, EXIT_PASS, "{text}");
    assert!(
        text.contains("sat_ci_type: expected (3,3), computed (3,3)"),
        "{text}"
    );
    assert!(text.contains("verdict: PASS"));
}

#[test]
fn extended_examples_wait_for_the_tier_flag() {
    let (code, text) = arr(&["example", "gen-ms"]);
    assert_eq!(code, EXIT_PASS);
    assert!(text.starts_with("SKIP gen-ms"), "{text}");
    assert_eq!(arr(&["example", "gen-ms", "--strict"]).0, 3);
}

#[test]
fn json_and_text_carry_the_same_values() {
    for name in ["quadric-cone-plane", "skew-lines-rao", "pencil-ci-3-2"] {
        let report = scenarios::run_scenario(name, &Default::default()).unwrap();
        let text = render_report(&report, Format::Text);
        let json = render_report(&report, Format::Json);
        let back: ScenarioReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report, "{name}");
        assert_eq!(back.to_string(), text, "{name}");
    }
    let (code, json) = arr(&["example", "plane-pencil-3", "--format", "json"]);
    assert_eq!(code, EXIT_PASS);
    let back: ScenarioReport = serde_json::from_str(&json).unwrap();
    assert!(back.passed());
    assert_eq!(
        back.result("sat_ci_type").unwrap().computed,
        Some(serde_json::json!("(2,2)"))
    );
}

#[test]
fn seed_and_field_flags_reach_the_report() {
    let (code, json) = arr(&[
        "example",
        "pencil-ci-2-2",
        "--seed",
        "9",
        "--char",
        "101",
        "--format",
        "json",
    ]);
    assert_eq!(code, EXIT_PASS, "{json}");
    let r: ScenarioReport = serde_json::from_str(&json).unwrap();
    assert_eq!(r.seed, 9);
    assert_eq!(r.field, "GF(101)");
    assert!(r.reproduction().contains("--seed 9 --char 101"));
}

#[test]
fn verify_engine_passes_and_reports_json() {
    let (code, text) = arr(&["verify", "engine"]);
    assert_eq!(code, EXIT_PASS, "{text}");
    assert!(text.contains("verify engine: 1 runs, 1 pass"), "{text}");
    let (code, json) = arr(&["verify", "invariants", "--seeds", "2", "--format", "json"]);
    assert_eq!(code, EXIT_PASS);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["seeds"], serde_json::json!([1, 2]));
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_paper_fast_passes() {
    let (code, text) = arr(&["verify", "paper-fast"]);
    assert_eq!(code, EXIT_PASS, "{text}");
    assert!(text.trim_end().ends_with(": PASS"));
}

#[test]
fn mismatch_exits_with_one_and_prints_a_reproduction() {
    let body = r#"{
        "name": "wrong-degree",
        "ring": {"nvars": 4},
        "factors": [{"general": "ring", "degree": 2, "count": 2}],
        "tasks": ["top"],
        "expect": [{"key": "top_degree", "value": 5, "source": "derived"}]
    }"#;
    let (code, text) = run_file("wrong-degree", body);
    assert_eq!(code, EXIT_MISMATCH, "{text}");
    assert!(
        text.contains("[FAIL] top_degree: expected 5, computed 4"),
        "{text}"
    );
    assert!(
        text.contains("repro: arr example wrong-degree --seed 1"),
        "{text}"
    );
}

const F: &str = "x0^2 + x1*x2 - 3*x3^2 + x0*x3";
const G: &str = "x1^2 - x0*x2 + 2*x2*x3 + 5*x3^2";

#[test]
fn two_quadrics_have_their_intersection_as_top() {
    let body = format!(
        r#"{{
        "name": "two-quadrics",
        "ring": {{"nvars": 4}},
        "factors": ["{F}", "{G}"],
        "tasks": ["top", "acm"],
        "expect": [
            {{"key": "top_ci_type", "value": "(2,2)", "source": "derived"}},
            {{"key": "top_degree", "value": 4, "source": "derived"}},
            {{"key": "top_acm", "value": true, "source": "derived"}}
        ]
    }}"#
    );
    let (code, text) = run_file("two-quadrics", &body);
    assert_eq!(code, EXIT_PASS, "{text}");

    // independent route: Jac(fg)^top against (f, g) by ideal equality
    let ring = Ring::new(PrimeField::default(), 4).unwrap();
    let f = Polynomial::parse(&ring, F).unwrap();
    let g = Polynomial::parse(&ring, G).unwrap();
    assert!(is_smooth_ci(&f, &g).unwrap());
    let spec = ArrangementSpec::new(&ring, vec![f.clone(), g.clone()]).unwrap();
    let top = arrangement_top(&spec, &[]).unwrap().top;
    assert!(ideal_equal(&top, &Ideal::new(&ring, vec![f, g]).unwrap()).unwrap());
}

#[test]
fn smooth_quadric_has_no_singular_curve() {
    let body = r#"{
        "name": "smooth-quadric",
        "ring": {"nvars": 4},
        "factors": ["x0^2 + x1^2 + x2^2 + x3^2"],
        "tasks": ["jacobian", "top"],
        "expect": [
            {"key": "top_ci_type", "value": "unit", "source": "trivial"},
            {"key": "has_codim2_singularities", "value": false, "source": "trivial"}
        ]
    }"#;
    let (code, text) = run_file("smooth-quadric", body);
    assert_eq!(code, EXIT_PASS, "{text}");
}

#[test]
fn repeated_factor_is_rejected() {
    let body = r#"{
        "name": "repeated",
        "ring": {"nvars": 4},
        "factors": ["x0 + x1", "2*x0 + 2*x1"],
        "tasks": ["top"]
    }"#;
    let (code, text) = run_file("repeated", body);
    assert_eq!(code, EXIT_USAGE, "{text}");
    assert!(text.contains("same hypersurface"), "{text}");
}

#[test]
fn malformed_files_report_positions_and_names() {
    let (code, text) = run_file(
        "broken",
        "{\n  \"name\": \"broken\",\n  \"ring\": {\"nvars\": 4,}\n}",
    );
    assert_eq!(code, EXIT_USAGE);
    assert!(text.contains("parse error at 3:"), "{text}");

    let body = r#"{"name": "lost", "ring": {"nvars": 4}, "factors": [{"general": "nowhere", "degree": 1}], "tasks": ["top"]}"#;
    let (code, text) = run_file("lost", body);
    assert_eq!(code, EXIT_USAGE);
    assert!(text.contains("nowhere"), "{text}");

    let mut out = Vec::new();
    assert_eq!(
        cmd_run(
            &CliConfig::default(),
            &PathBuf::from("/nonexistent/x.json"),
            &mut out
        ),
        EXIT_USAGE
    );
}

#[test]
fn betti_diagram_layout_is_exact() {
    let ring = Ring::new(PrimeField::default(), 4).unwrap();
    let cubic = ["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"];
    let i = Ideal::new(
        &ring,
        cubic
            .iter()
            .map(|s| Polynomial::parse(&ring, s).unwrap())
            .collect(),
    )
    .unwrap();
    let expected = concat!(
        "        0    1    2\n",
        "--------------------\n",
        "  0:    1    -    -\n",
        "  1:    -    3    2\n",
        "--------------------\n",
        "Tot:    1    3    2\n",
    );
    assert_eq!(minimal_betti(&i).unwrap().to_string(), expected);
}

#[test]
#[ignore = "extended tier: about a minute and a half in release builds"]
fn gen_ms_diagrams_match_golden_files() {
    let cfg = CliConfig {
        tier: Tier::Extended,
        format: Format::Json,
        ..CliConfig::default()
    };
    let mut out = Vec::new();
    let code = cmd_example(&cfg, "gen-ms", &mut out);
    let report: ScenarioReport = serde_json::from_slice(&out).unwrap();
    assert_eq!(code, EXIT_PASS, "{report}");
    for (key, file) in [("top_betti", "gen-ms-top"), ("rad_betti", "gen-ms-radical")] {
        let computed = report.result(key).and_then(|r| r.computed.clone()).unwrap();
        assert_eq!(computed.as_str().unwrap(), golden(file).unwrap(), "{key}");
    }
}
