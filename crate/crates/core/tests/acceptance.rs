//! Acceptance run: one PASS/FAIL line per criterion. Criterion 5 (the
//! extended tier) only runs with `ARR_EXTENDED=1` and never gates.
//!
//! Pinned limits: exact equality everywhere; wall clock per scenario at
//! most 10 s for fast-tier runs and 600 s for standard-tier runs.

use std::process::ExitCode;
use std::time::Instant;

use arr_core::scenarios::{find, ordered_parallel, run, Outcome, Verdict};
use arr_core::{suites, Budget, Overrides, PrimeField, ScenarioReport};

const FAST_LIMIT_MS: u64 = 10_000;
const STANDARD_LIMIT_MS: u64 = 600_000;

struct Line {
    id: &'static str,
    title: &'static str,
    pass: bool,
    detail: String,
    gating: bool,
}

fn threads() -> usize {
    std::env::var("ARR_THREADS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

/// Runs `(scenario, seed)` pairs and checks each passes within `limit_ms`
/// with every `required` key matched.
fn scenario_runs(
    runs: &[(String, Option<u64>)],
    limit_ms: u64,
    required: &[(&str, &str)],
) -> (bool, String) {
    let reports: Vec<Result<ScenarioReport, String>> = ordered_parallel(
        runs,
        threads(),
        |(name, seed)| {
            let sc = find(name).ok_or_else(|| format!("{name} is not registered"))?;
            run(
                sc,
                &Overrides {
                    seed: *seed,
                    ..Default::default()
                },
            )
            .map_err(|e| format!("{name}: {e}"))
        },
        |_, _| {},
    );
    let mut failures = Vec::new();
    let mut max_ms = 0;
    for r in &reports {
        match r {
            Err(e) => failures.push(e.clone()),
            Ok(rep) => {
                max_ms = max_ms.max(rep.elapsed_ms);
                if rep.outcome() != Outcome::Pass {
                    failures.push(format!("{:?}: {}", rep.outcome(), rep.reproduction()));
                }
                if rep.elapsed_ms > limit_ms {
                    failures.push(format!("{} took {} ms", rep.reproduction(), rep.elapsed_ms));
                }
            }
        }
    }
    for (name, key) in required {
        for r in reports.iter().flatten().filter(|r| r.name == *name) {
            match r.result(key) {
                Some(x) if x.verdict == Verdict::Match => {}
                Some(x) => failures.push(format!("{name} {key}: {:?}", x.verdict)),
                None => failures.push(format!("{name} has no expectation {key}")),
            }
        }
    }
    let pass = failures.is_empty();
    let mut detail = format!(
        "{} runs, slowest {:.2} s (limit {} s)",
        runs.len(),
        max_ms as f64 / 1000.0,
        limit_ms / 1000
    );
    for f in failures.iter().take(6) {
        detail.push_str(&format!("\n      {f}"));
    }
    (pass, detail)
}

fn seeded(names: &[String], seeds: std::ops::RangeInclusive<u64>) -> Vec<(String, Option<u64>)> {
    names
        .iter()
        .flat_map(|n| seeds.clone().map(move |s| (n.clone(), Some(s))))
        .collect()
}

fn criterion_1() -> (bool, String) {
    let pairs: Vec<(usize, u32)> = (2..=6)
        .map(|s| (s, 1))
        .chain((2..=4).map(|s| (s, 2)))
        .chain((2..=3).map(|s| (s, 3)))
        .collect();
    let mut names = Vec::new();
    for (s, d) in &pairs {
        names.push(format!("pencil-ci-{s}-{d}"));
        names.push(format!("star-config-{s}-{d}"));
    }
    names.extend((2..=6).map(|e| format!("plane-pencil-{e}")));
    let required: Vec<(String, String)> = pairs
        .iter()
        .flat_map(|(s, d)| {
            [
                (format!("pencil-ci-{s}-{d}"), "sat_ci_type".to_string()),
                (format!("star-config-{s}-{d}"), "star_degree".to_string()),
            ]
        })
        .chain((2..=6).map(|e| (format!("plane-pencil-{e}"), "jac_saturated".to_string())))
        .collect();
    let req: Vec<(&str, &str)> = required
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    scenario_runs(&seeded(&names, 1..=5), FAST_LIMIT_MS, &req)
}

fn criterion_2() -> (bool, String) {
    let runs: Vec<(String, Option<u64>)> = [
        "liaison-addition-random",
        "skew-lines-rao",
        "decomposition-random",
        "bdl-random",
    ]
    .iter()
    .map(|n| (n.to_string(), None))
    .collect();
    let (pass, mut detail) = scenario_runs(&runs, STANDARD_LIMIT_MS, &[]);
    let counts: Vec<String> = runs
        .iter()
        .filter_map(|(n, _)| {
            find(n).and_then(|s| s.family.as_ref().map(|f| format!("{n} x{}", f.count)))
        })
        .collect();
    detail = format!("{detail}; {}", counts.join(", "));
    (pass, detail)
}

fn criterion_3() -> (bool, String) {
    let (pass, detail) = scenario_runs(
        &[("main-theorem-random".into(), None)],
        STANDARD_LIMIT_MS,
        &[],
    );
    let n = find("main-theorem-random")
        .and_then(|s| s.family.as_ref())
        .map_or(0, |f| f.count);
    (pass, format!("{n} arrangements; {detail}"))
}

fn criterion_4() -> (bool, String) {
    let required = [
        ("planes-through-point", "sat_hp"),
        ("planes-through-point", "top_hp"),
        ("planes-through-point", "top_acm"),
        ("twc-3", "piece_degree@C"),
        ("twc-3", "top_degree"),
        ("twc-3", "top_acm"),
        ("twc-4", "piece_degree@C"),
        ("twc-4", "top_degree"),
        ("twc-4", "top_acm"),
        ("twc-5", "top_degree"),
        ("twc-5", "top_acm"),
        ("three-quadrics-line", "piece_degree@line"),
        ("three-quadrics-line", "piece_acm@line"),
        ("three-quadrics-line", "piece_ci_type@line"),
        ("four-cubics-p2", "piece_degree@P"),
        ("four-cubics-p2", "piece_generators@P"),
        ("skew-lines-rao", "subject_rao_dims"),
    ];
    let mut names: Vec<String> = required.iter().map(|(n, _)| n.to_string()).collect();
    names.dedup();
    let runs: Vec<(String, Option<u64>)> = names.into_iter().map(|n| (n, None)).collect();
    scenario_runs(&runs, STANDARD_LIMIT_MS, &required)
}

fn criterion_5() -> Option<(bool, String)> {
    std::env::var_os("ARR_EXTENDED")?;
    let names = [
        "counterexa",
        "gen-ms",
        "tangent-double-line",
        "twc-6",
        "twc-7",
        "twc-8",
        "twc-9",
        "twc-10",
        "twc-11",
    ];
    let runs: Vec<(String, Option<u64>)> = names.iter().map(|n| (n.to_string(), None)).collect();
    Some(scenario_runs(&runs, 4 * 3600 * 1000, &[]))
}

fn criterion_6() -> (bool, String) {
    let start = Instant::now();
    let k = PrimeField::default();
    match suites::engine(&k, 200, 1, &Budget::default().with_seconds(600.0)) {
        Ok(rep) => {
            let mut detail = rep
                .checks
                .iter()
                .map(|c| format!("{} {}", c.name, c.computed))
                .collect::<Vec<_>>()
                .join("; ");
            detail.push_str(&format!(" ({:.1} s)", start.elapsed().as_secs_f64()));
            (rep.passed() && rep.warnings().next().is_none(), detail)
        }
        Err(e) => (false, e.to_string()),
    }
}

fn criterion_7() -> (bool, String) {
    scenario_runs(&[("minors-random".into(), None)], FAST_LIMIT_MS, &[])
}

fn main() -> ExitCode {
    // `cargo test -- --list` and friends probe every test binary
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut add = |id, title, gating, (pass, detail): (bool, String)| {
        let l = Line {
            id,
            title,
            pass,
            detail,
            gating,
        };
        println!(
            "criterion {} {} {}: {}",
            l.id,
            if l.pass { "PASS" } else { "FAIL" },
            l.title,
            l.detail
        );
        lines.push(l);
    };
    add("1", "pencil theorems", true, criterion_1());
    add("2", "liaison machinery", true, criterion_2());
    add("3", "main theorem", true, criterion_3());
    add("4", "published numbers, standard tier", true, criterion_4());
    match criterion_5() {
        Some(r) => add(
            "5",
            "published numbers, extended tier (non-gating)",
            false,
            r,
        ),
        None => println!(
            "criterion 5 SKIP published numbers, extended tier (non-gating): set ARR_EXTENDED=1"
        ),
    }
    add("6", "engine oracle", true, criterion_6());
    add("7", "minor codimensions", true, criterion_7());
    let failed: Vec<&str> = lines
        .iter()
        .filter(|l| l.gating && !l.pass)
        .map(|l| l.id)
        .collect();
    println!(
        "acceptance: {} gating failures, {:.1} s",
        failed.len(),
        start.elapsed().as_secs_f64()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
