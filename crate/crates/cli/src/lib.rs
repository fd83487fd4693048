//! Command implementations behind the `arr` binary. Each command returns
//! its exit code; text or JSON goes to the supplied writer.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use arr_core::scenarios::{self, ordered_parallel, Outcome};
use arr_core::{
    suites, ArrError, Budget, Field, MonomialOrder, Overrides, PrimeField, RationalField, Report,
    Scenario, ScenarioReport, Tier,
};
use serde::Serialize;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug)]
pub struct CliConfig {
    /// 0 for the rationals.
    pub characteristic: Option<u64>,
    pub seed: Option<u64>,
    pub order: Option<MonomialOrder>,
    pub budget_seconds: Option<f64>,
    pub budget_degree: Option<i32>,
    pub budget_pairs: Option<u64>,
    /// Highest tier `example` and `verify` will run.
    pub tier: Tier,
    pub format: Format,
    /// Budget exhaustion exits with 3 instead of 0.
    pub strict: bool,
    pub force: bool,
    pub threads: usize,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            characteristic: None,
            seed: None,
            order: None,
            budget_seconds: None,
            budget_degree: None,
            budget_pairs: None,
            tier: Tier::Standard,
            format: Format::Text,
            strict: false,
            force: false,
            threads: 1,
        }
    }
}

impl CliConfig {
    pub fn validate(&self) -> Result<(), String> {
        if let Some(p) = self.characteristic.filter(|&p| p != 0) {
            let p32 = u32::try_from(p)
                .map_err(|_| format!("characteristic {p} does not fit in 32 bits"))?;
            PrimeField::new(p32).map_err(|e| e.to_string())?;
        }
        if let Some(s) = self.budget_seconds {
            if !(s > 0.0 && s.is_finite()) {
                return Err(format!("--budget-seconds must be positive, got {s}"));
            }
        }
        if self.budget_degree.is_some_and(|d| d <= 0) {
            return Err("--budget-degree must be positive".into());
        }
        if self.budget_pairs == Some(0) {
            return Err("--budget-pairs must be positive".into());
        }
        if self.threads == 0 {
            return Err("thread count must be positive".into());
        }
        Ok(())
    }

    pub fn overrides(&self, seed: Option<u64>) -> Overrides {
        Overrides {
            seed: seed.or(self.seed),
            characteristic: self.characteristic,
            order: self.order,
            budget_seconds: self.budget_seconds,
            budget_degree: self.budget_degree,
            budget_pairs: self.budget_pairs,
            force: self.force,
        }
    }

    fn outcome_code(&self, o: Outcome) -> i32 {
        match o {
            Outcome::Pass => EXIT_PASS,
            Outcome::Mismatch => EXIT_MISMATCH,
            Outcome::Budget if self.strict => EXIT_BUDGET,
            Outcome::Budget => EXIT_PASS,
            Outcome::Internal => EXIT_INTERNAL,
        }
    }

    fn error_code(&self, e: &ArrError) -> i32 {
        match e {
            ArrError::BudgetExhausted { .. } if self.strict => EXIT_BUDGET,
            ArrError::BudgetExhausted { .. } => EXIT_PASS,
            ArrError::Parse { .. }
            | ArrError::Precondition(_)
            | ArrError::Scenario(_)
            | ArrError::UnknownScenario(_)
            | ArrError::InvalidField(_)
            | ArrError::ContextMismatch(_)
            | ArrError::Io(_)
            | ArrError::Json(_) => EXIT_USAGE,
            _ => EXIT_INTERNAL,
        }
    }
}

/// Worst of several exit codes: mismatch, then internal, then budget.
pub fn combine_codes(codes: impl IntoIterator<Item = i32>) -> i32 {
    let rank = |c: i32| match c {
        EXIT_MISMATCH => 4,
        EXIT_USAGE => 3,
        EXIT_INTERNAL => 2,
        EXIT_BUDGET => 1,
        _ => 0,
    };
    codes
        .into_iter()
        .max_by_key(|&c| rank(c))
        .unwrap_or(EXIT_PASS)
}

/// Parallelism from `ARR_THREADS`, else the machine's.
pub fn default_threads() -> usize {
    std::env::var("ARR_THREADS")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

pub fn render_report(report: &ScenarioReport, format: Format) -> String {
    match format {
        Format::Text => report.to_string(),
        Format::Json => serde_json::to_string_pretty(report).expect("reports serialize") + "\n",
    }
}

fn write_out(out: &mut (dyn Write + Send), s: &str) {
    // a closed pipe is not worth a panic
    let _ = out.write_all(s.as_bytes());
    let _ = out.flush();
}

fn usage_error(out: &mut (dyn Write + Send), msg: &str) -> i32 {
    write_out(out, &format!("error: {msg}\n"));
    EXIT_USAGE
}

/// `arr example NAME`: one registry scenario.
pub fn cmd_example(cfg: &CliConfig, name: &str, out: &mut (dyn Write + Send)) -> i32 {
    if let Err(e) = cfg.validate() {
        return usage_error(out, &e);
    }
    let Some(sc) = scenarios::find(name) else {
        return usage_error(
            out,
            &format!("unknown scenario `{name}`; `arr list` shows the registry"),
        );
    };
    if sc.tier > cfg.tier && !cfg.force {
        write_out(
            out,
            &format!(
                "SKIP {name}: {} tier is above --tier {}; rerun with --tier {}\n",
                sc.tier, cfg.tier, sc.tier
            ),
        );
        return if cfg.strict { EXIT_BUDGET } else { EXIT_PASS };
    }
    run_one(cfg, sc, out)
}

/// `arr run FILE`: an ad-hoc scenario read from JSON.
pub fn cmd_run(cfg: &CliConfig, path: &Path, out: &mut (dyn Write + Send)) -> i32 {
    if let Err(e) = cfg.validate() {
        return usage_error(out, &e);
    }
    let src = match std::fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => return usage_error(out, &format!("{}: {e}", path.display())),
    };
    let sc = match Scenario::from_json(&src) {
        Ok(sc) => sc,
        Err(e) => return usage_error(out, &format!("{}: {e}", path.display())),
    };
    run_one(cfg, &sc, out)
}

fn run_one(cfg: &CliConfig, sc: &Scenario, out: &mut (dyn Write + Send)) -> i32 {
    match scenarios::run(sc, &cfg.overrides(None)) {
        Ok(report) => {
            write_out(out, &render_report(&report, cfg.format));
            cfg.outcome_code(report.outcome())
        }
        Err(e) => {
            let code = cfg.error_code(&e);
            write_out(out, &format!("error: {}: {e}\n", sc.name));
            code
        }
    }
}

/// `arr list`: registered scenarios up to the configured tier.
pub fn cmd_list(cfg: &CliConfig, out: &mut (dyn Write + Send)) -> i32 {
    let mut s = String::new();
    for sc in scenarios::registry()
        .iter()
        .filter(|sc| sc.tier <= cfg.tier || cfg.force)
    {
        let flag = if sc.disabled { " (disabled)" } else { "" };
        let _ = writeln!(
            s,
            "{:<28} {:<9} {}{flag}",
            sc.name,
            sc.tier.to_string(),
            sc.description
        );
    }
    write_out(out, &s);
    EXIT_PASS
}

pub const SUITES: &[&str] = &[
    "engine",
    "ideals",
    "invariants",
    "theorems",
    "paper-fast",
    "paper-standard",
    "paper-extended",
];

/// Instance counts per seed of the randomized suites.
pub fn suite_size(suite: &str) -> usize {
    match suite {
        "engine" => 200,
        "ideals" => 100,
        _ => 50,
    }
}

#[derive(Serialize)]
struct SuiteSummary<'a> {
    suite: &'a str,
    seeds: Vec<u64>,
    exit_code: i32,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    checks: Vec<SeededReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    scenarios: Vec<ScenarioReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    over_budget: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    errors: Vec<String>,
}

impl SuiteSummary<'_> {
    fn failure(&mut self, cfg: &CliConfig, what: String, e: &ArrError) -> i32 {
        let line = format!("{what}: {e}");
        if e.is_budget() {
            self.over_budget.push(line);
        } else {
            self.errors.push(line);
        }
        cfg.error_code(e)
    }
}

#[derive(Serialize)]
struct SeededReport {
    seed: u64,
    report: Report,
}

/// `arr verify SUITE`: a randomized property suite or a tier of the
/// registry. `seeds` of `Some(n)` sweeps seeds `1..=n`.
pub fn cmd_verify(
    cfg: &CliConfig,
    suite: &str,
    seeds: Option<u64>,
    out: &mut (dyn Write + Send),
) -> i32 {
    if let Err(e) = cfg.validate() {
        return usage_error(out, &e);
    }
    let seed_list: Vec<u64> = match (seeds, cfg.seed) {
        (Some(0), _) => return usage_error(out, "--seeds must be positive"),
        (Some(n), _) => (1..=n).collect(),
        (None, Some(s)) => vec![s],
        (None, None) => Vec::new(),
    };
    match suite {
        "engine" | "ideals" | "invariants" => {
            let seeds = if seed_list.is_empty() {
                vec![1]
            } else {
                seed_list
            };
            match cfg.characteristic {
                Some(0) => verify_properties(cfg, suite, &RationalField, &seeds, out),
                p => {
                    let p = p.unwrap_or(arr_core::DEFAULT_PRIME as u64) as u32;
                    verify_properties(
                        cfg,
                        suite,
                        &PrimeField::new(p).expect("validated"),
                        &seeds,
                        out,
                    )
                }
            }
        }
        "theorems" => {
            let list: Vec<&Scenario> = scenarios::registry()
                .iter()
                .filter(|s| s.family.is_some() && s.tier <= cfg.tier)
                .collect();
            verify_scenarios(cfg, suite, &list, &seed_list, out)
        }
        _ => {
            let Some(tier) = suite
                .strip_prefix("paper-")
                .and_then(|t| t.parse::<Tier>().ok())
            else {
                return usage_error(
                    out,
                    &format!("unknown suite `{suite}`; one of {}", SUITES.join(", ")),
                );
            };
            let list: Vec<&Scenario> = scenarios::registry()
                .iter()
                .filter(|s| s.family.is_none() && s.tier == tier)
                .collect();
            verify_scenarios(cfg, suite, &list, &seed_list, out)
        }
    }
}

fn verify_properties<K: Field>(
    cfg: &CliConfig,
    suite: &str,
    field: &K,
    seeds: &[u64],
    out: &mut (dyn Write + Send),
) -> i32 {
    let n = suite_size(suite);
    let secs = cfg
        .budget_seconds
        .unwrap_or(Tier::Standard.budget_seconds());
    let work = |&seed: &u64| {
        let mut budget = Budget::default().with_seconds(secs);
        budget.max_degree = cfg.budget_degree;
        budget.max_pairs = cfg.budget_pairs;
        let r = match suite {
            "engine" => suites::engine(field, n, seed, &budget),
            "ideals" => suites::ideals(field, n, seed, &budget),
            _ => suites::invariants(field, n, seed, &budget),
        };
        (seed, r)
    };
    let text = cfg.format == Format::Text;
    let results = ordered_parallel(seeds, cfg.threads, work, |_, (seed, r)| {
        if !text {
            return;
        }
        let s = match r {
            Ok(rep) if rep.passed() => format!("seed {seed}: {rep}"),
            Ok(rep) => format!(
                "seed {seed}: {rep}  repro: arr verify {suite} --seed {seed} --char {}\n",
                field.characteristic()
            ),
            Err(e) => format!("seed {seed}: {e}\n"),
        };
        write_out(out, &s);
    });
    let mut codes = Vec::new();
    let mut summary = SuiteSummary {
        suite,
        seeds: seeds.to_vec(),
        exit_code: 0,
        checks: Vec::new(),
        scenarios: Vec::new(),
        over_budget: Vec::new(),
        errors: Vec::new(),
    };
    for (seed, r) in results {
        match r {
            Ok(rep) => {
                codes.push(if rep.passed() {
                    EXIT_PASS
                } else {
                    EXIT_MISMATCH
                });
                summary.checks.push(SeededReport { seed, report: rep });
            }
            Err(e) => codes.push(summary.failure(cfg, format!("seed {seed}"), &e)),
        }
    }
    let code = combine_codes(codes);
    summary.exit_code = code;
    finish(cfg, suite, &summary, out)
}

fn verify_scenarios(
    cfg: &CliConfig,
    suite: &str,
    list: &[&Scenario],
    seeds: &[u64],
    out: &mut (dyn Write + Send),
) -> i32 {
    let runs: Vec<(&Scenario, Option<u64>)> = if seeds.is_empty() {
        list.iter().map(|&s| (s, None)).collect()
    } else {
        list.iter()
            .flat_map(|&s| seeds.iter().map(move |&k| (s, Some(k))))
            .collect()
    };
    let text = cfg.format == Format::Text;
    let results = ordered_parallel(
        &runs,
        cfg.threads,
        |(sc, seed)| scenarios::run(sc, &cfg.overrides(*seed)),
        |k, r| {
            if !text {
                return;
            }
            let s = match r {
                Ok(rep) => rep.to_string(),
                Err(e) => format!("error: {}: {e}\n", runs[k].0.name),
            };
            write_out(out, &s);
        },
    );
    let mut summary = SuiteSummary {
        suite,
        seeds: seeds.to_vec(),
        exit_code: 0,
        checks: Vec::new(),
        scenarios: Vec::new(),
        over_budget: Vec::new(),
        errors: Vec::new(),
    };
    let mut codes = Vec::new();
    for (r, (sc, _)) in results.into_iter().zip(&runs) {
        match r {
            Ok(rep) => {
                codes.push(cfg.outcome_code(rep.outcome()));
                summary.scenarios.push(rep);
            }
            Err(e) => codes.push(summary.failure(cfg, sc.name.clone(), &e)),
        }
    }
    summary.exit_code = combine_codes(codes);
    finish(cfg, suite, &summary, out)
}

fn finish(
    cfg: &CliConfig,
    suite: &str,
    summary: &SuiteSummary,
    out: &mut (dyn Write + Send),
) -> i32 {
    match cfg.format {
        Format::Json => {
            write_out(
                out,
                &(serde_json::to_string_pretty(summary).expect("summary serializes") + "\n"),
            );
        }
        Format::Text => {
            let mut s = String::new();
            let (mut pass, mut fail) = (0, 0);
            let (mut budget, mut err) = (summary.over_budget.len(), summary.errors.len());
            for rep in &summary.scenarios {
                match rep.outcome() {
                    Outcome::Pass => pass += 1,
                    Outcome::Mismatch => fail += 1,
                    Outcome::Budget => budget += 1,
                    Outcome::Internal => err += 1,
                }
                if !matches!(rep.outcome(), Outcome::Pass) {
                    let _ = writeln!(s, "  {:?}: {}", rep.outcome(), rep.reproduction());
                }
            }
            for c in &summary.checks {
                if c.report.passed() {
                    pass += 1;
                } else {
                    fail += 1;
                }
            }
            for e in &summary.over_budget {
                let _ = writeln!(s, "  over budget: {e}");
            }
            for e in &summary.errors {
                let _ = writeln!(s, "  error: {e}");
            }
            let verdict = match (summary.exit_code, budget) {
                (EXIT_PASS, 0) => "PASS",
                (EXIT_PASS, _) => "INCOMPLETE (budget)",
                _ => "FAIL",
            };
            let _ = writeln!(
                s,
                "verify {suite}: {} runs, {pass} pass, {fail} fail, {budget} budget, {err} error: {verdict}",
                pass + fail + budget + err
            );
            write_out(out, &s);
        }
    }
    summary.exit_code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_combine_by_severity() {
        assert_eq!(combine_codes([]), EXIT_PASS);
        assert_eq!(combine_codes([EXIT_PASS, EXIT_BUDGET]), EXIT_BUDGET);
        assert_eq!(
            combine_codes([EXIT_BUDGET, EXIT_INTERNAL, EXIT_PASS]),
            EXIT_INTERNAL
        );
        assert_eq!(combine_codes([EXIT_INTERNAL, EXIT_MISMATCH]), EXIT_MISMATCH);
    }

    #[test]
    fn config_rejects_bad_values() {
        let ok = CliConfig::default();
        assert!(ok.validate().is_ok());
        for bad in [
            CliConfig {
                characteristic: Some(32004),
                ..ok.clone()
            },
            CliConfig {
                characteristic: Some(1 << 40),
                ..ok.clone()
            },
            CliConfig {
                budget_seconds: Some(0.0),
                ..ok.clone()
            },
            CliConfig {
                budget_degree: Some(-1),
                ..ok.clone()
            },
            CliConfig {
                threads: 0,
                ..ok.clone()
            },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
        assert!(CliConfig {
            characteristic: Some(0),
            ..ok.clone()
        }
        .validate()
        .is_ok());
        assert!(CliConfig {
            characteristic: Some(101),
            ..ok
        }
        .validate()
        .is_ok());
    }

    #[test]
    fn budget_exit_depends_on_strict() {
        let lax = CliConfig::default();
        let strict = CliConfig {
            strict: true,
            ..CliConfig::default()
        };
        assert_eq!(lax.outcome_code(Outcome::Budget), EXIT_PASS);
        assert_eq!(strict.outcome_code(Outcome::Budget), EXIT_BUDGET);
        assert_eq!(strict.outcome_code(Outcome::Internal), EXIT_INTERNAL);
    }
}
