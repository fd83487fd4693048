//! Named, seeded, reproducible arrangement computations with expected
//! values, and the runner that evaluates them.
//!
//! A scenario builds an arrangement from named loci, named general forms
//! and factor expressions, then evaluates a list of keyed expectations
//! (`top_degree`, `piece_acm@C`, ...) and verification tasks. The registry
//! ships as JSON (`registry.json`) plus generated pencil families.

mod eval;
mod families;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Mutex, OnceLock};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arrangement::Report;
use crate::error::{ArrError, Result};
use crate::field::{PrimeField, RationalField, DEFAULT_PRIME};
use crate::groebner::{Budget, GbStats};
use crate::monomial::MonomialOrder;

pub use families::{random_curve, run_family, FamilyKind};

static REGISTRY_JSON: &str = include_str!("registry.json");

static GOLDEN: &[(&str, &str)] = &[
    ("gen-ms-top", include_str!("golden/gen-ms-top.txt")),
    ("gen-ms-radical", include_str!("golden/gen-ms-radical.txt")),
];

/// Reference Betti diagram by name.
pub fn golden(name: &str) -> Option<&'static str> {
    GOLDEN.iter().find(|(n, _)| *n == name).map(|(_, g)| *g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Fast,
    Standard,
    Extended,
}

impl Tier {
    /// Declared wall-clock budget of one scenario.
    pub fn budget_seconds(self) -> f64 {
        match self {
            Tier::Fast => 10.0,
            Tier::Standard => 600.0,
            Tier::Extended => 4.0 * 3600.0,
        }
    }
}

impl FromStr for Tier {
    type Err = ArrError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Tier::Fast),
            "standard" => Ok(Tier::Standard),
            "extended" => Ok(Tier::Extended),
            _ => Err(ArrError::Precondition(format!("unknown tier {s:?}"))),
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tier::Fast => "fast",
            Tier::Standard => "standard",
            Tier::Extended => "extended",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingConfig {
    pub nvars: usize,
    /// Characteristic; 0 for the rationals. Defaults to 32003.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub char: Option<u64>,
}

/// A named base locus. Fixed loci use fixed coordinates so that fixtures
/// stay stable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LocusSpec {
    /// `V(x1, ..., xn)`.
    Point,
    /// `V(x_{n-1}, x_n)`.
    Line,
    /// `V(x0 x2 - x1^2, x1 x3 - x2^2, x0 x3 - x1 x2)` in `P^3`.
    TwistedCubic,
    /// `I_l^2 + (F)` for a general cubic `F` in `I_l`.
    DoubleLine { line: String },
    /// Generators given as expressions in the variables and named forms.
    Ideal { gens: Vec<String> },
    /// Complete intersection of general forms of the given degrees.
    GeneralCi { degrees: Vec<u32> },
}

/// A general form of degree `degree` in a locus, or in the whole ring when
/// `general` is `"ring"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormSpec {
    pub general: String,
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FactorSpec {
    /// Polynomial expression in `x0..xn` and named forms.
    Expr(String),
    General {
        general: String,
        degree: u32,
        #[serde(default = "one")]
        count: usize,
    },
}

fn one() -> usize {
    1
}

/// `count` general members of the pencil spanned by a base: `"general"`
/// (two general forms) or a two-generated locus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PencilSpec {
    pub base: String,
    pub degree: u32,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub count: usize,
}

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// A number reported for the worked example.
    Published,
    /// Computed by an independent route or implied by a theorem.
    Derived,
    Trivial,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Published => "published",
            Source::Derived => "derived",
            Source::Trivial => "trivial",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expectation {
    pub key: String,
    pub value: Value,
    pub source: Source,
    /// Genericity-dependent; a mismatch is a warning.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub observational: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub ring: RingConfig,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub loci: BTreeMap<String, LocusSpec>,
    #[serde(default)]
    pub forms: BTreeMap<String, FormSpec>,
    #[serde(default)]
    pub factors: Vec<FactorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pencil: Option<PencilSpec>,
    /// Locus examined by the `subject` tasks (no arrangement needed).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
    /// Loci offered to the top-part extraction as extra supports.
    #[serde(default)]
    pub hints: Vec<String>,
    #[serde(default)]
    pub tasks: Vec<String>,
    #[serde(default)]
    pub expect: Vec<Expectation>,
    #[serde(default = "default_tier")]
    pub tier: Tier,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub disabled: bool,
}

fn default_seed() -> u64 {
    1
}

fn default_tier() -> Tier {
    Tier::Fast
}

impl Scenario {
    /// Parses one scenario; JSON errors carry line and column.
    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(json_error)
    }

    /// Rejects unknown tasks, keys and locus names before any computation.
    pub fn validate(&self) -> Result<()> {
        for t in &self.tasks {
            if !eval::known_task(t) {
                return Err(ArrError::Precondition(format!("unknown task {t:?}")));
            }
        }
        for e in &self.expect {
            if !eval::known_key(&e.key) {
                return Err(ArrError::Precondition(format!(
                    "unknown expectation key {:?}",
                    e.key
                )));
            }
        }
        let locus = |name: &str| -> Result<()> {
            if name == "ring" || self.loci.contains_key(name) {
                Ok(())
            } else {
                Err(ArrError::Precondition(format!("unknown locus {name:?}")))
            }
        };
        for h in &self.hints {
            locus(h)?;
        }
        if let Some(s) = &self.subject {
            locus(s)?;
        }
        for f in &self.factors {
            if let FactorSpec::General { general, .. } = f {
                locus(general)?;
            }
        }
        for f in self.forms.values() {
            locus(&f.general)?;
        }
        for l in self.loci.values() {
            if let LocusSpec::DoubleLine { line } = l {
                locus(line)?;
            }
        }
        for e in &self.expect {
            if let Some((_, l)) = e.key.split_once('@') {
                locus(l)?;
            }
        }
        if let Some(p) = &self.pencil {
            if p.base != "general" {
                locus(&p.base)?;
            }
        }
        let empty = self.factors.is_empty()
            && self.pencil.is_none()
            && self.subject.is_none()
            && self.family.is_none();
        if empty && !self.disabled {
            return Err(ArrError::Precondition(format!(
                "{} has nothing to compute",
                self.name
            )));
        }
        Ok(())
    }
}

fn json_error(e: serde_json::Error) -> ArrError {
    ArrError::Parse {
        line: e.line(),
        col: e.column(),
        msg: e.to_string(),
    }
}

/// Knobs applied on top of a scenario's own settings.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub characteristic: Option<u64>,
    pub order: Option<MonomialOrder>,
    pub budget_seconds: Option<f64>,
    pub budget_degree: Option<i32>,
    pub budget_pairs: Option<u64>,
    /// Run scenarios marked disabled.
    pub force: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Match,
    Mismatch,
    SkippedBudget,
    Skipped,
    Error,
}

impl Verdict {
    fn label(self, observational: bool) -> &'static str {
        match self {
            Verdict::Match => "PASS",
            Verdict::Mismatch if observational => "WARN",
            Verdict::Mismatch => "FAIL",
            Verdict::SkippedBudget | Verdict::Skipped => "SKIP",
            Verdict::Error => "ERR ",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectationResult {
    pub key: String,
    pub expected: Value,
    pub computed: Option<Value>,
    pub verdict: Verdict,
    pub source: Source,
    pub observational: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskResult {
    pub task: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<Report>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub key: String,
    pub value: Value,
}

/// Overall result, in the order used for exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Mismatch,
    Budget,
    Internal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub name: String,
    pub tier: Tier,
    pub seed: u64,
    pub field: String,
    pub order: String,
    pub results: Vec<ExpectationResult>,
    pub tasks: Vec<TaskResult>,
    pub observations: Vec<Observation>,
    pub notes: Vec<String>,
    pub elapsed_ms: u64,
    pub stats: GbStats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ScenarioReport {
    fn empty(sc: &Scenario, seed: u64, field: String, order: MonomialOrder) -> Self {
        ScenarioReport {
            name: sc.name.clone(),
            tier: sc.tier,
            seed,
            field,
            order: order_name(order).into(),
            results: Vec::new(),
            tasks: Vec::new(),
            observations: Vec::new(),
            notes: Vec::new(),
            elapsed_ms: 0,
            stats: GbStats::default(),
            error: None,
        }
    }

    pub fn outcome(&self) -> Outcome {
        let hard = |v: Verdict, obs: bool| v == Verdict::Mismatch && !obs;
        let task_fail = self.tasks.iter().any(|t| t.verdict == Verdict::Mismatch);
        if self
            .results
            .iter()
            .any(|r| hard(r.verdict, r.observational))
            || task_fail
        {
            return Outcome::Mismatch;
        }
        let errored = self.error.is_some()
            || self.results.iter().any(|r| r.verdict == Verdict::Error)
            || self.tasks.iter().any(|t| t.verdict == Verdict::Error);
        if errored {
            return Outcome::Internal;
        }
        let budget = self
            .results
            .iter()
            .any(|r| r.verdict == Verdict::SkippedBudget)
            || self
                .tasks
                .iter()
                .any(|t| t.verdict == Verdict::SkippedBudget);
        if budget {
            return Outcome::Budget;
        }
        Outcome::Pass
    }

    pub fn passed(&self) -> bool {
        self.outcome() == Outcome::Pass
    }

    pub fn warnings(&self) -> usize {
        let obs = self
            .results
            .iter()
            .filter(|r| r.observational && r.verdict == Verdict::Mismatch)
            .count();
        let checks: usize = self
            .tasks
            .iter()
            .filter_map(|t| t.report.as_ref())
            .map(|r| r.warnings().count())
            .sum();
        obs + checks
    }

    /// Command line reproducing this run.
    pub fn reproduction(&self) -> String {
        let ch = if self.field == "QQ" {
            "0".to_string()
        } else {
            self.field
                .trim_start_matches("GF(")
                .trim_end_matches(')')
                .to_string()
        };
        format!(
            "arr example {} --seed {} --char {} --order {}",
            self.name, self.seed, ch, self.order
        )
    }

    pub fn observation(&self, key: &str) -> Option<&Value> {
        self.observations
            .iter()
            .find(|o| o.key == key)
            .map(|o| &o.value)
    }

    pub fn result(&self, key: &str) -> Option<&ExpectationResult> {
        self.results.iter().find(|r| r.key == key)
    }
}

fn show(v: &Value) -> String {
    match v {
        Value::String(s) if !s.contains('\n') => s.clone(),
        other => other.to_string(),
    }
}

fn show_block(f: &mut fmt::Formatter<'_>, label: &str, v: &Value) -> fmt::Result {
    match v {
        Value::String(s) if s.contains('\n') => {
            writeln!(f, "  {label}:")?;
            for line in s.lines() {
                writeln!(f, "    {line}")?;
            }
            Ok(())
        }
        other => writeln!(f, "  {label} = {}", show(other)),
    }
}

impl fmt::Display for ScenarioReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "== {} [{}] seed {}, {}, {}, {} ms ==",
            self.name, self.tier, self.seed, self.field, self.order, self.elapsed_ms
        )?;
        for r in &self.results {
            let mut tags = vec![r.source.to_string()];
            if r.observational {
                tags.push("observational".into());
            }
            let computed = r.computed.as_ref().map(show).unwrap_or_else(|| "-".into());
            write!(
                f,
                "  [{}] {}: expected {}, computed {} ({})",
                r.verdict.label(r.observational),
                r.key,
                show(&r.expected),
                computed,
                tags.join(", ")
            )?;
            if let Some(d) = &r.detail {
                write!(f, " ({d})")?;
            }
            writeln!(f)?;
        }
        for t in &self.tasks {
            write!(f, "  task {}: {}", t.task, t.verdict.label(false).trim())?;
            if let Some(d) = &t.detail {
                write!(f, " ({d})")?;
            }
            writeln!(f)?;
            if let Some(rep) = &t.report {
                for line in rep.to_string().lines() {
                    writeln!(f, "    {line}")?;
                }
            }
        }
        for o in &self.observations {
            show_block(f, &o.key, &o.value)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        if let Some(e) = &self.error {
            writeln!(f, "  error: {e}")?;
        }
        writeln!(f, "  gb: {}", self.stats)?;
        let verdict = match self.outcome() {
            Outcome::Pass => "PASS".to_string(),
            Outcome::Mismatch => format!("FAIL (repro: {})", self.reproduction()),
            Outcome::Budget => format!("BUDGET (repro: {})", self.reproduction()),
            Outcome::Internal => format!("ERROR (repro: {})", self.reproduction()),
        };
        writeln!(f, "  verdict: {verdict}")
    }
}

pub fn order_name(o: MonomialOrder) -> &'static str {
    match o {
        MonomialOrder::Lex => "lex",
        MonomialOrder::GrevLex => "grevlex",
        _ => "elimination",
    }
}

// ---------------------------------------------------------------------------
// registry

/// Every registered scenario: the JSON entries followed by the generated
/// pencil families.
pub fn registry() -> &'static [Scenario] {
    static REG: OnceLock<Vec<Scenario>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut out: Vec<Scenario> =
            serde_json::from_str(REGISTRY_JSON).expect("registry.json is valid");
        out.extend(pencil_families());
        out
    })
}

pub fn find(name: &str) -> Option<&'static Scenario> {
    registry().iter().find(|s| s.name == name)
}

/// Pencils of planes through a line, and pencils over a general complete
/// intersection for the saturation and star-configuration statements.
fn pencil_families() -> Vec<Scenario> {
    let mut out = Vec::new();
    let derived = |key: &str, value: Value| Expectation {
        key: key.into(),
        value,
        source: Source::Derived,
        observational: false,
        note: String::new(),
    };
    for e in 2..=6u32 {
        let t = e as i64 - 1;
        out.push(Scenario {
            name: format!("plane-pencil-{e}"),
            description: format!("{e} general planes through a line"),
            ring: RingConfig {
                nvars: 4,
                char: None,
            },
            seed: 1,
            loci: BTreeMap::from([("line".to_string(), LocusSpec::Line)]),
            forms: BTreeMap::new(),
            factors: Vec::new(),
            pencil: Some(PencilSpec {
                base: "line".into(),
                degree: 1,
                count: e as usize,
            }),
            subject: None,
            family: None,
            hints: Vec::new(),
            tasks: vec!["plane-pencil".into(), "sat-is-ci".into()],
            expect: vec![
                Expectation {
                    source: Source::Published,
                    ..derived("jac_saturated", Value::Bool(true))
                },
                Expectation {
                    source: Source::Published,
                    ..derived("sat_ci_type", Value::String(format!("({t},{t})")))
                },
                Expectation {
                    source: Source::Published,
                    ..derived("sat_degree", Value::from(t * t))
                },
            ],
            tier: Tier::Fast,
            disabled: false,
        });
    }
    let pairs: Vec<(usize, u32)> = (2..=6)
        .map(|s| (s, 1))
        .chain((2..=4).map(|s| (s, 2)))
        .chain((2..=3).map(|s| (s, 3)))
        .collect();
    for &(s, d) in &pairs {
        let e = (s as i64 - 1) * d as i64;
        let base = Scenario {
            name: String::new(),
            description: String::new(),
            ring: RingConfig {
                nvars: 4,
                char: None,
            },
            seed: 1,
            loci: BTreeMap::new(),
            forms: BTreeMap::new(),
            factors: Vec::new(),
            pencil: Some(PencilSpec {
                base: "general".into(),
                degree: d,
                count: s,
            }),
            subject: None,
            family: None,
            hints: Vec::new(),
            tasks: Vec::new(),
            expect: Vec::new(),
            tier: Tier::Fast,
            disabled: false,
        };
        out.push(Scenario {
            name: format!("pencil-ci-{s}-{d}"),
            description: format!("{s} general members of a pencil of degree-{d} surfaces"),
            tasks: vec!["sat-is-ci".into()],
            expect: vec![
                derived("sat_ci_type", Value::String(format!("({e},{e})"))),
                derived("sat_degree", Value::from(e * e)),
                derived("top_degree", Value::from(e * e)),
                derived("top_acm", Value::Bool(true)),
            ],
            ..base.clone()
        });
        let star = (s * (s - 1) / 2) as i64 * (d * d) as i64;
        out.push(Scenario {
            name: format!("star-config-{s}-{d}"),
            description: format!("star configuration of {s} pencil members of degree {d}"),
            tasks: vec!["star-power".into()],
            expect: vec![Expectation {
                note: "degree of the star configuration".into(),
                ..derived("star_degree", Value::from(star))
            }],
            ..base
        });
    }
    out
}

// ---------------------------------------------------------------------------
// running

pub fn run_scenario(name: &str, overrides: &Overrides) -> Result<ScenarioReport> {
    let sc = find(name).ok_or_else(|| ArrError::UnknownScenario(name.to_string()))?;
    run(sc, overrides)
}

/// Evaluates every expectation and task of `sc`. Field and usage errors are
/// returned; computational failures are recorded in the report.
pub fn run(sc: &Scenario, overrides: &Overrides) -> Result<ScenarioReport> {
    let seed = overrides.seed.unwrap_or(sc.seed);
    let ch = overrides
        .characteristic
        .or(sc.ring.char)
        .unwrap_or(DEFAULT_PRIME as u64);
    let order = overrides.order.unwrap_or(MonomialOrder::GrevLex);
    let mut budget = Budget::default()
        .with_seconds(overrides.budget_seconds.unwrap_or(sc.tier.budget_seconds()));
    budget.max_degree = overrides.budget_degree;
    budget.max_pairs = overrides.budget_pairs;
    let start = Instant::now();
    let mut report = if ch == 0 {
        eval::run_in(RationalField, sc, seed, order, budget, overrides.force)?
    } else {
        let p =
            u32::try_from(ch).map_err(|_| ArrError::InvalidField(format!("{ch} is too large")))?;
        eval::run_in(
            PrimeField::new(p)?,
            sc,
            seed,
            order,
            budget,
            overrides.force,
        )?
    };
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Maps `work` over `items` on up to `threads` workers. `emit` sees each
/// result in input order as soon as all earlier ones are done, so output
/// streams deterministically.
pub fn ordered_parallel<T, R, W, E>(items: &[T], threads: usize, work: W, emit: E) -> Vec<R>
where
    T: Sync,
    R: Send,
    W: Fn(&T) -> R + Sync,
    E: FnMut(usize, &R) + Send,
{
    let slots: Vec<Mutex<Option<R>>> = items.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let emitter = Mutex::new((0usize, emit));
    let flush = || {
        let mut guard = emitter.lock().expect("emitter lock");
        let (done, emit) = &mut *guard;
        while *done < items.len() {
            let slot = slots[*done].lock().expect("slot lock");
            let Some(r) = slot.as_ref() else { break };
            emit(*done, r);
            drop(slot);
            *done += 1;
        }
    };
    std::thread::scope(|s| {
        for _ in 0..threads.max(1).min(items.len().max(1)) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::SeqCst);
                if k >= items.len() {
                    break;
                }
                let r = work(&items[k]);
                *slots[k].lock().expect("slot lock") = Some(r);
                flush();
            });
        }
    });
    slots
        .into_iter()
        .map(|m| {
            m.into_inner()
                .expect("slot lock")
                .expect("every slot is filled")
        })
        .collect()
}

/// Runs scenarios on up to `threads` workers; reports come back in input
/// order.
pub fn run_many(
    scenarios: &[&Scenario],
    overrides: &Overrides,
    threads: usize,
) -> Vec<Result<ScenarioReport>> {
    ordered_parallel(scenarios, threads, |sc| run(sc, overrides), |_, _| {})
}

/// Derives an independent seed for a named construction step.
pub(crate) fn derive_seed(seed: u64, label: &str) -> u64 {
    // FNV-1a over the label, then a splitmix64 finalizer
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    let mut z = seed ^ h;
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_parses_and_names_are_unique() {
        let reg = registry();
        let mut names: Vec<&str> = reg.iter().map(|s| s.name.as_str()).collect();
        names.sort();
        let n = names.len();
        names.dedup();
        assert_eq!(names.len(), n);
        for required in [
            "plane-pencil-4",
            "star-config-3-2",
            "pencil-ci-3-2",
            "quadric-cone-plane",
            "counterexa",
            "tangent-double-line",
            "three-quadrics-line",
            "twc-3",
            "twc-11",
            "four-cubics-p2",
            "planes-through-point",
            "gen-ms",
            "skew-lines-rao",
            "liaison-addition-random",
            "bdl-random",
            "kummer",
        ] {
            assert!(find(required).is_some(), "{required} missing");
        }
        assert!(find("kummer").unwrap().disabled);
    }

    #[test]
    fn twc_table_is_registered() {
        let y = [12, 24, 42, 63, 87, 117, 150, 189, 231];
        let top = [15, 30, 52, 78, 108, 145, 186, 234, 286];
        for s in 3..=11usize {
            let sc = find(&format!("twc-{s}")).unwrap();
            let get = |k: &str| sc.expect.iter().find(|e| e.key == k).unwrap().value.clone();
            assert_eq!(get("piece_degree@C"), Value::from(y[s - 3]));
            assert_eq!(get("top_degree"), Value::from(top[s - 3]));
            // the lines: deg(X^top) - deg(Y) = C(s,2)
            assert_eq!(top[s - 3] - y[s - 3], (s * (s - 1) / 2) as i64);
            assert_eq!(
                sc.tier,
                if s <= 6 {
                    Tier::Standard
                } else {
                    Tier::Extended
                }
            );
        }
    }

    #[test]
    fn ordered_parallel_emits_in_input_order() {
        let items: Vec<u64> = (0..40).collect();
        let mut seen = Vec::new();
        let out = ordered_parallel(
            &items,
            6,
            |&x| {
                std::thread::sleep(std::time::Duration::from_millis((40 - x) % 7));
                x * x
            },
            |k, r| seen.push((k, *r)),
        );
        assert_eq!(out, items.iter().map(|x| x * x).collect::<Vec<_>>());
        assert_eq!(
            seen,
            items
                .iter()
                .map(|&x| (x as usize, x * x))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn derived_seeds_differ_by_label() {
        assert_ne!(derive_seed(1, "a"), derive_seed(1, "b"));
        assert_ne!(derive_seed(1, "a"), derive_seed(2, "a"));
        assert_eq!(derive_seed(7, "x"), derive_seed(7, "x"));
    }

    #[test]
    fn scenario_parse_error_has_position() {
        let err = Scenario::from_json("{\n  \"name\": 3\n}").unwrap_err();
        match err {
            ArrError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn golden_diagrams_are_consistent() {
        for (name, totals) in [
            ("gen-ms-top", "Tot:    1    4    4    1"),
            ("gen-ms-radical", "Tot:    1   12   15    4"),
        ] {
            let g = golden(name).unwrap();
            assert_eq!(g.lines().last().unwrap(), totals);
        }
    }
}
