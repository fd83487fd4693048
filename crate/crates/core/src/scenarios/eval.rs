//! Construction of a scenario's objects and evaluation of expectation keys.
//!
//! Keys name one computed value each; a suffix `@L` selects the primary
//! piece of `J^top` supported on locus `L`.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use serde_json::Value;

use super::{
    derive_seed, golden, run_family, ExpectationResult, FactorSpec, LocusSpec, Observation,
    Scenario, ScenarioReport, TaskResult, Verdict,
};
use crate::arrangement::{
    bdl_rao_report, check_hypotheses, cofactors, default_supports, general_form, general_forms,
    hyperplane_flat_components, jacobian_ideal, minors_codim_check, rao_or_zero,
    star_power_identity, top_part_seeded, verify_plane_pencil, verify_sat_is_ci, ArrangementSpec,
    Hypotheses, PencilArrangement, PrimaryPiece, Report, TopPart,
};
use crate::error::{ArrError, Result};
use crate::field::Field;
use crate::groebner::Budget;
use crate::idealops::Ideal;
use crate::invariants::{is_acm, is_unmixed, minimal_betti};
use crate::monomial::MonomialOrder;
use crate::ring::{Polynomial, Ring};

/// Tasks that only display values, with the keys they display.
const INFO_TASKS: &[(&str, &[&str])] = &[
    ("jacobian", &["jac_hp", "jac_saturated"]),
    ("saturation", &["sat_hp", "sat_unmixed", "sat_ci_type"]),
    (
        "top",
        &[
            "top_hp",
            "top_degree",
            "top_ci_type",
            "has_codim2_singularities",
            "pieces",
            "piece_degrees",
        ],
    ),
    ("radical", &["rad_hp", "rad_degree"]),
    ("hilbert", &["jac_hp", "sat_hp", "top_hp"]),
    ("betti", &["top_betti"]),
    ("acm", &["top_acm", "rad_acm"]),
    ("rao", &["top_rao_dims"]),
    (
        "subject",
        &["subject_degree", "subject_acm", "subject_rao_dims"],
    ),
    (
        "hypotheses",
        &[
            "hypotheses",
            "pairs_smooth_ci",
            "triples_ok",
            "factors_smooth",
        ],
    ),
];

/// Tasks producing a verification report.
const CHECK_TASKS: &[&str] = &[
    "sat-is-ci",
    "plane-pencil",
    "star-power",
    "minors",
    "flats",
    "rao-shift",
    "family",
];

pub(crate) fn known_task(t: &str) -> bool {
    INFO_TASKS.iter().any(|(n, _)| *n == t) || CHECK_TASKS.contains(&t)
}

fn classify(e: &ArrError) -> Verdict {
    match e {
        ArrError::BudgetExhausted { .. } => Verdict::SkippedBudget,
        _ => Verdict::Error,
    }
}

pub(super) fn run_in<K: Field>(
    field: K,
    sc: &Scenario,
    seed: u64,
    order: MonomialOrder,
    budget: Budget,
    force: bool,
) -> Result<ScenarioReport> {
    sc.validate()?;
    let ring = Ring::with_order(field.clone(), sc.ring.nvars, order)?.with_budget(budget);
    let mut report = ScenarioReport::empty(sc, seed, field.name(), order);
    if sc.disabled && !force {
        for e in &sc.expect {
            report.results.push(ExpectationResult {
                key: e.key.clone(),
                expected: e.value.clone(),
                computed: None,
                verdict: Verdict::Skipped,
                source: e.source,
                observational: e.observational,
                detail: Some("scenario disabled".into()),
                elapsed_ms: 0,
            });
        }
        report
            .notes
            .push("disabled by default: no explicit equations are available".into());
        return Ok(report);
    }
    let mut b = Build::new(ring.clone(), sc, seed);
    if let Err(e) = b.construct() {
        // malformed input is the caller's error, not a computational outcome
        if matches!(
            e,
            ArrError::Parse { .. } | ArrError::Precondition(_) | ArrError::ContextMismatch(_)
        ) {
            return Err(e);
        }
        let verdict = classify(&e);
        for x in &sc.expect {
            report.results.push(ExpectationResult {
                key: x.key.clone(),
                expected: x.value.clone(),
                computed: None,
                verdict,
                source: x.source,
                observational: x.observational,
                detail: Some("construction failed".into()),
                elapsed_ms: 0,
            });
        }
        report.error = Some(format!("construction: {e}"));
        report.stats = ring.env().totals();
        return Ok(report);
    }
    for x in &sc.expect {
        let t = Instant::now();
        let (computed, verdict, detail) = match b.eval(&x.key) {
            Ok(v) => {
                let expected = b.resolve_expected(&x.value);
                let verdict = if values_match(&expected, &v) {
                    Verdict::Match
                } else {
                    Verdict::Mismatch
                };
                (Some(v), verdict, None)
            }
            Err(e) => (None, classify(&e), Some(e.to_string())),
        };
        report.results.push(ExpectationResult {
            key: x.key.clone(),
            expected: x.value.clone(),
            computed,
            verdict,
            source: x.source,
            observational: x.observational,
            detail,
            elapsed_ms: t.elapsed().as_millis() as u64,
        });
    }
    for task in &sc.tasks {
        let t = Instant::now();
        let mut result = TaskResult {
            task: task.clone(),
            verdict: Verdict::Match,
            report: None,
            detail: None,
            elapsed_ms: 0,
        };
        if let Some((_, keys)) = INFO_TASKS.iter().find(|(n, _)| n == task) {
            for key in keys.iter() {
                if report.observations.iter().any(|o| o.key == *key)
                    || sc.expect.iter().any(|x| x.key == *key)
                {
                    continue;
                }
                match b.eval(key) {
                    Ok(v) => report.observations.push(Observation {
                        key: key.to_string(),
                        value: v,
                    }),
                    Err(e) => {
                        result.verdict = classify(&e);
                        result.detail = Some(format!("{key}: {e}"));
                        break;
                    }
                }
            }
        } else {
            match b.check_task(task) {
                Ok(rep) => {
                    result.verdict = if rep.passed() {
                        Verdict::Match
                    } else {
                        Verdict::Mismatch
                    };
                    result.report = Some(rep);
                }
                Err(e) => {
                    result.verdict = classify(&e);
                    result.detail = Some(e.to_string());
                }
            }
        }
        result.elapsed_ms = t.elapsed().as_millis() as u64;
        report.tasks.push(result);
    }
    report.stats = ring.env().totals();
    Ok(report)
}

/// Equality of JSON values, with integers compared across representations.
fn values_match(expected: &Value, computed: &Value) -> bool {
    match (expected, computed) {
        (Value::Number(a), Value::Number(b)) => a.as_f64() == b.as_f64(),
        (Value::Array(a), Value::Array(b)) => {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| values_match(x, y))
        }
        _ => expected == computed,
    }
}

struct Build<'a, K: Field> {
    ring: Arc<Ring<K>>,
    sc: &'a Scenario,
    seed: u64,
    loci: HashMap<String, Ideal<K>>,
    forms: HashMap<String, Polynomial<K>>,
    pending: Vec<String>,
    spec: Option<ArrangementSpec<K>>,
    pencil: Option<PencilArrangement<K>>,
    hints: Vec<Ideal<K>>,
    subject: Option<Ideal<K>>,
    jac: Option<Ideal<K>>,
    sat: Option<Ideal<K>>,
    top: Option<TopPart<K>>,
    rad: Option<Ideal<K>>,
    hyp: Option<Hypotheses>,
}

impl<'a, K: Field> Build<'a, K> {
    fn new(ring: Arc<Ring<K>>, sc: &'a Scenario, seed: u64) -> Self {
        Build {
            ring,
            sc,
            seed,
            loci: HashMap::new(),
            forms: HashMap::new(),
            pending: Vec::new(),
            spec: None,
            pencil: None,
            hints: Vec::new(),
            subject: None,
            jac: None,
            sat: None,
            top: None,
            rad: None,
            hyp: None,
        }
    }

    fn base(&mut self, name: &str) -> Result<Ideal<K>> {
        if name == "ring" {
            Ok(Ideal::unit(&self.ring))
        } else {
            self.locus(name)
        }
    }

    fn enter(&mut self, name: &str) -> Result<()> {
        if self.pending.iter().any(|p| p == name) {
            return Err(ArrError::Precondition(format!(
                "{name} is defined in terms of itself"
            )));
        }
        self.pending.push(name.to_string());
        Ok(())
    }

    fn locus(&mut self, name: &str) -> Result<Ideal<K>> {
        if let Some(i) = self.loci.get(name) {
            return Ok(i.clone());
        }
        let spec = self
            .sc
            .loci
            .get(name)
            .cloned()
            .ok_or_else(|| ArrError::Precondition(format!("unknown locus {name:?}")))?;
        self.enter(name)?;
        let r = self.ring.clone();
        let n = r.nvars();
        let out = match spec {
            LocusSpec::Point => Ideal::variables(&r, &(1..n).collect::<Vec<_>>()),
            LocusSpec::Line => Ideal::variables(&r, &[n - 2, n - 1]),
            LocusSpec::TwistedCubic => {
                if n != 4 {
                    return Err(ArrError::Precondition(
                        "the twisted cubic lives in P^3".into(),
                    ));
                }
                let gens = ["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"];
                Ideal::new(
                    &r,
                    gens.iter()
                        .map(|g| Polynomial::parse(&r, g))
                        .collect::<Result<Vec<_>>>()?,
                )?
            }
            LocusSpec::DoubleLine { line } => {
                let l = self.locus(&line)?;
                let f = general_form(&l, 3, derive_seed(self.seed, &format!("locus:{name}")))?;
                l.power(2)?.sum(&Ideal::principal(&f)?)?
            }
            LocusSpec::Ideal { gens } => {
                let polys = gens
                    .iter()
                    .map(|g| self.expr(g))
                    .collect::<Result<Vec<_>>>()?;
                Ideal::new(&r, polys)?
            }
            LocusSpec::GeneralCi { degrees } => {
                let unit = Ideal::unit(&r);
                let polys = degrees
                    .iter()
                    .enumerate()
                    .map(|(k, &d)| {
                        general_form(
                            &unit,
                            d,
                            derive_seed(self.seed, &format!("locus:{name}:{k}")),
                        )
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ideal::new(&r, polys)?
            }
        };
        self.pending.pop();
        let out = out.with_tag(name);
        self.loci.insert(name.to_string(), out.clone());
        Ok(out)
    }

    fn form(&mut self, name: &str) -> Result<Polynomial<K>> {
        if let Some(f) = self.forms.get(name) {
            return Ok(f.clone());
        }
        let spec = self
            .sc
            .forms
            .get(name)
            .cloned()
            .ok_or_else(|| ArrError::Precondition(format!("unknown form {name:?}")))?;
        self.enter(name)?;
        let base = self.base(&spec.general)?;
        let f = general_form(
            &base,
            spec.degree,
            derive_seed(self.seed, &format!("form:{name}")),
        )?;
        self.pending.pop();
        self.forms.insert(name.to_string(), f.clone());
        Ok(f)
    }

    /// Parses an expression after resolving the named forms it mentions.
    fn expr(&mut self, src: &str) -> Result<Polynomial<K>> {
        let idents: Vec<String> = src
            .split(|c: char| !(c.is_alphanumeric() || c == '_'))
            .filter(|w| self.sc.forms.contains_key(*w))
            .map(str::to_string)
            .collect();
        for id in idents {
            self.form(&id)?;
        }
        let forms = &self.forms;
        Polynomial::parse_with(&self.ring, src, &|id| forms.get(id).cloned())
    }

    fn construct(&mut self) -> Result<()> {
        let mut factors = Vec::new();
        let mut labels = Vec::new();
        for (i, f) in self.sc.factors.clone().iter().enumerate() {
            match f {
                FactorSpec::Expr(s) => {
                    factors.push(self.expr(s)?);
                    labels.push(s.replace(' ', ""));
                }
                FactorSpec::General {
                    general,
                    degree,
                    count,
                } => {
                    let base = self.base(general)?;
                    let fs = general_forms(
                        &base,
                        *degree,
                        *count,
                        derive_seed(self.seed, &format!("factor:{i}")),
                    )?;
                    for f in fs {
                        factors.push(f);
                        labels.push(format!("G{}", labels.len() + 1));
                    }
                }
            }
        }
        if let Some(p) = self.sc.pencil.clone() {
            let (f, g) = if p.base == "general" {
                let fg = general_forms(
                    &Ideal::unit(&self.ring),
                    p.degree,
                    2,
                    derive_seed(self.seed, "pencil-base"),
                )?;
                (fg[0].clone(), fg[1].clone())
            } else {
                let b = self.locus(&p.base)?.trim()?;
                if b.gens().len() != 2 {
                    return Err(ArrError::Precondition(format!(
                        "pencil base {} is not two-generated",
                        p.base
                    )));
                }
                (b.gens()[0].clone(), b.gens()[1].clone())
            };
            let pencil =
                PencilArrangement::general(f, g, p.count, derive_seed(self.seed, "pencil"))?;
            let mut spec = pencil.spec()?;
            if !factors.is_empty() {
                spec = spec.join(
                    &ArrangementSpec::new(&self.ring, factors.clone())?.with_labels(labels.clone()),
                )?;
            }
            self.spec = Some(spec);
            self.pencil = Some(pencil);
        } else if !factors.is_empty() {
            self.spec = Some(ArrangementSpec::new(&self.ring, factors)?.with_labels(labels));
        }
        for h in self.sc.hints.clone() {
            let i = self.locus(&h)?;
            self.hints.push(i);
        }
        if let Some(s) = self.sc.subject.clone() {
            self.subject = Some(self.locus(&s)?);
        }
        Ok(())
    }

    fn spec(&self) -> Result<&ArrangementSpec<K>> {
        self.spec.as_ref().ok_or_else(|| {
            ArrError::Precondition(format!("{} defines no arrangement", self.sc.name))
        })
    }

    fn pencil(&self) -> Result<&PencilArrangement<K>> {
        self.pencil
            .as_ref()
            .ok_or_else(|| ArrError::Precondition(format!("{} defines no pencil", self.sc.name)))
    }

    fn subject(&self) -> Result<&Ideal<K>> {
        self.subject
            .as_ref()
            .ok_or_else(|| ArrError::Precondition(format!("{} has no subject locus", self.sc.name)))
    }

    fn jac(&mut self) -> Result<Ideal<K>> {
        if self.jac.is_none() {
            self.jac = Some(jacobian_ideal(self.spec()?)?);
        }
        Ok(self.jac.clone().unwrap())
    }

    fn sat(&mut self) -> Result<Ideal<K>> {
        if self.sat.is_none() {
            self.sat = Some(self.jac()?.saturate_irrelevant()?);
        }
        Ok(self.sat.clone().unwrap())
    }

    fn top(&mut self) -> Result<&TopPart<K>> {
        if self.top.is_none() {
            let j = self.jac()?;
            let supports = default_supports(self.spec()?, &self.hints)?;
            let tp = top_part_seeded(&j, &supports, derive_seed(self.seed, "separators"))?;
            self.sat = Some(tp.sat.clone());
            self.top = Some(tp);
        }
        Ok(self.top.as_ref().unwrap())
    }

    fn rad(&mut self) -> Result<Ideal<K>> {
        if self.rad.is_none() {
            self.rad = Some(self.top()?.radical()?);
        }
        Ok(self.rad.clone().unwrap())
    }

    fn hyp(&mut self) -> Result<&Hypotheses> {
        if self.hyp.is_none() {
            self.hyp = Some(check_hypotheses(self.spec()?)?);
        }
        Ok(self.hyp.as_ref().unwrap())
    }

    fn piece(&mut self, locus: &str) -> Result<PrimaryPiece<K>> {
        let l = self.locus(locus)?;
        self.top()?.piece_at(&l)?.cloned().ok_or_else(|| {
            ArrError::Precondition(format!("J^top has no piece supported on {locus}"))
        })
    }

    /// Expected values of the form `{"golden": name}` stand for a stored
    /// Betti diagram.
    fn resolve_expected(&self, v: &Value) -> Value {
        if let Some(name) = v.get("golden").and_then(Value::as_str) {
            if let Some(g) = golden(name) {
                return Value::String(g.to_string());
            }
        }
        v.clone()
    }

    fn eval(&mut self, key: &str) -> Result<Value> {
        if let Some((what, locus)) = key.split_once('@') {
            let p = self.piece(locus)?;
            return match what {
                "piece_degree" => Ok(Value::from(p.degree)),
                "piece_acm" => Ok(Value::Bool(is_acm(&p.primary)?)),
                "piece_ci_type" => ci_type(&p.primary),
                "piece_generators" => generator_degrees(&p.primary),
                "piece_multiplicity" => {
                    Ok(p.multiplicity().map(Value::from).unwrap_or(Value::Null))
                }
                _ => Err(unknown_key(key)),
            };
        }
        match key {
            "jac_hp" => hp(&self.jac()?),
            "jac_saturated" => Ok(Value::Bool(self.jac()?.is_saturated()?)),
            "sat_hp" => hp(&self.sat()?),
            "sat_degree" => Ok(Value::from(self.sat()?.degree()?)),
            "sat_unmixed" => Ok(Value::Bool(is_unmixed(&self.sat()?)?)),
            "sat_acm" => Ok(Value::Bool(is_acm(&self.sat()?)?)),
            "sat_ci_type" => ci_type(&self.sat()?),
            "top_hp" => hp(&self.top()?.top.clone()),
            "top_degree" => Ok(Value::from(self.top()?.top.degree()?)),
            "top_acm" => Ok(Value::Bool(is_acm(&self.top()?.top.clone())?)),
            "top_ci_type" => ci_type(&self.top()?.top.clone()),
            "top_betti" => Ok(Value::String(
                minimal_betti(&self.top()?.top.clone())?.to_string(),
            )),
            "top_betti_totals" => Ok(Value::from(
                minimal_betti(&self.top()?.top.clone())?.totals(),
            )),
            "top_rao_dims" => Ok(Value::from(
                rao_or_zero(&self.top()?.top.clone())?.dims_vec(),
            )),
            "has_codim2_singularities" => Ok(Value::Bool(!self.top()?.top.is_unit()?)),
            "pieces" => Ok(Value::from(self.top()?.pieces.len())),
            "line_pieces" => Ok(Value::from(
                self.top()?
                    .pieces
                    .iter()
                    .filter(|p| p.support_degree == 1)
                    .count(),
            )),
            "piece_degrees" => {
                let mut d: Vec<i64> = self.top()?.pieces.iter().map(|p| p.degree).collect();
                d.sort_unstable();
                Ok(Value::from(d))
            }
            "rad_hp" => hp(&self.rad()?),
            "rad_degree" => Ok(Value::from(self.rad()?.degree()?)),
            "rad_acm" => Ok(Value::Bool(is_acm(&self.rad()?)?)),
            "rad_betti" => Ok(Value::String(minimal_betti(&self.rad()?)?.to_string())),
            "rad_betti_totals" => Ok(Value::from(minimal_betti(&self.rad()?)?.totals())),
            "rad_rao_dims" => Ok(Value::from(rao_or_zero(&self.rad()?)?.dims_vec())),
            "hypotheses" => Ok(Value::Bool(self.hyp()?.main_theorem_applies())),
            "pairs_smooth_ci" => Ok(Value::Bool(self.hyp()?.pairs_smooth_ci)),
            "triples_ok" => Ok(Value::Bool(self.hyp()?.triples_ok)),
            "factors_smooth" => Ok(Value::Bool(self.hyp()?.factors_smooth)),
            "star_degree" => {
                let forms = self.pencil()?.forms()?;
                let star = Ideal::new(&self.ring, cofactors(&self.ring, &forms)?)?;
                Ok(Value::from(star.degree()?))
            }
            "subject_degree" => Ok(Value::from(self.subject()?.degree()?)),
            "subject_acm" => Ok(Value::Bool(is_acm(self.subject()?)?)),
            "subject_rao_dims" => Ok(Value::from(rao_or_zero(self.subject()?)?.dims_vec())),
            "subject_rao_first_degree" => Ok(rao_or_zero(self.subject()?)?
                .first_degree()
                .map(Value::from)
                .unwrap_or(Value::Null)),
            _ => Err(unknown_key(key)),
        }
    }

    fn check_task(&mut self, task: &str) -> Result<Report> {
        match task {
            "sat-is-ci" => verify_sat_is_ci(self.pencil()?),
            "plane-pencil" => verify_plane_pencil(self.pencil()?),
            "star-power" => star_power_identity(self.pencil()?),
            "minors" => minors_codim_check(self.pencil()?),
            "flats" => hyperplane_flat_components(self.spec()?),
            "rao-shift" => {
                let s = self.subject()?.clone();
                let d1 = s.min_degree().unwrap_or(1);
                let f1 = general_form(&s, d1, derive_seed(self.seed, "rao-shift:f1"))?;
                let f2 = general_form(
                    &Ideal::unit(&self.ring),
                    1,
                    derive_seed(self.seed, "rao-shift:f2"),
                )?;
                bdl_rao_report(&s, &f1, &f2)
            }
            "family" => {
                let fam = self.sc.family.clone().ok_or_else(|| {
                    ArrError::Precondition(format!("{} defines no family", self.sc.name))
                })?;
                run_family(&self.ring, fam.kind, fam.count, self.seed)
            }
            other => Err(ArrError::Precondition(format!("unknown task {other:?}"))),
        }
    }
}

fn unknown_key(key: &str) -> ArrError {
    ArrError::Precondition(format!("unknown expectation key {key:?}"))
}

pub(crate) fn known_key(key: &str) -> bool {
    const PLAIN: &[&str] = &[
        "jac_hp",
        "jac_saturated",
        "sat_hp",
        "sat_degree",
        "sat_unmixed",
        "sat_acm",
        "sat_ci_type",
        "top_hp",
        "top_degree",
        "top_acm",
        "top_ci_type",
        "top_betti",
        "top_betti_totals",
        "top_rao_dims",
        "has_codim2_singularities",
        "pieces",
        "line_pieces",
        "piece_degrees",
        "rad_hp",
        "rad_degree",
        "rad_acm",
        "rad_betti",
        "rad_betti_totals",
        "rad_rao_dims",
        "hypotheses",
        "pairs_smooth_ci",
        "triples_ok",
        "factors_smooth",
        "star_degree",
        "subject_degree",
        "subject_acm",
        "subject_rao_dims",
        "subject_rao_first_degree",
    ];
    const PIECE: &[&str] = &[
        "piece_degree",
        "piece_acm",
        "piece_ci_type",
        "piece_generators",
        "piece_multiplicity",
    ];
    match key.split_once('@') {
        Some((what, _)) => PIECE.contains(&what),
        None => PLAIN.contains(&key),
    }
}

fn hp<K: Field>(i: &Ideal<K>) -> Result<Value> {
    Ok(Value::String(i.hilbert()?.polynomial_string()))
}

/// `"(a,b)"` for a codimension-two complete intersection.
fn ci_type<K: Field>(i: &Ideal<K>) -> Result<Value> {
    if i.is_unit()? {
        return Ok(Value::String("unit".into()));
    }
    let t = i.trim()?;
    let mut d = t.degrees();
    d.sort_unstable();
    if d.len() == 2 && i.codim()? == 2 {
        Ok(Value::String(format!("({},{})", d[0], d[1])))
    } else {
        Ok(Value::String("not a complete intersection".into()))
    }
}

fn generator_degrees<K: Field>(i: &Ideal<K>) -> Result<Value> {
    let mut d = minimal_betti(i)?.degrees(1);
    d.sort_unstable();
    Ok(Value::from(d))
}
