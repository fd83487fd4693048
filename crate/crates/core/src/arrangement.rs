//! Hypersurface arrangements: Jacobian ideals, the pencil structure
//! theorems, liaison addition and basic double linkage, support-guided
//! extraction of `J^top` and its radical, and hypothesis checkers.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ArrError, Result};
use crate::field::Field;
use crate::idealops::{minors, Ideal};
use crate::invariants::{is_acm, is_smooth_ci, is_unmixed, rao_module, unmixed_part, RaoModule};
use crate::ring::{Polynomial, Ring};

/// Seed for separator forms and purification draws in [`top_part`].
pub const SEPARATOR_SEED: u64 = 0x5e9_0001;
const SEPARATOR_RETRIES: usize = 4;

// ---------------------------------------------------------------------------
// reports

/// One expectation of a verification: what was expected, what came out.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
    /// Mismatches are warnings only.
    pub observational: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            ..Default::default()
        }
    }

    pub fn expect(
        &mut self,
        name: impl Into<String>,
        pass: bool,
        expected: impl fmt::Display,
        computed: impl fmt::Display,
    ) -> bool {
        self.checks.push(Check {
            name: name.into(),
            expected: expected.to_string(),
            computed: computed.to_string(),
            pass,
            observational: false,
        });
        pass
    }

    pub fn expect_eq<T: PartialEq + fmt::Display>(
        &mut self,
        name: impl Into<String>,
        expected: T,
        computed: T,
    ) -> bool {
        let pass = expected == computed;
        self.expect(name, pass, expected, computed)
    }

    pub fn expect_true(&mut self, name: impl Into<String>, computed: bool) -> bool {
        self.expect(name, computed, true, computed)
    }

    pub fn observe<T: PartialEq + fmt::Display>(
        &mut self,
        name: impl Into<String>,
        expected: T,
        computed: T,
    ) {
        self.checks.push(Check {
            name: name.into(),
            expected: expected.to_string(),
            pass: expected == computed,
            computed: computed.to_string(),
            observational: true,
        });
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// All non-observational checks pass.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass || c.observational)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass && !c.observational)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass && c.observational)
    }

    /// Appends the checks of `other`, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.checks.push(c);
        }
        self.notes.extend(other.notes);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for c in &self.checks {
            let tag = match (c.pass, c.observational) {
                (true, _) => "PASS",
                (false, false) => "FAIL",
                (false, true) => "WARN",
            };
            if c.pass {
                writeln!(f, "  [{tag}] {}: {}", c.name, c.computed)?;
            } else {
                writeln!(
                    f,
                    "  [{tag}] {}: expected {}, got {}",
                    c.name, c.expected, c.computed
                )?;
            }
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// arrangements and pencils

/// `f = f_1 ... f_s`, a union of distinct hypersurfaces.
#[derive(Clone, Debug)]
pub struct ArrangementSpec<K: Field> {
    ring: Arc<Ring<K>>,
    factors: Vec<Polynomial<K>>,
    labels: Vec<String>,
}

impl<K: Field> ArrangementSpec<K> {
    pub fn new(ring: &Arc<Ring<K>>, factors: Vec<Polynomial<K>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(ArrError::Precondition(
                "an arrangement needs at least one factor".into(),
            ));
        }
        for (i, f) in factors.iter().enumerate() {
            if !f.ring().compatible(ring) {
                return Err(ArrError::ContextMismatch(format!(
                    "factor {} from another ring",
                    i + 1
                )));
            }
            match f.homogeneous_degree() {
                None => {
                    return Err(ArrError::Precondition(format!(
                        "factor {} is not homogeneous",
                        i + 1
                    )))
                }
                Some(0) => {
                    return Err(ArrError::Precondition(format!(
                        "factor {} is constant",
                        i + 1
                    )))
                }
                _ => {}
            }
            if let Some(j) = (0..i).find(|&j| factors[j].is_proportional(f)) {
                return Err(ArrError::Precondition(format!(
                    "factors {} and {} define the same hypersurface",
                    j + 1,
                    i + 1
                )));
            }
        }
        let labels = (1..=factors.len()).map(|i| format!("f{i}")).collect();
        Ok(ArrangementSpec {
            ring: ring.clone(),
            factors,
            labels,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.factors.len());
        self.labels = labels;
        self
    }

    pub fn ring(&self) -> &Arc<Ring<K>> {
        &self.ring
    }

    pub fn factors(&self) -> &[Polynomial<K>] {
        &self.factors
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.factors
            .iter()
            .map(|f| f.homogeneous_degree().unwrap())
            .collect()
    }

    pub fn is_linear(&self) -> bool {
        self.degrees().iter().all(|&d| d == 1)
    }

    pub fn product(&self) -> Result<Polynomial<K>> {
        Polynomial::product(&self.ring, &self.factors)
    }

    pub fn sub(&self, idx: &[usize]) -> Result<Self> {
        let spec = ArrangementSpec::new(
            &self.ring,
            idx.iter().map(|&i| self.factors[i].clone()).collect(),
        )?;
        Ok(spec.with_labels(idx.iter().map(|&i| self.labels[i].clone()).collect()))
    }

    /// The arrangement of both sets of factors.
    pub fn join(&self, other: &ArrangementSpec<K>) -> Result<Self> {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().map(|l| {
            if self.labels.contains(l) {
                format!("{l}'")
            } else {
                l.clone()
            }
        }));
        Ok(ArrangementSpec::new(&self.ring, factors)?.with_labels(labels))
    }
}

/// `Jac(f)`, generated by the partials of the expanded product.
pub fn jacobian_ideal<K: Field>(spec: &ArrangementSpec<K>) -> Result<Ideal<K>> {
    jacobian_of(&spec.product()?)
}

pub fn jacobian_of<K: Field>(f: &Polynomial<K>) -> Result<Ideal<K>> {
    if !f.euler_check()? {
        return Err(ArrError::Structural(format!(
            "Euler identity fails for {f}"
        )));
    }
    Ok(Ideal::new(f.ring(), f.gradient()?)?.with_tag("Jac(f)"))
}

/// Whether `V(f)` is smooth: `Jac(f)` is `m`-primary or the unit ideal.
pub fn is_smooth_form<K: Field>(f: &Polynomial<K>) -> Result<bool> {
    let j = jacobian_of(f)?;
    Ok(j.is_unit()? || j.codim()? == f.ring().nvars())
}

/// A pencil `G_i = a_i F + b_i P` over a regular sequence `F, P` of equal degree.
#[derive(Clone, Debug)]
pub struct PencilArrangement<K: Field> {
    f: Polynomial<K>,
    p: Polynomial<K>,
    members: Vec<(K::Elem, K::Elem)>,
}

impl<K: Field> PencilArrangement<K> {
    pub fn new(
        f: Polynomial<K>,
        p: Polynomial<K>,
        members: Vec<(K::Elem, K::Elem)>,
    ) -> Result<Self> {
        let k = f.ring().field().clone();
        let d = f.homogeneous_degree();
        if d.is_none() || d == Some(0) || d != p.homogeneous_degree() {
            return Err(ArrError::Precondition(
                "pencil base needs two forms of one positive degree".into(),
            ));
        }
        if Ideal::new(f.ring(), vec![f.clone(), p.clone()])?.codim()? != 2 {
            return Err(ArrError::Precondition(format!(
                "({f}, {p}) is not a regular sequence"
            )));
        }
        for (i, (a, b)) in members.iter().enumerate() {
            if k.is_zero(a) && k.is_zero(b) {
                return Err(ArrError::Precondition(format!("member {} is zero", i + 1)));
            }
            for (c, e) in &members[..i] {
                if k.is_zero(&k.sub(&k.mul(a, e), &k.mul(b, c))) {
                    return Err(ArrError::Precondition(format!(
                        "member {} repeats an earlier member",
                        i + 1
                    )));
                }
            }
        }
        Ok(PencilArrangement { f, p, members })
    }

    /// `s` members with seeded coefficients.
    pub fn general(f: Polynomial<K>, p: Polynomial<K>, s: usize, seed: u64) -> Result<Self> {
        let k = f.ring().field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut members: Vec<(K::Elem, K::Elem)> = Vec::with_capacity(s);
        let mut draws = 0;
        while members.len() < s {
            draws += 1;
            if draws > 16 * s + 16 {
                return Err(ArrError::Genericity(
                    "could not draw distinct pencil members".into(),
                ));
            }
            let (a, b) = (k.random(&mut rng), k.random(&mut rng));
            if k.is_zero(&a) && k.is_zero(&b) {
                continue;
            }
            if members
                .iter()
                .any(|(c, e)| k.is_zero(&k.sub(&k.mul(&a, e), &k.mul(&b, c))))
            {
                continue;
            }
            members.push((a, b));
        }
        PencilArrangement::new(f, p, members)
    }

    pub fn base(&self) -> (&Polynomial<K>, &Polynomial<K>) {
        (&self.f, &self.p)
    }

    pub fn members(&self) -> &[(K::Elem, K::Elem)] {
        &self.members
    }

    pub fn ring(&self) -> &Arc<Ring<K>> {
        self.f.ring()
    }

    pub fn s(&self) -> usize {
        self.members.len()
    }

    pub fn d(&self) -> u32 {
        self.f.homogeneous_degree().unwrap()
    }

    pub fn forms(&self) -> Result<Vec<Polynomial<K>>> {
        self.members
            .iter()
            .map(|(a, b)| self.f.scale(a).add(&self.p.scale(b)))
            .collect()
    }

    pub fn spec(&self) -> Result<ArrangementSpec<K>> {
        let labels = (1..=self.s()).map(|i| format!("G{i}")).collect();
        Ok(ArrangementSpec::new(self.ring(), self.forms()?)?.with_labels(labels))
    }

    pub fn base_ideal(&self) -> Result<Ideal<K>> {
        Ok(Ideal::new(self.ring(), vec![self.f.clone(), self.p.clone()])?.with_tag("(F,P)"))
    }
}

/// `G / G_i` for each `i`, from prefix and suffix products.
pub fn cofactors<K: Field>(
    ring: &Arc<Ring<K>>,
    forms: &[Polynomial<K>],
) -> Result<Vec<Polynomial<K>>> {
    let s = forms.len();
    let mut prefix = vec![Polynomial::one(ring)];
    for g in forms {
        let next = prefix.last().unwrap().mul(g)?;
        prefix.push(next);
    }
    let mut suffix = vec![Polynomial::one(ring); s + 1];
    for i in (0..s).rev() {
        suffix[i] = suffix[i + 1].mul(&forms[i])?;
    }
    (0..s).map(|i| prefix[i].mul(&suffix[i + 1])).collect()
}

/// `H_1 = sum a_i G/G_i`, `H_2 = sum b_i G/G_i`, so that
/// `dG = H_1 dF + H_2 dP`.
pub fn pencil_h_forms<K: Field>(
    p: &PencilArrangement<K>,
) -> Result<(Polynomial<K>, Polynomial<K>)> {
    if p.s() < 2 {
        return Err(ArrError::Precondition(
            "a pencil arrangement needs two members".into(),
        ));
    }
    let ring = p.ring();
    let cof = cofactors(ring, &p.forms()?)?;
    let mut h1 = Polynomial::zero(ring);
    let mut h2 = Polynomial::zero(ring);
    for ((a, b), c) in p.members().iter().zip(&cof) {
        h1 = h1.add(&c.scale(a))?;
        h2 = h2.add(&c.scale(b))?;
    }
    let e = (p.s() as u32 - 1) * p.d();
    if h1.homogeneous_degree() != Some(e) || h2.homogeneous_degree() != Some(e) {
        return Err(ArrError::Structural(format!(
            "H forms are not of degree {e}"
        )));
    }
    if Ideal::new(ring, vec![h1.clone(), h2.clone()])?.codim()? != 2 {
        return Err(ArrError::Structural(
            "H_1, H_2 are not a regular sequence".into(),
        ));
    }
    Ok((h1, h2))
}

fn pencil_hypotheses<K: Field>(p: &PencilArrangement<K>, report: &mut Report) -> Result<bool> {
    let (f, q) = p.base();
    let mut ok = report.expect_true(
        "base is a smooth complete intersection",
        is_smooth_ci(f, q)?,
    );
    for (i, g) in p.forms()?.iter().enumerate() {
        ok &= report.expect_true(format!("member G{} smooth", i + 1), is_smooth_form(g)?);
    }
    Ok(ok)
}

/// `Jac(G)^sat = (H_1, H_2)`, a complete intersection of type
/// `((s-1)d, (s-1)d)`, with `Jac(G) ⊆ (H_1, H_2)`.
pub fn verify_sat_is_ci<K: Field>(p: &PencilArrangement<K>) -> Result<Report> {
    let (s, d) = (p.s(), p.d());
    let mut r = Report::new(format!(
        "saturation of Jac(G) for a pencil, s = {s}, d = {d}"
    ));
    if !pencil_hypotheses(p, &mut r)? {
        r.note("hypotheses fail; theorem not applicable");
        return Ok(r);
    }
    let ring = p.ring();
    let j = jacobian_ideal(&p.spec()?)?;
    let (h1, h2) = pencil_h_forms(p)?;
    let h = Ideal::new(ring, vec![h1, h2])?.with_tag("(H1,H2)");
    r.expect_true("Jac(G) ⊆ (H1,H2)", h.contains_ideal(&j)?);
    let sat = j.saturate_irrelevant()?;
    r.expect_true("Jac(G)^sat = (H1,H2)", sat.equals(&h)?);
    let e = (s as u32 - 1) * d;
    let mut degs = h.trim()?.degrees();
    degs.sort_unstable();
    r.expect_eq(
        "type",
        format!("({e},{e})"),
        format!("({})", join(&degs, ",")),
    );
    r.expect_eq("degree", (e * e) as i64, h.degree()?);
    let saturated = j.is_saturated()?;
    if d == 1 {
        r.expect_eq("Jac(G) saturated", true, saturated);
        r.expect_true("Jac(G) = (H1,H2)", j.equals(&h)?);
    } else {
        r.note(format!("Jac(G) saturated: {saturated}"));
    }
    Ok(r)
}

/// For `d = 1`: `Jac` of planes through a codimension-two flat is a
/// saturated complete intersection of type `(s-1, s-1)`, not reduced once
/// `s >= 3`.
pub fn verify_plane_pencil<K: Field>(p: &PencilArrangement<K>) -> Result<Report> {
    if p.d() != 1 {
        return Err(ArrError::Precondition(
            "plane pencil needs linear forms".into(),
        ));
    }
    let s = p.s();
    let mut r = Report::new(format!("{s} hyperplanes through a codimension-two flat"));
    let j = jacobian_ideal(&p.spec()?)?;
    r.expect_eq("Jac saturated", true, j.is_saturated()?);
    let t = j.trim()?;
    r.expect_eq("minimal generators", 2, t.gens().len());
    r.expect_true(
        "generator degrees s-1",
        t.degrees().iter().all(|&e| e as usize == s - 1),
    );
    r.expect_eq("degree", ((s - 1) * (s - 1)) as i64, j.degree()?);
    let reduced = j.equals(&p.base_ideal()?)?;
    r.expect_eq("reduced", s == 2, reduced);
    Ok(r)
}

/// `(F, P)^{s-1} = (G/G_1, ..., G/G_s)`, ACM of degree `C(s,2) d^2`.
pub fn star_power_identity<K: Field>(p: &PencilArrangement<K>) -> Result<Report> {
    let (s, d) = (p.s(), p.d() as i64);
    let mut r = Report::new(format!("star configuration of a pencil, s = {s}, d = {d}"));
    let (f, q) = p.base();
    if !r.expect_true(
        "base is a smooth complete intersection",
        is_smooth_ci(f, q)?,
    ) {
        return Ok(r);
    }
    let ring = p.ring();
    let lhs = p.base_ideal()?.power(s as u32 - 1)?;
    let rhs = Ideal::new(ring, cofactors(ring, &p.forms()?)?)?.with_tag("(G/G_i)");
    r.expect_true("(F,P)^(s-1) = (G/G_i)", lhs.equals(&rhs)?);
    r.expect_eq("ACM", true, is_acm(&rhs)?);
    r.expect_eq("degree", (s * (s - 1) / 2) as i64 * d * d, rhs.degree()?);
    Ok(r)
}

/// 2-minors of `[grad F; grad P]` have codimension `n`, and with the extra
/// column `(H_2, -H_1)` codimension `n + 1`.
pub fn minors_codim_check<K: Field>(p: &PencilArrangement<K>) -> Result<Report> {
    let ring = p.ring();
    let n = ring.nvars() - 1;
    let mut r = Report::new(format!(
        "minors of the Jacobian matrix of a pencil base in P^{n}"
    ));
    if !pencil_hypotheses(p, &mut r)? {
        return Ok(r);
    }
    let (f, q) = p.base();
    let mut rows = vec![f.gradient()?, q.gradient()?];
    r.expect_eq(
        "codim of 2-minors",
        n,
        codim_or_full(&minors(ring, &rows, 2)?)?,
    );
    let (h1, h2) = pencil_h_forms(p)?;
    rows[0].push(h2);
    rows[1].push(h1.neg());
    r.expect_eq(
        "codim of augmented 2-minors",
        n + 1,
        codim_or_full(&minors(ring, &rows, 2)?)?,
    );
    Ok(r)
}

/// Codimension, with the unit ideal counted as `nvars`.
fn codim_or_full<K: Field>(i: &Ideal<K>) -> Result<usize> {
    if i.is_unit()? {
        Ok(i.ring().nvars())
    } else {
        i.codim()
    }
}

fn join<T: fmt::Display>(v: &[T], sep: &str) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

// ---------------------------------------------------------------------------
// liaison addition and basic double linkage

/// Hilbert functions around a liaison addition `I = F_2 I_1 + F_1 I_2`.
#[derive(Clone, Debug, Serialize)]
pub struct Additivity {
    /// `HS(S/I) = HS(S/(F_1,F_2)) + z^{d_2} HS(S/I_1) + z^{d_1} HS(S/I_2)`.
    pub series_equal: bool,
    /// `(t, h_Z(t), h_V(t) + h_1(t - d_2) + h_2(t - d_1))` for the computed range.
    pub values: Vec<(i64, i64, i64)>,
}

impl Additivity {
    pub fn holds(&self) -> bool {
        self.series_equal && self.values.iter().all(|(_, a, b)| a == b)
    }
}

pub fn liaison_additivity<K: Field>(
    i1: &Ideal<K>,
    i2: &Ideal<K>,
    f1: &Polynomial<K>,
    f2: &Polynomial<K>,
    z: &Ideal<K>,
) -> Result<Additivity> {
    let d1 = f1.homogeneous_degree().unwrap() as usize;
    let d2 = f2.homogeneous_degree().unwrap() as usize;
    let v = Ideal::new(z.ring(), vec![f1.clone(), f2.clone()])?;
    let (hz, hv, h1, h2) = (z.hilbert()?, v.hilbert()?, i1.hilbert()?, i2.hilbert()?);
    let len = [
        hz.numerator.len(),
        hv.numerator.len(),
        h1.numerator.len() + d2,
        h2.numerator.len() + d1,
    ]
    .into_iter()
    .max()
    .unwrap();
    let mut rhs = vec![0i64; len];
    for (e, c) in hv.numerator.iter().enumerate() {
        rhs[e] += c;
    }
    for (e, c) in h1.numerator.iter().enumerate() {
        rhs[e + d2] += c;
    }
    for (e, c) in h2.numerator.iter().enumerate() {
        rhs[e + d1] += c;
    }
    let mut lhs = hz.numerator.clone();
    lhs.resize(len, 0);
    let top = [
        hz.regularity_bound,
        hv.regularity_bound,
        h1.regularity_bound + d2 as i64,
        h2.regularity_bound + d1 as i64,
    ]
    .into_iter()
    .max()
    .unwrap()
        + 2;
    let at = |h: &crate::invariants::HilbertData, t: i64| if t < 0 { 0 } else { h.value(t) };
    let values = (0..=top)
        .map(|t| {
            (
                t,
                hz.value(t),
                hv.value(t) + at(&h1, t - d2 as i64) + at(&h2, t - d1 as i64),
            )
        })
        .collect();
    Ok(Additivity {
        series_equal: lhs == rhs,
        values,
    })
}

fn liaison_preconditions<K: Field>(
    i1: &Ideal<K>,
    i2: &Ideal<K>,
    f1: &Polynomial<K>,
    f2: &Polynomial<K>,
) -> Result<()> {
    if f1.homogeneous_degree().unwrap_or(0) == 0 || f2.homogeneous_degree().unwrap_or(0) == 0 {
        return Err(ArrError::Precondition(
            "F1, F2 must be nonconstant forms".into(),
        ));
    }
    if !i1.contains(f1)? {
        return Err(ArrError::Precondition(format!(
            "F1 = {f1} is not in {}",
            i1.tag()
        )));
    }
    if !i2.contains(f2)? {
        return Err(ArrError::Precondition(format!(
            "F2 = {f2} is not in {}",
            i2.tag()
        )));
    }
    if Ideal::new(i1.ring(), vec![f1.clone(), f2.clone()])?.codim()? != 2 {
        return Err(ArrError::Precondition(
            "F1, F2 are not a regular sequence".into(),
        ));
    }
    Ok(())
}

/// `I = F_2 I_1 + F_1 I_2`; the result is checked to be saturated with the
/// additive Hilbert function `h_V(t) + h_{V_1}(t - d_2) + h_{V_2}(t - d_1)`.
pub fn liaison_addition<K: Field>(
    i1: &Ideal<K>,
    i2: &Ideal<K>,
    f1: &Polynomial<K>,
    f2: &Polynomial<K>,
) -> Result<Ideal<K>> {
    liaison_preconditions(i1, i2, f1, f2)?;
    let out = i1.scale_by(f2)?.sum(&i2.scale_by(f1)?)?.with_tag(format!(
        "LA({}, {})",
        i1.tag(),
        i2.tag()
    ));
    if !out.is_saturated()? {
        return Err(ArrError::Structural(
            "liaison addition is not saturated".into(),
        ));
    }
    if !liaison_additivity(i1, i2, f1, f2, &out)?.holds() {
        return Err(ArrError::Structural(
            "liaison addition violates Hilbert additivity".into(),
        ));
    }
    Ok(out)
}

/// `I = F_2 I_1 + (F_1)`, liaison addition with `I_2 = (1)`.
pub fn basic_double_link<K: Field>(
    i1: &Ideal<K>,
    f1: &Polynomial<K>,
    f2: &Polynomial<K>,
) -> Result<Ideal<K>> {
    let unit = Ideal::unit(i1.ring());
    liaison_preconditions(i1, &unit, f1, f2)?;
    let out = i1
        .scale_by(f2)?
        .sum(&Ideal::principal(f1)?)?
        .with_tag(format!("BDL({})", i1.tag()));
    if !out.is_saturated()? {
        return Err(ArrError::Structural(
            "basic double link is not saturated".into(),
        ));
    }
    if !liaison_additivity(i1, &unit, f1, f2, &out)?.holds() {
        return Err(ArrError::Structural(
            "basic double link violates Hilbert additivity".into(),
        ));
    }
    Ok(out)
}

/// `M(C)`, zero for the unit ideal (empty curve).
pub fn rao_or_zero<K: Field>(i: &Ideal<K>) -> Result<RaoModule> {
    if i.is_unit()? {
        Ok(RaoModule::default())
    } else {
        rao_module(i)
    }
}

/// Rao module of `F_2 I_1 + (F_1)` against that of `I_1` shifted by `deg F_2`.
pub fn bdl_rao_report<K: Field>(
    i1: &Ideal<K>,
    f1: &Polynomial<K>,
    f2: &Polynomial<K>,
) -> Result<Report> {
    let mut r = Report::new(format!("basic double link of {}", i1.tag()));
    let out = basic_double_link(i1, f1, f2)?;
    let before = rao_or_zero(i1)?;
    let after = rao_or_zero(&out)?;
    let d2 = f2.homogeneous_degree().unwrap() as i64;
    r.note(format!("M(I1) = {before}"));
    r.expect_eq(
        "M(I) = M(I1)(-deg F2)",
        before.shifted(d2).to_string(),
        after.to_string(),
    );
    r.expect_eq(
        "degree",
        i1.degree()? + f1.degree().unwrap() as i64 * d2,
        out.degree()?,
    );
    Ok(r)
}

// ---------------------------------------------------------------------------
// top dimensional part

/// The part of `J^top` on one support.
#[derive(Clone, Debug)]
pub struct PrimaryPiece<K: Field> {
    pub support: Ideal<K>,
    pub primary: Ideal<K>,
    pub degree: i64,
    pub support_degree: i64,
}

impl<K: Field> PrimaryPiece<K> {
    /// `deg(primary) / deg(support)` when it divides.
    pub fn multiplicity(&self) -> Option<i64> {
        (self.support_degree > 0 && self.degree % self.support_degree == 0)
            .then(|| self.degree / self.support_degree)
    }
}

#[derive(Clone, Debug)]
pub struct TopPart<K: Field> {
    pub sat: Ideal<K>,
    pub top: Ideal<K>,
    pub pieces: Vec<PrimaryPiece<K>>,
}

impl<K: Field> TopPart<K> {
    /// Intersection of the supports carrying a piece.
    pub fn radical(&self) -> Result<Ideal<K>> {
        let mut acc = Ideal::unit(self.top.ring());
        for p in &self.pieces {
            acc = acc.intersect(&p.support)?;
        }
        Ok(acc.with_tag(format!("rad({})", self.top.tag())))
    }

    pub fn piece_at(&self, support: &Ideal<K>) -> Result<Option<&PrimaryPiece<K>>> {
        for p in &self.pieces {
            if p.support.equals(support)? {
                return Ok(Some(p));
            }
        }
        Ok(None)
    }
}

/// `J^top` by localizing `J^sat` away from all supports but one.
///
/// For each support `p_k` a general form `h_k` of least degree in `p_k` is
/// drawn (avoiding every other support). The piece on `p_k` is `J^sat`
/// saturated by every `h_j`, `j != k`; embedded points it keeps on `V(p_k)`
/// are removed by [`unmixed_part`]. A codimension-two residue after
/// saturating by all `h_j` means a component no support covers.
pub fn top_part<K: Field>(j: &Ideal<K>, supports: &[Ideal<K>]) -> Result<TopPart<K>> {
    top_part_seeded(j, supports, SEPARATOR_SEED)
}

pub fn top_part_seeded<K: Field>(
    j: &Ideal<K>,
    supports: &[Ideal<K>],
    seed: u64,
) -> Result<TopPart<K>> {
    let ring = j.ring().clone();
    let sat = j.saturate_irrelevant()?;
    if sat.is_unit()? || sat.codim()? > 2 {
        return Ok(TopPart {
            sat,
            top: Ideal::unit(&ring).with_tag(format!("({})^top", j.tag())),
            pieces: Vec::new(),
        });
    }
    if sat.codim()? < 2 {
        return Err(ArrError::Precondition(format!(
            "{} has a codimension-one component",
            j.tag()
        )));
    }
    for (k, p) in supports.iter().enumerate() {
        if p.is_unit()? || p.codim()? != 2 {
            return Err(ArrError::Precondition(format!(
                "support {} ({}) is not of codimension 2",
                k + 1,
                p.tag()
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seps = separators(supports, &mut rng)?;
    let mut slots: Vec<Option<Ideal<K>>> = vec![None; supports.len()];
    let idx: Vec<usize> = (0..supports.len()).collect();
    localize(&sat, &idx, &seps, &mut slots)?;

    let mut pieces = Vec::new();
    for (k, slot) in slots.into_iter().enumerate() {
        let cur = slot.expect("every support visited");
        if cur.is_unit()? || cur.codim()? > 2 {
            continue;
        }
        let primary = if is_unmixed(&cur)? {
            cur
        } else {
            unmixed_part(&cur, seed.wrapping_add(k as u64))?
        };
        let primary = primary.with_tag(format!("piece@{}", supports[k].tag()));
        pieces.push(PrimaryPiece {
            support: supports[k].clone(),
            degree: primary.degree()?,
            support_degree: supports[k].degree()?,
            primary,
        });
    }

    let mut residue = sat.clone();
    for h in &seps {
        residue = residue.saturate_by(h)?;
    }
    if !residue.is_unit()? && residue.codim()? == 2 {
        return Err(ArrError::UncoveredComponent(format!(
            "a codimension-2 component of degree {} lies on none of the {} supports",
            residue.degree()?,
            supports.len()
        )));
    }

    let mut top = Ideal::unit(&ring);
    for p in &pieces {
        top = top.intersect(&p.primary)?;
    }
    let top = top.with_tag(format!("({})^top", j.tag()));
    let total: i64 = pieces.iter().map(|p| p.degree).sum();
    let (dt, ds) = (top.degree()?, sat.degree()?);
    if total != ds || dt != ds {
        return Err(ArrError::UncoveredComponent(format!(
            "pieces have total degree {total}, their intersection {dt}, while J^sat has degree {ds}"
        )));
    }
    if !top.contains_ideal(&sat)? {
        return Err(ArrError::Structural("J^top does not contain J^sat".into()));
    }
    if !top.is_saturated()? {
        return Err(ArrError::Structural("J^top is not saturated".into()));
    }
    Ok(TopPart { sat, top, pieces })
}

/// One general form in each support, outside all others, of the least
/// degree (up to the top generator degree) at which such a form exists.
fn separators<K: Field>(supports: &[Ideal<K>], rng: &mut ChaCha8Rng) -> Result<Vec<Polynomial<K>>> {
    let mut out = Vec::with_capacity(supports.len());
    for (k, p) in supports.iter().enumerate() {
        let lo = p
            .min_degree()
            .ok_or_else(|| ArrError::Precondition(format!("support {} is zero", k + 1)))?;
        let hi = p
            .gens()
            .iter()
            .filter_map(|g| g.homogeneous_degree())
            .max()
            .unwrap_or(lo);
        let mut found = None;
        'degree: for d in lo..=hi {
            'draw: for _ in 0..SEPARATOR_RETRIES {
                let Some(h) = p.random_element(d, rng)? else {
                    break;
                };
                for (j, q) in supports.iter().enumerate() {
                    if j != k && q.contains(&h)? {
                        log::debug!(
                            "separator for support {} in degree {d} lies in support {}",
                            k + 1,
                            j + 1
                        );
                        continue 'draw;
                    }
                }
                found = Some(h);
                break 'degree;
            }
        }
        match found {
            Some(h) => out.push(h),
            None => {
                return Err(ArrError::Precondition(format!(
                    "support {} ({}) is contained in another support",
                    k + 1,
                    p.tag()
                )))
            }
        }
    }
    Ok(out)
}

/// Divide and conquer over the supports: each half is localized away from
/// the other half once, so the saturations total `O(m log m)` instead of
/// `m (m - 1)`.
fn localize<K: Field>(
    cur: &Ideal<K>,
    idx: &[usize],
    seps: &[Polynomial<K>],
    slots: &mut [Option<Ideal<K>>],
) -> Result<()> {
    if idx.len() == 1 {
        slots[idx[0]] = Some(cur.clone());
        return Ok(());
    }
    let (left, right) = idx.split_at(idx.len() / 2);
    for (a, b) in [(left, right), (right, left)] {
        let mut part = cur.clone();
        for &j in b {
            if part.is_unit()? {
                break;
            }
            part = part.saturate_by(&seps[j])?;
        }
        localize(&part, a, seps, slots)?;
    }
    Ok(())
}

/// Pairwise complete intersections `(f_i, f_j)` and the hints, split until
/// no two supports share a codimension-two component: a support containing
/// another is replaced by its residual `A : B^∞`, and two supports meeting
/// in codimension two contribute the unmixed part of their sum.
pub fn default_supports<K: Field>(
    spec: &ArrangementSpec<K>,
    hints: &[Ideal<K>],
) -> Result<Vec<Ideal<K>>> {
    let ring = spec.ring();
    let f = spec.factors();
    let mut sup: Vec<Ideal<K>> = Vec::new();
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            let ci = Ideal::new(ring, vec![f[i].clone(), f[j].clone()])?.with_tag(format!(
                "({},{})",
                spec.labels()[i],
                spec.labels()[j]
            ));
            if ci.codim()? != 2 {
                return Err(ArrError::Precondition(format!(
                    "{} and {} share a component",
                    spec.labels()[i],
                    spec.labels()[j]
                )));
            }
            push_new(&mut sup, ci)?;
        }
    }
    for (k, h) in hints.iter().enumerate() {
        if h.is_unit()? || h.codim()? != 2 {
            return Err(ArrError::Precondition(format!(
                "hint {} is not of codimension 2",
                k + 1
            )));
        }
        push_new(
            &mut sup,
            h.saturate_irrelevant()?.with_tag(h.tag().to_string()),
        )?;
    }
    let guard = 8 * (sup.len() + 4) * (sup.len() + 4);
    for _ in 0..guard {
        if !split_once(&mut sup)? {
            return Ok(sup);
        }
    }
    Err(ArrError::BudgetExhausted {
        reason: "support splitting did not settle".into(),
        stats: ring.env().totals(),
    })
}

fn push_new<K: Field>(sup: &mut Vec<Ideal<K>>, i: Ideal<K>) -> Result<bool> {
    for s in sup.iter() {
        if s.equals(&i)? {
            return Ok(false);
        }
    }
    sup.push(i);
    Ok(true)
}

fn split_once<K: Field>(sup: &mut Vec<Ideal<K>>) -> Result<bool> {
    let m = sup.len();
    for a in 0..m {
        for b in 0..m {
            if a != b && sup[b].contains_ideal(&sup[a])? {
                let rest = sup[a].saturate(&sup[b])?;
                let tag = format!("{}:{}", sup[a].tag(), sup[b].tag());
                sup.remove(a);
                if !rest.is_unit()? && rest.codim()? == 2 {
                    push_new(sup, rest.with_tag(tag))?;
                }
                return Ok(true);
            }
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            let s = sup[a].sum(&sup[b])?;
            if !s.is_unit()? && s.codim()? == 2 {
                let common = unmixed_part(&s, SEPARATOR_SEED)?.with_tag(format!(
                    "{}∩{}",
                    sup[a].tag(),
                    sup[b].tag()
                ));
                return push_new(sup, common);
            }
        }
    }
    Ok(false)
}

/// `√(J^top)` as the intersection of the supports carrying a piece.
pub fn radical_top<K: Field>(spec: &ArrangementSpec<K>, supports: &[Ideal<K>]) -> Result<Ideal<K>> {
    top_part(&jacobian_ideal(spec)?, supports)?.radical()
}

// ---------------------------------------------------------------------------
// hypotheses

/// Verdicts on the hypotheses of the ACM theorem for arrangements.
#[derive(Clone, Debug, Serialize)]
pub struct Hypotheses {
    /// Any two factors meet in a smooth codimension-two complete intersection.
    pub pairs_smooth_ci: bool,
    /// Any three factors meet in codimension 3, or have equal degrees.
    pub triples_ok: bool,
    /// No factor lies on more than one locus shared by three or more factors.
    pub nonreduced_ok: bool,
    pub factors_smooth: bool,
    pub report: Report,
}

impl Hypotheses {
    pub fn main_theorem_applies(&self) -> bool {
        self.pairs_smooth_ci && self.triples_ok && self.nonreduced_ok
    }
}

pub fn check_hypotheses<K: Field>(spec: &ArrangementSpec<K>) -> Result<Hypotheses> {
    let ring = spec.ring();
    let f = spec.factors();
    let l = spec.labels();
    let s = f.len();
    let mut r = Report::new(format!(
        "hypotheses for an arrangement of {s} hypersurfaces"
    ));
    let mut pairs_ok = true;
    for i in 0..s {
        for j in i + 1..s {
            let ok = smooth_ci_or_false(&f[i], &f[j])?;
            pairs_ok &= r.expect_true(
                format!("({},{}) smooth complete intersection", l[i], l[j]),
                ok,
            );
        }
    }
    let mut triples_ok = true;
    // codimension-two loci through three or more factors, with their members
    let mut loci: Vec<(Ideal<K>, Vec<usize>)> = Vec::new();
    for i in 0..s {
        for j in i + 1..s {
            for k in j + 1..s {
                let t = Ideal::new(ring, vec![f[i].clone(), f[j].clone(), f[k].clone()])?;
                if t.codim()? >= 3 {
                    continue;
                }
                let degs = [f[i].degree(), f[j].degree(), f[k].degree()];
                let ok = degs[0] == degs[1] && degs[1] == degs[2];
                triples_ok &= r.expect_true(
                    format!("({},{},{}) codim 2 with equal degrees", l[i], l[j], l[k]),
                    ok,
                );
                let ci = Ideal::new(ring, vec![f[i].clone(), f[j].clone()])?;
                let mut placed = false;
                for (locus, members) in loci.iter_mut() {
                    if locus.equals(&ci)? {
                        for x in [i, j, k] {
                            if !members.contains(&x) {
                                members.push(x);
                            }
                        }
                        placed = true;
                        break;
                    }
                }
                if !placed {
                    loci.push((ci, vec![i, j, k]));
                }
            }
        }
    }
    let mut nonreduced_ok = true;
    for x in 0..s {
        let count = loci.iter().filter(|(_, m)| m.contains(&x)).count();
        if count > 1 {
            nonreduced_ok &=
                r.expect_true(format!("{} on at most one non-reduced locus", l[x]), false);
        }
    }
    if nonreduced_ok {
        r.expect_true("no factor on two non-reduced loci", true);
    }
    let mut factors_smooth = true;
    for (x, g) in f.iter().enumerate() {
        let ok = is_smooth_form(g)?;
        factors_smooth &= ok;
        r.observe(format!("{} smooth", l[x]), true, ok);
    }
    r.note(format!("{} non-reduced loci", loci.len()));
    Ok(Hypotheses {
        pairs_smooth_ci: pairs_ok,
        triples_ok,
        nonreduced_ok,
        factors_smooth,
        report: r,
    })
}

fn smooth_ci_or_false<K: Field>(a: &Polynomial<K>, b: &Polynomial<K>) -> Result<bool> {
    match is_smooth_ci(a, b) {
        Ok(v) => Ok(v),
        Err(ArrError::Precondition(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

fn codim3<K: Field>(ring: &Arc<Ring<K>>, gens: Vec<Polynomial<K>>) -> Result<bool> {
    Ok(codim_or_full(&Ideal::new(ring, gens)?)? >= 3)
}

// ---------------------------------------------------------------------------
// decomposition theorems

/// `J^top` of an arrangement with its default supports.
pub fn arrangement_top<K: Field>(
    spec: &ArrangementSpec<K>,
    hints: &[Ideal<K>],
) -> Result<TopPart<K>> {
    let supports = default_supports(spec, hints)?;
    top_part(&jacobian_ideal(spec)?, &supports)
}

/// Liaison decomposition of `Jac(fg)^top` from `Jac(f)^top` and `Jac(g)^top`:
/// (a) the intersection with `(f, g)`, (b) `g Jac(f)^top + f Jac(g)^top`,
/// (c) both for radicals. With a single factor `g` the basic double link
/// form `g Jac(f)^top + (f)` is checked as well.
pub fn verify_liaison_decomposition<K: Field>(
    spec_f: &ArrangementSpec<K>,
    spec_g: &ArrangementSpec<K>,
) -> Result<Report> {
    let ring = spec_f.ring();
    let both = spec_f.join(spec_g)?;
    let mut r = Report::new(format!(
        "liaison decomposition, {} + {} factors",
        spec_f.len(),
        spec_g.len()
    ));
    let all = both.factors();
    let mut ok = true;
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            ok &= smooth_ci_or_false(&all[i], &all[j])?;
        }
    }
    ok = r.expect_true("pairwise smooth complete intersections", ok);
    let f = spec_f.product()?;
    let g = spec_g.product()?;
    let (fs, gs) = (spec_f.factors(), spec_g.factors());
    let mut c2 = true;
    for i in 0..fs.len() {
        for j in i + 1..fs.len() {
            c2 &= codim3(ring, vec![fs[i].clone(), fs[j].clone(), g.clone()])?;
        }
    }
    let mut c3 = true;
    for i in 0..gs.len() {
        for j in i + 1..gs.len() {
            c3 &= codim3(ring, vec![f.clone(), gs[i].clone(), gs[j].clone()])?;
        }
    }
    ok &= r.expect_true("codim (f_i, f_j, g) = 3", c2);
    ok &= r.expect_true("codim (f, g_i, g_j) = 3", c3);
    if !ok {
        r.note("hypotheses fail; theorem not applicable");
        return Ok(r);
    }
    let tf = arrangement_top(spec_f, &[])?;
    let tg = arrangement_top(spec_g, &[])?;
    let tfg = arrangement_top(&both, &[])?;
    let fg = Ideal::new(ring, vec![f.clone(), g.clone()])?.with_tag("(f,g)");

    let a = tf.top.intersect(&tg.top)?.intersect(&fg)?;
    r.expect_true(
        "(a) Jac(fg)^top = Jac(f)^top ∩ Jac(g)^top ∩ (f,g)",
        tfg.top.equals(&a)?,
    );
    let b = liaison_addition(&tf.top, &tg.top, &f, &g)?;
    r.expect_true(
        "(b) Jac(fg)^top = g Jac(f)^top + f Jac(g)^top",
        tfg.top.equals(&b)?,
    );
    if spec_g.len() == 1 {
        let bdl = basic_double_link(&tf.top, &f, &g)?;
        r.expect_true("Jac(fg)^top = g Jac(f)^top + (f)", tfg.top.equals(&bdl)?);
    }
    let (rf, rg, rfg) = (tf.radical()?, tg.radical()?, tfg.radical()?);
    let ra = rf.intersect(&rg)?.intersect(&fg)?;
    r.expect_true("(c) radical intersection", rfg.equals(&ra)?);
    let rb = liaison_addition(&rf, &rg, &f, &g)?;
    r.expect_true("(c) radical liaison addition", rfg.equals(&rb)?);

    if ring.nvars() == 4 {
        let (d1, d2) = (f.degree().unwrap() as i64, g.degree().unwrap() as i64);
        let mf = rao_or_zero(&tf.top)?;
        let mg = rao_or_zero(&tg.top)?;
        let mfg = rao_or_zero(&tfg.top)?;
        r.expect_eq(
            "M(fg) = M(f)(-d2) ⊕ M(g)(-d1)",
            mf.shifted(d2).direct_sum(&mg.shifted(d1)).to_string(),
            mfg.to_string(),
        );
    }
    Ok(r)
}

/// The primary component of `Jac(f)` at `support` survives adding a
/// general factor `g`.
pub fn verify_component_stability<K: Field>(
    spec_f: &ArrangementSpec<K>,
    g: &Polynomial<K>,
    support: &Ideal<K>,
) -> Result<Report> {
    let ring = spec_f.ring();
    let mut r = Report::new(format!("component stability at {}", support.tag()));
    let fs = spec_f.factors();
    let mut ok = true;
    for i in 0..fs.len() {
        for j in i + 1..fs.len() {
            ok &= codim3(ring, vec![fs[i].clone(), fs[j].clone(), g.clone()])?;
        }
    }
    ok = r.expect_true("codim (f_i, f_j, g) = 3", ok);
    let mut smooth = is_smooth_form(g)?;
    for f in fs {
        smooth &= is_smooth_form(f)?;
    }
    ok &= r.expect_true("factors and g smooth", smooth);
    if !ok {
        return Ok(r);
    }
    let both =
        spec_f.join(&ArrangementSpec::new(ring, vec![g.clone()])?.with_labels(vec!["g".into()]))?;
    let hints = [support.clone()];
    let t1 = arrangement_top(spec_f, &hints)?;
    let t2 = arrangement_top(&both, &hints)?;
    let (Some(q1), Some(q2)) = (t1.piece_at(support)?, t2.piece_at(support)?) else {
        r.expect_true("support carries a piece in both", false);
        return Ok(r);
    };
    r.expect_true("pieces equal", q1.primary.equals(&q2.primary)?);
    r.note(format!(
        "piece degree {}, support degree {}",
        q1.degree, q1.support_degree
    ));
    Ok(r)
}

/// Hyperplane arrangements: `J^top` is the intersection over codimension-two
/// flats `Λ` of `Jac(f_Λ)`, each a complete intersection of type
/// `(e_Λ - 1, e_Λ - 1)`; for generic arrangements also
/// `∩ (l_i, l_j) = (L/l_1, ..., L/l_s)`, ACM.
pub fn hyperplane_flat_components<K: Field>(spec: &ArrangementSpec<K>) -> Result<Report> {
    if !spec.is_linear() {
        return Err(ArrError::Precondition(
            "hyperplane arrangement expected".into(),
        ));
    }
    let ring = spec.ring();
    let l = spec.factors();
    let mut r = Report::new(format!("flats of {} hyperplanes", l.len()));
    let mut flats: Vec<(Ideal<K>, Vec<usize>)> = Vec::new();
    for i in 0..l.len() {
        for j in i + 1..l.len() {
            let fl = Ideal::new(ring, vec![l[i].clone(), l[j].clone()])?.with_tag(format!(
                "({},{})",
                spec.labels()[i],
                spec.labels()[j]
            ));
            let mut seen = false;
            for (g, _) in &flats {
                if g.equals(&fl)? {
                    seen = true;
                    break;
                }
            }
            if !seen {
                let members = (0..l.len())
                    .filter(|&k| fl.contains(&l[k]).unwrap_or(false))
                    .collect();
                flats.push((fl, members));
            }
        }
    }
    let supports: Vec<Ideal<K>> = flats.iter().map(|(f, _)| f.clone()).collect();
    let tp = top_part(&jacobian_ideal(spec)?, &supports)?;
    let mut inter = Ideal::unit(ring);
    for (fl, members) in &flats {
        let e = members.len();
        let jl = jacobian_ideal(&spec.sub(members)?)?;
        let t = jl.trim()?;
        let ci = t.gens().len() == 2 && t.degrees().iter().all(|&x| x as usize == e - 1);
        r.expect_true(
            format!("Jac at {} is a CI of type ({},{})", fl.tag(), e - 1, e - 1),
            ci,
        );
        let same = match tp.piece_at(fl)? {
            Some(p) => p.primary.equals(&jl)?,
            None => false,
        };
        r.expect_true(
            format!("piece at {} = Jac of its {e} planes", fl.tag()),
            same,
        );
        inter = inter.intersect(&jl)?;
    }
    r.expect_true("J^top = ∩ Jac(f_Λ)", tp.top.equals(&inter)?);
    r.expect_eq(
        "degree",
        flats
            .iter()
            .map(|(_, m)| ((m.len() - 1) * (m.len() - 1)) as i64)
            .sum::<i64>(),
        tp.top.degree()?,
    );
    if flats.iter().all(|(_, m)| m.len() == 2) {
        let conf = Ideal::new(ring, cofactors(ring, l)?)?;
        r.expect_true("J^top = (L/l_i)", tp.top.equals(&conf)?);
        r.expect_eq("ACM", true, is_acm(&tp.top)?);
    } else {
        r.note(format!("J^top ACM: {}", is_acm(&tp.top)?));
    }
    r.note(format!(
        "J saturated: {}",
        tp.sat.equals(&jacobian_ideal(spec)?)?
    ));
    Ok(r)
}

// ---------------------------------------------------------------------------
// general choices

/// A seeded general element of `[base]_d`.
pub fn general_form<K: Field>(base: &Ideal<K>, d: u32, seed: u64) -> Result<Polynomial<K>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    base.random_element(d, &mut rng)?
        .ok_or_else(|| ArrError::Precondition(format!("{} has no forms of degree {d}", base.tag())))
}

/// `count` general elements of `[base]_d` from one seeded stream.
pub fn general_forms<K: Field>(
    base: &Ideal<K>,
    d: u32,
    count: usize,
    seed: u64,
) -> Result<Vec<Polynomial<K>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            base.random_element(d, &mut rng)?.ok_or_else(|| {
                ArrError::Precondition(format!("{} has no forms of degree {d}", base.tag()))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::invariants::rao_module;

    type R = Arc<Ring<PrimeField>>;

    fn ring(n: usize) -> R {
        Ring::new(PrimeField::default(), n).unwrap()
    }

    fn poly(r: &R, s: &str) -> Polynomial<PrimeField> {
        Polynomial::parse(r, s).unwrap()
    }

    fn ideal(r: &R, gens: &[&str]) -> Ideal<PrimeField> {
        Ideal::new(r, gens.iter().map(|s| poly(r, s)).collect()).unwrap()
    }

    fn spec(r: &R, fs: &[&str]) -> ArrangementSpec<PrimeField> {
        ArrangementSpec::new(r, fs.iter().map(|s| poly(r, s)).collect()).unwrap()
    }

    fn general(r: &R, d: u32, seed: u64) -> Polynomial<PrimeField> {
        general_form(&Ideal::unit(r), d, seed).unwrap()
    }

    #[test]
    fn jacobian_of_two_planes() {
        let r = ring(4);
        let j = jacobian_ideal(&spec(&r, &["x0*x1"])).unwrap();
        assert!(j.equals(&ideal(&r, &["x0", "x1"])).unwrap());
        assert_eq!(j.tag(), "Jac(f)");
    }

    #[test]
    fn smooth_quadric_has_irrelevant_jacobian() {
        let r = ring(4);
        let j = jacobian_ideal(&spec(&r, &["x0^2 + x1^2 + x2^2 + x3^2"])).unwrap();
        assert_eq!(j.codim().unwrap(), 4);
        let tp = top_part(&j, &[]).unwrap();
        assert!(tp.top.is_unit().unwrap());
        assert!(tp.pieces.is_empty());
    }

    #[test]
    fn repeated_factor_rejected() {
        let r = ring(4);
        let err = ArrangementSpec::new(&r, vec![poly(&r, "x0 + x1"), poly(&r, "2*x0 + 2*x1")]);
        assert!(matches!(err, Err(ArrError::Precondition(_))));
    }

    #[test]
    fn h_forms_of_the_base_case() {
        let r = ring(4);
        let k = r.field();
        let p = PencilArrangement::new(
            poly(&r, "x0"),
            poly(&r, "x1"),
            vec![(k.one(), k.zero()), (k.zero(), k.one())],
        )
        .unwrap();
        let (h1, h2) = pencil_h_forms(&p).unwrap();
        assert_eq!(h1, poly(&r, "x1"));
        assert_eq!(h2, poly(&r, "x0"));
    }

    #[test]
    fn four_planes_through_a_line() {
        let r = ring(4);
        let p = PencilArrangement::general(poly(&r, "x0"), poly(&r, "x1"), 4, 7).unwrap();
        let rep = verify_plane_pencil(&p).unwrap();
        assert!(rep.passed(), "{rep}");
        let rep = verify_sat_is_ci(&p).unwrap();
        assert!(rep.passed(), "{rep}");
        assert!(rep
            .checks
            .iter()
            .any(|c| c.name == "type" && c.computed == "(3,3)"));
        let rep = hyperplane_flat_components(&p.spec().unwrap()).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn quadric_pencil_saturation_is_ci() {
        let r = ring(4);
        let p = PencilArrangement::general(general(&r, 2, 1), general(&r, 2, 2), 3, 1).unwrap();
        let rep = verify_sat_is_ci(&p).unwrap();
        assert!(rep.passed(), "{rep}");
        assert!(rep
            .checks
            .iter()
            .any(|c| c.name == "degree" && c.computed == "16"));
        let rep = star_power_identity(&p).unwrap();
        assert!(rep.passed(), "{rep}");
        assert!(rep
            .checks
            .iter()
            .any(|c| c.name == "degree" && c.computed == "12"));
        let rep = minors_codim_check(&p).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn liaison_addition_of_two_lines() {
        let r = ring(4);
        let i1 = ideal(&r, &["x0", "x1"]);
        let i2 = ideal(&r, &["x2", "x3"]);
        let (f1, f2) = (poly(&r, "x0"), poly(&r, "x2"));
        let out = liaison_addition(&i1, &i2, &f1, &f2).unwrap();
        // oracle: the displayed ideal
        assert!(out
            .equals(&ideal(&r, &["x0*x2", "x1*x2", "x0*x3"]))
            .unwrap());
        assert!(is_acm(&out).unwrap());
        let add = liaison_additivity(&i1, &i2, &f1, &f2, &out).unwrap();
        assert!(add.holds());
        assert_eq!(add.values[3], (3, 10, 10));
    }

    #[test]
    fn liaison_addition_shifts_follow_the_other_degree() {
        // a line and a double line joined by forms of degrees 1 and 2
        let r = ring(4);
        let i1 = ideal(&r, &["x0", "x1"]);
        let i2 = ideal(&r, &["x2", "x3^2"]);
        let (f1, f2) = (poly(&r, "x0"), poly(&r, "x0*x2 + x3^2"));
        let out = liaison_addition(&i1, &i2, &f1, &f2).unwrap();
        assert!(liaison_additivity(&i1, &i2, &f1, &f2, &out)
            .unwrap()
            .holds());
        // h_V(t) + h_1(t - d1) + h_2(t - d2) disagrees
        let hv = ideal(&r, &["x0", "x0*x2 + x3^2"]).hilbert().unwrap();
        let (h1, h2, hz) = (
            i1.hilbert().unwrap(),
            i2.hilbert().unwrap(),
            out.hilbert().unwrap(),
        );
        let at = |h: &crate::invariants::HilbertData, t: i64| if t < 0 { 0 } else { h.value(t) };
        let printed: Vec<i64> = (0..8)
            .map(|t| hv.value(t) + at(&h1, t - 1) + at(&h2, t - 2))
            .collect();
        let actual: Vec<i64> = (0..8).map(|t| hz.value(t)).collect();
        assert_ne!(printed, actual);
    }

    #[test]
    fn liaison_precondition_failures() {
        let r = ring(4);
        let i1 = ideal(&r, &["x0", "x1"]);
        let i2 = ideal(&r, &["x2", "x3"]);
        let bad = liaison_addition(&i1, &i2, &poly(&r, "x2"), &poly(&r, "x2"));
        assert!(matches!(bad, Err(ArrError::Precondition(_))));
        let dependent = liaison_addition(&i1, &i2, &poly(&r, "x0*x2"), &poly(&r, "x2"));
        assert!(matches!(dependent, Err(ArrError::Precondition(_))));
    }

    #[test]
    fn basic_double_link_of_a_line_and_skew_lines() {
        let r = ring(4);
        let line = ideal(&r, &["x0", "x1"]);
        let out = basic_double_link(&line, &poly(&r, "x0"), &general(&r, 2, 3)).unwrap();
        assert_eq!(out.degree().unwrap(), 3);
        assert!(is_acm(&out).unwrap());

        let skew = ideal(&r, &["x0*x2", "x0*x3", "x1*x2", "x1*x3"]);
        let rep = bdl_rao_report(&skew, &poly(&r, "x0*x2"), &general(&r, 1, 4)).unwrap();
        assert!(rep.passed(), "{rep}");
        let bdl = basic_double_link(&skew, &poly(&r, "x0*x2"), &general(&r, 1, 4)).unwrap();
        assert_eq!(rao_module(&bdl).unwrap().first_degree(), Some(1));
    }

    #[test]
    fn planes_through_a_point_have_an_embedded_point() {
        let r = ring(4);
        let point = ideal(&r, &["x1", "x2", "x3"]);
        let planes = general_forms(&point, 1, 4, 11).unwrap();
        let sp = ArrangementSpec::new(&r, planes).unwrap();
        let j = jacobian_ideal(&sp).unwrap();
        let supports = default_supports(&sp, &[]).unwrap();
        assert_eq!(supports.len(), 6);
        let tp = top_part(&j, &supports).unwrap();
        assert!(tp.sat.equals(&j).unwrap());
        assert_eq!(tp.sat.hilbert().unwrap().polynomial_string(), "6t - 1");
        assert_eq!(tp.top.hilbert().unwrap().polynomial_string(), "6t - 2");
        assert_eq!(tp.pieces.len(), 6);
        assert!(is_acm(&tp.top).unwrap());
        let rep = hyperplane_flat_components(&sp).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn missing_support_is_reported() {
        let r = ring(4);
        let sp = spec(&r, &["x0", "x1", "x2"]);
        let j = jacobian_ideal(&sp).unwrap();
        let partial = vec![ideal(&r, &["x0", "x1"]), ideal(&r, &["x0", "x2"])];
        assert!(matches!(
            top_part(&j, &partial),
            Err(ArrError::UncoveredComponent(_))
        ));
    }

    #[test]
    fn generic_planes_give_the_configuration_ideal() {
        let r = ring(4);
        let sp =
            ArrangementSpec::new(&r, (0..3).map(|i| general(&r, 1, 20 + i)).collect()).unwrap();
        let rep = hyperplane_flat_components(&sp).unwrap();
        assert!(rep.passed(), "{rep}");
        let h = check_hypotheses(&sp).unwrap();
        assert!(h.main_theorem_applies() && h.factors_smooth, "{}", h.report);
    }

    #[test]
    fn generic_quadrics_satisfy_the_hypotheses() {
        let r = ring(4);
        let sp =
            ArrangementSpec::new(&r, (0..3).map(|i| general(&r, 2, 30 + i)).collect()).unwrap();
        let h = check_hypotheses(&sp).unwrap();
        assert!(h.main_theorem_applies(), "{}", h.report);
        assert!(h.report.passed());
        let tp = arrangement_top(&sp, &[]).unwrap();
        assert_eq!(tp.pieces.len(), 3);
        assert!(tp.pieces.iter().all(|p| p.multiplicity() == Some(1)));
        let conf = Ideal::new(&r, cofactors(&r, sp.factors()).unwrap()).unwrap();
        assert!(tp.top.equals(&conf).unwrap());
        assert!(is_acm(&tp.top).unwrap());
    }

    #[test]
    fn two_factors_top_is_their_ci() {
        let r = ring(4);
        let sp = ArrangementSpec::new(&r, vec![general(&r, 2, 40), general(&r, 3, 41)]).unwrap();
        let tp = arrangement_top(&sp, &[]).unwrap();
        let ci = Ideal::new(&r, sp.factors().to_vec()).unwrap();
        assert!(tp.top.equals(&ci).unwrap());
    }

    #[test]
    fn mixed_degree_triple_violates_the_hypotheses() {
        let r = ring(4);
        let line = ideal(&r, &["x0", "x1"]);
        let fs = vec![
            general_form(&line, 1, 1).unwrap(),
            general_form(&line, 1, 2).unwrap(),
            general_form(&line, 2, 3).unwrap(),
        ];
        let h = check_hypotheses(&ArrangementSpec::new(&r, fs).unwrap()).unwrap();
        assert!(!h.triples_ok);
    }

    #[test]
    fn liaison_decomposition_of_two_plane_pairs() {
        let r = ring(4);
        let l1 = ideal(&r, &["x0", "x1"]);
        let l2 = ideal(&r, &["x2", "x3"]);
        let sf = ArrangementSpec::new(&r, general_forms(&l1, 1, 2, 50).unwrap()).unwrap();
        let sg = ArrangementSpec::new(&r, general_forms(&l2, 1, 2, 51).unwrap())
            .unwrap()
            .with_labels(vec!["g1".into(), "g2".into()]);
        let rep = verify_liaison_decomposition(&sf, &sg).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn bdl_corollary_with_a_quadric() {
        let r = ring(4);
        let p = PencilArrangement::general(general(&r, 1, 60), general(&r, 1, 61), 3, 62).unwrap();
        let sg = ArrangementSpec::new(&r, vec![general(&r, 2, 63)])
            .unwrap()
            .with_labels(vec!["g".into()]);
        let rep = verify_liaison_decomposition(&p.spec().unwrap(), &sg).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn component_stability_for_two_quadrics() {
        let r = ring(4);
        let sf = ArrangementSpec::new(&r, vec![general(&r, 2, 70), general(&r, 2, 71)]).unwrap();
        let support = Ideal::new(&r, sf.factors().to_vec()).unwrap();
        let rep = verify_component_stability(&sf, &general(&r, 3, 72), &support).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn general_quadric_through_twisted_cubic() {
        let r = ring(4);
        let c = ideal(&r, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]);
        let q = general_form(&c, 2, 5).unwrap();
        assert!(c.contains(&q).unwrap());
        assert_eq!(q.degree(), Some(2));
        assert_eq!(general_form(&c, 2, 5).unwrap(), q);
        assert!(general_form(&c, 1, 5).is_err());
    }
}
