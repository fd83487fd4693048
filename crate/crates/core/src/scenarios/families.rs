//! Seeded random instances of the liaison constructions and of the
//! structure theorems, each checked against an independent computation.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::derive_seed;
use crate::arrangement::{
    arrangement_top, bdl_rao_report, check_hypotheses, default_supports, liaison_additivity,
    minors_codim_check, radical_top, rao_or_zero, star_power_identity, verify_component_stability,
    verify_liaison_decomposition, verify_plane_pencil, verify_sat_is_ci, ArrangementSpec,
    PencilArrangement, Report,
};
use crate::error::{ArrError, Result};
use crate::field::Field;
use crate::idealops::{minors, random_form, Ideal};
use crate::invariants::is_acm;
use crate::ring::{Polynomial, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// `F2 I1 + F1 I2` on random curves: saturation, Hilbert additivity,
    /// degree and Rao module.
    LiaisonAddition,
    /// `F2 I1 + (F1)`: additivity and the Rao shift.
    Bdl,
    /// Saturation of pencil Jacobians and the star configuration.
    Pencil,
    /// Liaison decomposition of two sub-arrangements, including the
    /// single-factor form.
    Decomposition,
    /// A pencil component survives adding a general factor.
    Stability,
    /// Pencil plus general factors: `J^top` and its radical are ACM.
    MainTheorem,
    /// Codimensions of the minors of pencil matrices.
    Minors,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::LiaisonAddition => "liaison-addition",
            FamilyKind::Bdl => "bdl",
            FamilyKind::Pencil => "pencil",
            FamilyKind::Decomposition => "decomposition",
            FamilyKind::Stability => "stability",
            FamilyKind::MainTheorem => "main-theorem",
            FamilyKind::Minors => "minors",
        })
    }
}

/// Runs `count` instances; instance `k` uses a seed derived from `seed`
/// and `k`. Budget exhaustion aborts the family, other errors fail the
/// instance.
pub fn run_family<K: Field>(
    ring: &Arc<Ring<K>>,
    kind: FamilyKind,
    count: usize,
    seed: u64,
) -> Result<Report> {
    let mut r = Report::new(format!("{kind} family, {count} instances, seed {seed}"));
    for k in 0..count {
        let s = derive_seed(seed, &format!("{kind}:{k}"));
        let out = match kind {
            FamilyKind::LiaisonAddition => liaison_instance(ring, s),
            FamilyKind::Bdl => bdl_instance(ring, s),
            FamilyKind::Pencil => pencil_instance(ring, k, s),
            FamilyKind::Decomposition => decomposition_instance(ring, k, s),
            FamilyKind::Stability => stability_instance(ring, k, s),
            FamilyKind::MainTheorem => main_theorem_instance(ring, k, s),
            FamilyKind::Minors => minors_instance(ring, k, s),
        };
        match out {
            Ok(rep) => r.absorb(&format!("#{k} "), rep),
            Err(e @ ArrError::BudgetExhausted { .. }) => return Err(e),
            Err(e) => {
                r.expect(
                    format!("#{k}: instance completes"),
                    false,
                    "ok",
                    e.to_string(),
                );
            }
        }
    }
    Ok(r)
}

fn require_p3<K: Field>(ring: &Arc<Ring<K>>) -> Result<()> {
    if ring.nvars() != 4 {
        return Err(ArrError::Precondition(
            "random curves are drawn in P^3".into(),
        ));
    }
    Ok(())
}

fn linear<K: Field>(ring: &Arc<Ring<K>>, rng: &mut ChaCha8Rng) -> Polynomial<K> {
    random_form(ring, 1, rng)
}

/// A random curve in `P^3`: a complete intersection of type `(a,b)` with
/// `a, b <= 2`, two skew lines, a twisted cubic or a line, in random
/// coordinates.
pub fn random_curve<K: Field>(ring: &Arc<Ring<K>>, rng: &mut ChaCha8Rng) -> Result<Ideal<K>> {
    require_p3(ring)?;
    match rng.gen_range(0..4) {
        0 => {
            let a = rng.gen_range(1..=2);
            let b = rng.gen_range(1..=2);
            let f = random_form(ring, a, rng);
            let g = random_form(ring, b, rng);
            Ok(Ideal::new(ring, vec![f, g])?.with_tag(format!("CI({a},{b})")))
        }
        1 => {
            let l: Vec<_> = (0..4).map(|_| linear(ring, rng)).collect();
            let a = Ideal::new(ring, l[..2].to_vec())?;
            let b = Ideal::new(ring, l[2..].to_vec())?;
            Ok(a.intersect(&b)?.with_tag("skew lines"))
        }
        2 => {
            let l: Vec<_> = (0..4).map(|_| linear(ring, rng)).collect();
            let rows = vec![
                vec![l[0].clone(), l[1].clone(), l[2].clone()],
                vec![l[1].clone(), l[2].clone(), l[3].clone()],
            ];
            Ok(minors(ring, &rows, 2)?.with_tag("twisted cubic"))
        }
        _ => {
            let l: Vec<_> = (0..2).map(|_| linear(ring, rng)).collect();
            Ok(Ideal::new(ring, l)?.with_tag("line"))
        }
    }
}

/// A general element of `i` in its least degree or one more.
fn member<K: Field>(i: &Ideal<K>, rng: &mut ChaCha8Rng) -> Result<Polynomial<K>> {
    let d = i.min_degree().unwrap_or(1) + rng.gen_range(0..=1);
    i.random_element(d, rng)?
        .ok_or_else(|| ArrError::Genericity(format!("{} has no forms of degree {d}", i.tag())))
}

fn degree_of<K: Field>(f: &Polynomial<K>) -> i64 {
    f.homogeneous_degree().expect("homogeneous") as i64
}

fn regular_pair<K: Field>(f1: &Polynomial<K>, f2: &Polynomial<K>) -> Result<bool> {
    Ok(Ideal::new(f1.ring(), vec![f1.clone(), f2.clone()])?.codim()? == 2)
}

fn liaison_instance<K: Field>(ring: &Arc<Ring<K>>, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let i1 = random_curve(ring, &mut rng)?;
    let i2 = random_curve(ring, &mut rng)?;
    let (mut f1, mut f2) = (member(&i1, &mut rng)?, member(&i2, &mut rng)?);
    for _ in 0..4 {
        if regular_pair(&f1, &f2)? {
            break;
        }
        f1 = member(&i1, &mut rng)?;
        f2 = member(&i2, &mut rng)?;
    }
    let (d1, d2) = (degree_of(&f1), degree_of(&f2));
    let mut r = Report::new(format!(
        "liaison addition of {} and {} with degrees ({d1},{d2})",
        i1.tag(),
        i2.tag()
    ));
    let out = i1.scale_by(&f2)?.sum(&i2.scale_by(&f1)?)?;
    r.expect_true("saturated", out.is_saturated()?);
    let add = liaison_additivity(&i1, &i2, &f1, &f2, &out)?;
    r.expect_true("Hilbert series additive", add.series_equal);
    let (lo, hi) = (
        add.values.first().map(|v| v.0).unwrap_or(0),
        add.values.last().map(|v| v.0).unwrap_or(0),
    );
    let mismatched: Vec<i64> = add
        .values
        .iter()
        .filter(|(_, a, b)| a != b)
        .map(|v| v.0)
        .collect();
    r.expect(
        format!("Hilbert function additive for t = {lo}..{hi}"),
        mismatched.is_empty(),
        "[]",
        format!("{mismatched:?}"),
    );
    r.expect_eq(
        "degree",
        i1.degree()? + i2.degree()? + d1 * d2,
        out.degree()?,
    );
    let expected = rao_or_zero(&i1)?
        .shifted(d2)
        .direct_sum(&rao_or_zero(&i2)?.shifted(d1));
    r.expect_eq(
        "Rao module",
        expected.to_string(),
        rao_or_zero(&out)?.to_string(),
    );
    Ok(r)
}

fn bdl_instance<K: Field>(ring: &Arc<Ring<K>>, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let i1 = random_curve(ring, &mut rng)?;
    let f1 = member(&i1, &mut rng)?;
    let d2 = rng.gen_range(1..=2);
    let mut f2 = random_form(ring, d2, &mut rng);
    for _ in 0..4 {
        if regular_pair(&f1, &f2)? {
            break;
        }
        f2 = random_form(ring, d2, &mut rng);
    }
    let unit = Ideal::unit(ring);
    let mut r = Report::new(format!("basic double link of {}", i1.tag()));
    let out = i1.scale_by(&f2)?.sum(&Ideal::principal(&f1)?)?;
    r.expect_true("saturated", out.is_saturated()?);
    r.expect_true(
        "Hilbert series additive",
        liaison_additivity(&i1, &unit, &f1, &f2, &out)?.series_equal,
    );
    r.absorb("", bdl_rao_report(&i1, &f1, &f2)?);
    Ok(r)
}

/// `(s, d)` pairs of the pencil statements.
const PENCILS: &[(usize, u32)] = &[
    (2, 1),
    (3, 1),
    (4, 1),
    (5, 1),
    (6, 1),
    (2, 2),
    (3, 2),
    (4, 2),
    (2, 3),
    (3, 3),
];

fn general_pencil<K: Field>(
    ring: &Arc<Ring<K>>,
    d: u32,
    s: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PencilArrangement<K>> {
    let f = random_form(ring, d, rng);
    let p = random_form(ring, d, rng);
    PencilArrangement::general(f, p, s, rng.gen())
}

fn pencil_instance<K: Field>(ring: &Arc<Ring<K>>, k: usize, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (s, d) = PENCILS[k % PENCILS.len()];
    let p = general_pencil(ring, d, s, &mut rng)?;
    let mut r = Report::new(format!("pencil s = {s}, d = {d}"));
    r.absorb("", verify_sat_is_ci(&p)?);
    r.absorb("", star_power_identity(&p)?);
    if d == 1 {
        r.absorb("", verify_plane_pencil(&p)?);
    }
    Ok(r)
}

/// `(d1, s1, d2, s2)`: two pencils, or a pencil and one form when `s2 = 1`.
const DECOMPOSITIONS: &[(u32, usize, u32, usize)] = &[
    (1, 3, 1, 2),
    (1, 2, 2, 2),
    (2, 3, 1, 1),
    (1, 3, 1, 1),
    (2, 2, 2, 2),
    (1, 4, 1, 2),
    (2, 2, 1, 1),
    (1, 2, 1, 3),
    (2, 3, 1, 2),
    (1, 3, 2, 1),
];

fn decomposition_instance<K: Field>(ring: &Arc<Ring<K>>, k: usize, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (d1, s1, d2, s2) = DECOMPOSITIONS[k % DECOMPOSITIONS.len()];
    let f = general_pencil(ring, d1, s1, &mut rng)?.spec()?;
    let g = if s2 == 1 {
        ArrangementSpec::new(ring, vec![random_form(ring, d2, &mut rng)])?
            .with_labels(vec!["g".into()])
    } else {
        let labels = (1..=s2).map(|i| format!("H{i}")).collect();
        general_pencil(ring, d2, s2, &mut rng)?
            .spec()?
            .with_labels(labels)
    };
    verify_liaison_decomposition(&f, &g)
}

fn stability_instance<K: Field>(ring: &Arc<Ring<K>>, k: usize, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = 1 + (k % 2) as u32;
    let s = 3 + (k / 2) % 2;
    let p = general_pencil(ring, d, s, &mut rng)?;
    let g = random_form(ring, rng.gen_range(1..=2), &mut rng);
    verify_component_stability(&p.spec()?, &g, &p.base_ideal()?)
}

/// `(d, s, extra degrees)`: a pencil joined with general forms.
const MAIN: &[(u32, usize, &[u32])] = &[
    (1, 3, &[1]),
    (1, 3, &[2]),
    (2, 3, &[1]),
    (1, 4, &[1, 1]),
    (2, 3, &[2]),
    (1, 3, &[1, 2]),
    (1, 4, &[2]),
    (2, 3, &[1, 1]),
    (1, 5, &[1]),
    (2, 4, &[1]),
];

fn main_theorem_instance<K: Field>(ring: &Arc<Ring<K>>, k: usize, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (d, s, extra) = MAIN[k % MAIN.len()];
    let pencil = general_pencil(ring, d, s, &mut rng)?;
    let extras: Vec<_> = extra
        .iter()
        .map(|&e| random_form(ring, e, &mut rng))
        .collect();
    let labels = (1..=extras.len()).map(|i| format!("g{i}")).collect();
    let spec = pencil
        .spec()?
        .join(&ArrangementSpec::new(ring, extras)?.with_labels(labels))?;
    let mut r = Report::new(format!(
        "pencil s = {s}, d = {d} with general factors of degrees {extra:?}"
    ));
    let hyp = check_hypotheses(&spec)?;
    r.expect_true("hypotheses hold", hyp.main_theorem_applies());
    let tp = arrangement_top(&spec, &[])?;
    // pairs inside the pencil collapse to one CI of type ((s-1)d, (s-1)d)
    let degs = spec.degrees();
    let mut expected = ((s as i64 - 1) * d as i64).pow(2);
    for i in 0..degs.len() {
        for j in i + 1..degs.len() {
            if j >= s {
                expected += degs[i] as i64 * degs[j] as i64;
            }
        }
    }
    r.expect_eq("deg J^top", expected, tp.top.degree()?);
    r.expect_true("J^top is ACM", is_acm(&tp.top)?);
    r.expect_true("sqrt(J^top) is ACM", is_acm(&tp.radical()?)?);
    if hyp.factors_smooth {
        let rt = radical_top(&spec, &default_supports(&spec, &[])?)?;
        r.expect_true("radical_top is ACM", is_acm(&rt)?);
    } else {
        r.note("a factor is singular; radical_top not checked");
    }
    Ok(r)
}

fn minors_instance<K: Field>(ring: &Arc<Ring<K>>, k: usize, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = 2 + k % 3;
    let p = general_pencil(ring, 2, s, &mut rng)?;
    minors_codim_check(&p)
}
