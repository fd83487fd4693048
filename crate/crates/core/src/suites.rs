//! Randomized verification suites over small random ideals: the engine
//! against Macaulay-matrix ranks, the ideal operations against their
//! defining properties, and the invariants against each other.
//!
//! Each suite aggregates one check per property ("k/n instances") and
//! records the indices of failing instances as notes; instance `k` of a
//! run with seed `s` draws from [`instance_seed`]`(s, k)`.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arrangement::Report;
use crate::error::{ArrError, Result};
use crate::field::Field;
use crate::groebner::{buchberger_criterion_holds, groebner_basis_in, Budget};
use crate::idealops::{random_form, Ideal};
use crate::invariants::{hilbert_data, is_acm, is_unmixed, minimal_betti, rao_module, Resolution};
use crate::monomial::{monomials_of_degree, MonomialOrder};
use crate::oracle;
use crate::ring::{Polynomial, Ring};

/// Largest degree compared against the dense oracle.
pub const ORACLE_DEGREE: u32 = 6;

/// Per-instance seed of a suite run.
pub fn instance_seed(seed: u64, k: usize) -> u64 {
    crate::scenarios::derive_seed(seed, &format!("instance:{k}"))
}

/// Counts passes of named properties across instances.
struct Tally {
    title: String,
    rows: Vec<Row>,
    over_budget: Vec<usize>,
    instances: usize,
}

#[derive(Default)]
struct Row {
    name: String,
    passed: usize,
    skipped: usize,
    total: usize,
    failing: Vec<usize>,
}

impl Tally {
    fn new(title: &str) -> Self {
        Tally {
            title: title.into(),
            rows: Vec::new(),
            over_budget: Vec::new(),
            instances: 0,
        }
    }

    fn row(&mut self, name: &str) -> &mut Row {
        let k = match self.rows.iter().position(|r| r.name == name) {
            Some(k) => k,
            None => {
                self.rows.push(Row {
                    name: name.to_string(),
                    ..Default::default()
                });
                self.rows.len() - 1
            }
        };
        &mut self.rows[k]
    }

    /// Index of the instance being recorded.
    fn current(&self) -> usize {
        self.instances.saturating_sub(1)
    }

    fn record(&mut self, name: &str, pass: bool, seed: u64) {
        log::debug!("{name}: {pass} (instance seed {seed})");
        let k = self.current();
        let row = self.row(name);
        row.total += 1;
        if pass {
            row.passed += 1;
        } else if row.failing.len() < 5 {
            row.failing.push(k);
        }
    }

    fn skip(&mut self, name: &str) {
        let row = self.row(name);
        row.total += 1;
        row.skipped += 1;
    }

    /// Records `Ok(b)` as `b`; errors other than budget exhaustion count
    /// as failures.
    fn record_result(&mut self, name: &str, r: Result<bool>, seed: u64) -> Result<()> {
        match r {
            Ok(b) => self.record(name, b, seed),
            Err(e) if e.is_budget() => return Err(e),
            Err(e) => {
                log::warn!("{name} (seed {seed}): {e}");
                self.record(name, false, seed);
            }
        }
        Ok(())
    }

    fn finish(self) -> Report {
        let mut rep = Report::new(self.title);
        for r in self.rows {
            let (n, ok) = (r.total - r.skipped, r.passed);
            let computed = match r.skipped {
                0 => format!("{ok}/{n}"),
                k => format!("{ok}/{n}, {k} over budget"),
            };
            rep.expect(r.name.clone(), ok == n, format!("{n}/{n}"), computed);
            if !r.failing.is_empty() {
                rep.note(format!("{}: failing instances {:?}", r.name, r.failing));
            }
        }
        if !self.over_budget.is_empty() {
            let n = self.instances;
            rep.observe(
                "instances within budget",
                format!("{n}/{n}"),
                format!("{}/{n}", n - self.over_budget.len()),
            );
            rep.note(format!(
                "over the {INSTANCE_SECONDS} s instance budget: instances {:?}",
                self.over_budget
            ));
        }
        rep
    }
}

/// Seconds allowed for one random instance.
pub const INSTANCE_SECONDS: f64 = 5.0;

/// Runs `body` on `count` seeded instances, each under its own wall-clock
/// budget inside `outer`. Instances over budget are listed, not failed;
/// exhausting `outer` aborts.
fn run_instances(
    tally: &mut Tally,
    count: usize,
    seed: u64,
    outer: &Budget,
    mut body: impl FnMut(&mut Tally, u64, &Budget) -> Result<()>,
) -> Result<()> {
    for k in 0..count {
        let s = instance_seed(seed, k);
        let b = capped(outer, INSTANCE_SECONDS);
        tally.instances += 1;
        match body(tally, s, &b) {
            Ok(()) => {}
            Err(e) if e.is_budget() => {
                if outer.deadline.is_some_and(|d| Instant::now() > d) {
                    return Err(e);
                }
                tally.over_budget.push(k);
            }
            Err(e) => {
                log::warn!("instance {s}: {e}");
                tally.record("instances completed", false, s);
            }
        }
    }
    Ok(())
}

/// `outer` with its deadline pulled in to at most `secs` from now.
fn capped(outer: &Budget, secs: f64) -> Budget {
    let mut b = outer.clone().with_seconds(secs);
    if let Some(d) = outer.deadline {
        b.deadline = b.deadline.map(|x| x.min(d));
    }
    b
}

fn ring_for<K: Field>(field: &K, nvars: usize, budget: &Budget) -> Result<Arc<Ring<K>>> {
    let mut b = budget.clone();
    b.check_identities = true;
    Ok(Ring::new(field.clone(), nvars)?.with_budget(b))
}

/// A sparse homogeneous form of degree `d` with 1 to 5 terms and small
/// coefficients; sparse inputs exercise far more basis shapes than dense
/// ones.
pub fn sparse_form<K: Field>(ring: &Arc<Ring<K>>, d: u32, rng: &mut ChaCha8Rng) -> Polynomial<K> {
    let k = ring.field();
    let mons = monomials_of_degree(ring.nvars(), d);
    loop {
        let nterms = rng.gen_range(1..=5usize.min(mons.len()));
        let terms = (0..nterms)
            .map(|_| {
                let m = mons[rng.gen_range(0..mons.len())];
                let c = rng.gen_range(1..=9i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
                (m, k.from_i64(c))
            })
            .collect();
        let f = Polynomial::from_terms(ring, terms);
        if !f.is_zero() {
            return f;
        }
    }
}

/// Random generators: 1 to 4 forms of degree 1 to 4, sparse or dense.
pub fn random_generators<K: Field>(
    ring: &Arc<Ring<K>>,
    rng: &mut ChaCha8Rng,
) -> Vec<Polynomial<K>> {
    let ngens = rng.gen_range(1..=4);
    (0..ngens)
        .map(|_| {
            let d = rng.gen_range(1..=4);
            if rng.gen_bool(0.75) {
                sparse_form(ring, d, rng)
            } else {
                random_form(ring, d, rng)
            }
        })
        .collect()
}

/// Seconds allowed for one lex basis; dense lex bases over the rationals
/// can grow far beyond the rest of the suite.
pub const LEX_SECONDS: f64 = 2.0;

/// Basis dimensions against Macaulay ranks for `t <= ORACLE_DEGREE` in
/// grevlex and lex (lex instances over [`LEX_SECONDS`] are counted apart),
/// the Buchberger criterion on each basis, and the containment identities
/// of intersection, quotient and saturation.
pub fn engine<K: Field>(field: &K, count: usize, seed: u64, budget: &Budget) -> Result<Report> {
    let mut tally = Tally::new(&format!("engine oracle, {count} random ideals"));
    run_instances(&mut tally, count, seed, budget, |tally, s, budget| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let n = rng.gen_range(3..=4);
        let ring = ring_for(field, n, budget)?;
        let gens = random_generators(&ring, &mut rng);
        for order in [MonomialOrder::GrevLex, MonomialOrder::Lex] {
            let name = super::scenarios::order_name(order);
            let r = if order == MonomialOrder::Lex {
                groebner_basis_in(
                    &ring.with_budget(capped(ring.budget(), LEX_SECONDS)),
                    &gens,
                    order,
                )
            } else {
                groebner_basis_in(&ring, &gens, order)
            };
            let gb = match r {
                Ok(gb) => gb,
                Err(e) if e.is_budget() && order == MonomialOrder::Lex => {
                    if ring.budget().deadline.is_some_and(|d| Instant::now() > d) {
                        return Err(e);
                    }
                    tally.skip(&format!(
                        "{name} dims = Macaulay ranks, t <= {ORACLE_DEGREE}"
                    ));
                    tally.skip(&format!("{name} Buchberger criterion"));
                    continue;
                }
                Err(e) if e.is_budget() => return Err(e),
                Err(e) => {
                    log::warn!("basis failed (seed {s}): {e}");
                    tally.record(&format!("{name} basis computed"), false, s);
                    continue;
                }
            };
            let dims_ok = (0..=ORACLE_DEGREE)
                .all(|t| oracle::lead_term_dim(&gb, t) == oracle::macaulay_dim(&gens, n, t));
            tally.record(
                &format!("{name} dims = Macaulay ranks, t <= {ORACLE_DEGREE}"),
                dims_ok,
                s,
            );
            tally.record_result(
                &format!("{name} Buchberger criterion"),
                buchberger_criterion_holds(&gb),
                s,
            )?;
        }
        let i = Ideal::new(&ring, gens)?;
        let j = Ideal::new(&ring, random_generators(&ring, &mut rng))?;
        tally.record_result("intersection identities", i.intersect(&j).map(|_| true), s)?;
        tally.record_result("quotient identities", i.quotient(&j).map(|_| true), s)?;
        tally.record_result(
            "saturation identities",
            i.saturate_irrelevant().map(|_| true),
            s,
        )
    })?;
    Ok(tally.finish())
}

fn dims_match<K: Field>(computed: &Ideal<K>, oracle_dim: impl Fn(u32) -> usize, top: u32) -> bool {
    let n = computed.ring().nvars();
    (0..=top).all(|t| oracle::macaulay_dim(computed.gens(), n, t) == oracle_dim(t))
}

/// Intersections and quotients against degreewise linear algebra, the two
/// intersection algorithms against each other, saturation against its
/// characterization, and radical membership on squared ideals.
pub fn ideals<K: Field>(field: &K, count: usize, seed: u64, budget: &Budget) -> Result<Report> {
    let mut tally = Tally::new(&format!("ideal operations, {count} random pairs"));
    let top = 5;
    run_instances(&mut tally, count, seed, budget, |tally, s, budget| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let n = rng.gen_range(3..=4);
        let ring = ring_for(field, n, budget)?;
        let i = Ideal::new(&ring, random_generators(&ring, &mut rng))?;
        let j = Ideal::new(&ring, random_generators(&ring, &mut rng))?;

        match i.intersect(&j) {
            Ok(m) => {
                let dims = dims_match(
                    &m,
                    |t| oracle::intersection_dim(i.gens(), j.gens(), n, t),
                    top,
                );
                tally.record(&format!("intersection dims = oracle, t <= {top}"), dims, s);
                tally.record_result(
                    "intersection = elimination route",
                    i.intersect_by_elimination(&j).and_then(|e| m.equals(&e)),
                    s,
                )?;
            }
            Err(e) => tally.record_result(
                &format!("intersection dims = oracle, t <= {top}"),
                Err(e),
                s,
            )?,
        }
        tally.record_result(
            &format!("quotient dims = oracle, t <= {top}"),
            i.quotient(&j)
                .map(|q| dims_match(&q, |t| oracle::quotient_dim(i.gens(), j.gens(), n, t), top)),
            s,
        )?;
        // I ⊆ sat ⊆ I^sat with sat saturated forces sat = I^sat
        tally.record_result("saturation characterized", saturation_characterized(&i), s)?;

        let sq = i.power(2)?.sum(&j.product(&i)?)?;
        tally.record_result(
            "radical membership of generators",
            i.gens().iter().try_fold(true, |acc, g| {
                Ok::<_, ArrError>(acc && sq.radical_contains(g)?)
            }),
            s,
        )?;
        let sum = i.sum(&j)?;
        tally.record_result("sum is symmetric", sum.equals(&j.sum(&i)?), s)
    })?;
    Ok(tally.finish())
}

fn saturation_characterized<K: Field>(i: &Ideal<K>) -> Result<bool> {
    let sat = i.saturate_irrelevant()?;
    if !sat.contains_ideal(i)? {
        return Ok(false);
    }
    let ring = i.ring();
    let n = ring.nvars();
    // every generator times x_v^e lies in I for some e
    for g in sat.gens() {
        for v in 0..n {
            let x = Polynomial::var(ring, v);
            let mut h = g.clone();
            let mut inside = i.contains(&h)?;
            for _ in 0..24 {
                if inside {
                    break;
                }
                h = h.mul(&x)?;
                inside = i.contains(&h)?;
            }
            if !inside {
                return Ok(false);
            }
        }
    }
    sat.quotient(&Ideal::irrelevant(ring))?.equals(&sat)
}

/// Hilbert data against Macaulay ranks, Betti tables against Hilbert data,
/// Schreyer resolutions as complexes, and the ACM and Rao invariants of
/// random complete intersections, skew line pairs and curves with an
/// extra fat point.
pub fn invariants<K: Field>(field: &K, count: usize, seed: u64, budget: &Budget) -> Result<Report> {
    let mut tally = Tally::new(&format!("invariants, {count} random instances"));
    run_instances(&mut tally, count, seed, budget, |tally, s, budget| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let n = rng.gen_range(3..=4);
        let ring = ring_for(field, n, budget)?;
        let i = Ideal::new(&ring, random_generators(&ring, &mut rng))?;

        let h = hilbert_data(&i)?;
        let hf_ok = (0..=ORACLE_DEGREE as i64).all(|t| {
            let all = monomials_of_degree(n, t as u32).len();
            h.value(t) == (all - oracle::macaulay_dim(i.gens(), n, t as u32)) as i64
        });
        tally.record(
            &format!("Hilbert function = Macaulay corank, t <= {ORACLE_DEGREE}"),
            hf_ok,
            s,
        );

        let res = Resolution::schreyer(&i);
        tally.record_result(
            "Schreyer resolution is a complex",
            res.and_then(|r| r.is_complex()),
            s,
        )?;
        tally.record_result(
            "Betti alternating sums = Hilbert function",
            minimal_betti(&i).map(|b| (0..=8).all(|t| b.hilbert_value(n, t) == h.value(t))),
            s,
        )?;

        let p3 = ring_for(field, 4, budget)?;
        let (a, b) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let ci = Ideal::new(
            &p3,
            vec![random_form(&p3, a, &mut rng), random_form(&p3, b, &mut rng)],
        )?;
        tally.record_result(
            "complete intersection: degree ab, ACM, Betti totals 1,2,1",
            (|| {
                Ok(ci.degree()? == (a * b) as i64
                    && is_acm(&ci)?
                    && minimal_betti(&ci)?.totals() == vec![1, 2, 1])
            })(),
            s,
        )?;

        let l1 = Ideal::new(
            &p3,
            vec![random_form(&p3, 1, &mut rng), random_form(&p3, 1, &mut rng)],
        )?;
        let l2 = Ideal::new(
            &p3,
            vec![random_form(&p3, 1, &mut rng), random_form(&p3, 1, &mut rng)],
        )?;
        tally.record_result(
            "two general lines: degree 2, Rao dims [1], not ACM",
            (|| {
                let c = l1.intersect(&l2)?;
                Ok(c.degree()? == 2 && rao_module(&c)?.dims_vec() == vec![1] && !is_acm(&c)?)
            })(),
            s,
        )?;

        let pt = Ideal::variables(&p3, &[0, 1, 2]);
        tally.record_result(
            "complete intersection unmixed, adding a fat point is not",
            (|| {
                let fat = ci.intersect(&pt.power(a.max(b) + 1)?)?;
                Ok(is_unmixed(&ci)? && !is_unmixed(&fat)?)
            })(),
            s,
        )
    })?;
    Ok(tally.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn small_runs_pass() {
        let k = PrimeField::default();
        let b = Budget::default();
        for rep in [
            engine(&k, 4, 7, &b).unwrap(),
            ideals(&k, 3, 7, &b).unwrap(),
            invariants(&k, 3, 7, &b).unwrap(),
        ] {
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn tally_reports_failures() {
        let mut t = Tally::new("t");
        t.instances = 1;
        t.record("a", true, 1);
        t.instances = 3;
        t.record("a", false, 2);
        t.skip("b");
        t.record("b", true, 3);
        let rep = t.finish();
        assert_eq!(rep.checks[1].computed, "1/1, 1 over budget");
        assert!(rep.checks[1].pass);
        assert!(!rep.passed());
        assert_eq!(rep.checks[0].computed, "1/2");
        assert!(rep.notes[0].contains("[2]"));
    }
}
