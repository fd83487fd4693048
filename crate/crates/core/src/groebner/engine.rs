//! Degree-by-degree Gröbner engine for homogeneous input.

use std::collections::{BTreeMap, HashMap};

use crate::error::{ArrError, Result};
use crate::field::Field;
use crate::monomial::Monomial;

use super::matrix::{Builder, DivIndex};
use super::module::{FreeModule, Term};
use super::{Budget, GbStats};

const PAIR_ROW: usize = u32::MAX as usize;

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct Engine<'a, K: Field> {
    module: &'a FreeModule<K>,
    budget: &'a Budget,
    basis: Vec<Vec<Term<K>>>,
    degs: Vec<i32>,
    index: DivIndex,
    pairs: BTreeMap<i32, Vec<Pair>>,
    stats: GbStats,
    essential: Vec<usize>,
}

fn multiplied<K: Field>(terms: &[Term<K>], m: &Monomial) -> Vec<Term<K>> {
    terms
        .iter()
        .map(|t| Term {
            mon: t.mon.mul(m),
            comp: t.comp,
            coef: t.coef.clone(),
        })
        .collect()
}

fn vector_degree<K: Field>(module: &FreeModule<K>, terms: &[Term<K>]) -> Result<i32> {
    let d = module.term_degree(&terms[0].mon, terms[0].comp);
    if terms
        .iter()
        .any(|t| module.term_degree(&t.mon, t.comp) != d)
    {
        return Err(ArrError::Precondition(
            "Gröbner input must be homogeneous".into(),
        ));
    }
    Ok(d)
}

/// Output of one Gröbner computation.
pub(crate) struct EngineOutput<K: Field> {
    /// Reduced basis sorted by increasing lead term.
    pub basis: Vec<Vec<Term<K>>>,
    pub stats: GbStats,
    /// Indices of the inputs that are not combinations of lower-degree
    /// inputs and earlier inputs of the same degree: a minimal generating
    /// subset.
    pub essential: Vec<usize>,
}

pub(crate) fn compute<K: Field>(
    module: &FreeModule<K>,
    input: Vec<Vec<Term<K>>>,
    budget: &Budget,
) -> Result<EngineOutput<K>> {
    let mut inputs: BTreeMap<i32, Vec<(usize, Vec<Term<K>>)>> = BTreeMap::new();
    for (idx, v) in input.into_iter().enumerate() {
        if v.is_empty() {
            continue;
        }
        let d = vector_degree(module, &v)?;
        inputs.entry(d).or_default().push((idx, v));
    }
    let mut e = Engine {
        module,
        budget,
        basis: Vec::new(),
        degs: Vec::new(),
        index: DivIndex::new(),
        pairs: BTreeMap::new(),
        stats: GbStats::default(),
        essential: Vec::new(),
    };
    e.run(inputs)?;
    let basis = e.interreduce()?;
    let mut essential = std::mem::take(&mut e.essential);
    essential.sort_unstable();
    Ok(EngineOutput {
        basis,
        stats: e.stats,
        essential,
    })
}

impl<'a, K: Field> Engine<'a, K> {
    fn exhausted(&self, reason: String) -> ArrError {
        ArrError::BudgetExhausted {
            reason,
            stats: self.stats.clone(),
        }
    }

    fn run(&mut self, mut inputs: BTreeMap<i32, Vec<(usize, Vec<Term<K>>)>>) -> Result<()> {
        let k = self.module.ring().field().clone();
        loop {
            let d = match (self.pairs.keys().next(), inputs.keys().next()) {
                (None, None) => return Ok(()),
                (Some(&a), None) => a,
                (None, Some(&b)) => b,
                (Some(&a), Some(&b)) => a.min(b),
            };
            if let Some(maxd) = self.budget.max_degree {
                if d > maxd {
                    return Err(self.exhausted(format!("degree {d} exceeds bound {maxd}")));
                }
            }
            self.budget.check_time(&self.stats)?;
            let pairs = self.pairs.remove(&d).unwrap_or_default();
            let ins = inputs.remove(&d).unwrap_or_default();
            self.stats.pairs_reduced += pairs.len() as u64;
            if let Some(mp) = self.budget.max_pairs {
                if self.stats.pairs_reduced > mp {
                    return Err(self.exhausted(format!("more than {mp} pairs")));
                }
            }
            self.stats.max_degree = self.stats.max_degree.max(d);

            let mut builder = Builder::new(self.module);
            for p in &pairs {
                let mi = self.basis[p.i][0]
                    .mon
                    .div(&p.lcm)
                    .expect("lead divides lcm");
                let mj = self.basis[p.j][0]
                    .mon
                    .div(&p.lcm)
                    .expect("lead divides lcm");
                if !builder.add_reducer(p.i, mi, &self.basis[p.i]) {
                    builder.add_target(&multiplied(&self.basis[p.i], &mi), PAIR_ROW);
                }
                builder.add_target(&multiplied(&self.basis[p.j], &mj), PAIR_ROW);
            }
            // pair rows come first so that surviving inputs are minimal generators
            for (idx, v) in &ins {
                builder.add_target(v, *idx);
            }
            let refs: Vec<&[Term<K>]> = self.basis.iter().map(|b| b.as_slice()).collect();
            builder.preprocess(&refs, &self.index);
            let m = builder.finish();
            self.stats.matrix_rows += m.nrows() as u64;
            let budget = self.budget;
            let snapshot = self.stats.clone();
            let (pivots, zeros) = m.echelon(&k, || budget.check_time(&snapshot))?;
            self.stats.zero_reductions += zeros as u64;
            log::trace!(
                "degree {d}: {} pairs, {} cols, {} new",
                pairs.len(),
                m.ncols(),
                pivots.len()
            );
            for (row, source) in pivots {
                if source as usize != PAIR_ROW {
                    self.essential.push(source as usize);
                }
                let terms = m.to_terms(&row);
                self.insert(terms, d);
            }
        }
    }

    /// Adds a new basis element and updates the pair set (Gebauer–Möller).
    fn insert(&mut self, terms: Vec<Term<K>>, deg: i32) {
        let h = self.basis.len();
        let th = terms[0].mon;
        let ch = terms[0].comp;
        let rank_one = self.module.rank() == 1;
        let basis = &self.basis;
        let mut pruned = 0u64;
        for list in self.pairs.values_mut() {
            list.retain(|p| {
                if basis[p.i][0].comp != ch || !th.divides(&p.lcm) {
                    return true;
                }
                let keep =
                    basis[p.i][0].mon.lcm(&th) == p.lcm || basis[p.j][0].mon.lcm(&th) == p.lcm;
                if !keep {
                    pruned += 1;
                }
                keep
            });
        }
        self.pairs.retain(|_, l| !l.is_empty());

        let cands: Vec<(usize, Monomial, bool)> = (0..h)
            .filter(|&i| basis[i][0].comp == ch)
            .map(|i| {
                let li = basis[i][0].mon;
                (i, li.lcm(&th), rank_one && li.is_coprime(&th))
            })
            .collect();
        let n = cands.len();
        let mut keep = vec![true; n];
        for a in 0..n {
            for b in 0..n {
                if a != b && cands[b].1 != cands[a].1 && cands[b].1.divides(&cands[a].1) {
                    keep[a] = false;
                    break;
                }
            }
        }
        let mut groups: Vec<(Monomial, Vec<usize>)> = Vec::new();
        let mut group_of: HashMap<Monomial, usize> = HashMap::new();
        for a in 0..n {
            if !keep[a] {
                pruned += 1;
                continue;
            }
            let g = *group_of.entry(cands[a].1).or_insert_with(|| {
                groups.push((cands[a].1, Vec::new()));
                groups.len() - 1
            });
            groups[g].1.push(a);
        }
        for (lcm, members) in groups {
            if members.iter().any(|&a| cands[a].2) {
                pruned += members.len() as u64;
                continue;
            }
            pruned += members.len() as u64 - 1;
            let i = cands[members[0]].0;
            let pd = self.module.term_degree(&lcm, ch);
            debug_assert!(pd > deg);
            self.pairs
                .entry(pd)
                .or_default()
                .push(Pair { i, j: h, lcm });
        }
        self.stats.pairs_created += n as u64;
        self.stats.pairs_pruned += pruned;
        self.index.insert(h, &terms);
        self.basis.push(terms);
        self.degs.push(deg);
    }

    /// Tail-reduces the (already minimal) basis, degree by degree.
    fn interreduce(&mut self) -> Result<Vec<Vec<Term<K>>>> {
        let k = self.module.ring().field().clone();
        let mut by_deg: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for (i, &d) in self.degs.iter().enumerate() {
            by_deg.entry(d).or_default().push(i);
        }
        let mut done: Vec<Vec<Term<K>>> = Vec::with_capacity(self.basis.len());
        let mut index = DivIndex::new();
        for (_, ids) in by_deg {
            self.budget.check_time(&self.stats)?;
            let mut builder = Builder::new(self.module);
            let offset = done.len();
            for (pos, &i) in ids.iter().enumerate() {
                builder.add_reducer(offset + pos, Monomial::ONE, &self.basis[i]);
                builder.add_target(&self.basis[i], offset + pos);
            }
            let refs: Vec<&[Term<K>]> = done.iter().map(|b| b.as_slice()).collect();
            builder.preprocess(&refs, &index);
            let m = builder.finish();
            let rows = m.reduce_independent(&k, false, true);
            for (row, _) in rows {
                let terms = m.to_terms(&row);
                index.insert(done.len(), &terms);
                done.push(terms);
            }
        }
        let module = self.module;
        done.sort_by(|a, b| module.cmp(&a[0].mon, a[0].comp, &b[0].mon, b[0].comp));
        Ok(done)
    }
}
