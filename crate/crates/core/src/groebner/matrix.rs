//! Sparse Macaulay matrices: symbolic preprocessing and row reduction with a
//! dense accumulator.

use std::collections::HashMap;

use crate::error::Result;
use crate::field::Field;
use crate::monomial::Monomial;

use super::module::{FreeModule, Term};

const NONE: u32 = u32::MAX;

/// One quotient contribution `coef * mult * basis[source]`.
#[derive(Clone, Debug)]
pub(crate) struct Quot<K: Field> {
    pub source: usize,
    pub mult: Monomial,
    pub coef: K::Elem,
}

pub(crate) struct Row<K: Field> {
    pub entries: Vec<(u32, K::Elem)>,
    pub source: u32,
    pub mult: Monomial,
}

/// Basis elements grouped by lead component for divisor lookup.
pub(crate) struct DivIndex {
    by_comp: HashMap<u32, Vec<usize>>,
}

impl DivIndex {
    pub fn new() -> Self {
        DivIndex {
            by_comp: HashMap::new(),
        }
    }

    pub fn insert<K: Field>(&mut self, idx: usize, terms: &[Term<K>]) {
        self.by_comp.entry(terms[0].comp).or_default().push(idx);
    }

    /// Basis element whose lead divides `m e_comp`, preferring short ones.
    pub fn find<K: Field>(
        &self,
        basis: &[&[Term<K>]],
        m: &Monomial,
        comp: u32,
    ) -> Option<(usize, Monomial)> {
        let mut best: Option<(usize, Monomial, usize)> = None;
        for &i in self.by_comp.get(&comp)? {
            let lead = &basis[i][0].mon;
            if let Some(q) = lead.div(m) {
                let len = basis[i].len();
                if best.as_ref().map(|b| len < b.2).unwrap_or(true) {
                    best = Some((i, q, len));
                }
            }
        }
        best.map(|(i, q, _)| (i, q))
    }
}

pub(crate) struct Builder<'a, K: Field> {
    module: &'a FreeModule<K>,
    cols: Vec<(Monomial, u32)>,
    col_of: HashMap<(Monomial, u32), u32>,
    reducer_of: Vec<u32>,
    reducers: Vec<Row<K>>,
    targets: Vec<Row<K>>,
    scan: usize,
}

impl<'a, K: Field> Builder<'a, K> {
    pub fn new(module: &'a FreeModule<K>) -> Self {
        Builder {
            module,
            cols: Vec::new(),
            col_of: HashMap::new(),
            reducer_of: Vec::new(),
            reducers: Vec::new(),
            targets: Vec::new(),
            scan: 0,
        }
    }

    fn col(&mut self, key: (Monomial, u32)) -> u32 {
        if let Some(&c) = self.col_of.get(&key) {
            return c;
        }
        let c = self.cols.len() as u32;
        self.cols.push(key);
        self.col_of.insert(key, c);
        self.reducer_of.push(NONE);
        c
    }

    /// Adds `mult * terms / lc(terms)` as the reducer of its lead column,
    /// unless that column already has one.
    pub fn add_reducer(&mut self, source: usize, mult: Monomial, terms: &[Term<K>]) -> bool {
        let k = self.module.ring().field();
        let lead = self.col((terms[0].mon.mul(&mult), terms[0].comp));
        if self.reducer_of[lead as usize] != NONE {
            return false;
        }
        let inv = k.inv(&terms[0].coef).expect("nonzero lead");
        let one = k.is_one(&inv);
        let mut entries = Vec::with_capacity(terms.len());
        for t in terms {
            let c = self.col((t.mon.mul(&mult), t.comp));
            entries.push((
                c,
                if one {
                    t.coef.clone()
                } else {
                    k.mul(&t.coef, &inv)
                },
            ));
        }
        self.reducer_of[lead as usize] = self.reducers.len() as u32;
        self.reducers.push(Row {
            entries,
            source: source as u32,
            mult,
        });
        true
    }

    pub fn add_target(&mut self, terms: &[Term<K>], source: usize) {
        let mut entries = Vec::with_capacity(terms.len());
        for t in terms {
            let c = self.col((t.mon, t.comp));
            entries.push((c, t.coef.clone()));
        }
        self.targets.push(Row {
            entries,
            source: source as u32,
            mult: Monomial::ONE,
        });
    }

    /// Closes the column set: every column divisible by a basis lead gets a
    /// reducer row.
    pub fn preprocess(&mut self, basis: &[&[Term<K>]], index: &DivIndex) {
        while self.scan < self.cols.len() {
            let c = self.scan;
            self.scan += 1;
            if self.reducer_of[c] != NONE {
                continue;
            }
            let (m, comp) = self.cols[c];
            if let Some((i, q)) = index.find(basis, &m, comp) {
                self.add_reducer(i, q, basis[i]);
            }
        }
    }

    pub fn finish(self) -> Matrix<K> {
        let module = self.module;
        let mut perm: Vec<u32> = (0..self.cols.len() as u32).collect();
        perm.sort_by(|&a, &b| {
            let (am, ac) = &self.cols[a as usize];
            let (bm, bc) = &self.cols[b as usize];
            module.cmp(bm, *bc, am, *ac)
        });
        let mut new_of = vec![0u32; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            new_of[old as usize] = new as u32;
        }
        let remap = |mut rows: Vec<Row<K>>| -> Vec<Row<K>> {
            for r in rows.iter_mut() {
                for e in r.entries.iter_mut() {
                    e.0 = new_of[e.0 as usize];
                }
                r.entries.sort_unstable_by_key(|e| e.0);
            }
            rows
        };
        let cols: Vec<(Monomial, u32)> = perm.iter().map(|&o| self.cols[o as usize]).collect();
        let mut reducer_of = vec![NONE; cols.len()];
        for (old, &r) in self.reducer_of.iter().enumerate() {
            reducer_of[new_of[old] as usize] = r;
        }
        Matrix {
            cols,
            reducer_of,
            reducers: remap(self.reducers),
            targets: remap(self.targets),
        }
    }
}

pub(crate) struct Matrix<K: Field> {
    pub cols: Vec<(Monomial, u32)>,
    reducer_of: Vec<u32>,
    reducers: Vec<Row<K>>,
    pub targets: Vec<Row<K>>,
}

impl<K: Field> Matrix<K> {
    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nrows(&self) -> usize {
        self.reducers.len() + self.targets.len()
    }

    pub fn to_terms(&self, row: &[(u32, K::Elem)]) -> Vec<Term<K>> {
        row.iter()
            .map(|(c, v)| {
                let (mon, comp) = self.cols[*c as usize];
                Term {
                    mon,
                    comp,
                    coef: v.clone(),
                }
            })
            .collect()
    }

    /// Reduces each target independently by the reducer rows. With
    /// `skip_lead`, a target's first column is left alone (interreduction).
    pub fn reduce_independent(
        &self,
        k: &K,
        track: bool,
        skip_lead: bool,
    ) -> Vec<(Vec<(u32, K::Elem)>, Vec<Quot<K>>)> {
        let mut acc = vec![k.zero(); self.ncols()];
        let mut out = Vec::with_capacity(self.targets.len());
        for t in &self.targets {
            let mut quots = Vec::new();
            let Some(first) = t.entries.first().map(|e| e.0 as usize) else {
                out.push((Vec::new(), quots));
                continue;
            };
            for (c, v) in &t.entries {
                acc[*c as usize] = v.clone();
            }
            let skip = if skip_lead { first } else { usize::MAX };
            let mut kept = Vec::new();
            for c in first..self.ncols() {
                if k.is_zero(&acc[c]) {
                    continue;
                }
                let r = self.reducer_of[c];
                if c == skip || r == NONE {
                    kept.push((c as u32, std::mem::replace(&mut acc[c], k.zero())));
                    continue;
                }
                let coef = std::mem::replace(&mut acc[c], k.zero());
                let row = &self.reducers[r as usize];
                for (cc, v) in &row.entries[1..] {
                    let slot = &mut acc[*cc as usize];
                    *slot = k.sub_mul(slot, &coef, v);
                }
                if track {
                    quots.push(Quot {
                        source: row.source as usize,
                        mult: row.mult,
                        coef,
                    });
                }
            }
            out.push((kept, quots));
        }
        out
    }

    /// Reduces the targets by the reducers and by each other; returns the
    /// new monic pivot rows, whose leads avoid all reducer columns.
    pub fn echelon(
        &self,
        k: &K,
        mut tick: impl FnMut() -> Result<()>,
    ) -> Result<(Vec<(Vec<(u32, K::Elem)>, u32)>, usize)> {
        let n = self.ncols();
        let mut acc = vec![k.zero(); n];
        let mut pivot_of = vec![NONE; n];
        let mut pivots: Vec<Vec<(u32, K::Elem)>> = Vec::new();
        let mut sources = Vec::new();
        let mut zeros = 0;
        for (ti, t) in self.targets.iter().enumerate() {
            if ti % 32 == 31 {
                tick()?;
            }
            let Some(first) = t.entries.first().map(|e| e.0 as usize) else {
                zeros += 1;
                continue;
            };
            for (c, v) in &t.entries {
                acc[*c as usize] = v.clone();
            }
            let mut kept: Vec<(u32, K::Elem)> = Vec::new();
            for c in first..n {
                if k.is_zero(&acc[c]) {
                    continue;
                }
                let coef = std::mem::replace(&mut acc[c], k.zero());
                let row: &[(u32, K::Elem)] = if self.reducer_of[c] != NONE {
                    &self.reducers[self.reducer_of[c] as usize].entries
                } else if pivot_of[c] != NONE {
                    &pivots[pivot_of[c] as usize]
                } else {
                    kept.push((c as u32, coef));
                    continue;
                };
                for (cc, v) in &row[1..] {
                    let slot = &mut acc[*cc as usize];
                    *slot = k.sub_mul(slot, &coef, v);
                }
            }
            if kept.is_empty() {
                zeros += 1;
                continue;
            }
            let inv = k.inv(&kept[0].1).expect("nonzero");
            if !k.is_one(&inv) {
                for e in kept.iter_mut() {
                    e.1 = k.mul(&e.1, &inv);
                }
            }
            pivot_of[kept[0].0 as usize] = pivots.len() as u32;
            pivots.push(kept);
            sources.push(t.source);
        }
        Ok((pivots.into_iter().zip(sources).collect(), zeros))
    }
}

/// Reduces each target modulo `basis` (any generating set whose leads are
/// used for division). Returns remainders and, with `track`, quotients.
pub(crate) fn reduce_vectors<K: Field>(
    module: &FreeModule<K>,
    basis: &[&[Term<K>]],
    targets: Vec<Vec<Term<K>>>,
    track: bool,
) -> Result<Vec<(Vec<Term<K>>, Vec<Quot<K>>)>> {
    let k = module.ring().field();
    let mut index = DivIndex::new();
    for (i, b) in basis.iter().enumerate() {
        if !b.is_empty() {
            index.insert(i, b);
        }
    }
    let mut builder = Builder::new(module);
    for (i, t) in targets.iter().enumerate() {
        builder.add_target(t, i);
    }
    builder.preprocess(basis, &index);
    let m = builder.finish();
    let out = m.reduce_independent(k, track, false);
    let mut res = Vec::with_capacity(out.len());
    for (row, quots) in out {
        let mut quots = quots;
        if track {
            // reducer rows were normalized to be monic
            for q in quots.iter_mut() {
                let inv = k.inv(&basis[q.source][0].coef).expect("nonzero");
                q.coef = k.mul(&q.coef, &inv);
            }
        }
        res.push((m.to_terms(&row), quots));
    }
    Ok(res)
}
