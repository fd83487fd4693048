//! Degreewise linear algebra on homogeneous ideals, independent of the
//! Gröbner engine. Used as a cross-check for bases, colon ideals and
//! saturations.

use std::collections::HashMap;

use crate::field::Field;
use crate::groebner::GroebnerBasis;
use crate::monomial::{monomials_of_degree, Monomial};
use crate::ring::Polynomial;

/// Row-reduced spanning set of a subspace of `S_t`, as dense rows over a
/// fixed monomial basis.
pub struct DegreePiece<K: Field> {
    pub monomials: Vec<Monomial>,
    pub rows: Vec<Vec<K::Elem>>,
    pivots: Vec<usize>,
}

impl<K: Field> DegreePiece<K> {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Residue of `v` modulo the subspace (zero iff `v` lies in it).
    pub fn reduce(&self, k: &K, mut v: Vec<K::Elem>) -> Vec<K::Elem> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !k.is_zero(&v[p]) {
                let c = v[p].clone();
                for (slot, r) in v.iter_mut().zip(row) {
                    *slot = k.sub_mul(slot, &c, r);
                }
            }
        }
        v
    }
}

fn column_index(monomials: &[Monomial]) -> HashMap<Monomial, usize> {
    monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect()
}

/// Dense vector of a homogeneous polynomial of degree `t`.
pub fn dense<K: Field>(k: &K, f: &Polynomial<K>, index: &HashMap<Monomial, usize>) -> Vec<K::Elem> {
    let mut v = vec![k.zero(); index.len()];
    for (m, c) in f.terms() {
        v[index[m]] = c.clone();
    }
    v
}

/// Gaussian elimination to reduced row echelon form; returns rows and pivots.
pub fn rref<K: Field>(k: &K, mut rows: Vec<Vec<K::Elem>>) -> (Vec<Vec<K::Elem>>, Vec<usize>) {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !k.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = k.inv(&rows[r][c]).unwrap();
        for x in rows[r].iter_mut() {
            *x = k.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !k.is_zero(&row[c]) {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = k.sub_mul(x, &f, y);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank<K: Field>(k: &K, rows: Vec<Vec<K::Elem>>) -> usize {
    rref(k, rows).0.len()
}

/// `[I]_t` spanned by all products `m * g` with `m` a monomial.
pub fn degree_piece<K: Field>(gens: &[Polynomial<K>], nvars: usize, t: u32) -> DegreePiece<K> {
    let monomials = monomials_of_degree(nvars, t);
    let index = column_index(&monomials);
    let mut rows = Vec::new();
    let mut k_opt = None;
    for g in gens {
        let k = g.field().clone();
        let Some(d) = g.homogeneous_degree() else {
            continue;
        };
        if d > t {
            continue;
        }
        for m in monomials_of_degree(nvars, t - d) {
            let mg = g.mul_term(&m, &k.one()).expect("small degrees");
            rows.push(dense(&k, &mg, &index));
        }
        k_opt = Some(k);
    }
    match k_opt {
        None => DegreePiece {
            monomials,
            rows: Vec::new(),
            pivots: Vec::new(),
        },
        Some(k) => {
            let (rows, pivots) = rref(&k, rows);
            DegreePiece {
                monomials,
                rows,
                pivots,
            }
        }
    }
}

/// Dimension of `[I]_t` by Macaulay-matrix rank.
pub fn macaulay_dim<K: Field>(gens: &[Polynomial<K>], nvars: usize, t: u32) -> usize {
    degree_piece(gens, nvars, t).dim()
}

/// Dimension of `[I]_t` read from lead terms: monomials of degree `t`
/// divisible by some lead monomial.
pub fn lead_term_dim<K: Field>(gb: &GroebnerBasis<K>, t: u32) -> usize {
    let leads: Vec<Monomial> = gb.lead_terms().into_iter().map(|(m, _)| m).collect();
    monomials_of_degree(gb.ring().nvars(), t)
        .into_iter()
        .filter(|m| leads.iter().any(|l| l.divides(m)))
        .count()
}

/// `dim [I ∩ J]_t` from `dim I_t + dim J_t - dim (I + J)_t`.
pub fn intersection_dim<K: Field>(
    i: &[Polynomial<K>],
    j: &[Polynomial<K>],
    nvars: usize,
    t: u32,
) -> usize {
    let a = macaulay_dim(i, nvars, t);
    let b = macaulay_dim(j, nvars, t);
    let mut both = i.to_vec();
    both.extend_from_slice(j);
    a + b - macaulay_dim(&both, nvars, t)
}

/// `dim [I : J]_t` as the kernel of `S_t -> sum_j S_{t+d_j} / I_{t+d_j}`.
pub fn quotient_dim<K: Field>(
    i: &[Polynomial<K>],
    j: &[Polynomial<K>],
    nvars: usize,
    t: u32,
) -> usize {
    let monomials = monomials_of_degree(nvars, t);
    let k = match i.iter().chain(j).next() {
        Some(p) => p.field().clone(),
        None => return monomials.len(),
    };
    let mut blocks: Vec<Vec<Vec<K::Elem>>> = vec![Vec::new(); monomials.len()];
    for g in j {
        let Some(d) = g.homogeneous_degree() else {
            continue;
        };
        let piece = degree_piece(i, nvars, t + d);
        let index = column_index(&piece.monomials);
        for (r, m) in monomials.iter().enumerate() {
            let mg = g.mul_term(m, &k.one()).expect("small degrees");
            blocks[r].push(piece.reduce(&k, dense(&k, &mg, &index)));
        }
    }
    let rows: Vec<Vec<K::Elem>> = blocks.into_iter().map(|b| b.concat()).collect();
    if rows.first().map(|r| r.is_empty()).unwrap_or(true) {
        return monomials.len();
    }
    monomials.len() - rank(&k, rows)
}

/// `dim [I : m^e]_t` for the irrelevant ideal `m`.
pub fn irrelevant_quotient_dim<K: Field>(
    i: &[Polynomial<K>],
    nvars: usize,
    e: u32,
    t: u32,
) -> usize {
    let Some(first) = i.first() else {
        return monomials_of_degree(nvars, t).len();
    };
    let ring = first.ring();
    let k = ring.field();
    let powers: Vec<Polynomial<K>> = monomials_of_degree(nvars, e)
        .into_iter()
        .map(|m| Polynomial::monomial(ring, m, k.one()))
        .collect();
    quotient_dim(i, &powers, nvars, t)
}
