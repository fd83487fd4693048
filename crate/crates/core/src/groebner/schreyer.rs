//! First syzygies of a Gröbner basis via Schreyer's construction.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{ArrError, Result};
use crate::field::Field;
use crate::monomial::Monomial;

use super::matrix::reduce_vectors;
use super::module::{FreeModule, FreeModuleVector, ModuleOrder, SchreyerData, Term};
use super::GroebnerBasis;

/// Syzygies of a list of generators, living in the free module with one
/// basis vector per generator (shifted by its degree, Schreyer order).
#[derive(Clone, Debug)]
pub struct Syzygies<K: Field> {
    pub module: Arc<FreeModule<K>>,
    pub vectors: Vec<FreeModuleVector<K>>,
}

impl<K: Field> Syzygies<K> {
    /// The syzygy vectors viewed as a Gröbner basis for the induced order.
    pub fn as_basis(&self) -> GroebnerBasis<K> {
        GroebnerBasis::assume(&self.module, self.vectors.clone())
    }
}

/// Schreyer's theorem: the reduced S-pair relations of a Gröbner basis form
/// a Gröbner basis of its syzygy module for the induced order. Only the pairs
/// whose leads generate the lead module minimally are kept.
pub fn syzygies<K: Field>(gb: &GroebnerBasis<K>) -> Result<Syzygies<K>> {
    let target = gb.module();
    let ring = target.ring();
    let k = ring.field();
    let els = gb.elements();
    let m = els.len();

    // absolute lead monomials and tie ranks of the induced order
    let mut abs = Vec::with_capacity(m);
    let mut base_rank = Vec::with_capacity(m);
    let mut shifts = Vec::with_capacity(m);
    for e in els {
        let (lm, lc) = e
            .lead()
            .ok_or_else(|| ArrError::Precondition("zero basis element".into()))?;
        match target.order() {
            ModuleOrder::Schreyer(d) => {
                abs.push(lm.mul(&d.leads[lc]));
                base_rank.push(d.ranks[lc]);
            }
            _ if target.rank() == 1 => {
                abs.push(lm);
                base_rank.push(0);
            }
            _ => {
                return Err(ArrError::Precondition(
                    "syzygies need an ideal or a Schreyer-ordered module".into(),
                ))
            }
        }
        shifts.push(
            e.degree()
                .ok_or_else(|| ArrError::Precondition("inhomogeneous basis element".into()))?,
        );
    }
    let mut by_rank: Vec<usize> = (0..m).collect();
    // lower index wins ties within the same base rank
    by_rank.sort_by(|&a, &b| base_rank[a].cmp(&base_rank[b]).then(b.cmp(&a)));
    let mut ranks = vec![0u32; m];
    for (pos, &i) in by_rank.iter().enumerate() {
        ranks[i] = pos as u32;
    }
    let source = Arc::new(FreeModule::new(
        ring,
        shifts,
        ModuleOrder::Schreyer(Arc::new(SchreyerData {
            leads: abs,
            ranks: ranks.clone(),
        })),
    ));

    // for each winner w, minimal generators of the lead monomials lcm/t_w
    let mut chosen: Vec<(usize, usize, Monomial)> = Vec::new();
    for w in 0..m {
        let (tw, cw) = els[w].lead().unwrap();
        let mut quots: Vec<(Monomial, usize)> = Vec::new();
        for o in 0..m {
            let (to, co) = els[o].lead().unwrap();
            if o == w || co != cw || ranks[o] > ranks[w] {
                continue;
            }
            let l = tw.lcm(&to);
            quots.push((tw.div(&l).unwrap(), o));
        }
        quots.sort_by_key(|q| (q.0.degree(), q.1));
        let mut kept: Vec<(Monomial, usize)> = Vec::new();
        for (q, o) in quots {
            if kept.iter().any(|(p, _)| p.divides(&q)) {
                continue;
            }
            kept.push((q, o));
        }
        for (q, o) in kept {
            chosen.push((w, o, q));
        }
    }

    let basis: Vec<&[Term<K>]> = els.iter().map(|e| e.terms()).collect();
    let mut by_deg: BTreeMap<i32, Vec<(usize, usize, Monomial, Monomial)>> = BTreeMap::new();
    for (w, o, qw) in chosen {
        let (tw, _) = els[w].lead().unwrap();
        let (to, co) = els[o].lead().unwrap();
        let l = qw.mul(&tw);
        let qo = to.div(&l).unwrap();
        by_deg
            .entry(target.term_degree(&l, co as u32))
            .or_default()
            .push((w, o, qw, qo));
    }

    let mut vectors = Vec::new();
    for (_, group) in by_deg {
        ring.budget().check_time(&Default::default())?;
        let mut spolys = Vec::with_capacity(group.len());
        let mut heads = Vec::with_capacity(group.len());
        for &(w, o, qw, qo) in &group {
            let cw = k.inv(els[w].lead_coef().unwrap()).unwrap();
            let co = k.inv(els[o].lead_coef().unwrap()).unwrap();
            let a = els[w].mul_term(&qw, &cw)?;
            let b = els[o].mul_term(&qo, &co)?;
            spolys.push(a.sub(&b)?.into_terms());
            heads.push((w, qw, cw, o, qo, co));
        }
        let reduced = reduce_vectors(target, &basis, spolys, true)?;
        for ((rem, quots), (w, qw, cw, o, qo, co)) in reduced.into_iter().zip(heads) {
            if !rem.is_empty() {
                return Err(ArrError::Structural(
                    "S-vector of a Gröbner basis did not reduce to zero".into(),
                ));
            }
            let mut terms = vec![
                Term {
                    mon: qw,
                    comp: w as u32,
                    coef: cw,
                },
                Term {
                    mon: qo,
                    comp: o as u32,
                    coef: k.neg(&co),
                },
            ];
            for q in quots {
                terms.push(Term {
                    mon: q.mult,
                    comp: q.source as u32,
                    coef: k.neg(&q.coef),
                });
            }
            let v = FreeModuleVector::from_terms(&source, terms);
            debug_assert_eq!(v.lead(), Some((qw, w)));
            vectors.push(v);
        }
    }
    Ok(Syzygies {
        module: source,
        vectors,
    })
}
