use std::cmp::Ordering;
use std::sync::Arc;

use crate::error::{ArrError, Result};
use crate::field::Field;
use crate::monomial::Monomial;
use crate::ring::{Polynomial, Ring};

/// Orders on the terms `m * e_c` of a free module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleOrder {
    /// Position over term: the component decides first, `e_0` largest.
    Pot,
    /// Term over position: the ring order decides first, ties go to the
    /// lower component index.
    Top,
    /// Order induced by a map to another free module: `m e_c` is compared
    /// through `m * leads[c]` in the ring order, ties broken by `ranks[c]`
    /// (higher wins).
    Schreyer(Arc<SchreyerData>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchreyerData {
    pub leads: Vec<Monomial>,
    pub ranks: Vec<u32>,
}

/// A graded free module `sum_c R(-shifts[c])` with a term order.
#[derive(Clone, Debug)]
pub struct FreeModule<K: Field> {
    ring: Arc<Ring<K>>,
    shifts: Vec<i32>,
    order: ModuleOrder,
}

impl<K: Field> FreeModule<K> {
    pub fn new(ring: &Arc<Ring<K>>, shifts: Vec<i32>, order: ModuleOrder) -> Self {
        if let ModuleOrder::Schreyer(d) = &order {
            assert_eq!(d.leads.len(), shifts.len());
        }
        FreeModule {
            ring: ring.clone(),
            shifts,
            order,
        }
    }

    pub fn ring(&self) -> &Arc<Ring<K>> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn shifts(&self) -> &[i32] {
        &self.shifts
    }

    pub fn order(&self) -> &ModuleOrder {
        &self.order
    }

    pub fn same_as(&self, other: &FreeModule<K>) -> bool {
        *self.ring == *other.ring && self.shifts == other.shifts && self.order == other.order
    }

    /// Same ring and shifts, another term order.
    pub fn with_order(&self, order: ModuleOrder) -> Self {
        FreeModule::new(&self.ring, self.shifts.clone(), order)
    }

    #[inline]
    pub fn term_degree(&self, m: &Monomial, comp: u32) -> i32 {
        self.ring.wdeg(m) as i32 + self.shifts[comp as usize]
    }

    #[inline]
    pub fn cmp(&self, am: &Monomial, ac: u32, bm: &Monomial, bc: u32) -> Ordering {
        match &self.order {
            ModuleOrder::Pot => bc.cmp(&ac).then_with(|| self.ring.cmp(am, bm)),
            ModuleOrder::Top => self.ring.cmp(am, bm).then_with(|| bc.cmp(&ac)),
            ModuleOrder::Schreyer(d) => {
                let a = am.mul(&d.leads[ac as usize]);
                let b = bm.mul(&d.leads[bc as usize]);
                self.ring
                    .cmp(&a, &b)
                    .then_with(|| d.ranks[ac as usize].cmp(&d.ranks[bc as usize]))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term<K: Field> {
    pub mon: Monomial,
    pub comp: u32,
    pub coef: K::Elem,
}

/// An element of a free module; terms strictly decreasing in the module order.
#[derive(Clone, Debug)]
pub struct FreeModuleVector<K: Field> {
    module: Arc<FreeModule<K>>,
    terms: Vec<Term<K>>,
}

impl<K: Field> PartialEq for FreeModuleVector<K> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<K: Field> FreeModuleVector<K> {
    pub fn zero(module: &Arc<FreeModule<K>>) -> Self {
        FreeModuleVector {
            module: module.clone(),
            terms: Vec::new(),
        }
    }

    pub fn unit(module: &Arc<FreeModule<K>>, comp: usize) -> Self {
        let one = module.ring.field().one();
        FreeModuleVector {
            module: module.clone(),
            terms: vec![Term {
                mon: Monomial::ONE,
                comp: comp as u32,
                coef: one,
            }],
        }
    }

    pub(crate) fn from_sorted(module: &Arc<FreeModule<K>>, terms: Vec<Term<K>>) -> Self {
        debug_assert!(terms
            .windows(2)
            .all(|w| module.cmp(&w[0].mon, w[0].comp, &w[1].mon, w[1].comp) == Ordering::Greater));
        FreeModuleVector {
            module: module.clone(),
            terms,
        }
    }

    /// Normalizes arbitrary terms: sorts, merges duplicates, drops zeros.
    pub fn from_terms(module: &Arc<FreeModule<K>>, mut terms: Vec<Term<K>>) -> Self {
        let k = module.ring.field();
        terms.sort_by(|a, b| module.cmp(&b.mon, b.comp, &a.mon, a.comp));
        let mut out: Vec<Term<K>> = Vec::with_capacity(terms.len());
        for t in terms {
            if let Some(last) = out.last_mut() {
                if last.mon == t.mon && last.comp == t.comp {
                    last.coef = k.add(&last.coef, &t.coef);
                    continue;
                }
                if k.is_zero(&last.coef) {
                    out.pop();
                }
            }
            out.push(t);
        }
        if out.last().map(|t| k.is_zero(&t.coef)).unwrap_or(false) {
            out.pop();
        }
        FreeModuleVector {
            module: module.clone(),
            terms: out,
        }
    }

    /// The polynomial `f` placed in component 0.
    pub fn from_polynomial(module: &Arc<FreeModule<K>>, f: &Polynomial<K>) -> Result<Self> {
        let mut comps = vec![Polynomial::zero(module.ring()); module.rank()];
        comps[0] = f.clone();
        FreeModuleVector::from_components(module, &comps)
    }

    pub fn from_components(module: &Arc<FreeModule<K>>, comps: &[Polynomial<K>]) -> Result<Self> {
        if comps.len() != module.rank() {
            return Err(ArrError::Dimension(format!(
                "{} components for rank {}",
                comps.len(),
                module.rank()
            )));
        }
        let mut terms = Vec::new();
        for (c, p) in comps.iter().enumerate() {
            if !p.ring().compatible(module.ring()) {
                return Err(ArrError::ContextMismatch(
                    "component from another ring".into(),
                ));
            }
            for (m, a) in p.terms() {
                terms.push(Term {
                    mon: *m,
                    comp: c as u32,
                    coef: a.clone(),
                });
            }
        }
        Ok(FreeModuleVector::from_terms(module, terms))
    }

    pub fn module(&self) -> &Arc<FreeModule<K>> {
        &self.module
    }

    pub fn terms(&self) -> &[Term<K>] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term<K>> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<(Monomial, usize)> {
        self.terms.first().map(|t| (t.mon, t.comp as usize))
    }

    pub fn lead_coef(&self) -> Option<&K::Elem> {
        self.terms.first().map(|t| &t.coef)
    }

    pub fn component(&self, c: usize) -> Polynomial<K> {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.comp as usize == c)
            .map(|t| (t.mon, t.coef.clone()))
            .collect();
        Polynomial::from_terms(self.module.ring(), terms)
    }

    pub fn components(&self) -> Vec<Polynomial<K>> {
        (0..self.module.rank()).map(|c| self.component(c)).collect()
    }

    /// Degree of a homogeneous vector, `None` for zero or inhomogeneous input.
    pub fn degree(&self) -> Option<i32> {
        let first = self.terms.first()?;
        let d = self.module.term_degree(&first.mon, first.comp);
        self.terms
            .iter()
            .all(|t| self.module.term_degree(&t.mon, t.comp) == d)
            .then_some(d)
    }

    /// Re-sorts for another free module over the same ring and rank.
    pub fn convert_to(&self, target: &Arc<FreeModule<K>>) -> Result<Self> {
        if target.rank() != self.module.rank() || !target.ring().compatible(self.module.ring()) {
            return Err(ArrError::ContextMismatch(
                "incompatible free modules".into(),
            ));
        }
        if Arc::ptr_eq(target, &self.module) || target.same_as(&self.module) {
            return Ok(FreeModuleVector {
                module: target.clone(),
                terms: self.terms.clone(),
            });
        }
        Ok(FreeModuleVector::from_terms(target, self.terms.clone()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let other = other.convert_to(&self.module)?;
        let mut t = self.terms.clone();
        t.extend(other.terms);
        Ok(FreeModuleVector::from_terms(&self.module, t))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(
            &other.scale(
                &self
                    .module
                    .ring()
                    .field()
                    .neg(&self.module.ring().field().one()),
            ),
        )
    }

    pub fn scale(&self, c: &K::Elem) -> Self {
        let k = self.module.ring().field();
        if k.is_zero(c) {
            return FreeModuleVector::zero(&self.module);
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                mon: t.mon,
                comp: t.comp,
                coef: k.mul(&t.coef, c),
            })
            .collect();
        FreeModuleVector {
            module: self.module.clone(),
            terms,
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &K::Elem) -> Result<Self> {
        let k = self.module.ring().field();
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            terms.push(Term {
                mon: t.mon.checked_mul(m)?,
                comp: t.comp,
                coef: k.mul(&t.coef, c),
            });
        }
        Ok(FreeModuleVector::from_terms(&self.module, terms))
    }

    pub fn mul_poly(&self, p: &Polynomial<K>) -> Result<Self> {
        let k = self.module.ring().field();
        let mut terms = Vec::with_capacity(self.terms.len() * p.len());
        for (m, c) in p.terms() {
            for t in &self.terms {
                terms.push(Term {
                    mon: t.mon.checked_mul(m)?,
                    comp: t.comp,
                    coef: k.mul(&t.coef, c),
                });
            }
        }
        Ok(FreeModuleVector::from_terms(&self.module, terms))
    }

    pub fn monic(&self) -> Self {
        match self.lead_coef() {
            None => self.clone(),
            Some(c) => self.scale(&self.module.ring().field().inv(c).expect("nonzero")),
        }
    }
}
