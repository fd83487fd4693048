//! Homogeneous ideals and the ideal calculus: sums, products, intersections,
//! colon ideals, saturation, elimination, membership and minors.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{ArrError, Result};
use crate::field::Field;
use crate::groebner::{
    groebner_basis_in, module_groebner_basis, FreeModule, FreeModuleVector, GroebnerBasis,
    ModuleOrder,
};
use crate::invariants::hilbert::{series_numerator, HilbertData};
use crate::monomial::{monomials_of_degree, Grading, Monomial, MonomialOrder};
use crate::ring::{Polynomial, Ring};

/// Seed of the linear forms drawn by [`Ideal::saturate_irrelevant`] and
/// [`Ideal::is_saturated`]. Fixed so that runs are reproducible.
const LINEAR_FORM_SEED: u64 = 0x5a7_0001;
const LINEAR_FORM_ATTEMPTS: u64 = 3;

type Cache<K> = Arc<RwLock<HashMap<MonomialOrder, Arc<GroebnerBasis<K>>>>>;

/// A homogeneous ideal given by generators, with reduced Gröbner bases
/// cached per monomial order.
#[derive(Clone)]
pub struct Ideal<K: Field> {
    ring: Arc<Ring<K>>,
    gens: Vec<Polynomial<K>>,
    tag: String,
    cache: Cache<K>,
}

impl<K: Field> fmt::Debug for Ideal<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal[{}]{}", self.tag, self)
    }
}

impl<K: Field> fmt::Display for Ideal<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        if self.gens.is_empty() {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl<K: Field> Ideal<K> {
    /// The ideal generated by `gens`; zero generators are dropped.
    pub fn new(ring: &Arc<Ring<K>>, gens: Vec<Polynomial<K>>) -> Result<Self> {
        let mut out = Vec::with_capacity(gens.len());
        for g in gens {
            if !g.ring().compatible(ring) {
                return Err(ArrError::ContextMismatch(
                    "generator from another ring".into(),
                ));
            }
            if g.is_zero() {
                continue;
            }
            if !g.is_homogeneous() {
                return Err(ArrError::Precondition(format!(
                    "generator {g} is not homogeneous"
                )));
            }
            out.push(g.reorder(ring)?);
        }
        Ok(Ideal {
            ring: ring.clone(),
            gens: out,
            tag: String::new(),
            cache: Default::default(),
        })
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = tag.into();
        self
    }

    pub fn zero(ring: &Arc<Ring<K>>) -> Self {
        Ideal {
            ring: ring.clone(),
            gens: Vec::new(),
            tag: "0".into(),
            cache: Default::default(),
        }
    }

    pub fn unit(ring: &Arc<Ring<K>>) -> Self {
        Ideal {
            ring: ring.clone(),
            gens: vec![Polynomial::one(ring)],
            tag: "1".into(),
            cache: Default::default(),
        }
    }

    /// The irrelevant ideal `(x0, ..., xn)`.
    pub fn irrelevant(ring: &Arc<Ring<K>>) -> Self {
        Ideal::variables(ring, &(0..ring.nvars()).collect::<Vec<_>>()).with_tag("m")
    }

    /// The ideal generated by the listed variables.
    pub fn variables(ring: &Arc<Ring<K>>, vars: &[usize]) -> Self {
        let gens = vars.iter().map(|&i| Polynomial::var(ring, i)).collect();
        Ideal {
            ring: ring.clone(),
            gens,
            tag: String::new(),
            cache: Default::default(),
        }
    }

    pub fn principal(f: &Polynomial<K>) -> Result<Self> {
        Ideal::new(f.ring(), vec![f.clone()])
    }

    pub fn ring(&self) -> &Arc<Ring<K>> {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial<K>] {
        &self.gens
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    /// Generator degrees in order.
    pub fn degrees(&self) -> Vec<u32> {
        self.gens.iter().map(|g| g.degree().unwrap_or(0)).collect()
    }

    fn derive(&self, gens: Vec<Polynomial<K>>, tag: String) -> Result<Self> {
        Ok(Ideal::new(&self.ring, gens)?.with_tag(tag))
    }

    fn same_ring(&self, other: &Ideal<K>) -> Result<()> {
        if self.ring.compatible(&other.ring) {
            Ok(())
        } else {
            Err(ArrError::ContextMismatch(
                "ideals live in different rings".into(),
            ))
        }
    }

    /// Reduced Gröbner basis for the ring's default order.
    pub fn gb(&self) -> Result<Arc<GroebnerBasis<K>>> {
        self.gb_in(self.ring.order())
    }

    pub fn gb_in(&self, order: MonomialOrder) -> Result<Arc<GroebnerBasis<K>>> {
        if let Some(gb) = self.cache.read().expect("cache lock").get(&order) {
            return Ok(gb.clone());
        }
        let gb = Arc::new(groebner_basis_in(&self.ring, &self.gens, order)?);
        Ok(self
            .cache
            .write()
            .expect("cache lock")
            .entry(order)
            .or_insert(gb)
            .clone())
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> Result<bool> {
        if self.gens.iter().any(|g| g.is_constant()) {
            return Ok(true);
        }
        if self.gens.is_empty() {
            return Ok(false);
        }
        Ok(self.gb()?.is_unit())
    }

    /// `f ∈ I` by normal form.
    pub fn contains(&self, f: &Polynomial<K>) -> Result<bool> {
        if f.is_zero() {
            return Ok(true);
        }
        if self.gens.is_empty() {
            return Ok(false);
        }
        self.gb()?.contains(f)
    }

    /// `J ⊆ I`.
    pub fn contains_ideal(&self, other: &Ideal<K>) -> Result<bool> {
        self.same_ring(other)?;
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality by mutual generator membership.
    pub fn equals(&self, other: &Ideal<K>) -> Result<bool> {
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    pub fn sum(&self, other: &Ideal<K>) -> Result<Self> {
        self.same_ring(other)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        self.derive(gens, format!("{} + {}", self.tag, other.tag))
    }

    pub fn product(&self, other: &Ideal<K>) -> Result<Self> {
        self.same_ring(other)?;
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.mul(b)?);
            }
        }
        self.derive(gens, format!("({})({})", self.tag, other.tag))
    }

    /// `I^k`, built from the monomials in the generators so that no
    /// product is formed twice.
    pub fn power(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Ok(Ideal::unit(&self.ring));
        }
        let r = self.gens.len();
        let mut gens = Vec::new();
        // multisets of size k from r generators, by nondecreasing index lists
        let mut idx = vec![0usize; k as usize];
        if r == 0 {
            return Ok(Ideal::zero(&self.ring));
        }
        loop {
            let mut p = Polynomial::one(&self.ring);
            for &i in &idx {
                p = p.mul(&self.gens[i])?;
            }
            gens.push(p);
            let mut pos = idx.len();
            while pos > 0 && idx[pos - 1] == r - 1 {
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            idx[pos - 1] += 1;
            let v = idx[pos - 1];
            for slot in idx.iter_mut().skip(pos) {
                *slot = v;
            }
        }
        self.derive(gens, format!("({})^{k}", self.tag))
    }

    /// `f * I`.
    pub fn scale_by(&self, f: &Polynomial<K>) -> Result<Self> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.mul(f))
            .collect::<Result<Vec<_>>>()?;
        self.derive(gens, format!("{f}*({})", self.tag))
    }

    fn checks_enabled(&self) -> bool {
        self.ring.budget().check_identities
    }

    fn assert_identity(&self, ok: bool, what: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(ArrError::Structural(format!("identity violated: {what}")))
        }
    }

    /// Grevlex copy of the ring used for auxiliary module computations.
    fn work_ring(&self) -> Arc<Ring<K>> {
        self.ring.with_monomial_order(MonomialOrder::GrevLex)
    }

    /// Runs a position-over-term module Gröbner basis in `R^2` and returns
    /// the second components of the basis elements whose first component
    /// vanishes.
    fn second_component_kernel(
        &self,
        shifts: Vec<i32>,
        rows: Vec<[Polynomial<K>; 2]>,
    ) -> Result<Vec<Polynomial<K>>> {
        let r = self.work_ring();
        let module = Arc::new(FreeModule::new(&r, shifts, ModuleOrder::Pot));
        let vecs = rows
            .iter()
            .map(|row| FreeModuleVector::from_components(&module, row))
            .collect::<Result<Vec<_>>>()?;
        let gb = module_groebner_basis(&module, &vecs)?;
        gb.elements()
            .iter()
            .filter(|v| v.lead().map(|l| l.1 == 1).unwrap_or(false))
            .map(|v| v.component(1).reorder(&self.ring))
            .collect()
    }

    /// `I ∩ J`. The generators `(f, f)` for `f ∈ I` and `(g, 0)` for
    /// `g ∈ J` span a submodule of `R^2` whose elements with vanishing first
    /// component have second component running over `I ∩ J`.
    pub fn intersect(&self, other: &Ideal<K>) -> Result<Self> {
        self.same_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Ideal::zero(&self.ring));
        }
        if self.is_unit()? {
            return Ok(other.clone());
        }
        if other.is_unit()? {
            return Ok(self.clone());
        }
        let zero = Polynomial::zero(&self.ring);
        let mut rows = Vec::new();
        for f in &self.gens {
            rows.push([f.clone(), f.clone()]);
        }
        for g in &other.gens {
            rows.push([g.clone(), zero.clone()]);
        }
        let gens = self.second_component_kernel(vec![0, 0], rows)?;
        let out = self.derive(gens, format!("{} ∩ {}", self.tag, other.tag))?;
        if self.checks_enabled() {
            self.assert_identity(self.contains_ideal(&out)?, "I ∩ J ⊆ I")?;
            self.assert_identity(other.contains_ideal(&out)?, "I ∩ J ⊆ J")?;
        }
        Ok(out)
    }

    /// `I ∩ J` by eliminating an auxiliary variable from
    /// `t0 I + (t1 - t0) J` in `K[t0, t1, x]` and setting `t1 = 1`.
    /// Independent of [`Ideal::intersect`]; used to cross-check it.
    pub fn intersect_by_elimination(&self, other: &Ideal<K>) -> Result<Self> {
        self.same_ring(other)?;
        let n = self.ring.nvars();
        let mut names: Vec<String> = vec!["t0".into(), "t1".into()];
        names.extend(self.ring.names().iter().cloned());
        let mut w = vec![1u32, 1];
        w.extend((0..n).map(|i| self.ring.grading().weights[i]));
        let big = self
            .ring
            .derived(names, MonomialOrder::Elimination(1), Grading::weighted(&w))?;
        let into: Vec<Option<usize>> = (0..n).map(|i| Some(i + 2)).collect();
        let t0 = Polynomial::var(&big, 0);
        let t1 = Polynomial::var(&big, 1);
        let diff = t1.sub(&t0)?;
        let mut gens = Vec::new();
        for f in &self.gens {
            gens.push(f.map_vars(&big, &into)?.mul(&t0)?);
        }
        for g in &other.gens {
            gens.push(g.map_vars(&big, &into)?.mul(&diff)?);
        }
        let gb = groebner_basis_in(&big, &gens, MonomialOrder::Elimination(1))?;
        let mut back: Vec<Option<usize>> = vec![None, None];
        back.extend((0..n).map(Some));
        let mut out = Vec::new();
        for p in gb.polynomials() {
            if p.terms().iter().any(|(m, _)| m.exp(0) > 0) {
                continue;
            }
            // bihomogeneous in (t, x): a power of t1 times a form in x
            let e = p.var_content(1);
            let q = p.divide_var_power(1, e);
            if q.terms().iter().any(|(m, _)| m.exp(1) > 0) {
                return Err(ArrError::Structural(
                    "elimination output not bihomogeneous".into(),
                ));
            }
            out.push(q.map_vars(&self.ring, &back)?);
        }
        self.derive(out, format!("{} ∩ {}", self.tag, other.tag))
    }

    /// `I : f`, from the module generated by `(g, 0)` for `g ∈ I` and
    /// `(f, 1)`: the second components of elements with vanishing first
    /// component are exactly the multipliers of `f` into `I`.
    pub fn quotient_by(&self, f: &Polynomial<K>) -> Result<Self> {
        if f.is_zero() {
            return Ok(Ideal::unit(&self.ring));
        }
        let d = f
            .homogeneous_degree()
            .ok_or_else(|| ArrError::Precondition(format!("{f} is not homogeneous")))?;
        if f.is_constant() {
            return Ok(self.clone());
        }
        if self.contains(f)? {
            return Ok(Ideal::unit(&self.ring));
        }
        let zero = Polynomial::zero(&self.ring);
        let one = Polynomial::one(&self.ring);
        let mut rows: Vec<[Polynomial<K>; 2]> = self
            .gens
            .iter()
            .map(|g| [g.clone(), zero.clone()])
            .collect();
        rows.push([f.clone(), one]);
        let gens = self.second_component_kernel(vec![0, d as i32], rows)?;
        let out = self.derive(gens, format!("{} : {f}", self.tag))?;
        if self.checks_enabled() {
            self.assert_identity(out.contains_ideal(self)?, "I ⊆ I : f")?;
            for g in &out.gens {
                self.assert_identity(self.contains(&g.mul(f)?)?, "(I : f) f ⊆ I")?;
            }
        }
        Ok(out)
    }

    /// `I : J = ∩_g (I : g)` over the generators of `J`.
    pub fn quotient(&self, other: &Ideal<K>) -> Result<Self> {
        self.same_ring(other)?;
        let mut acc = Ideal::unit(&self.ring);
        for g in &other.gens {
            let q = self.quotient_by(g)?;
            acc = acc.intersect(&q)?;
        }
        let out = acc.with_tag(format!("{} : {}", self.tag, other.tag));
        if self.checks_enabled() && !other.is_zero() {
            self.assert_identity(out.contains_ideal(self)?, "I ⊆ I : J")?;
            self.assert_identity(self.contains_ideal(&out.product(other)?)?, "(I : J) J ⊆ I")?;
        }
        Ok(out)
    }

    /// `I : f^∞`. Monomials are handled one variable at a time, linear forms
    /// by a coordinate change and grevlex (the saturating variable last),
    /// other forms by adjoining `t0 = f` with weight `deg f`.
    pub fn saturate_by(&self, f: &Polynomial<K>) -> Result<Self> {
        if f.is_zero() {
            return Ok(Ideal::unit(&self.ring));
        }
        if !f.is_homogeneous() {
            return Err(ArrError::Precondition(format!("{f} is not homogeneous")));
        }
        if f.is_constant() || self.is_zero() {
            return Ok(self.clone());
        }
        if self.is_unit()? {
            return Ok(Ideal::unit(&self.ring));
        }
        let out = if f.len() == 1 {
            let m = f.lead_monomial().unwrap();
            let mut cur = self.clone();
            for i in 0..self.ring.nvars() {
                if m.exp(i) > 0 {
                    cur = cur.saturate_linear(&Polynomial::var(&self.ring, i))?.0;
                }
            }
            cur
        } else if f.degree() == Some(1) && self.ring.is_standard_graded() {
            self.saturate_linear(f)?.0
        } else {
            self.saturate_general(f)?
        };
        let out = out.with_tag(format!("{} : ({f})^∞", self.tag));
        if self.checks_enabled() {
            self.assert_identity(out.contains_ideal(self)?, "I ⊆ I : f^∞")?;
        }
        Ok(out)
    }

    /// Saturation by a linear form `l`; also returns the lead monomials of
    /// a Gröbner basis of the result in the transformed coordinates (the
    /// same Hilbert function as the result).
    fn saturate_linear(&self, l: &Polynomial<K>) -> Result<(Self, Vec<Monomial>)> {
        let k = self.ring.field();
        let n = self.ring.nvars();
        let last = n - 1;
        let coef = |p: &Polynomial<K>, i: usize| p.coefficient(&Monomial::var(i));
        let pivot = (0..n)
            .rev()
            .find(|&i| !k.is_zero(&coef(l, i)))
            .ok_or_else(|| ArrError::Precondition(format!("{l} is not a linear form")))?;
        let r = self.work_ring();
        // swap the pivot into the last position
        let perm: Vec<Option<usize>> = (0..n)
            .map(|i| {
                Some(if i == pivot {
                    last
                } else if i == last {
                    pivot
                } else {
                    i
                })
            })
            .collect();
        let l = l.map_vars(&r, &perm)?;
        let c_last = coef(&l, last);
        let inv = k.inv(&c_last).expect("nonzero pivot");
        // x_last -> (x_last - sum_{i<last} c_i x_i) / c_last sends l to x_last
        let mut y = Polynomial::var(&r, last);
        for i in 0..last {
            let c = coef(&l, i);
            if !k.is_zero(&c) {
                y = y.sub(&Polynomial::var(&r, i).scale(&c))?;
            }
        }
        let y = y.scale(&inv);
        let mut gens = Vec::with_capacity(self.gens.len());
        for g in &self.gens {
            gens.push(g.map_vars(&r, &perm)?.substitute_var(last, &y)?);
        }
        let gb = groebner_basis_in(&r, &gens, MonomialOrder::GrevLex)?;
        let mut leads = Vec::with_capacity(gb.len());
        let mut out = Vec::with_capacity(gb.len());
        for p in gb.polynomials() {
            let q = p.divide_var_power(last, p.var_content(last));
            leads.push(q.lead_monomial().expect("nonzero"));
            out.push(q.substitute_var(last, &l)?.map_vars(&self.ring, &perm)?);
        }
        Ok((self.derive(out, String::new())?, leads))
    }

    fn saturate_general(&self, f: &Polynomial<K>) -> Result<Self> {
        let n = self.ring.nvars();
        let e = self.ring.wdeg(&f.lead_monomial().unwrap());
        let mut names: Vec<String> = self.ring.names().to_vec();
        names.push("t0".into());
        let mut w: Vec<u32> = (0..n).map(|i| self.ring.grading().weights[i]).collect();
        w.push(e);
        let big = self
            .ring
            .derived(names, MonomialOrder::GrevLex, Grading::weighted(&w))?;
        let into: Vec<Option<usize>> = (0..n).map(Some).collect();
        let fb = f.map_vars(&big, &into)?;
        let t = Polynomial::var(&big, n);
        let mut gens = self
            .gens
            .iter()
            .map(|g| g.map_vars(&big, &into))
            .collect::<Result<Vec<_>>>()?;
        gens.push(fb.sub(&t)?);
        let gb = groebner_basis_in(&big, &gens, MonomialOrder::GrevLex)?;
        let mut back: Vec<Option<usize>> = (0..n).map(Some).collect();
        back.push(None);
        let mut out = Vec::with_capacity(gb.len());
        for p in gb.polynomials() {
            let q = p
                .divide_var_power(n, p.var_content(n))
                .substitute_var(n, &fb)?;
            if !q.is_zero() {
                out.push(q.map_vars(&self.ring, &back)?);
            }
        }
        self.derive(out, String::new())
    }

    /// `I : J^∞` by iterated quotients until two consecutive iterates agree.
    pub fn saturate(&self, other: &Ideal<K>) -> Result<Self> {
        self.same_ring(other)?;
        if other.gens.len() == 1 {
            return self.saturate_by(&other.gens[0]);
        }
        let steps = self.ring.budget().max_saturation_steps;
        let mut cur = self.clone();
        for _ in 0..steps {
            let next = cur.quotient(other)?;
            if cur.contains_ideal(&next)? {
                return Ok(cur.with_tag(format!("{} : ({})^∞", self.tag, other.tag)));
            }
            cur = next;
        }
        Err(ArrError::BudgetExhausted {
            reason: format!("saturation did not stabilize within {steps} quotients"),
            stats: self.ring.env().totals(),
        })
    }

    /// `I^sat = I : m^∞`. Saturates by a seeded general linear form `l` and
    /// certifies the result: `I : l^∞` contains `I^sat`, both are saturated,
    /// so they coincide exactly when their Hilbert polynomials agree with
    /// that of `I`. Falls back to `∩_i I : x_i^∞` if no draw certifies.
    pub fn saturate_irrelevant(&self) -> Result<Self> {
        if self.is_zero() || self.is_unit()? {
            return Ok(self.clone());
        }
        let target = self.hilbert()?.polynomial;
        let out = 'found: {
            for attempt in 0..LINEAR_FORM_ATTEMPTS {
                let l = self.random_linear_form(LINEAR_FORM_SEED + attempt);
                let (o, leads) = self.saturate_linear(&l)?;
                let hp = HilbertData::from_numerator(
                    series_numerator(&leads, self.ring.nvars()),
                    self.ring.nvars(),
                );
                if hp.polynomial == target {
                    break 'found o;
                }
                log::debug!("linear form {l} does not certify the saturation; redrawing");
            }
            let mut acc = Ideal::unit(&self.ring);
            for i in 0..self.ring.nvars() {
                acc = acc.intersect(&self.saturate_linear(&Polynomial::var(&self.ring, i))?.0)?;
            }
            acc
        };
        let out = out.with_tag(format!("({})^sat", self.tag));
        if self.checks_enabled() {
            self.assert_identity(out.contains_ideal(self)?, "I ⊆ I^sat")?;
        }
        Ok(out)
    }

    fn random_linear_form(&self, seed: u64) -> Polynomial<K> {
        let k = self.ring.field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let terms = (0..self.ring.nvars())
            .map(|i| {
                let mut c = k.random(&mut rng);
                while k.is_zero(&c) {
                    c = k.random(&mut rng);
                }
                (Monomial::var(i), c)
            })
            .collect();
        Polynomial::from_terms(&self.ring, terms)
    }

    /// Whether `I : m = I`. A general linear form that is a nonzerodivisor
    /// modulo `I` settles the question; otherwise `I : m` is computed.
    pub fn is_saturated(&self) -> Result<bool> {
        if self.is_zero() || self.is_unit()? {
            return Ok(true);
        }
        let l = self.random_linear_form(LINEAR_FORM_SEED);
        if self.contains_ideal(&self.quotient_by(&l)?)? {
            return Ok(true);
        }
        self.contains_ideal(&self.quotient(&Ideal::irrelevant(&self.ring))?)
    }

    /// `I ∩ K[x_k, ..., x_n]` from an elimination-order basis.
    pub fn eliminate(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Ok(self.clone());
        }
        if k >= self.ring.nvars() {
            return Err(ArrError::Precondition(format!(
                "cannot eliminate {k} of {} variables",
                self.ring.nvars()
            )));
        }
        let gb = self.gb_in(MonomialOrder::Elimination(k))?;
        let mut out = Vec::new();
        for p in gb.polynomials() {
            let lead = p.lead_monomial().expect("nonzero");
            if (0..k).all(|i| lead.exp(i) == 0) {
                out.push(p.reorder(&self.ring)?);
            }
        }
        self.derive(out, format!("elim_{k}({})", self.tag))
    }

    /// `f ∈ √I`, decided as `I : f^∞ = (1)`.
    pub fn radical_contains(&self, f: &Polynomial<K>) -> Result<bool> {
        if f.is_zero() || self.contains(f)? {
            return Ok(true);
        }
        if f.is_constant() {
            return self.is_unit();
        }
        self.saturate_by(f)?.is_unit()
    }

    /// A minimal generating subset of the generators.
    pub fn trim(&self) -> Result<Self> {
        if self.gens.is_empty() {
            return Ok(self.clone());
        }
        let gb = self.gb()?;
        if gb.is_unit() {
            return Ok(Ideal::unit(&self.ring));
        }
        let gens = gb
            .essential_inputs()
            .iter()
            .map(|&i| self.gens[i].clone())
            .collect();
        Ok(Ideal {
            ring: self.ring.clone(),
            gens,
            tag: self.tag.clone(),
            cache: self.cache.clone(),
        })
    }

    /// Hilbert data of `S/I`, from grevlex lead terms.
    pub fn hilbert(&self) -> Result<HilbertData> {
        crate::invariants::hilbert_data(self)
    }

    pub fn codim(&self) -> Result<usize> {
        Ok(self.hilbert()?.codim())
    }

    /// Degree of the projective scheme defined by `I`.
    pub fn degree(&self) -> Result<i64> {
        Ok(self.hilbert()?.degree)
    }

    /// Maps the ideal into another ring through a variable map.
    pub fn map_vars(&self, target: &Arc<Ring<K>>, var_map: &[Option<usize>]) -> Result<Self> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.map_vars(target, var_map))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(target, gens)?.with_tag(self.tag.clone()))
    }
}

/// A form of standard degree `d` with every coefficient drawn from `rng`.
pub fn random_form<K: Field, R: Rng + ?Sized>(
    ring: &Arc<Ring<K>>,
    d: u32,
    rng: &mut R,
) -> Polynomial<K> {
    let k = ring.field();
    let terms = monomials_of_degree(ring.nvars(), d)
        .into_iter()
        .map(|m| (m, k.random(rng)))
        .collect();
    Polynomial::from_terms(ring, terms)
}

impl<K: Field> Ideal<K> {
    /// A general element of `[I]_d`: each generator of degree at most `d`
    /// times a random form of the complementary degree. `None` when `[I]_d = 0`.
    pub fn random_element<R: Rng + ?Sized>(
        &self,
        d: u32,
        rng: &mut R,
    ) -> Result<Option<Polynomial<K>>> {
        let usable: Vec<&Polynomial<K>> = self
            .gens
            .iter()
            .filter(|g| g.homogeneous_degree().is_some_and(|e| e <= d))
            .collect();
        if usable.is_empty() {
            return Ok(None);
        }
        for _ in 0..8 {
            let mut acc = Polynomial::zero(&self.ring);
            for g in &usable {
                let e = g.homogeneous_degree().unwrap();
                acc = acc.add(&random_form(&self.ring, d - e, rng).mul(g)?)?;
            }
            if !acc.is_zero() {
                return Ok(Some(acc));
            }
        }
        Err(ArrError::Genericity(format!(
            "only zero draws in degree {d} of {}",
            self.tag
        )))
    }

    /// Smallest generator degree.
    pub fn min_degree(&self) -> Option<u32> {
        self.gens
            .iter()
            .filter_map(|g| g.homogeneous_degree())
            .min()
    }
}

/// The ideal of `size x size` minors of a matrix given by rows.
pub fn minors<K: Field>(
    ring: &Arc<Ring<K>>,
    rows: &[Vec<Polynomial<K>>],
    size: usize,
) -> Result<Ideal<K>> {
    let nrows = rows.len();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(ArrError::Dimension("ragged matrix".into()));
    }
    if size == 0 || size > nrows || size > ncols {
        return Err(ArrError::Dimension(format!(
            "no {size}-minors in a {nrows}x{ncols} matrix"
        )));
    }
    let mut gens = Vec::new();
    for rs in combinations(nrows, size) {
        for cs in combinations(ncols, size) {
            gens.push(determinant(ring, rows, &rs, &cs)?);
        }
    }
    Ok(Ideal::new(ring, gens)?.with_tag(format!("I_{size}")))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Laplace expansion along the first selected row.
fn determinant<K: Field>(
    ring: &Arc<Ring<K>>,
    m: &[Vec<Polynomial<K>>],
    rs: &[usize],
    cs: &[usize],
) -> Result<Polynomial<K>> {
    if rs.len() == 1 {
        return Ok(m[rs[0]][cs[0]].clone());
    }
    let mut acc = Polynomial::zero(ring);
    for (j, &c) in cs.iter().enumerate() {
        let entry = &m[rs[0]][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cs.iter().copied().filter(|&x| x != c).collect();
        let sub = determinant(ring, m, &rs[1..], &rest)?.mul(entry)?;
        acc = if j % 2 == 0 {
            acc.add(&sub)?
        } else {
            acc.sub(&sub)?
        };
    }
    Ok(acc)
}

pub fn membership<K: Field>(f: &Polynomial<K>, i: &Ideal<K>) -> Result<bool> {
    i.contains(f)
}

pub fn radical_membership<K: Field>(f: &Polynomial<K>, i: &Ideal<K>) -> Result<bool> {
    i.radical_contains(f)
}

pub fn ideal_equal<K: Field>(i: &Ideal<K>, j: &Ideal<K>) -> Result<bool> {
    i.equals(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, RationalField};
    use crate::oracle;

    fn ring(n: usize) -> Arc<Ring<PrimeField>> {
        Ring::new(PrimeField::default(), n).unwrap()
    }

    fn ideal(r: &Arc<Ring<PrimeField>>, gens: &[&str]) -> Ideal<PrimeField> {
        Ideal::new(
            r,
            gens.iter()
                .map(|s| Polynomial::parse(r, s).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn sums_and_powers() {
        let r = ring(4);
        let s = ideal(&r, &["x0"]).sum(&ideal(&r, &["x1"])).unwrap();
        assert!(s.equals(&ideal(&r, &["x0", "x1"])).unwrap());
        let p = ideal(&r, &["x0", "x1"]).power(2).unwrap();
        assert_eq!(p.gens().len(), 3);
        assert!(p.equals(&ideal(&r, &["x0^2", "x0*x1", "x1^2"])).unwrap());
    }

    #[test]
    fn intersections() {
        let r = ring(4);
        let a = ideal(&r, &["x0"]).intersect(&ideal(&r, &["x1"])).unwrap();
        assert!(a.equals(&ideal(&r, &["x0*x1"])).unwrap());
        let b = ideal(&r, &["x0", "x1"])
            .intersect(&ideal(&r, &["x2", "x3"]))
            .unwrap();
        let expect = ideal(&r, &["x0*x2", "x0*x3", "x1*x2", "x1*x3"]);
        assert!(b.equals(&expect).unwrap());
        let c = ideal(&r, &["x0", "x1"])
            .intersect_by_elimination(&ideal(&r, &["x2", "x3"]))
            .unwrap();
        assert!(c.equals(&expect).unwrap());
        let i = ideal(&r, &["x0^2 - x1*x2", "x3^3"]);
        assert!(i.intersect(&i).unwrap().equals(&i).unwrap());
    }

    #[test]
    fn quotients() {
        let r = ring(4);
        let i = ideal(&r, &["x0*x1"]);
        assert!(i.quotient(&Ideal::unit(&r)).unwrap().equals(&i).unwrap());
        assert!(i
            .quotient(&ideal(&r, &["x0"]))
            .unwrap()
            .equals(&ideal(&r, &["x1"]))
            .unwrap());
    }

    #[test]
    fn saturations() {
        let r = ring(4);
        let i = ideal(&r, &["x0^2", "x0*x1", "x0*x2", "x0*x3"]);
        assert!(!i.is_saturated().unwrap());
        let s = i.saturate_irrelevant().unwrap();
        assert!(s.equals(&ideal(&r, &["x0"])).unwrap());
        assert!(s.is_saturated().unwrap());
        let m = Ideal::irrelevant(&r);
        assert!(i.saturate(&m).unwrap().equals(&s).unwrap());
        let tc = ideal(&r, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]);
        assert!(tc.is_saturated().unwrap());
        assert!(tc.saturate_irrelevant().unwrap().equals(&tc).unwrap());
    }

    #[test]
    fn saturation_by_a_quadric() {
        // (x0 q, x1 q) : q^∞ = (x0, x1)
        let r = ring(4);
        let i = ideal(
            &r,
            &["x0*(x2^2 + x3^2 + x1*x2)", "x1*(x2^2 + x3^2 + x1*x2)"],
        );
        let q = Polynomial::parse(&r, "x2^2 + x3^2 + x1*x2").unwrap();
        assert!(i
            .saturate_by(&q)
            .unwrap()
            .equals(&ideal(&r, &["x0", "x1"]))
            .unwrap());
    }

    #[test]
    fn elimination() {
        let r = ring(4);
        assert!(ideal(&r, &["x0"])
            .eliminate(0)
            .unwrap()
            .equals(&ideal(&r, &["x0"]))
            .unwrap());
        // graph of the twisted cubic's projection
        let i = ideal(&r, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]);
        let e = i.eliminate(1).unwrap();
        assert!(e.equals(&ideal(&r, &["x1*x3 - x2^2"])).unwrap());
    }

    #[test]
    fn membership_and_radical() {
        let r = ring(4);
        let sq = ideal(&r, &["x0^2"]);
        let x0 = Polynomial::parse(&r, "x0").unwrap();
        assert!(!sq.contains(&x0).unwrap());
        assert!(sq.radical_contains(&x0).unwrap());
        assert!(!sq
            .radical_contains(&Polynomial::parse(&r, "x1").unwrap())
            .unwrap());
        let fg = ideal(&r, &["x0^2 + x1^2", "x2^3"]);
        let prod = Polynomial::parse(&r, "(x0^2 + x1^2)*x2^3").unwrap();
        assert!(fg.product(&fg).unwrap().contains(&prod).unwrap());
    }

    #[test]
    fn minor_ideals() {
        let r = ring(4);
        let p = |s: &str| Polynomial::parse(&r, s).unwrap();
        let id = minors(&r, &[vec![p("1"), p("0")], vec![p("0"), p("1")]], 2).unwrap();
        assert!(id.is_unit().unwrap());
        let m = minors(&r, &[vec![p("x0"), p("x1")], vec![p("x2"), p("x3")]], 2).unwrap();
        assert!(m.equals(&ideal(&r, &["x0*x3 - x1*x2"])).unwrap());
        assert!(minors(&r, &[vec![p("x0")]], 2).is_err());
    }

    #[test]
    fn trim_keeps_minimal_generators() {
        let r = ring(4);
        let i = ideal(&r, &["x0*x1", "x0", "x0^2 + x0*x2", "x1"]);
        let t = i.trim().unwrap();
        assert_eq!(t.gens().len(), 2);
        assert!(t.equals(&i).unwrap());
    }

    #[test]
    fn quotient_agrees_with_conductor_oracle() {
        let r = ring(3);
        let i = ideal(&r, &["x0^2*x1 - x2^3", "x1^2*x2", "x0^3"]);
        let j = ideal(&r, &["x0", "x1^2 + x2^2"]);
        let q = i.quotient(&j).unwrap();
        let gb = q.gb().unwrap();
        for t in 0..=6 {
            assert_eq!(
                oracle::lead_term_dim(&gb, t),
                oracle::quotient_dim(i.gens(), j.gens(), 3, t),
                "t = {t}"
            );
        }
    }

    #[test]
    fn rational_field_saturation() {
        let r = Ring::new(RationalField, 3).unwrap();
        let i = Ideal::new(
            &r,
            ["x0^2", "x0*x1", "x0*x2"]
                .iter()
                .map(|s| Polynomial::parse(&r, s).unwrap())
                .collect(),
        )
        .unwrap();
        let s = i.saturate_irrelevant().unwrap();
        assert!(s
            .equals(&Ideal::new(&r, vec![Polynomial::parse(&r, "x0").unwrap()]).unwrap())
            .unwrap());
    }
}
