//! Polynomial rings `K[x0..xn]` and sparse polynomials over them.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{ArrError, Result};
use crate::field::Field;
use crate::groebner::{Budget, ComputeEnv};
use crate::monomial::{Grading, Monomial, MonomialOrder, MAX_VARS};

/// Names reserved for auxiliary variables introduced by elimination and
/// saturation; rejected in user input.
pub const RESERVED_NAMES: [&str; 2] = ["t0", "t1"];

/// A graded polynomial ring: coefficient field, variable count, default
/// monomial order and variable weights. The attached [`ComputeEnv`] holds the
/// budget and statistics shared by every ring derived from this one.
#[derive(Clone, Debug)]
pub struct Ring<K: Field> {
    field: K,
    names: Vec<String>,
    order: MonomialOrder,
    grading: Grading,
    env: Arc<ComputeEnv>,
}

impl<K: Field> PartialEq for Ring<K> {
    fn eq(&self, other: &Self) -> bool {
        self.compatible(other) && self.order == other.order
    }
}

impl<K: Field> Ring<K> {
    /// `K[x0..x{nvars-1}]` with grevlex and the standard grading.
    pub fn new(field: K, nvars: usize) -> Result<Arc<Self>> {
        Ring::with_order(field, nvars, MonomialOrder::GrevLex)
    }

    pub fn with_order(field: K, nvars: usize, order: MonomialOrder) -> Result<Arc<Self>> {
        if !(2..=MAX_VARS).contains(&nvars) {
            return Err(ArrError::Precondition(format!(
                "variable count {nvars} outside 2..={MAX_VARS}"
            )));
        }
        let names = (0..nvars).map(|i| format!("x{i}")).collect();
        Ok(Arc::new(Ring {
            field,
            names,
            order,
            grading: Grading::standard(),
            env: Arc::new(ComputeEnv::default()),
        }))
    }

    /// Same ring with a fresh environment carrying `budget`.
    pub fn with_budget(self: &Arc<Self>, budget: Budget) -> Arc<Self> {
        Arc::new(Ring {
            env: Arc::new(ComputeEnv::new(budget)),
            ..(**self).clone()
        })
    }

    /// Auxiliary ring with explicit names, order and weights, sharing this
    /// ring's field and environment.
    pub fn derived(
        &self,
        names: Vec<String>,
        order: MonomialOrder,
        grading: Grading,
    ) -> Result<Arc<Self>> {
        if names.is_empty() || names.len() > MAX_VARS {
            return Err(ArrError::Precondition(format!(
                "{} variables unsupported",
                names.len()
            )));
        }
        Ok(Arc::new(Ring {
            field: self.field.clone(),
            names,
            order,
            grading,
            env: self.env.clone(),
        }))
    }

    pub fn env(&self) -> &Arc<ComputeEnv> {
        &self.env
    }

    pub fn budget(&self) -> &Budget {
        &self.env.budget
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    /// The projective dimension `n` of `P^n = Proj K[x0..xn]`.
    pub fn proj_dim(&self) -> usize {
        self.names.len() - 1
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn is_standard_graded(&self) -> bool {
        self.grading.standard
    }

    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.cmp(a, b, &self.grading, self.nvars())
    }

    #[inline]
    pub fn wdeg(&self, m: &Monomial) -> u32 {
        m.weighted_degree(&self.grading)
    }

    /// Same ring with another monomial order.
    pub fn with_monomial_order(self: &Arc<Self>, order: MonomialOrder) -> Arc<Self> {
        if order == self.order {
            return self.clone();
        }
        Arc::new(Ring {
            order,
            ..(**self).clone()
        })
    }

    /// Same variables and field; checks used before mixing polynomials.
    pub fn compatible(&self, other: &Ring<K>) -> bool {
        self.field == other.field && self.names == other.names && self.grading == other.grading
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// A sparse polynomial; terms are strictly decreasing in the ring's order
/// and carry nonzero coefficients.
#[derive(Clone)]
pub struct Polynomial<K: Field> {
    ring: Arc<Ring<K>>,
    terms: Vec<(Monomial, K::Elem)>,
}

impl<K: Field> PartialEq for Polynomial<K> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<K: Field> Eq for Polynomial<K> {}

impl<K: Field> fmt::Debug for Polynomial<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

fn check_same<K: Field>(a: &Arc<Ring<K>>, b: &Arc<Ring<K>>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a.compatible(b) {
        Ok(())
    } else {
        Err(ArrError::ContextMismatch(format!(
            "{:?} vs {:?}",
            a.names, b.names
        )))
    }
}

impl<K: Field> Polynomial<K> {
    pub fn zero(ring: &Arc<Ring<K>>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<Ring<K>>, c: K::Elem) -> Self {
        if ring.field.is_zero(&c) {
            return Polynomial::zero(ring);
        }
        Polynomial {
            ring: ring.clone(),
            terms: vec![(Monomial::ONE, c)],
        }
    }

    pub fn one(ring: &Arc<Ring<K>>) -> Self {
        Polynomial::constant(ring, ring.field.one())
    }

    pub fn var(ring: &Arc<Ring<K>>, i: usize) -> Self {
        assert!(i < ring.nvars(), "variable index out of range");
        Polynomial {
            ring: ring.clone(),
            terms: vec![(Monomial::var(i), ring.field.one())],
        }
    }

    pub fn monomial(ring: &Arc<Ring<K>>, m: Monomial, c: K::Elem) -> Self {
        Polynomial::from_terms(ring, vec![(m, c)])
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates and
    /// dropping zeros.
    pub fn from_terms(ring: &Arc<Ring<K>>, mut terms: Vec<(Monomial, K::Elem)>) -> Self {
        let k = &ring.field;
        terms.sort_by(|a, b| ring.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, K::Elem)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = k.add(&last.1, &c),
                _ => {
                    if let Some(last) = out.last() {
                        if k.is_zero(&last.1) {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if let Some(last) = out.last() {
            if k.is_zero(&last.1) {
                out.pop();
            }
        }
        Polynomial {
            ring: ring.clone(),
            terms: out,
        }
    }

    /// Wraps terms that are already sorted, merged and nonzero.
    pub(crate) fn from_sorted_terms(ring: &Arc<Ring<K>>, terms: Vec<(Monomial, K::Elem)>) -> Self {
        debug_assert!(terms
            .windows(2)
            .all(|w| ring.cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<Ring<K>> {
        &self.ring
    }

    pub fn field(&self) -> &K {
        &self.ring.field
    }

    pub fn terms(&self) -> &[(Monomial, K::Elem)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, K::Elem)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Same as [`Polynomial::is_zero`].
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn lead_monomial(&self) -> Option<Monomial> {
        self.terms.first().map(|t| t.0)
    }

    pub fn lead_coef(&self) -> Option<&K::Elem> {
        self.terms.first().map(|t| &t.1)
    }

    /// Largest total degree of a term; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| self.ring.wdeg(m)).max()
    }

    /// Common degree of all terms, or `None` for zero and inhomogeneous input.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.ring.wdeg(&self.terms.first()?.0);
        self.terms
            .iter()
            .all(|(m, _)| self.ring.wdeg(m) == d)
            .then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Splits into homogeneous components, lowest degree first.
    pub fn homogeneous_parts(&self) -> Vec<Polynomial<K>> {
        let mut by_deg: std::collections::BTreeMap<u32, Vec<(Monomial, K::Elem)>> =
            Default::default();
        for (m, c) in &self.terms {
            by_deg
                .entry(self.ring.wdeg(m))
                .or_default()
                .push((*m, c.clone()));
        }
        by_deg
            .into_values()
            .map(|t| Polynomial::from_sorted_terms(&self.ring, t))
            .collect()
    }

    pub fn coefficient(&self, m: &Monomial) -> K::Elem {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.ring.field.zero())
    }

    pub fn add(&self, other: &Polynomial<K>) -> Result<Polynomial<K>> {
        check_same(&self.ring, &other.ring)?;
        Ok(self.merge(other, false))
    }

    pub fn sub(&self, other: &Polynomial<K>) -> Result<Polynomial<K>> {
        check_same(&self.ring, &other.ring)?;
        Ok(self.merge(other, true))
    }

    fn merge(&self, other: &Polynomial<K>, negate: bool) -> Polynomial<K> {
        let k = &self.ring.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let conv = |c: &K::Elem| if negate { k.neg(c) } else { c.clone() };
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match self.ring.cmp(&a.0, &b.0) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b.0, conv(&b.1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        k.sub(&a.1, &b.1)
                    } else {
                        k.add(&a.1, &b.1)
                    };
                    if !k.is_zero(&c) {
                        out.push((a.0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, c)| (*m, conv(c))));
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn neg(&self) -> Polynomial<K> {
        let k = &self.ring.field;
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, k.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: &K::Elem) -> Polynomial<K> {
        let k = &self.ring.field;
        if k.is_zero(c) {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (*m, k.mul(a, c))).collect(),
        }
    }

    /// Multiplication by `c * m`; order is preserved by multiplicativity.
    pub fn mul_term(&self, m: &Monomial, c: &K::Elem) -> Result<Polynomial<K>> {
        let k = &self.ring.field;
        if k.is_zero(c) {
            return Ok(Polynomial::zero(&self.ring));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (t, a) in &self.terms {
            terms.push((t.checked_mul(m)?, k.mul(a, c)));
        }
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn mul(&self, other: &Polynomial<K>) -> Result<Polynomial<K>> {
        check_same(&self.ring, &other.ring)?;
        let k = &self.ring.field;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        let mut acc: HashMap<Monomial, K::Elem> = HashMap::with_capacity(self.len() * other.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let m = a.checked_mul(b)?;
                let p = k.mul(ca, cb);
                match acc.get_mut(&m) {
                    Some(v) => *v = k.add(v, &p),
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !k.is_zero(c)).collect();
        Ok(Polynomial::from_terms(&self.ring, terms))
    }

    pub fn pow(&self, e: u32) -> Result<Polynomial<K>> {
        let mut acc = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn product(ring: &Arc<Ring<K>>, factors: &[Polynomial<K>]) -> Result<Polynomial<K>> {
        let mut acc = Polynomial::one(ring);
        for f in factors {
            acc = acc.mul(f)?;
        }
        Ok(acc)
    }

    /// Scales so that the leading coefficient is one.
    pub fn monic(&self) -> Polynomial<K> {
        match self.lead_coef() {
            None => self.clone(),
            Some(c) => {
                let inv = self.ring.field.inv(c).expect("nonzero lead");
                self.scale(&inv)
            }
        }
    }

    /// Whether `self = c * other` for a nonzero scalar `c`.
    pub fn is_proportional(&self, other: &Polynomial<K>) -> bool {
        if self.len() != other.len() || self.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.monic() == other.monic()
    }

    /// Formal partial derivative with respect to `x_i`.
    pub fn partial_derivative(&self, i: usize) -> Result<Polynomial<K>> {
        if i >= self.ring.nvars() {
            return Err(ArrError::Precondition(format!("no variable x{i}")));
        }
        let k = &self.ring.field;
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            if k.int_vanishes(e as u64) {
                return Err(ArrError::CharacteristicCollision(format!(
                    "exponent {e} of x{i} vanishes in characteristic {}",
                    k.characteristic()
                )));
            }
            terms.push((m.with_exp(i, e - 1), k.mul(c, &k.from_i64(e as i64))));
        }
        // lowering one exponent can reorder terms under non-graded orders
        Ok(Polynomial::from_terms(&self.ring, terms))
    }

    pub fn gradient(&self) -> Result<Vec<Polynomial<K>>> {
        (0..self.ring.nvars())
            .map(|i| self.partial_derivative(i))
            .collect()
    }

    /// Euler's identity `d*f = sum x_i df/dx_i` for homogeneous `f` of degree `d`.
    pub fn euler_check(&self) -> Result<bool> {
        let d = self.homogeneous_degree().ok_or_else(|| {
            ArrError::Precondition("Euler check needs a nonzero homogeneous form".into())
        })?;
        let k = &self.ring.field;
        if d > 0 && k.int_vanishes(d as u64) {
            return Err(ArrError::CharacteristicCollision(format!(
                "degree {d} vanishes in characteristic {}",
                k.characteristic()
            )));
        }
        let mut rhs = Polynomial::zero(&self.ring);
        for i in 0..self.ring.nvars() {
            let di = self.partial_derivative(i)?;
            let xi = Polynomial::var(&self.ring, i);
            rhs = rhs.add(&xi.mul(&di)?)?;
        }
        Ok(self.scale(&k.from_i64(d as i64)) == rhs)
    }

    /// Substitutes `x_target -> x_target + a * x_source`.
    pub fn shear(&self, target: usize, source: usize, a: &K::Elem) -> Result<Polynomial<K>> {
        let k = &self.ring.field;
        if k.is_zero(a) || self.is_zero() {
            return Ok(self.clone());
        }
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let q = m.exp(target);
            // (x_t + a x_s)^q = sum_r C(q,r) a^r x_s^r x_t^(q-r)
            let mut binom = k.one();
            let mut apow = k.one();
            for r in 0..=q {
                let mon = m
                    .with_exp(target, q - r)
                    .with_exp(source, m.exp(source) + r);
                terms.push((mon, k.mul(c, &k.mul(&binom, &apow))));
                if r < q {
                    binom = k.mul(&binom, &k.from_i64((q - r) as i64));
                    let inv = k.inv(&k.from_i64((r + 1) as i64)).ok_or_else(|| {
                        ArrError::CharacteristicCollision(format!("binomial denominator {}", r + 1))
                    })?;
                    binom = k.mul(&binom, &inv);
                    apow = k.mul(&apow, a);
                }
            }
            if m.exp(source) + q > crate::monomial::MAX_EXPONENT {
                return Err(ArrError::ExponentOverflow("shear".into()));
            }
        }
        Ok(Polynomial::from_terms(&self.ring, terms))
    }

    /// Substitutes `x_var -> g`.
    pub fn substitute_var(&self, var: usize, g: &Polynomial<K>) -> Result<Polynomial<K>> {
        check_same(&self.ring, &g.ring)?;
        let mut by_pow: std::collections::BTreeMap<u32, Vec<(Monomial, K::Elem)>> =
            Default::default();
        for (m, c) in &self.terms {
            by_pow
                .entry(m.exp(var))
                .or_default()
                .push((m.without_var(var), c.clone()));
        }
        // Horner in g from the highest power down
        let mut acc = Polynomial::zero(&self.ring);
        let top = by_pow.keys().next_back().copied().unwrap_or(0);
        for e in (0..=top).rev() {
            acc = acc.mul(g)?;
            if let Some(t) = by_pow.remove(&e) {
                acc = acc.add(&Polynomial::from_terms(&self.ring, t))?;
            }
        }
        Ok(acc)
    }

    /// Moves the polynomial into `target`, sending variable `i` to
    /// `var_map[i]`. Variables mapped to `None` must not occur.
    pub fn map_vars(
        &self,
        target: &Arc<Ring<K>>,
        var_map: &[Option<usize>],
    ) -> Result<Polynomial<K>> {
        if self.ring.field != target.field {
            return Err(ArrError::ContextMismatch(
                "different coefficient fields".into(),
            ));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.nvars()];
            for (i, slot) in var_map.iter().enumerate() {
                let e = m.exp(i);
                match slot {
                    Some(j) => exps[*j] += e,
                    None if e > 0 => {
                        return Err(ArrError::ContextMismatch(format!(
                            "variable {} has no image",
                            self.ring.names[i]
                        )))
                    }
                    None => {}
                }
            }
            terms.push((Monomial::new(&exps)?, c.clone()));
        }
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Re-sorts the terms for another ring with the same variables (for
    /// example a different monomial order).
    pub fn reorder(&self, target: &Arc<Ring<K>>) -> Result<Polynomial<K>> {
        check_same(&self.ring, target)?;
        if Arc::ptr_eq(&self.ring, target) || self.ring.order == target.order {
            return Ok(Polynomial {
                ring: target.clone(),
                terms: self.terms.clone(),
            });
        }
        Ok(Polynomial::from_terms(target, self.terms.clone()))
    }

    /// Highest power of `x_var` dividing every term.
    pub fn var_content(&self, var: usize) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.exp(var))
            .min()
            .unwrap_or(0)
    }

    /// Exact division by `x_var^e`; every term must be divisible.
    pub fn divide_var_power(&self, var: usize, e: u32) -> Polynomial<K> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                debug_assert!(m.exp(var) >= e);
                (m.with_exp(var, m.exp(var) - e), c.clone())
            })
            .collect();
        Polynomial::from_terms(&self.ring, terms)
    }

    pub fn parse(ring: &Arc<Ring<K>>, src: &str) -> Result<Polynomial<K>> {
        Parser::new(ring, src, &|_| None).parse_all()
    }

    /// Parses with extra identifiers resolved by `lookup`.
    pub fn parse_with(
        ring: &Arc<Ring<K>>,
        src: &str,
        lookup: &dyn Fn(&str) -> Option<Polynomial<K>>,
    ) -> Result<Polynomial<K>> {
        Parser::new(ring, src, lookup).parse_all()
    }
}

impl<K: Field> fmt::Display for Polynomial<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let k = &self.ring.field;
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let mut s = k.format(c);
            let negative = s.starts_with('-');
            if negative {
                s.remove(0);
            }
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            let mut factors = Vec::new();
            if s != "1" || m.is_one() {
                factors.push(s);
            }
            for i in 0..self.ring.nvars() {
                match m.exp(i) {
                    0 => {}
                    1 => factors.push(self.ring.names[i].clone()),
                    e => factors.push(format!("{}^{e}", self.ring.names[i])),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Recursive-descent parser for `3*x0^2*x1 - x2*x3^2 + 5/2`.
struct Parser<'a, K: Field> {
    ring: &'a Arc<Ring<K>>,
    chars: Vec<char>,
    pos: usize,
    lookup: &'a dyn Fn(&str) -> Option<Polynomial<K>>,
}

impl<'a, K: Field> Parser<'a, K> {
    fn new(
        ring: &'a Arc<Ring<K>>,
        src: &str,
        lookup: &'a dyn Fn(&str) -> Option<Polynomial<K>>,
    ) -> Self {
        Parser {
            ring,
            chars: src.chars().collect(),
            pos: 0,
            lookup,
        }
    }

    fn error(&self, msg: impl Into<String>) -> ArrError {
        let mut line = 1;
        let mut col = 1;
        for &c in &self.chars[..self.pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        ArrError::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<Polynomial<K>> {
        let p = self.expr()?;
        if let Some(c) = self.peek() {
            return Err(self.error(format!("unexpected `{c}`")));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<Polynomial<K>> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial<K>> {
        let mut acc = self.power()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = acc.mul(&self.power()?)?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Polynomial<K>> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.error("exponent too large"))?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits"))
    }

    fn atom(&mut self) -> Result<Polynomial<K>> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let den = if self.peek() == Some('/') {
                    self.pos += 1;
                    self.skip_ws();
                    self.integer()?
                } else {
                    BigInt::from(1)
                };
                let at = self.pos;
                let c = self.ring.field.from_ratio(&num, &den).map_err(|e| {
                    self.pos = at;
                    match e {
                        ArrError::CharacteristicCollision(m) => {
                            ArrError::CharacteristicCollision(m)
                        }
                        other => self.error(other.to_string()),
                    }
                })?;
                Ok(Polynomial::constant(self.ring, c))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < self.chars.len()
                    && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                if RESERVED_NAMES.contains(&name.as_str()) {
                    self.pos = start;
                    return Err(self.error(format!("`{name}` is reserved for auxiliary variables")));
                }
                if let Some(i) = self.ring.var_index(&name) {
                    return Ok(Polynomial::var(self.ring, i));
                }
                if let Some(p) = (self.lookup)(&name) {
                    return p.reorder(self.ring);
                }
                self.pos = start;
                Err(self.error(format!("unknown identifier `{name}`")))
            }
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, RationalField};

    fn q4() -> Arc<Ring<RationalField>> {
        Ring::new(RationalField, 4).unwrap()
    }

    fn p(r: &Arc<Ring<RationalField>>, s: &str) -> Polynomial<RationalField> {
        Polynomial::parse(r, s).unwrap()
    }

    #[test]
    fn cancellation_and_difference_of_squares() {
        let r = q4();
        assert_eq!(p(&r, "x0 + x1").add(&p(&r, "-x1")).unwrap(), p(&r, "x0"));
        let prod = p(&r, "x0 + x1").mul(&p(&r, "x0 - x1")).unwrap();
        assert_eq!(prod, p(&r, "x0^2 - x1^2"));
    }

    #[test]
    fn scaling_mod_five() {
        let r = Ring::new(PrimeField::new(5).unwrap(), 4).unwrap();
        let f = Polynomial::parse(&r, "2*x0").unwrap();
        assert_eq!(f.scale(&3), Polynomial::parse(&r, "x0").unwrap());
    }

    #[test]
    fn derivatives() {
        let r = q4();
        assert_eq!(p(&r, "x0^2").partial_derivative(0).unwrap(), p(&r, "2*x0"));
        assert!(p(&r, "x0^2").partial_derivative(1).unwrap().is_zero());
        assert_eq!(
            p(&r, "x0*x1*x2").partial_derivative(0).unwrap(),
            p(&r, "x1*x2")
        );
    }

    #[test]
    fn derivative_collision_is_an_error() {
        let r = Ring::new(PrimeField::new(3).unwrap(), 4).unwrap();
        let f = Polynomial::parse(&r, "x0^3 + x1^3").unwrap();
        assert!(matches!(
            f.partial_derivative(0),
            Err(ArrError::CharacteristicCollision(_))
        ));
        assert!(matches!(
            f.euler_check(),
            Err(ArrError::CharacteristicCollision(_))
        ));
    }

    #[test]
    fn euler_small_cases() {
        let r = q4();
        assert!(p(&r, "x0^2").euler_check().unwrap());
        assert!(p(&r, "x0*x1*x2*x3").euler_check().unwrap());
        assert!(p(&r, "x0 + x1^2").euler_check().is_err());
    }

    #[test]
    fn parse_print_roundtrip() {
        let r = q4();
        let f = p(&r, "3*x0^2*x1 - x2*x3^2 + 5");
        assert_eq!(f.to_string(), "3*x0^2*x1 - x2*x3^2 + 5");
        let g = p(&r, "1/2*x0 - 3/4*x1");
        assert_eq!(g.to_string(), "1/2*x0 - 3/4*x1");
        assert_eq!(p(&r, &g.to_string()), g);
        assert_eq!(p(&r, "(x0+x1)^2"), p(&r, "x0^2 + 2*x0*x1 + x1^2"));
    }

    #[test]
    fn parse_errors_have_positions() {
        let r = q4();
        match Polynomial::parse(&r, "x0 +\n  t0") {
            Err(ArrError::Parse { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(Polynomial::parse(&r, "x9").is_err());
        assert!(Polynomial::parse(&r, "x0 +").is_err());
        assert!(Polynomial::parse(&r, "1/0").is_err());
    }

    #[test]
    fn shear_matches_substitution() {
        let r = q4();
        let f = p(&r, "x0^3*x3 - 2*x1*x3^2 + x2^2*x3^2");
        let a = RationalField.from_i64(3);
        let sheared = f.shear(3, 1, &a).unwrap();
        let direct = f.substitute_var(3, &p(&r, "x3 + 3*x1")).unwrap();
        assert_eq!(sheared, direct);
    }

    #[test]
    fn homogeneity() {
        let r = q4();
        assert_eq!(p(&r, "x0^2 - x1*x3").homogeneous_degree(), Some(2));
        assert_eq!(p(&r, "x0^2 - x1").homogeneous_degree(), None);
        assert_eq!(p(&r, "x0^2 - x1 + 1").homogeneous_parts().len(), 3);
    }
}
