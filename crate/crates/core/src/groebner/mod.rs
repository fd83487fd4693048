//! Gröbner bases of ideals and of submodules of graded free modules.
//!
//! The engine processes homogeneous input degree by degree. All S-pairs of
//! one degree are reduced together as rows of a sparse Macaulay matrix, with
//! Gebauer–Möller pruning of the pair set. Reduced bases are returned.

mod engine;
mod matrix;
mod module;
mod schreyer;

use std::fmt;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

pub use module::{FreeModule, FreeModuleVector, ModuleOrder, Term};
pub use schreyer::{syzygies, Syzygies};

use crate::error::{ArrError, Result};
use crate::field::Field;
use crate::monomial::{Monomial, MonomialOrder};
use crate::ring::{Polynomial, Ring};

/// Counters describing one or more Gröbner computations.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GbStats {
    pub computations: u64,
    pub pairs_created: u64,
    pub pairs_pruned: u64,
    pub pairs_reduced: u64,
    pub zero_reductions: u64,
    pub matrix_rows: u64,
    pub max_degree: i32,
    pub basis_size: u64,
    pub elapsed_ms: u64,
}

impl GbStats {
    pub fn absorb(&mut self, other: &GbStats) {
        self.computations += other.computations;
        self.pairs_created += other.pairs_created;
        self.pairs_pruned += other.pairs_pruned;
        self.pairs_reduced += other.pairs_reduced;
        self.zero_reductions += other.zero_reductions;
        self.matrix_rows += other.matrix_rows;
        self.max_degree = self.max_degree.max(other.max_degree);
        self.basis_size = self.basis_size.max(other.basis_size);
        self.elapsed_ms += other.elapsed_ms;
    }
}

impl fmt::Display for GbStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} gb runs, {} pairs ({} pruned, {} reduced, {} to zero), {} rows, max degree {}, {} ms",
            self.computations,
            self.pairs_created,
            self.pairs_pruned,
            self.pairs_reduced,
            self.zero_reductions,
            self.matrix_rows,
            self.max_degree,
            self.elapsed_ms
        )
    }
}

/// Resource limits for Gröbner computations. Exceeding any of them yields
/// [`ArrError::BudgetExhausted`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest degree the engine may reach.
    pub max_degree: Option<i32>,
    /// Pairs reduced per computation.
    pub max_pairs: Option<u64>,
    pub deadline: Option<Instant>,
    /// Iteration guard for saturation by iterated quotients.
    pub max_saturation_steps: usize,
    /// Re-check the containment identities of intersections, quotients
    /// and saturations by membership after every call.
    pub check_identities: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_degree: None,
            max_pairs: None,
            deadline: None,
            max_saturation_steps: 50,
            check_identities: cfg!(debug_assertions),
        }
    }
}

impl Budget {
    pub fn with_seconds(mut self, secs: f64) -> Self {
        self.deadline = Some(Instant::now() + Duration::from_secs_f64(secs));
        self
    }

    pub(crate) fn check_time(&self, stats: &GbStats) -> Result<()> {
        if let Some(d) = self.deadline {
            if Instant::now() > d {
                return Err(ArrError::BudgetExhausted {
                    reason: "wall-clock limit".into(),
                    stats: stats.clone(),
                });
            }
        }
        Ok(())
    }
}

/// Budget plus an accumulator of statistics, shared by all rings derived
/// from one base ring.
#[derive(Debug, Default)]
pub struct ComputeEnv {
    pub budget: Budget,
    totals: Mutex<GbStats>,
}

impl ComputeEnv {
    pub fn new(budget: Budget) -> Self {
        ComputeEnv {
            budget,
            totals: Mutex::new(GbStats::default()),
        }
    }

    pub fn record(&self, stats: &GbStats) {
        self.totals.lock().expect("stats lock").absorb(stats);
    }

    pub fn totals(&self) -> GbStats {
        self.totals.lock().expect("stats lock").clone()
    }
}

/// A Gröbner basis of a submodule of a free module (an ideal when the
/// module has rank one).
#[derive(Clone, Debug)]
pub struct GroebnerBasis<K: Field> {
    module: Arc<FreeModule<K>>,
    elements: Vec<FreeModuleVector<K>>,
    reduced: bool,
    stats: GbStats,
    essential: Vec<usize>,
}

impl<K: Field> GroebnerBasis<K> {
    /// Wraps vectors already known to form a Gröbner basis (not necessarily
    /// reduced), such as Schreyer syzygies.
    pub fn assume(module: &Arc<FreeModule<K>>, elements: Vec<FreeModuleVector<K>>) -> Self {
        GroebnerBasis {
            module: module.clone(),
            elements,
            reduced: false,
            stats: GbStats::default(),
            essential: Vec::new(),
        }
    }

    pub fn module(&self) -> &Arc<FreeModule<K>> {
        &self.module
    }

    pub fn ring(&self) -> &Arc<Ring<K>> {
        self.module.ring()
    }

    pub fn elements(&self) -> &[FreeModuleVector<K>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn order(&self) -> &ModuleOrder {
        self.module.order()
    }

    pub fn stats(&self) -> &GbStats {
        &self.stats
    }

    /// Indices of input generators forming a minimal generating set (for
    /// homogeneous input); empty for bases built with [`GroebnerBasis::assume`].
    pub fn essential_inputs(&self) -> &[usize] {
        &self.essential
    }

    /// Elements as polynomials; the module must have rank one.
    pub fn polynomials(&self) -> Vec<Polynomial<K>> {
        assert_eq!(self.module.rank(), 1, "not an ideal basis");
        self.elements.iter().map(|v| v.component(0)).collect()
    }

    pub fn lead_terms(&self) -> Vec<(Monomial, usize)> {
        self.elements
            .iter()
            .map(|v| v.lead().expect("nonzero"))
            .collect()
    }

    /// Whether the basis generates the unit ideal.
    pub fn is_unit(&self) -> bool {
        self.module.rank() == 1
            && self
                .elements
                .iter()
                .any(|v| v.lead().map(|l| l.0.is_one()).unwrap_or(false))
    }

    pub fn normal_form(&self, f: &FreeModuleVector<K>) -> Result<FreeModuleVector<K>> {
        normal_form(f, self)
    }

    pub fn reduce_polynomial(&self, f: &Polynomial<K>) -> Result<Polynomial<K>> {
        let v = FreeModuleVector::from_polynomial(&self.module, f)?;
        normal_form(&v, self)?.component(0).reorder(f.ring())
    }

    pub fn contains(&self, f: &Polynomial<K>) -> Result<bool> {
        Ok(self.reduce_polynomial(f)?.is_zero())
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens` under `order`.
pub fn groebner_basis<K: Field>(
    gens: &[Polynomial<K>],
    order: MonomialOrder,
) -> Result<GroebnerBasis<K>> {
    let ring = gens.first().map(|g| g.ring().clone()).ok_or_else(|| {
        ArrError::Precondition("empty generator list; use groebner_basis_in".into())
    })?;
    groebner_basis_in(&ring, gens, order)
}

/// As [`groebner_basis`], with an explicit ring so that empty input is allowed.
pub fn groebner_basis_in<K: Field>(
    ring: &Arc<Ring<K>>,
    gens: &[Polynomial<K>],
    order: MonomialOrder,
) -> Result<GroebnerBasis<K>> {
    let r = ring.with_monomial_order(order);
    let module = Arc::new(FreeModule::new(&r, vec![0], ModuleOrder::Pot));
    let vecs = gens
        .iter()
        .map(|g| FreeModuleVector::from_polynomial(&module, g))
        .collect::<Result<Vec<_>>>()?;
    module_groebner_basis(&module, &vecs)
}

/// Reduced Gröbner basis of the submodule generated by `vectors`.
pub fn module_groebner_basis<K: Field>(
    module: &Arc<FreeModule<K>>,
    vectors: &[FreeModuleVector<K>],
) -> Result<GroebnerBasis<K>> {
    let start = Instant::now();
    let mut input = Vec::with_capacity(vectors.len());
    for v in vectors {
        if !Arc::ptr_eq(v.module(), module) && !v.module().same_as(module) {
            return Err(ArrError::ContextMismatch(
                "vector from another free module".into(),
            ));
        }
        input.push(v.terms().to_vec());
    }
    let budget = module.ring().budget().clone();
    let result = engine::compute(module, input, &budget);
    let engine::EngineOutput {
        basis: elements,
        mut stats,
        essential,
    } = match result {
        Ok(x) => x,
        Err(e) => {
            if let ArrError::BudgetExhausted { stats, .. } = &e {
                module.ring().env().record(stats);
            }
            return Err(e);
        }
    };
    stats.elapsed_ms = start.elapsed().as_millis() as u64;
    stats.computations = 1;
    stats.basis_size = elements.len() as u64;
    module.ring().env().record(&stats);
    log::debug!("groebner basis: {} elements; {}", elements.len(), stats);
    let elements = elements
        .into_iter()
        .map(|t| FreeModuleVector::from_sorted(module, t))
        .collect();
    Ok(GroebnerBasis {
        module: module.clone(),
        elements,
        reduced: true,
        stats,
        essential,
    })
}

/// Remainder of `f` modulo `gb`: no term is divisible by a lead term.
pub fn normal_form<K: Field>(
    f: &FreeModuleVector<K>,
    gb: &GroebnerBasis<K>,
) -> Result<FreeModuleVector<K>> {
    let module = gb.module();
    let f = f.convert_to(module)?;
    let basis: Vec<&[Term<K>]> = gb.elements.iter().map(|e| e.terms()).collect();
    let terms = matrix::reduce_vectors(module, &basis, vec![f.terms().to_vec()], false)?
        .pop()
        .expect("one row")
        .0;
    Ok(FreeModuleVector::from_sorted(module, terms))
}

/// Checks that every S-pair of the basis reduces to zero.
pub fn buchberger_criterion_holds<K: Field>(gb: &GroebnerBasis<K>) -> Result<bool> {
    let module = gb.module();
    let k = module.ring().field().clone();
    let els = gb.elements();
    let basis: Vec<&[Term<K>]> = els.iter().map(|e| e.terms()).collect();
    let mut spolys = Vec::new();
    for i in 0..els.len() {
        for j in i + 1..els.len() {
            let (li, ci) = els[i].lead().expect("nonzero");
            let (lj, cj) = els[j].lead().expect("nonzero");
            if ci != cj {
                continue;
            }
            let l = li.lcm(&lj);
            let a = els[i].mul_term(
                &li.div(&l).unwrap(),
                &k.inv(els[i].lead_coef().unwrap()).unwrap(),
            )?;
            let b = els[j].mul_term(
                &lj.div(&l).unwrap(),
                &k.inv(els[j].lead_coef().unwrap()).unwrap(),
            )?;
            spolys.push(a.sub(&b)?.terms().to_vec());
        }
    }
    for part in spolys.chunks(64) {
        let out = matrix::reduce_vectors(module, &basis, part.to_vec(), false)?;
        if out.iter().any(|(t, _)| !t.is_empty()) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, RationalField};

    fn ring() -> Arc<Ring<RationalField>> {
        Ring::new(RationalField, 4).unwrap()
    }

    fn polys<K: Field>(r: &Arc<Ring<K>>, s: &[&str]) -> Vec<Polynomial<K>> {
        s.iter().map(|x| Polynomial::parse(r, x).unwrap()).collect()
    }

    #[test]
    fn linear_example() {
        let r = ring();
        let gb = groebner_basis(&polys(&r, &["x0", "x0 + x1"]), MonomialOrder::GrevLex).unwrap();
        let mut got: Vec<String> = gb.polynomials().iter().map(|p| p.to_string()).collect();
        got.sort();
        assert_eq!(got, vec!["x0", "x1"]);
    }

    #[test]
    fn twisted_cubic_is_already_a_basis() {
        let r = ring();
        let g = polys(&r, &["x0*x2 - x1^2", "x1*x2 - x0*x3", "x1*x3 - x2^2"]);
        let gb = groebner_basis(&g, MonomialOrder::GrevLex).unwrap();
        assert_eq!(gb.len(), 3);
        for p in &g {
            assert!(gb.polynomials().iter().any(|q| q.is_proportional(p)));
        }
        assert!(buchberger_criterion_holds(&gb).unwrap());
    }

    #[test]
    fn principal_ideal_gives_monic_generator() {
        let r = ring();
        let f = Polynomial::parse(&r, "3*x0^2 - x1*x3").unwrap();
        let gb = groebner_basis(std::slice::from_ref(&f), MonomialOrder::GrevLex).unwrap();
        assert_eq!(gb.polynomials(), vec![f.monic()]);
    }

    #[test]
    fn normal_forms() {
        let r = ring();
        let f = Polynomial::parse(&r, "x0^2*x1 - x3^3").unwrap();
        let gb = groebner_basis(std::slice::from_ref(&f), MonomialOrder::GrevLex).unwrap();
        assert!(gb.reduce_polynomial(&f).unwrap().is_zero());

        let lex = groebner_basis(&polys(&r, &["x0 - x1"]), MonomialOrder::Lex).unwrap();
        let nf = lex
            .reduce_polynomial(&Polynomial::parse(&r, "x0^2").unwrap())
            .unwrap();
        assert_eq!(nf, Polynomial::parse(&r, "x1^2").unwrap());

        let m = groebner_basis(
            &polys(&r, &["x0", "x1", "x2", "x3"]),
            MonomialOrder::GrevLex,
        )
        .unwrap();
        assert_eq!(
            m.reduce_polynomial(&Polynomial::one(&r)).unwrap(),
            Polynomial::one(&r)
        );
    }

    #[test]
    fn shuffled_generators_give_identical_bases() {
        let r = Ring::new(PrimeField::default(), 4).unwrap();
        let g = polys(
            &r,
            &[
                "x0^2 + x1*x2 - 3*x3^2",
                "x1^2 - x0*x3 + x2^2",
                "x0*x1*x2 - x3^3 + x1^3",
                "x2^3 - x0^2*x3",
            ],
        );
        let a = groebner_basis(&g, MonomialOrder::GrevLex).unwrap();
        let mut rev = g.clone();
        rev.reverse();
        let b = groebner_basis(&rev, MonomialOrder::GrevLex).unwrap();
        assert_eq!(a.polynomials(), b.polynomials());
        assert!(buchberger_criterion_holds(&a).unwrap());
    }

    #[test]
    fn koszul_syzygy() {
        let r = ring();
        let g = polys(&r, &["x0^2 + x1^2", "x2^2 - x3*x0"]);
        let gb = groebner_basis(&g, MonomialOrder::GrevLex).unwrap();
        let syz = syzygies(&gb).unwrap();
        assert_eq!(syz.vectors.len(), 1);
        let v = syz.vectors[0].components();
        let gens = gb.polynomials();
        let s = v[0]
            .mul(&gens[0])
            .unwrap()
            .add(&v[1].mul(&gens[1]).unwrap())
            .unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn twisted_cubic_linear_syzygies() {
        let r = ring();
        let g = polys(&r, &["x0*x2 - x1^2", "x1*x2 - x0*x3", "x1*x3 - x2^2"]);
        let gb = groebner_basis(&g, MonomialOrder::GrevLex).unwrap();
        let syz = syzygies(&gb).unwrap();
        assert_eq!(syz.vectors.len(), 2);
        let gens = gb.polynomials();
        for v in &syz.vectors {
            assert_eq!(v.degree(), Some(3));
            let mut s = Polynomial::zero(&r);
            for (c, p) in v.components().iter().enumerate() {
                s = s.add(&p.mul(&gens[c]).unwrap()).unwrap();
            }
            assert!(s.is_zero());
        }
        let second = syzygies(&syz.as_basis()).unwrap();
        assert!(second.vectors.is_empty());
    }

    #[test]
    fn unit_vectors_are_a_module_basis() {
        let r = ring();
        let f = Arc::new(FreeModule::new(&r, vec![0, 0], ModuleOrder::Pot));
        let e = vec![FreeModuleVector::unit(&f, 0), FreeModuleVector::unit(&f, 1)];
        let gb = module_groebner_basis(&f, &e).unwrap();
        assert_eq!(gb.len(), 2);
    }

    #[test]
    fn budget_is_enforced() {
        let r = Ring::new(PrimeField::default(), 4)
            .unwrap()
            .with_budget(Budget {
                max_degree: Some(3),
                ..Budget::default()
            });
        let g = polys(
            &r,
            &[
                "x0^2 + x1*x2 - 3*x3^2",
                "x1^2 - x0*x3 + x2^2",
                "x0*x1 - x3^2",
            ],
        );
        let err = groebner_basis(&g, MonomialOrder::GrevLex).unwrap_err();
        assert!(err.is_budget());
    }
}
