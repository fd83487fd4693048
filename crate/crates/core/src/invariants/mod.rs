//! Numerical invariants of graded ideals: Hilbert data, Betti tables,
//! ACM tests, Rao modules.

pub mod hilbert;
pub mod resolution;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

pub use hilbert::{format_polynomial, HilbertData};
pub use resolution::{minimal_betti, BettiTable, Resolution};

use crate::error::{ArrError, Result};
use crate::field::Field;
use crate::groebner::{
    module_groebner_basis, FreeModule, FreeModuleVector, GroebnerBasis, ModuleOrder,
};
use crate::idealops::{minors, Ideal};
use crate::monomial::{Monomial, MonomialOrder};
use crate::ring::Polynomial;

/// Hilbert series, function and polynomial of `S/I` from the lead terms of
/// a grevlex basis.
pub fn hilbert_data<K: Field>(i: &Ideal<K>) -> Result<HilbertData> {
    let n = i.ring().nvars();
    if !i.ring().is_standard_graded() {
        return Err(ArrError::Precondition(
            "Hilbert data needs the standard grading".into(),
        ));
    }
    let leads: Vec<_> = if i.is_zero() {
        Vec::new()
    } else {
        i.gb_in(MonomialOrder::GrevLex)?
            .lead_terms()
            .into_iter()
            .map(|(m, _)| m)
            .collect()
    };
    Ok(HilbertData::from_numerator(
        hilbert::series_numerator(&leads, n),
        n,
    ))
}

/// Cohen-Macaulay test for a saturated ideal: `pd(S/I) = codim I`.
pub fn is_acm<K: Field>(i: &Ideal<K>) -> Result<bool> {
    if !i.is_saturated()? {
        return Err(ArrError::NotSaturated(format!(
            "saturate {} before testing ACM",
            i.tag()
        )));
    }
    if i.is_unit()? {
        return Ok(true);
    }
    let b = minimal_betti(i)?;
    Ok(b.projective_dimension() == Some(i.codim()?))
}

/// Second route to the ACM property of a saturated curve ideal in `P^n`:
/// `S/I` has depth 2 iff `I + (l)` is saturated for a general linear form
/// `l` (which is then a nonzerodivisor).
pub fn is_acm_by_hyperplane<K: Field>(i: &Ideal<K>, seed: u64) -> Result<bool> {
    use rand::SeedableRng;
    if i.hilbert()?.krull_dim != 2 {
        return Err(ArrError::Dimension("hyperplane test is for curves".into()));
    }
    let ring = i.ring();
    let k = ring.field();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let terms = (0..ring.nvars())
        .map(|v| (Monomial::var(v), k.random(&mut rng)))
        .collect();
    let l = Polynomial::from_terms(ring, terms);
    if !i.contains_ideal(&i.quotient_by(&l)?)? {
        return Err(ArrError::NotSaturated(format!(
            "{} is not saturated or the form is special",
            i.tag()
        )));
    }
    i.sum(&Ideal::principal(&l)?)?.is_saturated()
}

/// `Ext^p(S/I, S)` for `p = pd(S/I)`: the cokernel of the transposed last
/// differential of a minimal resolution, presented on `sum S(a_k)` where
/// `a_k` are the degrees of the last free module.
struct TopExt<K: Field> {
    top: Vec<i32>,
    module: Arc<FreeModule<K>>,
    rows: Vec<FreeModuleVector<K>>,
    gb: GroebnerBasis<K>,
}

impl<K: Field> TopExt<K> {
    fn new(res: &Resolution<K>) -> Result<Self> {
        let p = res.length();
        let top = res.degrees(p).to_vec();
        let r = res.ring().clone();
        let shifts: Vec<i32> = top.iter().map(|a| -a).collect();
        let module = Arc::new(FreeModule::new(&r, shifts, ModuleOrder::Top));
        // rows of d_p generate the image of the dual map
        let mut rows: Vec<Vec<Polynomial<K>>> =
            vec![vec![Polynomial::zero(&r); top.len()]; res.rank(p - 1)];
        for (k, col) in res.differential(p).iter().enumerate() {
            for (&b, f) in col {
                rows[b][k] = f.clone();
            }
        }
        let rows = rows
            .iter()
            .map(|row| FreeModuleVector::from_components(&module, row))
            .collect::<Result<Vec<_>>>()?;
        let gb = module_groebner_basis(&module, &rows)?;
        Ok(TopExt {
            top,
            module,
            rows,
            gb,
        })
    }

    /// Hilbert data of each cyclic piece `S e_c / (lead terms in e_c)`;
    /// the cokernel has the same Hilbert function as their sum.
    fn pieces(&self) -> Vec<HilbertData> {
        let n = self.module.ring().nvars();
        let mut leads: Vec<Vec<Monomial>> = vec![Vec::new(); self.top.len()];
        for (m, c) in self.gb.lead_terms() {
            leads[c].push(m);
        }
        leads
            .iter()
            .map(|ls| HilbertData::from_numerator(hilbert::series_numerator(ls, n), n))
            .collect()
    }

    fn krull_dim(&self) -> usize {
        self.pieces().iter().map(|h| h.krull_dim).max().unwrap_or(0)
    }

    /// `ann Ext^p = ∩_c (im : e_c)`, each colon read off a position-over-term
    /// basis with one extra component recording the multiplier.
    fn annihilator(&self) -> Result<Ideal<K>> {
        let r = self.module.ring().clone();
        let rank = self.top.len();
        let mut acc = Ideal::unit(&r);
        for c in 0..rank {
            let mut shifts = self.module.shifts().to_vec();
            shifts.push(self.module.shifts()[c]);
            let big = Arc::new(FreeModule::new(&r, shifts, ModuleOrder::Pot));
            let mut gens = Vec::with_capacity(self.rows.len() + 1);
            for v in &self.rows {
                let mut comps = v.components();
                comps.push(Polynomial::zero(&r));
                gens.push(FreeModuleVector::from_components(&big, &comps)?);
            }
            let mut unit = vec![Polynomial::zero(&r); rank + 1];
            unit[c] = Polynomial::one(&r);
            unit[rank] = Polynomial::one(&r);
            gens.push(FreeModuleVector::from_components(&big, &unit)?);
            let gb = module_groebner_basis(&big, &gens)?;
            let colon: Vec<Polynomial<K>> = gb
                .elements()
                .iter()
                .filter(|v| v.lead().map(|(_, cc)| cc == rank).unwrap_or(false))
                .map(|v| v.component(rank))
                .collect();
            acc = acc.intersect(&Ideal::new(&r, colon)?)?;
        }
        Ok(acc)
    }
}

/// Dimensions of the deficiency module `M(C) = H^1_*(I_C)` of a curve in
/// `P^n`, by graded local duality: `dim M_t = dim Ext^n(S/I, S)_{-t-n-1}`,
/// the cokernel of the transposed last differential of a minimal resolution.
pub fn rao_module<K: Field>(i: &Ideal<K>) -> Result<RaoModule> {
    let n = i.ring().nvars() - 1;
    if i.hilbert()?.krull_dim != 2 {
        return Err(ArrError::Dimension(format!(
            "{} does not define a curve",
            i.tag()
        )));
    }
    if !i.is_saturated()? {
        return Err(ArrError::NotSaturated(format!(
            "saturate {} before computing M(C)",
            i.tag()
        )));
    }
    let res = Resolution::minimal(i)?;
    if res.length() < n {
        return Ok(RaoModule::default());
    }
    if res.length() > n {
        return Err(ArrError::Structural(
            "saturated ideal with projective dimension n + 1".into(),
        ));
    }
    let ext = TopExt::new(&res)?;
    let mut dims = BTreeMap::new();
    for (c, h) in ext.pieces().iter().enumerate() {
        if h.krull_dim != 0 {
            return Err(ArrError::Precondition(format!(
                "{} has embedded points; M(C) needs an unmixed curve",
                i.tag()
            )));
        }
        // degree u of component c is a monomial of degree u + a_c; t = -u - n - 1
        for e in 0..h.reduced_numerator.len() as i64 {
            let v = h.value(e);
            if v > 0 {
                let t = -(e - ext.top[c] as i64) - n as i64 - 1;
                *dims.entry(t).or_insert(0usize) += v as usize;
            }
        }
    }
    Ok(RaoModule { dims })
}

/// Whether every associated prime of `S/I` has height `codim I`. By the
/// Eisenbud-Huneke-Vasconcelos criterion a prime of height `h > codim I` is
/// associated iff `Ext^h(S/I, S)` has codimension `h`; only the last `Ext`
/// is computed, so projective dimension at most `codim + 1` is required
/// (all saturated curves in `P^3`).
pub fn is_unmixed<K: Field>(i: &Ideal<K>) -> Result<bool> {
    let n = i.ring().nvars();
    if i.is_unit()? || i.is_zero() {
        return Ok(true);
    }
    let c = i.codim()?;
    if c == n {
        return Ok(true);
    }
    if !i.is_saturated()? {
        return Ok(false);
    }
    let res = Resolution::minimal(i)?;
    let pd = res.length();
    if pd == c {
        return Ok(true);
    }
    if pd > c + 1 {
        return Err(ArrError::Precondition(format!(
            "unmixedness test needs pd <= codim + 1, got pd {pd} codim {c}"
        )));
    }
    Ok(TopExt::new(&res)?.krull_dim() < n - pd)
}

/// Removes the embedded components of a saturated ideal with `pd <= codim + 1`:
/// every embedded prime contains `ann Ext^{pd}` and no minimal prime does, so
/// `I : g^∞` for a general `g` in the annihilator is the unmixed part. A
/// draw is accepted when codimension and degree are unchanged.
pub fn unmixed_part<K: Field>(i: &Ideal<K>, seed: u64) -> Result<Ideal<K>> {
    use rand::SeedableRng;
    let sat = i.saturate_irrelevant()?;
    if is_unmixed(&sat)? {
        return Ok(sat);
    }
    let res = Resolution::minimal(&sat)?;
    let ann = TopExt::new(&res)?.annihilator()?;
    let h = sat.hilbert()?;
    let lo = ann.min_degree().unwrap_or(0);
    let hi = ann.degrees().into_iter().max().unwrap_or(lo) + 1;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    // low-degree elements of the annihilator may all vanish on a curve
    // component; raising the degree escapes that
    for d in lo..=hi {
        for _ in 0..2 {
            let Some(g) = ann.random_element(d, &mut rng)? else {
                continue;
            };
            let out = sat.saturate_by(&g)?;
            let ho = out.hilbert()?;
            if ho.krull_dim == h.krull_dim && ho.degree == h.degree && is_unmixed(&out)? {
                return Ok(out.with_tag(format!("({})^top", i.tag())));
            }
        }
    }
    Err(ArrError::Genericity(format!(
        "no annihilator element purifies {}",
        i.tag()
    )))
}

/// Finite-length graded module given by its dimensions in each degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RaoModule {
    pub dims: BTreeMap<i64, usize>,
}

impl RaoModule {
    pub fn is_zero(&self) -> bool {
        self.dims.values().all(|&d| d == 0)
    }

    pub fn dim(&self, t: i64) -> usize {
        self.dims.get(&t).copied().unwrap_or(0)
    }

    /// `M(-d)`: degree `t` of the result is degree `t - d` of `M`.
    pub fn shifted(&self, d: i64) -> RaoModule {
        RaoModule {
            dims: self.dims.iter().map(|(&t, &v)| (t + d, v)).collect(),
        }
    }

    pub fn direct_sum(&self, other: &RaoModule) -> RaoModule {
        let mut dims = self.dims.clone();
        for (&t, &v) in &other.dims {
            *dims.entry(t).or_insert(0) += v;
        }
        RaoModule { dims }
    }

    /// Consecutive dimensions from the first to the last nonzero degree.
    pub fn dims_vec(&self) -> Vec<usize> {
        let nz: Vec<i64> = self
            .dims
            .iter()
            .filter(|(_, &v)| v > 0)
            .map(|(&t, _)| t)
            .collect();
        match (nz.first(), nz.last()) {
            (Some(&a), Some(&b)) => (a..=b).map(|t| self.dim(t)).collect(),
            _ => Vec::new(),
        }
    }

    pub fn first_degree(&self) -> Option<i64> {
        self.dims.iter().find(|(_, &v)| v > 0).map(|(&t, _)| t)
    }
}

impl std::fmt::Display for RaoModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.first_degree() {
            None => write!(f, "0"),
            Some(t0) => write!(f, "{:?} from degree {t0}", self.dims_vec()),
        }
    }
}

/// Whether `F, P` cut out a smooth complete intersection: `(F, P)` plus the
/// 2-minors of their Jacobian matrix has codimension `n + 1`.
pub fn is_smooth_ci<K: Field>(f: &Polynomial<K>, p: &Polynomial<K>) -> Result<bool> {
    let ring = f.ring();
    let ci = Ideal::new(ring, vec![f.clone(), p.clone()])?;
    if ci.codim()? != 2 {
        return Err(ArrError::Precondition(format!(
            "({f}, {p}) is not a regular sequence"
        )));
    }
    let rows = vec![f.gradient()?, p.gradient()?];
    let sing = ci.sum(&minors(ring, &rows, 2)?)?;
    Ok(sing.codim()? == ring.nvars())
}

pub fn codim_check<K: Field>(i: &Ideal<K>, expected: usize) -> Result<bool> {
    Ok(i.codim()? == expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::ring::Ring;

    fn ideal(r: &Arc<crate::ring::Ring<PrimeField>>, gens: &[&str]) -> Ideal<PrimeField> {
        Ideal::new(
            r,
            gens.iter()
                .map(|s| Polynomial::parse(r, s).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn skew_lines_rao_module() {
        let r = Ring::new(PrimeField::default(), 4).unwrap();
        let i = ideal(&r, &["x0*x2", "x0*x3", "x1*x2", "x1*x3"]);
        assert!(!is_acm(&i).unwrap());
        assert!(!is_acm_by_hyperplane(&i, 3).unwrap());
        let m = rao_module(&i).unwrap();
        assert_eq!(m.dims_vec(), vec![1]);
        assert_eq!(m.first_degree(), Some(0));
        assert!(is_unmixed(&i).unwrap());
    }

    #[test]
    fn twisted_cubic_is_acm() {
        let r = Ring::new(PrimeField::default(), 4).unwrap();
        let i = ideal(&r, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]);
        assert!(is_acm(&i).unwrap());
        assert!(is_acm_by_hyperplane(&i, 1).unwrap());
        assert!(rao_module(&i).unwrap().is_zero());
    }

    #[test]
    fn embedded_point_is_detected_and_removed() {
        // a line with an embedded point at (0:0:0:1)
        let r = Ring::new(PrimeField::default(), 4).unwrap();
        let line = ideal(&r, &["x0", "x1"]);
        let i = line
            .intersect(&ideal(&r, &["x0^2", "x1^2", "x2^2"]))
            .unwrap();
        assert!(i.is_saturated().unwrap());
        assert!(!is_unmixed(&i).unwrap());
        assert!(matches!(rao_module(&i), Err(ArrError::Precondition(_))));
        let top = unmixed_part(&i, 1).unwrap();
        assert!(top.equals(&line).unwrap());
    }

    #[test]
    fn smooth_ci_detection() {
        let r = Ring::new(PrimeField::default(), 4).unwrap();
        let p = |s: &str| Polynomial::parse(&r, s).unwrap();
        assert!(is_smooth_ci(
            &p("x0^2 + x1^2 + x2^2 + x3^2"),
            &p("x0^2 + 2*x1^2 + 3*x2^2 + 4*x3^2")
        )
        .unwrap());
        assert!(!is_smooth_ci(&p("x0*x1 - x2*x3"), &p("x0^2 + x1^2 + x2^2 + x3^2")).unwrap());
        // two cones with a common vertex meet singularly there
        assert!(!is_smooth_ci(&p("x0*x1 - x2^2"), &p("x0^2 - x1*x2")).unwrap());
    }
}
