//! Packed exponent vectors and monomial orders.
//!
//! A monomial stores up to [`MAX_VARS`] exponents in 16-bit lanes of a
//! `u128`. Every lane keeps its top bit clear, so multiplication is a plain
//! addition and divisibility is a borrow-free subtraction tested against the
//! guard bits.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{ArrError, Result};

pub const MAX_VARS: usize = 8;
/// Largest exponent a single variable may carry.
pub const MAX_EXPONENT: u32 = (1 << 15) - 1;

const LANE_BITS: u32 = 16;
const LANE_MASK: u128 = 0xFFFF;
const GUARD: u128 = 0x8000_8000_8000_8000_8000_8000_8000_8000;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    packed: u128,
    degree: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        packed: 0,
        degree: 0,
    };

    pub fn new(exps: &[u32]) -> Result<Self> {
        if exps.len() > MAX_VARS {
            return Err(ArrError::ExponentOverflow(format!(
                "{} variables exceed the supported {MAX_VARS}",
                exps.len()
            )));
        }
        let mut packed = 0u128;
        let mut degree = 0u32;
        for (i, &e) in exps.iter().enumerate() {
            if e > MAX_EXPONENT {
                return Err(ArrError::ExponentOverflow(format!("exponent {e} of x{i}")));
            }
            packed |= (e as u128) << (LANE_BITS * i as u32);
            degree += e;
        }
        Ok(Monomial { packed, degree })
    }

    pub fn var(i: usize) -> Self {
        assert!(i < MAX_VARS);
        Monomial {
            packed: 1u128 << (LANE_BITS * i as u32),
            degree: 1,
        }
    }

    pub fn var_pow(i: usize, e: u32) -> Result<Self> {
        let mut exps = [0u32; MAX_VARS];
        exps[i] = e;
        Monomial::new(&exps)
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        ((self.packed >> (LANE_BITS * i as u32)) & LANE_MASK) as u32
    }

    /// Total (standard) degree.
    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.packed == 0
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exp(i)).collect()
    }

    /// Product, failing when an exponent would overflow its lane.
    #[inline]
    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial> {
        let packed = self.packed + other.packed;
        if packed & GUARD != 0 {
            return Err(ArrError::ExponentOverflow(format!("{self:?} * {other:?}")));
        }
        Ok(Monomial {
            packed,
            degree: self.degree + other.degree,
        })
    }

    /// Product; panics on overflow. The engine only multiplies monomials whose
    /// degrees are far below the lane limit.
    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let packed = self.packed + other.packed;
        debug_assert!(packed & GUARD == 0, "exponent overflow");
        Monomial {
            packed,
            degree: self.degree + other.degree,
        }
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && ((other.packed | GUARD) - self.packed) & GUARD == GUARD
    }

    /// `other / self` if `self` divides `other`.
    #[inline]
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if self.divides(other) {
            Some(Monomial {
                packed: other.packed - self.packed,
                degree: other.degree - self.degree,
            })
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut packed = 0u128;
        let mut degree = 0;
        for i in 0..MAX_VARS {
            let e = self.exp(i).max(other.exp(i));
            packed |= (e as u128) << (LANE_BITS * i as u32);
            degree += e;
        }
        Monomial { packed, degree }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut packed = 0u128;
        let mut degree = 0;
        for i in 0..MAX_VARS {
            let e = self.exp(i).min(other.exp(i));
            packed |= (e as u128) << (LANE_BITS * i as u32);
            degree += e;
        }
        Monomial { packed, degree }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.exp(i) == 0 || other.exp(i) == 0)
    }

    /// Drops the exponent of variable `i`.
    pub fn without_var(&self, i: usize) -> Monomial {
        let e = self.exp(i);
        Monomial {
            packed: self.packed & !(LANE_MASK << (LANE_BITS * i as u32)),
            degree: self.degree - e,
        }
    }

    pub fn with_exp(&self, i: usize, e: u32) -> Monomial {
        let old = self.exp(i);
        let cleared = self.packed & !(LANE_MASK << (LANE_BITS * i as u32));
        Monomial {
            packed: cleared | ((e as u128) << (LANE_BITS * i as u32)),
            degree: self.degree - old + e,
        }
    }

    pub fn weighted_degree(&self, grading: &Grading) -> u32 {
        if grading.standard {
            return self.degree;
        }
        (0..MAX_VARS)
            .map(|i| self.exp(i) * grading.weights[i])
            .sum()
    }

    /// Maps variable `i` to variable `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Monomial {
        let mut packed = 0u128;
        for (i, &j) in perm.iter().enumerate() {
            packed |= (self.exp(i) as u128) << (LANE_BITS * j as u32);
        }
        Monomial {
            packed,
            degree: self.degree,
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exps: Vec<u32> = (0..MAX_VARS).map(|i| self.exp(i)).collect();
        write!(f, "M{exps:?}")
    }
}

/// Positive integer weights of the variables; the standard grading has all
/// weights equal to one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Grading {
    pub weights: [u32; MAX_VARS],
    pub standard: bool,
}

impl Grading {
    pub fn standard() -> Self {
        Grading {
            weights: [1; MAX_VARS],
            standard: true,
        }
    }

    pub fn weighted(w: &[u32]) -> Self {
        let mut weights = [1; MAX_VARS];
        weights[..w.len()].copy_from_slice(w);
        let standard = weights.iter().all(|&x| x == 1);
        Grading { weights, standard }
    }
}

impl Default for Grading {
    fn default() -> Self {
        Grading::standard()
    }
}

#[derive(
    Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize, Default,
)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic order, x0 > x1 > ... .
    #[default]
    GrevLex,
    Lex,
    /// Block order eliminating the first `k` variables: graded reverse
    /// lexicographic within each block, the first block dominating.
    Elimination(usize),
}

impl MonomialOrder {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "grevlex" | "degrevlex" | "drl" => Ok(MonomialOrder::GrevLex),
            "lex" => Ok(MonomialOrder::Lex),
            _ => Err(ArrError::parse(format!("unknown monomial order `{s}`"))),
        }
    }

    /// Whether the order compares (weighted) degree first.
    pub fn is_graded(&self) -> bool {
        matches!(self, MonomialOrder::GrevLex)
    }

    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial, grading: &Grading, nvars: usize) -> Ordering {
        match *self {
            MonomialOrder::GrevLex => {
                let (da, db) = (a.weighted_degree(grading), b.weighted_degree(grading));
                da.cmp(&db).then_with(|| revlex(a, b, 0, nvars))
            }
            MonomialOrder::Lex => {
                for i in 0..nvars {
                    let c = a.exp(i).cmp(&b.exp(i));
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Elimination(k) => {
                let block = |m: &Monomial, lo: usize, hi: usize| -> u32 {
                    (lo..hi).map(|i| m.exp(i) * grading.weights[i]).sum()
                };
                block(a, 0, k)
                    .cmp(&block(b, 0, k))
                    .then_with(|| revlex(a, b, 0, k))
                    .then_with(|| block(a, k, nvars).cmp(&block(b, k, nvars)))
                    .then_with(|| revlex(a, b, k, nvars))
            }
        }
    }
}

/// Reverse lexicographic tie-break on variables `lo..hi`: the monomial with
/// the smaller exponent in the last differing variable is larger.
#[inline]
fn revlex(a: &Monomial, b: &Monomial, lo: usize, hi: usize) -> Ordering {
    for i in (lo..hi).rev() {
        let (ea, eb) = (a.exp(i), b.exp(i));
        if ea != eb {
            return eb.cmp(&ea);
        }
    }
    Ordering::Equal
}

/// All monomials of standard degree `d` in `nvars` variables, in no
/// particular order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; nvars];
    fn rec(i: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let n = exps.len();
        if i + 1 == n {
            exps[i] = left;
            out.push(Monomial::new(exps).expect("small exponents"));
            return;
        }
        for e in (0..=left).rev() {
            exps[i] = e;
            rec(i + 1, left - e, exps, out);
        }
        exps[i] = 0;
    }
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::ONE);
        }
        return out;
    }
    rec(0, d, &mut exps, &mut out);
    out
}

/// All monomials of weighted degree exactly `d`.
pub fn monomials_of_weighted_degree(nvars: usize, d: u32, grading: &Grading) -> Vec<Monomial> {
    if grading.standard {
        return monomials_of_degree(nvars, d);
    }
    let mut out = Vec::new();
    let mut exps = vec![0u32; nvars];
    fn rec(i: usize, left: u32, w: &[u32], exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let n = exps.len();
        if i == n {
            if left == 0 {
                out.push(Monomial::new(exps).expect("small exponents"));
            }
            return;
        }
        let mut e = 0;
        while e * w[i] <= left {
            exps[i] = e;
            rec(i + 1, left - e * w[i], w, exps, out);
            e += 1;
        }
        exps[i] = 0;
    }
    rec(0, d, &grading.weights[..nvars], &mut exps, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e).unwrap()
    }

    #[test]
    fn packing_roundtrip() {
        let a = m(&[3, 0, 7, 1]);
        assert_eq!(a.exponents(4), vec![3, 0, 7, 1]);
        assert_eq!(a.degree(), 11);
        assert!(Monomial::new(&[1 << 15]).is_err());
    }

    #[test]
    fn divisibility_and_lcm() {
        let a = m(&[1, 2, 0, 0]);
        let b = m(&[2, 2, 1, 0]);
        assert!(a.divides(&b));
        assert!(!b.divides(&a));
        assert_eq!(a.div(&b), Some(m(&[1, 0, 1, 0])));
        assert_eq!(a.lcm(&m(&[0, 3, 1, 0])), m(&[1, 3, 1, 0]));
        assert!(m(&[1, 0, 0, 0]).is_coprime(&m(&[0, 2, 0, 1])));
        assert!(m(&[0, 0, 0, 5]).divides(&m(&[0, 0, 0, 5])));
        assert!(!m(&[0, 0, 0, 6]).divides(&m(&[9, 9, 9, 5])));
    }

    #[test]
    fn overflow_is_detected() {
        let a = Monomial::var_pow(0, MAX_EXPONENT).unwrap();
        assert!(a.checked_mul(&Monomial::var(0)).is_err());
        assert!(a.checked_mul(&Monomial::var(1)).is_ok());
    }

    #[test]
    fn grevlex_small_cases() {
        let g = Grading::standard();
        let o = MonomialOrder::GrevLex;
        // x0 > x1 > x2 and x1^2 > x0 x2 in grevlex
        assert_eq!(
            o.cmp(&m(&[1, 0, 0]), &m(&[0, 1, 0]), &g, 3),
            Ordering::Greater
        );
        assert_eq!(
            o.cmp(&m(&[0, 2, 0]), &m(&[1, 0, 1]), &g, 3),
            Ordering::Greater
        );
        assert_eq!(
            MonomialOrder::Lex.cmp(&m(&[0, 2, 0]), &m(&[1, 0, 1]), &g, 3),
            Ordering::Less
        );
    }

    #[test]
    fn elimination_dominates() {
        let g = Grading::standard();
        let o = MonomialOrder::Elimination(1);
        assert_eq!(
            o.cmp(&m(&[1, 0, 0]), &m(&[0, 5, 5]), &g, 3),
            Ordering::Greater
        );
    }

    /// Exhaustive check of the order axioms through degree 6 in 4 variables.
    #[test]
    fn order_axioms_exhaustive() {
        let g = Grading::standard();
        let mons: Vec<Monomial> = (0..=6).flat_map(|d| monomials_of_degree(4, d)).collect();
        let u = m(&[1, 0, 2, 1]);
        for o in [
            MonomialOrder::GrevLex,
            MonomialOrder::Lex,
            MonomialOrder::Elimination(2),
        ] {
            for a in &mons {
                for b in &mons {
                    let c = o.cmp(a, b, &g, 4);
                    // totality / antisymmetry
                    assert_eq!(c, o.cmp(b, a, &g, 4).reverse());
                    assert_eq!(c == Ordering::Equal, a == b);
                    // refines divisibility
                    if a != b && a.divides(b) {
                        assert_eq!(c, Ordering::Less, "{o:?} {a:?} {b:?}");
                    }
                    // multiplicative
                    assert_eq!(o.cmp(&a.mul(&u), &b.mul(&u), &g, 4), c);
                }
            }
            // well-founded on the finite set: sorting is consistent
            let mut sorted = mons.clone();
            sorted.sort_by(|a, b| o.cmp(a, b, &g, 4));
            for w in sorted.windows(2) {
                assert_eq!(o.cmp(&w[0], &w[1], &g, 4), Ordering::Less);
            }
        }
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(4, 3).len(), 20);
        assert_eq!(monomials_of_degree(3, 0).len(), 1);
        let w = Grading::weighted(&[1, 1, 2]);
        // degree 2 with weights (1,1,2): x0^2, x0x1, x1^2, x2
        assert_eq!(monomials_of_weighted_degree(3, 2, &w).len(), 4);
    }
}
