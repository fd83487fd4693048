//! Exact coefficient fields: prime fields `F_p` and the rationals.
//!
//! Polynomial code is generic over [`Field`]; the field value itself is a
//! small context object (the prime, or nothing for `Q`) and elements are
//! plain values manipulated through it.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{ArrError, Result};

/// Default characteristic used for generic computations.
pub const DEFAULT_PRIME: u32 = 32003;

pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, v: i64) -> Self::Elem;
    /// Image of `num/den`; fails when `den` vanishes in the field.
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Self::Elem>;
    /// 0 for the rationals.
    fn characteristic(&self) -> u64;
    /// Pseudo-random "general" scalar drawn from `rng`.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    fn format(&self, a: &Self::Elem) -> String;
    /// Short human-readable field name, e.g. `GF(32003)` or `QQ`.
    fn name(&self) -> String;

    /// `a - c*b`, the hot operation of every reduction loop.
    #[inline]
    fn sub_mul(&self, a: &Self::Elem, c: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.sub(a, &self.mul(c, b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    /// Whether the integer `k` is zero in the field.
    fn int_vanishes(&self, k: u64) -> bool {
        let p = self.characteristic();
        p != 0 && k.is_multiple_of(p)
    }
}

/// The prime field `Z/pZ` with `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..1 << 31).contains(&p) || !is_prime(p as u64) {
            return Err(ArrError::InvalidField(format!(
                "{p} is not a prime below 2^31"
            )));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    fn reduce_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    fn reduce_big(&self, v: &BigInt) -> u32 {
        let m = BigInt::from(self.p);
        v.mod_floor(&m).to_u32().expect("residue fits")
    }

    fn pow(&self, b: u32, mut e: u64) -> u32 {
        let p = self.p as u64;
        let mut acc = 1u64;
        let mut base = b as u64 % p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc as u32
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u32;

    #[inline]
    fn zero(&self) -> u32 {
        0
    }
    #[inline]
    fn one(&self) -> u32 {
        1
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    #[inline]
    fn is_one(&self, a: &u32) -> bool {
        *a == 1
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a + *b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if *a >= *b {
            *a - *b
        } else {
            *a + self.p - *b
        }
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - *a
        }
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p as u64 - 2))
        }
    }
    fn from_i64(&self, v: i64) -> u32 {
        self.reduce_i64(v)
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<u32> {
        let d = self.reduce_big(den);
        if d == 0 {
            return Err(ArrError::CharacteristicCollision(format!(
                "denominator {den} vanishes modulo {}",
                self.p
            )));
        }
        let n = self.reduce_big(num);
        Ok(self.mul(&n, &self.inv(&d).unwrap()))
    }
    fn characteristic(&self) -> u64 {
        self.p as u64
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }
    fn format(&self, a: &u32) -> String {
        // symmetric representative reads better for small negatives
        if *a > self.p / 2 {
            format!("-{}", self.p - *a)
        } else {
            a.to_string()
        }
    }
    fn name(&self) -> String {
        format!("GF({})", self.p)
    }
    #[inline]
    fn sub_mul(&self, a: &u32, c: &u32, b: &u32) -> u32 {
        let p = self.p as u64;
        let prod = (*c as u64 * *b as u64) % p;
        ((*a as u64 + p - prod) % p) as u32
    }
}

/// The field of rational numbers with arbitrary precision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct RationalField;

/// Range of the integers used as "general" rational scalars.
const RATIONAL_RANDOM_BOUND: i64 = 20;

impl Field for RationalField {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<BigRational> {
        if den.is_zero() {
            return Err(ArrError::parse("zero denominator"));
        }
        Ok(BigRational::new(num.clone(), den.clone()))
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.gen_range(-RATIONAL_RANDOM_BOUND..=RATIONAL_RANDOM_BOUND))
    }
    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else if a.is_negative() {
            format!("-{}/{}", a.numer().abs(), a.denom())
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn name(&self) -> String {
        "QQ".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn axioms<K: Field>(k: &K, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            let a = k.random(&mut rng);
            let b = k.random(&mut rng);
            let c = k.random(&mut rng);
            assert_eq!(k.add(&a, &b), k.add(&b, &a));
            assert_eq!(k.mul(&a, &b), k.mul(&b, &a));
            assert_eq!(
                k.mul(&a, &k.add(&b, &c)),
                k.add(&k.mul(&a, &b), &k.mul(&a, &c))
            );
            assert_eq!(k.add(&k.add(&a, &b), &c), k.add(&a, &k.add(&b, &c)));
            assert_eq!(k.mul(&k.mul(&a, &b), &c), k.mul(&a, &k.mul(&b, &c)));
            assert!(k.is_zero(&k.add(&a, &k.neg(&a))));
            assert_eq!(k.sub_mul(&a, &b, &c), k.sub(&a, &k.mul(&b, &c)));
            if !k.is_zero(&a) {
                assert!(k.is_one(&k.mul(&a, &k.inv(&a).unwrap())));
            }
        }
    }

    #[test]
    fn prime_field_axioms() {
        axioms(&PrimeField::default(), 1);
        axioms(&PrimeField::new(5).unwrap(), 2);
    }

    #[test]
    fn rational_field_axioms() {
        axioms(&RationalField, 3);
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(PrimeField::new(32004).is_err());
        assert!(PrimeField::new(1).is_err());
    }

    #[test]
    fn residues_stay_in_range() {
        let k = PrimeField::new(5).unwrap();
        assert_eq!(k.from_i64(-1), 4);
        assert_eq!(k.mul(&3, &2), 1);
        let half = k.from_ratio(&BigInt::from(1), &BigInt::from(2)).unwrap();
        assert_eq!(k.mul(&half, &2), 1);
        assert!(k.from_ratio(&BigInt::from(1), &BigInt::from(10)).is_err());
    }

    #[test]
    fn rationals_in_lowest_terms() {
        let q = RationalField;
        let x = q.from_ratio(&BigInt::from(6), &BigInt::from(-4)).unwrap();
        assert_eq!(q.format(&x), "-3/2");
        assert!(x.denom().is_positive());
    }
}
