//! Hilbert series of monomial ideals and Hilbert data of graded quotients.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::monomial::{Monomial, MAX_VARS};

/// Numerator `N(z)` of the Hilbert series `N(z) / (1-z)^nvars` of
/// `K[x]/(gens)`, by pivot splitting `N(I) = N(I + (p)) + z^deg(p) N(I : p)`.
pub fn series_numerator(gens: &[Monomial], nvars: usize) -> Vec<i64> {
    let mut g = minimize(gens.to_vec());
    numerator_rec(&mut g, nvars)
}

fn minimize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for m in gens {
        if !out.iter().any(|o| o.divides(&m)) {
            out.push(m);
        }
    }
    out
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add_shifted(a: &mut Vec<i64>, b: &[i64], shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, 0);
    }
    for (j, y) in b.iter().enumerate() {
        a[j + shift] += y;
    }
}

fn trim(mut v: Vec<i64>) -> Vec<i64> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

fn numerator_rec(gens: &mut [Monomial], nvars: usize) -> Vec<i64> {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|m| m.is_one()) {
        return vec![0];
    }
    // count occurrences among generators that are not pure powers
    let mut count = [0usize; MAX_VARS];
    let mut mixed = false;
    for m in gens.iter() {
        let support = (0..nvars).filter(|&i| m.exp(i) > 0).count();
        if support > 1 {
            mixed = true;
            for (i, c) in count.iter_mut().enumerate().take(nvars) {
                if m.exp(i) > 0 {
                    *c += 1;
                }
            }
        }
    }
    if !mixed {
        // pure powers of distinct variables: product of (1 - z^d)
        let mut acc = vec![1i64];
        for m in gens.iter() {
            let mut f = vec![0i64; m.degree() as usize + 1];
            f[0] = 1;
            f[m.degree() as usize] -= 1;
            acc = poly_mul(&acc, &f);
        }
        return trim(acc);
    }
    let v = (0..nvars)
        .max_by_key(|&i| (count[i], std::cmp::Reverse(i)))
        .unwrap();
    let mut exps: Vec<u32> = gens
        .iter()
        .filter(|m| (0..nvars).filter(|&i| m.exp(i) > 0).count() > 1)
        .map(|m| m.exp(v))
        .filter(|&e| e > 0)
        .collect();
    exps.sort_unstable();
    let e = exps[exps.len() / 2];
    let p = Monomial::var_pow(v, e).expect("small exponent");

    let mut with_p: Vec<Monomial> = gens.iter().filter(|m| !p.divides(m)).copied().collect();
    with_p.push(p);
    let mut with_p = minimize(with_p);
    let mut colon: Vec<Monomial> = gens
        .iter()
        .map(|m| {
            let g = m.gcd(&p);
            g.div(m).unwrap()
        })
        .collect();
    colon = minimize(colon);
    let mut a = numerator_rec(&mut with_p, nvars);
    let b = numerator_rec(&mut colon, nvars);
    poly_add_shifted(&mut a, &b, e as usize);
    trim(a)
}

/// Hilbert function, series and polynomial of a graded quotient `S/I`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HilbertData {
    pub nvars: usize,
    /// `N(z)` with `HS(z) = N(z) / (1-z)^nvars`.
    pub numerator: Vec<i64>,
    /// `Q(z)` with `HS(z) = Q(z) / (1-z)^krull_dim` and `Q(1) != 0`.
    pub reduced_numerator: Vec<i64>,
    pub krull_dim: usize,
    /// Multiplicity `Q(1)`; the degree of the projective scheme.
    pub degree: i64,
    /// Hilbert polynomial coefficients, constant term first.
    #[serde(serialize_with = "ser_rationals")]
    pub polynomial: Vec<BigRational>,
    /// First degree from which function and polynomial agree.
    pub regularity_bound: i64,
    /// Hilbert function values for `t = 0 ..= regularity_bound + 1`.
    pub function: Vec<i64>,
}

fn ser_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

fn binom_i64(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc as i64
}

impl HilbertData {
    pub fn from_numerator(numerator: Vec<i64>, nvars: usize) -> Self {
        let numerator = trim(numerator);
        // divide by (1 - z) while the value at 1 vanishes
        let mut q = numerator.clone();
        let mut k = 0;
        while k < nvars && q.iter().sum::<i64>() == 0 && q.iter().any(|&c| c != 0) {
            // synthetic division by (1 - z): q = (1 - z) r  =>  r_i = sum_{j<=i} q_j
            let mut r = Vec::with_capacity(q.len());
            let mut run = 0;
            for c in &q[..q.len() - 1] {
                run += c;
                r.push(run);
            }
            q = trim(r);
            k += 1;
        }
        let zero_ring = numerator.iter().all(|&c| c == 0);
        let krull_dim = if zero_ring { 0 } else { nvars - k };
        let degree = if zero_ring { 0 } else { q.iter().sum() };

        // HP(t) = sum_j q_j C(t - j + D - 1, D - 1)
        let d = krull_dim;
        let mut poly = vec![BigRational::zero(); d.max(1)];
        if d > 0 && !zero_ring {
            let fact: BigInt = (1..d as i64).map(BigInt::from).product();
            for (j, qj) in q.iter().enumerate() {
                if *qj == 0 {
                    continue;
                }
                // prod_{i=1}^{D-1} (t - j + i)
                let mut p = vec![BigRational::one()];
                for i in 1..d as i64 {
                    let c = BigRational::from_integer(BigInt::from(i - j as i64));
                    let mut np = vec![BigRational::zero(); p.len() + 1];
                    for (e, a) in p.iter().enumerate() {
                        np[e] += a * &c;
                        np[e + 1] += a.clone();
                    }
                    p = np;
                }
                let scale = BigRational::new(BigInt::from(*qj), fact.clone());
                for (e, a) in p.iter().enumerate() {
                    poly[e] += a * &scale;
                }
            }
        }
        while poly.len() > 1 && poly.last().unwrap().is_zero() {
            poly.pop();
        }
        let mut data = HilbertData {
            nvars,
            numerator,
            reduced_numerator: q,
            krull_dim,
            degree,
            polynomial: poly,
            regularity_bound: 0,
            function: Vec::new(),
        };
        let safe = data.reduced_numerator.len() as i64 - d as i64;
        let mut bound = safe.max(0);
        while bound > 0 && data.value(bound - 1) == data.poly_value(bound - 1) {
            bound -= 1;
        }
        data.regularity_bound = bound;
        data.function = (0..=bound + 1).map(|t| data.value(t)).collect();
        data
    }

    /// `dim_K [S/I]_t`, exact from the series.
    pub fn value(&self, t: i64) -> i64 {
        if t < 0 {
            return 0;
        }
        let n = self.nvars as i64;
        self.numerator
            .iter()
            .enumerate()
            .map(|(j, c)| c * binom_i64(t - j as i64 + n - 1, n - 1))
            .sum()
    }

    pub fn poly_value_rational(&self, t: i64) -> BigRational {
        let tt = BigRational::from_integer(BigInt::from(t));
        let mut acc = BigRational::zero();
        for c in self.polynomial.iter().rev() {
            acc = acc * &tt + c;
        }
        acc
    }

    pub fn poly_value(&self, t: i64) -> i64 {
        self.poly_value_rational(t)
            .to_integer()
            .to_i64()
            .expect("fits")
    }

    /// Projective dimension of the scheme (`-1` when empty).
    pub fn dim(&self) -> i64 {
        self.krull_dim as i64 - 1
    }

    pub fn codim(&self) -> usize {
        self.nvars - self.krull_dim
    }

    /// Integer coefficients of the Hilbert polynomial, if they are integral.
    pub fn polynomial_integers(&self) -> Option<Vec<i64>> {
        self.polynomial
            .iter()
            .map(|c| {
                if c.is_integer() {
                    c.to_integer().to_i64()
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn polynomial_string(&self) -> String {
        format_polynomial(&self.polynomial)
    }

    /// Values of `HS(z) * (1-z)^nvars` truncated: the h-vector style check.
    pub fn series_string(&self) -> String {
        let terms: Vec<String> = self
            .reduced_numerator
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(j, c)| match j {
                0 => format!("{c}"),
                1 => format!("{c}z"),
                _ => format!("{c}z^{j}"),
            })
            .collect();
        format!(
            "({}) / (1-z)^{}",
            terms.join(" + ").replace("+ -", "- "),
            self.krull_dim
        )
    }
}

/// Formats `c0 + c1 t + ...` as `168t - 1728`.
pub fn format_polynomial(coefs: &[BigRational]) -> String {
    let mut out = String::new();
    for (e, c) in coefs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let coef = if a.is_integer() {
            a.to_integer().to_string()
        } else {
            format!("{}*", a)
        };
        match e {
            0 => out.push_str(&a.to_string()),
            _ => {
                if !a.is_one() {
                    out.push_str(&coef);
                }
                out.push('t');
                if e > 1 {
                    out.push_str(&format!("^{e}"));
                }
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for HilbertData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "HP = {} (dim {}, degree {})",
            self.polynomial_string(),
            self.dim(),
            self.degree
        )
    }
}

/// Interpolates a polynomial of degree `< k` through the values
/// `values[t0..t0+k]` by Newton forward differences; independent of the
/// series route and used to cross-check it.
pub fn fit_by_differences(values: &[i64], t0: i64, k: usize) -> Vec<BigRational> {
    let pts: Vec<BigRational> = values[..k]
        .iter()
        .map(|v| BigRational::from_integer(BigInt::from(*v)))
        .collect();
    // difference table
    let mut diffs = vec![pts.clone()];
    for level in 1..k {
        let prev = &diffs[level - 1];
        diffs.push(
            (0..prev.len() - 1)
                .map(|i| &prev[i + 1] - &prev[i])
                .collect(),
        );
    }
    // p(t) = sum_l Δ^l(t0) * C(t - t0, l)
    let mut poly = vec![BigRational::zero(); k.max(1)];
    for (l, d) in diffs.iter().enumerate() {
        let c = &d[0];
        if c.is_zero() {
            continue;
        }
        let mut p = vec![BigRational::one()];
        let mut fact = BigInt::one();
        for i in 0..l as i64 {
            let shift = BigRational::from_integer(BigInt::from(-t0 - i));
            let mut np = vec![BigRational::zero(); p.len() + 1];
            for (e, a) in p.iter().enumerate() {
                np[e] += a * &shift;
                np[e + 1] += a.clone();
            }
            p = np;
            fact *= BigInt::from(i + 1);
        }
        let scale = c / BigRational::from_integer(fact);
        for (e, a) in p.iter().enumerate() {
            poly[e] += a * &scale;
        }
    }
    while poly.len() > 1 && poly.last().unwrap().is_zero() {
        poly.pop();
    }
    poly
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e).unwrap()
    }

    #[test]
    fn polynomial_ring_and_point() {
        let h = HilbertData::from_numerator(series_numerator(&[], 4), 4);
        assert_eq!(h.krull_dim, 4);
        assert_eq!(h.value(2), 10);
        // the point V(x1,x2,x3)
        let h = HilbertData::from_numerator(
            series_numerator(&[m(&[0, 1, 0, 0]), m(&[0, 0, 1, 0]), m(&[0, 0, 0, 1])], 4),
            4,
        );
        assert_eq!((h.krull_dim, h.degree), (1, 1));
        assert_eq!(h.polynomial_string(), "1");
    }

    #[test]
    fn complete_intersection_of_two_quadrics() {
        // lead terms x0^2, x1^2 of a CI(2,2) in P^3
        let h = HilbertData::from_numerator(
            series_numerator(&[m(&[2, 0, 0, 0]), m(&[0, 2, 0, 0])], 4),
            4,
        );
        assert_eq!(h.polynomial_string(), "4t");
        assert_eq!(h.degree, 4);
        assert_eq!(h.krull_dim, 2);
        for t in 0..10 {
            let s = |u: i64| binom_i64(u + 3, 3);
            assert_eq!(h.value(t), s(t) - 2 * s(t - 2) + s(t - 4));
        }
    }

    #[test]
    fn twisted_cubic_lead_terms() {
        // grevlex leads of the twisted cubic: x1^2, x1x2, x2^2
        let h = HilbertData::from_numerator(
            series_numerator(&[m(&[0, 2, 0, 0]), m(&[0, 1, 1, 0]), m(&[0, 0, 2, 0])], 4),
            4,
        );
        assert_eq!(h.polynomial_string(), "3t + 1");
        assert_eq!(h.regularity_bound, 0);
    }

    #[test]
    fn differences_agree_with_series() {
        let h = HilbertData::from_numerator(
            series_numerator(
                &[
                    m(&[3, 0, 0, 0]),
                    m(&[1, 2, 0, 0]),
                    m(&[0, 1, 3, 1]),
                    m(&[2, 0, 1, 0]),
                ],
                4,
            ),
            4,
        );
        let t0 = h.regularity_bound;
        let vals: Vec<i64> = (t0..t0 + 6).map(|t| h.value(t)).collect();
        assert_eq!(fit_by_differences(&vals, t0, 6), h.polynomial);
    }

    #[test]
    fn formatting() {
        let c = |v: &[i64]| {
            v.iter()
                .map(|x| BigRational::from_integer(BigInt::from(*x)))
                .collect::<Vec<_>>()
        };
        assert_eq!(format_polynomial(&c(&[-1728, 168])), "168t - 1728");
        assert_eq!(format_polynomial(&c(&[0, 6])), "6t");
        assert_eq!(format_polynomial(&c(&[0])), "0");
        assert_eq!(format_polynomial(&c(&[1, -1, 1])), "t^2 - t + 1");
    }
}
