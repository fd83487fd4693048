//! Graded free resolutions: Schreyer frames, minimalization by cancelling
//! constant entries, and Betti tables.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{ArrError, Result};
use crate::field::Field;
use crate::groebner::{syzygies, FreeModuleVector, GroebnerBasis};
use crate::idealops::Ideal;
use crate::monomial::MonomialOrder;
use crate::oracle;
use crate::ring::{Polynomial, Ring};

/// Sparse column of a differential: row index to entry.
pub type Column<K> = BTreeMap<usize, Polynomial<K>>;

/// A graded free resolution `0 <- S/I <- F_0 <- F_1 <- ... <- F_len`.
/// `degrees[i]` lists the twists of the basis of `F_i`; `maps[i]` (for
/// `i >= 1`) holds `d_i : F_i -> F_{i-1}` column by column.
#[derive(Clone, Debug)]
pub struct Resolution<K: Field> {
    ring: Arc<Ring<K>>,
    degrees: Vec<Vec<i32>>,
    maps: Vec<Vec<Column<K>>>,
    minimal: bool,
}

impl<K: Field> Resolution<K> {
    /// Schreyer resolution of `S/I`: iterated syzygies of a grevlex basis.
    /// Usually not minimal.
    pub fn schreyer(ideal: &Ideal<K>) -> Result<Self> {
        let ring = ideal.ring().with_monomial_order(MonomialOrder::GrevLex);
        if ideal.is_unit()? {
            return Ok(Resolution {
                ring,
                degrees: Vec::new(),
                maps: Vec::new(),
                minimal: true,
            });
        }
        let mut degrees = vec![vec![0]];
        let mut maps = vec![Vec::new()];
        if ideal.is_zero() {
            return Ok(Resolution {
                ring,
                degrees,
                maps,
                minimal: true,
            });
        }
        let gb = ideal.gb_in(MonomialOrder::GrevLex)?;
        degrees.push(
            gb.elements()
                .iter()
                .map(|e| e.degree().expect("nonzero"))
                .collect(),
        );
        maps.push(gb.elements().iter().map(|e| column_of(e)).collect());
        let mut cur: GroebnerBasis<K> = (*gb).clone();
        // a Schreyer frame may overshoot the syzygy theorem bound by trivial pieces
        let limit = 2 * ring.nvars() + 2;
        loop {
            let syz = syzygies(&cur)?;
            if syz.vectors.is_empty() {
                break;
            }
            if maps.len() > limit {
                return Err(ArrError::Structural(
                    "Schreyer resolution does not terminate".into(),
                ));
            }
            degrees.push(
                syz.vectors
                    .iter()
                    .map(|v| v.degree().expect("nonzero"))
                    .collect(),
            );
            maps.push(syz.vectors.iter().map(column_of).collect());
            cur = syz.as_basis();
        }
        Ok(Resolution {
            ring,
            degrees,
            maps,
            minimal: false,
        })
    }

    /// Minimal free resolution of `S/I`.
    pub fn minimal(ideal: &Ideal<K>) -> Result<Self> {
        let mut r = Resolution::schreyer(ideal)?;
        r.minimalize();
        Ok(r)
    }

    pub fn ring(&self) -> &Arc<Ring<K>> {
        &self.ring
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    /// Index of the last nonzero module.
    pub fn length(&self) -> usize {
        self.degrees.len().saturating_sub(1)
    }

    pub fn degrees(&self, i: usize) -> &[i32] {
        self.degrees.get(i).map(|d| d.as_slice()).unwrap_or(&[])
    }

    pub fn rank(&self, i: usize) -> usize {
        self.degrees(i).len()
    }

    /// Columns of `d_i`, `1 <= i <= length`.
    pub fn differential(&self, i: usize) -> &[Column<K>] {
        &self.maps[i]
    }

    /// Cancels unit entries of the differentials one at a time, scanning
    /// columns then rows in index order.
    pub fn minimalize(&mut self) {
        if self.minimal {
            return;
        }
        let k = self.ring.field().clone();
        let levels = self.degrees.len();
        let mut alive: Vec<Vec<bool>> = self.degrees.iter().map(|d| vec![true; d.len()]).collect();
        for i in 1..levels {
            loop {
                let mut found = None;
                'scan: for (c, col) in self.maps[i].iter().enumerate() {
                    if !alive[i][c] {
                        continue;
                    }
                    for (&r, p) in col {
                        if p.is_constant() {
                            found = Some((c, r, p.lead_coef().unwrap().clone()));
                            break 'scan;
                        }
                    }
                }
                let Some((c, r, u)) = found else { break };
                let inv = k.neg(&k.inv(&u).expect("unit"));
                let pivot_col = self.maps[i][c].clone();
                for y in 0..self.maps[i].len() {
                    if y == c || !alive[i][y] {
                        continue;
                    }
                    let Some(dry) = self.maps[i][y].remove(&r) else {
                        continue;
                    };
                    // column y -= (d[r][y] / u) * column c
                    let lambda = dry.scale(&inv);
                    for (&x, a) in &pivot_col {
                        if x == r {
                            continue;
                        }
                        let delta = a.mul(&lambda).expect("degrees within bounds");
                        let col = &mut self.maps[i][y];
                        let entry = match col.remove(&x) {
                            Some(old) => old.add(&delta).expect("same ring"),
                            None => delta,
                        };
                        if !entry.is_zero() {
                            col.insert(x, entry);
                        }
                    }
                }
                alive[i][c] = false;
                alive[i - 1][r] = false;
                self.maps[i][c].clear();
                if i + 1 < levels {
                    for col in self.maps[i + 1].iter_mut() {
                        col.remove(&c);
                    }
                }
                if i >= 2 {
                    self.maps[i - 1][r].clear();
                }
            }
        }
        // compact
        let remap: Vec<Vec<Option<usize>>> = alive
            .iter()
            .map(|a| {
                let mut next = 0;
                a.iter()
                    .map(|&live| {
                        live.then(|| {
                            next += 1;
                            next - 1
                        })
                    })
                    .collect()
            })
            .collect();
        let mut degrees = Vec::new();
        let mut maps = Vec::new();
        for i in 0..levels {
            let d: Vec<i32> = self.degrees[i]
                .iter()
                .zip(&alive[i])
                .filter(|(_, &a)| a)
                .map(|(d, _)| *d)
                .collect();
            if d.is_empty() {
                break;
            }
            degrees.push(d);
            if i == 0 {
                maps.push(Vec::new());
                continue;
            }
            let cols: Vec<Column<K>> = self.maps[i]
                .iter()
                .zip(&alive[i])
                .filter(|(_, &a)| a)
                .map(|(col, _)| {
                    col.iter()
                        .map(|(r, p)| (remap[i - 1][*r].expect("live row"), p.clone()))
                        .collect()
                })
                .collect();
            maps.push(cols);
        }
        self.degrees = degrees;
        self.maps = maps;
        self.minimal = true;
    }

    /// Graded ranks of the modules of the resolution.
    pub fn betti(&self) -> BettiTable {
        let mut t = BettiTable::default();
        for (i, ds) in self.degrees.iter().enumerate() {
            for &d in ds {
                *t.entries.entry((i, d)).or_insert(0) += 1;
            }
        }
        t
    }

    /// Minimal Betti numbers read off this (possibly non-minimal)
    /// resolution as `dim Tor_i(S/I, K)_j`: the ranks of `F_i` in degree `j`
    /// minus the ranks of the constant parts of `d_i` and `d_{i+1}`.
    pub fn betti_via_tor(&self) -> BettiTable {
        let k = self.ring.field();
        let const_rank = |i: usize, j: i32| -> usize {
            if i == 0 || i >= self.degrees.len() {
                return 0;
            }
            let rows: Vec<usize> = (0..self.degrees[i - 1].len())
                .filter(|&r| self.degrees[i - 1][r] == j)
                .collect();
            let cols: Vec<usize> = (0..self.degrees[i].len())
                .filter(|&c| self.degrees[i][c] == j)
                .collect();
            if rows.is_empty() || cols.is_empty() {
                return 0;
            }
            let dense: Vec<Vec<K::Elem>> = cols
                .iter()
                .map(|&c| {
                    rows.iter()
                        .map(|r| match self.maps[i][c].get(r) {
                            Some(p) if p.is_constant() => p.lead_coef().unwrap().clone(),
                            _ => k.zero(),
                        })
                        .collect()
                })
                .collect();
            oracle::rank(k, dense)
        };
        let mut t = BettiTable::default();
        for (i, ds) in self.degrees.iter().enumerate() {
            let mut by_deg: BTreeMap<i32, usize> = BTreeMap::new();
            for &d in ds {
                *by_deg.entry(d).or_insert(0) += 1;
            }
            for (j, f) in by_deg {
                let b = f - const_rank(i, j) - const_rank(i + 1, j);
                if b > 0 {
                    t.entries.insert((i, j), b);
                }
            }
        }
        t
    }

    /// Checks `d_i ∘ d_{i+1} = 0` for every `i`.
    pub fn is_complex(&self) -> Result<bool> {
        for i in 1..self.maps.len().saturating_sub(1) {
            let nrows = self.degrees[i - 1].len();
            for col in &self.maps[i + 1] {
                let mut acc: Vec<Polynomial<K>> = vec![Polynomial::zero(&self.ring); nrows];
                for (&y, a) in col {
                    for (&x, b) in &self.maps[i][y] {
                        acc[x] = acc[x].add(&a.mul(b)?)?;
                    }
                }
                if acc.iter().any(|p| !p.is_zero()) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The entries of `d_1`, i.e. the generators of `I` used by the resolution.
    pub fn generators(&self) -> Vec<Polynomial<K>> {
        self.maps
            .get(1)
            .map(|cols| {
                cols.iter()
                    .map(|c| {
                        c.get(&0)
                            .cloned()
                            .unwrap_or_else(|| Polynomial::zero(&self.ring))
                    })
                    .collect()
            })
            .unwrap_or_default()
    }
}

fn column_of<K: Field>(v: &FreeModuleVector<K>) -> Column<K> {
    let ring = v.module().ring();
    let mut parts: BTreeMap<usize, Vec<_>> = BTreeMap::new();
    for t in v.terms() {
        parts
            .entry(t.comp as usize)
            .or_default()
            .push((t.mon, t.coef.clone()));
    }
    parts
        .into_iter()
        .map(|(c, terms)| (c, Polynomial::from_terms(ring, terms)))
        .collect()
}

/// Graded Betti numbers `beta_{i,j}` (homological index `i`, internal
/// degree `j`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BettiTable {
    pub entries: BTreeMap<(usize, i32), usize>,
}

impl Serialize for BettiTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let rows: Vec<(usize, i32, usize)> =
            self.entries.iter().map(|(&(i, j), &b)| (i, j, b)).collect();
        let mut st = s.serialize_struct("BettiTable", 3)?;
        st.serialize_field("entries", &rows)?;
        st.serialize_field("totals", &self.totals())?;
        st.serialize_field("projective_dimension", &self.projective_dimension())?;
        st.end()
    }
}

impl BettiTable {
    pub fn get(&self, i: usize, j: i32) -> usize {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Total rank of each `F_i`.
    pub fn totals(&self) -> Vec<usize> {
        let mut t = vec![0; self.projective_dimension().map(|p| p + 1).unwrap_or(0)];
        for (&(i, _), &b) in &self.entries {
            t[i] += b;
        }
        t
    }

    pub fn projective_dimension(&self) -> Option<usize> {
        self.entries
            .iter()
            .filter(|(_, &b)| b > 0)
            .map(|(&(i, _), _)| i)
            .max()
    }

    /// `sum_i (-1)^i sum_j beta_{i,j} dim S_{t-j}`: the Hilbert function of
    /// the resolved module in degree `t`.
    pub fn hilbert_value(&self, nvars: usize, t: i64) -> i64 {
        let mut acc = 0i64;
        for (&(i, j), &b) in &self.entries {
            let d = t - j as i64;
            if d < 0 {
                continue;
            }
            let dim = binomial(d + nvars as i64 - 1, nvars as i64 - 1);
            let sign = if i % 2 == 0 { 1 } else { -1 };
            acc += sign * b as i64 * dim;
        }
        acc
    }

    /// Internal degrees of the `i`-th module, with multiplicity.
    pub fn degrees(&self, i: usize) -> Vec<i32> {
        let mut out = Vec::new();
        for (&(h, j), &b) in &self.entries {
            if h == i {
                out.extend(std::iter::repeat_n(j, b));
            }
        }
        out
    }
}

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc as i64
}

const CELL: usize = 5;

/// CoCoA-style diagram: columns are homological degrees, rows `j - i`,
/// `-` for zero, a final `Tot:` row.
impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(pd) = self.projective_dimension() else {
            return writeln!(f, "(zero module)");
        };
        let rows: Vec<i32> = self.entries.keys().map(|&(i, j)| j - i as i32).collect();
        let (lo, hi) = (*rows.iter().min().unwrap(), *rows.iter().max().unwrap());
        let mut head = " ".repeat(CELL - 1);
        for i in 0..=pd {
            head.push_str(&format!("{i:>CELL$}"));
        }
        writeln!(f, "{head}")?;
        let rule = "-".repeat(CELL * (pd + 2));
        writeln!(f, "{rule}")?;
        for r in lo..=hi {
            let mut line = format!("{r:>3}:");
            for i in 0..=pd {
                let b = self.get(i, r + i as i32);
                let cell = if b == 0 {
                    "-".to_string()
                } else {
                    b.to_string()
                };
                line.push_str(&format!("{cell:>CELL$}"));
            }
            writeln!(f, "{line}")?;
        }
        writeln!(f, "{rule}")?;
        let mut tot = "Tot:".to_string();
        for b in self.totals() {
            tot.push_str(&format!("{b:>CELL$}"));
        }
        writeln!(f, "{tot}")
    }
}

/// Minimal graded Betti numbers of `S/I`.
pub fn minimal_betti<K: Field>(i: &Ideal<K>) -> Result<BettiTable> {
    Ok(Resolution::minimal(i)?.betti())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn ideal(n: usize, gens: &[&str]) -> Ideal<PrimeField> {
        let r = Ring::new(PrimeField::default(), n).unwrap();
        Ideal::new(
            &r,
            gens.iter()
                .map(|s| Polynomial::parse(&r, s).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn check(i: &Ideal<PrimeField>) -> BettiTable {
        let nonmin = Resolution::schreyer(i).unwrap();
        assert!(nonmin.is_complex().unwrap());
        let tor = nonmin.betti_via_tor();
        let mut res = nonmin.clone();
        res.minimalize();
        assert!(res.is_complex().unwrap());
        let b = res.betti();
        assert_eq!(b, tor);
        let h = i.hilbert().unwrap();
        for t in 0..12 {
            assert_eq!(b.hilbert_value(i.ring().nvars(), t), h.value(t), "t = {t}");
        }
        b
    }

    #[test]
    fn koszul_complex() {
        let b = check(&ideal(4, &["x0^2 + x1*x2", "x2^3 - x3^3"]));
        assert_eq!(b.totals(), vec![1, 2, 1]);
        assert_eq!(b.degrees(1), vec![2, 3]);
        assert_eq!(b.degrees(2), vec![5]);
    }

    #[test]
    fn twisted_cubic() {
        let b = check(&ideal(
            4,
            &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"],
        ));
        assert_eq!(b.totals(), vec![1, 3, 2]);
        assert_eq!(b.degrees(2), vec![3, 3]);
    }

    #[test]
    fn skew_lines_and_maximal_ideal() {
        let b = check(&ideal(4, &["x0*x2", "x0*x3", "x1*x2", "x1*x3"]));
        assert_eq!(b.totals(), vec![1, 4, 4, 1]);
        let m = check(&ideal(4, &["x0", "x1", "x2", "x3"]));
        assert_eq!(m.totals(), vec![1, 4, 6, 4, 1]);
    }

    #[test]
    fn non_minimal_generators_cancel() {
        let b = check(&ideal(
            3,
            &["x0^2", "x0*x1", "x0^2 + x0*x1", "x1^3", "x0*x2^2"],
        ));
        assert_eq!(b.get(1, 2), 2);
        assert_eq!(b.get(0, 0), 1);
    }

    #[test]
    fn diagram_layout() {
        let b = check(&ideal(4, &["x0*x2", "x0*x3", "x1*x2", "x1*x3"]));
        let expect = [
            "        0    1    2    3",
            "-------------------------",
            "  0:    1    -    -    -",
            "  1:    -    4    4    1",
            "-------------------------",
            "Tot:    1    4    4    1",
        ]
        .map(|l| format!("{l}\n"))
        .concat();
        assert_eq!(b.to_string(), expect);
    }
}
