//! Laurent polynomials over finite fields and small matrices over them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, GaloisField};

pub const DEFAULT_DEGREE_CAP: i64 = 64;

/// `F_q[t, t^-1]` with a cap on the absolute value of exponents.
#[derive(Debug, Clone)]
pub struct LaurentRing {
    field: GaloisField,
    degree_cap: i64,
}

impl LaurentRing {
    pub fn new(field: GaloisField) -> Arc<Self> {
        Self::with_cap(field, DEFAULT_DEGREE_CAP)
    }

    pub fn with_cap(field: GaloisField, degree_cap: i64) -> Arc<Self> {
        Arc::new(Self { field, degree_cap })
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn degree_cap(&self) -> i64 {
        self.degree_cap
    }

    fn check(&self, p: &LaurentPoly) -> Result<()> {
        for &e in p.terms.keys() {
            if e.abs() > self.degree_cap {
                return Err(Error::DegreeBudgetExceeded {
                    exponent: e,
                    cap: self.degree_cap,
                });
            }
        }
        Ok(())
    }
}

/// Sparse Laurent polynomial; zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Elem>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Elem) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Elem, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(e, c);
        }
        Self { terms }
    }

    pub fn from_terms(f: &GaloisField, terms: impl IntoIterator<Item = (i64, Elem)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(f, e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Elem)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn coeff(&self, e: i64) -> Elem {
        self.terms.get(&e).copied().unwrap_or(0)
    }

    /// Lowest exponent (the t-adic valuation), `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `c t^e` with `c != 0`, if the polynomial is a single term.
    pub fn as_monomial(&self) -> Option<(Elem, i64)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(&e, &c)| (c, e))
        } else {
            None
        }
    }

    pub fn add_term(&mut self, f: &GaloisField, e: i64, c: Elem) {
        if c == 0 {
            return;
        }
        let v = f.add(self.coeff(e), c);
        if v == 0 {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    pub fn add(&self, f: &GaloisField, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(f, e, c);
        }
        out
    }

    pub fn neg(&self, f: &GaloisField) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, &c)| (e, f.neg(c))).collect(),
        }
    }

    pub fn sub(&self, f: &GaloisField, other: &Self) -> Self {
        self.add(f, &other.neg(f))
    }

    pub fn mul(&self, f: &GaloisField, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                out.add_term(f, e1 + e2, f.mul(c1, c2));
            }
        }
        out
    }

    /// `c t^e · self`.
    pub fn scale(&self, f: &GaloisField, c: Elem, e: i64) -> Self {
        if c == 0 {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&k, &v)| (k + e, f.mul(v, c)))
                .collect(),
        }
    }

    /// Substitutes `t -> t^-1`.
    pub fn invert_variable(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, &c)| (-e, c)).collect(),
        }
    }

    /// Applies a field map to every coefficient.
    pub fn map_coeffs(&self, mut g: impl FnMut(Elem) -> Elem) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter_map(|(&e, &c)| {
                    let v = g(c);
                    (v != 0).then_some((e, v))
                })
                .collect(),
        }
    }

    /// `[exponent, coefficient]` pairs in increasing exponent order.
    pub fn to_pairs(&self) -> Vec<(i64, String)> {
        self.terms
            .iter()
            .map(|(&e, &c)| (e, c.to_string()))
            .collect()
    }

    pub fn format(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&e, &c)| match (e, c) {
                (0, _) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, _) => format!("{c}t"),
                (_, 1) => format!("t^{e}"),
                _ => format!("{c}t^{e}"),
            })
            .collect();
        parts.join(" + ")
    }
}

/// Square matrix over `F_q[t, t^-1]`, stored row-major.
#[derive(Clone)]
pub struct LaurentMatrix {
    ring: Arc<LaurentRing>,
    n: usize,
    entries: Vec<LaurentPoly>,
}

impl PartialEq for LaurentMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.entries == other.entries
    }
}

impl Eq for LaurentMatrix {}

impl std::hash::Hash for LaurentMatrix {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.entries.hash(state);
    }
}

impl fmt::Debug for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).format()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl LaurentMatrix {
    pub fn identity(ring: &Arc<LaurentRing>, n: usize) -> Self {
        let mut entries = vec![LaurentPoly::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = LaurentPoly::constant(1);
        }
        Self {
            ring: ring.clone(),
            n,
            entries,
        }
    }

    /// Builds a matrix without checking the determinant.
    pub fn from_rows(ring: &Arc<LaurentRing>, rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let n = rows.len();
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    row,
                    len: r.len(),
                });
            }
        }
        let m = Self {
            ring: ring.clone(),
            n,
            entries: rows.into_iter().flatten().collect(),
        };
        for p in &m.entries {
            ring.check(p)?;
        }
        Ok(m)
    }

    /// Builds a matrix and checks that it lies in `SL_n` for `n` in {2, 3}.
    pub fn special(ring: &Arc<LaurentRing>, rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let m = Self::from_rows(ring, rows)?;
        if !(2..=3).contains(&m.n) {
            return Err(Error::UnsupportedSize(m.n));
        }
        let d = m.det();
        if d != LaurentPoly::constant(1) {
            return Err(Error::NotUnimodular(format!(
                "determinant is {}",
                d.format()
            )));
        }
        Ok(m)
    }

    pub fn ring(&self) -> &Arc<LaurentRing> {
        &self.ring
    }

    pub fn field(&self) -> &GaloisField {
        &self.ring.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: LaurentPoly) {
        self.entries[i * self.n + j] = p;
    }

    pub fn rows(&self) -> Vec<Vec<LaurentPoly>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let f = self.field();
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = LaurentPoly::zero();
                for k in 0..n {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc.add(f, &a.mul(f, other.get(k, j)));
                }
                self.ring.check(&acc)?;
                entries.push(acc);
            }
        }
        Ok(Self {
            ring: self.ring.clone(),
            n,
            entries,
        })
    }

    /// Product of a sequence of matrices (identity for an empty sequence).
    pub fn product<'a>(
        ring: &Arc<LaurentRing>,
        n: usize,
        ms: impl IntoIterator<Item = &'a Self>,
    ) -> Result<Self> {
        let mut acc = Self::identity(ring, n);
        for m in ms {
            acc = acc.mul(m)?;
        }
        Ok(acc)
    }

    pub fn det(&self) -> LaurentPoly {
        let f = self.field();
        let g = |i, j| self.get(i, j);
        match self.n {
            1 => g(0, 0).clone(),
            2 => g(0, 0).mul(f, g(1, 1)).sub(f, &g(0, 1).mul(f, g(1, 0))),
            _ => {
                let mut acc = LaurentPoly::zero();
                for c in 0..3 {
                    let minor = g(1, (c + 1) % 3)
                        .mul(f, g(2, (c + 2) % 3))
                        .sub(f, &g(1, (c + 2) % 3).mul(f, g(2, (c + 1) % 3)));
                    acc = acc.add(f, &g(0, c).mul(f, &minor));
                }
                acc
            }
        }
    }

    /// Inverse of a determinant-one matrix, by the adjugate.
    pub fn inverse(&self) -> Result<Self> {
        let f = self.field().clone();
        let d = self.det();
        if d != LaurentPoly::constant(1) {
            return Err(Error::NotUnimodular(format!(
                "determinant is {}",
                d.format()
            )));
        }
        let n = self.n;
        let g = |i: usize, j: usize| self.get(i, j);
        let mut out = Self::identity(&self.ring, n);
        match n {
            2 => {
                out.set(0, 0, g(1, 1).clone());
                out.set(0, 1, g(0, 1).neg(&f));
                out.set(1, 0, g(1, 0).neg(&f));
                out.set(1, 1, g(0, 0).clone());
            }
            3 => {
                for i in 0..3 {
                    for j in 0..3 {
                        // cofactor of (j, i) with cyclic index trick
                        let (r1, r2) = ((j + 1) % 3, (j + 2) % 3);
                        let (c1, c2) = ((i + 1) % 3, (i + 2) % 3);
                        let v = g(r1, c1)
                            .mul(&f, g(r2, c2))
                            .sub(&f, &g(r1, c2).mul(&f, g(r2, c1)));
                        out.set(i, j, v);
                    }
                }
            }
            _ => return Err(Error::UnsupportedSize(n)),
        }
        for p in &out.entries {
            self.ring.check(p)?;
        }
        Ok(out)
    }

    /// Entrywise map on polynomials.
    pub fn map(&self, mut g: impl FnMut(&LaurentPoly) -> LaurentPoly) -> Self {
        Self {
            ring: self.ring.clone(),
            n: self.n,
            entries: self.entries.iter().map(&mut g).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.get(j, i).clone());
            }
        }
        out
    }

    /// `P M P` with `P` the antidiagonal permutation.
    pub fn flip(&self) -> Self {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.get(n - 1 - i, n - 1 - j).clone());
            }
        }
        out
    }

    pub fn max_abs_exponent(&self) -> i64 {
        self.entries
            .iter()
            .flat_map(|p| p.terms().map(|(e, _)| e.abs()))
            .max()
            .unwrap_or(0)
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            entries: (0..self.n)
                .map(|i| (0..self.n).map(|j| self.get(i, j).to_pairs()).collect())
                .collect(),
        }
    }
}

/// JSON shape of a Laurent matrix: each entry is a list of
/// `[exponent, "coefficient"]` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub entries: Vec<Vec<Vec<(i64, String)>>>,
}

impl MatrixJson {
    pub fn build(&self, ring: &Arc<LaurentRing>) -> Result<LaurentMatrix> {
        let f = ring.field();
        let mut rows = Vec::with_capacity(self.entries.len());
        for row in &self.entries {
            let mut out = Vec::with_capacity(row.len());
            for cell in row {
                let mut p = LaurentPoly::zero();
                for (e, c) in cell {
                    p.add_term(f, *e, f.parse(c)?);
                }
                out.push(p);
            }
            rows.push(out);
        }
        LaurentMatrix::special(ring, rows)
    }
}
