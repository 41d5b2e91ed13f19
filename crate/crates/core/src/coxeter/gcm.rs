//! Generalized Cartan matrices and the Coxeter matrices they determine.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integer matrix with 2 on the diagonal, non-positive off-diagonal
/// entries and a symmetric zero pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GeneralizedCartanMatrix {
    labels: Vec<String>,
    #[serde(rename = "matrix")]
    entries: Vec<Vec<i64>>,
}

impl GeneralizedCartanMatrix {
    /// Validates `entries` against the GCM axioms.
    ///
    /// Axioms are checked row by row, so the reported entry is the first
    /// offender in row-major order.
    pub fn new(labels: Vec<String>, entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = entries.len();
        for (row, r) in entries.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    row,
                    len: r.len(),
                });
            }
        }
        if labels.len() != n {
            return Err(Error::LabelCount {
                labels: labels.len(),
                size: n,
            });
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let a = entries[i][j];
                if i == j {
                    if a != 2 {
                        return Err(Error::NonTwoDiagonal { index: i, value: a });
                    }
                } else if a > 0 {
                    return Err(Error::PositiveOffDiagonal {
                        row: i,
                        col: j,
                        value: a,
                    });
                } else if a == 0 && entries[j][i] != 0 {
                    return Err(Error::AsymmetricZero { row: i, col: j });
                }
            }
        }
        Ok(Self { labels, entries })
    }

    /// Validates with labels `"0"`, `"1"`, ...
    pub fn from_rows(entries: Vec<Vec<i64>>) -> Result<Self> {
        let labels = (0..entries.len()).map(|i| i.to_string()).collect();
        Self::new(labels, entries)
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, s: usize, t: usize) -> i64 {
        self.entries[s][t]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Coxeter matrix: products 0, 1, 2, 3 give 2, 3, 4, 6 and anything
    /// larger gives infinity.
    pub fn coxeter_matrix(&self) -> CoxeterMatrix {
        let n = self.rank();
        let entries = (0..n)
            .map(|s| {
                (0..n)
                    .map(|t| {
                        if s == t {
                            CoxeterEntry::Finite(1)
                        } else {
                            match self.entries[s][t] * self.entries[t][s] {
                                0 => CoxeterEntry::Finite(2),
                                1 => CoxeterEntry::Finite(3),
                                2 => CoxeterEntry::Finite(4),
                                3 => CoxeterEntry::Finite(6),
                                _ => CoxeterEntry::Infinite,
                            }
                        }
                    })
                    .collect()
            })
            .collect();
        CoxeterMatrix {
            labels: self.labels.clone(),
            entries,
        }
    }

    /// Submatrix on the index subset `j` (in the given order).
    pub fn restrict(&self, j: &[usize]) -> Self {
        let entries = j
            .iter()
            .map(|&s| j.iter().map(|&t| self.entries[s][t]).collect())
            .collect();
        let labels = j.iter().map(|&s| self.labels[s].clone()).collect();
        Self { labels, entries }
    }

    /// Reindexes generators: new index `i` is old index `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        self.restrict(perm)
    }

    /// Finite type test on the subset `j`: every principal minor of `A_J`
    /// is strictly positive. The empty subset is of finite type.
    pub fn is_finite_type(&self, j: &[usize]) -> bool {
        let k = j.len();
        // every non-empty subset of J indexes a principal minor
        if k > 20 {
            // 2^20 minors is already absurd for this library
            return false;
        }
        for mask in 1u32..(1u32 << k) {
            let idx: Vec<usize> = (0..k)
                .filter(|b| mask & (1 << b) != 0)
                .map(|b| j[b])
                .collect();
            let m: Vec<Vec<BigInt>> = idx
                .iter()
                .map(|&s| {
                    idx.iter()
                        .map(|&t| BigInt::from(self.entries[s][t]))
                        .collect()
                })
                .collect();
            if !determinant(m).is_positive() {
                return false;
            }
        }
        true
    }

    /// Finite type test on the whole index set.
    pub fn is_finite(&self) -> bool {
        let all: Vec<usize> = (0..self.rank()).collect();
        self.is_finite_type(&all)
    }

    /// Canonical integer lift of a Coxeter matrix with entries in
    /// {2, 3, 4, 6, inf}. The larger absolute value sits on the later row.
    pub fn lift_coxeter(m: &CoxeterMatrix) -> Result<Self> {
        let n = m.rank();
        let mut a = vec![vec![0i64; n]; n];
        for s in 0..n {
            a[s][s] = 2;
            for t in (s + 1)..n {
                let (small, large) = match m.get(s, t) {
                    CoxeterEntry::Finite(2) => (0, 0),
                    CoxeterEntry::Finite(3) => (-1, -1),
                    CoxeterEntry::Finite(4) => (-1, -2),
                    CoxeterEntry::Finite(6) => (-1, -3),
                    CoxeterEntry::Infinite => (-2, -2),
                    CoxeterEntry::Finite(other) => {
                        return Err(Error::InvalidCoxeter(format!(
                            "entry {other} at ({s},{t}) has no integral lift"
                        )))
                    }
                };
                a[s][t] = small;
                a[t][s] = large;
            }
        }
        Self::new(m.labels.clone(), a)
    }
}

impl fmt::Display for GeneralizedCartanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Entry of a Coxeter matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoxeterEntry {
    Finite(u32),
    Infinite,
}

impl CoxeterEntry {
    pub fn is_finite(self) -> bool {
        matches!(self, CoxeterEntry::Finite(_))
    }
}

impl fmt::Display for CoxeterEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoxeterEntry::Finite(m) => write!(f, "{m}"),
            CoxeterEntry::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for CoxeterEntry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CoxeterEntry::Finite(m) => s.serialize_u32(*m),
            CoxeterEntry::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for CoxeterEntry {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u32),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(m) => Ok(CoxeterEntry::Finite(m)),
            Raw::Str(s) if s == "inf" || s == "∞" => Ok(CoxeterEntry::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad Coxeter entry {s:?}"))),
        }
    }
}

/// Symmetric matrix with 1 on the diagonal and entries in {2,3,4,6,inf} off it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CoxeterMatrix {
    labels: Vec<String>,
    #[serde(rename = "matrix")]
    entries: Vec<Vec<CoxeterEntry>>,
}

impl CoxeterMatrix {
    pub fn new(labels: Vec<String>, entries: Vec<Vec<CoxeterEntry>>) -> Result<Self> {
        let n = entries.len();
        if labels.len() != n {
            return Err(Error::LabelCount {
                labels: labels.len(),
                size: n,
            });
        }
        for (row, r) in entries.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    row,
                    len: r.len(),
                });
            }
        }
        for s in 0..n {
            if entries[s][s] != CoxeterEntry::Finite(1) {
                return Err(Error::InvalidCoxeter(format!(
                    "diagonal entry {s} is not 1"
                )));
            }
            for t in 0..n {
                if entries[s][t] != entries[t][s] {
                    return Err(Error::InvalidCoxeter(format!("not symmetric at ({s},{t})")));
                }
                if s != t {
                    if let CoxeterEntry::Finite(m) = entries[s][t] {
                        if ![2, 3, 4, 6].contains(&m) {
                            return Err(Error::InvalidCoxeter(format!(
                                "entry {m} at ({s},{t}) not in {{2,3,4,6,inf}}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(Self { labels, entries })
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, s: usize, t: usize) -> CoxeterEntry {
        self.entries[s][t]
    }

    pub fn entries(&self) -> &[Vec<CoxeterEntry>] {
        &self.entries
    }
}

impl fmt::Display for CoxeterMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Fraction-free (Bareiss) determinant.
pub fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}
