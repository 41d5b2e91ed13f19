//! Kac-Moody root data and the orders of their split tori and centers over finite fields.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::coxeter::GeneralizedCartanMatrix;
use crate::error::{Error, Result};
use crate::snf::invariant_factors;

/// A root datum on the lattice `Z^lattice_rank`: characters `c_s` are row
/// vectors in the lattice, cocharacters `h_s` row vectors in its dual.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KacMoodyRootDatum {
    gcm: GeneralizedCartanMatrix,
    lattice_rank: usize,
    c: Vec<Vec<i64>>,
    h: Vec<Vec<i64>>,
}

impl KacMoodyRootDatum {
    /// Checks shapes and the pairing `<c_s, h_t> = A[t][s]`.
    pub fn new(
        gcm: GeneralizedCartanMatrix,
        lattice_rank: usize,
        c: Vec<Vec<i64>>,
        h: Vec<Vec<i64>>,
    ) -> Result<Self> {
        let n = gcm.rank();
        for family in [&c, &h] {
            if family.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: family.len(),
                });
            }
            for v in family.iter() {
                if v.len() != lattice_rank {
                    return Err(Error::DimensionMismatch {
                        expected: lattice_rank,
                        got: v.len(),
                    });
                }
            }
        }
        let d = Self {
            gcm,
            lattice_rank,
            c,
            h,
        };
        let p = d.pairing_matrix();
        for s in 0..n {
            for t in 0..n {
                if p[s][t] != d.gcm.get(t, s) {
                    return Err(Error::PairingMismatch { s, t });
                }
            }
        }
        Ok(d)
    }

    /// Cocharacters form a basis; `c_s` is the `s`-th column of `A`.
    pub fn simply_connected(gcm: &GeneralizedCartanMatrix) -> Self {
        let n = gcm.rank();
        let c = (0..n)
            .map(|s| (0..n).map(|t| gcm.get(t, s)).collect())
            .collect();
        let h = identity(n);
        Self {
            gcm: gcm.clone(),
            lattice_rank: n,
            c,
            h,
        }
    }

    /// Characters form a basis; `h_t` is the `t`-th row of `A`.
    pub fn adjoint(gcm: &GeneralizedCartanMatrix) -> Self {
        let n = gcm.rank();
        let c = identity(n);
        let h = (0..n).map(|t| gcm.entries()[t].clone()).collect();
        Self {
            gcm: gcm.clone(),
            lattice_rank: n,
            c,
            h,
        }
    }

    /// The datum of `SL_n` over Laurent polynomials: the simply connected
    /// datum of type `A_{n-1}` extended by `c_0 = -sum c_i`, `h_0 = -sum h_i`.
    pub fn sl_n(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::UnsupportedSize(n));
        }
        let r = n - 1;
        let finite = |i: usize, j: usize| -> i64 {
            if i == j {
                2
            } else if i.abs_diff(j) == 1 {
                -1
            } else {
                0
            }
        };
        let mut c = vec![vec![0i64; r]; n];
        let mut h = vec![vec![0i64; r]; n];
        for i in 1..n {
            for j in 0..r {
                c[i][j] = finite(j, i - 1);
                h[i][j] = i64::from(j == i - 1);
                c[0][j] -= c[i][j];
                h[0][j] -= h[i][j];
            }
        }
        Self::new(affine_a(n), r, c, h)
    }

    pub fn gcm(&self) -> &GeneralizedCartanMatrix {
        &self.gcm
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice_rank
    }

    pub fn characters(&self) -> &[Vec<i64>] {
        &self.c
    }

    pub fn cocharacters(&self) -> &[Vec<i64>] {
        &self.h
    }

    /// `P[s][t] = <c_s, h_t>`.
    pub fn pairing_matrix(&self) -> Vec<Vec<i64>> {
        self.c
            .iter()
            .map(|cs| {
                self.h
                    .iter()
                    .map(|ht| cs.iter().zip(ht).map(|(a, b)| a * b).sum())
                    .collect()
            })
            .collect()
    }

    /// `|Hom(Λ, F_q^×)| = (q-1)^rank`.
    pub fn torus_order(&self, q: u64) -> BigInt {
        num_traits::pow(BigInt::from(q) - 1u32, self.lattice_rank)
    }

    /// Number of `t` in `Hom(Λ, F_q^×)` killed by every character `c_s`.
    pub fn center_order(&self, q: u64) -> BigInt {
        let m = BigInt::from(q) - 1u32;
        let rows: Vec<Vec<BigInt>> = self
            .c
            .iter()
            .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let factors = invariant_factors(&rows);
        let free = self.lattice_rank - factors.len();
        let torsion: BigInt = factors.iter().map(|d| d.gcd(&m)).product();
        torsion * num_traits::pow(m, free)
    }
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// Affine GCM of type `A_{n-1}` on generators `0..n`, with `0` the affine node.
pub fn affine_a(n: usize) -> GeneralizedCartanMatrix {
    let entries = if n == 2 {
        vec![vec![2, -2], vec![-2, 2]]
    } else {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            2
                        } else if (i + 1) % n == j || (j + 1) % n == i {
                            -1
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect()
    };
    GeneralizedCartanMatrix::from_rows(entries).expect("affine A is a valid GCM")
}

/// Datum as read from JSON.
#[derive(Debug, Clone, Deserialize)]
pub struct DatumSpec {
    pub gcm: crate::io::GcmSpec,
    pub lattice_rank: usize,
    pub c: Vec<Vec<i64>>,
    pub h: Vec<Vec<i64>>,
}

impl DatumSpec {
    pub fn build(self) -> Result<KacMoodyRootDatum> {
        KacMoodyRootDatum::new(self.gcm.build()?, self.lattice_rank, self.c, self.h)
    }
}
