//! Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Nonzero invariant factors `d_1 | d_2 | ...` of an integer matrix, all positive.
pub fn invariant_factors(matrix: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for k in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    if !m[i][j].is_zero()
                        && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return out;
            };
            m.swap(k, pi);
            for row in m.iter_mut() {
                row.swap(k, pj);
            }
            let p = m[k][k].clone();
            let mut dirty = false;
            for i in k + 1..rows {
                let f = m[i][k].div_floor(&p);
                if !f.is_zero() {
                    for j in k..cols {
                        let v = &f * &m[k][j];
                        m[i][j] -= v;
                    }
                }
                dirty |= !m[i][k].is_zero();
            }
            for j in k + 1..cols {
                let f = m[k][j].div_floor(&p);
                if !f.is_zero() {
                    for i in k..rows {
                        let v = &f * &m[i][k];
                        m[i][j] -= v;
                    }
                }
                dirty |= !m[k][j].is_zero();
            }
            if dirty {
                continue;
            }
            // the pivot must divide the rest of the block
            let offender = (k + 1..rows)
                .flat_map(|i| (k + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&m[i][j] % &p).is_zero());
            match offender {
                Some((i, _)) => {
                    for j in k..cols {
                        let v = m[i][j].clone();
                        m[k][j] += v;
                    }
                }
                None => {
                    out.push(p.abs());
                    break;
                }
            }
        }
    }
    out
}
