//! Growth series of Weyl groups and the lattice criterion for the associated
//! Kac-Moody groups over finite fields.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::coxeter::WeylGroup;
use crate::error::Result;
use crate::io::rational_string;

pub const DEFAULT_DEPTH: usize = 40;
pub const DEFAULT_DENOMINATOR_DEGREE: usize = 12;

/// Denominator used when bracketing `d_n^(1/n)`.
const ROOT_PRECISION: u32 = 1000;

/// Sphere sizes `d_0, ..., d_N` of a Weyl group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthSeries {
    pub coeffs: Vec<u64>,
    pub radius: usize,
    /// SHA-256 of the integer matrix the group was built from.
    pub matrix_hash: String,
}

impl GrowthSeries {
    /// True when some sphere within the radius is empty, so the group is finite.
    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().any(|&d| d == 0)
    }
}

pub fn matrix_hash(group: &WeylGroup) -> String {
    let text = serde_json::to_string(group.gcm().entries()).expect("integer matrix serializes");
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Exact `d_n` for `n <= radius` by breadth-first search.
pub fn growth_coeffs(group: &WeylGroup, radius: usize) -> Result<GrowthSeries> {
    let coeffs = group.sphere_counts(radius)?;
    Ok(GrowthSeries {
        coeffs,
        radius,
        matrix_hash: matrix_hash(group),
    })
}

/// `P(t) / Q(t)` with `Q(0) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    pub numerator: Vec<BigRational>,
    pub denominator: Vec<BigRational>,
}

impl RationalSeries {
    /// First `len` Maclaurin coefficients.
    pub fn expand(&self, len: usize) -> Vec<BigRational> {
        let mut out: Vec<BigRational> = Vec::with_capacity(len);
        for k in 0..len {
            let mut v = self
                .numerator
                .get(k)
                .cloned()
                .unwrap_or_else(BigRational::zero);
            for j in 1..self.denominator.len().min(k + 1) {
                v -= &self.denominator[j] * &out[k - j];
            }
            out.push(v);
        }
        out
    }

    pub fn is_polynomial(&self) -> bool {
        self.denominator.len() == 1
    }
}

impl Serialize for RationalSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let strs = |v: &[BigRational]| v.iter().map(rational_string).collect::<Vec<_>>();
        let mut st = s.serialize_struct("RationalSeries", 2)?;
        st.serialize_field("numerator", &strs(&self.numerator))?;
        st.serialize_field("denominator", &strs(&self.denominator))?;
        st.end()
    }
}

impl std::fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let poly = |v: &[BigRational]| {
            let terms: Vec<String> = v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| match i {
                    0 => rational_string(c),
                    1 => format!("{}t", coefficient(c)),
                    _ => format!("{}t^{i}", coefficient(c)),
                })
                .collect();
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ").replace("+ -", "- ")
            }
        };
        if self.is_polynomial() {
            write!(f, "{}", poly(&self.numerator))
        } else {
            write!(
                f,
                "({}) / ({})",
                poly(&self.numerator),
                poly(&self.denominator)
            )
        }
    }
}

fn coefficient(c: &BigRational) -> String {
    if c.is_one() {
        String::new()
    } else if *c == -BigRational::one() {
        "-".to_string()
    } else {
        rational_string(c)
    }
}

/// Smallest rational function reproducing `coeffs` exactly, searching
/// denominator degrees up to `max_den_degree`. Each candidate must be
/// determined by strictly fewer equations than are checked.
pub fn rational_series(coeffs: &[u64], max_den_degree: usize) -> Option<RationalSeries> {
    let n = coeffs.len();
    if n == 0 {
        return None;
    }
    let d: Vec<BigRational> = coeffs
        .iter()
        .map(|&x| BigRational::from(BigInt::from(x)))
        .collect();
    for total in 0..n {
        for dq in 0..=max_den_degree.min(total) {
            let dp = total - dq;
            // equations k = dp+1 .. n-1; require at least two beyond the unknowns
            if n < dp + 1 + dq + 2 {
                continue;
            }
            let rows: Vec<Vec<BigRational>> = (dp + 1..n)
                .map(|k| {
                    let mut row: Vec<BigRational> = (1..=dq)
                        .map(|j| {
                            if j <= k {
                                d[k - j].clone()
                            } else {
                                BigRational::zero()
                            }
                        })
                        .collect();
                    row.push(-d[k].clone());
                    row
                })
                .collect();
            let Some(tail) = solve_consistent(rows, dq) else {
                continue;
            };
            let mut denominator = vec![BigRational::one()];
            denominator.extend(tail);
            let numerator: Vec<BigRational> = (0..=dp.min(n - 1))
                .map(|k| (0..=dq.min(k)).map(|j| &denominator[j] * &d[k - j]).sum())
                .collect();
            let candidate = RationalSeries {
                numerator: trim(numerator),
                denominator,
            };
            if candidate.expand(n) == d {
                return Some(candidate);
            }
        }
    }
    None
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

/// Solves an augmented system `[A | b]` with `unknowns` columns, returning
/// one solution if the system is consistent.
fn solve_consistent(mut rows: Vec<Vec<BigRational>>, unknowns: usize) -> Option<Vec<BigRational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..unknowns {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..=unknowns {
                    let v = &f * &rows[r][j];
                    rows[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[unknowns].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); unknowns];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i][unknowns].clone();
    }
    Some(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Lattice,
    NotLattice,
    BoundaryUndetermined,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Lattice => "lattice",
            Verdict::NotLattice => "not-lattice",
            Verdict::BoundaryUndetermined => "boundary-undetermined",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeReport {
    pub q: u64,
    pub depth: usize,
    pub torus_rank: usize,
    pub verdict: Verdict,
    pub finite_weyl_group: bool,
    #[serde(serialize_with = "ser_rational")]
    pub partial_sum: BigRational,
    #[serde(serialize_with = "ser_pair")]
    pub growth_rate_bounds: (BigRational, BigRational),
    #[serde(serialize_with = "ser_rational")]
    pub covolume_bound: BigRational,
}

fn ser_rational<S: Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(x))
}

fn ser_pair<S: Serializer>(
    x: &(BigRational, BigRational),
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    [rational_string(&x.0), rational_string(&x.1)].serialize(s)
}

/// `Σ_{n ≤ N} d_n / q^n`.
pub fn partial_sum(coeffs: &[u64], q: u64) -> BigRational {
    let q = BigInt::from(q);
    let mut pow = BigInt::one();
    let mut acc = BigRational::zero();
    for &d in coeffs {
        acc += BigRational::new(BigInt::from(d), pow.clone());
        pow *= &q;
    }
    acc
}

/// Rational bracket `[k/P, (k+1)/P]` of `x^(1/n)` with `P` the root precision.
fn root_bracket(x: u64, n: usize) -> (BigRational, BigRational) {
    let p = BigInt::from(ROOT_PRECISION);
    let target = BigInt::from(x) * num_traits::pow(p.clone(), n);
    let k = target.nth_root(n as u32);
    (
        BigRational::new(k.clone(), p.clone()),
        BigRational::new(k + 1u32, p),
    )
}

/// Growth-rate bracket from the tail window `[N/2, N]`: the extreme values of
/// the ratios `d_{n+1}/d_n` and of the brackets of `d_n^(1/n)`.
pub fn growth_rate_bounds(coeffs: &[u64]) -> (BigRational, BigRational) {
    let n = coeffs.len().saturating_sub(1);
    if coeffs.iter().any(|&d| d == 0) || n == 0 {
        return (BigRational::zero(), BigRational::zero());
    }
    let start = (n / 2).max(1);
    let mut lower: Option<BigRational> = None;
    let mut upper: Option<BigRational> = None;
    let mut push = |lo: BigRational, hi: BigRational| {
        if lower.as_ref().map_or(true, |l| lo < *l) {
            lower = Some(lo);
        }
        if upper.as_ref().map_or(true, |u| hi > *u) {
            upper = Some(hi);
        }
    };
    for k in start..=n {
        if k < n {
            let r = BigRational::new(BigInt::from(coeffs[k + 1]), BigInt::from(coeffs[k]));
            push(r.clone(), r);
        }
        let (lo, hi) = root_bracket(coeffs[k], k);
        push(lo, hi);
    }
    (
        lower.unwrap_or_else(BigRational::zero),
        upper.unwrap_or_else(BigRational::zero),
    )
}

/// Lattice verdict from precomputed growth coefficients.
pub fn lattice_report(series: &GrowthSeries, q: u64, torus_rank: usize) -> LatticeReport {
    let finite = series.is_finite();
    let sum = partial_sum(&series.coeffs, q);
    let bounds = growth_rate_bounds(&series.coeffs);
    let qr = BigRational::from(BigInt::from(q));
    let verdict = if finite || bounds.1 < qr {
        Verdict::Lattice
    } else if bounds.0 > qr {
        Verdict::NotLattice
    } else {
        Verdict::BoundaryUndetermined
    };
    let torus = num_traits::pow(BigInt::from(q) - 1u32, torus_rank);
    let covolume_bound = if torus.is_positive() {
        &sum / BigRational::from(torus)
    } else {
        sum.clone()
    };
    LatticeReport {
        q,
        depth: series.radius,
        torus_rank,
        verdict,
        finite_weyl_group: finite,
        partial_sum: sum,
        growth_rate_bounds: bounds,
        covolume_bound,
    }
}

/// Enumerates the growth series to depth `n` and applies the lattice criterion.
pub fn lattice_check(
    group: &WeylGroup,
    q: u64,
    n: usize,
    torus_rank: usize,
) -> Result<LatticeReport> {
    let series = growth_coeffs(group, n)?;
    Ok(lattice_report(&series, q, torus_rank))
}

/// Approximate decimal rendering of a rational, for human-readable reports.
pub fn approx(x: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let v = (x * BigRational::from(scale.clone())).round().to_integer();
    let neg = v.is_negative();
    let v = v.abs();
    let int = &v / &scale;
    let frac = (&v % &scale).to_u64().unwrap_or(0);
    format!(
        "{}{}.{:0width$}",
        if neg { "-" } else { "" },
        int,
        frac,
        width = digits
    )
}
