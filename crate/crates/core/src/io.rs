//! Text and JSON encodings shared by the library and the command line.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Deserialize;

use crate::coxeter::{CoxeterEntry, CoxeterMatrix, GeneralizedCartanMatrix};
use crate::error::{Error, Result};

/// Matrix file `{"labels": [...], "matrix": [[...]]}`. A matrix with 1 on
/// the diagonal is read as a Coxeter matrix (entries may be `"inf"`) and
/// replaced by its canonical integral lift.
#[derive(Debug, Clone, Deserialize)]
pub struct GcmSpec {
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    pub matrix: Vec<Vec<CoxeterEntryOrInt>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum CoxeterEntryOrInt {
    Int(i64),
    Text(String),
}

impl GcmSpec {
    pub fn build(self) -> Result<GeneralizedCartanMatrix> {
        let n = self.matrix.len();
        let labels = self
            .labels
            .unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
        let coxeter = self
            .matrix
            .iter()
            .enumerate()
            .all(|(i, r)| matches!(r.get(i), Some(CoxeterEntryOrInt::Int(1))));
        if coxeter && n > 0 {
            let entries = self
                .matrix
                .into_iter()
                .map(|r| r.into_iter().map(coxeter_entry).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let m = CoxeterMatrix::new(labels, entries)?;
            return GeneralizedCartanMatrix::lift_coxeter(&m);
        }
        let entries = self
            .matrix
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|x| match x {
                        CoxeterEntryOrInt::Int(v) => Ok(v),
                        CoxeterEntryOrInt::Text(t) => {
                            Err(Error::Parse(format!("non-integer GCM entry {t:?}")))
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        GeneralizedCartanMatrix::new(labels, entries)
    }

    pub fn from_json(text: &str) -> Result<GeneralizedCartanMatrix> {
        let spec: GcmSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.build()
    }
}

fn coxeter_entry(x: CoxeterEntryOrInt) -> Result<CoxeterEntry> {
    match x {
        CoxeterEntryOrInt::Int(v) if v >= 1 => Ok(CoxeterEntry::Finite(v as u32)),
        CoxeterEntryOrInt::Text(t) if t == "inf" => Ok(CoxeterEntry::Infinite),
        CoxeterEntryOrInt::Int(v) => Err(Error::InvalidCoxeter(format!("entry {v}"))),
        CoxeterEntryOrInt::Text(t) => Err(Error::InvalidCoxeter(format!("entry {t:?}"))),
    }
}

/// `"p/q"`, or `"p"` for integers.
pub fn rational_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from(s.parse::<BigInt>().map_err(|_| bad())?)),
    }
}
