//! Named example inputs.

use crate::coxeter::GeneralizedCartanMatrix;
use crate::datum::{affine_a, KacMoodyRootDatum};
use crate::descent::{
    fuchsian_gcm, polygon_reflection, validate_automorphism, DiagramAutomorphism, QuasiSplitForm,
};
use crate::error::{Error, Result};

pub const NAMES: &[&str] = &[
    "a2",
    "a2tilde",
    "dinf",
    "pentagon",
    "sl2",
    "sl3",
    "fuchsian:R",
];

fn fuchsian_rank(name: &str) -> Result<Option<usize>> {
    match name.strip_prefix("fuchsian:") {
        Some(r) => r
            .parse()
            .map(Some)
            .map_err(|_| Error::Parse(format!("bad preset {name:?}"))),
        None => Ok(None),
    }
}

pub fn gcm(name: &str) -> Result<GeneralizedCartanMatrix> {
    if let Some(r) = fuchsian_rank(name)? {
        return fuchsian_gcm(r);
    }
    match name {
        "a2" => GeneralizedCartanMatrix::from_rows(vec![vec![2, -1], vec![-1, 2]]),
        "a2tilde" | "sl3" => Ok(affine_a(3)),
        "dinf" | "sl2" => Ok(affine_a(2)),
        "pentagon" => fuchsian_gcm(5),
        _ => Err(Error::Parse(format!(
            "unknown preset {name:?}; expected one of {NAMES:?}"
        ))),
    }
}

/// `sl2`/`sl3` give the Laurent-polynomial data; others the simply connected datum.
pub fn datum(name: &str) -> Result<KacMoodyRootDatum> {
    match name {
        "sl2" => KacMoodyRootDatum::sl_n(2),
        "sl3" => KacMoodyRootDatum::sl_n(3),
        _ => Ok(KacMoodyRootDatum::simply_connected(&gcm(name)?)),
    }
}

/// `a2tilde`/`sl3` twisted by the swap of types 1 and 2, `fuchsian:R` and
/// `pentagon` by the polygon reflection, everything else split.
pub fn form(name: &str, q: u64) -> Result<QuasiSplitForm> {
    let g = gcm(name)?;
    let aut = match name {
        "a2tilde" | "sl3" => validate_automorphism(&g, &[0, 2, 1])?,
        "pentagon" => validate_automorphism(&g, &polygon_reflection(5))?,
        _ => match fuchsian_rank(name)? {
            Some(r) => validate_automorphism(&g, &polygon_reflection(r))?,
            None => DiagramAutomorphism::identity(g.rank()),
        },
    };
    QuasiSplitForm::new(g, aut, Vec::new(), q)
}

/// Matrix size of the `SL_n` presets.
pub fn sl_size(name: &str) -> Result<usize> {
    match name {
        "sl2" => Ok(2),
        "sl3" => Ok(3),
        _ => Err(Error::Parse(format!(
            "preset {name:?} is not an SL_n preset"
        ))),
    }
}
