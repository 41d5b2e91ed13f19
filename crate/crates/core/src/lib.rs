//! Exact computations for split and quasi-split Kac-Moody groups: Weyl
//! groups of generalized Cartan matrices, real roots, root data, growth
//! series, the Laurent-polynomial model of affine SL2/SL3 and Galois descent.

pub mod coxeter;
pub mod datum;
pub mod descent;
pub mod error;
pub mod field;
pub mod growth;
pub mod io;
pub mod laurent;
pub mod presets;
pub mod roots;
pub mod sl;
pub mod snf;

pub use error::{Error, Result};
