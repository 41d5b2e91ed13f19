//! Generalized Cartan matrices, Coxeter matrices and Weyl group arithmetic.

mod gcm;
mod vector;
mod weyl;

pub use gcm::{determinant, CoxeterEntry, CoxeterMatrix, GeneralizedCartanMatrix};
pub use vector::{RootVector, Sign};
pub use weyl::{ProductOrder, WeylElement, WeylGroup, DEFAULT_ELEMENT_CAP};
