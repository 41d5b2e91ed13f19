//! Real root systems and the twin apartment.

mod apartment;
mod system;

pub use apartment::{ApartmentPoint, BalancedPair, Normalized, PhiSets};
pub use system::{
    by_height, vector_set, IntervalResult, Prenilpotence, Root, RootSystem, DEFAULT_HEIGHT_CAP,
    DEFAULT_RADIUS,
};
