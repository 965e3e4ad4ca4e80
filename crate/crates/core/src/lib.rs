//! Exhaustive small-matroid toolkit: rank-table matroids, connectivity,
//! fans, segments and spores, minor testing, and a classifier for
//! cocircuit contractions that keep an `N`-minor.

pub mod catalogue;
pub mod cli;
pub mod connectivity;
pub mod constructions;
pub mod error;
pub mod iso;
pub mod matroid;
pub mod minors;
pub mod props;
pub mod set;
pub mod structures;
pub mod sweep;
pub mod theorem;
pub mod verify;
pub mod witness;

pub use error::{Error, Result};
pub use matroid::Matroid;
pub use set::ElementSet;
