//! Builders for the concrete matroids used throughout the crate.

mod graph;
mod parallel;
mod theta;

pub use graph::{graphic, Edge, Graph};
pub use parallel::{parallel_connection, two_sum};
pub use theta::{theta, theta_double, theta_with_seed, ThetaSpec, DEFAULT_THETA_SEED};

use crate::error::{Error, Result};
use crate::matroid::{default_labels, Matroid};
use crate::set::MAX_ELEMENTS;

const FIG1_TEXT: &str = include_str!("../../fixtures/fig1.graph");
const FIG2_TEXT: &str = include_str!("../../fixtures/fig2.graph");

/// `U_{r,n}` with labels `0..n`.
pub fn uniform(r: usize, n: usize) -> Result<Matroid> {
    if r > n || n == 0 || n > MAX_ELEMENTS {
        return Err(Error::BadParams(format!("uniform({r}, {n}) needs 0 <= r <= n, 1 <= n <= {MAX_ELEMENTS}")));
    }
    Matroid::from_rank_fn(default_labels(n), |x| (x.count_ones() as usize).min(r), false)
}

/// `M(W_k)`.
pub fn wheel(k: usize) -> Result<Matroid> {
    if k < 3 {
        return Err(Error::BadParams(format!("wheel needs at least 3 spokes, got {k}")));
    }
    graphic(&Graph::wheel(k))
}

/// `M(K_n)`.
pub fn complete(n: usize) -> Result<Matroid> {
    graphic(&Graph::complete(n))
}

/// `K5` minus one edge, with its 4-cycle labelled `a b c d`.
pub fn k5_minus_e_graph() -> Graph {
    Graph::parse(FIG2_TEXT).expect("bundled fixture parses")
}

pub fn k5_minus_e() -> Matroid {
    graphic(&k5_minus_e_graph()).expect("9 edges")
}

/// The 11-vertex graph whose centre star is the cocircuit of the
/// cocircuit-contraction example.
pub fn fig1_graph() -> Graph {
    Graph::parse(FIG1_TEXT).expect("bundled fixture parses")
}

pub fn fig1_matroid() -> Matroid {
    graphic(&fig1_graph()).expect("24 edges")
}
