//! Desk-scale local entropy theory for `Z^d` shift actions.
//!
//! The crate makes the constructive side of entropy theory for amenable
//! group actions executable on small instances:
//!
//! - [`group`]: the acting group `Z^d`, finite subsets, boundaries,
//!   invariance diagnostics, and Følner sequences.
//! - [`tiling`]: ε-disjoint families, δ-even covers, and the greedy
//!   Ornstein–Weiss quasi-tiling construction.
//! - [`subshift`] / [`lang`]: subshifts of finite type, their window
//!   languages, cylinder sets, covers and partitions.
//! - [`measures`]: invariant measures with exact cylinder masses
//!   (Bernoulli, Markov, periodic, convex mixes, empirical).
//! - [`entropy`]: subcover counts, Shannon entropy, static cover entropy,
//!   topological and measure-theoretic entropy estimates along Følner
//!   windows, the Katok counting statistic, separated sets, and a
//!   variational-principle checker.
//! - [`tuples`]: entropy-pair/tuple detection and u.p.e. heuristics.
//!
//! All entropies are in nats (natural logarithm). Estimates report raw
//! window sequences together with a certified running-infimum upper bound;
//! nothing is extrapolated.

#![forbid(unsafe_code)]

use thiserror::Error;

pub mod entropy;
pub mod group;
pub mod io;
pub mod lang;
pub mod measures;
pub mod subshift;
pub mod tiling;
pub mod tuples;
pub mod window;

pub use entropy::EntropyEstimate;
pub use group::{FiniteSubset, FolnerSequence, GroupElement, InvarianceReport};
pub use measures::Measure;
pub use subshift::{Alphabet, Cover, Partition, Pattern, Sft, SymbolicSet};
pub use tiling::QuasiTiling;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("empty set where a non-empty finite subset is required")]
    EmptySet,

    #[error("parameter out of range: {0}")]
    BadParameter(String),

    #[error("unknown Følner kind or index out of range: {0}")]
    BadFolner(String),

    #[error("symbol not in alphabet: {0}")]
    UnknownSymbol(String),

    #[error("inconsistent pattern: {0}")]
    BadPattern(String),

    #[error("the SFT has empty language")]
    EmptyLanguage,

    #[error("window does not contain shape {0:?}")]
    WindowTooSmall(Vec<Vec<i64>>),

    #[error("enumeration budget exceeded ({0} items)")]
    BudgetExceeded(usize),

    #[error("family is not a cover on the window: pattern {0} is uncovered")]
    NotACover(String),

    #[error("family is not a partition on the window: {0}")]
    NotAPartition(String),

    #[error("not an even cover: {0}")]
    NotAnEvenCover(String),

    #[error("measure error: {0}")]
    Measure(String),

    #[error("unsupported measure class: {0}")]
    UnsupportedMeasure(String),

    #[error("cylinder shape escapes the master window of the empirical measure")]
    EscapesMasterWindow,

    #[error("tuple candidate error: {0}")]
    BadCandidate(String),

    #[error("I/O format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// `φ(t) = −t·log t` with `φ(0) = 0`, the entropy summand (natural log).
#[inline]
pub fn phi(t: f64) -> f64 {
    if t > 0.0 {
        -t * t.ln()
    } else {
        0.0
    }
}
