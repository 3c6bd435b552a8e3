//! Numerical laboratory for short divisor-sum approximations to the
//! von Mangoldt function: singular series in exact rational arithmetic,
//! truncated divisor sums with their predicted main terms, pair/triple
//! and mixed correlations, short-interval moments against the Poisson
//! model, and the resulting prime-gap bound tables.
//!
//! Every long reduction is compensated and segment-deterministic, so all
//! results are independent of the worker thread count. The `examples/`
//! directory walks through each capability; the thin `divisum` binary
//! exposes the same operations as batch experiments with CSV/JSON output.

pub mod approx;
pub mod bounds;
pub mod cli;
pub mod correlate;
pub mod error;
pub mod kahan;
pub mod lemmas;
pub mod moments;
pub mod report;
pub mod series;
pub mod sieve;

pub use error::{Error, Result};
pub use sieve::FactorSieve;
