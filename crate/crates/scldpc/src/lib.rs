//! Iterative decoding thresholds of protograph-based non-binary
//! spatially-coupled LDPC ensembles.
//!
//! The library computes BP thresholds on the binary erasure channel via
//! non-binary density evolution over GF(2^m) (subspace-dimension messages)
//! and on the BPSK-modulated AWGN channel via non-binary EXIT analysis
//! (scalar mutual-information messages), under both flooding-schedule and
//! windowed decoding. A decoding-complexity model relates window size,
//! field size, and latency.
//!
//! Entry points:
//! - [`protograph`]: base matrices, edge spreading, coupled ensembles,
//!   window sub-views, and the built-in ensemble catalog.
//! - [`subspace`]: Gaussian binomials and the dimension-transition kernels
//!   used by erasure-channel density evolution, plus an exhaustive
//!   enumeration oracle that certifies the closed forms for small `m`.
//! - [`de_bec`] / [`exit_awgn`]: the two evaluation engines.
//! - [`threshold`]: bisection, sweeps, and minimal-window (`W*`) searches.
//! - [`complexity`]: per-window decoding complexity and equal-latency model.
//! - [`report`]: deterministic CSV/JSON emission.
//!
//! See the crate `examples/` directory for runnable walkthroughs of each
//! capability, and the `scldpc` binary for the command-line front end.

pub mod complexity;
pub mod de_bec;
pub mod error;
pub mod exit_awgn;
pub mod protograph;
pub mod report;
pub mod subspace;
mod tanner;
pub mod threshold;

pub use error::{Error, Result};
