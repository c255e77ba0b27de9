//! Recurrence strength of one-dimensional random walks.
//!
//! A symmetric walk `S_n` rescaled by a nondecreasing `g_n` either keeps
//! returning to every neighbourhood of zero (`liminf g_n |S_n| = 0`) or
//! escapes (`g_n |S_n| -> infinity`), depending on whether
//! `sum 1 / (a_n g_n)` diverges. The crate predicts the accumulation set of
//! `g_n S_n` from series criteria and checks the prediction by simulation,
//! exact lattice computation and Fourier analysis.
//!
//! * [`distributions`]: step laws, samplers and exact lattice sums.
//! * [`charfn_analysis`]: window masses from characteristic functions and
//!   local limit checks.
//! * [`walk_engine`]: streaming block simulation and probability estimates.
//! * [`criteria`]: series tests and accumulation-set prediction.
//! * [`constructions`]: growth sequences that force either behaviour.
//! * [`cli`]: the `reclab` batch runner.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod charfn_analysis;
pub mod cli;
pub mod constructions;
pub mod criteria;
pub mod distributions;
pub mod error;
pub mod numeric;
pub mod rng;
pub mod walk_engine;

pub use error::{Error, Result};
