//! Numerical laboratory for nonlinear filtering of finite-state
//! continuous-time Markov chains observed in white noise.
//!
//! The crate simulates the signal chain exactly from its jump structure,
//! synthesizes integrated observations on a uniform grid, discretizes
//! the conditional-distribution SDE with a simplex-preserving
//! predict/correct splitting (with an Euler cross-check), co-integrates
//! the smoothing probabilities of the initial state, and runs paired
//! experiments that measure how fast a wrongly initialized filter
//! forgets its initialization against the theoretical envelope
//! `C exp(-2 min_{p != q} sqrt(lambda_pq lambda_qp) t)`.

pub mod config;
pub mod error;
mod expm;
pub mod filter;
pub mod io;
pub mod markov;
pub mod observation;
pub mod oracle;
pub mod seed;
pub mod smoothing;
pub mod stability;
pub mod verify;

pub use error::{Error, Result};
pub use expm::expm;
