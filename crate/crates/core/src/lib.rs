//! Performance bounds for pilot-based estimation of bandlimited
//! frequency-selective channels.
//!
//! The channel is a tapped-delay-line with taps spaced `1/(2B)` apart whose
//! statistics derive from a power delay profile. The crate computes the
//! deterministic (CRB) and Bayesian (BCRB) lower bounds on the aggregate tap
//! MSE, assembles the tap covariance from the profile, and validates the
//! bounds by seeded Monte Carlo simulation with LS and linear-MMSE
//! estimators. A CLI exposes the same machinery with CSV/JSON output.

pub mod bounds;
pub mod cli;
pub mod covariance;
pub mod error;
pub mod montecarlo;
pub mod pdp;
pub mod pilots;
pub(crate) mod quad;

pub use error::{Error, Result};
