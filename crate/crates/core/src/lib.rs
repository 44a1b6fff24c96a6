//! Numerical laboratory for truncated sampling series of bandlimited signals.
//!
//! The crate builds the adversarial sample sequences used to exhibit divergence
//! of the conjugated Shannon series and of Hilbert-transform system
//! approximation, evaluates the truncated series exactly, and checks the
//! finite-N inequalities that drive the divergence.

pub mod error;
pub mod lab;
pub mod num;
pub mod periodic;
pub mod quadrature;
pub mod schedule;
pub mod series;
pub mod signals;
pub mod systems;

pub use error::{Error, Result};
