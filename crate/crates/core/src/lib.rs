//! Exact finite-difference operators on uniformly sampled signals.
//!
//! The crate is organised bottom-up:
//!
//! - [`summation`] regularizes infinite series (direct, Cesàro, Abel).
//! - [`signals`] provides closed-form functions sampled on a lattice `t = n*T`.
//! - [`differences`] implements standard and exact differences, the order-n
//!   kernel, the exact antidifference and the sine integral.
//! - [`growth`] holds the continuous, standard-discrete and exact-discrete
//!   Harrod-Domar models and their comparison.

pub mod differences;
pub mod error;
pub mod growth;
pub mod signals;
pub mod summation;

pub use error::{Error, Result};
pub use signals::{sample, ClosedForm, Lattice, LatticeSignal};
pub use summation::{SummationMethod, SummationReport, SummationSpec};
