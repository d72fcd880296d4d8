//! Standard and exact finite differences on a lattice signal.
//!
//! The exact operators are infinite lattice series evaluated through
//! [`crate::summation`]. They are normalized per step: the order-`n` operator
//! carries a factor `1/T^n`, so that on entire functions it reproduces the
//! `n`-th derivative for every step `T`. The antidifference carries the dual
//! factor `T`.

mod antidiff;
mod exact;
mod kernel;
mod sine_integral;
mod standard;

use std::f64::consts::PI;

pub use antidiff::{antidifference_signal, exact_antidifference};
pub use exact::{exact_difference, exact_difference_by_recurrence, exact_difference_signal};
pub use kernel::{kernel_at_origin, kernel_coefficient, DifferenceKernel, MAX_ORDER};
pub use sine_integral::sine_integral;
pub use standard::{backward_difference, forward_difference, leibniz_violation, nonstandard_product_identity_residual};

use crate::error::{Error, Result};
use crate::signals::{Lattice, LatticeSignal};
use crate::summation::{self, SummationMethod, SummationReport, SummationSpec, TermSource};

/// Scaling convention of the exact operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Order `n` carries `1/T^n`; the antidifference carries `T`.
    #[default]
    PerStep,
}

/// How the summation method is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MethodPolicy {
    /// DIRECT, then CESARO, then ABEL, as needed.
    #[default]
    Auto,
    /// Always use `SummationSpec::method`.
    Fixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorConfig {
    pub lattice: Lattice,
    pub summation: SummationSpec,
    pub normalization: Normalization,
    pub policy: MethodPolicy,
}

impl OperatorConfig {
    pub fn new(lattice: Lattice) -> Self {
        Self {
            lattice,
            summation: SummationSpec::default(),
            normalization: Normalization::PerStep,
            policy: MethodPolicy::Auto,
        }
    }

    pub fn with_summation(mut self, summation: SummationSpec) -> Self {
        self.summation = summation;
        self
    }

    /// Pin the summation method instead of escalating.
    pub fn with_fixed_method(mut self, method: SummationMethod) -> Self {
        self.summation.method = method;
        self.policy = MethodPolicy::Fixed;
        self
    }

    pub fn step(&self) -> f64 {
        self.lattice.step()
    }

    fn evaluate<S: TermSource + ?Sized>(&self, src: &S) -> Result<SummationReport> {
        match self.policy {
            MethodPolicy::Auto => summation::escalating_sum(src, &self.summation),
            MethodPolicy::Fixed => summation::sum(src, &self.summation),
        }
    }
}

impl Default for OperatorConfig {
    fn default() -> Self {
        Self::new(Lattice::unit())
    }
}

/// Preconditions shared by the exact operators.
fn check_signal(x: &LatticeSignal, cfg: &OperatorConfig) -> Result<()> {
    cfg.summation.validate()?;
    if x.lattice() != cfg.lattice {
        return Err(Error::InvalidArgument(format!(
            "signal sampled with step {} but operator configured for step {}",
            x.lattice().step(),
            cfg.step()
        )));
    }
    let rate = x.traits().max_frequency;
    if rate * cfg.step() >= PI {
        return Err(Error::AliasingBound { rate, step: cfg.step() });
    }
    Ok(())
}

/// Rescale a report by a positive factor.
fn scaled(report: SummationReport, factor: f64, offset: f64, spec: &SummationSpec) -> SummationReport {
    let value = report.value * factor + offset;
    let error = report.abs_error_estimate * factor + f64::EPSILON * offset.abs();
    let converged = report.converged && error <= spec.rel_tol * value.abs().max(1.0);
    SummationReport { value, abs_error_estimate: error, converged, ..report }
}
