//! Regularized summation of `sum_{m >= 1} a_m`.
//!
//! Three evaluators share one report type:
//!
//! - [`direct_sum`]: compensated partial sums with window-based stabilization.
//! - [`cesaro_sum`]: binomial (C,k) means of the partial sums, accelerated by
//!   Richardson extrapolation over even budget boundaries.
//! - [`abel_sum`]: `f(r) = sum a_m r^m` on a radius schedule inside the
//!   convergence disk, extrapolated to `r = 1`.
//!
//! [`escalating_sum`] chains them DIRECT -> CESARO -> ABEL.

mod abel;
mod cesaro;
mod direct;
pub mod extrapolate;
pub mod kahan;

use std::fmt;

use serde::Serialize;

pub use abel::abel_sum;
pub use cesaro::cesaro_sum;
pub use direct::direct_sum;

use crate::error::{Error, Result};

/// Largest per-step exponential growth `e^{lambda*T}` the engine accepts.
pub const MAX_GROWTH_EXPONENT: f64 = 1.1;

/// Budget used by the DIRECT and CESARO stages of [`escalating_sum`].
pub const PROBE_TERMS: usize = 4096;

/// Coefficient sequence `m -> a_m` for `m >= 1`.
pub trait TermSource: Sync {
    fn term_at(&self, m: usize) -> f64;

    /// Bound `rho` with `|a_m| <= C * rho^m * poly(m)`, when known.
    fn growth_hint(&self) -> Option<f64> {
        None
    }
}

impl<T: TermSource + ?Sized> TermSource for &T {
    fn term_at(&self, m: usize) -> f64 {
        (**self).term_at(m)
    }

    fn growth_hint(&self) -> Option<f64> {
        (**self).growth_hint()
    }
}

/// Closure-backed [`TermSource`].
pub struct Terms<F> {
    f: F,
    growth_hint: Option<f64>,
}

impl<F: Fn(usize) -> f64 + Sync> Terms<F> {
    pub fn new(f: F) -> Self {
        Self { f, growth_hint: None }
    }

    pub fn with_growth_hint(mut self, rho: f64) -> Self {
        assert!(rho >= 0.0, "growth hint must be nonnegative");
        self.growth_hint = Some(rho);
        self
    }
}

impl<F: Fn(usize) -> f64 + Sync> TermSource for Terms<F> {
    fn term_at(&self, m: usize) -> f64 {
        (self.f)(m)
    }

    fn growth_hint(&self) -> Option<f64> {
        self.growth_hint
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SummationMethod {
    Direct,
    Cesaro(u32),
    Abel,
}

impl fmt::Display for SummationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SummationMethod::Direct => write!(f, "DIRECT"),
            SummationMethod::Cesaro(k) => write!(f, "CESARO({k})"),
            SummationMethod::Abel => write!(f, "ABEL"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Extrapolation {
    Polynomial,
    Rational,
}

/// Radii at which the Abel generating function is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum RadiusSchedule {
    /// `r_j = r_max * j / count`, `j = 1..=count`, with
    /// `r_max = min(0.97, 0.9 / growth_hint)`.
    Equispaced { count: usize },
    /// Strictly increasing radii in `(0, 1)`.
    Explicit(Vec<f64>),
}

impl RadiusSchedule {
    pub fn radii(&self, growth_hint: Option<f64>) -> Vec<f64> {
        match self {
            RadiusSchedule::Equispaced { count } => {
                let r_max = match growth_hint {
                    Some(rho) if rho > 0.0 => (0.9 / rho).min(0.97),
                    _ => 0.97,
                };
                (1..=*count).map(|j| r_max * j as f64 / *count as f64).collect()
            }
            RadiusSchedule::Explicit(radii) => radii.clone(),
        }
    }
}

impl Default for RadiusSchedule {
    fn default() -> Self {
        RadiusSchedule::Equispaced { count: 16 }
    }
}

/// How a series is to be evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct SummationSpec {
    pub method: SummationMethod,
    pub max_terms: usize,
    pub rel_tol: f64,
    pub abel_radii: RadiusSchedule,
    pub extrapolation: Extrapolation,
}

impl Default for SummationSpec {
    fn default() -> Self {
        Self {
            method: SummationMethod::Direct,
            max_terms: 100_000,
            rel_tol: 1e-8,
            abel_radii: RadiusSchedule::default(),
            extrapolation: Extrapolation::Rational,
        }
    }
}

impl SummationSpec {
    pub fn with_method(mut self, method: SummationMethod) -> Self {
        self.method = method;
        self
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_terms < 16 {
            return Err(Error::InvalidArgument(format!("max_terms must be at least 16, got {}", self.max_terms)));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidArgument(format!("rel_tol must be positive, got {}", self.rel_tol)));
        }
        if let SummationMethod::Cesaro(0) = self.method {
            return Err(Error::InvalidArgument("Cesaro order must be at least 1".into()));
        }
        match &self.abel_radii {
            RadiusSchedule::Equispaced { count } if *count < 2 => {
                return Err(Error::InvalidArgument("Abel schedule needs at least two radii".into()))
            }
            RadiusSchedule::Explicit(radii) => {
                if radii.len() < 2 {
                    return Err(Error::InvalidArgument("Abel schedule needs at least two radii".into()));
                }
                if radii.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
                    return Err(Error::InvalidArgument("Abel radii must lie in (0, 1)".into()));
                }
                if radii.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::InvalidArgument("Abel radii must be strictly increasing".into()));
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn tolerance_for(&self, value: f64) -> f64 {
        self.rel_tol * value.abs().max(1.0)
    }
}

/// Value of a (possibly regularized) series plus diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SummationReport {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub terms_used: usize,
    pub method_used: SummationMethod,
    pub converged: bool,
}

impl SummationReport {
    pub(crate) fn new(
        value: f64,
        abs_error_estimate: f64,
        terms_used: usize,
        method_used: SummationMethod,
        spec: &SummationSpec,
    ) -> Self {
        let converged = abs_error_estimate <= spec.tolerance_for(value);
        Self { value, abs_error_estimate, terms_used, method_used, converged }
    }
}

/// DIRECT, then CESARO(k) for increasing k, then ABEL.
///
/// DIRECT and CESARO run with at most [`PROBE_TERMS`] terms and are skipped
/// for exponentially growing summands, which are not Cesàro-summable. Growth
/// beyond `e^{MAX_GROWTH_EXPONENT}` per term is refused outright.
pub fn escalating_sum<S: TermSource + ?Sized>(src: &S, spec: &SummationSpec) -> Result<SummationReport> {
    spec.validate()?;
    let rho = src.growth_hint().unwrap_or(1.0);
    if rho > MAX_GROWTH_EXPONENT.exp() * (1.0 + 1e-12) {
        return Err(Error::RadiusInfeasible(format!("per-term growth {rho:.6} exceeds e^{MAX_GROWTH_EXPONENT}")));
    }
    if rho <= 1.0 {
        let probe = spec.clone().with_max_terms(spec.max_terms.min(PROBE_TERMS));
        if let Ok(report) = direct_sum(src, &probe.clone().with_method(SummationMethod::Direct)) {
            if report.converged {
                return Ok(report);
            }
        }
        for k in [2, 4, 7] {
            match cesaro_sum(src, &probe.clone().with_method(SummationMethod::Cesaro(k))) {
                Ok(report) if report.converged => return Ok(report),
                // Means contract but have not settled: a higher order will not help.
                Ok(_) => break,
                Err(_) => continue,
            }
        }
    }
    abel_sum(src, &spec.clone().with_method(SummationMethod::Abel))
}

/// Dispatch on `spec.method`.
pub fn sum<S: TermSource + ?Sized>(src: &S, spec: &SummationSpec) -> Result<SummationReport> {
    match spec.method {
        SummationMethod::Direct => direct_sum(src, spec),
        SummationMethod::Cesaro(_) => cesaro_sum(src, spec),
        SummationMethod::Abel => abel_sum(src, spec),
    }
}

fn require_method(spec: &SummationSpec, expected: &str, ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{expected} evaluator called with method {}", spec.method)))
    }
}
