//! Harrod-Domar growth models: continuous (CM), standard discrete (SDM) and
//! exact discrete (EDM).
//!
//! With `lambda = s/v`, the CM is `dY/dt = lambda Y - A/v`. The SDM replaces
//! the derivative by a backward difference, which changes the growth rate to
//! `ln(1 + lambda T)/T`. The EDM uses the exact difference and keeps the
//! continuous solution at every lattice point.

use serde::Serialize;

use crate::differences::{exact_antidifference, exact_difference, OperatorConfig};
use crate::error::{Error, Result};
use crate::signals::{sample, ClosedForm, Lattice, LatticeSignal};
use crate::summation::SummationReport;

/// Horizon (in steps) of the G factor.
pub const DEFAULT_HORIZON: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarrodDomarParams {
    /// Marginal propensity to save.
    pub s: f64,
    /// Investment coefficient.
    pub v: f64,
    /// Marginal propensity to consume.
    pub c: f64,
    /// Autonomous expenditure.
    pub a: f64,
    pub y0: f64,
    pub step: f64,
}

impl HarrodDomarParams {
    /// Parameters with `c = 1 - s`, validated.
    pub fn new(s: f64, v: f64, a: f64, y0: f64, step: f64) -> Result<Self> {
        let p = Self { s, v, c: 1.0 - s, a, y0, step };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.c > 0.0 && self.c < 1.0) {
            return fail(format!("propensity to consume c = {} must lie in (0, 1)", self.c));
        }
        if (self.s - (1.0 - self.c)).abs() > 1e-12 {
            return fail(format!("s = {} must equal 1 - c = {}", self.s, 1.0 - self.c));
        }
        if !(self.v > 0.0) {
            return fail(format!("investment coefficient v = {} must be positive", self.v));
        }
        if !(self.step > 0.0) {
            return fail(format!("step T = {} must be positive", self.step));
        }
        if !(self.a.is_finite() && self.y0.is_finite() && self.v.is_finite()) {
            return fail("A, Y0 and v must be finite".into());
        }
        Ok(())
    }

    /// Growth rate `lambda = s/v`.
    pub fn lambda(&self) -> f64 {
        self.s / self.v
    }

    /// Equilibrium output `A/s`.
    pub fn equilibrium(&self) -> f64 {
        self.a / self.s
    }

    pub fn lattice(&self) -> Result<Lattice> {
        Lattice::new(self.step)
    }

    /// EDM solution as a closed form: `A/s + (Y0 - A/s) e^{lambda t}`.
    pub fn solution_form(&self) -> ClosedForm {
        let eq = self.equilibrium();
        ClosedForm::Combination(vec![(eq, ClosedForm::Constant(1.0)), (self.y0 - eq, ClosedForm::Exp(self.lambda()))])
    }
}

/// `(v/T) (Y(n) - Y(n-1))`.
pub fn accelerator_standard(y: &LatticeSignal, n: i64, v: f64, step: f64) -> f64 {
    v / step * (y.at(n) - y.at(n - 1))
}

/// `v` times the first-order exact difference of `Y`.
pub fn accelerator_exact(y: &LatticeSignal, n: i64, v: f64, cfg: &OperatorConfig) -> Result<SummationReport> {
    let r = exact_difference(y, 1, n, cfg)?;
    Ok(SummationReport { value: v * r.value, abs_error_estimate: v.abs() * r.abs_error_estimate, ..r })
}

/// `Y0 + (1/v)` times the exact antidifference of the investment stream.
pub fn multiplier_exact(i: &LatticeSignal, n: i64, v: f64, y0: f64, cfg: &OperatorConfig) -> Result<SummationReport> {
    if !(v > 0.0) {
        return Err(Error::InvalidArgument(format!("v = {v} must be positive")));
    }
    let r = exact_antidifference(i, n, cfg, 0.0)?;
    Ok(SummationReport { value: y0 + r.value / v, abs_error_estimate: r.abs_error_estimate / v, ..r })
}

/// Continuous model: `A/s + (Y0 - A/s) e^{lambda t}`.
pub fn cm_solution(p: &HarrodDomarParams, t: f64) -> f64 {
    let eq = p.equilibrium();
    eq + (p.y0 - eq) * (p.lambda() * t).exp()
}

/// Standard discrete model: `A/s + (Y0 - A/s) (1 + lambda T)^n`.
pub fn sdm_solution(p: &HarrodDomarParams, n: i64) -> Result<f64> {
    let base = 1.0 + p.lambda() * p.step;
    if !(base > 0.0) {
        return Err(Error::NonpositiveBase(base));
    }
    let eq = p.equilibrium();
    Ok(eq + (p.y0 - eq) * base.powf(n as f64))
}

/// Exact discrete model, which coincides with the continuous solution at
/// `t = nT`.
pub fn edm_solution(p: &HarrodDomarParams, n: i64) -> f64 {
    cm_solution(p, n as f64 * p.step)
}

/// `(Y_n - Y_{n-1})/T - lambda Y_{n-1} + A/v` on the SDM trajectory.
pub fn sdm_residual(p: &HarrodDomarParams, n: i64) -> Result<f64> {
    let (y, prev) = (sdm_solution(p, n)?, sdm_solution(p, n - 1)?);
    Ok((y - prev) / p.step - p.lambda() * prev + p.a / p.v)
}

/// Residual of a series-based check, with the engine's error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub value: f64,
    pub abs_error_estimate: f64,
}

/// `exact_difference(Y)(n) - lambda Y(n) + A/v` on the EDM solution.
pub fn edm_residual(p: &HarrodDomarParams, n: i64, cfg: &OperatorConfig) -> Result<Residual> {
    let lattice = p.lattice()?;
    let cfg = OperatorConfig { lattice, ..cfg.clone() };
    let y = sample(&p.solution_form(), lattice)?;
    let d = exact_difference(&y, 1, n, &cfg)?;
    Ok(Residual {
        value: d.value - p.lambda() * edm_solution(p, n) + p.a / p.v,
        abs_error_estimate: d.abs_error_estimate,
    })
}

/// One row of the CM/SDM comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub lambda: f64,
    /// `ln(1 + lambda)`.
    pub rate_sdm: f64,
    /// `100 (lambda - ln(1 + lambda)) / lambda`.
    pub d_percent: f64,
    /// `e^{h lambda} / (1 + lambda)^h`.
    pub g_factor: f64,
}

pub fn comparison_row(lambda: f64) -> Result<ComparisonRow> {
    comparison_row_with_horizon(lambda, DEFAULT_HORIZON)
}

pub fn comparison_row_with_horizon(lambda: f64, horizon: u32) -> Result<ComparisonRow> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("lambda = {lambda} must be positive")));
    }
    let rate_sdm = lambda.ln_1p();
    let h = f64::from(horizon);
    Ok(ComparisonRow {
        lambda,
        rate_sdm,
        d_percent: 100.0 * (lambda - rate_sdm) / lambda,
        g_factor: (h * (lambda - rate_sdm)).exp(),
    })
}

/// Rates of the comparison table: 0.1, 0.3, ..., 1.9.
pub fn comparison_lambdas() -> Vec<f64> {
    (0..10).map(|i| (2 * i + 1) as f64 / 10.0).collect()
}

/// Published comparison values `(lambda, ln(1 + lambda), D, G)` at their
/// printed precision.
pub const REFERENCE_ROWS: [(f64, f64, f64, f64); 10] = [
    (0.1, 0.095, 4.69, 1.048),
    (0.3, 0.262, 12.54, 1.457),
    (0.5, 0.405, 18.90, 2.574),
    (0.7, 0.531, 24.19, 5.440),
    (0.9, 0.642, 28.68, 13.22),
    (1.1, 0.742, 32.55, 35.90),
    (1.3, 0.833, 35.93, 106.8),
    (1.5, 0.916, 38.91, 342.7),
    (1.7, 0.993, 41.57, 1173.0),
    (1.9, 1.065, 43.96, 4242.0),
];

/// Tolerances for matching a row against its printed reference.
pub const RATE_TOLERANCE: f64 = 1e-3;
pub const D_TOLERANCE: f64 = 0.05;
pub const G_RELATIVE_TOLERANCE: f64 = 5e-3;

impl ComparisonRow {
    /// Reference row with the same rate, if there is one.
    pub fn reference(&self) -> Option<(f64, f64, f64, f64)> {
        REFERENCE_ROWS.iter().copied().find(|r| (r.0 - self.lambda).abs() < 1e-12)
    }

    /// Whether the row agrees with its reference at printed precision.
    /// `None` when there is no reference for this rate.
    pub fn matches_reference(&self) -> Option<bool> {
        let (_, rate, d, g) = self.reference()?;
        Some(
            (self.rate_sdm - rate).abs() <= RATE_TOLERANCE
                && (self.d_percent - d).abs() <= D_TOLERANCE
                && ((self.g_factor - g) / g).abs() <= G_RELATIVE_TOLERANCE,
        )
    }
}

/// Actual consumption `Y_t - s Y_{t-1}`.
pub fn consumption_actual(y_t: f64, y_prev: f64, s: f64) -> f64 {
    y_t - s * y_prev
}

/// Outputs of the three models at one lattice point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub n: i64,
    pub t: f64,
    pub cm: f64,
    pub sdm: f64,
    pub edm: f64,
    /// `cm / sdm`.
    pub ratio: f64,
}

pub fn trajectory(p: &HarrodDomarParams, horizon: u32) -> Result<Vec<TrajectoryRow>> {
    (0..=i64::from(horizon))
        .map(|n| {
            let t = n as f64 * p.step;
            let cm = cm_solution(p, t);
            let sdm = sdm_solution(p, n)?;
            Ok(TrajectoryRow { n, t, cm, sdm, edm: edm_solution(p, n), ratio: cm / sdm })
        })
        .collect()
}
