use std::f64::consts::PI;
use std::sync::OnceLock;

use super::exact::memoized;
use super::sine_integral::sine_integral;
use super::{check_signal, scaled, OperatorConfig};
use crate::error::{Error, Result};
use crate::signals::LatticeSignal;
use crate::summation::{SummationReport, TermSource};

const CACHED_WEIGHTS: usize = 4096;

/// `Si(pi k) / pi`.
fn weight(k: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| (0..CACHED_WEIGHTS).map(|k| sine_integral(PI * k as f64) / PI).collect());
    match table.get(k) {
        Some(w) => *w,
        None => sine_integral(PI * k as f64) / PI,
    }
}

struct AntiTerms<'a> {
    x: &'a LatticeSignal,
    index: i64,
}

impl TermSource for AntiTerms<'_> {
    fn term_at(&self, k: usize) -> f64 {
        let k_i = k as i64;
        weight(k) * (self.x.at(self.index - k_i) - self.x.at(self.index + k_i))
    }

    fn growth_hint(&self) -> Option<f64> {
        Some(self.x.growth_hint())
    }
}

fn check_input(x: &LatticeSignal, cfg: &OperatorConfig) -> Result<()> {
    check_signal(x, cfg)?;
    if x.traits().polynomial_part {
        // For a polynomial P the regularized series does not depend on t, so it
        // cannot be an antiderivative of P.
        return Err(Error::NonConvergent(
            "antidifference series has no t-dependent regularized value for polynomial or constant components".into(),
        ));
    }
    Ok(())
}

/// Exact antidifference `base + T * sum_{k>=1} Si(pi k)/pi * (X(t-kT) - X(t+kT))`.
///
/// Signals with a nonzero polynomial or constant component are refused with
/// [`Error::NonConvergent`].
pub fn exact_antidifference(
    x: &LatticeSignal,
    index: i64,
    cfg: &OperatorConfig,
    base_value: f64,
) -> Result<SummationReport> {
    check_input(x, cfg)?;
    let report = cfg.evaluate(&AntiTerms { x, index })?;
    Ok(scaled(report, cfg.step(), base_value, &cfg.summation))
}

/// Memoized signal `i -> exact_antidifference(x, i, cfg, base_value)`; NaN where
/// the series fails.
pub fn antidifference_signal(x: &LatticeSignal, cfg: &OperatorConfig, base_value: f64) -> Result<LatticeSignal> {
    check_input(x, cfg)?;
    let source = x.clone();
    let cfg = cfg.clone();
    Ok(memoized(x, move |i| exact_antidifference(&source, i, &cfg, base_value).map(|r| r.value)))
}
