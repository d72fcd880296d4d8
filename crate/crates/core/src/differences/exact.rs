use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use super::kernel::DifferenceKernel;
use super::{check_signal, scaled, OperatorConfig};
use crate::error::{Error, Result};
use crate::signals::LatticeSignal;
use crate::summation::{SummationMethod, SummationReport, TermSource};

/// Summand `M_n(m) * (X(i-m) + (-1)^n X(i+m))` of the kernel series.
struct KernelTerms<'a> {
    x: &'a LatticeSignal,
    kernel: &'a DifferenceKernel,
    index: i64,
}

impl TermSource for KernelTerms<'_> {
    fn term_at(&self, m: usize) -> f64 {
        let m_i = m as i64;
        let pair = self.x.at(self.index - m_i) + self.kernel.parity() * self.x.at(self.index + m_i);
        self.kernel.coefficient_at(m) * pair
    }

    fn growth_hint(&self) -> Option<f64> {
        Some(self.x.growth_hint())
    }
}

/// Exact difference of order `order` at lattice index `index`:
/// `T^-n [ sum_{m>=1} M_n(m) (X(t-mT) + (-1)^n X(t+mT)) + M_n(0) X(t) ]`.
///
/// For `n = 1` the series is `sum (-1)^m/m (X(t-mT) - X(t+mT))`.
pub fn exact_difference(x: &LatticeSignal, order: u32, index: i64, cfg: &OperatorConfig) -> Result<SummationReport> {
    let kernel = DifferenceKernel::cached(order, cfg.summation.max_terms + 1)?;
    check_signal(x, cfg)?;
    let report = cfg.evaluate(&KernelTerms { x, kernel: &kernel, index })?;
    let factor = cfg.step().powi(-(order as i32));
    let centre = kernel.coefficient_at(0) * x.at(index);
    Ok(scaled(report, factor, centre * factor, &cfg.summation))
}

/// Half-width of the index window the fixed-Abel outer sum reads.
fn abel_window(x: &LatticeSignal) -> i64 {
    let rho = x.growth_hint();
    let contraction = 0.97f64.min(0.9 / rho) * rho;
    let terms = 18.0 * std::f64::consts::LN_10 / -contraction.ln();
    (terms * 1.5) as i64 + 64
}

/// Exact difference of order 2 or 3 as repeated first-order differences.
///
/// Every level is summed with fixed ABEL; inner values are tabulated over
/// the index window the outer sum needs. The error estimate adds the outer
/// estimate and the inner errors propagated through the damped first-order
/// kernel.
pub fn exact_difference_by_recurrence(
    x: &LatticeSignal,
    order: u32,
    index: i64,
    cfg: &OperatorConfig,
) -> Result<SummationReport> {
    if !(2..=3).contains(&order) {
        return Err(Error::UnsupportedOrder(order));
    }
    check_signal(x, cfg)?;
    let cfg = cfg.clone().with_fixed_method(SummationMethod::Abel);
    let width = abel_window(x);
    let r_max = cfg.summation.abel_radii.radii(Some(x.growth_hint())).last().copied().unwrap_or(0.97);

    let mut level = x.clone();
    // Error of the current level on `lo..lo + errors.len()`.
    let mut errors: Vec<f64> = Vec::new();
    let mut lo = index;
    for depth in 1..order {
        // Level `depth` is read over a window that shrinks by `width` per level.
        let half = width * i64::from(order - depth);
        let (tabulated, own) = tabulate(&level, index - half, index + half, &cfg)?;
        errors = (index - half..=index + half).zip(own).map(|(i, e)| e + propagated(&errors, lo, i, r_max)).collect();
        lo = index - half;
        level = tabulated;
    }
    let outer = exact_difference(&level, 1, index, &cfg)?;
    let error = outer.abs_error_estimate + propagated(&errors, lo, index, r_max);
    let converged = outer.converged && error <= cfg.summation.rel_tol * outer.value.abs().max(1.0);
    Ok(SummationReport { abs_error_estimate: error, converged, ..outer })
}

/// `sum_m r^m/m (e(i-m) + e(i+m))`: input errors `e` (tabulated from `lo`)
/// seen through the first-order kernel damped at radius `r`.
fn propagated(errors: &[f64], lo: i64, i: i64, r: f64) -> f64 {
    let e = |k: i64| usize::try_from(k - lo).ok().and_then(|k| errors.get(k)).copied().unwrap_or(0.0);
    let mut total = 0.0;
    let mut weight = 1.0;
    for m in 1..=errors.len() as i64 {
        weight *= r;
        total += weight / m as f64 * (e(i - m) + e(i + m));
    }
    total
}

/// First-order exact difference of `x` tabulated on `lo..=hi` (computed in
/// parallel), with direct evaluation outside the table, plus the per-index
/// error estimates.
fn tabulate(x: &LatticeSignal, lo: i64, hi: i64, cfg: &OperatorConfig) -> Result<(LatticeSignal, Vec<f64>)> {
    let reports: Vec<SummationReport> =
        (lo..=hi).into_par_iter().map(|i| exact_difference(x, 1, i, cfg)).collect::<Result<_>>()?;
    let errors = reports.iter().map(|r| r.abs_error_estimate).collect();
    let values: Arc<Vec<f64>> = Arc::new(reports.iter().map(|r| r.value).collect());
    let source = x.clone();
    let fallback_cfg = cfg.clone();
    let signal = LatticeSignal::from_fn(x.lattice(), x.traits(), move |i| {
        match usize::try_from(i - lo).ok().and_then(|k| values.get(k)) {
            Some(v) => *v,
            None => exact_difference(&source, 1, i, &fallback_cfg).map_or(f64::NAN, |r| r.value),
        }
    });
    Ok((signal, errors))
}

/// Signal `i -> exact_difference(x, order, i)`, memoized. Indices where the
/// operator fails evaluate to NaN, which the summation engine rejects.
pub fn exact_difference_signal(x: &LatticeSignal, order: u32, cfg: &OperatorConfig) -> Result<LatticeSignal> {
    DifferenceKernel::cached(order, 1)?;
    check_signal(x, cfg)?;
    let source = x.clone();
    let cfg = cfg.clone();
    Ok(memoized(x, move |i| exact_difference(&source, order, i, &cfg).map(|r| r.value)))
}

pub(super) fn memoized<F>(like: &LatticeSignal, f: F) -> LatticeSignal
where
    F: Fn(i64) -> Result<f64> + Send + Sync + 'static,
{
    let cache: Mutex<HashMap<i64, f64>> = Mutex::new(HashMap::new());
    LatticeSignal::from_fn(like.lattice(), like.traits(), move |i| {
        if let Some(v) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&i) {
            return *v;
        }
        let v = f(i).unwrap_or(f64::NAN);
        cache.lock().unwrap_or_else(|e| e.into_inner()).insert(i, v);
        v
    })
}
