use super::kahan::CompensatedSum;
use super::{require_method, SummationMethod, SummationReport, SummationSpec, TermSource};
use crate::error::{Error, Result};

const MIN_WINDOW: usize = 16;

#[derive(Debug, Clone, Copy)]
struct Range {
    lo: f64,
    hi: f64,
}

impl Range {
    fn empty() -> Self {
        Range { lo: f64::INFINITY, hi: f64::NEG_INFINITY }
    }

    fn at(x: f64) -> Self {
        Range { lo: x, hi: x }
    }

    fn push(&mut self, x: f64) {
        self.lo = self.lo.min(x);
        self.hi = self.hi.max(x);
    }

    fn width(&self) -> f64 {
        if self.hi >= self.lo {
            self.hi - self.lo
        } else {
            0.0
        }
    }
}

/// Plain partial sums `S_M = a_1 + ... + a_M` with compensated accumulation.
///
/// Terms are consumed in windows of `max(16, M/4)` terms. The sum is accepted
/// once two consecutive windows each vary by at most `rel_tol * max(1, |S|)`;
/// the reported error is the variation of the last window.
///
/// When the budget runs out the final quarter of partial sums is inspected:
/// monotone growth without geometric slowdown, or oscillation that no longer
/// contracts, is reported as [`Error::NonConvergent`]. Anything else comes
/// back as an unconverged report.
pub fn direct_sum<S: TermSource + ?Sized>(src: &S, spec: &SummationSpec) -> Result<SummationReport> {
    spec.validate()?;
    require_method(spec, "direct_sum", spec.method == SummationMethod::Direct)?;

    let budget = spec.max_terms;
    let half = budget / 2;
    let final_quarter = budget - budget / 4;
    let checkpoint_stride = (budget / 32).max(1);

    let mut acc = CompensatedSum::new();
    let mut window = Range::at(0.0);
    let mut window_start = 1usize;
    let mut window_len = MIN_WINDOW;
    let mut prev_window_width = f64::INFINITY;
    let mut third_quarter = Range::empty();
    let mut fourth_quarter = Range::empty();
    let mut checkpoints: Vec<f64> = Vec::new();
    let mut s = 0.0;

    for m in 1..=budget {
        let a = src.term_at(m);
        if !a.is_finite() {
            return Err(Error::NonConvergent(format!("term {m} is not finite ({a})")));
        }
        acc += a;
        s = acc.value();
        window.push(s);
        if m > final_quarter {
            fourth_quarter.push(s);
            if (m - final_quarter).is_multiple_of(checkpoint_stride) || m == budget {
                checkpoints.push(s.abs());
            }
        } else if m > half {
            third_quarter.push(s);
        }

        if m + 1 - window_start == window_len {
            let width = window.width();
            let tol = spec.tolerance_for(s);
            if m >= 2 * MIN_WINDOW && width <= tol && prev_window_width <= tol {
                return Ok(SummationReport::new(s, width, m, SummationMethod::Direct, spec));
            }
            prev_window_width = width;
            window = Range::at(s);
            window_start = m + 1;
            window_len = MIN_WINDOW.max(window_start / 4);
        }
    }

    let tol = spec.tolerance_for(s);
    if grows_monotonically(&checkpoints, tol) {
        return Err(Error::NonConvergent(format!(
            "partial sums grow monotonically in magnitude over the last {} terms (|S| = {:e})",
            budget - final_quarter,
            s.abs()
        )));
    }
    let last = fourth_quarter.width();
    if last > tol && last >= 0.9 * third_quarter.width() {
        return Err(Error::NonConvergent(format!(
            "partial sums keep oscillating with amplitude {last:e} at the end of the budget"
        )));
    }
    let estimate = window.width().max(prev_window_width.min(last));
    Ok(SummationReport::new(s, estimate, budget, SummationMethod::Direct, spec))
}

/// Strictly increasing magnitudes whose growth is not dying out geometrically.
fn grows_monotonically(checkpoints: &[f64], tol: f64) -> bool {
    if checkpoints.len() < 3 || !checkpoints.windows(2).all(|w| w[1] > w[0]) {
        return false;
    }
    let mid = checkpoints.len() / 2;
    let first = checkpoints[mid] - checkpoints[0];
    let second = checkpoints[checkpoints.len() - 1] - checkpoints[mid];
    second > tol && second >= 0.5 * first
}
