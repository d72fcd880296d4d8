use super::extrapolate;
use super::kahan::CompensatedSum;
use super::{require_method, SummationMethod, SummationReport, SummationSpec, TermSource};
use crate::error::{Error, Result};

/// Boundaries used for the Richardson ladder, at most this many.
const LADDER_LEVELS: usize = 6;

/// Cesàro (C,k) summation.
///
/// The (C,k) mean at boundary `M` is `s^(k)_M / C(M+k, k)`, where `s^(0)` are
/// the partial sums (with `s_0 = 0`) and `s^(j)` their `j`-fold running sums.
/// The means are sampled at the even boundaries `M, M/2, M/4, ...` and
/// extrapolated to `1/M -> 0`; the size of the last extrapolation correction is
/// the error estimate.
///
/// If the means still oscillate without contracting over the last quarter of
/// the budget, the series is not (C,k)-summable at this order and
/// [`Error::NonConvergent`] is returned.
pub fn cesaro_sum<S: TermSource + ?Sized>(src: &S, spec: &SummationSpec) -> Result<SummationReport> {
    spec.validate()?;
    let order = match spec.method {
        SummationMethod::Cesaro(k) => k,
        _ => {
            require_method(spec, "cesaro_sum", false)?;
            unreachable!()
        }
    };
    let budget = spec.max_terms;

    let mut terms = Vec::with_capacity(budget + 1);
    terms.push(0.0);
    for m in 1..=budget {
        let a = src.term_at(m);
        if !a.is_finite() {
            return Err(Error::NonConvergent(format!("term {m} is not finite ({a})")));
        }
        terms.push(a);
    }
    let mut sums = Vec::with_capacity(budget + 1);
    let mut acc = CompensatedSum::new();
    for a in &terms {
        acc += *a;
        sums.push(acc.value());
    }
    for _ in 0..order {
        let mut running = CompensatedSum::new();
        for s in sums.iter_mut() {
            running += *s;
            *s = running.value();
        }
    }
    let means: Vec<f64> = sums.iter().enumerate().map(|(j, s)| s / binomial_weight(j, order)).collect();

    let last = spread(&means[budget - budget / 4 + 1..]);
    let previous = spread(&means[budget / 2 + 1..=budget - budget / 4]);
    let boundary_mean = means[budget];
    if !boundary_mean.is_finite() {
        return Err(Error::NonConvergent("Cesàro means overflowed".into()));
    }
    if last > spec.tolerance_for(boundary_mean) && last >= 0.9 * previous {
        return Err(Error::NonConvergent(format!(
            "(C,{order}) means still drift by {last:e} over the last quarter of the budget"
        )));
    }

    let ladder: Vec<usize> = (0..LADDER_LEVELS).map(|i| 2 * (budget >> (i + 1))).filter(|&m| m >= 8).collect();
    let xs: Vec<f64> = ladder.iter().map(|&m| 1.0 / m as f64).collect();
    let ys: Vec<f64> = ladder.iter().map(|&m| means[m]).collect();
    let e = extrapolate::polynomial(&xs, &ys, 0.0);
    // The boundary mean is sum a_m C(M-m+k, k)/C(M+k, k); terms carrying
    // independent rounding errors of relative size eps add up like a random walk.
    let total = binomial_weight(budget, order);
    let walk: f64 = (1..=budget).map(|m| (terms[m] * binomial_weight(budget - m, order) / total).powi(2)).sum();
    let floor = ys.iter().fold(e.value.abs(), |m, y| m.max(y.abs()));
    let rounding = 4.0 * f64::EPSILON * walk.sqrt() + 16.0 * f64::EPSILON * floor;
    let estimate = e.last_correction.abs().max(rounding);
    Ok(SummationReport::new(e.value, estimate, budget, SummationMethod::Cesaro(order), spec))
}

/// `C(j + k, k)`.
fn binomial_weight(j: usize, k: u32) -> f64 {
    (1..=k).fold(1.0, |w, i| w * (j as f64 + i as f64) / i as f64)
}

fn spread(xs: &[f64]) -> f64 {
    let (lo, hi) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if hi >= lo {
        hi - lo
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::summation::Terms;

    fn alternating(m: usize) -> f64 {
        if m.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    fn cesaro(k: u32) -> SummationSpec {
        SummationSpec::default().with_method(SummationMethod::Cesaro(k))
    }

    /// Arithmetic means of the partial sums 0, -1, 0, -1, ... computed by hand.
    fn grandi_mean_oracle(n: usize) -> f64 {
        let mut s = 0.0;
        let mut total = 0.0;
        for m in 1..=n {
            s += alternating(m);
            total += s;
        }
        total / n as f64
    }

    #[test]
    fn grandi_series_c1() {
        let r = cesaro_sum(&Terms::new(alternating), &cesaro(1)).unwrap();
        assert!((grandi_mean_oracle(100_000) + 0.5).abs() < 1e-12);
        assert!((r.value + 0.5).abs() < 1e-8, "{r:?}");
        assert!(r.converged);
        assert_eq!(r.method_used, SummationMethod::Cesaro(1));
    }

    #[test]
    fn alternating_integers_need_order_two() {
        let src = Terms::new(|m| alternating(m) * m as f64);
        let err = cesaro_sum(&src, &cesaro(1)).unwrap_err();
        assert_eq!(err.code(), "NON_CONVERGENT");
        let r = cesaro_sum(&src, &cesaro(2)).unwrap();
        // Abel oracle: -r/(1+r)^2 at r = 1.
        assert!((r.value + 0.25).abs() < 1e-8, "{r:?}");
        assert!(r.converged);
    }

    #[test]
    fn regular_on_convergent_series() {
        let src = Terms::new(|m| 0.5f64.powi(m as i32));
        for k in 1..=4 {
            let r = cesaro_sum(&src, &cesaro(k)).unwrap();
            assert!((r.value - 1.0).abs() < 1e-9, "k={k}: {r:?}");
        }
    }

    #[test]
    fn alternating_squares_need_order_three() {
        let src = Terms::new(|m| alternating(m) * (m * m) as f64);
        assert!(cesaro_sum(&src, &cesaro(2).with_max_terms(8192)).is_err());
        let r = cesaro_sum(&src, &cesaro(3).with_max_terms(8192)).unwrap();
        assert!(r.value.abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn oscillating_conditionally_convergent_series() {
        // sum (-1)^m sin(2m)/m = (pi - (2 + pi))/2 = -1.
        let src = Terms::new(|m| alternating(m) * (2.0 * m as f64).sin() / m as f64);
        let r = cesaro_sum(&src, &cesaro(2).with_max_terms(4096)).unwrap();
        assert!((r.value + 1.0).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn binomial_weights() {
        assert_eq!(binomial_weight(5, 0), 1.0);
        assert_eq!(binomial_weight(5, 1), 6.0);
        assert_eq!(binomial_weight(5, 2), 21.0);
        assert_eq!(binomial_weight(0, 3), 1.0);
    }
}
