//! Extrapolation of tabulated values `y(x_i)` to a target abscissa.
//!
//! Both tables follow the usual Neville layout: the running estimate is
//! improved by one correction per column, and the last two corrections are
//! reported so callers can judge whether the table is still settling.

/// Result of walking an extrapolation table to its final column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolant {
    pub value: f64,
    /// Correction added by the final column.
    pub last_correction: f64,
    /// Correction added by the column before it.
    pub previous_correction: f64,
}

/// Polynomial (Neville) extrapolation to `x0`.
pub fn polynomial(xs: &[f64], ys: &[f64], x0: f64) -> Extrapolant {
    assert_eq!(xs.len(), ys.len());
    assert!(!xs.is_empty());
    let n = xs.len();
    let mut c = ys.to_vec();
    let mut d = ys.to_vec();
    let mut ns = nearest(xs, x0);
    let mut y = ys[ns];
    let mut corrections = Vec::with_capacity(n);
    for m in 1..n {
        for i in 0..n - m {
            let ho = xs[i] - x0;
            let hp = xs[i + m] - x0;
            let den = (c[i + 1] - d[i]) / (ho - hp);
            d[i] = hp * den;
            c[i] = ho * den;
        }
        let dy = if 2 * ns < n - m {
            c[ns]
        } else {
            ns = ns.saturating_sub(1);
            d[ns]
        };
        y += dy;
        corrections.push(dy);
    }
    finish(y, &corrections)
}

/// Diagonal rational (Bulirsch-Stoer) extrapolation to `x0`.
///
/// Returns `None` when the interpolating rational function has a pole at `x0`.
pub fn rational(xs: &[f64], ys: &[f64], x0: f64) -> Option<Extrapolant> {
    assert_eq!(xs.len(), ys.len());
    assert!(!xs.is_empty());
    const TINY: f64 = 1e-300;
    let n = xs.len();
    let mut c = ys.to_vec();
    let mut d: Vec<f64> = ys.iter().map(|y| y + TINY).collect();
    let mut ns = nearest(xs, x0);
    if xs[ns] == x0 {
        return Some(finish(ys[ns], &[]));
    }
    let mut y = ys[ns];
    let mut corrections = Vec::with_capacity(n);
    for m in 1..n {
        for i in 0..n - m {
            let w = c[i + 1] - d[i];
            let h = xs[i + m] - x0;
            let t = (xs[i] - x0) * d[i] / h;
            let dd = t - c[i + 1];
            if dd == 0.0 {
                if w == 0.0 {
                    // Table already reproduces the data exactly at this order.
                    c[i] = 0.0;
                    d[i] = 0.0;
                    continue;
                }
                return None;
            }
            let dd = w / dd;
            d[i] = c[i + 1] * dd;
            c[i] = t * dd;
        }
        let dy = if 2 * ns < n - m {
            c[ns]
        } else {
            ns = ns.saturating_sub(1);
            d[ns]
        };
        y += dy;
        corrections.push(dy);
    }
    Some(finish(y, &corrections))
}

fn nearest(xs: &[f64], x0: f64) -> usize {
    xs.iter().enumerate().min_by(|a, b| (a.1 - x0).abs().total_cmp(&(b.1 - x0).abs())).map(|(i, _)| i).unwrap_or(0)
}

fn finish(value: f64, corrections: &[f64]) -> Extrapolant {
    let k = corrections.len();
    Extrapolant {
        value,
        last_correction: if k >= 1 { corrections[k - 1] } else { 0.0 },
        previous_correction: if k >= 2 { corrections[k - 2] } else { 0.0 },
    }
}
