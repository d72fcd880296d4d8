use rayon::prelude::*;

use super::extrapolate::{self, Extrapolant};
use super::{direct_sum, require_method, Extrapolation, SummationMethod, SummationReport, SummationSpec, TermSource};
use crate::error::{Error, Result};

/// Generating-function values only stop once the compensated sum is frozen.
const INNER_REL_TOL: f64 = 1e-17;

struct Damped<'a, S: ?Sized> {
    src: &'a S,
    radius: f64,
    /// Divides every term, so the inner stopping rule is relative.
    scale: f64,
}

impl<S: TermSource + ?Sized> TermSource for Damped<'_, S> {
    fn term_at(&self, m: usize) -> f64 {
        let weight = self.radius.powi(m as i32);
        if weight == 0.0 {
            0.0
        } else {
            self.src.term_at(m) * weight / self.scale
        }
    }
}

/// Abel-Poisson summation: evaluate `f(r) = sum a_m r^m` on the radius
/// schedule and extrapolate to `r = 1`.
///
/// Radii with `r * growth_hint >= 1` are dropped; if fewer than two remain the
/// call fails with [`Error::RadiusInfeasible`].
pub fn abel_sum<S: TermSource + ?Sized>(src: &S, spec: &SummationSpec) -> Result<SummationReport> {
    spec.validate()?;
    require_method(spec, "abel_sum", spec.method == SummationMethod::Abel)?;

    let growth = src.growth_hint();
    let scheduled = spec.abel_radii.radii(growth);
    let radii: Vec<f64> = scheduled.iter().copied().filter(|r| growth.is_none_or(|rho| r * rho < 1.0)).collect();
    if radii.len() < 2 {
        return Err(Error::RadiusInfeasible(format!(
            "growth hint {:?} leaves {} of {} scheduled radii inside the convergence disk",
            growth,
            radii.len(),
            scheduled.len()
        )));
    }

    let inner = SummationSpec { method: SummationMethod::Direct, rel_tol: INNER_REL_TOL, ..spec.clone() };
    let scale = (1..=16).map(|m| src.term_at(m).abs()).filter(|a| a.is_finite()).fold(0.0, f64::max);
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let evaluations: Vec<SummationReport> =
        radii.par_iter().map(|&radius| direct_sum(&Damped { src, radius, scale }, &inner)).collect::<Result<_>>()?;
    let values: Vec<f64> = evaluations.iter().map(|r| r.value * scale).collect();
    let terms_used = evaluations.iter().map(|r| r.terms_used).sum();

    let Some(fit) = robust_extrapolation(spec.extrapolation, &radii, &values) else {
        return Err(Error::ExtrapolationUnstable(
            "most leave-one-out extrapolants are undefined (pole at r = 1)".into(),
        ));
    };
    let value = fit.value;
    if !value.is_finite() {
        return Err(Error::ExtrapolationUnstable(format!("extrapolant is {value}")));
    }
    // Truncation of the generating-function values adds to the extrapolation error.
    let input_error = scale * evaluations.iter().map(|r| r.abs_error_estimate).fold(0.0, f64::max);
    let estimate = fit.spread + input_error;
    if !(estimate < value.abs().max(1.0)) {
        return Err(Error::ExtrapolationUnstable(format!(
            "error estimate {estimate:e} swamps the extrapolated value {value:e}"
        )));
    }
    Ok(SummationReport::new(value, estimate, terms_used, SummationMethod::Abel, spec))
}

struct RobustFit {
    value: f64,
    spread: f64,
}

/// Median of the extrapolants from the full node set and from every
/// leave-one-out subset. A single ill-conditioned table (a spurious pole
/// near `r = 1`) cannot move the median. The error estimate combines the
/// spread of the central subsets with the change observed when the two
/// smallest radii are dropped.
fn robust_extrapolation(method: Extrapolation, radii: &[f64], values: &[f64]) -> Option<RobustFit> {
    let (value, spread) = median_fit(method, radii, values)?;
    let drift = if radii.len() >= 6 {
        median_fit(method, &radii[2..], &values[2..]).map_or(f64::INFINITY, |(v, _)| (v - value).abs())
    } else {
        0.0
    };
    Some(RobustFit { value, spread: 3.0 * spread + drift })
}

fn median_fit(method: Extrapolation, radii: &[f64], values: &[f64]) -> Option<(f64, f64)> {
    let n = radii.len();
    let mut fits: Vec<f64> = Vec::with_capacity(n + 1);
    let mut push = |xs: &[f64], ys: &[f64]| {
        if let Some(e) = extrapolate_to_one(method, xs, ys) {
            if e.value.is_finite() {
                fits.push(e.value);
            }
        }
    };
    push(radii, values);
    if n >= 4 {
        let mut xs = Vec::with_capacity(n - 1);
        let mut ys = Vec::with_capacity(n - 1);
        for skip in 0..n {
            xs.clear();
            ys.clear();
            for j in (0..n).filter(|&j| j != skip) {
                xs.push(radii[j]);
                ys.push(values[j]);
            }
            push(&xs, &ys);
        }
    }
    let attempted = if n >= 4 { n + 1 } else { 1 };
    if 2 * fits.len() <= attempted {
        return None;
    }
    fits.sort_by(f64::total_cmp);
    let median = fits[fits.len() / 2];
    let mut deviations: Vec<f64> = fits.iter().map(|v| (v - median).abs()).collect();
    deviations.sort_by(f64::total_cmp);
    Some((median, deviations[deviations.len() * 3 / 4]))
}

fn extrapolate_to_one(method: Extrapolation, radii: &[f64], values: &[f64]) -> Option<Extrapolant> {
    match method {
        Extrapolation::Polynomial => Some(extrapolate::polynomial(radii, values, 1.0)),
        Extrapolation::Rational => extrapolate::rational(radii, values, 1.0),
    }
}
