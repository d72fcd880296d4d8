use clap::{Args, ValueEnum};
use exactdiff_core::differences::{
    antidifference_signal, exact_difference, exact_difference_by_recurrence, nonstandard_product_identity_residual,
    OperatorConfig,
};
use exactdiff_core::growth::{cm_solution, edm_residual, edm_solution, sdm_residual, sdm_solution, HarrodDomarParams};
use exactdiff_core::{sample, ClosedForm, Error, Lattice, LatticeSignal, SummationMethod};
use rayon::prelude::*;
use serde_json::json;

use crate::output::{Cell, Check, RunReport};
use crate::{summation_spec, value_name, Failure, FormatArg, Outcome, EXIT_VERIFY_FAILED};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Leibniz,
    Semigroup,
    Inverse,
    Residuals,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Invariant suite to run.
    #[arg(value_enum)]
    pub suite: Suite,
    #[command(flatten)]
    pub format: FormatArg,
}

pub const LEIBNIZ_TOLERANCE: f64 = 1e-5;
pub const SECOND_ORDER_LEIBNIZ_TOLERANCE: f64 = 1e-4;
pub const PRODUCT_IDENTITY_TOLERANCE: f64 = 1e-12;
pub const INVERSE_TOLERANCE: f64 = 1e-5;
pub const SDM_RELATIVE_TOLERANCE: f64 = 1e-10;
pub const EDM_TOLERANCE: f64 = 1e-5;

const COLUMNS: [&str; 6] = ["suite", "check", "deviation", "tolerance", "passed", "detail"];

pub fn run(args: &VerifyArgs, echo: String) -> Result<Outcome, Failure> {
    let cfg = OperatorConfig::new(Lattice::unit()).with_summation(summation_spec()?);
    let suites: &[Suite] = match args.suite {
        Suite::All => &[Suite::Leibniz, Suite::Semigroup, Suite::Inverse, Suite::Residuals],
        ref one => std::slice::from_ref(one),
    };
    let mut report = RunReport::new(echo, json!({ "suite": value_name(&args.suite) }), &COLUMNS);
    for suite in suites {
        let checks = match suite {
            Suite::Leibniz => leibniz(&cfg),
            Suite::Semigroup => semigroup(&cfg),
            Suite::Inverse => inverse(&cfg),
            Suite::Residuals => residuals(&cfg),
            Suite::All => unreachable!(),
        };
        for c in checks {
            report.push(vec![
                Cell::text(value_name(suite)),
                Cell::text(c.name.clone()),
                Cell::sci(c.deviation),
                Cell::sci(c.tolerance),
                Cell::flag(c.passed),
                Cell::text(c.detail.clone()),
            ]);
            report.checks.push(c);
        }
    }
    let exit = if report.all_passed() { 0 } else { EXIT_VERIFY_FAILED };
    Ok(Outcome { report, exit })
}

fn unit(form: &ClosedForm) -> LatticeSignal {
    sample(form, Lattice::unit()).expect("suite signals are valid")
}

/// Largest deviation over `points`, or the first engine error.
fn worst(points: impl IntoIterator<Item = i64>, f: impl Fn(i64) -> Result<f64, Error>) -> Result<(f64, i64), Error> {
    let mut out = (0.0, 0);
    for n in points {
        let d = f(n)?;
        if !(d <= out.0) {
            out = (d, n);
        }
    }
    Ok(out)
}

fn check(name: String, tolerance: f64, result: Result<(f64, i64), Error>) -> Check {
    match result {
        Ok((deviation, n)) => {
            Check { name, deviation, tolerance, passed: deviation <= tolerance, detail: format!("worst at n={n}") }
        }
        Err(e) => {
            Check { name, deviation: f64::INFINITY, tolerance, passed: false, detail: format!("{}: {e}", e.code()) }
        }
    }
}

/// Product rules: exact first and second order Leibniz, and the modified
/// product rule of the backward difference.
pub fn leibniz(cfg: &OperatorConfig) -> Vec<Check> {
    let family = [ClosedForm::Exp(0.3), ClosedForm::Sin(1.0), ClosedForm::Monomial(2)];
    let pairs: Vec<(usize, usize)> = (0..3).flat_map(|i| (i..3).map(move |j| (i, j))).collect();
    let per_pair: Vec<[Check; 3]> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (f, g) = (&family[i], &family[j]);
            let (x, y) = (unit(f), unit(g));
            let xy = x.product(&y);
            let d = |s: &LatticeSignal, k, n| exact_difference(s, k, n, cfg).map(|r| r.value);
            let first = worst(-3..=3, |n| Ok((d(&xy, 1, n)? - d(&x, 1, n)? * y.at(n) - x.at(n) * d(&y, 1, n)?).abs()));
            let second = worst(-3..=3, |n| {
                let rhs = d(&x, 2, n)? * y.at(n) + 2.0 * d(&x, 1, n)? * d(&y, 1, n)? + x.at(n) * d(&y, 2, n)?;
                Ok((d(&xy, 2, n)? - rhs).abs())
            });
            let identity = worst(-3..=3, |n| Ok(nonstandard_product_identity_residual(&x, &y, n).abs()));
            [
                check(format!("first order {f} * {g}"), LEIBNIZ_TOLERANCE, first),
                check(format!("second order {f} * {g}"), SECOND_ORDER_LEIBNIZ_TOLERANCE, second),
                check(format!("backward product identity {f} * {g}"), PRODUCT_IDENTITY_TOLERANCE, identity),
            ]
        })
        .collect();
    per_pair.into_iter().flatten().collect()
}

/// Second-order kernel against the nested first-order operator, within the
/// sum of both error estimates.
pub fn semigroup(cfg: &OperatorConfig) -> Vec<Check> {
    let family = [
        ClosedForm::Exp(0.5),
        ClosedForm::Sin(2.0),
        ClosedForm::Cos(2.0),
        ClosedForm::Monomial(2),
        ClosedForm::Monomial(3),
    ];
    family
        .par_iter()
        .map(|form| {
            let x = unit(form);
            let name = format!("kernel vs recurrence {form}");
            let mut worst: Option<(f64, f64, i64)> = None;
            for n in -2..=2 {
                let pair = exact_difference(&x, 2, n, cfg)
                    .and_then(|k| exact_difference_by_recurrence(&x, 2, n, cfg).map(|r| (k, r)));
                let (kernel, nested) = match pair {
                    Ok(p) => p,
                    Err(e) => return check(name, 0.0, Err(e)),
                };
                let gap = (kernel.value - nested.value).abs();
                let budget = kernel.abs_error_estimate + nested.abs_error_estimate;
                if worst.is_none_or(|(g, b, _)| gap * b.max(f64::MIN_POSITIVE) > g * budget.max(f64::MIN_POSITIVE)) {
                    worst = Some((gap, budget, n));
                }
            }
            let (gap, budget, n) = worst.expect("nonempty range");
            Check { name, deviation: gap, tolerance: budget, passed: gap <= budget, detail: format!("worst at n={n}") }
        })
        .collect()
}

/// First-order exact difference of the exact antidifference. Polynomial
/// inputs have no antidifference of this form and must be refused.
pub fn inverse(cfg: &OperatorConfig) -> Vec<Check> {
    let cfg = cfg.clone().with_fixed_method(SummationMethod::Abel);
    let mut checks: Vec<Check> = [ClosedForm::Cos(1.0), ClosedForm::Sin(0.5), ClosedForm::Exp(0.3)]
        .par_iter()
        .map(|form| {
            let x = unit(form);
            let result = antidifference_signal(&x, &cfg, 0.0)
                .and_then(|anti| worst(-3..=3, |n| Ok((exact_difference(&anti, 1, n, &cfg)?.value - x.at(n)).abs())));
            check(format!("round trip {form}"), INVERSE_TOLERANCE, result)
        })
        .collect();
    let linear = ClosedForm::Monomial(1);
    let refused = antidifference_signal(&unit(&linear), &cfg, 0.0);
    checks.push(Check {
        name: format!("refusal {linear}"),
        deviation: 0.0,
        tolerance: 0.0,
        passed: matches!(refused, Err(Error::NonConvergent(_))),
        detail: match refused {
            Err(e) => format!("refused as expected: {}", e.code()),
            Ok(_) => "accepted a polynomial input".into(),
        },
    });
    checks
}

/// Residuals of the discrete growth models on their closed-form solutions,
/// and lattice agreement of the exact model with the continuous one.
pub fn residuals(cfg: &OperatorConfig) -> Vec<Check> {
    let grid: Vec<(f64, f64)> = [0.1, 0.3, 0.5, 0.9].iter().flat_map(|&l| [(l, 0.0), (l, 3.0)]).collect();
    let per_point: Vec<[Check; 3]> = grid
        .par_iter()
        .map(|&(lambda, a)| {
            let label = format!("lambda={lambda} A={a}");
            let p = match HarrodDomarParams::new(0.3, 0.3 / lambda, a, 1.0, 1.0) {
                Ok(p) => p,
                Err(e) => {
                    return [
                        check(format!("sdm {label}"), SDM_RELATIVE_TOLERANCE, Err(e.clone())),
                        check(format!("edm {label}"), EDM_TOLERANCE, Err(e.clone())),
                        check(format!("edm = cm {label}"), 0.0, Err(e)),
                    ]
                }
            };
            let sdm = worst(0..=5, |n| Ok(sdm_residual(&p, n)?.abs() / sdm_solution(&p, n)?.abs().max(1.0)));
            let edm = worst(0..=5, |n| Ok(edm_residual(&p, n, cfg)?.value.abs()));
            let lattice = worst(0..=5, |n| Ok((edm_solution(&p, n) - cm_solution(&p, n as f64)).abs()));
            [
                check(format!("sdm {label}"), SDM_RELATIVE_TOLERANCE, sdm),
                check(format!("edm {label}"), EDM_TOLERANCE, edm),
                check(format!("edm = cm {label}"), 0.0, lattice),
            ]
        })
        .collect();
    per_point.into_iter().flatten().collect()
}
