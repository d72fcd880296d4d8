use clap::Args;
use exactdiff_core::differences::{backward_difference, exact_difference, OperatorConfig};
use exactdiff_core::growth::{comparison_lambdas, comparison_row_with_horizon, DEFAULT_HORIZON};
use exactdiff_core::{sample, ClosedForm, Error, Lattice};
use rayon::prelude::*;
use serde_json::json;

use crate::output::{significant, Cell, RunReport};
use crate::{summation_spec, Failure, FormatArg, Outcome};

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    /// Which table: 1 (standard differences), 2 (exact differences) or 3 (growth comparison).
    #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
    pub which: u8,
    /// First lattice index of the sample range (tables 1 and 2).
    #[arg(long, default_value_t = -5, allow_negative_numbers = true)]
    pub t_min: i64,
    /// Last lattice index of the sample range (tables 1 and 2).
    #[arg(long, default_value_t = 5, allow_negative_numbers = true)]
    pub t_max: i64,
    /// Lattice step (tables 1 and 2).
    #[arg(long, default_value_t = 1.0)]
    pub step: f64,
    /// Rate of the exponential family [default: 1.0 for table 1, 0.5 for table 2].
    #[arg(long, allow_negative_numbers = true)]
    pub exp_rate: Option<f64>,
    /// Frequency of the sine and cosine families [default: 1.0 for table 1, 2.0 for table 2].
    #[arg(long, allow_negative_numbers = true)]
    pub trig_rate: Option<f64>,
    /// Horizon in lattice steps for the growth factor G (table 3).
    #[arg(long, default_value_t = DEFAULT_HORIZON)]
    pub horizon: u32,
    #[command(flatten)]
    pub format: FormatArg,
}

pub fn run(args: &TableArgs, echo: String) -> Result<Outcome, Failure> {
    if args.which == 3 {
        if args.exp_rate.is_some() || args.trig_rate.is_some() {
            return Err(Failure::Usage("--exp-rate and --trig-rate apply to tables 1 and 2".into()));
        }
        return Ok(Outcome::ok(table3(args, echo)?));
    }
    if args.t_min > args.t_max {
        return Err(Failure::Usage(format!("--t-min {} exceeds --t-max {}", args.t_min, args.t_max)));
    }
    let lattice = Lattice::new(args.step)?;
    let (exp_default, trig_default) = if args.which == 1 { (1.0, 1.0) } else { (0.5, 2.0) };
    let a = args.exp_rate.unwrap_or(exp_default);
    let w = args.trig_rate.unwrap_or(trig_default);
    let families =
        [ClosedForm::Exp(a), ClosedForm::Sin(w), ClosedForm::Cos(w), ClosedForm::Monomial(2), ClosedForm::Monomial(3)];
    for f in &families {
        f.validate()?;
    }
    let params = json!({
        "table": args.which,
        "t_min": args.t_min,
        "t_max": args.t_max,
        "step": args.step,
        "exp_rate": a,
        "trig_rate": w,
    });
    let report = if args.which == 1 {
        table1(&families, lattice, args, RunReport::new(echo, params, &TABLE1_COLUMNS))?
    } else {
        table2(&families, lattice, args, RunReport::new(echo, params, &TABLE2_COLUMNS))?
    };
    Ok(Outcome::ok(report))
}

/// Compact decimal rendering used inside formulas.
fn num(x: f64) -> String {
    let s = significant(x, 6);
    if s.contains('.') && !s.contains('e') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

const TABLE1_COLUMNS: [&str; 5] = ["function", "derivative", "backward_difference", "formula_deviation", "max_gap"];

/// Closed form of `f(t) - f(t - T)` and its rendering.
fn backward_formula(form: &ClosedForm, step: f64) -> (String, Box<dyn Fn(f64) -> f64>) {
    let h = step;
    match *form {
        ClosedForm::Exp(l) => {
            let c = ((l * h).exp() - 1.0) / (l * h).exp();
            (format!("{}*exp({}*t)", num(c), num(l)), Box::new(move |t| c * (l * t).exp()))
        }
        ClosedForm::Sin(l) => (
            format!("2*cos({}*t - {})*sin({})", num(l), num(l * h / 2.0), num(l * h / 2.0)),
            Box::new(move |t| 2.0 * (l * t - l * h / 2.0).cos() * (l * h / 2.0).sin()),
        ),
        ClosedForm::Cos(l) => (
            format!("-2*sin({}*t - {})*sin({})", num(l), num(l * h / 2.0), num(l * h / 2.0)),
            Box::new(move |t| -2.0 * (l * t - l * h / 2.0).sin() * (l * h / 2.0).sin()),
        ),
        ClosedForm::Monomial(2) => {
            (format!("{}*t - {}", num(2.0 * h), num(h * h)), Box::new(move |t| 2.0 * h * t - h * h))
        }
        ClosedForm::Monomial(3) => (
            format!("{}*t^2 - {}*t + {}", num(3.0 * h), num(3.0 * h * h), num(h * h * h)),
            Box::new(move |t| 3.0 * h * t * t - 3.0 * h * h * t + h * h * h),
        ),
        _ => unreachable!("table families are fixed"),
    }
}

fn derivative_text(form: &ClosedForm) -> String {
    match *form {
        ClosedForm::Exp(l) => format!("{}*exp({}*t)", num(l), num(l)),
        ClosedForm::Sin(l) => format!("{}*cos({}*t)", num(l), num(l)),
        ClosedForm::Cos(l) => format!("-{}*sin({}*t)", num(l), num(l)),
        ClosedForm::Monomial(k) => format!("{k}*t^{}", k - 1).replace("t^1", "t"),
        _ => unreachable!("table families are fixed"),
    }
}

fn table1(
    families: &[ClosedForm],
    lattice: Lattice,
    args: &TableArgs,
    mut report: RunReport,
) -> Result<RunReport, Failure> {
    for form in families {
        let x = sample(form, lattice)?;
        let derivative = form.derivative(1)?;
        let (text, formula) = backward_formula(form, lattice.step());
        let (mut deviation, mut gap) = (0.0f64, 0.0f64);
        for n in args.t_min..=args.t_max {
            let t = lattice.time(n);
            let d = backward_difference(&x, n);
            deviation = deviation.max((d - formula(t)).abs());
            gap = gap.max((d - derivative.eval(t)).abs());
        }
        report.push(vec![
            Cell::text(form.to_string()),
            Cell::text(derivative_text(form)),
            Cell::text(text),
            Cell::sci(deviation),
            Cell::sci(gap),
        ]);
    }
    Ok(report)
}

const TABLE2_COLUMNS: [&str; 8] = [
    "function",
    "derivative",
    "exact_difference",
    "max_abs_deviation",
    "max_rel_deviation",
    "max_error_estimate",
    "methods",
    "status",
];

struct Table2Row {
    abs: f64,
    rel: f64,
    estimate: f64,
    methods: Vec<String>,
}

fn table2_row(form: &ClosedForm, lattice: Lattice, args: &TableArgs, cfg: &OperatorConfig) -> Result<Table2Row, Error> {
    let x = sample(form, lattice)?;
    let derivative = form.derivative(1)?;
    let mut row = Table2Row { abs: 0.0, rel: 0.0, estimate: 0.0, methods: Vec::new() };
    for n in args.t_min..=args.t_max {
        let r = exact_difference(&x, 1, n, cfg)?;
        let want = derivative.eval(lattice.time(n));
        let err = (r.value - want).abs();
        row.abs = row.abs.max(err);
        if want != 0.0 {
            row.rel = row.rel.max(err / want.abs());
        }
        row.estimate = row.estimate.max(r.abs_error_estimate);
        let method = r.method_used.to_string();
        if !row.methods.contains(&method) {
            row.methods.push(method);
        }
    }
    Ok(row)
}

/// Table rows are independent, so they are evaluated in parallel and printed in order.
fn table2(
    families: &[ClosedForm],
    lattice: Lattice,
    args: &TableArgs,
    mut report: RunReport,
) -> Result<RunReport, Failure> {
    let cfg = OperatorConfig::new(lattice).with_summation(summation_spec()?);
    let rows: Vec<_> = families.par_iter().map(|f| table2_row(f, lattice, args, &cfg)).collect();
    for (form, row) in families.iter().zip(rows) {
        let mut cells =
            vec![Cell::text(form.to_string()), Cell::text(derivative_text(form)), Cell::text(derivative_text(form))];
        match row {
            Ok(r) => cells.extend([
                Cell::sci(r.abs),
                Cell::sci(r.rel),
                Cell::sci(r.estimate),
                Cell::text(r.methods.join("/")),
                Cell::text("ok"),
            ]),
            Err(e) => {
                cells.extend((0..4).map(|_| Cell::text("-")));
                cells.push(Cell::text(format!("{}: {e}", e.code())));
            }
        }
        report.push(cells);
    }
    Ok(report)
}

const TABLE3_COLUMNS: [&str; 6] = ["lambda", "rate_cm", "rate_sdm", "d_percent", "g_factor", "matches_reference"];

fn table3(args: &TableArgs, echo: String) -> Result<RunReport, Failure> {
    let params = json!({ "table": 3, "horizon": args.horizon });
    let mut report = RunReport::new(echo, params, &TABLE3_COLUMNS);
    for lambda in comparison_lambdas() {
        let mut cells = vec![Cell::fixed(lambda, 1), Cell::fixed(lambda, 3)];
        match comparison_row_with_horizon(lambda, args.horizon) {
            Ok(row) => {
                let matches = if args.horizon == DEFAULT_HORIZON {
                    row.matches_reference().map_or(Cell::text("n/a"), Cell::flag)
                } else {
                    Cell::text("n/a")
                };
                cells.extend([
                    Cell::fixed(row.rate_sdm, 3),
                    Cell::fixed(row.d_percent, 2),
                    Cell::sig(row.g_factor, 4),
                    matches,
                ]);
            }
            Err(e) => {
                cells.extend((0..3).map(|_| Cell::text("-")));
                cells.push(Cell::text(format!("{}: {e}", e.code())));
            }
        }
        report.push(cells);
    }
    Ok(report)
}
