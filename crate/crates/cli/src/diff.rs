use clap::Args;
use exactdiff_core::differences::{backward_difference, exact_difference, forward_difference, OperatorConfig};
use exactdiff_core::{sample, ClosedForm, Lattice};
use serde_json::json;

use crate::output::{Cell, RunReport};
use crate::{summation_spec, Failure, FormatArg, Outcome, EXIT_REFUSED};

#[derive(Debug, Clone, Args)]
pub struct DiffArgs {
    /// Exact difference evaluated by series summation (default).
    #[arg(long, conflicts_with = "standard")]
    pub exact: bool,
    /// Standard first-order difference.
    #[arg(long)]
    pub standard: bool,
    /// With --standard: forward instead of backward difference.
    #[arg(long, requires = "standard")]
    pub forward: bool,
    /// Difference order.
    #[arg(long, default_value_t = 1)]
    pub order: u32,
    /// Signal expression, e.g. `exp:0.5` or `2*sin:1.0+pow:2`.
    #[arg(long)]
    pub signal: String,
    /// Lattice index n; the time is n*step.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub t: i64,
    /// Lattice step T.
    #[arg(long, default_value_t = 1.0)]
    pub step: f64,
    #[command(flatten)]
    pub format: FormatArg,
}

const COLUMNS: [&str; 11] = [
    "signal",
    "operator",
    "order",
    "n",
    "t",
    "step",
    "value",
    "abs_error_estimate",
    "method",
    "terms_used",
    "converged",
];

pub fn run(args: &DiffArgs, echo: String) -> Result<Outcome, Failure> {
    let form: ClosedForm = args.signal.parse()?;
    let lattice = Lattice::new(args.step)?;
    let x = sample(&form, lattice)?;
    let operator = match (args.standard, args.forward) {
        (false, _) => "exact",
        (true, false) => "backward",
        (true, true) => "forward",
    };
    let params = json!({
        "signal": form.to_string(),
        "operator": operator,
        "order": args.order,
        "n": args.t,
        "step": args.step,
    });
    let mut report = RunReport::new(echo, params, &COLUMNS);
    let row = |value, estimate, method: String, terms: usize, converged| {
        vec![
            Cell::text(form.to_string()),
            Cell::text(operator),
            Cell::int(i64::from(args.order)),
            Cell::int(args.t),
            Cell::exact(lattice.time(args.t)),
            Cell::exact(args.step),
            Cell::exact(value),
            Cell::sci(estimate),
            Cell::text(method),
            Cell::int(terms as i64),
            Cell::flag(converged),
        ]
    };

    if args.standard {
        if args.order != 1 {
            return Err(Failure::Usage(format!("standard differences are first order; got --order {}", args.order)));
        }
        let value = if args.forward { forward_difference(&x, args.t) } else { backward_difference(&x, args.t) };
        report.push(row(value, 0.0, "-".into(), 2, true));
        return Ok(Outcome::ok(report));
    }

    let cfg = OperatorConfig::new(lattice).with_summation(summation_spec()?);
    let r = exact_difference(&x, args.order, args.t, &cfg)?;
    report.push(row(r.value, r.abs_error_estimate, r.method_used.to_string(), r.terms_used, r.converged));
    let exit = if r.converged {
        0
    } else {
        eprintln!(
            "error: [NON_CONVERGENT] error estimate {:.3e} exceeds the tolerance for value {:.6e} ({})",
            r.abs_error_estimate, r.value, r.method_used
        );
        EXIT_REFUSED
    };
    Ok(Outcome { report, exit })
}
