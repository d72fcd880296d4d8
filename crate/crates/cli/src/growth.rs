use clap::Args;
use exactdiff_core::growth::{trajectory, HarrodDomarParams, DEFAULT_HORIZON};
use serde_json::json;

use crate::output::{Cell, RunReport};
use crate::{Failure, FormatArg, Outcome};

const DEFAULT_SAVING: f64 = 0.3;

#[derive(Debug, Clone, Args)]
pub struct GrowthArgs {
    /// Growth rate s/v. Any two of --lambda, --s, --v fix the third.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Marginal propensity to save, in (0, 1) [default: 0.3].
    #[arg(long)]
    pub s: Option<f64>,
    /// Accelerator coefficient, positive.
    #[arg(long)]
    pub v: Option<f64>,
    /// Initial output.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub y0: f64,
    /// Autonomous investment.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,
    /// Number of lattice steps.
    #[arg(long, default_value_t = DEFAULT_HORIZON)]
    pub horizon: u32,
    /// Lattice step T.
    #[arg(long, default_value_t = 1.0)]
    pub step: f64,
    #[command(flatten)]
    pub format: FormatArg,
}

/// `(s, v)` from whichever of lambda, s and v were given.
fn saving_and_accelerator(args: &GrowthArgs) -> Result<(f64, f64), Failure> {
    match (args.lambda, args.s, args.v) {
        (Some(l), Some(s), Some(v)) => {
            if (s / v - l).abs() > 1e-12 * l.abs().max(1.0) {
                return Err(Failure::Usage(format!("inconsistent parameters: s/v = {} but lambda = {l}", s / v)));
            }
            Ok((s, v))
        }
        (Some(l), None, Some(v)) => Ok((l * v, v)),
        (Some(l), s, None) => {
            if !(l > 0.0) {
                return Err(Failure::Usage(format!("lambda = {l} must be positive")));
            }
            let s = s.unwrap_or(DEFAULT_SAVING);
            Ok((s, s / l))
        }
        (None, s, Some(v)) => Ok((s.unwrap_or(DEFAULT_SAVING), v)),
        (None, _, None) => Err(Failure::Usage("give --lambda or --v".into())),
    }
}

const COLUMNS: [&str; 6] = ["n", "t", "cm", "sdm", "edm", "cm_over_sdm"];

pub fn run(args: &GrowthArgs, echo: String) -> Result<Outcome, Failure> {
    let (s, v) = saving_and_accelerator(args)?;
    let p = HarrodDomarParams::new(s, v, args.a, args.y0, args.step)?;
    let params = json!({
        "lambda": p.lambda(),
        "s": p.s,
        "v": p.v,
        "a": p.a,
        "y0": p.y0,
        "step": p.step,
        "horizon": args.horizon,
    });
    let mut report = RunReport::new(echo, params, &COLUMNS);
    for row in trajectory(&p, args.horizon)? {
        report.push(vec![
            Cell::int(row.n),
            Cell::sig(row.t, 6),
            Cell::sig(row.cm, 6),
            Cell::sig(row.sdm, 6),
            Cell::sig(row.edm, 6),
            Cell::sig(row.ratio, 4),
        ]);
    }
    Ok(Outcome::ok(report))
}
