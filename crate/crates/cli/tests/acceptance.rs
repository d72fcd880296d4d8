//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the report is always printed.

use std::f64::consts::{LN_2, PI};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use exactdiff_core::differences::{
    backward_difference, exact_difference, kernel_coefficient, sine_integral, OperatorConfig,
};
use exactdiff_core::growth::{cm_solution, edm_residual, edm_solution, sdm_residual, sdm_solution, HarrodDomarParams};
use exactdiff_core::summation::{abel_sum, cesaro_sum, SummationMethod, SummationSpec, Terms};
use exactdiff_core::{sample, ClosedForm, Lattice};
use serde_json::Value;

// Criterion 1
const TABLE3_BUDGET: Duration = Duration::from_secs(1);
const RATE_TOL: f64 = 1e-3;
const D_TOL: f64 = 0.05;
const G_REL_TOL: f64 = 5e-3;
/// `(lambda, ln(1 + lambda), D in percent, G)` as published.
const PUBLISHED_TABLE3: [(f64, f64, f64, f64); 10] = [
    (0.1, 0.095, 4.69, 1.048),
    (0.3, 0.262, 12.54, 1.457),
    (0.5, 0.405, 18.90, 2.574),
    (0.7, 0.531, 24.19, 5.440),
    (0.9, 0.642, 28.68, 13.22),
    (1.1, 0.742, 32.55, 35.90),
    (1.3, 0.833, 35.93, 106.8),
    (1.5, 0.916, 38.91, 342.7),
    (1.7, 0.993, 41.57, 1173.0),
    (1.9, 1.065, 43.96, 4242.0),
];

// Criterion 2
const TABLE2_BUDGET: Duration = Duration::from_secs(30);
const TABLE2_REL_TOL: f64 = 1e-6;
const TABLE2_ABS_TOL_AT_ZERO: f64 = 1e-8;

// Criterion 3
const TABLE1_TOL: f64 = 1e-12;

// Criterion 4
const SUITE_BUDGET: Duration = Duration::from_secs(120);

// Criterion 5
const SDM_REL_TOL: f64 = 1e-10;
const EDM_TOL: f64 = 1e-5;

// Criterion 6
const SI_TOL: f64 = 1e-10;
const KERNEL_TOL: f64 = 1e-12;
const SERIES_TOL: f64 = 1e-6;

// Criterion 7
const STANDARD_GAP_MIN: f64 = 0.1;
const EXACT_GAP_MAX: f64 = 1e-6;

struct Outcome {
    passed: bool,
    detail: String,
}

fn exactdiff(args: &[&str]) -> (Value, i32, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_exactdiff"))
        .args(args)
        .env_remove("EXACTDIFF_MAX_TERMS")
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (doc, out.status.code().unwrap_or(-1), elapsed)
}

fn column(doc: &Value, name: &str) -> usize {
    doc["columns"].as_array().unwrap().iter().position(|c| c == name).unwrap()
}

fn table3_golden() -> Outcome {
    let (doc, code, elapsed) = exactdiff(&["table", "3", "--format", "json"]);
    let rows = doc["rows"].as_array().cloned().unwrap_or_default();
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    let mut mismatches = Vec::new();
    for (row, &(lambda, rate, d, g)) in rows.iter().zip(&PUBLISHED_TABLE3) {
        let get = |name| row[column(&doc, name)].as_f64().unwrap_or(f64::NAN);
        let errs = ((get("rate_sdm") - rate).abs(), (get("d_percent") - d).abs(), ((get("g_factor") - g) / g).abs());
        worst = (worst.0.max(errs.0), worst.1.max(errs.1), worst.2.max(errs.2));
        if (get("lambda") - lambda).abs() > 1e-12 || !(errs.0 <= RATE_TOL && errs.1 <= D_TOL && errs.2 <= G_REL_TOL) {
            mismatches.push(lambda);
        }
    }
    Outcome {
        passed: code == 0 && rows.len() == 10 && mismatches.is_empty() && elapsed < TABLE3_BUDGET,
        detail: format!(
            "{} rows, worst |rate| {:.1e}, |D| {:.1e} pp, G rel {:.1e}, mismatches {mismatches:?}, {:.3} s",
            rows.len(),
            worst.0,
            worst.1,
            worst.2,
            elapsed.as_secs_f64()
        ),
    }
}

fn table2_exactness() -> Outcome {
    let start = Instant::now();
    let cfg = OperatorConfig::new(Lattice::unit());
    let cases: [(ClosedForm, fn(f64) -> f64); 5] = [
        (ClosedForm::Exp(0.5), |t| 0.5 * (0.5 * t).exp()),
        (ClosedForm::Sin(2.0), |t| 2.0 * (2.0 * t).cos()),
        (ClosedForm::Cos(2.0), |t| -2.0 * (2.0 * t).sin()),
        (ClosedForm::Monomial(2), |t| 2.0 * t),
        (ClosedForm::Monomial(3), |t| 3.0 * t * t),
    ];
    let mut worst_rel = 0.0f64;
    let mut failures = Vec::new();
    for (form, derivative) in &cases {
        let x = sample(form, Lattice::unit()).unwrap();
        for n in -5..=5 {
            let want = derivative(n as f64);
            match exact_difference(&x, 1, n, &cfg) {
                Ok(r) => {
                    let err = (r.value - want).abs();
                    let ok =
                        if want == 0.0 { err <= TABLE2_ABS_TOL_AT_ZERO } else { err <= TABLE2_REL_TOL * want.abs() };
                    if want != 0.0 {
                        worst_rel = worst_rel.max(err / want.abs());
                    }
                    if !ok {
                        failures.push(format!("{form}@{n}"));
                    }
                }
                Err(e) => failures.push(format!("{form}@{n}: {}", e.code())),
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        passed: failures.is_empty() && elapsed < TABLE2_BUDGET,
        detail: format!(
            "55 points, worst relative {worst_rel:.1e}, failures {failures:?}, {:.3} s",
            elapsed.as_secs_f64()
        ),
    }
}

/// Right-hand column of the published standard-difference table, exactly as
/// printed.
fn published_table1(lambda: f64) -> [(&'static str, ClosedForm, Box<dyn Fn(f64) -> f64>); 5] {
    let l = lambda;
    [
        ("exp", ClosedForm::Exp(l), Box::new(move |t| (l.exp() - 1.0) / l.exp() * (l * t).exp())),
        ("sin", ClosedForm::Sin(l), Box::new(move |t| 2.0 * (l * t - l / 2.0).sin() * (l / 2.0).cos())),
        ("cos", ClosedForm::Cos(l), Box::new(move |t| -2.0 * (l * t - l / 2.0).sin() * (l / 2.0).sin())),
        ("t^2", ClosedForm::Monomial(2), Box::new(|t| 2.0 * t - 1.0)),
        ("t^3", ClosedForm::Monomial(3), Box::new(|t| 3.0 * t * t - 3.0 * t + 1.0)),
    ]
}

/// The sine row as printed is `sin(lt) + sin(lt - l)`, a sum rather than a
/// difference; the backward difference is `2 cos(lt - l/2) sin(l/2)`.
fn corrected_sine_row(l: f64, t: f64) -> f64 {
    2.0 * (l * t - l / 2.0).cos() * (l / 2.0).sin()
}

/// Returns the outcome and whether every failure is the known sine-row misprint.
fn table1_closed_forms() -> (Outcome, bool) {
    let mut deviations = Vec::new();
    let mut corrected = 0.0f64;
    for lambda in [0.5, 1.0, 2.0] {
        for (name, form, formula) in published_table1(lambda) {
            let x = sample(&form, Lattice::unit()).unwrap();
            let dev = (-5..=5).map(|n| (backward_difference(&x, n) - formula(n as f64)).abs()).fold(0.0, f64::max);
            deviations.push((name, lambda, dev));
            if name == "sin" {
                let c = (-5..=5)
                    .map(|n| (backward_difference(&x, n) - corrected_sine_row(lambda, n as f64)).abs())
                    .fold(0.0, f64::max);
                corrected = corrected.max(c);
            }
        }
    }
    let failing: Vec<_> = deviations.iter().filter(|d| !(d.2 <= TABLE1_TOL)).collect();
    let worst_ok = deviations.iter().filter(|d| d.2 <= TABLE1_TOL).map(|d| d.2).fold(0.0, f64::max);
    let only_sine = failing.iter().all(|d| d.0 == "sin") && corrected <= TABLE1_TOL;
    let detail = if failing.is_empty() {
        format!("15 rows within {TABLE1_TOL:.0e}, worst {worst_ok:.1e}")
    } else {
        format!(
            "rows within tolerance: worst {worst_ok:.1e}; failing rows {:?}; the sine row as printed equals \
             sin(lt)+sin(lt-l), while 2*cos(lt-l/2)*sin(l/2) matches to {corrected:.1e}",
            failing.iter().map(|d| format!("{}(l={}) off by {:.2}", d.0, d.1, d.2)).collect::<Vec<_>>()
        )
    };
    (Outcome { passed: failing.is_empty(), detail }, only_sine)
}

fn property_suites() -> Outcome {
    let (doc, code, elapsed) = exactdiff(&["verify", "all", "--format", "json"]);
    let checks = doc["checks"].as_array().cloned().unwrap_or_default();
    let failed: Vec<String> =
        checks.iter().filter(|c| c["passed"] != true).map(|c| c["name"].as_str().unwrap_or("?").to_string()).collect();
    let count =
        |prefix: &str| checks.iter().filter(|c| c["name"].as_str().is_some_and(|n| n.starts_with(prefix))).count();
    let families = [
        count("first order") > 0,
        count("second order") > 0,
        count("kernel vs recurrence") > 0,
        count("round trip") > 0,
        count("backward product identity") > 0,
    ];
    Outcome {
        passed: code == 0 && failed.is_empty() && families.iter().all(|&b| b) && elapsed < SUITE_BUDGET,
        detail: format!("{} checks, failed {failed:?}, {:.3} s", checks.len(), elapsed.as_secs_f64()),
    }
}

fn growth_residuals() -> Outcome {
    let cfg = OperatorConfig::new(Lattice::unit());
    let (mut sdm_worst, mut edm_worst) = (0.0f64, 0.0f64);
    let mut lattice_exact = true;
    let mut errors = Vec::new();
    for lambda in [0.1, 0.3, 0.5, 0.9] {
        for a in [0.0, 3.0] {
            let p = HarrodDomarParams::new(0.3, 0.3 / lambda, a, 1.0, 1.0).unwrap();
            for n in 0..=5 {
                match (sdm_residual(&p, n), sdm_solution(&p, n), edm_residual(&p, n, &cfg)) {
                    (Ok(r), Ok(y), Ok(e)) => {
                        sdm_worst = sdm_worst.max(r.abs() / y.abs().max(1.0));
                        edm_worst = edm_worst.max(e.value.abs());
                    }
                    _ => errors.push((lambda, a, n)),
                }
                lattice_exact &= edm_solution(&p, n).to_bits() == cm_solution(&p, n as f64).to_bits();
            }
        }
    }
    Outcome {
        passed: errors.is_empty() && sdm_worst < SDM_REL_TOL && edm_worst < EDM_TOL && lattice_exact,
        detail: format!(
            "64 grid points, SDM relative {sdm_worst:.1e}, EDM {edm_worst:.1e}, EDM = CM bitwise: {lattice_exact}, errors {errors:?}"
        ),
    }
}

/// Adaptive Simpson quadrature of `sin(t)/t` on unit panels.
fn si_oracle(x: f64) -> f64 {
    fn f(t: f64) -> f64 {
        if t == 0.0 {
            1.0
        } else {
            t.sin() / t
        }
    }
    fn rec(a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (fl, fr) = (f(0.5 * (a + m)), f(0.5 * (m + b)));
        let left = (m - a) / 6.0 * (fa + 4.0 * fl + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * fr + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(a, m, fa, fl, fm, left, tol / 2.0, depth - 1) + rec(m, b, fm, fr, fb, right, tol / 2.0, depth - 1)
        }
    }
    let panels = x.ceil().max(1.0) as usize;
    let h = x / panels as f64;
    (0..panels)
        .map(|i| {
            let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
            let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
            rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), 1e-15, 48)
        })
        .sum()
}

fn oracles() -> Outcome {
    let si = [0.5, PI, 5.0, 20.0, 100.0].iter().map(|&x| (sine_integral(x) - si_oracle(x)).abs()).fold(0.0, f64::max);
    let kernel = (1..=50u32)
        .map(|m| {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let closed = -2.0 * sign / f64::from(m * m);
            kernel_coefficient(2, m).map_or(f64::INFINITY, |k| (k - closed).abs())
        })
        .fold(0.0, f64::max);

    let sign = |m: usize| if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let series: [(&str, Box<dyn Fn(usize) -> f64 + Sync>, u32, f64); 4] = [
        ("(-1)^m", Box::new(&sign), 1, -0.5),
        ("(-1)^m m", Box::new(move |m| sign(m) * m as f64), 2, -0.25),
        ("(-1)^m m^2", Box::new(move |m| sign(m) * (m * m) as f64), 3, 0.0),
        ("(-1)^m / m", Box::new(move |m| sign(m) / m as f64), 1, -LN_2),
    ];
    let mut series_worst = 0.0f64;
    let mut failures = Vec::new();
    for (name, a, k, want) in &series {
        let src = Terms::new(a);
        let spec = SummationSpec::default();
        let c = cesaro_sum(&src, &spec.clone().with_method(SummationMethod::Cesaro(*k)));
        let ab = abel_sum(&src, &spec.with_method(SummationMethod::Abel));
        for (method, r) in [("cesaro", c), ("abel", ab)] {
            match r {
                Ok(r) => {
                    let err = (r.value - want).abs();
                    series_worst = series_worst.max(err);
                    if !(err <= SERIES_TOL) {
                        failures.push(format!("{method} {name}"));
                    }
                }
                Err(e) => failures.push(format!("{method} {name}: {}", e.code())),
            }
        }
    }
    Outcome {
        passed: si <= SI_TOL && kernel <= KERNEL_TOL && failures.is_empty(),
        detail: format!("Si {si:.1e}, kernel {kernel:.1e}, series {series_worst:.1e}, failures {failures:?}"),
    }
}

fn non_equivalence() -> Outcome {
    let lambda = 0.3;
    let x = sample(&ClosedForm::Exp(lambda), Lattice::unit()).unwrap();
    let want = lambda * lambda.exp();
    let standard = (backward_difference(&x, 1) - want).abs() / want;
    let exact = exact_difference(&x, 1, 1, &OperatorConfig::new(Lattice::unit()))
        .map_or(f64::INFINITY, |r| (r.value - want).abs() / want);
    Outcome {
        passed: standard > STANDARD_GAP_MIN && exact < EXACT_GAP_MAX,
        detail: format!("standard relative gap {standard:.4}, exact relative gap {exact:.1e}"),
    }
}

fn main() -> ExitCode {
    let (table1, table1_known) = table1_closed_forms();
    let results = [
        ("1", "table 3 golden reproduction", table3_golden()),
        ("2", "table 2 exactness", table2_exactness()),
        ("3", "table 1 closed forms", table1),
        ("4", "algebraic property suites", property_suites()),
        ("5", "growth model residuals", growth_residuals()),
        ("6", "oracle checks", oracles()),
        ("7", "standard vs exact non-equivalence", non_equivalence()),
    ];
    for (id, name, o) in &results {
        println!("criterion {id} {} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    // Criterion 3 cannot pass as stated: its sine row is misprinted. Any other
    // failure, or a criterion 3 failure not explained by that row, fails the run.
    let unexpected: Vec<&str> =
        results.iter().filter(|(id, _, o)| !o.passed && !(*id == "3" && table1_known)).map(|(id, _, _)| *id).collect();
    if unexpected.is_empty() {
        println!("acceptance: all criteria pass except the documented table 1 sine-row misprint");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected failures in criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
