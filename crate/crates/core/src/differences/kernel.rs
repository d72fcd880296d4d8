use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Highest supported difference order.
pub const MAX_ORDER: u32 = 4;

/// `(cos(pi n/2), sin(pi n/2))` without rounding noise.
fn quarter_turn(n: u32) -> (f64, f64) {
    match n % 4 {
        0 => (1.0, 0.0),
        1 => (0.0, 1.0),
        2 => (-1.0, 0.0),
        _ => (0.0, -1.0),
    }
}

fn check_order(n: u32) -> Result<()> {
    if (1..=MAX_ORDER).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedOrder(n))
    }
}

/// `M_n(0) = pi^n cos(pi n/2) / (n+1)`.
pub fn kernel_at_origin(n: u32) -> Result<f64> {
    check_order(n)?;
    Ok(PI.powi(n as i32) * quarter_turn(n).0 / f64::from(n + 1))
}

/// Kernel coefficient `M_n(m)` of the order-`n` exact difference.
///
/// For `m >= 1` this is the finite sum over `k` of
/// `(-1)^(m+k) n!/(n-2k)! pi^(n-2k-2) / m^(2k+2) * ((n-2k) cos(pi n/2) + pi m sin(pi n/2))`,
/// where terms with `n - 2k < 0` vanish (`1/Gamma` of a nonpositive integer).
pub fn kernel_coefficient(n: u32, m: u32) -> Result<f64> {
    check_order(n)?;
    if m == 0 {
        return kernel_at_origin(n);
    }
    Ok(series_coefficient(n, f64::from(m), m % 2 == 1))
}

fn series_coefficient(n: u32, m: f64, odd_m: bool) -> f64 {
    let (cos, sin) = quarter_turn(n);
    let upper = n.div_ceil(2) + 1;
    let mut total = 0.0;
    for k in 0..=upper {
        let Some(rest) = n.checked_sub(2 * k) else { continue };
        let falling: f64 = (rest + 1..=n).map(f64::from).product();
        let sign = if odd_m ^ (k % 2 == 1) { -1.0 } else { 1.0 };
        let power = PI.powi(rest as i32 - 2) / m.powi(2 * k as i32 + 2);
        total += sign * falling * power * (f64::from(rest) * cos + PI * m * sin);
    }
    total
}

/// Tabulated kernel of one order.
#[derive(Debug, Clone)]
pub struct DifferenceKernel {
    order: u32,
    coefficients: Vec<f64>,
}

impl DifferenceKernel {
    /// Kernel of order `n` with coefficients tabulated for `m < len`.
    /// Tables are shared between callers.
    pub fn cached(n: u32, len: usize) -> Result<Arc<DifferenceKernel>> {
        check_order(n)?;
        static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Arc<DifferenceKernel>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        let kernel = guard.entry((n, len)).or_insert_with(|| {
            let mut coefficients = Vec::with_capacity(len);
            coefficients.push(kernel_at_origin(n).expect("order checked"));
            coefficients.extend((1..len).map(|m| series_coefficient(n, m as f64, m % 2 == 1)));
            Arc::new(DifferenceKernel { order: n, coefficients })
        });
        Ok(kernel.clone())
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Sign `(-1)^n` carried by the forward-shift term.
    pub fn parity(&self) -> f64 {
        if self.order.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    pub fn coefficient_at(&self, m: usize) -> f64 {
        match self.coefficients.get(m) {
            Some(c) => *c,
            None => series_coefficient(self.order, m as f64, m % 2 == 1),
        }
    }
}
