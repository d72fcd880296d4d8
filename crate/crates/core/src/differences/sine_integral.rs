use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

/// Below this argument the Maclaurin series is used.
const SERIES_LIMIT: f64 = 4.0;

/// Sine integral `Si(x) = int_0^x sin(t)/t dt`, odd in `x`.
///
/// Small arguments use the Maclaurin series. Larger ones use
/// `Si(x) = pi/2 + Im(e^{-ix} E1(ix))`, with the exponential integral from
/// its continued fraction (modified Lentz).
pub fn sine_integral(x: f64) -> f64 {
    if x < 0.0 {
        return -sine_integral(-x);
    }
    if x.is_infinite() {
        return FRAC_PI_2;
    }
    if x <= SERIES_LIMIT {
        maclaurin(x)
    } else {
        FRAC_PI_2 + auxiliary(x).im
    }
}

fn maclaurin(x: f64) -> f64 {
    let x2 = x * x;
    let mut power = x; // (-1)^k x^(2k+1) / (2k+1)!
    let mut sum = x;
    for k in 1..100 {
        let j = (2 * k) as f64;
        power *= -x2 / (j * (j + 1.0));
        let term = power / (j + 1.0);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// `e^{-ix} E1(ix)`.
fn auxiliary(x: f64) -> Complex64 {
    let tiny = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..1000 {
        let a = -((i - 1) as f64).powi(2);
        b += 2.0;
        d = (a * d + b).inv();
        c = b + a / c;
        let delta = c * d;
        h *= delta;
        if (delta.re - 1.0).abs() + delta.im.abs() < 1e-16 {
            break;
        }
    }
    Complex64::new(x.cos(), -x.sin()) * h
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn known_values() {
        assert_eq!(sine_integral(0.0), 0.0);
        assert!((sine_integral(PI) - 1.851_937_051_982_466).abs() < 1e-13);
        assert!((sine_integral(1.0) - 0.946_083_070_367_183).abs() < 1e-14);
        assert!((sine_integral(10.0) - 1.658_347_594_218_874).abs() < 1e-13);
        assert!((sine_integral(-1.0) + 0.946_083_070_367_183).abs() < 1e-14);
    }

    #[test]
    fn branches_agree_at_switch() {
        let below = maclaurin(SERIES_LIMIT);
        let above = FRAC_PI_2 + auxiliary(SERIES_LIMIT).im;
        assert!((below - above).abs() < 1e-14, "{below} vs {above}");
    }

    #[test]
    fn approaches_half_pi() {
        assert!((sine_integral(100.0 * PI) - FRAC_PI_2).abs() < 0.004);
        assert!((sine_integral(1e6) - FRAC_PI_2).abs() < 1e-5);
    }
}
