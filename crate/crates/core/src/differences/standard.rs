use crate::signals::LatticeSignal;

/// `X(n) - X(n-1)`.
pub fn backward_difference(x: &LatticeSignal, n: i64) -> f64 {
    x.at(n) - x.at(n - 1)
}

/// `X(n+1) - X(n)`.
pub fn forward_difference(x: &LatticeSignal, n: i64) -> f64 {
    x.at(n + 1) - x.at(n)
}

/// Residual of the product rule for backward differences,
/// `D(X1 X2) = D(X1) X2 + X1 D(X2) - D(X1) D(X2)`. Zero up to rounding.
pub fn nonstandard_product_identity_residual(x1: &LatticeSignal, x2: &LatticeSignal, n: i64) -> f64 {
    let (a, b) = (x1.at(n), x2.at(n));
    let (da, db) = (backward_difference(x1, n), backward_difference(x2, n));
    let product = a * b - x1.at(n - 1) * x2.at(n - 1);
    product - (da * b + a * db - da * db)
}

/// `D(X1 X2) - (D(X1) X2 + X1 D(X2))`, which equals `-D(X1) D(X2)`.
pub fn leibniz_violation(x1: &LatticeSignal, x2: &LatticeSignal, n: i64) -> f64 {
    let (a, b) = (x1.at(n), x2.at(n));
    let (da, db) = (backward_difference(x1, n), backward_difference(x2, n));
    let product = a * b - x1.at(n - 1) * x2.at(n - 1);
    product - (da * b + a * db)
}
