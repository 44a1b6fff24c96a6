//! Elementary functions with exact argument reduction for multiples of π.

use std::f64::consts::PI;

/// sin(πx). Integers give exact zeros.
pub fn sin_pi(x: f64) -> f64 {
    let (s, c, q) = reduce(x);
    match q {
        0 => s,
        1 => c,
        2 => -s,
        _ => -c,
    }
}

/// cos(πx). Half-integers give exact zeros.
pub fn cos_pi(x: f64) -> f64 {
    let (s, c, q) = reduce(x);
    match q {
        0 => c,
        1 => -s,
        2 => -c,
        _ => s,
    }
}

// x = n/2 + r with |r| ≤ 1/4; the subtraction is exact by Sterbenz.
fn reduce(x: f64) -> (f64, f64, i64) {
    if !x.is_finite() {
        return (f64::NAN, f64::NAN, 0);
    }
    let n = (2.0 * x).round();
    let r = x - 0.5 * n;
    let q = (n % 4.0 + 4.0) % 4.0;
    let (s, c) = (PI * r).sin_cos();
    (s, c, q as i64)
}

/// Normalized sinc, sin(πx)/(πx).
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        sin_pi(x) / (PI * x)
    }
}

/// πu − sin(πu), by its Taylor series where the difference would cancel.
pub fn xms_pi(u: f64) -> f64 {
    let x = PI * u;
    if x.abs() >= 1.0 {
        return x - sin_pi(u);
    }
    let x2 = x * x;
    let mut term = x * x2 / 6.0;
    let mut sum = term;
    let mut n = 3.0;
    while term.abs() > 1e-18 * sum.abs() {
        term *= -x2 / ((n + 1.0) * (n + 2.0));
        sum += term;
        n += 2.0;
    }
    sum
}
