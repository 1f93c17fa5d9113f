//! Closed-form, analytically invertible approximation of the error function.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Shape constant of the approximant; keeps relative error under 0.004.
pub const WINITZKI_A: f64 = 0.14;

/// `g(x) = sgn(x) · sqrt(1 − exp(−x² (4/π + a x²) / (1 + a x²)))`.
pub fn erf_approx(x: f64) -> f64 {
    if x.is_infinite() {
        return x.signum();
    }
    let x2 = x * x;
    let a = WINITZKI_A;
    let e = -x2 * (4.0 / PI + a * x2) / (1.0 + a * x2);
    x.signum() * (-e.exp_m1()).sqrt()
}

/// Exact inverse of [`erf_approx`] on `(−1, 1)`.
pub fn erf_approx_inv(y: f64) -> Result<f64> {
    if !(y.abs() < 1.0) {
        return Err(Error::Domain(format!("inverse erf needs |y| < 1, got {y}")));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let a = WINITZKI_A;
    let m = y.abs();
    let t = ((1.0 - m) * (1.0 + m)).ln();
    let b = 2.0 / (PI * a) + t / 2.0;
    let c = -t / a;
    // −b + sqrt(b² + c), rationalised when b > 0 to avoid cancellation.
    let inner = if b > 0.0 {
        c / (b + (b * b + c).sqrt())
    } else {
        -b + (b * b + c).sqrt()
    };
    Ok(y.signum() * inner.sqrt())
}
