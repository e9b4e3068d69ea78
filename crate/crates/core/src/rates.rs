//! Closed-form rate functions of the AR(1) and MA(1) statistics, their
//! minimizers, and the MA(1) dual root.
//!
//! Every rate returns `+∞` outside the strict inequalities that define its
//! finite region, including exactly on the boundary.

use num_complex::Complex64;
use serde::Serialize;

use crate::cgf::{ma1_lambda_bound, ma1_log_term};
use crate::error::{LdpError, Result};
use crate::extended::ExtendedReal;
use crate::toeplitz::LambdaPair;

/// One-dimensional rate evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatePoint1D {
    pub c: f64,
    pub value: ExtendedReal,
}

/// Two-dimensional rate evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatePoint2D {
    pub x: f64,
    pub y: f64,
    pub value: ExtendedReal,
}

fn admissible_w(x: f64, y: f64) -> bool {
    x > 0.0 && y.abs() < x
}

/// Rate of `W_n`:
///
/// ```text
/// J(x, y) = (1/2) [ x(1+θ²) - 1 - 2yθ + log( x / (x² - y²) ) ],   0 < x, |y| < x
/// ```
pub fn rate_j(x: f64, y: f64, theta: f64) -> ExtendedReal {
    debug_assert!(theta.abs() < 1.0);
    if !admissible_w(x, y) {
        return ExtendedReal::PosInf;
    }
    let log_term = x.ln() - (x - y).ln() - (x + y).ln();
    let v = 0.5 * (x * (1.0 + theta * theta) - 1.0 - 2.0 * y * theta + log_term);
    // Round-off can push the value a hair below zero next to the LLN point.
    ExtendedReal::from_f64(v.max(0.0))
}

/// Stationary point of `xλ₁ + yλ₂ - L(λ)`:
///
/// ```text
/// λ₁* = (1+θ²)/2 - (x²+y²) / (2x(x²-y²)),   λ₂* = y/(x²-y²) - θ
/// ```
pub fn optimal_lambda_j(x: f64, y: f64, theta: f64) -> Result<LambdaPair> {
    if !admissible_w(x, y) {
        return Err(LdpError::OutsideRateDomain { x, y });
    }
    let d = (x - y) * (x + y);
    Ok(LambdaPair::new(
        0.5 * (1.0 + theta * theta) - (x * x + y * y) / (2.0 * x * d),
        y / d - theta,
    ))
}

/// `sqrt(1 + 4θ²c²)`
fn i1_root(c: f64, theta: f64) -> f64 {
    (2.0 * theta * c).hypot(1.0)
}

/// Rate of the quadratic mean `γ̃_n(0)`:
///
/// ```text
/// I₁(c) = (1/2) [ c(1+θ²) - r - log( 2c / (1 + r) ) ],   r = sqrt(1 + 4θ²c²),  c > 0
/// ```
pub fn rate_i1(c: f64, theta: f64) -> ExtendedReal {
    debug_assert!(theta.abs() < 1.0);
    if !(c > 0.0) {
        return ExtendedReal::PosInf;
    }
    let r = i1_root(c, theta);
    let v = 0.5 * (c * (1.0 + theta * theta) - r - (2.0 * c / (1.0 + r)).ln());
    ExtendedReal::from_f64(v.max(0.0))
}

/// Lag-one coordinate attaining `I₁(c) = inf_y J(c, y)`,
/// `y_c = (sqrt(1+4c²θ²) - 1)/(2θ)`, written as `2c²θ/(1 + sqrt(1+4c²θ²))`
/// so that `θ = 0` gives `0` without a special case.
pub fn i1_minimizer_y(c: f64, theta: f64) -> f64 {
    2.0 * c * c * theta / (1.0 + i1_root(c, theta))
}

/// `(11 + 5√5) / 2`, the largest root of `u² - 11u - 1`.
pub fn i2_cutoff_u() -> f64 {
    (11.0 + 5.0 * 5f64.sqrt()) / 2.0
}

/// Largest `c²` for which the cube-root expression of the `I₂` minimizer is
/// real: `(11 + 5√5) / (2(1+θ²)²)`.
pub fn i2_cutoff_c2(theta: f64) -> f64 {
    let a = 1.0 + theta * theta;
    i2_cutoff_u() / (a * a)
}

/// ```text
/// A(c, θ) = cbrt( 1 + 18c²a² + 3√3 sqrt( -c²a² (c⁴a⁴ - 11c²a² - 1) ) ),   a = 1 + θ²
/// ```
///
/// `None` when the inner square root is not real.
pub fn a2(c: f64, theta: f64) -> Option<f64> {
    let a = 1.0 + theta * theta;
    let u = c * c * a * a;
    let inner = u * (1.0 + 11.0 * u - u * u);
    if inner < 0.0 {
        return None;
    }
    Some((1.0 + 18.0 * u + 3.0 * 3f64.sqrt() * inner.sqrt()).cbrt())
}

/// Quadratic-mean coordinate attaining `I₂(c) = inf_x J(x, c)`:
///
/// ```text
/// x_c = (1 + 3c²a² + A + A²) / (3aA)
/// ```
///
/// It is the real root of `a x³ - x² - a c² x - c² = 0`. `None` beyond the
/// cutoff where `A` is not real.
pub fn i2_minimizer_x(c: f64, theta: f64) -> Option<f64> {
    let a = 1.0 + theta * theta;
    let big_a = a2(c, theta)?;
    let u = c * c * a * a;
    Some((1.0 + 3.0 * u + big_a + big_a * big_a) / (3.0 * a * big_a))
}

/// Rate of the lag-one autocovariance `γ̃_n(1)`, evaluated as `J(x_c, c)`
/// for `c² < (11+5√5)/(2(1+θ²)²)` and `+∞` otherwise.
pub fn rate_i2(c: f64, theta: f64) -> ExtendedReal {
    debug_assert!(theta.abs() < 1.0);
    if !(c * c < i2_cutoff_c2(theta)) {
        return ExtendedReal::PosInf;
    }
    match i2_minimizer_x(c, theta) {
        Some(x) => rate_j(x, c, theta),
        None => ExtendedReal::PosInf,
    }
}

/// Rate of the Yule–Walker estimator:
///
/// ```text
/// S(c) = (1/2) log( (1 + θ² - 2θc) / (1 - c²) ),   |c| < 1
/// ```
pub fn rate_yule_walker(c: f64, theta: f64) -> ExtendedReal {
    debug_assert!(theta.abs() < 1.0);
    if !(c.abs() < 1.0) {
        return ExtendedReal::PosInf;
    }
    let num = 1.0 + theta * theta - 2.0 * theta * c;
    let v = 0.5 * (num.ln() - ((1.0 - c) * (1.0 + c)).ln());
    ExtendedReal::from_f64(v.max(0.0))
}

/// Quadratic-mean coordinate attaining `S(c) = inf_x J(x, cx)`,
/// `x_c = 1/(1 - 2cθ + θ²)`.
pub fn yw_minimizer_x(c: f64, theta: f64) -> f64 {
    1.0 / (1.0 - 2.0 * c * theta + theta * theta)
}

/// Rate of `S_n = (mean, quadratic mean)` for AR(1):
///
/// ```text
/// J_S(x, y) = (1/2) [ y(1+θ²) - 2x²θ - r - log( 2(y-x²) / (1 + r) ) ],
/// r = sqrt(1 + 4θ²(y-x²)²),   y > x²
/// ```
pub fn rate_js(x: f64, y: f64, theta: f64) -> ExtendedReal {
    debug_assert!(theta.abs() < 1.0);
    let c = y - x * x;
    if !(c > 0.0) {
        return ExtendedReal::PosInf;
    }
    let r = i1_root(c, theta);
    let v = 0.5 * (y * (1.0 + theta * theta) - 2.0 * x * x * theta - r - (2.0 * c / (1.0 + r)).ln());
    ExtendedReal::from_f64(v.max(0.0))
}

/// Rate of the AR(1) sample mean, `c²(1-θ)²/2`.
pub fn rate_sample_mean_ar1(c: f64, theta: f64) -> f64 {
    0.5 * c * c * (1.0 - theta) * (1.0 - theta)
}

/// Quadratic-mean coordinate attaining the sample-mean rate from `J_S`,
/// `y_c = c² + 1/(1-θ²)`.
pub fn sample_mean_ar1_minimizer_y(c: f64, theta: f64) -> f64 {
    c * c + 1.0 / (1.0 - theta * theta)
}

/// Coefficients `[c3, c2, c1, c0]` of the stationarity cubic of the MA(1)
/// quadratic-mean dual.
pub fn lambda_phi_cubic(x: f64, phi: f64) -> [f64; 4] {
    let p2 = phi * phi;
    let p4 = p2 * p2;
    let m = (p2 - 1.0) * (p2 - 1.0);
    [
        4.0 * x * x * m,
        -4.0 * x * x * p2 - 4.0 * x * x + 4.0 * x * p4 - 8.0 * x * p2 + 4.0 * x,
        x * x - 4.0 * x * p2 - 4.0 * x + p4 - 2.0 * p2 + 1.0,
        x - p2 - 1.0,
    ]
}

/// Horner evaluation of `c[0] t³ + c[1] t² + c[2] t + c[3]`.
pub fn cubic_eval(coef: [f64; 4], t: f64) -> f64 {
    ((coef[0] * t + coef[1]) * t + coef[2]) * t + coef[3]
}

fn cubic_derivative(coef: [f64; 4], t: f64) -> f64 {
    (3.0 * coef[0] * t + 2.0 * coef[1]) * t + coef[2]
}

fn newton_polish(coef: [f64; 4], mut t: f64) -> f64 {
    for _ in 0..6 {
        let d = cubic_derivative(coef, t);
        if d == 0.0 {
            break;
        }
        let step = cubic_eval(coef, t) / d;
        if !step.is_finite() {
            break;
        }
        let next = t - step;
        if (next - t).abs() <= 4.0 * f64::EPSILON * t.abs().max(1.0) {
            t = next;
            break;
        }
        t = next;
    }
    t
}

/// Real roots of a cubic with nonzero leading coefficient, ascending.
///
/// Trigonometric form when all three roots are real, Cardano otherwise; each
/// root is then polished by Newton's method on the original polynomial.
pub fn cubic_real_roots(coef: [f64; 4]) -> Vec<f64> {
    let [a, b, c, d] = coef;
    debug_assert!(a != 0.0);
    let (b, c, d) = (b / a, c / a, d / a);
    // t = s - b/3 gives s³ + p s + q = 0.
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let disc = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);
    let mut roots = if disc > 0.0 {
        let sq = disc.sqrt();
        // Pick the sign that avoids cancellation.
        let u = (-q / 2.0 - q.signum() * sq).cbrt();
        let s = if u == 0.0 { 0.0 } else { u - p / (3.0 * u) };
        vec![s - shift]
    } else if p == 0.0 {
        vec![-shift]
    } else {
        let r = 2.0 * (-p / 3.0).sqrt();
        let arg = ((3.0 * q) / (p * r)).clamp(-1.0, 1.0);
        let base = arg.acos() / 3.0;
        (0..3)
            .map(|k| r * (base - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() - shift)
            .collect()
    };
    for r in roots.iter_mut() {
        *r = newton_polish(coef, *r);
    }
    roots.sort_by(f64::total_cmp);
    roots
}

/// Objective of the MA(1) quadratic-mean dual, `xλ - L(λ)`; `None` where the
/// log expression is not real.
fn ma1_dual_objective(x: f64, lambda: f64, phi: f64) -> Option<f64> {
    ma1_log_term(lambda, phi).map(|l| x * lambda - l)
}

/// Maximizer of `xλ - L(λ)` over `λ < 1/(2(1+|φ|)²)`, taken as the
/// admissible root of [`lambda_phi_cubic`] with the largest objective.
/// `None` for `x ≤ 0`.
pub fn lambda_phi(x: f64, phi: f64) -> Option<f64> {
    debug_assert!(phi.abs() < 1.0);
    if !(x > 0.0) {
        return None;
    }
    let bound = ma1_lambda_bound(phi);
    cubic_real_roots(lambda_phi_cubic(x, phi))
        .into_iter()
        .filter(|&l| l < bound)
        .filter_map(|l| ma1_dual_objective(x, l, phi).map(|v| (l, v)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(l, _)| l)
}

/// Rate of the MA(1) quadratic mean:
///
/// ```text
/// K_φ(x) = x λ_φ(x) + (1/2) log( (u + sqrt(u² - 16 λ_φ² φ²)) / 2 ),   u = 1 - 2λ_φ(1+φ²)
/// ```
///
/// for `x > 0`, `+∞` otherwise.
pub fn rate_k_phi(x: f64, phi: f64) -> ExtendedReal {
    match lambda_phi(x, phi).and_then(|l| ma1_dual_objective(x, l, phi)) {
        Some(v) => ExtendedReal::from_f64(v.max(0.0)),
        None => ExtendedReal::PosInf,
    }
}

/// The cube-root display of `λ_φ(x)` evaluated in complex arithmetic with
/// principal branches:
///
/// ```text
/// λ = (A + B/C + C) / (12 x² (φ²-1)²)
/// ```
///
/// Returns the full complex value so callers can check that its imaginary
/// part vanishes.
pub fn lambda_phi_complex_form(x: f64, phi: f64) -> Complex64 {
    let p2 = phi * phi;
    let p4 = p2 * p2;
    let p6 = p4 * p2;
    let m = p2 - 1.0;
    let m2 = m * m;
    let m4 = m2 * m2;
    let m6 = m4 * m2;
    let x2 = x * x;
    let x3 = x2 * x;
    let x4 = x2 * x2;
    let x5 = x4 * x;
    let x6 = x3 * x3;
    let x8 = x4 * x4;

    let a = 4.0 * x * (x * (p2 + 1.0) - m2);
    let b = 4.0 * x2 * (x2 * (p4 + 14.0 * p2 + 1.0) + 4.0 * x * (p2 + 1.0) * m2 + m4);
    let small_c = -x8
        * m4
        * (4.0 * x4 * p2
            + 32.0 * x3 * (p4 + p2)
            + x2 * (p4 + 46.0 * p2 + 1.0) * m2
            + 6.0 * x * (p2 + 1.0) * m4
            + m6);
    let real_part = -x6 * (p6 - 33.0 * p4 - 33.0 * p2 + 1.0) - 6.0 * x5 * m2 * (p4 - 10.0 * p2 + 1.0)
        + 6.0 * x4 * m4 * (p2 + 1.0)
        + x3 * m6;
    let w = Complex64::new(real_part, 0.0) + 3.0 * 3f64.sqrt() * Complex64::new(small_c, 0.0).sqrt();
    let big_c = -Complex64::new(1.0, 3f64.sqrt()) * w.cbrt();
    (a + b / big_c + big_c) / (12.0 * x2 * m2)
}

/// Rate of `(mean, quadratic mean)` for MA(1),
/// `K_S(x, y) = K_φ(y - x²) + x²/(2(1+φ)²)` for `y > x²`.
pub fn rate_ks(x: f64, y: f64, phi: f64) -> ExtendedReal {
    let c = y - x * x;
    if !(c > 0.0) {
        return ExtendedReal::PosInf;
    }
    rate_k_phi(c, phi) + rate_sample_mean_ma1(x, phi)
}

/// Rate of the MA(1) sample mean, `c²/(2(1+φ)²)`.
pub fn rate_sample_mean_ma1(c: f64, phi: f64) -> f64 {
    c * c / (2.0 * (1.0 + phi) * (1.0 + phi))
}

/// Almost-sure limit of `W_n`: `(1/(1-θ²), θ/(1-θ²))`.
pub fn lln_w(theta: f64) -> (f64, f64) {
    let v = 1.0 / (1.0 - theta * theta);
    (v, theta * v)
}
