//! Spectral densities of the two processes, the dual symbol
//! `φ_λ(ω) = λ₁ + λ₂ cos ω`, and the extrema of `φ_λ · g_θ` over the torus.
//!
//! All evaluators accept any real `ω`; it is reduced to `[-π, π)` first.

use std::f64::consts::{PI, TAU};

use crate::toeplitz::LambdaPair;

/// Reduce an angle to the torus `[-π, π)`.
pub fn reduce_to_torus(omega: f64) -> f64 {
    let r = (omega + PI).rem_euclid(TAU) - PI;
    // rem_euclid can round up to exactly TAU.
    if r >= PI {
        r - TAU
    } else {
        r
    }
}

/// AR(1) spectral density `1 / (1 + θ² - 2θ cos ω)`.
pub fn g_theta(omega: f64, theta: f64) -> f64 {
    debug_assert!(theta.abs() < 1.0);
    let w = reduce_to_torus(omega);
    1.0 / (1.0 + theta * theta - 2.0 * theta * w.cos())
}

/// MA(1) spectral density `1 + φ² + 2φ cos ω`.
pub fn h_phi(omega: f64, phi: f64) -> f64 {
    debug_assert!(phi.abs() < 1.0);
    let w = reduce_to_torus(omega);
    1.0 + phi * phi + 2.0 * phi * w.cos()
}

/// `φ_λ(ω) = λ₁ + λ₂ cos ω`.
pub fn phi_lambda(omega: f64, lambda: LambdaPair) -> f64 {
    lambda.lambda1 + lambda.lambda2 * reduce_to_torus(omega).cos()
}

/// `max_ω h_φ(ω) = (1 + |φ|)²`.
pub fn h_phi_sup(phi: f64) -> f64 {
    (1.0 + phi.abs()).powi(2)
}

/// An evaluable symbol on the torus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Symbol {
    GTheta { theta: f64 },
    HPhi { phi: f64 },
    PhiLambda { lambda: LambdaPair },
    /// `φ_λ · g_θ`
    Product { lambda: LambdaPair, theta: f64 },
}

impl Symbol {
    pub fn eval(&self, omega: f64) -> f64 {
        match *self {
            Symbol::GTheta { theta } => g_theta(omega, theta),
            Symbol::HPhi { phi } => h_phi(omega, phi),
            Symbol::PhiLambda { lambda } => phi_lambda(omega, lambda),
            Symbol::Product { lambda, theta } => phi_lambda(omega, lambda) * g_theta(omega, theta),
        }
    }
}

/// Closed-form `(min, max)` of `(φ_λ g_θ)(ω)` over the torus.
///
/// The product only has critical points at `ω = 0` and `ω = -π`, with values
/// `(λ₁+λ₂)/(1-θ)²` and `(λ₁-λ₂)/(1+θ)²`. Which is the minimum depends on the
/// sign of `λ₂ + 2θλ₁/(1+θ²)`; on the line where it vanishes the product is
/// the constant `λ₁`.
pub fn product_extrema(lambda: LambdaPair, theta: f64) -> (f64, f64) {
    debug_assert!(theta.abs() < 1.0);
    let LambdaPair { lambda1, lambda2 } = lambda;
    let t2 = 1.0 + theta * theta;
    let knife = lambda2 + 2.0 * theta * lambda1 / t2;
    if knife == 0.0 {
        return (lambda1, lambda1);
    }
    let at_pi = (lambda1 - lambda2) / (t2 + 2.0 * theta);
    let at_zero = (lambda1 + lambda2) / (t2 - 2.0 * theta);
    if knife < 0.0 {
        (at_zero, at_pi)
    } else {
        (at_pi, at_zero)
    }
}
