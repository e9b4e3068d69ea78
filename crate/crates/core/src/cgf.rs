//! Normalized cumulant generating functions of `W_n` (AR(1)) and of the
//! MA(1) quadratic mean, at finite `n` and in the limit.
//!
//! ```text
//! L_n(λ) = (1/n) log E exp(n⟨λ, W_n⟩) = -(1/2n) Σ_k log(1 - 2α_{n,k})
//! L(λ)   = -(1/2) log( (p + sqrt(p² - 4(θ+λ₂)²)) / 2 ),   p = 1 + θ² - 2λ₁
//! ```
//!
//! `L` is finite on the domain classified by [`domain_membership`] and `+∞`
//! elsewhere. The log expression itself is real on the wider cone
//! `p > 2|θ+λ₂|`, which is where `sup_ω φ_λ g_θ < 1/2`; that continuation is
//! what the closed-form rate of `W_n` is the convex dual of, so it is exposed
//! separately for the Legendre oracle.

use crate::error::Result;
use crate::extended::ExtendedReal;
use crate::spectral::h_phi_sup;
use crate::toeplitz::{d_matrix, domain_membership, pivots, product_eigenvalues_capped, LambdaPair, DEFAULT_DENSE_CAP};

/// Finite-n CGF from the eigenvalues of the conjugated product, with the
/// default dense cap.
pub fn l_n_ar1(lambda: LambdaPair, theta: f64, n: usize) -> Result<ExtendedReal> {
    l_n_ar1_capped(lambda, theta, n, DEFAULT_DENSE_CAP)
}

pub fn l_n_ar1_capped(lambda: LambdaPair, theta: f64, n: usize, cap: usize) -> Result<ExtendedReal> {
    let alphas = product_eigenvalues_capped(lambda, theta, n, cap)?;
    Ok(l_n_from_eigenvalues(&alphas))
}

/// `-(1/2n) Σ log(1 - 2α)`, or `+∞` when some `α ≥ 1/2`.
pub fn l_n_from_eigenvalues(alphas: &[f64]) -> ExtendedReal {
    if alphas.iter().any(|&a| a >= 0.5) {
        return ExtendedReal::PosInf;
    }
    let total: f64 = alphas.iter().map(|&a| (-2.0 * a).ln_1p()).sum();
    ExtendedReal::Finite(-total / (2.0 * alphas.len() as f64))
}

/// Finite-n CGF through the determinant factorization
///
/// ```text
/// L_n = -(1/2n) [ log det D_{n,λ} + log det T_n(g_θ) ],   det T_n(g_θ) = 1/(1-θ²)
/// ```
///
/// in O(n). `+∞` exactly when `D_{n,λ}` is not positive definite.
pub fn l_n_ar1_pivot(lambda: LambdaPair, theta: f64, n: usize) -> Result<ExtendedReal> {
    let d = d_matrix(lambda, theta, n)?;
    if lambda.lambda1 == 0.0 && lambda.lambda2 == 0.0 {
        // D = Σ⁻¹ exactly; skip the two log-determinants that would cancel
        // only up to rounding.
        return Ok(ExtendedReal::ZERO);
    }
    Ok(match pivots(&d).log_det() {
        Some(log_det) => {
            let log_det_cov = -(-theta * theta).ln_1p();
            ExtendedReal::Finite(-(log_det + log_det_cov) / (2.0 * n as f64))
        }
        None => ExtendedReal::PosInf,
    })
}

/// True where the closed-form log expression is real: `1+θ²-2λ₁ > 2|θ+λ₂|`.
pub fn ar1_formula_domain(lambda: LambdaPair, theta: f64) -> bool {
    let p = 1.0 + theta * theta - 2.0 * lambda.lambda1;
    p > 2.0 * (theta + lambda.lambda2).abs()
}

/// `(p, s)` with `s = sqrt(p² - 4(θ+λ₂)²)`.
fn ar1_p_s(lambda: LambdaPair, theta: f64) -> (f64, f64) {
    let p = 1.0 + theta * theta - 2.0 * lambda.lambda1;
    let shift = theta + lambda.lambda2;
    // (p - 2|shift|)(p + 2|shift|) loses less than p² - 4 shift² near the edge.
    let disc = (p - 2.0 * shift.abs()) * (p + 2.0 * shift.abs());
    (p, disc.max(0.0).sqrt())
}

/// Closed-form expression evaluated on [`ar1_formula_domain`], `+∞` outside.
pub fn l_limit_ar1_extended(lambda: LambdaPair, theta: f64) -> ExtendedReal {
    if !ar1_formula_domain(lambda, theta) {
        return ExtendedReal::PosInf;
    }
    let (p, s) = ar1_p_s(lambda, theta);
    ExtendedReal::from_f64(-0.5 * ((p + s) / 2.0).ln())
}

/// Limiting CGF of `W_n`: the closed form on the domain `D1 ∪ D2`, `+∞`
/// elsewhere.
pub fn l_limit_ar1(lambda: LambdaPair, theta: f64) -> ExtendedReal {
    if domain_membership(lambda, theta).is_inside() {
        l_limit_ar1_extended(lambda, theta)
    } else {
        ExtendedReal::PosInf
    }
}

/// Gradient of the closed form, `(1/s, (θ+λ₂)/(Q s))` with `Q = (p+s)/2`.
/// `None` off [`ar1_formula_domain`].
pub fn l_limit_ar1_gradient(lambda: LambdaPair, theta: f64) -> Option<[f64; 2]> {
    if !ar1_formula_domain(lambda, theta) {
        return None;
    }
    let (p, s) = ar1_p_s(lambda, theta);
    let q_fixed = (p + s) / 2.0;
    Some([1.0 / s, (theta + lambda.lambda2) / (q_fixed * s)])
}

/// Threshold below which the MA(1) quadratic-mean CGF is finite:
/// `1 / (2 sup h_φ) = 1 / (2(1+|φ|)²)`.
pub fn ma1_lambda_bound(phi: f64) -> f64 {
    1.0 / (2.0 * h_phi_sup(phi))
}

/// Closed-form MA(1) expression `-(1/2) log((u + sqrt(u² - 16λ²φ²))/2)` with
/// `u = 1 - 2λ(1+φ²)`, evaluated without the finiteness guard. Returns `None`
/// where the expression is not real.
pub(crate) fn ma1_log_term(lambda: f64, phi: f64) -> Option<f64> {
    let u = 1.0 - 2.0 * lambda * (1.0 + phi * phi);
    let w = 4.0 * (lambda * phi).abs();
    let disc = (u - w) * (u + w);
    if !(u > 0.0) || disc < 0.0 {
        return None;
    }
    Some(-0.5 * ((u + disc.sqrt()) / 2.0).ln())
}

/// Limiting CGF of the MA(1) quadratic mean, `+∞` for
/// `λ ≥ 1/(2(1+|φ|)²)`.
pub fn l_limit_ma1_qm(lambda: f64, phi: f64) -> ExtendedReal {
    debug_assert!(phi.abs() < 1.0);
    if !(lambda < ma1_lambda_bound(phi)) {
        return ExtendedReal::PosInf;
    }
    ma1_log_term(lambda, phi).map_or(ExtendedReal::PosInf, ExtendedReal::from_f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn origin_is_zero_everywhere() {
        for theta in [-0.9, -0.2, 0.0, 0.6] {
            assert!(l_limit_ar1(LambdaPair::ORIGIN, theta).finite().unwrap().abs() < 1e-15);
            let pivot = l_n_ar1_pivot(LambdaPair::ORIGIN, theta, 40).unwrap().finite().unwrap();
            assert!(pivot.abs() < 1e-15);
            let eig = l_n_ar1(LambdaPair::ORIGIN, theta, 40).unwrap().finite().unwrap();
            assert!(eig.abs() < 1e-13);
        }
        assert_eq!(l_limit_ma1_qm(0.0, 0.7), ExtendedReal::ZERO);
    }

    #[test]
    fn white_noise_chi_square_cumulant() {
        for l1 in [-2.0f64, -0.3, 0.1, 0.45] {
            let expected = -0.5 * (1.0 - 2.0 * l1).ln();
            let lambda = LambdaPair::new(l1, 0.0);
            assert_relative_eq!(l_n_ar1(lambda, 0.0, 24).unwrap().finite().unwrap(), expected, epsilon = 1e-12);
            assert_relative_eq!(l_n_ar1_pivot(lambda, 0.0, 24).unwrap().finite().unwrap(), expected, epsilon = 1e-14);
            assert_relative_eq!(l_limit_ar1(lambda, 0.0).finite().unwrap(), expected, epsilon = 1e-14);
            assert_relative_eq!(l_limit_ma1_qm(l1, 0.0).finite().unwrap(), expected, epsilon = 1e-14);
        }
    }

    #[test]
    fn white_noise_bivariate_limit() {
        // θ = 0: -(1/2) log((1 - 2λ₁ + sqrt((1-2λ₁)² - 4λ₂²))/2)
        let lambda = LambdaPair::new(0.1, 0.2);
        let a: f64 = 1.0 - 0.2;
        let expected = -0.5 * ((a + (a * a - 0.16).sqrt()) / 2.0).ln();
        assert_relative_eq!(l_limit_ar1(lambda, 0.0).finite().unwrap(), expected, epsilon = 1e-15);
    }

    #[test]
    fn outside_domains_are_infinite() {
        assert!(l_limit_ar1(LambdaPair::new(0.5, 0.0), 0.3).is_infinite());
        assert!(l_limit_ar1(LambdaPair::new(0.0, 2.0), 0.3).is_infinite());
        assert!(l_n_ar1_pivot(LambdaPair::new(0.6, 0.0), 0.0, 8).unwrap().is_infinite());
        assert!(l_n_ar1(LambdaPair::new(0.6, 0.0), 0.0, 8).unwrap().is_infinite());
        assert!(l_limit_ma1_qm(ma1_lambda_bound(0.5), 0.5).is_infinite());
        assert!(l_limit_ma1_qm(0.3, -0.5).is_infinite());
        assert!(l_limit_ma1_qm(0.2, -0.5).is_finite());
    }

    #[test]
    fn extended_form_agrees_on_domain() {
        let lambda = LambdaPair::new(0.1, 0.1);
        assert_eq!(l_limit_ar1(lambda, 0.5), l_limit_ar1_extended(lambda, 0.5));
        // Stationary point of the (3, 0) dual at θ = 0.6 is off the domain
        // but inside the cone where the log expression is real.
        let lambda = LambdaPair::new(0.68 - 1.0 / 6.0, -0.6);
        assert!(l_limit_ar1(lambda, 0.6).is_infinite());
        assert!(l_limit_ar1_extended(lambda, 0.6).is_finite());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let theta = 0.3;
        for &(l1, l2) in &[(0.1, 0.1), (-0.5, 0.4), (0.2, -0.5), (-1.0, -0.9)] {
            let lambda = LambdaPair::new(l1, l2);
            let g = l_limit_ar1_gradient(lambda, theta).unwrap();
            let h = 1e-6;
            let f = |a: f64, b: f64| l_limit_ar1_extended(LambdaPair::new(a, b), theta).finite().unwrap();
            let d1 = (f(l1 + h, l2) - f(l1 - h, l2)) / (2.0 * h);
            let d2 = (f(l1, l2 + h) - f(l1, l2 - h)) / (2.0 * h);
            assert!((g[0] - d1).abs() < 1e-5 && (g[1] - d2).abs() < 1e-5, "{g:?} vs {d1},{d2}");
        }
    }
}
