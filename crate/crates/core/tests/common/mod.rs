//! Independent oracles shared by the integration tests. Nothing here calls
//! the closed forms or the library's finite-n routes.

#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::DMatrix;

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    // Split into panels first so smooth periodic integrands are resolved.
    let panels = 16;
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let (lo, hi) = (a + k as f64 * h, a + (k + 1) as f64 * h);
            let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            recurse(f, lo, hi, fa, fm, fb, simpson(fa, fm, fb, lo, hi), tol / panels as f64, 40)
        })
        .sum()
}

fn g_theta(w: f64, theta: f64) -> f64 {
    1.0 / (1.0 + theta * theta - 2.0 * theta * w.cos())
}

fn h_phi(w: f64, phi: f64) -> f64 {
    1.0 + phi * phi + 2.0 * phi * w.cos()
}

/// Szegő-form limit `-(1/4π) ∫ log(1 - 2 (λ₁ + λ₂ cos ω) g_θ(ω)) dω`, or `None`
/// when the integrand is not real somewhere on a fine grid.
pub fn ar1_szego_limit(l1: f64, l2: f64, theta: f64) -> Option<f64> {
    let arg = |w: f64| 1.0 - 2.0 * (l1 + l2 * w.cos()) * g_theta(w, theta);
    if (0..=4096).any(|k| arg(-PI + 2.0 * PI * k as f64 / 4096.0) <= 0.0) {
        return None;
    }
    Some(-integrate(&|w| arg(w).ln(), -PI, PI, 1e-13) / (4.0 * PI))
}

/// `-(1/4π) ∫ log(1 - 2λ h_φ(ω)) dω`, `None` when not real.
pub fn ma1_szego_limit(lambda: f64, phi: f64) -> Option<f64> {
    let arg = |w: f64| 1.0 - 2.0 * lambda * h_phi(w, phi);
    if (0..=4096).any(|k| arg(-PI + 2.0 * PI * k as f64 / 4096.0) <= 0.0) {
        return None;
    }
    Some(-integrate(&|w| arg(w).ln(), -PI, PI, 1e-13) / (4.0 * PI))
}

/// Covariance matrix of `(X_1, …, X_n)`, entries `θ^|i-j| / (1-θ²)`.
pub fn ar1_covariance(theta: f64, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| theta.powi((i as i32 - j as i32).abs()) / (1.0 - theta * theta))
}

/// Finite-n CGF of `W_n` from `E exp(X'AX) = det(I - 2AΣ)^{-1/2}` with a
/// dense LU determinant; `None` when `I - 2AΣ` has a non-positive
/// determinant or an eigenvalue sign change makes the expectation infinite.
pub fn ar1_finite_n_by_determinant(l1: f64, l2: f64, theta: f64, n: usize) -> Option<f64> {
    // n⟨λ, W_n⟩ = X' A X with A = λ₁ I + (λ₂/2)(shift + shiftᵀ).
    let a = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            l1
        } else if i.abs_diff(j) == 1 {
            l2 / 2.0
        } else {
            0.0
        }
    });
    let sigma = ar1_covariance(theta, n);
    // Precision form: det(Σ⁻¹ - 2A) must be positive definite.
    let prec = sigma.clone().try_inverse()?;
    let m = &prec - 2.0 * &a;
    let chol = m.clone().cholesky()?;
    let log_det_m: f64 = 2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>();
    let log_det_sigma = sigma.lu().determinant().ln();
    // det(I - 2AΣ) = det(Σ⁻¹ - 2A) det Σ
    Some(-(log_det_m + log_det_sigma) / (2.0 * n as f64))
}

/// Maximize a concave `f` over `(lo, hi)`: a dense grid, then golden-section
/// refinement around the best grid point. `f` may return `None` where it is
/// undefined.
pub fn grid_maximize(f: &dyn Fn(f64) -> Option<f64>, lo: f64, hi: f64, points: usize) -> (f64, f64) {
    let h = (hi - lo) / points as f64;
    let ts: Vec<f64> = (0..points).map(|k| lo + (k as f64 + 0.5) * h).collect();
    let (k, _) = ts
        .iter()
        .enumerate()
        .filter_map(|(k, &t)| f(t).map(|v| (k, v)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("some feasible grid point");
    let mut a = ts[k] - h;
    let mut b = (ts[k] + h).min(hi);
    let g = |t: f64| f(t).unwrap_or(f64::NEG_INFINITY);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut c, mut d) = (b - r * (b - a), a + r * (b - a));
    let (mut fc, mut fd) = (g(c), g(d));
    while b - a > 1e-12 * (1.0 + a.abs()) {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = g(d);
        }
    }
    let t = 0.5 * (a + b);
    (t, g(t))
}

/// Pass/fail line in the style of the acceptance report.
pub fn report(label: &str, ok: bool, detail: &str) {
    println!("[{}] {label}: {detail}", if ok { "PASS" } else { "FAIL" });
}
