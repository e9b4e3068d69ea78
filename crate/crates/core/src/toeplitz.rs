//! Tridiagonal and Toeplitz machinery behind the finite-n cumulant
//! generating function of `W_n`.
//!
//! For `λ = (λ₁, λ₂)` the quadratic form `n⟨λ, W_n⟩ = Xᵀ T_n(φ_λ) X` has a
//! finite exponential moment iff
//!
//! ```text
//! D_{n,λ} = T_n(g_θ)⁻¹ - 2 T_n(φ_λ)
//!         = tridiag(corner r₁ = 1 - 2λ₁, interior p = 1 + θ² - 2λ₁, off q = -θ - λ₂)
//! ```
//!
//! is positive definite. The leading principal minors factor through the
//! pivot map `G(a) = p - q²/a`, which makes the test O(n). The dense
//! eigenvalue route is kept as an independent oracle and is capped in size.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{LdpError, Result};

/// Default size limit for the O(n³) dense routines.
pub const DEFAULT_DENSE_CAP: usize = 1024;

/// A point of the dual space of `W_n`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct LambdaPair {
    pub lambda1: f64,
    pub lambda2: f64,
}

impl LambdaPair {
    pub const ORIGIN: LambdaPair = LambdaPair { lambda1: 0.0, lambda2: 0.0 };

    pub const fn new(lambda1: f64, lambda2: f64) -> Self {
        Self { lambda1, lambda2 }
    }

    pub fn norm(self) -> f64 {
        self.lambda1.hypot(self.lambda2)
    }
}

/// Symmetric tridiagonal matrix whose first and last diagonal entries share
/// the `corner` value and whose other diagonal entries equal `interior`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriDiag {
    pub n: usize,
    pub corner: f64,
    pub interior: f64,
    pub off: f64,
}

impl TriDiag {
    pub fn new(n: usize, corner: f64, interior: f64, off: f64) -> Result<Self> {
        if n < 2 {
            return Err(LdpError::InvalidArgument(format!("tridiagonal size must be at least 2, got {n}")));
        }
        Ok(Self { n, corner, interior, off })
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.n;
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                if i == 0 || i == n - 1 {
                    self.corner
                } else {
                    self.interior
                }
            } else if i.abs_diff(j) == 1 {
                self.off
            } else {
                0.0
            }
        })
    }
}

/// Where a dual point sits relative to the two pieces of the domain of the
/// limiting cumulant generating function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DomainRegion {
    D1,
    D2,
    Outside,
}

impl DomainRegion {
    pub fn is_inside(self) -> bool {
        self != DomainRegion::Outside
    }

    pub fn tag(self) -> &'static str {
        match self {
            DomainRegion::D1 => "D1",
            DomainRegion::D2 => "D2",
            DomainRegion::Outside => "Outside",
        }
    }
}

/// Inverse of the stationary AR(1) covariance matrix `[θ^{|j-k|}/(1-θ²)]`.
pub fn ar1_precision(theta: f64, n: usize) -> Result<TriDiag> {
    TriDiag::new(n, 1.0, 1.0 + theta * theta, -theta)
}

/// `D_{n,λ} = T_n(g_θ)⁻¹ - 2 T_n(φ_λ)`.
pub fn d_matrix(lambda: LambdaPair, theta: f64, n: usize) -> Result<TriDiag> {
    TriDiag::new(
        n,
        1.0 - 2.0 * lambda.lambda1,
        1.0 + theta * theta - 2.0 * lambda.lambda1,
        -theta - lambda.lambda2,
    )
}

/// LDLᵀ pivots of a [`TriDiag`].
///
/// `values[0] = corner`, `values[k] = G(values[k-1])` for the interior rows,
/// and the last pivot is `corner - q²/values[n-2]`. If some pivot is `≤ 0`
/// the recursion stops there: `first_nonpositive` records its index and the
/// remaining entries repeat that pivot.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PivotSequence {
    pub values: Vec<f64>,
    pub first_nonpositive: Option<usize>,
}

impl PivotSequence {
    pub fn all_positive(&self) -> bool {
        self.first_nonpositive.is_none()
    }

    /// `log det` when every pivot is positive.
    pub fn log_det(&self) -> Option<f64> {
        self.all_positive().then(|| self.values.iter().map(|r| r.ln()).sum())
    }

    pub fn det(&self) -> f64 {
        self.values.iter().product()
    }
}

pub fn pivots(d: &TriDiag) -> PivotSequence {
    let n = d.n;
    let q2 = d.off * d.off;
    let mut values = Vec::with_capacity(n);
    let mut current = d.corner;
    for k in 0..n {
        if k > 0 {
            let diag = if k == n - 1 { d.corner } else { d.interior };
            current = diag - q2 / current;
        }
        values.push(current);
        if !(current > 0.0) {
            values.resize(n, current);
            return PivotSequence { values, first_nonpositive: Some(k) };
        }
    }
    PivotSequence { values, first_nonpositive: None }
}

/// Sylvester's criterion through the pivot recursion.
pub fn is_positive_definite(d: &TriDiag) -> bool {
    pivots(d).all_positive()
}

/// Fixed points `R ≤ Q` of `a ↦ p - q²/a`, defined when `p² > 4q²`.
/// For `p > 0`, `R` repels and `Q` attracts every start above `R`.
pub fn g_map_fixed_points(p: f64, q: f64) -> Result<(f64, f64)> {
    let disc = p * p - 4.0 * q * q;
    if !(disc > 0.0) {
        return Err(LdpError::OutOfCase { p, q });
    }
    let root = disc.sqrt();
    Ok(((p - root) / 2.0, (p + root) / 2.0))
}

/// Classify `λ` against
///
/// ```text
/// D1 = { λ₁ ≤ (1-θ²)/2,          4(θ+λ₂)² < (1+θ²-2λ₁)² }
/// D2 = { (1-θ²)/2 < λ₁ < 1/2,    (θ+λ₂)² < θ²(1-2λ₁) }
/// ```
///
/// using the inequalities exactly as written (no tolerance).
pub fn domain_membership(lambda: LambdaPair, theta: f64) -> DomainRegion {
    debug_assert!(theta.abs() < 1.0);
    let LambdaPair { lambda1, lambda2 } = lambda;
    let t2 = theta * theta;
    let shift = theta + lambda2;
    let p = 1.0 + t2 - 2.0 * lambda1;
    let split = (1.0 - t2) / 2.0;
    if lambda1 <= split {
        if 4.0 * shift * shift < p * p {
            DomainRegion::D1
        } else {
            DomainRegion::Outside
        }
    } else if lambda1 < 0.5 && shift * shift < t2 * (1.0 - 2.0 * lambda1) {
        DomainRegion::D2
    } else {
        DomainRegion::Outside
    }
}

/// Dense stationary AR(1) covariance `T_n(g_θ) = [θ^{|j-k|}/(1-θ²)]`.
pub fn ar1_covariance_dense(theta: f64, n: usize) -> DMatrix<f64> {
    let v = 1.0 / (1.0 - theta * theta);
    DMatrix::from_fn(n, n, |i, j| v * theta.powi(i.abs_diff(j) as i32))
}

/// Dense `T_n(φ_λ)`: `λ₁` on the diagonal, `λ₂/2` next to it.
pub fn symbol_toeplitz_dense(lambda: LambdaPair, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
        0 => lambda.lambda1,
        1 => lambda.lambda2 / 2.0,
        _ => 0.0,
    })
}

/// Eigenvalues `α_{n,k}` of `T_n(g_θ)^{1/2} T_n(φ_λ) T_n(g_θ)^{1/2}`,
/// ascending, with [`DEFAULT_DENSE_CAP`].
pub fn product_eigenvalues(lambda: LambdaPair, theta: f64, n: usize) -> Result<Vec<f64>> {
    product_eigenvalues_capped(lambda, theta, n, DEFAULT_DENSE_CAP)
}

/// As [`product_eigenvalues`] with an explicit size cap.
///
/// The covariance square root comes from a symmetric eigendecomposition, so
/// the conjugated matrix is symmetric and its spectrum real.
pub fn product_eigenvalues_capped(lambda: LambdaPair, theta: f64, n: usize, cap: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(LdpError::InvalidArgument(format!("matrix size must be at least 2, got {n}")));
    }
    if n > cap {
        return Err(LdpError::DenseCapExceeded { n, cap });
    }
    let cov = SymmetricEigen::new(ar1_covariance_dense(theta, n));
    let sqrt_diag = DMatrix::from_diagonal(&cov.eigenvalues.map(|mu| mu.max(0.0).sqrt()));
    let root = &cov.eigenvectors * sqrt_diag * cov.eigenvectors.transpose();
    let mut conj = &root * symbol_toeplitz_dense(lambda, n) * &root;
    // Symmetrize away rounding before the symmetric solver.
    conj = (&conj + conj.transpose()) * 0.5;
    let mut alphas: Vec<f64> = SymmetricEigen::new(conj).eigenvalues.iter().copied().collect();
    alphas.sort_by(f64::total_cmp);
    Ok(alphas)
}
