//! Exact simulation of the stationary Gaussian AR(1) and MA(1) processes and
//! the sample statistics built from a path.
//!
//! ```text
//! AR(1): X_1 ~ N(0, 1/(1-θ²)),  X_{k+1} = θ X_k + ε_{k+1}
//! MA(1): Y_k = ε_k + φ ε_{k-1},  ε_0, ε_1, … i.i.d. N(0, 1)
//! ```
//!
//! The AR(1) start is drawn from the stationary marginal, so there is no
//! burn-in. For MA(1) the first variate of the stream is `ε_0`.

use serde::Serialize;

use crate::error::{LdpError, Result};
use crate::rng::NormalStream;

fn check_coefficient(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value.abs() < 1.0 {
        Ok(())
    } else {
        Err(LdpError::InvalidCoefficient { name, value })
    }
}

/// Autoregressive coefficient of a stable AR(1), `|θ| < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ar1Params {
    theta: f64,
}

impl Ar1Params {
    pub fn new(theta: f64) -> Result<Self> {
        check_coefficient("theta", theta)?;
        Ok(Self { theta })
    }

    pub fn theta(self) -> f64 {
        self.theta
    }

    /// Stationary variance `1/(1-θ²)`.
    pub fn variance(self) -> f64 {
        1.0 / (1.0 - self.theta * self.theta)
    }

    /// Lag-one autocovariance `θ/(1-θ²)`.
    pub fn lag1_autocovariance(self) -> f64 {
        self.theta * self.variance()
    }
}

/// Moving-average coefficient of an invertible MA(1), `|φ| < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ma1Params {
    phi: f64,
}

impl Ma1Params {
    pub fn new(phi: f64) -> Result<Self> {
        check_coefficient("phi", phi)?;
        Ok(Self { phi })
    }

    pub fn phi(self) -> f64 {
        self.phi
    }

    /// `Var(Y_k) = 1 + φ²`.
    pub fn variance(self) -> f64 {
        1.0 + self.phi * self.phi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "process", rename_all = "lowercase")]
pub enum ProcessParams {
    Ar1(Ar1Params),
    Ma1(Ma1Params),
}

impl From<Ar1Params> for ProcessParams {
    fn from(p: Ar1Params) -> Self {
        ProcessParams::Ar1(p)
    }
}

impl From<Ma1Params> for ProcessParams {
    fn from(p: Ma1Params) -> Self {
        ProcessParams::Ma1(p)
    }
}

/// A finite realization together with the seed that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplePath {
    values: Vec<f64>,
    seed: u64,
}

impl SamplePath {
    /// Wrap observed values; `seed` is informational for paths that were not
    /// simulated.
    pub fn from_values(values: Vec<f64>, seed: u64) -> Result<Self> {
        if values.is_empty() {
            return Err(LdpError::PathTooShort { min: 1, got: 0 });
        }
        Ok(Self { values, seed })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Path multiplied by a constant.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * factor).collect(),
            seed: self.seed,
        }
    }
}

/// A pair of sample statistics, such as `W_n` or `S_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BivariateStat {
    pub first: f64,
    pub second: f64,
}

/// Feed an AR(1) path of length `n` to `sink` without allocating.
pub(crate) fn stream_ar1(params: Ar1Params, n: usize, seed: u64, mut sink: impl FnMut(f64)) {
    let mut normals = NormalStream::new(seed);
    let theta = params.theta;
    let mut x = normals.next_normal() * params.variance().sqrt();
    sink(x);
    for _ in 1..n {
        x = theta * x + normals.next_normal();
        sink(x);
    }
}

/// Feed an MA(1) path of length `n` to `sink` without allocating.
pub(crate) fn stream_ma1(params: Ma1Params, n: usize, seed: u64, mut sink: impl FnMut(f64)) {
    let mut normals = NormalStream::new(seed);
    let phi = params.phi;
    let mut prev = normals.next_normal();
    for _ in 0..n {
        let eps = normals.next_normal();
        sink(eps + phi * prev);
        prev = eps;
    }
}

pub fn simulate_ar1(params: Ar1Params, n: usize, seed: u64) -> Result<SamplePath> {
    if n == 0 {
        return Err(LdpError::PathTooShort { min: 1, got: 0 });
    }
    let mut values = Vec::with_capacity(n);
    stream_ar1(params, n, seed, |x| values.push(x));
    Ok(SamplePath { values, seed })
}

pub fn simulate_ma1(params: Ma1Params, n: usize, seed: u64) -> Result<SamplePath> {
    if n == 0 {
        return Err(LdpError::PathTooShort { min: 1, got: 0 });
    }
    let mut values = Vec::with_capacity(n);
    stream_ma1(params, n, seed, |y| values.push(y));
    Ok(SamplePath { values, seed })
}

pub fn simulate(params: ProcessParams, n: usize, seed: u64) -> Result<SamplePath> {
    match params {
        ProcessParams::Ar1(p) => simulate_ar1(p, n, seed),
        ProcessParams::Ma1(p) => simulate_ma1(p, n, seed),
    }
}

/// Running sums `Σ X_k`, `Σ X_k²`, `Σ_{k≥2} X_k X_{k-1}` over a path.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PathSums {
    pub n: usize,
    pub sum: f64,
    pub sum_sq: f64,
    pub sum_lag1: f64,
    last: Option<f64>,
}

impl PathSums {
    #[inline]
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
        if let Some(prev) = self.last {
            self.sum_lag1 += x * prev;
        }
        self.last = Some(x);
    }

    pub fn from_values(values: &[f64]) -> Self {
        let mut sums = Self::default();
        values.iter().for_each(|&x| sums.push(x));
        sums
    }

    /// `γ̃_n(0) = (1/n) Σ X_k²`
    pub fn quad_mean(&self) -> f64 {
        self.sum_sq / self.n as f64
    }

    /// `γ̃_n(1) = (1/n) Σ_{k=2..n} X_k X_{k-1}`
    pub fn lag1_cov(&self) -> f64 {
        self.sum_lag1 / self.n as f64
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.n as f64
    }

    /// Yule–Walker ratio; `None` when `Σ X_k² = 0`.
    pub fn yule_walker(&self) -> Option<f64> {
        (self.sum_sq > 0.0).then(|| self.sum_lag1 / self.sum_sq)
    }
}

/// `W_n = (1/n)(Σ_{k=1..n} X_k², Σ_{k=2..n} X_k X_{k-1})`.
pub fn stat_w(path: &SamplePath) -> Result<BivariateStat> {
    if path.n() < 2 {
        return Err(LdpError::PathTooShort { min: 2, got: path.n() });
    }
    let sums = PathSums::from_values(&path.values);
    Ok(BivariateStat {
        first: sums.quad_mean(),
        second: sums.lag1_cov(),
    })
}

/// `S_n = (1/n)(Σ X_k, Σ X_k²)`.
pub fn stat_s(path: &SamplePath) -> BivariateStat {
    let sums = PathSums::from_values(&path.values);
    BivariateStat {
        first: sums.mean(),
        second: sums.quad_mean(),
    }
}

/// Yule–Walker estimate `Σ_{k≥2} X_k X_{k-1} / Σ X_k²` of the AR(1)
/// coefficient.
pub fn yule_walker(path: &SamplePath) -> Result<f64> {
    if path.n() < 2 {
        return Err(LdpError::PathTooShort { min: 2, got: path.n() });
    }
    PathSums::from_values(&path.values)
        .yule_walker()
        .ok_or_else(|| LdpError::Degenerate("Yule-Walker estimate of an all-zero path".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn path(v: &[f64]) -> SamplePath {
        SamplePath::from_values(v.to_vec(), 0).unwrap()
    }

    #[test]
    fn coefficients_outside_unit_interval_are_rejected() {
        assert!(Ar1Params::new(1.0).is_err());
        assert!(Ar1Params::new(-1.0).is_err());
        assert!(Ar1Params::new(f64::NAN).is_err());
        assert!(Ma1Params::new(1.5).is_err());
        assert!(Ar1Params::new(0.999).is_ok());
    }

    #[test]
    fn w_statistic_examples() {
        let w = stat_w(&path(&[1.0, 1.0, 1.0])).unwrap();
        assert_relative_eq!(w.first, 1.0);
        assert_relative_eq!(w.second, 2.0 / 3.0);
        let w = stat_w(&path(&[1.0, -1.0, 1.0])).unwrap();
        assert_relative_eq!(w.second, -2.0 / 3.0);
        let w = stat_w(&path(&[0.0; 5])).unwrap();
        assert_eq!((w.first, w.second), (0.0, 0.0));
        assert!(matches!(stat_w(&path(&[1.0])), Err(LdpError::PathTooShort { .. })));
    }

    #[test]
    fn s_statistic_examples() {
        let s = stat_s(&path(&[1.0, 1.0, 1.0]));
        assert_eq!((s.first, s.second), (1.0, 1.0));
        let s = stat_s(&path(&[2.0]));
        assert_eq!((s.first, s.second), (2.0, 4.0));
        let s = stat_s(&path(&[1.0, -1.0]));
        assert_eq!((s.first, s.second), (0.0, 1.0));
    }

    #[test]
    fn yule_walker_examples() {
        assert_relative_eq!(yule_walker(&path(&[1.0, 2.0, 1.0])).unwrap(), 2.0 / 3.0);
        for n in 2..20 {
            let est = yule_walker(&path(&vec![-3.5; n])).unwrap();
            assert_relative_eq!(est, (n as f64 - 1.0) / n as f64, epsilon = 1e-15);
        }
        assert!(matches!(yule_walker(&path(&[0.0, 0.0])), Err(LdpError::Degenerate(_))));
    }

    #[test]
    fn simulation_is_deterministic() {
        let p = Ar1Params::new(0.7).unwrap();
        let a = simulate_ar1(p, 50, 9).unwrap();
        let b = simulate_ar1(p, 50, 9).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, simulate_ar1(p, 50, 10).unwrap());
        assert!(simulate_ar1(p, 0, 1).is_err());
    }

    #[test]
    fn zero_coefficients_give_the_innovation_stream() {
        let ar = simulate_ar1(Ar1Params::new(0.0).unwrap(), 10, 3).unwrap();
        let mut stream = NormalStream::new(3);
        for &x in ar.values() {
            assert_eq!(x, stream.next_normal());
        }
        // MA(1) with φ = 0 skips ε_0 and then reads the same stream.
        let ma = simulate_ma1(Ma1Params::new(0.0).unwrap(), 9, 3).unwrap();
        assert_eq!(ma.values(), &ar.values()[1..]);
    }

    #[test]
    fn prefix_property() {
        let p = Ar1Params::new(-0.4).unwrap();
        let long = simulate_ar1(p, 100, 5).unwrap();
        let short = simulate_ar1(p, 30, 5).unwrap();
        assert_eq!(&long.values()[..30], short.values());
    }
}
