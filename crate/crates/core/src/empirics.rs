//! Monte Carlo estimation of exponential decay rates and the matching
//! theoretical infima.
//!
//! For each `n` in a grid, `P(V_n ∈ event)` is estimated by direct counting
//! over independent replicates; the decay rate is minus the least-squares
//! slope of `log P` against `n`. The intercept absorbs the subexponential
//! prefactor.
//!
//! Cell `n` is seeded with `derive_seed(seed, n)` and replicate `r` inside it
//! with `derive_seed(cell_seed, r)`, so counts do not depend on the order or
//! the degree of parallelism in which replicates run.

use serde::Serialize;

use crate::error::{LdpError, Result};
use crate::exec::{count_indexed, Exec};
use crate::extended::ExtendedReal;
use crate::legendre::{contraction_inf_1d, OracleOptions};
use crate::model::{stream_ar1, stream_ma1, PathSums, ProcessParams};
use crate::rates;
use crate::rng::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    /// `γ̃_n(0)`
    QuadMean,
    /// `γ̃_n(1)`
    Lag1Cov,
    /// `θ̃_n = γ̃_n(1) / γ̃_n(0)`
    YuleWalker,
    SampleMean,
    /// `W_n = (γ̃_n(0), γ̃_n(1))`
    WPair,
    /// `S_n = (mean, γ̃_n(0))`
    SPair,
}

impl Statistic {
    pub fn dimension(self) -> usize {
        match self {
            Statistic::WPair | Statistic::SPair => 2,
            _ => 1,
        }
    }

    /// Smallest path length for which the statistic is defined.
    pub fn min_n(self) -> usize {
        match self {
            Statistic::SampleMean | Statistic::QuadMean | Statistic::SPair => 1,
            _ => 2,
        }
    }

    /// Value on a path; `None` where the statistic is undefined (an all-zero
    /// path for the Yule–Walker ratio).
    pub fn evaluate(self, sums: &PathSums) -> Option<[f64; 2]> {
        Some(match self {
            Statistic::QuadMean => [sums.quad_mean(), 0.0],
            Statistic::Lag1Cov => [sums.lag1_cov(), 0.0],
            Statistic::YuleWalker => [sums.yule_walker()?, 0.0],
            Statistic::SampleMean => [sums.mean(), 0.0],
            Statistic::WPair => [sums.quad_mean(), sums.lag1_cov()],
            Statistic::SPair => [sums.mean(), sums.quad_mean()],
        })
    }

    /// Almost-sure limit of the statistic under `params`.
    pub fn lln_point(self, params: ProcessParams) -> [f64; 2] {
        let (var, cov1) = match params {
            ProcessParams::Ar1(p) => (p.variance(), p.lag1_autocovariance()),
            ProcessParams::Ma1(p) => (p.variance(), p.phi()),
        };
        match self {
            Statistic::QuadMean => [var, 0.0],
            Statistic::Lag1Cov => [cov1, 0.0],
            Statistic::YuleWalker => [cov1 / var, 0.0],
            Statistic::SampleMean => [0.0, 0.0],
            Statistic::WPair => [var, cov1],
            Statistic::SPair => [0.0, var],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventKind {
    /// `{v ≥ level}`
    TailGe { level: f64 },
    /// `{v ≤ level}`
    TailLe { level: f64 },
    /// Closed ball; for scalar statistics only `center[0]` is used.
    Ball { center: [f64; 2], radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EventSpec {
    pub statistic: Statistic,
    #[serde(flatten)]
    pub kind: EventKind,
}

impl EventSpec {
    pub fn new(statistic: Statistic, kind: EventKind) -> Result<Self> {
        match kind {
            EventKind::TailGe { level } | EventKind::TailLe { level } => {
                if statistic.dimension() != 1 {
                    return Err(LdpError::Unsupported(format!("tail event for the bivariate statistic {statistic:?}")));
                }
                if !level.is_finite() {
                    return Err(LdpError::InvalidArgument(format!("tail level {level}")));
                }
            }
            EventKind::Ball { center, radius } => {
                if !(radius > 0.0 && radius.is_finite()) || !center.iter().all(|c| c.is_finite()) {
                    return Err(LdpError::InvalidArgument(format!("ball radius {radius} or center {center:?}")));
                }
            }
        }
        Ok(Self { statistic, kind })
    }

    pub fn tail_ge(statistic: Statistic, level: f64) -> Result<Self> {
        Self::new(statistic, EventKind::TailGe { level })
    }

    pub fn tail_le(statistic: Statistic, level: f64) -> Result<Self> {
        Self::new(statistic, EventKind::TailLe { level })
    }

    pub fn ball(statistic: Statistic, center: [f64; 2], radius: f64) -> Result<Self> {
        Self::new(statistic, EventKind::Ball { center, radius })
    }

    pub fn contains(&self, v: [f64; 2]) -> bool {
        match self.kind {
            EventKind::TailGe { level } => v[0] >= level,
            EventKind::TailLe { level } => v[0] <= level,
            EventKind::Ball { center, radius } => {
                if self.statistic.dimension() == 1 {
                    (v[0] - center[0]).abs() <= radius
                } else {
                    (v[0] - center[0]).hypot(v[1] - center[1]) <= radius
                }
            }
        }
    }

    /// Tail events must lie strictly on one side of the almost-sure limit.
    pub fn check_against(&self, params: ProcessParams) -> Result<()> {
        let lln = self.statistic.lln_point(params)[0];
        let bad = match self.kind {
            EventKind::TailGe { level } => level <= lln,
            EventKind::TailLe { level } => level >= lln,
            EventKind::Ball { .. } => false,
        };
        if bad {
            return Err(LdpError::InvalidArgument(format!(
                "tail event {:?} contains the almost-sure limit {lln}",
                self.kind
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateOptions {
    pub exec: Exec,
    /// Cells with fewer hits than this are dropped from the fit.
    pub min_count: u64,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self { exec: Exec::default(), min_count: 10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellCount {
    pub n: usize,
    pub hits: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateEstimate {
    /// Sample sizes that survived the count guard.
    pub n_grid: Vec<usize>,
    /// `log P̂` on the surviving cells.
    pub log_prob: Vec<f64>,
    /// Minus the least-squares slope of `log P̂` against `n`.
    pub slope: f64,
    pub stderr: f64,
    pub intercept: f64,
    pub replicates: u64,
    pub seed: u64,
    /// Every simulated cell, dropped or not.
    pub cells: Vec<CellCount>,
    pub warnings: Vec<String>,
}

/// Number of replicates in the `n`-cell whose statistic falls in `event`.
pub fn count_hits(params: ProcessParams, event: &EventSpec, n: usize, replicates: u64, cell_seed: u64, exec: Exec) -> u64 {
    count_indexed(exec, replicates, |r| {
        let mut sums = PathSums::default();
        let seed = derive_seed(cell_seed, r);
        match params {
            ProcessParams::Ar1(p) => stream_ar1(p, n, seed, |x| sums.push(x)),
            ProcessParams::Ma1(p) => stream_ma1(p, n, seed, |x| sums.push(x)),
        }
        event.statistic.evaluate(&sums).is_some_and(|v| event.contains(v))
    })
}

/// Least-squares fit of `y ≈ a + b n`; returns `(a, b, Var b)` with
/// `Var b = Σ (n_i - n̄)² σ_i² / Sxx²`.
fn ols_with_variance(ns: &[f64], ys: &[f64], vars: &[f64]) -> (f64, f64, f64) {
    let m = ns.len() as f64;
    let nbar = ns.iter().sum::<f64>() / m;
    let ybar = ys.iter().sum::<f64>() / m;
    let sxx: f64 = ns.iter().map(|n| (n - nbar) * (n - nbar)).sum();
    let sxy: f64 = ns.iter().zip(ys).map(|(n, y)| (n - nbar) * (y - ybar)).sum();
    let b = sxy / sxx;
    let var_b = ns.iter().zip(vars).map(|(n, v)| (n - nbar) * (n - nbar) * v).sum::<f64>() / (sxx * sxx);
    (ybar - b * nbar, b, var_b)
}

/// Estimate `-(1/n) log P(V_n ∈ event)` as a slope over `n_grid`.
pub fn estimate_rate(
    params: ProcessParams,
    event: &EventSpec,
    n_grid: &[usize],
    replicates: u64,
    seed: u64,
    opts: EstimateOptions,
) -> Result<RateEstimate> {
    if n_grid.len() < 3 || n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(LdpError::InvalidArgument("n grid must be strictly increasing with at least 3 entries".into()));
    }
    if replicates == 0 {
        return Err(LdpError::InvalidArgument("replicates must be at least 1".into()));
    }
    if n_grid[0] < event.statistic.min_n() {
        return Err(LdpError::PathTooShort { min: event.statistic.min_n(), got: n_grid[0] });
    }
    event.check_against(params)?;

    let total = replicates as f64;
    let mut cells = Vec::with_capacity(n_grid.len());
    let mut warnings = Vec::new();
    let (mut ns, mut ys, mut vars, mut kept) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for &n in n_grid {
        let cell_seed = derive_seed(seed, n as u64);
        let hits = count_hits(params, event, n, replicates, cell_seed, opts.exec);
        log::debug!("n = {n}: {hits}/{replicates}");
        cells.push(CellCount { n, hits, seed: cell_seed });
        if hits < opts.min_count.max(1) {
            let msg = format!("n = {n}: {hits} hits below the minimum of {}, cell dropped", opts.min_count.max(1));
            log::warn!("{msg}");
            warnings.push(msg);
            continue;
        }
        let p = hits as f64 / total;
        ns.push(n as f64);
        ys.push(p.ln());
        // Delta method: Var(log p̂) ≈ (1 - p) / (N p).
        vars.push((1.0 - p) / (total * p));
        kept.push(n);
    }
    if kept.len() < 3 {
        return Err(LdpError::Estimation(format!(
            "only {} of {} cells have at least {} hits",
            kept.len(),
            n_grid.len(),
            opts.min_count
        )));
    }
    let (a, b, var_b) = ols_with_variance(&ns, &ys, &vars);
    Ok(RateEstimate {
        n_grid: kept,
        log_prob: ys,
        slope: -b,
        stderr: var_b.sqrt(),
        intercept: a,
        replicates,
        seed,
        cells,
        warnings,
    })
}

fn scalar_rate(params: ProcessParams, stat: Statistic) -> Result<Box<dyn Fn(f64) -> ExtendedReal>> {
    Ok(match (params, stat) {
        (ProcessParams::Ar1(p), Statistic::QuadMean) => Box::new(move |c| rates::rate_i1(c, p.theta())),
        (ProcessParams::Ar1(p), Statistic::Lag1Cov) => Box::new(move |c| rates::rate_i2(c, p.theta())),
        (ProcessParams::Ar1(p), Statistic::YuleWalker) => Box::new(move |c| rates::rate_yule_walker(c, p.theta())),
        (ProcessParams::Ar1(p), Statistic::SampleMean) => {
            Box::new(move |c| ExtendedReal::Finite(rates::rate_sample_mean_ar1(c, p.theta())))
        }
        (ProcessParams::Ma1(p), Statistic::QuadMean) => Box::new(move |c| rates::rate_k_phi(c, p.phi())),
        (ProcessParams::Ma1(p), Statistic::SampleMean) => {
            Box::new(move |c| ExtendedReal::Finite(rates::rate_sample_mean_ma1(c, p.phi())))
        }
        _ => return Err(LdpError::Unsupported(format!("no closed-form rate for {stat:?} under {params:?}"))),
    })
}

fn pair_rate(params: ProcessParams, stat: Statistic) -> Result<Box<dyn Fn(f64, f64) -> ExtendedReal>> {
    Ok(match (params, stat) {
        (ProcessParams::Ar1(p), Statistic::WPair) => Box::new(move |x, y| rates::rate_j(x, y, p.theta())),
        (ProcessParams::Ar1(p), Statistic::SPair) => Box::new(move |x, y| rates::rate_js(x, y, p.theta())),
        (ProcessParams::Ma1(p), Statistic::SPair) => Box::new(move |x, y| rates::rate_ks(x, y, p.phi())),
        _ => return Err(LdpError::Unsupported(format!("no closed-form rate for {stat:?} under {params:?}"))),
    })
}

/// Points at which tail monotonicity is checked, and the span searched when
/// the check fails.
const TAIL_PROBES: usize = 200;
const TAIL_SPAN: f64 = 50.0;

/// Infimum of the closed-form rate over a tail `{v ≥ level}` (`dir = 1`) or
/// `{v ≤ level}` (`dir = -1`).
fn tail_infimum(rate: &dyn Fn(f64) -> ExtendedReal, level: f64, dir: f64) -> ExtendedReal {
    let at_level = rate(level);
    let step = TAIL_SPAN / TAIL_PROBES as f64;
    let mut prev = at_level;
    let mut monotone = true;
    for k in 1..=TAIL_PROBES {
        let v = rate(level + dir * step * k as f64);
        if v.to_f64() < prev.to_f64() - 1e-12 {
            monotone = false;
            break;
        }
        prev = v;
    }
    if monotone {
        return at_level;
    }
    log::debug!("rate is not monotone beyond {level}; searching the tail numerically");
    let far = level + dir * TAIL_SPAN;
    let bracket = if dir > 0.0 { (level, far) } else { (far, level) };
    let r = contraction_inf_1d(|x, _| rate(x), |t| (t, 0.0), bracket, &OracleOptions::default());
    r.value.min(at_level)
}

/// `inf_{v ∈ event} I(v)` for the closed-form rate matching the statistic.
pub fn theoretical_event_rate(params: ProcessParams, event: &EventSpec) -> Result<ExtendedReal> {
    let stat = event.statistic;
    let lln = stat.lln_point(params);
    if stat.dimension() == 1 {
        let rate = scalar_rate(params, stat)?;
        return Ok(match event.kind {
            EventKind::TailGe { level } => {
                event.check_against(params)?;
                tail_infimum(&*rate, level, 1.0)
            }
            EventKind::TailLe { level } => {
                event.check_against(params)?;
                tail_infimum(&*rate, level, -1.0)
            }
            EventKind::Ball { center, radius } => {
                if (lln[0] - center[0]).abs() <= radius {
                    ExtendedReal::ZERO
                } else {
                    let (lo, hi) = (center[0] - radius, center[0] + radius);
                    let r = contraction_inf_1d(|x, _| rate(x), |t| (t, 0.0), (lo, hi), &OracleOptions::default());
                    r.value.min(rate(lo)).min(rate(hi))
                }
            }
        });
    }
    let rate = pair_rate(params, stat)?;
    match event.kind {
        EventKind::Ball { center, radius } => {
            if (lln[0] - center[0]).hypot(lln[1] - center[1]) <= radius {
                return Ok(ExtendedReal::ZERO);
            }
            // A convex rate whose minimizer is outside the disk attains its
            // infimum over the disk on the boundary circle.
            let circle = |t: f64| (center[0] + radius * t.cos(), center[1] + radius * t.sin());
            let r = contraction_inf_1d(
                rate,
                circle,
                (-std::f64::consts::PI, std::f64::consts::PI),
                &OracleOptions::default(),
            );
            Ok(r.value)
        }
        _ => Err(LdpError::Unsupported(format!("tail event for {stat:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Ar1Params, Ma1Params};

    fn ar(theta: f64) -> ProcessParams {
        Ar1Params::new(theta).unwrap().into()
    }

    fn ma(phi: f64) -> ProcessParams {
        Ma1Params::new(phi).unwrap().into()
    }

    #[test]
    fn event_validation() {
        assert!(EventSpec::tail_ge(Statistic::WPair, 1.0).is_err());
        assert!(EventSpec::ball(Statistic::QuadMean, [1.0, 0.0], 0.0).is_err());
        assert!(EventSpec::tail_ge(Statistic::QuadMean, f64::NAN).is_err());
        let e = EventSpec::tail_ge(Statistic::QuadMean, 0.5).unwrap();
        assert!(e.check_against(ar(0.0)).is_err());
        assert!(estimate_rate(ar(0.0), &e, &[10, 20, 30], 10, 0, EstimateOptions::default()).is_err());
    }

    #[test]
    fn theoretical_tail_shortcuts() {
        let e = EventSpec::tail_ge(Statistic::YuleWalker, 0.7).unwrap();
        assert_eq!(theoretical_event_rate(ar(0.5), &e).unwrap(), rates::rate_yule_walker(0.7, 0.5));
        let e = EventSpec::tail_ge(Statistic::QuadMean, 2.0).unwrap();
        assert_eq!(theoretical_event_rate(ar(0.0), &e).unwrap(), rates::rate_i1(2.0, 0.0));
        let c = (rates::i2_cutoff_c2(0.0)).sqrt() + 0.01;
        let e = EventSpec::tail_ge(Statistic::Lag1Cov, c).unwrap();
        assert!(theoretical_event_rate(ar(0.0), &e).unwrap().is_infinite());
        let e = EventSpec::tail_le(Statistic::SampleMean, -1.0).unwrap();
        assert_eq!(theoretical_event_rate(ma(0.5), &e).unwrap().finite().unwrap(), rates::rate_sample_mean_ma1(1.0, 0.5));
    }

    #[test]
    fn balls_at_the_limit_have_zero_rate() {
        for params in [ar(0.3), ma(-0.4)] {
            for stat in [Statistic::QuadMean, Statistic::SampleMean, Statistic::SPair] {
                let e = EventSpec::ball(stat, stat.lln_point(params), 0.1).unwrap();
                assert_eq!(theoretical_event_rate(params, &e).unwrap(), ExtendedReal::ZERO);
            }
        }
        let e = EventSpec::ball(Statistic::WPair, Statistic::WPair.lln_point(ar(0.3)), 0.1).unwrap();
        assert_eq!(theoretical_event_rate(ar(0.3), &e).unwrap(), ExtendedReal::ZERO);
    }

    #[test]
    fn ball_away_from_limit_uses_nearest_point() {
        // I₁ at θ = 0 is increasing on (1, ∞): the infimum over [2.5, 3.5] is I₁(2.5).
        let e = EventSpec::ball(Statistic::QuadMean, [3.0, 0.0], 0.5).unwrap();
        let v = theoretical_event_rate(ar(0.0), &e).unwrap().finite().unwrap();
        assert!((v - rates::rate_i1(2.5, 0.0).finite().unwrap()).abs() < 1e-12);
        // Disk for W_n at θ = 0 centred at (3, 0): nearest along the x-axis.
        let e = EventSpec::ball(Statistic::WPair, [3.0, 0.0], 1.0).unwrap();
        let v = theoretical_event_rate(ar(0.0), &e).unwrap().finite().unwrap();
        assert!((v - rates::rate_j(2.0, 0.0, 0.0).finite().unwrap()).abs() < 1e-9);
    }

    #[test]
    fn unsupported_combinations() {
        let e = EventSpec::tail_ge(Statistic::Lag1Cov, 1.0).unwrap();
        assert!(matches!(theoretical_event_rate(ma(0.3), &e), Err(LdpError::Unsupported(_))));
        let e = EventSpec::ball(Statistic::WPair, [1.0, 0.0], 0.2).unwrap();
        assert!(matches!(theoretical_event_rate(ma(0.3), &e), Err(LdpError::Unsupported(_))));
    }

    #[test]
    fn nested_events_have_ordered_rates() {
        let params = ar(0.4);
        let mut prev = ExtendedReal::ZERO;
        for level in [1.5, 2.0, 3.0, 5.0] {
            let e = EventSpec::tail_ge(Statistic::QuadMean, level).unwrap();
            let v = theoretical_event_rate(params, &e).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn counts_do_not_depend_on_execution() {
        let e = EventSpec::tail_ge(Statistic::QuadMean, 1.5).unwrap();
        let a = count_hits(ar(0.2), &e, 20, 5000, 99, Exec::Sequential);
        let b = count_hits(ar(0.2), &e, 20, 5000, 99, Exec::Parallel);
        assert_eq!(a, b);
        assert!(a > 0);
    }

    #[test]
    fn probabilities_decrease_in_level() {
        let mut prev = u64::MAX;
        for level in [1.2, 1.4, 1.6, 1.8] {
            let e = EventSpec::tail_ge(Statistic::QuadMean, level).unwrap();
            let hits = count_hits(ar(0.0), &e, 30, 20_000, 5, Exec::Parallel);
            assert!(hits <= prev);
            prev = hits;
        }
    }

    #[test]
    fn event_at_limit_has_no_decay() {
        let params = ar(0.3);
        // sd(γ̃₀) at n = 50 is about sqrt(2 v² (1+θ²)/(1-θ²) / 50) ≈ 0.24.
        let e = EventSpec::ball(Statistic::QuadMean, Statistic::QuadMean.lln_point(params), 0.75).unwrap();
        let est = estimate_rate(params, &e, &[50, 100, 150, 200], 2000, 3, EstimateOptions::default()).unwrap();
        assert!(est.log_prob.iter().all(|&l| l <= 0.0 && l > -0.05));
        assert!(est.slope.abs() < 1e-3, "{est:?}");
    }

    #[test]
    fn sparse_cells_are_dropped() {
        let e = EventSpec::tail_ge(Statistic::QuadMean, 2.0).unwrap();
        let est = estimate_rate(ar(0.0), &e, &[5, 10, 15, 20, 200], 4000, 1, EstimateOptions::default()).unwrap();
        assert_eq!(est.cells.len(), 5);
        assert!(!est.n_grid.contains(&200));
        assert_eq!(est.warnings.len(), 5 - est.n_grid.len());
        let err = estimate_rate(ar(0.0), &e, &[200, 300, 400], 1000, 1, EstimateOptions::default());
        assert!(matches!(err, Err(LdpError::Estimation(_))));
    }

    #[test]
    fn ols_recovers_a_line() {
        let ns = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = ns.iter().map(|n| 2.0 - 0.5 * n).collect();
        let (a, b, v) = ols_with_variance(&ns, &ys, &[1.0; 4]);
        assert!((a - 2.0).abs() < 1e-14 && (b + 0.5).abs() < 1e-14);
        assert!((v - 1.0 / 5.0).abs() < 1e-14);
    }
}
