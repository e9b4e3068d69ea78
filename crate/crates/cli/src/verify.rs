//! Self-check suites run by `ldp verify`.

use std::f64::consts::TAU;

use ldp_core::cgf::{ar1_formula_domain, l_limit_ar1, l_limit_ar1_extended, l_n_ar1, l_n_ar1_pivot, ma1_lambda_bound};
use ldp_core::empirics::{estimate_rate, EstimateOptions, EventSpec, Statistic};
use ldp_core::exec::{grid_map, map_indexed};
use ldp_core::legendre::{contraction_inf_1d, fenchel_legendre_2d, OracleOptions};
use ldp_core::rates;
use ldp_core::rng::derive_seed;
use ldp_core::toeplitz::{d_matrix, domain_membership, is_positive_definite};
use ldp_core::{Ar1Params, Exec, ExtendedReal, LambdaPair};
use serde::Serialize;

use crate::config::{Common, Suite};
use crate::error::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check { name: name.to_string(), passed, detail }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub suite: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
}

pub fn suite_name(suite: Suite) -> &'static str {
    match suite {
        Suite::ClosedForms => "closed-forms",
        Suite::Domains => "domains",
        Suite::Convergence => "convergence",
        Suite::Montecarlo => "montecarlo",
    }
}

pub fn run(suite: Suite, common: &Common) -> Result<Summary, CliError> {
    let checks = match suite {
        Suite::ClosedForms => closed_forms(),
        Suite::Domains => domains(common.n.unwrap_or(256)),
        Suite::Convergence => convergence(common.seed()),
        Suite::Montecarlo => montecarlo(common)?,
    };
    Ok(Summary { suite: suite_name(suite), passed: checks.iter().all(|c| c.passed), checks })
}

fn fin(v: ExtendedReal) -> f64 {
    v.finite().unwrap_or(f64::INFINITY)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

type Case<'a> = (&'a str, f64, &'a dyn Fn(f64) -> ExtendedReal);

fn closed_forms() -> Vec<Check> {
    let opts = OracleOptions::default();
    let mut out = Vec::new();

    // Zero at the almost-sure limit, positive nearby.
    let mut bad = Vec::new();
    for theta in [0.0f64, 0.3, -0.6] {
        let v = 1.0 / (1.0 - theta * theta);
        let cases: [Case; 6] = [
            ("I1", v, &|c| rates::rate_i1(c, theta)),
            ("I2", theta * v, &|c| rates::rate_i2(c, theta)),
            ("Itheta", theta, &|c| rates::rate_yule_walker(c, theta)),
            ("IXbar", 0.0, &|c| ExtendedReal::Finite(rates::rate_sample_mean_ar1(c, theta))),
            ("J", v, &|x| rates::rate_j(x, theta * v, theta)),
            ("JS", v, &|y| rates::rate_js(0.0, y, theta)),
        ];
        for (name, at, f) in cases {
            if !(fin(f(at)) <= 1e-10 && f(at - 1e-2) > ExtendedReal::ZERO && f(at + 1e-2) > ExtendedReal::ZERO) {
                bad.push(format!("{name} θ={theta}"));
            }
        }
    }
    for phi in [0.0f64, 0.5] {
        let v = 1.0 + phi * phi;
        let cases: [Case; 3] = [
            ("Kphi", v, &|x| rates::rate_k_phi(x, phi)),
            ("KS", v, &|y| rates::rate_ks(0.0, y, phi)),
            ("IYbar", 0.0, &|c| ExtendedReal::Finite(rates::rate_sample_mean_ma1(c, phi))),
        ];
        for (name, at, f) in cases {
            if !(fin(f(at)) <= 1e-10 && f(at - 1e-2) > ExtendedReal::ZERO && f(at + 1e-2) > ExtendedReal::ZERO) {
                bad.push(format!("{name} φ={phi}"));
            }
        }
    }
    out.push(check("zero exactly at the almost-sure limit", bad.is_empty(), if bad.is_empty() { "9 rates".into() } else { bad.join(", ") }));

    // Legendre duality on a coarse admissible grid.
    let mut worst = 0.0f64;
    for theta in [0.0, 0.3, 0.6] {
        for i in 1..=10 {
            let x = 0.3 * i as f64;
            for j in 0..10 {
                let y = (-0.9 + 0.2 * j as f64) * x;
                let r = fenchel_legendre_2d(|l| l_limit_ar1_extended(l, theta), |l| ar1_formula_domain(l, theta), x, y, &opts);
                worst = worst.max(r.value.distance(rates::rate_j(x, y, theta)));
            }
        }
    }
    out.push(check("numerical dual equals J", worst <= 1e-6, format!("worst {worst:.3e}")));

    // Contractions inside the finite domains and beyond them.
    let (mut w1, mut w2, mut w3) = (0.0f64, 0.0f64, 0.0f64);
    let mut beyond = (0, 0);
    for theta in [0.0, 0.3, 0.6] {
        let j = |x: f64, y: f64| rates::rate_j(x, y, theta);
        let cut = rates::i2_cutoff_c2(theta).sqrt();
        for k in 0..25 {
            let s = (k as f64 + 0.5) / 25.0;
            let c = 10.0 * s;
            w1 = w1.max(contraction_inf_1d(j, |t| (c, t), (-c, c), &opts).value.distance(rates::rate_i1(c, theta)));
            let c = cut * (2.0 * s - 1.0);
            w2 = w2.max(contraction_inf_1d(j, |t| (t, c), (c.abs(), c.abs() + 50.0), &opts).value.distance(rates::rate_i2(c, theta)));
            let c = 2.0 * s - 1.0;
            w3 = w3.max(contraction_inf_1d(j, |t| (t, c * t), (0.0, 60.0), &opts).value.distance(rates::rate_yule_walker(c, theta)));
            let c = cut + 5.0 * s;
            beyond.1 += 1;
            if contraction_inf_1d(j, |t| (t, c), (c, c + 50.0), &opts).value != rates::rate_i2(c, theta) {
                beyond.0 += 1;
            }
        }
    }
    out.push(check("I1 is the contraction of J along x = c", w1 <= 1e-8, format!("worst {w1:.3e}")));
    out.push(check("I2 is the contraction of J along y = c", w2 <= 1e-8, format!("worst {w2:.3e}")));
    out.push(check("Itheta is the contraction of J along y = cx", w3 <= 1e-8, format!("worst {w3:.3e}")));
    out.push(check(
        "I2 and the contraction agree beyond the cutoff",
        beyond.0 == 0,
        format!("{} of {} points disagree (contraction finite, closed form +inf)", beyond.0, beyond.1),
    ));

    // MA(1) dual root.
    let (mut res, mut im, mut inadmissible) = (0.0f64, 0.0f64, 0);
    for phi in [0.2, 0.4, 0.6, 0.8] {
        for k in 1..=50 {
            let x = 0.1 * k as f64;
            let coef = rates::lambda_phi_cubic(x, phi);
            match rates::lambda_phi(x, phi) {
                Some(l) => {
                    res = res.max(rates::cubic_eval(coef, l).abs());
                    inadmissible += usize::from(l >= ma1_lambda_bound(phi) || l.is_nan());
                }
                None => inadmissible += 1,
            }
            im = im.max(rates::lambda_phi_complex_form(x, phi).im.abs());
        }
    }
    out.push(check(
        "MA(1) dual root",
        res <= 1e-9 && im <= 1e-9 && inadmissible == 0,
        format!("residual {res:.3e}, imaginary part {im:.3e}, {inadmissible} inadmissible"),
    ));
    out
}

fn domains(n: usize) -> Vec<Check> {
    let l1s = linspace(-2.0, 0.6, 200);
    let l2s = linspace(-2.5, 1.0, 200);
    let margin = 1e-3;
    [0.5, 0.9]
        .into_iter()
        .map(|theta| {
            let res = grid_map(Exec::Parallel, &l1s, &l2s, |l1, l2| {
                let lambda = LambdaPair::new(l1, l2);
                let inside = domain_membership(lambda, theta).is_inside();
                let near = [margin, margin / 2.0].iter().any(|&r| {
                    (0..32).any(|k| {
                        let a = TAU * k as f64 / 32.0;
                        domain_membership(LambdaPair::new(l1 + r * a.cos(), l2 + r * a.sin()), theta).is_inside() != inside
                    })
                });
                (!near).then(|| d_matrix(lambda, theta, n).map(|d| is_positive_definite(&d) == inside).unwrap_or(false))
            });
            let mismatches = res.iter().filter(|r| **r == Some(false)).count();
            let skipped = res.iter().filter(|r| r.is_none()).count();
            check(
                &format!("positive definiteness at n = {n} matches the domain, θ = {theta}"),
                mismatches == 0,
                format!("{mismatches} mismatches, {skipped} points near the boundary skipped"),
            )
        })
        .collect()
}

fn convergence(seed: u64) -> Vec<Check> {
    let mut worst = 0.0f64;
    let mut non_monotone = 0;
    for theta in [0.0, 0.3, -0.3, 0.6, -0.6, 0.9] {
        for l1 in linspace(-1.0, 0.9 * (1.0 - theta * theta) / 2.0, 7) {
            let p = 1.0 + theta * theta - 2.0 * l1;
            for f in linspace(-0.8, 0.8, 7) {
                let lambda = LambdaPair::new(l1, -theta + f * p / 2.0);
                let limit = fin(l_limit_ar1(lambda, theta));
                let err = |n| l_n_ar1_pivot(lambda, theta, n).map_or(f64::INFINITY, |v| (fin(v) - limit).abs());
                worst = worst.max(err(512));
                non_monotone += usize::from(err(1024) > err(128) + 1e-12);
            }
        }
    }
    let mut out = vec![
        check("finite-n CGF within 0.02 of the limit at n = 512", worst <= 0.02, format!("worst {worst:.3e}")),
        check("n = 1024 error does not exceed n = 128 error", non_monotone == 0, format!("{non_monotone} violations")),
    ];

    // Random domain points from uniforms on hashed counters.
    let unit = |k: u64| (derive_seed(seed, k) >> 11) as f64 / (1u64 << 53) as f64;
    let mut cases = Vec::new();
    let mut k = 0;
    while cases.len() < 200 {
        let theta = -0.95 + 1.9 * unit(k);
        let lambda = LambdaPair::new(-2.0 + 2.5 * unit(k + 1), -2.5 + 5.0 * unit(k + 2));
        let n = 2 + (unit(k + 3) * 511.0) as usize;
        k += 4;
        if domain_membership(lambda, theta).is_inside() {
            cases.push((lambda, theta, n));
        }
    }
    let worst = map_indexed(Exec::Parallel, cases.len(), |i| {
        let (lambda, theta, n) = cases[i];
        match (l_n_ar1(lambda, theta, n), l_n_ar1_pivot(lambda, theta, n)) {
            (Ok(a), Ok(b)) => a.distance(b),
            _ => f64::INFINITY,
        }
    })
    .into_iter()
    .fold(0.0, f64::max);
    out.push(check("eigenvalue and pivot routes agree to 1e-10", worst <= 1e-10, format!("worst {worst:.3e} on 200 cases")));
    out
}

fn montecarlo(common: &Common) -> Result<Vec<Check>, CliError> {
    let replicates = common.replicates(1_000_000)?;
    let seed = common.seed();
    let opts = EstimateOptions { exec: Exec::Parallel, min_count: 10 };
    let cases = [
        ("white-noise quadratic mean tail {γ̃₀ ≥ 2}, θ = 0", 0.0, Statistic::QuadMean, 2.0, 0.20, (25..=200).step_by(5).collect::<Vec<usize>>()),
        ("Yule–Walker tail {θ̃ ≥ 0.7}, θ = 0.5", 0.5, Statistic::YuleWalker, 0.7, 0.25, (25..=200).step_by(25).collect()),
    ];
    let mut out = Vec::new();
    for (k, (name, theta, statistic, level, tol, default_grid)) in cases.into_iter().enumerate() {
        let params = Ar1Params::new(theta)?.into();
        let event = EventSpec::tail_ge(statistic, level)?;
        let target = fin(match statistic {
            Statistic::QuadMean => rates::rate_i1(level, theta),
            _ => rates::rate_yule_walker(level, theta),
        });
        let grid = common.n_grid.clone().unwrap_or(default_grid);
        let rel = format!("within {:.0}%", tol * 100.0);
        match estimate_rate(params, &event, &grid, replicates, derive_seed(seed, k as u64), opts) {
            Ok(est) => {
                for w in &est.warnings {
                    log::warn!("{w}");
                }
                out.push(check(
                    &format!("{name}: slope {rel} of {target:.6}"),
                    (est.slope - target).abs() <= tol * target,
                    format!("slope {:.5} ± {:.5} on n = {:?}, {replicates} replicates", est.slope, est.stderr, est.n_grid),
                ));
            }
            Err(e) => out.push(check(&format!("{name}: slope {rel} of {target:.6}"), false, e.to_string())),
        }
    }
    Ok(out)
}
