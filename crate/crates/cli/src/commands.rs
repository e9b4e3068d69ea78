//! Table-producing subcommands.

use clap::ValueEnum;
use ldp_core::cgf::{l_limit_ar1, l_limit_ma1_qm, l_n_ar1_capped, l_n_ar1_pivot};
use ldp_core::exec::{grid_map, map_indexed};
use ldp_core::model::{simulate, PathSums};
use ldp_core::rng::derive_seed;
use ldp_core::table::{Cell, Table};
use ldp_core::toeplitz::{d_matrix, domain_membership, is_positive_definite, DEFAULT_DENSE_CAP};
use ldp_core::{rates, Ar1Params, Exec, ExtendedReal, LambdaPair, Ma1Params, ProcessParams};

use crate::config::Common;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RateName {
    #[value(name = "J")]
    J,
    #[value(name = "I1")]
    I1,
    #[value(name = "I2")]
    I2,
    #[value(name = "Itheta")]
    Itheta,
    #[value(name = "JS")]
    Js,
    #[value(name = "IXbar")]
    IXbar,
    #[value(name = "Kphi")]
    Kphi,
    #[value(name = "KS")]
    Ks,
    #[value(name = "IYbar")]
    IYbar,
}

impl RateName {
    fn is_ma(self) -> bool {
        matches!(self, RateName::Kphi | RateName::Ks | RateName::IYbar)
    }

    fn is_bivariate(self) -> bool {
        matches!(self, RateName::J | RateName::Js | RateName::Ks)
    }

    fn eval(self, a: f64, b: f64, param: f64) -> ExtendedReal {
        match self {
            RateName::J => rates::rate_j(a, b, param),
            RateName::Js => rates::rate_js(a, b, param),
            RateName::Ks => rates::rate_ks(a, b, param),
            RateName::I1 => rates::rate_i1(a, param),
            RateName::I2 => rates::rate_i2(a, param),
            RateName::Itheta => rates::rate_yule_walker(a, param),
            RateName::IXbar => ExtendedReal::Finite(rates::rate_sample_mean_ar1(a, param)),
            RateName::Kphi => rates::rate_k_phi(a, param),
            RateName::IYbar => ExtendedReal::Finite(rates::rate_sample_mean_ma1(a, param)),
        }
    }
}

fn checked_thetas(common: &Common) -> Result<Vec<f64>, CliError> {
    let thetas = common.thetas()?;
    for &t in &thetas {
        Ar1Params::new(t)?;
    }
    Ok(thetas)
}

fn checked_phis(common: &Common) -> Result<Vec<f64>, CliError> {
    let phis = common.phis()?;
    for &p in &phis {
        Ma1Params::new(p)?;
    }
    Ok(phis)
}

/// Rows ordered by parameter, then by the axes in row-major order.
pub fn rate(name: RateName, common: &Common) -> Result<Table, CliError> {
    let (param_col, params) = if name.is_ma() { ("phi", checked_phis(common)?) } else { ("theta", checked_thetas(common)?) };
    if name.is_bivariate() {
        let axes = common.axes(2)?;
        let (xs, ys) = (&axes[0], &axes[1]);
        let mut t = Table::new(vec!["x", "y", param_col, "value"]);
        for &p in &params {
            let vals = grid_map(Exec::Parallel, xs, ys, |x, y| name.eval(x, y, p));
            for (k, v) in vals.into_iter().enumerate() {
                t.push(vec![xs[k / ys.len()].into(), ys[k % ys.len()].into(), p.into(), v.into()]);
            }
        }
        Ok(t)
    } else {
        let axes = common.axes(1)?;
        let arg_col = if name == RateName::Kphi { "x" } else { "c" };
        let xs = &axes[0];
        let vals = grid_map(Exec::Parallel, &params, xs, |p, c| name.eval(c, 0.0, p));
        let mut t = Table::new(vec![param_col, arg_col, "value"]);
        for (k, v) in vals.into_iter().enumerate() {
            t.push(vec![params[k / xs.len()].into(), xs[k % xs.len()].into(), v.into()]);
        }
        Ok(t)
    }
}

/// Region tags over a λ-grid, with a finite-n positive-definiteness column
/// when `--n` is given.
pub fn domain(common: &Common) -> Result<Table, CliError> {
    let thetas = checked_thetas(common)?;
    let axes = common.axes(2)?;
    let (l1s, l2s) = (&axes[0], &axes[1]);
    let mut columns = vec!["lambda1", "lambda2", "theta", "tag"];
    if common.n.is_some() {
        columns.push("pd");
    }
    let mut t = Table::new(columns);
    for &theta in &thetas {
        let rows = grid_map(Exec::Parallel, l1s, l2s, |l1, l2| {
            let lambda = LambdaPair::new(l1, l2);
            let pd = common.n.map(|n| d_matrix(lambda, theta, n).map(|d| is_positive_definite(&d)));
            (domain_membership(lambda, theta), pd)
        });
        for (k, (region, pd)) in rows.into_iter().enumerate() {
            let mut row: Vec<Cell> = vec![l1s[k / l2s.len()].into(), l2s[k % l2s.len()].into(), theta.into(), region.tag().into()];
            if let Some(pd) = pd {
                row.push(pd?.into());
            }
            t.push(row);
        }
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CgfKind {
    #[value(name = "finite_n", alias = "finite-n")]
    FiniteN,
    Limit,
    Ma1,
}

pub fn cgf(kind: CgfKind, common: &Common) -> Result<Table, CliError> {
    match kind {
        CgfKind::Ma1 => {
            let phis = checked_phis(common)?;
            let axes = common.axes(1)?;
            let ls = &axes[0];
            let vals = grid_map(Exec::Parallel, &phis, ls, |phi, l| l_limit_ma1_qm(l, phi));
            let mut t = Table::new(vec!["phi", "lambda", "value"]);
            for (k, v) in vals.into_iter().enumerate() {
                t.push(vec![phis[k / ls.len()].into(), ls[k % ls.len()].into(), v.into()]);
            }
            Ok(t)
        }
        CgfKind::Limit | CgfKind::FiniteN => {
            let thetas = checked_thetas(common)?;
            let axes = common.axes(2)?;
            let (l1s, l2s) = (&axes[0], &axes[1]);
            let n = if kind == CgfKind::FiniteN { Some(common.n()?) } else { None };
            if let Some(n) = n {
                let cap = common.dense_cap.unwrap_or(DEFAULT_DENSE_CAP);
                if !common.pivot && n > cap {
                    return Err(CliError::Usage(format!("n = {n} exceeds the dense cap {cap}; pass --pivot to use the pivot recursion")));
                }
            }
            let mut columns = vec!["lambda1", "lambda2", "theta"];
            if n.is_some() {
                columns.push("n");
            }
            columns.push("value");
            let mut t = Table::new(columns);
            for &theta in &thetas {
                let vals = grid_map(Exec::Parallel, l1s, l2s, |l1, l2| {
                    let lambda = LambdaPair::new(l1, l2);
                    match n {
                        None => Ok(l_limit_ar1(lambda, theta)),
                        Some(n) if common.pivot => l_n_ar1_pivot(lambda, theta, n),
                        Some(n) => l_n_ar1_capped(lambda, theta, n, common.dense_cap.unwrap_or(DEFAULT_DENSE_CAP)),
                    }
                });
                for (k, v) in vals.into_iter().enumerate() {
                    let mut row: Vec<Cell> = vec![l1s[k / l2s.len()].into(), l2s[k % l2s.len()].into(), theta.into()];
                    if let Some(n) = n {
                        row.push(n.into());
                    }
                    row.push(v?.into());
                    t.push(row);
                }
            }
            Ok(t)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Process {
    Ar1,
    Ma1,
}

/// Per-replicate statistics. Replicate `r` uses seed
/// `derive_seed(derive_seed(seed, n), r)`, the same derivation as the rate
/// estimator's cells.
pub fn simulate_table(process: Process, common: &Common) -> Result<Table, CliError> {
    let params: ProcessParams = match process {
        Process::Ar1 => Ar1Params::new(single(checked_thetas(common)?, "--theta")?)?.into(),
        Process::Ma1 => Ma1Params::new(single(checked_phis(common)?, "--phi")?)?.into(),
    };
    let n = common.n()?;
    if n < 2 {
        return Err(CliError::Usage("--n must be at least 2".into()));
    }
    let replicates = common.replicates(1000)?;
    let cell_seed = derive_seed(common.seed(), n as u64);
    let rows = map_indexed(Exec::Parallel, replicates as usize, |r| {
        let seed = derive_seed(cell_seed, r as u64);
        simulate(params, n, seed).map(|path| (seed, PathSums::from_values(path.values())))
    });
    let mut t = match process {
        Process::Ar1 => Table::new(vec!["replicate", "seed", "gamma0", "gamma1", "mean", "theta_hat"]),
        Process::Ma1 => Table::new(vec!["replicate", "seed", "mean", "quad_mean"]),
    };
    for (r, row) in rows.into_iter().enumerate() {
        let (seed, s) = row?;
        t.push(match process {
            Process::Ar1 => vec![
                r.into(),
                seed.into(),
                s.quad_mean().into(),
                s.lag1_cov().into(),
                s.mean().into(),
                s.yule_walker().ok_or_else(|| ldp_core::LdpError::Degenerate("all-zero path".into()))?.into(),
            ],
            Process::Ma1 => vec![r.into(), seed.into(), s.mean().into(), s.quad_mean().into()],
        });
    }
    Ok(t)
}

fn single(values: Vec<f64>, flag: &str) -> Result<f64, CliError> {
    match values.as_slice() {
        [v] => Ok(*v),
        _ => Err(CliError::Usage(format!("{flag} takes a single value here"))),
    }
}
