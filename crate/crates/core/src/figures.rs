//! Data grids behind the eight standard plots: the two domain pictures and
//! the six rate-function curves/surfaces.
//!
//! | id | content                                  | parameters                    | axis            |
//! |----|------------------------------------------|-------------------------------|-----------------|
//! | 1  | regions D1 and D2                        | θ = 0.9                       | λ ∈ [-2,0.6]×[-2.5,1] |
//! | 2  | their union                              | θ = 0.9                       | same            |
//! | 3  | `J(x, y)`                                | θ = 0.3                       | x ∈ (0,3], y ∈ (-3,3) |
//! | 4  | `I₁(c)`                                  | θ ∈ {0, 0.3, 0.6, 0.9}        | c ∈ (0,10]      |
//! | 5  | `I₂(c)`                                  | θ ∈ {-0.99, -0.6, 0, 0.6, 0.99} | c ∈ [-4,4]    |
//! | 6  | Yule–Walker rate                         | θ ∈ {-0.5, 0, 0.5}            | c ∈ (-1,1)      |
//! | 7  | AR(1) sample-mean rate                   | θ ∈ {-0.5, 0, 0.5}            | c ∈ [-10,10]    |
//! | 8  | `K_φ(x)`                                 | φ ∈ {0.2, 0.4, 0.6, 0.8}      | x ∈ (0,5]       |

use crate::error::{LdpError, Result};
use crate::exec::{grid_map, map_indexed, Exec};
use crate::extended::ExtendedReal;
use crate::rates;
use crate::table::{Axis, Table};
use crate::toeplitz::{domain_membership, DomainRegion, LambdaPair};

pub const FIGURE_IDS: [u8; 8] = [1, 2, 3, 4, 5, 6, 7, 8];

/// File stem used when a figure grid is written to disk.
pub fn figure_name(id: u8) -> Option<&'static str> {
    Some(match id {
        1 => "fig1_domain_regions",
        2 => "fig2_domain_union",
        3 => "fig3_rate_w",
        4 => "fig4_rate_quad_mean",
        5 => "fig5_rate_lag1",
        6 => "fig6_rate_yule_walker",
        7 => "fig7_rate_sample_mean",
        8 => "fig8_rate_ma1_quad_mean",
        _ => return None,
    })
}

const DOMAIN_THETA: f64 = 0.9;

fn domain_axes() -> Result<(Axis, Axis)> {
    Ok((Axis::closed(-2.0, 0.6, 131)?, Axis::closed(-2.5, 1.0, 176)?))
}

fn domain_figure(union: bool, exec: Exec) -> Result<Table> {
    let (a1, a2) = domain_axes()?;
    let (l1s, l2s) = (a1.points(), a2.points());
    let regions = grid_map(exec, &l1s, &l2s, |l1, l2| domain_membership(LambdaPair::new(l1, l2), DOMAIN_THETA));
    let mut t = Table::new(vec!["lambda1", "lambda2", "theta", "tag"]);
    for (k, region) in regions.into_iter().enumerate() {
        let tag = match (union, region) {
            (true, DomainRegion::Outside) => "Outside",
            (true, _) => "D",
            (false, r) => r.tag(),
        };
        let (l1, l2) = (l1s[k / l2s.len()], l2s[k % l2s.len()]);
        t.push(vec![l1.into(), l2.into(), DOMAIN_THETA.into(), tag.into()]);
    }
    Ok(t)
}

/// One curve per parameter value, parameter outer, abscissa inner.
fn curves(param_col: &'static str, arg_col: &'static str, params: &[f64], axis: Axis, exec: Exec, rate: impl Fn(f64, f64) -> ExtendedReal + Sync + Send) -> Table {
    let xs = axis.points();
    let vals = grid_map(exec, params, &xs, &rate);
    let mut t = Table::new(vec![param_col, arg_col, "value"]);
    for (k, v) in vals.into_iter().enumerate() {
        t.push(vec![params[k / xs.len()].into(), xs[k % xs.len()].into(), v.into()]);
    }
    t
}

/// The grid for figure `id`.
pub fn figure(id: u8, exec: Exec) -> Result<Table> {
    match id {
        1 => domain_figure(false, exec),
        2 => domain_figure(true, exec),
        3 => {
            let theta = 0.3;
            let xs = Axis::left_open(0.0, 3.0, 60)?.points();
            let ys = Axis::open(-3.0, 3.0, 119)?.points();
            let vals = map_indexed(exec, xs.len() * ys.len(), |k| rates::rate_j(xs[k / ys.len()], ys[k % ys.len()], theta));
            let mut t = Table::new(vec!["x", "y", "theta", "value"]);
            for (k, v) in vals.into_iter().enumerate() {
                t.push(vec![xs[k / ys.len()].into(), ys[k % ys.len()].into(), theta.into(), v.into()]);
            }
            Ok(t)
        }
        4 => Ok(curves("theta", "c", &[0.0, 0.3, 0.6, 0.9], Axis::left_open(0.0, 10.0, 500)?, exec, |th, c| {
            rates::rate_i1(c, th)
        })),
        5 => Ok(curves("theta", "c", &[-0.99, -0.6, 0.0, 0.6, 0.99], Axis::closed(-4.0, 4.0, 801)?, exec, |th, c| {
            rates::rate_i2(c, th)
        })),
        6 => Ok(curves("theta", "c", &[-0.5, 0.0, 0.5], Axis::open(-1.0, 1.0, 199)?, exec, |th, c| {
            rates::rate_yule_walker(c, th)
        })),
        7 => Ok(curves("theta", "c", &[-0.5, 0.0, 0.5], Axis::closed(-10.0, 10.0, 401)?, exec, |th, c| {
            ExtendedReal::Finite(rates::rate_sample_mean_ar1(c, th))
        })),
        8 => Ok(curves("phi", "x", &[0.2, 0.4, 0.6, 0.8], Axis::left_open(0.0, 5.0, 500)?, exec, |phi, x| {
            rates::rate_k_phi(x, phi)
        })),
        _ => Err(LdpError::InvalidArgument(format!("no figure {id}; expected 1..=8"))),
    }
}
