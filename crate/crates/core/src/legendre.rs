//! Numerical oracles: the Fenchel–Legendre transform of a two-dimensional
//! CGF over a domain, and contraction infima of a two-dimensional rate along
//! a parametrized curve.
//!
//! Both are deterministic. The transform runs a damped Newton ascent with
//! finite-difference derivatives from a fixed set of starting points; the
//! infimum samples the bracket densely and refines the best cell by
//! golden-section search.

use serde::Serialize;

use crate::extended::ExtendedReal;
use crate::toeplitz::LambdaPair;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ArgOpt {
    OneD(f64),
    TwoD([f64; 2]),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizationReport {
    pub argopt: ArgOpt,
    pub value: ExtendedReal,
    pub iterations: usize,
    pub converged: bool,
    /// Gradient norm (transform) or final bracket width (infimum).
    pub residual: f64,
    /// The ascent ran into the domain boundary with the objective still
    /// increasing; `value` is the best value reached.
    pub boundary_limit: bool,
    /// The ascent diverged; `value` is `+∞`.
    pub unbounded: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    pub grad_tol: f64,
    pub arg_tol: f64,
    pub max_iter: usize,
    /// `[[λ₁ min, λ₁ max], [λ₂ min, λ₂ max]]`, the box holding the 5×5 start grid.
    pub start_box: [[f64; 2]; 2],
    /// Iterates beyond this norm count as divergence to `+∞`.
    pub divergence_norm: f64,
    /// Number of samples along a contraction bracket.
    pub samples: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            grad_tol: 1e-9,
            arg_tol: 1e-10,
            max_iter: 10_000,
            start_box: [[-1.0, 0.5], [-1.5, 1.5]],
            divergence_norm: 1e8,
            samples: 401,
        }
    }
}

struct Ascent<'a, E, D> {
    evaluator: &'a E,
    domain: &'a D,
    x: f64,
    y: f64,
}

impl<E, D> Ascent<'_, E, D>
where
    E: Fn(LambdaPair) -> ExtendedReal,
    D: Fn(LambdaPair) -> bool,
{
    /// `xλ₁ + yλ₂ - L(λ)`, or `None` off the domain or where `L = +∞`.
    fn objective(&self, p: [f64; 2]) -> Option<f64> {
        let l = LambdaPair::new(p[0], p[1]);
        if !(self.domain)(l) {
            return None;
        }
        (self.evaluator)(l).finite().map(|v| self.x * p[0] + self.y * p[1] - v)
    }

    /// Difference-quotient gradient and Hessian at `p`, shrinking the step
    /// until every probe is feasible.
    fn derivatives(&self, p: [f64; 2], f0: f64) -> Option<([f64; 2], [[f64; 2]; 2])> {
        let mut h = 1e-5 * (1.0 + p[0].abs().max(p[1].abs()));
        for _ in 0..12 {
            if let Some(d) = self.derivatives_at_step(p, f0, h) {
                return Some(d);
            }
            h /= 8.0;
        }
        None
    }

    fn derivatives_at_step(&self, p: [f64; 2], f0: f64, h: f64) -> Option<([f64; 2], [[f64; 2]; 2])> {
        let f = |a: f64, b: f64| self.objective([p[0] + a, p[1] + b]);
        let f1p = f(h, 0.0)?;
        let f1m = f(-h, 0.0)?;
        let f2p = f(0.0, h)?;
        let f2m = f(0.0, -h)?;
        let fpp = f(h, h)?;
        let fpm = f(h, -h)?;
        let fmp = f(-h, h)?;
        let fmm = f(-h, -h)?;
        // Fourth-order stencil for the gradient: near the edge of the cone the
        // third derivatives are large enough to bias the two-point quotient.
        let g1 = (8.0 * (f1p - f1m) - (f(2.0 * h, 0.0)? - f(-2.0 * h, 0.0)?)) / (12.0 * h);
        let g2 = (8.0 * (f2p - f2m) - (f(0.0, 2.0 * h)? - f(0.0, -2.0 * h)?)) / (12.0 * h);
        let g = [g1, g2];
        let h11 = (f1p - 2.0 * f0 + f1m) / (h * h);
        let h22 = (f2p - 2.0 * f0 + f2m) / (h * h);
        let h12 = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
        Some((g, [[h11, h12], [h12, h22]]))
    }
}

fn norm2(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

/// Ascent direction from the modified Newton step `Σ (g·vᵢ)/|μᵢ| vᵢ` over the
/// Hessian eigenpairs, with `|μᵢ|` floored relative to the largest. Curvature
/// of the wrong sign (difference noise along a flat ridge) is flipped rather
/// than trusted, so the step is always uphill.
fn ascent_direction(g: [f64; 2], hess: [[f64; 2]; 2]) -> [f64; 2] {
    let [[a, b], [_, d]] = hess;
    let mean = 0.5 * (a + d);
    let radius = (0.5 * (a - d)).hypot(b);
    let mu = [mean + radius, mean - radius];
    let v1 = if b.abs() > 1e-300 || (a - mu[0]).abs() > 1e-300 {
        let (vx, vy) = if b.abs() > 1e-300 { (b, mu[0] - a) } else { (1.0, 0.0) };
        let nv = vx.hypot(vy);
        [vx / nv, vy / nv]
    } else {
        [1.0, 0.0]
    };
    let v2 = [-v1[1], v1[0]];
    let scale = mu[0].abs().max(mu[1].abs());
    if !(scale > 0.0) || !scale.is_finite() {
        return g;
    }
    let floor = 1e-10 * scale;
    let mut dir = [0.0; 2];
    for (m, v) in mu.iter().zip([v1, v2]) {
        let coef = (g[0] * v[0] + g[1] * v[1]) / m.abs().max(floor);
        dir[0] += coef * v[0];
        dir[1] += coef * v[1];
    }
    dir
}

struct LocalResult {
    point: [f64; 2],
    value: f64,
    iterations: usize,
    residual: f64,
    converged: bool,
    boundary_limit: bool,
    unbounded: bool,
}

fn local_ascent<E, D>(asc: &Ascent<'_, E, D>, start: [f64; 2], f_start: f64, opts: &OracleOptions) -> LocalResult
where
    E: Fn(LambdaPair) -> ExtendedReal,
    D: Fn(LambdaPair) -> bool,
{
    let mut p = start;
    let mut f = f_start;
    let mut residual = f64::INFINITY;
    for iter in 0..opts.max_iter {
        let Some((g, hess)) = asc.derivatives(p, f) else {
            // Every probe step, however small, leaves the domain.
            return LocalResult { point: p, value: f, iterations: iter, residual, converged: true, boundary_limit: true, unbounded: false };
        };
        residual = norm2(g);
        if residual < opts.grad_tol {
            return LocalResult { point: p, value: f, iterations: iter, residual, converged: true, boundary_limit: false, unbounded: false };
        }
        let mut accepted = None;
        let mut hit_boundary = false;
        let newton = ascent_direction(g, hess);
        // Newton decrement: the model's predicted gain. Once it is below the
        // rounding level of the objective, the difference quotients cannot
        // resolve any further ascent.
        let flat = 0.5 * (g[0] * newton[0] + g[1] * newton[1]) <= 1e-12 * (1.0 + f.abs());
        for dir in [newton, g] {
            let mut t = 1.0;
            for _ in 0..80 {
                let cand = [p[0] + t * dir[0], p[1] + t * dir[1]];
                match asc.objective(cand) {
                    Some(fc) if fc > f => {
                        accepted = Some((cand, fc, t * norm2(dir)));
                        break;
                    }
                    Some(_) => {}
                    None => hit_boundary = true,
                }
                t *= 0.5;
            }
            // A full gradient step carries no curvature information, so keep
            // doubling it while the objective still improves.
            if dir == g && t == 1.0 {
                while let Some((_, fa, _)) = accepted {
                    t *= 2.0;
                    let cand = [p[0] + t * dir[0], p[1] + t * dir[1]];
                    match asc.objective(cand) {
                        Some(fc) if fc > fa && t < 1e300 => accepted = Some((cand, fc, t * norm2(dir))),
                        _ => break,
                    }
                }
            }
            if accepted.is_some() {
                break;
            }
        }
        let Some((cand, fc, step)) = accepted else {
            // No ascent along either direction: we are at the resolution
            // limit of the difference quotients.
            return LocalResult { point: p, value: f, iterations: iter, residual, converged: hit_boundary || flat, boundary_limit: hit_boundary && !flat, unbounded: false };
        };
        p = cand;
        f = fc;
        if norm2(p) > opts.divergence_norm {
            return LocalResult { point: p, value: f64::INFINITY, iterations: iter + 1, residual, converged: true, boundary_limit: false, unbounded: true };
        }
        if step < opts.arg_tol * (1.0 + norm2(p)) {
            let boundary = hit_boundary && residual >= opts.grad_tol && !flat;
            return LocalResult { point: p, value: f, iterations: iter + 1, residual, converged: boundary || flat, boundary_limit: boundary, unbounded: false };
        }
    }
    LocalResult { point: p, value: f, iterations: opts.max_iter, residual, converged: false, boundary_limit: false, unbounded: false }
}

/// Starting points: the origin and a 5×5 grid strictly inside the start box,
/// in that order, restricted to feasible points.
fn start_points(opts: &OracleOptions) -> Vec<[f64; 2]> {
    let [[a0, a1], [b0, b1]] = opts.start_box;
    let mut pts = vec![[0.0, 0.0]];
    for i in 1..=5 {
        for j in 1..=5 {
            pts.push([a0 + (a1 - a0) * i as f64 / 6.0, b0 + (b1 - b0) * j as f64 / 6.0]);
        }
    }
    pts
}

/// `sup_{λ ∈ domain} { xλ₁ + yλ₂ - L(λ) }` by multi-start Newton ascent.
///
/// The best local result over all feasible starts is reported. If no start
/// point is feasible the report is unconverged, with value zero at the origin.
pub fn fenchel_legendre_2d<E, D>(evaluator: E, domain: D, x: f64, y: f64, opts: &OracleOptions) -> OptimizationReport
where
    E: Fn(LambdaPair) -> ExtendedReal,
    D: Fn(LambdaPair) -> bool,
{
    let asc = Ascent { evaluator: &evaluator, domain: &domain, x, y };
    let mut best: Option<LocalResult> = None;
    let mut iterations = 0;
    for start in start_points(opts) {
        let Some(f0) = asc.objective(start) else { continue };
        let r = local_ascent(&asc, start, f0, opts);
        iterations += r.iterations;
        let better = match &best {
            None => true,
            Some(b) => r.value > b.value,
        };
        if better {
            let stop = r.unbounded;
            best = Some(r);
            if stop {
                break;
            }
        }
    }
    match best {
        Some(b) => OptimizationReport {
            argopt: ArgOpt::TwoD(b.point),
            value: if b.unbounded { ExtendedReal::PosInf } else { ExtendedReal::from_f64(b.value) },
            iterations,
            converged: b.converged,
            residual: b.residual,
            boundary_limit: b.boundary_limit,
            unbounded: b.unbounded,
        },
        None => OptimizationReport {
            argopt: ArgOpt::TwoD([0.0, 0.0]),
            value: ExtendedReal::ZERO,
            iterations,
            converged: false,
            residual: f64::INFINITY,
            boundary_limit: false,
            unbounded: false,
        },
    }
}

/// `inf_{t ∈ (lo, hi)} rate2d(curve(t))`.
///
/// The open bracket is sampled at `opts.samples` midpoints; the best sample's
/// neighbouring cells are then refined by golden-section search down to
/// `opts.arg_tol` relative width. `+∞` when no sample is finite.
pub fn contraction_inf_1d<R, C>(rate2d: R, curve: C, bracket: (f64, f64), opts: &OracleOptions) -> OptimizationReport
where
    R: Fn(f64, f64) -> ExtendedReal,
    C: Fn(f64) -> (f64, f64),
{
    let (lo, hi) = bracket;
    let eval = |t: f64| {
        let (x, y) = curve(t);
        rate2d(x, y)
    };
    let n = opts.samples.max(3);
    let cell = (hi - lo) / n as f64;
    let ts: Vec<f64> = (0..n).map(|k| lo + (k as f64 + 0.5) * cell).collect();
    let vals: Vec<ExtendedReal> = ts.iter().map(|&t| eval(t)).collect();
    let best_k = (0..n).filter(|&k| vals[k].is_finite()).min_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap());
    let Some(k) = best_k else {
        return OptimizationReport {
            argopt: ArgOpt::OneD(ts[n / 2]),
            value: ExtendedReal::PosInf,
            iterations: n,
            converged: true,
            residual: 0.0,
            boundary_limit: false,
            unbounded: false,
        };
    };
    let mut a = if k == 0 { lo } else { ts[k - 1] };
    let mut b = if k + 1 == n { hi } else { ts[k + 1] };
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = eval(c);
    let mut fd = eval(d);
    let mut iterations = n;
    let mut best_t = ts[k];
    let mut best_v = vals[k];
    while (b - a) > opts.arg_tol * (1.0 + a.abs().max(b.abs())) && iterations < n + opts.max_iter {
        iterations += 1;
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(d);
        }
        for (t, v) in [(c, fc), (d, fd)] {
            if v < best_v {
                best_t = t;
                best_v = v;
            }
        }
    }
    let width = b - a;
    OptimizationReport {
        argopt: ArgOpt::OneD(best_t),
        value: best_v,
        iterations,
        converged: width <= opts.arg_tol * (1.0 + a.abs().max(b.abs())),
        residual: width,
        boundary_limit: false,
        unbounded: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cgf::{ar1_formula_domain, l_limit_ar1_extended};
    use crate::rates::{lln_w, rate_j, rate_yule_walker};

    fn value(r: &OptimizationReport) -> f64 {
        r.value.finite().unwrap()
    }

    #[test]
    fn zero_cgf_at_origin() {
        let r = fenchel_legendre_2d(|_| ExtendedReal::ZERO, |_| true, 0.0, 0.0, &OracleOptions::default());
        assert!(r.converged);
        assert_eq!(r.value, ExtendedReal::ZERO);
        assert_eq!(r.argopt, ArgOpt::TwoD([0.0, 0.0]));
    }

    #[test]
    fn zero_cgf_off_origin_diverges() {
        let r = fenchel_legendre_2d(|_| ExtendedReal::ZERO, |_| true, 1.0, 0.0, &OracleOptions::default());
        assert!(r.unbounded);
        assert!(r.value.is_infinite());
    }

    #[test]
    fn quadratic_cgf_dual() {
        // L(λ) = |λ|²/2 has dual |x|²/2 attained at λ = x.
        let r = fenchel_legendre_2d(
            |l| ExtendedReal::Finite(0.5 * (l.lambda1 * l.lambda1 + l.lambda2 * l.lambda2)),
            |_| true,
            0.7,
            -0.4,
            &OracleOptions::default(),
        );
        assert!(r.converged);
        assert!((value(&r) - 0.5 * (0.49 + 0.16)).abs() < 1e-12);
    }

    #[test]
    fn ar1_dual_matches_closed_form() {
        let theta = 0.3;
        let r = fenchel_legendre_2d(
            |l| l_limit_ar1_extended(l, theta),
            |l| ar1_formula_domain(l, theta),
            2.0,
            1.0,
            &OracleOptions::default(),
        );
        assert!(r.converged, "{r:?}");
        assert!((value(&r) - rate_j(2.0, 1.0, theta).finite().unwrap()).abs() < 1e-9);
    }

    #[test]
    fn lln_point_maps_to_origin() {
        let theta = 0.5;
        let (x, y) = lln_w(theta);
        let r = fenchel_legendre_2d(
            |l| l_limit_ar1_extended(l, theta),
            |l| ar1_formula_domain(l, theta),
            x,
            y,
            &OracleOptions::default(),
        );
        let ArgOpt::TwoD(p) = r.argopt else { panic!() };
        assert!(norm2(p) < 1e-6, "{p:?}");
        assert!(value(&r).abs() < 1e-10);
    }

    #[test]
    fn duality_lower_bound() {
        let theta = -0.4;
        let (x, y) = (1.5, -0.3);
        let r = fenchel_legendre_2d(
            |l| l_limit_ar1_extended(l, theta),
            |l| ar1_formula_domain(l, theta),
            x,
            y,
            &OracleOptions::default(),
        );
        for i in 0..20 {
            for j in 0..20 {
                let l = LambdaPair::new(-2.0 + 0.13 * i as f64, -2.0 + 0.2 * j as f64);
                if let Some(v) = l_limit_ar1_extended(l, theta).finite() {
                    assert!(value(&r) >= x * l.lambda1 + y * l.lambda2 - v - 1e-12);
                }
            }
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let theta = 0.6;
        let run = || {
            fenchel_legendre_2d(
                |l| l_limit_ar1_extended(l, theta),
                |l| ar1_formula_domain(l, theta),
                0.8,
                0.1,
                &OracleOptions::default(),
            )
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn contraction_examples() {
        let opts = OracleOptions::default();
        let theta = 0.5;
        let c = 1.0 / (1.0 - theta * theta);
        let r = contraction_inf_1d(|x, y| rate_j(x, y, theta), |t| (c, t), (-c, c), &opts);
        assert!(r.converged);
        assert!(value(&r) < 1e-12);
        let ArgOpt::OneD(t) = r.argopt else { panic!() };
        assert!((t - theta * c).abs() < 1e-5);

        let r = contraction_inf_1d(|x, y| rate_j(x, y, theta), |t| (t, 0.7 * t), (0.0, 20.0), &opts);
        assert!((value(&r) - rate_yule_walker(0.7, theta).finite().unwrap()).abs() < 1e-8);

        let r = contraction_inf_1d(|_, _| ExtendedReal::PosInf, |t| (t, t), (0.0, 1.0), &opts);
        assert!(r.value.is_infinite());
    }

    #[test]
    fn infimum_below_probes() {
        let opts = OracleOptions::default();
        let theta = -0.2;
        let c = 0.9;
        let r = contraction_inf_1d(|x, y| rate_j(x, y, theta), |t| (t, c), (c, c + 30.0), &opts);
        for k in 1..100 {
            let x = c + 0.1 * k as f64;
            assert!(r.value <= rate_j(x, c, theta));
        }
    }
}
