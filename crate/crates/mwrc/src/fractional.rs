//! Fractional programming: Dinkelbach's method and the two GEE solvers built on it.
//!
//! [`dinkelbach`] maximizes `f(x) / g(x)` by driving `F(lambda) = max f - lambda g`
//! to zero, given a caller-supplied global maximizer of `f - lambda g`.
//! [`maximize_gee1`] solves the min-form family exactly through a one-dimensional
//! reformulation in the target rate; [`alternating_gee2`] optimizes the compound
//! family by maximizing over one power at a time.

use crate::channel::PowerLimits;
use crate::error::{Error, Result};
use crate::gee::{gee_value, Gee1Params, Gee2Params, PowerCost, PowerProfile, RateModel};
use crate::scalar::golden_section_max;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DinkelbachOptions {
    pub lambda0: f64,
    /// Stop once `F(lambda) <= eps`.
    pub eps: f64,
    pub max_iter: usize,
}

impl Default for DinkelbachOptions {
    fn default() -> Self {
        Self { lambda0: 0.0, eps: 1e-9, max_iter: 100 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DinkelbachResult<X> {
    pub x_star: X,
    /// Ratio `f(x_star) / g(x_star)`.
    pub lambda_star: f64,
    pub iterations: usize,
    pub converged: bool,
    /// The parameter used at each iteration, starting with `lambda0`.
    pub lambdas: Vec<f64>,
    /// `F(lambda_n) = f(x_n) - lambda_n g(x_n)` at each iteration.
    pub residuals: Vec<f64>,
}

/// Dinkelbach's algorithm.
///
/// `inner(lambda)` must return a global maximizer of `f - lambda g`; the
/// returned ratio is then globally optimal. `g` must be positive on the
/// feasible set and `F(lambda0) >= 0`, which holds for `lambda0 = 0` when `f >= 0`.
pub fn dinkelbach<X, F, G, I>(f: F, g: G, mut inner: I, opts: DinkelbachOptions) -> Result<DinkelbachResult<X>>
where
    F: Fn(&X) -> f64,
    G: Fn(&X) -> f64,
    I: FnMut(f64) -> Result<X>,
{
    let mut lambda = opts.lambda0;
    let mut lambdas = Vec::new();
    let mut residuals = Vec::new();
    for n in 1..=opts.max_iter {
        let x = inner(lambda).map_err(|e| match e {
            Error::InnerSolverFailure(_) => e,
            other => Error::InnerSolverFailure(other.to_string()),
        })?;
        let (fx, gx) = (f(&x), g(&x));
        let residual = fx - lambda * gx;
        lambdas.push(lambda);
        residuals.push(residual);
        if residual <= opts.eps {
            return Ok(DinkelbachResult {
                x_star: x,
                lambda_star: fx / gx,
                iterations: n,
                converged: true,
                lambdas,
                residuals,
            });
        }
        lambda = fx / gx;
    }
    Err(Error::NonConvergence { solver: "Dinkelbach", iterations: opts.max_iter })
}

/// Result of a GEE solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub profile: PowerProfile,
    /// GEE at `profile`, bit/s/Hz per watt.
    pub gee: f64,
    /// Objective after each outer iteration.
    pub trajectory: Vec<f64>,
    pub iterations: usize,
}

/// Powers needed to support target sum rate `t` under the min-form model.
pub fn min_form_powers(params: &Gee1Params, n_s: f64, n_r: f64, t: f64) -> PowerProfile {
    PowerProfile {
        p_s: n_r / params.alpha2 * (2f64.powf(t / params.a2) - 1.0),
        p_r: n_s / params.alpha1 * (2f64.powf(t / params.a1) - 1.0),
    }
}

/// Globally maximizes the GEE of a min-form rate.
///
/// At an optimum neither rate term exceeds the other, so both powers follow
/// from the target rate `t` and the problem becomes
/// `max t / (phi p_s(t) + psi p_r(t) + p_c)` over `t` in `[0, t_max]`, with a
/// concave numerator minus convex denominator inside Dinkelbach.
pub fn maximize_gee1(
    params: &Gee1Params,
    cost: &PowerCost,
    limits: &PowerLimits,
    n_s: f64,
    n_r: f64,
    eps: f64,
) -> Result<SolveReport> {
    let t_max = params.downlink(limits.p_r_max, n_s).min(params.uplink(limits.p_s_max, n_r));
    let denom = |t: &f64| cost.consumed(min_form_powers(params, n_s, n_r, *t));
    let tol = 1e-12 * t_max.max(1.0);
    let res = dinkelbach(
        |t: &f64| *t,
        denom,
        |lambda| Ok(golden_section_max(|t| t - lambda * denom(&t), 0.0, t_max, tol).0),
        DinkelbachOptions { eps, ..Default::default() },
    )?;
    let profile = min_form_powers(params, n_s, n_r, res.x_star);
    let profile = PowerProfile::new(profile.p_s.min(limits.p_s_max), profile.p_r.min(limits.p_r_max));
    let model = RateModel::MinForm { params: *params, n_s, n_r };
    Ok(SolveReport {
        profile,
        gee: gee_value(&model, profile, cost),
        trajectory: res.lambdas[1..].iter().copied().chain([res.lambda_star]).collect(),
        iterations: res.iterations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlternatingOptions {
    /// Stop when successive GEE values differ by less than this.
    pub eps: f64,
    /// Starting relay power; `None` means `p_r_max`.
    pub p_r_init: Option<f64>,
    pub max_iter: usize,
    /// Restart once from full power if the run ends at the all-zero point.
    pub retry_degenerate: bool,
}

impl Default for AlternatingOptions {
    fn default() -> Self {
        Self { eps: 1e-10, p_r_init: None, max_iter: 1000, retry_degenerate: true }
    }
}

/// Alternating maximization of the GEE of a compound rate.
///
/// Each half-step maximizes over one power with the other fixed; the partial
/// problem is pseudo-concave and solved by Dinkelbach with golden-section
/// inner search. The GEE sequence is nondecreasing.
pub fn alternating_gee2(
    params: &Gee2Params,
    cost: &PowerCost,
    limits: &PowerLimits,
    opts: AlternatingOptions,
) -> Result<SolveReport> {
    let p_r_init = opts.p_r_init.unwrap_or(limits.p_r_max);
    if !(0.0..=limits.p_r_max).contains(&p_r_init) {
        return Err(Error::InvalidParameter(format!("p_r_init = {p_r_init} outside [0, {}]", limits.p_r_max)));
    }
    let report = alternate(params, cost, limits, p_r_init, opts)?;
    if report.gee == 0.0 && opts.retry_degenerate && p_r_init < limits.p_r_max {
        let mut retry = alternate(params, cost, limits, limits.p_r_max, opts)?;
        retry.iterations += report.iterations;
        return Ok(retry);
    }
    Ok(report)
}

fn alternate(
    params: &Gee2Params,
    cost: &PowerCost,
    limits: &PowerLimits,
    p_r_init: f64,
    opts: AlternatingOptions,
) -> Result<SolveReport> {
    let model = RateModel::Compound(*params);
    let gee = |p_s: f64, p_r: f64| gee_value(&model, PowerProfile::new(p_s, p_r), cost);
    let (mut p_s, mut p_r) = (0.0, p_r_init);
    let mut current = f64::NEG_INFINITY;
    let mut trajectory = Vec::new();
    for n in 1..=opts.max_iter {
        let cand = best_source_power(params, cost, limits.p_s_max, p_r)?;
        if gee(cand, p_r) >= gee(p_s, p_r) {
            p_s = cand;
        }
        let cand = best_relay_power(params, cost, limits.p_r_max, p_s)?;
        if gee(p_s, cand) >= gee(p_s, p_r) {
            p_r = cand;
        }
        let value = gee(p_s, p_r);
        trajectory.push(value);
        if (value - current).abs() < opts.eps {
            return Ok(SolveReport { profile: PowerProfile::new(p_s, p_r), gee: value, trajectory, iterations: n });
        }
        current = value;
    }
    Err(Error::NonConvergence { solver: "alternating maximization", iterations: opts.max_iter })
}

fn best_source_power(params: &Gee2Params, cost: &PowerCost, p_s_max: f64, p_r: f64) -> Result<f64> {
    if p_r == 0.0 {
        return Ok(0.0);
    }
    let fixed = cost.psi * p_r + cost.p_c;
    maximize_ratio_1d(|x| params.rate(x, p_r), |x| cost.phi * x + fixed, p_s_max)
}

fn best_relay_power(params: &Gee2Params, cost: &PowerCost, p_r_max: f64, p_s: f64) -> Result<f64> {
    if p_s == 0.0 {
        return Ok(0.0);
    }
    let fixed = cost.phi * p_s + cost.p_c;
    maximize_ratio_1d(|x| params.rate(p_s, x), |x| cost.psi * x + fixed, p_r_max)
}

/// `argmax num(x) / den(x)` on `[0, hi]` for concave `num` and affine `den`.
fn maximize_ratio_1d<N, D>(num: N, den: D, hi: f64) -> Result<f64>
where
    N: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let tol = 1e-12 * hi;
    let res = dinkelbach(
        |x: &f64| num(*x),
        |x: &f64| den(*x),
        |lambda| Ok(golden_section_max(|x| num(x) - lambda * den(x), 0.0, hi, tol).0),
        DinkelbachOptions { eps: 1e-14, ..Default::default() },
    )?;
    Ok(res.x_star)
}
