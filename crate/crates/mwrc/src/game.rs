//! Non-cooperative power control between the sources and the relay.
//!
//! The three sources jointly pick `p_s` to maximize `u_s = R / (p_s + p_c_s)`,
//! the relay picks `p_r` to maximize `u_r = R / (p_r + p_c_r)`. Best responses
//! have a closed-form structure: the unconstrained maximizer solves a scalar
//! equation with an increasing left side, and is then clipped to the power cap
//! (and, for min-form rates, to the point where the player's own term stops
//! being the bottleneck).

use crate::channel::{PowerLimits, SchemeId};
use crate::error::{Error, Result};
use crate::gee::{utilities, PowerCost, PowerProfile, RateModel};
use crate::scalar::{bisect_root, expand_bracket};

/// Largest bracket tried for the stationarity equations is `2^60 * p_max`.
const MAX_DOUBLINGS: u32 = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameSpec {
    pub scheme: SchemeId,
    pub model: RateModel,
    pub cost: PowerCost,
    pub limits: PowerLimits,
}

impl GameSpec {
    pub fn new(scheme: SchemeId, n_s: f64, n_r: f64, cost: PowerCost, limits: PowerLimits) -> Result<Self> {
        Ok(Self { scheme, model: RateModel::for_scheme(scheme, n_s, n_r)?, cost, limits })
    }

    pub fn utilities(&self, profile: PowerProfile) -> (f64, f64) {
        utilities(&self.model, profile, &self.cost)
    }
}

/// Source power that maximizes `u_s` for a given relay power.
pub fn br_sources(spec: &GameSpec, p_r: f64) -> Result<f64> {
    check_power(p_r, spec.limits.p_r_max, "p_r")?;
    if p_r == 0.0 {
        return Ok(0.0);
    }
    let cap = spec.limits.p_s_max;
    match spec.model {
        RateModel::MinForm { params, n_s, n_r } => {
            // Source power at which the uplink term reaches the downlink term.
            let balance = n_r / params.alpha2 * ((1.0 + params.alpha1 * p_r / n_s).powf(params.a1 / params.a2) - 1.0);
            let station = solve_increasing(
                |p| {
                    let g = params.alpha2 * p / n_r;
                    n_r / params.alpha2 * (1.0 + g) * g.ln_1p() - p - spec.cost.p_c_s
                },
                cap,
                "source stationarity",
            )?;
            Ok(cap.min(balance).min(station))
        }
        RateModel::Compound(params) => {
            let station = solve_increasing(
                |p| {
                    let g = params.gamma(p, p_r);
                    let ratio = if g == 0.0 { p } else { (1.0 + g) * g.ln_1p() / params.dgamma_dps(p, p_r) };
                    ratio - p - spec.cost.p_c_s
                },
                cap,
                "source stationarity",
            )?;
            Ok(cap.min(station))
        }
    }
}

/// Relay power that maximizes `u_r` for a given source power.
pub fn br_relay(spec: &GameSpec, p_s: f64) -> Result<f64> {
    check_power(p_s, spec.limits.p_s_max, "p_s")?;
    if p_s == 0.0 {
        return Ok(0.0);
    }
    let cap = spec.limits.p_r_max;
    match spec.model {
        RateModel::MinForm { params, n_s, n_r } => {
            let balance = n_s / params.alpha1 * ((1.0 + params.alpha2 * p_s / n_r).powf(params.a2 / params.a1) - 1.0);
            let station = solve_increasing(
                |p| {
                    let g = params.alpha1 * p / n_s;
                    n_s / params.alpha1 * (1.0 + g) * g.ln_1p() - p - spec.cost.p_c_r
                },
                cap,
                "relay stationarity",
            )?;
            Ok(cap.min(balance).min(station))
        }
        RateModel::Compound(params) => {
            let station = solve_increasing(
                |p| {
                    let g = params.gamma(p_s, p);
                    let ratio = if g == 0.0 { p } else { (1.0 + g) * g.ln_1p() / params.dgamma_dpr(p_s, p) };
                    ratio - p - spec.cost.p_c_r
                },
                cap,
                "relay stationarity",
            )?;
            Ok(cap.min(station))
        }
    }
}

/// Left side minus right side of the compound-rate source stationarity
/// equation, `(1 + gamma) ln(1 + gamma) / (d gamma / d p_s) - p_s - p_c_s`.
pub fn source_stationarity_residual(params: &crate::gee::Gee2Params, p_s: f64, p_r: f64, p_c_s: f64) -> f64 {
    let g = params.gamma(p_s, p_r);
    (1.0 + g) * g.ln_1p() / params.dgamma_dps(p_s, p_r) - p_s - p_c_s
}

/// Root of an increasing function that is negative at zero; if the root lies
/// beyond `cap` it is still located, so callers can tell saturation apart.
fn solve_increasing<F: Fn(f64) -> f64>(h: F, cap: f64, what: &'static str) -> Result<f64> {
    if h(cap) >= 0.0 {
        return bisect_root(&h, 0.0, cap, 0.0, 400);
    }
    let hi = expand_bracket(&h, cap, MAX_DOUBLINGS, what)?;
    bisect_root(&h, hi / 2.0, hi, 0.0, 400)
}

fn check_power(p: f64, max: f64, name: &str) -> Result<()> {
    if (0.0..=max).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {p} outside [0, {max}]")))
    }
}

/// Starting point of best-response dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BrdStart {
    /// Fix the relay power; the sources respond first.
    Relay(f64),
    /// Fix the source power; the relay responds first.
    Sources(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrdStep {
    pub p_s: f64,
    pub p_r: f64,
    pub u_s: f64,
    pub u_r: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BrdTrace {
    /// One entry per round, after both players have responded.
    pub steps: Vec<BrdStep>,
    pub converged: bool,
    pub iterations: usize,
}

impl BrdTrace {
    pub fn last(&self) -> BrdStep {
        *self.steps.last().expect("a trace holds at least one round")
    }

    pub fn profile(&self) -> PowerProfile {
        let s = self.last();
        PowerProfile::new(s.p_s, s.p_r)
    }
}

/// Best-response dynamics. Stops when neither utility moves by more than `eps`
/// between rounds.
pub fn brd(spec: &GameSpec, start: BrdStart, eps: f64, max_iter: usize) -> Result<BrdTrace> {
    let (mut p_s, mut p_r) = match start {
        BrdStart::Relay(p) => {
            check_power(p, spec.limits.p_r_max, "p_r init")?;
            (0.0, p)
        }
        BrdStart::Sources(p) => {
            check_power(p, spec.limits.p_s_max, "p_s init")?;
            (p, 0.0)
        }
    };
    let mut steps: Vec<BrdStep> = Vec::new();
    for n in 1..=max_iter {
        match start {
            BrdStart::Relay(_) => {
                p_s = br_sources(spec, p_r)?;
                p_r = br_relay(spec, p_s)?;
            }
            BrdStart::Sources(_) => {
                p_r = br_relay(spec, p_s)?;
                p_s = br_sources(spec, p_r)?;
            }
        }
        let (u_s, u_r) = spec.utilities(PowerProfile::new(p_s, p_r));
        let done = steps.last().is_some_and(|prev| (u_s - prev.u_s).abs().max((u_r - prev.u_r).abs()) < eps);
        steps.push(BrdStep { p_s, p_r, u_s, u_r });
        if done {
            return Ok(BrdTrace { steps, converged: true, iterations: n });
        }
    }
    Err(Error::NonConvergence { solver: "best-response dynamics", iterations: max_iter })
}

/// True when neither player can move its power by more than `tol` by responding.
pub fn is_nash(spec: &GameSpec, profile: PowerProfile, tol: f64) -> Result<bool> {
    let bs = br_sources(spec, profile.p_r)?;
    let br = br_relay(spec, profile.p_s)?;
    Ok((bs - profile.p_s).abs() <= tol && (br - profile.p_r).abs() <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gee::Gee2Params;

    fn fig_cost() -> PowerCost {
        PowerCost::new(3.0, 1.0, 1.0, 0.75, 0.25).unwrap()
    }

    fn spec(scheme: SchemeId, p_c_s: f64, p_max: f64) -> GameSpec {
        let cost = PowerCost::new(3.0, 1.0, 1.0, p_c_s, 0.25).unwrap();
        GameSpec::new(scheme, 1.0, 1.0, cost, PowerLimits::new(p_max, p_max).unwrap()).unwrap()
    }

    #[test]
    fn df_source_stationary_power() {
        let s = spec(SchemeId::DF, 1.0, 1e6);
        let p = br_sources(&s, 1e6).unwrap();
        let h = |p: f64| (1.0 + 3.0 * p) * (3.0 * p).ln_1p() / 3.0 - p - 1.0;
        assert!(h(p).abs() < 1e-12);
        assert!((p - 1.1058).abs() < 1e-3, "{p}");
        // Dense scan of the source utility.
        let model = s.model;
        let u = |x: f64| model.rate(x, 1e6) / (x + 1.0);
        let mut best = (0.0, 0.0);
        for i in 0..=300_000 {
            let x = i as f64 * 1e-5;
            if u(x) > best.1 {
                best = (x, u(x));
            }
        }
        assert!((best.0 - p).abs() < 2e-5);
    }

    #[test]
    fn zero_opponent_gives_zero() {
        for scheme in SchemeId::ALL {
            let s = spec(scheme, 0.75, 10.0);
            assert_eq!(br_sources(&s, 0.0).unwrap(), 0.0);
            assert_eq!(br_relay(&s, 0.0).unwrap(), 0.0);
            assert!(is_nash(&s, PowerProfile::default(), 0.0).unwrap());
        }
    }

    #[test]
    fn min_form_roles_are_symmetric() {
        // Swapping (a1, alpha1) with (a2, alpha2) and the cost split swaps the responses.
        let params = crate::gee::Gee1Params::new(1.5, 1.0, 1.0, 3.0).unwrap();
        let swapped = crate::gee::Gee1Params::new(1.0, 3.0, 1.5, 1.0).unwrap();
        let limits = PowerLimits::new(10.0, 10.0).unwrap();
        let cost = PowerCost::new(3.0, 1.0, 1.0, 0.6, 0.3).unwrap();
        let cost_sw = PowerCost::new(3.0, 1.0, 1.0, 0.3, 0.6).unwrap();
        let a =
            GameSpec { scheme: SchemeId::DF, model: RateModel::MinForm { params, n_s: 1.0, n_r: 1.0 }, cost, limits };
        let b = GameSpec {
            scheme: SchemeId::DF,
            model: RateModel::MinForm { params: swapped, n_s: 1.0, n_r: 1.0 },
            cost: cost_sw,
            limits,
        };
        for x in [0.1, 0.5, 2.0, 7.0] {
            assert!((br_sources(&a, x).unwrap() - br_relay(&b, x).unwrap()).abs() < 1e-12);
            assert!((br_relay(&a, x).unwrap() - br_sources(&b, x).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn compound_relay_response_matches_scan() {
        let s = spec(SchemeId::NNC, 0.75, 10.0);
        let p = br_relay(&s, 10.0).unwrap();
        let u = |x: f64| s.model.rate(10.0, x) / (x + 0.25);
        let mut best = (0.0, f64::MIN);
        for i in 0..=10_000 {
            let x = i as f64 * 1e-3;
            if u(x) > best.1 {
                best = (x, u(x));
            }
        }
        let (mut lo, mut hi) = (best.0 - 1e-3, best.0 + 1e-3);
        for _ in 0..4 {
            let step = (hi - lo) / 1000.0;
            let mut b = (lo, u(lo));
            for i in 0..=1000 {
                let x = lo + i as f64 * step;
                if u(x) > b.1 {
                    b = (x, u(x));
                }
            }
            lo = b.0 - step;
            hi = b.0 + step;
        }
        assert!((p - 0.5 * (lo + hi)).abs() < 1e-6, "{p} vs {}", 0.5 * (lo + hi));
    }

    #[test]
    fn responses_increase_with_opponent() {
        for scheme in SchemeId::ALL {
            let s = spec(scheme, 0.75, 10.0);
            let mut prev = (0.0, 0.0);
            for i in 0..=200 {
                let x = i as f64 * 0.05;
                let (bs, br) = (br_sources(&s, x).unwrap(), br_relay(&s, x).unwrap());
                assert!(bs >= prev.0 - 1e-12 && br >= prev.1 - 1e-12, "{scheme} at {x}");
                prev = (bs, br);
            }
        }
    }

    #[test]
    fn zero_start_stays_at_trivial_equilibrium() {
        for scheme in SchemeId::ALL {
            let s = spec(scheme, 0.75, 10.0);
            for start in [BrdStart::Relay(0.0), BrdStart::Sources(0.0)] {
                let t = brd(&s, start, 1e-9, 1000).unwrap();
                assert_eq!(t.profile(), PowerProfile::default());
            }
        }
    }

    #[test]
    fn brd_reaches_monotone_equilibrium() {
        for scheme in [SchemeId::DF, SchemeId::NNC, SchemeId::AfSnd, SchemeId::AfIan] {
            let s = GameSpec::new(scheme, 1.0, 1.0, fig_cost(), PowerLimits::new(10.0, 10.0).unwrap()).unwrap();
            for start in [BrdStart::Relay(10.0), BrdStart::Sources(0.01), BrdStart::Relay(0.3)] {
                let t = brd(&s, start, 1e-12, 1000).unwrap();
                assert!(t.converged);
                assert!(is_nash(&s, t.profile(), 1e-6).unwrap(), "{scheme} {start:?}");
                let ps: Vec<f64> = t.steps.iter().map(|x| x.p_s).collect();
                let up = ps.windows(2).all(|w| w[1] >= w[0] - 1e-12);
                let down = ps.windows(2).all(|w| w[1] <= w[0] + 1e-12);
                assert!(up || down);
            }
        }
    }

    #[test]
    fn df_equilibrium_depends_on_start() {
        let s = GameSpec::new(SchemeId::DF, 1.0, 1.0, fig_cost(), PowerLimits::new(10.0, 10.0).unwrap()).unwrap();
        let a = brd(&s, BrdStart::Relay(10.0), 1e-12, 1000).unwrap().profile();
        let b = brd(&s, BrdStart::Relay(0.1), 1e-12, 1000).unwrap().profile();
        assert!((a.p_r - b.p_r).abs() > 1e-3);
    }

    #[test]
    fn saturated_full_power_equilibrium() {
        let cost = PowerCost::new(3.0, 1.0, 1.0, 0.75, 0.25).unwrap();
        let s = GameSpec::new(SchemeId::NNC, 1.0, 1.0, cost, PowerLimits::new(0.1, 0.1).unwrap()).unwrap();
        assert!(is_nash(&s, PowerProfile::new(0.1, 0.1), 1e-12).unwrap());
        assert!(!is_nash(&s, PowerProfile::new(0.05, 0.1), 1e-6).unwrap());
    }

    #[test]
    fn stationarity_residual_monotone() {
        for d_scheme in [SchemeId::NNC, SchemeId::AfSnd, SchemeId::AfIan] {
            let p = Gee2Params::for_scheme(d_scheme, 1.0, 1.0).unwrap();
            for i in 1..100 {
                let x = i as f64 * 0.1;
                for y in [0.1, 1.0, 5.0] {
                    let g = source_stationarity_residual(&p, x, y, 0.0);
                    assert!(source_stationarity_residual(&p, x + 0.01, y, 0.0) >= g);
                    assert!(source_stationarity_residual(&p, x, y + 0.01, 0.0) <= g + 1e-12);
                }
            }
        }
    }
}
