//! Brute-force references for the closed forms and the solvers.
//!
//! - [`lp_max_sum_rate`]: exact maximum of `R1 + R2 + R3` over a polytope given by
//!   `{0,1}`-coefficient constraints, by enumerating every vertex.
//! - [`grid_search_gee`]: GEE maximum over a uniform power grid.
//! - [`nnc_q0_sweep`]: NNC sum rate maximized over the compression noise.

use rayon::prelude::*;

use crate::channel::{capacity, PowerLimits, SymmetricChannel};
use crate::error::{Error, Result};
use crate::gee::{gee_value, PowerCost, PowerProfile, RateModel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constraint {
    pub coef: [f64; 3],
    pub rhs: f64,
}

/// Polytope `{R >= 0 : coef . R <= rhs for every constraint}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RateRegion {
    pub constraints: Vec<Constraint>,
}

impl RateRegion {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `sum_{i in users} R_i <= rhs`; negative bounds are clamped to zero.
    pub fn bound(&mut self, users: &[usize], rhs: f64) -> &mut Self {
        let mut coef = [0.0; 3];
        for &u in users {
            coef[u] = 1.0;
        }
        self.constraints.push(Constraint { coef, rhs: rhs.max(0.0) });
        self
    }

    pub fn validate(&self) -> Result<()> {
        for c in &self.constraints {
            if !c.coef.iter().all(|&a| a == 0.0 || a == 1.0) || !(c.rhs >= 0.0 && c.rhs.is_finite()) {
                return Err(Error::InvalidParameter(format!("bad constraint {c:?}")));
            }
        }
        if (0..3).any(|i| !self.constraints.iter().any(|c| c.coef[i] > 0.0)) {
            return Err(Error::UnboundedRegion);
        }
        Ok(())
    }

    pub fn contains(&self, r: &[f64; 3], tol: f64) -> bool {
        r.iter().all(|&x| x >= -tol) && self.constraints.iter().all(|c| dot(&c.coef, r) <= c.rhs + tol * c.rhs.max(1.0))
    }
}

const PAIRS: [[usize; 2]; 3] = [[0, 1], [1, 2], [0, 2]];

/// Cut-set bound: each pair is limited by the broadcast, each user by its uplink.
pub fn outer_bound_region(ch: &SymmetricChannel) -> RateRegion {
    let mut r = RateRegion::new();
    for p in PAIRS {
        r.bound(&p, capacity(ch.p_r / ch.n_s));
    }
    for k in 0..3 {
        r.bound(&[k], capacity(ch.p_s / ch.n_r));
    }
    r
}

/// Multiple-access region at the relay intersected with the broadcast pair bounds.
pub fn df_region(ch: &SymmetricChannel) -> RateRegion {
    let mut r = RateRegion::new();
    for k in 0..3 {
        r.bound(&[k], capacity(ch.p_s / ch.n_r));
    }
    for p in PAIRS {
        r.bound(&p, capacity(2.0 * ch.p_s / ch.n_r));
        r.bound(&p, capacity(ch.p_r / ch.n_s));
    }
    r.bound(&[0, 1, 2], capacity(3.0 * ch.p_s / ch.n_r));
    r
}

/// User not interested in the message of user `k` (0-based, clockwise exchange).
pub fn uninterested(k: usize) -> usize {
    (k + 2) % 3
}

/// AF with simultaneous non-unique decoding: bounds on `{k}` and `{k, l(k)}`.
pub fn af_snd_region(ch: &SymmetricChannel) -> RateRegion {
    let noise = ch.n_r * ch.p_r + ch.n_s * (ch.n_r + 3.0 * ch.p_s);
    let mut r = RateRegion::new();
    for k in 0..3 {
        r.bound(&[k], capacity(ch.p_r * ch.p_s / noise));
        r.bound(&[k, uninterested(k)], capacity(2.0 * ch.p_r * ch.p_s / noise));
    }
    r
}

/// NNC region for compression noise `q0`.
pub fn nnc_region(ch: &SymmetricChannel, q0: f64) -> RateRegion {
    let mut r = RateRegion::new();
    let pair = capacity(2.0 * ch.p_s / (ch.n_r + q0)).min(capacity(ch.p_r / ch.n_s) - capacity(ch.n_r / q0));
    for k in 0..3 {
        r.bound(&[k], capacity(ch.p_s / (ch.n_r + q0)));
    }
    for p in PAIRS {
        r.bound(&p, pair);
    }
    r
}

/// Maximum of `R1 + R2 + R3` over the region by vertex enumeration.
pub fn lp_max_sum_rate(region: &RateRegion) -> Result<f64> {
    region.validate()?;
    let mut planes: Vec<Constraint> = region.constraints.clone();
    for i in 0..3 {
        let mut coef = [0.0; 3];
        coef[i] = 1.0;
        planes.push(Constraint { coef, rhs: 0.0 });
    }
    let mut best: Option<f64> = None;
    let n = planes.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let Some(v) = solve3(&planes[a], &planes[b], &planes[c]) else { continue };
                if region.contains(&v, 1e-12) {
                    let s = v.iter().sum::<f64>();
                    best = Some(best.map_or(s, |x: f64| x.max(s)));
                }
            }
        }
    }
    best.ok_or(Error::DegenerateRegion)
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Intersection of three planes, or `None` if they are not independent.
fn solve3(p: &Constraint, q: &Constraint, r: &Constraint) -> Option<[f64; 3]> {
    let det3 = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let m = [p.coef, q.coef, r.coef];
    let det = det3(m);
    if det.abs() < 1e-12 {
        return None;
    }
    let rhs = [p.rhs, q.rhs, r.rhs];
    let mut x = [0.0; 3];
    for (j, xj) in x.iter_mut().enumerate() {
        let mut mj = m;
        for i in 0..3 {
            mj[i][j] = rhs[i];
        }
        *xj = det3(mj) / det;
    }
    Some(x)
}

/// Best GEE over a `grid_n x grid_n` uniform grid on the power box, corners included.
pub fn grid_search_gee(
    model: &RateModel,
    cost: &PowerCost,
    limits: &PowerLimits,
    grid_n: usize,
) -> Result<(PowerProfile, f64)> {
    if grid_n < 2 {
        return Err(Error::InvalidParameter(format!("grid_n = {grid_n} must be at least 2")));
    }
    let step_s = limits.p_s_max / (grid_n - 1) as f64;
    let step_r = limits.p_r_max / (grid_n - 1) as f64;
    let best = (0..grid_n)
        .into_par_iter()
        .map(|i| {
            let p_s = if i == grid_n - 1 { limits.p_s_max } else { i as f64 * step_s };
            let mut row_best = (PowerProfile::new(p_s, 0.0), f64::NEG_INFINITY);
            for j in 0..grid_n {
                let p_r = if j == grid_n - 1 { limits.p_r_max } else { j as f64 * step_r };
                let profile = PowerProfile::new(p_s, p_r);
                let v = gee_value(model, profile, cost);
                if v > row_best.1 {
                    row_best = (profile, v);
                }
            }
            row_best
        })
        .reduce(
            || (PowerProfile::default(), f64::NEG_INFINITY),
            |a, b| if b.1 > a.1 || (b.1 == a.1 && (b.0.p_s, b.0.p_r) < (a.0.p_s, a.0.p_r)) { b } else { a },
        );
    Ok(best)
}

/// `n` points spaced evenly in log scale on `[lo, hi]`; the endpoints are exact.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    let last = n.saturating_sub(1);
    (0..n)
        .map(|i| match i {
            0 => lo,
            i if i == last => hi,
            i => (a + (b - a) * i as f64 / last as f64).exp(),
        })
        .collect()
}

/// Compression noise from `q0_grid` that maximizes the NNC region's sum rate.
pub fn nnc_q0_sweep(ch: &SymmetricChannel, q0_grid: &[f64]) -> Result<(f64, f64)> {
    let mut best: Option<(f64, f64)> = None;
    for &q0 in q0_grid {
        if !(q0 > 0.0 && q0.is_finite()) {
            return Err(Error::InvalidParameter(format!("q0 = {q0} must be > 0")));
        }
        let rate = lp_max_sum_rate(&nnc_region(ch, q0))?;
        if best.is_none_or(|(_, r)| rate > r) {
            best = Some((q0, rate));
        }
    }
    best.ok_or_else(|| Error::InvalidParameter("empty q0 grid".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::SchemeId;
    use crate::rates;

    const TEN: SymmetricChannel = SymmetricChannel { p_s: 10.0, p_r: 10.0, n_s: 1.0, n_r: 1.0 };

    #[test]
    fn pair_bounds_give_one_and_a_half() {
        let mut r = RateRegion::new();
        for p in PAIRS {
            r.bound(&p, 2.0);
        }
        assert!((lp_max_sum_rate(&r).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn box_region() {
        let mut r = RateRegion::new();
        for k in 0..3 {
            r.bound(&[k], 0.7);
        }
        assert!((lp_max_sum_rate(&r).unwrap() - 2.1).abs() < 1e-12);
    }

    #[test]
    fn unbounded_region_rejected() {
        let mut r = RateRegion::new();
        r.bound(&[0, 1], 1.0);
        assert!(matches!(lp_max_sum_rate(&r), Err(Error::UnboundedRegion)));
    }

    #[test]
    fn regions_match_closed_forms_at_reference_point() {
        assert!((lp_max_sum_rate(&af_snd_region(&TEN)).unwrap() - 3.833006).abs() < 1e-6);
        assert!((lp_max_sum_rate(&outer_bound_region(&TEN)).unwrap() - rates::outer_bound(&TEN).value).abs() < 1e-12);
        assert!((lp_max_sum_rate(&df_region(&TEN)).unwrap() - rates::df_rate(&TEN).value).abs() < 1e-12);
        let q0 = rates::nnc_q0_opt(&TEN).unwrap();
        assert!((lp_max_sum_rate(&nnc_region(&TEN, q0)).unwrap() - rates::nnc_rate(&TEN).value).abs() < 1e-12);
    }

    #[test]
    fn q0_sweep_finds_optimum() {
        let grid = log_grid(0.21, 21.0, 2001);
        let (q0, rate) = nnc_q0_sweep(&TEN, &grid).unwrap();
        assert!((q0 - 2.1).abs() < 0.01, "{q0}");
        assert!((rate - 4.346329).abs() < 1e-4);
    }

    #[test]
    fn q0_extremes_kill_the_rate() {
        let big = lp_max_sum_rate(&nnc_region(&TEN, 1e12)).unwrap();
        assert!(big < 1e-9);
        let tiny = lp_max_sum_rate(&nnc_region(&TEN, 1e-12)).unwrap();
        assert_eq!(tiny, 0.0);
    }

    #[test]
    fn grid_corners() {
        let model = RateModel::for_scheme(SchemeId::DF, 1.0, 1.0).unwrap();
        let cost = PowerCost::new(3.0, 1.0, 1.0, 0.5, 0.5).unwrap();
        let limits = PowerLimits::new(10.0, 10.0).unwrap();
        let (p, v) = grid_search_gee(&model, &cost, &limits, 2).unwrap();
        assert_eq!(p, PowerProfile::new(10.0, 10.0));
        assert!((v - rates::df_rate(&TEN).value / 41.0).abs() < 1e-15);
        assert!(grid_search_gee(&model, &cost, &limits, 1).is_err());
    }

    #[test]
    fn grid_reference_instance() {
        let model = RateModel::for_scheme(SchemeId::DF, 1.0, 1.0).unwrap();
        let cost = PowerCost::new(3.0, 1.0, 1.0, 0.75, 0.25).unwrap();
        let limits = PowerLimits::new(10.0, 10.0).unwrap();
        let (_, v) = grid_search_gee(&model, &cost, &limits, 1001).unwrap();
        assert!(v <= 0.3956684 && v > 0.3950);
    }
}
