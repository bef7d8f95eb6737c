//! Global GEE maximization for the compound-rate family by monotonic optimization.
//!
//! For a fixed Dinkelbach parameter `lambda`, the subproblem
//! `max alpha C(gamma(p_s, p_r)) - lambda (phi p_s + psi p_r + p_c)` is rewritten
//! with an auxiliary variable `t` as the maximization of the increasing function
//! `alpha C(gamma(p_s, p_r)) + t` subject to the increasing constraint
//! `t + lambda (phi p_s + psi p_r) <= lambda (phi p_s_max + psi p_r_max)` on a
//! box. The polyblock algorithm solves that canonical problem globally.

use crate::channel::PowerLimits;
use crate::error::{Error, Result};
use crate::fractional::{dinkelbach, DinkelbachOptions, SolveReport};
use crate::gee::{gee_value, Gee2Params, PowerCost, PowerProfile, RateModel};

pub type Point3 = [f64; 3];

/// Axis-aligned box `[lower, upper]` in three dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Box3 {
    pub lower: Point3,
    pub upper: Point3,
}

impl Box3 {
    pub fn new(lower: Point3, upper: Point3) -> Result<Self> {
        for k in 0..3 {
            if !(0.0 <= lower[k] && lower[k] <= upper[k] && upper[k].is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "box needs 0 <= lower <= upper, got {lower:?} / {upper:?}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn contains(&self, x: &Point3) -> bool {
        (0..3).all(|k| self.lower[k] <= x[k] && x[k] <= self.upper[k])
    }
}

/// Maximize an increasing `objective` over `{x in [0, upper] : constraint(x) <= rhs}`
/// with `constraint` increasing and `constraint(0) <= rhs`.
pub trait MonotoneProblem {
    fn upper(&self) -> Point3;
    fn objective(&self, x: &Point3) -> f64;
    fn constraint(&self, x: &Point3) -> f64;
    fn rhs(&self) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyblockOptions {
    /// Absolute optimality gap on the objective.
    pub eps: f64,
    /// Also stop once `gap <= rel_gap * (best - floor)`; zero disables.
    pub rel_gap: f64,
    pub floor: f64,
    pub vertex_budget: usize,
    /// Accuracy of `constraint` at projected points.
    pub projection_tol: f64,
    /// Shrink every new vertex to the smallest box that can still hold an
    /// improving feasible point.
    pub reduce: bool,
}

impl Default for PolyblockOptions {
    fn default() -> Self {
        Self { eps: 1e-6, rel_gap: 0.0, floor: 0.0, vertex_budget: 100_000, projection_tol: 1e-10, reduce: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyblockOutcome {
    pub point: Point3,
    pub value: f64,
    /// Upper bound on the optimum when the run stopped.
    pub upper_bound: f64,
    pub iterations: usize,
    pub peak_vertices: usize,
    /// Best-value and upper-bound history, one entry per iteration.
    pub lower_history: Vec<f64>,
    pub upper_history: Vec<f64>,
}

/// Outer approximation of the feasible set by a union of boxes anchored at the origin.
#[derive(Debug, Clone)]
pub struct Polyblock {
    /// Proper vertices with their objective upper bounds.
    pub vertices: Vec<(Point3, f64)>,
    pub best_point: Point3,
    pub best_value: f64,
}

impl Polyblock {
    fn new<P: MonotoneProblem>(problem: &P) -> Self {
        let top = problem.upper();
        let origin = [0.0; 3];
        Self {
            vertices: vec![(top, problem.objective(&top))],
            best_point: origin,
            best_value: problem.objective(&origin),
        }
    }

    /// Vertex with the largest bound; ties go to the lexicographically largest.
    fn select(&self) -> Option<usize> {
        (0..self.vertices.len()).max_by(|&i, &j| {
            let (vi, ui) = &self.vertices[i];
            let (vj, uj) = &self.vertices[j];
            ui.total_cmp(uj).then_with(|| lexicographic_cmp(vi, vj))
        })
    }
}

/// Point on the segment `0 -> z` where `constraint` reaches `rhs`, from the feasible side.
pub fn project<P: MonotoneProblem>(problem: &P, z: &Point3, tol: f64) -> Point3 {
    let rhs = problem.rhs();
    let at = |s: f64| [s * z[0], s * z[1], s * z[2]];
    if problem.constraint(z) <= rhs {
        return *z;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if problem.constraint(&at(mid)) <= rhs {
            lo = mid;
        } else {
            hi = mid;
        }
        if problem.constraint(&at(hi)) - problem.constraint(&at(lo)) <= tol || hi - lo <= f64::EPSILON {
            break;
        }
    }
    at(lo)
}

/// Polyblock outer approximation.
pub fn polyblock_maximize<P: MonotoneProblem>(problem: &P, opts: PolyblockOptions) -> Result<PolyblockOutcome> {
    let rhs = problem.rhs();
    let mut pb = Polyblock::new(problem);
    let mut lower_history = Vec::new();
    let mut upper_history = Vec::new();
    let mut peak = 1;
    let mut iterations = 0;
    let mut upper_bound = f64::INFINITY;
    while let Some(k) = pb.select() {
        iterations += 1;
        let (z, ub) = pb.vertices[k];
        upper_bound = upper_bound.min(ub);
        let gap = ub - pb.best_value;
        lower_history.push(pb.best_value);
        upper_history.push(upper_bound);
        if gap <= opts.eps || gap <= opts.rel_gap * (pb.best_value - opts.floor) {
            break;
        }

        let pi = project(problem, &z, opts.projection_tol);
        let f_pi = problem.objective(&pi);
        if f_pi > pb.best_value {
            pb.best_value = f_pi;
            pb.best_point = pi;
        }
        if problem.constraint(&z) <= rhs {
            pb.vertices.swap_remove(k);
            continue;
        }

        // Directions in which the projection actually moved.
        let moved: Vec<usize> = (0..3).filter(|&j| pi[j] < z[j]).collect();
        let cut = |v: &Point3| (0..3).all(|j| if moved.contains(&j) { v[j] > pi[j] } else { v[j] >= pi[j] });
        let (cut_set, kept): (Vec<_>, Vec<_>) = pb.vertices.drain(..).partition(|(v, _)| cut(v));
        pb.vertices = kept;

        let level = pb.best_value + opts.eps;
        let mut fresh: Vec<(Point3, f64)> = Vec::new();
        for (vi, (v, _)) in cut_set.iter().enumerate() {
            for &i in &moved {
                let improper = cut_set
                    .iter()
                    .enumerate()
                    .any(|(yi, (y, _))| yi != vi && (y != v || yi < vi) && (0..3).all(|m| m == i || y[m] >= v[m]));
                if improper {
                    continue;
                }
                let mut child = *v;
                child[i] = pi[i];
                let child = if opts.reduce {
                    reduce(problem, child, level).map(|(lo, up)| {
                        let cand = segment_boundary(problem, &lo, &up);
                        let f_cand = problem.objective(&cand);
                        if f_cand > pb.best_value {
                            pb.best_value = f_cand;
                            pb.best_point = cand;
                        }
                        up
                    })
                } else {
                    Some(child)
                };
                if let Some(child) = child {
                    let bound = problem.objective(&child);
                    if bound > level {
                        fresh.push((child, bound));
                    }
                }
            }
        }
        if opts.reduce {
            remove_dominated(&mut fresh);
        }
        pb.vertices.extend(fresh);
        let level = pb.best_value + opts.eps;
        pb.vertices.retain(|(_, u)| *u > level);
        peak = peak.max(pb.vertices.len());
        if pb.vertices.len() > opts.vertex_budget {
            return Err(Error::NonConvergence { solver: "polyblock", iterations });
        }
    }
    if pb.vertices.is_empty() {
        upper_bound = upper_bound.min(pb.best_value + opts.eps);
    }
    Ok(PolyblockOutcome {
        point: pb.best_point,
        value: pb.best_value,
        upper_bound,
        iterations,
        peak_vertices: peak,
        lower_history,
        upper_history,
    })
}

/// Shrinks vertex `z` to the upper corner of the smallest box inside `[0, z]`
/// that holds every feasible point with objective at least `level`.
fn reduce<P: MonotoneProblem>(problem: &P, z: Point3, level: f64) -> Option<(Point3, Point3)> {
    if problem.objective(&z) < level {
        return None;
    }
    let mut lo = [0.0; 3];
    for i in 0..3 {
        let mut w = z;
        w[i] = 0.0;
        if problem.objective(&w) >= level {
            continue;
        }
        let (mut a, mut b) = (0.0, z[i]);
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            w[i] = m;
            if problem.objective(&w) >= level {
                b = m;
            } else {
                a = m;
            }
        }
        lo[i] = a;
    }
    let rhs = problem.rhs();
    if problem.constraint(&lo) > rhs {
        return None;
    }
    let mut up = z;
    for i in 0..3 {
        let mut w = lo;
        w[i] = z[i];
        if problem.constraint(&w) <= rhs {
            continue;
        }
        let (mut a, mut b) = (lo[i], z[i]);
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            w[i] = m;
            if problem.constraint(&w) <= rhs {
                a = m;
            } else {
                b = m;
            }
        }
        up[i] = b;
    }
    Some((lo, up))
}

/// Feasible point where the segment `lo -> up` leaves the feasible set, or `up`
/// itself when it is feasible.
fn segment_boundary<P: MonotoneProblem>(problem: &P, lo: &Point3, up: &Point3) -> Point3 {
    let rhs = problem.rhs();
    if problem.constraint(up) <= rhs {
        return *up;
    }
    let at = |s: f64| [lo[0] + s * (up[0] - lo[0]), lo[1] + s * (up[1] - lo[1]), lo[2] + s * (up[2] - lo[2])];
    let (mut a, mut b) = (0.0, 1.0);
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        if problem.constraint(&at(m)) <= rhs {
            a = m;
        } else {
            b = m;
        }
    }
    at(a)
}

fn lexicographic_cmp(a: &Point3, b: &Point3) -> std::cmp::Ordering {
    a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
}

fn remove_dominated(vertices: &mut Vec<(Point3, f64)>) {
    let n = vertices.len();
    let mut keep = vec![true; n];
    for a in 0..n {
        for b in 0..n {
            if a == b || !keep[b] {
                continue;
            }
            let (va, vb) = (&vertices[a].0, &vertices[b].0);
            if (0..3).all(|k| vb[k] >= va[k]) && (va != vb || b < a) {
                keep[a] = false;
                break;
            }
        }
    }
    let mut idx = 0;
    vertices.retain(|_| {
        idx += 1;
        keep[idx - 1]
    });
}

/// Canonical monotonic form of the GEE subproblem for fixed `lambda`.
#[derive(Debug, Clone, Copy)]
pub struct CanonicalSubproblem {
    pub params: Gee2Params,
    pub cost: PowerCost,
    pub limits: PowerLimits,
    pub lambda: f64,
}

impl CanonicalSubproblem {
    /// Constant that separates the canonical optimum from the subproblem value.
    pub fn offset(&self) -> f64 {
        self.rhs() + self.lambda * self.cost.p_c
    }

    pub fn domain(&self) -> Box3 {
        Box3 { lower: [0.0; 3], upper: self.upper() }
    }

    /// `alpha C(gamma) - lambda (phi p_s + psi p_r + p_c)`.
    pub fn subproblem_value(&self, p_s: f64, p_r: f64) -> f64 {
        self.params.rate(p_s, p_r) - self.lambda * self.cost.consumed(PowerProfile::new(p_s, p_r))
    }
}

impl MonotoneProblem for CanonicalSubproblem {
    fn upper(&self) -> Point3 {
        [self.limits.p_s_max, self.limits.p_r_max, self.rhs()]
    }

    fn objective(&self, x: &Point3) -> f64 {
        self.params.rate(x[0], x[1]) + x[2]
    }

    fn constraint(&self, x: &Point3) -> f64 {
        x[2] + self.lambda * (self.cost.phi * x[0] + self.cost.psi * x[1])
    }

    fn rhs(&self) -> f64 {
        self.lambda * (self.cost.phi * self.limits.p_s_max + self.cost.psi * self.limits.p_r_max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalOptions {
    /// Dinkelbach stopping tolerance on `F(lambda)`.
    pub eps: f64,
    /// Polyblock gap relative to the full-power sum rate.
    pub eps_mono_rel: f64,
    /// Early Dinkelbach iterations stop the polyblock once the gap is within
    /// this fraction of the current subproblem value.
    pub early_rel_gap: f64,
    pub vertex_budget: usize,
    /// Finish each subproblem with coordinate ascent from the polyblock point.
    pub polish: bool,
}

impl Default for GlobalOptions {
    fn default() -> Self {
        Self { eps: 1e-9, eps_mono_rel: 1e-3, early_rel_gap: 0.5, vertex_budget: 100_000, polish: true }
    }
}

/// Result of one global subproblem solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SubproblemSolution {
    pub profile: PowerProfile,
    /// `alpha C(gamma) - lambda (phi p_s + psi p_r + p_c)` at `profile`.
    pub value: f64,
    /// Certified upper bound on the subproblem optimum.
    pub upper_bound: f64,
    pub polyblock_iterations: usize,
}

/// Globally solves `max alpha C(gamma) - lambda (phi p_s + psi p_r + p_c)` on the
/// power box to within `eps_mono`.
pub fn inner_subproblem_global(
    params: &Gee2Params,
    cost: &PowerCost,
    limits: &PowerLimits,
    lambda: f64,
    eps_mono: f64,
) -> Result<SubproblemSolution> {
    solve_subproblem(params, cost, limits, lambda, eps_mono, 0.0, 100_000, true)
}

#[allow(clippy::too_many_arguments)]
fn solve_subproblem(
    params: &Gee2Params,
    cost: &PowerCost,
    limits: &PowerLimits,
    lambda: f64,
    eps_mono: f64,
    rel_gap: f64,
    vertex_budget: usize,
    polish: bool,
) -> Result<SubproblemSolution> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda = {lambda} must be finite and >= 0")));
    }
    let problem = CanonicalSubproblem { params: *params, cost: *cost, limits: *limits, lambda };
    let offset = problem.offset();
    let opts = PolyblockOptions { eps: eps_mono, rel_gap, floor: offset, vertex_budget, ..Default::default() };
    let out = polyblock_maximize(&problem, opts)?;
    let mut profile = PowerProfile::new(out.point[0], out.point[1]);
    let mut value = problem.subproblem_value(profile.p_s, profile.p_r);
    if polish {
        let (p, v) = coordinate_ascent(&problem, profile);
        if v > value {
            profile = p;
            value = v;
        }
    }
    Ok(SubproblemSolution {
        profile,
        value,
        upper_bound: (out.upper_bound - offset).max(value),
        polyblock_iterations: out.iterations,
    })
}

/// Local refinement of the subproblem by exact coordinate maximization; the
/// objective is concave in each power separately.
fn coordinate_ascent(problem: &CanonicalSubproblem, start: PowerProfile) -> (PowerProfile, f64) {
    let p = &problem.params;
    let (lambda, cost, limits) = (problem.lambda, &problem.cost, &problem.limits);
    let ln2 = std::f64::consts::LN_2;
    let mut cur = start;
    let mut value = problem.subproblem_value(cur.p_s, cur.p_r);
    for _ in 0..200 {
        let slope_s =
            |x: f64| p.alpha / (ln2 * (1.0 + p.gamma(x, cur.p_r))) * p.dgamma_dps(x, cur.p_r) - lambda * cost.phi;
        let p_s = concave_argmax(slope_s, limits.p_s_max);
        let slope_r = |x: f64| p.alpha / (ln2 * (1.0 + p.gamma(p_s, x))) * p.dgamma_dpr(p_s, x) - lambda * cost.psi;
        let p_r = concave_argmax(slope_r, limits.p_r_max);
        let next = problem.subproblem_value(p_s, p_r);
        if next <= value {
            break;
        }
        let step = (p_s - cur.p_s).abs() + (p_r - cur.p_r).abs();
        cur = PowerProfile::new(p_s, p_r);
        value = next;
        if step <= 1e-15 * (limits.p_s_max + limits.p_r_max) {
            break;
        }
    }
    (cur, value)
}

/// Maximizer on `[0, hi]` of a concave function given its decreasing derivative.
fn concave_argmax<D: Fn(f64) -> f64>(slope: D, hi: f64) -> f64 {
    if slope(hi) >= 0.0 {
        return hi;
    }
    if slope(0.0) <= 0.0 {
        return 0.0;
    }
    let (mut a, mut b) = (0.0, hi);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if slope(m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Global GEE maximization: Dinkelbach outer loop with polyblock subproblems.
pub fn gee2_global(
    params: &Gee2Params,
    cost: &PowerCost,
    limits: &PowerLimits,
    opts: GlobalOptions,
) -> Result<SolveReport> {
    let model = RateModel::Compound(*params);
    let scale = params.rate(limits.p_s_max, limits.p_r_max);
    let eps_mono = (opts.eps_mono_rel * scale).max(f64::MIN_POSITIVE);
    let mut subproblem_iterations = 0;
    let res = dinkelbach(
        |x: &PowerProfile| model.rate(x.p_s, x.p_r),
        |x: &PowerProfile| cost.consumed(*x),
        |lambda| {
            let sol = solve_subproblem(
                params,
                cost,
                limits,
                lambda,
                eps_mono,
                opts.early_rel_gap,
                opts.vertex_budget,
                opts.polish,
            )?;
            subproblem_iterations += sol.polyblock_iterations;
            Ok(sol.profile)
        },
        DinkelbachOptions { eps: opts.eps, ..Default::default() },
    )?;
    let gee = gee_value(&model, res.x_star, cost);
    Ok(SolveReport {
        profile: res.x_star,
        gee,
        trajectory: res.lambdas[1..].iter().copied().chain([res.lambda_star]).collect(),
        iterations: res.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::SchemeId;

    fn nnc_setting() -> (Gee2Params, PowerCost, PowerLimits) {
        (
            Gee2Params::for_scheme(SchemeId::NNC, 1.0, 1.0).unwrap(),
            PowerCost::new(3.0, 1.0, 1.0, 0.75, 0.25).unwrap(),
            PowerLimits::new(10.0, 10.0).unwrap(),
        )
    }

    #[test]
    fn zero_lambda_gives_full_power() {
        let (p, c, l) = nnc_setting();
        let s = inner_subproblem_global(&p, &c, &l, 0.0, 1e-6).unwrap();
        assert_eq!(s.profile, PowerProfile::new(10.0, 10.0));
        assert!((s.value - p.rate(10.0, 10.0)).abs() < 1e-12);
    }

    #[test]
    fn huge_lambda_gives_silence() {
        let (p, c, l) = nnc_setting();
        let lambda = 1e3;
        let s = inner_subproblem_global(&p, &c, &l, lambda, 1e-3).unwrap();
        assert!(s.profile.p_s < 1e-6 && s.profile.p_r < 1e-6, "{:?}", s.profile);
        assert!((s.value + lambda * c.p_c).abs() < 1e-3);
    }

    #[test]
    fn projection_lands_on_constraint() {
        let (p, c, l) = nnc_setting();
        let prob = CanonicalSubproblem { params: p, cost: c, limits: l, lambda: 0.3 };
        for z in [[10.0, 10.0, 12.0], [3.0, 9.0, 10.0], [10.0, 0.5, 12.0]] {
            let pi = project(&prob, &z, 1e-10);
            assert!(prob.constraint(&z) > prob.rhs());
            assert!(prob.constraint(&pi) <= prob.rhs());
            assert!(prob.rhs() - prob.constraint(&pi) <= 1e-10);
            let s = pi[0] / z[0];
            assert!((pi[1] - s * z[1]).abs() < 1e-12 && (pi[2] - s * z[2]).abs() < 1e-12);
        }
    }

    #[test]
    fn bounds_are_monotone() {
        let (p, c, l) = nnc_setting();
        let prob = CanonicalSubproblem { params: p, cost: c, limits: l, lambda: 0.2 };
        let out = polyblock_maximize(&prob, PolyblockOptions { eps: 1e-2, ..Default::default() }).unwrap();
        assert!(out.upper_history.windows(2).all(|w| w[1] <= w[0]));
        assert!(out.lower_history.windows(2).all(|w| w[1] >= w[0]));
        assert!(out.upper_bound - out.value <= 1e-2);
        assert!(prob.constraint(&out.point) <= prob.rhs());
        assert!(prob.domain().contains(&out.point));
    }

    #[test]
    fn linear_objective_on_simplex() {
        struct Lin;
        impl MonotoneProblem for Lin {
            fn upper(&self) -> Point3 {
                [1.0, 1.0, 1.0]
            }
            fn objective(&self, x: &Point3) -> f64 {
                x[0] + 2.0 * x[1] + 0.5 * x[2]
            }
            fn constraint(&self, x: &Point3) -> f64 {
                x[0] + x[1] + x[2]
            }
            fn rhs(&self) -> f64 {
                1.5
            }
        }
        let out = polyblock_maximize(&Lin, PolyblockOptions { eps: 1e-4, ..Default::default() }).unwrap();
        // Best: x1 = 1, x0 = 0.5, value 2.5.
        assert!((out.value - 2.5).abs() <= 1e-4, "{}", out.value);
        // Without reduction the face optimum jams the vertices; stay coarse.
        let plain =
            polyblock_maximize(&Lin, PolyblockOptions { eps: 5e-2, reduce: false, ..Default::default() }).unwrap();
        assert!((plain.value - 2.5).abs() <= 5e-2, "{}", plain.value);
        assert!(out.iterations < plain.iterations);
    }

    #[test]
    fn global_nnc_reference_instance() {
        let (p, c, l) = nnc_setting();
        let r = gee2_global(&p, &c, &l, GlobalOptions::default()).unwrap();
        assert!((r.gee - 0.2154283).abs() < 1e-7, "{}", r.gee);
        assert!(r.trajectory.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn global_subproblem_at_optimal_ratio_is_zero() {
        let (p, c, l) = nnc_setting();
        let r = gee2_global(&p, &c, &l, GlobalOptions::default()).unwrap();
        let s = inner_subproblem_global(&p, &c, &l, r.gee, 1e-3).unwrap();
        assert!(s.value.abs() < 1e-9, "{}", s.value);
        assert!(s.upper_bound < 1e-3 * p.rate(10.0, 10.0) + 1e-9);
    }
}
