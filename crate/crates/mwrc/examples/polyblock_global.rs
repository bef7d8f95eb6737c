//! The global solver in detail: Dinkelbach ratios, the subproblem bounds at
//! the optimum, and a plain polyblock run on a toy monotone problem.

use mwrc::gee::Gee2Params;
use mwrc::monotonic::{
    gee2_global, inner_subproblem_global, polyblock_maximize, GlobalOptions, MonotoneProblem, Point3, PolyblockOptions,
};
use mwrc::{PowerCost, PowerLimits, SchemeId};

struct Simplex;

impl MonotoneProblem for Simplex {
    fn upper(&self) -> Point3 {
        [1.0, 1.0, 1.0]
    }
    fn objective(&self, x: &Point3) -> f64 {
        x[0].ln_1p() + x[1].ln_1p() + x[2].ln_1p()
    }
    fn constraint(&self, x: &Point3) -> f64 {
        x[0] + x[1] + x[2]
    }
    fn rhs(&self) -> f64 {
        1.0
    }
}

fn main() -> mwrc::Result<()> {
    let params = Gee2Params::for_scheme(SchemeId::NNC, 1.0, 1.0)?;
    let cost = PowerCost::equal_share(3.0, 1.0, 1.0)?;
    let limits = PowerLimits::new(10.0, 10.0)?;
    let r = gee2_global(&params, &cost, &limits, GlobalOptions::default())?;
    println!("NNC global GEE {:.7} at ({:.5}, {:.5})", r.gee, r.profile.p_s, r.profile.p_r);
    println!("Dinkelbach ratios: {:?}", r.trajectory);
    let sub = inner_subproblem_global(&params, &cost, &limits, r.gee, 1e-3)?;
    println!("subproblem at the optimum: value {:.2e}, upper bound {:.2e}", sub.value, sub.upper_bound);

    let out = polyblock_maximize(&Simplex, PolyblockOptions { eps: 1e-3, ..Default::default() })?;
    println!(
        "toy problem: {:.6} at {:?} after {} iterations (bound {:.6}, peak {} vertices)",
        out.value, out.point, out.iterations, out.upper_bound, out.peak_vertices
    );
    Ok(())
}
