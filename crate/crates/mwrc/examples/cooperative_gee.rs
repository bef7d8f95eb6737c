//! Cooperative energy-efficiency optimum of every scheme at one power limit:
//! the exact min-form solver for DF, alternating maximization and the
//! polyblock global solver for the others.

use mwrc::gee::RateModel;
use mwrc::sweep::{cooperative, Solver};
use mwrc::{PowerCost, PowerLimits, SchemeId};

fn main() -> mwrc::Result<()> {
    let cost = PowerCost::equal_share(3.0, 1.0, 1.0)?;
    let limits = PowerLimits::new(10.0, 10.0)?;
    for s in SchemeId::ALL {
        for (solver, r) in cooperative(s, 1.0, &cost, &limits, Solver::Both)? {
            let rate = RateModel::for_scheme(s, 1.0, 1.0)?.rate(r.profile.p_s, r.profile.p_r);
            println!(
                "{s:>12} {solver:>11}: GEE {:.7} bit/s/Hz/W at p_s = {:.5}, p_r = {:.5} (rate {rate:.5}, {} iterations)",
                r.gee, r.profile.p_s, r.profile.p_r, r.iterations
            );
        }
    }
    Ok(())
}
