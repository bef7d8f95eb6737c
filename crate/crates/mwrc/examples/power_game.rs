//! Sources versus relay: best-response dynamics from several starting points,
//! compared with the cooperative optimum.

use mwrc::game::{brd, is_nash, BrdStart, GameSpec};
use mwrc::gee::gee_value;
use mwrc::sweep::{cooperative, Solver};
use mwrc::{PowerCost, PowerLimits, SchemeId};

fn main() -> mwrc::Result<()> {
    let cost = PowerCost::new(3.0, 1.0, 1.0, 0.75, 0.25)?;
    let limits = PowerLimits::new(10.0, 10.0)?;
    for s in SchemeId::ACHIEVABLE {
        let spec = GameSpec::new(s, 1.0, 1.0, cost, limits)?;
        let coop = cooperative(s, 1.0, &cost, &limits, Solver::Alternating)?.remove(0).1.gee;
        println!("{s}: cooperative GEE {coop:.6}");
        for start in [BrdStart::Relay(0.0), BrdStart::Relay(0.1), BrdStart::Relay(10.0), BrdStart::Sources(0.1)] {
            let trace = brd(&spec, start, 1e-9, 1000)?;
            let p = trace.profile();
            println!(
                "  {start:?}: NE ({:.4}, {:.4}) after {} rounds, GEE {:.6}, verified {}",
                p.p_s,
                p.p_r,
                trace.iterations,
                gee_value(&spec.model, p, &cost),
                is_nash(&spec, p, 1e-9)?
            );
        }
    }
    Ok(())
}
