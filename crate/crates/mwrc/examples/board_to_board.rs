//! mmWave board-to-board link: circuit power per scheme, link budget, and
//! which scheme is most energy efficient at each received SNR.

use mwrc::power_model::{default_component_powers, effective_channel, scheme_power_profile, LinkBudget};
use mwrc::sweep::{cooperative, default_b2b_config, Solver};
use mwrc::{snr_db_to_linear, PowerLimits, SchemeId};

fn main() -> mwrc::Result<()> {
    let cp = default_component_powers();
    let lb = LinkBudget::default();
    println!(
        "received SNR for 1 W: {:.1} ({:.2} dB)",
        effective_channel(&lb, 1.0),
        10.0 * effective_channel(&lb, 1.0).log10()
    );
    for s in SchemeId::ACHIEVABLE {
        let c = scheme_power_profile(s, &cp, false)?;
        println!("{s:>7}: P_c = {:.3} W (sources {:.3} W each, relay {:.3} W)", c.p_c, c.p_c_s, c.p_c_r);
    }
    for pessimistic in [false, true] {
        let cfg = default_b2b_config(pessimistic);
        let n = cfg.noise.power()?;
        println!("{}", if pessimistic { "pessimistic NNC:" } else { "default costs:" });
        for snr_db in [0.0, 5.0, 9.5, 10.0, 20.0, 40.0] {
            let p = snr_db_to_linear(snr_db) * n;
            let limits = PowerLimits::new(p, p)?;
            let mut best = (SchemeId::DF, f64::NEG_INFINITY);
            for s in SchemeId::ACHIEVABLE {
                let g =
                    cooperative(s, n, &cfg.cost.cost_for(s)?, &limits, Solver::Alternating)?[0].1.gee * lb.bandwidth_hz;
                if g > best.1 {
                    best = (s, g);
                }
            }
            println!("  {snr_db:>4} dB: best {} at {:.3e} bit/J", best.0, best.1);
        }
    }
    Ok(())
}
