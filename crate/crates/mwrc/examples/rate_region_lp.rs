//! Maximum sum rate over each rate region by vertex enumeration, next to the
//! closed forms, and the NNC compression-noise sweep.

use mwrc::oracle::{af_snd_region, df_region, log_grid, lp_max_sum_rate, nnc_q0_sweep, nnc_region, outer_bound_region};
use mwrc::rates::{af_snd_rate, df_rate, nnc_q0_opt, nnc_rate, outer_bound};
use mwrc::SymmetricChannel;

fn main() -> mwrc::Result<()> {
    let ch = SymmetricChannel::new(4.0, 20.0, 0.5, 2.0)?;
    let q0 = nnc_q0_opt(&ch).expect("relay transmits");
    let rows = [
        ("outer bound", outer_bound(&ch).value, lp_max_sum_rate(&outer_bound_region(&ch))?),
        ("DF", df_rate(&ch).value, lp_max_sum_rate(&df_region(&ch))?),
        ("AF-SND", af_snd_rate(&ch).value, lp_max_sum_rate(&af_snd_region(&ch))?),
        ("NNC", nnc_rate(&ch).value, lp_max_sum_rate(&nnc_region(&ch, q0))?),
    ];
    for (name, closed, lp) in rows {
        println!("{name:>12}: closed form {closed:.9}, LP {lp:.9}");
    }
    let (best_q0, rate) = nnc_q0_sweep(&ch, &log_grid(q0 / 100.0, q0 * 100.0, 2001))?;
    println!("NNC compression noise: closed form {q0:.6}, sweep {best_q0:.6} (rate {rate:.6})");
    Ok(())
}
