//! Sum rates of every scheme on a completely symmetric channel, plus the
//! analytic landmarks: where DF stops meeting the outer bound, where NNC
//! overtakes DF, and the high-SNR gaps.

use mwrc::rates::{df_nnc_crossing_db, df_optimality_snr, gap_limit, high_snr_gap, sum_rate};
use mwrc::{linear_to_db, SchemeId, SymmetricChannel};

fn main() -> mwrc::Result<()> {
    let ch = SymmetricChannel::new(10.0, 10.0, 1.0, 1.0)?;
    for s in SchemeId::ALL {
        let r = sum_rate(s, &ch);
        let branch = r.branch.map(|b| format!(" ({} limited)", b.as_str())).unwrap_or_default();
        println!("{s:>12}: {:.6} bit/s/Hz{branch}", r.value);
    }
    println!("DF meets the outer bound up to {:.3} dB", linear_to_db(df_optimality_snr()));
    println!("DF and NNC cross at {:.3} dB", df_nnc_crossing_db()?);
    for s in [SchemeId::NNC, SchemeId::AfSnd, SchemeId::AfIan] {
        println!("gap of {s} at 60 dB: {:.4} bit (limit {:?})", high_snr_gap(s, 1e6), gap_limit(s));
    }
    Ok(())
}
