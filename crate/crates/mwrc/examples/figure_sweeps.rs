//! Writes every default sweep (rates, cooperative GEE at two noise levels,
//! game, board-to-board) as CSV plus plot scripts into a directory.
//!
//! `cargo run --release --example figure_sweeps -- out/`

use std::path::PathBuf;

use mwrc::sweep::{
    default_b2b_config, default_game_config, default_gee_coop_config, default_rates_config, run_sweep, NoiseModel,
    SnrRange,
};

fn main() -> mwrc::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "sweeps".into()));
    let low_noise = mwrc::sweep::SweepConfig {
        snr_db: SnrRange::new(0.0, 50.0, 0.5)?,
        noise: NoiseModel::Value(1e-4),
        ..default_gee_coop_config()
    };
    let jobs = [
        ("rates.csv", default_rates_config()),
        ("gee_coop_unit_noise.csv", default_gee_coop_config()),
        ("gee_coop_low_noise.csv", low_noise),
        ("game.csv", default_game_config()),
        ("b2b.csv", default_b2b_config(false)),
        ("b2b_pessimistic_nnc.csv", default_b2b_config(true)),
    ];
    for (name, cfg) in jobs {
        let out = run_sweep(&cfg)?;
        let path = dir.join(name);
        out.write_files(&path)?;
        println!("{} ({} rows)", path.display(), out.rows.len());
    }
    Ok(())
}
