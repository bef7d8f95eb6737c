use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mwrc::config::{parse_list, ConfigFile, OUT_DIR_ENV};
use mwrc::power_model::LinkBudget;
use mwrc::sweep::{
    default_b2b_config, default_game_config, default_gee_coop_config, default_rates_config, run_sweep, CostSource,
    Mode, NoiseModel, SnrRange, Solver, SweepConfig,
};
use mwrc::{verify, Error, PowerCost, Result, SchemeId};

/// Sum-rate, energy-efficiency and power-game sweeps for the three-user
/// multi-way relay channel.
#[derive(Parser)]
#[command(name = "mwrc", version)]
struct Cli {
    /// key = value file; command-line flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for output files [default: $MWRC_OUT_DIR, else .]
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sum rates of every scheme on the completely symmetric channel.
    Rates {
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        noise: NoiseArgs,
    },
    /// Cooperative GEE optimum versus the SNR limit.
    GeeCoop {
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        noise: NoiseArgs,
        #[command(flatten)]
        cost: CostArgs,
        /// alternating, monotonic or both.
        #[arg(long)]
        solver: Option<String>,
    },
    /// Nash equilibria of the source/relay power game.
    Game {
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        noise: NoiseArgs,
        #[command(flatten)]
        cost: CostArgs,
        /// Initial relay powers as fractions of the limit, e.g. 0,0.1,1.
        #[arg(long)]
        inits: Option<String>,
    },
    /// Cooperative GEE of the mmWave board-to-board link versus received SNR.
    B2b {
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long)]
        solver: Option<String>,
        /// Charge NNC an extra decoder at every node.
        #[arg(long)]
        pessimistic_nnc: bool,
        #[arg(long)]
        gain_db: Option<f64>,
        #[arg(long)]
        bandwidth: Option<f64>,
        #[arg(long)]
        temperature: Option<f64>,
    },
    /// Run the named numerical checks.
    Verify {
        /// Check name or number; repeatable. Default: all.
        #[arg(long)]
        check: Vec<String>,
        /// Skip the slow checks.
        #[arg(long)]
        quick: bool,
        /// List the checks and exit.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Args)]
struct RangeArgs {
    #[arg(long, allow_hyphen_values = true)]
    snr_start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    snr_stop: Option<f64>,
    #[arg(long)]
    snr_step: Option<f64>,
    /// Comma-separated, e.g. df,nnc,af-snd.
    #[arg(long)]
    schemes: Option<String>,
    /// Output CSV [default: <out-dir>/<command>.csv]
    #[arg(long)]
    output: Option<PathBuf>,
    /// Print the CSV instead of writing files.
    #[arg(long)]
    stdout: bool,
}

#[derive(Args)]
struct NoiseArgs {
    /// unit, thermal, or a power in watts.
    #[arg(long)]
    noise: Option<String>,
    /// Kelvin, for thermal noise.
    #[arg(long)]
    temperature: Option<f64>,
    /// Hz, for thermal noise.
    #[arg(long)]
    bandwidth: Option<f64>,
}

#[derive(Args)]
struct CostArgs {
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long)]
    psi: Option<f64>,
    /// Total circuit power.
    #[arg(long)]
    p_c: Option<f64>,
    /// Circuit power charged to the sources in the game.
    #[arg(long)]
    p_c_s: Option<f64>,
    /// Circuit power charged to the relay in the game.
    #[arg(long)]
    p_c_r: Option<f64>,
}

const KEYS: &[&str] = &[
    "out-dir",
    "snr-start",
    "snr-stop",
    "snr-step",
    "schemes",
    "output",
    "stdout",
    "noise",
    "temperature",
    "bandwidth",
    "phi",
    "psi",
    "p-c",
    "p-c-s",
    "p-c-r",
    "solver",
    "inits",
    "pessimistic-nnc",
    "gain-db",
    "check",
    "quick",
];

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let file = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    file.check_keys(KEYS)?;
    let out_dir = file
        .pick(cli.out_dir, "out-dir")?
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));

    let (name, cfg, stdout) = match cli.cmd {
        Cmd::Verify { check, quick, list } => return run_verify(&file, check, quick, list),
        Cmd::Rates { range, noise } => {
            let mut cfg = default_rates_config();
            let stdout = apply_range(&mut cfg, &range, &file)?;
            cfg.noise = noise_model(&noise, &file)?;
            ("rates", cfg, stdout)
        }
        Cmd::GeeCoop { range, noise, cost, solver } => {
            let mut cfg = default_gee_coop_config();
            let stdout = apply_range(&mut cfg, &range, &file)?;
            cfg.noise = noise_model(&noise, &file)?;
            cfg.cost = CostSource::Manual(manual_cost(&cost, &file)?);
            cfg.mode = Mode::GeeCoop(solver_choice(solver, &file)?);
            ("gee-coop", cfg, stdout)
        }
        Cmd::Game { range, noise, cost, inits } => {
            let mut cfg = default_game_config();
            let stdout = apply_range(&mut cfg, &range, &file)?;
            cfg.noise = noise_model(&noise, &file)?;
            cfg.cost = CostSource::Manual(manual_cost(&cost, &file)?);
            if let Some(list) = file.pick(inits, "inits")? {
                cfg.mode = Mode::GeeGame { inits: parse_list(&list)? };
            }
            ("game", cfg, stdout)
        }
        Cmd::B2b { range, solver, pessimistic_nnc, gain_db, bandwidth, temperature } => {
            let pessimistic = pessimistic_nnc || file.get_bool("pessimistic-nnc")?.unwrap_or(false);
            let mut cfg = default_b2b_config(pessimistic);
            let stdout = apply_range(&mut cfg, &range, &file)?;
            let d = LinkBudget::default();
            let lb = LinkBudget::new(
                file.pick(gain_db, "gain-db")?.unwrap_or(d.gain_db),
                file.pick(bandwidth, "bandwidth")?.unwrap_or(d.bandwidth_hz),
                file.pick(temperature, "temperature")?.unwrap_or(d.temperature_k),
            )
            .map_err(|e| Error::Config(e.to_string()))?;
            cfg.noise = NoiseModel::LinkBudget(lb);
            cfg.bandwidth_hz = Some(lb.bandwidth_hz);
            cfg.mode = Mode::GeeCoop(solver_choice(solver, &file)?);
            ("b2b", cfg, stdout)
        }
    };

    let out = run_sweep(&cfg)?;
    if stdout {
        print!("{}", out.to_csv_string()?);
    } else {
        let path = cfg.output.clone().unwrap_or_else(|| out_dir.join(format!("{name}.csv")));
        let script = out.write_files(&path)?;
        println!("wrote {} ({} rows) and {}", path.display(), out.rows.len(), script.display());
    }
    Ok(ExitCode::SUCCESS)
}

/// Fills range, schemes and output; returns whether to print to stdout.
fn apply_range(cfg: &mut SweepConfig, a: &RangeArgs, file: &ConfigFile) -> Result<bool> {
    let d = cfg.snr_db;
    cfg.snr_db = SnrRange::new(
        file.pick(a.snr_start, "snr-start")?.unwrap_or(d.start),
        file.pick(a.snr_stop, "snr-stop")?.unwrap_or(d.stop),
        file.pick(a.snr_step, "snr-step")?.unwrap_or(d.step),
    )?;
    if let Some(list) = file.pick(a.schemes.clone(), "schemes")? {
        cfg.schemes = parse_list::<SchemeId>(&list)?;
    }
    cfg.output = file.pick(a.output.clone(), "output")?;
    Ok(a.stdout || file.get_bool("stdout")?.unwrap_or(false))
}

fn noise_model(a: &NoiseArgs, file: &ConfigFile) -> Result<NoiseModel> {
    let spec = file.pick(a.noise.clone(), "noise")?.unwrap_or_else(|| "unit".into());
    let temperature = file.pick(a.temperature, "temperature")?;
    let bandwidth = file.pick(a.bandwidth, "bandwidth")?;
    let model = match spec.trim().to_ascii_lowercase().as_str() {
        "unit" => NoiseModel::Unit,
        "thermal" => {
            let d = LinkBudget::default();
            NoiseModel::Thermal {
                temperature_k: temperature.unwrap_or(d.temperature_k),
                bandwidth_hz: bandwidth.unwrap_or(d.bandwidth_hz),
            }
        }
        other => NoiseModel::Value(
            other.parse().map_err(|_| Error::Config(format!("noise {other:?}: expected unit, thermal or watts")))?,
        ),
    };
    model.power()?;
    Ok(model)
}

fn manual_cost(a: &CostArgs, file: &ConfigFile) -> Result<PowerCost> {
    let phi = file.pick(a.phi, "phi")?.unwrap_or(3.0);
    let psi = file.pick(a.psi, "psi")?.unwrap_or(1.0);
    let p_c_s = file.pick(a.p_c_s, "p-c-s")?;
    let p_c_r = file.pick(a.p_c_r, "p-c-r")?;
    let p_c = match (file.pick(a.p_c, "p-c")?, p_c_s, p_c_r) {
        (Some(p), _, _) => p,
        (None, Some(s), Some(r)) => s + r,
        _ => 1.0,
    };
    PowerCost::new(phi, psi, p_c, p_c_s.unwrap_or(0.75 * p_c), p_c_r.unwrap_or(0.25 * p_c))
        .map_err(|e| Error::Config(e.to_string()))
}

fn solver_choice(flag: Option<String>, file: &ConfigFile) -> Result<Solver> {
    file.pick(flag, "solver")?.map_or(Ok(Solver::Alternating), |s| s.parse())
}

fn run_verify(file: &ConfigFile, mut names: Vec<String>, quick: bool, list: bool) -> Result<ExitCode> {
    if list {
        for c in &verify::CHECKS {
            println!("{:>2} {:<26} {}{}", c.id, c.name, c.summary, if c.slow { " [slow]" } else { "" });
        }
        return Ok(ExitCode::SUCCESS);
    }
    if names.is_empty() {
        if let Some(list) = file.raw("check") {
            names = parse_list(list)?;
        }
    }
    let quick = quick || file.get_bool("quick")?.unwrap_or(false);
    let selected: Vec<&verify::Check> = if names.is_empty() {
        verify::CHECKS.iter().filter(|c| !quick || !c.slow).collect()
    } else {
        names
            .iter()
            .map(|n| verify::find(n).ok_or_else(|| Error::Config(format!("unknown check {n:?}"))))
            .collect::<Result<_>>()?
    };
    let mut failed = 0;
    for check in &selected {
        let outcome = check.run();
        println!("{}", outcome.line());
        failed += usize::from(!outcome.passed);
    }
    println!("{} of {} checks passed", selected.len() - failed, selected.len());
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
