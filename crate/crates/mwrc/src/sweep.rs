//! Batch sweeps over SNR that produce CSV tables and matching plot scripts.
//!
//! All modes share one row schema:
//! `snr_db,scheme,solver,sum_rate_bps_hz,gee,p_s_w,p_r_w,iterations,branch`.
//! Fields that do not apply stay empty. Each file starts with `#` comment lines
//! echoing the configuration and conventions.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::channel::{snr_db_to_linear, PowerLimits, SchemeId, SymmetricChannel};
use crate::error::{Error, Result};
use crate::fractional::{alternating_gee2, maximize_gee1, AlternatingOptions, SolveReport};
use crate::game::{brd, BrdStart, GameSpec};
use crate::gee::{gee_value, PowerCost, PowerProfile, RateModel};
use crate::monotonic::{gee2_global, GlobalOptions};
use crate::power_model::{scheme_power_profile, ComponentPowers, LinkBudget, BOLTZMANN};
use crate::rates::{sum_rate, Branch};

pub const CSV_HEADER: [&str; 9] =
    ["snr_db", "scheme", "solver", "sum_rate_bps_hz", "gee", "p_s_w", "p_r_w", "iterations", "branch"];

/// Inclusive SNR grid in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SnrRange {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::Config(format!("snr step must be > 0, got {step}")));
        }
        if !(start.is_finite() && stop.is_finite() && start <= stop) {
            return Err(Error::Config(format!("snr range {start}..{stop} is empty")));
        }
        Ok(Self { start, stop, step })
    }

    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        // Round to kill accumulated float noise in the printed axis.
        (0..=n).map(|i| ((self.start + i as f64 * self.step) * 1e9).round() / 1e9).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CostSource {
    Manual(PowerCost),
    /// Circuit powers of the mmWave board-to-board front end, per scheme.
    BoardToBoard {
        components: ComponentPowers,
        pessimistic_nnc: bool,
    },
}

impl CostSource {
    /// The outer bound has no circuit of its own; it is charged like DF.
    pub fn cost_for(&self, scheme: SchemeId) -> Result<PowerCost> {
        match self {
            Self::Manual(c) => Ok(*c),
            Self::BoardToBoard { components, pessimistic_nnc } => {
                let s = if scheme == SchemeId::OuterBound { SchemeId::DF } else { scheme };
                scheme_power_profile(s, components, *pessimistic_nnc)
            }
        }
    }

    fn describe(&self) -> String {
        match self {
            Self::Manual(c) => {
                format!("manual phi={} psi={} p_c={} p_c_s={} p_c_r={}", c.phi, c.psi, c.p_c, c.p_c_s, c.p_c_r)
            }
            Self::BoardToBoard { pessimistic_nnc, .. } => format!(
                "board-to-board{}; outer-bound rows use the DF circuit power",
                if *pessimistic_nnc { " (pessimistic NNC)" } else { "" }
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    Unit,
    Value(f64),
    /// `k_B T B`.
    Thermal {
        temperature_k: f64,
        bandwidth_hz: f64,
    },
    /// Thermal noise referred to the transmitter through the link gain, so SNR
    /// values are received SNRs.
    LinkBudget(LinkBudget),
}

impl NoiseModel {
    pub fn power(&self) -> Result<f64> {
        let n = match self {
            Self::Unit => 1.0,
            Self::Value(v) => *v,
            Self::Thermal { temperature_k, bandwidth_hz } => BOLTZMANN * temperature_k * bandwidth_hz,
            Self::LinkBudget(lb) => lb.effective_noise(),
        };
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Config(format!("noise power must be > 0, got {n}")));
        }
        Ok(n)
    }

    fn describe(&self) -> String {
        match self {
            Self::Unit => "unit (1 W)".into(),
            Self::Value(v) => format!("{v} W"),
            Self::Thermal { temperature_k, bandwidth_hz } => {
                format!("thermal T={temperature_k} K B={bandwidth_hz} Hz")
            }
            Self::LinkBudget(lb) => format!(
                "link budget gain={} dB B={} Hz T={} K (noise referred to the transmitter)",
                lb.gain_db, lb.bandwidth_hz, lb.temperature_k
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    Alternating,
    Monotonic,
    Both,
}

impl FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "alternating" | "alt" => Ok(Self::Alternating),
            "monotonic" | "polyblock" | "global" => Ok(Self::Monotonic),
            "both" => Ok(Self::Both),
            other => Err(Error::Config(format!("unknown solver {other:?} (alternating, monotonic, both)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Mode {
    Rates,
    GeeCoop(Solver),
    /// Best-response dynamics started from each relay power, given as a
    /// fraction of the power limit.
    GeeGame {
        inits: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub snr_db: SnrRange,
    pub schemes: Vec<SchemeId>,
    pub cost: CostSource,
    pub noise: NoiseModel,
    pub mode: Mode,
    /// When set, GEE is reported in bit/J instead of bit/s/Hz per W.
    pub bandwidth_hz: Option<f64>,
    pub output: Option<PathBuf>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        SnrRange::new(self.snr_db.start, self.snr_db.stop, self.snr_db.step)?;
        if self.schemes.is_empty() {
            return Err(Error::Config("at least one scheme is required".into()));
        }
        self.noise.power()?;
        if let Some(b) = self.bandwidth_hz {
            if !(b > 0.0 && b.is_finite()) {
                return Err(Error::Config(format!("bandwidth must be > 0, got {b}")));
            }
        }
        if let Mode::GeeGame { inits } = &self.mode {
            if inits.is_empty() {
                return Err(Error::Config("at least one initialization is required".into()));
            }
            if let Some(bad) = inits.iter().find(|f| !(0.0..=1.0).contains(*f)) {
                return Err(Error::Config(format!("initialization {bad} must lie in [0, 1]")));
            }
        }
        for &s in &self.schemes {
            if !matches!(self.mode, Mode::Rates) {
                self.cost.cost_for(s).map_err(|e| Error::Config(e.to_string()))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub snr_db: f64,
    pub scheme: SchemeId,
    pub solver: String,
    pub sum_rate: Option<f64>,
    pub gee: Option<f64>,
    pub p_s: Option<f64>,
    pub p_r: Option<f64>,
    pub iterations: Option<usize>,
    pub branch: Option<Branch>,
}

impl Row {
    fn record(&self) -> [String; 9] {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.12e}")).unwrap_or_default();
        [
            format!("{}", self.snr_db),
            self.scheme.as_str().to_string(),
            self.solver.clone(),
            opt(self.sum_rate),
            opt(self.gee),
            opt(self.p_s),
            opt(self.p_r),
            self.iterations.map(|n| n.to_string()).unwrap_or_default(),
            self.branch.map(|b| b.as_str().to_string()).unwrap_or_default(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub metadata: Vec<String>,
    pub rows: Vec<Row>,
    /// Column plotted by the companion script.
    pub y_column: &'static str,
}

impl SweepOutput {
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        for line in &self.metadata {
            writeln!(w, "# {line}")?;
        }
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(CSV_HEADER)?;
        for row in &self.rows {
            csv.write_record(row.record())?;
        }
        csv.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    /// Writes `path` and a companion `<path>.plot.py`; returns the script path.
    pub fn write_files(&self, path: &Path) -> Result<PathBuf> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        self.write_csv(fs::File::create(path)?)?;
        let script = plot_script_path(path);
        fs::write(&script, self.plot_script(path))?;
        Ok(script)
    }

    /// Plain matplotlib script: one series per (scheme, solver).
    pub fn plot_script(&self, csv_path: &Path) -> String {
        let name = csv_path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let mut s = String::new();
        let _ = writeln!(s, "import csv, os");
        let _ = writeln!(s, "from collections import defaultdict");
        let _ = writeln!(s, "import matplotlib.pyplot as plt");
        let _ = writeln!(s);
        let _ = writeln!(s, "here = os.path.dirname(os.path.abspath(__file__))");
        let _ = writeln!(s, "path = os.path.join(here, {name:?})");
        let _ = writeln!(s, "series = defaultdict(list)");
        let _ = writeln!(s, "with open(path) as f:");
        let _ = writeln!(s, "    for row in csv.DictReader(l for l in f if not l.startswith('#')):");
        let _ = writeln!(s, "        if row[{:?}]:", self.y_column);
        let _ = writeln!(
            s,
            "            series[(row['scheme'], row['solver'])].append((float(row['snr_db']), float(row[{:?}])))",
            self.y_column
        );
        let _ = writeln!(s, "for (scheme, solver), pts in sorted(series.items()):");
        let _ = writeln!(s, "    xs, ys = zip(*pts)");
        let _ = writeln!(s, "    plt.plot(xs, ys, label=f'{{scheme}} ({{solver}})')");
        let _ = writeln!(s, "plt.xlabel('SNR [dB]')");
        let _ = writeln!(s, "plt.ylabel({:?})", self.y_column);
        let _ = writeln!(s, "plt.grid(True)");
        let _ = writeln!(s, "plt.legend()");
        let _ = writeln!(s, "plt.savefig(os.path.splitext(path)[0] + '.png', dpi=150)");
        s
    }
}

pub fn plot_script_path(csv_path: &Path) -> PathBuf {
    let mut s = csv_path.as_os_str().to_owned();
    s.push(".plot.py");
    PathBuf::from(s)
}

fn base_metadata(cfg: &SweepConfig, mode: &str, convention: &str) -> Result<Vec<String>> {
    let schemes: Vec<&str> = cfg.schemes.iter().map(|s| s.as_str()).collect();
    Ok(vec![
        format!("mode: {mode}"),
        format!("snr_db: {}..{} step {}", cfg.snr_db.start, cfg.snr_db.stop, cfg.snr_db.step),
        format!("schemes: {}", schemes.join(",")),
        format!("noise: {} = {:e} W", cfg.noise.describe(), cfg.noise.power()?),
        format!("snr convention: {convention}"),
    ])
}

fn gee_unit(cfg: &SweepConfig) -> String {
    match cfg.bandwidth_hz {
        Some(b) => format!("gee unit: bit/J (bandwidth {b} Hz)"),
        None => "gee unit: bit/s/Hz per W".into(),
    }
}

/// Evaluates `per_point` at every SNR in parallel and concatenates in SNR order.
fn collect_rows<F>(cfg: &SweepConfig, per_point: F) -> Result<Vec<Row>>
where
    F: Fn(f64) -> Result<Vec<Row>> + Sync + Send,
{
    let chunks: Vec<Vec<Row>> = cfg.snr_db.values().into_par_iter().map(per_point).collect::<Result<_>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Sum rate of every scheme on the completely symmetric channel with
/// `P_S = P_R = SNR * N`.
pub fn run_rates_sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    let n = cfg.noise.power()?;
    let rows = collect_rows(cfg, |snr_db| {
        let ch = SymmetricChannel::completely_symmetric(snr_db_to_linear(snr_db) * n, n)?;
        Ok(cfg
            .schemes
            .iter()
            .map(|&scheme| {
                let r = sum_rate(scheme, &ch);
                Row {
                    snr_db,
                    scheme,
                    solver: "closed-form".into(),
                    sum_rate: Some(r.value),
                    gee: None,
                    p_s: Some(ch.p_s),
                    p_r: Some(ch.p_r),
                    iterations: None,
                    branch: r.branch,
                }
            })
            .collect())
    })?;
    let metadata = base_metadata(cfg, "rates", "SNR = P/N with P_S = P_R = P and N_S = N_R = N")?;
    Ok(SweepOutput { metadata, rows, y_column: "sum_rate_bps_hz" })
}

/// Cooperative GEE optimum with `P_S^max = P_R^max = SNR^max * N`.
pub fn run_gee_coop_sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    let Mode::GeeCoop(solver) = cfg.mode else {
        return Err(Error::Config("gee-coop sweep needs the gee-coop mode".into()));
    };
    let n = cfg.noise.power()?;
    let scale = cfg.bandwidth_hz.unwrap_or(1.0);
    let rows = collect_rows(cfg, |snr_db| {
        let p_max = snr_db_to_linear(snr_db) * n;
        let limits = PowerLimits::new(p_max, p_max)?;
        let mut rows = Vec::new();
        for &scheme in &cfg.schemes {
            let cost = cfg.cost.cost_for(scheme)?;
            for (name, report) in cooperative(scheme, n, &cost, &limits, solver)? {
                rows.push(solution_row(snr_db, scheme, name, &report, n, &cost, scale)?);
            }
        }
        Ok(rows)
    })?;
    let mut metadata = base_metadata(cfg, "gee-coop", convention_for(&cfg.noise))?;
    metadata.push(format!("cost: {}", cfg.cost.describe()));
    metadata.push(format!("solver: {solver:?}"));
    metadata.push(gee_unit(cfg));
    Ok(SweepOutput { metadata, rows, y_column: "gee" })
}

/// Nash equilibria reached by best-response dynamics from each initialization,
/// plus the cooperative optimum for comparison.
pub fn run_game_sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    let Mode::GeeGame { inits } = &cfg.mode else {
        return Err(Error::Config("game sweep needs the game mode".into()));
    };
    let n = cfg.noise.power()?;
    let scale = cfg.bandwidth_hz.unwrap_or(1.0);
    let rows = collect_rows(cfg, |snr_db| {
        let p_max = snr_db_to_linear(snr_db) * n;
        let limits = PowerLimits::new(p_max, p_max)?;
        let mut rows = Vec::new();
        for &scheme in &cfg.schemes {
            let cost = cfg.cost.cost_for(scheme)?;
            let spec = GameSpec::new(scheme, n, n, cost, limits)?;
            for &frac in inits {
                let trace = brd(&spec, BrdStart::Relay(frac * p_max), 1e-9, 1000)?;
                let profile = trace.profile();
                rows.push(Row {
                    snr_db,
                    scheme,
                    solver: format!("brd-init-{frac}"),
                    sum_rate: Some(spec.model.rate(profile.p_s, profile.p_r)),
                    gee: Some(scale * gee_value(&spec.model, profile, &cost)),
                    p_s: Some(profile.p_s),
                    p_r: Some(profile.p_r),
                    iterations: Some(trace.iterations),
                    branch: None,
                });
            }
            for (_, report) in cooperative(scheme, n, &cost, &limits, Solver::Alternating)? {
                rows.push(solution_row(snr_db, scheme, "cooperative", &report, n, &cost, scale)?);
            }
        }
        Ok(rows)
    })?;
    let mut metadata = base_metadata(cfg, "game", convention_for(&cfg.noise))?;
    metadata.push(format!("cost: {}", cfg.cost.describe()));
    metadata.push(format!("relay starts at init * P^max; sources respond first; inits: {inits:?}"));
    metadata.push(gee_unit(cfg));
    Ok(SweepOutput { metadata, rows, y_column: "gee" })
}

/// Dispatches on the configured mode.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    match cfg.mode {
        Mode::Rates => run_rates_sweep(cfg),
        Mode::GeeCoop(_) => run_gee_coop_sweep(cfg),
        Mode::GeeGame { .. } => run_game_sweep(cfg),
    }
}

fn convention_for(noise: &NoiseModel) -> &'static str {
    match noise {
        NoiseModel::LinkBudget(_) => "received SNR: P^max = SNR * kTB/g at the transmitter, N_S = N_R = kTB/g",
        _ => "SNR^max = P^max / N with P_S^max = P_R^max = P^max and N_S = N_R = N",
    }
}

/// Cooperative GEE optimum of one scheme; min-form schemes have a single exact
/// solver, compound ones follow `solver`.
pub fn cooperative(
    scheme: SchemeId,
    n: f64,
    cost: &PowerCost,
    limits: &PowerLimits,
    solver: Solver,
) -> Result<Vec<(&'static str, SolveReport)>> {
    match RateModel::for_scheme(scheme, n, n)? {
        RateModel::MinForm { params, n_s, n_r } => {
            Ok(vec![("dinkelbach", maximize_gee1(&params, cost, limits, n_s, n_r, 1e-12)?)])
        }
        RateModel::Compound(params) => {
            let mut out = Vec::new();
            if matches!(solver, Solver::Alternating | Solver::Both) {
                out.push(("alternating", alternating_gee2(&params, cost, limits, AlternatingOptions::default())?));
            }
            if matches!(solver, Solver::Monotonic | Solver::Both) {
                out.push(("monotonic", gee2_global(&params, cost, limits, GlobalOptions::default())?));
            }
            Ok(out)
        }
    }
}

fn solution_row(
    snr_db: f64,
    scheme: SchemeId,
    solver: &str,
    report: &SolveReport,
    n: f64,
    cost: &PowerCost,
    scale: f64,
) -> Result<Row> {
    let model = RateModel::for_scheme(scheme, n, n)?;
    let PowerProfile { p_s, p_r } = report.profile;
    Ok(Row {
        snr_db,
        scheme,
        solver: solver.into(),
        sum_rate: Some(model.rate(p_s, p_r)),
        gee: Some(scale * gee_value(&model, report.profile, cost)),
        p_s: Some(p_s),
        p_r: Some(p_r),
        iterations: Some(report.iterations),
        branch: None,
    })
}

/// Default rate sweep: -10..40 dB with unit noise.
pub fn default_rates_config() -> SweepConfig {
    SweepConfig {
        snr_db: SnrRange { start: -10.0, stop: 40.0, step: 0.5 },
        schemes: SchemeId::ALL.to_vec(),
        cost: CostSource::Manual(PowerCost { phi: 3.0, psi: 1.0, p_c: 1.0, p_c_s: 0.75, p_c_r: 0.25 }),
        noise: NoiseModel::Unit,
        mode: Mode::Rates,
        bandwidth_hz: None,
        output: None,
    }
}

/// Cooperative GEE with `P_c = 1 W`, ideal amplifiers and unit noise over
/// 0..30 dB. With `N = 0.1 mW` the usual range is 0..50 dB.
pub fn default_gee_coop_config() -> SweepConfig {
    SweepConfig {
        snr_db: SnrRange { start: 0.0, stop: 30.0, step: 0.5 },
        mode: Mode::GeeCoop(Solver::Alternating),
        ..default_rates_config()
    }
}

/// Power game with `P_c,S = 0.75 W`, `P_c,R = 0.25 W` and unit noise.
pub fn default_game_config() -> SweepConfig {
    SweepConfig {
        snr_db: SnrRange { start: 0.0, stop: 30.0, step: 0.5 },
        mode: Mode::GeeGame { inits: vec![0.0, 0.01, 0.1, 1.0] },
        ..default_rates_config()
    }
}

/// Board-to-board link: received SNR 0..40 dB, measured circuit powers, GEE in bit/J.
pub fn default_b2b_config(pessimistic_nnc: bool) -> SweepConfig {
    let lb = LinkBudget::default();
    SweepConfig {
        snr_db: SnrRange { start: 0.0, stop: 40.0, step: 0.5 },
        schemes: SchemeId::ACHIEVABLE.to_vec(),
        cost: CostSource::BoardToBoard { components: ComponentPowers::default(), pessimistic_nnc },
        noise: NoiseModel::LinkBudget(lb),
        mode: Mode::GeeCoop(Solver::Alternating),
        bandwidth_hz: Some(lb.bandwidth_hz),
        output: None,
    }
}
