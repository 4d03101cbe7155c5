//! Experiment runner and design queries for LOS MIMO planar-array links.
//!
//! `losmimo run --config <file>` executes a named scenario from a flat
//! key/value config and writes deterministic CSV; the other subcommands are
//! flag-driven shortcuts onto the same scenario engine.

// Validations use `!(x > 0.0)` so NaN fails them too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod config;
mod output;
mod scenarios;

use config::Config;
use output::ScenarioOutput;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(losmimo::Error),
    Io(String),
}

impl CliError {
    fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Core(losmimo::Error::Domain(_)) => 3,
            CliError::Core(losmimo::Error::NonConvergence { .. }) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl From<losmimo::Error> for CliError {
    fn from(e: losmimo::Error) -> Self {
        CliError::Core(e)
    }
}

/// Per-run settings shared by every scenario.
pub struct RunEnv {
    pub c: f64,
    pub quad_order: usize,
}

#[derive(Parser)]
#[command(
    name = "losmimo",
    version,
    about = "Design and capacity experiments for line-of-sight MIMO planar-array links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Write the CSV to this path (default: config `output.path`, else stdout)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads for parallel evaluation (default: all cores)
    #[arg(long)]
    threads: Option<usize>,

    /// Convert frequencies with c = 3e8 m/s instead of the exact value
    #[arg(long)]
    c_approx: bool,

    /// Gauss-Legendre points per axis for aperture-gain integrals
    #[arg(long, default_value_t = 16)]
    quad_order: usize,
}

#[derive(Args)]
struct LinkArgs {
    /// Carrier frequency in Hz (converted with c; see --c-approx)
    #[arg(long)]
    frequency_hz: Option<f64>,

    /// Wavelength in meters (overrides --frequency-hz)
    #[arg(long)]
    wavelength_m: Option<f64>,

    /// Link distance in meters
    #[arg(long)]
    distance_m: Option<f64>,

    /// Element width W in meters (default: lambda/2)
    #[arg(long)]
    element_width_m: Option<f64>,
}

impl LinkArgs {
    fn apply(&self, cfg: &mut Config) {
        if let Some(v) = self.frequency_hz {
            cfg.set("link.frequency_hz", format!("{v}"));
        }
        if let Some(v) = self.wavelength_m {
            cfg.set("link.wavelength_m", format!("{v}"));
        }
        if let Some(v) = self.distance_m {
            cfg.set("link.distance_m", format!("{v}"));
        }
        if let Some(v) = self.element_width_m {
            cfg.set("array.element_width_m", format!("{v}"));
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario described by a config file
    Run {
        /// Flat key/value config file
        #[arg(long)]
        config: PathBuf,

        /// Scenario name (default: the config's `scenario` key)
        #[arg(long)]
        scenario: Option<String>,

        #[command(flatten)]
        common: CommonArgs,
    },

    /// Optimal spacing, aperture dimensions and near-field diagnostics
    Design {
        #[command(flatten)]
        link: LinkArgs,

        /// Antennas per row
        #[arg(long)]
        m_h: usize,

        /// Rows
        #[arg(long)]
        m_v: usize,

        #[command(flatten)]
        common: CommonArgs,
    },

    /// One-shot capacity at a given spacing (optimal by default)
    Capacity {
        #[command(flatten)]
        link: LinkArgs,

        /// Antennas per row
        #[arg(long)]
        m_h: Option<usize>,

        /// Rows
        #[arg(long)]
        m_v: Option<usize>,

        /// Common spacing in meters on both axes of both arrays
        #[arg(long)]
        spacing_m: Option<f64>,

        /// Cross-talk fraction kappa in [0, 1]
        #[arg(long)]
        kappa: Option<f64>,

        /// P*beta/sigma^2 in dB
        #[arg(long)]
        snr_db: Option<f64>,

        /// Channel model: exact, fresnel, or two-level
        #[arg(long)]
        model: Option<String>,

        /// Bandwidth in Hz (adds a bits-per-second column)
        #[arg(long)]
        bandwidth_hz: Option<f64>,

        #[command(flatten)]
        common: CommonArgs,
    },

    /// Aperture length/area minimizers with the grid-search oracle
    Geometry {
        #[command(flatten)]
        link: LinkArgs,

        /// Total antenna locations M
        #[arg(long)]
        antennas: usize,

        /// Oracle grid steps for alpha
        #[arg(long)]
        alpha_steps: Option<usize>,

        /// Oracle grid steps for gamma
        #[arg(long)]
        gamma_steps: Option<usize>,

        #[command(flatten)]
        common: CommonArgs,
    },

    /// Capacity vs carrier frequency for the three gain designs
    FreqSweep {
        /// Optional config with overrides
        #[arg(long)]
        config: Option<PathBuf>,

        #[command(flatten)]
        common: CommonArgs,
    },

    /// Realistic aperture-gain pipeline vs the ideal directive model
    Realistic {
        /// Optional config with overrides
        #[arg(long)]
        config: Option<PathBuf>,

        #[command(flatten)]
        common: CommonArgs,
    },

    /// Asymmetric spacing-split report (base station serving a device)
    VcExample {
        /// Optional config with overrides
        #[arg(long)]
        config: Option<PathBuf>,

        #[command(flatten)]
        common: CommonArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("losmimo: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn make_env(common: &CommonArgs) -> Result<RunEnv, CliError> {
    if let Some(threads) = common.threads {
        if threads == 0 {
            return Err(CliError::config("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::config(format!("thread pool: {e}")))?;
    }
    Ok(RunEnv {
        c: if common.c_approx {
            losmimo::SPEED_OF_LIGHT_APPROX
        } else {
            losmimo::SPEED_OF_LIGHT
        },
        quad_order: common.quad_order,
    })
}

fn load_config(path: &PathBuf) -> Result<Config, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    Config::parse(&text)
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            config,
            scenario,
            common,
        } => {
            let env = make_env(&common)?;
            let cfg = load_config(&config)?;
            let declared = cfg.get_str("scenario");
            let name = scenario.or(declared).ok_or_else(|| {
                CliError::config("no scenario: pass --scenario or set `scenario` in the config")
            })?;
            let out_path = common.out.clone().or_else(|| {
                cfg.get_str("output.path").map(PathBuf::from)
            });
            let result = scenarios::run_scenario(&name, &cfg, &env)?;
            emit(&result, out_path, &env)
        }
        Command::Design {
            link,
            m_h,
            m_v,
            common,
        } => {
            let env = make_env(&common)?;
            let mut cfg = Config::default();
            link.apply(&mut cfg);
            cfg.set("array.m_h", format!("{m_h}"));
            cfg.set("array.m_v", format!("{m_v}"));
            let result = scenarios::run_scenario("design", &cfg, &env)?;
            emit_pretty(&result, common.out, &env)
        }
        Command::Capacity {
            link,
            m_h,
            m_v,
            spacing_m,
            kappa,
            snr_db,
            model,
            bandwidth_hz,
            common,
        } => {
            let env = make_env(&common)?;
            let mut cfg = Config::default();
            link.apply(&mut cfg);
            if let Some(v) = m_h {
                cfg.set("array.m_h", format!("{v}"));
            }
            if let Some(v) = m_v {
                cfg.set("array.m_v", format!("{v}"));
            }
            if let Some(v) = spacing_m {
                cfg.set("array.spacing_m", format!("{v}"));
            }
            if let Some(v) = kappa {
                cfg.set("xpd.kappa", format!("{v}"));
            }
            if let Some(v) = snr_db {
                cfg.set("snr.p_beta_over_sigma2_db", format!("{v}"));
            }
            if let Some(v) = model {
                cfg.set("channel.model", v);
            }
            if let Some(v) = bandwidth_hz {
                cfg.set("bandwidth.hz", format!("{v}"));
            }
            let result = scenarios::run_scenario("capacity", &cfg, &env)?;
            emit_pretty(&result, common.out, &env)
        }
        Command::Geometry {
            link,
            antennas,
            alpha_steps,
            gamma_steps,
            common,
        } => {
            let env = make_env(&common)?;
            let mut cfg = Config::default();
            link.apply(&mut cfg);
            cfg.set("antennas.m", format!("{antennas}"));
            if let Some(v) = alpha_steps {
                cfg.set("oracle.alpha_steps", format!("{v}"));
            }
            if let Some(v) = gamma_steps {
                cfg.set("oracle.gamma_steps", format!("{v}"));
            }
            let result = scenarios::run_scenario("geometry", &cfg, &env)?;
            emit(&result, common.out, &env)
        }
        Command::FreqSweep { config, common } => run_preset("freq-sweep", config, common),
        Command::Realistic { config, common } => run_preset("realistic", config, common),
        Command::VcExample { config, common } => run_preset("vc-example", config, common),
    }
}

fn run_preset(
    name: &str,
    config: Option<PathBuf>,
    common: CommonArgs,
) -> Result<(), CliError> {
    let env = make_env(&common)?;
    let cfg = match &config {
        Some(path) => load_config(path)?,
        None => Config::default(),
    };
    // A preset config may carry its own scenario/output keys; honor them.
    if let Some(declared) = cfg.get_str("scenario") {
        if declared != name {
            return Err(CliError::config(format!(
                "config declares scenario `{declared}` but the subcommand runs `{name}`"
            )));
        }
    }
    let out_path = common
        .out
        .clone()
        .or_else(|| cfg.get_str("output.path").map(PathBuf::from));
    let result = scenarios::run_scenario(name, &cfg, &env)?;
    emit(&result, out_path, &env)
}

/// Writes the CSV to `path` (with a short summary on stdout) or prints the
/// whole document to stdout when no path is set.
fn emit(result: &ScenarioOutput, path: Option<PathBuf>, env: &RunEnv) -> Result<(), CliError> {
    let csv = result.to_csv(env.c);
    match path {
        Some(path) => {
            std::fs::write(&path, csv)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            println!(
                "scenario {}: {} rows -> {}",
                result.scenario,
                result.rows.len(),
                path.display()
            );
            for notice in &result.notices {
                println!("notice: {notice}");
            }
            Ok(())
        }
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

/// Single-row outputs read better as `key = value` lines on stdout.
fn emit_pretty(
    result: &ScenarioOutput,
    path: Option<PathBuf>,
    env: &RunEnv,
) -> Result<(), CliError> {
    if let Some(path) = path {
        return emit(result, Some(path), env);
    }
    println!("scenario {}", result.scenario);
    for row in &result.rows {
        for (col, cell) in result.columns.iter().zip(row) {
            let rendered = match cell {
                output::Cell::F(v) => format!("{v}"),
                output::Cell::I(v) => format!("{v}"),
                output::Cell::S(v) => v.clone(),
                output::Cell::B(v) => format!("{v}"),
            };
            println!("  {col} = {rendered}");
        }
        println!();
    }
    for notice in &result.notices {
        println!("notice: {notice}");
    }
    Ok(())
}
