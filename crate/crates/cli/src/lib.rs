//! Command-line front end: flag parsing, JSON run configs, named figure
//! presets, CSV/JSON emission and parallel parameter sweeps.

pub mod config;
pub mod output;
pub mod presets;
pub mod runner;

use std::io::Write;
use std::sync::OnceLock;

use clap::{Args, Parser, Subcommand};

use config::{Format, InitialStateSpec, Observable, Params, RunConfig, SweepParam, Task};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Physics(rfbeats::Error),
    Io(std::io::Error),
}

impl From<rfbeats::Error> for CliError {
    fn from(e: rfbeats::Error) -> Self {
        // parameter and preset problems are configuration errors (exit 1),
        // everything else is a physics-domain failure (exit 2)
        match e {
            rfbeats::Error::InvalidParams { .. }
            | rfbeats::Error::UnknownPreset { .. }
            | rfbeats::Error::UnphysicalInitialState { .. }
            | rfbeats::Error::InvalidPopulations { .. } => CliError::Config(e.to_string()),
            other => CliError::Physics(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Rayon pool for sweeps, capped by RFBEATS_THREADS when set.
pub fn thread_pool() -> Result<&'static rayon::ThreadPool, CliError> {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    if let Some(pool) = POOL.get() {
        return Ok(pool);
    }
    let threads = match std::env::var("RFBEATS_THREADS") {
        Ok(s) => s
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| {
                CliError::Config(format!("RFBEATS_THREADS must be a positive integer, got '{s}'"))
            })?,
        Err(_) => 0, // rayon default
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    Ok(POOL.get_or_init(|| pool))
}

#[derive(Args, Debug, Clone)]
struct ParamArgs {
    /// Rabi frequency, units of gamma.
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Laser detuning from the |1>-|3> transition.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    delta_l: f64,
    /// Difference Zeeman splitting of the two pi transitions.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    delta_z: f64,
    /// Total decay rate; 1 sets the unit system.
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Ground-state Zeeman splitting (dressed energies only).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    b_ell: f64,
    /// Geometric factor of the pi channel.
    #[arg(long, default_value_t = 1.0)]
    f_pi: f64,
}

impl ParamArgs {
    fn to_params(&self) -> Params {
        Params {
            omega: self.omega,
            delta_l: self.delta_l,
            delta_z: self.delta_z,
            gamma: self.gamma,
            b_ell: self.b_ell,
            f_pi: self.f_pi,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct GridArgs {
    /// End of the time grid, units of 1/gamma.
    #[arg(long, default_value_t = 10.0)]
    t_max: f64,
    /// Number of grid points (inclusive of both ends).
    #[arg(long, default_value_t = 1001)]
    n_t: usize,
}

#[derive(Args, Debug, Clone)]
struct OmegaGridArgs {
    /// Half-width of the symmetric frequency grid; auto-sized when omitted.
    #[arg(long)]
    omega_max: Option<f64>,
    #[arg(long, default_value_t = 2001)]
    n_omega: usize,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Stationary state, intensity and its coherent/incoherent split.
    Steady {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Time evolution of the Bloch vector from an initial state.
    Evolve {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// ground3 | ground4 | equal-ground | steady | 8 complex entries.
        #[arg(long, default_value = "ground3")]
        initial_state: String,
    },
    /// Pi and sigma intensities along a trajectory.
    Intensity {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value = "ground3")]
        initial_state: String,
    },
    /// Photon-photon correlation g2(tau) of the pi channel.
    G2 {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Amplitude-intensity correlation h(tau) with its 2nd/3rd order split.
    Aic {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Quadrature phase in radians.
        #[arg(long, default_value_t = config::default_phi(), allow_hyphen_values = true)]
        phi: f64,
    },
    /// Incoherent power spectrum of the pi emission.
    Spectrum {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        grid: OmegaGridArgs,
    },
    /// Quadrature spectra: normalized 2nd/3rd order and the squeezing spectrum.
    Qspectrum {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        grid: OmegaGridArgs,
        #[arg(long, default_value_t = config::default_phi(), allow_hyphen_values = true)]
        phi: f64,
    },
    /// Normally-ordered quadrature variance and its squeezing window.
    Variance {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = config::default_phi(), allow_hyphen_values = true)]
        phi: f64,
    },
    /// Interference measures C and K with special detuning points.
    Interference {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Dressed energies, generalized Rabi, carrier and beat frequencies.
    Dressed {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Lossless beat model with the optimal-population factorization.
    Beats {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Initial ground populations; must sum to 1.
        #[arg(long, default_value_t = 0.5)]
        a33: f64,
        #[arg(long, default_value_t = 0.5)]
        a44: f64,
    },
    /// Scan one parameter and emit a long-format observable table.
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum)]
        sweep_param: SweepParam,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, default_value_t = 101)]
        n: usize,
        #[arg(long, value_enum)]
        observable: Observable,
        #[arg(long, default_value_t = config::default_phi(), allow_hyphen_values = true)]
        phi: f64,
    },
}

#[derive(Parser, Debug)]
#[command(
    name = "rfbeats",
    version,
    about = "Resonance-fluorescence statistics of a driven J=1/2 to J'=1/2 atom",
    subcommand_negates_reqs = true,
    args_conflicts_with_subcommands = false
)]
struct Cli {
    /// Run from a JSON config file instead of a subcommand.
    #[arg(long, conflicts_with = "preset")]
    config: Option<String>,
    /// Run a named figure preset (see the README for the list).
    #[arg(long)]
    preset: Option<String>,
    /// Print the resolved run config as JSON and exit without running.
    #[arg(long, global = true)]
    dump_config: bool,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<String>,
    /// csv or json; series default to csv, scalar reports to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Option<Command>,
}

fn command_to_task(cmd: &Command) -> Result<(Task, Params), CliError> {
    let (task, params) = match cmd {
        Command::Steady { params } => (Task::Steady, params),
        Command::Evolve {
            params,
            grid,
            initial_state,
        } => (
            Task::Evolve {
                t_max: grid.t_max,
                n_t: grid.n_t,
                initial_state: InitialStateSpec::parse_flag(initial_state)
                    .map_err(CliError::Config)?,
            },
            params,
        ),
        Command::Intensity {
            params,
            grid,
            initial_state,
        } => (
            Task::Intensity {
                t_max: grid.t_max,
                n_t: grid.n_t,
                initial_state: InitialStateSpec::parse_flag(initial_state)
                    .map_err(CliError::Config)?,
            },
            params,
        ),
        Command::G2 { params, grid } => (
            Task::G2 {
                t_max: grid.t_max,
                n_t: grid.n_t,
            },
            params,
        ),
        Command::Aic { params, grid, phi } => (
            Task::Aic {
                t_max: grid.t_max,
                n_t: grid.n_t,
                phi: *phi,
            },
            params,
        ),
        Command::Spectrum { params, grid } => (
            Task::Spectrum {
                omega_max: grid.omega_max,
                n_omega: grid.n_omega,
            },
            params,
        ),
        Command::Qspectrum { params, grid, phi } => (
            Task::Qspectrum {
                phi: *phi,
                omega_max: grid.omega_max,
                n_omega: grid.n_omega,
            },
            params,
        ),
        Command::Variance { params, phi } => (Task::Variance { phi: *phi }, params),
        Command::Interference { params } => (Task::Interference, params),
        Command::Dressed { params } => (Task::Dressed, params),
        Command::Beats {
            params,
            grid,
            a33,
            a44,
        } => (
            Task::Beats {
                t_max: grid.t_max,
                n_t: grid.n_t,
                a33: *a33,
                a44: *a44,
            },
            params,
        ),
        Command::Sweep {
            params,
            sweep_param,
            from,
            to,
            n,
            observable,
            phi,
        } => (
            Task::Sweep {
                param: *sweep_param,
                from: *from,
                to: *to,
                n: *n,
                observable: *observable,
                phi: *phi,
            },
            params,
        ),
    };
    Ok((task, params.to_params()))
}

fn resolve_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut config = if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str::<RunConfig>(&text)
            .map_err(|e| CliError::Config(format!("{path}: {e}")))?
    } else if let Some(name) = &cli.preset {
        presets::preset(name)?
    } else if let Some(cmd) = &cli.command {
        let (task, params) = command_to_task(cmd)?;
        RunConfig {
            task,
            params,
            format: None,
            output: None,
        }
    } else {
        return Err(CliError::Config(
            "nothing to run: give a subcommand, --preset or --config (see --help)".into(),
        ));
    };
    if cli.format.is_some() {
        config.format = cli.format;
    }
    if cli.output.is_some() {
        config.output = cli.output.clone();
    }
    Ok(config)
}

fn deliver(text: &str, output: &Option<String>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let stdout = std::io::stdout();
            stdout.lock().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn run() -> Result<(), CliError> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return Ok(());
            }
            return Err(CliError::Config(e.to_string()));
        }
    };
    let config = resolve_config(&cli)?;
    config.validate()?;
    if cli.dump_config {
        let mut s = serde_json::to_string_pretty(&config).expect("config serializes");
        s.push('\n');
        return deliver(&s, &config.output);
    }
    let text = runner::execute(&config)?;
    deliver(&text, &config.output)
}

pub fn cli_main() -> i32 {
    match run() {
        Ok(()) => 0,
        Err(CliError::Config(msg)) => {
            eprintln!("config error: {msg}");
            1
        }
        Err(CliError::Io(e)) => {
            eprintln!("io error: {e}");
            1
        }
        Err(CliError::Physics(e)) => {
            eprintln!("Error[{}]: {e}", e.name());
            2
        }
    }
}
