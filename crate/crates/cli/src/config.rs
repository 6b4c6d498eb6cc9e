//! Serializable run configuration: the JSON schema accepted by `--config`
//! and emitted by `--dump-config`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use rfbeats::model::BlochVector;
use rfbeats::PhysParams;

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Params {
    pub omega: f64,
    #[serde(default)]
    pub delta_l: f64,
    #[serde(default)]
    pub delta_z: f64,
    #[serde(default = "one")]
    pub gamma: f64,
    #[serde(default)]
    pub b_ell: f64,
    #[serde(default = "one")]
    pub f_pi: f64,
}

fn one() -> f64 {
    1.0
}

impl Params {
    pub fn to_phys(&self) -> PhysParams {
        PhysParams {
            omega: self.omega,
            delta_l: self.delta_l,
            delta_z: self.delta_z,
            gamma: self.gamma,
            b_ell: self.b_ell,
            f_pi: self.f_pi,
        }
    }
}

/// Initial state: a named preset or eight [re, im] pairs in the Bloch
/// ordering (A11, A13, A22, A24, A31, A33, A42, A44).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum InitialStateSpec {
    Named(String),
    Raw(Vec<[f64; 2]>),
}

impl Default for InitialStateSpec {
    fn default() -> Self {
        InitialStateSpec::Named("ground3".into())
    }
}

impl InitialStateSpec {
    pub fn parse_flag(s: &str) -> Result<Self, String> {
        if s.contains(',') {
            let parts: Vec<&str> = s.split(',').collect();
            if parts.len() != 8 {
                return Err(format!(
                    "raw initial state needs 8 comma-separated complex entries, got {}",
                    parts.len()
                ));
            }
            let mut raw = Vec::with_capacity(8);
            for part in parts {
                let z: Complex64 = part
                    .trim()
                    .parse()
                    .map_err(|_| format!("cannot parse complex entry '{part}'"))?;
                raw.push([z.re, z.im]);
            }
            Ok(InitialStateSpec::Raw(raw))
        } else {
            Ok(InitialStateSpec::Named(s.to_string()))
        }
    }

    pub fn to_state(&self) -> Result<rfbeats::dynamics::InitialState, CliError> {
        use rfbeats::dynamics::InitialState;
        match self {
            InitialStateSpec::Named(name) => match name.as_str() {
                "ground3" => Ok(InitialState::Ground3),
                "ground4" => Ok(InitialState::Ground4),
                "equal-ground" => Ok(InitialState::EqualGround),
                "steady" => Ok(InitialState::Steady),
                other => Err(CliError::Config(format!(
                    "unknown initial state '{other}'; expected ground3, ground4, \
                     equal-ground, steady, or 8 comma-separated complex entries"
                ))),
            },
            InitialStateSpec::Raw(entries) => {
                if entries.len() != 8 {
                    return Err(CliError::Config(format!(
                        "raw initial state needs 8 entries, got {}",
                        entries.len()
                    )));
                }
                let v: BlochVector = entries
                    .iter()
                    .map(|&[re, im]| Complex64::new(re, im))
                    .collect();
                Ok(InitialState::Custom(v))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    Omega,
    DeltaL,
    DeltaZ,
}

impl SweepParam {
    pub fn label(&self) -> &'static str {
        match self {
            SweepParam::Omega => "omega",
            SweepParam::DeltaL => "delta_l",
            SweepParam::DeltaZ => "delta_z",
        }
    }

    pub fn apply(&self, p: &mut PhysParams, value: f64) {
        match self {
            SweepParam::Omega => p.omega = value,
            SweepParam::DeltaL => p.delta_l = value,
            SweepParam::DeltaZ => p.delta_z = value,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    Steady,
    Variance,
    Interference,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "subcommand", rename_all = "snake_case")]
pub enum Task {
    Steady,
    Evolve {
        t_max: f64,
        n_t: usize,
        initial_state: InitialStateSpec,
    },
    Intensity {
        t_max: f64,
        n_t: usize,
        initial_state: InitialStateSpec,
    },
    G2 {
        t_max: f64,
        n_t: usize,
    },
    Aic {
        t_max: f64,
        n_t: usize,
        phi: f64,
    },
    Spectrum {
        #[serde(default)]
        omega_max: Option<f64>,
        #[serde(default = "default_n_omega")]
        n_omega: usize,
    },
    Qspectrum {
        phi: f64,
        #[serde(default)]
        omega_max: Option<f64>,
        #[serde(default = "default_n_omega")]
        n_omega: usize,
    },
    Variance {
        phi: f64,
    },
    Interference,
    Dressed,
    Beats {
        t_max: f64,
        n_t: usize,
        a33: f64,
        a44: f64,
    },
    Sweep {
        param: SweepParam,
        from: f64,
        to: f64,
        n: usize,
        observable: Observable,
        #[serde(default = "default_phi")]
        phi: f64,
    },
}

fn default_n_omega() -> usize {
    2001
}

pub fn default_phi() -> f64 {
    std::f64::consts::FRAC_PI_2
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Steady => "steady",
            Task::Evolve { .. } => "evolve",
            Task::Intensity { .. } => "intensity",
            Task::G2 { .. } => "g2",
            Task::Aic { .. } => "aic",
            Task::Spectrum { .. } => "spectrum",
            Task::Qspectrum { .. } => "qspectrum",
            Task::Variance { .. } => "variance",
            Task::Interference => "interference",
            Task::Dressed => "dressed",
            Task::Beats { .. } => "beats",
            Task::Sweep { .. } => "sweep",
        }
    }

    /// Scalar tasks default to JSON, series tasks to CSV.
    pub fn default_format(&self) -> Format {
        match self {
            Task::Steady | Task::Variance { .. } | Task::Interference | Task::Dressed => {
                Format::Json
            }
            _ => Format::Csv,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunConfig {
    #[serde(flatten)]
    pub task: Task,
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl RunConfig {
    pub fn format(&self) -> Format {
        self.format.unwrap_or_else(|| self.task.default_format())
    }

    /// Config echoed into output comments; the output path is dropped so the
    /// bytes do not depend on where they are written.
    pub fn echo_json(&self) -> String {
        let mut c = self.clone();
        c.output = None;
        serde_json::to_string(&c).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let cfg = |reason: String| Err(CliError::Config(reason));
        let grid = |t_max: f64, n_t: usize| {
            if !(t_max > 0.0) {
                return cfg(format!("t_max must be positive, got {t_max}"));
            }
            if n_t < 2 {
                return cfg(format!("n_t must be at least 2, got {n_t}"));
            }
            Ok(())
        };
        match &self.task {
            Task::Evolve { t_max, n_t, .. }
            | Task::Intensity { t_max, n_t, .. }
            | Task::G2 { t_max, n_t }
            | Task::Aic { t_max, n_t, .. }
            | Task::Beats { t_max, n_t, .. } => grid(*t_max, *n_t)?,
            Task::Spectrum { omega_max, n_omega }
            | Task::Qspectrum {
                omega_max, n_omega, ..
            } => {
                if let Some(w) = omega_max {
                    if !(*w > 0.0) {
                        return cfg(format!("omega_max must be positive, got {w}"));
                    }
                }
                if *n_omega < 2 {
                    return cfg(format!("n_omega must be at least 2, got {n_omega}"));
                }
            }
            Task::Sweep { from, to, n, .. } => {
                if *n < 2 {
                    return cfg(format!("sweep needs at least 2 points, got {n}"));
                }
                if !(from.is_finite() && to.is_finite()) || from >= to {
                    return cfg(format!("sweep range [{from}, {to}] must be finite and increasing"));
                }
            }
            _ => {}
        }
        self.params
            .to_phys()
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(())
    }
}
