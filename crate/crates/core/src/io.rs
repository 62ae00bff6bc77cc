//! Aircraft and scenario file formats, and trajectory CSV output.
//!
//! Aircraft file (TOML): `u0`, `g` at top level and one `[derivatives]` entry
//! per Table-style derivative. Scenario file (TOML): aircraft path, weights,
//! microburst parameters, simulation settings and output directory.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result as CoreResult;
use crate::riccati::LqrWeights;
use crate::sim::{SimConfig, Trajectory};
use crate::statespace::{assemble_model, FlightCondition, LongitudinalModel, StabilityDerivatives};
use crate::wind::{Interpretation, MicroburstProfile};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error(transparent)]
    Model(#[from] crate::error::Error),
}

pub type Result<T> = std::result::Result<T, IoError>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AircraftFile {
    /// Trim airspeed, m/s.
    pub u0: f64,
    /// Gravitational acceleration, m/s².
    pub g: f64,
    pub derivatives: StabilityDerivatives,
}

pub fn load_aircraft(path: &Path) -> Result<AircraftFile> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    toml::from_str(&text).map_err(|e| IoError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn model_from_aircraft(file: &AircraftFile) -> CoreResult<LongitudinalModel> {
    assemble_model(&file.derivatives, FlightCondition { u0: file.u0, g: file.g })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightsSection {
    /// Diagonal of Q, 5 entries.
    pub q_diag: Vec<f64>,
    /// Scalar control weight.
    pub r: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimSection {
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_t_final")]
    pub t_final: f64,
}

fn default_dt() -> f64 {
    1e-3
}

fn default_t_final() -> f64 {
    100.0
}

impl Default for SimSection {
    fn default() -> Self {
        Self { dt: default_dt(), t_final: default_t_final() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioFile {
    /// Aircraft file path, relative to the scenario file's directory.
    pub aircraft: PathBuf,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    pub weights: WeightsSection,
    #[serde(default)]
    pub microburst: MicroburstProfile,
    #[serde(default)]
    pub sim: SimSection,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

/// A fully resolved scenario: parsed files, validated numbers.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub aircraft: AircraftFile,
    pub model: LongitudinalModel,
    pub weights: LqrWeights,
    pub microburst: MicroburstProfile,
    pub sim: SimSection,
    pub out_dir: PathBuf,
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let file: ScenarioFile = toml::from_str(&text).map_err(|e| IoError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;

    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let aircraft_path = base.join(&file.aircraft);
    let aircraft = load_aircraft(&aircraft_path)?;
    let model = model_from_aircraft(&aircraft)?;

    if file.weights.q_diag.len() != 5 {
        return Err(IoError::Parse {
            path: path.to_path_buf(),
            message: format!("weights.q_diag must have 5 entries, got {}", file.weights.q_diag.len()),
        });
    }
    let weights = LqrWeights::diagonal(&file.weights.q_diag, file.weights.r)?;
    file.microburst.validate()?;
    let cfg = SimConfig { dt: file.sim.dt, t_final: file.sim.t_final, ..Default::default() };
    cfg.validate()?;

    Ok(Scenario {
        aircraft,
        model,
        weights,
        microburst: file.microburst,
        sim: file.sim,
        out_dir: file.out_dir,
    })
}

/// Write the trajectory CSV: `t,u,alpha,q,theta,h,delta_e,u_g,w_g,alpha_g`,
/// angles in degrees, one row per grid point.
pub fn write_trajectory_csv(path: &Path, traj: &Trajectory) -> Result<()> {
    let mut buf = String::with_capacity(traj.len() * 96);
    buf.push_str("t,u,alpha,q,theta,h,delta_e,u_g,w_g,alpha_g\n");
    for k in 0..traj.len() {
        let x = &traj.states[k];
        let g = &traj.gusts[k];
        buf.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            traj.times[k],
            x[0],
            x[1].to_degrees(),
            x[2].to_degrees(),
            x[3].to_degrees(),
            x[4],
            traj.controls[k].to_degrees(),
            g.u_g,
            g.w_g,
            g.alpha_g.to_degrees(),
        ));
    }
    write_file(path, buf.as_bytes())
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|source| IoError::Write {
                path: path.to_path_buf(),
                source,
            })?;
        }
    }
    let mut f = fs::File::create(path).map_err(|source| IoError::Write {
        path: path.to_path_buf(),
        source,
    })?;
    f.write_all(bytes).map_err(|source| IoError::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// CLI-side interpretation parsing (`hertz`/`hz` or `rad`/`radians_per_second`).
pub fn parse_interpretation(s: &str) -> Option<Interpretation> {
    match s.to_ascii_lowercase().as_str() {
        "hertz" | "hz" => Some(Interpretation::Hertz),
        "rad" | "rads" | "radians_per_second" | "rad_per_s" => {
            Some(Interpretation::RadiansPerSecond)
        }
        _ => None,
    }
}
