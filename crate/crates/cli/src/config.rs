use std::path::{Path, PathBuf};

use dj_nmr::functions::BinaryFunction;
use dj_nmr::spectroscopy::{Acquisition, Realization, StateKind};
use dj_nmr::spin_system::SpinSystem;
use serde::Deserialize;

/// Settings for one `run`, loadable from JSON. Command-line flags override
/// file values.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub function: Option<String>,
    pub state: Option<StateKind>,
    pub realization: Option<Realization>,
    pub system: Option<PathBuf>,
    pub dwell_us: Option<f64>,
    pub points: Option<usize>,
    pub zero_fill: Option<usize>,
    pub linewidth_hz: Option<f64>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn function(&self) -> Result<BinaryFunction, String> {
        self.function
            .as_deref()
            .ok_or_else(|| "--function is required".to_string())?
            .parse()
            .map_err(|e: dj_nmr::Error| e.to_string())
    }
}

/// Acquisition and system flags shared by the simulation commands.
#[derive(Clone, Debug, Default)]
pub struct SimulationSettings {
    pub system: Option<PathBuf>,
    pub dwell_us: Option<f64>,
    pub points: Option<usize>,
    pub zero_fill: Option<usize>,
    pub linewidth_hz: Option<f64>,
}

impl SimulationSettings {
    pub fn system(&self) -> Result<SpinSystem, dj_nmr::Error> {
        let sys = match &self.system {
            Some(p) => SpinSystem::from_path(p)?,
            None => SpinSystem::alanine(),
        };
        match self.linewidth_hz {
            Some(lw) => sys.with_linewidth(lw),
            None => Ok(sys),
        }
    }

    pub fn acquisition(&self) -> Result<Acquisition, dj_nmr::Error> {
        let d = Acquisition::default();
        let acq = Acquisition {
            dwell_s: self.dwell_us.map_or(d.dwell_s, |us| us * 1e-6),
            n_points: self.points.unwrap_or(d.n_points),
            zero_fill: self.zero_fill.unwrap_or(d.zero_fill),
        };
        acq.validate()?;
        Ok(acq)
    }
}

pub fn load_system(path: Option<&Path>) -> Result<SpinSystem, dj_nmr::Error> {
    match path {
        Some(p) => SpinSystem::from_path(p),
        None => Ok(SpinSystem::alanine()),
    }
}
