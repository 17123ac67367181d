//! JSON scattering report written by a simulation run.

use super::windows::{CauchyWindows, PhaseFit, Window};
use crate::error::Result;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Phase history of one Klein-Gordon mode.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrackedMode {
    /// Integer wave vector `m` with `ξ = m dk`.
    pub m: [i64; 3],
    pub xi: [f64; 3],
    pub times: Vec<f64>,
    /// Principal-value phase of `V^kg(ξ, t)`.
    pub raw_phase: Vec<f64>,
    /// Principal-value phase of `V*(ξ, t)`.
    pub renormalized_phase: Vec<f64>,
    pub modulus: Vec<f64>,
    pub theta: Vec<f64>,
    pub raw_fit: Option<PhaseFit>,
    pub renormalized_fit: Option<PhaseFit>,
}

/// `Θ` at one snapshot time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaSample {
    pub t: f64,
    pub max_abs: f64,
    /// Values at the tracked modes, in the order of `tracked`.
    pub tracked: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ScatteringReport {
    pub snapshot_times: Vec<f64>,
    /// Absent when fewer than three dyadic windows were recorded.
    pub windows: Option<CauchyWindows>,
    pub wave_windows: Option<Vec<Window>>,
    pub tracked: Vec<TrackedMode>,
    pub theta: Vec<ThetaSample>,
    /// Largest `| |V*| - |V^kg| |` seen at any recorded time.
    pub max_modulus_defect: f64,
}

impl ScatteringReport {
    pub fn save(&self, path: &Path) -> Result<()> {
        let f = std::io::BufWriter::new(std::fs::File::create(path)?);
        serde_json::to_writer_pretty(f, self)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::io::BufReader::new(std::fs::File::open(path)?);
        Ok(serde_json::from_reader(f)?)
    }
}
