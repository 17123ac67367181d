//! Run configuration, read from and printed as TOML.

use crate::error::{Result, WkgError};
use crate::grid::SpectralGrid;
use crate::params::DyadicParams;
use crate::radial::RadialConfig;
use crate::system::initial::FieldName;
use crate::system::{CouplingCoefficients, DataComponent, InitialDataSpec};
use crate::Channel;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub dim: usize,
    pub n: usize,
    pub box_length: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { dim: 3, n: 64, box_length: 96.0 }
    }
}

impl GridConfig {
    pub fn build(&self) -> Result<SpectralGrid> {
        SpectralGrid::new(self.dim, self.n, self.box_length)
    }
}

/// How much room the box must leave around the data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BoxRule {
    /// `L >= 4 t_max + 2 R`.
    #[default]
    Strict,
    /// `L >= 2 t_max + 2 R`: the light cone of the data never meets its
    /// own periodic image.
    Relaxed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub eps0: f64,
    pub dt: f64,
    pub t_max: f64,
    pub box_rule: BoxRule,
    /// Snapshot file to continue from.
    pub resume_from: Option<PathBuf>,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            eps0: 1e-3,
            dt: 0.05,
            t_max: 20.0,
            box_rule: BoxRule::Strict,
            resume_from: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SnapshotConfig {
    /// Snapshots at `t = 1, 2, 4, ...` up to `t_max`.
    pub dyadic: bool,
    /// Extra snapshot times.
    pub times: Vec<f64>,
    /// Write binary snapshot files (they are always kept in memory for the
    /// scattering report).
    pub write_files: bool,
}

impl Default for SnapshotConfig {
    fn default() -> Self {
        SnapshotConfig { dyadic: true, times: Vec::new(), write_files: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiagnosticsConfig {
    /// Record every this many steps (and always at the last step).
    pub every: usize,
    pub z_norms: bool,
    pub energies: bool,
    pub sup_norms: bool,
    /// Weighted Sobolev smallness norms of the profiles.
    pub sobolev: bool,
    /// Supremum of the weighted profile record with one rotation.
    pub weighted_profiles: bool,
    /// Relative imaginary parts of the reconstructed `u`, `v`.
    pub reality: bool,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        DiagnosticsConfig {
            every: 10,
            z_norms: true,
            energies: true,
            sup_norms: true,
            sobolev: false,
            weighted_profiles: false,
            reality: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScatteringConfig {
    /// Accumulate `Θ` during the run.
    pub enabled: bool,
    /// Number of dominant Klein-Gordon modes whose phase is tracked.
    pub tracked_modes: usize,
    /// Explicit tracked modes (integer wave vectors), used instead of the
    /// dominant ones when non-empty.
    pub modes: Vec<[i64; 3]>,
    /// Sample the tracked phases every this many steps.
    pub track_every: usize,
    /// Phase fits use samples with `t >= fit_from`.
    pub fit_from: f64,
}

impl Default for ScatteringConfig {
    fn default() -> Self {
        ScatteringConfig {
            enabled: true,
            tracked_modes: 1,
            modes: Vec::new(),
            track_every: 1,
            fit_from: 2.0,
        }
    }
}

/// Protocol of the linear decay measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecayConfig {
    /// Grid holding the profile.
    pub n: usize,
    pub box_length: f64,
    /// Width of the Gaussian profile `exp(-|x|^2 / (2 w^2))`.
    pub width: f64,
    pub times: Vec<f64>,
    /// Sample points per axis; the cube `[-a, a]^3` with
    /// `a = min(1.1 t + 3 w, L/2)` is sampled.
    pub samples_per_axis: usize,
    pub window: [f64; 2],
}

impl Default for DecayConfig {
    fn default() -> Self {
        DecayConfig {
            n: 128,
            box_length: 96.0,
            width: 1.0,
            times: vec![5.0, 8.0, 12.0, 18.0, 27.0, 40.0],
            samples_per_axis: 64,
            window: [5.0, 40.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ResonanceConfig {
    pub b: Vec<f64>,
    pub samples: u64,
}

impl Default for ResonanceConfig {
    fn default() -> Self {
        ResonanceConfig { b: vec![1.0, 2.0, 4.0, 8.0], samples: 1_000_000 }
    }
}

/// Everything one invocation needs. Each subcommand reads its own section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    pub output: PathBuf,
    pub grid: GridConfig,
    pub coefficients: CouplingCoefficients,
    pub params: DyadicParams,
    pub run: RunSection,
    pub initial: InitialDataSpec,
    pub snapshots: SnapshotConfig,
    pub diagnostics: DiagnosticsConfig,
    pub scattering: ScatteringConfig,
    pub radial: RadialConfig,
    pub decay: DecayConfig,
    pub resonance: ResonanceConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            output: PathBuf::from("out"),
            grid: GridConfig::default(),
            coefficients: CouplingCoefficients::model(),
            params: DyadicParams::default(),
            run: RunSection::default(),
            initial: reference_data(2.5),
            snapshots: SnapshotConfig::default(),
            diagnostics: DiagnosticsConfig::default(),
            scattering: ScatteringConfig::default(),
            radial: RadialConfig::default(),
            decay: DecayConfig::default(),
            resonance: ResonanceConfig::default(),
        }
    }
}

/// `v = G_w`, `u_t = ΔG_w` with `G_w` a centered Gaussian of width `w`.
pub fn reference_data(width: f64) -> InitialDataSpec {
    InitialDataSpec {
        components: vec![
            DataComponent::Gaussian {
                field: FieldName::V,
                amplitude: 1.0,
                center: [0.0; 3],
                width,
                carrier: [0.0; 3],
                laplacian: false,
            },
            DataComponent::Gaussian {
                field: FieldName::UT,
                amplitude: 1.0,
                center: [0.0; 3],
                width,
                carrier: [0.0; 3],
                laplacian: true,
            },
        ],
    }
}

/// A Klein-Gordon packet on `U^kg` with carrier `(k, 0, 0)` and the wave
/// data of [`reference_data`], both of width `w`.
pub fn packet_data(carrier: f64, width: f64) -> InitialDataSpec {
    InitialDataSpec {
        components: vec![
            DataComponent::Packet {
                channel: Channel::KleinGordon,
                amplitude: 1.0,
                center: [0.0; 3],
                width,
                carrier: [carrier, 0.0, 0.0],
            },
            DataComponent::Gaussian {
                field: FieldName::UT,
                amplitude: 1.0,
                center: [0.0; 3],
                width,
                carrier: [0.0; 3],
                laplacian: true,
            },
        ],
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| WkgError::Config(format!("cannot parse config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| WkgError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| WkgError::Config(format!("cannot print config: {e}")))
    }

    /// Checks the rules of a 3-d (or 1-d) simulation run.
    pub fn validate_simulation(&self) -> Result<()> {
        let grid = self.grid.build()?;
        self.coefficients.validate()?;
        self.params.validate()?;
        let r = &self.run;
        if !(r.eps0 >= 0.0 && r.eps0.is_finite()) {
            return Err(WkgError::Config(format!("run.eps0 must be non-negative, got {}", r.eps0)));
        }
        if !(r.t_max >= 0.0 && r.t_max.is_finite()) {
            return Err(WkgError::Config(format!("run.t_max must be non-negative, got {}", r.t_max)));
        }
        let dt_max = 0.5f64.min(grid.box_length() / (4.0 * grid.n() as f64));
        if !(r.dt > 0.0 && r.dt <= dt_max) {
            return Err(WkgError::Config(format!(
                "time step rule violated: need 0 < dt <= min(0.5, L/(4n)) = {dt_max}, got dt = {}",
                r.dt
            )));
        }
        let steps = r.t_max / r.dt;
        if (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) {
            return Err(WkgError::Config(format!(
                "run.t_max = {} is not a whole number of steps dt = {}",
                r.t_max, r.dt
            )));
        }
        if grid.dim() == 3 {
            let radius = self.initial.radius();
            let factor = match r.box_rule {
                BoxRule::Strict => 4.0,
                BoxRule::Relaxed => 2.0,
            };
            let need = factor * r.t_max + 2.0 * radius;
            if grid.box_length() < need {
                return Err(WkgError::Config(format!(
                    "box rule violated: L = {} < {factor} t_max + 2 R = {need} (R = {radius})",
                    grid.box_length()
                )));
            }
        }
        let d = &self.diagnostics;
        if d.every == 0 || self.scattering.track_every == 0 {
            return Err(WkgError::Config("diagnostics.every and scattering.track_every must be positive".into()));
        }
        if self.snapshots.times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return Err(WkgError::Config("snapshot times must be finite and non-negative".into()));
        }
        Ok(())
    }

    pub fn validate_decay(&self) -> Result<()> {
        let d = &self.decay;
        SpectralGrid::new(3, d.n, d.box_length)?;
        if !(d.width > 0.0) || d.samples_per_axis < 2 {
            return Err(WkgError::Config("decay.width must be positive and samples_per_axis at least 2".into()));
        }
        if d.times.iter().any(|t| !(*t > 0.0)) {
            return Err(WkgError::Config("decay.times must be positive".into()));
        }
        Ok(())
    }

    pub fn validate_resonance(&self) -> Result<()> {
        if self.resonance.b.iter().any(|b| !(*b >= 1.0 && b.is_finite())) {
            return Err(WkgError::Config("resonance.b values must be at least 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_toml() {
        let c = RunConfig::default();
        let text = c.to_toml().unwrap();
        assert_eq!(RunConfig::from_toml(&text).unwrap(), c);
        assert!(c.validate_simulation().is_ok());
    }

    #[test]
    fn partial_file_fills_defaults() {
        let c = RunConfig::from_toml("seed = 5\n[run]\nt_max = 2.0\n").unwrap();
        assert_eq!(c.seed, 5);
        assert_eq!(c.run.t_max, 2.0);
        assert_eq!(c.grid, GridConfig::default());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_toml("sed = 5\n").is_err());
    }

    #[test]
    fn rules_name_what_failed() {
        let mut c = RunConfig::default();
        c.run.dt = 0.6;
        let e = c.validate_simulation().unwrap_err().to_string();
        assert!(e.contains("time step rule"), "{e}");
        let mut c = RunConfig::default();
        c.run.t_max = 32.0;
        let e = c.validate_simulation().unwrap_err().to_string();
        assert!(e.contains("box rule"), "{e}");
        c.run.box_rule = BoxRule::Relaxed;
        assert!(c.validate_simulation().is_ok());
        let mut c = RunConfig::default();
        c.coefficients.b[0][0] = 1.0;
        assert!(c.validate_simulation().is_err());
    }
}
