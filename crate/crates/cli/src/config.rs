//! JSON run configuration. Every section is optional and falls back to the
//! defaults below; unknown keys are rejected.
//!
//! ```json
//! {
//!   "units": { "c": 1.0, "hbar": 1.0 },
//!   "grid": { "n": 16, "L": 6.283185307179586 },
//!   "state": { "preset": "pair", "k_r": 1.0, "k_l": 2.0, "intensity": 1.0 },
//!   "boost": { "direction": [1.0, 0.0, 0.0], "u": 0.5 },
//!   "evolve": { "times": [0.0, 1.0, 2.0], "normalize": false, "write_flow": false },
//!   "audit": { "tolerance": 1e-9 },
//!   "trajectories": { "guidance": "phi_based", "count": 64, "t1": 1.0, "step": 0.01 },
//!   "doubleslit": { "geometry": { "n": 64, "tilt_modes": 8 }, "times": [0.0, 4.0, 8.0] }
//! }
//! ```
//!
//! A state is one of a preset (`single`: right-handed wave along `+z`;
//! `pair`: that wave plus a left-handed one along `−z`; `zero`), an explicit
//! `components` list of `{ "k": [kx, ky, kz], "I": …, "handedness":
//! "right" | "left", "phase": … }`, or a `field_file` written in the binary
//! grid format (evolve only).

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use photonwf::bohm::Guidance;
use photonwf::doubleslit::DoubleSlitConfig;
use photonwf::grid::{GridSpec, Units};
use photonwf::lorentz::{Boost, AUDIT_TOLERANCE};
use photonwf::planewave::{CircularPlaneWave, Handedness, PlaneWaveSuperposition};
use photonwf::vecmath::Vec3;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub units: UnitsConfig,
    pub grid: GridConfig,
    pub state: StateConfig,
    pub boost: Option<BoostConfig>,
    pub evolve: EvolveConfig,
    pub audit: AuditConfig,
    pub trajectories: TrajectoryConfig,
    pub doubleslit: DoubleSlitRun,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UnitsConfig {
    pub c: f64,
    pub hbar: f64,
}

impl Default for UnitsConfig {
    fn default() -> Self {
        Self { c: 1.0, hbar: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    #[serde(rename = "L")]
    pub box_length: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            n: 16,
            box_length: 2.0 * std::f64::consts::PI,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Single,
    Pair,
    Zero,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentConfig {
    pub k: [f64; 3],
    #[serde(rename = "I")]
    pub intensity: f64,
    #[serde(default = "right")]
    pub handedness: Handedness,
    #[serde(default)]
    pub phase: f64,
}

fn right() -> Handedness {
    Handedness::Right
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StateConfig {
    pub preset: Option<Preset>,
    pub components: Option<Vec<ComponentConfig>>,
    pub field_file: Option<PathBuf>,
    pub k_r: f64,
    pub k_l: f64,
    pub intensity: f64,
}

impl Default for StateConfig {
    fn default() -> Self {
        Self {
            preset: None,
            components: None,
            field_file: None,
            k_r: 1.0,
            k_l: 2.0,
            intensity: 1.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoostConfig {
    pub direction: [f64; 3],
    /// Speed in units of `c`.
    pub u: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolveConfig {
    pub times: Vec<f64>,
    /// Rescale the initial field to exactly one photon.
    pub normalize: bool,
    /// Also write `flow_<i>.csv` with the photon density and current.
    pub write_flow: bool,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        Self {
            times: vec![0.0, 1.0, 2.0],
            normalize: false,
            write_flow: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AuditConfig {
    pub tolerance: f64,
    /// Boost speed in units of `c` for the four scenarios.
    pub u: f64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            tolerance: AUDIT_TOLERANCE,
            u: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    Lab,
    Boosted,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrajectoryConfig {
    pub guidance: Guidance,
    /// Frame the trajectories are integrated in; `boosted` needs `boost`.
    pub frame: Frame,
    /// Explicit start points; when absent, `count` points are drawn from
    /// the density at `t0` inside the sampling box.
    pub starts: Option<Vec<[f64; 3]>>,
    pub count: usize,
    pub sample_origin: [f64; 3],
    /// Edge lengths of the sampling box; defaults to one longest
    /// wavelength of the state per axis.
    pub sample_extent: Option<[f64; 3]>,
    pub t0: f64,
    pub t1: f64,
    pub step: f64,
    pub node_floor: f64,
}

impl Default for TrajectoryConfig {
    fn default() -> Self {
        Self {
            guidance: Guidance::PhiBased,
            frame: Frame::Lab,
            starts: None,
            count: 64,
            sample_origin: [0.0; 3],
            sample_extent: None,
            t0: 0.0,
            t1: 1.0,
            step: 1e-2,
            node_floor: photonwf::bohm::DEFAULT_NODE_FLOOR,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DoubleSlitRun {
    pub geometry: DoubleSlitConfig,
    pub times: Vec<f64>,
}

impl Default for DoubleSlitRun {
    fn default() -> Self {
        Self {
            geometry: DoubleSlitConfig::default(),
            times: vec![0.0, 4.0, 8.0],
        }
    }
}

/// What a state section resolves to.
pub enum StateSource {
    Analytic(PlaneWaveSuperposition),
    File(PathBuf),
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let config: Config = serde_json::from_str(&text)
            .with_context(|| format!("invalid config {}", path.display()))?;
        Ok(config)
    }

    pub fn units(&self) -> Result<Units> {
        Units::new(self.units.c, self.units.hbar).context("config field `units`")
    }

    pub fn spec(&self) -> Result<GridSpec> {
        GridSpec::new(self.grid.n, self.grid.box_length, self.units()?)
            .context("config field `grid`")
    }

    pub fn boost(&self) -> Result<Option<Boost>> {
        self.boost
            .as_ref()
            .map(|b| {
                Boost::along(Vec3::from(b.direction), b.u, &self.units()?)
                    .context("config field `boost`")
            })
            .transpose()
    }

    pub fn state_source(&self, default: Preset) -> Result<StateSource> {
        let s = &self.state;
        let chosen = [
            s.preset.is_some(),
            s.components.is_some(),
            s.field_file.is_some(),
        ]
        .iter()
        .filter(|b| **b)
        .count();
        if chosen > 1 {
            bail!("config field `state`: give only one of `preset`, `components`, `field_file`");
        }
        if let Some(path) = &s.field_file {
            return Ok(StateSource::File(path.clone()));
        }
        let units = self.units()?;
        let state = if let Some(list) = &s.components {
            let components = list
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    CircularPlaneWave::new(Vec3::from(c.k), c.intensity, c.handedness, c.phase)
                        .with_context(|| format!("config field `state.components[{i}]`"))
                })
                .collect::<Result<Vec<_>>>()?;
            PlaneWaveSuperposition::new(components, units)
        } else {
            self.preset_state(s.preset.unwrap_or(default), units)?
        };
        Ok(StateSource::Analytic(state))
    }

    pub fn preset_state(&self, preset: Preset, units: Units) -> Result<PlaneWaveSuperposition> {
        let s = &self.state;
        let state = match preset {
            Preset::Single => PlaneWaveSuperposition::single_circular(s.k_r, s.intensity, units),
            Preset::Pair => {
                PlaneWaveSuperposition::counter_propagating(s.k_r, s.k_l, s.intensity, units)
            }
            Preset::Zero => Ok(PlaneWaveSuperposition::empty(units)),
        };
        state.context("config field `state`")
    }

    /// The analytic state, refusing field files.
    pub fn analytic_state(&self, default: Preset, command: &str) -> Result<PlaneWaveSuperposition> {
        match self.state_source(default)? {
            StateSource::Analytic(s) => Ok(s),
            StateSource::File(_) => bail!(
                "`{command}` needs a plane-wave state; `state.field_file` is only read by `evolve`"
            ),
        }
    }
}
