//! JSON run configuration.
//!
//! A config file is one JSON document with two optional sub-objects:
//!
//! ```json
//! {
//!   "spin_system": { "freq_a_mhz": 500.13, "freq_b_mhz": 125.77, "j_hz": 215.0,
//!                    "t2_a_s": 1.0, "t2_b_s": 0.3, "epsilon": 1e-5 },
//!   "noise": { "rf_spread": 0.04, "calib_offset": 0.02, "offset_spread_hz": 20.0,
//!              "t2_a_s": 1.0, "t2_b_s": 0.3, "ensemble_size": 1000, "seed": 0 }
//! }
//! ```
//!
//! Every field is optional. Missing spin-system fields take the defaults
//! shown. Missing noise fields are zero, except `ensemble_size` (1000),
//! `seed` (0) and the decay times, which fall back to the spin system's.

use std::fs;
use std::path::{Path, PathBuf};

use densecode_core::experiment::DEFAULT_EPSILON;
use densecode_core::nmrsim::{
    SpinSystem, DEFAULT_FREQ_A_MHZ, DEFAULT_FREQ_B_MHZ, DEFAULT_J_HZ, DEFAULT_T2_A_S, DEFAULT_T2_B_S,
};
use densecode_core::noise::ErrorParams;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_ENSEMBLE_SIZE: usize = 1000;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub spin_system: SpinSystemConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseConfig>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpinSystemConfig {
    pub freq_a_mhz: f64,
    pub freq_b_mhz: f64,
    pub j_hz: f64,
    pub t2_a_s: f64,
    pub t2_b_s: f64,
    pub epsilon: f64,
}

impl Default for SpinSystemConfig {
    fn default() -> Self {
        SpinSystemConfig {
            freq_a_mhz: DEFAULT_FREQ_A_MHZ,
            freq_b_mhz: DEFAULT_FREQ_B_MHZ,
            j_hz: DEFAULT_J_HZ,
            t2_a_s: DEFAULT_T2_A_S,
            t2_b_s: DEFAULT_T2_B_S,
            epsilon: DEFAULT_EPSILON,
        }
    }
}

impl SpinSystemConfig {
    pub fn spin_system(&self) -> Result<SpinSystem, CliError> {
        Ok(SpinSystem::new(self.freq_a_mhz, self.freq_b_mhz, self.j_hz, self.t2_a_s, self.t2_b_s)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    pub rf_spread: f64,
    pub calib_offset: f64,
    pub offset_spread_hz: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t2_a_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t2_b_s: Option<f64>,
    pub ensemble_size: usize,
    pub seed: u64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            rf_spread: 0.0,
            calib_offset: 0.0,
            offset_spread_hz: 0.0,
            t2_a_s: None,
            t2_b_s: None,
            ensemble_size: DEFAULT_ENSEMBLE_SIZE,
            seed: 0,
        }
    }
}

impl NoiseConfig {
    /// The shipped demonstration parameters.
    pub fn demo() -> Self {
        let p = ErrorParams::calibrated_demo();
        NoiseConfig {
            rf_spread: p.rf_spread,
            calib_offset: p.calib_offset,
            offset_spread_hz: p.offset_spread_hz,
            t2_a_s: Some(p.t2_a_s),
            t2_b_s: Some(p.t2_b_s),
            ensemble_size: p.ensemble_size,
            seed: 0,
        }
    }

    pub fn error_params(&self, sys: &SpinSystem) -> Result<ErrorParams, CliError> {
        let p = ErrorParams {
            rf_spread: self.rf_spread,
            calib_offset: self.calib_offset,
            offset_spread_hz: self.offset_spread_hz,
            t2_a_s: self.t2_a_s.unwrap_or(sys.t2_a_s),
            t2_b_s: self.t2_b_s.unwrap_or(sys.t2_b_s),
            ensemble_size: self.ensemble_size,
        };
        p.validate()?;
        Ok(p)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn bad(path: &Path, e: serde_json::Error) -> CliError {
    CliError::Config { path: PathBuf::from(path), message: e.to_string() }
}

pub fn parse_config(text: &str) -> Result<ConfigFile, serde_json::Error> {
    serde_json::from_str(text)
}

pub fn load_config(path: &Path) -> Result<ConfigFile, CliError> {
    parse_config(&read(path)?).map_err(|e| bad(path, e))
}

/// Noise settings from either a full config document with a `noise`
/// object or a bare noise object.
pub fn load_noise(path: &Path) -> Result<NoiseConfig, CliError> {
    let text = read(path)?;
    if let Ok(ConfigFile { noise: Some(n), .. }) = parse_config(&text) {
        return Ok(n);
    }
    serde_json::from_str(&text).map_err(|e| bad(path, e))
}
