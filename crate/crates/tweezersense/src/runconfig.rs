//! JSON run configuration for the command-line front end.
//!
//! One strict JSON document, SI units throughout (meters, watts). Unknown
//! keys are rejected. Every field has a default matching the reference
//! parameter set, so `{}` is a valid config.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use crate::error::TweezerError;
use crate::field::Polarization;
use crate::optics::TweezerConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub wavelength_m: f64,
    pub trap_power_w: f64,
    pub trap_waist_m: f64,
    pub objective_focal_m: f64,
    pub numerical_aperture: f64,
    pub medium_index: f64,
    pub particle_radius_m: f64,
    pub eps_medium: f64,
    pub eps_particle: f64,
    pub polarization: Polarization,
    pub grid: GridSpec,
    /// Sweep axis; when absent each command uses its documented default.
    pub sweep: Option<SweepSpec>,
    /// Displacement the homodyne LO is optimized for.
    pub lo_p0_m: f64,
    pub outputs: OutputSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        let t = TweezerConfig::reference();
        Self {
            wavelength_m: t.wavelength,
            trap_power_w: t.trap_power,
            trap_waist_m: t.trap_waist,
            objective_focal_m: t.objective_focal,
            numerical_aperture: t.numerical_aperture,
            medium_index: t.medium_index,
            particle_radius_m: t.particle_radius,
            eps_medium: t.eps_medium,
            eps_particle: t.eps_particle,
            polarization: t.polarization,
            grid: GridSpec::default(),
            sweep: None,
            lo_p0_m: 0.0,
            outputs: OutputSpec::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    /// Samples per axis of the square objective-plane window.
    pub samples: usize,
    /// Window size in units of the aperture radius.
    pub padding_factor: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            samples: 512,
            padding_factor: 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub quantity: SweepQuantity,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepQuantity {
    Displacement,
    Na,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub directory: PathBuf,
    pub formats: Vec<OutputFormat>,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("out"),
            formats: vec![OutputFormat::Csv],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Bin,
}

impl RunConfig {
    pub fn from_json_str(s: &str) -> Result<Self, TweezerError> {
        let cfg: RunConfig = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, TweezerError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    /// The physical configuration this run describes.
    pub fn tweezer(&self) -> TweezerConfig {
        TweezerConfig {
            wavelength: self.wavelength_m,
            trap_power: self.trap_power_w,
            trap_waist: self.trap_waist_m,
            objective_focal: self.objective_focal_m,
            numerical_aperture: self.numerical_aperture,
            medium_index: self.medium_index,
            particle_radius: self.particle_radius_m,
            eps_medium: self.eps_medium,
            eps_particle: self.eps_particle,
            polarization: self.polarization,
        }
    }

    /// Validate everything that can be checked before any computation.
    pub fn validate(&self) -> Result<(), TweezerError> {
        self.tweezer().validate()?;
        if self.grid.samples < 16 || !self.grid.samples.is_multiple_of(2) {
            return Err(TweezerError::InvalidConfig(format!(
                "grid.samples must be even and >= 16, got {}",
                self.grid.samples
            )));
        }
        if self.grid.padding_factor < 2.0 || !self.grid.padding_factor.is_finite() {
            return Err(TweezerError::InvalidConfig(format!(
                "grid.padding_factor must be >= 2, got {}",
                self.grid.padding_factor
            )));
        }
        if !self.lo_p0_m.is_finite() || self.lo_p0_m.abs() > 3.0 * self.trap_waist_m {
            return Err(TweezerError::InvalidConfig(format!(
                "lo_p0_m must lie within ±3 trap waists, got {}",
                self.lo_p0_m
            )));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.count < 2 {
                return Err(TweezerError::InvalidConfig(
                    "sweep.count must be at least 2".into(),
                ));
            }
            if !sweep.start.is_finite() || !sweep.stop.is_finite() || sweep.start >= sweep.stop {
                return Err(TweezerError::InvalidConfig(format!(
                    "sweep range [{}, {}] must be finite and increasing",
                    sweep.start, sweep.stop
                )));
            }
            match sweep.quantity {
                SweepQuantity::Displacement => {
                    let bound = 3.0 * self.trap_waist_m;
                    if sweep.start.abs() > bound || sweep.stop.abs() > bound {
                        return Err(TweezerError::InvalidConfig(format!(
                            "displacement sweep must stay within ±3 w_T = ±{bound:.3e} m"
                        )));
                    }
                }
                SweepQuantity::Na => {
                    if sweep.start <= 0.0 || sweep.stop >= self.medium_index {
                        return Err(TweezerError::InvalidConfig(format!(
                            "NA sweep must stay within (0, medium_index = {})",
                            self.medium_index
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Evenly spaced sweep values; `count` points from `start` to `stop`
    /// inclusive.
    pub fn sweep_values(spec: &SweepSpec) -> Vec<f64> {
        let n = spec.count;
        (0..n)
            .map(|i| spec.start + (spec.stop - spec.start) * i as f64 / (n - 1) as f64)
            .collect()
    }

    /// Canonical single-line JSON form, embedded in output headers.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("RunConfig serializes")
    }
}
