//! Shot-noise-limited particle sensing in optical tweezers.
//!
//! A trapped dielectric particle scatters a small fraction of the trapping
//! beam. The scattered and residual trapping fields are collected by the
//! objective, imaged into the far field and detected. This crate simulates
//! that chain and compares the two standard read-outs:
//!
//! * **split detection** — the difference photocurrent of a two-segment
//!   detector, equivalent to measuring the amplitude quadrature of the
//!   "flipped" reference mode, and
//! * **spatial homodyne detection** — interference with a local oscillator
//!   shaped into the mode that carries the displacement signal, which
//!   extracts the full information available in the field.
//!
//! All fields are stored in photon-flux units: the inner product of a field
//! with itself is the mean photon rate (photons/s) crossing the transverse
//! plane. Signal-to-noise ratios are quoted per unit square-root bandwidth
//! (equivalently, for 1 s of integration) and sensitivities are the
//! displacements giving SNR = 1 under the same convention.
//!
//! Start with [`TweezerConfig::reference`] for the default parameter set,
//! build an objective-plane grid with [`TweezerConfig::objective_grid`], and
//! use [`detection::snr_sweep`] / [`detection::sensitivity`] for the particle
//! sensing figures of merit. The `examples/` directory contains one runnable
//! program per capability; a thin `tweezersense` binary exposes the same
//! operations as `pattern`, `snr-sweep`, `sensitivity-sweep` and `validate`
//! subcommands.

pub mod commands;
pub mod detection;
pub mod error;
pub mod field;
pub mod fourier;
pub mod grid;
pub mod modes;
pub mod optics;
pub mod oracle;
pub mod output;
pub mod runconfig;

pub use detection::{
    flipped_mode, homodyne_snr, optimal_lo_mode, sensitivity, snr_sweep, split_detection_snr,
    DetectionOptions, DetectionResult, LoMode, Scheme, Sensitivity, SensitivityResult, SweepResult,
};
pub use error::TweezerError;
pub use field::{inner_product, Plane, Polarization, TransverseField};
pub use fourier::fourier_image;
pub use grid::Grid2D;
pub use optics::{
    aperture_loss, interference_pattern, scattered_field_at_objective, total_image_field,
    trap_field_at_objective, TweezerConfig,
};
pub use runconfig::RunConfig;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, TweezerError>;
