//! Trap and dipole-scattered fields through the collection objective.
//!
//! The model: a TEM00 trapping beam of waist `w_T` holds a Rayleigh particle
//! near the focus. The particle, displaced by `p` along x, is driven by the
//! local trap amplitude and radiates as a dipole. The objective at distance
//! `f_O` collimates the scattered wave; collimation rotates the polarization
//! (azimuthal component preserved, meridional component folded into the
//! transverse plane), compresses the intensity by `sqrt(f_O/r')` and clips
//! everything outside the aperture radius `R`. The residual trapping beam
//! arrives at the objective as a Gaussian of spot radius `w_O` and, with the
//! waist sizes used here, passes the aperture essentially unclipped, so it
//! is left unapertured. Imaging to the detection plane is a single unitary
//! Fourier transform.
//!
//! Phase bookkeeping: the common propagation phase from focus to objective
//! is dropped from both fields; the scattered field keeps the relative
//! phase `exp(-i k (r_O - r'_O))`, which vanishes at `p = 0` and encodes the
//! image shift for displaced particles.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::TweezerError;
use crate::field::{Plane, Polarization, TransverseField};
use crate::fourier::fourier_image;
use crate::grid::Grid2D;
use crate::modes;

/// Reduced Planck constant (J s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Physical parameters of the tweezer and its collection optics.
///
/// All lengths in meters, power in watts, permittivities relative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TweezerConfig {
    /// Trapping wavelength λ.
    pub wavelength: f64,
    /// Trapping beam power P.
    pub trap_power: f64,
    /// Trapping beam waist radius w_T at the focus.
    pub trap_waist: f64,
    /// Focal length f_O of the collection objective.
    pub objective_focal: f64,
    /// Numerical aperture of the collection objective.
    pub numerical_aperture: f64,
    /// Refractive index of the surrounding medium.
    pub medium_index: f64,
    /// Radius a of the scattering particle.
    pub particle_radius: f64,
    /// Relative permittivity of the medium.
    pub eps_medium: f64,
    /// Relative permittivity of the particle.
    pub eps_particle: f64,
    /// Linear polarization of the trapping beam.
    pub polarization: Polarization,
}

impl TweezerConfig {
    /// The reference parameter set used throughout: 200 mW at 1064 nm,
    /// 4 µm waist, 0.1 µm particle of permittivity 3.8 in vacuum/air,
    /// NA 0.99 objective with 3 mm focal length, x-polarized trap.
    pub fn reference() -> Self {
        Self {
            wavelength: 1.064e-6,
            trap_power: 0.2,
            trap_waist: 4.0e-6,
            objective_focal: 3.0e-3,
            numerical_aperture: 0.99,
            medium_index: 1.0,
            particle_radius: 1.0e-7,
            eps_medium: 1.0,
            eps_particle: 3.8,
            polarization: Polarization::X,
        }
    }

    pub fn with_na(mut self, na: f64) -> Self {
        self.numerical_aperture = na;
        self
    }

    pub fn with_polarization(mut self, pol: Polarization) -> Self {
        self.polarization = pol;
        self
    }

    /// Check hard invariants. Returns the first violation found.
    pub fn validate(&self) -> Result<(), TweezerError> {
        let positive = [
            ("wavelength", self.wavelength),
            ("trap_power", self.trap_power),
            ("trap_waist", self.trap_waist),
            ("objective_focal", self.objective_focal),
            ("particle_radius", self.particle_radius),
            ("medium_index", self.medium_index),
        ];
        for (name, v) in positive {
            if v <= 0.0 || !v.is_finite() {
                return Err(TweezerError::InvalidConfig(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if !self.numerical_aperture.is_finite()
            || self.numerical_aperture <= 0.0
            || self.numerical_aperture >= self.medium_index
        {
            return Err(TweezerError::InvalidConfig(format!(
                "numerical_aperture must satisfy 0 < NA < medium_index ({}), got {}",
                self.medium_index, self.numerical_aperture
            )));
        }
        if !self.eps_medium.is_finite() || !self.eps_particle.is_finite() {
            return Err(TweezerError::InvalidConfig(
                "permittivities must be finite".into(),
            ));
        }
        if self.eps_medium + 2.0 * self.eps_particle == 0.0 {
            return Err(TweezerError::InvalidConfig(
                "eps_medium + 2 eps_particle must be nonzero".into(),
            ));
        }
        Ok(())
    }

    /// Soft warnings: conditions that do not stop a run but weaken the model.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.particle_radius >= self.wavelength {
            out.push(format!(
                "particle radius {:.3e} m is not small against the wavelength {:.3e} m; \
                 the dipole (Rayleigh) scattering model is unreliable here",
                self.particle_radius, self.wavelength
            ));
        }
        out
    }

    /// Wave number k = 2π/λ.
    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength
    }

    /// Optical angular frequency ω = 2πc/λ.
    pub fn omega(&self) -> f64 {
        2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / self.wavelength
    }

    /// Trap spot radius at the objective, w_O = f_O λ / (π w_T).
    pub fn spot_radius_at_objective(&self) -> f64 {
        self.objective_focal * self.wavelength / (std::f64::consts::PI * self.trap_waist)
    }

    /// Aperture radius R = f_O NA / sqrt(n² - NA²).
    pub fn aperture_radius(&self) -> f64 {
        let na = self.numerical_aperture;
        let n = self.medium_index;
        self.objective_focal * na / (n * n - na * na).sqrt()
    }

    /// Trap amplitude in photon-flux units, α = sqrt(P/ħω); α² is the photon
    /// rate of the trapping beam.
    pub fn trap_amplitude(&self) -> f64 {
        (self.trap_power / (HBAR * self.omega())).sqrt()
    }

    /// Dipole coupling strength K = α k² a³ (ε₁-ε₂)/(ε₁+2ε₂). Negative for a
    /// particle denser than the medium.
    pub fn scatter_strength(&self) -> f64 {
        let k = self.wavenumber();
        self.trap_amplitude()
            * k
            * k
            * self.particle_radius.powi(3)
            * (self.eps_medium - self.eps_particle)
            / (self.eps_medium + 2.0 * self.eps_particle)
    }

    /// Trap mode amplitude at the particle position (p, 0) in the focal
    /// plane: the unit-norm TEM00 value sqrt(2/π)/w_T · exp(-p²/w_T²).
    pub fn trap_mode_amplitude(&self, p: f64) -> f64 {
        (2.0 / std::f64::consts::PI).sqrt() / self.trap_waist
            * (-p * p / (self.trap_waist * self.trap_waist)).exp()
    }

    /// Objective-plane grid for this configuration: square window of
    /// `padding` aperture radii so the hard edge sits well inside it.
    pub fn objective_grid(&self, samples: usize, padding: f64) -> Result<Grid2D, TweezerError> {
        if padding < 2.0 || !padding.is_finite() {
            return Err(TweezerError::InvalidGrid(format!(
                "padding factor must be >= 2 so the aperture fits the window, got {padding}"
            )));
        }
        Grid2D::square(samples, padding * self.aperture_radius())
    }
}

/// Trapping beam at the objective plane: Gaussian of waist w_O carrying the
/// full trap photon flux α², on the configured polarization component.
/// Not apertured — only the scattered field passes the aperture stop.
pub fn trap_field_at_objective(
    cfg: &TweezerConfig,
    grid: &Grid2D,
) -> Result<TransverseField, TweezerError> {
    cfg.validate()?;
    let w_o = cfg.spot_radius_at_objective();
    let min_extent = 4.0 * w_o;
    if grid.extent_x() < min_extent || grid.extent_y() < min_extent {
        return Err(TweezerError::InvalidGrid(format!(
            "grid extent {:.3e} m clips the trap spot; need at least 4 w_O = {:.3e} m",
            grid.extent_x().min(grid.extent_y()),
            min_extent
        )));
    }
    let mode = modes::hermite_gauss(grid, Plane::Objective, 0, 0, w_o, cfg.polarization);
    Ok(mode.scaled(Complex64::new(cfg.trap_amplitude(), 0.0)))
}

/// Fraction of trap flux removed by the hard aperture of radius R,
/// evaluated as clipped flux over total flux (no cancellation for small
/// losses).
pub fn aperture_loss(cfg: &TweezerConfig, grid: &Grid2D) -> Result<f64, TweezerError> {
    let trap = trap_field_at_objective(cfg, grid)?;
    let r2 = cfg.aperture_radius().powi(2);
    let intensity = trap.intensity();
    let mut clipped = 0.0;
    let mut total = 0.0;
    for ((i, j), v) in intensity.indexed_iter() {
        let x = grid.x(i);
        let y = grid.y(j);
        total += v;
        if x * x + y * y >= r2 {
            clipped += v;
        }
    }
    Ok(clipped / total)
}

/// Dipole-scattered field collected by the objective, for a particle
/// displaced by `p` along x (|p| ≤ 3 w_T).
///
/// Per grid point (x, y) on the plane z = f_O, with r' the vector from the
/// particle: the transverse dipole pattern of the trap polarization is
/// propagated as `exp(-i k (r_O - r'))/r'`, decomposed onto the azimuthal
/// direction l̂ (kept) and meridional direction m̂ (folded onto n̂ in the
/// output plane), compressed by `sqrt(f_O/r')` and clipped by the aperture.
pub fn scattered_field_at_objective(
    cfg: &TweezerConfig,
    p: f64,
    grid: &Grid2D,
) -> Result<TransverseField, TweezerError> {
    cfg.validate()?;
    if !p.is_finite() || p.abs() > 3.0 * cfg.trap_waist {
        return Err(TweezerError::Precondition(format!(
            "displacement {p} m outside ±3 w_T = ±{:.3e} m",
            3.0 * cfg.trap_waist
        )));
    }
    let f_o = cfg.objective_focal;
    let k = cfg.wavenumber();
    let r_ap2 = cfg.aperture_radius().powi(2);
    // dipole drive: coupling strength times local trap amplitude
    let amp = cfg.scatter_strength() * cfg.trap_mode_amplitude(p);
    let (jx, jy) = match cfg.polarization {
        Polarization::X => (1.0, 0.0),
        Polarization::Y => (0.0, 1.0),
    };

    let field = TransverseField::from_fn(*grid, Plane::Objective, |x, y| {
        if x * x + y * y >= r_ap2 {
            return (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        }
        let xp = x - p;
        let rho_p = (xp * xp + y * y).sqrt();
        let r_p = (xp * xp + y * y + f_o * f_o).sqrt();
        let r_o = (x * x + y * y + f_o * f_o).sqrt();

        // unit vectors: propagation q̂, azimuthal l̂, meridional m̂, and the
        // transverse image n̂ of m̂ after collimation
        let (qx, qy, qz) = (xp / r_p, y / r_p, f_o / r_p);
        let (lx, ly) = (y / rho_p, -xp / rho_p);
        let inv_mr = 1.0 / (rho_p * r_p);
        let (mx, my, mz) = (-f_o * xp * inv_mr, -f_o * y * inv_mr, rho_p / r_p);
        let (nx, ny) = (-xp / rho_p, -y / rho_p);

        // transverse dipole pattern of the trap polarization
        let q_dot_j = qx * jx + qy * jy;
        let dx = jx - q_dot_j * qx;
        let dy = jy - q_dot_j * qy;
        let dz = -q_dot_j * qz;

        let c_l = dx * lx + dy * ly;
        let c_m = dx * mx + dy * my + dz * mz;

        let envelope = amp * (f_o / r_p).sqrt() / r_p;
        let phase = Complex64::from_polar(envelope, -k * (r_o - r_p));
        (phase * (c_l * lx + c_m * nx), phase * (c_l * ly + c_m * ny))
    });
    debug_assert!(field.is_finite());
    Ok(field)
}

/// Scattered field imaged to the detection plane.
pub fn scattered_image_field(
    cfg: &TweezerConfig,
    p: f64,
    grid: &Grid2D,
) -> Result<TransverseField, TweezerError> {
    fourier_image(&scattered_field_at_objective(cfg, p, grid)?)
}

/// Residual trapping beam imaged to the detection plane.
pub fn trap_image_field(
    cfg: &TweezerConfig,
    grid: &Grid2D,
) -> Result<TransverseField, TweezerError> {
    fourier_image(&trap_field_at_objective(cfg, grid)?)
}

/// Total (trap + scattered) field at the detection plane.
pub fn total_image_field(
    cfg: &TweezerConfig,
    p: f64,
    grid: &Grid2D,
) -> Result<TransverseField, TweezerError> {
    let trap = trap_field_at_objective(cfg, grid)?;
    let scat = scattered_field_at_objective(cfg, p, grid)?;
    fourier_image(&trap.add(&scat))
}

/// Detection-plane intensity with the trap-only intensity subtracted:
/// `|E_total|² - |E_trap|²` per cell. What remains is the trap–scattered
/// cross term plus the (four orders of magnitude smaller) scattered-only
/// term, which makes the interference fringes visible.
pub fn interference_pattern(
    cfg: &TweezerConfig,
    p: f64,
    grid: &Grid2D,
) -> Result<Array2<f64>, TweezerError> {
    let total = total_image_field(cfg, p, grid)?;
    let trap = trap_image_field(cfg, grid)?;
    Ok(&total.intensity() - &trap.intensity())
}
