//! Split detection and spatial homodyne detection of particle displacement.
//!
//! Both read-outs are overlap integrals against the imaged scattered field.
//! Split detection measures the amplitude quadrature of the flipped
//! reference mode (the normalized total image mode with its sign inverted
//! for X < 0). Spatial homodyne measures the quadrature selected by the
//! local-oscillator mode; the optimal choice is the normalized derivative
//! of the imaged scattered field with respect to displacement, which by
//! Cauchy–Schwarz maximizes the signal slope among all unit modes.
//!
//! SNR convention: for a coherent-state (shot-noise-limited) field the
//! quadrature noise is one shot-noise unit, so SNR = 2 × (signal overlap),
//! quoted per unit square-root bandwidth. Only the cross term with the
//! scattered field is kept by default; the scattered×scattered contribution
//! to the split photocurrent is four orders of magnitude down and can be
//! switched on for comparison.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::TweezerError;
use crate::field::{inner_product, TransverseField};
use crate::grid::Grid2D;
use crate::optics::{scattered_image_field, total_image_field, TweezerConfig};

/// Which detection scheme a figure of merit refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    SplitDetection,
    SpatialHomodyne,
}

/// A homodyne local-oscillator mode: unit-norm image-plane field, the
/// displacement it was optimized for, and the LO phase (0 reads the
/// amplitude quadrature of the signal mode).
#[derive(Debug, Clone)]
pub struct LoMode {
    pub field: TransverseField,
    pub optimized_at: f64,
    pub phase: f64,
}

/// Knobs shared by the detection operations.
#[derive(Debug, Clone, Copy, Default)]
pub struct DetectionOptions {
    /// Central-difference step for LO construction and sensitivities.
    /// `None` means w_T/1000.
    pub derivative_step: Option<f64>,
    /// Also include the scattered×scattered term of the split photocurrent.
    pub full_quadratic: bool,
}

impl DetectionOptions {
    pub fn step_for(&self, cfg: &TweezerConfig) -> f64 {
        self.derivative_step.unwrap_or(cfg.trap_waist / 1000.0)
    }
}

/// SNRs and signal overlaps at one displacement.
#[derive(Debug, Clone, Copy)]
pub struct DetectionResult {
    /// Displacement evaluated (m).
    pub p: f64,
    /// Flipped-mode signal overlap (photon flux^1/2).
    pub alpha_f: f64,
    /// LO-mode signal overlap (photon flux^1/2).
    pub alpha_w: f64,
    /// Split-detection SNR per √Hz, `2 alpha_f`.
    pub snr_sd: f64,
    /// Spatial-homodyne SNR per √Hz, `2 alpha_w`.
    pub snr_sh: f64,
}

/// Minimum detectable displacement for one scheme.
#[derive(Debug, Clone, Copy)]
pub struct Sensitivity {
    /// Displacement giving SNR = 1 at unit bandwidth (m). Infinite when the
    /// response slope vanishes.
    pub minimum_displacement: f64,
    /// Set when the slope is below 1e-12 of the attainable maximum, i.e.
    /// the scheme has no linear response at this operating point.
    pub degenerate: bool,
}

/// Sensitivities of both schemes at one numerical aperture.
#[derive(Debug, Clone, Copy)]
pub struct SensitivityResult {
    pub na: f64,
    pub s_sd: f64,
    pub s_sh: f64,
}

/// Ordered sweep records plus the configuration that produced them.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub config: TweezerConfig,
    pub grid: Grid2D,
    pub lo_p0: f64,
    pub derivative_step: f64,
    pub full_quadratic: bool,
    pub records: Vec<DetectionResult>,
}

impl SweepResult {
    fn normalized(values: impl Iterator<Item = f64> + Clone) -> Vec<f64> {
        let max = values.clone().fold(0.0f64, |m, v| m.max(v.abs()));
        if max == 0.0 {
            values.map(|_| 0.0).collect()
        } else {
            values.map(|v| v / max).collect()
        }
    }

    /// Split-detection SNRs divided by their maximum magnitude.
    pub fn normalized_sd(&self) -> Vec<f64> {
        Self::normalized(self.records.iter().map(|r| r.snr_sd))
    }

    /// Homodyne SNRs divided by their maximum magnitude.
    pub fn normalized_sh(&self) -> Vec<f64> {
        Self::normalized(self.records.iter().map(|r| r.snr_sh))
    }
}

/// Sign-flip a mode across the x = 0 line: `sign(x) · v0`. Norm-preserving;
/// the cell-centered grid has no sample on the flip line.
pub fn flipped_mode(v0: &TransverseField) -> TransverseField {
    let grid = *v0.grid();
    let mut out = v0.clone();
    for ((i, _j), v) in out.ex_mut().indexed_iter_mut() {
        if grid.x(i) < 0.0 {
            *v = -*v;
        }
    }
    for ((i, _j), v) in out.ey_mut().indexed_iter_mut() {
        if grid.x(i) < 0.0 {
            *v = -*v;
        }
    }
    out
}

/// The mode split detection measures: the flipped normalized total image
/// mode of the undisplaced system (trap plus centered scattered field).
pub fn split_reference_mode(
    cfg: &TweezerConfig,
    grid: &Grid2D,
) -> Result<TransverseField, TweezerError> {
    let v0 = total_image_field(cfg, 0.0, grid)?.normalized()?;
    Ok(flipped_mode(&v0))
}

/// Build the optimal LO mode for displacements around `p0`: the normalized
/// central difference of the imaged scattered field,
/// `[E_scat(p0+h) - E_scat(p0-h)] / 2h`, with phase 0.
pub fn optimal_lo_mode(
    cfg: &TweezerConfig,
    p0: f64,
    grid: &Grid2D,
    h: f64,
) -> Result<LoMode, TweezerError> {
    if h <= 0.0 || !h.is_finite() || h > cfg.trap_waist / 10.0 {
        return Err(TweezerError::Precondition(format!(
            "derivative step {h} m must be positive and well below the trap waist {:.3e} m",
            cfg.trap_waist
        )));
    }
    let plus = scattered_image_field(cfg, p0 + h, grid)?;
    let minus = scattered_image_field(cfg, p0 - h, grid)?;
    let diff = plus.sub(&minus).scaled(Complex64::new(0.5 / h, 0.0));
    let field = diff.normalized().map_err(|_| {
        TweezerError::NoSignalMode(format!(
            "scattered field does not respond to displacement around {p0} m"
        ))
    })?;
    Ok(LoMode {
        field,
        optimized_at: p0,
        phase: 0.0,
    })
}

/// Objective-plane representation of the optimal LO mode: the normalized
/// central difference of the collected scattered field before imaging.
/// Because the imaging transform is unitary, overlaps against this field at
/// the objective plane equal overlaps against the imaged LO mode; the
/// verification paths integrate here, where the integrand is smooth.
pub fn lo_mode_objective_representation(
    cfg: &TweezerConfig,
    p0: f64,
    grid: &Grid2D,
    h: f64,
) -> Result<TransverseField, TweezerError> {
    use crate::optics::scattered_field_at_objective;
    let plus = scattered_field_at_objective(cfg, p0 + h, grid)?;
    let minus = scattered_field_at_objective(cfg, p0 - h, grid)?;
    plus.sub(&minus)
        .scaled(Complex64::new(0.5 / h, 0.0))
        .normalized()
        .map_err(|_| {
            TweezerError::NoSignalMode(format!(
                "scattered field does not respond to displacement around {p0} m"
            ))
        })
}

/// Mean homodyne difference photocurrent of `signal` against the LO, in
/// SNR units: `2 Re(e^{-iφ} <lo, signal>)`.
pub fn homodyne_signal(lo: &LoMode, signal: &TransverseField) -> Result<f64, TweezerError> {
    let norm = lo.field.norm();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(TweezerError::Precondition(format!(
            "local oscillator mode must have unit norm, got {norm}"
        )));
    }
    let overlap = inner_product(&lo.field, signal)?;
    Ok(2.0 * (Complex64::from_polar(1.0, -lo.phase) * overlap).re)
}

/// Precomputed reference modes for evaluating both schemes over a sweep.
pub struct DetectionContext {
    cfg: TweezerConfig,
    grid: Grid2D,
    flipped_ref: TransverseField,
    lo: LoMode,
    /// Norm of the total image field at p = 0 (≈ trap amplitude), the shot
    /// noise scale of the split photocurrent.
    alpha_zero: f64,
    full_quadratic: bool,
    derivative_step: f64,
}

impl DetectionContext {
    pub fn new(
        cfg: &TweezerConfig,
        grid: &Grid2D,
        lo_p0: f64,
        opts: DetectionOptions,
    ) -> Result<Self, TweezerError> {
        let h = opts.step_for(cfg);
        let total0 = total_image_field(cfg, 0.0, grid)?;
        let alpha_zero = total0.norm();
        let flipped_ref = flipped_mode(&total0.normalized()?);
        let lo = optimal_lo_mode(cfg, lo_p0, grid, h)?;
        Ok(Self {
            cfg: *cfg,
            grid: *grid,
            flipped_ref,
            lo,
            alpha_zero,
            full_quadratic: opts.full_quadratic,
            derivative_step: h,
        })
    }

    pub fn lo(&self) -> &LoMode {
        &self.lo
    }

    pub fn flipped_reference(&self) -> &TransverseField {
        &self.flipped_ref
    }

    pub fn result_at(&self, p: f64) -> Result<DetectionResult, TweezerError> {
        let scat = scattered_image_field(&self.cfg, p, &self.grid)?;
        let mut alpha_f = inner_product(&self.flipped_ref, &scat)?.re;
        if self.full_quadratic {
            alpha_f += self.split_quadratic_term(&scat);
        }
        let alpha_w = 0.5 * homodyne_signal(&self.lo, &scat)?;
        Ok(DetectionResult {
            p,
            alpha_f,
            alpha_w,
            snr_sd: 2.0 * alpha_f,
            snr_sh: 2.0 * alpha_w,
        })
    }

    /// Sign-weighted scattered-only intensity over the shot-noise scale:
    /// the part of the split photocurrent dropped by the cross-term-only
    /// default.
    fn split_quadratic_term(&self, scat: &TransverseField) -> f64 {
        let g = scat.grid();
        let mut acc = 0.0;
        for ((i, j), _) in scat.ex().indexed_iter() {
            let s = if g.x(i) < 0.0 { -1.0 } else { 1.0 };
            acc += s * (scat.ex()[[i, j]].norm_sqr() + scat.ey()[[i, j]].norm_sqr());
        }
        acc * g.cell_area() / self.alpha_zero
    }
}

/// Split-detection SNR at displacement `p`: `2 Re<v_f, E_scat_image(p)>`.
pub fn split_detection_snr(
    cfg: &TweezerConfig,
    p: f64,
    grid: &Grid2D,
    opts: DetectionOptions,
) -> Result<f64, TweezerError> {
    let ctx = DetectionContext::new(cfg, grid, 0.0, opts)?;
    Ok(ctx.result_at(p)?.snr_sd)
}

/// Homodyne SNR at displacement `p` for a given LO mode.
pub fn homodyne_snr(
    cfg: &TweezerConfig,
    p: f64,
    lo: &LoMode,
    grid: &Grid2D,
) -> Result<f64, TweezerError> {
    let scat = scattered_image_field(cfg, p, grid)?;
    homodyne_signal(lo, &scat)
}

/// Minimum detectable displacement of one scheme in the small-displacement
/// limit: `S = 1/2 |∂α/∂p|⁻¹ at p = 0`, by central difference of the
/// respective overlap.
pub fn sensitivity(
    cfg: &TweezerConfig,
    scheme: Scheme,
    grid: &Grid2D,
    opts: DetectionOptions,
) -> Result<Sensitivity, TweezerError> {
    let h = opts.step_for(cfg);
    let plus = scattered_image_field(cfg, h, grid)?;
    let minus = scattered_image_field(cfg, -h, grid)?;
    let diff = plus.sub(&minus).scaled(Complex64::new(0.5 / h, 0.0));
    let max_slope = diff.norm(); // Cauchy–Schwarz bound over unit modes

    let slope = match scheme {
        Scheme::SplitDetection => {
            let v_f = split_reference_mode(cfg, grid)?;
            inner_product(&v_f, &diff)?.re
        }
        Scheme::SpatialHomodyne => match diff.normalized() {
            Ok(w) => inner_product(&w, &diff)?.re,
            Err(_) => 0.0,
        },
    };
    Ok(sensitivity_from_slope(slope, max_slope))
}

fn sensitivity_from_slope(slope: f64, max_slope: f64) -> Sensitivity {
    if slope.abs() < 1e-12 * max_slope || max_slope == 0.0 {
        Sensitivity {
            minimum_displacement: f64::INFINITY,
            degenerate: true,
        }
    } else {
        Sensitivity {
            minimum_displacement: 0.5 / slope.abs(),
            degenerate: false,
        }
    }
}

/// Sensitivities of both schemes sharing one pair of ±h field evaluations.
pub fn sensitivity_pair(
    cfg: &TweezerConfig,
    grid: &Grid2D,
    opts: DetectionOptions,
) -> Result<SensitivityResult, TweezerError> {
    let h = opts.step_for(cfg);
    let plus = scattered_image_field(cfg, h, grid)?;
    let minus = scattered_image_field(cfg, -h, grid)?;
    let diff = plus.sub(&minus).scaled(Complex64::new(0.5 / h, 0.0));
    let max_slope = diff.norm();

    let v_f = split_reference_mode(cfg, grid)?;
    let slope_sd = inner_product(&v_f, &diff)?.re;
    let slope_sh = max_slope; // <d/|d|, d> = |d|

    Ok(SensitivityResult {
        na: cfg.numerical_aperture,
        s_sd: sensitivity_from_slope(slope_sd, max_slope).minimum_displacement,
        s_sh: sensitivity_from_slope(slope_sh, max_slope).minimum_displacement,
    })
}

/// Evaluate both schemes over a sorted displacement list with the LO
/// optimized at `lo_p0`. Points are independent and evaluated in parallel;
/// records are index-ordered, so the output does not depend on scheduling.
pub fn snr_sweep(
    cfg: &TweezerConfig,
    p_list: &[f64],
    lo_p0: f64,
    grid: &Grid2D,
    opts: DetectionOptions,
) -> Result<SweepResult, TweezerError> {
    if p_list.iter().any(|p| !p.is_finite()) {
        return Err(TweezerError::Precondition(
            "displacement list contains non-finite values".into(),
        ));
    }
    if p_list.windows(2).any(|w| w[0] > w[1]) {
        return Err(TweezerError::Precondition(
            "displacement list must be sorted ascending".into(),
        ));
    }
    let ctx = DetectionContext::new(cfg, grid, lo_p0, opts)?;
    let records: Result<Vec<_>, TweezerError> =
        p_list.par_iter().map(|&p| ctx.result_at(p)).collect();
    Ok(SweepResult {
        config: *cfg,
        grid: *grid,
        lo_p0,
        derivative_step: ctx.derivative_step,
        full_quadratic: opts.full_quadratic,
        records: records?,
    })
}

/// Sensitivity of both schemes versus numerical aperture. Each NA gets its
/// own objective-plane window scaled to its aperture radius.
pub fn sensitivity_sweep(
    cfg: &TweezerConfig,
    na_list: &[f64],
    samples: usize,
    padding: f64,
    opts: DetectionOptions,
) -> Result<Vec<SensitivityResult>, TweezerError> {
    na_list
        .par_iter()
        .map(|&na| {
            let c = cfg.with_na(na);
            c.validate()?;
            let grid = c.objective_grid(samples, padding)?;
            sensitivity_pair(&c, &grid, opts)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Plane, Polarization};
    use crate::modes;

    fn quick_grid(cfg: &TweezerConfig) -> Grid2D {
        cfg.objective_grid(128, 4.0).unwrap()
    }

    #[test]
    fn flipped_mode_preserves_norm_and_kills_even_overlap() {
        let g = Grid2D::square(256, 12.0).unwrap();
        let u00 = modes::hermite_gauss(&g, Plane::Objective, 0, 0, 1.0, Polarization::X);
        let vf = flipped_mode(&u00);
        assert!((vf.norm() - 1.0).abs() < 1e-12);
        let overlap = inner_product(&vf, &u00).unwrap();
        assert!(
            overlap.norm() < 1e-14,
            "odd×even overlap {}",
            overlap.norm()
        );
    }

    #[test]
    fn flipped_overlap_with_displaced_gaussian_matches_small_d_slope() {
        // frozen oracle: <sign(x) u00, u00(.-d)> = erf(d/√2 w) exp(-d²/2w²)
        // ≈ sqrt(2/π) d/w for small d
        let g = Grid2D::square(512, 12.0).unwrap();
        let w = 1.0;
        let d = 0.01;
        let vf = flipped_mode(&modes::hermite_gauss(
            &g,
            Plane::Objective,
            0,
            0,
            w,
            Polarization::X,
        ));
        let displaced = modes::displaced_gaussian(&g, Plane::Objective, w, d, Polarization::X);
        let overlap = inner_product(&vf, &displaced).unwrap().re;
        let expect = (2.0 / std::f64::consts::PI).sqrt() * d / w;
        assert!(
            ((overlap - expect) / expect).abs() < 0.01,
            "overlap {overlap} vs small-d limit {expect}"
        );
    }

    #[test]
    fn split_snr_vanishes_at_zero_displacement() {
        let cfg = TweezerConfig::reference();
        let grid = quick_grid(&cfg);
        let ctx = DetectionContext::new(&cfg, &grid, 0.0, DetectionOptions::default()).unwrap();
        let at_zero = ctx.result_at(0.0).unwrap();
        let scale = ctx.result_at(0.4e-6).unwrap().snr_sd.abs();
        assert!(at_zero.snr_sd.abs() < 1e-9 * scale);
        assert!(at_zero.snr_sh.abs() < 1e-9 * scale);
    }

    #[test]
    fn snrs_are_odd_in_displacement() {
        let cfg = TweezerConfig::reference();
        let grid = quick_grid(&cfg);
        let ctx = DetectionContext::new(&cfg, &grid, 0.0, DetectionOptions::default()).unwrap();
        for p in [0.1e-6, 0.4e-6, 1.0e-6] {
            let plus = ctx.result_at(p).unwrap();
            let minus = ctx.result_at(-p).unwrap();
            assert!((plus.snr_sd + minus.snr_sd).abs() < 1e-9 * plus.snr_sd.abs());
            assert!((plus.snr_sh + minus.snr_sh).abs() < 1e-9 * plus.snr_sh.abs());
        }
    }

    #[test]
    fn lo_mode_is_unit_norm_odd_and_step_converged() {
        let cfg = TweezerConfig::reference();
        let grid = quick_grid(&cfg);
        let h = cfg.trap_waist / 1000.0;
        let lo = optimal_lo_mode(&cfg, 0.0, &grid, h).unwrap();
        assert!((lo.field.norm() - 1.0).abs() < 1e-10);
        assert_eq!(lo.optimized_at, 0.0);

        // dominant (co-polarized) component is odd in X
        let f = &lo.field;
        let (nx, ny) = f.grid().shape();
        let mut dev = 0.0f64;
        let mut max = 0.0f64;
        for i in 0..nx {
            for j in 0..ny {
                dev = dev.max((f.ex()[[i, j]] + f.ex()[[nx - 1 - i, j]]).norm());
                max = max.max(f.ex()[[i, j]].norm());
            }
        }
        assert!(dev / max < 1e-10, "LO ex component not odd in X: {dev}");

        // Richardson-style convergence: halving h barely moves the mode
        let lo_half = optimal_lo_mode(&cfg, 0.0, &grid, h / 2.0).unwrap();
        let dist = lo.field.sub(&lo_half.field).norm();
        assert!(dist < 1e-4, "norm distance {dist} between h and h/2 modes");
    }

    #[test]
    fn lo_mode_requires_scattering_response() {
        let mut cfg = TweezerConfig::reference();
        cfg.eps_particle = cfg.eps_medium; // index-matched: no dipole
        let grid = quick_grid(&cfg);
        assert!(matches!(
            optimal_lo_mode(&cfg, 0.0, &grid, cfg.trap_waist / 1000.0),
            Err(TweezerError::NoSignalMode(_))
        ));
    }

    #[test]
    fn homodyne_rejects_non_unit_lo() {
        let cfg = TweezerConfig::reference();
        let grid = quick_grid(&cfg);
        let mut lo = optimal_lo_mode(&cfg, 0.0, &grid, 4e-9).unwrap();
        lo.field = lo.field.scaled(Complex64::new(2.0, 0.0));
        assert!(matches!(
            homodyne_snr(&cfg, 0.1e-6, &lo, &grid),
            Err(TweezerError::Precondition(_))
        ));
    }

    #[test]
    fn quadrature_phase_rotation_nulls_real_component() {
        // a signal component with a real overlap against the LO reads zero
        // at φ = π/2 and maximal at φ = 0
        let cfg = TweezerConfig::reference();
        let grid = quick_grid(&cfg);
        let lo = optimal_lo_mode(&cfg, 0.0, &grid, 4e-9).unwrap();
        let component = lo.field.scaled(Complex64::new(3.0, 0.0));
        let in_phase = homodyne_signal(&lo, &component).unwrap();
        assert!((in_phase - 6.0).abs() < 1e-9);
        let rotated = LoMode {
            phase: std::f64::consts::FRAC_PI_2,
            ..lo
        };
        let quadrature = homodyne_signal(&rotated, &component).unwrap();
        assert!(quadrature.abs() < 1e-12 * in_phase.abs());
    }

    #[test]
    fn sweep_slope_at_origin_matches_inverse_sensitivity() {
        // dSNR/dp fitted from sweep samples equals 1/S for both schemes
        let cfg = TweezerConfig::reference();
        let grid = quick_grid(&cfg);
        let ctx = DetectionContext::new(&cfg, &grid, 0.0, DetectionOptions::default()).unwrap();
        let dp = 0.02e-6;
        let plus = ctx.result_at(dp).unwrap();
        let minus = ctx.result_at(-dp).unwrap();
        let fit_sd = (plus.snr_sd - minus.snr_sd) / (2.0 * dp);
        let fit_sh = (plus.snr_sh - minus.snr_sh) / (2.0 * dp);
        let pair = sensitivity_pair(&cfg, &grid, DetectionOptions::default()).unwrap();
        assert!(
            (fit_sd.abs() * pair.s_sd - 1.0).abs() < 0.01,
            "split slope {} vs 1/S {}",
            fit_sd.abs(),
            1.0 / pair.s_sd
        );
        assert!(
            (fit_sh.abs() * pair.s_sh - 1.0).abs() < 0.01,
            "homodyne slope {} vs 1/S {}",
            fit_sh.abs(),
            1.0 / pair.s_sh
        );
    }

    #[test]
    fn split_snr_shape_rises_to_single_peak_then_decays() {
        let cfg = TweezerConfig::reference();
        let grid = quick_grid(&cfg);
        let ctx = DetectionContext::new(&cfg, &grid, 0.0, DetectionOptions::default()).unwrap();
        let ps: Vec<f64> = (0..=20).map(|i| i as f64 * 0.1e-6).collect();
        let vals: Vec<f64> = ps
            .iter()
            .map(|&p| ctx.result_at(p).unwrap().snr_sd.abs())
            .collect();
        let peak = vals
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!(peak > 0 && peak < vals.len() - 1, "peak at boundary");
        for i in 0..peak {
            assert!(vals[i] < vals[i + 1], "not rising before peak at {i}");
        }
        for i in peak..vals.len() - 1 {
            assert!(vals[i] > vals[i + 1], "not decaying after peak at {i}");
        }
    }

    #[test]
    fn sweep_is_antisymmetric_and_polarizations_differ() {
        let cfg = TweezerConfig::reference();
        let grid = quick_grid(&cfg);
        let ps: Vec<f64> = (-10..=10).map(|i| i as f64 * 0.1e-6).collect();
        let sweep_x = snr_sweep(&cfg, &ps, 0.0, &grid, DetectionOptions::default()).unwrap();
        let sweep_y = snr_sweep(
            &cfg.with_polarization(Polarization::Y),
            &ps,
            0.0,
            &grid,
            DetectionOptions::default(),
        )
        .unwrap();
        let n = ps.len();
        let max_sh = sweep_x
            .records
            .iter()
            .map(|r| r.snr_sh.abs())
            .fold(0.0, f64::max);
        for i in 0..n {
            let a = &sweep_x.records[i];
            let b = &sweep_x.records[n - 1 - i];
            assert!((a.snr_sh + b.snr_sh).abs() < 1e-9 * max_sh);
            assert!((a.snr_sd + b.snr_sd).abs() < 1e-9 * max_sh);
        }
        // distinct physics for the two trap polarizations
        let rel: f64 = sweep_x
            .records
            .iter()
            .zip(&sweep_y.records)
            .map(|(a, b)| (a.snr_sh - b.snr_sh).abs())
            .fold(0.0, f64::max)
            / max_sh;
        assert!(rel > 1e-3, "polarizations produced identical curves");
    }

    #[test]
    fn sweep_rejects_unsorted_input() {
        let cfg = TweezerConfig::reference();
        let grid = quick_grid(&cfg);
        let err = snr_sweep(
            &cfg,
            &[0.0, -1e-6, 1e-6],
            0.0,
            &grid,
            DetectionOptions::default(),
        );
        assert!(matches!(err, Err(TweezerError::Precondition(_))));
    }

    #[test]
    fn homodyne_sensitivity_beats_split_detection() {
        let cfg = TweezerConfig::reference();
        let grid = quick_grid(&cfg);
        let pair = sensitivity_pair(&cfg, &grid, DetectionOptions::default()).unwrap();
        assert!(pair.s_sh > 0.0 && pair.s_sd > 0.0);
        assert!(pair.s_sh <= pair.s_sd, "{} > {}", pair.s_sh, pair.s_sd);

        // consistency with the single-scheme entry points
        let sd = sensitivity(
            &cfg,
            Scheme::SplitDetection,
            &grid,
            DetectionOptions::default(),
        )
        .unwrap();
        let sh = sensitivity(
            &cfg,
            Scheme::SpatialHomodyne,
            &grid,
            DetectionOptions::default(),
        )
        .unwrap();
        assert!((sd.minimum_displacement - pair.s_sd).abs() / pair.s_sd < 1e-12);
        assert!((sh.minimum_displacement - pair.s_sh).abs() / pair.s_sh < 1e-12);
    }

    #[test]
    fn index_matched_particle_gives_degenerate_sensitivity() {
        let mut cfg = TweezerConfig::reference();
        cfg.eps_particle = cfg.eps_medium;
        let grid = quick_grid(&cfg);
        let s = sensitivity(
            &cfg,
            Scheme::SpatialHomodyne,
            &grid,
            DetectionOptions::default(),
        )
        .unwrap();
        assert!(s.degenerate);
        assert!(s.minimum_displacement.is_infinite());
    }

    #[test]
    fn homodyne_snr_is_linear_for_small_displacements() {
        let cfg = TweezerConfig::reference();
        let grid = quick_grid(&cfg);
        let ctx = DetectionContext::new(&cfg, &grid, 0.0, DetectionOptions::default()).unwrap();
        let ps: Vec<f64> = (-5..=5).map(|i| i as f64 * 0.02e-6).collect();
        let vals: Vec<f64> = ps
            .iter()
            .map(|&p| ctx.result_at(p).unwrap().snr_sh)
            .collect();
        // least-squares slope through the origin, then worst residual
        let slope = ps.iter().zip(&vals).map(|(p, v)| p * v).sum::<f64>()
            / ps.iter().map(|p| p * p).sum::<f64>();
        let max = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let residual = ps
            .iter()
            .zip(&vals)
            .map(|(p, v)| (v - slope * p).abs())
            .fold(0.0f64, f64::max)
            / max;
        assert!(residual < 0.01, "linearity residual {residual}");
    }

    #[test]
    fn full_quadratic_term_shifts_split_but_not_homodyne() {
        let cfg = TweezerConfig::reference();
        let grid = quick_grid(&cfg);
        let cross = DetectionContext::new(&cfg, &grid, 0.0, DetectionOptions::default())
            .unwrap()
            .result_at(0.5e-6)
            .unwrap();
        let full_opts = DetectionOptions {
            derivative_step: None,
            full_quadratic: true,
        };
        let full = DetectionContext::new(&cfg, &grid, 0.0, full_opts)
            .unwrap()
            .result_at(0.5e-6)
            .unwrap();
        let shift = (full.snr_sd - cross.snr_sd).abs() / cross.snr_sd.abs();
        assert!(shift > 1e-6, "quadratic term had no effect: {shift}");
        assert!(
            shift < 0.2,
            "quadratic term should be a small correction: {shift}"
        );
        assert_eq!(full.snr_sh, cross.snr_sh, "homodyne has no quadratic term");
    }

    #[test]
    fn normalized_sweep_columns_peak_at_one() {
        let cfg = TweezerConfig::reference();
        let grid = quick_grid(&cfg);
        let ps: Vec<f64> = (-8..=8).map(|i| i as f64 * 0.25e-6).collect();
        let sweep = snr_sweep(&cfg, &ps, 0.0, &grid, DetectionOptions::default()).unwrap();
        let nsd = sweep.normalized_sd();
        let nsh = sweep.normalized_sh();
        let max = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        assert!((max(&nsd) - 1.0).abs() < 1e-12);
        assert!((max(&nsh) - 1.0).abs() < 1e-12);
    }
}
