//! Hermite–Gauss transverse modes sampled on a grid.

use num_complex::Complex64;

use crate::field::{Plane, Polarization, TransverseField};
use crate::grid::Grid2D;

/// Physicists' Hermite polynomial H_m(t) by the usual recurrence.
fn hermite(m: usize, t: f64) -> f64 {
    let mut h0 = 1.0;
    if m == 0 {
        return h0;
    }
    let mut h1 = 2.0 * t;
    for k in 1..m {
        let h2 = 2.0 * t * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|k| k as f64).product()
}

/// 1-D normalized Hermite–Gauss amplitude at the waist,
/// `(2/π)^(1/4) / sqrt(2^m m! w) · H_m(√2 t / w) · exp(-t²/w²)`.
fn hg1d(m: usize, t: f64, w: f64) -> f64 {
    let norm =
        (2.0 / std::f64::consts::PI).powf(0.25) / (2.0f64.powi(m as i32) * factorial(m) * w).sqrt();
    norm * hermite(m, std::f64::consts::SQRT_2 * t / w) * (-t * t / (w * w)).exp()
}

/// TEM_mn mode of waist `w`, normalized to unit self-overlap, carried on the
/// given polarization component.
pub fn hermite_gauss(
    grid: &Grid2D,
    plane: Plane,
    m: usize,
    n: usize,
    w: f64,
    pol: Polarization,
) -> TransverseField {
    assert!(w > 0.0, "waist must be positive");
    sampled(grid, plane, pol, |x, y| hg1d(m, x, w) * hg1d(n, y, w))
}

/// Fundamental Gaussian displaced by `d` along x, for overlap tests.
pub fn displaced_gaussian(
    grid: &Grid2D,
    plane: Plane,
    w: f64,
    d: f64,
    pol: Polarization,
) -> TransverseField {
    sampled(grid, plane, pol, |x, y| hg1d(0, x - d, w) * hg1d(0, y, w))
}

fn sampled(
    grid: &Grid2D,
    plane: Plane,
    pol: Polarization,
    mut f: impl FnMut(f64, f64) -> f64,
) -> TransverseField {
    let zero = Complex64::new(0.0, 0.0);
    TransverseField::from_fn(*grid, plane, |x, y| {
        let v = Complex64::new(f(x, y), 0.0);
        match pol {
            Polarization::X => (v, zero),
            Polarization::Y => (zero, v),
        }
    })
}
