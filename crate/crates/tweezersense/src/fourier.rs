//! Centered unitary discrete Fourier transform between planes.
//!
//! Transform convention: with cell-centered samples `x_j = (j + c) dx`,
//! `c = (1 - n)/2`, and conjugate samples `k_m = (m + c) dk`,
//! `dk = 2π/(n dx)`, the transform is the discretization of the unitary
//! continuum transform
//!
//! ```text
//! F(k) = 1/(2π) ∬ f(x, y) exp(-i k·x) dx dy
//! ```
//!
//! i.e. `F_m = dx dy / (2π) Σ_j f_j exp(-i 2π (m+c)(j+c) / n)` per axis.
//! The map is exactly unitary with respect to the physical measures, so
//! inner products (and therefore photon fluxes) are plane-independent, and
//! it maps even samples to even samples and odd to odd in each axis.

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::error::TweezerError;
use crate::field::{Plane, TransverseField};

/// Image the field: centered unitary DFT of both polarization components.
///
/// The input must be tagged [`Plane::Objective`]; the output lives on
/// [`Grid2D::conjugate`](crate::grid::Grid2D::conjugate) with the image tag.
/// Image-plane coordinates are spatial frequencies; the physics downstream
/// is independent of their absolute scale.
pub fn fourier_image(f: &TransverseField) -> Result<TransverseField, TweezerError> {
    if f.plane() != Plane::Objective {
        return Err(TweezerError::PlaneMismatch(
            "fourier_image expects an objective-plane field".into(),
        ));
    }
    let scale = f.grid().cell_area() / (2.0 * PI);
    let ex = centered_dft2(f.ex(), scale);
    let ey = centered_dft2(f.ey(), scale);
    TransverseField::from_components(f.grid().conjugate(), Plane::Image, ex, ey)
}

/// `exp(-i 2π c j / n)` for j = 0..n, with c = (1 - n)/2.
fn pre_ramp(n: usize) -> Vec<Complex64> {
    let c = 0.5 * (1.0 - n as f64);
    (0..n)
        .map(|j| Complex64::from_polar(1.0, -2.0 * PI * c * j as f64 / n as f64))
        .collect()
}

/// `exp(-i 2π c (m + c) / n)` for m = 0..n.
fn post_ramp(n: usize) -> Vec<Complex64> {
    let c = 0.5 * (1.0 - n as f64);
    (0..n)
        .map(|m| Complex64::from_polar(1.0, -2.0 * PI * c * (m as f64 + c) / n as f64))
        .collect()
}

fn centered_dft2(a: &Array2<Complex64>, scale: f64) -> Array2<Complex64> {
    let (nx, ny) = a.dim();
    let mut planner = FftPlanner::new();
    let fft_x = planner.plan_fft_forward(nx);
    let fft_y = planner.plan_fft_forward(ny);

    let pre_x = pre_ramp(nx);
    let pre_y = pre_ramp(ny);
    let post_x = post_ramp(nx);
    let post_y = post_ramp(ny);

    let mut work = a.clone();
    for ((i, j), v) in work.indexed_iter_mut() {
        *v *= pre_x[i] * pre_y[j];
    }

    // rows are contiguous in standard layout: transform along y first
    for mut row in work.rows_mut() {
        fft_y.process(row.as_slice_mut().expect("standard layout"));
    }

    // then along x, column by column through a scratch buffer
    let mut col = vec![Complex64::default(); nx];
    for j in 0..ny {
        for i in 0..nx {
            col[i] = work[[i, j]];
        }
        fft_x.process(&mut col);
        for i in 0..nx {
            work[[i, j]] = col[i];
        }
    }

    for ((m, l), v) in work.indexed_iter_mut() {
        *v *= post_x[m] * post_y[l] * scale;
    }
    work
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{inner_product, Polarization};
    use crate::grid::Grid2D;
    use crate::modes;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(grid: Grid2D, seed: u64) -> TransverseField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        TransverseField::from_fn(grid, Plane::Objective, |_, _| {
            (
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            )
        })
    }

    #[test]
    fn gaussian_maps_to_reciprocal_waist_gaussian() {
        let g = Grid2D::square(256, 16.0).unwrap();
        let w = 1.3;
        let u = modes::hermite_gauss(&g, Plane::Objective, 0, 0, w, Polarization::X);
        let img = fourier_image(&u).unwrap();
        let expect = modes::hermite_gauss(img.grid(), Plane::Image, 0, 0, 2.0 / w, Polarization::X);
        let diff = img.sub(&expect).norm();
        assert!(diff < 1e-9, "gaussian not an eigen-shape, diff {diff}");
        assert!((img.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn parseval_holds_for_random_pairs() {
        let g = Grid2D::square(128, 4.0).unwrap();
        for seed in 0..5 {
            let a = random_field(g, seed);
            let b = random_field(g, seed + 100);
            let lhs =
                inner_product(&fourier_image(&a).unwrap(), &fourier_image(&b).unwrap()).unwrap();
            let rhs = inner_product(&a, &b).unwrap();
            let rel = (lhs - rhs).norm() / rhs.norm();
            assert!(rel < 1e-10, "Parseval drift {rel} at seed {seed}");
        }
    }

    #[test]
    fn parity_is_preserved() {
        let g = Grid2D::square(64, 8.0).unwrap();
        // odd-in-x scalar: x * gaussian
        let f = TransverseField::from_fn(g, Plane::Objective, |x, y| {
            (
                Complex64::new(x * (-(x * x + y * y)).exp(), 0.0),
                Complex64::new(0.0, 0.0),
            )
        });
        let img = fourier_image(&f).unwrap();
        let (nx, ny) = img.grid().shape();
        let mut max_dev = 0.0f64;
        let mut max_val = 0.0f64;
        for i in 0..nx {
            for j in 0..ny {
                let v = img.ex()[[i, j]];
                let mirrored = img.ex()[[nx - 1 - i, j]];
                max_dev = max_dev.max((v + mirrored).norm());
                max_val = max_val.max(v.norm());
            }
        }
        assert!(max_dev / max_val < 1e-12, "odd input lost oddness");
    }

    #[test]
    fn rejects_image_plane_input() {
        let g = Grid2D::square(16, 1.0).unwrap();
        let f = TransverseField::zeros(g, Plane::Image);
        assert!(matches!(
            fourier_image(&f),
            Err(TweezerError::PlaneMismatch(_))
        ));
    }
}
