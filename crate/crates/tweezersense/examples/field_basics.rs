//! Grids, Hermite–Gauss modes, inner products and unitary imaging.
//!
//! ```bash
//! cargo run --example field_basics
//! ```

use tweezersense::field::{inner_product, Plane, Polarization};
use tweezersense::fourier::fourier_image;
use tweezersense::grid::Grid2D;
use tweezersense::modes;

fn main() -> Result<(), tweezersense::TweezerError> {
    // 256 x 256 window, 12 waist radii wide, cell-centered so no sample
    // sits on either axis
    let grid = Grid2D::square(256, 12.0)?;
    println!("grid: {:?} cells, dx = {:.4}", grid.shape(), grid.dx());

    // the TEM basis is orthonormal under the photon-flux inner product
    let u00 = modes::hermite_gauss(&grid, Plane::Objective, 0, 0, 1.0, Polarization::X);
    let u10 = modes::hermite_gauss(&grid, Plane::Objective, 1, 0, 1.0, Polarization::X);
    println!("<u00, u00> = {:.9}", inner_product(&u00, &u00)?.re);
    println!("<u00, u10> = {:+.3e}", inner_product(&u00, &u10)?.re);

    // a displaced fundamental overlaps by exp(-d²/2w²)
    let displaced = modes::displaced_gaussian(&grid, Plane::Objective, 1.0, 1.0, Polarization::X);
    println!(
        "<u00, u00 displaced by w> = {:.6} (exp(-1/2) = {:.6})",
        inner_product(&u00, &displaced)?.re,
        (-0.5f64).exp()
    );

    // imaging is a unitary map: fluxes and overlaps are plane-independent
    let image = fourier_image(&u00)?;
    println!(
        "flux before imaging = {:.9}, after = {:.9}",
        u00.flux(),
        image.flux()
    );
    println!(
        "image-plane grid spans {:.3} frequency units at dk = {:.4}",
        image.grid().extent_x(),
        image.grid().dx()
    );
    Ok(())
}
