//! Two-polarization complex fields on a [`Grid2D`].

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::TweezerError;
use crate::grid::Grid2D;

/// Which transverse plane a field is sampled on.
///
/// Fields start on the objective plane (just after the collection lens) and
/// move to the image plane through [`crate::fourier::fourier_image`]. Mixing
/// planes in an inner product is a bug, so the tag is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plane {
    Objective,
    Image,
}

/// Linear polarization of the trapping beam.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarization {
    X,
    Y,
}

/// A sampled transverse field with x and y polarization components.
///
/// Amplitudes are stored so that `inner_product(f, f)` is the photon flux
/// carried by the field (photons/s); mode functions are the special case of
/// unit flux.
#[derive(Debug, Clone)]
pub struct TransverseField {
    grid: Grid2D,
    plane: Plane,
    ex: Array2<Complex64>,
    ey: Array2<Complex64>,
}

impl TransverseField {
    pub fn zeros(grid: Grid2D, plane: Plane) -> Self {
        let shape = grid.shape();
        Self {
            grid,
            plane,
            ex: Array2::zeros(shape),
            ey: Array2::zeros(shape),
        }
    }

    /// Build a field from explicit component arrays.
    pub fn from_components(
        grid: Grid2D,
        plane: Plane,
        ex: Array2<Complex64>,
        ey: Array2<Complex64>,
    ) -> Result<Self, TweezerError> {
        if ex.dim() != grid.shape() || ey.dim() != grid.shape() {
            return Err(TweezerError::GridMismatch(format!(
                "component shape {:?}/{:?} does not match grid {:?}",
                ex.dim(),
                ey.dim(),
                grid.shape()
            )));
        }
        Ok(Self {
            grid,
            plane,
            ex,
            ey,
        })
    }

    /// Evaluate both components from a function of the cell-centered
    /// coordinates, `f(x, y) -> (ex, ey)`.
    pub fn from_fn(
        grid: Grid2D,
        plane: Plane,
        mut f: impl FnMut(f64, f64) -> (Complex64, Complex64),
    ) -> Self {
        let (nx, ny) = grid.shape();
        let mut ex = Array2::zeros((nx, ny));
        let mut ey = Array2::zeros((nx, ny));
        for i in 0..nx {
            let x = grid.x(i);
            for j in 0..ny {
                let (a, b) = f(x, grid.y(j));
                ex[[i, j]] = a;
                ey[[i, j]] = b;
            }
        }
        Self {
            grid,
            plane,
            ex,
            ey,
        }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn plane(&self) -> Plane {
        self.plane
    }

    pub fn ex(&self) -> &Array2<Complex64> {
        &self.ex
    }

    pub fn ey(&self) -> &Array2<Complex64> {
        &self.ey
    }

    pub fn ex_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.ex
    }

    pub fn ey_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.ey
    }

    /// `|ex|^2 + |ey|^2` per cell. Multiply by [`Grid2D::cell_area`] to turn
    /// samples into integrated flux.
    pub fn intensity(&self) -> Array2<f64> {
        let mut out = Array2::zeros(self.grid.shape());
        ndarray::Zip::from(&mut out)
            .and(&self.ex)
            .and(&self.ey)
            .for_each(|o, a, b| *o = a.norm_sqr() + b.norm_sqr());
        out
    }

    /// L2 norm under the physical measure, `sqrt(<f, f>)`.
    pub fn norm(&self) -> f64 {
        let mut acc = 0.0;
        for v in self.ex.iter().chain(self.ey.iter()) {
            acc += v.norm_sqr();
        }
        (acc * self.grid.cell_area()).sqrt()
    }

    /// Photon flux carried by the field (photons/s), `<f, f>`.
    pub fn flux(&self) -> f64 {
        let n = self.norm();
        n * n
    }

    /// Direction-preserving rescale to unit norm.
    ///
    /// Fails on a zero (or numerically vanishing) field, which has no
    /// direction to preserve.
    pub fn normalized(&self) -> Result<TransverseField, TweezerError> {
        let n = self.norm();
        if !(n.is_finite()) || n <= 0.0 {
            return Err(TweezerError::DegenerateField(format!(
                "cannot normalize field with norm {n}"
            )));
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, c: Complex64) -> TransverseField {
        TransverseField {
            grid: self.grid,
            plane: self.plane,
            ex: self.ex.mapv(|v| v * c),
            ey: self.ey.mapv(|v| v * c),
        }
    }

    /// Pointwise sum. Panics on grid/plane mismatch; for library-internal
    /// composition of fields that were built on the same lattice.
    pub fn add(&self, other: &TransverseField) -> TransverseField {
        assert_eq!(self.grid, other.grid, "field addition requires one grid");
        assert_eq!(self.plane, other.plane, "field addition requires one plane");
        TransverseField {
            grid: self.grid,
            plane: self.plane,
            ex: &self.ex + &other.ex,
            ey: &self.ey + &other.ey,
        }
    }

    pub fn sub(&self, other: &TransverseField) -> TransverseField {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    pub fn is_finite(&self) -> bool {
        self.ex
            .iter()
            .chain(self.ey.iter())
            .all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

/// Discretized inner product `<a, b> = Σ (ex_a* ex_b + ey_a* ey_b) dx dy`,
/// conjugate-linear in the first argument.
///
/// Both fields must share the same grid and plane tag. Summation order is
/// fixed (row-major over both components), so results are reproducible.
pub fn inner_product(a: &TransverseField, b: &TransverseField) -> Result<Complex64, TweezerError> {
    if a.grid != b.grid {
        return Err(TweezerError::GridMismatch(format!(
            "inner product between grids {:?} and {:?}",
            a.grid.shape(),
            b.grid.shape()
        )));
    }
    if a.plane != b.plane {
        return Err(TweezerError::PlaneMismatch(format!(
            "inner product between {:?} and {:?} planes",
            a.plane, b.plane
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (va, vb) in a.ex.iter().zip(b.ex.iter()) {
        acc += va.conj() * vb;
    }
    for (va, vb) in a.ey.iter().zip(b.ey.iter()) {
        acc += va.conj() * vb;
    }
    Ok(acc * a.grid.cell_area())
}
