//! Uniform transverse sampling lattice.

use crate::error::TweezerError;

/// A uniform 2-D sampling lattice with physical extent.
///
/// Coordinates are cell-centered: sample `i` along x sits at
/// `x_i = (i + 1/2) dx - extent_x/2`, so samples run from
/// `-extent/2 + d/2` to `+extent/2 - d/2` and no sample lies exactly on
/// either axis. Sample counts must be even, which makes the lattice
/// mirror-symmetric (`x_{n-1-i} = -x_i`); sign-sensitive operations such as
/// mode flipping rely on this.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    samples_x: usize,
    samples_y: usize,
    extent_x: f64,
    extent_y: f64,
}

impl Grid2D {
    pub const MIN_SAMPLES: usize = 16;

    pub fn new(
        samples_x: usize,
        samples_y: usize,
        extent_x: f64,
        extent_y: f64,
    ) -> Result<Self, TweezerError> {
        for (name, n) in [("samples_x", samples_x), ("samples_y", samples_y)] {
            if n < Self::MIN_SAMPLES || !n.is_multiple_of(2) {
                return Err(TweezerError::InvalidGrid(format!(
                    "{name} must be even and >= {}, got {n}",
                    Self::MIN_SAMPLES
                )));
            }
        }
        for (name, e) in [("extent_x", extent_x), ("extent_y", extent_y)] {
            if e <= 0.0 || !e.is_finite() {
                return Err(TweezerError::InvalidGrid(format!(
                    "{name} must be positive and finite, got {e}"
                )));
            }
        }
        Ok(Self {
            samples_x,
            samples_y,
            extent_x,
            extent_y,
        })
    }

    /// Square grid: same sample count and extent along both axes.
    pub fn square(samples: usize, extent: f64) -> Result<Self, TweezerError> {
        Self::new(samples, samples, extent, extent)
    }

    pub fn samples_x(&self) -> usize {
        self.samples_x
    }

    pub fn samples_y(&self) -> usize {
        self.samples_y
    }

    pub fn extent_x(&self) -> f64 {
        self.extent_x
    }

    pub fn extent_y(&self) -> f64 {
        self.extent_y
    }

    pub fn dx(&self) -> f64 {
        self.extent_x / self.samples_x as f64
    }

    pub fn dy(&self) -> f64 {
        self.extent_y / self.samples_y as f64
    }

    /// Area of one cell, the weight of each sample in discretized integrals.
    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }

    /// x coordinate of column `i` (cell-centered).
    pub fn x(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dx() - 0.5 * self.extent_x
    }

    /// y coordinate of row `j` (cell-centered).
    pub fn y(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.dy() - 0.5 * self.extent_y
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.samples_x).map(|i| self.x(i)).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        (0..self.samples_y).map(|j| self.y(j)).collect()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.samples_x, self.samples_y)
    }

    /// The reciprocal lattice produced by the centered discrete Fourier
    /// transform: same sample counts, spacing `2π/(n·d)` per axis.
    pub fn conjugate(&self) -> Grid2D {
        Grid2D {
            samples_x: self.samples_x,
            samples_y: self.samples_y,
            extent_x: 2.0 * std::f64::consts::PI / self.dx(),
            extent_y: 2.0 * std::f64::consts::PI / self.dy(),
        }
    }
}
