use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Geometry of a uniform periodic grid in one or two dimensions.
///
/// Samples are stored row-major with `x` varying fastest: the value at
/// `(ix, iy)` lives at `iy * nx + ix`. A 1D grid has `ny == 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    dims: usize,
    modes: [usize; 2],
    lengths: [f64; 2],
    origin: [f64; 2],
}

impl GridSpec {
    pub fn new_1d(nx: usize, length: f64, origin: f64) -> Result<Self> {
        let g = GridSpec {
            dims: 1,
            modes: [nx, 1],
            lengths: [length, 1.0],
            origin: [origin, 0.0],
        };
        g.validate()?;
        Ok(g)
    }

    pub fn new_2d(modes: [usize; 2], lengths: [f64; 2], origin: [f64; 2]) -> Result<Self> {
        let g = GridSpec {
            dims: 2,
            modes,
            lengths,
            origin,
        };
        g.validate()?;
        Ok(g)
    }

    /// Square `n x n` grid on `[origin, origin + length)^2`.
    pub fn square(n: usize, length: f64, origin: f64) -> Result<Self> {
        Self::new_2d([n, n], [length, length], [origin, origin])
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims != 1 && self.dims != 2 {
            return Err(Error::usage(format!("dims must be 1 or 2, got {}", self.dims)));
        }
        for axis in 0..self.dims {
            let n = self.modes[axis];
            if n < 4 || !n.is_multiple_of(2) {
                return Err(Error::usage(format!(
                    "modes along axis {axis} must be even and >= 4, got {n}"
                )));
            }
            let l = self.lengths[axis];
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::usage(format!(
                    "length along axis {axis} must be positive, got {l}"
                )));
            }
            if !self.origin[axis].is_finite() {
                return Err(Error::usage(format!("origin along axis {axis} is not finite")));
            }
        }
        if self.dims == 1 && self.modes[1] != 1 {
            return Err(Error::usage("1D grid must have a single row"));
        }
        Ok(())
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn nx(&self) -> usize {
        self.modes[0]
    }

    pub fn ny(&self) -> usize {
        self.modes[1]
    }

    pub fn modes(&self) -> [usize; 2] {
        self.modes
    }

    pub fn lengths(&self) -> [f64; 2] {
        self.lengths
    }

    pub fn origin(&self) -> [f64; 2] {
        self.origin
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.modes[0] * self.modes[1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.lengths[axis] / self.modes[axis] as f64
    }

    /// Quadrature weight of a single grid point.
    pub fn cell_area(&self) -> f64 {
        if self.dims == 1 {
            self.spacing(0)
        } else {
            self.spacing(0) * self.spacing(1)
        }
    }

    /// Measure of the whole domain.
    pub fn area(&self) -> f64 {
        self.cell_area() * self.len() as f64
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.modes[0] + ix
    }

    pub fn coord(&self, ix: usize, iy: usize) -> (f64, f64) {
        let x = self.origin[0] + ix as f64 * self.spacing(0);
        let y = if self.dims == 1 {
            0.0
        } else {
            self.origin[1] + iy as f64 * self.spacing(1)
        };
        (x, y)
    }

    pub fn coord_of(&self, index: usize) -> (f64, f64) {
        self.coord(index % self.modes[0], index / self.modes[0])
    }

    /// Coordinates of every grid point, in storage order.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.len()).map(move |i| self.coord_of(i))
    }

    /// Grid points along one axis.
    pub fn axis_coords(&self, axis: usize) -> Vec<f64> {
        if axis >= self.dims {
            return vec![0.0];
        }
        let h = self.spacing(axis);
        (0..self.modes[axis])
            .map(|i| self.origin[axis] + i as f64 * h)
            .collect()
    }
}

/// Signed mode index for FFT storage position `i` of an `n`-point transform.
/// The unmatched Nyquist entry maps to `-n/2`.
pub fn mode_index(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// Spectral symbols of a [`GridSpec`].
#[derive(Debug, Clone)]
pub struct Wavenumbers {
    nx: usize,
    ny: usize,
    /// Signed integer mode indices per axis.
    pub index_x: Vec<i64>,
    pub index_y: Vec<i64>,
    /// Physical wavenumbers `2 pi k / L` (Nyquist kept at `-N/2`).
    pub kx: Vec<f64>,
    pub ky: Vec<f64>,
    /// First-derivative wavenumbers: same as `kx`/`ky` but zero at Nyquist.
    pub dx: Vec<f64>,
    pub dy: Vec<f64>,
    /// `|k|^2` per spectral entry, storage order.
    pub k_sq: Vec<f64>,
    /// First-derivative symbols per spectral entry, storage order.
    pub(crate) deriv: [Vec<f64>; 2],
    /// `dx^2 + dy^2` per entry: weight of `||grad f||^2` in Parseval sums.
    pub(crate) grad_weight: Vec<f64>,
    /// `kx^4 + ky^4 + 2 dx^2 dy^2` per entry: weight of the summed squared
    /// second partials. Pure second derivatives keep the full symbol; the
    /// mixed one is a product of first derivatives.
    pub(crate) hess_weight: Vec<f64>,
}

impl Wavenumbers {
    pub fn new(grid: &GridSpec) -> Self {
        let axis = |a: usize| -> (Vec<i64>, Vec<f64>, Vec<f64>) {
            if a >= grid.dims() {
                return (vec![0], vec![0.0], vec![0.0]);
            }
            let n = grid.modes()[a];
            let scale = 2.0 * PI / grid.lengths()[a];
            let idx: Vec<i64> = (0..n).map(|i| mode_index(i, n)).collect();
            let k: Vec<f64> = idx.iter().map(|&j| j as f64 * scale).collect();
            let d: Vec<f64> = idx
                .iter()
                .zip(&k)
                .map(|(&j, &kk)| if j == -(n as i64 / 2) { 0.0 } else { kk })
                .collect();
            (idx, k, d)
        };
        let (index_x, kx, dx) = axis(0);
        let (index_y, ky, dy) = axis(1);
        let (nx, ny) = (grid.nx(), grid.ny());
        let mut k_sq = Vec::with_capacity(nx * ny);
        let mut deriv = [Vec::with_capacity(nx * ny), Vec::with_capacity(nx * ny)];
        let mut grad_weight = Vec::with_capacity(nx * ny);
        let mut hess_weight = Vec::with_capacity(nx * ny);
        for (y, d_y) in ky.iter().zip(&dy) {
            for (x, d_x) in kx.iter().zip(&dx) {
                k_sq.push(x * x + y * y);
                deriv[0].push(*d_x);
                deriv[1].push(*d_y);
                grad_weight.push(d_x * d_x + d_y * d_y);
                hess_weight.push(x.powi(4) + y.powi(4) + 2.0 * d_x * d_x * d_y * d_y);
            }
        }
        Wavenumbers {
            nx,
            ny,
            index_x,
            index_y,
            kx,
            ky,
            dx,
            dy,
            k_sq,
            deriv,
            grad_weight,
            hess_weight,
        }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    /// Storage index of the mode `-k` for the entry at `(ix, iy)`.
    pub fn conjugate_index(&self, ix: usize, iy: usize) -> usize {
        let cx = (self.nx - ix) % self.nx;
        let cy = (self.ny - iy) % self.ny;
        cy * self.nx + cx
    }

    /// Whether the entry survives 2/3-rule truncation.
    pub fn keeps_under_two_thirds(&self, ix: usize, iy: usize) -> bool {
        let cut = |j: i64, n: usize| 3 * j.unsigned_abs() as usize <= n;
        cut(self.index_x[ix], self.nx) && (self.ny == 1 || cut(self.index_y[iy], self.ny))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_or_tiny_modes() {
        assert!(GridSpec::new_1d(6, 1.0, 0.0).is_ok());
        assert!(GridSpec::new_1d(7, 1.0, 0.0).is_err());
        assert!(GridSpec::new_1d(2, 1.0, 0.0).is_err());
        assert!(GridSpec::square(8, 0.0, 0.0).is_err());
        assert!(GridSpec::square(8, -1.0, 0.0).is_err());
    }

    #[test]
    fn spacing_and_area() {
        let g = GridSpec::new_2d([8, 4], [2.0, 1.0], [-1.0, -0.5]).unwrap();
        assert_eq!(g.spacing(0), 0.25);
        assert_eq!(g.spacing(1), 0.25);
        assert_eq!(g.cell_area(), 0.0625);
        assert!((g.area() - 2.0).abs() < 1e-15);
        assert_eq!(g.coord(4, 2), (0.0, 0.0));
        assert_eq!(g.coord_of(g.index(4, 2)), (0.0, 0.0));
    }

    #[test]
    fn nyquist_symbols() {
        let g = GridSpec::new_1d(8, 2.0 * PI, 0.0).unwrap();
        let wn = Wavenumbers::new(&g);
        assert_eq!(wn.index_x, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        assert_eq!(wn.kx[4], -4.0);
        assert_eq!(wn.dx[4], 0.0);
        assert_eq!(wn.k_sq[4], 16.0);
        assert_eq!(wn.conjugate_index(1, 0), 7);
        assert_eq!(wn.conjugate_index(4, 0), 4);
    }
}
