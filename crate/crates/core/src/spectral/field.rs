use rustfft::num_complex::Complex64;

use super::grid::GridSpec;
use crate::error::{Error, Result};

/// Real samples of a scalar function on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: GridSpec,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: GridSpec) -> Self {
        ScalarField {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn constant(grid: GridSpec, value: f64) -> Self {
        ScalarField {
            grid,
            values: vec![value; grid.len()],
        }
    }

    pub fn from_values(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::usage(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(ScalarField { grid, values })
    }

    /// Samples `f(x, y)` at every grid point.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = grid.points().map(|(x, y)| f(x, y)).collect();
        ScalarField { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// A three-component field `m = (m1, m2, m3)` on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField3 {
    components: [ScalarField; 3],
}

impl VectorField3 {
    pub fn new(components: [ScalarField; 3]) -> Result<Self> {
        let g = components[0].grid;
        if components.iter().any(|c| c.grid != g) {
            return Err(Error::usage("vector field components live on different grids"));
        }
        Ok(VectorField3 { components })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        VectorField3 {
            components: std::array::from_fn(|_| ScalarField::zeros(grid)),
        }
    }

    pub fn uniform(grid: GridSpec, v: [f64; 3]) -> Self {
        VectorField3 {
            components: std::array::from_fn(|c| ScalarField::constant(grid, v[c])),
        }
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> [f64; 3]) -> Self {
        let mut out = Self::zeros(grid);
        for (i, (x, y)) in grid.points().enumerate() {
            let v = f(x, y);
            for (c, comp) in out.components.iter_mut().enumerate() {
                comp.values[i] = v[c];
            }
        }
        out
    }

    pub(crate) fn from_raw(grid: GridSpec, raw: [Vec<f64>; 3]) -> Self {
        debug_assert!(raw.iter().all(|r| r.len() == grid.len()));
        let [a, b, c] = raw;
        VectorField3 {
            components: [
                ScalarField { grid, values: a },
                ScalarField { grid, values: b },
                ScalarField { grid, values: c },
            ],
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.components[0].grid
    }

    pub fn components(&self) -> &[ScalarField; 3] {
        &self.components
    }

    pub fn component(&self, c: usize) -> &ScalarField {
        &self.components[c]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut ScalarField {
        &mut self.components[c]
    }

    pub fn into_components(self) -> [ScalarField; 3] {
        self.components
    }

    pub fn at(&self, index: usize) -> [f64; 3] {
        std::array::from_fn(|c| self.components[c].values[index])
    }

    pub fn set(&mut self, index: usize, v: [f64; 3]) {
        for (c, comp) in self.components.iter_mut().enumerate() {
            comp.values[index] = v[c];
        }
    }

    /// Pointwise Euclidean length.
    pub fn magnitude(&self) -> ScalarField {
        let g = *self.grid();
        let values = (0..g.len())
            .map(|i| {
                let v = self.at(i);
                (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
            })
            .collect();
        ScalarField { grid: g, values }
    }

    /// `max | |m| - 1 |` over the grid.
    pub fn unit_length_defect(&self) -> f64 {
        self.magnitude()
            .values
            .iter()
            .fold(0.0, |m, v| m.max((v - 1.0).abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.values.iter().all(|v| v.is_finite()))
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.scale(s);
        out
    }

    pub fn scale(&mut self, s: f64) {
        for c in &mut self.components {
            c.values.iter_mut().for_each(|v| *v *= s);
        }
    }

    /// `self += s * other`
    pub fn axpy(&mut self, s: f64, other: &VectorField3) -> Result<()> {
        check_same_grid(self.grid(), other.grid())?;
        for (a, b) in self.components.iter_mut().zip(&other.components) {
            a.values
                .iter_mut()
                .zip(&b.values)
                .for_each(|(x, y)| *x += s * y);
        }
        Ok(())
    }

    pub fn sub(&self, other: &VectorField3) -> Result<VectorField3> {
        let mut out = self.clone();
        out.axpy(-1.0, other)?;
        Ok(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().fold(0.0, |m, c| m.max(c.max_abs()))
    }
}

/// Fourier coefficients of a real field, unnormalized forward-DFT convention
/// and storage order of the physical samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: GridSpec,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn zeros(grid: GridSpec) -> Self {
        Spectrum {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// `self += s * other`
    pub fn axpy(&mut self, s: f64, other: &Spectrum) {
        self.coeffs
            .iter_mut()
            .zip(&other.coeffs)
            .for_each(|(a, b)| *a += b * s);
    }

    fn parseval_scale(&self) -> f64 {
        let n = self.grid.len() as f64;
        self.grid.area() / (n * n)
    }

    /// Sum of `weight[i] * |c_i|^2`, scaled to a quadrature integral over the domain.
    pub(crate) fn weighted_energy(&self, weight: &[f64]) -> f64 {
        let s: f64 = self
            .coeffs
            .iter()
            .zip(weight)
            .map(|(c, w)| w * c.norm_sqr())
            .sum();
        s * self.parseval_scale()
    }

    /// `||f||_{L^2}^2` from coefficients (Parseval).
    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.parseval_scale()
    }
}

pub type VectorSpectrum = [Spectrum; 3];

pub(crate) fn check_same_grid(a: &GridSpec, b: &GridSpec) -> Result<()> {
    if a != b {
        return Err(Error::usage("fields live on different grids"));
    }
    Ok(())
}

/// Anything made of real component arrays on one grid.
pub trait Sampled {
    fn grid(&self) -> &GridSpec;
    fn slices(&self) -> Vec<&[f64]>;
}

impl Sampled for ScalarField {
    fn grid(&self) -> &GridSpec {
        &self.grid
    }
    fn slices(&self) -> Vec<&[f64]> {
        vec![&self.values]
    }
}

impl Sampled for VectorField3 {
    fn grid(&self) -> &GridSpec {
        self.grid()
    }
    fn slices(&self) -> Vec<&[f64]> {
        self.components.iter().map(|c| c.values()).collect()
    }
}
