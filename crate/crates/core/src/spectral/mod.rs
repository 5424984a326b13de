//! Periodic Fourier-pseudospectral discretization on 1D and 2D grids.

mod field;
mod grid;
pub mod ops;
mod transform;

pub(crate) use field::check_same_grid;
pub use field::{Sampled, ScalarField, Spectrum, VectorField3, VectorSpectrum};
pub use grid::{mode_index, GridSpec, Wavenumbers};
pub use ops::{
    cross, dot, gradient_norm_sq, inner_l2, laplacian, norm_h1, norm_h2, norm_l2,
    partial_derivative, sup_grad_norm,
};
pub use transform::SpectralWorkspace;
