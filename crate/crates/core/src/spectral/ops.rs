//! Differential operators, norms and pointwise vector algebra.
//!
//! Derivatives are spectral; products are evaluated pointwise in physical
//! space. Norms use the grid-sum quadrature, which is evaluated through
//! Parseval on the spectral coefficients so that derivative terms need no
//! extra inverse transforms. The result is identical (up to roundoff) to
//! summing squared spectral derivatives in physical space.

use rustfft::num_complex::Complex64;

use super::field::{check_same_grid, Sampled, ScalarField, Spectrum, VectorField3, VectorSpectrum};
use super::grid::Wavenumbers;
use super::transform::SpectralWorkspace;
use crate::error::{Error, Result};

/// Spectral `i k_axis` multiplication, Nyquist zeroed, in place.
pub(crate) fn differentiate_in_place(wn: &Wavenumbers, spec: &mut [Complex64], axis: usize) {
    for (c, d) in spec.iter_mut().zip(&wn.deriv[axis]) {
        *c = Complex64::new(-c.im * d, c.re * d);
    }
}

pub(crate) fn laplacian_in_place(wn: &Wavenumbers, spec: &mut [Complex64]) {
    for (c, k2) in spec.iter_mut().zip(&wn.k_sq) {
        *c *= -k2;
    }
}

pub fn laplacian(ws: &mut SpectralWorkspace, f: &VectorField3) -> VectorField3 {
    let mut s = ws.forward_vec(f);
    for c in &mut s {
        laplacian_in_place(ws.wavenumbers(), c.coeffs_mut());
    }
    ws.inverse_vec(&s)
}

pub fn scalar_laplacian(ws: &mut SpectralWorkspace, f: &ScalarField) -> ScalarField {
    let mut s = ws.forward(f);
    laplacian_in_place(ws.wavenumbers(), s.coeffs_mut());
    ws.inverse(&s)
}

pub fn partial_derivative(
    ws: &mut SpectralWorkspace,
    f: &ScalarField,
    axis: usize,
) -> Result<ScalarField> {
    if axis >= f.grid().dims() {
        return Err(Error::usage(format!(
            "axis {axis} out of range for a {}D grid",
            f.grid().dims()
        )));
    }
    check_same_grid(ws.grid(), f.grid())?;
    let mut s = ws.forward(f);
    differentiate_in_place(ws.wavenumbers(), s.coeffs_mut(), axis);
    Ok(ws.inverse(&s))
}

/// All first partials `d_j m_i`, ordered component-major (`[i * dims + j]`),
/// computed from the given spectra.
pub(crate) fn gradient_from_spectra(
    ws: &mut SpectralWorkspace,
    spectra: &VectorSpectrum,
) -> Vec<Vec<f64>> {
    let dims = ws.grid().dims();
    let n = ws.grid().len();
    let mut derivs: Vec<Vec<Complex64>> = Vec::with_capacity(3 * dims);
    for s in spectra {
        for axis in 0..dims {
            let mut d = s.coeffs().to_vec();
            differentiate_in_place(ws.wavenumbers(), &mut d, axis);
            derivs.push(d);
        }
    }
    let mut out: Vec<Vec<f64>> = vec![vec![0.0; n]; derivs.len()];
    let inputs: Vec<&[Complex64]> = derivs.iter().map(|d| d.as_slice()).collect();
    let mut outputs: Vec<&mut [f64]> = out.iter_mut().map(|o| o.as_mut_slice()).collect();
    ws.inverse_many(&inputs, &mut outputs);
    out
}

pub(crate) fn grad_sq_from_partials(partials: &[Vec<f64>], n: usize) -> Vec<f64> {
    let mut g = vec![0.0; n];
    for p in partials {
        g.iter_mut().zip(p).for_each(|(a, b)| *a += b * b);
    }
    g
}

/// `|grad m|^2 = sum_{i,j} (d_j m_i)^2`, pointwise.
pub fn gradient_norm_sq(ws: &mut SpectralWorkspace, m: &VectorField3) -> ScalarField {
    let s = ws.forward_vec(m);
    let partials = gradient_from_spectra(ws, &s);
    let values = grad_sq_from_partials(&partials, m.grid().len());
    ScalarField::from_values(*m.grid(), values).expect("grid-sized")
}

/// `max_x sqrt(sum_{i,j} (d_j m_i)^2)`: the `W^{1,inf}` seminorm used as blow-up indicator.
pub fn sup_grad_norm(ws: &mut SpectralWorkspace, m: &VectorField3) -> f64 {
    gradient_norm_sq(ws, m)
        .values()
        .iter()
        .fold(0.0f64, |a, &v| a.max(v))
        .sqrt()
}

#[inline]
pub fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Pointwise `a x b`.
pub fn cross(a: &VectorField3, b: &VectorField3) -> Result<VectorField3> {
    check_same_grid(a.grid(), b.grid())?;
    let mut out = VectorField3::zeros(*a.grid());
    for i in 0..a.grid().len() {
        out.set(i, cross3(a.at(i), b.at(i)));
    }
    Ok(out)
}

/// Pointwise `a . b`.
pub fn dot(a: &VectorField3, b: &VectorField3) -> Result<ScalarField> {
    check_same_grid(a.grid(), b.grid())?;
    let values = (0..a.grid().len()).map(|i| dot3(a.at(i), b.at(i))).collect();
    ScalarField::from_values(*a.grid(), values)
}

pub fn inner_l2<F: Sampled>(f: &F, g: &F) -> Result<f64> {
    check_same_grid(f.grid(), g.grid())?;
    let s: f64 = f
        .slices()
        .iter()
        .zip(g.slices())
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>())
        .sum();
    Ok(s * f.grid().cell_area())
}

pub fn norm_l2<F: Sampled>(f: &F) -> f64 {
    inner_l2(f, f).expect("same grid").sqrt()
}

fn spectra_of<F: Sampled>(ws: &mut SpectralWorkspace, f: &F) -> Result<Vec<Spectrum>> {
    check_same_grid(ws.grid(), f.grid())?;
    let grid = *f.grid();
    let slices = f.slices();
    let mut out: Vec<Spectrum> = slices.iter().map(|_| Spectrum::zeros(grid)).collect();
    let mut outs: Vec<&mut [Complex64]> = out.iter_mut().map(|s| s.coeffs_mut()).collect();
    ws.forward_many(&slices, &mut outs);
    Ok(out)
}

/// Squared norms `(||f||^2, ||grad f||^2, sum ||d_i d_j f||^2)` from spectra.
pub fn sobolev_parts(wn: &Wavenumbers, spectra: &[Spectrum]) -> [f64; 3] {
    let mut parts = [0.0; 3];
    for s in spectra {
        let scale = s.grid().area() / (s.grid().len() as f64).powi(2);
        let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
        for ((z, g), h) in s.coeffs().iter().zip(&wn.grad_weight).zip(&wn.hess_weight) {
            let e = z.norm_sqr();
            a += e;
            b += g * e;
            c += h * e;
        }
        parts[0] += a * scale;
        parts[1] += b * scale;
        parts[2] += c * scale;
    }
    parts
}

/// `||grad f||^2` summed over components, from spectra.
pub fn grad_sq_norm_from_spectra(wn: &Wavenumbers, spectra: &[Spectrum]) -> f64 {
    spectra
        .iter()
        .map(|s| s.weighted_energy(&wn.grad_weight))
        .sum()
}

pub fn norm_h1<F: Sampled>(ws: &mut SpectralWorkspace, f: &F) -> Result<f64> {
    let s = spectra_of(ws, f)?;
    let [l2, g, _] = sobolev_parts(ws.wavenumbers(), &s);
    Ok((l2 + g).sqrt())
}

pub fn norm_h2<F: Sampled>(ws: &mut SpectralWorkspace, f: &F) -> Result<f64> {
    let s = spectra_of(ws, f)?;
    let [l2, g, h] = sobolev_parts(ws.wavenumbers(), &s);
    Ok((l2 + g + h).sqrt())
}
