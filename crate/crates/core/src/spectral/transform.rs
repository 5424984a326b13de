use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::field::{ScalarField, Spectrum, VectorField3, VectorSpectrum};
use super::grid::{GridSpec, Wavenumbers};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// FFT plans and scratch for one grid. Single owner; not shared across threads.
///
/// Forward transforms are unnormalized, inverse transforms divide by the
/// number of points. Two real fields are transformed with one complex FFT
/// whenever possible (`a + i b` packing); the inverse packing assumes the
/// spectra are Hermitian, which holds for every spectrum produced from real
/// data by the real, even or Nyquist-zeroed odd symbols used in this crate.
pub struct SpectralWorkspace {
    grid: GridSpec,
    wavenumbers: Wavenumbers,
    fwd_x: Arc<dyn Fft<f64>>,
    inv_x: Arc<dyn Fft<f64>>,
    fwd_y: Option<Arc<dyn Fft<f64>>>,
    inv_y: Option<Arc<dyn Fft<f64>>>,
    buf: Vec<Complex64>,
    tbuf: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl std::fmt::Debug for SpectralWorkspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralWorkspace")
            .field("grid", &self.grid)
            .finish_non_exhaustive()
    }
}

impl SpectralWorkspace {
    pub fn new(grid: GridSpec) -> Self {
        let mut planner = FftPlanner::new();
        let fwd_x = planner.plan_fft_forward(grid.nx());
        let inv_x = planner.plan_fft_inverse(grid.nx());
        let (fwd_y, inv_y) = if grid.dims() == 2 {
            (
                Some(planner.plan_fft_forward(grid.ny())),
                Some(planner.plan_fft_inverse(grid.ny())),
            )
        } else {
            (None, None)
        };
        let scratch_len = [
            Some(&fwd_x),
            Some(&inv_x),
            fwd_y.as_ref(),
            inv_y.as_ref(),
        ]
        .into_iter()
        .flatten()
        .map(|p| p.get_inplace_scratch_len())
        .max()
        .unwrap_or(0);
        SpectralWorkspace {
            wavenumbers: Wavenumbers::new(&grid),
            grid,
            fwd_x,
            inv_x,
            fwd_y,
            inv_y,
            buf: vec![ZERO; grid.len()],
            tbuf: vec![ZERO; grid.len()],
            scratch: vec![ZERO; scratch_len],
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn wavenumbers(&self) -> &Wavenumbers {
        &self.wavenumbers
    }

    /// In-place unnormalized 2D (or 1D) DFT of `self.buf`.
    fn transform_buf(&mut self, inverse: bool) {
        let (px, py) = if inverse {
            (&self.inv_x, &self.inv_y)
        } else {
            (&self.fwd_x, &self.fwd_y)
        };
        px.process_with_scratch(&mut self.buf, &mut self.scratch);
        if let Some(py) = py {
            let (nx, ny) = (self.grid.nx(), self.grid.ny());
            for iy in 0..ny {
                for ix in 0..nx {
                    self.tbuf[ix * ny + iy] = self.buf[iy * nx + ix];
                }
            }
            py.process_with_scratch(&mut self.tbuf, &mut self.scratch);
            for ix in 0..nx {
                for iy in 0..ny {
                    self.buf[iy * nx + ix] = self.tbuf[ix * ny + iy];
                }
            }
        }
    }

    /// Unnormalized complex DFT of arbitrary data (no Hermitian assumption).
    pub fn forward_complex(&mut self, data: &mut [Complex64]) {
        self.buf.copy_from_slice(data);
        self.transform_buf(false);
        data.copy_from_slice(&self.buf);
    }

    /// Normalized inverse complex DFT of arbitrary data.
    pub fn inverse_complex(&mut self, data: &mut [Complex64]) {
        self.buf.copy_from_slice(data);
        self.transform_buf(true);
        let s = 1.0 / self.grid.len() as f64;
        data.iter_mut()
            .zip(&self.buf)
            .for_each(|(d, b)| *d = b * s);
    }

    pub fn forward_into(&mut self, values: &[f64], out: &mut [Complex64]) {
        for (b, &v) in self.buf.iter_mut().zip(values) {
            *b = Complex64::new(v, 0.0);
        }
        self.transform_buf(false);
        out.copy_from_slice(&self.buf);
    }

    /// Forward transform of two real arrays with one complex FFT.
    pub fn forward_pair_into(
        &mut self,
        a: &[f64],
        b: &[f64],
        out_a: &mut [Complex64],
        out_b: &mut [Complex64],
    ) {
        for ((z, &x), &y) in self.buf.iter_mut().zip(a).zip(b) {
            *z = Complex64::new(x, y);
        }
        self.transform_buf(false);
        let (nx, ny) = (self.grid.nx(), self.grid.ny());
        for iy in 0..ny {
            for ix in 0..nx {
                let i = iy * nx + ix;
                let z = self.buf[i];
                let zc = self.buf[self.wavenumbers.conjugate_index(ix, iy)].conj();
                out_a[i] = (z + zc) * 0.5;
                // (z - zc) / (2i)
                let d = z - zc;
                out_b[i] = Complex64::new(0.5 * d.im, -0.5 * d.re);
            }
        }
    }

    pub fn inverse_into(&mut self, spec: &[Complex64], out: &mut [f64]) {
        self.buf.copy_from_slice(spec);
        self.transform_buf(true);
        let s = 1.0 / self.grid.len() as f64;
        for (o, z) in out.iter_mut().zip(&self.buf) {
            *o = z.re * s;
        }
    }

    /// Inverse transform of two Hermitian spectra with one complex FFT.
    pub fn inverse_pair_into(
        &mut self,
        a: &[Complex64],
        b: &[Complex64],
        out_a: &mut [f64],
        out_b: &mut [f64],
    ) {
        for ((z, x), y) in self.buf.iter_mut().zip(a).zip(b) {
            // x + i y
            *z = Complex64::new(x.re - y.im, x.im + y.re);
        }
        self.transform_buf(true);
        let s = 1.0 / self.grid.len() as f64;
        for ((oa, ob), z) in out_a.iter_mut().zip(out_b.iter_mut()).zip(&self.buf) {
            *oa = z.re * s;
            *ob = z.im * s;
        }
    }

    /// Forward transforms of any number of real arrays, paired up.
    pub fn forward_many(&mut self, inputs: &[&[f64]], outputs: &mut [&mut [Complex64]]) {
        assert_eq!(inputs.len(), outputs.len());
        let mut i = 0;
        while i + 1 < inputs.len() {
            let (lo, hi) = outputs.split_at_mut(i + 1);
            self.forward_pair_into(inputs[i], inputs[i + 1], lo[i], hi[0]);
            i += 2;
        }
        if i < inputs.len() {
            self.forward_into(inputs[i], outputs[i]);
        }
    }

    /// Inverse transforms of any number of Hermitian spectra, paired up.
    pub fn inverse_many(&mut self, inputs: &[&[Complex64]], outputs: &mut [&mut [f64]]) {
        assert_eq!(inputs.len(), outputs.len());
        let mut i = 0;
        while i + 1 < inputs.len() {
            let (lo, hi) = outputs.split_at_mut(i + 1);
            self.inverse_pair_into(inputs[i], inputs[i + 1], lo[i], hi[0]);
            i += 2;
        }
        if i < inputs.len() {
            self.inverse_into(inputs[i], outputs[i]);
        }
    }

    pub fn forward(&mut self, f: &ScalarField) -> Spectrum {
        let mut s = Spectrum::zeros(self.grid);
        self.forward_into(f.values(), s.coeffs_mut());
        s
    }

    pub fn inverse(&mut self, s: &Spectrum) -> ScalarField {
        let mut f = ScalarField::zeros(self.grid);
        self.inverse_into(s.coeffs(), f.values_mut());
        f
    }

    pub fn forward_vec(&mut self, v: &VectorField3) -> VectorSpectrum {
        let mut out: VectorSpectrum = std::array::from_fn(|_| Spectrum::zeros(self.grid));
        let [s0, s1, s2] = &mut out;
        let c = v.components();
        self.forward_many(
            &[c[0].values(), c[1].values(), c[2].values()],
            &mut [s0.coeffs_mut(), s1.coeffs_mut(), s2.coeffs_mut()],
        );
        out
    }

    pub fn inverse_vec(&mut self, s: &VectorSpectrum) -> VectorField3 {
        let n = self.grid.len();
        let mut raw: [Vec<f64>; 3] = std::array::from_fn(|_| vec![0.0; n]);
        let [r0, r1, r2] = &mut raw;
        self.inverse_many(
            &[s[0].coeffs(), s[1].coeffs(), s[2].coeffs()],
            &mut [r0, r1, r2],
        );
        VectorField3::from_raw(self.grid, raw)
    }

    /// Zeroes every mode outside the 2/3-rule band.
    pub fn dealias(&self, spec: &mut [Complex64]) {
        let wn = &self.wavenumbers;
        let nx = wn.nx();
        for (i, c) in spec.iter_mut().enumerate() {
            if !wn.keeps_under_two_thirds(i % nx, i / nx) {
                *c = ZERO;
            }
        }
    }
}
