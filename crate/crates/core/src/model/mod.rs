//! Problem definitions, parameters and physical diagnostics.

mod params;
mod problems;

pub use params::{ProblemParams, TAU};
pub use problems::{
    blowup_initial_data, manufactured_forcing, manufactured_solution, problem_registry,
    self_reference_initial_data, Blowup, Manufactured, Problem, ProblemOptions, SelfReference,
    Uniform,
};

use rustfft::num_complex::Complex64;

use crate::sav::energy_from_spectra;
use crate::spectral::ops::{
    cross3, dot3, gradient_from_spectra, gradient_norm_sq, grad_sq_from_partials, laplacian, laplacian_in_place,
};
use crate::spectral::{SpectralWorkspace, VectorField3};

/// Physical observables of a field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    /// `E = 1/2 ||grad m||^2`.
    pub energy: f64,
    /// `||m x Lap m||^2`, the dissipation rate over `gamma`.
    pub dissipation: f64,
    pub min_norm: f64,
    pub max_norm: f64,
    pub sup_grad_norm: f64,
    /// `max |m x (m x Lap m) - ((m . Lap m) m - |m|^2 Lap m)|`.
    pub identity_residual: f64,
}

pub fn diagnostics(ws: &mut SpectralWorkspace, m: &VectorField3) -> Diagnostics {
    let n = m.grid().len();
    let spec = ws.forward_vec(m);
    let energy = energy_from_spectra(ws.wavenumbers(), &spec);
    let partials = gradient_from_spectra(ws, &spec);
    let sup_grad_norm = grad_sq_from_partials(&partials, n)
        .into_iter()
        .fold(0.0, f64::max)
        .sqrt();
    let mut lap_spec = spec;
    for s in &mut lap_spec {
        laplacian_in_place(ws.wavenumbers(), s.coeffs_mut());
    }
    let lap = ws.inverse_vec(&lap_spec);

    let mut dissipation = 0.0;
    let mut identity_residual: f64 = 0.0;
    let (mut min_norm, mut max_norm) = (f64::INFINITY, 0.0f64);
    for i in 0..n {
        let (a, l) = (m.at(i), lap.at(i));
        let c = cross3(a, l);
        dissipation += dot3(c, c);
        let lhs = cross3(a, c);
        let (al, aa) = (dot3(a, l), dot3(a, a));
        for k in 0..3 {
            identity_residual = identity_residual.max((lhs[k] - (al * a[k] - aa * l[k])).abs());
        }
        let r = aa.sqrt();
        min_norm = min_norm.min(r);
        max_norm = max_norm.max(r);
    }
    Diagnostics {
        energy,
        dissipation: dissipation * m.grid().cell_area(),
        min_norm,
        max_norm,
        sup_grad_norm,
        identity_residual,
    }
}

/// `max |d_t m^e - gamma Lap m^e - gamma |grad m^e|^2 m^e + beta m^e x Lap m^e - f|`
/// over the workspace grid at time `t`. The time derivative is a complex step
/// and the space derivatives are spectral, so the check does not reuse the
/// hand-derived forcing terms.
pub fn manufactured_residual(ws: &mut SpectralWorkspace, t: f64, gamma: f64, beta: f64) -> f64 {
    let grid = *ws.grid();
    let h = 1e-30;
    let dt_m = VectorField3::from_fn(grid, |x, y| {
        let tc = Complex64::new(t, h);
        let (ax, ay) = (tc + x, tc + y);
        [ax.sin() * ay.cos(), ax.cos() * ay.cos(), ay.sin()].map(|z| z.im / h)
    });
    let m = VectorField3::from_fn(grid, |x, y| manufactured_solution(x, y, t));
    let lap = laplacian(ws, &m);
    let g2 = gradient_norm_sq(ws, &m);
    let mut worst: f64 = 0.0;
    for i in 0..grid.len() {
        let (x, y) = grid.coord_of(i);
        let f = manufactured_forcing(x, y, t, gamma, beta);
        let (a, l, d) = (m.at(i), lap.at(i), dt_m.at(i));
        let c = cross3(a, l);
        let gs = g2.values()[i];
        for k in 0..3 {
            let r = d[k] - gamma * l[k] - gamma * gs * a[k] + beta * c[k] - f[k];
            worst = worst.max(r.abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::GridSpec;
    use std::f64::consts::PI;

    #[test]
    fn diagnostics_examples() {
        let g = GridSpec::square(16, 2.0 * PI, 0.0).unwrap();
        let mut ws = SpectralWorkspace::new(g);
        let d = diagnostics(&mut ws, &VectorField3::uniform(g, [0.0, 0.0, 1.0]));
        assert_eq!((d.energy, d.dissipation, d.sup_grad_norm), (0.0, 0.0, 0.0));
        assert_eq!((d.min_norm, d.max_norm), (1.0, 1.0));

        let m = VectorField3::from_fn(g, |x, _| [x.sin(), x.cos(), 0.0]);
        let d = diagnostics(&mut ws, &m);
        assert!(d.dissipation < 1e-24);
        assert!((d.energy - 2.0 * PI * PI).abs() < 1e-11);
        assert!((d.sup_grad_norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn forcing_residual_vanishes() {
        let g = GridSpec::square(32, 2.0 * PI, 0.0).unwrap();
        let mut ws = SpectralWorkspace::new(g);
        for (t, beta) in [(0.0, 0.0), (0.37, 0.5), (1.3, 1.0)] {
            let r = manufactured_residual(&mut ws, t, 1.0, beta);
            assert!(r < 1e-12, "t = {t}: {r}");
        }
    }

    #[test]
    fn identity_residual_on_random_unit_fields() {
        use rand::{Rng, SeedableRng};
        let g = GridSpec::square(32, 2.0 * PI, 0.0).unwrap();
        let mut ws = SpectralWorkspace::new(g);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let coef: Vec<f64> = (0..9).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let m = VectorField3::from_fn(g, |x, y| {
            let v = [
                coef[0] * x.sin() + coef[1] * y.cos() + coef[2],
                coef[3] * (x + y).cos() + coef[4] + 0.1 * coef[5] * (2.0 * x).sin(),
                coef[6] * y.sin() + coef[7] * x.cos() + 1.5 + coef[8],
            ];
            let n = dot3(v, v).sqrt();
            v.map(|c| c / n)
        });
        let d = diagnostics(&mut ws, &m);
        assert!(d.identity_residual <= 1e-10, "{}", d.identity_residual);
    }
}
