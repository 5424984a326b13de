use rustfft::num_complex::Complex64;

use super::bdf::BdfScheme;
use super::history::{HistoryBuffer, Which};
use super::StepParams;
use crate::error::{Error, Result};
use crate::spectral::ops::{differentiate_in_place, grad_sq_from_partials, laplacian_in_place};
use crate::spectral::{check_same_grid, SpectralWorkspace, Spectrum, VectorField3, VectorSpectrum};

/// Output of [`assemble_rhs_spectrum`].
#[derive(Debug, Clone)]
pub struct RhsParts {
    /// Right-hand side for the increment `m~^{n+1} - m~^n`.
    pub rhs: VectorSpectrum,
    /// `B_l(m^n)` in physical space.
    pub b_proj: VectorField3,
    /// Spectrum of `m~^n`, to which the solved increment is added.
    pub base: VectorSpectrum,
}

/// Right-hand side of the linear problem for the increment
/// `d = m~^{n+1} - m~^n`, in spectral form. With the integer BDF numerators
/// `A_i` over the denominator `q` and `h = q dt`, the problem for `m~^{n+1}` is
///
/// ```text
/// A_0 m~^{n+1} - h D Lap m~^{n+1} [ + h beta B(m) x Lap m~^{n+1} ]
///     = -(sum_{i>=1} A_i m~^{n+1-i}) + h (gamma |grad B(m)|^2 B(m) + f
///       [ - beta B(m) x Lap B(.) - S Lap B(m) ] )
/// ```
///
/// with `D = gamma + S` and the cross and stabilization terms on the right
/// when `explicit_cross`, or `D = gamma` and the cross term in the operator
/// otherwise. Subtracting the operator applied to `m~^n` gives the returned
/// right-hand side for `d`. Rounding in the fixed operator coefficients then
/// only touches the `O(dt)` increment, so it does not accumulate over steps.
pub fn assemble_rhs_spectrum(
    ws: &mut SpectralWorkspace,
    buffer: &HistoryBuffer,
    params: &StepParams,
    scheme: &BdfScheme,
    forcing: Option<&VectorField3>,
    explicit_cross: bool,
) -> Result<RhsParts> {
    let grid = *ws.grid();
    let (n, dims) = (grid.len(), grid.dims());
    if let Some(f) = forcing {
        check_same_grid(&grid, f.grid())?;
    }
    let b_proj = buffer.extrapolate(Which::Projected, scheme)?;
    let bm_spec = buffer.extrapolate_spectrum(Which::Projected, scheme)?;
    let with_cross = explicit_cross && params.beta != 0.0;
    let implicit_cross = !explicit_cross && params.beta != 0.0;
    let base = buffer
        .newest()
        .map(|l| l.m_tilde_spec.clone())
        .ok_or_else(|| Error::state("history is empty"))?;

    let mut spectra: Vec<Vec<Complex64>> = Vec::with_capacity(3 * dims + 3);
    {
        let wn = ws.wavenumbers();
        for s in &bm_spec {
            for axis in 0..dims {
                let mut d = s.coeffs().to_vec();
                differentiate_in_place(wn, &mut d, axis);
                spectra.push(d);
            }
        }
        if with_cross || implicit_cross {
            // explicit: Lap of the extrapolated field; implicit: Lap m~^n
            let bt = match (with_cross, params.cross_term.which()) {
                (false, _) => base.clone(),
                (true, Which::Projected) => bm_spec.clone(),
                (true, Which::Unprojected) => buffer.extrapolate_spectrum(Which::Unprojected, scheme)?,
            };
            for s in &bt {
                let mut d = s.coeffs().to_vec();
                laplacian_in_place(wn, &mut d);
                spectra.push(d);
            }
        }
    }
    let mut phys = vec![vec![0.0; n]; spectra.len()];
    {
        let inputs: Vec<&[Complex64]> = spectra.iter().map(Vec::as_slice).collect();
        let mut outputs: Vec<&mut [f64]> = phys.iter_mut().map(Vec::as_mut_slice).collect();
        ws.inverse_many(&inputs, &mut outputs);
    }
    let g = grad_sq_from_partials(&phys[..3 * dims], n);

    let b = b_proj.components();
    let (b0, b1, b2) = (b[0].values(), b[1].values(), b[2].values());
    let mut nl: [Vec<f64>; 3] = std::array::from_fn(|_| vec![0.0; n]);
    let gamma = params.gamma;
    for i in 0..n {
        let gi = gamma * g[i];
        nl[0][i] = gi * b0[i];
        nl[1][i] = gi * b1[i];
        nl[2][i] = gi * b2[i];
    }
    if with_cross || implicit_cross {
        let lap = &phys[3 * dims..];
        let beta = params.beta;
        for i in 0..n {
            let (l0, l1, l2) = (lap[0][i], lap[1][i], lap[2][i]);
            nl[0][i] -= beta * (b1[i] * l2 - b2[i] * l1);
            nl[1][i] -= beta * (b2[i] * l0 - b0[i] * l2);
            nl[2][i] -= beta * (b0[i] * l1 - b1[i] * l0);
        }
    }
    if let Some(f) = forcing {
        for (c, out) in nl.iter_mut().enumerate() {
            out.iter_mut()
                .zip(f.component(c).values())
                .for_each(|(o, fv)| *o += fv);
        }
    }

    let mut rhs: VectorSpectrum = std::array::from_fn(|_| Spectrum::zeros(grid));
    {
        let [r0, r1, r2] = &mut rhs;
        ws.forward_many(
            &[&nl[0], &nl[1], &nl[2]],
            &mut [r0.coeffs_mut(), r1.coeffs_mut(), r2.coeffs_mut()],
        );
    }
    if params.dealias {
        for r in &mut rhs {
            ws.dealias(r.coeffs_mut());
        }
    }
    let hist = buffer.bdf_history_increment(scheme)?;
    let h_dt = scheme.scaled_dt(params.dt);
    let s = if explicit_cross { params.s } else { 0.0 };
    let diffusion = params.gamma + s;
    let k_sq = &ws.wavenumbers().k_sq;
    for c in 0..3 {
        let (r, h, bm, m0) = (rhs[c].coeffs_mut(), hist[c].coeffs(), bm_spec[c].coeffs(), base[c].coeffs());
        for i in 0..n {
            r[i] = h_dt * (r[i] + s * k_sq[i] * bm[i] - diffusion * k_sq[i] * m0[i]) - h[i];
        }
    }
    Ok(RhsParts { rhs, b_proj, base })
}

/// The explicit-mode right-hand side for `m~^{n+1}` (not the increment) in
/// physical space, per unit time.
pub fn assemble_explicit_rhs(
    ws: &mut SpectralWorkspace,
    buffer: &HistoryBuffer,
    params: &StepParams,
    scheme: &BdfScheme,
    forcing: Option<&VectorField3>,
) -> Result<VectorField3> {
    let mut parts = assemble_rhs_spectrum(ws, buffer, params, scheme, forcing, true)?;
    let h_dt = scheme.scaled_dt(params.dt);
    let a0 = scheme.bdf_numerators()[0];
    let diffusion = params.gamma + params.s;
    let k_sq = &ws.wavenumbers().k_sq;
    // back from the increment form: add the operator applied to m~^n
    for (r, m0) in parts.rhs.iter_mut().zip(&parts.base) {
        for ((c, k2), b) in r.coeffs_mut().iter_mut().zip(k_sq).zip(m0.coeffs()) {
            *c = (*c + (a0 + h_dt * diffusion * k2) * b) / h_dt;
        }
    }
    Ok(ws.inverse_vec(&parts.rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{cross, gradient_norm_sq, laplacian, GridSpec};
    use crate::stepper::{CrossTerm, Level};

    fn params(dt: f64, beta: f64, s: f64) -> StepParams {
        StepParams {
            dt,
            gamma: 1.0,
            beta,
            s,
            k0: 1.0,
            w: 1,
            dealias: false,
            cross_term: CrossTerm::Unprojected,
        }
    }

    fn push(ws: &mut SpectralWorkspace, h: &mut HistoryBuffer, t: f64, m: VectorField3) {
        let s = ws.forward_vec(&m);
        h.push(Level::exact(t, m, s)).unwrap();
    }

    #[test]
    fn steady_state_rhs() {
        let g = GridSpec::square(8, 1.0, 0.0).unwrap();
        let mut ws = SpectralWorkspace::new(g);
        let dt = 0.01;
        let scheme = BdfScheme::new(1).unwrap();
        let mut h = HistoryBuffer::new(1, dt).unwrap();
        push(&mut ws, &mut h, 0.0, VectorField3::uniform(g, [0.0, 0.0, 1.0]));
        let rhs = assemble_explicit_rhs(&mut ws, &h, &params(dt, 0.7, 0.3), &scheme, None).unwrap();
        let want = VectorField3::uniform(g, [0.0, 0.0, 1.0 / dt]);
        assert!(rhs.sub(&want).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn forcing_only() {
        let g = GridSpec::square(8, 1.0, 0.0).unwrap();
        let mut ws = SpectralWorkspace::new(g);
        let scheme = BdfScheme::new(2).unwrap();
        let mut h = HistoryBuffer::new(2, 0.1).unwrap();
        push(&mut ws, &mut h, 0.0, VectorField3::zeros(g));
        push(&mut ws, &mut h, 0.1, VectorField3::zeros(g));
        let f = VectorField3::from_fn(g, |x, y| [x, y.sin(), (x * y).cos()]);
        let rhs = assemble_explicit_rhs(&mut ws, &h, &params(0.1, 0.5, 1.0), &scheme, Some(&f)).unwrap();
        assert!(rhs.sub(&f).unwrap().max_abs() < 1e-13);
    }

    /// Term-by-term evaluation with the public operators, BDF2 history
    /// sampled from the manufactured solution.
    #[test]
    fn matches_term_by_term_evaluation() {
        use crate::model::manufactured_solution;
        use std::f64::consts::PI;
        let g = GridSpec::square(32, 2.0 * PI, 0.0).unwrap();
        let mut ws = SpectralWorkspace::new(g);
        let (dt, t) = (1e-3, 0.1);
        let p = params(dt, 0.5, 0.25);
        let scheme = BdfScheme::new(2).unwrap();
        let mut h = HistoryBuffer::new(2, dt).unwrap();
        let sample = |tt: f64| VectorField3::from_fn(g, |x, y| manufactured_solution(x, y, tt));
        let (m_old, m_new) = (sample(t - dt), sample(t));
        // distinct provisional fields exercise the unprojected extrapolation
        let mt_old = m_old.scaled(1.01);
        let mt_new = m_new.scaled(0.99);
        for (tt, m, mt) in [(t - dt, &m_old, &mt_old), (t, &m_new, &mt_new)] {
            let (ms, mts) = (ws.forward_vec(m), ws.forward_vec(mt));
            h.push(Level {
                time: tt,
                m: m.clone(),
                m_spec: ms,
                m_tilde: mt.clone(),
                m_tilde_spec: mts,
                eta: 1.0,
                shift: 0.0,
            })
            .unwrap();
        }
        let f = VectorField3::from_fn(g, |x, y| [x.cos(), y.sin(), 0.5]);
        let rhs = assemble_explicit_rhs(&mut ws, &h, &p, &scheme, Some(&f)).unwrap();

        let mut bm = m_new.scaled(2.0);
        bm.axpy(-1.0, &m_old).unwrap();
        let mut bt = mt_new.scaled(2.0);
        bt.axpy(-1.0, &mt_old).unwrap();
        let g2 = gradient_norm_sq(&mut ws, &bm);
        let mut want = VectorField3::zeros(g);
        // -(a1 m~^n + a2 m~^{n-1}) / dt with a1 = -2, a2 = 1/2
        want.axpy(2.0 / dt, &mt_new).unwrap();
        want.axpy(-0.5 / dt, &mt_old).unwrap();
        let mut nl = bm.clone();
        for c in 0..3 {
            nl.component_mut(c)
                .values_mut()
                .iter_mut()
                .zip(g2.values())
                .for_each(|(v, gg)| *v *= gg);
        }
        want.axpy(p.gamma, &nl).unwrap();
        let cr = cross(&bm, &laplacian(&mut ws, &bt)).unwrap();
        want.axpy(-p.beta, &cr).unwrap();
        want.axpy(-p.s, &laplacian(&mut ws, &bm)).unwrap();
        want.axpy(1.0, &f).unwrap();
        let scale = want.max_abs();
        assert!(rhs.sub(&want).unwrap().max_abs() <= 1e-12 * scale, "{}", rhs.sub(&want).unwrap().max_abs());
    }
}
