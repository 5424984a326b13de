use rustfft::num_complex::Complex64;

use super::bdf::BdfScheme;
use super::gmres::gmres;
use super::strategy::SolverOptions;
use super::StepParams;
use crate::error::{Error, Result};
use crate::spectral::{check_same_grid, SpectralWorkspace, Spectrum, VectorField3, VectorSpectrum};

/// Iteration count and final relative residual of a linear solve.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolveStats {
    pub iterations: usize,
    pub residual: f64,
}

/// Divides each mode by `A_0 + h diffusion |k|^2` (integer-weight form,
/// `h = d dt`).
pub(crate) fn helmholtz_inverse_in_place(
    ws: &SpectralWorkspace,
    spec: &mut VectorSpectrum,
    a0: f64,
    dt_diffusion: f64,
) {
    let k_sq = &ws.wavenumbers().k_sq;
    for s in spec.iter_mut() {
        for (c, k2) in s.coeffs_mut().iter_mut().zip(k_sq) {
            *c /= a0 + dt_diffusion * k2;
        }
    }
}

/// `m~ = (a0/dt - (gamma + S) Lap)^{-1} rhs`, mode by mode.
pub fn solve_explicit(
    ws: &mut SpectralWorkspace,
    rhs: &VectorField3,
    params: &StepParams,
    scheme: &BdfScheme,
) -> VectorField3 {
    let h = scheme.scaled_dt(params.dt);
    let mut s = ws.forward_vec(rhs);
    for c in &mut s {
        c.coeffs_mut().iter_mut().for_each(|v| *v *= h);
    }
    helmholtz_inverse_in_place(ws, &mut s, scheme.bdf_numerators()[0], h * (params.gamma + params.s));
    ws.inverse_vec(&s)
}

/// `(a0/dt - (gamma + S) Lap) u`.
pub fn helmholtz_apply(
    ws: &mut SpectralWorkspace,
    u: &VectorField3,
    params: &StepParams,
    scheme: &BdfScheme,
) -> VectorField3 {
    let mut s = ws.forward_vec(u);
    let a0_dt = scheme.a0() / params.dt;
    let d = params.gamma + params.s;
    let k_sq = ws.wavenumbers().k_sq.clone();
    for sp in &mut s {
        for (c, k2) in sp.coeffs_mut().iter_mut().zip(&k_sq) {
            *c *= a0_dt + d * k2;
        }
    }
    ws.inverse_vec(&s)
}

/// Solves `A_0 u - h gamma Lap u + h beta B x Lap u = rhs` by GMRES, in the
/// integer-weight form (`h = d dt`), right-preconditioned with
/// `P = A_0 - h gamma Lap`. Returns the spectrum of `u`.
///
/// The Krylov unknown is `y = P u`; the preconditioned operator is
/// `y + h beta B x Lap P^{-1} y`, and its residual equals the residual of the
/// original system.
pub(crate) fn semi_implicit_spectrum(
    ws: &mut SpectralWorkspace,
    b_proj: &VectorField3,
    rhs: &[Vec<f64>; 3],
    params: &StepParams,
    scheme: &BdfScheme,
    opts: &SolverOptions,
) -> Result<(VectorSpectrum, SolveStats)> {
    let grid = *ws.grid();
    let n = grid.len();
    let a0 = scheme.bdf_numerators()[0];
    let h = scheme.scaled_dt(params.dt);
    let dt_gamma = h * params.gamma;
    let beta = h * params.beta;
    let precond: Vec<f64> = ws.wavenumbers().k_sq.iter().map(|k2| 1.0 / (a0 + dt_gamma * k2)).collect();
    let lap_precond: Vec<f64> = ws
        .wavenumbers()
        .k_sq
        .iter()
        .zip(&precond)
        .map(|(k2, p)| -k2 * p)
        .collect();

    let b = b_proj.components();
    let (b0, b1, b2) = (b[0].values(), b[1].values(), b[2].values());
    let mut spec: [Vec<Complex64>; 3] = std::array::from_fn(|_| vec![Complex64::new(0.0, 0.0); n]);
    let mut lap: [Vec<f64>; 3] = std::array::from_fn(|_| vec![0.0; n]);

    let rhs_flat: Vec<f64> = rhs.iter().flat_map(|c| c.iter().copied()).collect();
    let mut y = rhs_flat.clone();
    let outcome = {
        let ws = &mut *ws;
        let spec = &mut spec;
        let lap = &mut lap;
        let apply = |v: &[f64], out: &mut [f64]| {
            let (v0, rest) = v.split_at(n);
            let (v1, v2) = rest.split_at(n);
            {
                let [s0, s1, s2] = spec;
                ws.forward_many(&[v0, v1, v2], &mut [s0, s1, s2]);
            }
            for s in spec.iter_mut() {
                s.iter_mut().zip(&lap_precond).for_each(|(c, p)| *c *= p);
            }
            {
                let [l0, l1, l2] = lap;
                ws.inverse_many(&[&spec[0], &spec[1], &spec[2]], &mut [l0, l1, l2]);
            }
            let (o0, rest) = out.split_at_mut(n);
            let (o1, o2) = rest.split_at_mut(n);
            for i in 0..n {
                let (l0, l1, l2) = (lap[0][i], lap[1][i], lap[2][i]);
                o0[i] = v0[i] + beta * (b1[i] * l2 - b2[i] * l1);
                o1[i] = v1[i] + beta * (b2[i] * l0 - b0[i] * l2);
                o2[i] = v2[i] + beta * (b0[i] * l1 - b1[i] * l0);
            }
        };
        gmres(apply, &rhs_flat, &mut y, opts.restart, opts.tol, opts.max_iter)
    };
    if !outcome.converged {
        return Err(Error::SolverDiverged {
            iterations: outcome.iterations,
            residual: outcome.residual,
        });
    }
    let mut out: VectorSpectrum = std::array::from_fn(|_| Spectrum::zeros(grid));
    {
        let [s0, s1, s2] = &mut out;
        ws.forward_many(
            &[&y[..n], &y[n..2 * n], &y[2 * n..]],
            &mut [s0.coeffs_mut(), s1.coeffs_mut(), s2.coeffs_mut()],
        );
    }
    for s in &mut out {
        s.coeffs_mut().iter_mut().zip(&precond).for_each(|(c, p)| *c *= p);
    }
    Ok((
        out,
        SolveStats {
            iterations: outcome.iterations,
            residual: outcome.residual,
        },
    ))
}

/// Physical-space form of the semi-implicit solve (stabilization is not used).
pub fn solve_semi_implicit(
    ws: &mut SpectralWorkspace,
    b_proj: &VectorField3,
    rhs_base: &VectorField3,
    params: &StepParams,
    scheme: &BdfScheme,
    opts: &SolverOptions,
) -> Result<(VectorField3, SolveStats)> {
    check_same_grid(ws.grid(), b_proj.grid())?;
    check_same_grid(ws.grid(), rhs_base.grid())?;
    let h = scheme.scaled_dt(params.dt);
    let rhs: [Vec<f64>; 3] = std::array::from_fn(|c| rhs_base.component(c).values().iter().map(|v| v * h).collect());
    let (spec, stats) = semi_implicit_spectrum(ws, b_proj, &rhs, params, scheme, opts)?;
    Ok((ws.inverse_vec(&spec), stats))
}
