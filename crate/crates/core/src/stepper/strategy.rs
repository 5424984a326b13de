use serde::{Deserialize, Serialize};

use super::bdf::BdfScheme;
use super::solve::{helmholtz_inverse_in_place, semi_implicit_spectrum, SolveStats};
use super::StepParams;
use crate::error::{Error, Result};
use crate::registry::Registry;
use crate::spectral::{SpectralWorkspace, VectorField3, VectorSpectrum};

/// Tolerances of the iterative solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverOptions {
    /// Relative residual target.
    pub tol: f64,
    pub max_iter: usize,
    pub restart: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-10,
            max_iter: 200,
            restart: 30,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::Config(format!("solver tol must be in (0, 1), got {}", self.tol)));
        }
        if self.max_iter == 0 || self.restart == 0 {
            return Err(Error::Config("solver max_iter and restart must be positive".into()));
        }
        Ok(())
    }
}

/// Inputs of one linear solve for `m~^{n+1}`.
#[derive(Debug, Clone, Copy)]
pub struct SolveInput<'a> {
    /// Right-hand side for the increment `m~^{n+1} - m~^n`, assembled by
    /// [`assemble_rhs_spectrum`](super::assemble_rhs_spectrum) according to
    /// [`StepSolver::implicit_cross`].
    pub rhs: &'a VectorSpectrum,
    /// `B_l(m^n)`.
    pub b_proj: &'a VectorField3,
    pub params: &'a StepParams,
    pub scheme: &'a BdfScheme,
}

/// A linear-solve strategy for the provisional field.
pub trait StepSolver: Send + std::fmt::Debug {
    fn name(&self) -> &'static str;

    /// True if the cross term `beta B x Lap m~^{n+1}` is part of the operator
    /// (it is then left out of the right-hand side, together with `S`).
    fn implicit_cross(&self) -> bool;

    /// Returns the spectrum of the increment `m~^{n+1} - m~^n`.
    fn solve(
        &mut self,
        ws: &mut SpectralWorkspace,
        input: SolveInput<'_>,
    ) -> Result<(VectorSpectrum, SolveStats)>;
}

/// Cross term explicit: a decoupled, constant-coefficient solve per mode.
#[derive(Debug, Clone, Default)]
pub struct ExplicitSolver;

impl StepSolver for ExplicitSolver {
    fn name(&self) -> &'static str {
        "explicit"
    }

    fn implicit_cross(&self) -> bool {
        false
    }

    fn solve(
        &mut self,
        ws: &mut SpectralWorkspace,
        input: SolveInput<'_>,
    ) -> Result<(VectorSpectrum, SolveStats)> {
        let mut s = input.rhs.clone();
        let p = input.params;
        let h = input.scheme.scaled_dt(p.dt);
        helmholtz_inverse_in_place(ws, &mut s, input.scheme.bdf_numerators()[0], h * (p.gamma + p.s));
        Ok((s, SolveStats::default()))
    }
}

/// Cross term implicit in `m~^{n+1}`, solved with preconditioned GMRES.
#[derive(Debug, Clone, Default)]
pub struct SemiImplicitSolver {
    pub options: SolverOptions,
}

impl StepSolver for SemiImplicitSolver {
    fn name(&self) -> &'static str {
        "semi_implicit"
    }

    fn implicit_cross(&self) -> bool {
        true
    }

    fn solve(
        &mut self,
        ws: &mut SpectralWorkspace,
        input: SolveInput<'_>,
    ) -> Result<(VectorSpectrum, SolveStats)> {
        let n = ws.grid().len();
        let mut rhs: [Vec<f64>; 3] = std::array::from_fn(|_| vec![0.0; n]);
        {
            let [r0, r1, r2] = &mut rhs;
            let s = input.rhs;
            ws.inverse_many(&[s[0].coeffs(), s[1].coeffs(), s[2].coeffs()], &mut [r0, r1, r2]);
        }
        semi_implicit_spectrum(ws, input.b_proj, &rhs, input.params, input.scheme, &self.options)
    }
}

/// The built-in strategies: `explicit` and `semi_implicit`.
pub fn solver_registry() -> Registry<dyn StepSolver, SolverOptions> {
    let mut r: Registry<dyn StepSolver, SolverOptions> = Registry::new("solver mode");
    r.register("explicit", |_| Ok(Box::new(ExplicitSolver) as Box<dyn StepSolver>));
    r.register("semi_implicit", |o: &SolverOptions| {
        o.validate()?;
        Ok(Box::new(SemiImplicitSolver { options: *o }) as Box<dyn StepSolver>)
    });
    r
}
