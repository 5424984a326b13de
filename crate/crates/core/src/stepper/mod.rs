//! IMEX BDF-`l` time stepping: coefficient tables, history, right-hand side
//! assembly, the linear solve strategies and the step driver.

mod bdf;
mod driver;
mod gmres;
mod history;
mod rhs;
mod solve;
mod strategy;

use serde::{Deserialize, Serialize};

pub use bdf::{bdf_coefficients, BdfScheme, MAX_ORDER};
pub use driver::{bootstrap_history, StepReport, Stepper};
pub use gmres::{gmres, GmresOutcome};
pub use history::{extrapolate, HistoryBuffer, Level, Which};
pub use rhs::{assemble_explicit_rhs, assemble_rhs_spectrum, RhsParts};
pub use solve::{helmholtz_apply, solve_explicit, solve_semi_implicit, SolveStats};
pub use strategy::{
    solver_registry, ExplicitSolver, SemiImplicitSolver, SolveInput, SolverOptions, StepSolver,
};

/// Which extrapolated field enters `B_l(.) x Lap B_l(.)` in the explicit cross term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CrossTerm {
    /// `Lap B_l(m~^n)`, the provisional history.
    #[default]
    Unprojected,
    /// `Lap B_l(m^n)`, the projected history.
    Projected,
}

impl CrossTerm {
    pub fn which(self) -> Which {
        match self {
            CrossTerm::Unprojected => Which::Unprojected,
            CrossTerm::Projected => Which::Projected,
        }
    }
}

/// Per-step numerical parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepParams {
    pub dt: f64,
    pub gamma: f64,
    pub beta: f64,
    /// Stabilization; ignored by strategies that treat the cross term implicitly.
    pub s: f64,
    pub k0: f64,
    pub w: u32,
    pub dealias: bool,
    pub cross_term: CrossTerm,
}

impl StepParams {
    pub fn validate(&self) -> crate::Result<()> {
        if !(self.dt > 0.0) || !(self.gamma > 0.0) || !(self.s >= 0.0) || !(self.k0 > 0.0) {
            return Err(crate::Error::usage(format!(
                "invalid step parameters: dt = {}, gamma = {}, S = {}, K0 = {}",
                self.dt, self.gamma, self.s, self.k0
            )));
        }
        if self.w == 0 {
            return Err(crate::Error::usage("w must be >= 1"));
        }
        Ok(())
    }
}

impl From<&crate::model::ProblemParams> for StepParams {
    fn from(p: &crate::model::ProblemParams) -> Self {
        StepParams {
            dt: p.dt,
            gamma: p.gamma,
            beta: p.beta,
            s: p.s,
            k0: p.k0,
            w: p.w,
            dealias: false,
            cross_term: CrossTerm::default(),
        }
    }
}
