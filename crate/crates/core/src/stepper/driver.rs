use rustfft::num_complex::Complex64;

use super::bdf::BdfScheme;
use super::history::{HistoryBuffer, Level};
use super::rhs::assemble_rhs_spectrum;
use super::strategy::{SolveInput, StepSolver};
use super::StepParams;
use crate::error::{Error, Result};
use crate::model::Problem;
use crate::sav::{correct_and_project, energy_from_spectra, sav_closed_form, SavState};
use crate::spectral::ops::{gradient_from_spectra, grad_sq_from_partials, laplacian_in_place};
use crate::spectral::{check_same_grid, GridSpec, SpectralWorkspace, VectorField3, Wavenumbers};

/// Diagnostics of one completed step (or of the initial level, `step = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub step: usize,
    pub time: f64,
    /// Order of the formula used for this step (lower while warming up).
    pub order: usize,
    pub sav: SavState,
    pub min_hat_norm: f64,
    /// `max | |m| - 1 |`.
    pub max_length_defect: f64,
    /// `||grad m^|| = |eta| ||grad m~||`.
    pub grad_hat_norm: f64,
    pub solver_iterations: usize,
    pub solver_residual: f64,
}

/// Owns the history, workspace and solver of one simulation and advances it
/// one step at a time. While fewer than `order` levels are stored, the step
/// uses the order equal to the number of stored levels.
#[derive(Debug)]
pub struct Stepper {
    ws: SpectralWorkspace,
    schemes: Vec<BdfScheme>,
    params: StepParams,
    solver: Box<dyn StepSolver>,
    history: HistoryBuffer,
    sav: SavState,
    t0: f64,
    step: usize,
}

fn length_defect(m: &VectorField3) -> f64 {
    m.unit_length_defect()
}

impl Stepper {
    /// Starts from the single level `m0` at time `t0`.
    pub fn new(
        m0: VectorField3,
        t0: f64,
        order: usize,
        params: StepParams,
        solver: Box<dyn StepSolver>,
    ) -> Result<Self> {
        Self::with_startup(vec![m0], t0, order, params, solver)
    }

    /// Starts from given levels (oldest first, spaced by `dt`), used for
    /// exact startup values. `R` starts at `E + K0` of the newest level.
    pub fn with_startup(
        levels: Vec<VectorField3>,
        t0: f64,
        order: usize,
        params: StepParams,
        solver: Box<dyn StepSolver>,
    ) -> Result<Self> {
        params.validate()?;
        let schemes = (1..=order).map(BdfScheme::new).collect::<Result<Vec<_>>>()?;
        if order == 0 {
            return Err(Error::usage("scheme order must be in 1..=5, got 0"));
        }
        if levels.is_empty() || levels.len() > order {
            return Err(Error::usage(format!(
                "startup needs 1..={order} levels, got {}",
                levels.len()
            )));
        }
        let grid = *levels[0].grid();
        let mut ws = SpectralWorkspace::new(grid);
        let mut history = HistoryBuffer::new(order, params.dt)?;
        for (k, m) in levels.into_iter().enumerate() {
            check_same_grid(&grid, m.grid())?;
            if !m.is_finite() {
                return Err(Error::NonFinite { step: k });
            }
            let spec = ws.forward_vec(&m);
            history.push(Level::exact(t0 + k as f64 * params.dt, m, spec))?;
        }
        if solver.implicit_cross() && params.s > 0.0 {
            log::warn!(
                "{} mode treats the cross term implicitly and ignores S = {}",
                solver.name(),
                params.s
            );
        }
        let newest = history.newest().expect("non-empty");
        let e = energy_from_spectra(ws.wavenumbers(), &newest.m_spec);
        let step = history.len() - 1;
        Ok(Stepper {
            ws,
            schemes,
            params,
            solver,
            history,
            sav: SavState::initial(e, params.k0),
            t0,
            step,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        self.ws.grid()
    }

    pub fn params(&self) -> &StepParams {
        &self.params
    }

    pub fn order(&self) -> usize {
        self.schemes.len()
    }

    /// Order the next step will use.
    pub fn current_order(&self) -> usize {
        self.history.len().min(self.order())
    }

    pub fn solver_name(&self) -> &'static str {
        self.solver.name()
    }

    pub fn history(&self) -> &HistoryBuffer {
        &self.history
    }

    pub fn newest(&self) -> &Level {
        self.history.newest().expect("history is never empty")
    }

    pub fn sav(&self) -> &SavState {
        &self.sav
    }

    /// Index of the newest level.
    pub fn step_index(&self) -> usize {
        self.step
    }

    pub fn time(&self) -> f64 {
        self.time_of(self.step)
    }

    pub fn time_of(&self, step: usize) -> f64 {
        self.t0 + step as f64 * self.params.dt
    }

    pub fn next_time(&self) -> f64 {
        self.time_of(self.step + 1)
    }

    pub fn workspace(&mut self) -> &mut SpectralWorkspace {
        &mut self.ws
    }

    pub fn wavenumbers(&self) -> &Wavenumbers {
        self.ws.wavenumbers()
    }

    /// Report describing the newest level as it stands (used for startup levels).
    pub fn current_report(&self) -> StepReport {
        let level = self.newest();
        StepReport {
            step: self.step,
            time: level.time,
            order: self.current_order(),
            sav: self.sav,
            min_hat_norm: level.m.magnitude().values().iter().copied().fold(f64::INFINITY, f64::min),
            max_length_defect: length_defect(&level.m),
            grad_hat_norm: (2.0 * self.sav.energy).sqrt() * self.sav.eta.abs(),
            solver_iterations: 0,
            solver_residual: 0.0,
        }
    }

    /// `max_x |grad m|` of the newest projected field.
    pub fn sup_grad_norm(&mut self) -> f64 {
        let spec = self.history.newest().expect("non-empty").m_spec.clone();
        let partials = gradient_from_spectra(&mut self.ws, &spec);
        grad_sq_from_partials(&partials, self.ws.grid().len())
            .into_iter()
            .fold(0.0, f64::max)
            .sqrt()
    }

    /// Advances one step. `forcing` is `f(t^{n+1})` when the problem is forced.
    pub fn step(&mut self, forcing: Option<&VectorField3>) -> Result<StepReport> {
        let order = self.current_order();
        let scheme = &self.schemes[order - 1];
        let next = self.step + 1;
        let p = self.params;
        let n = self.ws.grid().len();

        let parts = assemble_rhs_spectrum(
            &mut self.ws,
            &self.history,
            &p,
            scheme,
            forcing,
            !self.solver.implicit_cross(),
        )?;
        let (mut mt_spec, stats) = self
            .solver
            .solve(
                &mut self.ws,
                SolveInput {
                    rhs: &parts.rhs,
                    b_proj: &parts.b_proj,
                    params: &p,
                    scheme,
                },
            )
            .map_err(|e| with_step(e, next))?;
        for (d, b) in mt_spec.iter_mut().zip(&parts.base) {
            d.coeffs_mut().iter_mut().zip(b.coeffs()).for_each(|(x, y)| *x += y);
        }

        // m~ and Lap m~ in physical space
        let mut lap_spec: Vec<Vec<Complex64>> = mt_spec.iter().map(|s| s.coeffs().to_vec()).collect();
        for s in &mut lap_spec {
            laplacian_in_place(self.ws.wavenumbers(), s);
        }
        let mut phys: [Vec<f64>; 6] = std::array::from_fn(|_| vec![0.0; n]);
        {
            let [t0, t1, t2, l0, l1, l2] = &mut phys;
            self.ws.inverse_many(
                &[
                    mt_spec[0].coeffs(),
                    mt_spec[1].coeffs(),
                    mt_spec[2].coeffs(),
                    &lap_spec[0],
                    &lap_spec[1],
                    &lap_spec[2],
                ],
                &mut [t0, t1, t2, l0, l1, l2],
            );
        }
        let [t0, t1, t2, l0, l1, l2] = phys;
        let lap = [l0, l1, l2];
        let m_tilde = VectorField3::from_raw(*self.ws.grid(), [t0, t1, t2]);
        if !m_tilde.is_finite() {
            return Err(Error::NonFinite { step: next });
        }

        let cell = self.ws.grid().cell_area();
        let b = parts.b_proj.components();
        let (b0, b1, b2) = (b[0].values(), b[1].values(), b[2].values());
        let mut cross_sq = 0.0;
        for i in 0..n {
            let c0 = b1[i] * lap[2][i] - b2[i] * lap[1][i];
            let c1 = b2[i] * lap[0][i] - b0[i] * lap[2][i];
            let c2 = b0[i] * lap[1][i] - b1[i] * lap[0][i];
            cross_sq += c0 * c0 + c1 * c1 + c2 * c2;
        }
        cross_sq *= cell;
        let power = match forcing {
            Some(f) => {
                let mut acc = 0.0;
                for (c, l) in lap.iter().enumerate() {
                    acc += l.iter().zip(f.component(c).values()).map(|(a, b)| a * b).sum::<f64>();
                }
                acc * cell
            }
            None => 0.0,
        };
        let energy = energy_from_spectra(self.ws.wavenumbers(), &mt_spec);
        let sav = sav_closed_form(self.sav.r, energy, cross_sq, power, p.dt, p.gamma, p.k0, order)
            .map_err(|e| with_step(e, next))?;
        let proj = correct_and_project(&m_tilde, sav.eta, p.w).map_err(|e| with_step(e, next))?;
        if !proj.m.is_finite() {
            return Err(Error::NonFinite { step: next });
        }
        let m_spec = self.ws.forward_vec(&proj.m);
        let defect = length_defect(&proj.m);
        let level = Level {
            time: self.time_of(next),
            m: proj.m,
            m_spec,
            m_tilde,
            m_tilde_spec: mt_spec,
            eta: sav.eta,
            shift: proj.shift,
        };
        self.history.push(level)?;
        self.sav = sav;
        self.step = next;
        Ok(StepReport {
            step: next,
            time: self.time_of(next),
            order,
            sav,
            min_hat_norm: proj.min_hat_norm,
            max_length_defect: defect,
            grad_hat_norm: sav.eta.abs() * (2.0 * energy).sqrt(),
            solver_iterations: stats.iterations,
            solver_residual: stats.residual,
        })
    }
}

fn with_step(e: Error, step: usize) -> Error {
    match e {
        Error::ProjectionDegenerate { index, x, y, magnitude, .. } => Error::ProjectionDegenerate {
            step,
            index,
            x,
            y,
            magnitude,
        },
        other => Error::AtStep {
            step,
            source: Box::new(other),
        },
    }
}

/// Builds a stepper with warm history for `problem`: exact values at
/// `t0 .. t0 + (l-1) dt` when the problem has an exact solution, otherwise
/// the single initial level (the first `l - 1` steps then ramp the order up).
/// At most `max_levels` exact levels are used.
pub fn bootstrap_history(
    problem: &dyn Problem,
    grid: GridSpec,
    order: usize,
    max_levels: usize,
    params: StepParams,
    solver: Box<dyn StepSolver>,
) -> Result<Stepper> {
    let t0 = 0.0;
    let levels = if problem.has_exact() {
        (0..order.min(max_levels).max(1))
            .map(|k| {
                problem
                    .sample_exact(&grid, t0 + k as f64 * params.dt)
                    .expect("problem reports an exact solution")
            })
            .collect()
    } else {
        vec![problem.sample_initial(&grid)]
    };
    Stepper::with_startup(levels, t0, order, params, solver)
}
