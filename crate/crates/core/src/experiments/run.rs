use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use crate::error::{Error, Result};
use crate::model::problem_registry;
use crate::sav::energy_from_spectra;
use crate::spectral::VectorField3;
use crate::stepper::{bootstrap_history, solver_registry, StepReport, Stepper};

/// Largest accepted `max | |m| - 1 |` of any emitted level.
pub const LENGTH_TOLERANCE: f64 = 1e-12;

/// One row of the time-series output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeSeriesRow {
    pub n: usize,
    pub t: f64,
    /// `E(m^n)`.
    pub energy: f64,
    pub r: f64,
    pub xi: f64,
    pub eta: f64,
    /// `||B x Lap m~||^2`.
    pub cross: f64,
    pub min_hat: f64,
    pub max_len_defect: f64,
    pub sup_grad_norm: f64,
    pub solver_iters: usize,
}

/// Projected field at a stored time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub time: f64,
    pub m: VectorField3,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub final_m: VectorField3,
    pub final_time: f64,
    pub series: Vec<TimeSeriesRow>,
    /// Reports of all computed steps.
    pub reports: Vec<StepReport>,
    pub snapshots: Vec<Snapshot>,
    /// `R` at the newest startup level.
    pub r0: f64,
    pub max_length_defect: f64,
}

/// Hooks called by [`run_simulation_with`].
pub trait Observer {
    /// After the startup levels are in place.
    fn on_start(&mut self, _stepper: &mut Stepper) -> Result<()> {
        Ok(())
    }

    /// After each computed step has passed the invariant checks.
    fn on_step(&mut self, stepper: &mut Stepper, report: &StepReport) -> Result<()>;
}

impl Observer for () {
    fn on_step(&mut self, _: &mut Stepper, _: &StepReport) -> Result<()> {
        Ok(())
    }
}

impl<F: FnMut(&mut Stepper, &StepReport) -> Result<()>> Observer for F {
    fn on_step(&mut self, stepper: &mut Stepper, report: &StepReport) -> Result<()> {
        self(stepper, report)
    }
}

pub fn run_simulation(config: &RunConfig) -> Result<RunOutput> {
    run_simulation_with(config, &mut ())
}

fn row(stepper: &mut Stepper, rep: &StepReport) -> TimeSeriesRow {
    let energy = energy_from_spectra(stepper.wavenumbers(), &stepper.newest().m_spec);
    TimeSeriesRow {
        n: rep.step,
        t: rep.time,
        energy,
        r: rep.sav.r,
        xi: rep.sav.xi,
        eta: rep.sav.eta,
        cross: rep.sav.cross_norm_sq,
        min_hat: rep.min_hat_norm,
        max_len_defect: rep.max_length_defect,
        sup_grad_norm: stepper.sup_grad_norm(),
        solver_iters: rep.solver_iterations,
    }
}

/// Runs `config` from `t = 0` to `T`, checking unit length at every level
/// and, without forcing in explicit mode, that `R` never increases.
pub fn run_simulation_with(config: &RunConfig, observer: &mut dyn Observer) -> Result<RunOutput> {
    config.validate()?;
    let problem = problem_registry().create(&config.problem, &config.problem_options)?;
    problem.check_grid(&config.grid)?;
    let solver = solver_registry().create(&config.mode, &config.solver)?;
    let implicit_cross = solver.implicit_cross();
    for a in config.params.advisories(implicit_cross) {
        log::warn!("{a}");
    }
    let n_steps = config.num_steps();
    let p = config.params;
    let grid = config.grid;
    let mut stepper = bootstrap_history(&*problem, grid, p.order, n_steps + 1, config.step_params(), solver)?;
    let forced = problem.has_forcing();

    let snap_steps = config.snapshot_steps();
    let mut snapshots = Vec::with_capacity(snap_steps.len());
    let startup: Vec<_> = stepper.history().levels().collect();
    for level in startup.into_iter().rev() {
        let k = (level.time / p.dt).round() as usize;
        if snap_steps.binary_search(&k).is_ok() {
            snapshots.push(Snapshot { step: k, time: level.time, m: level.m.clone() });
        }
    }

    let start = stepper.current_report();
    let mut max_defect = start.max_length_defect;
    if max_defect > LENGTH_TOLERANCE {
        return Err(Error::Invariant {
            step: start.step,
            what: format!("initial data has max | |m| - 1 | = {max_defect:e}"),
        });
    }
    let mut series = vec![row(&mut stepper, &start)];
    let r0 = stepper.sav().r;
    observer.on_start(&mut stepper)?;

    let mut reports = Vec::with_capacity(n_steps.saturating_sub(stepper.step_index()));
    let mut r_prev = r0;
    while stepper.step_index() < n_steps {
        let f = if forced {
            problem.sample_forcing(&grid, stepper.next_time(), p.gamma, p.beta)
        } else {
            None
        };
        let rep = stepper.step(f.as_ref())?;
        if !(rep.max_length_defect <= LENGTH_TOLERANCE) {
            return Err(Error::Invariant {
                step: rep.step,
                what: format!("max | |m| - 1 | = {:e} exceeds {LENGTH_TOLERANCE:e}", rep.max_length_defect),
            });
        }
        if !forced && !(rep.sav.r > 0.0 && rep.sav.r <= r_prev) {
            let what = format!("R increased or lost positivity: {r_prev:e} -> {:e}", rep.sav.r);
            // the monotonicity proof covers the explicit cross term only
            if implicit_cross {
                log::warn!("step {}: {what}", rep.step);
            } else {
                return Err(Error::Invariant { step: rep.step, what });
            }
        }
        r_prev = rep.sav.r;
        max_defect = max_defect.max(rep.max_length_defect);
        if rep.step % config.cadence == 0 || rep.step == n_steps {
            let r = row(&mut stepper, &rep);
            series.push(r);
        }
        if snap_steps.binary_search(&rep.step).is_ok() {
            snapshots.push(Snapshot { step: rep.step, time: rep.time, m: stepper.newest().m.clone() });
        }
        observer.on_step(&mut stepper, &rep)?;
        reports.push(rep);
    }

    Ok(RunOutput {
        final_m: stepper.newest().m.clone(),
        final_time: stepper.time(),
        series,
        reports,
        snapshots,
        r0,
        max_length_defect: max_defect,
    })
}
