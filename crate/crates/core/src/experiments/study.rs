use rayon::prelude::*;

use super::config::RunConfig;
use super::errors::{ErrorRecord, ExactErrors, ReferenceErrors, Variant};
use super::fit::{check_geometric, slope_fit, slope_fit_above, FloorFit};
use super::run::{run_simulation_with, Observer, RunOutput, Snapshot};
use crate::error::{Error, Result};
use crate::model::problem_registry;
use crate::stepper::{StepReport, Stepper};

/// Errors below this value are dominated by roundoff and left out of slope fits.
pub const ERROR_FLOOR: f64 = 1e-11;

/// What a convergence study compares against.
#[derive(Debug, Clone, Copy)]
pub enum Reference<'a> {
    /// The problem's exact solution at every step.
    Exact,
    /// Snapshots of a finer run, compared at their times.
    FineRun(&'a [Snapshot]),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    LinfH1,
    L2H2,
}

impl Norm {
    pub const ALL: [Norm; 2] = [Norm::LinfH1, Norm::L2H2];

    pub fn label(self) -> &'static str {
        match self {
            Norm::LinfH1 => "linf_h1",
            Norm::L2H2 => "l2_h2",
        }
    }
}

/// Error records of a study, ordered like the input time steps.
#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    pub records: Vec<ErrorRecord>,
}

impl ConvergenceTable {
    pub fn dts(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.dt).collect()
    }

    pub fn errors(&self, v: Variant, n: Norm) -> Vec<f64> {
        self.records
            .iter()
            .map(|r| {
                let p = r.variant(v);
                match n {
                    Norm::LinfH1 => p.linf_h1,
                    Norm::L2H2 => p.l2_h2,
                }
            })
            .collect()
    }

    pub fn xi_defects(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.xi_defect).collect()
    }

    /// Slope over all points.
    pub fn slope(&self, v: Variant, n: Norm) -> Result<f64> {
        slope_fit(&self.dts(), &self.errors(v, n))
    }

    /// Slope over the runs whose `err_linf_h1` of `m` is at least `floor`.
    pub fn slope_above(&self, v: Variant, n: Norm, floor: f64) -> Result<FloorFit> {
        slope_fit_above(&self.dts(), &self.errors(v, n), &self.errors(Variant::M, Norm::LinfH1), floor)
    }

    /// Slope of `max |1 - xi|` over the same runs as [`Self::slope_above`].
    pub fn xi_slope_above(&self, floor: f64) -> Result<FloorFit> {
        slope_fit_above(&self.dts(), &self.xi_defects(), &self.errors(Variant::M, Norm::LinfH1), floor)
    }
}

/// Runs `base` once and returns its error record against `reference`.
pub fn error_run(base: &RunConfig, reference: Reference<'_>) -> Result<(ErrorRecord, RunOutput)> {
    let dt = base.params.dt;
    let (record, out) = match reference {
        Reference::Exact => {
            let problem = problem_registry().create(&base.problem, &base.problem_options)?;
            if !problem.has_exact() {
                return Err(Error::Config(format!(
                    "problem '{}' has no exact solution; use a fine-run reference",
                    base.problem
                )));
            }
            let mut obs = ExactErrors::new(&*problem, dt);
            let out = run_simulation_with(base, &mut obs)?;
            (obs.acc.finish(), out)
        }
        Reference::FineRun(snaps) => {
            let mut obs = ReferenceErrors::new(snaps, dt)?;
            let out = run_simulation_with(base, &mut obs)?;
            (obs.acc.finish(), out)
        }
    };
    record.validate()?;
    Ok((record, out))
}

/// Runs `base` for each time step and records the errors. Failures carry the
/// offending `dt`. With `parallel`, runs execute concurrently; results keep
/// the input order.
pub fn convergence_study(
    base: &RunConfig,
    dts: &[f64],
    reference: Reference<'_>,
    parallel: bool,
) -> Result<ConvergenceTable> {
    check_geometric(dts)?;
    if let Reference::FineRun(snaps) = reference {
        if snaps.is_empty() {
            return Err(Error::usage("fine-run reference has no snapshots"));
        }
    }
    let one = |&dt: &f64| -> Result<ErrorRecord> {
        let mut c = base.clone();
        c.params.dt = dt;
        c.snapshot_times.clear();
        c.cadence = c.num_steps().max(1);
        error_run(&c, reference)
            .map(|(r, _)| r)
            .map_err(|e| Error::Study { dt, source: Box::new(e) })
    };
    let records = if parallel {
        dts.par_iter().map(one).collect::<Result<Vec<_>>>()?
    } else {
        dts.iter().map(one).collect::<Result<Vec<_>>>()?
    };
    Ok(ConvergenceTable { records })
}

/// Fine run whose snapshots serve as a reference at `times`.
pub fn reference_run(config: &RunConfig, times: &[f64]) -> Result<Vec<Snapshot>> {
    let mut c = config.clone();
    c.snapshot_times = times.to_vec();
    Ok(run_simulation_with(&c, &mut ())?.snapshots)
}

/// Time-series and snapshot output of one blow-up resolution.
#[derive(Debug, Clone)]
pub struct BlowupRun {
    pub modes: usize,
    pub output: RunOutput,
    /// Largest `sup |grad m|` among the time-series rows.
    pub max_sup_grad: f64,
    /// `max_n |m^n(0) - (0, 0, 1)|` over all levels; `None` if the origin is
    /// not a grid point.
    pub origin_deviation: Option<f64>,
    /// `m3` at the final time at the four axis points nearest radius 0.1.
    pub near_origin_m3: Vec<f64>,
}

/// Grid index of `(0, 0)` if it is a node.
pub fn origin_index(grid: &crate::spectral::GridSpec) -> Option<usize> {
    let mut idx = [0usize; 2];
    for (axis, slot) in idx.iter_mut().enumerate() {
        let h = grid.spacing(axis);
        let k = (-grid.origin()[axis] / h).round();
        if (grid.origin()[axis] + k * h).abs() > 1e-12 || k < 0.0 || k as usize >= grid.modes()[axis] {
            return None;
        }
        *slot = k as usize;
    }
    Some(grid.index(idx[0], idx[1]))
}

/// Indices of `(+-r', 0)` and `(0, +-r')` with `r'` the multiple of the
/// spacing nearest to `radius`.
pub fn near_origin_indices(grid: &crate::spectral::GridSpec, radius: f64) -> Option<Vec<usize>> {
    let o = origin_index(grid)?;
    let (ox, oy) = (o % grid.nx(), o / grid.nx());
    let kx = (radius / grid.spacing(0)).round() as usize;
    let ky = (radius / grid.spacing(1)).round() as usize;
    if kx == 0 || ky == 0 || ox < kx || oy < ky || ox + kx >= grid.nx() || oy + ky >= grid.ny() {
        return None;
    }
    Some(vec![
        grid.index(ox + kx, oy),
        grid.index(ox - kx, oy),
        grid.index(ox, oy + ky),
        grid.index(ox, oy - ky),
    ])
}

struct OriginWatch {
    index: Option<usize>,
    deviation: f64,
}

impl OriginWatch {
    fn check(&mut self, stepper: &Stepper) {
        if let Some(i) = self.index {
            let v = stepper.newest().m.at(i);
            let d = v[0].abs().max(v[1].abs()).max((v[2] - 1.0).abs());
            self.deviation = self.deviation.max(d);
        }
    }
}

impl Observer for OriginWatch {
    fn on_start(&mut self, stepper: &mut Stepper) -> Result<()> {
        self.check(stepper);
        Ok(())
    }

    fn on_step(&mut self, stepper: &mut Stepper, _: &StepReport) -> Result<()> {
        self.check(stepper);
        Ok(())
    }
}

/// Runs `base` at each resolution in `modes` (same domain and time step).
pub fn blowup_study(base: &RunConfig, modes: &[usize], parallel: bool) -> Result<Vec<BlowupRun>> {
    if modes.is_empty() {
        return Err(Error::usage("blow-up study needs at least one resolution"));
    }
    let one = |&n: &usize| -> Result<BlowupRun> {
        let mut c = base.clone();
        c.grid = crate::spectral::GridSpec::new_2d([n, n], base.grid.lengths(), base.grid.origin())
            .map_err(|e| Error::Config(e.to_string()))?;
        let mut watch = OriginWatch {
            index: origin_index(&c.grid),
            deviation: 0.0,
        };
        let output = run_simulation_with(&c, &mut watch)?;
        let max_sup_grad = output.series.iter().map(|r| r.sup_grad_norm).fold(0.0, f64::max);
        let near_origin_m3 = near_origin_indices(&c.grid, 0.1)
            .map(|ix| ix.into_iter().map(|i| output.final_m.at(i)[2]).collect())
            .unwrap_or_default();
        Ok(BlowupRun {
            modes: n,
            max_sup_grad,
            origin_deviation: watch.index.map(|_| watch.deviation),
            near_origin_m3,
            output,
        })
    };
    if parallel {
        modes.par_iter().map(one).collect()
    } else {
        modes.iter().map(one).collect()
    }
}
