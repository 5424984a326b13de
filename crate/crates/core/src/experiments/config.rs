use crate::error::{Error, Result};
use crate::model::{problem_registry, ProblemOptions, ProblemParams};
use crate::spectral::GridSpec;
use crate::stepper::{solver_registry, CrossTerm, SolverOptions, StepParams};

/// Everything needed to run one simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Registered problem name (`manufactured`, `self_reference`, `blowup`, `custom`).
    pub problem: String,
    pub problem_options: ProblemOptions,
    pub grid: GridSpec,
    pub params: ProblemParams,
    /// Registered solver name (`explicit`, `semi_implicit`).
    pub mode: String,
    pub solver: SolverOptions,
    pub dealias: bool,
    pub cross_term: CrossTerm,
    /// A time-series row is recorded every `cadence` steps (and at the last step).
    pub cadence: usize,
    /// Times at which the projected field is stored; rounded to the nearest step.
    pub snapshot_times: Vec<f64>,
}

/// Snapshot times of the blow-up figures.
pub const BLOWUP_SNAPSHOT_TIMES: [f64; 9] = [0.0, 0.01, 0.08, 0.35, 0.501, 0.51, 0.52, 0.55, 0.6];

/// Default time-step ladder of the manufactured convergence study.
pub const MANUFACTURED_DTS: [f64; 5] = [2e-4, 1e-4, 5e-5, 2.5e-5, 1.25e-5];

impl RunConfig {
    fn base(problem: &str, grid: GridSpec, params: ProblemParams) -> Self {
        RunConfig {
            problem: problem.to_string(),
            problem_options: ProblemOptions::default(),
            grid,
            params,
            mode: "explicit".into(),
            solver: SolverOptions::default(),
            dealias: false,
            cross_term: CrossTerm::default(),
            cadence: 1,
            snapshot_times: Vec::new(),
        }
    }

    /// Forced problem with known solution: 64^2 modes, T = 0.5, S = 0, K0 = 1, w = 1.
    pub fn manufactured() -> Self {
        let grid = GridSpec::square(64, 2.0 * std::f64::consts::PI, 0.0).expect("valid grid");
        let params = ProblemParams {
            gamma: 1.0,
            beta: 0.0,
            s: 0.0,
            k0: 1.0,
            w: 1,
            dt: 1e-4,
            t_final: 0.5,
            order: 2,
        };
        Self::base("manufactured", grid, params)
    }

    /// Unknown-solution study: 256^2 modes, S = 0, beta = 0, K0 = 1, w = 2,
    /// fourth order with dt = 3.125e-6 for the reference.
    pub fn self_reference() -> Self {
        let grid = GridSpec::square(256, 2.0 * std::f64::consts::PI, 0.0).expect("valid grid");
        let params = ProblemParams {
            gamma: 1.0,
            beta: 0.0,
            s: 0.0,
            k0: 1.0,
            w: 2,
            dt: 3.125e-6,
            t_final: 0.5,
            order: 4,
        };
        let mut c = Self::base("self_reference", grid, params);
        c.cadence = 100;
        c
    }

    /// Bump data on `[-1/2, 1/2)^2`: S = 0.5, beta = 1, w = 1, K0 = 0.1,
    /// second order, up to T = 0.6.
    pub fn blowup() -> Self {
        let grid = GridSpec::square(64, 1.0, -0.5).expect("valid grid");
        let params = ProblemParams {
            gamma: 1.0,
            beta: 1.0,
            s: 0.5,
            k0: 0.1,
            w: 1,
            dt: 1e-5,
            t_final: 0.6,
            order: 2,
        };
        let mut c = Self::base("blowup", grid, params);
        c.cadence = 10;
        c.snapshot_times = BLOWUP_SNAPSHOT_TIMES.to_vec();
        c
    }

    /// Defaults for a registered problem name.
    pub fn preset(problem: &str) -> Result<Self> {
        match problem {
            "manufactured" => Ok(Self::manufactured()),
            "self_reference" => Ok(Self::self_reference()),
            "blowup" => Ok(Self::blowup()),
            "custom" => {
                let mut c = Self::manufactured();
                c.problem = "custom".into();
                Ok(c)
            }
            other => Err(Error::Config(format!(
                "unknown problem '{other}' (available: {})",
                problem_registry().names().collect::<Vec<_>>().join(", ")
            ))),
        }
    }

    pub fn step_params(&self) -> StepParams {
        StepParams {
            dealias: self.dealias,
            cross_term: self.cross_term,
            ..StepParams::from(&self.params)
        }
    }

    pub fn num_steps(&self) -> usize {
        self.params.num_steps()
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.grid.validate().map_err(|e| Error::Config(e.to_string()))?;
        self.solver.validate()?;
        if self.cadence == 0 {
            return Err(Error::Config("output cadence must be >= 1 step".into()));
        }
        let problems = problem_registry();
        if !problems.contains(&self.problem) {
            return Err(Error::Config(format!(
                "unknown problem '{}' (available: {})",
                self.problem,
                problems.names().collect::<Vec<_>>().join(", ")
            )));
        }
        let solvers = solver_registry();
        if !solvers.contains(&self.mode) {
            return Err(Error::Config(format!(
                "unknown mode '{}' (available: {})",
                self.mode,
                solvers.names().collect::<Vec<_>>().join(", ")
            )));
        }
        for &t in &self.snapshot_times {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::Config(format!("snapshot time {t} must be finite and >= 0")));
            }
        }
        Ok(())
    }

    /// Step indices of the snapshot times (sorted, deduplicated). Times past
    /// `T` are dropped.
    pub fn snapshot_steps(&self) -> Vec<usize> {
        let last = self.num_steps();
        let mut s: Vec<usize> = self
            .snapshot_times
            .iter()
            .map(|t| (t / self.params.dt).round() as usize)
            .filter(|&k| {
                if k > last {
                    log::warn!("snapshot step {k} lies beyond the final step {last}; skipped");
                }
                k <= last
            })
            .collect();
        s.sort_unstable();
        s.dedup();
        s
    }
}
