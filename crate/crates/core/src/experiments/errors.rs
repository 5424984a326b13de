use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::run::{Observer, Snapshot};
use crate::error::{Error, Result};
use crate::model::Problem;
use crate::spectral::{check_same_grid, VectorSpectrum, Wavenumbers};
use crate::stepper::{Level, StepReport, Stepper};

/// `max_n ||e^n||_{H1}` and `sqrt(sum_n dt ||e^n||_{H2}^2)` of one field.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct NormPair {
    pub linf_h1: f64,
    pub l2_h2: f64,
}

/// Errors of one run against a reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub dt: f64,
    /// Projected field `m`.
    pub m: NormPair,
    /// Corrected field before projection.
    pub m_hat: NormPair,
    /// Provisional field.
    pub m_tilde: NormPair,
    /// `max_n |1 - xi^n|`.
    pub xi_defect: f64,
    /// Number of compared levels.
    pub samples: usize,
}

impl ErrorRecord {
    pub fn err_linf_h1(&self) -> f64 {
        self.m.linf_h1
    }

    pub fn err_l2_h2(&self) -> f64 {
        self.m.l2_h2
    }

    pub fn variant(&self, v: Variant) -> NormPair {
        match v {
            Variant::M => self.m,
            Variant::MHat => self.m_hat,
            Variant::MTilde => self.m_tilde,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.m.linf_h1,
            self.m.l2_h2,
            self.m_hat.linf_h1,
            self.m_hat.l2_h2,
            self.m_tilde.linf_h1,
            self.m_tilde.l2_h2,
            self.xi_defect,
        ];
        if all.iter().all(|v| *v >= 0.0 && v.is_finite()) {
            Ok(())
        } else {
            Err(Error::state(format!("error record for dt = {} has invalid entries: {all:?}", self.dt)))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    M,
    MHat,
    MTilde,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::M, Variant::MHat, Variant::MTilde];

    pub fn label(self) -> &'static str {
        match self {
            Variant::M => "m",
            Variant::MHat => "m_hat",
            Variant::MTilde => "m_tilde",
        }
    }
}

/// `(||e||_{H1}^2, ||e||_{H2}^2)` for `e = scale * a + shift - b`, from spectra.
fn diff_norms(wn: &Wavenumbers, a: &VectorSpectrum, scale: f64, shift: f64, b: &VectorSpectrum) -> [f64; 2] {
    let grid = a[0].grid();
    let n = grid.len() as f64;
    let norm = grid.area() / (n * n);
    let (mut l2, mut g, mut h) = (0.0, 0.0, 0.0);
    for (sa, sb) in a.iter().zip(b) {
        for (k, ((za, zb), (gw, hw))) in sa
            .coeffs()
            .iter()
            .zip(sb.coeffs())
            .zip(wn.grad_weight.iter().zip(&wn.hess_weight))
            .enumerate()
        {
            let mut d = za * scale - zb;
            if k == 0 {
                d += Complex64::new(shift * n, 0.0);
            }
            let e = d.norm_sqr();
            l2 += e;
            g += gw * e;
            h += hw * e;
        }
    }
    [(l2 + g) * norm, (l2 + g + h) * norm]
}

/// Running maxima and weighted sums for the three fields.
#[derive(Debug, Clone)]
pub struct ErrorAccumulator {
    dt: f64,
    max_h1: [f64; 3],
    sum_h2: [f64; 3],
    xi_defect: f64,
    samples: usize,
}

impl ErrorAccumulator {
    pub fn new(dt: f64) -> Self {
        ErrorAccumulator {
            dt,
            max_h1: [0.0; 3],
            sum_h2: [0.0; 3],
            xi_defect: 0.0,
            samples: 0,
        }
    }

    /// Compares `level` with `exact` (spectrum of the reference at the same
    /// time); `weight` multiplies the squared H2 errors in the time sum.
    pub fn add(&mut self, wn: &Wavenumbers, level: &Level, exact: &VectorSpectrum, weight: f64, xi: f64) {
        let parts = [
            diff_norms(wn, &level.m_spec, 1.0, 0.0, exact),
            diff_norms(wn, &level.m_tilde_spec, level.eta, level.shift, exact),
            diff_norms(wn, &level.m_tilde_spec, 1.0, 0.0, exact),
        ];
        for (i, [h1, h2]) in parts.into_iter().enumerate() {
            self.max_h1[i] = self.max_h1[i].max(h1.sqrt());
            self.sum_h2[i] += weight * h2;
        }
        self.xi_defect = self.xi_defect.max((1.0 - xi).abs());
        self.samples += 1;
    }

    pub fn finish(&self) -> ErrorRecord {
        let pair = |i: usize| NormPair {
            linf_h1: self.max_h1[i],
            l2_h2: self.sum_h2[i].sqrt(),
        };
        ErrorRecord {
            dt: self.dt,
            m: pair(0),
            m_hat: pair(1),
            m_tilde: pair(2),
            xi_defect: self.xi_defect,
            samples: self.samples,
        }
    }
}

/// Accumulates errors against a problem's exact solution at every computed step.
#[derive(Debug)]
pub struct ExactErrors<'a> {
    pub problem: &'a dyn Problem,
    pub acc: ErrorAccumulator,
}

impl<'a> ExactErrors<'a> {
    pub fn new(problem: &'a dyn Problem, dt: f64) -> Self {
        ExactErrors {
            problem,
            acc: ErrorAccumulator::new(dt),
        }
    }
}

impl Observer for ExactErrors<'_> {
    fn on_step(&mut self, stepper: &mut Stepper, report: &StepReport) -> Result<()> {
        let grid = *stepper.grid();
        let exact = self
            .problem
            .sample_exact(&grid, report.time)
            .ok_or_else(|| Error::Config(format!("problem '{}' has no exact solution", self.problem.name())))?;
        let spec = stepper.workspace().forward_vec(&exact);
        let dt = stepper.params().dt;
        self.acc.add(stepper.wavenumbers(), stepper.newest(), &spec, dt, report.sav.xi);
        Ok(())
    }
}

/// Accumulates errors against stored reference snapshots at their times.
/// Each comparison is weighted by the distance to the previous reference time.
#[derive(Debug)]
pub struct ReferenceErrors<'a> {
    reference: &'a [Snapshot],
    steps: Vec<usize>,
    next: usize,
    xi_defect: f64,
    pub acc: ErrorAccumulator,
}

impl<'a> ReferenceErrors<'a> {
    /// `reference` must be sorted by time; each time must be a step of `dt`.
    pub fn new(reference: &'a [Snapshot], dt: f64) -> Result<Self> {
        let mut steps = Vec::with_capacity(reference.len());
        for s in reference {
            let k = (s.time / dt).round();
            if (k * dt - s.time).abs() > 1e-9 * dt.max(s.time) {
                return Err(Error::usage(format!(
                    "reference time {} is not a multiple of dt = {dt}",
                    s.time
                )));
            }
            steps.push(k as usize);
        }
        if steps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::usage("reference snapshots must have increasing times"));
        }
        Ok(ReferenceErrors {
            reference,
            steps,
            next: 0,
            xi_defect: 0.0,
            acc: ErrorAccumulator::new(dt),
        })
    }

    /// Number of reference times that were compared.
    pub fn compared(&self) -> usize {
        self.next
    }
}

impl Observer for ReferenceErrors<'_> {
    fn on_start(&mut self, stepper: &mut Stepper) -> Result<()> {
        for s in self.reference {
            check_same_grid(stepper.grid(), s.m.grid())?;
        }
        // reference times at or before the startup levels are skipped
        while self.next < self.steps.len() && self.steps[self.next] <= stepper.step_index() {
            self.next += 1;
        }
        Ok(())
    }

    fn on_step(&mut self, stepper: &mut Stepper, report: &StepReport) -> Result<()> {
        self.xi_defect = self.xi_defect.max((1.0 - report.sav.xi).abs());
        if self.next >= self.steps.len() || self.steps[self.next] != report.step {
            return Ok(());
        }
        let i = self.next;
        let snap = &self.reference[i];
        let spec = stepper.workspace().forward_vec(&snap.m);
        let prev = if i == 0 { 0.0 } else { self.reference[i - 1].time };
        self.acc
            .add(stepper.wavenumbers(), stepper.newest(), &spec, snap.time - prev, report.sav.xi);
        // xi is tracked over every step, not only at the compared times
        self.acc.xi_defect = self.xi_defect;
        self.next += 1;
        Ok(())
    }
}
