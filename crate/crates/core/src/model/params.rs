use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sav::MIN_K0;
use crate::stepper::MAX_ORDER;

/// Smallest multiplier constants `tau_l` (orders 1..=5) entering the
/// parameter conditions of the error estimates.
pub const TAU: [f64; MAX_ORDER] = [0.0, 0.0, 0.0836, 0.2878, 0.8160];

/// Physical and numerical parameters of one simulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    /// Gilbert damping, > 0.
    pub gamma: f64,
    /// Exchange (precession) parameter.
    pub beta: f64,
    /// Stabilization, >= 0.
    pub s: f64,
    /// Auxiliary-variable offset, > 0.
    pub k0: f64,
    /// Exponent of the scalar shift `(eta - 1)^w`, >= 1.
    pub w: u32,
    pub dt: f64,
    pub t_final: f64,
    pub order: usize,
}

impl Default for ProblemParams {
    fn default() -> Self {
        ProblemParams {
            gamma: 1.0,
            beta: 0.0,
            s: 0.0,
            k0: 1.0,
            w: 1,
            dt: 1e-4,
            t_final: 0.5,
            order: 2,
        }
    }
}

impl ProblemParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return bad(format!("gamma must be positive, got {}", self.gamma));
        }
        if !self.beta.is_finite() {
            return bad(format!("beta must be finite, got {}", self.beta));
        }
        if !(self.s >= 0.0 && self.s.is_finite()) {
            return bad(format!("S must be >= 0, got {}", self.s));
        }
        if !(self.k0 > 0.0 && self.k0.is_finite()) {
            return bad(format!("K0 must be positive, got {}", self.k0));
        }
        if self.w == 0 {
            return bad("w must be a positive integer".into());
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return bad(format!("T must be >= 0, got {}", self.t_final));
        }
        if !(1..=MAX_ORDER).contains(&self.order) {
            return bad(format!("order must be in 1..={MAX_ORDER}, got {}", self.order));
        }
        Ok(())
    }

    /// Number of steps to reach `T` (rounded to the nearest integer).
    pub fn num_steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }

    /// Parameter conditions of the analysis that are not met. Informational only.
    pub fn advisories(&self, semi_implicit: bool) -> Vec<String> {
        let mut out = Vec::new();
        if self.k0 < MIN_K0 {
            out.push(format!(
                "K0 = {} is below {MIN_K0}; the uniform H1 bound assumes K0 >= {MIN_K0}",
                self.k0
            ));
        }
        if semi_implicit && self.s != 0.0 {
            out.push(format!("S = {} is ignored in semi-implicit mode", self.s));
        }
        if let Some(&tau) = TAU.get(self.order.wrapping_sub(1)) {
            let b = self.beta.abs();
            let (need, which) = if semi_implicit {
                (b * tau / (1.0 - tau), "semi-implicit")
            } else {
                (
                    (1.0 + tau + self.order as f64 * tau) / (2.0 * (1.0 - tau)) * b,
                    "explicit",
                )
            };
            if b > 0.0 && self.gamma <= need {
                out.push(format!(
                    "gamma = {} does not exceed {need:.4} required by the {which} error estimate at order {} with |beta| = {b}",
                    self.gamma, self.order
                ));
            }
        }
        out
    }
}
