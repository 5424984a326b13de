//! Scalar auxiliary variable update, eta correction and unit-length projection.
//!
//! The auxiliary scalar `R` shadows `E(m) + K0`. Each step it is advanced with
//! the closed-form recursion
//!
//! ```text
//! R^{n+1} = R^n / (1 + dt * (gamma ||B(m^n) x Lap m~^{n+1}||^2 + P^{n+1}) / (E(m~^{n+1}) + K0))
//! ```
//!
//! where `P^{n+1} = (Lap m~^{n+1}, f^{n+1})` is the power injected by an
//! external forcing (zero for unforced problems). Then `xi = R / (E + K0)`,
//! `eta = 1 - (1 - xi)^q`, `m^ = eta m~ + (eta - 1)^w` and `m = m^ / |m^|`.

use crate::error::{Error, Result};
use crate::spectral::ops::grad_sq_norm_from_spectra;
use crate::spectral::{laplacian, SpectralWorkspace, VectorField3, VectorSpectrum, Wavenumbers};

/// Magnitudes of `m^` below this are treated as a degenerate projection.
pub const PROJECTION_FLOOR: f64 = 1e-14;

/// Smallest `K0` assumed by the stability analysis; smaller values are
/// accepted with a warning.
pub const MIN_K0: f64 = 0.5;

/// Scalars produced by one auxiliary-variable update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SavState {
    /// Modified energy.
    pub r: f64,
    pub xi: f64,
    pub eta: f64,
    /// Dirichlet energy `E(m~)` of the provisional field.
    pub energy: f64,
    /// `||B_l(m^n) x Lap m~^{n+1}||^2`
    pub cross_norm_sq: f64,
    /// `(Lap m~^{n+1}, f^{n+1})`; zero without forcing.
    pub forcing_power: f64,
    /// `dt * (gamma * cross + power) / (E + K0)`: the relative decay of `R` this step.
    pub decay: f64,
    pub k0: f64,
}

impl SavState {
    /// State at the first level: `R = E(m0) + K0`, `xi = eta = 1`.
    pub fn initial(energy: f64, k0: f64) -> Self {
        SavState {
            r: energy + k0,
            xi: 1.0,
            eta: 1.0,
            energy,
            cross_norm_sq: 0.0,
            forcing_power: 0.0,
            decay: 0.0,
            k0,
        }
    }
}

/// `E(m) = 1/2 ||grad m||^2`.
pub fn energy(ws: &mut SpectralWorkspace, m: &VectorField3) -> f64 {
    let s = ws.forward_vec(m);
    energy_from_spectra(ws.wavenumbers(), &s)
}

pub fn energy_from_spectra(wn: &Wavenumbers, spectra: &VectorSpectrum) -> f64 {
    0.5 * grad_sq_norm_from_spectra(wn, spectra)
}

/// Closed-form update of `R`, then `xi` and `eta`.
#[allow(clippy::too_many_arguments)]
pub fn sav_closed_form(
    r_prev: f64,
    energy_tilde: f64,
    cross_norm_sq: f64,
    forcing_power: f64,
    dt: f64,
    gamma: f64,
    k0: f64,
    order: usize,
) -> Result<SavState> {
    if !(r_prev > 0.0) {
        return Err(Error::state(format!(
            "auxiliary variable must be positive, got R = {r_prev}"
        )));
    }
    let denom_energy = energy_tilde + k0;
    let decay = dt * (gamma * cross_norm_sq + forcing_power) / denom_energy;
    let factor = 1.0 + decay;
    if !(factor > 0.0) {
        return Err(Error::state(format!(
            "auxiliary-variable update is not positive (1 + decay = {factor:e}); \
             forcing power {forcing_power:e} dominates at this time step"
        )));
    }
    let r = r_prev / factor;
    let xi = r / denom_energy;
    Ok(SavState {
        r,
        xi,
        eta: eta_from_xi(xi, order),
        energy: energy_tilde,
        cross_norm_sq,
        forcing_power,
        decay,
        k0,
    })
}

/// Auxiliary update from the provisional field `m~^{n+1}` and the
/// extrapolated projected field `B_l(m^n)`, without forcing.
#[allow(clippy::too_many_arguments)]
pub fn sav_update(
    ws: &mut SpectralWorkspace,
    r_prev: f64,
    m_tilde: &VectorField3,
    b_proj: &VectorField3,
    dt: f64,
    gamma: f64,
    k0: f64,
    order: usize,
) -> Result<SavState> {
    let lap = laplacian(ws, m_tilde);
    let cross = crate::spectral::cross(b_proj, &lap)?;
    let cross_norm_sq = crate::spectral::inner_l2(&cross, &cross)?;
    let e = energy(ws, m_tilde);
    sav_closed_form(r_prev, e, cross_norm_sq, 0.0, dt, gamma, k0, order)
}

/// `eta = 1 - (1 - xi)^q` with `q = 2` for first order and `q = l` otherwise.
pub fn eta_from_xi(xi: f64, order: usize) -> f64 {
    let q = if order == 1 { 2 } else { order as i32 };
    1.0 - (1.0 - xi).powi(q)
}

/// Output of [`correct_and_project`].
#[derive(Debug, Clone)]
pub struct Projection {
    pub m_hat: VectorField3,
    pub m: VectorField3,
    pub min_hat_norm: f64,
    /// The scalar `(eta - 1)^w` added to every component.
    pub shift: f64,
}

/// `m^ = eta m~ + (eta - 1)^w` (the scalar added to all three components),
/// then `m = m^ / |m^|` pointwise.
///
/// Errors with [`Error::ProjectionDegenerate`] (step 0; callers rewrite it)
/// if `|m^|` falls below [`PROJECTION_FLOOR`] anywhere.
pub fn correct_and_project(m_tilde: &VectorField3, eta: f64, w: u32) -> Result<Projection> {
    if w == 0 {
        return Err(Error::usage("correction exponent w must be >= 1"));
    }
    let grid = *m_tilde.grid();
    let shift = (eta - 1.0).powi(w as i32);
    let mut m_hat = VectorField3::zeros(grid);
    let mut m = VectorField3::zeros(grid);
    let mut min_norm = f64::INFINITY;
    let mut min_at = 0;
    for i in 0..grid.len() {
        let t = m_tilde.at(i);
        let h = [eta * t[0] + shift, eta * t[1] + shift, eta * t[2] + shift];
        let norm = (h[0] * h[0] + h[1] * h[1] + h[2] * h[2]).sqrt();
        if norm < min_norm || norm.is_nan() {
            min_norm = norm;
            min_at = i;
        }
        m_hat.set(i, h);
        m.set(i, [h[0] / norm, h[1] / norm, h[2] / norm]);
    }
    if !(min_norm >= PROJECTION_FLOOR) {
        let (x, y) = grid.coord_of(min_at);
        return Err(Error::ProjectionDegenerate {
            step: 0,
            index: min_at,
            x,
            y,
            magnitude: min_norm,
        });
    }
    Ok(Projection {
        m_hat,
        m,
        min_hat_norm: min_norm,
        shift,
    })
}

/// Result of [`monotonicity_monitor`].
#[derive(Debug, Clone, PartialEq)]
pub struct MonitorReport {
    pub passed: bool,
    pub first_violation: Option<usize>,
    pub reason: Option<String>,
    /// Upper bound used for `||grad m^||`.
    pub grad_bound: f64,
}

/// Relative decay below which `R` is allowed to stay unchanged in floating point.
const STRICT_DECAY_THRESHOLD: f64 = 8.0 * f64::EPSILON;

/// Uniform bound on `||grad m^||` implied by `R^0` and `K0`.
///
/// `xi <= 2M / (||grad m~||^2 + 1)` with `M = R^0 max(1, 1/(2 K0))`, and
/// `eta = xi P(xi)` with `|P(s)| <= q max(1, |1 - s|)^{q-1}`, so
/// `||grad m^|| = |eta| ||grad m~||` stays below `M1 / 2` where
/// `M1 = 2M q max(1, 2M - 1)^{q-1}`.
pub fn grad_hat_bound(r0: f64, k0: f64, order: usize) -> f64 {
    let q = if order == 1 { 2 } else { order as i32 };
    let m = r0 * (0.5 / k0).max(1.0);
    let m1 = 2.0 * m * q as f64 * (2.0 * m - 1.0).max(1.0).powi(q - 1);
    0.5 * m1
}

/// Checks a sequence of auxiliary states: `R > 0`, `R` non-increasing, strictly
/// decreasing whenever the cross term is resolvable, and `||grad m^||`
/// (when supplied) below [`grad_hat_bound`].
///
/// Index 0 is the initial state; a violation at index `i` concerns the step
/// producing state `i`.
pub fn monotonicity_monitor(
    states: &[SavState],
    grad_hat: Option<&[f64]>,
    order: usize,
) -> MonitorReport {
    let (r0, k0) = states.first().map(|s| (s.r, s.k0)).unwrap_or((1.0, 1.0));
    let bound = grad_hat_bound(r0, k0, order);
    let fail = |i: usize, why: String| MonitorReport {
        passed: false,
        first_violation: Some(i),
        reason: Some(why),
        grad_bound: bound,
    };
    for (i, s) in states.iter().enumerate() {
        if !(s.r > 0.0) {
            return fail(i, format!("R = {} is not positive", s.r));
        }
        if i > 0 {
            let prev = states[i - 1].r;
            if s.r > prev {
                return fail(i, format!("R increased from {prev} to {}", s.r));
            }
            if s.decay > STRICT_DECAY_THRESHOLD && s.r >= prev {
                return fail(i, format!("R did not decrease (decay {:e})", s.decay));
            }
        }
        if let Some(g) = grad_hat.and_then(|g| g.get(i)) {
            if !(*g <= bound) {
                return fail(i, format!("||grad m^|| = {g} exceeds bound {bound}"));
            }
        }
    }
    MonitorReport {
        passed: true,
        first_violation: None,
        reason: None,
        grad_bound: bound,
    }
}

/// Convenience form of [`monotonicity_monitor`] for a bare `R` sequence.
pub fn monitor_r_sequence(r: &[f64]) -> MonitorReport {
    let states: Vec<SavState> = r
        .iter()
        .map(|&r| SavState {
            r,
            ..SavState::initial(0.0, 1.0)
        })
        .collect();
    monotonicity_monitor(&states, None, 1)
}
