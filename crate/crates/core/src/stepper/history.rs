use std::collections::VecDeque;

use rustfft::num_complex::Complex64;

use super::bdf::BdfScheme;
use crate::error::{Error, Result};
use crate::spectral::{Spectrum, VectorField3, VectorSpectrum};

/// One stored time level: the projected field `m`, the provisional field
/// `m~` and their spectra, plus the scalars that produced `m^` from `m~`.
#[derive(Debug, Clone)]
pub struct Level {
    pub time: f64,
    pub m: VectorField3,
    pub m_spec: VectorSpectrum,
    pub m_tilde: VectorField3,
    pub m_tilde_spec: VectorSpectrum,
    pub eta: f64,
    pub shift: f64,
}

impl Level {
    /// A level where the projected and provisional fields coincide (initial
    /// data, exact startup values).
    pub fn exact(time: f64, m: VectorField3, m_spec: VectorSpectrum) -> Self {
        Level {
            time,
            m_tilde: m.clone(),
            m_tilde_spec: m_spec.clone(),
            m,
            m_spec,
            eta: 1.0,
            shift: 0.0,
        }
    }

    /// Spectrum of `m^ = eta m~ + shift`. The constant shift only touches the zero mode.
    pub fn m_hat_spectrum(&self) -> VectorSpectrum {
        let n = self.m_tilde.grid().len() as f64;
        std::array::from_fn(|c| {
            let mut s = self.m_tilde_spec[c].clone();
            s.coeffs_mut().iter_mut().for_each(|z| *z *= self.eta);
            s.coeffs_mut()[0] += Complex64::new(self.shift * n, 0.0);
            s
        })
    }
}

/// Which stored field an extrapolation reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Projected,
    Unprojected,
}

/// The most recent time levels, newest first.
#[derive(Debug, Clone)]
pub struct HistoryBuffer {
    levels: VecDeque<Level>,
    capacity: usize,
    dt: f64,
}

impl HistoryBuffer {
    pub fn new(capacity: usize, dt: f64) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::usage("history capacity must be positive"));
        }
        if !(dt > 0.0) {
            return Err(Error::usage(format!("time step must be positive, got {dt}")));
        }
        Ok(HistoryBuffer {
            levels: VecDeque::with_capacity(capacity + 1),
            capacity,
            dt,
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn is_warm(&self, order: usize) -> bool {
        self.levels.len() >= order
    }

    /// Level `i` steps back (0 is the newest).
    pub fn get(&self, i: usize) -> Option<&Level> {
        self.levels.get(i)
    }

    pub fn newest(&self) -> Option<&Level> {
        self.levels.front()
    }

    pub fn levels(&self) -> impl Iterator<Item = &Level> {
        self.levels.iter()
    }

    /// Adds a new level, dropping the oldest beyond capacity. Time stamps must
    /// advance by exactly one step (up to roundoff in the accumulated time).
    pub fn push(&mut self, level: Level) -> Result<()> {
        if let Some(prev) = self.levels.front() {
            let gap = level.time - prev.time;
            let slack = 1e-9 * self.dt + 4.0 * f64::EPSILON * level.time.abs();
            if (gap - self.dt).abs() > slack {
                return Err(Error::state(format!(
                    "history levels must be spaced by dt = {}, got {} -> {}",
                    self.dt, prev.time, level.time
                )));
            }
        }
        self.levels.push_front(level);
        self.levels.truncate(self.capacity);
        Ok(())
    }

    fn require(&self, scheme: &BdfScheme) -> Result<()> {
        if !self.is_warm(scheme.order()) {
            return Err(Error::state(format!(
                "history holds {} levels, order {} needs {}",
                self.len(),
                scheme.order(),
                scheme.order()
            )));
        }
        Ok(())
    }

    /// `B_l` applied to the stored fields: `sum_i b_i u^{n+1-i}`.
    pub fn extrapolate(&self, which: Which, scheme: &BdfScheme) -> Result<VectorField3> {
        self.require(scheme)?;
        let grid = *self.levels[0].m.grid();
        let mut out = VectorField3::zeros(grid);
        for (b, level) in scheme.extrap_weights().iter().zip(&self.levels) {
            let f = match which {
                Which::Projected => &level.m,
                Which::Unprojected => &level.m_tilde,
            };
            out.axpy(*b, f)?;
        }
        Ok(out)
    }

    /// Spectral counterpart of [`HistoryBuffer::extrapolate`].
    pub fn extrapolate_spectrum(&self, which: Which, scheme: &BdfScheme) -> Result<VectorSpectrum> {
        self.require(scheme)?;
        Ok(self.combine_spectra(which, scheme.extrap_weights()))
    }

    /// `sum_{i >= 2} A_i (m~^{n+2-i} - m~^n)` with the integer numerators
    /// `A_i` of the BDF weights, in spectral form. The numerators sum to zero,
    /// so this equals `A_0 m~^n + sum_{i >= 1} A_i m~^{n+1-i}`, the history
    /// part of the BDF derivative when solving for the increment
    /// `m~^{n+1} - m~^n`. The differences are `O(dt)`, which keeps round-off
    /// in the history from building up over many steps.
    pub fn bdf_history_increment(&self, scheme: &BdfScheme) -> Result<VectorSpectrum> {
        self.require(scheme)?;
        let newest = &self.levels[0].m_tilde_spec;
        let grid = *self.levels[0].m.grid();
        let mut out: VectorSpectrum = std::array::from_fn(|_| Spectrum::zeros(grid));
        for (a, level) in scheme.bdf_numerators().iter().skip(2).zip(self.levels.iter().skip(1)) {
            for ((o, s), s0) in out.iter_mut().zip(&level.m_tilde_spec).zip(newest) {
                for ((oi, si), s0i) in o.coeffs_mut().iter_mut().zip(s.coeffs()).zip(s0.coeffs()) {
                    *oi += *a * (si - s0i);
                }
            }
        }
        Ok(out)
    }

    fn combine_spectra(&self, which: Which, weights: &[f64]) -> VectorSpectrum {
        let grid = *self.levels[0].m.grid();
        let mut out: VectorSpectrum = std::array::from_fn(|_| Spectrum::zeros(grid));
        for (w, level) in weights.iter().zip(&self.levels) {
            let src = match which {
                Which::Projected => &level.m_spec,
                Which::Unprojected => &level.m_tilde_spec,
            };
            for (o, s) in out.iter_mut().zip(src) {
                o.axpy(*w, s);
            }
        }
        out
    }
}

/// Free-function form of [`HistoryBuffer::extrapolate`].
pub fn extrapolate(buffer: &HistoryBuffer, which: Which, scheme: &BdfScheme) -> Result<VectorField3> {
    buffer.extrapolate(which, scheme)
}
