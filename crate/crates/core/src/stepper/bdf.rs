use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 5;

/// Rational weights `(numerator, denominator)` of the BDF formulas:
/// `D_l u^{n+1} = (sum_i a_i u^{n+1-i}) / dt`.
const BDF_TABLE: [&[(i64, i64)]; MAX_ORDER] = [
    &[(1, 1), (-1, 1)],
    &[(3, 2), (-2, 1), (1, 2)],
    &[(11, 6), (-3, 1), (3, 2), (-1, 3)],
    &[(25, 12), (-4, 1), (3, 1), (-4, 3), (1, 4)],
    &[(137, 60), (-5, 1), (5, 1), (-10, 3), (5, 4), (-1, 5)],
];

/// Extrapolation weights: `B_l(u^n) = sum_i b_i u^{n+1-i}`, `b_i = (-1)^{i+1} C(l, i)`.
const EXTRAP_TABLE: [&[i64]; MAX_ORDER] = [
    &[1],
    &[2, -1],
    &[3, -3, 1],
    &[4, -6, 4, -1],
    &[5, -10, 10, -5, 1],
];

/// Coefficients of the order-`l` IMEX pair (BDF derivative, explicit extrapolation).
#[derive(Debug, Clone, PartialEq)]
pub struct BdfScheme {
    order: usize,
    bdf: Vec<f64>,
    numerators: Vec<f64>,
    denominator: f64,
    extrap: Vec<f64>,
}

impl BdfScheme {
    pub fn new(order: usize) -> Result<Self> {
        if !(1..=MAX_ORDER).contains(&order) {
            return Err(Error::usage(format!(
                "scheme order must be in 1..={MAX_ORDER}, got {order}"
            )));
        }
        let table = BDF_TABLE[order - 1];
        let bdf = table.iter().map(|&(n, d)| n as f64 / d as f64).collect();
        let den = table.iter().fold(1, |l, &(_, d)| l * d / gcd(l, d));
        let numerators = table.iter().map(|&(n, d)| (n * (den / d)) as f64).collect();
        let extrap = EXTRAP_TABLE[order - 1].iter().map(|&b| b as f64).collect();
        Ok(BdfScheme {
            order,
            bdf,
            numerators,
            denominator: den as f64,
            extrap,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `a_0 .. a_l`; `a_0` multiplies the new level.
    pub fn bdf_weights(&self) -> &[f64] {
        &self.bdf
    }

    pub fn a0(&self) -> f64 {
        self.bdf[0]
    }

    /// Integer numerators of the BDF weights over [`Self::bdf_denominator`].
    /// They are exact in floating point and sum to zero exactly, so a
    /// constant history is reproduced without a per-step bias. The rounded
    /// rationals (11/6, 1/3, ...) do not sum to zero, and the provisional
    /// field, which is never renormalized, would drift by a fixed relative
    /// amount every step.
    pub fn bdf_numerators(&self) -> &[f64] {
        &self.numerators
    }

    pub fn bdf_denominator(&self) -> f64 {
        self.denominator
    }

    /// Step size of the integer-weight form: `denominator * dt`.
    pub fn scaled_dt(&self, dt: f64) -> f64 {
        self.denominator * dt
    }

    /// `b_1 .. b_l`; `b_1` multiplies the newest stored level.
    pub fn extrap_weights(&self) -> &[f64] {
        &self.extrap
    }

    /// Exponent `q` in `eta = 1 - (1 - xi)^q`: 2 for first order, `l` otherwise.
    pub fn eta_exponent(&self) -> i32 {
        if self.order == 1 {
            2
        } else {
            self.order as i32
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Coefficient table for order `l`.
pub fn bdf_coefficients(order: usize) -> Result<BdfScheme> {
    BdfScheme::new(order)
}
