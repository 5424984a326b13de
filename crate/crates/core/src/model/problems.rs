use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::registry::Registry;
use crate::spectral::{GridSpec, VectorField3};

/// `m^e(x, y, t) = (sin(t+x) cos(t+y), cos(t+x) cos(t+y), sin(t+y))`.
pub fn manufactured_solution(x: f64, y: f64, t: f64) -> [f64; 3] {
    let (sx, cx) = (t + x).sin_cos();
    let (sy, cy) = (t + y).sin_cos();
    solution_from_trig(sx, cx, sy, cy)
}

fn solution_from_trig(sx: f64, cx: f64, sy: f64, cy: f64) -> [f64; 3] {
    [sx * cy, cx * cy, sy]
}

/// `f = d_t m^e - gamma Lap m^e - gamma |grad m^e|^2 m^e + beta m^e x Lap m^e`.
pub fn manufactured_forcing(x: f64, y: f64, t: f64, gamma: f64, beta: f64) -> [f64; 3] {
    let (sx, cx) = (t + x).sin_cos();
    let (sy, cy) = (t + y).sin_cos();
    forcing_from_trig(sx, cx, sy, cy, gamma, beta)
}

// d_t m   = (cx cy - sx sy, -sx cy - cx sy, cy)
// Lap m   = (-2 sx cy, -2 cx cy, -sy)
// |grad m|^2 = 1 + cy^2
// m x Lap m  = (cx cy sy, -sx cy sy, 0)
fn forcing_from_trig(sx: f64, cx: f64, sy: f64, cy: f64, gamma: f64, beta: f64) -> [f64; 3] {
    let g2 = 1.0 + cy * cy;
    [
        cx * cy - sx * sy + 2.0 * gamma * sx * cy - gamma * g2 * sx * cy + beta * cx * cy * sy,
        -sx * cy - cx * sy + 2.0 * gamma * cx * cy - gamma * g2 * cx * cy - beta * sx * cy * sy,
        cy + gamma * sy - gamma * g2 * sy,
    ]
}

/// Samples `g(sin(t+x), cos(t+x), sin(t+y), cos(t+y))` using per-axis tables.
fn sample_separable(grid: &GridSpec, t: f64, g: impl Fn(f64, f64, f64, f64) -> [f64; 3]) -> VectorField3 {
    let xs: Vec<(f64, f64)> = grid.axis_coords(0).iter().map(|x| (t + x).sin_cos()).collect();
    let ys: Vec<(f64, f64)> = grid.axis_coords(1).iter().map(|y| (t + y).sin_cos()).collect();
    let n = grid.len();
    let mut raw: [Vec<f64>; 3] = std::array::from_fn(|_| Vec::with_capacity(n));
    for &(sy, cy) in &ys {
        for &(sx, cx) in &xs {
            let v = g(sx, cx, sy, cy);
            raw[0].push(v[0]);
            raw[1].push(v[1]);
            raw[2].push(v[2]);
        }
    }
    VectorField3::from_raw(*grid, raw)
}

/// `m0 = (0, 0, -1)` for `|x| >= 1/2`, otherwise
/// `(2 x1 A, 2 x2 A, A^2 - |x|^2) / (A^2 + |x|^2)` with `A = (1 - 2|x|)^4`.
pub fn blowup_initial_data(x: f64, y: f64) -> [f64; 3] {
    let r2 = x * x + y * y;
    let r = r2.sqrt();
    if r >= 0.5 {
        return [0.0, 0.0, -1.0];
    }
    let a = (1.0 - 2.0 * r).powi(4);
    let d = a * a + r2;
    [2.0 * x * a / d, 2.0 * y * a / d, (a * a - r2) / d]
}

/// Initial data of the self-reference study.
pub fn self_reference_initial_data(x: f64, y: f64) -> [f64; 3] {
    let c = x.cos() * y.cos();
    let (s01, c01) = 0.1f64.sin_cos();
    [c * s01, c * c01, (1.0 - c * c).max(0.0).sqrt()]
}

/// Free-form options of the `[problem]` config section.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemOptions {
    /// Direction of the `custom` uniform field (normalized on use).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<[f64; 3]>,
}

/// A test problem: initial data, optional exact solution and forcing, and its
/// natural domain.
pub trait Problem: Send + Sync + std::fmt::Debug {
    fn name(&self) -> &'static str;

    /// `(lengths, origin)` of the problem's domain.
    fn domain(&self) -> ([f64; 2], [f64; 2]);

    /// Rejects grids on which the problem is not defined.
    fn check_grid(&self, _grid: &GridSpec) -> Result<()> {
        Ok(())
    }

    fn initial(&self, x: f64, y: f64) -> [f64; 3];

    fn exact(&self, _x: f64, _y: f64, _t: f64) -> Option<[f64; 3]> {
        None
    }

    fn forcing(&self, _x: f64, _y: f64, _t: f64, _gamma: f64, _beta: f64) -> Option<[f64; 3]> {
        None
    }

    fn has_exact(&self) -> bool {
        false
    }

    fn has_forcing(&self) -> bool {
        false
    }

    fn sample_initial(&self, grid: &GridSpec) -> VectorField3 {
        VectorField3::from_fn(*grid, |x, y| self.initial(x, y))
    }

    fn sample_exact(&self, grid: &GridSpec, t: f64) -> Option<VectorField3> {
        if !self.has_exact() {
            return None;
        }
        Some(VectorField3::from_fn(*grid, |x, y| self.exact(x, y, t).expect("has exact")))
    }

    fn sample_forcing(&self, grid: &GridSpec, t: f64, gamma: f64, beta: f64) -> Option<VectorField3> {
        if !self.has_forcing() {
            return None;
        }
        Some(VectorField3::from_fn(*grid, |x, y| {
            self.forcing(x, y, t, gamma, beta).expect("has forcing")
        }))
    }
}

fn require_2d(name: &str, grid: &GridSpec) -> Result<()> {
    if grid.dims() != 2 {
        return Err(Error::Config(format!("problem '{name}' needs a 2D grid")));
    }
    Ok(())
}

/// The trigonometric data is periodic only on multiples of `2 pi`.
fn require_2pi_lengths(name: &str, grid: &GridSpec) -> Result<()> {
    require_2d(name, grid)?;
    for l in grid.lengths() {
        let k = (l / (2.0 * PI)).round();
        if k < 1.0 || (l - 2.0 * PI * k).abs() > 1e-12 * l {
            return Err(Error::Config(format!(
                "problem '{name}' needs domain lengths that are multiples of 2 pi, got {l}"
            )));
        }
    }
    Ok(())
}

/// Forced problem with the exact solution [`manufactured_solution`] on `[0, 2 pi)^2`.
#[derive(Debug, Clone, Default)]
pub struct Manufactured;

impl Problem for Manufactured {
    fn name(&self) -> &'static str {
        "manufactured"
    }

    fn domain(&self) -> ([f64; 2], [f64; 2]) {
        ([2.0 * PI; 2], [0.0; 2])
    }

    fn check_grid(&self, grid: &GridSpec) -> Result<()> {
        require_2pi_lengths(self.name(), grid)
    }

    fn initial(&self, x: f64, y: f64) -> [f64; 3] {
        manufactured_solution(x, y, 0.0)
    }

    fn exact(&self, x: f64, y: f64, t: f64) -> Option<[f64; 3]> {
        Some(manufactured_solution(x, y, t))
    }

    fn forcing(&self, x: f64, y: f64, t: f64, gamma: f64, beta: f64) -> Option<[f64; 3]> {
        Some(manufactured_forcing(x, y, t, gamma, beta))
    }

    fn has_exact(&self) -> bool {
        true
    }

    fn has_forcing(&self) -> bool {
        true
    }

    fn sample_initial(&self, grid: &GridSpec) -> VectorField3 {
        sample_separable(grid, 0.0, solution_from_trig)
    }

    fn sample_exact(&self, grid: &GridSpec, t: f64) -> Option<VectorField3> {
        Some(sample_separable(grid, t, solution_from_trig))
    }

    fn sample_forcing(&self, grid: &GridSpec, t: f64, gamma: f64, beta: f64) -> Option<VectorField3> {
        Some(sample_separable(grid, t, |sx, cx, sy, cy| {
            forcing_from_trig(sx, cx, sy, cy, gamma, beta)
        }))
    }
}

/// Unforced problem without a known solution, on `[0, 2 pi)^2`.
#[derive(Debug, Clone, Default)]
pub struct SelfReference;

impl Problem for SelfReference {
    fn name(&self) -> &'static str {
        "self_reference"
    }

    fn domain(&self) -> ([f64; 2], [f64; 2]) {
        ([2.0 * PI; 2], [0.0; 2])
    }

    fn check_grid(&self, grid: &GridSpec) -> Result<()> {
        require_2pi_lengths(self.name(), grid)
    }

    fn initial(&self, x: f64, y: f64) -> [f64; 3] {
        self_reference_initial_data(x, y)
    }
}

/// The bump [`blowup_initial_data`] on `[-1/2, 1/2)^2`.
#[derive(Debug, Clone, Default)]
pub struct Blowup;

impl Problem for Blowup {
    fn name(&self) -> &'static str {
        "blowup"
    }

    fn domain(&self) -> ([f64; 2], [f64; 2]) {
        ([1.0; 2], [-0.5; 2])
    }

    fn check_grid(&self, grid: &GridSpec) -> Result<()> {
        require_2d(self.name(), grid)
    }

    fn initial(&self, x: f64, y: f64) -> [f64; 3] {
        blowup_initial_data(x, y)
    }
}

/// A spatially uniform unit field; it is an exact steady state on any grid.
#[derive(Debug, Clone)]
pub struct Uniform {
    direction: [f64; 3],
}

impl Uniform {
    pub fn new(direction: [f64; 3]) -> Result<Self> {
        let n = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Config(format!("direction {direction:?} cannot be normalized")));
        }
        Ok(Uniform {
            direction: direction.map(|v| v / n),
        })
    }
}

impl Default for Uniform {
    fn default() -> Self {
        Uniform {
            direction: [0.0, 0.0, 1.0],
        }
    }
}

impl Problem for Uniform {
    fn name(&self) -> &'static str {
        "custom"
    }

    fn domain(&self) -> ([f64; 2], [f64; 2]) {
        ([2.0 * PI; 2], [0.0; 2])
    }

    fn initial(&self, _x: f64, _y: f64) -> [f64; 3] {
        self.direction
    }
}

/// Built-in problems: `manufactured`, `self_reference`, `blowup`, `custom`.
pub fn problem_registry() -> Registry<dyn Problem, ProblemOptions> {
    let mut r: Registry<dyn Problem, ProblemOptions> = Registry::new("problem");
    r.register("manufactured", |_| Ok(Box::new(Manufactured) as Box<dyn Problem>));
    r.register("self_reference", |_| Ok(Box::new(SelfReference) as Box<dyn Problem>));
    r.register("blowup", |_| Ok(Box::new(Blowup) as Box<dyn Problem>));
    r.register("custom", |o: &ProblemOptions| {
        let u = match o.direction {
            Some(d) => Uniform::new(d)?,
            None => Uniform::default(),
        };
        Ok(Box::new(u) as Box<dyn Problem>)
    });
    r
}
