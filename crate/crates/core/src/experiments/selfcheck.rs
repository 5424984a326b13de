use std::f64::consts::PI;

use super::config::RunConfig;
use super::run::run_simulation;
use crate::error::Result;
use crate::model::{manufactured_residual, ProblemOptions};
use crate::spectral::{laplacian, GridSpec, ScalarField, SpectralWorkspace, VectorField3};
use crate::stepper::{BdfScheme, MAX_ORDER};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, r: Result<(f64, f64)>) -> CheckOutcome {
    match r {
        Ok((value, tol)) => CheckOutcome {
            name,
            passed: value <= tol,
            detail: format!("{value:.3e} (tolerance {tol:.0e})"),
        },
        Err(e) => CheckOutcome {
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

/// Worst error of the BDF weights on `t^p, p <= l` and of the extrapolation
/// weights on `t^p, p <= l - 1`, with `t^{n+1} = 1` and unit spacing.
pub fn coefficient_defect() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for l in 1..=MAX_ORDER {
        let s = BdfScheme::new(l)?;
        for p in 0..=l as i32 {
            let d: f64 = s
                .bdf_weights()
                .iter()
                .enumerate()
                .map(|(i, a)| a * (1.0 - i as f64).powi(p))
                .sum();
            worst = worst.max((d - p as f64).abs());
            if p < l as i32 {
                let b: f64 = s
                    .extrap_weights()
                    .iter()
                    .enumerate()
                    .map(|(i, b)| b * (-(i as f64)).powi(p))
                    .sum();
                worst = worst.max((b - 1.0).abs());
            }
        }
    }
    Ok(worst)
}

fn spectral_defect() -> Result<f64> {
    let g = GridSpec::square(32, 2.0 * PI, 0.0)?;
    let mut ws = SpectralWorkspace::new(g);
    let f = VectorField3::from_fn(g, |x, y| {
        let v = (2.0 * x).sin() * (3.0 * y).cos();
        [v, (5.0 * y).sin(), 1.0]
    });
    let lap = laplacian(&mut ws, &f);
    let mut worst: f64 = 0.0;
    for i in 0..g.len() {
        let (a, l) = (f.at(i), lap.at(i));
        worst = worst.max((l[0] + 13.0 * a[0]).abs()).max((l[1] + 25.0 * a[1]).abs()).max(l[2].abs());
    }
    let s = ScalarField::from_fn(g, |x, y| (x + 2.0 * y).cos() + 0.5 * x.sin());
    let direct: f64 = s.values().iter().map(|v| v * v).sum::<f64>() * g.cell_area();
    let parseval = ws.forward(&s).l2_norm_sq();
    Ok(worst.max((direct - parseval).abs() / direct))
}

fn forcing_defect() -> Result<f64> {
    let g = GridSpec::square(64, 2.0 * PI, 0.0)?;
    let mut ws = SpectralWorkspace::new(g);
    Ok([(0.0, 0.0), (0.21, 0.5), (0.5, 1.0)]
        .iter()
        .map(|&(t, b)| manufactured_residual(&mut ws, t, 1.0, b))
        .fold(0.0, f64::max))
}

fn small(problem: &str) -> Result<RunConfig> {
    let mut c = RunConfig::preset(problem)?;
    c.grid = GridSpec::new_2d([16, 16], c.grid.lengths(), c.grid.origin())?;
    c.params.dt = 1e-3;
    c.params.t_final = 0.02;
    Ok(c)
}

fn steady_defect() -> Result<f64> {
    let mut c = small("custom")?;
    c.problem_options = ProblemOptions {
        direction: Some([1.0, 2.0, 2.0]),
    };
    let out = run_simulation(&c)?;
    Ok(out
        .series
        .iter()
        .map(|r| (r.r - out.r0).abs() + r.energy.abs() + (r.xi - 1.0).abs())
        .fold(0.0, f64::max))
}

/// `|R^m + sum dt gamma xi ||B x Lap m~||^2 - R^0| / R^0` on a short unforced run.
fn energy_identity_defect() -> Result<f64> {
    let mut c = small("blowup")?;
    c.params.dt = 1e-4;
    c.params.t_final = 2e-3;
    let out = run_simulation(&c)?;
    let g = c.params.gamma * c.params.dt;
    let sum: f64 = out.reports.iter().map(|r| g * r.sav.xi * r.sav.cross_norm_sq).sum();
    let last = out.reports.last().map_or(out.r0, |r| r.sav.r);
    Ok((last + sum - out.r0).abs() / out.r0)
}

fn semi_implicit_defect() -> Result<f64> {
    let mut c = small("manufactured")?;
    c.params.beta = 0.0;
    let a = run_simulation(&c)?;
    c.mode = "semi_implicit".into();
    let b = run_simulation(&c)?;
    Ok(a.final_m.sub(&b.final_m)?.max_abs())
}

/// Fast oracle and invariant checks; each entry reports its worst defect.
pub fn self_check() -> Vec<CheckOutcome> {
    vec![
        outcome("bdf and extrapolation weights exact on polynomials", coefficient_defect().map(|v| (v, 1e-10))),
        outcome("spectral laplacian and parseval", spectral_defect().map(|v| (v, 1e-10))),
        outcome("manufactured forcing residual", forcing_defect().map(|v| (v, 1e-11))),
        outcome("uniform field is a steady state", steady_defect().map(|v| (v, 0.0))),
        outcome("discrete modified-energy identity", energy_identity_defect().map(|v| (v, 1e-10))),
        outcome("semi-implicit equals explicit without precession", semi_implicit_defect().map(|v| (v, 1e-10))),
    ]
}
