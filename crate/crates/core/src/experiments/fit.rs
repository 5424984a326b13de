use crate::error::{Error, Result};

/// Least-squares slope of `log(err)` against `log(dt)`.
pub fn slope_fit(dts: &[f64], errors: &[f64]) -> Result<f64> {
    if dts.len() != errors.len() {
        return Err(Error::usage(format!(
            "slope fit needs matching lists, got {} dt values and {} errors",
            dts.len(),
            errors.len()
        )));
    }
    if dts.len() < 2 {
        return Err(Error::usage("slope fit needs at least two points"));
    }
    if let Some(v) = dts.iter().chain(errors).find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::usage(format!("slope fit needs positive finite entries, got {v}")));
    }
    let xs: Vec<f64> = dts.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::usage("slope fit needs at least two distinct dt values"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

/// Result of a fit restricted to the points above an error floor.
#[derive(Debug, Clone, PartialEq)]
pub struct FloorFit {
    /// `None` when fewer than two points lie above the floor.
    pub slope: Option<f64>,
    /// Indices of the points used.
    pub used: Vec<usize>,
}

/// Fits `errors` against `dts` using only the points whose `selector` value
/// is at least `floor`.
pub fn slope_fit_above(dts: &[f64], errors: &[f64], selector: &[f64], floor: f64) -> Result<FloorFit> {
    if selector.len() != dts.len() {
        return Err(Error::usage("selector length differs from the dt list"));
    }
    let used: Vec<usize> = (0..dts.len()).filter(|&i| selector[i] >= floor).collect();
    if used.len() < 2 {
        return Ok(FloorFit { slope: None, used });
    }
    let d: Vec<f64> = used.iter().map(|&i| dts[i]).collect();
    let e: Vec<f64> = used.iter().map(|&i| errors[i]).collect();
    Ok(FloorFit { slope: Some(slope_fit(&d, &e)?), used })
}

/// Checks that `dts` has at least three entries with a constant ratio.
pub fn check_geometric(dts: &[f64]) -> Result<()> {
    if dts.len() < 3 {
        return Err(Error::usage(format!("a study needs at least 3 time steps, got {}", dts.len())));
    }
    if let Some(v) = dts.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::usage(format!("time steps must be positive, got {v}")));
    }
    let q = dts[1] / dts[0];
    if (q - 1.0).abs() < 1e-12 {
        return Err(Error::usage("time steps must be distinct"));
    }
    for w in dts.windows(2) {
        let r = w[1] / w[0];
        if ((r - q) / q).abs() > 1e-6 {
            return Err(Error::usage(format!(
                "time steps are not in geometric progression: ratio {r} differs from {q}"
            )));
        }
    }
    Ok(())
}
