//! Acceptance criteria 1 to 10. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.
//!
//! `LLG_GSAV_EXTENDED=1` adds a blow-up comparison at a time step where all
//! three resolutions are stable (about 35 minutes on one core).

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use llg_gsav::experiments::{
    blowup_study, convergence_study, run_simulation, BlowupRun, ConvergenceTable, Norm, Reference, RunConfig,
    RunOutput, Variant, ERROR_FLOOR, LENGTH_TOLERANCE, MANUFACTURED_DTS,
};
use llg_gsav::model::manufactured_residual;
use llg_gsav::spectral::{
    laplacian, partial_derivative, GridSpec, ScalarField, SpectralWorkspace, VectorField3,
};
use llg_gsav::stepper::{BdfScheme, MAX_ORDER};
use rand::{Rng, SeedableRng};

struct Verdict {
    id: usize,
    passed: bool,
    summary: String,
    details: Vec<String>,
}

impl Verdict {
    fn new(id: usize) -> Self {
        Verdict { id, passed: true, summary: String::new(), details: Vec::new() }
    }

    /// Records a sub-check; any failing sub-check fails the criterion.
    fn check(&mut self, ok: bool, line: String) {
        self.passed &= ok;
        self.details.push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, line: String) {
        self.details.push(format!("info {line}"));
    }
}

/// Length defects of every run that completed. Runs enforce the bound at
/// each step, so a run that failed on it shows up in `violations`.
#[derive(Default)]
struct LengthLog {
    runs: usize,
    worst: f64,
    violations: Vec<String>,
}

impl LengthLog {
    fn record(&mut self, out: &RunOutput) {
        self.runs += 1;
        self.worst = self.worst.max(out.max_length_defect);
    }

    fn record_err(&mut self, label: &str, e: &llg_gsav::Error) {
        if e.to_string().contains("| |m| - 1 |") {
            self.violations.push(format!("{label}: {e}"));
        }
    }
}

fn secs(t: Instant) -> String {
    format!("{:.1} s", t.elapsed().as_secs_f64())
}

fn blowup_config(n: usize, dt: f64) -> RunConfig {
    let mut c = RunConfig::blowup();
    c.grid = GridSpec::new_2d([n, n], c.grid.lengths(), c.grid.origin()).unwrap();
    c.params.dt = dt;
    c.snapshot_times.clear();
    c
}

fn blowup_one(n: usize, dt: f64, log: &mut LengthLog) -> Result<BlowupRun, llg_gsav::Error> {
    let base = blowup_config(n, dt);
    match blowup_study(&base, &[n], false) {
        Ok(mut v) => {
            let r = v.remove(0);
            log.record(&r.output);
            Ok(r)
        }
        Err(e) => {
            log.record_err(&format!("blow-up N={n} dt={dt:e}"), &e);
            Err(e)
        }
    }
}

// ---------------------------------------------------------------- criterion 6

/// Weights from the Taylor conditions, solved directly: the BDF weights
/// reproduce `d/dt t^p` at `t = 1` from samples at `1, 0, -1, ...`, and the
/// extrapolation weights reproduce `t^p` at `t = 1` from `0, -1, ...`.
fn taylor_weights(l: usize) -> (Vec<f64>, Vec<f64>) {
    let solve = |mut a: Vec<Vec<f64>>, mut b: Vec<f64>| -> Vec<f64> {
        let n = b.len();
        for c in 0..n {
            let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
            a.swap(c, p);
            b.swap(c, p);
            let pivot = a[c].clone();
            for r in c + 1..n {
                let f = a[r][c] / pivot[c];
                for (x, p) in a[r][c..].iter_mut().zip(&pivot[c..]) {
                    *x -= f * p;
                }
                b[r] -= f * b[c];
            }
        }
        let mut x = vec![0.0; n];
        for r in (0..n).rev() {
            let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
            x[r] = (b[r] - s) / a[r][r];
        }
        x
    };
    let nodes: Vec<f64> = (0..=l).map(|i| 1.0 - i as f64).collect();
    let a = (0..=l).map(|p| nodes.iter().map(|t| t.powi(p as i32)).collect()).collect();
    let b = (0..=l).map(|p| p as f64).collect();
    let bdf = solve(a, b);
    let a = (0..l).map(|p| nodes[1..].iter().map(|t| t.powi(p as i32)).collect()).collect();
    let extrap = solve(a, vec![1.0; l]);
    (bdf, extrap)
}

fn criterion_6() -> Verdict {
    let mut v = Verdict::new(6);
    let mut worst_exact: f64 = 0.0;
    let mut worst_oracle: f64 = 0.0;
    for l in 1..=MAX_ORDER {
        let s = BdfScheme::new(l).unwrap();
        for p in 0..=l as i32 {
            let d: f64 = s.bdf_weights().iter().enumerate().map(|(i, a)| a * (1.0 - i as f64).powi(p)).sum();
            worst_exact = worst_exact.max((d - p as f64).abs());
            if p < l as i32 {
                let b: f64 =
                    s.extrap_weights().iter().enumerate().map(|(i, b)| b * (-(i as f64)).powi(p)).sum();
                worst_exact = worst_exact.max((b - 1.0).abs());
            }
        }
        let (bdf, extrap) = taylor_weights(l);
        for (x, y) in bdf.iter().zip(s.bdf_weights()).chain(extrap.iter().zip(s.extrap_weights())) {
            worst_oracle = worst_oracle.max((x - y).abs());
        }
    }
    v.check(worst_exact <= 1e-10, format!("D_l on t^p (p <= l), B_l on t^p (p <= l-1), l = 1..5: worst {worst_exact:.2e}"));
    v.check(worst_oracle <= 1e-10, format!("tables against solved Taylor conditions: worst {worst_oracle:.2e}"));
    let s2 = BdfScheme::new(2).unwrap();
    let s3 = BdfScheme::new(3).unwrap();
    let ok = s2.bdf_weights() == [1.5, -2.0, 0.5]
        && s2.extrap_weights() == [2.0, -1.0]
        && (s3.bdf_weights()[0] - 11.0 / 6.0).abs() < 1e-15
        && s3.extrap_weights() == [3.0, -3.0, 1.0];
    v.check(ok, "published l = 2, 3 coefficients".into());
    v.summary = format!("coefficient oracles, worst defect {:.2e} (tol 1e-10)", worst_exact.max(worst_oracle));
    v
}

// ---------------------------------------------------------------- criterion 7

fn criterion_7() -> Verdict {
    let mut v = Verdict::new(7);
    let mut worst_op: f64 = 0.0;
    let mut worst_parseval: f64 = 0.0;
    for (modes, lengths) in [([32, 32], [2.0 * PI, 2.0 * PI]), ([16, 24], [1.0, 3.0]), ([64, 64], [1.0, 1.0])] {
        let g = GridSpec::new_2d(modes, lengths, [-0.3, 0.2]).unwrap();
        let mut ws = SpectralWorkspace::new(g);
        let [lx, ly] = lengths;
        // every resolved mode pair short of Nyquist, sampled sparsely
        for kx in (0..modes[0] as i64 / 2).step_by(3) {
            for ky in (0..modes[1] as i64 / 2).step_by(5) {
                let (ax, ay) = (2.0 * PI * kx as f64 / lx, 2.0 * PI * ky as f64 / ly);
                let f = VectorField3::from_fn(g, |x, y| {
                    let ph = ax * x + ay * y;
                    [ph.sin(), ph.cos(), 1.0]
                });
                let lap = laplacian(&mut ws, &f);
                let k2 = ax * ax + ay * ay;
                let scale = k2.max(1.0);
                let dx = partial_derivative(&mut ws, f.component(0), 0).unwrap();
                let dy = partial_derivative(&mut ws, f.component(1), 1).unwrap();
                for i in 0..g.len() {
                    let (x, y) = g.coord_of(i);
                    let ph = ax * x + ay * y;
                    let e = (lap.at(i)[0] + k2 * ph.sin()).abs().max((lap.at(i)[1] + k2 * ph.cos()).abs());
                    let e = e.max(lap.at(i)[2].abs());
                    let d = (dx.values()[i] - ax * ph.cos()).abs().max((dy.values()[i] + ay * ph.sin()).abs());
                    worst_op = worst_op.max(e / scale).max(d / ax.abs().max(ay.abs()).max(1.0));
                }
            }
        }
        let s = ScalarField::from_fn(g, |x, y| (2.0 * PI * (x / lx + 3.0 * y / ly)).cos() + (x - y).exp());
        let direct: f64 = s.values().iter().map(|v| v * v).sum::<f64>() * g.cell_area();
        let spectral = ws.forward(&s).l2_norm_sq();
        worst_parseval = worst_parseval.max((direct - spectral).abs() / direct);
    }
    v.check(worst_op <= 1e-12, format!("Laplacian and first derivatives on pure modes, relative to |k|^2, |k|: worst {worst_op:.2e}"));
    v.check(worst_parseval <= 1e-10, format!("Parseval: worst relative {worst_parseval:.2e}"));
    v.summary = format!("spectral exactness {worst_op:.2e} (tol 1e-12), Parseval {worst_parseval:.2e} (tol 1e-10)");
    v
}

// --------------------------------------------------------------- criterion 10

fn criterion_10() -> Verdict {
    let mut v = Verdict::new(10);
    let g = GridSpec::square(64, 2.0 * PI, 0.0).unwrap();
    let mut ws = SpectralWorkspace::new(g);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let t = rng.gen_range(0.0..0.5);
        for beta in [0.0, 0.5] {
            let r = manufactured_residual(&mut ws, t, 1.0, beta);
            worst = worst.max(r);
        }
    }
    v.check(worst <= 1e-11, format!("10 random times in [0, 0.5), beta in {{0, 0.5}}: worst {worst:.2e}"));
    v.summary = format!("forcing residual {worst:.2e} on 64^2 (tol 1e-11)");
    v
}

// ---------------------------------------------------------------- criterion 8

fn criterion_8(log: &mut LengthLog) -> Verdict {
    let mut v = Verdict::new(8);
    let mut c = RunConfig::manufactured();
    c.params.beta = 0.0;
    c.params.t_final = 100.0 * c.params.dt;
    c.cadence = 1;
    let a = run_simulation(&c);
    c.mode = "semi_implicit".into();
    let b = run_simulation(&c);
    match (a, b) {
        (Ok(a), Ok(b)) => {
            log.record(&a);
            log.record(&b);
            let last = |o: &RunOutput| o.reports.last().map_or(0, |r| r.step);
            let (steps, computed) = (last(&a).min(last(&b)), a.reports.len());
            let field = a.final_m.sub(&b.final_m).unwrap().max_abs();
            let r = a
                .reports
                .iter()
                .zip(&b.reports)
                .map(|(x, y)| (x.sav.r - y.sav.r).abs() / x.sav.r)
                .fold(0.0, f64::max);
            v.check(
                steps == 100 && computed == b.reports.len(),
                format!("both reach step {steps}; {computed} scheme steps after the exact startup levels"),
            );
            v.check(field <= 1e-10, format!("max |m_explicit - m_semi_implicit| after 100 steps: {field:.2e}"));
            v.check(r <= 1e-10, format!("max relative R difference over all steps: {r:.2e}"));
            v.summary = format!("beta = 0 modes agree to {field:.2e} over 100 steps (tol 1e-10)");
        }
        (a, b) => {
            for (name, r) in [("explicit", a), ("semi_implicit", b)] {
                if let Err(e) = r {
                    log.record_err(name, &e);
                    v.check(false, format!("{name} run failed: {e}"));
                }
            }
            v.summary = "a run failed".into();
        }
    }
    v
}

// ---------------------------------------------------------------- criterion 3

/// Worst `|R^m + sum dt gamma xi ||B x Lap m~||^2 - R^0| / R^0` over all m.
fn identity_defect(out: &RunOutput, dt: f64, gamma: f64) -> f64 {
    let mut sum = 0.0;
    let mut worst: f64 = 0.0;
    for r in &out.reports {
        sum += dt * gamma * r.sav.xi * r.sav.cross_norm_sq;
        worst = worst.max((r.sav.r + sum - out.r0).abs() / out.r0);
    }
    worst
}

fn criterion_3(log: &mut LengthLog, blowup64: Option<&BlowupRun>) -> Verdict {
    let mut v = Verdict::new(3);
    let mut worst: f64 = 0.0;
    let mut runs = Vec::new();
    let mut c = RunConfig::self_reference();
    c.grid = GridSpec::square(64, 2.0 * PI, 0.0).unwrap();
    c.params.dt = 1e-4;
    c.params.t_final = 0.05;
    c.snapshot_times.clear();
    runs.push(("self_reference 64^2, l=4, dt=1e-4, 500 steps", c.clone()));
    c.params.order = 2;
    c.params.beta = 0.5;
    c.params.s = 1.0;
    c.params.w = 1;
    c.mode = "semi_implicit".into();
    runs.push(("self_reference 64^2, l=2, beta=0.5, semi-implicit, 500 steps", c));
    let mut b = blowup_config(32, 1e-5);
    b.params.t_final = 0.01;
    b.params.order = 3;
    runs.push(("blowup 32^2, l=3, dt=1e-5, 1000 steps", b));
    for (label, cfg) in runs {
        match run_simulation(&cfg) {
            Ok(out) => {
                log.record(&out);
                let d = identity_defect(&out, cfg.params.dt, cfg.params.gamma);
                worst = worst.max(d);
                v.check(d <= 1e-10, format!("{label}: {d:.2e}"));
            }
            Err(e) => {
                log.record_err(label, &e);
                v.check(false, format!("{label}: run failed: {e}"));
            }
        }
    }
    if let Some(r) = blowup64 {
        let d = identity_defect(&r.output, 1e-5, 1.0);
        worst = worst.max(d);
        v.check(d <= 1e-10, format!("blowup 64^2, l=2, dt=1e-5, 60000 steps: {d:.2e}"));
    }
    v.summary = format!("energy identity, worst relative defect {worst:.2e} (tol 1e-10)");
    v
}

// ---------------------------------------------------------------- criterion 2

fn r_monotone(out: &RunOutput) -> (bool, usize, f64) {
    let mut prev = out.r0;
    let mut min_r = out.r0;
    for r in &out.reports {
        if !(r.sav.r > 0.0 && r.sav.r <= prev) {
            return (false, r.step, r.sav.r);
        }
        prev = r.sav.r;
        min_r = min_r.min(r.sav.r);
    }
    (true, out.reports.len(), min_r)
}

fn criterion_2(log: &mut LengthLog, blowup64: &Result<BlowupRun, llg_gsav::Error>) -> Verdict {
    let mut v = Verdict::new(2);
    match blowup64 {
        Ok(r) => {
            let (ok, steps, min_r) = r_monotone(&r.output);
            v.check(ok, format!("N=64, dt=1e-5: {steps} steps, R > 0 and non-increasing, final R {min_r:.6e}"));
        }
        Err(e) => v.check(false, format!("N=64, dt=1e-5: run failed: {e}")),
    }
    let c = blowup_config(64, 1e-3);
    match run_simulation(&c) {
        Ok(out) => {
            log.record(&out);
            let (ok, steps, min_r) = r_monotone(&out);
            v.check(ok, format!("N=64, dt=1e-3: {steps} steps, final R {min_r:.6e}"));
        }
        Err(e) => {
            log.record_err("blow-up N=64 dt=1e-3", &e);
            v.check(false, format!("N=64, dt=1e-3: {e}"));
        }
    }
    v.summary = if v.passed {
        "R positive and non-increasing at dt = 1e-5 and 1e-3".into()
    } else {
        "R monotonicity did not hold on every run (see lines above)".into()
    };
    v
}

// ---------------------------------------------------------------- criterion 9

fn blowup_checks(v: &mut Verdict, label: &str, runs: &[(usize, Result<BlowupRun, llg_gsav::Error>)], record: bool) {
    let mut sups = Vec::new();
    for (n, r) in runs {
        match r {
            Ok(b) => {
                sups.push(Some(b.max_sup_grad));
                let dev = b.origin_deviation.unwrap_or(f64::INFINITY);
                let line = format!("{label} N={n}: max_t |m(0) - (0,0,1)| = {dev:.3e}");
                let near = &b.near_origin_m3;
                let near_line = format!("{label} N={n}: m3 at the four points nearest r = 0.1, t = 0.6: {near:.7?}");
                let near_ok = near.len() == 4 && near.iter().all(|m| *m < 0.0);
                if record {
                    v.check(dev <= 1e-10, line);
                    v.check(near_ok, near_line);
                } else {
                    v.note(format!("{} {line}", if dev <= 1e-10 { "ok" } else { "not met" }));
                    v.note(format!("{} {near_line}", if near_ok { "ok" } else { "not met" }));
                }
            }
            Err(e) => {
                sups.push(None);
                let line = format!("{label} N={n}: run failed: {e}");
                if record {
                    v.check(false, line);
                } else {
                    v.note(line);
                }
            }
        }
    }
    let shown: Vec<String> = runs
        .iter()
        .zip(&sups)
        .map(|((n, _), s)| format!("N={n}: {}", s.map_or("n/a".into(), |s| format!("{s:.3}"))))
        .collect();
    let increasing = sups.iter().all(Option::is_some)
        && sups.windows(2).all(|w| w[1].unwrap() > w[0].unwrap());
    let line = format!("{label} max_t sup|grad m| strictly increasing in N: {}", shown.join(", "));
    if record {
        v.check(increasing, line);
    } else {
        v.note(format!("{} {line}", if increasing { "ok" } else { "not met" }));
    }
}

fn criterion_9(log: &mut LengthLog, runs: &[(usize, Result<BlowupRun, llg_gsav::Error>)]) -> Verdict {
    let mut v = Verdict::new(9);
    blowup_checks(&mut v, "dt=1e-5", runs, true);
    if std::env::var("LLG_GSAV_EXTENDED").is_ok_and(|s| s == "1") {
        let dt = 2.5e-6;
        let t = Instant::now();
        let ext: Vec<_> = [32, 64, 128].into_iter().map(|n| (n, blowup_one(n, dt, log))).collect();
        blowup_checks(&mut v, "dt=2.5e-6 (extended, informational)", &ext, false);
        v.note(format!("extended runs took {}", secs(t)));
    }
    v.summary = if v.passed {
        "blow-up reproduced across N = 32, 64, 128".into()
    } else {
        "blow-up checks not met (see lines above)".into()
    };
    v
}

// ------------------------------------------------------------ criteria 4, 5

struct Study {
    label: String,
    order: usize,
    table: Result<ConvergenceTable, llg_gsav::Error>,
}

fn manufactured_study(order: usize, beta: f64, mode: &str, dts: &[f64]) -> Study {
    let mut c = RunConfig::manufactured();
    c.params.order = order;
    c.params.beta = beta;
    c.mode = mode.into();
    Study {
        label: format!("l={order} beta={beta} {mode}"),
        order,
        table: convergence_study(&c, dts, Reference::Exact, false),
    }
}

fn criterion_4(studies: &[Study], extra: &[Study]) -> Verdict {
    let mut v = Verdict::new(4);
    for s in studies {
        let tol = if s.order == 4 { 0.25 } else { 0.15 };
        let table = match &s.table {
            Ok(t) => t,
            Err(e) => {
                v.check(false, format!("{}: study failed: {e}", s.label));
                continue;
            }
        };
        let errs: Vec<String> = table.errors(Variant::M, Norm::LinfH1).iter().map(|e| format!("{e:.2e}")).collect();
        v.note(format!("{}: err_linf_h1(m) = [{}]", s.label, errs.join(", ")));
        for n in Norm::ALL {
            let fit = table.slope_above(Variant::M, n, ERROR_FLOOR).unwrap();
            match fit.slope {
                Some(p) => v.check(
                    (p - s.order as f64).abs() <= tol,
                    format!("{} {}: slope {p:.3} over {} points above 1e-11 (target {} +- {tol})", s.label, n.label(), fit.used.len(), s.order),
                ),
                None => v.check(
                    false,
                    format!("{} {}: {} point(s) above 1e-11, slope not measurable", s.label, n.label(), fit.used.len()),
                ),
            }
        }
    }
    for s in extra {
        if let Ok(t) = &s.table {
            for n in Norm::ALL {
                let p = t.slope(Variant::M, n).map_or("n/a".into(), |p| format!("{p:.3}"));
                let errs: Vec<String> = t.errors(Variant::M, n).iter().map(|e| format!("{e:.2e}")).collect();
                v.note(format!("{} {}: slope {p} over dt = {:?}, errors [{}]", s.label, n.label(), t.dts(), errs.join(", ")));
            }
        }
    }
    v.summary = if v.passed {
        "all fitted slopes within tolerance".into()
    } else {
        "some slopes out of tolerance or not measurable (see lines above)".into()
    };
    v
}

fn criterion_5(studies: &[Study]) -> Verdict {
    let mut v = Verdict::new(5);
    let mut worst = f64::INFINITY;
    for s in studies {
        let Ok(t) = &s.table else {
            v.check(false, format!("{}: study failed", s.label));
            continue;
        };
        let xs: Vec<String> = t.xi_defects().iter().map(|e| format!("{e:.2e}")).collect();
        match llg_gsav::experiments::slope_fit(&t.dts(), &t.xi_defects()) {
            Ok(p) => {
                worst = worst.min(p);
                v.check(p >= 0.9, format!("{}: max|1-xi| = [{}], slope {p:.3}", s.label, xs.join(", ")));
            }
            Err(e) => v.check(false, format!("{}: max|1-xi| = [{}], {e}", s.label, xs.join(", "))),
        }
    }
    v.summary = format!("smallest max|1-xi| slope {worst:.3} (need >= 0.9)");
    v
}

// ---------------------------------------------------------------- criterion 1

fn criterion_1(log: &LengthLog) -> Verdict {
    let mut v = Verdict::new(1);
    v.check(
        log.violations.is_empty(),
        format!("{} run(s) stopped on the length check", log.violations.len()),
    );
    for line in &log.violations {
        v.note(line.clone());
    }
    v.check(
        log.worst <= LENGTH_TOLERANCE,
        format!("{} completed runs with outputs, worst max | |m| - 1 | = {:.2e}", log.runs, log.worst),
    );
    v.note("every step of every run is checked against 1e-12 inside the driver; convergence studies included".into());
    v.summary = format!("max | |m| - 1 | = {:.2e} over all steps (tol 1e-12)", log.worst);
    v
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut log = LengthLog::default();
    let mut verdicts = vec![criterion_6(), criterion_7(), criterion_10()];
    verdicts.push(criterion_8(&mut log));
    eprintln!("[acceptance] fast criteria done ({})", secs(start));

    let blowup: Vec<_> = [32, 64, 128].into_iter().map(|n| (n, blowup_one(n, 1e-5, &mut log))).collect();
    eprintln!("[acceptance] blow-up runs done ({})", secs(start));
    verdicts.push(criterion_2(&mut log, &blowup[1].1));
    verdicts.push(criterion_3(&mut log, blowup[1].1.as_ref().ok()));
    verdicts.push(criterion_9(&mut log, &blowup));

    let mut studies = Vec::new();
    for beta in [0.0, 0.5] {
        for order in 1..=4 {
            studies.push(manufactured_study(order, beta, "explicit", &MANUFACTURED_DTS));
            eprintln!("[acceptance] study {} done ({})", studies.last().unwrap().label, secs(start));
        }
    }
    studies.push(manufactured_study(2, 0.5, "semi_implicit", &MANUFACTURED_DTS));
    eprintln!("[acceptance] semi-implicit study done ({})", secs(start));
    let coarse = [4e-3, 2e-3, 1e-3];
    let extra: Vec<Study> = [0.0, 0.5]
        .into_iter()
        .map(|b| {
            let mut s = manufactured_study(4, b, "explicit", &coarse);
            s.label = format!("{} coarse ladder (informational)", s.label);
            s
        })
        .collect();
    for s in studies.iter().chain(&extra) {
        if let Err(e) = &s.table {
            log.record_err(&s.label, e);
        }
    }
    verdicts.push(criterion_4(&studies, &extra));
    verdicts.push(criterion_5(&studies));
    verdicts.push(criterion_1(&log));

    verdicts.sort_by_key(|v| v.id);
    let mut failed = 0;
    for v in &verdicts {
        println!("{} criterion {}: {}", if v.passed { "PASS" } else { "FAIL" }, v.id, v.summary);
        for d in &v.details {
            println!("    {d}");
        }
        failed += usize::from(!v.passed);
    }
    println!("acceptance: {} passed, {failed} failed ({})", verdicts.len() - failed, secs(start));
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
