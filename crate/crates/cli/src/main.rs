use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use llg_gsav::experiments::{
    blowup_study, convergence_study, run_simulation, self_check, ConvergenceTable, Norm, Reference, Variant,
    ERROR_FLOOR,
};
use llg_gsav::io::{load_reference, write_errors_csv, write_meta, write_run, ConfigFile, Meta};
use llg_gsav::stepper::CrossTerm;
use llg_gsav::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "llg-gsav", version, about = "IMEX-GSAV multistep solver for the Landau-Lifshitz equation")]
struct Cli {
    /// Log progress (repeat for more detail).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a single simulation.
    Run {
        /// TOML configuration file.
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Time-step convergence study; writes errors.csv and prints fitted slopes.
    Converge {
        config: PathBuf,
        /// Comma-separated time steps in geometric progression.
        #[arg(long, value_delimiter = ',', required = true)]
        dts: Vec<f64>,
        /// Directory of .llf snapshots from a finer run to compare against.
        #[arg(long)]
        reference_dir: Option<PathBuf>,
        /// Run the time steps concurrently.
        #[arg(long)]
        parallel: bool,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run the configuration at several resolutions.
    Blowup {
        config: PathBuf,
        /// Comma-separated numbers of modes per direction.
        #[arg(long, value_delimiter = ',', default_values_t = [32usize, 64, 128])]
        modes: Vec<usize>,
        #[arg(long)]
        parallel: bool,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run the built-in oracle and invariant checks.
    Check,
}

/// Values that replace the corresponding configuration keys.
#[derive(Args, Debug, Default)]
struct Overrides {
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Time step.
    #[arg(long)]
    dt: Option<f64>,
    /// Final time.
    #[arg(long = "T", alias = "t-final")]
    t_final: Option<f64>,
    /// Scheme order, 1 to 5.
    #[arg(long)]
    order: Option<usize>,
    /// Precession coefficient.
    #[arg(long)]
    beta: Option<f64>,
    /// Damping coefficient.
    #[arg(long)]
    gamma: Option<f64>,
    /// Stabilization constant (explicit mode only).
    #[arg(long = "S")]
    s: Option<f64>,
    /// Energy shift of the auxiliary variable.
    #[arg(long = "K0")]
    k0: Option<f64>,
    /// Exponent of the correction shift.
    #[arg(long)]
    w: Option<u32>,
    /// Solver mode: explicit or semi_implicit.
    #[arg(long)]
    mode: Option<String>,
    /// Modes per direction of a square grid.
    #[arg(long)]
    grid: Option<usize>,
    /// Steps between time-series rows.
    #[arg(long)]
    cadence: Option<usize>,
    /// Comma-separated times at which to store the field.
    #[arg(long, value_delimiter = ',')]
    snapshot_times: Option<Vec<f64>>,
    /// Apply the 2/3 rule to nonlinear products.
    #[arg(long)]
    dealias: Option<bool>,
    /// unprojected or projected.
    #[arg(long)]
    cross_term: Option<String>,
}

impl Overrides {
    fn apply(&self, mut cfg: ConfigFile) -> Result<ConfigFile> {
        let r = &mut cfg.run;
        let p = &mut r.params;
        macro_rules! set {
            ($src:expr, $dst:expr) => {
                if let Some(v) = $src.clone() {
                    $dst = v;
                }
            };
        }
        set!(self.dt, p.dt);
        set!(self.t_final, p.t_final);
        set!(self.order, p.order);
        set!(self.beta, p.beta);
        set!(self.gamma, p.gamma);
        set!(self.s, p.s);
        set!(self.k0, p.k0);
        set!(self.w, p.w);
        set!(self.mode, r.mode);
        set!(self.cadence, r.cadence);
        set!(self.snapshot_times, r.snapshot_times);
        set!(self.dealias, r.dealias);
        if let Some(ct) = &self.cross_term {
            r.cross_term = match ct.as_str() {
                "unprojected" => CrossTerm::Unprojected,
                "projected" => CrossTerm::Projected,
                other => {
                    return Err(Error::Config(format!(
                        "--cross-term must be 'unprojected' or 'projected', got '{other}'"
                    )))
                }
            };
        }
        if let Some(n) = self.grid {
            let g = r.grid;
            r.grid = match g.dims() {
                1 => llg_gsav::spectral::GridSpec::new_1d(n, g.lengths()[0], g.origin()[0]),
                _ => llg_gsav::spectral::GridSpec::new_2d([n, n], g.lengths(), g.origin()),
            }
            .map_err(|e| Error::Config(format!("--grid: {e}")))?;
        }
        if let Some(o) = &self.out {
            cfg.directory = Some(o.clone());
        }
        cfg.run.validate()?;
        Ok(cfg)
    }
}

fn load(config: &Path, overrides: &Overrides) -> Result<ConfigFile> {
    // An unreadable config is bad input, not a failed computation.
    let cfg = ConfigFile::load(config).map_err(|e| match e {
        Error::Io { .. } => Error::Config(e.to_string()),
        other => other,
    })?;
    overrides.apply(cfg)
}

fn out_dir(cfg: &ConfigFile) -> PathBuf {
    cfg.directory
        .clone()
        .unwrap_or_else(|| PathBuf::from("out").join(&cfg.run.problem))
}

fn cmd_run(cfg: ConfigFile) -> Result<()> {
    let start = Instant::now();
    let out = run_simulation(&cfg.run)?;
    let dir = out_dir(&cfg);
    let written = write_run(&dir, &cfg, &out, start.elapsed().as_secs_f64())?;
    let last = out.series.last().expect("at least the initial row");
    println!(
        "completed {} steps to t = {} ({:.1} s): E = {:.6e}, R = {:.6e}, max | |m| - 1 | = {:.2e}",
        out.reports.len(),
        out.final_time,
        start.elapsed().as_secs_f64(),
        last.energy,
        last.r,
        out.max_length_defect
    );
    println!("wrote {} files to {}", written.len() * 2, dir.display());
    Ok(())
}

fn print_slopes(table: &ConvergenceTable) {
    println!("{:>12} {:>14} {:>14} {:>14}", "dt", "m linf_h1", "m l2_h2", "max|1-xi|");
    for r in &table.records {
        println!("{:>12.4e} {:>14.6e} {:>14.6e} {:>14.6e}", r.dt, r.m.linf_h1, r.m.l2_h2, r.xi_defect);
    }
    println!();
    println!("{:<10} {:<8} {:>10} {:>22}", "field", "norm", "slope", "slope above 1e-11");
    for v in Variant::ALL {
        for n in Norm::ALL {
            let all = table.slope(v, n).map_or_else(|e| format!("({e})"), |s| format!("{s:.4}"));
            let above = match table.slope_above(v, n, ERROR_FLOOR) {
                Ok(f) => match f.slope {
                    Some(s) => format!("{s:.4} ({} pts)", f.used.len()),
                    None => format!("n/a ({} pts)", f.used.len()),
                },
                Err(e) => e.to_string(),
            };
            println!("{:<10} {:<8} {:>10} {:>22}", v.label(), n.label(), all, above);
        }
    }
    if let Ok(s) = llg_gsav::experiments::slope_fit(&table.dts(), &table.xi_defects()) {
        println!("{:<10} {:<8} {:>10.4}", "xi", "max", s);
    }
}

fn cmd_converge(cfg: ConfigFile, dts: &[f64], reference_dir: Option<&Path>, parallel: bool) -> Result<()> {
    let start = Instant::now();
    let snaps;
    let reference = match reference_dir {
        Some(d) => {
            snaps = load_reference(d, &cfg.run.grid, None)?;
            Reference::FineRun(&snaps)
        }
        None => Reference::Exact,
    };
    let table = convergence_study(&cfg.run, dts, reference, parallel)?;
    let dir = out_dir(&cfg);
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let p = dir.join("errors.csv");
    write_errors_csv(&p, &table.records)?;
    write_meta(&p, &Meta::new(cfg.to_toml(), start.elapsed().as_secs_f64()))?;
    print_slopes(&table);
    println!("wrote {}", p.display());
    Ok(())
}

fn cmd_blowup(cfg: ConfigFile, modes: &[usize], parallel: bool) -> Result<()> {
    let start = Instant::now();
    let runs = blowup_study(&cfg.run, modes, parallel)?;
    let dir = out_dir(&cfg);
    println!("{:>6} {:>16} {:>18} {:>12}", "N", "max sup|grad m|", "origin deviation", "min m3 near");
    for r in &runs {
        let mut c = cfg.clone();
        c.run.grid = llg_gsav::spectral::GridSpec::new_2d([r.modes; 2], cfg.run.grid.lengths(), cfg.run.grid.origin())?;
        let sub = dir.join(format!("N{}", r.modes));
        write_run(&sub, &c, &r.output, start.elapsed().as_secs_f64())?;
        let near = r.near_origin_m3.iter().copied().fold(f64::NAN, f64::max);
        println!(
            "{:>6} {:>16.6e} {:>18} {:>12}",
            r.modes,
            r.max_sup_grad,
            r.origin_deviation.map_or("n/a".into(), |d| format!("{d:.3e}")),
            if near.is_nan() { "n/a".into() } else { format!("{near:.4}") }
        );
    }
    println!("wrote results to {}", dir.display());
    Ok(())
}

fn cmd_check() -> Result<bool> {
    let mut ok = true;
    for c in self_check() {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        ok &= c.passed;
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let result = match cli.command {
        Command::Run { config, overrides } => load(&config, &overrides).and_then(cmd_run),
        Command::Converge {
            config,
            dts,
            reference_dir,
            parallel,
            overrides,
        } => load(&config, &overrides).and_then(|c| cmd_converge(c, &dts, reference_dir.as_deref(), parallel)),
        Command::Blowup {
            config,
            modes,
            parallel,
            overrides,
        } => load(&config, &overrides).and_then(|c| cmd_blowup(c, &modes, parallel)),
        Command::Check => match cmd_check() {
            Ok(true) => Ok(()),
            Ok(false) => return ExitCode::from(2),
            Err(e) => Err(e),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 1 } else { 2 })
        }
    }
}
