use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::RunConfig;
use crate::model::{problem_registry, ProblemOptions, ProblemParams};
use crate::spectral::GridSpec;
use crate::stepper::{CrossTerm, SolverOptions};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    dims: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    modes: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lengths: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    origin: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    #[serde(rename = "S", skip_serializing_if = "Option::is_none")]
    s: Option<f64>,
    #[serde(rename = "K0", skip_serializing_if = "Option::is_none")]
    k0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    w: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dt: Option<f64>,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemSection {
    kind: String,
    #[serde(default)]
    options: ProblemOptions,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    directory: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cadence: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    snapshot_times: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolverSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_iter: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    restart: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dealias: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cross_term: Option<CrossTerm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    problem: ProblemSection,
    #[serde(default)]
    grid: GridSection,
    #[serde(default)]
    params: ParamsSection,
    #[serde(default)]
    output: OutputSection,
    #[serde(default)]
    solver: SolverSection,
}

/// A parsed and validated configuration file. Keys left out take the
/// defaults of the selected problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigFile {
    pub run: RunConfig,
    /// Output directory; `None` means "decided by the caller".
    pub directory: Option<PathBuf>,
}

fn pair<T: Copy>(v: &[T], dims: usize, key: &str, fill: T) -> Result<[T; 2]> {
    match (dims, v.len()) {
        (1, 1) => Ok([v[0], fill]),
        (2, 1) => Ok([v[0], v[0]]),
        (2, 2) => Ok([v[0], v[1]]),
        _ => Err(Error::Config(format!(
            "grid.{key} needs {dims} value(s), got {}",
            v.len()
        ))),
    }
}

impl ConfigFile {
    pub fn new(run: RunConfig) -> Self {
        ConfigFile { run, directory: None }
    }

    /// Parses TOML text; `source` names the document in error messages.
    pub fn parse(text: &str, source: &Path) -> Result<Self> {
        let doc: Document = toml::from_str(text).map_err(|e| Error::Format {
            path: source.to_path_buf(),
            reason: e.to_string().trim_end().to_string(),
        })?;
        Self::resolve(doc)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    fn resolve(doc: Document) -> Result<Self> {
        let kind = doc.problem.kind.as_str();
        if !problem_registry().contains(kind) {
            return Err(Error::Config(format!(
                "problem.kind: unknown problem '{kind}' (available: {})",
                problem_registry().names().collect::<Vec<_>>().join(", ")
            )));
        }
        let mut run = RunConfig::preset(kind)?;
        run.problem_options = doc.problem.options;

        let g = doc.grid;
        let dims = g.dims.unwrap_or(run.grid.dims());
        let modes = match &g.modes {
            Some(m) => pair(m, dims, "modes", 1)?,
            None => run.grid.modes(),
        };
        let lengths = match &g.lengths {
            Some(l) => pair(l, dims, "lengths", 1.0)?,
            None => run.grid.lengths(),
        };
        let origin = match &g.origin {
            Some(o) => pair(o, dims, "origin", 0.0)?,
            None => run.grid.origin(),
        };
        run.grid = match dims {
            1 => GridSpec::new_1d(modes[0], lengths[0], origin[0]),
            2 => GridSpec::new_2d(modes, lengths, origin),
            d => Err(Error::Config(format!("grid.dims must be 1 or 2, got {d}"))),
        }
        .map_err(|e| match e {
            Error::Usage(m) => Error::Config(format!("grid: {m}")),
            other => other,
        })?;

        let p = doc.params;
        let d = run.params;
        run.params = ProblemParams {
            gamma: p.gamma.unwrap_or(d.gamma),
            beta: p.beta.unwrap_or(d.beta),
            s: p.s.unwrap_or(d.s),
            k0: p.k0.unwrap_or(d.k0),
            w: p.w.unwrap_or(d.w),
            dt: p.dt.unwrap_or(d.dt),
            t_final: p.t.unwrap_or(d.t_final),
            order: p.order.unwrap_or(d.order),
        };
        if let Some(m) = p.mode {
            run.mode = m;
        }

        let o = doc.output;
        if let Some(c) = o.cadence {
            run.cadence = c;
        }
        if let Some(t) = o.snapshot_times {
            run.snapshot_times = t;
        }

        let s = doc.solver;
        let ds = SolverOptions::default();
        run.solver = SolverOptions {
            tol: s.tol.unwrap_or(ds.tol),
            max_iter: s.max_iter.unwrap_or(ds.max_iter),
            restart: s.restart.unwrap_or(ds.restart),
        };
        run.dealias = s.dealias.unwrap_or(run.dealias);
        run.cross_term = s.cross_term.unwrap_or(run.cross_term);

        run.validate()?;
        Ok(ConfigFile {
            run,
            directory: o.directory,
        })
    }

    /// Fully resolved document: every key is written out.
    pub fn to_toml(&self) -> String {
        let r = &self.run;
        let g = &r.grid;
        let take = |a: [f64; 2]| a[..g.dims()].to_vec();
        let doc = Document {
            problem: ProblemSection {
                kind: r.problem.clone(),
                options: r.problem_options.clone(),
            },
            grid: GridSection {
                dims: Some(g.dims()),
                modes: Some(g.modes()[..g.dims()].to_vec()),
                lengths: Some(take(g.lengths())),
                origin: Some(take(g.origin())),
            },
            params: ParamsSection {
                gamma: Some(r.params.gamma),
                beta: Some(r.params.beta),
                s: Some(r.params.s),
                k0: Some(r.params.k0),
                w: Some(r.params.w),
                order: Some(r.params.order),
                dt: Some(r.params.dt),
                t: Some(r.params.t_final),
                mode: Some(r.mode.clone()),
            },
            output: OutputSection {
                directory: self.directory.clone(),
                cadence: Some(r.cadence),
                snapshot_times: Some(r.snapshot_times.clone()),
            },
            solver: SolverSection {
                tol: Some(r.solver.tol),
                max_iter: Some(r.solver.max_iter),
                restart: Some(r.solver.restart),
                dealias: Some(r.dealias),
                cross_term: Some(r.cross_term),
            },
        };
        toml::to_string(&doc).expect("config document serializes")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml()).map_err(|e| Error::io(path, e))
    }
}
