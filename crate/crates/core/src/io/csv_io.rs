use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::experiments::{ErrorRecord, NormPair, TimeSeriesRow};

/// First line of a time-series file.
pub const TIMESERIES_VERSION: &str = "# llg-gsav timeseries v1";
pub const TIMESERIES_HEADER: [&str; 11] = [
    "n",
    "t",
    "E",
    "R",
    "xi",
    "eta",
    "cross",
    "min_hat",
    "max_len_defect",
    "sup_grad_norm",
    "solver_iters",
];

pub const ERRORS_VERSION: &str = "# llg-gsav errors v1";
pub const ERRORS_HEADER: [&str; 9] = [
    "dt",
    "m_linf_h1",
    "m_l2_h2",
    "m_hat_linf_h1",
    "m_hat_l2_h2",
    "m_tilde_linf_h1",
    "m_tilde_l2_h2",
    "xi_defect",
    "samples",
];

/// 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_table(path: &Path, version: &str, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let io = |e: std::io::Error| Error::io(path, e);
    let mut out = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(out, "{version}").map_err(io)?;
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::io(path, std::io::Error::other(e));
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(&r).map_err(csv_err)?;
    }
    w.flush().map_err(io)
}

fn read_table(path: &Path, version: &str, header: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let bad = |reason: String| Error::Format {
        path: path.to_path_buf(),
        reason,
    };
    let first = text.lines().next().unwrap_or("");
    if first.trim_end() != version {
        return Err(bad(format!("expected version line '{version}', found '{first}'")));
    }
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let h = r.headers().map_err(|e| bad(e.to_string()))?;
    if h.iter().ne(header.iter().copied()) {
        return Err(bad(format!("unexpected header {:?}", h.iter().collect::<Vec<_>>())));
    }
    r.records().map(|rec| rec.map_err(|e| bad(e.to_string()))).collect()
}

fn field<T: std::str::FromStr>(path: &Path, rec: &csv::StringRecord, i: usize, name: &str) -> Result<T> {
    rec.get(i).and_then(|s| s.trim().parse().ok()).ok_or_else(|| Error::Format {
        path: path.to_path_buf(),
        reason: format!("line {}: bad value for '{name}'", rec.position().map_or(0, |p| p.line())),
    })
}

pub fn write_csv(path: &Path, rows: &[TimeSeriesRow]) -> Result<()> {
    write_table(
        path,
        TIMESERIES_VERSION,
        &TIMESERIES_HEADER,
        rows.iter().map(|r| {
            let mut v = vec![r.n.to_string()];
            v.extend(
                [r.t, r.energy, r.r, r.xi, r.eta, r.cross, r.min_hat, r.max_len_defect, r.sup_grad_norm]
                    .map(fmt_f64),
            );
            v.push(r.solver_iters.to_string());
            v
        }),
    )
}

pub fn read_csv(path: &Path) -> Result<Vec<TimeSeriesRow>> {
    read_table(path, TIMESERIES_VERSION, &TIMESERIES_HEADER)?
        .iter()
        .map(|rec| {
            let f = |i: usize| field::<f64>(path, rec, i, TIMESERIES_HEADER[i]);
            Ok(TimeSeriesRow {
                n: field(path, rec, 0, "n")?,
                t: f(1)?,
                energy: f(2)?,
                r: f(3)?,
                xi: f(4)?,
                eta: f(5)?,
                cross: f(6)?,
                min_hat: f(7)?,
                max_len_defect: f(8)?,
                sup_grad_norm: f(9)?,
                solver_iters: field(path, rec, 10, "solver_iters")?,
            })
        })
        .collect()
}

pub fn write_errors_csv(path: &Path, records: &[ErrorRecord]) -> Result<()> {
    write_table(
        path,
        ERRORS_VERSION,
        &ERRORS_HEADER,
        records.iter().map(|r| {
            let mut v: Vec<String> = [
                r.dt,
                r.m.linf_h1,
                r.m.l2_h2,
                r.m_hat.linf_h1,
                r.m_hat.l2_h2,
                r.m_tilde.linf_h1,
                r.m_tilde.l2_h2,
                r.xi_defect,
            ]
            .map(fmt_f64)
            .to_vec();
            v.push(r.samples.to_string());
            v
        }),
    )
}

pub fn read_errors_csv(path: &Path) -> Result<Vec<ErrorRecord>> {
    read_table(path, ERRORS_VERSION, &ERRORS_HEADER)?
        .iter()
        .map(|rec| {
            let f = |i: usize| field::<f64>(path, rec, i, ERRORS_HEADER[i]);
            Ok(ErrorRecord {
                dt: f(0)?,
                m: NormPair { linf_h1: f(1)?, l2_h2: f(2)? },
                m_hat: NormPair { linf_h1: f(3)?, l2_h2: f(4)? },
                m_tilde: NormPair { linf_h1: f(5)?, l2_h2: f(6)? },
                xi_defect: f(7)?,
                samples: field(path, rec, 8, "samples")?,
            })
        })
        .collect()
}
