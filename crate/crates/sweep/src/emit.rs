//! Report files: JSON lines, CSV summary and two-column plot data.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::SweepError;
use crate::fit::{Quantity, ScalingFit};
use crate::record::SweepRecord;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedFit {
    pub quantity: Quantity,
    pub fit: ScalingFit,
}

/// Paths of everything [`emit_report`] wrote.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReportFiles {
    pub jsonl: PathBuf,
    pub csv: PathBuf,
    pub fits: PathBuf,
    pub plots: Vec<PathBuf>,
}

pub const CSV_COLUMNS: [&str; 12] = [
    "nu",
    "status",
    "eps_U",
    "eps_u",
    "F_test",
    "F_max",
    "upper_bound",
    "upper_bound_pass",
    "term_i_pass",
    "hard_pass",
    "eps_U_nu13",
    "eps_U_log2sq",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_jsonl<W: Write>(mut w: W, records: &[SweepRecord]) -> Result<(), SweepError> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_jsonl<R: BufRead>(r: R) -> Result<Vec<SweepRecord>, SweepError> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(serde_json::from_str(&line)?);
        }
    }
    Ok(out)
}

pub fn load_records(path: &Path) -> Result<Vec<SweepRecord>, SweepError> {
    read_jsonl(BufReader::new(File::open(path)?))
}

pub fn write_csv<W: Write>(w: W, records: &[SweepRecord]) -> Result<(), SweepError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_COLUMNS)?;
    for r in records {
        let status = serde_json::to_value(r.status)?;
        out.write_record([
            r.nu.to_string(),
            status.as_str().unwrap_or_default().to_string(),
            opt(r.eps_big()),
            opt(r.eps_u()),
            opt(r.f_test()),
            opt(r.f_max()),
            opt(r.upper_bound()),
            opt(r.upper_bound_pass()),
            opt(r.check("term_i_floor").map(|c| c.pass)),
            r.hard_pass.to_string(),
            opt(r.eps_big_nu13),
            opt(r.eps_big_log2sq),
        ])?;
    }
    out.flush()?;
    Ok(())
}

fn write_series(path: &Path, header: &str, points: &[(f64, f64)]) -> Result<(), SweepError> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "# {header}")?;
    for (x, y) in points {
        writeln!(w, "{x:e} {y:e}")?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `<prefix>.jsonl`, `<prefix>.csv`, `<prefix>_fits.json` and one
/// `<prefix>_<series>.dat` file per plotted series into `dir`.
pub fn emit_report(records: &[SweepRecord], fits: &[NamedFit], dir: &Path, prefix: &str) -> Result<ReportFiles, SweepError> {
    fs::create_dir_all(dir)?;
    let files = ReportFiles {
        jsonl: dir.join(format!("{prefix}.jsonl")),
        csv: dir.join(format!("{prefix}.csv")),
        fits: dir.join(format!("{prefix}_fits.json")),
        plots: Vec::new(),
    };
    let mut w = BufWriter::new(File::create(&files.jsonl)?);
    write_jsonl(&mut w, records)?;
    w.flush()?;
    write_csv(File::create(&files.csv)?, records)?;
    fs::write(&files.fits, serde_json::to_string_pretty(fits)? + "\n")?;

    let measures: [(&str, fn(&SweepRecord) -> Option<f64>); 4] = [
        ("eps_U", |r| r.eps_big()),
        ("eps_u", |r| r.eps_u()),
        ("F_test", |r| r.f_test()),
        ("F_max", |r| r.f_max()),
    ];
    let mut plots = Vec::new();
    for (name, get) in measures {
        let raw: Vec<(f64, f64)> = records.iter().filter_map(|r| get(r).map(|v| (r.nu, v))).collect();
        let series: [(String, String, Vec<(f64, f64)>); 3] = [
            (name.to_string(), format!("nu {name}"), raw.clone()),
            (
                format!("{name}_log2sq"),
                format!("nu {name}*(log2(1/nu))^2"),
                raw.iter().filter(|(n, _)| *n < 1.0).map(|&(n, v)| (n, v * (1.0 / n).log2().powi(2))).collect(),
            ),
            (
                format!("{name}_nu13"),
                format!("nu {name}*nu^(-1/3)"),
                raw.iter().map(|&(n, v)| (n, v * n.powf(-1.0 / 3.0))).collect(),
            ),
        ];
        for (suffix, header, pts) in series {
            let path = dir.join(format!("{prefix}_{suffix}.dat"));
            write_series(&path, &header, &pts)?;
            plots.push(path);
        }
    }
    let loglaw: Vec<(f64, f64)> = records
        .iter()
        .filter_map(|r| r.report.as_ref().and_then(|rep| rep.log_law_ratio).map(|v| (r.nu, v)))
        .collect();
    let path = dir.join(format!("{prefix}_loglaw.dat"));
    write_series(&path, "nu eps_U*(ln(1/nu))^2/0.042", &loglaw)?;
    plots.push(path);
    Ok(ReportFiles { plots, ..files })
}
