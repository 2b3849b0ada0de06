use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::optimizer::RunRecord;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

/// Score matrix in the form `dataset,<algorithm>,<algorithm>,...` with one
/// row per dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    pub datasets: Vec<String>,
    pub algorithms: Vec<String>,
    pub scores: Vec<Vec<f64>>,
}

pub fn parse_scores(text: &str) -> Result<ScoreTable> {
    let malformed = |msg: String| Error::DimensionMismatch(format!("score table: {msg}"));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| malformed(e.to_string()))?.clone();
    if header.len() < 3 {
        return Err(malformed("need a dataset column and at least two algorithms".into()));
    }
    let algorithms: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
    let mut datasets = Vec::new();
    let mut scores = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| malformed(e.to_string()))?;
        datasets.push(rec.get(0).unwrap_or_default().to_owned());
        let row = rec
            .iter()
            .skip(1)
            .map(|v| v.parse::<f64>().map_err(|_| malformed(format!("row {}: bad score {v:?}", i + 1))))
            .collect::<Result<Vec<f64>>>()?;
        scores.push(row);
    }
    if scores.is_empty() {
        return Err(malformed("no data rows".into()));
    }
    Ok(ScoreTable { datasets, algorithms, scores })
}

pub fn read_scores(path: impl AsRef<Path>) -> Result<ScoreTable> {
    let path = path.as_ref();
    parse_scores(&std::fs::read_to_string(path).map_err(io_err(path))?)
}

/// Writes `iteration,fitness` lines, iterations numbered from 1.
pub fn write_trace(path: impl AsRef<Path>, record: &RunRecord) -> Result<()> {
    let path = path.as_ref();
    let mut f = std::io::BufWriter::new(std::fs::File::create(path).map_err(io_err(path))?);
    writeln!(f, "iteration,fitness").map_err(io_err(path))?;
    for (t, v) in record.convergence.iter().enumerate() {
        writeln!(f, "{},{}", t + 1, v).map_err(io_err(path))?;
    }
    f.flush().map_err(io_err(path))
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, text).map_err(io_err(path))
}
