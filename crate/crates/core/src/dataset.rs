//! Tabular dataset ingestion: CSV loading, missing-value filtering, label
//! encoding, stratified train/test splitting and min-max scaling.

use std::collections::HashMap;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Rows of string cells exactly as read from disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDataset {
    pub rows: Vec<Vec<String>>,
    pub column_count: usize,
    pub label_column: usize,
}

impl RawDataset {
    /// Builds a raw dataset, checking that rows are rectangular.
    pub fn new(rows: Vec<Vec<String>>, label_column: usize) -> Result<Self> {
        let column_count = rows.first().map(Vec::len).ok_or(Error::EmptyDataset)?;
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != column_count) {
            return Err(Error::RaggedRow {
                row,
                expected: column_count,
                found: r.len(),
            });
        }
        if label_column >= column_count {
            return Err(Error::LabelColumnOutOfRange {
                label_column,
                column_count,
            });
        }
        Ok(Self {
            rows,
            column_count,
            label_column,
        })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Removes the given columns (identifier columns and the like), keeping
    /// the label column index pointing at the same logical column.
    pub fn drop_columns(&self, columns: &[usize]) -> Result<RawDataset> {
        if let Some(&c) = columns.iter().find(|&&c| c >= self.column_count) {
            return Err(Error::InvalidParameter(format!(
                "drop column {c} out of range for {} columns",
                self.column_count
            )));
        }
        if columns.contains(&self.label_column) {
            return Err(Error::InvalidParameter(
                "cannot drop the label column".into(),
            ));
        }
        let keep: Vec<usize> = (0..self.column_count)
            .filter(|c| !columns.contains(c))
            .collect();
        let label_column = keep
            .iter()
            .position(|&c| c == self.label_column)
            .expect("label column is kept");
        let rows = self
            .rows
            .iter()
            .map(|r| keep.iter().map(|&c| r[c].clone()).collect())
            .collect();
        Ok(RawDataset {
            rows,
            column_count: keep.len(),
            label_column,
        })
    }
}

fn is_numeric(cell: &str) -> bool {
    cell.parse::<f64>().is_ok()
}

/// A first row is a header when one of its feature cells is non-numeric
/// (and not the missing marker), or when its label cell is non-numeric and
/// never reappears as a label further down.
fn looks_like_header(rows: &[Vec<String>], label_column: usize, missing_marker: &str) -> bool {
    let Some(first) = rows.first() else {
        return false;
    };
    let feature_text = first
        .iter()
        .enumerate()
        .any(|(c, v)| c != label_column && v != missing_marker && !is_numeric(v));
    if feature_text {
        return true;
    }
    match first.get(label_column) {
        Some(label) if !is_numeric(label) => !rows[1..]
            .iter()
            .any(|r| r.get(label_column) == Some(label)),
        _ => false,
    }
}

/// Reads a comma-separated file. Blank lines are skipped and a single header
/// line is detected and discarded.
pub fn load_csv(path: impl AsRef<Path>, label_column: usize, missing_marker: &str) -> Result<RawDataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        rows.push(record.iter().map(str::to_owned).collect::<Vec<_>>());
    }
    if looks_like_header(&rows, label_column, missing_marker) {
        rows.remove(0);
    }
    RawDataset::new(rows, label_column)
}

/// Keeps only rows with no cell equal to `missing_marker`, preserving order.
pub fn drop_missing(raw: &RawDataset, missing_marker: &str) -> Result<RawDataset> {
    let rows: Vec<Vec<String>> = raw
        .rows
        .iter()
        .filter(|r| !r.iter().any(|c| c == missing_marker))
        .cloned()
        .collect();
    if rows.is_empty() {
        return Err(Error::NoCompleteInstances);
    }
    Ok(RawDataset {
        rows,
        column_count: raw.column_count,
        label_column: raw.label_column,
    })
}

/// Numeric classification dataset. Features are stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    features: Vec<f64>,
    labels: Vec<usize>,
    n_features: usize,
    n_classes: usize,
    class_names: Vec<String>,
}

impl Dataset {
    /// Builds a dataset from row-major features and class indices.
    pub fn from_parts(
        name: impl Into<String>,
        features: Vec<f64>,
        labels: Vec<usize>,
        n_features: usize,
        n_classes: usize,
    ) -> Result<Self> {
        if n_features == 0 {
            return Err(Error::InvalidParameter("dataset needs at least one feature".into()));
        }
        if features.len() != labels.len() * n_features {
            return Err(Error::LengthMismatch {
                left: features.len(),
                right: labels.len() * n_features,
            });
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= n_classes) {
            return Err(Error::DimensionMismatch(format!(
                "label {bad} outside 0..{n_classes}"
            )));
        }
        Ok(Self {
            name: name.into(),
            features,
            labels,
            n_features,
            n_classes,
            class_names: (0..n_classes).map(|c| c.to_string()).collect(),
        })
    }

    pub fn n_instances(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Original label strings, indexed by class.
    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.features.chunks_exact(self.n_features)
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Copies the given rows, in order, into a new dataset sharing the class
    /// space of `self`.
    pub fn select_rows(&self, indices: &[usize]) -> Dataset {
        let mut features = Vec::with_capacity(indices.len() * self.n_features);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            features.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        Dataset {
            name: self.name.clone(),
            features,
            labels,
            n_features: self.n_features,
            n_classes: self.n_classes,
            class_names: self.class_names.clone(),
        }
    }
}

/// Parses feature cells and maps label strings to class indices in order of
/// first appearance.
pub fn encode(raw: &RawDataset, name: impl Into<String>) -> Result<Dataset> {
    if raw.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let label_column = raw.label_column;
    let n_features = raw.column_count - 1;
    if n_features == 0 {
        return Err(Error::InvalidParameter("dataset needs at least one feature".into()));
    }
    let mut features = Vec::with_capacity(raw.len() * n_features);
    let mut labels = Vec::with_capacity(raw.len());
    let mut class_index: HashMap<&str, usize> = HashMap::new();
    let mut class_names = Vec::new();
    for (r, row) in raw.rows.iter().enumerate() {
        for (c, cell) in row.iter().enumerate() {
            if c == label_column {
                continue;
            }
            let v = cell.parse::<f64>().map_err(|_| Error::NonNumeric {
                row: r,
                column: c,
                value: cell.clone(),
            })?;
            features.push(v);
        }
        let label = row[label_column].as_str();
        let next = class_index.len();
        let idx = *class_index.entry(label).or_insert_with(|| {
            class_names.push(label.to_owned());
            next
        });
        labels.push(idx);
    }
    if class_names.len() < 2 {
        return Err(Error::TooFewClasses(class_names.len()));
    }
    Ok(Dataset {
        name: name.into(),
        features,
        labels,
        n_features,
        n_classes: class_names.len(),
        class_names,
    })
}

/// Disjoint, exhaustive train/test partition of instance indices, both sorted
/// ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    pub seed: u64,
}

/// Stratified split: each class is shuffled independently and contributes a
/// share of the test set proportional to its size. Shares are floored and
/// the remainder goes to the classes with the largest fractional parts, so
/// the total is `round(test_fraction * n)`. Every class keeps at least one
/// training instance.
pub fn stratified_split(ds: &Dataset, test_fraction: f64, seed: u64) -> Result<SplitIndices> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "test fraction {test_fraction} must lie in (0, 1)"
        )));
    }
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); ds.n_classes()];
    for (i, &l) in ds.labels().iter().enumerate() {
        members[l].push(i);
    }
    if let Some((class, m)) = members.iter().enumerate().find(|(_, m)| m.len() < 2) {
        return Err(Error::CannotStratify {
            class,
            size: m.len(),
        });
    }

    let n = ds.n_instances();
    let target = (test_fraction * n as f64).round() as usize;
    let exact: Vec<f64> = members.iter().map(|m| test_fraction * m.len() as f64).collect();
    let mut counts: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let mut order: Vec<usize> = (0..members.len()).collect();
    // Stable sort: equal remainders favour the lower class index.
    order.sort_by(|&a, &b| {
        let fa = exact[a] - exact[a].floor();
        let fb = exact[b] - exact[b].floor();
        fb.total_cmp(&fa)
    });
    let mut remaining = target.saturating_sub(counts.iter().sum());
    for &c in order.iter().cycle().take(order.len() * 2) {
        if remaining == 0 {
            break;
        }
        if counts[c] + 1 < members[c].len() {
            counts[c] += 1;
            remaining -= 1;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::with_capacity(n - target);
    let mut test = Vec::with_capacity(target);
    for (m, &count) in members.iter_mut().zip(&counts) {
        m.shuffle(&mut rng);
        test.extend_from_slice(&m[..count]);
        train.extend_from_slice(&m[count..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(SplitIndices { train, test, seed })
}

/// Rescales every feature to `(v - min) / (max - min)` using statistics of
/// the training rows only. Columns constant over the training rows become 0;
/// test values outside the training range are left unclamped.
///
/// Panics if the split references rows outside `ds`.
pub fn minmax_normalize(ds: &Dataset, split: &SplitIndices) -> Dataset {
    let d = ds.n_features();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for &i in &split.train {
        for (j, &v) in ds.row(i).iter().enumerate() {
            lo[j] = lo[j].min(v);
            hi[j] = hi[j].max(v);
        }
    }
    let mut out = ds.clone();
    for row in out.features.chunks_exact_mut(d) {
        for (j, v) in row.iter_mut().enumerate() {
            let range = hi[j] - lo[j];
            *v = if range > 0.0 { (*v - lo[j]) / range } else { 0.0 };
        }
    }
    out
}
