//! Repeated seeded runs per (dataset, variant), summary statistics and
//! Friedman ranking against the reference comparison algorithms.

pub mod baseline;
mod friedman;
mod io;
mod render;

use rayon::prelude::*;
use serde::Deserialize;

use crate::binarize::TransferKind;
use crate::dataset::{self, Dataset, SplitIndices};
use crate::error::{Error, Result};
use crate::knn::PairwiseDistances;
use crate::manifest::Manifest;
use crate::objective::{FitnessParams, WrapperObjective};
use crate::optimizer::{self, RunRecord};
use crate::sca::ScaConfig;

pub use friedman::{friedman_mean_ranks, friedman_statistic, rank_row, Direction, FriedmanStatistic, RankTable};
pub use io::{parse_scores, read_scores, write_text, write_trace, ScoreTable};
pub use render::{render_comparison, render_table, TableFormat, CSV_HEADER};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: String,
    pub variant: TransferKind,
    pub runs: usize,
    pub population: usize,
    pub iterations: usize,
    pub k: usize,
    pub alpha: f64,
    /// Initial amplitude of the sine cosine step.
    pub a: f64,
    pub test_fraction: f64,
    pub base_seed: u64,
    pub split_seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dataset: String::new(),
            variant: TransferKind::SShaped,
            runs: 30,
            population: 20,
            iterations: 300,
            k: 5,
            alpha: 0.99,
            a: 2.0,
            test_fraction: 0.2,
            base_seed: 1,
            split_seed: 1,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidParameter(format!("config: {e}")))
    }

    pub fn sca(&self) -> Result<ScaConfig> {
        ScaConfig::new(self.a, self.iterations, self.population)
    }

    pub fn fitness_params(&self) -> Result<FitnessParams> {
        FitnessParams::new(self.alpha)
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::InvalidParameter("runs must be at least 1".into()));
        }
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        self.sca()?;
        self.fitness_params()?;
        Ok(())
    }

    pub fn run_seed(&self, run: usize) -> u64 {
        self.base_seed.wrapping_add(run as u64)
    }
}

/// A dataset split and normalized once, shared by every run.
#[derive(Debug, Clone)]
pub struct PreparedData {
    pub name: String,
    pub split: SplitIndices,
    pub train: Dataset,
    pub test: Dataset,
    pub distances: PairwiseDistances,
}

impl PreparedData {
    pub fn new(ds: &Dataset, test_fraction: f64, split_seed: u64) -> Result<Self> {
        let split = dataset::stratified_split(ds, test_fraction, split_seed)?;
        let normalized = dataset::minmax_normalize(ds, &split);
        let train = normalized.select_rows(&split.train);
        let test = normalized.select_rows(&split.test);
        let distances = PairwiseDistances::new(&train, &test)?;
        Ok(Self { name: ds.name.clone(), split, train, test, distances })
    }

    pub fn n_features(&self) -> usize {
        self.train.n_features()
    }
}

/// Runs `config.runs` independent optimizations; run `i` is seeded with
/// `base_seed + i`. Runs execute on the current rayon pool and come back in
/// run order.
pub fn run_prepared(data: &PreparedData, config: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    config.validate()?;
    let sca = config.sca()?;
    let params = config.fitness_params()?;
    (0..config.runs)
        .into_par_iter()
        .map(|i| {
            let mut objective = WrapperObjective::new(&data.distances, config.k, params);
            optimizer::optimize(data.n_features(), &sca, config.variant, &mut objective, config.run_seed(i))
        })
        .collect()
}

pub fn run_batch(config: &ExperimentConfig, manifest: &Manifest) -> Result<Vec<RunRecord>> {
    config.validate()?;
    let ds = manifest.load_dataset(&config.dataset)?;
    let data = PreparedData::new(&ds, config.test_fraction, config.split_seed)?;
    run_prepared(&data, config)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub dataset: String,
    pub algorithm: String,
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
    pub mean_features: f64,
    pub std_features: f64,
}

/// Mean and sample standard deviation (zero for a single value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn summarize(dataset: &str, algorithm: &str, records: &[RunRecord]) -> Result<SummaryRow> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let acc: Vec<f64> = records.iter().map(|r| r.best_accuracy).collect();
    let feat: Vec<f64> = records.iter().map(|r| r.n_selected as f64).collect();
    let (mean_accuracy, std_accuracy) = mean_std(&acc);
    let (mean_features, std_features) = mean_std(&feat);
    Ok(SummaryRow {
        dataset: dataset.to_owned(),
        algorithm: algorithm.to_owned(),
        mean_accuracy,
        std_accuracy,
        mean_features,
        std_features,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Accuracy,
    Features,
}

impl Metric {
    pub fn direction(self) -> Direction {
        match self {
            Metric::Accuracy => Direction::Higher,
            Metric::Features => Direction::Lower,
        }
    }

    pub fn of(self, row: &SummaryRow) -> f64 {
        match self {
            Metric::Accuracy => row.mean_accuracy,
            Metric::Features => row.mean_features,
        }
    }
}

/// Datasets and algorithms in first-appearance order.
pub fn row_axes(rows: &[SummaryRow]) -> (Vec<String>, Vec<String>) {
    let mut datasets: Vec<String> = Vec::new();
    let mut algorithms: Vec<String> = Vec::new();
    for r in rows {
        if !datasets.contains(&r.dataset) {
            datasets.push(r.dataset.clone());
        }
        if !algorithms.contains(&r.algorithm) {
            algorithms.push(r.algorithm.clone());
        }
    }
    (datasets, algorithms)
}

/// Dataset names, algorithm names and the `[dataset][algorithm]` values.
pub type ScoreMatrix = (Vec<String>, Vec<String>, Vec<Vec<f64>>);

/// Pivots summary rows into a datasets × algorithms matrix of `metric`.
pub fn score_matrix(rows: &[SummaryRow], metric: Metric) -> Result<ScoreMatrix> {
    let (datasets, algorithms) = row_axes(rows);
    let mut matrix = Vec::with_capacity(datasets.len());
    for d in &datasets {
        let mut line = Vec::with_capacity(algorithms.len());
        for a in &algorithms {
            let row = rows
                .iter()
                .find(|r| &r.dataset == d && &r.algorithm == a)
                .ok_or_else(|| Error::DimensionMismatch(format!("no result for {d} / {a}")))?;
            line.push(metric.of(row));
        }
        matrix.push(line);
    }
    Ok((datasets, algorithms, matrix))
}

/// Friedman mean ranks of `metric` over every dataset present in `rows`.
pub fn rank_rows(rows: &[SummaryRow], metric: Metric) -> Result<RankTable> {
    let (_, algorithms, matrix) = score_matrix(rows, metric)?;
    friedman_mean_ranks(&matrix, &algorithms, metric.direction())
}
