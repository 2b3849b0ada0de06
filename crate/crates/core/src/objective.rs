//! Wrapper fitness: weighted sum of classification error and the fraction of
//! selected features. Lower is better.

use std::collections::HashMap;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::knn::{self, Mask, PairwiseDistances};

/// Weights of the two fitness terms; `beta` is always `1 - alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitnessParams {
    alpha: f64,
    beta: f64,
}

impl FitnessParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!("alpha {alpha} outside [0, 1]")));
        }
        Ok(Self { alpha, beta: 1.0 - alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

impl Default for FitnessParams {
    fn default() -> Self {
        Self::new(0.99).unwrap()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub fitness: f64,
    pub accuracy: f64,
    pub n_selected: usize,
}

pub fn fitness(error: f64, n_selected: usize, n_total: usize, params: FitnessParams) -> Result<f64> {
    if n_selected == 0 {
        return Err(Error::EmptySubset);
    }
    if n_selected > n_total {
        return Err(Error::InvalidParameter(format!(
            "{n_selected} selected out of {n_total} features"
        )));
    }
    Ok(params.alpha * error + params.beta * (n_selected as f64 / n_total as f64))
}

/// Scores `mask` by training KNN on `train` and measuring error on `test`.
pub fn evaluate(
    mask: &Mask,
    train: &Dataset,
    test: &Dataset,
    k: usize,
    params: FitnessParams,
) -> Result<Evaluation> {
    let n_selected = mask.popcount();
    if n_selected == 0 {
        return Err(Error::EmptySubset);
    }
    let error = knn::error_rate(train, test, mask, k)?;
    Ok(Evaluation {
        fitness: fitness(error, n_selected, mask.len(), params)?,
        accuracy: 1.0 - error,
        n_selected,
    })
}

/// Anything the optimizer can minimize over binary masks.
pub trait Objective {
    fn evaluate(&mut self, mask: &Mask) -> Result<Evaluation>;
}

impl<F> Objective for F
where
    F: FnMut(&Mask) -> Result<Evaluation>,
{
    fn evaluate(&mut self, mask: &Mask) -> Result<Evaluation> {
        self(mask)
    }
}

/// KNN wrapper objective over a fixed split. Distances are precomputed once
/// and shared; each instance memoizes the masks it has already scored.
pub struct WrapperObjective<'a> {
    distances: &'a PairwiseDistances,
    k: usize,
    params: FitnessParams,
    cache: HashMap<Mask, Evaluation>,
}

impl<'a> WrapperObjective<'a> {
    pub fn new(distances: &'a PairwiseDistances, k: usize, params: FitnessParams) -> Self {
        Self { distances, k, params, cache: HashMap::new() }
    }

    /// Number of distinct masks evaluated so far.
    pub fn distinct_evaluations(&self) -> usize {
        self.cache.len()
    }
}

impl Objective for WrapperObjective<'_> {
    fn evaluate(&mut self, mask: &Mask) -> Result<Evaluation> {
        if let Some(e) = self.cache.get(mask) {
            return Ok(*e);
        }
        let n_selected = mask.popcount();
        if n_selected == 0 {
            return Err(Error::EmptySubset);
        }
        let error = self.distances.error_rate(mask, self.k)?;
        let e = Evaluation {
            fitness: fitness(error, n_selected, mask.len(), self.params)?,
            accuracy: 1.0 - error,
            n_selected,
        };
        self.cache.insert(mask.clone(), e);
        Ok(e)
    }
}
