//! k-nearest-neighbour classification over a subset of feature columns.

use std::fmt;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Binary feature-selection vector; `true` means the column is used.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mask(Vec<bool>);

impl Mask {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn ones(len: usize) -> Self {
        Self(vec![true; len])
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![false; len])
    }

    /// Mask whose bit `d` is bit `d` of `bits` (least significant first).
    pub fn from_bits(bits: u64, len: usize) -> Self {
        Self((0..len).map(|d| bits >> d & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn popcount(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn bits_mut(&mut self) -> &mut [bool] {
        &mut self.0
    }

    pub fn get(&self, d: usize) -> bool {
        self.0[d]
    }

    pub fn set(&mut self, d: usize, bit: bool) {
        self.0[d] = bit;
    }

    /// Indices of the selected columns.
    pub fn selected(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(d, _)| d)
    }
}

impl From<Vec<bool>> for Mask {
    fn from(bits: Vec<bool>) -> Self {
        Self(bits)
    }
}

impl fmt::Display for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub distance: f64,
    pub label: usize,
    pub train_row: usize,
}

/// Euclidean distance over the selected dimensions.
pub fn masked_distance(a: &[f64], b: &[f64], mask: &Mask) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    if a.len() != mask.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: mask.len() });
    }
    let sum: f64 = a
        .iter()
        .zip(b)
        .zip(mask.bits())
        .filter(|(_, &m)| m)
        .map(|((x, y), _)| (x - y) * (x - y))
        .sum();
    Ok(sum.sqrt())
}

/// Keeps the `k` closest neighbours seen so far in ascending distance order.
/// Rows are offered in increasing index order and a newcomer must be strictly
/// closer to displace anything, so equal distances favour the lower index.
struct NearestK {
    k: usize,
    items: Vec<Neighbor>,
}

impl NearestK {
    fn new(k: usize) -> Self {
        Self { k, items: Vec::with_capacity(k + 1) }
    }

    #[inline]
    fn offer(&mut self, n: Neighbor) {
        if self.items.len() == self.k {
            if n.distance >= self.items[self.k - 1].distance {
                return;
            }
            self.items.pop();
        }
        let pos = self.items.partition_point(|m| m.distance <= n.distance);
        self.items.insert(pos, n);
    }
}

/// Majority label among `neighbors` (sorted nearest first). A tie between
/// classes goes to the class whose closest member ranks highest.
pub fn majority_vote(neighbors: &[Neighbor], n_classes: usize) -> usize {
    let mut votes = vec![0usize; n_classes];
    for n in neighbors {
        votes[n.label] += 1;
    }
    let top = votes.iter().copied().max().unwrap_or(0);
    neighbors
        .iter()
        .find(|n| votes[n.label] == top)
        .map(|n| n.label)
        .unwrap_or(0)
}

fn check_query(train: &Dataset, mask: &Mask, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if k > train.n_instances() {
        return Err(Error::KTooLarge { k, train: train.n_instances() });
    }
    if mask.len() != train.n_features() {
        return Err(Error::LengthMismatch { left: mask.len(), right: train.n_features() });
    }
    if mask.popcount() == 0 {
        return Err(Error::EmptySubset);
    }
    Ok(())
}

/// The `k` nearest training rows to `query`, nearest first.
pub fn nearest_neighbors(train: &Dataset, query: &[f64], mask: &Mask, k: usize) -> Result<Vec<Neighbor>> {
    check_query(train, mask, k)?;
    let mut best = NearestK::new(k);
    for (i, row) in train.rows().enumerate() {
        best.offer(Neighbor {
            distance: masked_distance(row, query, mask)?,
            label: train.labels()[i],
            train_row: i,
        });
    }
    Ok(best.items)
}

pub fn knn_classify(train: &Dataset, query: &[f64], mask: &Mask, k: usize) -> Result<usize> {
    let neighbors = nearest_neighbors(train, query, mask, k)?;
    Ok(majority_vote(&neighbors, train.n_classes()))
}

/// Fraction of `test` rows misclassified by KNN trained on `train`.
pub fn error_rate(train: &Dataset, test: &Dataset, mask: &Mask, k: usize) -> Result<f64> {
    if test.n_instances() == 0 {
        return Err(Error::InvalidParameter("empty test set".into()));
    }
    if test.n_features() != train.n_features() {
        return Err(Error::LengthMismatch { left: test.n_features(), right: train.n_features() });
    }
    let mut wrong = 0usize;
    for (row, &truth) in test.rows().zip(test.labels()) {
        if knn_classify(train, row, mask, k)? != truth {
            wrong += 1;
        }
    }
    Ok(wrong as f64 / test.n_instances() as f64)
}

/// Per-feature squared differences between every (test, train) pair, laid
/// out feature-major so a masked distance is a sum of contiguous slices.
///
/// Produces exactly the same distances as [`masked_distance`]: squared terms
/// are accumulated in ascending feature order in both paths.
#[derive(Debug, Clone)]
pub struct PairwiseDistances {
    n_train: usize,
    n_test: usize,
    n_features: usize,
    n_classes: usize,
    squared: Vec<f64>,
    train_labels: Vec<usize>,
    test_labels: Vec<usize>,
}

impl PairwiseDistances {
    pub fn new(train: &Dataset, test: &Dataset) -> Result<Self> {
        if test.n_features() != train.n_features() {
            return Err(Error::LengthMismatch { left: test.n_features(), right: train.n_features() });
        }
        let (n_train, n_test, d) = (train.n_instances(), test.n_instances(), train.n_features());
        let mut squared = Vec::with_capacity(n_train * n_test * d);
        for f in 0..d {
            for q in test.rows() {
                for t in train.rows() {
                    let diff = t[f] - q[f];
                    squared.push(diff * diff);
                }
            }
        }
        Ok(Self {
            n_train,
            n_test,
            n_features: d,
            n_classes: train.n_classes().max(test.n_classes()),
            squared,
            train_labels: train.labels().to_vec(),
            test_labels: test.labels().to_vec(),
        })
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn error_rate(&self, mask: &Mask, k: usize) -> Result<f64> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if k > self.n_train {
            return Err(Error::KTooLarge { k, train: self.n_train });
        }
        if mask.len() != self.n_features {
            return Err(Error::LengthMismatch { left: mask.len(), right: self.n_features });
        }
        if mask.popcount() == 0 {
            return Err(Error::EmptySubset);
        }
        if self.n_test == 0 {
            return Err(Error::InvalidParameter("empty test set".into()));
        }
        let block = self.n_train * self.n_test;
        let mut acc = vec![0.0f64; block];
        for f in mask.selected() {
            let slice = &self.squared[f * block..(f + 1) * block];
            for (a, s) in acc.iter_mut().zip(slice) {
                *a += s;
            }
        }
        let mut wrong = 0usize;
        for q in 0..self.n_test {
            let mut best = NearestK::new(k);
            let row = &acc[q * self.n_train..(q + 1) * self.n_train];
            for (i, &sq) in row.iter().enumerate() {
                best.offer(Neighbor {
                    distance: sq.sqrt(),
                    label: self.train_labels[i],
                    train_row: i,
                });
            }
            if majority_vote(&best.items, self.n_classes) != self.test_labels[q] {
                wrong += 1;
            }
        }
        Ok(wrong as f64 / self.n_test as f64)
    }
}
