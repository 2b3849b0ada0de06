//! Reference results for the five medical datasets: mean and
//! standard deviation over 30 runs of classification accuracy and of the
//! number of selected features, for the four comparison algorithms and both
//! binary sine cosine variants.

use super::SummaryRow;

pub const ALGORITHMS: [&str; 6] = ["BBA", "BGSA", "BGWO", "BDA", "SBSCA", "VBSCA"];
/// Algorithms whose results come only from the reference table.
pub const COMPARISON_ALGORITHMS: [&str; 4] = ["BBA", "BGSA", "BGWO", "BDA"];
pub const DATASETS: [&str; 5] = ["Pima", "Breast Cancer", "Heart", "Lymphography", "Breast-WDBC"];

/// `[dataset][algorithm]` mean accuracy.
pub const ACCURACY_MEAN: [[f64; 6]; 5] = [
    [0.7541, 0.7727, 0.7667, 0.6697, 0.7727, 0.7727],
    [0.9983, 1.0000, 0.9998, 0.8659, 1.0000, 1.0000],
    [0.8525, 0.8772, 0.8716, 0.6975, 0.8963, 0.8926],
    [0.7978, 0.8344, 0.8300, 0.7978, 0.8767, 0.8633],
    [0.9518, 0.9591, 0.9532, 0.9556, 0.9673, 0.9655],
];

pub const ACCURACY_STD: [[f64; 6]; 5] = [
    [0.0119, 0.0000, 0.0098, 0.1120, 0.0000, 0.0000],
    [0.0031, 0.0000, 0.0013, 0.1038, 0.0000, 0.0000],
    [0.0179, 0.0091, 0.0257, 0.2372, 0.0092, 0.0075],
    [0.0230, 0.0205, 0.0268, 0.2174, 0.0250, 0.0202],
    [0.0060, 0.0048, 0.0066, 0.0679, 0.0046, 0.0022],
];

pub const FEATURES_MEAN: [[f64; 6]; 5] = [
    [3.00, 5.00, 5.10, 5.00, 5.00, 5.00],
    [3.27, 3.20, 4.27, 3.00, 3.00, 3.00],
    [5.07, 4.97, 7.03, 5.33, 5.27, 5.27],
    [6.33, 7.63, 9.73, 6.03, 6.13, 7.23],
    [11.10, 12.77, 11.93, 4.27, 4.20, 9.33],
];

pub const FEATURES_STD: [[f64; 6]; 5] = [
    [1.53, 0.00, 0.31, 0.00, 0.00, 0.00],
    [1.41, 0.41, 1.08, 0.00, 0.00, 0.00],
    [2.07, 1.16, 0.76, 1.42, 1.46, 1.41],
    [3.07, 1.73, 2.21, 1.33, 1.55, 2.06],
    [3.39, 2.51, 2.46, 1.14, 1.06, 2.25],
];

/// Reference mean ranks, accuracy (higher is better).
pub const ACCURACY_RANKS: [f64; 6] = [5.30, 2.60, 4.20, 5.50, 1.40, 2.00];
/// Reference mean ranks, selected features (lower is better).
pub const FEATURE_RANKS: [f64; 6] = [3.00, 3.90, 5.80, 2.70, 2.40, 3.20];

pub fn dataset_index(name: &str) -> Option<usize> {
    DATASETS.iter().position(|d| d.eq_ignore_ascii_case(name))
}

pub fn algorithm_index(name: &str) -> Option<usize> {
    ALGORITHMS.iter().position(|a| a.eq_ignore_ascii_case(name))
}

/// Reference row for one (dataset, algorithm) cell.
pub fn reference_row(dataset: &str, algorithm: &str) -> Option<SummaryRow> {
    let d = dataset_index(dataset)?;
    let a = algorithm_index(algorithm)?;
    Some(SummaryRow {
        dataset: DATASETS[d].to_owned(),
        algorithm: ALGORITHMS[a].to_owned(),
        mean_accuracy: ACCURACY_MEAN[d][a],
        std_accuracy: ACCURACY_STD[d][a],
        mean_features: FEATURES_MEAN[d][a],
        std_features: FEATURES_STD[d][a],
    })
}

/// Every reference cell, dataset-major.
pub fn reference_rows() -> Vec<SummaryRow> {
    DATASETS
        .iter()
        .flat_map(|d| ALGORITHMS.iter().filter_map(move |a| reference_row(d, a)))
        .collect()
}
