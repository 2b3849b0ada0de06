use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[serde(alias = "higher_better")]
    Higher,
    #[serde(alias = "lower_better")]
    Lower,
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "higher" | "higher_better" => Ok(Direction::Higher),
            "lower" | "lower_better" => Ok(Direction::Lower),
            other => Err(Error::InvalidParameter(format!("unknown direction {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    pub algorithms: Vec<String>,
    pub mean_ranks: Vec<f64>,
    pub datasets_used: usize,
}

/// Chi-square form of the Friedman statistic with `m - 1` degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FriedmanStatistic {
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
}

/// Ranks of one row, 1 = best. Tied values share the mean of the ranks they
/// span.
pub fn rank_row(row: &[f64], direction: Direction) -> Vec<f64> {
    let mut order: Vec<usize> = (0..row.len()).collect();
    order.sort_by(|&a, &b| match direction {
        Direction::Higher => row[b].total_cmp(&row[a]),
        Direction::Lower => row[a].total_cmp(&row[b]),
    });
    let mut ranks = vec![0.0; row.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && row[order[end]] == row[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let shared = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = shared;
        }
        start = end;
    }
    ranks
}

/// Mean rank of each algorithm (column) across datasets (rows).
pub fn friedman_mean_ranks(
    scores: &[Vec<f64>],
    algorithms: &[String],
    direction: Direction,
) -> Result<RankTable> {
    let m = algorithms.len();
    if m < 2 {
        return Err(Error::DimensionMismatch(format!("need at least 2 algorithms, got {m}")));
    }
    if scores.is_empty() {
        return Err(Error::DimensionMismatch("need at least one dataset".into()));
    }
    if let Some((i, row)) = scores.iter().enumerate().find(|(_, r)| r.len() != m) {
        return Err(Error::DimensionMismatch(format!(
            "row {i} has {} scores for {m} algorithms",
            row.len()
        )));
    }
    if scores.iter().flatten().any(|v| v.is_nan()) {
        return Err(Error::DimensionMismatch("missing (NaN) score".into()));
    }
    let mut sums = vec![0.0; m];
    for row in scores {
        for (s, r) in sums.iter_mut().zip(rank_row(row, direction)) {
            *s += r;
        }
    }
    let n = scores.len() as f64;
    Ok(RankTable {
        algorithms: algorithms.to_vec(),
        mean_ranks: sums.into_iter().map(|s| s / n).collect(),
        datasets_used: scores.len(),
    })
}

/// `12n / (m(m+1)) * (sum R_j^2 - m(m+1)^2 / 4)` over mean ranks `R_j`.
pub fn friedman_statistic(table: &RankTable) -> FriedmanStatistic {
    let m = table.mean_ranks.len() as f64;
    let n = table.datasets_used as f64;
    let sum_sq: f64 = table.mean_ranks.iter().map(|r| r * r).sum();
    let chi_square = 12.0 * n / (m * (m + 1.0)) * (sum_sq - m * (m + 1.0).powi(2) / 4.0);
    let df = table.mean_ranks.len() - 1;
    let p_value = ChiSquared::new(df as f64)
        .map(|d| d.sf(chi_square.max(0.0)))
        .unwrap_or(f64::NAN);
    FriedmanStatistic { chi_square, degrees_of_freedom: df, p_value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn names(m: usize) -> Vec<String> {
        (0..m).map(|i| format!("a{i}")).collect()
    }

    #[test]
    fn ties_share_average_rank() {
        assert_eq!(rank_row(&[0.9, 0.8, 0.9], Direction::Higher), vec![1.5, 3.0, 1.5]);
        assert_eq!(rank_row(&[5.0, 5.0, 5.0, 1.0], Direction::Lower), vec![3.0, 3.0, 3.0, 1.0]);
        let t = friedman_mean_ranks(&[vec![0.9, 0.8, 0.9]], &names(3), Direction::Higher).unwrap();
        assert_eq!(t.mean_ranks, vec![1.5, 3.0, 1.5]);
    }

    #[test]
    fn shape_errors() {
        assert!(friedman_mean_ranks(&[vec![1.0]], &names(1), Direction::Higher).is_err());
        assert!(friedman_mean_ranks(&[], &names(2), Direction::Higher).is_err());
        assert!(friedman_mean_ranks(&[vec![1.0, 2.0, 3.0]], &names(2), Direction::Higher).is_err());
    }

    #[test]
    fn statistic_matches_hand_computation() {
        // 4 datasets, 3 algorithms, always ranked 1, 2, 3
        let scores = vec![vec![3.0, 2.0, 1.0]; 4];
        let t = friedman_mean_ranks(&scores, &names(3), Direction::Higher).unwrap();
        let s = friedman_statistic(&t);
        // 12*4/(3*4) * (1 + 4 + 9 - 3*16/4) = 4 * 2 = 8
        assert!((s.chi_square - 8.0).abs() < 1e-12);
        assert_eq!(s.degrees_of_freedom, 2);
        assert!((s.p_value - (-4.0f64).exp()).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn ranks_sum_and_monotone_invariance(
            rows in prop::collection::vec(prop::collection::vec(-5i32..5, 4), 1..8),
        ) {
            let scores: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|&v| f64::from(v) / 2.0).collect()).collect();
            let t = friedman_mean_ranks(&scores, &names(4), Direction::Higher).unwrap();
            let total: f64 = t.mean_ranks.iter().sum();
            prop_assert!((total - 10.0).abs() < 1e-9);
            let cubed: Vec<Vec<f64>> = scores.iter().map(|r| r.iter().map(|v| v * v * v).collect()).collect();
            let tc = friedman_mean_ranks(&cubed, &names(4), Direction::Higher).unwrap();
            prop_assert_eq!(t.mean_ranks, tc.mean_ranks);
        }
    }
}
