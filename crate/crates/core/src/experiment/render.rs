use std::fmt::Write;

use super::{row_axes, Metric, RankTable, SummaryRow};

pub const CSV_HEADER: &str = "dataset,algorithm,mean_accuracy,std_accuracy,mean_features,std_features";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Text,
    Csv,
}

fn is_best(rows: &[SummaryRow], row: &SummaryRow, metric: Metric) -> bool {
    let peers = rows.iter().filter(|r| r.dataset == row.dataset).map(|r| metric.of(r));
    let best = match metric {
        Metric::Accuracy => peers.fold(f64::NEG_INFINITY, f64::max),
        Metric::Features => peers.fold(f64::INFINITY, f64::min),
    };
    metric.of(row) == best
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// One line per (dataset, algorithm). TEXT output marks the best mean
/// accuracy of each dataset with `*` and appends mean ranks when given; CSV
/// output carries the summary rows only.
pub fn render_table(rows: &[SummaryRow], ranks: Option<&RankTable>, format: TableFormat) -> String {
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            out.push_str(CSV_HEADER);
            out.push('\n');
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{},{:.4},{:.4},{:.2},{:.2}",
                    csv_field(&r.dataset),
                    csv_field(&r.algorithm),
                    r.mean_accuracy,
                    r.std_accuracy,
                    r.mean_features,
                    r.std_features
                );
            }
        }
        TableFormat::Text => {
            let dw = rows.iter().map(|r| r.dataset.len()).max().unwrap_or(0).max(7);
            let aw = rows.iter().map(|r| r.algorithm.len()).max().unwrap_or(0).max(9);
            let _ = writeln!(
                out,
                "{:<dw$}  {:<aw$}  {:>9}  {:>8}  {:>9}  {:>8}",
                "dataset", "algorithm", "acc_mean", "acc_std", "feat_mean", "feat_std"
            );
            for r in rows {
                let mark = if is_best(rows, r, Metric::Accuracy) { "*" } else { " " };
                let _ = writeln!(
                    out,
                    "{:<dw$}  {:<aw$}  {:>8.4}{}  {:>8.4}  {:>9.2}  {:>8.2}",
                    r.dataset, r.algorithm, r.mean_accuracy, mark, r.std_accuracy, r.mean_features, r.std_features
                );
            }
            if let Some(t) = ranks {
                let _ = write!(out, "Friedman mean rank ({} datasets):", t.datasets_used);
                for (a, r) in t.algorithms.iter().zip(&t.mean_ranks) {
                    let _ = write!(out, " {a}={r:.2}");
                }
                out.push('\n');
            }
        }
    }
    out
}

/// Datasets × algorithms pivot of one metric with AVE and STD lines per
/// dataset and an optional mean-rank line, laid out like a comparison table.
/// The best mean per dataset is marked with `*` in TEXT output.
pub fn render_comparison(rows: &[SummaryRow], metric: Metric, ranks: Option<&RankTable>, format: TableFormat) -> String {
    let (datasets, algorithms) = row_axes(rows);
    let cell = |r: &SummaryRow, std: bool| {
        let v = match (metric, std) {
            (Metric::Accuracy, false) => r.mean_accuracy,
            (Metric::Accuracy, true) => r.std_accuracy,
            (Metric::Features, false) => r.mean_features,
            (Metric::Features, true) => r.std_features,
        };
        match metric {
            Metric::Accuracy => format!("{v:.4}"),
            Metric::Features => format!("{v:.2}"),
        }
    };
    let find = |d: &String, a: &String| rows.iter().find(|r| &r.dataset == d && &r.algorithm == a);
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            out.push_str("dataset,stat");
            for a in &algorithms {
                let _ = write!(out, ",{}", csv_field(a));
            }
            out.push('\n');
            for d in &datasets {
                for (stat, std) in [("AVE", false), ("STD", true)] {
                    let _ = write!(out, "{},{stat}", csv_field(d));
                    for a in &algorithms {
                        out.push(',');
                        if let Some(r) = find(d, a) {
                            out.push_str(&cell(r, std));
                        }
                    }
                    out.push('\n');
                }
            }
            if let Some(t) = ranks {
                out.push_str("Friedman Test,RANK");
                for a in &algorithms {
                    out.push(',');
                    if let Some(i) = t.algorithms.iter().position(|x| x == a) {
                        let _ = write!(out, "{:.2}", t.mean_ranks[i]);
                    }
                }
                out.push('\n');
            }
        }
        TableFormat::Text => {
            let dw = datasets.iter().map(String::len).max().unwrap_or(0).max(13);
            let cw = algorithms.iter().map(String::len).max().unwrap_or(0).max(7) + 1;
            let _ = write!(out, "{:<dw$}  {:<3}", "Dataset", "");
            for a in &algorithms {
                let _ = write!(out, "  {a:>cw$}");
            }
            out.push('\n');
            for d in &datasets {
                for (i, (stat, std)) in [("AVE", false), ("STD", true)].into_iter().enumerate() {
                    let label = if i == 0 { d.as_str() } else { "" };
                    let _ = write!(out, "{label:<dw$}  {stat:<3}");
                    for a in &algorithms {
                        let text = match find(d, a) {
                            Some(r) => {
                                let mark = if !std && is_best(rows, r, metric) { "*" } else { " " };
                                format!("{}{mark}", cell(r, std))
                            }
                            None => "-".to_owned(),
                        };
                        let _ = write!(out, "  {text:>cw$}");
                    }
                    out.push('\n');
                }
            }
            if let Some(t) = ranks {
                let _ = write!(out, "{:<dw$}  {:<3}", "Friedman Test", "");
                for a in &algorithms {
                    let text = match t.algorithms.iter().position(|x| x == a) {
                        Some(i) => format!("{:.2} ", t.mean_ranks[i]),
                        None => "- ".to_owned(),
                    };
                    let _ = write!(out, "  {text:>cw$}");
                }
                out.push('\n');
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(d: &str, a: &str, acc: f64) -> SummaryRow {
        SummaryRow {
            dataset: d.into(),
            algorithm: a.into(),
            mean_accuracy: acc,
            std_accuracy: 0.0092,
            mean_features: 5.27,
            std_features: 1.46,
        }
    }

    #[test]
    fn csv_layout() {
        assert_eq!(render_table(&[], None, TableFormat::Csv), format!("{CSV_HEADER}\n"));
        let out = render_table(&[row("Heart", "SBSCA", 0.8963)], None, TableFormat::Csv);
        assert_eq!(out.lines().nth(1), Some("Heart,SBSCA,0.8963,0.0092,5.27,1.46"));
        let out = render_table(&[row("a,b", "X", 0.5)], None, TableFormat::Csv);
        assert!(out.lines().nth(1).unwrap().starts_with("\"a,b\",X,"));
    }

    #[test]
    fn text_marks_best_accuracy() {
        let rows = [row("Heart", "SBSCA", 0.8963), row("Heart", "VBSCA", 0.8926)];
        let out = render_table(&rows, None, TableFormat::Text);
        let lines: Vec<&str> = out.lines().collect();
        assert!(lines[1].contains("0.8963*"));
        assert!(!lines[2].contains('*'));
    }

    #[test]
    fn comparison_has_rank_row() {
        let rows = [row("Heart", "A", 0.8), row("Heart", "B", 0.9)];
        let ranks = RankTable {
            algorithms: vec!["A".into(), "B".into()],
            mean_ranks: vec![2.0, 1.0],
            datasets_used: 1,
        };
        let text = render_comparison(&rows, Metric::Accuracy, Some(&ranks), TableFormat::Text);
        assert!(text.lines().last().unwrap().starts_with("Friedman Test"));
        assert!(text.contains("0.9000*"));
        let csv = render_comparison(&rows, Metric::Features, Some(&ranks), TableFormat::Csv);
        assert_eq!(
            csv,
            "dataset,stat,A,B\nHeart,AVE,5.27,5.27\nHeart,STD,1.46,1.46\nFriedman Test,RANK,2.00,1.00\n"
        );
    }
}
