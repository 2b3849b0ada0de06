//! Loader checks against the prepared benchmark files. Each test is skipped
//! (with a note on stderr) when its file has not been downloaded.

use std::path::PathBuf;

use binselect::dataset::{minmax_normalize, stratified_split};
use binselect::{Dataset, Manifest};

fn manifest() -> Manifest {
    Manifest::load(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../datasets.toml")).unwrap()
}

fn load(id: &str) -> Option<Dataset> {
    let m = manifest();
    let path = m.file_path(m.get(id).unwrap());
    if !path.exists() {
        eprintln!("skipping: {} not present (run scripts/prepare_datasets.py)", path.display());
        return None;
    }
    Some(m.load_dataset(id).unwrap())
}

fn check(id: &str, instances: usize, features: usize, classes: usize) -> Option<Dataset> {
    let ds = load(id)?;
    assert_eq!(ds.n_instances(), instances, "{id} instances");
    assert_eq!(ds.n_features(), features, "{id} features");
    assert_eq!(ds.n_classes(), classes, "{id} classes");
    Some(ds)
}

#[test]
fn pima_shape() {
    if let Some(ds) = check("pima", 768, 8, 2) {
        let mut counts = ds.class_counts();
        counts.sort();
        assert_eq!(counts, vec![268, 500]);
    }
}

#[test]
fn breast_cancer_drops_incomplete_rows_and_id() {
    if let Some(ds) = check("breast_cancer", 683, 9, 2) {
        let mut counts = ds.class_counts();
        counts.sort();
        assert_eq!(counts, vec![239, 444]);
    }
}

#[test]
fn heart_shape() {
    check("heart", 270, 13, 2);
}

#[test]
fn wdbc_shape() {
    if let Some(ds) = check("wdbc", 569, 30, 2) {
        let mut counts = ds.class_counts();
        counts.sort();
        assert_eq!(counts, vec![212, 357]);
    }
}

#[test]
fn lookup_by_display_name() {
    let m = manifest();
    assert_eq!(m.get("Breast-WDBC").unwrap().id, "wdbc");
    assert_eq!(m.get("HEART").unwrap().id, "heart");
    assert!(m.get("iris").is_err());
}

#[test]
fn split_and_normalize_real_data() {
    let Some(ds) = load("wdbc") else { return };
    let split = stratified_split(&ds, 0.2, 1).unwrap();
    assert_eq!(split.test.len(), 114);
    assert_eq!(split.train.len(), 455);
    let norm = minmax_normalize(&ds, &split);
    for &i in &split.train {
        assert!(norm.row(i).iter().all(|v| (0.0..=1.0).contains(v)));
    }
    let test = ds.select_rows(&split.test);
    let full = ds.class_counts();
    for (c, n) in test.class_counts().into_iter().enumerate() {
        let expected = full[c] as f64 * 0.2;
        assert!((n as f64 - expected).abs() <= 1.0, "class {c}: {n} vs {expected}");
    }
}
