//! Dataset manifest: maps dataset identifiers to CSV files and their schema.
//!
//! ```toml
//! [[dataset]]
//! id = "heart"
//! name = "Heart"
//! path = "data/heart.csv"
//! label_column = 13
//! missing_marker = "?"   # optional, default "?"
//! drop_columns = []      # optional, e.g. identifier columns
//! ```
//!
//! Relative paths resolve against the directory holding the manifest.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::dataset::{self, Dataset};
use crate::error::{Error, Result};

/// Environment variable consulted when no manifest path is given explicitly.
pub const MANIFEST_ENV: &str = "BINSELECT_MANIFEST";
pub const DEFAULT_MANIFEST: &str = "datasets.toml";

fn default_marker() -> String {
    "?".to_owned()
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetEntry {
    pub id: String,
    /// Display name used in result tables; defaults to `id`.
    #[serde(default)]
    pub name: Option<String>,
    pub path: PathBuf,
    pub label_column: usize,
    #[serde(default = "default_marker")]
    pub missing_marker: String,
    #[serde(default)]
    pub drop_columns: Vec<usize>,
}

impl DatasetEntry {
    pub fn display_name(&self) -> &str {
        self.name.as_deref().unwrap_or(&self.id)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestFile {
    #[serde(default)]
    dataset: Vec<DatasetEntry>,
}

#[derive(Debug, Clone)]
pub struct Manifest {
    base: PathBuf,
    entries: Vec<DatasetEntry>,
}

impl Manifest {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, base).map_err(|e| match e {
            Error::Manifest { message, .. } => Error::Manifest { path: path.to_path_buf(), message },
            other => other,
        })
    }

    /// Parses manifest text; relative dataset paths resolve against `base`.
    pub fn parse(text: &str, base: impl Into<PathBuf>) -> Result<Self> {
        let base = base.into();
        let file: ManifestFile = toml::from_str(text).map_err(|e| Error::Manifest {
            path: base.clone(),
            message: e.to_string(),
        })?;
        for (i, e) in file.dataset.iter().enumerate() {
            if file.dataset[..i].iter().any(|o| o.id == e.id) {
                return Err(Error::Manifest {
                    path: base.clone(),
                    message: format!("duplicate dataset id {:?}", e.id),
                });
            }
        }
        Ok(Self { base, entries: file.dataset })
    }

    /// Manifest path from an explicit flag, then the environment, then the
    /// working directory.
    pub fn resolve_path(explicit: Option<&Path>) -> PathBuf {
        explicit
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(MANIFEST_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_MANIFEST))
    }

    pub fn entries(&self) -> &[DatasetEntry] {
        &self.entries
    }

    /// Looks a dataset up by id or display name, ignoring case.
    pub fn get(&self, name: &str) -> Result<&DatasetEntry> {
        self.entries
            .iter()
            .find(|e| e.id.eq_ignore_ascii_case(name) || e.display_name().eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::UnknownDataset(name.to_owned()))
    }

    pub fn file_path(&self, entry: &DatasetEntry) -> PathBuf {
        if entry.path.is_absolute() {
            entry.path.clone()
        } else {
            self.base.join(&entry.path)
        }
    }

    /// Loads, cleans and encodes the named dataset.
    pub fn load_dataset(&self, name: &str) -> Result<Dataset> {
        let entry = self.get(name)?;
        let raw = dataset::load_csv(self.file_path(entry), entry.label_column, &entry.missing_marker)?;
        let raw = if entry.drop_columns.is_empty() {
            raw
        } else {
            raw.drop_columns(&entry.drop_columns)?
        };
        let clean = dataset::drop_missing(&raw, &entry.missing_marker)?;
        dataset::encode(&clean, entry.display_name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_lookup() {
        let m = Manifest::parse(
            r#"
            [[dataset]]
            id = "heart"
            name = "Heart"
            path = "data/heart.csv"
            label_column = 13

            [[dataset]]
            id = "wdbc"
            name = "Breast-WDBC"
            path = "/abs/wdbc.csv"
            label_column = 30
            drop_columns = [0]
            "#,
            "/root/m",
        )
        .unwrap();
        assert_eq!(m.entries().len(), 2);
        let h = m.get("HEART").unwrap();
        assert_eq!(h.missing_marker, "?");
        assert_eq!(m.file_path(h), PathBuf::from("/root/m/data/heart.csv"));
        let w = m.get("breast-wdbc").unwrap();
        assert_eq!(m.file_path(w), PathBuf::from("/abs/wdbc.csv"));
        assert!(matches!(m.get("nope"), Err(Error::UnknownDataset(_))));
    }

    #[test]
    fn rejects_bad_manifests() {
        assert!(Manifest::parse("[[dataset]]\nid = 1\n", ".").is_err());
        let dup = "[[dataset]]\nid='a'\npath='x'\nlabel_column=0\n[[dataset]]\nid='a'\npath='y'\nlabel_column=0\n";
        assert!(matches!(Manifest::parse(dup, "."), Err(Error::Manifest { .. })));
    }

    #[test]
    fn loads_with_dropped_columns_and_missing_rows() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join("bc.csv"),
            "101,5,1,2\n102,?,3,4\n103,2,2,2\n104,7,1,4\n",
        )
        .unwrap();
        std::fs::write(
            dir.path().join("m.toml"),
            "[[dataset]]\nid='bc'\npath='bc.csv'\nlabel_column=3\ndrop_columns=[0]\n",
        )
        .unwrap();
        let m = Manifest::load(dir.path().join("m.toml")).unwrap();
        let ds = m.load_dataset("bc").unwrap();
        assert_eq!(ds.n_instances(), 3);
        assert_eq!(ds.n_features(), 2);
        assert_eq!(ds.n_classes(), 2);
        assert_eq!(ds.row(0), &[5.0, 1.0]);
    }
}
