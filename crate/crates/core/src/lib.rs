//! Wrapper feature selection with binary sine cosine search.
//!
//! Candidate feature subsets are bit masks scored by a k-nearest-neighbour
//! classifier ([`objective`]). The search ([`optimizer`]) keeps continuous
//! positions updated by the sine cosine rule ([`sca`]) and turns them into
//! masks with an S-shaped or V-shaped transfer function ([`binarize`]).
//! [`experiment`] drives repeated seeded runs and ranks the results.

pub mod binarize;
pub mod dataset;
pub mod error;
pub mod experiment;
pub mod knn;
pub mod manifest;
pub mod objective;
pub mod optimizer;
pub mod sca;

pub use binarize::TransferKind;
pub use dataset::{Dataset, RawDataset, SplitIndices};
pub use error::{Error, Result};
pub use knn::Mask;
pub use manifest::Manifest;
pub use objective::{Evaluation, FitnessParams, Objective};
pub use optimizer::RunRecord;
pub use sca::ScaConfig;
