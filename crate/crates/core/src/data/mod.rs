//! Synthetic data generation and file ingestion.

mod csv;
mod pgm;
mod spheres;

pub use self::csv::{parse_csv_matrix, read_csv_matrix, read_labels, write_csv_matrix, write_labels};
pub use self::pgm::{parse_pgm, read_pgm, read_pgm_vector, write_pgm, PgmImage};
pub use self::spheres::{gen_two_spheres, SpheresParams};

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Feature rows with one integer class label per row.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset<T> {
    pub features: Array2<T>,
    pub labels: Vec<i32>,
}

impl<T: Scalar> LabeledDataset<T> {
    pub fn new(features: Array2<T>, labels: Vec<i32>) -> Result<Self> {
        if features.nrows() != labels.len() {
            return Err(Error::dims(features.nrows(), labels.len()));
        }
        Ok(Self { features, labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}
