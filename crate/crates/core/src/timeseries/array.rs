//! Named, immutable array of 64-bit floats over a time index.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::timeseries::index::TimeIndex;

/// A labeled dense grid of f64 values whose first axis is time. NaN is the
/// only missing-value sentinel. Values never change after construction;
/// all transforms return new arrays.
#[derive(Debug, Clone)]
pub struct TimeArray {
    name: String,
    index: TimeIndex,
    values: Arc<[f64]>,
    feature_shape: Vec<usize>,
    feature_labels: Option<Vec<String>>,
}

impl TimeArray {
    /// Builds an array with the given non-time axis shape. `values` is
    /// row-major: all features of the first timestamp, then the next.
    pub fn new(
        name: impl Into<String>,
        index: TimeIndex,
        values: Vec<f64>,
        feature_shape: Vec<usize>,
    ) -> Result<Self> {
        let width: usize = feature_shape.iter().product();
        if width == 0 {
            return Err(Error::SchemaMismatch {
                message: "feature shape must not contain a zero axis".into(),
            });
        }
        if values.len() != index.len() * width {
            return Err(Error::SchemaMismatch {
                message: format!(
                    "{} values do not fill {} timestamps x {} features",
                    values.len(),
                    index.len(),
                    width
                ),
            });
        }
        Ok(Self {
            name: name.into(),
            index,
            values: values.into(),
            feature_shape,
            feature_labels: None,
        })
    }

    /// A scalar series: one value per timestamp.
    pub fn series(name: impl Into<String>, index: TimeIndex, values: Vec<f64>) -> Result<Self> {
        Self::new(name, index, values, Vec::new())
    }

    /// Attaches labels to the first non-time axis.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        let expected = self.feature_shape.first().copied().unwrap_or(1);
        if labels.len() != expected {
            return Err(Error::SchemaMismatch {
                message: format!(
                    "{} labels for a first feature axis of {expected}",
                    labels.len()
                ),
            });
        }
        self.feature_labels = Some(labels);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn index(&self) -> &TimeIndex {
        &self.index
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn feature_shape(&self) -> &[usize] {
        &self.feature_shape
    }

    pub fn feature_labels(&self) -> Option<&[String]> {
        self.feature_labels.as_deref()
    }

    /// Number of timestamps.
    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Number of values per timestamp.
    pub fn row_width(&self) -> usize {
        self.feature_shape.iter().product()
    }

    /// True when the array has no feature axes at all.
    pub fn is_scalar(&self) -> bool {
        self.feature_shape.is_empty()
    }

    /// All values of one timestamp.
    pub fn row(&self, i: usize) -> &[f64] {
        let w = self.row_width();
        &self.values[i * w..(i + 1) * w]
    }

    /// The single value at timestamp position `i`; requires row width 1.
    pub fn value(&self, i: usize) -> f64 {
        debug_assert_eq!(self.row_width(), 1);
        self.values[i * self.row_width()]
    }

    /// One feature column across all timestamps.
    pub fn column(&self, col: usize) -> Vec<f64> {
        let w = self.row_width();
        (0..self.len()).map(|i| self.values[i * w + col]).collect()
    }

    /// Same data under a different name; shares storage.
    pub fn renamed(&self, name: impl Into<String>) -> TimeArray {
        TimeArray {
            name: name.into(),
            index: self.index.clone(),
            values: Arc::clone(&self.values),
            feature_shape: self.feature_shape.clone(),
            feature_labels: self.feature_labels.clone(),
        }
    }

    /// A new array carrying the rows at the given positions, in order.
    pub fn select_rows(&self, positions: &[usize]) -> TimeArray {
        let w = self.row_width();
        let mut stamps = Vec::with_capacity(positions.len());
        let mut values = Vec::with_capacity(positions.len() * w);
        for &p in positions {
            stamps.push(self.index.get(p));
            values.extend_from_slice(self.row(p));
        }
        TimeArray {
            name: self.name.clone(),
            index: TimeIndex::new(stamps).expect("selected positions are ordered"),
            values: values.into(),
            feature_shape: self.feature_shape.clone(),
            feature_labels: self.feature_labels.clone(),
        }
    }

    /// Restriction to the timestamps of `index`, which must be a subset of
    /// this array's index.
    pub fn restrict_to(&self, index: &TimeIndex) -> TimeArray {
        let positions: Vec<usize> = index
            .iter()
            .map(|ts| self.index.position(ts).expect("subset index"))
            .collect();
        self.select_rows(&positions)
    }

    /// Bitwise value equality, including NaN positions, plus identical
    /// name, index, and shape. The equality used by reproducibility tests.
    pub fn bit_eq(&self, other: &TimeArray) -> bool {
        self.name == other.name
            && self.index == other.index
            && self.feature_shape == other.feature_shape
            && self.values.len() == other.values.len()
            && self
                .values
                .iter()
                .zip(other.values.iter())
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}
