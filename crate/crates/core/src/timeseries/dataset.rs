//! A set of named arrays sharing one time index; the value flowing along
//! pipeline edges.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::timeseries::array::TimeArray;
use crate::timeseries::index::TimeIndex;

#[derive(Debug, Clone, Default)]
pub struct DataSet {
    arrays: BTreeMap<String, TimeArray>,
}

impl DataSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_arrays(arrays: impl IntoIterator<Item = TimeArray>) -> Result<Self> {
        let mut out = Self::new();
        for a in arrays {
            out.insert(a)?;
        }
        Ok(out)
    }

    /// Adds an array under its own name. The first insertion fixes the
    /// shared time index; later arrays must match it exactly.
    pub fn insert(&mut self, array: TimeArray) -> Result<()> {
        if let Some(index) = self.index() {
            if index != array.index() {
                return Err(Error::SchemaMismatch {
                    message: format!(
                        "array '{}' does not share the data set's time index",
                        array.name()
                    ),
                });
            }
        }
        if self.arrays.contains_key(array.name()) {
            return Err(Error::SchemaMismatch {
                message: format!("duplicate array name '{}'", array.name()),
            });
        }
        self.arrays.insert(array.name().to_string(), array);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&TimeArray> {
        self.arrays.get(name)
    }

    /// Like [`DataSet::get`] but fails with a schema error naming the
    /// missing input.
    pub fn require(&self, name: &str) -> Result<&TimeArray> {
        self.arrays.get(name).ok_or_else(|| Error::SchemaMismatch {
            message: format!(
                "expected input '{name}', have [{}]",
                self.names().collect::<Vec<_>>().join(", ")
            ),
        })
    }

    /// The single member array; fails when the set has zero or several.
    pub fn single(&self) -> Result<&TimeArray> {
        if self.arrays.len() == 1 {
            Ok(self.arrays.values().next().unwrap())
        } else {
            Err(Error::SchemaMismatch {
                message: format!("expected exactly one array, have {}", self.arrays.len()),
            })
        }
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.arrays.keys().map(String::as_str)
    }

    pub fn arrays(&self) -> impl Iterator<Item = &TimeArray> {
        self.arrays.values()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.arrays.contains_key(name)
    }

    pub fn array_count(&self) -> usize {
        self.arrays.len()
    }

    /// The shared time index, or `None` when the set holds no arrays.
    pub fn index(&self) -> Option<&TimeIndex> {
        self.arrays.values().next().map(TimeArray::index)
    }

    /// Number of timestamps (0 for a set with no arrays).
    pub fn rows(&self) -> usize {
        self.index().map_or(0, TimeIndex::len)
    }

    /// A copy carrying only the rows at the given positions.
    pub fn select_rows(&self, positions: &[usize]) -> DataSet {
        DataSet {
            arrays: self
                .arrays
                .iter()
                .map(|(k, v)| (k.clone(), v.select_rows(positions)))
                .collect(),
        }
    }

    /// Splits rows by a per-timestamp mask into (true-rows, false-rows).
    pub fn partition_rows(&self, mask: &[bool]) -> (DataSet, DataSet) {
        let mut yes = Vec::new();
        let mut no = Vec::new();
        for (i, &m) in mask.iter().enumerate() {
            if m {
                yes.push(i);
            } else {
                no.push(i);
            }
        }
        (self.select_rows(&yes), self.select_rows(&no))
    }

    /// Bitwise equality of all member arrays, names, and index.
    pub fn bit_eq(&self, other: &DataSet) -> bool {
        self.arrays.len() == other.arrays.len()
            && self
                .arrays
                .iter()
                .all(|(k, v)| other.arrays.get(k).is_some_and(|o| v.bit_eq(o)))
    }
}
