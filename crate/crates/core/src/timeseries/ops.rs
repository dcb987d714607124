//! Index-level operations on data sets: align, slice, concatenate.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::timeseries::array::TimeArray;
use crate::timeseries::dataset::DataSet;
use crate::timeseries::index::{TimeIndex, Timestamp};

/// Suffix appended to the right operand's names when [`align`] hits a
/// collision. Applied repeatedly until the name is free.
pub const ALIGN_SUFFIX: &str = "_r";

/// Merges two data sets onto the intersection of their time indices.
/// Arrays of `b` whose names collide with `a` are suffixed with
/// [`ALIGN_SUFFIX`]; nothing is ever silently overwritten.
pub fn align(a: &DataSet, b: &DataSet) -> Result<DataSet> {
    let common = match (a.index(), b.index()) {
        (Some(ia), Some(ib)) => ia.intersect(ib),
        (Some(ia), None) => ia.clone(),
        (None, Some(ib)) => ib.clone(),
        (None, None) => TimeIndex::empty(),
    };
    if common.is_empty() && a.rows() > 0 && b.rows() > 0 {
        return Err(Error::EmptyIntersection);
    }

    let mut out = DataSet::new();
    for array in a.arrays() {
        out.insert(array.restrict_to(&common))?;
    }
    for array in b.arrays() {
        let mut name = array.name().to_string();
        while out.contains(&name) {
            name.push_str(ALIGN_SUFFIX);
        }
        out.insert(array.restrict_to(&common).renamed(name))?;
    }
    Ok(out)
}

/// Restricts all arrays to timestamps within `[from, to]`. An empty result
/// is legal; execution edges reject empties at hand-off instead.
pub fn slice_time(d: &DataSet, from: Timestamp, to: Timestamp) -> DataSet {
    let positions: Vec<usize> = match d.index() {
        Some(index) => index.positions_in(from, to).collect(),
        None => Vec::new(),
    };
    d.select_rows(&positions)
}

/// Concatenates data sets with identical schemas and pairwise disjoint
/// time indices, re-sorting rows by timestamp.
pub fn concat_time(parts: &[DataSet]) -> Result<DataSet> {
    let occupied: Vec<&DataSet> = parts.iter().filter(|p| p.array_count() > 0).collect();
    let Some(first) = occupied.first() else {
        return Ok(DataSet::new());
    };

    let names: BTreeSet<&str> = first.names().collect();
    for part in &occupied[1..] {
        let other: BTreeSet<&str> = part.names().collect();
        if names != other {
            return Err(Error::SchemaMismatch {
                message: format!(
                    "parts disagree on array names: [{}] vs [{}]",
                    join(&names),
                    join(&other)
                ),
            });
        }
        for name in &names {
            let lhs = first.get(name).unwrap();
            let rhs = part.get(name).unwrap();
            if lhs.feature_shape() != rhs.feature_shape() {
                return Err(Error::SchemaMismatch {
                    message: format!("array '{name}' has differing feature shapes across parts"),
                });
            }
        }
    }

    // Row order: sort (timestamp, part, position) triples by timestamp.
    let mut order: Vec<(Timestamp, usize, usize)> = Vec::new();
    for (p, part) in occupied.iter().enumerate() {
        if let Some(index) = part.index() {
            for (i, ts) in index.iter().enumerate() {
                order.push((ts, p, i));
            }
        }
    }
    order.sort_unstable();
    for pair in order.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(Error::OverlappingIndices {
                timestamp: pair[0].0,
            });
        }
    }

    let index = TimeIndex::new(order.iter().map(|&(ts, _, _)| ts).collect())?;
    let mut out = DataSet::new();
    for name in names {
        let template = first.get(name).unwrap();
        let width = template.row_width();
        let mut values = Vec::with_capacity(order.len() * width);
        for &(_, p, i) in &order {
            values.extend_from_slice(occupied[p].get(name).unwrap().row(i));
        }
        let mut array = TimeArray::new(
            name,
            index.clone(),
            values,
            template.feature_shape().to_vec(),
        )?;
        if let Some(labels) = template.feature_labels() {
            array = array.with_labels(labels.to_vec())?;
        }
        out.insert(array)?;
    }
    Ok(out)
}

fn join(names: &BTreeSet<&str>) -> String {
    names.iter().copied().collect::<Vec<_>>().join(", ")
}
