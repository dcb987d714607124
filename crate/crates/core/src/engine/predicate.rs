//! Built-in condition predicates.

use chrono::{DateTime, Timelike, Utc};

use crate::error::{Error, Result};
use crate::module::{Params, Registry};
use crate::timeseries::DataSet;

pub(crate) fn register(registry: &mut Registry) {
    registry
        .register_predicate("hour_between", hour_between)
        .expect("builtin predicate ids are unique");
}

/// True for timestamps whose UTC hour lies in the half-open range
/// [from, to). A range with from > to wraps around midnight, so
/// hour_between(20, 8) is the exact complement of hour_between(8, 20).
fn hour_between(params: &Params, input: &DataSet) -> Result<Vec<bool>> {
    let from = params.get_int("from")?;
    let to = params.get_int("to")?;
    for (name, value) in [("from", from), ("to", to)] {
        if !(0..=24).contains(&value) {
            return Err(Error::InvalidParam {
                name: name.into(),
                message: format!("hour must be within 0..=24, got {value}"),
            });
        }
    }
    let Some(index) = input.index() else {
        return Ok(Vec::new());
    };
    index
        .iter()
        .map(|ts| {
            let dt = DateTime::<Utc>::from_timestamp(ts, 0).ok_or_else(|| Error::SchemaMismatch {
                message: format!("timestamp {ts} is outside the supported calendar range"),
            })?;
            let hour = i64::from(dt.hour());
            Ok(if from <= to {
                hour >= from && hour < to
            } else {
                hour >= from || hour < to
            })
        })
        .collect()
}
