//! Shifts a series along its own index by a whole number of steps.

use crate::error::{Error, Result};
use crate::module::{Module, ModuleDescriptor, ModuleState, Params, Registry};
use crate::timeseries::DataSet;
use crate::transforms::{input_x, map_columns, output};

/// out[t] = x[t - shift]; vacated positions become NaN and the time index
/// is unchanged. Negative shifts pull future values backwards and are
/// therefore not available online (no finite lookback).
pub struct ClockShift {
    descriptor: ModuleDescriptor,
    shift: i64,
}

impl ClockShift {
    pub fn new(params: &Params) -> Result<Self> {
        let shift = params.get_int("shift")?;
        let lookback = usize::try_from(shift).ok();
        Ok(Self {
            descriptor: ModuleDescriptor::transform_only("clock_shift", params.clone(), lookback),
            shift,
        })
    }
}

pub(crate) fn build(params: &Params, _registry: &Registry) -> Result<Box<dyn Module>> {
    Ok(Box::new(ClockShift::new(params)?))
}

/// Shift applied to one column; shared with the persistence baseline.
pub(crate) fn shift_column(col: &[f64], shift: i64) -> Vec<f64> {
    let n = col.len() as i64;
    (0..n)
        .map(|t| {
            let src = t - shift;
            if (0..n).contains(&src) {
                col[src as usize]
            } else {
                f64::NAN
            }
        })
        .collect()
}

impl Module for ClockShift {
    fn descriptor(&self) -> &ModuleDescriptor {
        &self.descriptor
    }

    fn transform(&self, _state: &ModuleState, inputs: &DataSet) -> Result<DataSet> {
        let x = input_x(inputs)?;
        if self.shift.unsigned_abs() as usize >= x.len() && !x.is_empty() {
            return Err(Error::ShiftTooLarge {
                shift: self.shift,
                len: x.len(),
            });
        }
        output(map_columns(x, |col| Ok(shift_column(col, self.shift)))?)
    }
}
