//! Persistence baseline: predict the value observed one horizon earlier.

use crate::error::{Error, Result};
use crate::module::{Module, ModuleDescriptor, ModuleState, Params, Registry};
use crate::timeseries::DataSet;
use crate::transforms::{input_x, map_columns, output};

/// ŷ[t] = x[t - horizon]. A fit-free baseline with the same contract as a
/// forward clock shift, registered separately so pipelines read naturally.
pub struct PersistenceForecast {
    descriptor: ModuleDescriptor,
    horizon: usize,
}

impl PersistenceForecast {
    pub fn new(params: &Params) -> Result<Self> {
        let horizon = params.get_usize_min("horizon", 1)?;
        Ok(Self {
            descriptor: ModuleDescriptor::transform_only(
                "persistence",
                params.clone(),
                Some(horizon),
            ),
            horizon,
        })
    }
}

pub(crate) fn build(params: &Params, _registry: &Registry) -> Result<Box<dyn Module>> {
    Ok(Box::new(PersistenceForecast::new(params)?))
}

impl Module for PersistenceForecast {
    fn descriptor(&self) -> &ModuleDescriptor {
        &self.descriptor
    }

    fn transform(&self, _state: &ModuleState, inputs: &DataSet) -> Result<DataSet> {
        let x = input_x(inputs)?;
        if self.horizon >= x.len() && !x.is_empty() {
            return Err(Error::ShiftTooLarge {
                shift: self.horizon as i64,
                len: x.len(),
            });
        }
        let shift = self.horizon as i64;
        output(map_columns(x, |col| {
            Ok(crate::transforms::shift::shift_column(col, shift))
        })?)
    }
}
