//! Missing-value detection as a 0/1 mask.

use crate::error::Result;
use crate::module::{Module, ModuleDescriptor, ModuleState, Params, Registry};
use crate::timeseries::DataSet;
use crate::transforms::{input_x, map_columns, output};

/// mask[t] = 1.0 where the input is NaN, else 0.0.
pub struct MissingMask {
    descriptor: ModuleDescriptor,
}

impl MissingMask {
    pub fn new(params: &Params) -> Self {
        Self {
            descriptor: ModuleDescriptor::transform_only("missing_mask", params.clone(), Some(0)),
        }
    }
}

pub(crate) fn build(params: &Params, _registry: &Registry) -> Result<Box<dyn Module>> {
    Ok(Box::new(MissingMask::new(params)))
}

impl Module for MissingMask {
    fn descriptor(&self) -> &ModuleDescriptor {
        &self.descriptor
    }

    fn transform(&self, _state: &ModuleState, inputs: &DataSet) -> Result<DataSet> {
        let x = input_x(inputs)?;
        output(map_columns(x, |col| {
            Ok(col
                .iter()
                .map(|v| if v.is_nan() { 1.0 } else { 0.0 })
                .collect())
        })?)
    }
}
