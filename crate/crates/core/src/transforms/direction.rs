//! Sign of the step-to-step change of a series.

use crate::error::Result;
use crate::module::{Module, ModuleDescriptor, ModuleState, Params, Registry};
use crate::timeseries::DataSet;
use crate::transforms::{input_x, map_columns, output};

/// Changes smaller than this in magnitude count as "no change".
const FLAT_TOLERANCE: f64 = 1e-12;

/// Emits -1, 0, or +1 for the direction of change at each timestep; the
/// first output and any step touching NaN are NaN.
pub struct ChangeDirection {
    descriptor: ModuleDescriptor,
}

impl ChangeDirection {
    pub fn new(params: &Params) -> Self {
        Self {
            descriptor: ModuleDescriptor::transform_only("change_direction", params.clone(), Some(1)),
        }
    }
}

pub(crate) fn build(params: &Params, _registry: &Registry) -> Result<Box<dyn Module>> {
    Ok(Box::new(ChangeDirection::new(params)))
}

impl Module for ChangeDirection {
    fn descriptor(&self) -> &ModuleDescriptor {
        &self.descriptor
    }

    fn transform(&self, _state: &ModuleState, inputs: &DataSet) -> Result<DataSet> {
        let x = input_x(inputs)?;
        output(map_columns(x, |col| {
            let mut out = Vec::with_capacity(col.len());
            for (i, &v) in col.iter().enumerate() {
                if i == 0 {
                    out.push(f64::NAN);
                    continue;
                }
                let delta = v - col[i - 1];
                out.push(if delta.is_nan() {
                    f64::NAN
                } else if delta.abs() < FLAT_TOLERANCE {
                    0.0
                } else {
                    delta.signum()
                });
            }
            Ok(out)
        })?)
    }
}
