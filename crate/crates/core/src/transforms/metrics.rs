//! Root mean squared error between two aligned series.

use crate::error::{Error, Result};
use crate::module::{Module, ModuleDescriptor, ModuleState, Params, Registry};
use crate::timeseries::{DataSet, TimeArray, TimeIndex};

/// Compares inputs "y" and "y_hat" and emits a single-element series named
/// "rmse" stamped with the last input timestamp. Pairs where either side
/// is NaN are skipped. Consumes the whole series, so no finite lookback.
pub struct Rmse {
    descriptor: ModuleDescriptor,
}

impl Rmse {
    pub fn new(params: &Params) -> Self {
        Self {
            descriptor: ModuleDescriptor::transform_only("rmse", params.clone(), None),
        }
    }
}

pub(crate) fn build(params: &Params, _registry: &Registry) -> Result<Box<dyn Module>> {
    Ok(Box::new(Rmse::new(params)))
}

/// NaN-pair-skipping RMSE over two equally shaped value slices.
pub fn rmse_value(y: &[f64], y_hat: &[f64]) -> Result<f64> {
    debug_assert_eq!(y.len(), y_hat.len());
    let mut sum = 0.0;
    let mut count = 0usize;
    for (&a, &b) in y.iter().zip(y_hat) {
        if a.is_finite() && b.is_finite() {
            sum += (a - b) * (a - b);
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::NoFinitePairs);
    }
    Ok((sum / count as f64).sqrt())
}

impl Module for Rmse {
    fn descriptor(&self) -> &ModuleDescriptor {
        &self.descriptor
    }

    fn transform(&self, _state: &ModuleState, inputs: &DataSet) -> Result<DataSet> {
        let y = inputs.require("y")?;
        let y_hat = inputs.require("y_hat")?;
        if y.feature_shape() != y_hat.feature_shape() {
            return Err(Error::SchemaMismatch {
                message: format!(
                    "'y' has feature shape {:?} but 'y_hat' has {:?}",
                    y.feature_shape(),
                    y_hat.feature_shape()
                ),
            });
        }
        let Some(last) = y.index().last() else {
            return Err(Error::NoFinitePairs);
        };
        let value = rmse_value(y.values(), y_hat.values())?;
        let index = TimeIndex::new(vec![last])?;
        DataSet::from_arrays([TimeArray::series("rmse", index, vec![value])?])
    }
}
