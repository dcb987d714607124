//! n-th order difference of a series.

use crate::error::{Error, Result};
use crate::module::{Module, ModuleDescriptor, ModuleState, Params, Registry};
use crate::timeseries::DataSet;
use crate::transforms::{input_x, map_columns, output};

/// Applies the first difference `order` times; the first `order` outputs
/// are NaN and the index is unchanged.
pub struct Differentiate {
    descriptor: ModuleDescriptor,
    order: usize,
}

impl Differentiate {
    pub fn new(params: &Params) -> Result<Self> {
        let order = params.get_usize_min("order", 1)?;
        Ok(Self {
            descriptor: ModuleDescriptor::transform_only(
                "differentiate",
                params.clone(),
                Some(order),
            ),
            order,
        })
    }
}

pub(crate) fn build(params: &Params, _registry: &Registry) -> Result<Box<dyn Module>> {
    Ok(Box::new(Differentiate::new(params)?))
}

impl Module for Differentiate {
    fn descriptor(&self) -> &ModuleDescriptor {
        &self.descriptor
    }

    fn transform(&self, _state: &ModuleState, inputs: &DataSet) -> Result<DataSet> {
        let x = input_x(inputs)?;
        if x.len() <= self.order {
            return Err(Error::OrderTooLarge {
                order: self.order,
                len: x.len(),
            });
        }
        output(map_columns(x, |col| {
            let mut current = col.to_vec();
            for _ in 0..self.order {
                let mut next = Vec::with_capacity(current.len());
                next.push(f64::NAN);
                for i in 1..current.len() {
                    next.push(current[i] - current[i - 1]);
                }
                current = next;
            }
            Ok(current)
        })?)
    }
}
