//! Sliding-window sampler: frames a series for supervised learning.

use crate::error::{Error, Result};
use crate::module::{Module, ModuleDescriptor, ModuleState, Params, Registry};
use crate::timeseries::{DataSet, TimeArray};
use crate::transforms::{input_x, output, require_scalar};

/// Builds rows [x[t-k+1], ..., x[t]] of width `size`; the last column is
/// always the current value. Positions before the series start are filled
/// with 0.0 by default ("pad": "nan" switches to NaN).
pub struct Sampler {
    descriptor: ModuleDescriptor,
    size: usize,
    pad: f64,
}

impl Sampler {
    pub fn new(params: &Params) -> Result<Self> {
        let size = params.get_usize_min("size", 1)?;
        let pad = match params.get_str_or("pad", "zero")? {
            "zero" => 0.0,
            "nan" => f64::NAN,
            other => {
                return Err(Error::InvalidParam {
                    name: "pad".into(),
                    message: format!("'{other}' is not one of zero, nan"),
                })
            }
        };
        Ok(Self {
            descriptor: ModuleDescriptor::transform_only("sampler", params.clone(), Some(size - 1)),
            size,
            pad,
        })
    }
}

pub(crate) fn build(params: &Params, _registry: &Registry) -> Result<Box<dyn Module>> {
    Ok(Box::new(Sampler::new(params)?))
}

impl Module for Sampler {
    fn descriptor(&self) -> &ModuleDescriptor {
        &self.descriptor
    }

    fn transform(&self, _state: &ModuleState, inputs: &DataSet) -> Result<DataSet> {
        let x = input_x(inputs)?;
        require_scalar(x)?;
        if self.size > x.len() && !x.is_empty() {
            return Err(Error::SampleTooLarge {
                size: self.size,
                len: x.len(),
            });
        }
        let col = x.values();
        let mut values = Vec::with_capacity(col.len() * self.size);
        for t in 0..col.len() {
            for offset in (0..self.size).rev() {
                values.push(match t.checked_sub(offset) {
                    Some(src) => col[src],
                    None => self.pad,
                });
            }
        }
        output(TimeArray::new(
            x.name(),
            x.index().clone(),
            values,
            vec![self.size],
        )?)
    }
}
