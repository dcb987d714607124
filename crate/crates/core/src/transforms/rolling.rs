//! Trailing-window rolling mean.

use crate::error::{Error, Result};
use crate::module::{Module, ModuleDescriptor, ModuleState, Params, Registry};
use crate::timeseries::DataSet;
use crate::transforms::{input_x, map_columns, output};

/// Mean of the finite values in the trailing window of `window` steps.
/// The first `window - 1` outputs are NaN, as is any window with no finite
/// values. Trailing (causal) alignment: the window ends at the output
/// timestamp, so no future information leaks in.
pub struct RollingMean {
    descriptor: ModuleDescriptor,
    window: usize,
}

impl RollingMean {
    pub fn new(params: &Params) -> Result<Self> {
        let window = params.get_usize_min("window", 1)?;
        Ok(Self {
            descriptor: ModuleDescriptor::transform_only(
                "rolling_mean",
                params.clone(),
                Some(window - 1),
            ),
            window,
        })
    }
}

pub(crate) fn build(params: &Params, _registry: &Registry) -> Result<Box<dyn Module>> {
    Ok(Box::new(RollingMean::new(params)?))
}

impl Module for RollingMean {
    fn descriptor(&self) -> &ModuleDescriptor {
        &self.descriptor
    }

    fn transform(&self, _state: &ModuleState, inputs: &DataSet) -> Result<DataSet> {
        let x = input_x(inputs)?;
        if self.window > x.len() {
            return Err(Error::WindowTooLarge {
                window: self.window,
                len: x.len(),
            });
        }
        output(map_columns(x, |col| {
            let mut out = Vec::with_capacity(col.len());
            for t in 0..col.len() {
                if t + 1 < self.window {
                    out.push(f64::NAN);
                    continue;
                }
                let window = &col[t + 1 - self.window..=t];
                let mut sum = 0.0;
                let mut count = 0usize;
                for &v in window {
                    if v.is_finite() {
                        sum += v;
                        count += 1;
                    }
                }
                out.push(if count == 0 { f64::NAN } else { sum / count as f64 });
            }
            Ok(out)
        })?)
    }
}
