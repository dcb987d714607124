//! Lag-stack trend extraction: the series at whole-period offsets.

use crate::error::{Error, Result};
use crate::module::{Module, ModuleDescriptor, ModuleState, Params, Registry};
use crate::timeseries::{DataSet, TimeArray};
use crate::transforms::{input_x, output, require_scalar};

/// Feature i (0-based) at time t is x[t - (i+1) * period_steps], one column
/// per repetition. Out-of-range positions are NaN.
pub struct TrendExtraction {
    descriptor: ModuleDescriptor,
    period_steps: usize,
    repetitions: usize,
}

impl TrendExtraction {
    pub fn new(params: &Params) -> Result<Self> {
        let period_steps = params.get_usize_min("period_steps", 1)?;
        let repetitions = params.get_usize_min("repetitions", 1)?;
        Ok(Self {
            descriptor: ModuleDescriptor::transform_only(
                "trend",
                params.clone(),
                Some(period_steps * repetitions),
            ),
            period_steps,
            repetitions,
        })
    }
}

pub(crate) fn build(params: &Params, _registry: &Registry) -> Result<Box<dyn Module>> {
    Ok(Box::new(TrendExtraction::new(params)?))
}

impl Module for TrendExtraction {
    fn descriptor(&self) -> &ModuleDescriptor {
        &self.descriptor
    }

    fn transform(&self, _state: &ModuleState, inputs: &DataSet) -> Result<DataSet> {
        let x = input_x(inputs)?;
        require_scalar(x)?;
        let span = self.period_steps * self.repetitions;
        if span >= x.len() && !x.is_empty() {
            return Err(Error::PeriodTooLarge { span, len: x.len() });
        }
        let col = x.values();
        let mut values = Vec::with_capacity(col.len() * self.repetitions);
        for t in 0..col.len() {
            for i in 0..self.repetitions {
                let offset = (i + 1) * self.period_steps;
                values.push(match t.checked_sub(offset) {
                    Some(src) => col[src],
                    None => f64::NAN,
                });
            }
        }
        output(TimeArray::new(
            x.name(),
            x.index().clone(),
            values,
            vec![self.repetitions],
        )?)
    }
}
