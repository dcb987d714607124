//! Linear interpolation of missing values against timestamp distance.

use crate::error::{Error, Result};
use crate::module::{Module, ModuleDescriptor, ModuleState, Params, Registry};
use crate::timeseries::{DataSet, Timestamp};
use crate::transforms::{input_x, map_columns, output};

/// Replaces interior NaN runs with a straight line between the surrounding
/// finite values, weighted by timestamp distance. Leading and trailing NaN
/// take the nearest finite value. Needs the whole series, so it declares
/// no finite lookback.
pub struct LinearInterpolate {
    descriptor: ModuleDescriptor,
}

impl LinearInterpolate {
    pub fn new(params: &Params) -> Self {
        Self {
            descriptor: ModuleDescriptor::transform_only("interpolate", params.clone(), None),
        }
    }
}

pub(crate) fn build(params: &Params, _registry: &Registry) -> Result<Box<dyn Module>> {
    Ok(Box::new(LinearInterpolate::new(params)))
}

pub(crate) fn interpolate_column(col: &[f64], stamps: &[Timestamp]) -> Result<Vec<f64>> {
    let finite: Vec<usize> = (0..col.len()).filter(|&i| col[i].is_finite()).collect();
    if finite.is_empty() {
        return Err(Error::AllMissing);
    }
    let mut out = col.to_vec();
    // Leading and trailing edges take the nearest finite value.
    let (first, last) = (finite[0], *finite.last().unwrap());
    for v in out.iter_mut().take(first) {
        *v = col[first];
    }
    for v in out.iter_mut().skip(last + 1) {
        *v = col[last];
    }
    // Interior runs interpolate between their finite neighbors.
    for pair in finite.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        if hi - lo <= 1 {
            continue;
        }
        let (t0, t1) = (stamps[lo] as f64, stamps[hi] as f64);
        let (y0, y1) = (col[lo], col[hi]);
        for i in lo + 1..hi {
            let w = (stamps[i] as f64 - t0) / (t1 - t0);
            out[i] = y0 + (y1 - y0) * w;
        }
    }
    Ok(out)
}

impl Module for LinearInterpolate {
    fn descriptor(&self) -> &ModuleDescriptor {
        &self.descriptor
    }

    fn transform(&self, _state: &ModuleState, inputs: &DataSet) -> Result<DataSet> {
        let x = input_x(inputs)?;
        let stamps = x.index().as_slice().to_vec();
        output(map_columns(x, |col| interpolate_column(col, &stamps))?)
    }
}
