//! Native library of fit-free time-series transforms.
//!
//! All transforms keep the input time index and pad undefined leading
//! outputs with NaN; the resampler is the declared exception. Every
//! transform is deterministic and never mutates its input.

mod calendar;
mod diff;
mod direction;
mod interpolate;
mod metrics;
mod missing;
mod resample;
mod rolling;
mod sampler;
pub(crate) mod shift;
mod trend;

pub use calendar::CalendarExtraction;
pub use diff::Differentiate;
pub use direction::ChangeDirection;
pub use interpolate::LinearInterpolate;
pub use metrics::{rmse_value, Rmse};
pub use missing::MissingMask;
pub use resample::Resample;
pub use rolling::RollingMean;
pub use sampler::Sampler;
pub use shift::ClockShift;
pub use trend::TrendExtraction;

use crate::error::{Error, Result};
use crate::module::Registry;
use crate::timeseries::{DataSet, TimeArray};

pub(crate) fn register(registry: &mut Registry) {
    registry
        .register_module("calendar", calendar::build)
        .and_then(|_| registry.register_module("change_direction", direction::build))
        .and_then(|_| registry.register_module("clock_shift", shift::build))
        .and_then(|_| registry.register_module("differentiate", diff::build))
        .and_then(|_| registry.register_module("interpolate", interpolate::build))
        .and_then(|_| registry.register_module("missing_mask", missing::build))
        .and_then(|_| registry.register_module("resample", resample::build))
        .and_then(|_| registry.register_module("rolling_mean", rolling::build))
        .and_then(|_| registry.register_module("rmse", metrics::build))
        .and_then(|_| registry.register_module("sampler", sampler::build))
        .and_then(|_| registry.register_module("trend", trend::build))
        .expect("builtin transform ids are unique");
}

/// The single series input every one-input transform expects under the
/// name "x".
pub(crate) fn input_x(inputs: &DataSet) -> Result<&TimeArray> {
    inputs.require("x")
}

/// Rejects multi-feature inputs for transforms that build a feature axis
/// of their own.
pub(crate) fn require_scalar(x: &TimeArray) -> Result<()> {
    if x.is_scalar() {
        Ok(())
    } else {
        Err(Error::SchemaMismatch {
            message: format!(
                "input '{}' must be a scalar series, has feature shape {:?}",
                x.name(),
                x.feature_shape()
            ),
        })
    }
}

/// Applies a column function independently to every feature column,
/// keeping name, index, and shape.
pub(crate) fn map_columns(
    x: &TimeArray,
    mut f: impl FnMut(&[f64]) -> Result<Vec<f64>>,
) -> Result<TimeArray> {
    let width = x.row_width();
    let rows = x.len();
    let mut columns = Vec::with_capacity(width);
    for c in 0..width {
        let out = f(&x.column(c))?;
        debug_assert_eq!(out.len(), rows);
        columns.push(out);
    }
    let mut values = Vec::with_capacity(rows * width);
    for r in 0..rows {
        for col in &columns {
            values.push(col[r]);
        }
    }
    TimeArray::new(
        x.name(),
        x.index().clone(),
        values,
        x.feature_shape().to_vec(),
    )
}

/// Wraps a single array as the output data set of a transform.
pub(crate) fn output(array: TimeArray) -> Result<DataSet> {
    DataSet::from_arrays([array])
}
