//! Changes the temporal resolution of an equidistant series.

use crate::error::{Error, Result};
use crate::module::{Module, ModuleDescriptor, ModuleState, Params, Registry};
use crate::timeseries::{DataSet, TimeIndex};
use crate::transforms::{input_x, output};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Mean,
    Sum,
    Min,
    Max,
    Forward,
    Linear,
}

impl Mode {
    fn parse(text: &str) -> Result<Self> {
        Ok(match text {
            "mean" => Mode::Mean,
            "sum" => Mode::Sum,
            "min" => Mode::Min,
            "max" => Mode::Max,
            "forward" => Mode::Forward,
            "linear" => Mode::Linear,
            other => {
                return Err(Error::InvalidParam {
                    name: "mode".into(),
                    message: format!(
                        "'{other}' is not one of mean, sum, min, max, forward, linear"
                    ),
                })
            }
        })
    }

    fn is_aggregation(self) -> bool {
        matches!(self, Mode::Mean | Mode::Sum | Mode::Min | Mode::Max)
    }
}

/// Downsamples by NaN-skipping aggregation over buckets of the target step,
/// or upsamples by forward or linear fill. The output index starts at the
/// input's first timestamp and is equidistant at the target step.
pub struct Resample {
    descriptor: ModuleDescriptor,
    target_step: i64,
    mode: Mode,
}

impl Resample {
    pub fn new(params: &Params) -> Result<Self> {
        let target_step = params.get_duration_secs("target_step")?;
        if target_step <= 0 {
            return Err(Error::InvalidParam {
                name: "target_step".into(),
                message: "must be a positive duration".into(),
            });
        }
        let mode = Mode::parse(params.get_str("mode")?)?;
        let descriptor = ModuleDescriptor {
            type_id: "resample".into(),
            params: params.clone(),
            requires_fit: false,
            lookback: None,
            resamples: true,
        };
        Ok(Self {
            descriptor,
            target_step,
            mode,
        })
    }
}

pub(crate) fn build(params: &Params, _registry: &Registry) -> Result<Box<dyn Module>> {
    Ok(Box::new(Resample::new(params)?))
}

fn aggregate(values: impl Iterator<Item = f64>, mode: Mode) -> f64 {
    let finite: Vec<f64> = values.filter(|v| v.is_finite()).collect();
    if finite.is_empty() {
        return f64::NAN;
    }
    match mode {
        Mode::Mean => finite.iter().sum::<f64>() / finite.len() as f64,
        Mode::Sum => finite.iter().sum(),
        Mode::Min => finite.iter().copied().fold(f64::INFINITY, f64::min),
        Mode::Max => finite.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        _ => unreachable!("fill modes never aggregate"),
    }
}

impl Module for Resample {
    fn descriptor(&self) -> &ModuleDescriptor {
        &self.descriptor
    }

    fn transform(&self, _state: &ModuleState, inputs: &DataSet) -> Result<DataSet> {
        let x = input_x(inputs)?;
        let input_step = x.index().uniform_step().ok_or(Error::NonEquidistantInput)?;
        let stamps = x.index().as_slice();
        let first = stamps[0];
        let last = *stamps.last().unwrap();
        let width = x.row_width();

        if self.target_step == input_step {
            return output(x.clone());
        }

        let incompatible = Error::IncompatibleStep {
            input_secs: input_step,
            target_secs: self.target_step,
        };

        if self.target_step > input_step {
            // Downsample: bucket [start, start + target_step).
            if self.target_step % input_step != 0 {
                return Err(incompatible);
            }
            if !self.mode.is_aggregation() {
                return Err(Error::InvalidParam {
                    name: "mode".into(),
                    message: "downsampling needs an aggregation mode (mean, sum, min, max)".into(),
                });
            }
            let per_bucket = (self.target_step / input_step) as usize;
            let bucket_count = (last - first) as usize / self.target_step as usize + 1;
            let out_index = TimeIndex::equidistant(first, self.target_step, bucket_count)?;
            let mut values = Vec::with_capacity(bucket_count * width);
            for b in 0..bucket_count {
                let lo = b * per_bucket;
                let hi = ((b + 1) * per_bucket).min(x.len());
                for c in 0..width {
                    values.push(aggregate(
                        (lo..hi).map(|r| x.row(r)[c]),
                        self.mode,
                    ));
                }
            }
            return output(crate::timeseries::TimeArray::new(
                x.name(),
                out_index,
                values,
                x.feature_shape().to_vec(),
            )?);
        }

        // Upsample: each input point covers one input step, so the output
        // extends to the end of the last point's interval and down-then-up
        // round-trips on the index.
        if input_step % self.target_step != 0 {
            return Err(incompatible);
        }
        if self.mode.is_aggregation() {
            return Err(Error::InvalidParam {
                name: "mode".into(),
                message: "upsampling needs a fill mode (forward, linear)".into(),
            });
        }
        let per_point = (input_step / self.target_step) as usize;
        let out_len = x.len() * per_point;
        let out_index = TimeIndex::equidistant(first, self.target_step, out_len)?;
        let mut values = Vec::with_capacity(out_len * width);
        for ts in out_index.iter() {
            let offset = (ts - first) as f64 / input_step as f64;
            let below = offset.floor() as usize;
            let frac = offset - below as f64;
            for c in 0..width {
                let v = if frac == 0.0 {
                    x.row(below)[c]
                } else {
                    match self.mode {
                        Mode::Forward => x.row(below)[c],
                        // Past the last input point there is no right
                        // neighbor; the tail holds its value.
                        Mode::Linear if below + 1 >= x.len() => x.row(below)[c],
                        Mode::Linear => {
                            let y0 = x.row(below)[c];
                            let y1 = x.row(below + 1)[c];
                            y0 + (y1 - y0) * frac
                        }
                        _ => unreachable!(),
                    }
                };
                values.push(v);
            }
        }
        output(crate::timeseries::TimeArray::new(
            x.name(),
            out_index,
            values,
            x.feature_shape().to_vec(),
        )?)
    }
}
