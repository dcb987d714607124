//! Per-feature standardization with population moments.

use crate::error::{Error, Result};
use crate::estimators::{feature_rows, FeatureSchema};
use crate::module::{blob, Module, ModuleDescriptor, ModuleState, Params, Registry};
use crate::timeseries::{DataSet, TimeArray};

/// Centers and scales every feature column to zero mean and unit standard
/// deviation, using the population (not sample) convention. Columns with
/// zero spread are only centered. Rows containing NaN in any feature are
/// excluded from the fitted moments; at transform time NaN passes through.
pub struct StandardScaler {
    descriptor: ModuleDescriptor,
}

impl StandardScaler {
    pub fn new(params: &Params) -> Self {
        Self {
            descriptor: ModuleDescriptor::trainable("scaler", params.clone()),
        }
    }

    /// Decodes the fitted per-column moments.
    pub fn moments(&self, state: &ModuleState) -> Result<(Vec<f64>, Vec<f64>)> {
        let fitted = FittedScaler::decode(state.blob())?;
        Ok((fitted.means, fitted.stds))
    }

    /// Undoes a transform; the verification route for the round-trip
    /// property.
    pub fn inverse(&self, state: &ModuleState, outputs: &DataSet) -> Result<DataSet> {
        let fitted = FittedScaler::decode(state.blob())?;
        fitted.schema.check(outputs)?;
        fitted.apply(outputs, |v, mean, std| {
            if std == 0.0 {
                v + mean
            } else {
                v * std + mean
            }
        })
    }
}

pub(crate) fn build(params: &Params, _registry: &Registry) -> Result<Box<dyn Module>> {
    Ok(Box::new(StandardScaler::new(params)))
}

struct FittedScaler {
    schema: FeatureSchema,
    means: Vec<f64>,
    stds: Vec<f64>,
}

impl FittedScaler {
    fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.schema.encode(&mut out);
        blob::put_u32(&mut out, self.means.len() as u32);
        for &m in &self.means {
            blob::put_f64(&mut out, m);
        }
        for &s in &self.stds {
            blob::put_f64(&mut out, s);
        }
        out
    }

    fn decode(bytes: &[u8]) -> Result<Self> {
        let mut r = blob::Reader::new(bytes);
        let schema = FeatureSchema::decode(&mut r)?;
        let count = r.u32()? as usize;
        let mut means = Vec::with_capacity(count);
        for _ in 0..count {
            means.push(r.f64()?);
        }
        let mut stds = Vec::with_capacity(count);
        for _ in 0..count {
            stds.push(r.f64()?);
        }
        r.done()?;
        Ok(Self {
            schema,
            means,
            stds,
        })
    }

    /// Rebuilds every array with `op(value, mean, std)` applied per column.
    fn apply(&self, d: &DataSet, op: impl Fn(f64, f64, f64) -> f64) -> Result<DataSet> {
        let mut out = DataSet::new();
        let mut column = 0usize;
        for array in d.arrays() {
            let width = array.row_width();
            let mut values = Vec::with_capacity(array.len() * width);
            for t in 0..array.len() {
                for (c, &v) in array.row(t).iter().enumerate() {
                    values.push(if v.is_nan() {
                        f64::NAN
                    } else {
                        op(v, self.means[column + c], self.stds[column + c])
                    });
                }
            }
            out.insert(TimeArray::new(
                array.name(),
                array.index().clone(),
                values,
                array.feature_shape().to_vec(),
            )?)?;
            column += width;
        }
        Ok(out)
    }
}

impl Module for StandardScaler {
    fn descriptor(&self) -> &ModuleDescriptor {
        &self.descriptor
    }

    fn fit(&self, inputs: &DataSet, _target: Option<&DataSet>) -> Result<ModuleState> {
        let schema = FeatureSchema::of(inputs);
        let width = schema.width();
        let rows: Vec<Vec<f64>> = feature_rows(inputs)
            .into_iter()
            .filter(|row| row.iter().all(|v| v.is_finite()))
            .collect();
        if rows.is_empty() {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        let n = rows.len() as f64;
        let mut means = vec![0.0; width];
        for row in &rows {
            for (c, &v) in row.iter().enumerate() {
                means[c] += v;
            }
        }
        for m in &mut means {
            *m /= n;
        }
        let mut stds = vec![0.0; width];
        for row in &rows {
            for (c, &v) in row.iter().enumerate() {
                stds[c] += (v - means[c]) * (v - means[c]);
            }
        }
        for s in &mut stds {
            *s = (*s / n).sqrt();
        }
        let fitted = FittedScaler {
            schema,
            means,
            stds,
        };
        Ok(ModuleState::fitted(fitted.encode()))
    }

    fn transform(&self, state: &ModuleState, inputs: &DataSet) -> Result<DataSet> {
        (self as &dyn Module).ensure_fitted(state)?;
        let fitted = FittedScaler::decode(state.blob())?;
        fitted.schema.check(inputs)?;
        fitted.apply(inputs, |v, mean, std| {
            if std == 0.0 {
                v - mean
            } else {
                (v - mean) / std
            }
        })
    }
}
