//! Ordinary least squares via ridge-stabilized normal equations.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::estimators::{feature_rows, FeatureSchema};
use crate::module::{blob, Module, ModuleDescriptor, ModuleState, Params, Registry};
use crate::timeseries::{DataSet, TimeArray};

const DEFAULT_RIDGE_EPSILON: f64 = 1e-8;

/// Linear regression of a scalar target on the flattened input features.
/// Fitting solves (XᵀX + εI)w = Xᵀy with a fixed ε for rank safety, which
/// keeps results deterministic and bit-reproducible through save/load.
/// Rows containing NaN in any feature or the target are dropped jointly.
pub struct OlsRegression {
    descriptor: ModuleDescriptor,
    ridge_epsilon: f64,
}

impl OlsRegression {
    pub fn new(params: &Params) -> Result<Self> {
        let ridge_epsilon = params.get_float_or("ridge_epsilon", DEFAULT_RIDGE_EPSILON)?;
        if !(ridge_epsilon >= 0.0) {
            return Err(Error::InvalidParam {
                name: "ridge_epsilon".into(),
                message: "must be a non-negative number".into(),
            });
        }
        Ok(Self {
            descriptor: ModuleDescriptor::trainable("ols", params.clone()),
            ridge_epsilon,
        })
    }
}

pub(crate) fn build(params: &Params, _registry: &Registry) -> Result<Box<dyn Module>> {
    Ok(Box::new(OlsRegression::new(params)?))
}

/// The fitted coefficients, decoded from a state blob.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub schema_width: usize,
    pub coefficients: Vec<f64>,
    pub intercept: f64,
}

struct FittedOls {
    schema: FeatureSchema,
    coefficients: Vec<f64>,
    intercept: f64,
}

impl FittedOls {
    fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.schema.encode(&mut out);
        blob::put_u32(&mut out, self.coefficients.len() as u32);
        for &c in &self.coefficients {
            blob::put_f64(&mut out, c);
        }
        blob::put_f64(&mut out, self.intercept);
        out
    }

    fn decode(bytes: &[u8]) -> Result<Self> {
        let mut r = blob::Reader::new(bytes);
        let schema = FeatureSchema::decode(&mut r)?;
        let count = r.u32()? as usize;
        let mut coefficients = Vec::with_capacity(count);
        for _ in 0..count {
            coefficients.push(r.f64()?);
        }
        let intercept = r.f64()?;
        r.done()?;
        Ok(Self {
            schema,
            coefficients,
            intercept,
        })
    }
}

impl OlsRegression {
    /// Decodes the fitted coefficients for inspection in tests and tools.
    pub fn model(&self, state: &ModuleState) -> Result<LinearModel> {
        let fitted = FittedOls::decode(state.blob())?;
        Ok(LinearModel {
            schema_width: fitted.schema.width(),
            coefficients: fitted.coefficients,
            intercept: fitted.intercept,
        })
    }
}

impl Module for OlsRegression {
    fn descriptor(&self) -> &ModuleDescriptor {
        &self.descriptor
    }

    fn fit(&self, inputs: &DataSet, target: Option<&DataSet>) -> Result<ModuleState> {
        let target = target.ok_or_else(|| Error::SchemaMismatch {
            message: "ols needs a fit target".into(),
        })?;
        let y_array = target.single()?;
        if y_array.row_width() != 1 {
            return Err(Error::SchemaMismatch {
                message: "ols target must be a scalar series".into(),
            });
        }
        if Some(y_array.index()) != inputs.index() {
            return Err(Error::SchemaMismatch {
                message: "ols inputs and target must share one time index".into(),
            });
        }

        let schema = FeatureSchema::of(inputs);
        let rows = feature_rows(inputs);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (row, t) in rows.iter().zip(0..) {
            let y = y_array.value(t);
            if y.is_finite() && row.iter().all(|v| v.is_finite()) {
                xs.push(row.clone());
                ys.push(y);
            }
        }
        if xs.len() < 2 {
            return Err(Error::InsufficientData {
                needed: 2,
                got: xs.len(),
            });
        }

        let n = xs.len();
        let k = schema.width() + 1; // + intercept column
        let design = DMatrix::from_fn(n, k, |r, c| if c < k - 1 { xs[r][c] } else { 1.0 });
        let y = DVector::from_vec(ys);
        let mut normal = design.transpose() * &design;
        for d in 0..k {
            normal[(d, d)] += self.ridge_epsilon;
        }
        let rhs = design.transpose() * y;
        let solution = normal
            .clone()
            .cholesky()
            .map(|c| c.solve(&rhs))
            .or_else(|| normal.lu().solve(&rhs))
            .ok_or(Error::DegenerateDesign)?;

        let fitted = FittedOls {
            schema,
            coefficients: solution.as_slice()[..k - 1].to_vec(),
            intercept: solution[k - 1],
        };
        Ok(ModuleState::fitted(fitted.encode()))
    }

    fn transform(&self, state: &ModuleState, inputs: &DataSet) -> Result<DataSet> {
        (self as &dyn Module).ensure_fitted(state)?;
        let fitted = FittedOls::decode(state.blob())?;
        fitted.schema.check(inputs)?;
        let index = inputs
            .index()
            .cloned()
            .unwrap_or_else(crate::timeseries::TimeIndex::empty);
        let rows = feature_rows(inputs);
        let predictions: Vec<f64> = rows
            .iter()
            .map(|row| {
                if row.iter().any(|v| !v.is_finite()) {
                    f64::NAN
                } else {
                    row.iter()
                        .zip(&fitted.coefficients)
                        .map(|(x, w)| x * w)
                        .sum::<f64>()
                        + fitted.intercept
                }
            })
            .collect();
        DataSet::from_arrays([TimeArray::series("y_hat", index, predictions)?])
    }
}
