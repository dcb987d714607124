//! Native trainable modules: least-squares regression, standard scaling,
//! and a persistence baseline. All fitted state is immutable and
//! serializes bit-exactly through the module state envelope.

mod ols;
mod persistence;
mod scaler;

pub use ols::OlsRegression;
pub use persistence::PersistenceForecast;
pub use scaler::StandardScaler;

use crate::error::{Error, Result};
use crate::module::{blob, Registry};
use crate::timeseries::DataSet;

pub(crate) fn register(registry: &mut Registry) {
    registry
        .register_module("ols", ols::build)
        .and_then(|_| registry.register_module("scaler", scaler::build))
        .and_then(|_| registry.register_module("persistence", persistence::build))
        .expect("builtin estimator ids are unique");
}

/// The flattened feature layout of a data set: arrays in sorted name
/// order, each contributing its row width of columns. Fixed at fit time
/// and enforced at transform time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct FeatureSchema {
    columns: Vec<(String, usize)>,
}

impl FeatureSchema {
    pub fn of(d: &DataSet) -> Self {
        Self {
            columns: d
                .arrays()
                .map(|a| (a.name().to_string(), a.row_width()))
                .collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.columns.iter().map(|(_, w)| w).sum()
    }

    pub fn check(&self, d: &DataSet) -> Result<()> {
        let seen = Self::of(d);
        if seen == *self {
            Ok(())
        } else {
            Err(Error::SchemaMismatch {
                message: format!(
                    "inputs {:?} do not match the fitted schema {:?}",
                    seen.columns, self.columns
                ),
            })
        }
    }

    pub fn encode(&self, out: &mut Vec<u8>) {
        blob::put_u32(out, self.columns.len() as u32);
        for (name, width) in &self.columns {
            blob::put_str(out, name);
            blob::put_u32(out, *width as u32);
        }
    }

    pub fn decode(r: &mut blob::Reader<'_>) -> Result<Self> {
        let count = r.u32()? as usize;
        let mut columns = Vec::with_capacity(count);
        for _ in 0..count {
            let name = r.str()?;
            let width = r.u32()? as usize;
            columns.push((name, width));
        }
        Ok(Self { columns })
    }
}

/// One flattened feature row per timestamp, in schema order.
pub(crate) fn feature_rows(d: &DataSet) -> Vec<Vec<f64>> {
    let arrays: Vec<_> = d.arrays().collect();
    (0..d.rows())
        .map(|t| {
            let mut row = Vec::new();
            for a in &arrays {
                row.extend_from_slice(a.row(t));
            }
            row
        })
        .collect()
}
