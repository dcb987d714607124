//! Pure observers fired with a step's intermediate result. Callbacks never
//! alter outputs; running with or without them yields identical sinks.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::timeseries::DataSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CallbackSpec {
    /// Writes the step result to a CSV file, optionally rounding floats to
    /// a fixed number of decimals for display purposes.
    CsvWriter {
        path: PathBuf,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        precision: Option<usize>,
    },
    /// Logs one summary line per array: length and basic statistics.
    SummaryPrinter,
}

impl CallbackSpec {
    pub fn execute(&self, step_id: &str, result: &DataSet) -> Result<()> {
        match self {
            CallbackSpec::CsvWriter { path, precision } => {
                crate::csvio::write_csv_with_precision(result, path, *precision)
            }
            CallbackSpec::SummaryPrinter => {
                for array in result.arrays() {
                    let finite: Vec<f64> = array
                        .values()
                        .iter()
                        .copied()
                        .filter(|v| v.is_finite())
                        .collect();
                    let mean = if finite.is_empty() {
                        f64::NAN
                    } else {
                        finite.iter().sum::<f64>() / finite.len() as f64
                    };
                    log::info!(
                        "step '{step_id}' array '{}': {} rows, {} finite values, mean {mean}",
                        array.name(),
                        array.len(),
                        finite.len(),
                    );
                }
                Ok(())
            }
        }
    }
}
