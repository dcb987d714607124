//! The train / run / run-online / validate commands and their exit codes.
//!
//! Exit code mapping: 1 usage, 2 definition parsing or validation,
//! 3 data and saved-artifact problems, 4 execution failures.

use std::fmt;
use std::fs;
use std::path::Path;

use tspipe_core::{csvio, parse_definition, Error, Pipeline, Registry, RunOutput};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(Error),
    Data(Error),
    Execution(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Data(_) => 3,
            CliError::Execution(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(message) => write!(f, "{message}"),
            CliError::Parse(e) | CliError::Data(e) | CliError::Execution(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

fn read_definition(path: &Path) -> Result<tspipe_core::PipelineDefinition, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Data(Error::Io(e)))?;
    parse_definition(&text).map_err(CliError::Parse)
}

fn build_pipeline(path: &Path, registry: &Registry) -> Result<Pipeline, CliError> {
    let def = read_definition(path)?;
    Pipeline::from_definition(&def, registry).map_err(CliError::Parse)
}

fn read_data(path: &Path) -> Result<tspipe_core::DataSet, CliError> {
    csvio::read_csv(path).map_err(CliError::Data)
}

fn write_sinks(output: &RunOutput, out_dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(out_dir).map_err(|e| CliError::Data(Error::Io(e)))?;
    for (sink, data) in &output.sinks {
        let path = out_dir.join(format!("{sink}.csv"));
        csvio::write_csv(data, &path).map_err(CliError::Data)?;
        log::info!("wrote sink '{sink}' to {}", path.display());
    }
    Ok(())
}

/// Parses and validates a definition without running anything.
pub fn cmd_validate(pipeline_path: &Path, registry: &Registry) -> Result<(), CliError> {
    let pipeline = build_pipeline(pipeline_path, registry)?;
    println!(
        "ok: {} steps, {} sources, {} sinks",
        pipeline.step_ids().count(),
        pipeline.sources().len(),
        pipeline.sinks().len()
    );
    Ok(())
}

/// Builds the pipeline from a definition, trains it on the CSV data, and
/// writes the sink CSVs plus the fitted pipeline directory.
pub fn cmd_train(
    pipeline_path: &Path,
    data_path: &Path,
    out_dir: &Path,
    registry: &Registry,
) -> Result<(), CliError> {
    let mut pipeline = build_pipeline(pipeline_path, registry)?;
    let data = read_data(data_path)?;
    let output = pipeline.train(&data).map_err(CliError::Execution)?;
    write_sinks(&output, out_dir)?;
    let saved = out_dir.join("pipeline");
    pipeline.save(&saved).map_err(CliError::Data)?;
    log::info!("saved fitted pipeline to {}", saved.display());
    Ok(())
}

/// Loads a saved pipeline directory and executes it in batch mode.
pub fn cmd_run(
    pipeline_dir: &Path,
    data_path: &Path,
    out_dir: &Path,
    registry: &Registry,
) -> Result<(), CliError> {
    let pipeline = Pipeline::load(pipeline_dir, registry).map_err(CliError::Data)?;
    let data = read_data(data_path)?;
    let output = pipeline.run(&data).map_err(CliError::Execution)?;
    write_sinks(&output, out_dir)
}

/// Loads a saved pipeline directory and executes it one timestamp at a
/// time.
pub fn cmd_run_online(
    pipeline_dir: &Path,
    data_path: &Path,
    out_dir: &Path,
    registry: &Registry,
) -> Result<(), CliError> {
    let pipeline = Pipeline::load(pipeline_dir, registry).map_err(CliError::Data)?;
    let data = read_data(data_path)?;
    let output = pipeline.run_online(&data).map_err(CliError::Execution)?;
    write_sinks(&output, out_dir)
}
