//! A workflow engine for time-series analysis.
//!
//! Pipelines are directed acyclic graphs of steps; each step binds one
//! module (an algorithm with a fit/transform lifecycle) to named upstream
//! dependencies. Pipelines execute in batch or online mode, route rows
//! through if-then-else conditions, nest as subpipelines, and save/load
//! with bitwise-reproducible outputs.
//!
//! The crate is organized around five pieces:
//!
//! - [`timeseries`]: the immutable labeled data model flowing along edges.
//! - [`module`]: the uniform algorithm contract plus the type registry.
//! - [`transforms`]: the library of fit-free algorithms.
//! - [`estimators`]: trainable modules (least squares, scaler) and a
//!   persistence baseline.
//! - [`engine`]: graph construction, execution, conditions, subpipelines,
//!   and persistence, plus the [`definition`] format and [`csvio`] for the
//!   command-line front end.

pub mod csvio;
pub mod definition;
pub mod engine;
pub mod error;
pub mod estimators;
pub mod module;
pub mod timeseries;
pub mod transforms;

pub use definition::{parse_definition, serialize_definition, PipelineDefinition, StepDef};
pub use engine::{CallbackSpec, Pipeline, PredicateRef, RunOutput, Step, StepKind};
pub use error::{Error, Result};
pub use module::{
    Module, ModuleDescriptor, ModuleState, ParamValue, Params, Registry,
};
pub use timeseries::{
    align, concat_time, slice_time, DataSet, TimeArray, TimeIndex, Timestamp,
};
