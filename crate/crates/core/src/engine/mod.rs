//! The pipeline engine: a DAG of steps over a shared data model, with
//! batch and online execution, per-timestamp conditional routing,
//! subpipeline nesting, callbacks, and reproducible save/load.

mod callback;
mod execute;
mod manifest;
mod online;
mod pipeline;
mod predicate;
mod step;
mod subpipeline;

pub use callback::CallbackSpec;
pub use execute::RunOutput;
pub use manifest::MANIFEST_VERSION;
pub use pipeline::Pipeline;
pub use step::{ConditionSpec, ModuleRef, PredicateRef, Step, StepKind};
pub use subpipeline::{as_subpipeline_params, SubpipelineModule};

use crate::module::Registry;

pub(crate) fn register(registry: &mut Registry) {
    registry
        .register_module("subpipeline", subpipeline::build)
        .expect("builtin engine ids are unique");
    predicate::register(registry);
}
