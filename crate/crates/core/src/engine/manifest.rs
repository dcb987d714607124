//! Saving and loading whole pipelines: a manifest with structure and
//! parameters plus one state blob file per fitted step.
//!
//! Directory layout: `manifest.json` and `state/<step_id>.bin`. Parameters
//! live in the manifest; learned values live in the blobs. Loading
//! reconstructs a pipeline whose run output is bitwise identical.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::engine::callback::CallbackSpec;
use crate::engine::pipeline::Pipeline;
use crate::engine::step::{ConditionSpec, ModuleRef, PredicateRef, Step, StepKind};
use crate::error::{Error, Result};
use crate::module::{decode_state, encode_state, Params, Registry};

pub const MANIFEST_VERSION: u32 = 1;
const MANIFEST_FILE: &str = "manifest.json";
const STATE_DIR: &str = "state";

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    format_version: u32,
    sources: Vec<String>,
    sinks: Vec<String>,
    steps: Vec<ManifestStep>,
    edges: Vec<ManifestEdge>,
    conditions: Vec<ManifestCondition>,
    callbacks: Vec<ManifestCallback>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ManifestStep {
    id: String,
    name: String,
    /// Absent for condition steps, which carry no module of their own.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    type_id: Option<String>,
    #[serde(default, skip_serializing_if = "Params::is_empty")]
    params: Params,
}

#[derive(Debug, Serialize, Deserialize)]
struct ManifestEdge {
    from: String,
    to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    input: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    target: bool,
}

#[derive(Debug, Serialize, Deserialize)]
struct ManifestCondition {
    step: String,
    predicate: String,
    #[serde(default, skip_serializing_if = "Params::is_empty")]
    predicate_params: Params,
    then: String,
    #[serde(rename = "else")]
    else_branch: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct ManifestCallback {
    step: String,
    #[serde(flatten)]
    callback: CallbackSpec,
}

impl Pipeline {
    /// Writes the manifest and one state file per fitted step.
    pub fn save(&self, dir: &Path) -> Result<()> {
        self.validate()?;
        fs::create_dir_all(dir)?;

        let mut steps = Vec::new();
        let mut edges = Vec::new();
        let mut conditions = Vec::new();
        let mut callbacks = Vec::new();
        for (id, step) in &self.steps {
            let (type_id, params) = match &step.kind {
                StepKind::Module(mref) => (Some(mref.type_id.clone()), mref.params.clone()),
                StepKind::Condition(cond) => {
                    conditions.push(ManifestCondition {
                        step: id.clone(),
                        predicate: cond.predicate.id.clone(),
                        predicate_params: cond.predicate.params.clone(),
                        then: cond.then_step.clone(),
                        else_branch: cond.else_step.clone(),
                    });
                    (None, Params::new())
                }
            };
            steps.push(ManifestStep {
                id: id.clone(),
                name: step.name.clone(),
                type_id,
                params,
            });
            for (input, upstream) in &step.inputs {
                edges.push(ManifestEdge {
                    from: upstream.clone(),
                    to: id.clone(),
                    input: Some(input.clone()),
                    target: false,
                });
            }
            if let Some(target) = &step.target {
                edges.push(ManifestEdge {
                    from: target.clone(),
                    to: id.clone(),
                    input: None,
                    target: true,
                });
            }
            for callback in &step.callbacks {
                callbacks.push(ManifestCallback {
                    step: id.clone(),
                    callback: callback.clone(),
                });
            }
        }

        let manifest = Manifest {
            format_version: MANIFEST_VERSION,
            sources: self.sources.clone(),
            sinks: self.sinks.clone(),
            steps,
            edges,
            conditions,
            callbacks,
        };
        let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        text.push('\n');
        fs::write(dir.join(MANIFEST_FILE), text)?;

        let state_dir = dir.join(STATE_DIR);
        fs::create_dir_all(&state_dir)?;
        for (id, state) in &self.states {
            if state.is_fitted() {
                let type_id = &self.modules[id].descriptor().type_id;
                fs::write(
                    state_dir.join(format!("{id}.bin")),
                    encode_state(type_id, state),
                )?;
            }
        }
        Ok(())
    }

    /// Rebuilds a pipeline saved by [`Pipeline::save`].
    pub fn load(dir: &Path, registry: &Registry) -> Result<Self> {
        let text = fs::read_to_string(dir.join(MANIFEST_FILE))?;
        let manifest: Manifest = serde_json::from_str(&text).map_err(|e| Error::DefinitionSyntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if manifest.format_version != MANIFEST_VERSION {
            return Err(Error::ManifestVersionMismatch {
                expected: MANIFEST_VERSION,
                found: manifest.format_version,
            });
        }

        let conditions: BTreeMap<&str, &ManifestCondition> = manifest
            .conditions
            .iter()
            .map(|c| (c.step.as_str(), c))
            .collect();

        let mut pipeline = Pipeline::new(manifest.sources.clone());
        for entry in &manifest.steps {
            let kind = match (&entry.type_id, conditions.get(entry.id.as_str())) {
                (Some(type_id), None) => {
                    StepKind::Module(ModuleRef::new(type_id, entry.params.clone()))
                }
                (None, Some(cond)) => StepKind::Condition(ConditionSpec {
                    predicate: PredicateRef {
                        id: cond.predicate.clone(),
                        params: cond.predicate_params.clone(),
                    },
                    then_step: cond.then.clone(),
                    else_step: cond.else_branch.clone(),
                }),
                _ => {
                    return Err(Error::InvalidDefinition {
                        location: format!("step '{}'", entry.id),
                        message: "manifest step needs either a type_id or a condition entry"
                            .into(),
                    })
                }
            };
            let mut step = Step {
                id: entry.id.clone(),
                name: entry.name.clone(),
                kind,
                inputs: BTreeMap::new(),
                target: None,
                callbacks: Vec::new(),
            };
            for edge in manifest.edges.iter().filter(|e| e.to == entry.id) {
                if edge.target {
                    step.target = Some(edge.from.clone());
                } else if let Some(input) = &edge.input {
                    step.inputs.insert(input.clone(), edge.from.clone());
                } else {
                    return Err(Error::InvalidDefinition {
                        location: format!("edge {} -> {}", edge.from, edge.to),
                        message: "edge needs an input name or the target flag".into(),
                    });
                }
            }
            for cb in manifest.callbacks.iter().filter(|c| c.step == entry.id) {
                step.callbacks.push(cb.callback.clone());
            }
            pipeline.insert_unchecked(step, registry)?;
        }
        pipeline.set_sinks(manifest.sinks.clone())?;
        pipeline.validate()?;

        let state_dir = dir.join(STATE_DIR);
        for (id, module) in &pipeline.modules {
            let path = state_dir.join(format!("{id}.bin"));
            if path.exists() {
                let bytes = fs::read(&path)?;
                let state = decode_state(&module.descriptor().type_id, &bytes)
                    .map_err(|e| e.at_step(id))?;
                pipeline.states.insert(id.clone(), state);
            }
        }
        Ok(pipeline)
    }
}
