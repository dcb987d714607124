//! Declarative pipeline definitions: the JSON format the CLI consumes and
//! subpipelines embed.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::engine::{CallbackSpec, ConditionSpec, ModuleRef, Pipeline, PredicateRef, Step, StepKind};
use crate::error::{Error, Result};
use crate::module::{Params, Registry};

pub const DEFINITION_VERSION: u32 = 1;

/// A complete pipeline description: sources, steps, sinks, and optionally
/// named nested definitions that steps can reference as subpipelines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineDefinition {
    pub version: u32,
    pub sources: Vec<String>,
    pub steps: Vec<StepDef>,
    pub sinks: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub subpipelines: BTreeMap<String, PipelineDefinition>,
}

/// One step entry. Exactly one of `type`, `subpipeline`, or `condition`
/// must be present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepDef {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    pub type_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subpipeline: Option<String>,
    #[serde(default, skip_serializing_if = "Params::is_empty")]
    pub params: Params,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub inputs: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<ConditionDef>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub callbacks: Vec<CallbackSpec>,
}

impl StepDef {
    pub fn new(id: &str, type_id: &str) -> Self {
        Self {
            id: id.to_string(),
            name: None,
            type_id: Some(type_id.to_string()),
            subpipeline: None,
            params: Params::new(),
            inputs: BTreeMap::new(),
            target: None,
            condition: None,
            callbacks: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionDef {
    pub predicate: String,
    #[serde(default, skip_serializing_if = "Params::is_empty")]
    pub params: Params,
    pub then: String,
    #[serde(rename = "else")]
    pub else_branch: String,
}

/// Parses a definition, reporting syntax problems with their location.
pub fn parse_definition(text: &str) -> Result<PipelineDefinition> {
    serde_json::from_str(text).map_err(|e| Error::DefinitionSyntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Serializes a definition; `parse_definition` of the result yields an
/// equal value.
pub fn serialize_definition(def: &PipelineDefinition) -> String {
    serde_json::to_string_pretty(def).expect("definitions always serialize")
}

impl PipelineDefinition {
    pub fn new(sources: Vec<String>, steps: Vec<StepDef>, sinks: Vec<String>) -> Self {
        Self {
            version: DEFINITION_VERSION,
            sources,
            steps,
            sinks,
            subpipelines: BTreeMap::new(),
        }
    }

    /// Checks the definition's internal references without building any
    /// modules: ids unique, exactly one kind per step, all references
    /// resolvable.
    pub fn check_references(&self) -> Result<()> {
        if self.version != DEFINITION_VERSION {
            return Err(Error::ManifestVersionMismatch {
                expected: DEFINITION_VERSION,
                found: self.version,
            });
        }
        let mut ids: BTreeSet<&str> = BTreeSet::new();
        for step in &self.steps {
            if step.id.is_empty() {
                return Err(Error::InvalidDefinition {
                    location: "steps".into(),
                    message: "step id must not be empty".into(),
                });
            }
            if !ids.insert(&step.id) || self.sources.iter().any(|s| *s == step.id) {
                return Err(Error::DuplicateId {
                    id: step.id.clone(),
                });
            }
        }
        let known = |reference: &str| {
            ids.contains(reference) || self.sources.iter().any(|s| s == reference)
        };
        for step in &self.steps {
            let kinds = usize::from(step.type_id.is_some())
                + usize::from(step.subpipeline.is_some())
                + usize::from(step.condition.is_some());
            if kinds != 1 {
                return Err(Error::InvalidDefinition {
                    location: format!("step '{}'", step.id),
                    message: "exactly one of 'type', 'subpipeline', or 'condition' is required"
                        .into(),
                });
            }
            for reference in step.inputs.values().chain(step.target.as_ref()) {
                if !known(reference) {
                    return Err(Error::DanglingReference {
                        step: step.id.clone(),
                        reference: reference.clone(),
                    });
                }
            }
            if let Some(cond) = &step.condition {
                for reference in [&cond.then, &cond.else_branch] {
                    if !ids.contains(reference.as_str()) {
                        return Err(Error::DanglingReference {
                            step: step.id.clone(),
                            reference: reference.clone(),
                        });
                    }
                }
            }
            if let Some(name) = &step.subpipeline {
                if !self.subpipelines.contains_key(name) {
                    return Err(Error::DanglingReference {
                        step: step.id.clone(),
                        reference: name.clone(),
                    });
                }
            }
        }
        for sink in &self.sinks {
            if !ids.contains(sink.as_str()) {
                return Err(Error::DanglingReference {
                    step: "sinks".into(),
                    reference: sink.clone(),
                });
            }
        }
        Ok(())
    }
}

impl Pipeline {
    /// Builds and fully validates a pipeline from a definition. Named
    /// subpipeline references are inlined into self-contained
    /// "subpipeline" module steps.
    pub fn from_definition(def: &PipelineDefinition, registry: &Registry) -> Result<Self> {
        def.check_references()?;
        let mut pipeline = Pipeline::new(def.sources.clone());
        for step_def in &def.steps {
            let kind = if let Some(cond) = &step_def.condition {
                StepKind::Condition(ConditionSpec {
                    predicate: PredicateRef {
                        id: cond.predicate.clone(),
                        params: cond.params.clone(),
                    },
                    then_step: cond.then.clone(),
                    else_step: cond.else_branch.clone(),
                })
            } else if let Some(name) = &step_def.subpipeline {
                let inner = &def.subpipelines[name];
                let mut params = step_def.params.clone();
                params.insert("definition", serde_json::to_string(inner).unwrap());
                params.insert("name", name.as_str());
                StepKind::Module(ModuleRef::new("subpipeline", params))
            } else {
                let type_id = step_def.type_id.as_ref().expect("checked above");
                StepKind::Module(ModuleRef::new(type_id, step_def.params.clone()))
            };
            let step = Step {
                id: step_def.id.clone(),
                name: step_def.name.clone().unwrap_or_else(|| step_def.id.clone()),
                kind,
                inputs: step_def.inputs.clone(),
                target: step_def.target.clone(),
                callbacks: step_def.callbacks.clone(),
            };
            pipeline.insert_unchecked(step, registry)?;
        }
        pipeline.set_sinks(def.sinks.clone())?;
        pipeline.validate()?;
        Ok(pipeline)
    }
}
