//! Graph nodes: a step binds one module (or an if-then-else router) to
//! named upstream dependencies.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::engine::callback::CallbackSpec;
use crate::module::Params;

/// A module reference as stored in definitions and manifests: the registry
/// type id plus the parameters to build it from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuleRef {
    pub type_id: String,
    #[serde(default, skip_serializing_if = "Params::is_empty")]
    pub params: Params,
}

impl ModuleRef {
    pub fn new(type_id: &str, params: Params) -> Self {
        Self {
            type_id: type_id.to_string(),
            params,
        }
    }
}

/// A predicate reference: registered id plus parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredicateRef {
    pub id: String,
    #[serde(default, skip_serializing_if = "Params::is_empty")]
    pub params: Params,
}

/// Per-timestamp if-then-else routing. Rows where the predicate holds run
/// through the `then_step` branch, the rest through `else_step`; the two
/// branch outputs are merged back at the condition step, which is the
/// reconvergence point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionSpec {
    pub predicate: PredicateRef,
    pub then_step: String,
    pub else_step: String,
}

/// What a step executes.
#[derive(Debug, Clone, PartialEq)]
pub enum StepKind {
    Module(ModuleRef),
    Condition(ConditionSpec),
}

/// A node in the pipeline graph.
///
/// `inputs` maps the module's expected input names to upstream step ids or
/// source names; single-array upstream outputs are renamed to the input
/// name at hand-off, multi-array outputs get the input name as a prefix.
/// Branch steps (referenced from a [`ConditionSpec`]) declare no inputs of
/// their own: they receive the condition's routed rows directly.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub id: String,
    pub name: String,
    pub kind: StepKind,
    pub inputs: BTreeMap<String, String>,
    pub target: Option<String>,
    pub callbacks: Vec<CallbackSpec>,
}

impl Step {
    /// A module step with no bindings yet.
    pub fn module(id: &str, type_id: &str, params: Params) -> Self {
        Self {
            id: id.to_string(),
            name: id.to_string(),
            kind: StepKind::Module(ModuleRef::new(type_id, params)),
            inputs: BTreeMap::new(),
            target: None,
            callbacks: Vec::new(),
        }
    }

    /// A condition step routing rows between two previously added steps.
    pub fn condition(id: &str, predicate: PredicateRef, then_step: &str, else_step: &str) -> Self {
        Self {
            id: id.to_string(),
            name: id.to_string(),
            kind: StepKind::Condition(ConditionSpec {
                predicate,
                then_step: then_step.to_string(),
                else_step: else_step.to_string(),
            }),
            inputs: BTreeMap::new(),
            target: None,
            callbacks: Vec::new(),
        }
    }

    /// Binds an input name to an upstream step or source.
    pub fn with_input(mut self, input: &str, upstream: &str) -> Self {
        self.inputs.insert(input.to_string(), upstream.to_string());
        self
    }

    /// Sets the fit target to an upstream step or source.
    pub fn with_target(mut self, upstream: &str) -> Self {
        self.target = Some(upstream.to_string());
        self
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn with_callback(mut self, callback: CallbackSpec) -> Self {
        self.callbacks.push(callback);
        self
    }

    /// Upstream step ids and source names this step depends on.
    pub fn dependencies(&self) -> impl Iterator<Item = &str> {
        self.inputs.values().map(String::as_str).chain(self.target.as_deref())
    }

    pub fn module_ref(&self) -> Option<&ModuleRef> {
        match &self.kind {
            StepKind::Module(m) => Some(m),
            StepKind::Condition(_) => None,
        }
    }

    pub fn condition_spec(&self) -> Option<&ConditionSpec> {
        match &self.kind {
            StepKind::Condition(c) => Some(c),
            StepKind::Module(_) => None,
        }
    }
}
