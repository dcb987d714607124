//! The pipeline graph: steps as nodes, every input binding as an edge.

use std::collections::{BTreeMap, BTreeSet};

use crate::engine::step::{Step, StepKind};
use crate::error::{Error, Result};
use crate::module::{Module, ModuleState, PredicateFn, Registry};

/// A DAG of steps over declared external sources, with explicit sinks.
/// Construction validates references and acyclicity; execution happens in
/// deterministic topological order (ties broken by ascending step id).
pub struct Pipeline {
    pub(crate) sources: Vec<String>,
    pub(crate) sinks: Vec<String>,
    pub(crate) steps: BTreeMap<String, Step>,
    pub(crate) modules: BTreeMap<String, Box<dyn Module>>,
    pub(crate) predicates: BTreeMap<String, PredicateFn>,
    pub(crate) states: BTreeMap<String, ModuleState>,
}

impl std::fmt::Debug for Pipeline {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Pipeline")
            .field("sources", &self.sources)
            .field("sinks", &self.sinks)
            .field("steps", &self.steps.keys().collect::<Vec<_>>())
            .finish()
    }
}

impl Pipeline {
    pub fn new(sources: Vec<String>) -> Self {
        Self {
            sources,
            sinks: Vec::new(),
            steps: BTreeMap::new(),
            modules: BTreeMap::new(),
            predicates: BTreeMap::new(),
            states: BTreeMap::new(),
        }
    }

    pub fn sources(&self) -> &[String] {
        &self.sources
    }

    pub fn sinks(&self) -> &[String] {
        &self.sinks
    }

    pub fn step(&self, id: &str) -> Option<&Step> {
        self.steps.get(id)
    }

    pub fn step_ids(&self) -> impl Iterator<Item = &str> {
        self.steps.keys().map(String::as_str)
    }

    pub fn state(&self, id: &str) -> Option<&ModuleState> {
        self.states.get(id)
    }

    /// Installs a state for a step, e.g. when loading a saved pipeline.
    pub fn set_state(&mut self, id: &str, state: ModuleState) -> Result<()> {
        if !self.modules.contains_key(id) {
            return Err(Error::UnknownStep { id: id.to_string() });
        }
        self.states.insert(id.to_string(), state);
        Ok(())
    }

    /// Branch step id -> owning condition step id.
    pub(crate) fn branch_map(&self) -> BTreeMap<&str, &str> {
        let mut map = BTreeMap::new();
        for (id, step) in &self.steps {
            if let StepKind::Condition(cond) = &step.kind {
                map.insert(cond.then_step.as_str(), id.as_str());
                map.insert(cond.else_step.as_str(), id.as_str());
            }
        }
        map
    }

    pub fn is_branch(&self, id: &str) -> bool {
        self.branch_map().contains_key(id)
    }

    /// Inserts a validated step. References must already exist; the cycle
    /// check is re-run after insertion.
    pub fn add_step(&mut self, step: Step, registry: &Registry) -> Result<()> {
        if step.dependencies().any(|dep| dep == step.id) {
            return Err(Error::CycleDetected {
                step: step.id.clone(),
            });
        }
        if self.steps.contains_key(&step.id) || self.sources.contains(&step.id) {
            return Err(Error::DuplicateId {
                id: step.id.clone(),
            });
        }
        let branches = self.branch_map();
        for dep in step.dependencies() {
            if !self.steps.contains_key(dep) && !self.sources.iter().any(|s| s == dep) {
                return Err(Error::UnknownInput {
                    step: step.id.clone(),
                    input: dep.to_string(),
                });
            }
            if let Some(owner) = branches.get(dep) {
                return Err(Error::InvalidStep {
                    id: step.id.clone(),
                    message: format!(
                        "'{dep}' is a branch of condition '{owner}'; bind to the condition instead"
                    ),
                });
            }
        }
        self.insert_unchecked(step, registry)?;
        self.check_structure(false)
    }

    /// Inserts without graph-level validation; used while assembling a
    /// pipeline from a definition, where steps may arrive in any order.
    /// Callers must run [`Pipeline::validate`] afterwards.
    pub(crate) fn insert_unchecked(&mut self, step: Step, registry: &Registry) -> Result<()> {
        if self.steps.contains_key(&step.id) || self.sources.contains(&step.id) {
            return Err(Error::DuplicateId {
                id: step.id.clone(),
            });
        }
        match &step.kind {
            StepKind::Module(mref) => {
                let module = registry.build(&mref.type_id, &mref.params)?;
                self.modules.insert(step.id.clone(), module);
                self.states
                    .entry(step.id.clone())
                    .or_insert_with(ModuleState::unfitted);
            }
            StepKind::Condition(cond) => {
                let predicate = registry.predicate(&cond.predicate.id)?;
                self.predicates.insert(step.id.clone(), predicate);
            }
        }
        self.steps.insert(step.id.clone(), step);
        Ok(())
    }

    /// Declares which step outputs constitute the pipeline result.
    pub fn set_sinks(&mut self, sinks: Vec<String>) -> Result<()> {
        let branches = self.branch_map();
        for id in &sinks {
            if !self.steps.contains_key(id) {
                return Err(Error::UnknownStep { id: id.clone() });
            }
            if let Some(owner) = branches.get(id.as_str()) {
                return Err(Error::InvalidStep {
                    id: id.clone(),
                    message: format!(
                        "branch of condition '{owner}' cannot be a sink; use the condition"
                    ),
                });
            }
        }
        if sinks.is_empty() {
            log::warn!("pipeline declares no sinks; runs will produce no outputs");
        }
        self.sinks = sinks;
        Ok(())
    }

    /// Full structural validation: resolvable references, branch wiring,
    /// acyclicity. Warns (does not fail) on unused sources.
    pub fn validate(&self) -> Result<()> {
        self.check_structure(true)
    }

    /// `require_branches_claimed` is relaxed during incremental
    /// construction, where a branch step legitimately exists before the
    /// condition that claims it.
    fn check_structure(&self, require_branches_claimed: bool) -> Result<()> {
        for source in &self.sources {
            if self.steps.contains_key(source) {
                return Err(Error::DuplicateId { id: source.clone() });
            }
        }

        let branches = self.branch_map();
        for (id, step) in &self.steps {
            for dep in step.dependencies() {
                if !self.steps.contains_key(dep) && !self.sources.iter().any(|s| s == dep) {
                    return Err(Error::UnknownInput {
                        step: id.clone(),
                        input: dep.to_string(),
                    });
                }
                if branches.contains_key(dep) {
                    return Err(Error::InvalidStep {
                        id: id.clone(),
                        message: format!("'{dep}' is a condition branch and cannot be bound"),
                    });
                }
            }
            match &step.kind {
                StepKind::Module(_) => {}
                StepKind::Condition(cond) => {
                    if step.inputs.is_empty() {
                        return Err(Error::InvalidStep {
                            id: id.clone(),
                            message: "condition step needs at least one input binding".into(),
                        });
                    }
                    if cond.then_step == cond.else_step {
                        return Err(Error::InvalidStep {
                            id: id.clone(),
                            message: "then and else must be distinct steps".into(),
                        });
                    }
                    for branch in [&cond.then_step, &cond.else_step] {
                        let Some(branch_step) = self.steps.get(branch) else {
                            return Err(Error::UnknownStep { id: branch.clone() });
                        };
                        if !matches!(branch_step.kind, StepKind::Module(_)) {
                            return Err(Error::InvalidStep {
                                id: branch.clone(),
                                message: "condition branches must be module steps".into(),
                            });
                        }
                        if !branch_step.inputs.is_empty() || branch_step.target.is_some() {
                            return Err(Error::InvalidStep {
                                id: branch.clone(),
                                message:
                                    "branch steps receive the condition's routed rows and must not \
                                     declare inputs or a target"
                                        .into(),
                            });
                        }
                    }
                }
            }
        }

        // A branch may serve exactly one condition.
        let mut seen = BTreeSet::new();
        for step in self.steps.values() {
            if let StepKind::Condition(cond) = &step.kind {
                for branch in [&cond.then_step, &cond.else_step] {
                    if !seen.insert(branch.clone()) {
                        return Err(Error::InvalidStep {
                            id: branch.clone(),
                            message: "step is claimed as a branch by more than one condition"
                                .into(),
                        });
                    }
                }
            }
        }

        // Module steps with no inputs must be claimed as branches; while a
        // pipeline is under construction the claiming condition may not
        // exist yet.
        if require_branches_claimed {
            for (id, step) in &self.steps {
                if matches!(step.kind, StepKind::Module(_))
                    && step.inputs.is_empty()
                    && !branches.contains_key(id.as_str())
                {
                    return Err(Error::InvalidStep {
                        id: id.clone(),
                        message: "module step needs at least one input binding".into(),
                    });
                }
            }
        }

        self.topo_order()?;

        let consumed: BTreeSet<&str> = self
            .steps
            .values()
            .flat_map(Step::dependencies)
            .collect();
        for source in &self.sources {
            if !consumed.contains(source.as_str()) {
                log::warn!("source '{source}' is declared but never consumed");
            }
        }
        Ok(())
    }

    /// Deterministic execution order over non-branch steps: every step
    /// appears after all of its dependencies, ties broken by ascending id.
    pub fn topo_order(&self) -> Result<Vec<String>> {
        let branches = self.branch_map();
        let nodes: Vec<&str> = self
            .steps
            .keys()
            .map(String::as_str)
            .filter(|id| !branches.contains_key(id))
            .collect();

        let mut indegree: BTreeMap<&str, usize> = nodes.iter().map(|&n| (n, 0)).collect();
        let mut downstream: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for &id in &nodes {
            for dep in self.steps[id].dependencies() {
                if indegree.contains_key(dep) {
                    *indegree.get_mut(id).unwrap() += 1;
                    downstream.entry(dep).or_default().push(id);
                }
            }
        }

        let mut ready: BTreeSet<&str> = indegree
            .iter()
            .filter(|(_, &d)| d == 0)
            .map(|(&n, _)| n)
            .collect();
        let mut order = Vec::with_capacity(nodes.len());
        while let Some(&next) = ready.iter().next() {
            ready.remove(next);
            order.push(next.to_string());
            for &follower in downstream.get(next).into_iter().flatten() {
                let d = indegree.get_mut(follower).unwrap();
                *d -= 1;
                if *d == 0 {
                    ready.insert(follower);
                }
            }
        }
        if order.len() != nodes.len() {
            let stuck = nodes
                .iter()
                .find(|n| !order.iter().any(|o| o == *n))
                .unwrap_or(&"");
            return Err(Error::CycleDetected {
                step: stuck.to_string(),
            });
        }
        Ok(order)
    }

    pub(crate) fn module(&self, id: &str) -> &dyn Module {
        self.modules[id].as_ref()
    }

    /// The lookback a step needs: its module's declaration, or for a
    /// condition the larger of its two branches.
    pub fn step_lookback(&self, id: &str) -> Result<Option<usize>> {
        let step = self.steps.get(id).ok_or_else(|| Error::UnknownStep {
            id: id.to_string(),
        })?;
        Ok(match &step.kind {
            StepKind::Module(_) => self.modules[id].descriptor().lookback,
            StepKind::Condition(cond) => {
                let then_lb = self.modules[&cond.then_step].descriptor().lookback;
                let else_lb = self.modules[&cond.else_step].descriptor().lookback;
                match (then_lb, else_lb) {
                    (Some(a), Some(b)) => Some(a.max(b)),
                    _ => None,
                }
            }
        })
    }
}
