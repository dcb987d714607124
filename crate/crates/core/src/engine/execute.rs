//! Batch execution: train and run in topological order.

use std::collections::BTreeMap;

use crate::engine::pipeline::Pipeline;
use crate::engine::step::{ConditionSpec, Step, StepKind};
use crate::error::{Error, Result};
use crate::module::ModuleState;
use crate::timeseries::{align, concat_time, DataSet};

/// Sink outputs plus the order steps actually executed in.
#[derive(Debug)]
pub struct RunOutput {
    pub sinks: BTreeMap<String, DataSet>,
    pub trace: Vec<String>,
}

impl Pipeline {
    /// Fits every trainable, unfitted step in topological order, then
    /// transforms; returns the sink outputs of the pass.
    pub fn train(&mut self, data: &DataSet) -> Result<RunOutput> {
        let mut states = self.states.clone();
        let out = self.execute_batch(&mut states, data, true)?;
        self.states = states;
        Ok(out)
    }

    /// Transform-only pass; every trainable step must already be fitted.
    pub fn run(&self, data: &DataSet) -> Result<RunOutput> {
        let mut states = self.states.clone();
        self.execute_batch(&mut states, data, false)
    }

    fn execute_batch(
        &self,
        states: &mut BTreeMap<String, ModuleState>,
        data: &DataSet,
        allow_fit: bool,
    ) -> Result<RunOutput> {
        self.validate()?;
        for source in &self.sources {
            if !data.contains(source) {
                return Err(Error::MissingSource {
                    name: source.clone(),
                });
            }
        }

        let mut outputs: BTreeMap<String, DataSet> = BTreeMap::new();
        let mut trace = Vec::new();
        for id in self.topo_order()? {
            let step = &self.steps[&id];
            let result = self
                .execute_step(step, states, &outputs, data, allow_fit)
                .map_err(|e| e.at_step(&id))?;
            for callback in &step.callbacks {
                callback.execute(&id, &result).map_err(|e| e.at_step(&id))?;
            }
            outputs.insert(id.clone(), result);
            trace.push(id);
        }

        let sinks = self
            .sinks
            .iter()
            .map(|id| (id.clone(), outputs[id].clone()))
            .collect();
        Ok(RunOutput { sinks, trace })
    }

    fn execute_step(
        &self,
        step: &Step,
        states: &mut BTreeMap<String, ModuleState>,
        outputs: &BTreeMap<String, DataSet>,
        data: &DataSet,
        allow_fit: bool,
    ) -> Result<DataSet> {
        let gathered = self.gather(step, outputs, data)?;
        match &step.kind {
            StepKind::Module(_) => {
                self.fit_if_needed(step, &gathered, states, outputs, data, allow_fit)?;
                let module = self.module(&step.id);
                module.transform(&states[&step.id], &gathered)
            }
            StepKind::Condition(cond) => {
                self.execute_condition(step, cond, &gathered, states, allow_fit)
            }
        }
    }

    /// Collects and merges the outputs of a step's dependencies. Each
    /// binding renames single-array outputs to the input name and prefixes
    /// multi-array outputs with it; bindings are merged with [`align`].
    fn gather(
        &self,
        step: &Step,
        outputs: &BTreeMap<String, DataSet>,
        data: &DataSet,
    ) -> Result<DataSet> {
        let mut acc: Option<DataSet> = None;
        for (input_name, upstream) in &step.inputs {
            let upstream_out = self.resolve_output(upstream, outputs, data)?;
            if upstream_out.rows() == 0 {
                return Err(Error::EmptyEdge {
                    from: upstream.clone(),
                    to: step.id.clone(),
                });
            }
            let renamed = rename_for_binding(input_name, &upstream_out)?;
            acc = Some(match acc {
                None => renamed,
                Some(prev) => align(&prev, &renamed)?,
            });
        }
        Ok(acc.unwrap_or_default())
    }

    /// The output of an upstream step, or a source array wrapped as a
    /// one-array data set.
    fn resolve_output(
        &self,
        upstream: &str,
        outputs: &BTreeMap<String, DataSet>,
        data: &DataSet,
    ) -> Result<DataSet> {
        if let Some(out) = outputs.get(upstream) {
            return Ok(out.clone());
        }
        if self.sources.iter().any(|s| s == upstream) {
            let array = data.require(upstream)?;
            return DataSet::from_arrays([array.clone()]);
        }
        Err(Error::UnknownStep {
            id: upstream.to_string(),
        })
    }

    fn fit_if_needed(
        &self,
        step: &Step,
        gathered: &DataSet,
        states: &mut BTreeMap<String, ModuleState>,
        outputs: &BTreeMap<String, DataSet>,
        data: &DataSet,
        allow_fit: bool,
    ) -> Result<()> {
        let module = self.module(&step.id);
        if !allow_fit || !module.descriptor().requires_fit || states[&step.id].is_fitted() {
            return Ok(());
        }
        let target = match &step.target {
            Some(upstream) => {
                let t = self.resolve_output(upstream, outputs, data)?;
                if t.rows() == 0 {
                    return Err(Error::EmptyEdge {
                        from: upstream.clone(),
                        to: step.id.clone(),
                    });
                }
                Some(t)
            }
            None => None,
        };
        // Restrict inputs and target to their common timestamps for the
        // fit; the transform afterwards still sees the full inputs.
        let state = match target {
            None => module.fit(gathered, None)?,
            Some(target) => {
                let common = match (gathered.index(), target.index()) {
                    (Some(i), Some(t)) => i.intersect(t),
                    _ => crate::timeseries::TimeIndex::empty(),
                };
                if common.is_empty() {
                    return Err(Error::EmptyIntersection);
                }
                let fit_inputs = select_index(gathered, &common);
                let fit_target = select_index(&target, &common);
                module.fit(&fit_inputs, Some(&fit_target))?
            }
        };
        states.insert(step.id.clone(), state);
        Ok(())
    }

    /// Routes rows by the predicate, transforms each branch on its subset
    /// (fitting first during training), and merges the branch outputs.
    fn execute_condition(
        &self,
        step: &Step,
        cond: &ConditionSpec,
        gathered: &DataSet,
        states: &mut BTreeMap<String, ModuleState>,
        allow_fit: bool,
    ) -> Result<DataSet> {
        let predicate = self.predicates[&step.id];
        let mask = predicate(&cond.predicate.params, gathered)?;
        if mask.len() != gathered.rows() {
            return Err(Error::PredicateShapeMismatch {
                expected: gathered.rows(),
                got: mask.len(),
            });
        }
        let (then_rows, else_rows) = gathered.partition_rows(&mask);

        let mut parts = Vec::new();
        for (branch_id, subset) in [(&cond.then_step, then_rows), (&cond.else_step, else_rows)] {
            if subset.rows() == 0 {
                continue;
            }
            let branch = &self.steps[branch_id];
            let module = self.module(branch_id);
            if allow_fit && module.descriptor().requires_fit && !states[branch_id].is_fitted() {
                let state = module
                    .fit(&subset, None)
                    .map_err(|e| e.at_step(branch_id))?;
                states.insert(branch_id.clone(), state);
            }
            let out = module
                .transform(&states[branch_id], &subset)
                .map_err(|e| e.at_step(branch_id))?;
            for callback in &branch.callbacks {
                callback
                    .execute(branch_id, &out)
                    .map_err(|e| e.at_step(branch_id))?;
            }
            parts.push(out);
        }
        concat_time(&parts)
    }
}

/// Renames an upstream output for a binding: a single array takes the
/// input name itself, several arrays keep their names behind an
/// "input_name." prefix.
pub(crate) fn rename_for_binding(input_name: &str, upstream_out: &DataSet) -> Result<DataSet> {
    if upstream_out.array_count() == 1 {
        let array = upstream_out.single()?;
        return DataSet::from_arrays([array.renamed(input_name)]);
    }
    DataSet::from_arrays(
        upstream_out
            .arrays()
            .map(|a| a.renamed(format!("{input_name}.{}", a.name()))),
    )
}

/// Rows of `d` whose timestamps appear in `index`.
fn select_index(d: &DataSet, index: &crate::timeseries::TimeIndex) -> DataSet {
    let Some(own) = d.index() else {
        return DataSet::new();
    };
    let positions: Vec<usize> = index.iter().filter_map(|ts| own.position(ts)).collect();
    d.select_rows(&positions)
}
