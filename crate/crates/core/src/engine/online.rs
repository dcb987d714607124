//! Online execution: one timestamp at a time with bounded history buffers.
//!
//! Each step keeps exactly `lookback` past input rows. While the buffer is
//! still filling, the step emits an all-NaN row of its output schema,
//! mirroring the batch NaN warm-up region; this keeps downstream buffers
//! bit-identical to the rows batch execution would feed them, so outputs
//! agree with batch wherever batch emits a defined value.

use std::collections::{BTreeMap, VecDeque};

use crate::engine::execute::RunOutput;
use crate::engine::pipeline::Pipeline;
use crate::engine::step::{Step, StepKind};
use crate::error::{Error, Result};
use crate::timeseries::{align, concat_time, slice_time, DataSet, TimeArray, TimeIndex, Timestamp};

/// Rolling input history for one executing unit (a module step or one
/// condition branch). Holds at most `lookback` past rows.
struct HistoryBuffer {
    rows: VecDeque<DataSet>,
    lookback: usize,
}

impl HistoryBuffer {
    fn new(lookback: usize) -> Self {
        Self {
            rows: VecDeque::new(),
            lookback,
        }
    }

    fn is_warm(&self) -> bool {
        self.rows.len() >= self.lookback
    }

    /// The buffered rows followed by the current one: exactly
    /// lookback + 1 rows once warm.
    fn window(&self, current: &DataSet) -> Result<DataSet> {
        let mut parts: Vec<DataSet> = self.rows.iter().cloned().collect();
        parts.push(current.clone());
        concat_time(&parts)
    }

    fn push(&mut self, row: DataSet) {
        self.rows.push_back(row);
        while self.rows.len() > self.lookback {
            self.rows.pop_front();
        }
    }
}

impl Pipeline {
    /// Iterates the input timestamps in order, keeping per-step history
    /// buffers of exactly the declared lookback. Trainable steps stay
    /// frozen; they must be fitted beforehand. Steps emit nothing while
    /// their buffer is still warming up, which mirrors the batch NaN
    /// warm-up region.
    pub fn run_online(&self, data: &DataSet) -> Result<RunOutput> {
        self.validate()?;
        let topo = self.topo_order()?;

        if data.rows() == 0 {
            let sinks = self
                .sinks
                .iter()
                .map(|id| (id.clone(), DataSet::new()))
                .collect();
            return Ok(RunOutput {
                sinks,
                trace: Vec::new(),
            });
        }
        for source in &self.sources {
            if !data.contains(source) {
                return Err(Error::MissingSource {
                    name: source.clone(),
                });
            }
        }

        // Online preconditions: everything fitted, every lookback finite.
        for (id, module) in &self.modules {
            if module.descriptor().requires_fit && !self.states[id].is_fitted() {
                return Err(Error::NotFitted {
                    type_id: module.descriptor().type_id.clone(),
                }
                .at_step(id));
            }
        }
        let mut buffers: BTreeMap<String, HistoryBuffer> = BTreeMap::new();
        for (id, step) in &self.steps {
            match &step.kind {
                StepKind::Module(_) => {
                    let lookback = self.modules[id].descriptor().lookback.ok_or_else(|| {
                        Error::UnboundedLookback { step: id.clone() }
                    })?;
                    buffers.insert(id.clone(), HistoryBuffer::new(lookback));
                }
                StepKind::Condition(_) => {
                    // Branch buffers are created by the module arm above;
                    // the condition itself keeps no history.
                    self.step_lookback(id)?
                        .ok_or_else(|| Error::UnboundedLookback { step: id.clone() })?;
                }
            }
        }

        // Outputs are accumulated for sinks and for steps with callbacks.
        let mut accumulators: BTreeMap<String, Vec<DataSet>> = BTreeMap::new();
        for id in &self.sinks {
            accumulators.entry(id.clone()).or_default();
        }
        for (id, step) in &self.steps {
            if !step.callbacks.is_empty() {
                accumulators.entry(id.clone()).or_default();
            }
        }

        let stamps: Vec<i64> = data.index().map(|i| i.iter().collect()).unwrap_or_default();
        let mut templates: BTreeMap<String, DataSet> = BTreeMap::new();
        for ts in stamps {
            let row = slice_time(data, ts, ts);
            let mut current: BTreeMap<String, DataSet> = BTreeMap::new();
            for id in &topo {
                let step = &self.steps[id];
                let gathered = self.gather_online(step, &current, &row)?;
                let out = if gathered.rows() == 0 {
                    DataSet::new()
                } else {
                    match &step.kind {
                        StepKind::Module(_) => self
                            .advance_module(id, &gathered, ts, &mut buffers, &mut templates)
                            .map_err(|e| e.at_step(id))?,
                        StepKind::Condition(_) => self
                            .advance_condition(
                                step,
                                &gathered,
                                ts,
                                &mut buffers,
                                &mut templates,
                                &mut accumulators,
                            )
                            .map_err(|e| e.at_step(id))?,
                    }
                };
                if out.rows() > 0 {
                    if let Some(parts) = accumulators.get_mut(id) {
                        parts.push(out.clone());
                    }
                }
                current.insert(id.clone(), out);
            }
        }

        let mut finals: BTreeMap<String, DataSet> = BTreeMap::new();
        for (id, parts) in accumulators {
            finals.insert(id.clone(), concat_time(&parts).map_err(|e| e.at_step(&id))?);
        }
        for (id, step) in &self.steps {
            if step.callbacks.is_empty() {
                continue;
            }
            let result = finals.get(id).cloned().unwrap_or_default();
            for callback in &step.callbacks {
                callback.execute(id, &result).map_err(|e| e.at_step(id))?;
            }
        }

        let sinks = self
            .sinks
            .iter()
            .map(|id| (id.clone(), finals.get(id).cloned().unwrap_or_default()))
            .collect();
        Ok(RunOutput {
            sinks,
            trace: topo,
        })
    }

    /// Like the batch gather, but an upstream that emitted nothing at this
    /// timestamp (still warming up) silently yields an empty result so the
    /// gap cascades instead of erroring.
    fn gather_online(
        &self,
        step: &Step,
        current: &BTreeMap<String, DataSet>,
        row: &DataSet,
    ) -> Result<DataSet> {
        let mut bound = Vec::new();
        for (input_name, upstream) in &step.inputs {
            let upstream_out = if let Some(out) = current.get(upstream) {
                out.clone()
            } else if self.sources.iter().any(|s| s == upstream) {
                DataSet::from_arrays([row.require(upstream)?.clone()])?
            } else {
                return Err(Error::UnknownStep {
                    id: upstream.to_string(),
                });
            };
            if upstream_out.rows() == 0 {
                return Ok(DataSet::new());
            }
            bound.push(super::execute::rename_for_binding(input_name, &upstream_out)?);
        }
        let mut acc: Option<DataSet> = None;
        for part in bound {
            acc = Some(match acc {
                None => part,
                Some(prev) => align(&prev, &part)?,
            });
        }
        Ok(acc.unwrap_or_default())
    }

    /// One online step of a module: once the history buffer is warm,
    /// transform the full window and emit the row at `ts`; before that,
    /// emit the warm-up NaN row. Either way, remember the gathered input.
    fn advance_module(
        &self,
        id: &str,
        gathered: &DataSet,
        ts: Timestamp,
        buffers: &mut BTreeMap<String, HistoryBuffer>,
        templates: &mut BTreeMap<String, DataSet>,
    ) -> Result<DataSet> {
        let buffer = buffers.get_mut(id).expect("buffer exists for module step");
        let out = if buffer.is_warm() {
            let window = buffer.window(gathered)?;
            let full = self.module(id).transform(&self.states[id], &window)?;
            slice_time(&full, ts, ts)
        } else {
            let template = self.output_template(id, gathered, buffer.lookback, templates)?;
            nan_row_like(&template, ts)?
        };
        buffer.push(gathered.clone());
        Ok(out)
    }

    /// One online step of a condition: route the row to a branch, advance
    /// that branch's buffer, and emit its output for this timestamp.
    fn advance_condition(
        &self,
        step: &Step,
        gathered: &DataSet,
        ts: Timestamp,
        buffers: &mut BTreeMap<String, HistoryBuffer>,
        templates: &mut BTreeMap<String, DataSet>,
        accumulators: &mut BTreeMap<String, Vec<DataSet>>,
    ) -> Result<DataSet> {
        let cond = step.condition_spec().expect("condition step");
        let predicate = self.predicates[&step.id];
        let mask = predicate(&cond.predicate.params, gathered)?;
        if mask.len() != gathered.rows() {
            return Err(Error::PredicateShapeMismatch {
                expected: gathered.rows(),
                got: mask.len(),
            });
        }
        let branch_id = if mask[0] {
            &cond.then_step
        } else {
            &cond.else_step
        };
        let out = self
            .advance_module(branch_id, gathered, ts, buffers, templates)
            .map_err(|e| e.at_step(branch_id))?;
        if out.rows() > 0 {
            if let Some(parts) = accumulators.get_mut(branch_id) {
                parts.push(out.clone());
            }
        }
        Ok(out)
    }

    /// Determines a step's output schema by transforming one synthetic
    /// window (NaN history plus the first real row). Cached per step.
    fn output_template(
        &self,
        id: &str,
        gathered: &DataSet,
        lookback: usize,
        templates: &mut BTreeMap<String, DataSet>,
    ) -> Result<DataSet> {
        if let Some(t) = templates.get(id) {
            return Ok(t.clone());
        }
        let first_ts = gathered.index().expect("gathered row is non-empty").get(0);
        let mut parts: Vec<DataSet> = (0..lookback)
            .map(|i| nan_row_like(gathered, first_ts - (lookback - i) as i64))
            .collect::<Result<_>>()?;
        parts.push(gathered.clone());
        let window = concat_time(&parts)?;
        let out = self.module(id).transform(&self.states[id], &window)?;
        templates.insert(id.to_string(), out.clone());
        Ok(out)
    }
}

/// One all-NaN row at `ts` with the array names, shapes, and labels of the
/// template.
fn nan_row_like(template: &DataSet, ts: Timestamp) -> Result<DataSet> {
    let index = TimeIndex::new(vec![ts])?;
    DataSet::from_arrays(
        template
            .arrays()
            .map(|a| {
                let mut array = TimeArray::new(
                    a.name(),
                    index.clone(),
                    vec![f64::NAN; a.row_width()],
                    a.feature_shape().to_vec(),
                )?;
                if let Some(labels) = a.feature_labels() {
                    array = array.with_labels(labels.to_vec())?;
                }
                Ok(array)
            })
            .collect::<Result<Vec<_>>>()?,
    )
}
