//! A whole pipeline wrapped as one module, so workflow fragments can be
//! grouped, named, and nested to arbitrary depth.

use std::collections::BTreeMap;

use crate::definition::{parse_definition, PipelineDefinition};
use crate::engine::pipeline::Pipeline;
use crate::error::{Error, Result};
use crate::module::{blob, decode_state, encode_state, Module, ModuleDescriptor, ModuleState, Params, Registry};
use crate::timeseries::DataSet;

/// Wraps an inner pipeline: fit trains it, transform runs it. The inner
/// definition travels in the "definition" parameter, so manifests rebuild
/// the module without extra files. The inner pipeline must declare exactly
/// one sink, whose output becomes the module output.
pub struct SubpipelineModule {
    descriptor: ModuleDescriptor,
    definition: PipelineDefinition,
    registry: Registry,
    name: String,
}

pub(crate) fn build(params: &Params, registry: &Registry) -> Result<Box<dyn Module>> {
    let name = params.get_str_or("name", "subpipeline")?.to_string();
    let definition = parse_definition(params.get_str("definition")?)
        .map_err(|e| e.in_subpipeline(&name))?;
    let probe = Pipeline::from_definition(&definition, registry)
        .map_err(|e| e.in_subpipeline(&name))?;
    if probe.sinks().len() != 1 {
        return Err(Error::InvalidDefinition {
            location: format!("subpipeline '{name}'"),
            message: format!(
                "a subpipeline must declare exactly one sink, found {}",
                probe.sinks().len()
            ),
        });
    }

    let requires_fit = probe
        .modules
        .values()
        .any(|m| m.descriptor().requires_fit);
    let resamples = probe.modules.values().any(|m| m.descriptor().resamples);
    let descriptor = ModuleDescriptor {
        type_id: "subpipeline".into(),
        params: params.clone(),
        requires_fit,
        lookback: path_lookback(&probe)?,
        resamples,
    };
    Ok(Box::new(SubpipelineModule {
        descriptor,
        definition,
        registry: registry.clone(),
        name,
    }))
}

/// The lookback of the whole graph: the largest dependency-path sum of
/// step lookbacks from any source to the sink. `None` as soon as any step
/// on a path has no finite lookback.
fn path_lookback(pipeline: &Pipeline) -> Result<Option<usize>> {
    let mut totals: BTreeMap<String, Option<usize>> = BTreeMap::new();
    for id in pipeline.topo_order()? {
        let own = pipeline.step_lookback(&id)?;
        let mut upstream_max = Some(0usize);
        for dep in pipeline.steps[&id].dependencies() {
            if let Some(total) = totals.get(dep) {
                upstream_max = match (upstream_max, total) {
                    (Some(a), Some(b)) => Some(a.max(*b)),
                    _ => None,
                };
            }
        }
        let total = match (own, upstream_max) {
            (Some(own), Some(up)) => Some(own + up),
            _ => None,
        };
        totals.insert(id, total);
    }
    let mut result = Some(0usize);
    for sink in pipeline.sinks() {
        result = match (result, &totals[sink]) {
            (Some(a), Some(b)) => Some(a.max(*b)),
            _ => None,
        };
    }
    Ok(result)
}

impl SubpipelineModule {
    fn fresh_inner(&self) -> Result<Pipeline> {
        Pipeline::from_definition(&self.definition, &self.registry)
            .map_err(|e| e.in_subpipeline(&self.name))
    }

    /// Serializes the inner fitted states: count, then per step a
    /// length-prefixed id and state envelope.
    fn encode_states(&self, inner: &Pipeline) -> Vec<u8> {
        let fitted: Vec<(&String, &ModuleState)> = inner
            .states
            .iter()
            .filter(|(_, s)| s.is_fitted())
            .collect();
        let mut out = Vec::new();
        blob::put_u32(&mut out, fitted.len() as u32);
        for (id, state) in fitted {
            blob::put_str(&mut out, id);
            let envelope = encode_state(&inner.modules[id].descriptor().type_id, state);
            blob::put_u32(&mut out, envelope.len() as u32);
            out.extend_from_slice(&envelope);
        }
        out
    }

    fn decode_states(&self, inner: &mut Pipeline, bytes: &[u8]) -> Result<()> {
        let mut r = blob::Reader::new(bytes);
        let count = r.u32()? as usize;
        for _ in 0..count {
            let id = r.str()?;
            let len = r.u32()? as usize;
            let envelope = r.bytes(len)?;
            let module = inner.modules.get(&id).ok_or_else(|| Error::CorruptState {
                message: format!("state for unknown inner step '{id}'"),
            })?;
            let state = decode_state(&module.descriptor().type_id, envelope)?;
            inner.states.insert(id, state);
        }
        r.done()
    }
}

impl Module for SubpipelineModule {
    fn descriptor(&self) -> &ModuleDescriptor {
        &self.descriptor
    }

    fn fit(&self, inputs: &DataSet, _target: Option<&DataSet>) -> Result<ModuleState> {
        if !self.descriptor.requires_fit {
            return Err(Error::NotTrainable {
                type_id: "subpipeline".into(),
            });
        }
        let mut inner = self.fresh_inner()?;
        inner
            .train(inputs)
            .map_err(|e| e.in_subpipeline(&self.name))?;
        Ok(ModuleState::fitted(self.encode_states(&inner)))
    }

    fn transform(&self, state: &ModuleState, inputs: &DataSet) -> Result<DataSet> {
        (self as &dyn Module).ensure_fitted(state)?;
        let mut inner = self.fresh_inner()?;
        if state.is_fitted() {
            self.decode_states(&mut inner, state.blob())?;
        }
        let output = inner
            .run(inputs)
            .map_err(|e| e.in_subpipeline(&self.name))?;
        let sink = &inner.sinks()[0];
        Ok(output.sinks[sink].clone())
    }
}

/// Wraps an existing pipeline definition as the parameters of a
/// "subpipeline" module step in another pipeline.
pub fn as_subpipeline_params(definition: &PipelineDefinition, name: &str) -> Params {
    Params::new()
        .with("definition", serde_json::to_string(definition).unwrap())
        .with("name", name)
}
