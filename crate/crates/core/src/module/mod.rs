//! The uniform algorithm contract implemented by every transform and
//! estimator: a descriptor, a transform entry point, and — for trainable
//! modules — fit plus serializable state.

mod params;
mod registry;
mod state;

pub use params::{ParamValue, Params};
pub use registry::{ModuleBuilder, PredicateFn, Registry};
pub use state::{decode_state, encode_state, ModuleState};

pub(crate) use state::blob;

use crate::error::{Error, Result};
use crate::timeseries::DataSet;

/// Static description of a module instance: identity, parameters, and the
/// execution properties the engine needs.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleDescriptor {
    /// Stable identifier under which the module is registered.
    pub type_id: String,
    /// The parameters the instance was built from.
    pub params: Params,
    /// Whether fit must run before transform.
    pub requires_fit: bool,
    /// Exact number of past timesteps needed to produce one output
    /// timestep. `None` marks modules that need the whole series (or
    /// future values) and therefore cannot run online.
    pub lookback: Option<usize>,
    /// Whether the module emits a different time index than it consumes.
    pub resamples: bool,
}

impl ModuleDescriptor {
    /// A fit-free, index-preserving module with the given lookback.
    pub fn transform_only(type_id: &str, params: Params, lookback: Option<usize>) -> Self {
        Self {
            type_id: type_id.to_string(),
            params,
            requires_fit: false,
            lookback,
            resamples: false,
        }
    }

    /// A trainable, index-preserving, pointwise module.
    pub fn trainable(type_id: &str, params: Params) -> Self {
        Self {
            type_id: type_id.to_string(),
            params,
            requires_fit: true,
            lookback: Some(0),
            resamples: false,
        }
    }
}

/// An algorithm usable in pipeline steps. Implementations are immutable;
/// all learned information lives in the returned [`ModuleState`], so
/// distinct steps may share one module and transform concurrently.
pub trait Module: Send + Sync {
    fn descriptor(&self) -> &ModuleDescriptor;

    /// Learns state from aligned inputs (and target, when the module uses
    /// one). Only meaningful when `requires_fit` is set; the default
    /// rejects the call.
    fn fit(&self, _inputs: &DataSet, _target: Option<&DataSet>) -> Result<ModuleState> {
        Err(Error::NotTrainable {
            type_id: self.descriptor().type_id.clone(),
        })
    }

    /// Applies the algorithm. Must be deterministic in (params, state,
    /// inputs) and must not mutate either.
    fn transform(&self, state: &ModuleState, inputs: &DataSet) -> Result<DataSet>;
}

impl dyn Module + '_ {
    /// Guard shared by trainable modules: transform before fit is an error.
    pub fn ensure_fitted(&self, state: &ModuleState) -> Result<()> {
        if self.descriptor().requires_fit && !state.is_fitted() {
            return Err(Error::NotFitted {
                type_id: self.descriptor().type_id.clone(),
            });
        }
        Ok(())
    }
}

/// Serializes a module's state into the portable envelope.
pub fn save_state(module: &dyn Module, state: &ModuleState) -> Vec<u8> {
    encode_state(&module.descriptor().type_id, state)
}

/// Restores a state produced by [`save_state`] for the same module type.
pub fn load_state(module: &dyn Module, bytes: &[u8]) -> Result<ModuleState> {
    decode_state(&module.descriptor().type_id, bytes)
}
