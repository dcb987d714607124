//! Maps stable type ids to module constructors so pipelines can be rebuilt
//! from manifests, plus the predicate table used by condition steps.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::module::{Module, Params};
use crate::timeseries::DataSet;

/// Builds a module instance from parameters. The registry itself is passed
/// through so composite modules (subpipelines) can construct their inner
/// steps with the same registrations.
pub type ModuleBuilder = fn(&Params, &Registry) -> Result<Box<dyn Module>>;

/// Evaluates to one boolean per timestamp of the input.
pub type PredicateFn = fn(&Params, &DataSet) -> Result<Vec<bool>>;

#[derive(Clone)]
pub struct Registry {
    builders: BTreeMap<String, ModuleBuilder>,
    predicates: BTreeMap<String, PredicateFn>,
}

impl Registry {
    pub fn empty() -> Self {
        Self {
            builders: BTreeMap::new(),
            predicates: BTreeMap::new(),
        }
    }

    /// The registry with every built-in module and predicate.
    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        crate::transforms::register(&mut r);
        crate::estimators::register(&mut r);
        crate::engine::register(&mut r);
        r
    }

    pub fn register_module(&mut self, type_id: &str, builder: ModuleBuilder) -> Result<()> {
        if self.builders.contains_key(type_id) {
            return Err(Error::DuplicateId {
                id: type_id.to_string(),
            });
        }
        self.builders.insert(type_id.to_string(), builder);
        Ok(())
    }

    pub fn register_predicate(&mut self, id: &str, predicate: PredicateFn) -> Result<()> {
        if self.predicates.contains_key(id) {
            return Err(Error::DuplicateId { id: id.to_string() });
        }
        self.predicates.insert(id.to_string(), predicate);
        Ok(())
    }

    pub fn build(&self, type_id: &str, params: &Params) -> Result<Box<dyn Module>> {
        let builder = self.builders.get(type_id).ok_or_else(|| Error::UnknownTypeId {
            type_id: type_id.to_string(),
        })?;
        builder(params, self)
    }

    pub fn predicate(&self, id: &str) -> Result<PredicateFn> {
        self.predicates
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownPredicate { id: id.to_string() })
    }

    pub fn has_module(&self, type_id: &str) -> bool {
        self.builders.contains_key(type_id)
    }

    pub fn module_ids(&self) -> impl Iterator<Item = &str> {
        self.builders.keys().map(String::as_str)
    }
}

impl std::fmt::Debug for Registry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Registry")
            .field("modules", &self.builders.keys().collect::<Vec<_>>())
            .field("predicates", &self.predicates.keys().collect::<Vec<_>>())
            .finish()
    }
}
