//! Shared helpers for the engine integration tests.

use tspipe_core::{DataSet, Params, Registry, TimeArray, TimeIndex};

#[allow(dead_code)]
pub fn registry() -> Registry {
    Registry::with_builtins()
}

/// One scalar series on an hourly index.
pub fn hourly(name: &str, start: i64, values: &[f64]) -> DataSet {
    let index = TimeIndex::equidistant(start, 3600, values.len()).unwrap();
    DataSet::from_arrays([TimeArray::series(name, index, values.to_vec()).unwrap()]).unwrap()
}

/// A deterministic wavy series long enough for window transforms.
pub fn wavy(len: usize) -> Vec<f64> {
    (0..len)
        .map(|t| {
            let t = t as f64;
            10.0 + (t / 3.0).sin() * 4.0 + (t / 7.0).cos() + 0.01 * t
        })
        .collect()
}

#[allow(dead_code)]
pub fn params() -> Params {
    Params::new()
}

/// Bitwise equality helper for run outputs keyed by sink id.
#[allow(dead_code)]
pub fn sinks_bit_eq(
    a: &std::collections::BTreeMap<String, DataSet>,
    b: &std::collections::BTreeMap<String, DataSet>,
) -> bool {
    a.len() == b.len()
        && a.iter()
            .all(|(k, v)| b.get(k).is_some_and(|other| v.bit_eq(other)))
}
