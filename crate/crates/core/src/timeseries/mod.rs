//! Immutable labeled time-series data model exchanged between all steps.
//!
//! Timestamps are whole seconds, UTC. Values are 64-bit floats with NaN as
//! the only missing-value sentinel; booleans and categories are encoded as
//! 0.0/1.0 mask values. Everything here is immutable after construction and
//! safe to share across concurrent readers.

mod array;
mod dataset;
mod index;
mod ops;

pub use array::TimeArray;
pub use dataset::DataSet;
pub use index::{format_timestamp, parse_timestamp, TimeIndex, Timestamp};
pub use ops::{align, concat_time, slice_time, ALIGN_SUFFIX};
