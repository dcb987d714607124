//! Strictly increasing time index at whole-second UTC resolution.

use std::sync::Arc;

use chrono::{DateTime, Utc};

use crate::error::{Error, Result};

/// Seconds since the Unix epoch, UTC.
pub type Timestamp = i64;

/// An ordered sequence of timestamps. Strictly increasing by construction;
/// cheap to clone and safe to share between arrays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeIndex {
    stamps: Arc<[Timestamp]>,
}

impl TimeIndex {
    /// Builds an index from timestamps, rejecting duplicates and reordering.
    pub fn new(stamps: Vec<Timestamp>) -> Result<Self> {
        for (i, pair) in stamps.windows(2).enumerate() {
            if pair[1] <= pair[0] {
                return Err(Error::NonIncreasingTime { position: i + 1 });
            }
        }
        Ok(Self {
            stamps: stamps.into(),
        })
    }

    pub fn empty() -> Self {
        Self {
            stamps: Vec::new().into(),
        }
    }

    /// An index of `len` timestamps starting at `start`, spaced `step` seconds apart.
    pub fn equidistant(start: Timestamp, step: i64, len: usize) -> Result<Self> {
        if step <= 0 {
            return Err(Error::NonIncreasingTime { position: 1 });
        }
        Ok(Self {
            stamps: (0..len as i64).map(|i| start + i * step).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.stamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stamps.is_empty()
    }

    pub fn as_slice(&self) -> &[Timestamp] {
        &self.stamps
    }

    pub fn get(&self, i: usize) -> Timestamp {
        self.stamps[i]
    }

    pub fn first(&self) -> Option<Timestamp> {
        self.stamps.first().copied()
    }

    pub fn last(&self) -> Option<Timestamp> {
        self.stamps.last().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = Timestamp> + '_ {
        self.stamps.iter().copied()
    }

    /// Position of `ts` in the index, if present.
    pub fn position(&self, ts: Timestamp) -> Option<usize> {
        self.stamps.binary_search(&ts).ok()
    }

    pub fn contains(&self, ts: Timestamp) -> bool {
        self.position(ts).is_some()
    }

    /// Half-open position range covering timestamps within `[from, to]`.
    pub fn positions_in(&self, from: Timestamp, to: Timestamp) -> std::ops::Range<usize> {
        let start = self.stamps.partition_point(|&t| t < from);
        let end = self.stamps.partition_point(|&t| t <= to);
        start..end.max(start)
    }

    /// The common step between consecutive timestamps, or `None` if the index
    /// is not equidistant or has fewer than two entries.
    pub fn uniform_step(&self) -> Option<i64> {
        if self.stamps.len() < 2 {
            return None;
        }
        let step = self.stamps[1] - self.stamps[0];
        self.stamps
            .windows(2)
            .all(|p| p[1] - p[0] == step)
            .then_some(step)
    }

    /// Timestamps present in both indices, in order.
    pub fn intersect(&self, other: &TimeIndex) -> TimeIndex {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.stamps.len() && j < other.stamps.len() {
            match self.stamps[i].cmp(&other.stamps[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(self.stamps[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        TimeIndex { stamps: out.into() }
    }
}

/// Parses an ISO-8601 UTC timestamp ("2021-03-25T14:00:00Z") to epoch seconds.
pub fn parse_timestamp(text: &str) -> std::result::Result<Timestamp, String> {
    DateTime::parse_from_rfc3339(text)
        .map(|dt| dt.with_timezone(&Utc).timestamp())
        .map_err(|e| e.to_string())
}

/// Formats epoch seconds as an ISO-8601 UTC timestamp at second precision.
pub fn format_timestamp(ts: Timestamp) -> String {
    match DateTime::<Utc>::from_timestamp(ts, 0) {
        Some(dt) => dt.format("%Y-%m-%dT%H:%M:%SZ").to_string(),
        None => format!("<out-of-range:{ts}>"),
    }
}
