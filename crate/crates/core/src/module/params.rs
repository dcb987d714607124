//! Module parameters: a small, serializable map of scalars and strings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single parameter value. Durations are carried as strings such as
/// "15s", "30m", "2h", or "1d" and parsed on access.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Float(f64),
    Str(String),
}

impl From<i64> for ParamValue {
    fn from(v: i64) -> Self {
        ParamValue::Int(v)
    }
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Float(v)
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Str(v.to_string())
    }
}

impl From<String> for ParamValue {
    fn from(v: String) -> Self {
        ParamValue::Str(v)
    }
}

/// Named parameter values. Parameters fully determine the behavior of a
/// fit-free module; iteration order is sorted and therefore reproducible.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Params(BTreeMap<String, ParamValue>);

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builder-style insertion: `Params::new().with("window", 4)`.
    pub fn with(mut self, name: &str, value: impl Into<ParamValue>) -> Self {
        self.0.insert(name.to_string(), value.into());
        self
    }

    pub fn insert(&mut self, name: &str, value: impl Into<ParamValue>) {
        self.0.insert(name.to_string(), value.into());
    }

    pub fn get(&self, name: &str) -> Option<&ParamValue> {
        self.0.get(name)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &ParamValue)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn get_int(&self, name: &str) -> Result<i64> {
        match self.0.get(name) {
            Some(ParamValue::Int(v)) => Ok(*v),
            Some(_) => Err(Error::InvalidParam {
                name: name.to_string(),
                message: "expected an integer".into(),
            }),
            None => Err(Error::MissingParam {
                name: name.to_string(),
            }),
        }
    }

    pub fn get_int_or(&self, name: &str, default: i64) -> Result<i64> {
        match self.0.get(name) {
            None => Ok(default),
            Some(_) => self.get_int(name),
        }
    }

    /// An integer parameter that must be at least `min`.
    pub fn get_usize_min(&self, name: &str, min: usize) -> Result<usize> {
        let v = self.get_int(name)?;
        if v < min as i64 {
            return Err(Error::InvalidParam {
                name: name.to_string(),
                message: format!("must be at least {min}, got {v}"),
            });
        }
        Ok(v as usize)
    }

    pub fn get_float(&self, name: &str) -> Result<f64> {
        match self.0.get(name) {
            Some(ParamValue::Float(v)) => Ok(*v),
            Some(ParamValue::Int(v)) => Ok(*v as f64),
            Some(_) => Err(Error::InvalidParam {
                name: name.to_string(),
                message: "expected a number".into(),
            }),
            None => Err(Error::MissingParam {
                name: name.to_string(),
            }),
        }
    }

    pub fn get_float_or(&self, name: &str, default: f64) -> Result<f64> {
        match self.0.get(name) {
            None => Ok(default),
            Some(_) => self.get_float(name),
        }
    }

    pub fn get_str(&self, name: &str) -> Result<&str> {
        match self.0.get(name) {
            Some(ParamValue::Str(v)) => Ok(v),
            Some(_) => Err(Error::InvalidParam {
                name: name.to_string(),
                message: "expected a string".into(),
            }),
            None => Err(Error::MissingParam {
                name: name.to_string(),
            }),
        }
    }

    pub fn get_str_or<'a>(&'a self, name: &str, default: &'a str) -> Result<&'a str> {
        match self.0.get(name) {
            None => Ok(default),
            Some(_) => self.get_str(name),
        }
    }

    /// A duration in seconds. Accepts a bare integer (seconds) or a string
    /// with an s/m/h/d suffix.
    pub fn get_duration_secs(&self, name: &str) -> Result<i64> {
        match self.0.get(name) {
            Some(ParamValue::Int(v)) => Ok(*v),
            Some(ParamValue::Str(text)) => {
                parse_duration_secs(text).ok_or_else(|| Error::InvalidParam {
                    name: name.to_string(),
                    message: format!("cannot parse duration '{text}'"),
                })
            }
            Some(_) => Err(Error::InvalidParam {
                name: name.to_string(),
                message: "expected a duration".into(),
            }),
            None => Err(Error::MissingParam {
                name: name.to_string(),
            }),
        }
    }
}

fn parse_duration_secs(text: &str) -> Option<i64> {
    let text = text.trim();
    let (digits, unit) = match text.char_indices().find(|(_, c)| !c.is_ascii_digit()) {
        Some((pos, _)) => text.split_at(pos),
        None => (text, "s"),
    };
    let count: i64 = digits.parse().ok()?;
    let factor = match unit.trim() {
        "s" => 1,
        "m" => 60,
        "h" => 3_600,
        "d" => 86_400,
        _ => return None,
    };
    Some(count * factor)
}
