//! Named bound values and lossless JSON emission.
//!
//! JSON floats are written with 17 significant digits, which round-trips
//! every `f64`. Non-finite values are written as the strings `"inf"`,
//! `"-inf"` and `"nan"` by the [`real`], [`real_vec`] and [`real_map`]
//! field adapters.

use std::collections::BTreeMap;
use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Lower,
    Upper,
    /// A constant or exact quantity rather than a bound.
    Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub name: String,
    #[serde(with = "real")]
    pub value: f64,
    pub formula_id: String,
    pub direction: Direction,
    /// What the entry bounds; lower and upper entries with the same
    /// quantity are checked against each other.
    pub quantity: String,
    /// The raw formula was negative and the value was clamped to 0.
    pub clamped: bool,
    /// The value is a rate with an unspecified universal constant set to 1.
    pub up_to_constant: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl BoundEntry {
    pub fn new(name: &str, value: f64, formula_id: &str, direction: Direction, quantity: &str) -> Self {
        BoundEntry {
            name: name.to_string(),
            value,
            formula_id: formula_id.to_string(),
            direction,
            quantity: quantity.to_string(),
            clamped: false,
            up_to_constant: false,
            note: None,
        }
    }

    pub fn lower(name: &str, value: f64, formula_id: &str, quantity: &str) -> Self {
        Self::new(name, value, formula_id, Direction::Lower, quantity)
    }

    pub fn upper(name: &str, value: f64, formula_id: &str, quantity: &str) -> Self {
        Self::new(name, value, formula_id, Direction::Upper, quantity)
    }

    pub fn value(name: &str, value: f64, formula_id: &str) -> Self {
        Self::new(name, value, formula_id, Direction::Value, name)
    }

    pub fn clamped(mut self, clamped: bool) -> Self {
        self.clamped = clamped;
        self
    }

    pub fn up_to_constant(mut self) -> Self {
        self.up_to_constant = true;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    #[serde(with = "real_map")]
    pub inputs: BTreeMap<String, f64>,
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn new<'a>(inputs: impl IntoIterator<Item = (&'a str, f64)>) -> Self {
        BoundReport {
            inputs: inputs.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, entry: BoundEntry) -> &mut Self {
        self.entries.push(entry);
        self
    }

    pub fn get(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.get(name).map(|e| e.value)
    }

    /// Checks every finite lower entry against every finite upper entry of
    /// the same quantity.
    pub fn validate(&self) -> Result<()> {
        for lo in self.entries.iter().filter(|e| e.direction == Direction::Lower) {
            for hi in self
                .entries
                .iter()
                .filter(|e| e.direction == Direction::Upper && e.quantity == lo.quantity)
            {
                if lo.value.is_finite() && hi.value.is_finite() && lo.value > hi.value {
                    return Err(Error::InconsistentBounds(format!(
                        "{} = {} exceeds {} = {}",
                        lo.name, lo.value, hi.name, hi.value
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn merge(&mut self, other: BoundReport) {
        self.inputs.extend(other.inputs);
        self.entries.extend(other.entries);
    }
}

/// Formatter writing floats with 17 significant digits.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactFloatFormatter;

impl Formatter for ExactFloatFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Compact JSON with 17-digit floats, terminated by a newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFloatFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Parse(format!("serialization failed: {e}")))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Real {
    Num(f64),
    Tag(String),
}

impl From<f64> for Real {
    fn from(v: f64) -> Self {
        if v.is_finite() {
            Real::Num(v)
        } else if v.is_nan() {
            Real::Tag("nan".into())
        } else if v > 0.0 {
            Real::Tag("inf".into())
        } else {
            Real::Tag("-inf".into())
        }
    }
}

impl Real {
    fn into_f64<E: serde::de::Error>(self) -> std::result::Result<f64, E> {
        match self {
            Real::Num(v) => Ok(v),
            Real::Tag(s) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(E::custom(format!("expected a number, got `{other}`"))),
            },
        }
    }
}

/// `#[serde(with = "real")]` for a single `f64` that may be non-finite.
pub mod real {
    use super::Real;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        Real::from(*v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Real::deserialize(d)?.into_f64()
    }
}

/// `#[serde(with = "real_vec")]` for `Vec<f64>`.
pub mod real_vec {
    use super::Real;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|&x| Real::from(x)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<Real>::deserialize(d)?.into_iter().map(Real::into_f64).collect()
    }
}

/// `#[serde(with = "real_map")]` for `BTreeMap<String, f64>`.
pub mod real_map {
    use std::collections::BTreeMap;

    use super::Real;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BTreeMap<String, f64>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(v.iter().map(|(k, &x)| (k, Real::from(x))))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, f64>, D::Error> {
        BTreeMap::<String, Real>::deserialize(d)?
            .into_iter()
            .map(|(k, v)| v.into_f64().map(|x| (k, x)))
            .collect()
    }
}
