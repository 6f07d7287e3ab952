//! Shared report plumbing: schema tags, instance descriptors, serde helpers.

use crate::field::FieldSpec;
use crate::set::FSet;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "v1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// How one input set was obtained, plus its elements for replay.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetDescriptor {
    pub source: String,
    pub size: usize,
    pub contains_zero: bool,
    pub elems: Vec<u32>,
}

impl SetDescriptor {
    pub fn new(source: impl Into<String>, set: &FSet) -> Self {
        SetDescriptor {
            source: source.into(),
            size: set.len(),
            contains_zero: set.contains_zero(),
            elems: set.elems().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub field: FieldSpec,
    pub sets: Vec<(String, SetDescriptor)>,
    pub seed: Option<u64>,
}

impl Instance {
    pub fn new(field: &FieldSpec, seed: Option<u64>) -> Self {
        Instance { field: field.clone(), sets: Vec::new(), seed }
    }

    pub fn with_set(mut self, name: &str, source: &str, set: &FSet) -> Self {
        self.sets.push((name.to_string(), SetDescriptor::new(source, set)));
        self
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.sets.iter().map(|(n, s)| format!("{n}={}", s.source)).collect();
        format!("F_{}^{} {}", self.field.p, self.field.m, parts.join(" "))
    }
}

/// Big integers as decimal strings.
pub mod biguint_str {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| D::Error::custom(format!("bad integer `{s}`")))
    }
}

/// `u128` counts as decimal strings, so JSON readers with 53-bit numbers
/// cannot silently round them.
pub mod u128_str {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &u128, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u128, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| D::Error::custom(format!("bad integer `{s}`")))
    }
}
