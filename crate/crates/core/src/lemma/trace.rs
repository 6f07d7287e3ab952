//! Lemma traces: witnesses plus the inequalities they certify.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::report::{Instance, SCHEMA_VERSION, TOOL_VERSION};
use crate::set::FSet;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// `Upper`: the claim is `lhs <= C * rhs`. `Lower`: `lhs >= c * rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Upper,
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PassState {
    ExactPass,
    RatioReport,
    Fail,
}

/// Rational number serialized as `"num/den"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ratio(pub BigRational);

impl Ratio {
    pub fn from_ints(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Ratio {
        Ratio(BigRational::new(num.into(), den.into()))
    }
    pub fn to_f64(&self) -> f64 {
        crate::bounds::rational_to_f64(&self.0)
    }
}

impl Serialize for Ratio {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
    }
}

impl<'de> Deserialize<'de> for Ratio {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let s = String::deserialize(d)?;
        let (n, m) = s.split_once('/').unwrap_or((&s, "1"));
        let n: BigInt = n.parse().map_err(|_| D::Error::custom(format!("bad rational `{s}`")))?;
        let m: BigInt = m.parse().map_err(|_| D::Error::custom(format!("bad rational `{s}`")))?;
        if m.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Ratio(BigRational::new(n, m)))
    }
}

/// Product of integer powers `prod base_i^e_i` as an exact rational.
pub fn power_product(terms: &[(u128, i64)]) -> Result<BigRational> {
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for &(b, e) in terms {
        let p = BigUint::from(b).pow(e.unsigned_abs() as u32);
        if e >= 0 {
            num *= p;
        } else {
            den *= p;
        }
    }
    if den.is_zero() {
        return Err(Error::InvalidParams("zero base with negative exponent".into()));
    }
    Ok(BigRational::new(num.into(), den.into()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Guarantee {
    pub id: String,
    /// The inequality in words, e.g. `|C| >> T^5/(|A|^10|B|^14)`.
    pub form: String,
    pub direction: Direction,
    /// Constant-free claims must hold with constant 1.
    pub exact: bool,
    #[serde(with = "crate::report::u128_str")]
    pub lhs: u128,
    pub rhs: Ratio,
    /// `lhs / rhs`; absent when rhs = 0.
    pub ratio: Option<Ratio>,
    pub ratio_approx: Option<f64>,
    /// `lhs <= rhs` (upper) or `lhs >= rhs` (lower).
    pub holds: bool,
}

impl Guarantee {
    pub fn new(id: &str, form: &str, direction: Direction, exact: bool, lhs: u128, rhs: BigRational) -> Guarantee {
        let l = BigRational::from_integer(BigInt::from(lhs));
        let holds = match direction {
            Direction::Upper => l <= rhs,
            Direction::Lower => l >= rhs,
        };
        let ratio = if rhs.is_zero() { None } else { Some(Ratio(&l / &rhs)) };
        let ratio_approx = ratio.as_ref().map(|r| r.to_f64());
        Guarantee { id: id.into(), form: form.into(), direction, exact, lhs, rhs: Ratio(rhs), ratio, ratio_approx, holds }
    }

    pub fn upper(id: &str, form: &str, exact: bool, lhs: u128, rhs: BigRational) -> Guarantee {
        Guarantee::new(id, form, Direction::Upper, exact, lhs, rhs)
    }

    pub fn lower(id: &str, form: &str, exact: bool, lhs: u128, rhs: BigRational) -> Guarantee {
        Guarantee::new(id, form, Direction::Lower, exact, lhs, rhs)
    }

    pub fn ratio_f64(&self) -> f64 {
        self.ratio_approx.unwrap_or(f64::INFINITY)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum Witness {
    Set(Vec<u32>),
    Element(u32),
    Elements(Vec<u32>),
    Pairs(Vec<(u32, u32)>),
    Indices(Vec<usize>),
    Sets(Vec<Vec<u32>>),
    Count(u64),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaTrace {
    pub schema: String,
    pub version: String,
    pub lemma: String,
    pub instance: Instance,
    pub params: BTreeMap<String, String>,
    pub witnesses: BTreeMap<String, Witness>,
    pub guarantees: Vec<Guarantee>,
    pub status: PassState,
    pub notes: Vec<String>,
}

/// Result of re-evaluating a trace from its witnesses.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Replay {
    pub ok: bool,
    pub mismatches: Vec<String>,
}

impl LemmaTrace {
    pub fn new(lemma: &str, instance: Instance) -> LemmaTrace {
        LemmaTrace {
            schema: SCHEMA_VERSION.into(),
            version: TOOL_VERSION.into(),
            lemma: lemma.into(),
            instance,
            params: BTreeMap::new(),
            witnesses: BTreeMap::new(),
            guarantees: Vec::new(),
            status: PassState::RatioReport,
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, k: &str, v: impl ToString) -> Self {
        self.params.insert(k.into(), v.to_string());
        self
    }

    pub fn witness(mut self, k: &str, w: Witness) -> Self {
        self.witnesses.insert(k.into(), w);
        self
    }

    /// Attaches guarantees and derives the tri-state status.
    pub fn finish(mut self, guarantees: Vec<Guarantee>) -> Self {
        self.status = if guarantees.iter().any(|g| g.exact && !g.holds) {
            PassState::Fail
        } else if guarantees.iter().all(|g| g.exact) {
            PassState::ExactPass
        } else {
            PassState::RatioReport
        };
        self.guarantees = guarantees;
        self
    }

    pub fn guarantee(&self, id: &str) -> Option<&Guarantee> {
        self.guarantees.iter().find(|g| g.id == id)
    }

    pub fn field(&self) -> Result<Field> {
        Field::new(self.instance.field.clone())
    }

    /// Input set by name, rebuilt from the instance.
    pub fn input(&self, name: &str) -> Result<FSet> {
        let f = self.field()?;
        let (_, d) = self
            .instance
            .sets
            .iter()
            .find(|(n, _)| n == name)
            .ok_or_else(|| Error::Parse(format!("trace has no input `{name}`")))?;
        FSet::new(&f, d.elems.iter().copied())
    }

    pub fn set_witness(&self, name: &str) -> Result<FSet> {
        match self.witnesses.get(name) {
            Some(Witness::Set(v)) | Some(Witness::Elements(v)) => FSet::new(&self.field()?, v.iter().copied()),
            _ => Err(Error::Parse(format!("trace has no set witness `{name}`"))),
        }
    }

    pub fn element_witness(&self, name: &str) -> Result<u32> {
        match self.witnesses.get(name) {
            Some(Witness::Element(x)) => Ok(*x),
            _ => Err(Error::Parse(format!("trace has no element witness `{name}`"))),
        }
    }

    pub fn param_value<T: std::str::FromStr>(&self, name: &str) -> Result<T> {
        self.params
            .get(name)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("trace has no parameter `{name}`")))
    }

    /// Re-evaluates every guarantee from the stored witnesses.
    pub fn replay(&self) -> Result<Replay> {
        let fresh = super::evaluate_trace(self)?;
        let mut mismatches = Vec::new();
        if fresh.len() != self.guarantees.len() {
            mismatches.push(format!("{} guarantees stored, {} recomputed", self.guarantees.len(), fresh.len()));
        }
        for (a, b) in self.guarantees.iter().zip(&fresh) {
            if a.id != b.id || a.lhs != b.lhs || a.rhs != b.rhs || a.ratio != b.ratio || a.holds != b.holds {
                mismatches.push(format!("{}: stored lhs {} rhs {:?}, replayed lhs {} rhs {:?}", a.id, a.lhs, a.rhs, b.lhs, b.rhs));
            }
        }
        Ok(Replay { ok: mismatches.is_empty(), mismatches })
    }
}
