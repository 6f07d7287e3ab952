//! Structured set families, addressable by a compact descriptor string.
//!
//! Descriptor syntax is `kind:key=value,key=value`. A union joins member
//! descriptors with `+`, e.g. `union:interval:n=4+subfield_coset:degree=2,c=3`.

use super::FSet;
use crate::error::{Error, Result};
use crate::field::Field;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    SubfieldCoset,
    Interval,
    ArithmeticProgression,
    Geometric,
    MultiplicativeSubgroup,
    RandomUniform,
    Union,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::SubfieldCoset => "subfield_coset",
            FamilyKind::Interval => "interval",
            FamilyKind::ArithmeticProgression => "arithmetic_progression",
            FamilyKind::Geometric => "geometric",
            FamilyKind::MultiplicativeSubgroup => "multiplicative_subgroup",
            FamilyKind::RandomUniform => "random_uniform",
            FamilyKind::Union => "union",
        }
    }
}

impl FromStr for FamilyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "subfield_coset" | "coset" => FamilyKind::SubfieldCoset,
            "interval" => FamilyKind::Interval,
            "arithmetic_progression" | "ap" => FamilyKind::ArithmeticProgression,
            "geometric" | "gp" => FamilyKind::Geometric,
            "multiplicative_subgroup" | "subgroup" => FamilyKind::MultiplicativeSubgroup,
            "random_uniform" | "random" => FamilyKind::RandomUniform,
            "union" => FamilyKind::Union,
            other => return Err(Error::Parse(format!("unknown family kind `{other}`"))),
        })
    }
}

/// A generator for one set. `random_uniform` is seeded explicitly so the
/// descriptor alone reproduces the set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    /// `c * F_{p^degree} + d`.
    SubfieldCoset { degree: u32, c: u32, d: u32 },
    /// Consecutive encodings `start, start+1, …, start+n-1`.
    Interval { start: u32, n: u64 },
    ArithmeticProgression { start: u32, step: u32, n: u64 },
    Geometric { start: u32, ratio: u32, n: u64 },
    /// `coset * {g^(k(q-1)/order)}` for the smallest primitive element g.
    MultiplicativeSubgroup { order: u64, coset: u32 },
    RandomUniform { n: u64, seed: u64, nonzero: bool },
    Union { parts: Vec<Family> },
}

fn take<T: FromStr>(params: &mut BTreeMap<String, String>, key: &str, default: Option<T>) -> Result<T> {
    match params.remove(key) {
        Some(v) => v.parse().map_err(|_| Error::Parse(format!("bad value `{v}` for `{key}`"))),
        None => default.ok_or_else(|| Error::Parse(format!("missing parameter `{key}`"))),
    }
}

impl Family {
    pub fn kind(&self) -> FamilyKind {
        match self {
            Family::SubfieldCoset { .. } => FamilyKind::SubfieldCoset,
            Family::Interval { .. } => FamilyKind::Interval,
            Family::ArithmeticProgression { .. } => FamilyKind::ArithmeticProgression,
            Family::Geometric { .. } => FamilyKind::Geometric,
            Family::MultiplicativeSubgroup { .. } => FamilyKind::MultiplicativeSubgroup,
            Family::RandomUniform { .. } => FamilyKind::RandomUniform,
            Family::Union { .. } => FamilyKind::Union,
        }
    }

    /// Parses a descriptor. `seed` fills in a missing `seed=` for random
    /// members.
    pub fn parse(desc: &str, seed: u64) -> Result<Family> {
        let (kind, rest) = desc.split_once(':').unwrap_or((desc, ""));
        let kind: FamilyKind = kind.trim().parse()?;
        if kind == FamilyKind::Union {
            let parts = rest
                .split('+')
                .filter(|s| !s.trim().is_empty())
                .enumerate()
                .map(|(i, s)| Family::parse(s.trim(), seed.wrapping_add(i as u64)))
                .collect::<Result<Vec<_>>>()?;
            if parts.is_empty() {
                return Err(Error::InvalidParams("union needs at least one member".into()));
            }
            return Ok(Family::Union { parts });
        }
        let mut params = BTreeMap::new();
        for kv in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got `{kv}`")))?;
            params.insert(k.trim().to_string(), v.trim().to_string());
        }
        let fam = match kind {
            FamilyKind::SubfieldCoset => Family::SubfieldCoset {
                degree: take(&mut params, "degree", Some(1))?,
                c: take(&mut params, "c", Some(1))?,
                d: take(&mut params, "d", Some(0))?,
            },
            FamilyKind::Interval => {
                Family::Interval { start: take(&mut params, "start", Some(1))?, n: take(&mut params, "n", None)? }
            }
            FamilyKind::ArithmeticProgression => Family::ArithmeticProgression {
                start: take(&mut params, "start", Some(1))?,
                step: take(&mut params, "step", Some(1))?,
                n: take(&mut params, "n", None)?,
            },
            FamilyKind::Geometric => Family::Geometric {
                start: take(&mut params, "start", Some(1))?,
                ratio: take(&mut params, "ratio", Some(2))?,
                n: take(&mut params, "n", None)?,
            },
            FamilyKind::MultiplicativeSubgroup => Family::MultiplicativeSubgroup {
                order: take(&mut params, "order", None)?,
                coset: take(&mut params, "coset", Some(1))?,
            },
            FamilyKind::RandomUniform => Family::RandomUniform {
                n: take(&mut params, "n", None)?,
                seed: take(&mut params, "seed", Some(seed))?,
                nonzero: take(&mut params, "nonzero", Some(false))?,
            },
            FamilyKind::Union => unreachable!(),
        };
        if let Some(k) = params.keys().next() {
            return Err(Error::Parse(format!("unknown parameter `{k}` for {}", kind.name())));
        }
        Ok(fam)
    }

    /// Same family with size parameter replaced, for sweeps over sizes.
    pub fn with_size(&self, size: u64) -> Result<Family> {
        let mut f = self.clone();
        match &mut f {
            Family::Interval { n, .. }
            | Family::ArithmeticProgression { n, .. }
            | Family::Geometric { n, .. }
            | Family::RandomUniform { n, .. } => *n = size,
            Family::MultiplicativeSubgroup { order, .. } => *order = size,
            _ => return Err(Error::InvalidParams(format!("{} has no size parameter", self.kind().name()))),
        }
        Ok(f)
    }

    /// Same family with the seed replaced (random members only).
    pub fn with_seed(&self, new_seed: u64) -> Family {
        match self {
            Family::RandomUniform { n, nonzero, .. } => Family::RandomUniform { n: *n, seed: new_seed, nonzero: *nonzero },
            Family::Union { parts } => Family::Union {
                parts: parts.iter().enumerate().map(|(i, p)| p.with_seed(new_seed.wrapping_add(i as u64))).collect(),
            },
            other => other.clone(),
        }
    }

    pub fn generate(&self, field: &Field) -> Result<FSet> {
        let q = field.q();
        let bad = |msg: String| Error::InvalidParams(msg);
        match *self {
            Family::SubfieldCoset { degree, c, d } => {
                if degree == 0 || field.m() % degree != 0 {
                    return Err(bad(format!("degree {degree} does not divide m = {}", field.m())));
                }
                let g = field.subfield(degree)?;
                let (c, d) = (field.check(c as u64)?, field.check(d as u64)?);
                if c == 0 {
                    return Err(Error::ZeroDilation);
                }
                Ok(FSet::from_vec(field, g.elements.iter().map(|&x| field.add(field.mul(c, x), d)).collect()))
            }
            Family::Interval { start, n } => {
                if start as u64 + n > q {
                    return Err(bad(format!("interval {start}..{} exceeds q = {q}", start as u64 + n)));
                }
                Ok(FSet::from_vec(field, (start..start + n as u32).collect()))
            }
            Family::ArithmeticProgression { start, step, n } => {
                let (start, step) = (field.check(start as u64)?, field.check(step as u64)?);
                let limit = if step == 0 { 1 } else { field.p() as u64 };
                if n > limit {
                    return Err(bad(format!("progression with step {step} repeats after {limit} terms")));
                }
                let mut v = Vec::with_capacity(n as usize);
                let mut x = start;
                for _ in 0..n {
                    v.push(x);
                    x = field.add(x, step);
                }
                Ok(FSet::from_vec(field, v))
            }
            Family::Geometric { start, ratio, n } => {
                let (start, ratio) = (field.check(start as u64)?, field.check(ratio as u64)?);
                if start == 0 || ratio == 0 {
                    return Err(bad("geometric progression needs nonzero start and ratio".into()));
                }
                let mut v = Vec::with_capacity(n as usize);
                let mut x = start;
                for k in 0..n {
                    if k > 0 && x == start {
                        return Err(bad(format!("ratio {ratio} has multiplicative order {k} < {n}")));
                    }
                    v.push(x);
                    x = field.mul(x, ratio);
                }
                Ok(FSet::from_vec(field, v))
            }
            Family::MultiplicativeSubgroup { order, coset } => {
                if order == 0 || (q - 1) % order != 0 {
                    return Err(bad(format!("subgroup order {order} does not divide q-1 = {}", q - 1)));
                }
                let coset = field.check(coset as u64)?;
                if coset == 0 {
                    return Err(Error::ZeroDilation);
                }
                let h = field.pow(field.primitive_element(), (q - 1) / order);
                let mut v = Vec::with_capacity(order as usize);
                let mut x = coset;
                for _ in 0..order {
                    v.push(x);
                    x = field.mul(x, h);
                }
                Ok(FSet::from_vec(field, v))
            }
            Family::RandomUniform { n, seed, nonzero } => {
                let offset = nonzero as u64;
                let pool = q - offset;
                if n > pool {
                    return Err(bad(format!("cannot draw {n} distinct elements from {pool}")));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let idx = rand::seq::index::sample(&mut rng, pool as usize, n as usize);
                Ok(FSet::from_vec(field, idx.into_iter().map(|i| (i as u64 + offset) as u32).collect()))
            }
            Family::Union { ref parts } => {
                let mut acc = FSet::empty(field);
                for p in parts {
                    acc = acc.union(&p.generate(field)?)?;
                }
                Ok(acc)
            }
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::SubfieldCoset { degree, c, d } => write!(f, "subfield_coset:degree={degree},c={c},d={d}"),
            Family::Interval { start, n } => write!(f, "interval:start={start},n={n}"),
            Family::ArithmeticProgression { start, step, n } => {
                write!(f, "arithmetic_progression:start={start},step={step},n={n}")
            }
            Family::Geometric { start, ratio, n } => write!(f, "geometric:start={start},ratio={ratio},n={n}"),
            Family::MultiplicativeSubgroup { order, coset } => write!(f, "multiplicative_subgroup:order={order},coset={coset}"),
            Family::RandomUniform { n, seed, nonzero } => write!(f, "random_uniform:n={n},seed={seed},nonzero={nonzero}"),
            Family::Union { parts } => {
                let s: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "union:{}", s.join("+"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_in_f101() {
        let f = Field::prime(101).unwrap();
        let s = Family::parse("interval:n=5", 0).unwrap().generate(&f).unwrap();
        assert_eq!(s.elems(), &[1, 2, 3, 4, 5]);
        assert!(Family::parse("interval:start=100,n=2", 0).unwrap().generate(&f).is_err());
    }

    #[test]
    fn subgroup_of_order_three_in_f7() {
        let f = Field::prime(7).unwrap();
        assert_eq!(f.primitive_element(), 3);
        let s = Family::parse("multiplicative_subgroup:order=3", 0).unwrap().generate(&f).unwrap();
        assert_eq!(s.elems(), &[1, 2, 4]);
        assert_eq!(s.inverse_set().unwrap(), s);
        assert!(Family::parse("subgroup:order=4", 0).unwrap().generate(&f).is_err());
    }

    #[test]
    fn subfield_coset_in_f16() {
        let f = Field::with_degree(2, 4).unwrap();
        // alpha encodes t = 2
        let s = Family::parse("subfield_coset:degree=1,c=2,d=1", 0).unwrap().generate(&f).unwrap();
        assert_eq!(s.elems(), &[1, 3]);
        assert!(Family::parse("subfield_coset:degree=3", 0).unwrap().generate(&f).is_err());
        assert_eq!(Family::parse("coset:degree=2,c=0", 0).unwrap().generate(&f).unwrap_err(), Error::ZeroDilation);
    }

    #[test]
    fn random_is_seeded() {
        let f = Field::prime(1009).unwrap();
        let a = Family::parse("random_uniform:n=20,seed=3", 0).unwrap().generate(&f).unwrap();
        let b = Family::parse("random:n=20", 3).unwrap().generate(&f).unwrap();
        let c = Family::parse("random:n=20,seed=4", 0).unwrap().generate(&f).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 20);
        let nz = Family::parse("random:n=1008,nonzero=true", 1).unwrap().generate(&f).unwrap();
        assert!(!nz.contains_zero());
    }

    #[test]
    fn progressions() {
        let f = Field::prime(101).unwrap();
        let ap = Family::parse("ap:start=3,step=5,n=4", 0).unwrap().generate(&f).unwrap();
        assert_eq!(ap.elems(), &[3, 8, 13, 18]);
        let gp = Family::parse("geometric:n=5", 0).unwrap().generate(&f).unwrap();
        assert_eq!(gp.elems(), &[1, 2, 4, 8, 16]);
        let f7 = Field::prime(7).unwrap();
        assert!(Family::parse("geometric:ratio=2,n=4", 0).unwrap().generate(&f7).is_err());
    }

    #[test]
    fn union_and_round_trip() {
        let f = Field::with_degree(2, 4).unwrap();
        let fam = Family::parse("union:interval:start=5,n=3+subfield_coset:degree=2", 9).unwrap();
        let s = fam.generate(&f).unwrap();
        let g = f.subfield(2).unwrap();
        assert_eq!(s.len(), 3 + 4 - [5, 6, 7].iter().filter(|&&x| g.contains(x)).count());
        let again = Family::parse(&fam.to_string(), 0).unwrap();
        assert_eq!(again, fam);
    }

    #[test]
    fn rejects_garbage() {
        assert!(Family::parse("blob:n=3", 0).is_err());
        assert!(Family::parse("interval", 0).is_err());
        assert!(Family::parse("interval:n=3,zap=1", 0).is_err());
        assert!(Family::parse("interval:n=x", 0).is_err());
    }
}
