//! Collinear triples in Cartesian grids and the two energies.

use super::star::star_totals;
use super::PointSet;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::set::{rep_function, run_lengths, FSet, OpKind};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

/// The sextuple oracle refuses |A||B| above this.
pub const ORACLE_CAP: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TripleMode {
    Oracle,
    LineAggregate,
    EnergyDecomposition,
}

impl FromStr for TripleMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(TripleMode::Oracle),
            "line_aggregate" | "lines" => Ok(TripleMode::LineAggregate),
            "energy_decomposition" | "energy" => Ok(TripleMode::EnergyDecomposition),
            _ => Err(Error::Parse(format!("unknown triple mode `{s}`"))),
        }
    }
}

fn check_pair(a: &FSet, b: &FSet) -> Result<()> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidParams("empty set".into()));
    }
    Ok(())
}

/// Counts sextuples with `(a2-a1)(b3-b1) = (a3-a1)(b2-b1)`, optionally
/// requiring the common value to be nonzero.
fn sextuple_oracle(a: &FSet, b: &FSet, nonzero: bool) -> Result<u128> {
    if a.len() * b.len() > ORACLE_CAP {
        return Err(Error::OracleTooLarge(format!("|A||B| = {} > {ORACLE_CAP}", a.len() * b.len())));
    }
    let f = a.field();
    let mut t = 0u128;
    for a1 in a.iter() {
        for a2 in a.iter() {
            for a3 in a.iter() {
                let (da2, da3) = (f.sub(a2, a1), f.sub(a3, a1));
                for b1 in b.iter() {
                    for b2 in b.iter() {
                        for b3 in b.iter() {
                            let lhs = f.mul(da2, f.sub(b3, b1));
                            if lhs == f.mul(da3, f.sub(b2, b1)) && (!nonzero || lhs != 0) {
                                t += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(t)
}

fn product_energy_shifted(f: &Field, a: &FSet, b: &FSet, da: u32, db: u32) -> u128 {
    let xs: Vec<u32> = a.iter().map(|x| f.add(x, da)).collect();
    let ys: Vec<u32> = b.iter().map(|y| f.add(y, db)).collect();
    let mut vals = Vec::with_capacity(xs.len() * ys.len());
    for &x in &xs {
        vals.extend(ys.iter().map(|&y| f.mul(x, y)));
    }
    run_lengths(vals).into_iter().map(|(_, c)| c as u128 * c as u128).sum()
}

fn energy_sum(a: &FSet, b: &FSet, sign_minus: bool) -> u128 {
    let f = a.field();
    let pairs: Vec<(u32, u32)> = a.iter().flat_map(|x| b.iter().map(move |y| (x, y))).collect();
    pairs
        .par_iter()
        .map(|&(x, y)| {
            let (dx, dy) = if sign_minus { (f.neg(x), f.neg(y)) } else { (x, y) };
            product_energy_shifted(f, a, b, dx, dy)
        })
        .sum()
}

/// `T(A, B)`.
pub fn collinear_triples(a: &FSet, b: &FSet, mode: TripleMode) -> Result<u128> {
    check_pair(a, b)?;
    match mode {
        TripleMode::Oracle => sextuple_oracle(a, b, false),
        TripleMode::LineAggregate => star_totals(&PointSet::cartesian(a, b)?)?.collinear_triples(),
        TripleMode::EnergyDecomposition => Ok(energy_sum(a, b, true)),
    }
}

/// `sum_{(a,b)} E_x(A + a, B + b)`, the plus-sign variant of the energy
/// decomposition. It does not equal `T(A, B)` in general.
pub fn collinear_triples_energy_plus(a: &FSet, b: &FSet) -> Result<u128> {
    check_pair(a, b)?;
    Ok(energy_sum(a, b, false))
}

/// Number of sextuples on which both sides of the triple equation vanish,
/// `#{(a2 = a1 or b3 = b1) and (a3 = a1 or b2 = b1)}`; depends only on the sizes.
pub fn degenerate_triples(alpha: u64, beta: u64) -> u128 {
    let (al, be) = (alpha as u128, beta as u128);
    // choices of (x2, x3) given x1, by which of x2 = x1, x3 = x1 hold
    let pattern = |n: u128, e1: bool, e2: bool| match (e1, e2) {
        (true, true) => 1,
        (true, false) | (false, true) => n - 1,
        (false, false) => (n - 1) * (n - 1),
    };
    let mut z = 0u128;
    for e1 in [false, true] {
        for e2 in [false, true] {
            for f1 in [false, true] {
                for f2 in [false, true] {
                    // e1: a2 = a1, e2: a3 = a1, f1: b3 = b1, f2: b2 = b1
                    if (e1 || f1) && (e2 || f2) {
                        z += pattern(al, e1, e2) * pattern(be, f1, f2);
                    }
                }
            }
        }
    }
    al * be * z
}

/// `T*(A, B)`. The oracle mode counts directly; other modes subtract the
/// degenerate class from `T`.
pub fn nontrivial_collinear_triples(a: &FSet, b: &FSet, mode: TripleMode) -> Result<u128> {
    check_pair(a, b)?;
    if mode == TripleMode::Oracle {
        return sextuple_oracle(a, b, true);
    }
    let t = collinear_triples(a, b, mode)?;
    t.checked_sub(degenerate_triples(a.len() as u64, b.len() as u64)).ok_or(Error::Overflow)
}

/// `E_+(A, B) = #{a1 + b1 = a2 + b2}`.
pub fn additive_energy(a: &FSet, b: &FSet) -> Result<u128> {
    Ok(rep_function(a, b, OpKind::Sum)?.sum_squares())
}

/// `E_x(A, B) = #{a1 b1 = a2 b2}`.
pub fn multiplicative_energy(a: &FSet, b: &FSet) -> Result<u128> {
    Ok(rep_function(a, b, OpKind::Product)?.sum_squares())
}

/// Quadruple-scan oracle for either energy.
pub fn energy_oracle(a: &FSet, b: &FSet, kind: OpKind) -> Result<u128> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    let f = a.field();
    let mut e = 0u128;
    for a1 in a.iter() {
        for a2 in a.iter() {
            for b1 in b.iter() {
                for b2 in b.iter() {
                    if kind.apply(f, a1, b1) == kind.apply(f, a2, b2) && kind.apply(f, a1, b1).is_some() {
                        e += 1;
                    }
                }
            }
        }
    }
    Ok(e)
}
