//! Point-line incidences, spanned lines, collinear triples and energies.
//!
//! Every statistic has a brute-force oracle next to the fast path; counts
//! are `u128` with checked arithmetic throughout.

mod star;
mod stats;
mod triples;

pub use star::{k_rich_spanned, lines_spanned, lines_spanned_oracle, star_totals, SpannedLines, StarTotals};
pub use stats::{compute_stats, StatKind, StatReport};
pub use triples::{
    additive_energy, collinear_triples, collinear_triples_energy_plus, degenerate_triples, energy_oracle,
    multiplicative_energy, nontrivial_collinear_triples, TripleMode, ORACLE_CAP,
};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::set::FSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A line of F_q^2 in canonical form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Line {
    /// y = slope * x + intercept
    NonVertical { slope: u32, intercept: u32 },
    /// x = x
    Vertical { x: u32 },
}

impl Line {
    pub fn new(slope: u32, intercept: u32) -> Line {
        Line::NonVertical { slope, intercept }
    }

    /// The unique line through two distinct points.
    pub fn through(f: &Field, p: (u32, u32), r: (u32, u32)) -> Option<Line> {
        if p == r {
            return None;
        }
        if p.0 == r.0 {
            return Some(Line::Vertical { x: p.0 });
        }
        let slope = f.mul(f.sub(r.1, p.1), f.inv_nonzero(f.sub(r.0, p.0)));
        Some(Line::with_slope_through(f, slope, p))
    }

    pub(crate) fn with_slope_through(f: &Field, slope: u32, p: (u32, u32)) -> Line {
        Line::NonVertical { slope, intercept: f.sub(p.1, f.mul(slope, p.0)) }
    }

    pub fn contains(&self, f: &Field, (x, y): (u32, u32)) -> bool {
        match *self {
            Line::NonVertical { slope, intercept } => f.add(f.mul(slope, x), intercept) == y,
            Line::Vertical { x: c } => x == c,
        }
    }

    fn check(&self, f: &Field) -> Result<()> {
        match *self {
            Line::NonVertical { slope, intercept } => {
                f.check(slope as u64)?;
                f.check(intercept as u64)?;
            }
            Line::Vertical { x } => {
                f.check(x as u64)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::NonVertical { slope, intercept } => write!(f, "y={slope}x+{intercept}"),
            Line::Vertical { x } => write!(f, "x={x}"),
        }
    }
}

/// All q^2 + q lines of the plane.
pub fn all_lines(f: &Field) -> Result<Vec<Line>> {
    let q = f.q();
    if q * q + q > 1 << 24 {
        return Err(Error::EnumerationTooLarge(q * q + q));
    }
    let q = q as u32;
    let mut v: Vec<Line> = (0..q).flat_map(|a| (0..q).map(move |b| Line::new(a, b))).collect();
    v.extend((0..q).map(|x| Line::Vertical { x }));
    Ok(v)
}

/// `{y = cx + d : c in C, d in D}`.
pub fn cartesian_lines(c: &FSet, d: &FSet) -> Vec<Line> {
    c.iter().flat_map(|s| d.iter().map(move |t| Line::new(s, t))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointSet {
    Cartesian { a: FSet, b: FSet },
    Explicit { field: Field, points: Vec<(u32, u32)> },
}

impl PointSet {
    pub fn cartesian(a: &FSet, b: &FSet) -> Result<PointSet> {
        if a.field() != b.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(PointSet::Cartesian { a: a.clone(), b: b.clone() })
    }

    pub fn explicit(field: &Field, points: impl IntoIterator<Item = (u32, u32)>) -> Result<PointSet> {
        let mut v = Vec::new();
        for (x, y) in points {
            v.push((field.check(x as u64)?, field.check(y as u64)?));
        }
        v.sort_unstable();
        v.dedup();
        Ok(PointSet::Explicit { field: field.clone(), points: v })
    }

    /// The whole plane F_q^2.
    pub fn plane(field: &Field) -> Result<PointSet> {
        let all = FSet::new(field, field.elements()?)?;
        PointSet::cartesian(&all, &all)
    }

    pub fn field(&self) -> &Field {
        match self {
            PointSet::Cartesian { a, .. } => a.field(),
            PointSet::Explicit { field, .. } => field,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            PointSet::Cartesian { a, b } => a.len() * b.len(),
            PointSet::Explicit { points, .. } => points.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in lexicographic (x, y) order.
    pub fn points(&self) -> Vec<(u32, u32)> {
        match self {
            PointSet::Cartesian { a, b } => a.iter().flat_map(|x| b.iter().map(move |y| (x, y))).collect(),
            PointSet::Explicit { points, .. } => points.clone(),
        }
    }

    /// Points grouped by x, both levels sorted.
    pub(crate) fn columns(&self) -> Vec<(u32, Vec<u32>)> {
        match self {
            PointSet::Cartesian { a, b } => a.iter().map(|x| (x, b.elems().to_vec())).collect(),
            PointSet::Explicit { points, .. } => {
                let mut cols: Vec<(u32, Vec<u32>)> = Vec::new();
                for &(x, y) in points {
                    match cols.last_mut() {
                        Some((cx, ys)) if *cx == x => ys.push(y),
                        _ => cols.push((x, vec![y])),
                    }
                }
                cols
            }
        }
    }

    pub fn contains(&self, (x, y): (u32, u32)) -> bool {
        match self {
            PointSet::Cartesian { a, b } => a.contains(x) && b.contains(y),
            PointSet::Explicit { points, .. } => points.binary_search(&(x, y)).is_ok(),
        }
    }
}

/// `|P ∩ l|` for each line, in input order.
pub fn line_counts(p: &PointSet, lines: &[Line]) -> Result<Vec<u64>> {
    let f = p.field();
    for l in lines {
        l.check(f)?;
    }
    Ok(match p {
        PointSet::Cartesian { a, b } => lines
            .par_iter()
            .map(|l| match *l {
                Line::Vertical { x } => {
                    if a.contains(x) {
                        b.len() as u64
                    } else {
                        0
                    }
                }
                Line::NonVertical { slope: 0, intercept } => {
                    if b.contains(intercept) {
                        a.len() as u64
                    } else {
                        0
                    }
                }
                Line::NonVertical { slope, intercept } => {
                    a.iter().filter(|&x| b.contains(f.add(f.mul(slope, x), intercept))).count() as u64
                }
            })
            .collect(),
        PointSet::Explicit { .. } => {
            let cols = p.columns();
            lines
                .par_iter()
                .map(|l| match *l {
                    Line::Vertical { x } => {
                        cols.binary_search_by_key(&x, |c| c.0).map_or(0, |i| cols[i].1.len() as u64)
                    }
                    Line::NonVertical { slope, intercept } => cols
                        .iter()
                        .filter(|(x, ys)| ys.binary_search(&f.add(f.mul(slope, *x), intercept)).is_ok())
                        .count() as u64,
                })
                .collect()
        }
    })
}

/// `I(P, L)`.
pub fn incidences(p: &PointSet, lines: &[Line]) -> Result<u128> {
    k_rich_incidences(p, lines, 1)
}

/// `I_k(P, L) = sum_l |P ∩ l|^k` for k in 1..=4.
pub fn k_rich_incidences(p: &PointSet, lines: &[Line], k: u32) -> Result<u128> {
    if !(1..=4).contains(&k) {
        return Err(Error::InvalidParams(format!("k = {k} outside 1..=4")));
    }
    let counts = line_counts(p, lines)?;
    power_sum(counts.iter().copied(), k)
}

pub(crate) fn power_sum(counts: impl Iterator<Item = u64>, k: u32) -> Result<u128> {
    let mut total: u128 = 0;
    for n in counts {
        let t = (n as u128).checked_pow(k).ok_or(Error::Overflow)?;
        total = total.checked_add(t).ok_or(Error::Overflow)?;
    }
    Ok(total)
}

/// Double-loop oracle for `I(P, L)`.
pub fn incidences_oracle(p: &PointSet, lines: &[Line]) -> Result<u128> {
    let f = p.field();
    let pts = p.points();
    let mut total = 0u128;
    for l in lines {
        l.check(f)?;
        total += pts.iter().filter(|&&pt| l.contains(f, pt)).count() as u128;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn subfield_set(q: u64, d: u32) -> FSet {
        let f = Field::of_order(q).unwrap();
        FSet::new(&f, f.subfield(d).unwrap().elements).unwrap()
    }

    #[test]
    fn subfield_grid_incidences() {
        let g = subfield_set(4, 1);
        let p = PointSet::cartesian(&g, &g).unwrap();
        let lines = cartesian_lines(&g, &g);
        assert_eq!(incidences(&p, &lines).unwrap(), 8);
        assert_eq!(incidences_oracle(&p, &lines).unwrap(), 8);
        assert_eq!(k_rich_incidences(&p, &lines, 3).unwrap(), 32);
        assert_eq!(k_rich_incidences(&p, &[], 2).unwrap(), 0);
        assert!(k_rich_incidences(&p, &lines, 5).is_err());
    }

    #[test]
    fn whole_plane() {
        for q in [4u64, 5, 9] {
            let f = Field::of_order(q).unwrap();
            let p = PointSet::plane(&f).unwrap();
            let lines = all_lines(&f).unwrap();
            assert_eq!(lines.len() as u64, q * q + q);
            let i = incidences(&p, &lines).unwrap();
            assert_eq!(i, (q * (q * q + q)) as u128);
            assert_eq!(i, incidences_oracle(&p, &lines).unwrap());
        }
    }

    #[test]
    fn single_point_single_line() {
        let f = Field::prime(7).unwrap();
        let p = PointSet::explicit(&f, [(2, 5)]).unwrap();
        let l = Line::through(&f, (2, 5), (3, 1)).unwrap();
        assert_eq!(incidences(&p, &[l]).unwrap(), 1);
        assert_eq!(Line::through(&f, (1, 1), (1, 1)), None);
        assert_eq!(Line::through(&f, (1, 1), (1, 4)), Some(Line::Vertical { x: 1 }));
    }

    #[test]
    fn explicit_matches_cartesian() {
        let f = Field::prime(13).unwrap();
        let a = FSet::new(&f, [1, 3, 4, 9]).unwrap();
        let b = FSet::new(&f, [0, 2, 5]).unwrap();
        let cart = PointSet::cartesian(&a, &b).unwrap();
        let expl = PointSet::explicit(&f, cart.points()).unwrap();
        let lines = all_lines(&f).unwrap();
        for k in 1..=4 {
            assert_eq!(k_rich_incidences(&cart, &lines, k).unwrap(), k_rich_incidences(&expl, &lines, k).unwrap());
        }
        assert!(incidences(&cart, &[Line::new(13, 0)]).is_err());
    }
}
