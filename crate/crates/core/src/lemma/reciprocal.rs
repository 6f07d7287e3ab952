//! Additive energy of reciprocals bounded by point-line incidences.
//!
//! For `1/a1 + 1/b1 = 1/a2 + 1/b2` put `c = 1/b1`, `d = 1/b2` and
//! `s = a1 b1/(a1 + b1)`. The point `(1/(a2 + b2), 1/(a1 + b1))` then lies
//! on `y = (d/c)^2 x + d(1 - d/c)`. The map from quadruples to
//! `(c, d, point)` is injective, so the energy is at most the incidence
//! count of the multiset of lines indexed by `(c, d)`. Merging equal lines
//! can lose that bound: every `c = d` gives the same line `y = x`.

use super::trace::{Guarantee, LemmaTrace};
use super::{instance_of, rational};
use crate::error::{Error, Result};
use crate::incidence::{additive_energy, line_counts, power_sum, Line, PointSet};
use crate::set::FSet;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReciprocalLines {
    /// `(1/(A+B))` as both coordinates of the grid.
    pub inverse_sumset: Vec<u32>,
    /// One line per ordered `(c, d) ∈ B^{-1} × B^{-1}`.
    pub lines: Vec<Line>,
    pub incidences: u128,
    pub distinct_lines: usize,
    pub distinct_incidences: u128,
    /// `E_+(1/A, 1/B)`
    pub energy: u128,
}

/// Checks `0 ∉ A, B, A + B` and builds both sides.
pub fn reciprocal_energy_lines(a: &FSet, b: &FSet) -> Result<ReciprocalLines> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    if a.contains_zero() || b.contains_zero() {
        return Err(Error::ZeroInSet);
    }
    let s = a.sumset(b)?;
    if s.contains_zero() {
        return Err(Error::ZeroInSumset);
    }
    let f = a.field();
    let x = s.inverse_set()?;
    let binv = b.inverse_set()?;
    let mut lines = Vec::with_capacity(binv.len() * binv.len());
    for c in binv.iter() {
        for d in binv.iter() {
            let t = f.mul(d, f.inv_nonzero(c));
            lines.push(Line::new(f.mul(t, t), f.mul(d, f.sub(1, t))));
        }
    }
    let grid = PointSet::cartesian(&x, &x)?;
    let counts = line_counts(&grid, &lines)?;
    let incidences = power_sum(counts.iter().copied(), 1)?;
    let mut dedup: Vec<(Line, u64)> = lines.iter().copied().zip(counts.iter().copied()).collect();
    dedup.sort_unstable();
    dedup.dedup_by_key(|e| e.0);
    let distinct_incidences = dedup.iter().map(|e| e.1 as u128).sum();
    let energy = additive_energy(&a.inverse_set()?, &binv)?;
    Ok(ReciprocalLines {
        inverse_sumset: x.elems().to_vec(),
        lines,
        incidences,
        distinct_lines: dedup.len(),
        distinct_incidences,
        energy,
    })
}

pub fn reciprocal_trace(a: &FSet, b: &FSet) -> Result<LemmaTrace> {
    reciprocal_energy_lines(a, b)?;
    let t = LemmaTrace::new("reciprocal_energy_lines", instance_of(a.field(), &[("A", a), ("B", b)]));
    let g = evaluate(&t)?;
    Ok(t.finish(g))
}

pub(super) fn evaluate(t: &LemmaTrace) -> Result<Vec<Guarantee>> {
    let r = reciprocal_energy_lines(&t.input("A")?, &t.input("B")?)?;
    Ok(vec![
        Guarantee::upper("energy_le_incidences", "E+(1/A, 1/B) <= I(P, L) over the line multiset", true, r.energy, rational(r.incidences, 1)),
        Guarantee::upper(
            "energy_vs_distinct_lines",
            "E+(1/A, 1/B) against I(P, L) over distinct lines",
            false,
            r.energy,
            rational(r.distinct_incidences, 1),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::incidence::energy_oracle;
    use crate::set::OpKind;
    use proptest::prelude::*;

    /// Incidences by brute force: for each (c, d) and each point, test the
    /// line equation directly.
    fn incidence_oracle(a: &FSet, b: &FSet) -> u128 {
        let f = a.field();
        let x = a.sumset(b).unwrap().inverse_set().unwrap();
        let mut n = 0;
        for b1 in b.iter() {
            for b2 in b.iter() {
                let (c, d) = (f.inv_nonzero(b1), f.inv_nonzero(b2));
                let slope = f.mul(f.mul(d, d), f.inv_nonzero(f.mul(c, c)));
                let icpt = f.mul(d, f.sub(1, f.mul(d, f.inv_nonzero(c))));
                for u in x.iter() {
                    for v in x.iter() {
                        if f.add(f.mul(slope, u), icpt) == v {
                            n += 1;
                        }
                    }
                }
            }
        }
        n
    }

    #[test]
    fn tiny_instance_in_f7() {
        let f = Field::prime(7).unwrap();
        let a = FSet::new(&f, [1, 2]).unwrap();
        let r = reciprocal_energy_lines(&a, &a).unwrap();
        let e = energy_oracle(&a.inverse_set().unwrap(), &a.inverse_set().unwrap(), OpKind::Sum).unwrap();
        assert_eq!(r.energy, e);
        assert_eq!(r.incidences, incidence_oracle(&a, &a));
        assert!(r.energy <= r.incidences);
    }

    #[test]
    fn singleton_b() {
        let f = Field::prime(11).unwrap();
        let a = FSet::new(&f, [1, 2, 3]).unwrap();
        let b = FSet::new(&f, [4]).unwrap();
        let r = reciprocal_energy_lines(&a, &b).unwrap();
        assert_eq!(r.distinct_lines, 1);
        assert!(r.energy <= r.incidences);
    }

    #[test]
    fn zero_rejections() {
        let f = Field::prime(7).unwrap();
        let a = FSet::new(&f, [1, 2]).unwrap();
        let z = FSet::new(&f, [0, 3]).unwrap();
        assert_eq!(reciprocal_energy_lines(&a, &z).unwrap_err(), Error::ZeroInSet);
        let neg = FSet::new(&f, [5]).unwrap();
        assert_eq!(reciprocal_energy_lines(&a, &neg).unwrap_err(), Error::ZeroInSumset);
    }

    #[test]
    fn trace_replays() {
        let f = Field::prime(101).unwrap();
        let g = FSet::new(&f, [1, 3, 9, 27, 81]).unwrap();
        let t = reciprocal_trace(&g, &g).unwrap();
        assert!(t.guarantee("energy_le_incidences").unwrap().holds);
        assert!(t.replay().unwrap().ok);
    }

    proptest! {
        #[test]
        fn energy_at_most_incidences(xs in proptest::collection::vec(1u32..101, 1..8),
                                     ys in proptest::collection::vec(1u32..101, 1..8)) {
            let f = Field::prime(101).unwrap();
            let a = FSet::new(&f, xs).unwrap();
            let b = FSet::new(&f, ys).unwrap();
            prop_assume!(!a.sumset(&b).unwrap().contains_zero());
            let r = reciprocal_energy_lines(&a, &b).unwrap();
            prop_assert!(r.energy <= r.incidences);
            prop_assert_eq!(r.incidences, incidence_oracle(&a, &b));
        }
    }
}
