//! Per-point line stars.
//!
//! For a point p, the other points of P fall into directions; a direction
//! holding k points is a spanned line through p with k + 1 points. Summing
//! `(k+1)^(j-1)` over all stars gives `sum_l n_l^j`, since each spanned line
//! is seen once from each of its n_l points. A line is listed at its
//! lexicographically smallest point, which makes the enumeration exact
//! without hashing line forms.

use super::{Line, PointSet};
use crate::error::{Error, Result};
use crate::field::Field;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};

/// Direction arrays are dense up to this many slots, hashed beyond.
const DENSE_DIRECTIONS: u64 = 1 << 22;

/// `sums[j] = sum_{l in L(P)} n_l^(j+1)` for j = 0..4, plus |P| and |L(P)|.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StarTotals {
    pub points: u128,
    pub lines: u128,
    pub sums: [u128; 4],
}

impl StarTotals {
    /// `T(P)`: the triple count `I_3(P, L(P))` corrected for constant
    /// triples, which each spanned line through the point counts once.
    pub fn collinear_triples(&self) -> Result<u128> {
        self.sums[2].checked_add(self.points).and_then(|x| x.checked_sub(self.sums[0])).ok_or(Error::Overflow)
    }
    /// `sum_p deg(p)` over spanned lines.
    pub fn degree_sum(&self) -> u128 {
        self.sums[0]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpannedLines {
    /// Lines in the order of their smallest point, with `|P ∩ l|`.
    pub lines: Vec<(Line, u64)>,
    pub totals: StarTotals,
}

impl SpannedLines {
    pub fn count(&self) -> usize {
        self.lines.len()
    }
}

enum Counter {
    Dense { cnt: Vec<u32>, smaller: Vec<bool>, touched: Vec<u32> },
    Sparse(HashMap<u32, (u32, bool)>),
}

impl Counter {
    fn new(q: u64) -> Counter {
        if q < DENSE_DIRECTIONS {
            let n = q as usize + 1;
            Counter::Dense { cnt: vec![0; n], smaller: vec![false; n], touched: Vec::new() }
        } else {
            Counter::Sparse(HashMap::new())
        }
    }

    #[inline]
    fn bump(&mut self, dir: u32, is_smaller: bool) {
        match self {
            Counter::Dense { cnt, smaller, touched } => {
                let i = dir as usize;
                if cnt[i] == 0 {
                    touched.push(dir);
                }
                cnt[i] += 1;
                smaller[i] |= is_smaller;
            }
            Counter::Sparse(m) => {
                let e = m.entry(dir).or_insert((0, false));
                e.0 += 1;
                e.1 |= is_smaller;
            }
        }
    }

    /// Yields `(direction, k, any smaller point)` and resets.
    fn drain(&mut self, mut visit: impl FnMut(u32, u32, bool)) {
        match self {
            Counter::Dense { cnt, smaller, touched } => {
                for &d in touched.iter() {
                    let i = d as usize;
                    visit(d, cnt[i], smaller[i]);
                    cnt[i] = 0;
                    smaller[i] = false;
                }
                touched.clear();
            }
            Counter::Sparse(m) => {
                let mut v: Vec<_> = m.drain().collect();
                v.sort_unstable_by_key(|e| e.0);
                for (d, (k, s)) in v {
                    visit(d, k, s);
                }
            }
        }
    }
}

#[derive(Default)]
struct PointStar {
    sums: [u128; 4],
    minimal_lines: Vec<(Line, u64)>,
    minimal_count: u128,
}

fn star_at(f: &Field, cols: &[(u32, Vec<u32>)], ci: usize, y0: u32, counter: &mut Counter, collect: bool) -> Result<PointStar> {
    let q = f.q() as u32;
    let x0 = cols[ci].0;
    for (cj, (x1, ys)) in cols.iter().enumerate() {
        if cj == ci {
            for &y in ys {
                if y != y0 {
                    counter.bump(q, y < y0);
                }
            }
        } else {
            let inv = f.inv_nonzero(f.sub(*x1, x0));
            let before = cj < ci;
            for &y in ys {
                counter.bump(f.mul(f.sub(y, y0), inv), before);
            }
        }
    }
    let mut out = PointStar::default();
    let mut overflow = false;
    counter.drain(|dir, k, smaller| {
        let n = k as u128 + 1;
        let mut pw = 1u128;
        for s in out.sums.iter_mut() {
            match s.checked_add(pw) {
                Some(v) => *s = v,
                None => overflow = true,
            }
            pw = pw.saturating_mul(n);
        }
        if !smaller {
            out.minimal_count += 1;
            if collect {
                let line =
                    if dir == q { Line::Vertical { x: x0 } } else { Line::with_slope_through(f, dir, (x0, y0)) };
                out.minimal_lines.push((line, n as u64));
            }
        }
    });
    if overflow {
        return Err(Error::Overflow);
    }
    Ok(out)
}

fn scan(p: &PointSet, collect: bool) -> Result<(StarTotals, Vec<(Line, u64)>)> {
    let f = p.field();
    let cols = p.columns();
    let index: Vec<(usize, u32)> = cols.iter().enumerate().flat_map(|(ci, (_, ys))| ys.iter().map(move |&y| (ci, y))).collect();
    let q = f.q();
    let stars: Vec<Result<PointStar>> = index
        .par_iter()
        .map_init(|| Counter::new(q), |counter, &(ci, y)| star_at(f, &cols, ci, y, counter, collect))
        .collect();
    let mut totals = StarTotals { points: index.len() as u128, ..Default::default() };
    let mut lines = Vec::new();
    for s in stars {
        let s = s?;
        for (t, v) in totals.sums.iter_mut().zip(s.sums) {
            *t = t.checked_add(v).ok_or(Error::Overflow)?;
        }
        totals.lines += s.minimal_count;
        lines.extend(s.minimal_lines);
    }
    Ok((totals, lines))
}

/// Power sums over spanned lines without materializing them.
pub fn star_totals(p: &PointSet) -> Result<StarTotals> {
    Ok(scan(p, false)?.0)
}

/// `L(P)` with multiplicities.
pub fn lines_spanned(p: &PointSet) -> Result<SpannedLines> {
    if p.len() < 2 {
        return Err(Error::TooFewPoints);
    }
    let (totals, lines) = scan(p, true)?;
    Ok(SpannedLines { lines, totals })
}

/// `I_k(P, L(P))`, k in 1..=4.
pub fn k_rich_spanned(p: &PointSet, k: u32) -> Result<u128> {
    if !(1..=4).contains(&k) {
        return Err(Error::InvalidParams(format!("k = {k} outside 1..=4")));
    }
    Ok(star_totals(p)?.sums[k as usize - 1])
}

/// Pair enumeration with canonical-form dedup.
pub fn lines_spanned_oracle(p: &PointSet) -> Result<BTreeSet<Line>> {
    if p.len() < 2 {
        return Err(Error::TooFewPoints);
    }
    let f = p.field();
    let pts = p.points();
    let mut set = BTreeSet::new();
    for (i, &u) in pts.iter().enumerate() {
        for &v in &pts[i + 1..] {
            set.insert(Line::through(f, u, v).unwrap());
        }
    }
    Ok(set)
}
