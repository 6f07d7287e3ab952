//! Brute-force oracles shared by the integration tests and the acceptance
//! harness. They use nothing but field arithmetic.

#![allow(dead_code)]

use fqlab::{FSet, Field};

/// Fields small enough for sextuple scans.
pub const SMALL_FIELDS: [(u32, u32); 12] =
    [(5, 1), (7, 1), (13, 1), (31, 1), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3), (5, 2)];

pub fn field(i: usize) -> Field {
    let (p, m) = SMALL_FIELDS[i % SMALL_FIELDS.len()];
    Field::with_degree(p, m).unwrap()
}

pub fn set(f: &Field, raw: &[u32]) -> FSet {
    let q = f.q() as u32;
    FSet::new(f, raw.iter().map(|x| x % q)).unwrap()
}

/// `#{(a1,b1),(a2,b2),(a3,b3) : (a2-a1)(b3-b1) = (a3-a1)(b2-b1)}`.
pub fn triples(f: &Field, a: &FSet, b: &FSet) -> u128 {
    let pts: Vec<(u32, u32)> = a.iter().flat_map(|x| b.iter().map(move |y| (x, y))).collect();
    let mut n = 0u128;
    for &(x1, y1) in &pts {
        for &(x2, y2) in &pts {
            for &(x3, y3) in &pts {
                let l = f.mul(f.sub(x2, x1), f.sub(y3, y1));
                let r = f.mul(f.sub(x3, x1), f.sub(y2, y1));
                n += (l == r) as u128;
            }
        }
    }
    n
}

/// Same count with the degenerate class removed: both sides nonzero.
pub fn nontrivial_triples(f: &Field, a: &FSet, b: &FSet) -> u128 {
    let pts: Vec<(u32, u32)> = a.iter().flat_map(|x| b.iter().map(move |y| (x, y))).collect();
    let mut n = 0u128;
    for &(x1, y1) in &pts {
        for &(x2, y2) in &pts {
            for &(x3, y3) in &pts {
                let l = f.mul(f.sub(x2, x1), f.sub(y3, y1));
                let r = f.mul(f.sub(x3, x1), f.sub(y2, y1));
                n += (l == r && l != 0) as u128;
            }
        }
    }
    n
}

/// `#{x1 op y1 = x2 op y2}` by quadruple scan; `op` is `+` or `*`.
pub fn energy(f: &Field, a: &FSet, b: &FSet, product: bool) -> u128 {
    let op = |x, y| if product { f.mul(x, y) } else { f.add(x, y) };
    let mut n = 0u128;
    for x1 in a.iter() {
        for y1 in b.iter() {
            let v = op(x1, y1);
            for x2 in a.iter() {
                for y2 in b.iter() {
                    n += (op(x2, y2) == v) as u128;
                }
            }
        }
    }
    n
}

/// `sum_{a,b} E_x(A - a, B - b)` (or `A + a, B + b` when `plus`).
pub fn energy_decomposition(f: &Field, a: &FSet, b: &FSet, plus: bool) -> u128 {
    let mut n = 0;
    for x in a.iter() {
        for y in b.iter() {
            let (dx, dy) = if plus { (x, y) } else { (f.neg(x), f.neg(y)) };
            let sa = FSet::new(f, a.iter().map(|t| f.add(t, dx))).unwrap();
            let sb = FSet::new(f, b.iter().map(|t| f.add(t, dy))).unwrap();
            n += energy(f, &sa, &sb, true);
        }
    }
    n
}

/// Incidences between a point list and `y = c x + d` lines by direct test.
pub fn incidence_count(f: &Field, pts: &[(u32, u32)], lines: &[(u32, u32)]) -> u128 {
    let mut n = 0;
    for &(c, d) in lines {
        for &(x, y) in pts {
            n += (f.add(f.mul(c, x), d) == y) as u128;
        }
    }
    n
}

pub fn elementwise(f: &Field, a: &FSet, b: &FSet, op: impl Fn(u32, u32) -> Option<u32>) -> FSet {
    let mut v = Vec::new();
    for x in a.iter() {
        for y in b.iter() {
            v.extend(op(x, y));
        }
    }
    FSet::new(f, v).unwrap()
}

/// Elements of the subfield of order `p^d`: the fixed points of `x -> x^(p^d)`.
pub fn subfield(f: &Field, d: u32) -> FSet {
    let e = (f.p() as u64).pow(d);
    FSet::new(f, (0..f.q() as u32).filter(|&x| f.pow(x, e) == x)).unwrap()
}
