//! Subfield lattice and affine-coset intersection scans.

use super::{Field, ENUM_CAP};
use crate::bounds::{within_coset_template, Monomial};
use crate::error::{Error, Result};
use crate::set::FSet;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// The subfield of order p^d, with its elements in encoding order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubfieldDesc {
    pub degree: u32,
    pub order: u64,
    pub elements: Vec<u32>,
}

impl SubfieldDesc {
    pub fn contains(&self, x: u32) -> bool {
        self.elements.binary_search(&x).is_ok()
    }
}

impl Field {
    /// The subfield F_{p^d}; `d` must divide m.
    pub fn subfield(&self, d: u32) -> Result<SubfieldDesc> {
        if d == 0 || self.m() % d != 0 {
            return Err(Error::InvalidParams(format!("{d} does not divide m = {}", self.m())));
        }
        let order = (self.p() as u64).pow(d);
        if order > ENUM_CAP {
            return Err(Error::EnumerationTooLarge(order));
        }
        let elements = if d == self.m() {
            (0..order as u32).collect()
        } else {
            // the unique subgroup of order p^d - 1 in the cyclic group F_q^*
            let g = self.primitive_element();
            let h = self.pow(g, (self.q() - 1) / (order - 1));
            let mut els = Vec::with_capacity(order as usize);
            els.push(0);
            let mut cur = 1u32;
            for _ in 0..order - 1 {
                els.push(cur);
                cur = self.mul(cur, h);
            }
            els.sort_unstable();
            els
        };
        Ok(SubfieldDesc { degree: d, order, elements })
    }

    /// All subfields, one per divisor of m, ascending by order.
    pub fn subfields(&self) -> Result<Vec<SubfieldDesc>> {
        self.subfield_degrees().into_iter().map(|d| self.subfield(d)).collect()
    }

    /// Subfields of degree d < m.
    pub fn proper_subfields(&self) -> Vec<SubfieldDesc> {
        self.subfield_degrees()
            .into_iter()
            .filter(|&d| d < self.m())
            .map(|d| self.subfield(d).expect("proper subfields have order <= sqrt(q)"))
            .collect()
    }
}

fn check_proper(field: &Field, g: &SubfieldDesc) -> Result<()> {
    if field.m() == 1 {
        return Err(Error::NoProperSubfield);
    }
    if g.degree >= field.m() || field.m() % g.degree != 0 {
        return Err(Error::NotProperSubfield(g.degree));
    }
    Ok(())
}

/// `|A ∩ (cG + d)|` for a proper subfield G and c != 0.
pub fn coset_intersection(a: &FSet, g: &SubfieldDesc, c: u32, d: u32) -> Result<u64> {
    let f = a.field();
    check_proper(f, g)?;
    f.check(c as u64)?;
    f.check(d as u64)?;
    if c == 0 {
        return Err(Error::ZeroDilation);
    }
    let c_inv = f.inv_nonzero(c);
    Ok(a.iter().filter(|&x| g.contains(f.mul(f.sub(x, d), c_inv))).count() as u64)
}

/// Largest affine-coset intersection for one subfield, with witness (c, d).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubfieldMax {
    pub degree: u32,
    pub order: u64,
    pub count: u64,
    pub c: u32,
    pub d: u32,
}

/// Hypothesis template `|A ∩ (cG+d)| <= max{|G|^(1/2), threshold}` with
/// constant 1, checked over every proper subfield.
#[derive(Clone, Debug, Serialize)]
pub struct TemplateCheck {
    pub id: String,
    pub threshold: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CosetScan {
    pub count: u64,
    pub witness: SubfieldMax,
    pub per_subfield: Vec<SubfieldMax>,
    pub templates: Vec<TemplateCheck>,
}

impl CosetScan {
    /// Whether every subfield's maximum respects `max{|G|^(1/2), threshold}`.
    pub fn satisfies(&self, threshold: &Monomial) -> bool {
        self.per_subfield.iter().all(|s| within_coset_template(s.count, s.order, threshold))
    }
}

/// Coset key: x and y lie in the same coset of G^* iff x^(|G|-1) = y^(|G|-1).
fn coset_key(f: &Field, x: u32, g_order: u64) -> u32 {
    f.pow(x, g_order - 1)
}

fn scan_subfield(a: &FSet, g: &SubfieldDesc) -> SubfieldMax {
    let f = a.field();
    let elems = a.elems();
    let mut best = SubfieldMax { degree: g.degree, order: g.order, count: 1, c: 1, d: elems[0] };
    let mut counts: HashMap<u32, (u64, u32)> = HashMap::new();
    for &a1 in elems {
        counts.clear();
        for &a2 in elems {
            if a2 == a1 {
                continue;
            }
            let x = f.sub(a2, a1);
            let e = counts.entry(coset_key(f, x, g.order)).or_insert((0, x));
            e.0 += 1;
        }
        for &(n, rep) in counts.values() {
            let cand = n + 1;
            if cand > best.count || (cand == best.count && (a1, rep) < (best.d, best.c)) {
                best = SubfieldMax { degree: g.degree, order: g.order, count: cand, c: rep, d: a1 };
            }
        }
    }
    best
}

/// Standard hypothesis templates evaluated on a single set (B = A where a
/// second size is needed), plus a caller-supplied exponent.
pub fn standard_templates(n: u64, custom: Option<(i64, u64)>) -> Vec<(String, Monomial)> {
    let mut t = vec![
        ("T2-51/52".to_string(), Monomial::single("|A|", n, 51, 52)),
        ("T1-31/191+129/191".to_string(), Monomial::single("|A|", n, 31, 191).times("|B|", n, 129, 191)),
        ("C3a-3/5".to_string(), Monomial::single("|A|", n, 3, 5)),
        ("C6-4/7".to_string(), Monomial::single("|A|", n, 4, 7)),
        ("C5-47/48".to_string(), Monomial::single("|A|", n, 47, 48)),
    ];
    if let Some((num, den)) = custom {
        t.push((format!("custom-{num}/{den}"), Monomial::single("|A|", n, num, den)));
    }
    t
}

/// Max of `|A ∩ (cG + d)|` over proper subfields G, c in F_q^*, d in F_q.
///
/// Fails with [`Error::NoProperSubfield`] on prime fields, where every
/// coset hypothesis holds vacuously.
pub fn max_coset_intersection(a: &FSet, threshold_exponent: Option<(i64, u64)>) -> Result<CosetScan> {
    if a.len() < 2 {
        return Err(Error::InvalidParams("coset scan needs |A| >= 2".into()));
    }
    let f = a.field();
    if f.m() == 1 {
        return Err(Error::NoProperSubfield);
    }
    let per_subfield: Vec<SubfieldMax> = f.proper_subfields().iter().map(|g| scan_subfield(a, g)).collect();
    let witness = per_subfield
        .iter()
        .max_by(|x, y| x.count.cmp(&y.count).then(y.degree.cmp(&x.degree)))
        .cloned()
        .expect("m > 1 has a proper subfield");
    let mut scan = CosetScan { count: witness.count, witness, per_subfield, templates: Vec::new() };
    scan.templates = standard_templates(a.len() as u64, threshold_exponent)
        .into_iter()
        .map(|(id, thr)| TemplateCheck { holds: scan.satisfies(&thr), threshold: thr.to_string(), id })
        .collect();
    Ok(scan)
}

/// Max of `|A ∩ cG|` (d = 0) per proper subfield; the linear variant used by
/// the sum-ratio hypothesis.
pub fn max_linear_coset_intersection(a: &FSet) -> Result<Vec<SubfieldMax>> {
    let f = a.field();
    if f.m() == 1 {
        return Err(Error::NoProperSubfield);
    }
    let has_zero = a.contains(0);
    Ok(f.proper_subfields()
        .iter()
        .map(|g| {
            let mut counts: HashMap<u32, (u64, u32)> = HashMap::new();
            for x in a.iter().filter(|&x| x != 0) {
                let e = counts.entry(coset_key(f, x, g.order)).or_insert((0, x));
                e.0 += 1;
            }
            let (n, rep) = counts
                .values()
                .copied()
                .max_by(|x, y| x.0.cmp(&y.0).then(y.1.cmp(&x.1)))
                .unwrap_or((0, 1));
            SubfieldMax { degree: g.degree, order: g.order, count: n + has_zero as u64, c: rep, d: 0 }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{seq::index::sample, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn orders(f: &Field) -> Vec<u64> {
        f.subfields().unwrap().iter().map(|s| s.order).collect()
    }

    #[test]
    fn subfield_orders() {
        assert_eq!(orders(&Field::with_degree(2, 4).unwrap()), vec![2, 4, 16]);
        assert_eq!(orders(&Field::prime(7).unwrap()), vec![7]);
        assert_eq!(orders(&Field::with_degree(2, 6).unwrap()), vec![2, 4, 8, 64]);
        assert_eq!(orders(&Field::with_degree(3, 2).unwrap()), vec![3, 9]);
    }

    #[test]
    fn subfields_are_frobenius_fixed_sets_and_closed() {
        for f in [Field::with_degree(2, 6).unwrap(), Field::with_degree(3, 4).unwrap(), Field::with_degree(2, 4).unwrap()] {
            let subs = f.subfields().unwrap();
            let tau = (1..=f.m()).filter(|d| f.m() % d == 0).count();
            assert_eq!(subs.len(), tau);
            for g in &subs {
                let fixed: Vec<u32> = f.elements().unwrap().filter(|&x| f.in_subfield(x, g.degree)).collect();
                assert_eq!(fixed, g.elements);
                for &x in &g.elements {
                    assert!(g.contains(f.neg(x)));
                    if x != 0 {
                        assert!(g.contains(f.inv(x).unwrap()));
                    }
                    for &y in &g.elements {
                        assert!(g.contains(f.add(x, y)));
                        assert!(g.contains(f.mul(x, y)));
                    }
                }
            }
        }
    }

    #[test]
    fn subfield_as_its_own_coset() {
        let f = Field::with_degree(2, 4).unwrap();
        let g = f.subfield(2).unwrap();
        let a = FSet::new(&f, g.elements.iter().copied()).unwrap();
        assert_eq!(coset_intersection(&a, &g, 1, 0).unwrap(), 4);
        let scan = max_coset_intersection(&a, None).unwrap();
        assert_eq!(scan.count, 4);
        assert_eq!(scan.witness.degree, 2);
        // the witness coset really contains A
        assert_eq!(coset_intersection(&a, &g, scan.witness.c, scan.witness.d).unwrap(), 4);
        // every template with exponent < 1 fails on a subfield of size 4 > 4^(1/2)
        assert!(scan.templates.iter().all(|t| !t.holds));
    }

    #[test]
    fn prime_field_has_no_proper_subfield() {
        let f = Field::prime(101).unwrap();
        let a = FSet::new(&f, 1..=10).unwrap();
        assert_eq!(max_coset_intersection(&a, None).unwrap_err(), Error::NoProperSubfield);
        let g = f.subfield(1).unwrap();
        assert_eq!(coset_intersection(&a, &g, 1, 0).unwrap_err(), Error::NoProperSubfield);
    }

    #[test]
    fn zero_dilation_rejected() {
        let f = Field::with_degree(2, 4).unwrap();
        let g = f.subfield(1).unwrap();
        let a = FSet::new(&f, [1, 2, 3]).unwrap();
        assert_eq!(coset_intersection(&a, &g, 0, 1).unwrap_err(), Error::ZeroDilation);
    }

    fn brute_force_max(a: &FSet, g: &SubfieldDesc) -> u64 {
        let f = a.field();
        let mut best = 0;
        for c in 1..f.q() as u32 {
            for d in 0..f.q() as u32 {
                best = best.max(coset_intersection(a, g, c, d).unwrap());
            }
        }
        best
    }

    #[test]
    fn pair_scan_matches_exhaustive_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (p, m, size) in [(2u32, 4u32, 8usize), (2, 6, 6), (3, 2, 5), (2, 6, 12)] {
            let f = Field::with_degree(p, m).unwrap();
            for _ in 0..4 {
                let a = FSet::new(&f, sample(&mut rng, f.q() as usize, size).into_iter().map(|x| x as u32)).unwrap();
                let scan = max_coset_intersection(&a, None).unwrap();
                for (g, s) in f.proper_subfields().iter().zip(&scan.per_subfield) {
                    assert_eq!(s.count, brute_force_max(&a, g), "p={p} m={m} G={}", g.order);
                }
            }
        }
    }

    #[test]
    fn linear_scan_matches_brute_force() {
        let f = Field::with_degree(2, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5 {
            let a = FSet::new(&f, sample(&mut rng, 63, 10).into_iter().map(|x| x as u32 + 1)).unwrap();
            let lin = max_linear_coset_intersection(&a).unwrap();
            for (g, s) in f.proper_subfields().iter().zip(&lin) {
                let brute = (1..64).map(|c| coset_intersection(&a, g, c, 0).unwrap()).max().unwrap();
                assert_eq!(s.count, brute);
            }
        }
    }
}
