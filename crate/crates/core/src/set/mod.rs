//! Finite subsets of F_q and the set operations built on them.
//!
//! [`FSet`] keeps its elements as strictly increasing canonical encodings,
//! so every set-valued result is deterministic. Zero is allowed in general
//! and rejected only where an operation divides.

mod family;
mod io;

pub use family::{Family, FamilyKind};
pub use io::{parse_set_file, read_set_file, write_set_file, format_set_file};

use crate::error::{Error, Result};
use crate::field::Field;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FSet {
    field: Field,
    elems: Vec<u32>,
}

/// The four elementwise operations of sum-product theory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpKind {
    Sum,
    Difference,
    Product,
    Ratio,
}

impl OpKind {
    /// `x op y`; `None` for division by zero.
    #[inline]
    pub fn apply(self, f: &Field, x: u32, y: u32) -> Option<u32> {
        match self {
            OpKind::Sum => Some(f.add(x, y)),
            OpKind::Difference => Some(f.sub(x, y)),
            OpKind::Product => Some(f.mul(x, y)),
            OpKind::Ratio => (y != 0).then(|| f.mul(x, f.inv_nonzero(y))),
        }
    }
}

impl FSet {
    /// Validates ranges, then sorts and deduplicates.
    pub fn new(field: &Field, elems: impl IntoIterator<Item = u32>) -> Result<FSet> {
        let mut v: Vec<u32> = Vec::new();
        for x in elems {
            v.push(field.check(x as u64)?);
        }
        Ok(Self::from_vec(field, v))
    }

    pub(crate) fn from_vec(field: &Field, mut v: Vec<u32>) -> FSet {
        v.sort_unstable();
        v.dedup();
        FSet { field: field.clone(), elems: v }
    }

    pub fn empty(field: &Field) -> FSet {
        FSet { field: field.clone(), elems: Vec::new() }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn elems(&self) -> &[u32] {
        &self.elems
    }
    pub fn len(&self) -> usize {
        self.elems.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.elems.iter().copied()
    }
    pub fn contains(&self, x: u32) -> bool {
        self.elems.binary_search(&x).is_ok()
    }
    pub fn contains_zero(&self) -> bool {
        self.elems.first() == Some(&0)
    }

    fn same_field(&self, other: &FSet) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// `{x op y : x in self, y in other}`.
    pub fn combine(&self, other: &FSet, kind: OpKind) -> Result<FSet> {
        self.same_field(other)?;
        if kind == OpKind::Ratio && other.contains_zero() {
            return Err(Error::ZeroInDenominator);
        }
        let f = &self.field;
        let mut out = Vec::with_capacity(self.len() * other.len());
        if kind == OpKind::Ratio {
            let invs: Vec<u32> = other.iter().map(|y| f.inv_nonzero(y)).collect();
            for x in self.iter() {
                out.extend(invs.iter().map(|&yi| f.mul(x, yi)));
            }
        } else {
            for x in self.iter() {
                out.extend(other.iter().map(|y| kind.apply(f, x, y).unwrap()));
            }
        }
        Ok(FSet::from_vec(f, out))
    }

    pub fn sumset(&self, other: &FSet) -> Result<FSet> {
        self.combine(other, OpKind::Sum)
    }
    pub fn difference_set(&self, other: &FSet) -> Result<FSet> {
        self.combine(other, OpKind::Difference)
    }
    pub fn product_set(&self, other: &FSet) -> Result<FSet> {
        self.combine(other, OpKind::Product)
    }
    pub fn ratio_set(&self, other: &FSet) -> Result<FSet> {
        self.combine(other, OpKind::Ratio)
    }

    /// `1/A`.
    pub fn inverse_set(&self) -> Result<FSet> {
        if self.contains_zero() {
            return Err(Error::ZeroInDenominator);
        }
        Ok(FSet::from_vec(&self.field, self.iter().map(|x| self.field.inv_nonzero(x)).collect()))
    }

    /// `cA + d`, c != 0.
    pub fn dilate_translate(&self, c: u32, d: u32) -> Result<FSet> {
        self.field.check(c as u64)?;
        self.field.check(d as u64)?;
        if c == 0 {
            return Err(Error::ZeroDilation);
        }
        let f = &self.field;
        Ok(FSet::from_vec(f, self.iter().map(|x| f.add(f.mul(c, x), d)).collect()))
    }

    /// `R(X) = {(x1 - x2)/(x3 - x4) : x3 != x4}`, computed as `D / (D \ {0})`
    /// with `D = X - X`.
    pub fn quotient_set(&self) -> Result<FSet> {
        if self.len() < 2 {
            return Err(Error::DegenerateX);
        }
        let d = self.difference_set(self)?;
        let nonzero = FSet { field: self.field.clone(), elems: d.elems[1..].to_vec() };
        d.ratio_set(&nonzero)
    }

    pub fn intersection(&self, other: &FSet) -> FSet {
        let elems = self.iter().filter(|&x| other.contains(x)).collect();
        FSet { field: self.field.clone(), elems }
    }

    pub fn intersection_len(&self, other: &FSet) -> usize {
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        small.iter().filter(|&x| large.contains(x)).count()
    }

    pub fn union(&self, other: &FSet) -> Result<FSet> {
        self.same_field(other)?;
        let mut v = self.elems.clone();
        v.extend_from_slice(&other.elems);
        Ok(FSet::from_vec(&self.field, v))
    }

    pub fn is_subset(&self, other: &FSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }

    /// Subset selected by a bit mask over element indices.
    pub fn subset_by_mask(&self, mask: u64) -> FSet {
        let elems = self.elems.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect();
        FSet { field: self.field.clone(), elems }
    }

    pub fn subset_by_indices(&self, idx: &[usize]) -> FSet {
        FSet::from_vec(&self.field, idx.iter().map(|&i| self.elems[i]).collect())
    }

    /// `A \ {0}`.
    pub fn without_zero(&self) -> FSet {
        let elems = self.iter().filter(|&x| x != 0).collect();
        FSet { field: self.field.clone(), elems }
    }

    /// Element-wise translation `A - a` etc. without the c != 0 check.
    pub fn translate(&self, d: u32) -> FSet {
        FSet::from_vec(&self.field, self.iter().map(|x| self.field.add(x, d)).collect())
    }

    /// `cA`, allowing c = 0 (yields {0} for nonempty A).
    pub fn scale(&self, c: u32) -> FSet {
        FSet::from_vec(&self.field, self.iter().map(|x| self.field.mul(c, x)).collect())
    }
}

/// `r(z) = #{(x, y) in X x Y : x op y = z}`, stored sparsely in key order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepFunction {
    pub kind: OpKind,
    pub counts: Vec<(u32, u64)>,
}

impl RepFunction {
    pub fn get(&self, z: u32) -> u64 {
        self.counts.binary_search_by_key(&z, |&(k, _)| k).map_or(0, |i| self.counts[i].1)
    }
    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&(_, c)| c).sum()
    }
    /// `sum_z r(z)^2`, the energy of the pair.
    pub fn sum_squares(&self) -> u128 {
        self.counts.iter().map(|&(_, c)| c as u128 * c as u128).sum()
    }
    pub fn max(&self) -> Option<(u32, u64)> {
        self.counts.iter().copied().max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
    }
}

pub(crate) fn run_lengths(mut values: Vec<u32>) -> Vec<(u32, u64)> {
    values.sort_unstable();
    let mut out: Vec<(u32, u64)> = Vec::new();
    for v in values {
        match out.last_mut() {
            Some((k, c)) if *k == v => *c += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

/// Representation function of `X op Y`. Ratio requires `0 ∉ Y`.
pub fn rep_function(x: &FSet, y: &FSet, kind: OpKind) -> Result<RepFunction> {
    x.same_field(y)?;
    if kind == OpKind::Ratio && y.contains_zero() {
        return Err(Error::ZeroInDenominator);
    }
    let f = x.field();
    let mut values = Vec::with_capacity(x.len() * y.len());
    for a in x.iter() {
        values.extend(y.iter().map(|b| kind.apply(f, a, b).unwrap()));
    }
    Ok(RepFunction { kind, counts: run_lengths(values) })
}

/// Bipartite graph `G ⊆ X × Y` given by index pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairGraph {
    pub x: FSet,
    pub y: FSet,
    pairs: Vec<(usize, usize)>,
}

impl PairGraph {
    pub fn new(x: FSet, y: FSet, mut pairs: Vec<(usize, usize)>) -> Result<PairGraph> {
        x.same_field(&y)?;
        if pairs.iter().any(|&(i, j)| i >= x.len() || j >= y.len()) {
            return Err(Error::InvalidParams("pair index out of range".into()));
        }
        pairs.sort_unstable();
        pairs.dedup();
        Ok(PairGraph { x, y, pairs })
    }

    pub fn full(x: FSet, y: FSet) -> Result<PairGraph> {
        let pairs = (0..x.len()).flat_map(|i| (0..y.len()).map(move |j| (i, j))).collect();
        PairGraph::new(x, y, pairs)
    }

    /// Pairs `(x, y)` with `pred(x, y)`.
    pub fn from_predicate(x: FSet, y: FSet, mut pred: impl FnMut(u32, u32) -> bool) -> Result<PairGraph> {
        let mut pairs = Vec::new();
        for (i, a) in x.iter().enumerate() {
            for (j, b) in y.iter().enumerate() {
                if pred(a, b) {
                    pairs.push((i, j));
                }
            }
        }
        PairGraph::new(x, y, pairs)
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
    pub fn len(&self) -> usize {
        self.pairs.len()
    }
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn x_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.x.len()];
        for &(i, _) in &self.pairs {
            d[i] += 1;
        }
        d
    }
    pub fn y_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.y.len()];
        for &(_, j) in &self.pairs {
            d[j] += 1;
        }
        d
    }

    /// The partial operation `X op_G Y`.
    pub fn partial_op(&self, kind: OpKind) -> Result<FSet> {
        let f = self.x.field();
        let mut out = Vec::with_capacity(self.pairs.len());
        for &(i, j) in &self.pairs {
            let (a, b) = (self.x.elems[i], self.y.elems[j]);
            out.push(kind.apply(f, a, b).ok_or(Error::ZeroInDenominator)?);
        }
        Ok(FSet::from_vec(f, out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    fn set(field: &Field, xs: &[u32]) -> FSet {
        FSet::new(field, xs.iter().copied()).unwrap()
    }

    /// exhaustive pairwise oracle for the four operations
    fn oracle(a: &FSet, b: &FSet, kind: OpKind) -> Vec<u32> {
        let fld = a.field();
        let mut v: Vec<u32> = Vec::new();
        for x in 0..fld.q() as u32 {
            let hit = a.iter().any(|s| b.iter().any(|t| kind.apply(fld, s, t) == Some(x)));
            if hit {
                v.push(x);
            }
        }
        v
    }

    #[test]
    fn sumset_in_f7() {
        let f7 = f(7);
        let s = set(&f7, &[1, 2]).sumset(&set(&f7, &[3, 5])).unwrap();
        assert_eq!(s.elems(), &[0, 4, 5, 6]);
        assert_eq!(s.elems(), oracle(&set(&f7, &[1, 2]), &set(&f7, &[3, 5]), OpKind::Sum).as_slice());
    }

    #[test]
    fn ratio_set_in_f5() {
        let f5 = f(5);
        let a = set(&f5, &[1, 2]);
        let r = a.ratio_set(&a).unwrap();
        assert_eq!(r.elems(), &[1, 2, 3]);
        assert_eq!(r.elems(), oracle(&a, &a, OpKind::Ratio).as_slice());
        assert_eq!(set(&f5, &[1]).ratio_set(&set(&f5, &[0, 1])).unwrap_err(), Error::ZeroInDenominator);
    }

    #[test]
    fn subfield_closure() {
        let f16 = Field::with_degree(2, 4).unwrap();
        let g = FSet::new(&f16, f16.subfield(2).unwrap().elements).unwrap();
        assert_eq!(g.sumset(&g).unwrap(), g);
        assert_eq!(g.product_set(&g).unwrap(), g);
        assert_eq!(g.quotient_set().unwrap(), g);
    }

    #[test]
    fn inverse_sets() {
        let f7 = f(7);
        assert_eq!(set(&f7, &[1, 2, 4]).inverse_set().unwrap().elems(), &[1, 2, 4]);
        assert_eq!(set(&f7, &[0, 1]).inverse_set().unwrap_err(), Error::ZeroInDenominator);
        let f9 = Field::with_degree(3, 2).unwrap();
        let a = set(&f9, &[1, 4, 5, 8]);
        assert_eq!(a.inverse_set().unwrap().inverse_set().unwrap(), a);
    }

    #[test]
    fn dilate_translate_examples() {
        let f5 = f(5);
        let a = set(&f5, &[0, 1]);
        assert_eq!(a.dilate_translate(1, 0).unwrap(), a);
        assert_eq!(a.dilate_translate(2, 1).unwrap().elems(), &[1, 3]);
        assert_eq!(a.dilate_translate(0, 1).unwrap_err(), Error::ZeroDilation);
    }

    #[test]
    fn quotient_set_examples() {
        let f5 = f(5);
        // exhaustive quadruple oracle
        let x = set(&f5, &[0, 1]);
        let mut brute = Vec::new();
        for &a in x.elems() {
            for &b in x.elems() {
                for &c in x.elems() {
                    for &d in x.elems() {
                        if c != d {
                            brute.push(f5.div(f5.sub(a, b), f5.sub(c, d)).unwrap());
                        }
                    }
                }
            }
        }
        brute.sort_unstable();
        brute.dedup();
        assert_eq!(brute, vec![0, 1, 4]);
        assert_eq!(x.quotient_set().unwrap().elems(), &[0, 1, 4]);
        // |X| = 4 > 3 = sqrt(9)
        let f9 = Field::with_degree(3, 2).unwrap();
        let r = set(&f9, &[0, 1, 2, 5]).quotient_set().unwrap();
        assert_eq!(r.len(), 9);
    }

    #[test]
    fn representation_function_product() {
        let f7 = f(7);
        let x = set(&f7, &[1, 2]);
        let r = rep_function(&x, &x, OpKind::Product).unwrap();
        assert_eq!((r.get(1), r.get(2), r.get(4), r.get(3)), (1, 2, 1, 0));
        assert_eq!(r.total(), 4);
        // E(X) by quadruple scan
        let mut quad = 0u128;
        for a in x.iter() {
            for b in x.iter() {
                for c in x.iter() {
                    for d in x.iter() {
                        if f7.mul(a, c) == f7.mul(b, d) {
                            quad += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(r.sum_squares(), quad);
        assert_eq!(rep_function(&x, &set(&f7, &[0]), OpKind::Ratio).unwrap_err(), Error::ZeroInDenominator);
    }

    #[test]
    fn partial_operations() {
        let f11 = f(11);
        let x = set(&f11, &[1, 2, 3]);
        let y = set(&f11, &[4, 7]);
        let full = PairGraph::full(x.clone(), y.clone()).unwrap();
        for kind in [OpKind::Sum, OpKind::Difference, OpKind::Product, OpKind::Ratio] {
            assert_eq!(full.partial_op(kind).unwrap(), x.combine(&y, kind).unwrap());
        }
        let empty = PairGraph::new(x.clone(), y.clone(), vec![]).unwrap();
        assert!(empty.partial_op(OpKind::Sum).unwrap().is_empty());
        let diag = PairGraph::new(x.clone(), x.clone(), vec![(0, 0), (1, 1), (2, 2)]).unwrap();
        assert_eq!(diag.partial_op(OpKind::Difference).unwrap().elems(), &[0]);
        let zero = PairGraph::full(x.clone(), set(&f11, &[0])).unwrap();
        assert_eq!(zero.partial_op(OpKind::Ratio).unwrap_err(), Error::ZeroInDenominator);
        assert!(PairGraph::new(x, y, vec![(5, 0)]).is_err());
    }

    #[test]
    fn field_mismatch() {
        let a = set(&f(7), &[1]);
        let b = set(&f(11), &[1]);
        assert_eq!(a.sumset(&b).unwrap_err(), Error::FieldMismatch);
    }

    /// Lemma: if r ∉ R(X), the map (x1, x2) -> x1 + r x2 is injective on
    /// X1 × X2 for all nonempty X1, X2 ⊆ X. Exhaustive over small X.
    #[test]
    fn pivot_injectivity_exhaustive() {
        for fld in [f(5), f(7), Field::with_degree(2, 2).unwrap(), Field::with_degree(3, 2).unwrap(), Field::with_degree(2, 4).unwrap()] {
            let q = fld.q() as u32;
            if q > 25 {
                continue;
            }
            for mask in 1u64..(1 << q) {
                let x = FSet::new(&fld, (0..q).filter(|i| mask >> i & 1 == 1)).unwrap();
                if x.len() < 2 || x.len() > 4 {
                    continue;
                }
                let r_set = x.quotient_set().unwrap();
                for r in (0..q).filter(|&r| !r_set.contains(r)) {
                    let n = x.len();
                    for m1 in 1u64..(1 << n) {
                        for m2 in 1u64..(1 << n) {
                            let x1 = x.subset_by_mask(m1);
                            let x2 = x.subset_by_mask(m2).scale(r);
                            assert_eq!(x1.sumset(&x2).unwrap().len(), x1.len() * x.subset_by_mask(m2).len());
                        }
                    }
                }
            }
        }
    }

    /// Lemma: |X| > q^(1/2) forces R(X) = F_q. Exhaustive for q = 4.
    #[test]
    fn large_sets_have_full_quotient_set_q4() {
        let f4 = Field::with_degree(2, 2).unwrap();
        for mask in 1u64..16 {
            let x = FSet::new(&f4, (0..4).filter(|i| mask >> i & 1 == 1)).unwrap();
            if x.len() * x.len() > 4 {
                assert_eq!(x.quotient_set().unwrap().len(), 4);
            }
        }
    }

    proptest! {
        #[test]
        fn sumset_cardinality_bounds(a in proptest::collection::vec(0u32..101, 1..12), b in proptest::collection::vec(0u32..101, 1..12)) {
            let f101 = f(101);
            let a = FSet::new(&f101, a).unwrap();
            let b = FSet::new(&f101, b).unwrap();
            for kind in [OpKind::Sum, OpKind::Difference] {
                let s = a.combine(&b, kind).unwrap();
                prop_assert!(s.len() <= a.len() * b.len());
                prop_assert!(s.len() >= a.len().max(b.len()));
            }
            let bn = b.without_zero();
            if !bn.is_empty() {
                let an = a.without_zero();
                if !an.is_empty() {
                    let prod = an.product_set(&bn).unwrap();
                    prop_assert!(prod.len() >= an.len().max(bn.len()));
                }
                let r = a.ratio_set(&bn).unwrap();
                prop_assert!(r.len() >= a.len());
                prop_assert!(r.len() <= a.len() * bn.len());
            }
            let total = rep_function(&a, &b, OpKind::Sum).unwrap().total();
            prop_assert_eq!(total, (a.len() * b.len()) as u64);
        }

        #[test]
        fn dilation_preserves_size(xs in proptest::collection::vec(0u32..101, 1..20), c in 1u32..101, d in 0u32..101) {
            let a = FSet::new(&f(101), xs).unwrap();
            prop_assert_eq!(a.dilate_translate(c, d).unwrap().len(), a.len());
        }
    }
}
