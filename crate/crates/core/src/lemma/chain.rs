//! The structural chain behind the unbalanced incidence bound, run on
//! concrete sets.
//!
//! Pigeonhole a pair `(b1, b2)`, keep the popular `b`, extract a pair of
//! small-sumset subsets for each with BSG, select the most overlapping
//! index `c*`, keep the popular `c`, and finally cover `±c_i A2*` by
//! translates of `A1^(c_i) ∩ A1*`. Every intermediate object is stored so
//! the guarantees can be recomputed from the trace alone.

use super::basic::{covered_by, popularity_split, shen_cover, CoverKind};
use super::bsg::{bsg_search, BsgForm};
use super::trace::{power_product, Guarantee, LemmaTrace, Witness};
use super::{instance_of, ratio_param};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::incidence::{nontrivial_collinear_triples, TripleMode};
use crate::set::{FSet, PairGraph};
use num_bigint::BigInt;
use num_rational::BigRational;

pub const CHAIN_MIN: usize = 3;
pub const CHAIN_MAX: usize = 12;
/// Coverage slack per `(c_i, sign)`; eight pieces lose at most a quarter.
pub const COVER_EPS: (i64, i64) = (1, 32);

/// `t = (b - b1)/(b2 - b1)`
fn interpolation(f: &Field, b: u32, b1: u32, b2: u32) -> u32 {
    f.mul(f.sub(b, b1), f.inv_nonzero(f.sub(b2, b1)))
}

/// `#{(a1, a2) : a1 (1 - t) + a2 t ∈ A}`
fn line_weight(f: &Field, a: &FSet, t: u32) -> u64 {
    let s = f.sub(1, t);
    let mut n = 0;
    for a1 in a.iter() {
        let base = f.mul(a1, s);
        n += a.iter().filter(|&a2| a.contains(f.add(base, f.mul(a2, t)))).count() as u64;
    }
    n
}

struct Branch {
    c: u32,
    a1: FSet,
    a2: FSet,
}

fn overlap(p: &Branch, r: &Branch) -> u64 {
    p.a1.intersection_len(&r.a1) as u64 * p.a2.intersection_len(&r.a2) as u64
}

pub fn trace_claim1_chain(a: &FSet, b: &FSet) -> Result<LemmaTrace> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    let size_error = || Error::InvalidParams(format!("chain needs {CHAIN_MIN} to {CHAIN_MAX} elements per set"));
    if a.len() > CHAIN_MAX || b.len() > CHAIN_MAX {
        return Err(size_error());
    }
    let f = a.field();
    // T* counts (p, r, r) for r off the row and column of p, so it
    // vanishes exactly when one side has at most one element
    let tt = nontrivial_collinear_triples(a, b, TripleMode::LineAggregate)?;
    if tt == 0 {
        return Err(Error::ChainDegenerate("T*(A, B) = 0".into()));
    }
    if a.len() < CHAIN_MIN || b.len() < CHAIN_MIN {
        return Err(size_error());
    }

    // pigeonhole over ordered pairs
    let mut best: Option<(u64, u32, u32, Vec<(u32, u64)>)> = None;
    for b1 in b.iter() {
        for b2 in b.iter().filter(|&v| v != b1) {
            let w: Vec<(u32, u64)> =
                b.iter().filter(|&v| v != b1 && v != b2).map(|v| (v, line_weight(f, a, interpolation(f, v, b1, b2)))).collect();
            let n: u64 = w.iter().map(|e| e.1).sum();
            if best.as_ref().is_none_or(|bb| n > bb.0) {
                best = Some((n, b1, b2, w));
            }
        }
    }
    let (n, b1, b2, weights) = best.unwrap();
    let split = popularity_split(&weights.iter().map(|e| e.1).collect::<Vec<_>>(), n)?;
    let b_prime: Vec<u32> = split.popular.iter().map(|&i| weights[i].0).collect();

    // one BSG extraction per popular b
    let mut branches = Vec::new();
    for &bv in &b_prime {
        let t = interpolation(f, bv, b1, b2);
        let s = f.sub(1, t);
        let (x, y) = (a.scale(s), a.scale(t));
        let g = PairGraph::from_predicate(x, y, |u, v| a.contains(f.add(u, v)))?;
        let w = bsg_search(&g, BsgForm::SumPair, None)?;
        branches.push(Branch {
            c: f.mul(t, f.inv_nonzero(s)),
            a1: w.x_prime.scale(f.inv_nonzero(s)),
            a2: w.y_prime.expect("sum form").scale(f.inv_nonzero(t)),
        });
    }
    branches.sort_by_key(|br| br.c);
    let c_prime: Vec<u32> = branches.iter().map(|br| br.c).collect();

    // c* maximizes total overlap; ties to the smallest c
    let star = (0..branches.len())
        .max_by(|&i, &j| {
            let si: u64 = branches.iter().map(|br| overlap(br, &branches[i])).sum();
            let sj: u64 = branches.iter().map(|br| overlap(br, &branches[j])).sum();
            si.cmp(&sj).then(j.cmp(&i))
        })
        .unwrap();
    let positive: Vec<usize> = (0..branches.len()).filter(|&i| overlap(&branches[i], &branches[star]) > 0).collect();
    let ov: Vec<u64> = positive.iter().map(|&i| overlap(&branches[i], &branches[star])).collect();
    let k: u64 = ov.iter().sum();
    let kept: Vec<&Branch> = popularity_split(&ov, k)?.popular.iter().map(|&i| &branches[positive[i]]).collect();
    let star_branch = &branches[star];

    // covering of ±c_i A2* by translates of A1^(c_i) ∩ A1*
    let eps = BigRational::new(BigInt::from(COVER_EPS.0), BigInt::from(COVER_EPS.1));
    let cover_cs: Vec<&Branch> = kept.iter().take(4).copied().collect();
    let y = &star_branch.a2;
    let mut translates = Vec::new();
    for br in &cover_cs {
        let pieces = br.a1.intersection(&star_branch.a1);
        for sign in [br.c, f.neg(br.c)] {
            let cover = shen_cover(&y.scale(sign), &pieces, &eps, CoverKind::Sum)?;
            translates.push(cover.translates);
        }
    }
    let y_prime = covered_y(f, y, &star_branch.a1, &cover_cs.iter().map(|br| (br.c, br.a1.clone())).collect::<Vec<_>>(), &translates)?;

    let t = LemmaTrace::new("claim1_chain", instance_of(f, &[("A", a), ("B", b)]))
        .param("epsilon", format!("{}/{}", COVER_EPS.0, COVER_EPS.1))
        .param("T_star", tt)
        .param("pair_weight", n)
        .witness("b1", Witness::Element(b1))
        .witness("b2", Witness::Element(b2))
        .witness("B_prime", Witness::Set(FSet::new(f, b_prime)?.elems().to_vec()))
        .witness("C_prime", Witness::Elements(c_prime))
        .witness("C", Witness::Elements(kept.iter().map(|br| br.c).collect()))
        .witness("c_star", Witness::Element(star_branch.c))
        .witness("A1", Witness::Sets(kept.iter().map(|br| br.a1.elems().to_vec()).collect()))
        .witness("A2", Witness::Sets(kept.iter().map(|br| br.a2.elems().to_vec()).collect()))
        .witness("cover_c", Witness::Elements(cover_cs.iter().map(|br| br.c).collect()))
        .witness("translates", Witness::Sets(translates))
        .witness("Y_prime", Witness::Set(y_prime.elems().to_vec()));
    let g = evaluate(&t)?;
    Ok(t.finish(g))
}

/// `{y ∈ Y : ±c y` lies in some listed translate of `A1^(c) ∩ A1*` for
/// every covering index `c` and both signs`}`.
fn covered_y(f: &Field, y: &FSet, a1_star: &FSet, cs: &[(u32, FSet)], translates: &[Vec<u32>]) -> Result<FSet> {
    let mut keep = y.clone();
    for (i, (c, a1)) in cs.iter().enumerate() {
        let pieces = a1.intersection(a1_star);
        for (k, sign) in [*c, f.neg(*c)].into_iter().enumerate() {
            let img = y.scale(sign);
            let hit = covered_by(&img, &pieces, &translates[2 * i + k], CoverKind::Sum)?;
            let back = f.inv_nonzero(sign);
            keep = keep.intersection(&hit.scale(back));
        }
    }
    Ok(keep)
}

fn sets_witness(t: &LemmaTrace, name: &str) -> Result<Vec<Vec<u32>>> {
    match t.witnesses.get(name) {
        Some(Witness::Sets(v)) => Ok(v.clone()),
        _ => Err(Error::Parse(format!("trace has no set list `{name}`"))),
    }
}

fn elements_witness(t: &LemmaTrace, name: &str) -> Result<Vec<u32>> {
    match t.witnesses.get(name) {
        Some(Witness::Elements(v)) | Some(Witness::Set(v)) => Ok(v.clone()),
        _ => Err(Error::Parse(format!("trace has no element list `{name}`"))),
    }
}

pub(super) fn evaluate(t: &LemmaTrace) -> Result<Vec<Guarantee>> {
    let a = t.input("A")?;
    let b = t.input("B")?;
    let f = a.field().clone();
    let bad = |m: &str| Error::Parse(format!("chain witness: {m}"));
    let tt = nontrivial_collinear_triples(&a, &b, TripleMode::LineAggregate)?;
    if tt == 0 {
        return Err(Error::ChainDegenerate("T*(A, B) = 0".into()));
    }
    let (b1, b2) = (t.element_witness("b1")?, t.element_witness("b2")?);
    if b1 == b2 || !b.contains(b1) || !b.contains(b2) {
        return Err(bad("b1, b2 must be distinct elements of B"));
    }
    let cs = elements_witness(t, "C")?;
    let a1s: Vec<FSet> = sets_witness(t, "A1")?.into_iter().map(|v| FSet::new(&f, v)).collect::<Result<_>>()?;
    let a2s: Vec<FSet> = sets_witness(t, "A2")?.into_iter().map(|v| FSet::new(&f, v)).collect::<Result<_>>()?;
    if cs.is_empty() || a1s.len() != cs.len() || a2s.len() != cs.len() {
        return Err(bad("C, A1 and A2 lengths differ"));
    }
    if a1s.iter().chain(&a2s).any(|s| !s.is_subset(&a) || s.is_empty()) {
        return Err(bad("A1, A2 must be nonempty subsets of A"));
    }
    // c = (b - b1)/(b2 - b) for some b in B \ {b1, b2}
    for &c in &cs {
        let ok = b.iter().filter(|&v| v != b1 && v != b2).any(|v| f.mul(f.sub(v, b1), f.inv_nonzero(f.sub(b2, v))) == c);
        if !ok {
            return Err(bad("C is not inside (B - b1)/(b2 - B)"));
        }
    }
    let c_star = t.element_witness("c_star")?;
    let s = cs.iter().position(|&c| c == c_star).ok_or_else(|| bad("c* not in C"))?;
    let (a1s_, a2s_) = (&a1s[s], &a2s[s]);

    let (na, nb, tv) = (a.len() as u128, b.len() as u128, tt);
    let mut sizes = u128::MAX;
    let (mut sum_max, mut dbl_max, mut cross_max, mut inter_min) = (0u128, 0u128, 0u128, u128::MAX);
    for (i, &c) in cs.iter().enumerate() {
        sizes = sizes.min(a1s[i].len().min(a2s[i].len()) as u128);
        sum_max = sum_max.max(a1s[i].sumset(&a2s[i].scale(c))?.len() as u128);
        dbl_max = dbl_max.max(a2s[i].sumset(&a2s[i])?.len() as u128);
        inter_min = inter_min.min((a1s[i].intersection_len(a1s_) * a2s[i].intersection_len(a2s_)) as u128);
        cross_max = cross_max.max(a2s_.scale(c_star).sumset(&a2s_.scale(c))?.len() as u128);
    }

    let cover_c = elements_witness(t, "cover_c")?;
    let translates = sets_witness(t, "translates")?;
    if translates.len() != 2 * cover_c.len() || cover_c.len() > 4 {
        return Err(bad("covering data has the wrong shape"));
    }
    let mut cov = Vec::new();
    for &c in &cover_c {
        let i = cs.iter().position(|&x| x == c).ok_or_else(|| bad("covering index not in C"))?;
        cov.push((c, a1s[i].clone()));
    }
    let y_prime = covered_y(&f, a2s_, a1s_, &cov, &translates)?;
    if y_prime != t.set_witness("Y_prime")? {
        return Err(bad("Y' does not match the stored translates"));
    }
    let max_translates = translates.iter().map(|v| v.len()).max().unwrap_or(0) as u128;
    let three_quarters = BigRational::new(BigInt::from(3 * a2s_.len()), BigInt::from(4));
    let _ = ratio_param(t, "epsilon")?;

    let ncs = cs.len() as u128;
    Ok(vec![
        Guarantee::lower("C_size", "|C| >> T^5 / (|A|^10 |B|^14)", false, ncs, power_product(&[(tv, 5), (na, -10), (nb, -14)])?),
        Guarantee::lower("A_sizes", "|A1^(c)|, |A2^(c)| >> T / (|A| |B|^3)", false, sizes, power_product(&[(tv, 1), (na, -1), (nb, -3)])?),
        Guarantee::upper("A1_plus_cA2", "|A1^(c) + c A2^(c)| << |A|^11 |B|^15 / T^5", false, sum_max, power_product(&[(na, 11), (nb, 15), (tv, -5)])?),
        Guarantee::upper("A2_doubling", "|A2^(c) + A2^(c)| << |A|^23 |B|^33 / T^11", false, dbl_max, power_product(&[(na, 23), (nb, 33), (tv, -11)])?),
        Guarantee::lower(
            "intersections",
            "|A1^(c) ∩ A1*| |A2^(c) ∩ A2*| >> T^4 / (|A|^6 |B|^12)",
            false,
            inter_min,
            power_product(&[(tv, 4), (na, -6), (nb, -12)])?,
        ),
        Guarantee::upper("c_star_sum", "|c* A2* + c A2*| << |A|^51 |B|^75 / T^25", false, cross_max, power_product(&[(na, 51), (nb, 75), (tv, -25)])?),
        Guarantee::upper("covering", "translates per ±c_i Y' << |A|^40 |B|^60 / T^20", false, max_translates, power_product(&[(na, 40), (nb, 60), (tv, -20)])?),
        Guarantee::lower("covered_fraction", "|Y'| >= (3/4)|A2*|", true, y_prime.len() as u128, three_quarters),
    ])
}

#[cfg(test)]
mod tests {
    use super::super::trace::PassState;
    use super::*;

    #[test]
    fn interval_chain() {
        let f = Field::prime(101).unwrap();
        let a = FSet::new(&f, 0..8).unwrap();
        let t = trace_claim1_chain(&a, &a).unwrap();
        assert_eq!(t.guarantees.len(), 8);
        assert_ne!(t.status, PassState::Fail);
        assert!(t.replay().unwrap().ok);
        let json = serde_json::to_string(&t).unwrap();
        let back: LemmaTrace = serde_json::from_str(&json).unwrap();
        assert!(back.replay().unwrap().ok);
    }

    #[test]
    fn full_f4_chain() {
        let f = Field::of_order(4).unwrap();
        let a = FSet::new(&f, 0..4).unwrap();
        let t = trace_claim1_chain(&a, &a).unwrap();
        assert!(t.replay().unwrap().ok);
        assert!(t.guarantee("covered_fraction").unwrap().holds);
    }

    #[test]
    fn degenerate_and_size_errors() {
        let f = Field::prime(1_000_003).unwrap();
        let a = FSet::new(&f, [1]).unwrap();
        let b = FSet::new(&f, [7, 5000, 123_457]).unwrap();
        assert_eq!(nontrivial_collinear_triples(&a, &b, TripleMode::Oracle).unwrap(), 0);
        assert_eq!(trace_claim1_chain(&a, &b).unwrap_err(), Error::ChainDegenerate("T*(A, B) = 0".into()));
        // generic sets still carry the repeated-point triples
        let g = FSet::new(&f, [1, 10, 1000]).unwrap();
        assert_eq!(nontrivial_collinear_triples(&g, &b, TripleMode::Oracle).unwrap(), 36);
        let two = FSet::new(&f, [1, 2]).unwrap();
        assert!(matches!(trace_claim1_chain(&two, &b), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn tampered_trace_fails_replay() {
        let f = Field::prime(101).unwrap();
        let a = FSet::new(&f, 0..6).unwrap();
        let mut t = trace_claim1_chain(&a, &a).unwrap();
        t.guarantees[0].lhs += 1;
        assert!(!t.replay().unwrap().ok);
    }
}
