//! Popularity pigeonholing, covering by translates, and Plünnecke-type
//! sumset bounds.

use super::trace::{power_product, Guarantee, LemmaTrace, Witness};
use super::util::{masks_of_size, select, Distinct};
use super::{instance_of, rational, ratio_param};
use crate::error::{Error, Result};
use crate::set::{FSet, OpKind};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::str::FromStr;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PopularitySplit {
    /// Indices into the weight vector.
    pub popular: Vec<usize>,
    pub popular_sum: u64,
    pub max_weight: u64,
}

/// Keeps the indices `i` with `f(i) >= K / (2n)`.
pub fn popularity_split(weights: &[u64], k: u64) -> Result<PopularitySplit> {
    if weights.is_empty() || weights.contains(&0) {
        return Err(Error::NonPositiveWeight);
    }
    let sum: u128 = weights.iter().map(|&w| w as u128).sum();
    if sum < k as u128 {
        return Err(Error::WeightSumBelowK { sum: sum.min(u64::MAX as u128) as u64, k });
    }
    let n = weights.len() as u128;
    let popular: Vec<usize> = (0..weights.len()).filter(|&i| 2 * n * weights[i] as u128 >= k as u128).collect();
    let popular_sum = popular.iter().map(|&i| weights[i]).sum();
    Ok(PopularitySplit { popular, popular_sum, max_weight: *weights.iter().max().unwrap() })
}

/// Trace form of [`popularity_split`] with `f` indexed by the elements of `x`.
pub fn popularity_trace(x: &FSet, weights: &[u64], k: u64) -> Result<LemmaTrace> {
    if weights.len() != x.len() {
        return Err(Error::InvalidParams(format!("{} weights for {} elements", weights.len(), x.len())));
    }
    let split = popularity_split(weights, k)?;
    let y: Vec<u32> = split.popular.iter().map(|&i| x.elems()[i]).collect();
    let w: Vec<String> = weights.iter().map(|w| w.to_string()).collect();
    let t = LemmaTrace::new("popularity", instance_of(x.field(), &[("X", x)]))
        .param("K", k)
        .param("weights", w.join(","))
        .witness("Y", Witness::Set(y));
    let g = evaluate_popularity(&t)?;
    Ok(t.finish(g))
}

pub(super) fn evaluate_popularity(t: &LemmaTrace) -> Result<Vec<Guarantee>> {
    let x = t.input("X")?;
    let y = t.set_witness("Y")?;
    let k: u64 = t.param_value("K")?;
    let weights: Vec<u64> = t
        .params
        .get("weights")
        .ok_or_else(|| Error::Parse("missing weights".into()))?
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| Error::Parse(format!("bad weight `{s}`"))))
        .collect::<Result<_>>()?;
    if !y.is_subset(&x) || weights.len() != x.len() {
        return Err(Error::Parse("popularity witness does not match its input".into()));
    }
    let weight_of = |e: u32| weights[x.elems().binary_search(&e).unwrap()] as u128;
    let sum: u128 = y.iter().map(weight_of).sum();
    let m = *weights.iter().max().unwrap_or(&1) as u128;
    Ok(vec![
        Guarantee::lower("popular_mass", "sum_{y in Y} f(y) >= K/2", true, sum, rational(k as u128, 2)),
        Guarantee::lower("popular_size", "|Y| >= K/(2M)", true, y.len() as u128, rational(k as u128, 2 * m)),
    ])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverKind {
    /// pieces `t + Y`
    Sum,
    /// pieces `t - Y`
    Difference,
}

impl FromStr for CoverKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" | "+" => Ok(CoverKind::Sum),
            "difference" | "diff" | "-" => Ok(CoverKind::Difference),
            _ => Err(Error::Parse(format!("unknown cover kind `{s}`"))),
        }
    }
}

impl std::fmt::Display for CoverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CoverKind::Sum => "sum",
            CoverKind::Difference => "difference",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShenCover {
    pub translates: Vec<u32>,
    /// The part of X lying in the chosen pieces.
    pub covered: FSet,
    pub target: usize,
}

/// The translate `t` whose piece puts `x` at `y`: `x = t + y` or `x = t - y`.
fn piece_shift(f: &crate::Field, kind: CoverKind, x: u32, y: u32) -> u32 {
    match kind {
        CoverKind::Sum => f.sub(x, y),
        CoverKind::Difference => f.add(x, y),
    }
}

/// Whether `x` lies in the piece `t + Y` or `t - Y`.
fn in_piece(f: &crate::Field, kind: CoverKind, y: &FSet, x: u32, t: u32) -> bool {
    match kind {
        CoverKind::Sum => y.contains(f.sub(x, t)),
        CoverKind::Difference => y.contains(f.sub(t, x)),
    }
}

/// Greedy maximum coverage of X by translates of Y until at least
/// `(1 - eps)|X|` elements are covered.
pub fn shen_cover(x: &FSet, y: &FSet, eps: &BigRational, kind: CoverKind) -> Result<ShenCover> {
    if x.field() != y.field() {
        return Err(Error::FieldMismatch);
    }
    if *eps <= BigRational::zero() || *eps >= BigRational::one() {
        return Err(Error::InvalidParams("epsilon must lie in (0, 1)".into()));
    }
    if y.is_empty() {
        return Err(Error::InvalidParams("cannot cover by translates of an empty set".into()));
    }
    let f = x.field();
    let keep = (BigRational::one() - eps) * BigRational::from_integer(BigInt::from(x.len()));
    let target = keep.ceil().to_integer().to_usize().unwrap_or(x.len());
    let mut uncovered: Vec<u32> = x.elems().to_vec();
    let mut translates = Vec::new();
    while x.len() - uncovered.len() < target {
        let mut gain: HashMap<u32, usize> = HashMap::new();
        for &a in &uncovered {
            for b in y.iter() {
                *gain.entry(piece_shift(f, kind, a, b)).or_default() += 1;
            }
        }
        let (&t, _) = gain.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0))).unwrap();
        translates.push(t);
        uncovered.retain(|&a| !in_piece(f, kind, y, a, t));
    }
    let covered = FSet::new(f, x.iter().filter(|a| uncovered.binary_search(a).is_err()))?;
    Ok(ShenCover { translates, covered, target })
}

/// Elements of X inside some piece `t ± Y`.
pub(crate) fn covered_by(x: &FSet, y: &FSet, translates: &[u32], kind: CoverKind) -> Result<FSet> {
    let f = x.field();
    FSet::new(f, x.iter().filter(|&a| translates.iter().any(|&t| in_piece(f, kind, y, a, t))))
}

/// `H_n = 1 + 1/2 + ... + 1/n`, the greedy set-cover inflation.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).map(|i| 1.0 / i as f64).sum()
}

pub fn shen_cover_trace(x: &FSet, y: &FSet, eps: &BigRational, kind: CoverKind) -> Result<LemmaTrace> {
    let cover = shen_cover(x, y, eps, kind)?;
    let mut t = LemmaTrace::new("shen_cover", instance_of(x.field(), &[("X", x), ("Y", y)]))
        .param("epsilon", format!("{}/{}", eps.numer(), eps.denom()))
        .param("kind", kind)
        .witness("translates", Witness::Elements(cover.translates.clone()))
        .witness("covered", Witness::Set(cover.covered.elems().to_vec()));
    t.notes.push(format!("greedy inflation H_|Y| = {:.6}", harmonic(y.len())));
    let g = evaluate_shen(&t)?;
    Ok(t.finish(g))
}

pub(super) fn evaluate_shen(t: &LemmaTrace) -> Result<Vec<Guarantee>> {
    let x = t.input("X")?;
    let y = t.input("Y")?;
    let eps = ratio_param(t, "epsilon")?;
    let kind: CoverKind = t.param_value("kind")?;
    let translates = match t.witnesses.get("translates") {
        Some(Witness::Elements(v)) => v.clone(),
        _ => return Err(Error::Parse("missing translates".into())),
    };
    let covered = covered_by(&x, &y, &translates, kind)?;
    if covered != t.set_witness("covered")? {
        return Err(Error::Parse("covered set does not match the translates".into()));
    }
    let keep = (BigRational::one() - eps) * BigRational::from_integer(BigInt::from(x.len()));
    let s = x.sumset(&y)?.len();
    let d = x.difference_set(&y)?.len();
    Ok(vec![
        Guarantee::lower("coverage", "|covered| >= (1 - eps)|X|", true, covered.len() as u128, keep),
        Guarantee::upper(
            "cover_size",
            "#translates << min(|X+Y|, |X-Y|)/|Y|",
            false,
            translates.len() as u128,
            rational(s.min(d) as u128, y.len() as u128),
        ),
    ])
}

fn check_ys(x: &FSet, ys: &[FSet]) -> Result<()> {
    if ys.is_empty() || ys.len() > 3 {
        return Err(Error::InvalidParams(format!("need 1 to 3 summands, got {}", ys.len())));
    }
    if x.is_empty() || ys.iter().any(|y| y.is_empty()) {
        return Err(Error::InvalidParams("empty set in a sumset bound".into()));
    }
    Ok(())
}

fn iterated_sum(ys: &[FSet]) -> Result<FSet> {
    let mut s = ys[0].clone();
    for y in &ys[1..] {
        s = s.sumset(y)?;
    }
    Ok(s)
}

/// `prod |X + Y_i| / |X|^(k-1)`.
fn plunnecke_rhs(x: &FSet, ys: &[FSet]) -> Result<BigRational> {
    let mut terms: Vec<(u128, i64)> = Vec::new();
    for y in ys {
        terms.push((x.sumset(y)?.len() as u128, 1));
    }
    terms.push((x.len() as u128, 1 - ys.len() as i64));
    power_product(&terms)
}

/// `|Y_1 + ... + Y_k| <= prod |X + Y_i| / |X|^(k-1)` with constant 1.
pub fn plunnecke_check(x: &FSet, ys: &[FSet]) -> Result<Guarantee> {
    check_ys(x, ys)?;
    let lhs = iterated_sum(ys)?.len() as u128;
    Ok(Guarantee::upper("plunnecke", "|Y1+...+Yk| <= prod|X+Yi| / |X|^(k-1)", true, lhs, plunnecke_rhs(x, ys)?))
}

fn named_inputs<'a>(x: &'a FSet, ys: &'a [FSet]) -> Vec<(String, &'a FSet)> {
    let mut v = vec![("X".to_string(), x)];
    v.extend(ys.iter().enumerate().map(|(i, y)| (format!("Y{}", i + 1), y)));
    v
}

fn inputs_ys(t: &LemmaTrace) -> Result<Vec<FSet>> {
    let k: usize = t.param_value("k")?;
    (1..=k).map(|i| t.input(&format!("Y{i}"))).collect()
}

pub fn plunnecke_trace(x: &FSet, ys: &[FSet]) -> Result<LemmaTrace> {
    check_ys(x, ys)?;
    let named = named_inputs(x, ys);
    let refs: Vec<(&str, &FSet)> = named.iter().map(|(n, s)| (n.as_str(), *s)).collect();
    let t = LemmaTrace::new("plunnecke", instance_of(x.field(), &refs)).param("k", ys.len());
    let g = evaluate_plunnecke(&t)?;
    Ok(t.finish(g))
}

pub(super) fn evaluate_plunnecke(t: &LemmaTrace) -> Result<Vec<Guarantee>> {
    Ok(vec![plunnecke_check(&t.input("X")?, &inputs_ys(t)?)?])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinedPlunnecke {
    pub x_prime: FSet,
    /// `|X' + Y_1 + ... + Y_k|`
    pub sumset: usize,
    pub exhaustive: bool,
}

/// Largest X size scanned exhaustively by [`plunnecke_refined_search`].
pub const REFINED_EXHAUSTIVE_MAX: usize = 16;

/// Minimizes `|X' + Y_1 + ... + Y_k|` over `X' ⊆ X` with
/// `|X'| >= (1 - eps)|X|`. Shrinking X' never grows the sumset, so only
/// subsets of the minimal admissible size are scanned.
pub fn plunnecke_refined_search(x: &FSet, ys: &[FSet], eps: &BigRational) -> Result<RefinedPlunnecke> {
    check_ys(x, ys)?;
    if *eps < BigRational::zero() || *eps >= BigRational::one() {
        return Err(Error::InvalidParams("epsilon must lie in [0, 1)".into()));
    }
    let f = x.field();
    let s = iterated_sum(ys)?;
    let n = x.len();
    let keep = (BigRational::one() - eps) * BigRational::from_integer(BigInt::from(n));
    let size = keep.ceil().to_integer().to_usize().unwrap_or(n).max(1);
    let xs = x.elems();
    let q = f.q();
    if n <= REFINED_EXHAUSTIVE_MAX {
        let best = masks_of_size(n as u32, size as u32)
            .into_par_iter()
            .map_init(
                || Distinct::new(q),
                |d, m| (d.op_size(f, &select(xs, m), s.elems(), OpKind::Sum), m),
            )
            .min()
            .unwrap();
        return Ok(RefinedPlunnecke { x_prime: FSet::new(f, select(xs, best.1))?, sumset: best.0, exhaustive: true });
    }
    let mut cur: Vec<u32> = xs.to_vec();
    let mut d = Distinct::new(q);
    while cur.len() > size {
        let (_, drop) = (0..cur.len())
            .map(|i| {
                let rest: Vec<u32> = cur.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
                (d.op_size(f, &rest, s.elems(), OpKind::Sum), i)
            })
            .min()
            .unwrap();
        cur.remove(drop);
    }
    let sumset = d.op_size(f, &cur, s.elems(), OpKind::Sum);
    Ok(RefinedPlunnecke { x_prime: FSet::new(f, cur)?, sumset, exhaustive: false })
}

pub fn plunnecke_refined_trace(x: &FSet, ys: &[FSet], eps: &BigRational) -> Result<LemmaTrace> {
    let r = plunnecke_refined_search(x, ys, eps)?;
    let named = named_inputs(x, ys);
    let refs: Vec<(&str, &FSet)> = named.iter().map(|(n, s)| (n.as_str(), *s)).collect();
    let t = LemmaTrace::new("plunnecke_refined", instance_of(x.field(), &refs))
        .param("k", ys.len())
        .param("epsilon", format!("{}/{}", eps.numer(), eps.denom()))
        .param("search", if r.exhaustive { "exhaustive" } else { "greedy" })
        .witness("X_prime", Witness::Set(r.x_prime.elems().to_vec()));
    let g = evaluate_refined(&t)?;
    Ok(t.finish(g))
}

pub(super) fn evaluate_refined(t: &LemmaTrace) -> Result<Vec<Guarantee>> {
    let x = t.input("X")?;
    let ys = inputs_ys(t)?;
    let eps = ratio_param(t, "epsilon")?;
    let xp = t.set_witness("X_prime")?;
    if !xp.is_subset(&x) {
        return Err(Error::Parse("X' is not a subset of X".into()));
    }
    let lhs = xp.sumset(&iterated_sum(&ys)?)?.len() as u128;
    let keep = (BigRational::one() - eps) * BigRational::from_integer(BigInt::from(x.len()));
    Ok(vec![
        Guarantee::lower("subset_size", "|X'| >= (1 - eps)|X|", true, xp.len() as u128, keep),
        Guarantee::upper("refined_sumset", "|X'+Y1+...+Yk| << prod|X+Yi| / |X|^(k-1)", false, lhs, plunnecke_rhs(&x, &ys)?),
    ])
}

#[cfg(test)]
mod tests {
    use super::super::trace::PassState;
    use super::*;
    use crate::field::Field;
    use proptest::prelude::*;

    #[test]
    fn popularity_examples() {
        let s = popularity_split(&[1; 10], 10).unwrap();
        assert_eq!(s.popular.len(), 10);
        assert_eq!(s.popular_sum, 10);
        // one heavy element carrying 90 of 99
        let mut w = vec![90];
        w.extend([1; 9]);
        let s = popularity_split(&w, 99).unwrap();
        assert_eq!(s.popular, vec![0]);
        assert!(2 * s.popular_sum >= 99);
        assert_eq!(popularity_split(&[1, 2], 4), Err(Error::WeightSumBelowK { sum: 3, k: 4 }));
        assert_eq!(popularity_split(&[1, 0], 1), Err(Error::NonPositiveWeight));
        let uniform = popularity_split(&[5; 8], 40).unwrap();
        assert!(2 * 5 * uniform.popular.len() >= 40);
    }

    #[test]
    fn popularity_trace_replays() {
        let f = Field::prime(11).unwrap();
        let x = FSet::new(&f, 0..10).unwrap();
        let t = popularity_trace(&x, &[9, 1, 1, 1, 1, 1, 1, 1, 1, 1], 18).unwrap();
        assert_eq!(t.status, PassState::ExactPass);
        assert!(t.replay().unwrap().ok);
    }

    #[test]
    fn cover_cosets_of_subgroup() {
        let f = Field::of_order(8).unwrap();
        let y = FSet::new(&f, [0, 1]).unwrap();
        let x = FSet::new(&f, [0, 1, 2, 3, 4, 5]).unwrap();
        let eps = BigRational::new(1.into(), 10.into());
        let c = shen_cover(&x, &y, &eps, CoverKind::Sum).unwrap();
        assert_eq!(c.translates.len(), 3);
        assert_eq!(c.covered, x);
        let t = shen_cover_trace(&x, &y, &eps, CoverKind::Difference).unwrap();
        assert!(t.guarantee("coverage").unwrap().holds);
        assert!(t.replay().unwrap().ok);
    }

    #[test]
    fn cover_by_singletons_and_subfield() {
        let f = Field::of_order(16).unwrap();
        let x = FSet::new(&f, [1, 3, 7, 9, 12]).unwrap();
        let one = FSet::new(&f, [6]).unwrap();
        let eps = BigRational::new(1.into(), 4.into());
        let c = shen_cover(&x, &one, &eps, CoverKind::Sum).unwrap();
        assert_eq!(c.translates.len(), 4);
        let g = FSet::new(&f, f.subfield(2).unwrap().elements).unwrap();
        assert_eq!(shen_cover(&g, &g, &eps, CoverKind::Sum).unwrap().translates.len(), 1);
        assert!(shen_cover(&g, &g, &BigRational::one(), CoverKind::Sum).is_err());
    }

    #[test]
    fn difference_pieces_in_odd_characteristic() {
        // pieces t - {0, 1}: covering {1, 2, 3, 4} in F_7 needs t = 2 and t = 4
        let f = Field::prime(7).unwrap();
        let x = FSet::new(&f, [1, 2, 3, 4]).unwrap();
        let y = FSet::new(&f, [0, 1]).unwrap();
        let eps = BigRational::new(1.into(), 8.into());
        let c = shen_cover(&x, &y, &eps, CoverKind::Difference).unwrap();
        assert_eq!(c.covered, x);
        assert_eq!(c.translates.len(), 2);
        for t in &c.translates {
            assert!([2, 3, 4, 5].contains(t));
        }
        let t = shen_cover_trace(&x, &y, &eps, CoverKind::Difference).unwrap();
        assert!(t.replay().unwrap().ok);
    }

    #[test]
    fn plunnecke_subfield_equality() {
        let f = Field::of_order(16).unwrap();
        let g = FSet::new(&f, f.subfield(2).unwrap().elements).unwrap();
        let r = plunnecke_check(&g, &[g.clone(), g.clone()]).unwrap();
        assert!(r.holds);
        assert_eq!(r.ratio.unwrap().0, BigRational::one());
        assert!(plunnecke_check(&g, &[]).is_err());
    }

    #[test]
    fn refined_search_exhaustive_vs_brute() {
        let f = Field::prime(101).unwrap();
        let x = FSet::new(&f, [0, 1, 2, 3, 5, 8, 13, 21]).unwrap();
        let y = FSet::new(&f, [0, 1, 2]).unwrap();
        let eps = BigRational::new(1.into(), 4.into());
        let r = plunnecke_refined_search(&x, std::slice::from_ref(&y), &eps).unwrap();
        assert!(r.exhaustive);
        // brute force over all subsets of size >= 6
        let mut best = usize::MAX;
        for m in 0u64..256 {
            if m.count_ones() >= 6 {
                best = best.min(x.subset_by_mask(m).sumset(&y).unwrap().len());
            }
        }
        assert_eq!(r.sumset, best);
        let t = plunnecke_refined_trace(&x, &[y], &eps).unwrap();
        assert!(t.replay().unwrap().ok);
    }

    #[test]
    fn refined_greedy_mode() {
        let f = Field::prime(101).unwrap();
        let x = FSet::new(&f, 0..20).unwrap();
        let y = FSet::new(&f, [0, 50]).unwrap();
        let r = plunnecke_refined_search(&x, &[y], &BigRational::new(1.into(), 2.into())).unwrap();
        assert!(!r.exhaustive);
        assert_eq!(r.x_prime.len(), 10);
        assert_eq!(r.sumset, 20);
    }

    proptest! {
        #[test]
        fn plunnecke_never_violated(xs in proptest::collection::vec(0u32..101, 1..12),
                                    y1 in proptest::collection::vec(0u32..101, 1..8),
                                    y2 in proptest::collection::vec(0u32..101, 1..8)) {
            let f = Field::prime(101).unwrap();
            let x = FSet::new(&f, xs).unwrap();
            let ys = [FSet::new(&f, y1).unwrap(), FSet::new(&f, y2).unwrap()];
            prop_assert!(plunnecke_check(&x, &ys).unwrap().holds);
            prop_assert!(plunnecke_check(&x, &ys[..1]).unwrap().holds);
        }

        #[test]
        fn cover_meets_target(xs in proptest::collection::vec(0u32..64, 1..20),
                              ys in proptest::collection::vec(0u32..64, 1..6),
                              e in 1u32..16) {
            let f = Field::of_order(64).unwrap();
            let x = FSet::new(&f, xs).unwrap();
            let y = FSet::new(&f, ys).unwrap();
            let eps = BigRational::new(e.into(), 16.into());
            let c = shen_cover(&x, &y, &eps, CoverKind::Sum).unwrap();
            prop_assert!(c.covered.len() >= c.target);
            prop_assert!(c.covered.is_subset(&x));
        }
    }
}
