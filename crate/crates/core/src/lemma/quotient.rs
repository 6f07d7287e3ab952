//! Quotient-set tools: Bourgain's intersection, the shift/dilation closure
//! trichotomy for `R(X)`, and pivot search.

use super::trace::{Guarantee, LemmaTrace, Witness};
use super::util::Distinct;
use super::{instance_of, rational};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::set::{FSet, OpKind};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BourgainIntersection {
    pub x1: u32,
    pub x2: u32,
    pub x3: u32,
    /// `|(X - x1) ∩ (x2 - x3)Y|`
    pub achieved: usize,
    /// `max_{y in Y} |X + yX|`
    pub m: usize,
}

fn max_dilated_sumset(x: &FSet, y: &FSet) -> usize {
    let f = x.field();
    let mut d = Distinct::new(f.q());
    y.iter().map(|c| d.count(x.iter().flat_map(|a| x.iter().map(move |b| f.add(a, f.mul(c, b)))))).max().unwrap_or(0)
}

fn intersection_count(x: &FSet, y: &FSet, x1: u32, x2: u32, x3: u32) -> usize {
    let f = x.field();
    let d = f.sub(x2, x3);
    y.iter().filter(|&b| x.contains(f.add(f.mul(d, b), x1))).count()
}

/// Exhaustive scan over `x1` and ordered pairs `x2 != x3`; ties go to the
/// lexicographically smallest triple.
pub fn bourgain_intersection_search(x: &FSet, y: &FSet) -> Result<BourgainIntersection> {
    if x.field() != y.field() {
        return Err(Error::FieldMismatch);
    }
    if x.len() < 2 {
        return Err(Error::DegenerateX);
    }
    if y.is_empty() {
        return Err(Error::InvalidParams("Y is empty".into()));
    }
    let xs = x.elems();
    let best = xs
        .par_iter()
        .map(|&x1| {
            let mut best = (0usize, x1, xs[0], xs[1]);
            let mut first = true;
            for &x2 in xs {
                for &x3 in xs {
                    if x2 == x3 {
                        continue;
                    }
                    let c = intersection_count(x, y, x1, x2, x3);
                    if first || c > best.0 {
                        best = (c, x1, x2, x3);
                        first = false;
                    }
                }
            }
            best
        })
        .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2, b.3) < (a.1, a.2, a.3)) { b } else { a })
        .unwrap();
    Ok(BourgainIntersection { x1: best.1, x2: best.2, x3: best.3, achieved: best.0, m: max_dilated_sumset(x, y) })
}

pub fn bourgain_trace(x: &FSet, y: &FSet) -> Result<LemmaTrace> {
    let b = bourgain_intersection_search(x, y)?;
    let t = LemmaTrace::new("bourgain", instance_of(x.field(), &[("X", x), ("Y", y)]))
        .witness("x1", Witness::Element(b.x1))
        .witness("x2", Witness::Element(b.x2))
        .witness("x3", Witness::Element(b.x3));
    let g = evaluate_bourgain(&t)?;
    Ok(t.finish(g))
}

pub(super) fn evaluate_bourgain(t: &LemmaTrace) -> Result<Vec<Guarantee>> {
    let x = t.input("X")?;
    let y = t.input("Y")?;
    let (x1, x2, x3) = (t.element_witness("x1")?, t.element_witness("x2")?, t.element_witness("x3")?);
    if !(x.contains(x1) && x.contains(x2) && x.contains(x3)) || x2 == x3 {
        return Err(Error::Parse("Bourgain witnesses must be elements of X with x2 != x3".into()));
    }
    let achieved = intersection_count(&x, &y, x1, x2, x3) as u128;
    let m = max_dilated_sumset(&x, &y) as u128;
    Ok(vec![Guarantee::lower(
        "intersection",
        "|(X - x1) ∩ (x2 - x3)Y| >> |Y||X|/M",
        false,
        achieved,
        rational(y.len() as u128 * x.len() as u128, m),
    )])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum QuotientCase {
    /// `1 + r ∉ R(X)`
    NotShiftClosed { r: u32 },
    /// `x r ∉ R(X)`
    NotMultClosed { x: u32, r: u32 },
    /// `R(X)` is the subfield of the given degree.
    Subfield { degree: u32, order: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientClassification {
    pub case: QuotientCase,
    pub quotient_size: usize,
    /// Degree of the subfield generated by X, from Frobenius fixed points.
    pub generated_degree: u32,
    /// Size of the additive/multiplicative closure of `X ∪ {0, 1}`, when
    /// small enough to iterate.
    pub closure_size: Option<usize>,
    /// In the subfield case: `R·R ⊆ R`, `1 + R ⊆ R` and `R = F_X` re-checked.
    pub verified: bool,
}

/// Closure iteration is attempted up to this subfield order.
const CLOSURE_CAP: u64 = 1 << 12;

/// Smallest subfield degree containing every element of X.
pub fn generated_subfield_degree(x: &FSet) -> u32 {
    let f = x.field();
    f.subfield_degrees().into_iter().find(|&d| x.iter().all(|a| f.in_subfield(a, d))).unwrap_or(f.m())
}

/// Closure of `X ∪ {0, 1}` under + and ×, by worklist.
pub fn closure_iteration(x: &FSet) -> Result<FSet> {
    let f = x.field();
    f.elements()?;
    let mut inside = vec![false; f.q() as usize];
    let mut elems: Vec<u32> = Vec::new();
    let push = |v: u32, inside: &mut Vec<bool>, elems: &mut Vec<u32>| {
        if !inside[v as usize] {
            inside[v as usize] = true;
            elems.push(v);
        }
    };
    for v in x.iter().chain([0, 1]) {
        push(v, &mut inside, &mut elems);
    }
    let mut i = 0;
    while i < elems.len() {
        let s = elems[i];
        let mut j = 0;
        while j <= i {
            let t = elems[j];
            push(f.add(s, t), &mut inside, &mut elems);
            push(f.mul(s, t), &mut inside, &mut elems);
            j += 1;
        }
        i += 1;
    }
    FSet::new(f, elems)
}

fn is_subfield(f: &Field, r: &FSet) -> Option<u32> {
    let d = f.subfield_degrees().into_iter().find(|&d| (f.p() as u64).pow(d) == r.len() as u64)?;
    let g = f.subfield(d).ok()?;
    (g.elements.as_slice() == r.elems()).then_some(d)
}

/// Decides which of `1 + R(X) ⊄ R(X)`, `X·R(X) ⊄ R(X)`, or `R(X) = F_X`
/// holds, in that order.
pub fn quotient_closure_classify(x: &FSet) -> Result<QuotientClassification> {
    if x.len() < 2 {
        return Err(Error::DegenerateX);
    }
    let f = x.field();
    let r = x.quotient_set()?;
    let generated_degree = generated_subfield_degree(x);
    let gen_order = (f.p() as u64).pow(generated_degree);
    let closure = if gen_order <= CLOSURE_CAP { Some(closure_iteration(x)?) } else { None };
    let mut out = QuotientClassification {
        case: QuotientCase::Subfield { degree: 0, order: 0 },
        quotient_size: r.len(),
        generated_degree,
        closure_size: closure.as_ref().map(|c| c.len()),
        verified: false,
    };
    if let Some(v) = r.iter().find(|&v| !r.contains(f.add(1, v))) {
        out.case = QuotientCase::NotShiftClosed { r: v };
        return Ok(out);
    }
    for a in x.iter() {
        if let Some(v) = r.iter().find(|&v| !r.contains(f.mul(a, v))) {
            out.case = QuotientCase::NotMultClosed { x: a, r: v };
            return Ok(out);
        }
    }
    let degree = is_subfield(f, &r);
    out.case = QuotientCase::Subfield { degree: degree.unwrap_or(0), order: r.len() as u64 };
    out.verified = match degree {
        Some(d) => {
            let small = r.len() as u64 <= CLOSURE_CAP;
            let rr_closed = !small || r.iter().all(|a| r.iter().all(|b| r.contains(f.mul(a, b))));
            let shift_closed = r.iter().all(|a| r.contains(f.add(1, a)));
            let matches_closure = closure.as_ref().is_none_or(|c| *c == r);
            rr_closed && shift_closed && matches_closure && d == generated_degree
        }
        None => false,
    };
    Ok(out)
}

pub fn quotient_classify_trace(x: &FSet) -> Result<LemmaTrace> {
    let c = quotient_closure_classify(x)?;
    let mut t = LemmaTrace::new("quotient_classify", instance_of(x.field(), &[("X", x)]));
    t = match c.case {
        QuotientCase::NotShiftClosed { r } => t.param("case", "not_shift_closed").witness("r", Witness::Element(r)),
        QuotientCase::NotMultClosed { x, r } => {
            t.param("case", "not_mult_closed").witness("x", Witness::Element(x)).witness("r", Witness::Element(r))
        }
        QuotientCase::Subfield { degree, .. } => t.param("case", "subfield").param("degree", degree),
    };
    let g = evaluate_classify(&t)?;
    Ok(t.finish(g))
}

pub(super) fn evaluate_classify(t: &LemmaTrace) -> Result<Vec<Guarantee>> {
    let x = t.input("X")?;
    let f = x.field();
    let r = x.quotient_set()?;
    let one = || rational(1, 1);
    let case: String = t.param_value("case")?;
    let g = match case.as_str() {
        "not_shift_closed" => {
            let v = t.element_witness("r")?;
            let bad = r.contains(v) && !r.contains(f.add(1, v));
            Guarantee::lower("witness", "r in R(X) and 1 + r not in R(X)", true, bad as u128, one())
        }
        "not_mult_closed" => {
            let (a, v) = (t.element_witness("x")?, t.element_witness("r")?);
            let bad = x.contains(a) && r.contains(v) && !r.contains(f.mul(a, v));
            Guarantee::lower("witness", "x in X, r in R(X) and x r not in R(X)", true, bad as u128, one())
        }
        "subfield" => {
            let d: u32 = t.param_value("degree")?;
            let ok = is_subfield(f, &r) == Some(d) && d == generated_subfield_degree(&x);
            Guarantee::lower("quotient_is_generated_subfield", "R(X) = F_X", true, ok as u128, one())
        }
        other => return Err(Error::Parse(format!("unknown case `{other}`"))),
    };
    Ok(vec![g])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Pivot {
    pub r: u32,
    /// `|X' + rX'|`
    pub size: usize,
    /// r ranged over all of F_q^* rather than R(X).
    pub full_field: bool,
}

/// Maximizes `|X' + rX'|` over `r ∈ R(X)`, or over `F_q^*` once
/// `|X|^2 > q`.
pub fn pivot_search(x: &FSet, xp: &FSet) -> Result<Pivot> {
    if x.len() < 2 {
        return Err(Error::DegenerateX);
    }
    if !xp.is_subset(x) || 2 * xp.len() < x.len() {
        return Err(Error::InvalidParams("need X' ⊆ X with |X'| >= |X|/2".into()));
    }
    let f = x.field();
    let full_field = (x.len() as u128).pow(2) > f.q() as u128;
    let domain: Vec<u32> = if full_field { f.elements()?.skip(1).collect() } else { x.quotient_set()?.elems().to_vec() };
    let xs = xp.elems();
    let q = f.q();
    let (size, r) = domain
        .par_iter()
        .map_init(|| Distinct::new(q), |d, &r| (d.op_size(f, xs, &scaled(f, xs, r), OpKind::Sum), std::cmp::Reverse(r)))
        .max()
        .unwrap();
    Ok(Pivot { r: r.0, size, full_field })
}

fn scaled(f: &Field, xs: &[u32], r: u32) -> Vec<u32> {
    xs.iter().map(|&a| f.mul(r, a)).collect()
}

pub fn pivot_trace(x: &FSet, xp: &FSet) -> Result<LemmaTrace> {
    let p = pivot_search(x, xp)?;
    let t = LemmaTrace::new("pivot", instance_of(x.field(), &[("X", x), ("X_prime", xp)]))
        .param("domain", if p.full_field { "field" } else { "quotient_set" })
        .witness("r", Witness::Element(p.r));
    let g = evaluate_pivot(&t)?;
    Ok(t.finish(g))
}

pub(super) fn evaluate_pivot(t: &LemmaTrace) -> Result<Vec<Guarantee>> {
    let x = t.input("X")?;
    let xp = t.input("X_prime")?;
    let r = t.element_witness("r")?;
    let f = x.field();
    let full_field = (x.len() as u128).pow(2) > f.q() as u128;
    if !full_field && !x.quotient_set()?.contains(r) {
        return Err(Error::Parse("pivot r is not in R(X)".into()));
    }
    let size = xp.sumset(&xp.scale(r))?.len() as u128;
    Ok(vec![if full_field {
        Guarantee::lower("pivot_size", "|X' + rX'| >> q", false, size, rational(f.q() as u128, 1))
    } else {
        Guarantee::lower("pivot_size", "|X' + rX'| >> |X|^2", false, size, rational((x.len() as u128).pow(2), 1))
    }])
}
