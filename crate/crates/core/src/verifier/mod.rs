//! Exact law checks and ratio reports for the asymptotic claims.
//!
//! Constant-free inequalities are checked in exact integer arithmetic by
//! [`check_exact_laws`]. Claims with implied constants are evaluated by
//! [`evaluate_theorem`] into a [`RatioReport`]: the exact left side, every
//! right-side term bracketed separately, and the achieved ratio. Reports
//! never threshold their ratios.

mod appendix;
mod claims;
mod laws;
mod sweep;

pub use appendix::{appendix_a_conclusion_report, AppendixReport, SumRatioHypothesis};
pub use claims::{evaluate_claim, evaluate_theorem, EvalOptions, CLAIM_IDS};
pub use laws::{check_exact_laws, quotient_full_check, run_law_suite, LawResult, LawSuite, LawSummary, LAW_IDS};
pub use sweep::{extremal_search, run_sweep, sized_family, Extremal, SweepResult, SweepRow, SweepSpec, SweepSummary};

use crate::bounds::{Bracket, Monomial};
use crate::error::{Error, Result};
use crate::field::{max_coset_intersection, max_linear_coset_intersection, Field, SubfieldMax};
use crate::bounds::within_coset_template;
use crate::lemma::{Direction, Ratio};
use crate::report::{Instance, SCHEMA_VERSION, TOOL_VERSION};
use crate::set::FSet;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// One right-hand term: a sum of monomials, bracketed as a whole.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhsTerm {
    pub formula: String,
    pub parts: Vec<Monomial>,
    pub bracket: Bracket,
    pub approx: f64,
}

impl RhsTerm {
    pub fn new(parts: Vec<Monomial>) -> RhsTerm {
        let formula = parts.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" + ");
        let (bracket, approx) = bracket_sum(&parts);
        RhsTerm { formula, parts, bracket, approx }
    }

    pub fn single(m: Monomial) -> RhsTerm {
        RhsTerm::new(vec![m])
    }
}

fn bracket_sum(parts: &[Monomial]) -> (Bracket, f64) {
    let mut lo = BigUint::zero();
    let mut hi = BigUint::zero();
    for m in parts {
        let b = m.bracket();
        lo += b.floor_scaled;
        hi += b.ceil_scaled;
    }
    (Bracket { floor_scaled: lo, ceil_scaled: hi }, parts.iter().map(Monomial::approx).sum())
}

/// How the right-hand terms combine: `max` for sums of terms, `min` for
/// bounds stated as a minimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregate {
    Max,
    Min,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisState {
    Satisfied,
    Violated,
    /// No proper subfield, so the coset condition is empty.
    Vacuous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CosetKind {
    /// `cG + d`.
    Affine,
    /// `cG`.
    Linear,
}

/// A coset-intersection hypothesis checked with constant 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub target: String,
    pub template: String,
    pub cosets: CosetKind,
    pub state: HypothesisState,
    pub achieved: Option<u64>,
    pub witness: Option<SubfieldMax>,
}

/// Above this many pair visits the subfield scan is refused.
const SCAN_BUDGET: u128 = 1 << 34;

/// Checks `|S ∩ (cG + d)| <= max{|G|^(1/2), threshold}` (or `cG`) over all
/// proper subfields G.
pub fn check_hypothesis(target: &str, s: &FSet, threshold: &Monomial, cosets: CosetKind) -> Result<Hypothesis> {
    let f = s.field();
    let template = format!("max{{|G|^(1/2), {threshold}}}");
    let mut h = Hypothesis {
        target: target.to_string(),
        template,
        cosets,
        state: HypothesisState::Vacuous,
        achieved: None,
        witness: None,
    };
    if f.m() == 1 {
        return Ok(h);
    }
    let subs = f.proper_subfields().len() as u128;
    if (s.len() as u128).pow(2) * subs > SCAN_BUDGET {
        return Err(Error::HypothesisUncheckable(format!("|{target}| = {} in F_{}", s.len(), f.q())));
    }
    if s.len() < 2 {
        h.state = HypothesisState::Satisfied;
        h.achieved = Some(s.len() as u64);
        return Ok(h);
    }
    let per = match cosets {
        CosetKind::Affine => max_coset_intersection(s, None)?.per_subfield,
        CosetKind::Linear => max_linear_coset_intersection(s)?,
    };
    let ok = per.iter().all(|m| within_coset_template(m.count, m.order, threshold));
    let best = per.iter().max_by(|x, y| x.count.cmp(&y.count).then(y.degree.cmp(&x.degree))).cloned();
    h.state = if ok { HypothesisState::Satisfied } else { HypothesisState::Violated };
    h.achieved = best.as_ref().map(|m| m.count);
    h.witness = best;
    Ok(h)
}

/// A multiplicative log factor kept out of the ratio.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogFactor {
    pub formula: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub schema: String,
    pub version: String,
    pub claim: String,
    pub instance: Instance,
    pub options: EvalOptions,
    pub hypotheses: Vec<Hypothesis>,
    pub direction: Direction,
    pub aggregate: Aggregate,
    pub lhs_formula: String,
    #[serde(with = "crate::report::u128_str")]
    pub lhs: u128,
    pub rhs_terms: Vec<RhsTerm>,
    /// Index of the term that decides the ratio.
    pub binding: usize,
    /// Upper: `lhs / floor(agg rhs)`. Lower: `ceil(agg rhs) / lhs`. Both
    /// round toward a larger ratio; `None` when the divisor is zero.
    pub ratio: Option<Ratio>,
    pub ratio_approx: Option<f64>,
    pub log_factor: Option<LogFactor>,
    /// `log |A| / log q`.
    pub log_q: f64,
    pub extra: BTreeMap<String, String>,
}

/// Picks the binding term and the exact ratio.
pub fn compute_ratio(direction: Direction, aggregate: Aggregate, lhs: u128, terms: &[RhsTerm]) -> (usize, Option<BigRational>) {
    if terms.is_empty() {
        return (0, None);
    }
    let vals: Vec<BigRational> = terms
        .iter()
        .map(|t| match direction {
            Direction::Upper => t.bracket.floor(),
            Direction::Lower => t.bracket.ceil(),
        })
        .collect();
    let mut best = 0;
    for (i, v) in vals.iter().enumerate().skip(1) {
        let better = match aggregate {
            Aggregate::Max => v > &vals[best],
            Aggregate::Min => v < &vals[best],
        };
        if better {
            best = i;
        }
    }
    let l = BigRational::from_integer(BigInt::from(lhs));
    let v = &vals[best];
    let ratio = match direction {
        Direction::Upper if !v.is_zero() => Some(l / v),
        Direction::Lower if !l.is_zero() => Some(v / l),
        _ => None,
    };
    (best, ratio)
}

impl RatioReport {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        claim: &str,
        instance: Instance,
        options: EvalOptions,
        hypotheses: Vec<Hypothesis>,
        direction: Direction,
        aggregate: Aggregate,
        lhs_formula: &str,
        lhs: u128,
        rhs_terms: Vec<RhsTerm>,
        a_size: usize,
        q: u64,
    ) -> RatioReport {
        let (binding, ratio) = compute_ratio(direction, aggregate, lhs, &rhs_terms);
        let ratio = ratio.map(Ratio);
        RatioReport {
            schema: SCHEMA_VERSION.into(),
            version: TOOL_VERSION.into(),
            claim: claim.to_string(),
            instance,
            options,
            hypotheses,
            direction,
            aggregate,
            lhs_formula: lhs_formula.to_string(),
            lhs,
            binding,
            ratio_approx: ratio.as_ref().map(Ratio::to_f64),
            ratio,
            rhs_terms,
            log_factor: None,
            log_q: (a_size.max(1) as f64).ln() / (q as f64).ln(),
            extra: BTreeMap::new(),
        }
    }

    pub(crate) fn with_log(mut self, formula: &str, value: f64) -> Self {
        self.log_factor = Some(LogFactor { formula: formula.to_string(), value });
        self
    }

    pub(crate) fn note(mut self, key: &str, value: impl ToString) -> Self {
        self.extra.insert(key.to_string(), value.to_string());
        self
    }

    /// `satisfied`, `violated`, or `vacuous` over all hypotheses.
    pub fn hypothesis_summary(&self) -> &'static str {
        if self.hypotheses.iter().any(|h| h.state == HypothesisState::Violated) {
            "violated"
        } else if self.hypotheses.iter().any(|h| h.state == HypothesisState::Satisfied) {
            "satisfied"
        } else {
            "vacuous"
        }
    }

    pub fn binding_term(&self) -> Option<&RhsTerm> {
        self.rhs_terms.get(self.binding)
    }

    /// Recomputes every bracket and the ratio from the stored terms.
    pub fn replay_terms(&self) -> bool {
        let terms_ok = self.rhs_terms.iter().all(|t| {
            let (b, _) = bracket_sum(&t.parts);
            b == t.bracket
        });
        let (binding, ratio) = compute_ratio(self.direction, self.aggregate, self.lhs, &self.rhs_terms);
        terms_ok && binding == self.binding && ratio == self.ratio.as_ref().map(|r| r.0.clone())
    }

    /// Re-evaluates the claim on the embedded instance and compares the
    /// exact parts of the report.
    pub fn replay(&self) -> Result<bool> {
        let fresh = evaluate_theorem(&self.claim, &self.instance, &self.options)?;
        Ok(self.replay_terms()
            && fresh.lhs == self.lhs
            && fresh.rhs_terms == self.rhs_terms
            && fresh.ratio == self.ratio
            && fresh.binding == self.binding
            && fresh.hypotheses == self.hypotheses)
    }
}

/// Rebuilds a named input set from an instance.
pub fn instance_set(instance: &Instance, field: &Field, name: &str) -> Result<Option<FSet>> {
    instance
        .sets
        .iter()
        .find(|(n, _)| n == name)
        .map(|(_, d)| FSet::new(field, d.elems.iter().copied()))
        .transpose()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_directions_round_up() {
        let t = vec![
            RhsTerm::single(Monomial::single("x", 2, 1, 2)),
            RhsTerm::single(Monomial::single("y", 3, 1, 1)),
        ];
        let (i, r) = compute_ratio(Direction::Upper, Aggregate::Max, 6, &t);
        assert_eq!(i, 1);
        assert_eq!(r.unwrap(), BigRational::from_integer(2.into()));
        let (i, r) = compute_ratio(Direction::Lower, Aggregate::Min, 1, &t);
        assert_eq!(i, 0);
        // ceil of sqrt 2 at 2^-32 resolution sits just above the true value
        let r = r.unwrap();
        assert!(crate::bounds::rational_to_f64(&r) > 2f64.sqrt());
        assert!(crate::bounds::rational_to_f64(&r) < 2f64.sqrt() + 1e-9);
        assert_eq!(compute_ratio(Direction::Lower, Aggregate::Min, 0, &t).1, None);
    }

    #[test]
    fn summed_term_brackets_add() {
        let t = RhsTerm::new(vec![Monomial::single("a", 4, 1, 2), Monomial::single("b", 9, 1, 2)]);
        assert!(t.bracket.is_exact());
        assert_eq!(t.bracket.floor(), BigRational::from_integer(5.into()));
        assert_eq!(t.formula, "a^(1/2) + b^(1/2)");
    }

    #[test]
    fn coset_hypothesis_on_subfield_is_violated() {
        let f = Field::with_degree(2, 4).unwrap();
        let g = f.subfield(2).unwrap();
        let a = FSet::new(&f, g.elements.iter().copied()).unwrap();
        let thr = Monomial::single("|A|", a.len() as u64, 51, 52);
        let h = check_hypothesis("A", &a, &thr, CosetKind::Affine).unwrap();
        assert_eq!(h.state, HypothesisState::Violated);
        assert_eq!(h.achieved, Some(4));
        let p = Field::prime(101).unwrap();
        let b = FSet::new(&p, 1..10).unwrap();
        assert_eq!(check_hypothesis("A", &b, &thr, CosetKind::Affine).unwrap().state, HypothesisState::Vacuous);
    }
}
