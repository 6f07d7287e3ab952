//! The two conclusions of the sum-ratio lemma and the energy bound, as
//! ratio reports on one set.

use super::{evaluate_theorem, EvalOptions, RatioReport};
use crate::error::{Error, Result};
use crate::field::{max_linear_coset_intersection, SubfieldMax};
use crate::lemma::{instance_of, Ratio};
use crate::report::{Instance, SCHEMA_VERSION, TOOL_VERSION};
use crate::set::FSet;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// `|A ∩ cG| <= max{|G|^(1/2), eta |A|}` with constant 1, summarized by
/// the least admissible `eta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumRatioHypothesis {
    pub vacuous: bool,
    pub per_subfield: Vec<SubfieldMax>,
    /// Smallest eta for which the condition holds: the largest
    /// `count / |A|` over subfields with `count^2 > |G|`, or 0.
    pub eta_star: Ratio,
    /// Whether some eta < 1/8 is admissible.
    pub admissible: bool,
    pub eta_grid: Vec<(Ratio, bool)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AppendixReport {
    pub schema: String,
    pub version: String,
    pub instance: Instance,
    pub sizes: BTreeMap<String, usize>,
    pub hypothesis: SumRatioHypothesis,
    pub reports: Vec<RatioReport>,
}

const ETA_GRID: [(u64, u64); 5] = [(1, 9), (1, 10), (1, 12), (1, 16), (1, 32)];

fn sum_ratio_hypothesis(a: &FSet) -> Result<SumRatioHypothesis> {
    let n = a.len() as u64;
    let (vacuous, per_subfield) = if a.field().m() == 1 {
        (true, Vec::new())
    } else {
        (false, max_linear_coset_intersection(a)?)
    };
    let eta_star = per_subfield
        .iter()
        .filter(|s| s.count * s.count > s.order)
        .map(|s| BigRational::new(BigInt::from(s.count), BigInt::from(n)))
        .fold(BigRational::zero(), |m, r| if r > m { r } else { m });
    let eighth = BigRational::new(1.into(), 8.into());
    let eta_grid = ETA_GRID
        .iter()
        .map(|&(p, d)| {
            let eta = BigRational::new(p.into(), d.into());
            let ok = eta_star <= eta;
            (Ratio(eta), ok)
        })
        .collect();
    Ok(SumRatioHypothesis { vacuous, per_subfield, admissible: eta_star < eighth, eta_star: Ratio(eta_star), eta_grid })
}

/// Both disjuncts for `A + A` and `A - A`, the large-set branch when
/// `|A| > q^(1/2) / eta`, and the energy conclusion for both sets.
pub fn appendix_a_conclusion_report(a: &FSet, opts: &EvalOptions) -> Result<AppendixReport> {
    if a.contains_zero() {
        return Err(Error::ZeroInSet);
    }
    if a.len() < 2 {
        return Err(Error::InvalidParams("needs |A| >= 2".into()));
    }
    let instance = instance_of(a.field(), &[("A", a)]);
    let mut reports = Vec::new();
    for id in [
        "sum-ratio-first-sum",
        "sum-ratio-second-sum",
        "sum-ratio-first-difference",
        "sum-ratio-second-difference",
    ] {
        reports.push(evaluate_theorem(id, &instance, opts)?);
    }
    for id in ["sum-ratio-large-sum", "sum-ratio-large-difference"] {
        let r = evaluate_theorem(id, &instance, opts)?;
        if r.extra.get("branch_applies").is_some_and(|v| v == "true") {
            reports.push(r);
        }
    }
    for id in ["energy-sumset", "energy-difference"] {
        reports.push(evaluate_theorem(id, &instance, opts)?);
    }
    let mut sizes = BTreeMap::new();
    sizes.insert("|A|".to_string(), a.len());
    sizes.insert("|A+A|".to_string(), a.sumset(a)?.len());
    sizes.insert("|A-A|".to_string(), a.difference_set(a)?.len());
    sizes.insert("|A/A|".to_string(), a.ratio_set(a)?.len());
    Ok(AppendixReport {
        schema: SCHEMA_VERSION.into(),
        version: TOOL_VERSION.into(),
        instance,
        sizes,
        hypothesis: sum_ratio_hypothesis(a)?,
        reports,
    })
}
