//! Constructive versions of the lemma toolkit.
//!
//! Every operation has a plain search function and a `*_trace` form. A
//! trace stores the inputs, the witnesses found, and the guarantees they
//! certify; [`LemmaTrace::replay`] recomputes those guarantees from the
//! witnesses alone, using the same evaluation the search used.

mod basic;
mod bsg;
mod chain;
mod quotient;
mod reciprocal;
mod trace;
mod util;

pub use basic::{
    harmonic, plunnecke_check, plunnecke_refined_search, plunnecke_refined_trace, plunnecke_trace, popularity_split,
    popularity_trace, shen_cover, shen_cover_trace, CoverKind, PopularitySplit, RefinedPlunnecke, ShenCover,
    REFINED_EXHAUSTIVE_MAX,
};
pub use bsg::{bsg_extract, bsg_extract_with, bsg_search, BsgForm, BsgWitness, SearchMode, BSG_EXHAUSTIVE_MAX};
pub use chain::{trace_claim1_chain, CHAIN_MAX, CHAIN_MIN};
pub use quotient::{
    bourgain_intersection_search, bourgain_trace, closure_iteration, generated_subfield_degree, pivot_search, pivot_trace,
    quotient_classify_trace, quotient_closure_classify, BourgainIntersection, Pivot, QuotientCase,
    QuotientClassification,
};
pub use reciprocal::{reciprocal_energy_lines, reciprocal_trace, ReciprocalLines};
pub use trace::{power_product, Direction, Guarantee, LemmaTrace, PassState, Ratio, Replay, Witness};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::report::Instance;
use crate::set::FSet;
use num_bigint::BigInt;
use num_rational::BigRational;

/// Lemma ids accepted by [`LemmaTrace`] replay.
pub const LEMMA_IDS: [&str; 10] = [
    "popularity",
    "shen_cover",
    "plunnecke",
    "plunnecke_refined",
    "bsg",
    "bourgain",
    "quotient_classify",
    "pivot",
    "reciprocal_energy_lines",
    "claim1_chain",
];

pub(crate) fn evaluate_trace(t: &LemmaTrace) -> Result<Vec<Guarantee>> {
    match t.lemma.as_str() {
        "popularity" => basic::evaluate_popularity(t),
        "shen_cover" => basic::evaluate_shen(t),
        "plunnecke" => basic::evaluate_plunnecke(t),
        "plunnecke_refined" => basic::evaluate_refined(t),
        "bsg" => bsg::evaluate(t),
        "bourgain" => quotient::evaluate_bourgain(t),
        "quotient_classify" => quotient::evaluate_classify(t),
        "pivot" => quotient::evaluate_pivot(t),
        "reciprocal_energy_lines" => reciprocal::evaluate(t),
        "claim1_chain" => chain::evaluate(t),
        other => Err(Error::UnknownLemma(other.to_string())),
    }
}

pub(crate) fn instance_of(f: &Field, sets: &[(&str, &FSet)]) -> Instance {
    sets.iter().fold(Instance::new(f.spec(), None), |inst, (name, s)| inst.with_set(name, "input", s))
}

pub(crate) fn rational(num: u128, den: u128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den.max(1)))
}

/// Parses `a/b`, an integer, or a decimal such as `0.125`.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((i, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let n: BigInt = format!("{i}{frac}").parse().map_err(|_| bad())?;
        return Ok(BigRational::new(n, BigInt::from(10u32).pow(frac.len() as u32)));
    }
    Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?))
}

pub(crate) fn ratio_param(t: &LemmaTrace, name: &str) -> Result<BigRational> {
    parse_ratio(t.params.get(name).ok_or_else(|| Error::Parse(format!("trace has no parameter `{name}`")))?)
}
