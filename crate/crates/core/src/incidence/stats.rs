//! One-shot statistics for a pair of sets, serialized as a report.
//!
//! Incidence statistics use the grid `P = A × B`; `I` and `I_k` are taken
//! against the Cartesian line family `{y = cx + d : c in A, d in B}`, which
//! for `A = B = G` a subfield is the sharpness configuration.

use super::star::star_totals;
use super::triples::{additive_energy, collinear_triples, degenerate_triples, multiplicative_energy, TripleMode};
use super::{cartesian_lines, line_counts, power_sum, PointSet};
use crate::error::{Error, Result};
use crate::report::{Instance, SCHEMA_VERSION, TOOL_VERSION};
use crate::set::FSet;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::str::FromStr;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StatKind {
    I,
    I2,
    I3,
    I4,
    LP,
    T,
    TStar,
    EPlus,
    ETimes,
}

impl StatKind {
    pub const ALL: [StatKind; 9] = [
        StatKind::I,
        StatKind::I2,
        StatKind::I3,
        StatKind::I4,
        StatKind::LP,
        StatKind::T,
        StatKind::TStar,
        StatKind::EPlus,
        StatKind::ETimes,
    ];

    pub fn key(self) -> &'static str {
        match self {
            StatKind::I => "I",
            StatKind::I2 => "I_2",
            StatKind::I3 => "I_3",
            StatKind::I4 => "I_4",
            StatKind::LP => "L(P)",
            StatKind::T => "T",
            StatKind::TStar => "T*",
            StatKind::EPlus => "E+",
            StatKind::ETimes => "Ex",
        }
    }

    pub fn parse_list(s: &str) -> Result<Vec<StatKind>> {
        let mut v: Vec<StatKind> = s.split(',').map(|t| t.trim().parse()).collect::<Result<_>>()?;
        v.sort();
        v.dedup();
        Ok(v)
    }
}

impl FromStr for StatKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "I" | "I1" | "I_1" => StatKind::I,
            "I2" | "I_2" => StatKind::I2,
            "I3" | "I_3" => StatKind::I3,
            "I4" | "I_4" => StatKind::I4,
            "L" | "LP" | "L(P)" => StatKind::LP,
            "T" => StatKind::T,
            "T*" | "Tstar" | "T_star" => StatKind::TStar,
            "E+" | "Eplus" | "E_plus" => StatKind::EPlus,
            "Ex" | "E*" | "Etimes" | "E_times" => StatKind::ETimes,
            other => return Err(Error::Parse(format!("unknown statistic `{other}`"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatReport {
    pub schema: String,
    pub version: String,
    pub instance: Instance,
    /// Exact values as decimal strings.
    pub stats: BTreeMap<String, String>,
    pub algorithm: BTreeMap<String, String>,
    pub flags: Vec<String>,
    pub timings_ms: BTreeMap<String, f64>,
}

impl StatReport {
    pub fn get(&self, kind: StatKind) -> Option<u128> {
        self.stats.get(kind.key()).and_then(|s| s.parse().ok())
    }

    pub fn csv_header(kinds: &[StatKind]) -> Vec<String> {
        let mut h = vec!["instance".to_string(), "seed".to_string()];
        h.extend(kinds.iter().map(|k| k.key().to_string()));
        h
    }

    pub fn csv_row(&self, kinds: &[StatKind]) -> Vec<String> {
        let mut r = vec![self.instance.label(), self.instance.seed.map(|s| s.to_string()).unwrap_or_default()];
        r.extend(kinds.iter().map(|k| self.stats.get(k.key()).cloned().unwrap_or_default()));
        r
    }
}

/// Computes the requested statistics for `(A, B)`. `mode` selects the
/// triple counter.
pub fn compute_stats(instance: Instance, a: &FSet, b: &FSet, kinds: &[StatKind], mode: TripleMode) -> Result<StatReport> {
    let mut stats = BTreeMap::new();
    let mut timings = BTreeMap::new();
    let mut algorithm = BTreeMap::new();
    let mut flags = Vec::new();
    if a.contains_zero() {
        flags.push("zero_in_A".to_string());
    }
    if b.contains_zero() {
        flags.push("zero_in_B".to_string());
    }
    let grid = PointSet::cartesian(a, b)?;
    let wants = |k: StatKind| kinds.contains(&k);

    if [StatKind::I, StatKind::I2, StatKind::I3, StatKind::I4].iter().any(|&k| wants(k)) {
        let t0 = Instant::now();
        let counts = line_counts(&grid, &cartesian_lines(a, b))?;
        for (j, k) in [StatKind::I, StatKind::I2, StatKind::I3, StatKind::I4].into_iter().enumerate() {
            if wants(k) {
                stats.insert(k.key().to_string(), power_sum(counts.iter().copied(), j as u32 + 1)?.to_string());
            }
        }
        timings.insert("incidences".into(), t0.elapsed().as_secs_f64() * 1e3);
        algorithm.insert("incidences".into(), "cartesian_lines_membership".into());
    }
    let need_t = wants(StatKind::T) || wants(StatKind::TStar);
    if wants(StatKind::LP) || (need_t && mode == TripleMode::LineAggregate) {
        let t0 = Instant::now();
        let totals = star_totals(&grid)?;
        if wants(StatKind::LP) {
            stats.insert(StatKind::LP.key().into(), totals.lines.to_string());
        }
        if need_t && mode == TripleMode::LineAggregate {
            let t = totals.collinear_triples()?;
            insert_triples(&mut stats, kinds, t, a, b)?;
        }
        timings.insert("line_stars".into(), t0.elapsed().as_secs_f64() * 1e3);
        algorithm.insert("lines".into(), "point_stars".into());
    }
    if need_t && mode != TripleMode::LineAggregate {
        let t0 = Instant::now();
        let t = collinear_triples(a, b, mode)?;
        insert_triples(&mut stats, kinds, t, a, b)?;
        timings.insert("triples".into(), t0.elapsed().as_secs_f64() * 1e3);
    }
    if need_t {
        algorithm.insert("triples".into(), serde_json::to_value(mode)?.as_str().unwrap_or_default().to_string());
    }
    if wants(StatKind::EPlus) {
        let t0 = Instant::now();
        stats.insert(StatKind::EPlus.key().into(), additive_energy(a, b)?.to_string());
        timings.insert("E+".into(), t0.elapsed().as_secs_f64() * 1e3);
    }
    if wants(StatKind::ETimes) {
        let t0 = Instant::now();
        stats.insert(StatKind::ETimes.key().into(), multiplicative_energy(a, b)?.to_string());
        timings.insert("Ex".into(), t0.elapsed().as_secs_f64() * 1e3);
    }
    if wants(StatKind::ETimes) || wants(StatKind::EPlus) {
        algorithm.insert("energy".into(), "representation_function".into());
    }
    Ok(StatReport {
        schema: SCHEMA_VERSION.into(),
        version: TOOL_VERSION.into(),
        instance,
        stats,
        algorithm,
        flags,
        timings_ms: timings,
    })
}

fn insert_triples(stats: &mut BTreeMap<String, String>, kinds: &[StatKind], t: u128, a: &FSet, b: &FSet) -> Result<()> {
    if kinds.contains(&StatKind::T) {
        stats.insert(StatKind::T.key().into(), t.to_string());
    }
    if kinds.contains(&StatKind::TStar) {
        let z = degenerate_triples(a.len() as u64, b.len() as u64);
        stats.insert(StatKind::TStar.key().into(), t.checked_sub(z).ok_or(Error::Overflow)?.to_string());
    }
    Ok(())
}
