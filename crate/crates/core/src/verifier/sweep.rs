//! Parameter sweeps and randomized extremal search over set families.

use super::{evaluate_theorem, EvalOptions, RatioReport, CLAIM_IDS};
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::lemma::Ratio;
use crate::report::{Instance, SCHEMA_VERSION, TOOL_VERSION};
use crate::set::{Family, FamilyKind, FSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub claim: String,
    /// Family descriptor for A; its size parameter is taken from `sizes`.
    pub family: String,
    pub sizes: Vec<u64>,
    /// Field orders.
    pub fields: Vec<u64>,
    /// Fixed descriptor for B; `None` means B = A.
    #[serde(default)]
    pub b_family: Option<String>,
    pub seed: u64,
    #[serde(default)]
    pub options: EvalOptions,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub index: usize,
    pub q: u64,
    pub size: u64,
    pub family: String,
    pub seed: u64,
    pub error: Option<String>,
    pub report: Option<RatioReport>,
}

impl SweepRow {
    pub fn ratio(&self) -> Option<&Ratio> {
        self.report.as_ref().and_then(|r| r.ratio.as_ref())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub rows: usize,
    pub errors: usize,
    pub max_ratio: Option<Ratio>,
    pub max_ratio_approx: Option<f64>,
    pub argmax: Option<usize>,
    pub argmax_family: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub schema: String,
    pub version: String,
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
    pub summary: SweepSummary,
}

/// Decorrelates per-instance seeds (splitmix64 finalizer).
pub(crate) fn stream_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Parses `desc` and sets its size parameter to `size`; a descriptor that
/// omits the size (`interval`, `random`) is accepted.
pub fn sized_family(desc: &str, size: u64, seed: u64) -> Result<Family> {
    let kind: FamilyKind = desc.split(':').next().unwrap_or("").trim().parse()?;
    let key = if kind == FamilyKind::MultiplicativeSubgroup { "order" } else { "n" };
    let has_size = desc.split([':', ',']).any(|kv| kv.trim().starts_with(&format!("{key}=")));
    let full = if has_size || matches!(kind, FamilyKind::Union | FamilyKind::SubfieldCoset) {
        desc.to_string()
    } else if desc.contains(':') {
        format!("{desc},{key}={size}")
    } else {
        format!("{desc}:{key}={size}")
    };
    Family::parse(&full, seed)?.with_size(size)
}

fn eval_row(spec: &SweepSpec, field: &Field, index: usize, size: u64) -> SweepRow {
    let seed = stream_seed(spec.seed, index as u64);
    let mut row = SweepRow { index, q: field.q(), size, family: String::new(), seed, error: None, report: None };
    let run = |row: &mut SweepRow| -> Result<RatioReport> {
        let fam = sized_family(&spec.family, size, seed)?;
        row.family = fam.to_string();
        let a = fam.generate(field)?;
        let mut inst = Instance::new(field.spec(), Some(seed)).with_set("A", &row.family, &a);
        if let Some(bd) = &spec.b_family {
            let bf = Family::parse(bd, stream_seed(seed, 1))?;
            inst = inst.with_set("B", &bf.to_string(), &bf.generate(field)?);
        }
        evaluate_theorem(&spec.claim, &inst, &spec.options)
    };
    match run(&mut row) {
        Ok(r) => row.report = Some(r),
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Expands `fields x sizes` in that order, evaluates each instance in
/// parallel, and keeps per-instance errors in their rows.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    if spec.sizes.is_empty() || spec.fields.is_empty() {
        return Err(Error::InvalidParams("empty sweep grid".into()));
    }
    if !CLAIM_IDS.contains(&spec.claim.as_str()) {
        return Err(Error::UnknownClaim(spec.claim.clone()));
    }
    let fields: Vec<Field> = spec.fields.iter().map(|&q| Field::new(FieldSpec::from_order(q)?)).collect::<Result<_>>()?;
    let grid: Vec<(usize, u64)> = (0..fields.len()).flat_map(|i| spec.sizes.iter().map(move |&s| (i, s))).collect();
    let rows: Vec<SweepRow> =
        grid.par_iter().enumerate().map(|(index, &(fi, size))| eval_row(spec, &fields[fi], index, size)).collect();
    let mut best: Option<(usize, &Ratio)> = None;
    for r in &rows {
        if let Some(x) = r.ratio() {
            if best.map_or(true, |(_, b)| x.0 > b.0) {
                best = Some((r.index, x));
            }
        }
    }
    let summary = SweepSummary {
        rows: rows.len(),
        errors: rows.iter().filter(|r| r.error.is_some()).count(),
        max_ratio: best.map(|(_, r)| r.clone()),
        max_ratio_approx: best.map(|(_, r)| r.to_f64()),
        argmax: best.map(|(i, _)| i),
        argmax_family: best.map(|(i, _)| rows[i].family.clone()),
    };
    let result =
        SweepResult { schema: SCHEMA_VERSION.into(), version: TOOL_VERSION.into(), spec: spec.clone(), rows, summary };
    if let Some(path) = &spec.output {
        result.write(path)?;
    }
    Ok(result)
}

impl SweepResult {
    pub const CSV_HEADER: [&'static str; 13] = [
        "index",
        "q",
        "size",
        "family",
        "seed",
        "status",
        "hypothesis",
        "lhs",
        "binding_term",
        "ratio",
        "ratio_approx",
        "log_factor",
        "error",
    ];

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(Self::CSV_HEADER).map_err(io)?;
        for r in &self.rows {
            let rep = r.report.as_ref();
            w.write_record([
                r.index.to_string(),
                r.q.to_string(),
                r.size.to_string(),
                r.family.clone(),
                r.seed.to_string(),
                if r.error.is_some() { "error".into() } else { "ok".into() },
                rep.map_or(String::new(), |x| x.hypothesis_summary().to_string()),
                rep.map_or(String::new(), |x| x.lhs.to_string()),
                rep.and_then(|x| x.binding_term()).map_or(String::new(), |t| t.formula.clone()),
                r.ratio().map_or(String::new(), |x| x.0.to_string()),
                r.ratio().map_or(String::new(), |x| format!("{:.6}", x.to_f64())),
                rep.and_then(|x| x.log_factor.as_ref()).map_or(String::new(), |l| format!("{:.6}", l.value)),
                r.error.clone().unwrap_or_default(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    /// CSV for a `.csv` path, JSON otherwise.
    pub fn write(&self, path: &Path) -> Result<()> {
        let text = if path.extension().is_some_and(|e| e == "csv") {
            self.to_csv()?
        } else {
            serde_json::to_string_pretty(self)? + "\n"
        };
        std::fs::write(path, text)?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extremal {
    pub family: String,
    pub report: RatioReport,
    pub evaluations: usize,
    pub improvements: usize,
}

const RANDOM_KINDS: [FamilyKind; 6] = [
    FamilyKind::SubfieldCoset,
    FamilyKind::Interval,
    FamilyKind::ArithmeticProgression,
    FamilyKind::Geometric,
    FamilyKind::MultiplicativeSubgroup,
    FamilyKind::RandomUniform,
];

fn random_family(kind: FamilyKind, f: &Field, rng: &mut ChaCha8Rng, max: u64) -> Family {
    let q = f.q();
    let n = rng.gen_range(2..=max);
    let nz = |rng: &mut ChaCha8Rng| rng.gen_range(1..q) as u32;
    match kind {
        FamilyKind::SubfieldCoset => {
            let degs = f.subfield_degrees();
            Family::SubfieldCoset { degree: degs[rng.gen_range(0..degs.len())], c: nz(rng), d: rng.gen_range(0..q) as u32 }
        }
        FamilyKind::Interval => Family::Interval { start: rng.gen_range(0..=q - n) as u32, n },
        FamilyKind::ArithmeticProgression => Family::ArithmeticProgression { start: nz(rng), step: nz(rng), n },
        FamilyKind::Geometric => Family::Geometric { start: nz(rng), ratio: nz(rng), n },
        FamilyKind::MultiplicativeSubgroup => {
            let divs: Vec<u64> = (2..=max.min(q - 1)).filter(|d| (q - 1) % d == 0).collect();
            let order = if divs.is_empty() { q - 1 } else { divs[rng.gen_range(0..divs.len())] };
            Family::MultiplicativeSubgroup { order, coset: nz(rng) }
        }
        _ => Family::RandomUniform { n, seed: rng.gen(), nonzero: rng.gen() },
    }
}

fn bump(x: u64, rng: &mut ChaCha8Rng, lo: u64, hi: u64) -> u64 {
    let step = rng.gen_range(1..=3);
    let v = if rng.gen() { x.saturating_add(step) } else { x.saturating_sub(step) };
    v.clamp(lo, hi)
}

fn mutate(fam: &Family, f: &Field, rng: &mut ChaCha8Rng, max: u64, mixed: bool) -> Family {
    if mixed && rng.gen_ratio(1, 4) {
        let k = RANDOM_KINDS[rng.gen_range(0..RANDOM_KINDS.len())];
        return random_family(k, f, rng, max);
    }
    let q = f.q();
    let nz = |rng: &mut ChaCha8Rng| rng.gen_range(1..q) as u32;
    match fam.clone() {
        Family::Interval { start, n } => {
            if rng.gen() {
                let n = bump(n, rng, 2, max);
                Family::Interval { start: start.min((q - n) as u32), n }
            } else {
                Family::Interval { start: rng.gen_range(0..=q - n) as u32, n }
            }
        }
        Family::ArithmeticProgression { start, step, n } => match rng.gen_range(0..3) {
            0 => Family::ArithmeticProgression { start, step, n: bump(n, rng, 2, max) },
            1 => Family::ArithmeticProgression { start, step: nz(rng), n },
            _ => Family::ArithmeticProgression { start: nz(rng), step, n },
        },
        Family::Geometric { start, ratio, n } => match rng.gen_range(0..3) {
            0 => Family::Geometric { start, ratio, n: bump(n, rng, 2, max) },
            1 => Family::Geometric { start, ratio: nz(rng), n },
            _ => Family::Geometric { start: nz(rng), ratio, n },
        },
        Family::RandomUniform { n, nonzero, .. } => {
            Family::RandomUniform { n: if rng.gen() { bump(n, rng, 2, max) } else { n }, seed: rng.gen(), nonzero }
        }
        Family::SubfieldCoset { degree, c, d } => match rng.gen_range(0..3) {
            0 => random_family(FamilyKind::SubfieldCoset, f, rng, max),
            1 => Family::SubfieldCoset { degree, c: nz(rng), d },
            _ => Family::SubfieldCoset { degree, c, d: rng.gen_range(0..q) as u32 },
        },
        other => random_family(other.kind(), f, rng, max),
    }
}

/// Seeded hill climb maximizing the claim's ratio on `A = B` drawn from
/// `kind` (`None` mixes all kinds). Each evaluation costs one unit of
/// `budget`; sizes stay in `2..=max_size`.
pub fn extremal_search(
    claim: &str,
    kind: Option<FamilyKind>,
    field: &Field,
    budget: usize,
    max_size: u64,
    seed: u64,
    opts: &EvalOptions,
) -> Result<Option<Extremal>> {
    if !CLAIM_IDS.contains(&claim) {
        return Err(Error::UnknownClaim(claim.to_string()));
    }
    if kind == Some(FamilyKind::Union) {
        return Err(Error::InvalidParams("extremal search does not mutate unions".into()));
    }
    let max = max_size.clamp(2, field.q());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick_kind = |rng: &mut ChaCha8Rng| kind.unwrap_or_else(|| RANDOM_KINDS[rng.gen_range(0..RANDOM_KINDS.len())]);
    let eval = |fam: &Family| -> Option<RatioReport> {
        let a: FSet = fam.generate(field).ok()?;
        let inst = Instance::new(field.spec(), Some(seed)).with_set("A", &fam.to_string(), &a);
        evaluate_theorem(claim, &inst, opts).ok().filter(|r| r.ratio.is_some())
    };
    let mut best: Option<(Family, RatioReport)> = None;
    let mut current: Option<(Family, Ratio)> = None;
    let mut stale = 0;
    let mut improvements = 0;
    for _ in 0..budget {
        let cand = match &current {
            Some((fam, _)) if stale < 20 => mutate(fam, field, &mut rng, max, kind.is_none()),
            _ => {
                stale = 0;
                let k = pick_kind(&mut rng);
                random_family(k, field, &mut rng, max)
            }
        };
        let Some(rep) = eval(&cand) else {
            stale += 1;
            continue;
        };
        let r = rep.ratio.clone().expect("filtered");
        if current.as_ref().map_or(true, |(_, c)| r.0 >= c.0) {
            current = Some((cand.clone(), r.clone()));
        } else {
            stale += 1;
        }
        if best.as_ref().map_or(true, |(_, b)| r.0 > b.ratio.as_ref().expect("filtered").0) {
            best = Some((cand, rep));
            improvements += 1;
            stale = 0;
        }
    }
    Ok(best.map(|(fam, report)| Extremal { family: fam.to_string(), report, evaluations: budget, improvements }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn spec(claim: &str, family: &str, sizes: Vec<u64>, fields: Vec<u64>) -> SweepSpec {
        SweepSpec {
            claim: claim.into(),
            family: family.into(),
            sizes,
            fields,
            b_family: None,
            seed: 7,
            options: EvalOptions::default(),
            output: None,
        }
    }

    #[test]
    fn sized_descriptors() {
        assert_eq!(sized_family("interval", 5, 0).unwrap().to_string(), "interval:start=1,n=5");
        assert_eq!(sized_family("interval:start=3", 4, 0).unwrap().to_string(), "interval:start=3,n=4");
        assert_eq!(sized_family("interval:n=9", 4, 0).unwrap().to_string(), "interval:start=1,n=4");
        assert_eq!(sized_family("subgroup", 6, 0).unwrap().to_string(), "multiplicative_subgroup:order=6,coset=1");
        assert!(sized_family("random", 6, 11).unwrap().to_string().starts_with("random_uniform:n=6,seed=11"));
        assert!(sized_family("coset:degree=1", 3, 0).is_err());
    }

    #[test]
    fn sweep_rows_follow_grid_order() {
        let s = run_sweep(&spec("T2-triples", "interval", (5..=12).collect(), vec![101, 64])).unwrap();
        assert_eq!(s.rows.len(), 16);
        assert!(s.rows.iter().enumerate().all(|(i, r)| r.index == i));
        assert_eq!((s.rows[0].q, s.rows[8].q), (101, 64));
        assert_eq!(s.summary.errors, 0);
        let max = s.rows.iter().filter_map(|r| r.ratio()).map(|r| r.0.clone()).max().unwrap();
        assert_eq!(s.summary.max_ratio.clone().unwrap().0, max);
        let csv = s.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 17);
    }

    #[test]
    fn errors_are_collected_not_fatal() {
        let s = run_sweep(&spec("T2-triples", "subgroup", vec![4, 5, 6], vec![13])).unwrap();
        assert_eq!(s.summary.errors, 1);
        assert!(s.rows[1].error.is_some());
    }

    #[test]
    fn empty_grid_and_unknown_claim() {
        assert!(matches!(run_sweep(&spec("T2-triples", "interval", vec![], vec![101])), Err(Error::InvalidParams(_))));
        assert!(matches!(run_sweep(&spec("nope", "interval", vec![5], vec![101])), Err(Error::UnknownClaim(_))));
    }

    #[test]
    fn vinh_sweep_passes_exactly() {
        let mut s = spec("vinh", "subfield_coset:degree=1", vec![1], vec![]);
        s.family = "random".into();
        s.fields = vec![16, 25, 49];
        s.sizes = vec![4, 5, 7];
        let r = run_sweep(&s).unwrap();
        for row in r.rows.iter().filter_map(|r| r.report.as_ref()) {
            assert!(row.ratio.as_ref().map_or(true, |x| x.0 <= BigRational::from_integer(1.into())));
        }
    }

    #[test]
    fn deterministic_output() {
        let s = spec("C5-hyperbola", "random", vec![6, 9], vec![64]);
        let a = serde_json::to_string(&run_sweep(&s).unwrap()).unwrap();
        let b = serde_json::to_string(&run_sweep(&s).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn extremal_trivial_incidence_stays_below_one() {
        let f = Field::with_degree(2, 4).unwrap();
        let opts = EvalOptions::default();
        assert!(extremal_search("trivial-incidence", None, &f, 0, 16, 1, &opts).unwrap().is_none());
        let e = extremal_search("trivial-incidence", None, &f, 150, 16, 1, &opts).unwrap().unwrap();
        assert!(e.report.ratio.unwrap().0 <= BigRational::from_integer(1.into()));
        let v = extremal_search("vinh", None, &f, 60, 16, 2, &opts).unwrap().unwrap();
        assert!(v.report.ratio.unwrap().0 <= BigRational::from_integer(1.into()));
    }
}
