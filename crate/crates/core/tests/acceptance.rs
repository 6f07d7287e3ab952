//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Exits nonzero when a criterion fails that is not listed as
//! unattainable. `FQLAB_BLESS=1` rewrites the golden sweep maxima.

use fqlab::incidence::{
    cartesian_lines, collinear_triples, collinear_triples_energy_plus, energy_oracle, incidences, incidences_oracle,
    multiplicative_energy, nontrivial_collinear_triples, PointSet, TripleMode,
};
use fqlab::lemma::{
    bourgain_trace, bsg_search, popularity_trace, shen_cover_trace, trace_claim1_chain, BsgForm, CoverKind, SearchMode,
    CHAIN_MAX, CHAIN_MIN,
};
use fqlab::set::rep_function;
use fqlab::verifier::{quotient_full_check, run_law_suite, run_sweep, EvalOptions, SweepSpec, LAW_IDS};
use fqlab::{Error, FSet, Field, OpKind, PairGraph};
use num_rational::BigRational;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

struct Outcome {
    pass: bool,
    /// Fails for a reason recorded in the README; does not gate.
    unattainable: bool,
    detail: String,
}

fn ok(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, unattainable: false, detail: detail.into() }
}

fn random_set(rng: &mut ChaCha8Rng, f: &Field, n: usize) -> FSet {
    let q = f.q() as usize;
    FSet::new(f, sample(rng, q, n.min(q)).into_iter().map(|i| i as u32)).unwrap()
}

fn subfield(f: &Field, d: u32) -> FSet {
    FSet::new(f, f.subfield(d).unwrap().elements).unwrap()
}

fn exact_law_suite() -> Outcome {
    let t0 = Instant::now();
    let fields: Vec<Field> = [101, 64, 27].iter().map(|&q| Field::of_order(q).unwrap()).collect();
    let suite = run_law_suite(&fields, 100, 20240601).unwrap();
    let gated: u64 = suite.laws.iter().filter(|l| !l.informational).map(|l| l.violations).sum();
    let thin: Vec<&str> =
        suite.laws.iter().filter(|l| l.evaluated < 300).map(|l| l.law.as_str()).collect();
    let mut qf = vec![quotient_full_check(&Field::of_order(4).unwrap(), None, 1).unwrap()];
    for q in [9, 16, 25, 27] {
        qf.push(quotient_full_check(&Field::of_order(q).unwrap(), Some(1000), q).unwrap());
    }
    let qbad: u64 = qf.iter().map(|r| r.1).sum();
    let secs = t0.elapsed().as_secs_f64();
    ok(
        gated == 0 && qbad == 0 && thin.is_empty() && secs < 300.0,
        format!(
            "{} laws x 100 trials x 3 fields, {gated} violations; quotient-full {} sets, {qbad} violations; {secs:.1}s{}",
            LAW_IDS.len(),
            qf.iter().map(|r| r.0).sum::<u64>(),
            if thin.is_empty() { String::new() } else { format!("; under-sampled {thin:?}") }
        ),
    )
}

fn sharpness() -> Outcome {
    let mut incid = true;
    let mut sharp = true;
    let mut t_exact = true;
    let mut notes = Vec::new();
    for (q, d) in [(4, 1), (9, 1), (16, 1), (16, 2), (25, 1), (27, 1)] {
        let f = Field::of_order(q).unwrap();
        let g = subfield(&f, d);
        let n = g.len() as u128;
        let i = incidences(&PointSet::cartesian(&g, &g).unwrap(), &cartesian_lines(&g, &g)).unwrap();
        let t = collinear_triples(&g, &g, TripleMode::LineAggregate).unwrap();
        let ts = nontrivial_collinear_triples(&g, &g, TripleMode::LineAggregate).unwrap();
        incid &= i == n.pow(3);
        sharp &= ts == n * n * (n - 1).pow(3);
        t_exact &= t == n.pow(5);
        notes.push(format!("(q={q},|G|={n}): T={t} vs |G|^5={}", n.pow(5)));
        assert_eq!(t, n.pow(5) + n.pow(4) - n.pow(3));
    }
    let pass = incid && sharp && t_exact;
    Outcome {
        pass,
        unattainable: !pass && incid && sharp,
        detail: format!(
            "I = |G|^3 {}; sharp T* equality {}; T(G) = |G|^5 {} (exact value |G|^5 + |G|^4 - |G|^3) {}",
            yes(incid),
            yes(sharp),
            yes(t_exact),
            notes.join(", ")
        ),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}

const ORACLE_FIELDS: [u64; 10] = [5, 7, 8, 9, 16, 25, 27, 31, 49, 64];

fn oracle_equivalence() -> Outcome {
    let bad: Vec<u64> = (0..200u64)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = ChaCha8Rng::seed_from_u64(7000 + i);
            let f = Field::of_order(ORACLE_FIELDS[i as usize % ORACLE_FIELDS.len()]).unwrap();
            let (na, nb) = (rng.gen_range(1..=12), rng.gen_range(1..=12));
            let a = random_set(&mut rng, &f, na);
            let b = random_set(&mut rng, &f, nb);
            let t = [TripleMode::Oracle, TripleMode::LineAggregate, TripleMode::EnergyDecomposition]
                .map(|m| collinear_triples(&a, &b, m).unwrap());
            let (nc, nd) = (rng.gen_range(1..=12), rng.gen_range(1..=12));
            let lines = cartesian_lines(&random_set(&mut rng, &f, nc), &random_set(&mut rng, &f, nd));
            let p = PointSet::cartesian(&a, &b).unwrap();
            let same_i = incidences(&p, &lines).unwrap() == incidences_oracle(&p, &lines).unwrap();
            let same_e = [OpKind::Sum, OpKind::Product].iter().all(|&k| {
                rep_function(&a, &b, k).unwrap().sum_squares() == energy_oracle(&a, &b, k).unwrap()
            });
            !(t[0] == t[1] && t[1] == t[2] && same_i && same_e)
        })
        .collect();
    ok(bad.is_empty(), format!("200 instances, q <= 64, |A|,|B| <= 12; mismatches at {bad:?}"))
}

fn energy_identity() -> Outcome {
    let mut minus_ok = 0;
    let mut plus_differs = 0;
    for i in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(9000 + i);
        let f = Field::of_order([13, 16, 27, 49, 101][i as usize % 5]).unwrap();
        let n = rng.gen_range(2..=10);
        let a = random_set(&mut rng, &f, n);
        let t = collinear_triples(&a, &a, TripleMode::Oracle).unwrap();
        let shifted = |s: u32| FSet::new(&f, a.iter().map(|x| f.add(x, s))).unwrap();
        let mut minus = 0;
        for x in a.iter() {
            for y in a.iter() {
                minus += multiplicative_energy(&shifted(f.neg(x)), &shifted(f.neg(y))).unwrap();
            }
        }
        minus_ok += (minus == t) as u32;
        plus_differs += (collinear_triples_energy_plus(&a, &a).unwrap() != t) as u32;
    }
    ok(
        minus_ok == 50,
        format!("T(A) = sum E_x(A - a, A - b) on {minus_ok}/50; plus-sign form differs on {plus_differs}/50"),
    )
}

const HEADLINE: [&str; 17] = [
    "T1-triples",
    "T1-incidence",
    "T1-lines",
    "T2-triples",
    "T2-incidence",
    "T2-lines",
    "T3-sumset-triples",
    "T3-difference-triples",
    "C3a-triples",
    "C3a-incidence",
    "C3a-lines",
    "C4-ER",
    "C4-SR",
    "C4-expander",
    "C5-hyperbola",
    "C6-SRI-sum",
    "C6-SRI-difference",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Golden {
    max_ratio: String,
    argmax: String,
}

fn sweep_sizes(family: &str, q: u64) -> Vec<u64> {
    (5..=40).filter(|&n| family != "subgroup" || (q - 1) % n == 0).collect()
}

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/sweep_maxima.json")
}

fn headline_sweeps() -> Outcome {
    let t0 = Instant::now();
    let mut maxima = BTreeMap::new();
    let mut rows = 0;
    let mut errors = BTreeMap::<String, usize>::new();
    let mut unreplayed = Vec::new();
    let mut infinite = Vec::new();
    for claim in HEADLINE {
        for family in ["interval", "subgroup", "random"] {
            for q in [1009, 256] {
                let spec = SweepSpec {
                    claim: claim.into(),
                    family: family.into(),
                    sizes: sweep_sizes(family, q),
                    fields: vec![q],
                    b_family: None,
                    seed: 5,
                    options: EvalOptions::default(),
                    output: None,
                };
                let key = format!("{claim}/{family}/{q}");
                let res = run_sweep(&spec).unwrap();
                rows += res.rows.len();
                for r in &res.rows {
                    match (&r.report, &r.error) {
                        (Some(rep), _) => {
                            if !(rep.replay_terms() && rep.replay().unwrap()) {
                                unreplayed.push(format!("{key}#{}", r.index));
                            }
                        }
                        (None, Some(e)) => *errors.entry(e.clone()).or_default() += 1,
                        _ => unreachable!(),
                    }
                }
                match (&res.summary.max_ratio, &res.summary.argmax_family) {
                    (Some(m), Some(arg)) => {
                        maxima.insert(key, Golden { max_ratio: format!("{}/{}", m.0.numer(), m.0.denom()), argmax: arg.clone() });
                    }
                    _ => infinite.push(key),
                }
            }
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    let path = golden_path();
    let bless = std::env::var("FQLAB_BLESS").is_ok_and(|v| v == "1") || !path.exists();
    let golden_note = if bless {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, serde_json::to_string_pretty(&maxima).unwrap() + "\n").unwrap();
        "golden maxima written".to_string()
    } else {
        let stored: BTreeMap<String, Golden> = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let drift: Vec<&String> =
            maxima.keys().chain(stored.keys()).filter(|k| maxima.get(*k) != stored.get(*k)).collect();
        if drift.is_empty() {
            format!("{} golden maxima match", stored.len())
        } else {
            unreplayed.push(format!("golden drift {drift:?}"));
            format!("golden drift in {} sweeps", drift.len())
        }
    };
    ok(
        unreplayed.is_empty() && infinite.is_empty(),
        format!(
            "{} sweeps, {rows} rows ({:.0}/min), all replay {}; refused rows {errors:?}; no finite max in {infinite:?}; {golden_note}",
            maxima.len() + infinite.len(),
            rows as f64 * 60.0 / secs,
            yes(unreplayed.is_empty())
        ),
    )
}

fn lemma_suite() -> Outcome {
    let mut fails = Vec::new();
    for i in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(11000 + i);
        let f = Field::of_order([31, 64, 81][i as usize % 3]).unwrap();
        let nx = rng.gen_range(1..=14);
        let x = random_set(&mut rng, &f, nx);
        let w: Vec<u64> = (0..x.len()).map(|_| rng.gen_range(1..40)).collect();
        let k = rng.gen_range(1..=w.iter().sum::<u64>());
        let pop = popularity_trace(&x, &w, k).unwrap();
        let ny = rng.gen_range(1..=5);
        let y = random_set(&mut rng, &f, ny);
        let eps = BigRational::new(1.into(), rng.gen_range(2..10).into());
        let kind = if i % 2 == 0 { CoverKind::Sum } else { CoverKind::Difference };
        let shen = shen_cover_trace(&x, &y, &eps, kind).unwrap();
        for t in [pop, shen] {
            if !t.guarantees.iter().filter(|g| g.exact).all(|g| g.holds) || !t.replay().unwrap().ok {
                fails.push(format!("{}#{i}", t.lemma));
            }
        }
    }
    let mut bourgain_min = usize::MAX;
    for (q, d) in [(4, 1), (16, 2), (9, 1), (64, 3), (64, 2), (25, 1), (81, 2)] {
        let f = Field::of_order(q).unwrap();
        let g = subfield(&f, d);
        for y in [g.clone(), g.without_zero()] {
            let t = bourgain_trace(&g, &y).unwrap();
            if !t.replay().unwrap().ok {
                fails.push(format!("bourgain q={q}"));
            }
            bourgain_min = bourgain_min.min(fqlab::lemma::bourgain_intersection_search(&g, &y).unwrap().achieved);
        }
    }
    let mut bsg_cases = 0;
    for i in 0..150u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(13000 + i);
        let f = Field::of_order([13, 16, 27][i as usize % 3]).unwrap();
        let (nx, ny) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let (x, y) = (random_set(&mut rng, &f, nx), random_set(&mut rng, &f, ny));
        let density = rng.gen_range(0.2..1.0);
        let mut pairs: Vec<(usize, usize)> =
            (0..x.len()).flat_map(|a| (0..y.len()).map(move |b| (a, b))).filter(|_| rng.gen_bool(density)).collect();
        if pairs.is_empty() {
            pairs.push((0, 0));
        }
        let g = PairGraph::new(x, y, pairs).unwrap();
        for form in [BsgForm::DifferenceSingle, BsgForm::SumPair] {
            let ex = bsg_search(&g, form, Some(SearchMode::Exhaustive)).unwrap();
            let he = bsg_search(&g, form, Some(SearchMode::Heuristic)).unwrap();
            bsg_cases += 1;
            if ex.doubling > he.doubling {
                fails.push(format!("bsg#{i}"));
            }
        }
    }
    ok(
        fails.is_empty() && bourgain_min >= 1,
        format!(
            "popularity + cover 200 traces exact; bourgain min achieved {bourgain_min} on subfields; bsg exhaustive <= heuristic on {bsg_cases} graphs; failures {fails:?}"
        ),
    )
}

fn performance() -> Outcome {
    let f = Field::prime(65537).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(65537);
    let a = random_set(&mut rng, &f, 128);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let t0 = Instant::now();
    let t = pool.install(|| collinear_triples(&a, &a, TripleMode::LineAggregate).unwrap());
    let secs = t0.elapsed().as_secs_f64();
    let spec = SweepSpec {
        claim: "T2-triples".into(),
        family: "random".into(),
        sizes: (5..=40).collect(),
        fields: vec![1009, 256],
        b_family: None,
        seed: 77,
        options: EvalOptions::default(),
        output: None,
    };
    let t1 = Instant::now();
    let res = run_sweep(&spec).unwrap();
    let rate = res.rows.len() as f64 * 60.0 / t1.elapsed().as_secs_f64();
    ok(
        secs <= 10.0 && rate >= 50.0 && t > 0,
        format!("T(A,A), |A| = 128, F_65537, 1 thread: {secs:.2}s; sweep {} rows at {rate:.0}/min", res.rows.len()),
    )
}

fn chain() -> Outcome {
    let pairs: Vec<(usize, usize)> =
        (CHAIN_MIN..=CHAIN_MAX).flat_map(|x| (CHAIN_MIN..=CHAIN_MAX).map(move |y| (x, y))).collect();
    let results: Vec<(usize, usize, Result<bool, Error>)> = pairs
        .par_iter()
        .map(|&(na, nb)| {
            let mut rng = ChaCha8Rng::seed_from_u64((na * 100 + nb) as u64);
            let f = Field::of_order(if (na + nb) % 2 == 0 { 101 } else { 64 }).unwrap();
            let a = random_set(&mut rng, &f, na);
            let b = random_set(&mut rng, &f, nb);
            let r = trace_claim1_chain(&a, &b).map(|t| t.guarantees.len() >= 7 && t.replay().unwrap().ok);
            (na, nb, r)
        })
        .collect();
    let bad: Vec<String> = results
        .iter()
        .filter(|(_, _, r)| !matches!(r, Ok(true) | Err(Error::ChainDegenerate(_))))
        .map(|(a, b, r)| format!("({a},{b}): {r:?}"))
        .collect();
    let degenerate = results.iter().filter(|r| matches!(r.2, Err(Error::ChainDegenerate(_)))).count();
    ok(
        bad.is_empty(),
        format!("{} size pairs, {degenerate} degenerate, failures {bad:?}", results.len()),
    )
}

fn main() {
    let checks: [(&str, fn() -> Outcome); 8] = [
        ("exact-law suite", exact_law_suite),
        ("subfield sharpness", sharpness),
        ("oracle equivalence", oracle_equivalence),
        ("energy identity", energy_identity),
        ("ratio reports and sweeps", headline_sweeps),
        ("lemma constructive suite", lemma_suite),
        ("performance", performance),
        ("claim chain", chain),
    ];
    let mut gating = 0;
    for (i, (name, run)) in checks.iter().enumerate() {
        let o = run();
        let tag = match (o.pass, o.unattainable) {
            (true, _) => "PASS",
            (false, true) => "FAIL (unattainable, see README)",
            (false, false) => "FAIL",
        };
        gating += (!o.pass && !o.unattainable) as u32;
        println!("[{tag}] {}. {name}: {}", i + 1, o.detail);
    }
    if gating > 0 {
        std::process::exit(1);
    }
}
