//! Constant-free inequalities, checked in exact integer arithmetic.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::incidence::{
    cartesian_lines, degenerate_triples, k_rich_incidences, line_counts, star_totals, Line, PointSet,
};
use crate::lemma::{instance_of, plunnecke_check, reciprocal_energy_lines, Guarantee};
use crate::report::Instance;
use crate::set::{rep_function, FSet, OpKind};
use num_bigint::BigUint;
use num_traits::One;
use rand::{seq::index::sample, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Law ids, in evaluation order. `triples_trivial_literal` is reported
/// but never gates: it fails on subfields and on `|B| = 1`.
pub const LAW_IDS: [&str; 15] = [
    "trivial_incidence",
    "vinh",
    "triples_sharp",
    "triples_trivial_literal",
    "energy_cauchy_schwarz",
    "rich_incidence_holder_k2",
    "rich_incidence_holder_k3",
    "incidence_vs_triples",
    "lines_vs_triples",
    "energy_sumset_cauchy_schwarz",
    "energy_difference_cauchy_schwarz",
    "reciprocal_energy_incidences",
    "pivot_injective",
    "quotient_set_full",
    "plunnecke",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawResult {
    pub law: String,
    pub applicable: bool,
    pub informational: bool,
    pub holds: bool,
    /// Both sides equal.
    pub equality: bool,
    pub lhs: String,
    pub rhs: String,
    pub counterexample: Option<Instance>,
}

impl LawResult {
    fn new(law: &str, holds: bool, equality: bool, lhs: impl ToString, rhs: impl ToString) -> LawResult {
        LawResult {
            law: law.to_string(),
            applicable: true,
            informational: false,
            holds,
            equality,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            counterexample: None,
        }
    }

    fn skipped(law: &str, why: &str) -> LawResult {
        LawResult {
            law: law.to_string(),
            applicable: false,
            informational: false,
            holds: true,
            equality: false,
            lhs: String::new(),
            rhs: why.to_string(),
            counterexample: None,
        }
    }

    fn from_guarantee(law: &str, g: &Guarantee) -> LawResult {
        LawResult::new(law, g.holds, g.ratio.as_ref().is_some_and(|r| r.0.is_one()), g.lhs, &g.rhs.0)
    }

    /// A gating failure.
    pub fn violated(&self) -> bool {
        self.applicable && !self.informational && !self.holds
    }
}

fn big(x: impl Into<BigUint>) -> BigUint {
    x.into()
}

/// `x <= sqrt(a) * b + c`, exactly.
fn le_sqrt_form(x: u128, a: u128, b: u128, c: u128) -> bool {
    x <= c || big(x - c).pow(2) <= big(a) * big(b).pow(2)
}

/// Lines `y = cx + d` over `A x B` plus `|A| + |B|` seeded random lines
/// (vertical ones included), deduplicated.
fn law_lines(a: &FSet, b: &FSet, seed: u64) -> Vec<Line> {
    let q = a.field().q();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines = cartesian_lines(a, b);
    for _ in 0..a.len() + b.len() {
        let pick = rng.gen_range(0..q + 1);
        lines.push(if pick == q {
            Line::Vertical { x: rng.gen_range(0..q) as u32 }
        } else {
            Line::new(pick as u32, rng.gen_range(0..q) as u32)
        });
    }
    lines.sort_unstable();
    lines.dedup();
    lines
}

struct Shared {
    grid: PointSet,
    lines: Vec<Line>,
    counts: Vec<u64>,
    t: u128,
    lp: u128,
    l3_spanned: u128,
}

fn shared(a: &FSet, b: &FSet, seed: u64) -> Result<Shared> {
    let grid = PointSet::cartesian(a, b)?;
    let lines = law_lines(a, b, seed);
    let counts = line_counts(&grid, &lines)?;
    let st = star_totals(&grid)?;
    Ok(Shared { t: st.collinear_triples()?, lp: st.lines, l3_spanned: st.sums[2], grid, lines, counts })
}

fn eval_law(law: &str, a: &FSet, b: &FSet, seed: u64, sh: &mut Option<Shared>) -> Result<LawResult> {
    let (na, nb) = (a.len() as u128, b.len() as u128);
    let q = a.field().q() as u128;
    if sh.is_none() && LAW_IDS[..9].contains(&law) {
        *sh = Some(shared(a, b, seed)?);
    }
    let r = match law {
        "trivial_incidence" => {
            let s = sh.as_ref().expect("shared");
            let (p, l) = (s.grid.len() as u128, s.lines.len() as u128);
            let i: u128 = s.counts.iter().map(|&c| c as u128).sum();
            let holds = le_sqrt_form(i, p, l, p) && le_sqrt_form(i, l, p, l);
            LawResult::new(law, holds, false, i, format!("min{{{p}^(1/2) {l} + {p}, {l}^(1/2) {p} + {l}}}"))
        }
        "vinh" => {
            let s = sh.as_ref().expect("shared");
            let (p, l) = (s.grid.len() as u128, s.lines.len() as u128);
            let i: u128 = s.counts.iter().map(|&c| c as u128).sum();
            let dev = (q * i).abs_diff(p * l);
            let rhs = big(q).pow(3) * big(p) * big(l);
            LawResult::new(law, big(dev).pow(2) <= rhs, false, format!("({dev})^2"), rhs)
        }
        "triples_sharp" => {
            let s = sh.as_ref().expect("shared");
            let ts = s.t - degenerate_triples(na as u64, nb as u64);
            let bound = big(na) * big(na - 1) * big(nb) * big(nb - 1) * big((na - 1).min(nb - 1));
            LawResult::new(law, big(ts) <= bound, big(ts) == bound, ts, bound)
        }
        "triples_trivial_literal" => {
            let s = sh.as_ref().expect("shared");
            let bound = big(na).pow(2) * big(nb).pow(2) * big(na.min(nb));
            let mut r = LawResult::new(law, big(s.t) <= bound, big(s.t) == bound, s.t, bound);
            r.informational = true;
            r
        }
        "energy_cauchy_schwarz" => {
            // zero breaks the quotient form; the law is for A*, B*
            let (a, b) = (&a.without_zero(), &b.without_zero());
            let eab = rep_function(a, b, OpKind::Product)?.sum_squares();
            let ea = rep_function(a, a, OpKind::Product)?.sum_squares();
            let eb = rep_function(b, b, OpKind::Product)?.sum_squares();
            let (l, r) = (big(eab).pow(2), big(ea) * big(eb));
            LawResult::new(law, l <= r, l == r, l, r)
        }
        "rich_incidence_holder_k2" | "rich_incidence_holder_k3" => {
            let s = sh.as_ref().expect("shared");
            let k = if law.ends_with('2') { 2 } else { 3 };
            let i: u128 = s.counts.iter().map(|&c| c as u128).sum();
            let ik = k_rich_incidences(&s.grid, &s.lines, k)?;
            let (l, r) = (big(i).pow(k), big(ik) * big(s.lines.len() as u128).pow(k - 1));
            LawResult::new(law, l <= r, l == r, l, r)
        }
        "incidence_vs_triples" => {
            let s = sh.as_ref().expect("shared");
            let i: u128 = s.counts.iter().map(|&c| c as u128).sum();
            let nl = s.lines.len() as u128;
            let (l, r) = (big(i).pow(3), big(s.l3_spanned + nl) * big(nl).pow(2));
            LawResult::new(law, l <= r, l == r, l, r)
        }
        "lines_vs_triples" => {
            let s = sh.as_ref().expect("shared");
            let p = s.grid.len() as u128;
            let (l, r) = (big(p).pow(3) * big(p - 1).pow(3), big(s.t).pow(2) * big(s.lp));
            LawResult::new(law, l <= r, l == r, l, r)
        }
        "energy_sumset_cauchy_schwarz" | "energy_difference_cauchy_schwarz" => {
            let kind = if law.contains("sumset") { OpKind::Sum } else { OpKind::Difference };
            let e = rep_function(a, b, OpKind::Sum)?.sum_squares();
            let s = a.combine(b, kind)?.len() as u128;
            let (l, r) = (big(e) * big(s), big(na).pow(2) * big(nb).pow(2));
            LawResult::new(law, l >= r, l == r, l, r)
        }
        "reciprocal_energy_incidences" => {
            if a.contains_zero() || b.contains_zero() || a.sumset(b)?.contains_zero() {
                LawResult::skipped(law, "needs 0 outside A, B, A+B")
            } else {
                let rl = reciprocal_energy_lines(a, b)?;
                LawResult::new(law, rl.energy <= rl.incidences, rl.energy == rl.incidences, rl.energy, rl.incidences)
            }
        }
        "pivot_injective" => pivot_injective(a, seed)?,
        "quotient_set_full" => {
            if na * na <= q {
                LawResult::skipped(law, "needs |A|^2 > q")
            } else {
                let r = a.quotient_set()?.len() as u128;
                LawResult::new(law, r == q, r == q, r, q)
            }
        }
        "plunnecke" => {
            let mut worst: Option<LawResult> = None;
            for ys in [vec![b.clone()], vec![b.clone(), a.clone()], vec![b.clone(), a.clone(), b.clone()]] {
                let r = LawResult::from_guarantee(law, &plunnecke_check(a, &ys)?);
                if worst.is_none() || !r.holds {
                    worst = Some(r);
                }
            }
            worst.expect("three checks")
        }
        other => return Err(Error::InvalidParams(format!("unknown law `{other}`"))),
    };
    Ok(r)
}

/// Lemma: for `r ∉ R(X)`, `x1 + r x2` is injective on `X1 x X2`. Checked
/// for `X1 = X2 = X` and a seeded pair of subsets.
fn pivot_injective(x: &FSet, seed: u64) -> Result<LawResult> {
    let law = "pivot_injective";
    if x.len() < 2 {
        return Ok(LawResult::skipped(law, "needs |X| >= 2"));
    }
    let f = x.field();
    let r_set = x.quotient_set()?;
    if r_set.len() as u64 == f.q() {
        return Ok(LawResult::skipped(law, "R(X) = F_q"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let outside: Vec<u32> = f.elements()?.filter(|&r| !r_set.contains(r)).collect();
    let r = outside[rng.gen_range(0..outside.len())];
    let n = x.len();
    let mut pick = || {
        let k = rng.gen_range(1..=n);
        x.subset_by_indices(&sample(&mut rng, n, k).into_vec())
    };
    let (x1, x2) = (pick(), pick());
    let mut holds = true;
    let mut shown = (0, 0);
    for (s1, s2) in [(x.clone(), x.clone()), (x1, x2)] {
        let size = s1.combine(&s2.scale(r), OpKind::Sum)?.len();
        holds &= size == s1.len() * s2.len();
        shown = (size, s1.len() * s2.len());
    }
    Ok(LawResult::new(law, holds, holds, format!("|X1 + {r} X2| = {}", shown.0), shown.1))
}

/// Evaluates every law on `(A, B)`. Subset and line choices are drawn from
/// `seed`. Violations carry the instance as counterexample.
pub fn check_exact_laws(a: &FSet, b: &FSet, seed: u64) -> Result<Vec<LawResult>> {
    check_laws(&LAW_IDS, a, b, seed)
}

fn check_laws(ids: &[&str], a: &FSet, b: &FSet, seed: u64) -> Result<Vec<LawResult>> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidParams("empty set".into()));
    }
    let mut sh = None;
    let mut out = Vec::with_capacity(ids.len());
    for id in ids {
        let mut r = eval_law(id, a, b, seed, &mut sh)?;
        if !r.holds {
            let inst = instance_of(a.field(), &[("A", a), ("B", b)]);
            r.counterexample = Some(Instance { seed: Some(seed), ..inst });
        }
        out.push(r);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawSummary {
    pub law: String,
    pub informational: bool,
    pub evaluated: u64,
    pub violations: u64,
    pub equalities: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawSuite {
    pub fields: Vec<u64>,
    pub trials: usize,
    pub seed: u64,
    pub laws: Vec<LawSummary>,
    /// Gating violations, in order of discovery.
    pub counterexamples: Vec<LawResult>,
}

impl LawSuite {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

fn random_subset(rng: &mut ChaCha8Rng, f: &Field, size: usize, nonzero: bool) -> Result<FSet> {
    let off = nonzero as u64;
    let pool = (f.q() - off) as usize;
    let idx = sample(rng, pool, size.min(pool));
    FSet::new(f, idx.into_iter().map(|i| (i as u64 + off) as u32))
}

/// Draws an instance that makes `law` applicable, or `None` after 200 tries.
fn draw(law: &str, f: &Field, rng: &mut ChaCha8Rng) -> Result<Option<(FSet, FSet)>> {
    let q = f.q() as usize;
    let cap = q.min(14);
    let root = (q as f64).sqrt() as usize;
    for _ in 0..200 {
        let (a, b) = match law {
            "reciprocal_energy_incidences" => {
                let (na, nb) = (rng.gen_range(1..=cap), rng.gen_range(1..=cap));
                let a = random_subset(rng, f, na, true)?;
                let b = random_subset(rng, f, nb, true)?;
                if a.sumset(&b)?.contains_zero() {
                    continue;
                }
                (a, b)
            }
            "quotient_set_full" => {
                let n = rng.gen_range(root + 1..=(3 * root + 3).min(q));
                let a = random_subset(rng, f, n, false)?;
                (a.clone(), a)
            }
            "pivot_injective" => {
                let hi = ((q as f64).powf(0.25) as usize + 2).clamp(2, cap);
                let n = rng.gen_range(2..=hi);
                let a = random_subset(rng, f, n, false)?;
                if a.quotient_set()?.len() == q {
                    continue;
                }
                (a.clone(), a)
            }
            _ => {
                let (na, nb) = (rng.gen_range(1..=cap), rng.gen_range(1..=cap));
                let a = random_subset(rng, f, na, false)?;
                let b = random_subset(rng, f, nb, false)?;
                (a, b)
            }
        };
        return Ok(Some((a, b)));
    }
    Ok(None)
}

/// Runs every law on `trials` seeded instances per field. Instance `t` of
/// law `l` in field `i` uses the stream `seed ⊕ (i, l, t)`.
pub fn run_law_suite(fields: &[Field], trials: usize, seed: u64) -> Result<LawSuite> {
    let jobs: Vec<(usize, usize, usize)> = (0..fields.len())
        .flat_map(|i| (0..LAW_IDS.len()).flat_map(move |l| (0..trials).map(move |t| (i, l, t))))
        .collect();
    let results: Vec<Option<LawResult>> = jobs
        .par_iter()
        .map(|&(i, l, t)| {
            let stream = seed ^ ((i as u64) << 48) ^ ((l as u64) << 32) ^ t as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(stream);
            let law = LAW_IDS[l];
            match draw(law, &fields[i], &mut rng)? {
                Some((a, b)) => Ok(check_laws(&[law], &a, &b, stream)?.pop()),
                None => Ok(None),
            }
        })
        .collect::<Result<_>>()?;
    let mut laws: Vec<LawSummary> = LAW_IDS
        .iter()
        .map(|id| LawSummary {
            law: id.to_string(),
            informational: *id == "triples_trivial_literal",
            evaluated: 0,
            violations: 0,
            equalities: 0,
        })
        .collect();
    let mut counterexamples = Vec::new();
    for r in results.into_iter().flatten().filter(|r| r.applicable) {
        let s = laws.iter_mut().find(|s| s.law == r.law).expect("known law");
        s.evaluated += 1;
        s.equalities += r.equality as u64;
        if !r.holds {
            s.violations += 1;
        }
        if r.violated() {
            counterexamples.push(r);
        }
    }
    Ok(LawSuite { fields: fields.iter().map(Field::q).collect(), trials, seed, laws, counterexamples })
}

/// `R(X) = F_q` for `|X|^2 > q`: every such X when `samples` is `None`,
/// otherwise that many seeded random X. Returns (checked, violations).
pub fn quotient_full_check(f: &Field, samples: Option<usize>, seed: u64) -> Result<(u64, u64)> {
    let q = f.q();
    let min = (1..=q).find(|n| n * n > q).expect("q >= 2") as usize;
    let check = |x: &FSet| -> Result<bool> { Ok(x.quotient_set()?.len() as u64 == q) };
    let mut checked = 0;
    let mut bad = 0;
    match samples {
        None => {
            if q > 16 {
                return Err(Error::EnumerationTooLarge(1 << q));
            }
            let all: Vec<u32> = f.elements()?.collect();
            for mask in 0u64..1 << q {
                if (mask.count_ones() as usize) < min {
                    continue;
                }
                let x = FSet::new(f, all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e))?;
                checked += 1;
                bad += !check(&x)? as u64;
            }
        }
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..n {
                let size = rng.gen_range(min..=q as usize);
                let x = random_subset(&mut rng, f, size, false)?;
                checked += 1;
                bad += !check(&x)? as u64;
            }
        }
    }
    Ok((checked, bad))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find<'a>(rs: &'a [LawResult], id: &str) -> &'a LawResult {
        rs.iter().find(|r| r.law == id).unwrap()
    }

    #[test]
    fn subfield_instance_passes_with_sharp_equality() {
        let f = Field::with_degree(2, 2).unwrap();
        let g = FSet::new(&f, f.subfield(1).unwrap().elements).unwrap();
        let rs = check_exact_laws(&g, &g, 1).unwrap();
        assert!(rs.iter().all(|r| !r.violated()), "{rs:?}");
        assert!(find(&rs, "triples_sharp").equality);
    }

    #[test]
    fn literal_triple_bound_fails_on_subfield_but_does_not_gate() {
        let f = Field::with_degree(3, 2).unwrap();
        let g = FSet::new(&f, f.subfield(1).unwrap().elements).unwrap();
        let rs = check_exact_laws(&g, &g, 3).unwrap();
        let lit = find(&rs, "triples_trivial_literal");
        // T(G) = 3^5 + 3^4 - 3^3 = 297 > 243
        assert_eq!(lit.lhs, "297");
        assert!(!lit.holds && !lit.violated());
        assert!(lit.counterexample.is_some());
    }

    #[test]
    fn vinh_on_the_whole_plane() {
        // |P| = q^2 and all non-vertical lines of y = cx + d form: deviation 0
        let f = Field::prime(5).unwrap();
        let all = FSet::new(&f, 0..5).unwrap();
        let rs = check_exact_laws(&all, &all, 0).unwrap();
        assert!(find(&rs, "vinh").holds);
    }

    #[test]
    fn sqrt_form_is_exact() {
        // 6 <= sqrt(4)*2 + 2 = 6, 7 > 6
        assert!(le_sqrt_form(6, 4, 2, 2));
        assert!(!le_sqrt_form(7, 4, 2, 2));
    }

    #[test]
    fn small_suite_is_clean() {
        let fields = [Field::prime(13).unwrap(), Field::with_degree(2, 3).unwrap()];
        let s = run_law_suite(&fields, 8, 99).unwrap();
        assert!(s.passed(), "{:?}", s.counterexamples);
        for l in &s.laws {
            assert!(l.evaluated > 0, "{} never applicable", l.law);
        }
    }

    #[test]
    fn quotient_full_small_fields() {
        let f4 = Field::with_degree(2, 2).unwrap();
        assert_eq!(quotient_full_check(&f4, None, 0).unwrap(), (5, 0));
        let f9 = Field::with_degree(3, 2).unwrap();
        let (n, bad) = quotient_full_check(&f9, Some(50), 4).unwrap();
        assert_eq!((n, bad), (50, 0));
    }
}
