//! Ratio reports for the incidence, triple, and sum-product claims.

use super::{check_hypothesis, instance_set, Aggregate, CosetKind, Hypothesis, RatioReport, RhsTerm};
use crate::bounds::{Factor, Monomial};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::incidence::{
    cartesian_lines, collinear_triples, incidences, nontrivial_collinear_triples, star_totals, additive_energy,
    PointSet, TripleMode,
};
use crate::lemma::Direction;
use crate::report::Instance;
use crate::set::{rep_function, FSet, OpKind};
use serde::{Deserialize, Serialize};

/// Claim ids accepted by [`evaluate_theorem`].
pub const CLAIM_IDS: [&str; 29] = [
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
    "trivial-incidence",
    "vinh",
    "triples-trivial",
    "triples-sharp",
    "sum-ratio-first-sum",
    "sum-ratio-second-sum",
    "sum-ratio-first-difference",
    "sum-ratio-second-difference",
    "sum-ratio-large-sum",
    "sum-ratio-large-difference",
    "energy-sumset",
    "energy-difference",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub triple_mode: TripleMode,
    /// `delta = num/den` in the sumset-triples hypothesis `|A|^(1-delta)`.
    pub delta: (i64, u64),
    /// Dilations for the hyperbola claim; `None` scans all of F_q^*.
    pub alpha: Option<Vec<u32>>,
    /// `eta = num/den` in the sum-ratio hypothesis `|A ∩ cG| <= max{|G|^(1/2), eta |A|}`.
    pub eta: (u64, u64),
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { triple_mode: TripleMode::LineAggregate, delta: (1, 4), alpha: None, eta: (1, 8) }
    }
}

fn mono(parts: &[(&str, u64, i64, u64)]) -> Monomial {
    Monomial::new(parts.iter().map(|&(n, b, num, den)| Factor::new(n, b, num, den)).collect())
}

fn term(parts: &[(&str, u64, i64, u64)]) -> RhsTerm {
    RhsTerm::single(mono(parts))
}

struct Ctx<'a> {
    claim: &'a str,
    instance: &'a Instance,
    opts: &'a EvalOptions,
    f: Field,
    a: FSet,
    b: FSet,
}

impl Ctx<'_> {
    fn q(&self) -> u64 {
        self.f.q()
    }

    fn report(
        &self,
        hyps: Vec<Hypothesis>,
        dir: Direction,
        agg: Aggregate,
        lhs_formula: &str,
        lhs: u128,
        terms: Vec<RhsTerm>,
    ) -> RatioReport {
        RatioReport::assemble(
            self.claim,
            self.instance.clone(),
            self.opts.clone(),
            hyps,
            dir,
            agg,
            lhs_formula,
            lhs,
            terms,
            self.a.len(),
            self.q(),
        )
    }
}

fn ln(n: usize) -> f64 {
    (n.max(1) as f64).ln()
}

/// `S^-1` for `S \ {0}`.
fn inverse_nonzero(s: &FSet) -> Result<FSet> {
    s.without_zero().inverse_set()
}

fn require_nonzero(s: &FSet) -> Result<()> {
    if s.contains_zero() {
        return Err(Error::ZeroInSet);
    }
    Ok(())
}

/// Evaluates `claim` on the sets `A` (and optionally `B`, default `A`)
/// stored in `instance`.
pub fn evaluate_theorem(claim: &str, instance: &Instance, opts: &EvalOptions) -> Result<RatioReport> {
    let f = Field::new(instance.field.clone())?;
    let a = instance_set(instance, &f, "A")?.ok_or_else(|| Error::InvalidParams("instance has no set `A`".into()))?;
    let b = instance_set(instance, &f, "B")?.unwrap_or_else(|| a.clone());
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidParams("empty input set".into()));
    }
    let c = Ctx { claim, instance, opts, f, a, b };
    match claim {
        "T1-triples" | "T1-incidence" | "T1-lines" => unbalanced(&c),
        "T2-triples" | "T2-incidence" | "T2-lines" => balanced(&c),
        "T3-sumset-triples" | "T3-difference-triples" => sumset_triples(&c),
        "C3a-triples" | "C3a-incidence" | "C3a-lines" => small_doubling(&c),
        "C4-ER" | "C4-SR" | "C4-expander" => reciprocal_sums(&c),
        "C5-hyperbola" => hyperbola(&c),
        "C6-SRI-sum" | "C6-SRI-difference" => reciprocal_group(&c),
        "trivial-incidence" | "vinh" | "triples-trivial" | "triples-sharp" => exact_forms(&c),
        "sum-ratio-first-sum"
        | "sum-ratio-second-sum"
        | "sum-ratio-first-difference"
        | "sum-ratio-second-difference"
        | "sum-ratio-large-sum"
        | "sum-ratio-large-difference" => sum_ratio(&c),
        "energy-sumset" | "energy-difference" => energy_conclusion(&c),
        other => Err(Error::UnknownClaim(other.to_string())),
    }
}

/// [`evaluate_theorem`] on explicit sets.
pub fn evaluate_claim(claim: &str, a: &FSet, b: Option<&FSet>, opts: &EvalOptions) -> Result<RatioReport> {
    let mut sets = vec![("A", a)];
    if let Some(b) = b {
        sets.push(("B", b));
    }
    evaluate_theorem(claim, &crate::lemma::instance_of(a.field(), &sets), opts)
}

fn unbalanced(c: &Ctx) -> Result<RatioReport> {
    // T(A, B) = T(B, A), so the larger set plays A
    let swapped = c.b.len() > c.a.len();
    let (a, b) = if swapped { (&c.b, &c.a) } else { (&c.a, &c.b) };
    let (na, nb, q) = (a.len() as u64, b.len() as u64, c.q());
    let hyp = check_hypothesis("A", a, &mono(&[("|A|", na, 31, 191), ("|B|", nb, 129, 191)]), CosetKind::Affine)?;
    let grid = PointSet::cartesian(a, b)?;
    let r = match c.claim {
        "T1-triples" => c.report(
            vec![hyp],
            Direction::Upper,
            Aggregate::Max,
            "T(A,B)",
            collinear_triples(a, b, c.opts.triple_mode)?,
            vec![
                term(&[("|A|", na, 383, 191), ("|B|", nb, 571, 191)]),
                term(&[("q", q, -1, 103), ("|A|", na, 207, 103), ("|B|", nb, 3, 1)]),
                term(&[("|A|", na, 3, 1), ("|B|", nb, 1, 1)]),
            ],
        ),
        "T1-incidence" => {
            let lines = cartesian_lines(a, b);
            let nl = lines.len() as u64;
            c.report(
                vec![hyp],
                Direction::Upper,
                Aggregate::Max,
                "I(A x B, L)",
                incidences(&grid, &lines)?,
                vec![
                    term(&[("|A|", na, 383, 573), ("|B|", nb, 571, 573), ("|L|", nl, 2, 3)]),
                    term(&[("q", q, -1, 309), ("|A|", na, 207, 309), ("|B|", nb, 1, 1), ("|L|", nl, 2, 3)]),
                    term(&[("|A|", na, 1, 1), ("|B|", nb, 1, 3), ("|L|", nl, 2, 3)]),
                    term(&[("|L|", nl, 1, 1)]),
                ],
            )
            .note("lines", "y = cx + d, c in A, d in B")
        }
        _ => c.report(
            vec![hyp],
            Direction::Lower,
            Aggregate::Min,
            "L(A x B)",
            star_totals(&grid)?.lines,
            vec![
                term(&[("|A|", na, 380, 191), ("|B|", nb, 4, 191)]),
                term(&[("q", q, 2, 103), ("|A|", na, 204, 103)]),
                term(&[("|B|", nb, 4, 1)]),
            ],
        ),
    };
    Ok(if swapped { r.note("swapped", "B is larger, roles exchanged") } else { r })
}

fn balanced(c: &Ctx) -> Result<RatioReport> {
    let (na, q) = (c.a.len() as u64, c.q());
    let hyp = check_hypothesis("A", &c.a, &mono(&[("|A|", na, 51, 52)]), CosetKind::Affine)?;
    let grid = PointSet::cartesian(&c.a, &c.a)?;
    Ok(match c.claim {
        "T2-triples" => c.report(
            vec![hyp],
            Direction::Upper,
            Aggregate::Max,
            "T(A)",
            collinear_triples(&c.a, &c.a, c.opts.triple_mode)?,
            vec![term(&[("|A|", na, 519, 104)]), term(&[("q", q, -1, 95), ("|A|", na, 476, 95)])],
        ),
        "T2-incidence" => {
            let lines = cartesian_lines(&c.a, &c.a);
            let nl = lines.len() as u64;
            c.report(
                vec![hyp],
                Direction::Upper,
                Aggregate::Max,
                "I(A x A, L)",
                incidences(&grid, &lines)?,
                vec![
                    term(&[("|A|", na, 173, 104), ("|L|", nl, 2, 3)]),
                    term(&[("q", q, -1, 285), ("|A|", na, 476, 285), ("|L|", nl, 2, 3)]),
                    term(&[("|L|", nl, 1, 1)]),
                ],
            )
            .note("lines", "y = cx + d, c, d in A")
        }
        _ => c.report(
            vec![hyp],
            Direction::Lower,
            Aggregate::Min,
            "L(A x A)",
            star_totals(&grid)?.lines,
            vec![term(&[("|A|", na, 105, 52)]), term(&[("q", q, 2, 95), ("|A|", na, 188, 95)])],
        ),
    })
}

fn sumset_triples(c: &Ctx) -> Result<RatioReport> {
    let (dn, dd) = c.opts.delta;
    if dn <= 0 || dn as u64 > dd {
        return Err(Error::InvalidParams(format!("delta = {dn}/{dd} outside (0, 1]")));
    }
    let (na, q) = (c.a.len() as u64, c.q());
    let hyp = check_hypothesis("A", &c.a, &mono(&[("|A|", na, dd as i64 - dn, dd)]), CosetKind::Affine)?;
    let (s, name) = if c.claim == "T3-sumset-triples" {
        (c.a.sumset(&c.a)?, "|A+A|")
    } else {
        (c.a.difference_set(&c.a)?, "|A-A|")
    };
    let ns = s.len() as u64;
    Ok(c.report(
        vec![hyp],
        Direction::Upper,
        Aggregate::Max,
        "T(A)",
        collinear_triples(&c.a, &c.a, c.opts.triple_mode)?,
        vec![
            term(&[(name, ns, 7, 4), ("|A|", na, 3, 1)]),
            term(&[(name, ns, 6, 5), ("|A|", na, 18, 5)]),
            term(&[("|A|", na, 10 * dd as i64 - dn, 2 * dd)]),
            term(&[(name, ns, 7, 4), ("|A|", na, 7, 2), ("q", q, -1, 4)]),
        ],
    )
    .with_log("log|A|", ln(c.a.len()))
    .note(name, ns))
}

fn small_doubling(c: &Ctx) -> Result<RatioReport> {
    let (na, q) = (c.a.len() as u64, c.q());
    let hyp = check_hypothesis("A", &c.a, &mono(&[("|A|", na, 3, 5)]), CosetKind::Affine)?;
    let ss = c.a.sumset(&c.a)?.len();
    let grid = PointSet::cartesian(&c.a, &c.a)?;
    let r = match c.claim {
        "C3a-triples" => c
            .report(
                vec![hyp],
                Direction::Upper,
                Aggregate::Max,
                "T(A)",
                collinear_triples(&c.a, &c.a, c.opts.triple_mode)?,
                vec![term(&[("|A|", na, 24, 5)]), term(&[("q", q, -1, 4), ("|A|", na, 21, 4)])],
            )
            .with_log("log|A|", ln(c.a.len())),
        "C3a-incidence" => {
            let lines = cartesian_lines(&c.a, &c.a);
            let nl = lines.len() as u64;
            c.report(
                vec![hyp],
                Direction::Upper,
                Aggregate::Max,
                "I(A x A, L)",
                incidences(&grid, &lines)?,
                vec![
                    term(&[("|A|", na, 24, 15), ("|L|", nl, 2, 3)]),
                    term(&[("q", q, -1, 12), ("|A|", na, 21, 12), ("|L|", nl, 2, 3)]),
                    term(&[("|L|", nl, 1, 1)]),
                ],
            )
            .with_log("(log|A|)^(1/3) on all but the |L| term", ln(c.a.len()).cbrt())
            .note("lines", "y = cx + d, c, d in A")
        }
        _ => c
            .report(
                vec![hyp],
                Direction::Lower,
                Aggregate::Min,
                "L(A x A)",
                star_totals(&grid)?.lines,
                vec![term(&[("|A|", na, 12, 5)]), term(&[("q", q, 1, 2), ("|A|", na, 3, 2)])],
            )
            .with_log("(log|A|)^-2", ln(c.a.len()).powi(-2)),
    };
    Ok(r.note("|A+A|", ss).note("doubling", format!("{ss}/{na}")))
}

fn reciprocal_sums(c: &Ctx) -> Result<RatioReport> {
    require_nonzero(&c.a)?;
    let q = c.q();
    let (b, label) = match c.claim {
        "C4-ER" => (c.b.clone(), "B"),
        "C4-SR" => (c.a.clone(), "A"),
        _ => (c.a.inverse_set()?, "1/A"),
    };
    require_nonzero(&b)?;
    let s = c.a.sumset(&b)?;
    let ns = s.len() as u64;
    let hyp = check_hypothesis(
        &format!("(A+{label})^-1"),
        &inverse_nonzero(&s)?,
        &mono(&[("|A+B|", ns, 51, 52)]),
        CosetKind::Affine,
    )?;
    let na = c.a.len() as u64;
    let lower = [term(&[("|A|", na, 832, 831)]), term(&[("q", q, 1, 761), ("|A|", na, 760, 761)])];
    let r = match c.claim {
        "C4-ER" => {
            let nb = b.len() as u64;
            c.report(
                vec![hyp],
                Direction::Upper,
                Aggregate::Max,
                "E+(1/A, 1/B)",
                additive_energy(&c.a.inverse_set()?, &b.inverse_set()?)?,
                vec![
                    term(&[("|A+B|", ns, 173, 104), ("|B|", nb, 4, 3)]),
                    term(&[("q", q, -1, 285), ("|A+B|", ns, 476, 285), ("|B|", nb, 4, 3)]),
                ],
            )
        }
        "C4-SR" => {
            let inv = c.a.inverse_set()?;
            let rs = inv.sumset(&inv)?.len();
            c.report(
                vec![hyp],
                Direction::Lower,
                Aggregate::Min,
                "max{|A+A|, |1/A+1/A|}",
                ns.max(rs as u64) as u128,
                lower.to_vec(),
            )
            .note("|1/A+1/A|", rs)
        }
        _ => c.report(vec![hyp], Direction::Lower, Aggregate::Min, "|A+1/A|", ns as u128, lower.to_vec()),
    };
    Ok(r.note("|A+B|", ns).note("zero_in_sumset", s.contains_zero()))
}

fn hyperbola(c: &Ctx) -> Result<RatioReport> {
    let q = c.q();
    let s = c.a.sumset(&c.a)?;
    let ns = s.len() as u64;
    let hyp = check_hypothesis("(A+A)^-1", &inverse_nonzero(&s)?, &mono(&[("|A+A|", ns, 47, 48)]), CosetKind::Affine)?;
    // |A ∩ alpha/A| = #{(a, a') : a a' = alpha}, zero outside A*A
    let reps: Vec<(u32, u64)> =
        rep_function(&c.a, &c.a, OpKind::Product)?.counts.into_iter().filter(|&(z, _)| z != 0).collect();
    let count = |alpha: u32| reps.binary_search_by_key(&alpha, |&(z, _)| z).map(|i| reps[i].1).unwrap_or(0);
    let (best_alpha, best) = match &c.opts.alpha {
        Some(grid) => {
            if grid.is_empty() {
                return Err(Error::InvalidParams("empty alpha grid".into()));
            }
            let mut best = (0u32, 0u64);
            for &al in grid {
                if c.f.check(al as u64)? == 0 {
                    return Err(Error::InvalidParams("alpha must be nonzero".into()));
                }
                let n = count(al);
                if n > best.1 || (n == best.1 && (best.0 == 0 || al < best.0)) {
                    best = (al, n);
                }
            }
            best
        }
        None => reps.iter().fold((1u32, 0u64), |b, &(z, n)| if n > b.1 { (z, n) } else { b }),
    };
    Ok(c.report(
        vec![hyp],
        Direction::Upper,
        Aggregate::Max,
        "max_alpha |A ∩ alpha/A|",
        best as u128,
        vec![term(&[("|A+A|", ns, 831, 832)]), term(&[("q", q, -1, 760), ("|A+A|", ns, 761, 760)])],
    )
    .note("alpha", best_alpha)
    .note("alpha_grid", c.opts.alpha.as_ref().map_or("all nonzero".to_string(), |g| format!("{} values", g.len())))
    .note("|A+A|", ns))
}

fn reciprocal_group(c: &Ctx) -> Result<RatioReport> {
    let (na, q) = (c.a.len() as u64, c.q());
    let group = c.a.contains_zero() && c.a.difference_set(&c.a)?.len() == c.a.len();
    let inv = inverse_nonzero(&c.a)?;
    if inv.is_empty() {
        return Err(Error::InvalidParams("A has no nonzero element".into()));
    }
    let hyp = check_hypothesis("A^-1", &inv, &mono(&[("|A|", na, 4, 7)]), CosetKind::Affine)?;
    let (lhs, formula) = if c.claim == "C6-SRI-sum" {
        (inv.sumset(&inv)?.len(), "|1/A + 1/A|")
    } else {
        (inv.difference_set(&inv)?.len(), "|1/A - 1/A|")
    };
    Ok(c.report(
        vec![hyp],
        Direction::Lower,
        Aggregate::Min,
        formula,
        lhs as u128,
        vec![term(&[("|A|", na, 22, 21)]), term(&[("q", q, 1, 19), ("|A|", na, 18, 19)])],
    )
    .with_log("(log|A|)^(-1/3)", ln(c.a.len()).powf(-1.0 / 3.0))
    .note("additive_group", group))
}

fn exact_forms(c: &Ctx) -> Result<RatioReport> {
    let (na, nb, q) = (c.a.len() as u64, c.b.len() as u64, c.q());
    let grid = PointSet::cartesian(&c.a, &c.b)?;
    Ok(match c.claim {
        "trivial-incidence" | "vinh" => {
            let lines = cartesian_lines(&c.a, &c.b);
            let (np, nl) = (na * nb, lines.len() as u64);
            let i = incidences(&grid, &lines)?;
            if c.claim == "vinh" {
                let expected = np as u128 * nl as u128;
                let scaled = q as u128 * i;
                c.report(
                    vec![],
                    Direction::Upper,
                    Aggregate::Max,
                    "|q I(P,L) - |P||L||",
                    scaled.abs_diff(expected),
                    vec![term(&[("q", q, 3, 2), ("|P|", np, 1, 2), ("|L|", nl, 1, 2)])],
                )
                .note("I", i)
                .note("large_sets", np >= q && nl >= q)
            } else {
                c.report(
                    vec![],
                    Direction::Upper,
                    Aggregate::Min,
                    "I(P,L)",
                    i,
                    vec![
                        RhsTerm::new(vec![mono(&[("|P|", np, 1, 2), ("|L|", nl, 1, 1)]), mono(&[("|P|", np, 1, 1)])]),
                        RhsTerm::new(vec![mono(&[("|L|", nl, 1, 2), ("|P|", np, 1, 1)]), mono(&[("|L|", nl, 1, 1)])]),
                    ],
                )
            }
            .note("points", "A x B")
            .note("lines", "y = cx + d, c in A, d in B")
        }
        "triples-trivial" => c.report(
            vec![],
            Direction::Upper,
            Aggregate::Max,
            "T(A,B)",
            collinear_triples(&c.a, &c.b, c.opts.triple_mode)?,
            vec![term(&[("|A|", na, 2, 1), ("|B|", nb, 2, 1), ("min(|A|,|B|)", na.min(nb), 1, 1)])],
        ),
        _ => {
            let r = c.report(
                vec![],
                Direction::Upper,
                Aggregate::Max,
                "T*(A,B)",
                nontrivial_collinear_triples(&c.a, &c.b, c.opts.triple_mode)?,
                vec![term(&[
                    ("|A|", na, 1, 1),
                    ("|A|-1", na - 1, 1, 1),
                    ("|B|", nb, 1, 1),
                    ("|B|-1", nb - 1, 1, 1),
                    ("min(|A|-1,|B|-1)", (na - 1).min(nb - 1), 1, 1),
                ])],
            );
            let eq = r.rhs_terms[0].bracket.is_exact()
                && r.rhs_terms[0].bracket.floor() == num_rational::BigRational::from_integer(r.lhs.into());
            r.note("equality", eq)
        }
    })
}

fn pow(x: usize, e: u32) -> Result<u128> {
    (x as u128).checked_pow(e).ok_or(Error::Overflow)
}

fn sum_ratio(c: &Ctx) -> Result<RatioReport> {
    require_nonzero(&c.a)?;
    if c.a.len() < 2 {
        return Err(Error::InvalidParams("needs |A| >= 2".into()));
    }
    let (en, ed) = c.opts.eta;
    if en == 0 || ed == 0 || en > ed {
        return Err(Error::InvalidParams(format!("eta = {en}/{ed} outside (0, 1]")));
    }
    let (na, q) = (c.a.len() as u64, c.q());
    let thr = mono(&[("|A|", na, 1, 1), (&en.to_string(), en, 1, 1), (&ed.to_string(), ed, -1, 1)]);
    let hyp = check_hypothesis("A", &c.a, &thr, CosetKind::Linear)?;
    let (s, name) = if c.claim.ends_with("difference") {
        (c.a.difference_set(&c.a)?.len(), "|A-A|")
    } else {
        (c.a.sumset(&c.a)?.len(), "|A+A|")
    };
    let r = c.a.ratio_set(&c.a)?.len();
    let second = c.claim.contains("second");
    let (ks, kr) = if second { (6, 5) } else { (7, 4) };
    let lhs = pow(s, ks)?.checked_mul(pow(r, kr)?).ok_or(Error::Overflow)?;
    let large = c.claim.contains("large");
    let rhs = if large { term(&[("|A|", na, 10, 1), ("q", q, 1, 1)]) } else { term(&[("|A|", na, 12, 1)]) };
    let rep = c
        .report(vec![hyp], Direction::Lower, Aggregate::Min, &format!("{name}^{ks} |A/A|^{kr}"), lhs, vec![rhs])
        .note(name, s)
        .note("|A/A|", r);
    Ok(if large {
        // |A| > q^(1/2) / eta
        let applies = (na as u128 * en as u128).pow(2) > q as u128 * (ed as u128).pow(2);
        rep.note("branch_applies", applies)
    } else {
        rep
    })
}

fn energy_conclusion(c: &Ctx) -> Result<RatioReport> {
    let (dn, dd) = c.opts.delta;
    if dn <= 0 || dn as u64 > dd {
        return Err(Error::InvalidParams(format!("delta = {dn}/{dd} outside (0, 1]")));
    }
    let (na, q) = (c.a.len() as u64, c.q());
    let hyp = check_hypothesis("A", &c.a, &mono(&[("|A|", na, dd as i64 - dn, dd)]), CosetKind::Linear)?;
    let (s, name) = if c.claim == "energy-sumset" {
        (c.a.sumset(&c.a)?.len() as u64, "|A+A|")
    } else {
        (c.a.difference_set(&c.a)?.len() as u64, "|A-A|")
    };
    Ok(c.report(
        vec![hyp],
        Direction::Upper,
        Aggregate::Max,
        "Ex(A)",
        rep_function(&c.a, &c.a, OpKind::Product)?.sum_squares(),
        vec![
            term(&[(name, s, 7, 4), ("|A|", na, 1, 1)]),
            term(&[(name, s, 6, 5), ("|A|", na, 8, 5)]),
            term(&[("|A|", na, 6 * dd as i64 - dn, 2 * dd)]),
            term(&[(name, s, 7, 4), ("|A|", na, 3, 2), ("q", q, -1, 4)]),
        ],
    )
    .with_log("log|A|", ln(c.a.len()))
    .note(name, s))
}
