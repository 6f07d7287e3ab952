use crate::args::*;
use anyhow::{Context, Result};
use fqlab::incidence::{compute_stats, StatKind, StatReport, TripleMode};
use fqlab::lemma::{
    bourgain_trace, bsg_extract, parse_ratio, pivot_trace, plunnecke_refined_trace, plunnecke_trace, popularity_trace,
    quotient_classify_trace, reciprocal_trace, shen_cover_trace, trace_claim1_chain, LemmaTrace, PassState, LEMMA_IDS,
};
use fqlab::report::{Instance, SetDescriptor, TOOL_VERSION};
use fqlab::set::{read_set_file, FamilyKind};
use fqlab::verifier::{
    appendix_a_conclusion_report, evaluate_theorem, extremal_search, quotient_full_check, run_law_suite, run_sweep,
    AppendixReport, EvalOptions, LawSuite, RatioReport, SweepResult, SweepSpec, CLAIM_IDS,
};
use fqlab::{Error, FSet, Family, Field, PairGraph};
use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

const VIOLATION: u8 = 5;

pub fn run(cli: Cli) -> Result<u8> {
    let cache = cli.cache_dir.as_deref();
    match cli.command {
        Command::Stat(a) => stat(a),
        Command::Verify(v) => match v.what {
            VerifyCommand::ExactLaws(a) => exact_laws(a, cache),
            VerifyCommand::Claim(a) => claim(a),
            VerifyCommand::Appendix(a) => appendix(a),
            VerifyCommand::QuotientFull(a) => quotient_full(a),
        },
        Command::Sweep(a) => sweep(a, cache),
        Command::Lemma(a) => lemma(a),
        Command::Search(a) => search(a),
        Command::Replay(a) => replay(&a.file),
    }
}

// ---------------------------------------------------------------- inputs

fn field_from_args(f: &FieldArgs) -> Result<Option<Field>> {
    Ok(match (f.q, f.p) {
        (Some(q), _) => Some(Field::of_order(q)?),
        (None, Some(p)) => Some(Field::with_degree(p, f.m)?),
        (None, None) => None,
    })
}

fn no_field() -> Error {
    Error::Parse("no field: give --p/--m, --q, or a set file".into())
}

/// One set from a descriptor or a file, with its source label. A file
/// may also fix the field.
fn load_set(field: &mut Option<Field>, family: Option<&str>, file: Option<&Path>, seed: u64) -> Result<Option<(FSet, String)>> {
    match (family, file) {
        (Some(_), Some(_)) => Err(Error::Parse("give a family or a set file, not both".into()).into()),
        (None, None) => Ok(None),
        (None, Some(path)) => {
            let s = read_set_file(path, field.as_ref())?;
            field.get_or_insert_with(|| s.field().clone());
            Ok(Some((s, path.display().to_string())))
        }
        (Some(desc), None) => {
            let f = field.as_ref().ok_or_else(no_field)?;
            let s = Family::parse(desc, seed)?.generate(f)?;
            Ok(Some((s, desc.to_string())))
        }
    }
}

struct Pair {
    field: Field,
    a: (FSet, String),
    b: Option<(FSet, String)>,
}

impl Pair {
    fn load(fa: &FieldArgs, sa: &SetArgs, seed: u64) -> Result<Pair> {
        let mut field = field_from_args(fa)?;
        let a = load_set(&mut field, sa.family.as_deref(), sa.set.as_deref(), seed)?
            .ok_or_else(|| Error::Parse("missing set A: give --family or --set".into()))?;
        let b = load_set(&mut field, sa.family_b.as_deref(), sa.set_b.as_deref(), seed.wrapping_add(1))?;
        Ok(Pair { field: field.ok_or_else(no_field)?, a, b })
    }

    fn b(&self) -> &(FSet, String) {
        self.b.as_ref().unwrap_or(&self.a)
    }

    fn instance(&self, seed: u64, with_b: bool) -> Instance {
        let inst = Instance::new(self.field.spec(), Some(seed)).with_set("A", &self.a.1, &self.a.0);
        if with_b {
            inst.with_set("B", &self.b().1, &self.b().0)
        } else {
            inst
        }
    }
}

fn ratio_tuple(s: &str) -> Result<(i64, u64)> {
    let r = parse_ratio(s)?;
    let n = i64::try_from(r.numer()).map_err(|_| Error::Parse(format!("`{s}` out of range")))?;
    let d = u64::try_from(r.denom()).map_err(|_| Error::Parse(format!("`{s}` out of range")))?;
    Ok((n, d))
}

fn eval_options(o: &ClaimOpts) -> Result<EvalOptions> {
    let mut opts = EvalOptions::default();
    if let Some(m) = &o.triple_mode {
        opts.triple_mode = m.parse()?;
    }
    if let Some(d) = &o.delta {
        opts.delta = ratio_tuple(d)?;
    }
    if let Some(e) = &o.eta {
        let (n, d) = ratio_tuple(e)?;
        let n = u64::try_from(n).map_err(|_| Error::InvalidParams("eta must be positive".into()))?;
        opts.eta = (n, d);
    }
    opts.alpha = o.alpha.clone();
    Ok(opts)
}

fn parse_sizes(s: &str) -> Result<Vec<u64>> {
    let bad = || Error::Parse(format!("bad size list `{s}`"));
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let (lo, hi, step) = match parts[..] {
            [a, b] => (num(a)?, num(b)?, 1),
            [a, b, c] => (num(a)?, num(b)?, num(c)?),
            _ => return Err(bad().into()),
        };
        if step == 0 || lo > hi {
            return Err(bad().into());
        }
        Ok((lo..=hi).step_by(step as usize).collect())
    } else {
        Ok(s.split(',').map(num).collect::<Result<_, _>>()?)
    }
}

// ---------------------------------------------------------------- outputs

fn wants_csv(format: Option<Format>, out: Option<&Path>) -> bool {
    match format {
        Some(f) => f == Format::Csv,
        None => out.is_some_and(|p| p.extension().is_some_and(|e| e == "csv")),
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

/// Report body goes to `--out` with the summary on stdout, or to stdout
/// with the summary on stderr.
fn finish(out: Option<&Path>, body: &str, summary: &str) -> Result<()> {
    match out {
        Some(p) => {
            std::fs::write(p, body).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            print!("{summary}");
        }
        None => {
            print!("{body}");
            eprint!("{summary}");
        }
    }
    Ok(())
}

fn table(rows: &[(String, String)]) -> String {
    let w = rows.iter().map(|r| r.0.chars().count()).max().unwrap_or(0);
    rows.iter().fold(String::new(), |mut s, (k, v)| {
        let _ = writeln!(s, "{k:<w$}  {v}");
        s
    })
}

fn row(k: impl Into<String>, v: impl ToString) -> (String, String) {
    (k.into(), v.to_string())
}

fn fmt_ratio(r: Option<f64>) -> String {
    r.map_or("-".into(), |x| format!("{x:.6}"))
}

/// Memoizes `compute` under `dir`, keyed by a hash of `key` and the tool
/// version.
fn cached<K: Serialize, T: Serialize + DeserializeOwned>(
    dir: Option<&Path>,
    kind: &str,
    key: &K,
    compute: impl FnOnce() -> fqlab::Result<T>,
) -> Result<T> {
    let Some(dir) = dir else { return Ok(compute()?) };
    let digest = Sha256::digest(serde_json::to_vec(&(kind, TOOL_VERSION, key))?);
    let path = dir.join(format!("{kind}-{digest:x}.json"));
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok(v) = serde_json::from_str(&text) {
            return Ok(v);
        }
    }
    let v = compute()?;
    std::fs::create_dir_all(dir).with_context(|| format!("cache dir {}", dir.display()))?;
    std::fs::write(&path, serde_json::to_vec(&v)?).with_context(|| format!("cache file {}", path.display()))?;
    Ok(v)
}

// ---------------------------------------------------------------- commands

fn stat(args: StatArgs) -> Result<u8> {
    let kinds = StatKind::parse_list(&args.stats)?;
    let mode: TripleMode = args.triple_mode.parse()?;
    let pair = Pair::load(&args.field, &args.sets, args.out.seed)?;
    let (a, b) = (&pair.a.0, &pair.b().0);
    let report = compute_stats(pair.instance(args.out.seed, true), a, b, &kinds, mode)?;
    let body = if wants_csv(args.out.format, args.out.out.as_deref()) { stat_csv(&report, &kinds)? } else { to_json(&report)? };
    let mut rows = vec![
        row("field", format!("F_{}^{} (q = {})", pair.field.p(), pair.field.m(), pair.field.q())),
        row("|A|", a.len()),
        row("|B|", b.len()),
    ];
    rows.extend(kinds.iter().map(|k| row(k.key(), report.stats.get(k.key()).map_or("-", String::as_str))));
    for f in &report.flags {
        rows.push(row("flag", f));
    }
    finish(args.out.out.as_deref(), &body, &table(&rows))?;
    Ok(0)
}

fn stat_csv(report: &StatReport, kinds: &[StatKind]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(StatReport::csv_header(kinds))?;
    w.write_record(report.csv_row(kinds))?;
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn exact_laws(args: ExactLawArgs, cache: Option<&Path>) -> Result<u8> {
    let fields = args.q.iter().map(|&q| Field::of_order(q)).collect::<fqlab::Result<Vec<_>>>()?;
    let suite: LawSuite =
        cached(cache, "laws", &(&args.q, args.trials, args.out.seed), || run_law_suite(&fields, args.trials, args.out.seed))?;
    let mut rows = vec![row("law", "evaluated  violations  equalities")];
    for l in &suite.laws {
        let tag = if l.informational { " (informational)" } else { "" };
        rows.push(row(&l.law, format!("{:>9}  {:>10}  {:>10}{tag}", l.evaluated, l.violations, l.equalities)));
    }
    let failed = !suite.counterexamples.is_empty();
    rows.push(row("result", if failed { "VIOLATION" } else { "ok" }));
    finish(args.out.out.as_deref(), &to_json(&suite)?, &table(&rows))?;
    Ok(if failed { VIOLATION } else { 0 })
}

fn check_claim(id: &str) -> Result<()> {
    if CLAIM_IDS.contains(&id) {
        Ok(())
    } else {
        Err(Error::UnknownClaim(id.to_string()).into())
    }
}

fn report_rows(r: &RatioReport) -> Vec<(String, String)> {
    let mut rows = vec![
        row("claim", &r.claim),
        row("instance", r.instance.label()),
        row("hypothesis", r.hypothesis_summary()),
        row(format!("lhs {}", r.lhs_formula), r.lhs),
    ];
    for (i, t) in r.rhs_terms.iter().enumerate() {
        let mark = if i == r.binding { " *" } else { "" };
        rows.push(row(format!("rhs {}", t.formula), format!("{:.3}{mark}", t.approx)));
    }
    rows.push(row("ratio", fmt_ratio(r.ratio_approx)));
    if let Some(l) = &r.log_factor {
        rows.push(row(format!("log factor {}", l.formula), format!("{:.4}", l.value)));
    }
    rows.extend(r.extra.iter().map(|(k, v)| row(k, v)));
    rows
}

fn claim(args: ClaimArgs) -> Result<u8> {
    check_claim(&args.claim)?;
    let opts = eval_options(&args.opts)?;
    let pair = Pair::load(&args.field, &args.sets, args.out.seed)?;
    let mut r = evaluate_theorem(&args.claim, &pair.instance(args.out.seed, pair.b.is_some()), &opts)?;
    label_instance(&mut r.instance, &pair, args.out.seed);
    finish(args.out.out.as_deref(), &to_json(&r)?, &table(&report_rows(&r)))?;
    Ok(0)
}

/// Reports rebuild their instance from the bare sets; put the sources
/// and seed back.
fn label_instance(inst: &mut Instance, pair: &Pair, seed: u64) {
    inst.seed = Some(seed);
    for (name, d) in inst.sets.iter_mut() {
        let src = match name.as_str() {
            "A" => &pair.a,
            "B" => pair.b(),
            _ => continue,
        };
        if d.elems == src.0.elems() {
            *d = SetDescriptor::new(src.1.clone(), &src.0);
        }
    }
}

fn appendix(args: AppendixArgs) -> Result<u8> {
    let opts = eval_options(&args.opts)?;
    let pair = Pair::load(&args.field, &args.sets, args.out.seed)?;
    let mut r: AppendixReport = appendix_a_conclusion_report(&pair.a.0, &opts)?;
    label_instance(&mut r.instance, &pair, args.out.seed);
    for rep in r.reports.iter_mut() {
        label_instance(&mut rep.instance, &pair, args.out.seed);
    }
    let mut rows: Vec<_> = r.sizes.iter().map(|(k, v)| row(k, v)).collect();
    rows.push(row("eta*", format!("{:.6}", r.hypothesis.eta_star.to_f64())));
    rows.push(row("eta < 1/8 admissible", r.hypothesis.admissible));
    for rep in &r.reports {
        rows.push(row(&rep.claim, format!("ratio {}  hypothesis {}", fmt_ratio(rep.ratio_approx), rep.hypothesis_summary())));
    }
    finish(args.out.out.as_deref(), &to_json(&r)?, &table(&rows))?;
    Ok(0)
}

#[derive(Serialize)]
struct QuotientResult {
    q: u64,
    samples: Option<usize>,
    seed: u64,
    checked: u64,
    violations: u64,
}

fn quotient_full(args: QuotientArgs) -> Result<u8> {
    let f = field_from_args(&args.field)?.ok_or_else(no_field)?;
    let (checked, violations) = quotient_full_check(&f, args.samples, args.out.seed)?;
    let res = QuotientResult { q: f.q(), samples: args.samples, seed: args.out.seed, checked, violations };
    let rows = [row("q", f.q()), row("sets checked", checked), row("violations", violations)];
    finish(args.out.out.as_deref(), &to_json(&res)?, &table(&rows))?;
    Ok(if violations > 0 { VIOLATION } else { 0 })
}

fn sweep_spec(args: &SweepArgs) -> Result<(SweepSpec, Option<PathBuf>)> {
    if let Some(path) = &args.spec {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut spec: SweepSpec = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let out = args.out.out.clone().or(spec.output.take());
        return Ok((spec, out));
    }
    let need = |v: &Option<String>, flag: &str| v.clone().ok_or_else(|| Error::Parse(format!("sweep needs --{flag} or --spec")));
    let mut fields = args.q.clone();
    if let Some(p) = args.p {
        fields.insert(0, Field::with_degree(p, args.m)?.q());
    }
    let spec = SweepSpec {
        claim: need(&args.claim, "claim")?,
        family: need(&args.family, "family")?,
        sizes: parse_sizes(&need(&args.sizes, "sizes")?)?,
        fields,
        b_family: args.family_b.clone(),
        seed: args.out.seed,
        options: eval_options(&args.opts)?,
        output: None,
    };
    Ok((spec, args.out.out.clone()))
}

fn sweep(args: SweepArgs, cache: Option<&Path>) -> Result<u8> {
    let (spec, out) = sweep_spec(&args)?;
    check_claim(&spec.claim)?;
    let res: SweepResult = cached(cache, "sweep", &spec, || run_sweep(&spec))?;
    let body = if wants_csv(args.out.format, out.as_deref()) { res.to_csv()? } else { to_json(&res)? };
    let s = &res.summary;
    let rows = [
        row("claim", &spec.claim),
        row("rows", s.rows),
        row("errors", s.errors),
        row("max ratio", fmt_ratio(s.max_ratio_approx)),
        row("argmax", s.argmax_family.as_deref().unwrap_or("-")),
    ];
    finish(out.as_deref(), &body, &table(&rows))?;
    Ok(0)
}

fn lemma(args: LemmaArgs) -> Result<u8> {
    if !LEMMA_IDS.contains(&args.lemma.as_str()) {
        return Err(Error::UnknownLemma(args.lemma.clone()).into());
    }
    let seed = args.out.seed;
    let mut field = field_from_args(&args.field)?;
    let (x, _) = load_set(&mut field, args.family_x.as_deref(), args.set_x.as_deref(), seed)?
        .ok_or_else(|| Error::Parse("missing X: give --setX or --familyX".into()))?;
    let mut ys = Vec::new();
    for p in &args.set_y {
        ys.push(load_set(&mut field, None, Some(p), seed)?.expect("file given").0);
    }
    for (i, d) in args.family_y.iter().enumerate() {
        ys.push(load_set(&mut field, Some(d), None, seed.wrapping_add(1 + i as u64))?.expect("family given").0);
    }
    let y = ys.first().cloned().unwrap_or_else(|| x.clone());
    let eps = parse_ratio(&args.eps)?;
    let mut t: LemmaTrace = match args.lemma.as_str() {
        "popularity" => {
            let w = args.weights.as_ref().ok_or_else(|| Error::Parse("popularity needs --weights".into()))?;
            let k = args.k.ok_or_else(|| Error::Parse("popularity needs --k".into()))?;
            popularity_trace(&x, w, k)?
        }
        "shen_cover" => shen_cover_trace(&x, &y, &eps, args.cover.parse()?)?,
        "plunnecke" => plunnecke_trace(&x, if ys.is_empty() { std::slice::from_ref(&y) } else { &ys })?,
        "plunnecke_refined" => {
            plunnecke_refined_trace(&x, if ys.is_empty() { std::slice::from_ref(&y) } else { &ys }, &eps)?
        }
        "bsg" => bsg_extract(&PairGraph::full(x.clone(), y.clone())?, args.form.parse()?)?,
        "bourgain" => bourgain_trace(&x, &y)?,
        "quotient_classify" => quotient_classify_trace(&x)?,
        "pivot" => pivot_trace(&x, &y)?,
        "reciprocal_energy_lines" => reciprocal_trace(&x, &y)?,
        "claim1_chain" => trace_claim1_chain(&x, &y)?,
        _ => unreachable!("checked against LEMMA_IDS"),
    };
    t.instance.seed = Some(seed);
    let mut rows = vec![row("lemma", &t.lemma), row("status", format!("{:?}", t.status))];
    for g in &t.guarantees {
        let verdict = if g.holds { "holds" } else { "fails" };
        rows.push(row(&g.id, format!("lhs {}  rhs {:.4}  {verdict}", g.lhs, g.rhs.to_f64())));
    }
    finish(args.out.out.as_deref(), &to_json(&t)?, &table(&rows))?;
    Ok(if t.status == PassState::Fail { VIOLATION } else { 0 })
}

fn search(args: SearchArgs) -> Result<u8> {
    check_claim(&args.claim)?;
    let f = field_from_args(&args.field)?.ok_or_else(no_field)?;
    let kind = args.kind.as_deref().map(str::parse::<FamilyKind>).transpose()?;
    let opts = eval_options(&args.opts)?;
    let best = extremal_search(&args.claim, kind, &f, args.budget, args.max_size, args.out.seed, &opts)?;
    let rows = match &best {
        Some(e) => {
            let mut rows = vec![row("family", &e.family), row("evaluations", e.evaluations), row("improvements", e.improvements)];
            rows.extend(report_rows(&e.report));
            rows
        }
        None => vec![row("result", "no instance evaluated")],
    };
    finish(args.out.out.as_deref(), &to_json(&best)?, &table(&rows))?;
    Ok(0)
}

fn replay(path: &Path) -> Result<u8> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let parse = |e: serde_json::Error| Error::Parse(format!("{}: {e}", path.display()));
    let (kind, ok, detail) = if value.get("lemma").is_some() {
        let t: LemmaTrace = serde_json::from_value(value).map_err(parse)?;
        let r = t.replay()?;
        ("lemma trace", r.ok, r.mismatches.join("; "))
    } else if value.get("reports").is_some() {
        let a: AppendixReport = serde_json::from_value(value).map_err(parse)?;
        let bad: Vec<String> = a
            .reports
            .iter()
            .map(|r| Ok((r.claim.clone(), r.replay()?)))
            .collect::<fqlab::Result<Vec<_>>>()?
            .into_iter()
            .filter(|(_, ok)| !ok)
            .map(|(c, _)| c)
            .collect();
        ("conclusion report", bad.is_empty(), bad.join(", "))
    } else if value.get("claim").is_some() {
        let r: RatioReport = serde_json::from_value(value).map_err(parse)?;
        ("ratio report", r.replay()?, String::new())
    } else {
        return Err(Error::Parse(format!("{}: not a report or trace", path.display())).into());
    };
    if ok {
        println!("{kind}: replay ok");
        Ok(0)
    } else {
        println!("{kind}: replay MISMATCH {detail}");
        Ok(VIOLATION)
    }
}
