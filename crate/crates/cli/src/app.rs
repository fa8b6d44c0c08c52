//! Subcommands of `mdm`. Every handler returns an exit code and the report
//! text; `run` maps usage errors to code 3.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mdm_core::candidates::{
    adequacy_check, check_clfamorph, check_clramorph, check_clsubst, check_lambdacl, check_mink, check_monotone,
    closure, ClosureBounds, ClosureTable, LemmaReport, Typer, UniversalContext, Universe,
};
use mdm_core::reduction::{normalize, reduction_tree, sn_verdict, NormalizeOutcome, SnVerdict};
use mdm_core::rewriting::{detect_confusion, enumerate_props, enumerate_terms, parse_theory, CongruenceVerdict, Theory};
use mdm_core::semantics::{
    check_model2, format_env, is_model_inductive, parse_table, powerset_algebra, PowersetAlgebra, PreHeyting,
    ValuedStructure,
};
use mdm_core::syntax::{name, parse_env, parse_proof, parse_prop, Env, Name, Proof, Prop, Style, Term};
use mdm_core::typing::{check_derivation, erase_derivation, parse_drv_many, print_drv, Derivation};
use mdm_core::Verdict;
use serde::Serialize;

use crate::bundled;
use crate::corpus::{base_context, corpus_theory, generate, CorpusConfig};
use crate::suite::{self, Scale};

pub const DEFAULT_FUEL: usize = 10_000;
pub const FUEL_ENV: &str = "MDM_FUEL_DEFAULT";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "mdm", version, about = "Proof checking, normalization and semantics for minimal deduction modulo")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StyleArg {
    Curry,
    Church,
}

impl From<StyleArg> for Style {
    fn from(s: StyleArg) -> Style {
        match s {
            StyleArg::Curry => Style::Curry,
            StyleArg::Church => Style::Church,
        }
    }
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be strictly positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check every derivation of a .drv file.
    Check {
        theory: String,
        derivations: String,
        #[arg(long, value_enum, default_value_t = StyleArg::Curry)]
        style: StyleArg,
        #[arg(long, value_parser = positive)]
        fuel: Option<usize>,
    },
    /// Leftmost-outermost reduction to normal form.
    Normalize {
        term: String,
        #[arg(long, value_enum, default_value_t = StyleArg::Curry)]
        style: StyleArg,
        #[arg(long, value_parser = positive)]
        fuel: Option<usize>,
    },
    /// Strong normalization verdict.
    Sn {
        term: String,
        #[arg(long, value_enum, default_value_t = StyleArg::Curry)]
        style: StyleArg,
        #[arg(long, value_parser = positive)]
        fuel: Option<usize>,
    },
    /// Reduction tree as a Graphviz graph.
    Tree {
        term: String,
        #[arg(long, value_enum, default_value_t = StyleArg::Curry)]
        style: StyleArg,
        #[arg(long, value_parser = positive, default_value_t = 100)]
        budget: usize,
    },
    /// Erase Church derivations to Curry ones and check them.
    Erase {
        theory: String,
        derivations: String,
        #[arg(long, value_parser = positive)]
        fuel: Option<usize>,
    },
    /// Search for an implication congruent to a universal proposition.
    Confusion {
        theory: String,
        #[arg(long, value_parser = positive, default_value_t = 5)]
        size: usize,
        #[arg(long, value_parser = positive)]
        fuel: Option<usize>,
    },
    /// Check that a valued structure or a table is a model of a theory.
    ModelCheck(ModelCheckArgs),
    /// Stages of the closure of a proposition.
    Closure(ClosureArgs),
    /// Lemma verification over candidate tables.
    Candidates {
        #[command(subcommand)]
        command: CandidatesCommand,
    },
    /// Random well-typed derivations.
    Corpus {
        #[command(subcommand)]
        command: CorpusCommand,
    },
    /// Run the acceptance battery.
    Suite {
        /// Smaller corpora and universe.
        #[arg(long)]
        quick: bool,
        /// Criteria to run, e.g. `1,3,8`; all by default.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
pub struct ModelCheckArgs {
    pub theory: String,
    /// `powerset:N` with 1 <= N <= 5.
    #[arg(long, default_value = "powerset:2")]
    pub algebra: String,
    /// Number of closed terms in the universe.
    #[arg(long, value_parser = positive, default_value_t = 2)]
    pub universe_size: usize,
    /// Size bound of the sampled propositions.
    #[arg(long, value_parser = positive, default_value_t = 5)]
    pub prop_size: usize,
    /// Constant value of every atom when no table is given.
    #[arg(long, default_value = "top")]
    pub value: String,
    #[arg(long, value_parser = positive)]
    pub fuel: Option<usize>,
    #[arg(long)]
    pub table: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct BoundsArgs {
    /// Universe term size bound.
    #[arg(long, value_parser = positive, default_value_t = 5)]
    pub size: usize,
    /// Last stage index.
    #[arg(long = "k", value_parser = positive, default_value_t = 3)]
    pub k: usize,
    /// Derivation depth for stage 0.
    #[arg(long, value_parser = positive, default_value_t = 3)]
    pub depth: usize,
    #[arg(long, value_parser = positive)]
    pub fuel: Option<usize>,
    /// Slice of the universal context: `;`-separated propositions, each
    /// optionally followed by `*count`. Defaults to the subformulas of the
    /// propositions involved, one name each.
    #[arg(long)]
    pub slice: Option<String>,
    /// The same bounds as one list, e.g. `size=7,k=3,depth=3,fuel=100`;
    /// overrides the separate flags.
    #[arg(long)]
    pub bounds: Option<String>,
}

impl BoundsArgs {
    fn resolved(&self) -> Result<BoundsArgs> {
        let mut b = self.clone();
        let Some(list) = &self.bounds else { return Ok(b) };
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| anyhow!("bound `{item}` is not of the form key=value"))?;
            let n: usize = value.trim().parse().with_context(|| format!("bound `{item}`"))?;
            if n == 0 {
                bail!("bound `{item}` must be strictly positive");
            }
            match key.trim() {
                "size" => b.size = n,
                "k" => b.k = n,
                "depth" => b.depth = n,
                "fuel" => b.fuel = Some(n),
                other => bail!("unknown bound `{other}`; expected size, k, depth or fuel"),
            }
        }
        Ok(b)
    }
}

#[derive(Args, Debug)]
pub struct ClosureArgs {
    pub theory: String,
    #[arg(long)]
    pub prop: String,
    #[arg(long, default_value = "")]
    pub env: String,
    #[command(flatten)]
    pub bounds: BoundsArgs,
    /// Write the stage dump as JSON.
    #[arg(long)]
    pub emit: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum CandidatesCommand {
    /// Check one lemma within bounds.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LemmaArg {
    Mink,
    Monotone,
    Clramorph,
    Clsubst,
    Clfamorph,
    Lambdacl,
    Adequacy,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub theory: String,
    #[arg(long, value_enum)]
    pub lemma: LemmaArg,
    /// Main proposition (`A`).
    #[arg(long)]
    pub a: Option<String>,
    /// Second proposition (`B`) for clramorph and lambdacl.
    #[arg(long)]
    pub b: Option<String>,
    /// Substituted variable for clsubst and clfamorph.
    #[arg(long, default_value = "x")]
    pub var: String,
    /// Comma-separated instance terms for clsubst and clfamorph.
    #[arg(long, default_value = "c,w")]
    pub terms: String,
    /// Derivation file for adequacy.
    #[arg(long)]
    pub drv: Option<String>,
    /// Depth of the rerun when the bounded run reports violations.
    #[arg(long, value_parser = positive, default_value_t = 8)]
    pub relaxed_depth: usize,
    #[command(flatten)]
    pub bounds: BoundsArgs,
}

#[derive(Subcommand, Debug)]
pub enum CorpusCommand {
    /// Print derivations of the corpus theory (`examples/corpus.mdm`).
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = positive, default_value_t = 50)]
        count: usize,
        #[arg(long, value_enum, default_value_t = StyleArg::Curry)]
        style: StyleArg,
        #[arg(long, value_parser = positive, default_value_t = 10)]
        max_size: usize,
        #[arg(long, value_parser = positive)]
        fuel: Option<usize>,
        /// Write the derivations to this file instead of the report stream.
        #[arg(long)]
        out: Option<String>,
    },
}

/// Exit code and report.
pub struct Outcome {
    pub code: i32,
    pub out: String,
}

fn outcome(code: i32, out: String) -> Result<Outcome> {
    Ok(Outcome { code, out })
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Pass => EXIT_PASS,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Unknown => EXIT_UNKNOWN,
    }
}

/// `--fuel`, else `MDM_FUEL_DEFAULT`, else the built-in default.
pub fn resolve_fuel(flag: Option<usize>) -> Result<usize> {
    if let Some(f) = flag {
        return Ok(f);
    }
    match std::env::var(FUEL_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => bail!("{FUEL_ENV} must be a positive integer, found `{v}`"),
        },
        Err(_) => Ok(DEFAULT_FUEL),
    }
}

/// A theory file, or the name of a bundled theory.
pub fn load_theory(arg: &str) -> Result<Theory> {
    let path = Path::new(arg);
    if !path.exists() {
        if let Some(t) = bundled::theory(arg) {
            return Ok(t);
        }
    }
    let text = std::fs::read_to_string(path).with_context(|| format!("reading theory `{arg}`"))?;
    parse_theory(&text).with_context(|| format!("parsing theory `{arg}`"))
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading `{path}`"))
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

/// Parses `argv` and runs the command. Parse failures give code 3, except
/// help and version requests which give 0.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            return Outcome {
                code,
                out: e.render().to_string(),
            };
        }
    };
    match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => Outcome {
            code: EXIT_USAGE,
            out: format!("error: {e:#}\n"),
        },
    }
}

pub fn dispatch(cli: &Cli) -> Result<Outcome> {
    let fmt = cli.format;
    match &cli.command {
        Command::Check {
            theory,
            derivations,
            style,
            fuel,
        } => cmd_check(fmt, theory, derivations, (*style).into(), resolve_fuel(*fuel)?),
        Command::Normalize { term, style, fuel } => cmd_normalize(fmt, term, (*style).into(), resolve_fuel(*fuel)?),
        Command::Sn { term, style, fuel } => cmd_sn(fmt, term, (*style).into(), resolve_fuel(*fuel)?),
        Command::Tree { term, style, budget } => cmd_tree(fmt, term, (*style).into(), *budget),
        Command::Erase {
            theory,
            derivations,
            fuel,
        } => cmd_erase(fmt, theory, derivations, resolve_fuel(*fuel)?),
        Command::Confusion { theory, size, fuel } => cmd_confusion(fmt, theory, *size, resolve_fuel(*fuel)?),
        Command::ModelCheck(a) => cmd_model_check(fmt, a),
        Command::Closure(a) => cmd_closure(fmt, a),
        Command::Candidates {
            command: CandidatesCommand::Verify(a),
        } => cmd_verify(fmt, a),
        Command::Corpus {
            command:
                CorpusCommand::Gen {
                    seed,
                    count,
                    style,
                    max_size,
                    fuel,
                    out,
                },
        } => cmd_corpus(*seed, *count, (*style).into(), *max_size, resolve_fuel(*fuel)?, out.as_deref()),
        Command::Suite { quick, only, seed } => cmd_suite(fmt, *quick, only, *seed),
    }
}

#[derive(Serialize)]
struct CheckEntry {
    index: usize,
    subject: String,
    prop: String,
    ok: bool,
    failure: Option<String>,
    fuel_spent: usize,
}

fn check_all(theory: &Theory, ds: &[Derivation], fuel: usize) -> Vec<CheckEntry> {
    ds.iter()
        .enumerate()
        .map(|(index, d)| {
            let r = check_derivation(theory, d, fuel);
            CheckEntry {
                index,
                subject: d.subject().to_string(),
                prop: d.prop().to_string(),
                ok: r.is_ok(),
                failure: r.failure.as_ref().map(ToString::to_string),
                fuel_spent: r.fuel_spent(),
            }
        })
        .collect()
}

fn render_checks(fmt: Format, entries: &[CheckEntry]) -> Result<Outcome> {
    let code = if entries.iter().all(|e| e.ok) { EXIT_PASS } else { EXIT_FAIL };
    if fmt == Format::Json {
        return outcome(code, json(&entries)?);
    }
    let mut out = String::new();
    for e in entries {
        match &e.failure {
            None => writeln!(out, "ok   #{} {} : {} (fuel {})", e.index, e.subject, e.prop, e.fuel_spent)?,
            Some(f) => writeln!(out, "FAIL #{} {} : {}: {f}", e.index, e.subject, e.prop)?,
        }
    }
    outcome(code, out)
}

fn cmd_check(fmt: Format, theory: &str, path: &str, style: Style, fuel: usize) -> Result<Outcome> {
    let t = load_theory(theory)?;
    let ds = parse_drv_many(&read(path)?, style, Some(&t.signature)).with_context(|| format!("parsing `{path}`"))?;
    if ds.is_empty() {
        bail!("`{path}` holds no derivation");
    }
    render_checks(fmt, &check_all(&t, &ds, fuel))
}

fn cmd_erase(fmt: Format, theory: &str, path: &str, fuel: usize) -> Result<Outcome> {
    let t = load_theory(theory)?;
    let ds = parse_drv_many(&read(path)?, Style::Church, Some(&t.signature)).with_context(|| format!("parsing `{path}`"))?;
    let erased: Vec<Derivation> = ds.iter().map(erase_derivation).collect();
    let entries = check_all(&t, &erased, fuel);
    if fmt == Format::Json {
        return render_checks(fmt, &entries);
    }
    let code = if entries.iter().all(|e| e.ok) { EXIT_PASS } else { EXIT_FAIL };
    let mut out = String::new();
    for (d, e) in erased.iter().zip(&entries) {
        writeln!(out, "# {}", if e.ok { "checks" } else { "does not check" })?;
        writeln!(out, "{}", print_drv(d))?;
    }
    outcome(code, out)
}

fn term_arg(term: &str, style: Style) -> Result<Proof> {
    parse_proof(term, style, None).with_context(|| format!("parsing proof-term `{term}`"))
}

fn cmd_normalize(fmt: Format, term: &str, style: Style, fuel: usize) -> Result<Outcome> {
    let (_, o) = normalize(&term_arg(term, style)?, fuel);
    let code = match o {
        NormalizeOutcome::Normal { .. } => EXIT_PASS,
        NormalizeOutcome::OutOfFuel { .. } => EXIT_UNKNOWN,
    };
    let out = match (&o, fmt) {
        (_, Format::Json) => json(&o)?,
        (NormalizeOutcome::Normal { term, steps }, _) => format!("normal: {term} ({steps} steps)\n"),
        (NormalizeOutcome::OutOfFuel { term, steps }, _) => format!("unknown: no normal form within {steps} steps; reached {term}\n"),
    };
    outcome(code, out)
}

fn cmd_sn(fmt: Format, term: &str, style: Style, fuel: usize) -> Result<Outcome> {
    let v = sn_verdict(&term_arg(term, style)?, fuel);
    let code = match v {
        SnVerdict::Sn { .. } => EXIT_PASS,
        SnVerdict::Diverges { .. } => EXIT_FAIL,
        SnVerdict::Unknown { .. } => EXIT_UNKNOWN,
    };
    let out = match (&v, fmt) {
        (_, Format::Json) => json(&v)?,
        (SnVerdict::Sn { max_length, tree_size }, _) => {
            format!("sn: longest reduction {max_length}, reduction tree of {tree_size} nodes\n")
        }
        (SnVerdict::Diverges { cycle }, _) => {
            format!("diverges: cycle of length {}\n  {}\n", cycle.len(), cycle.join("\n  -> "))
        }
        (SnVerdict::Unknown { spent }, _) => format!("unknown: undecided after {spent} expansions\n"),
    };
    outcome(code, out)
}

fn cmd_tree(fmt: Format, term: &str, style: Style, budget: usize) -> Result<Outcome> {
    let t = reduction_tree(&term_arg(term, style)?, budget);
    let out = match fmt {
        Format::Json => json(&t)?,
        _ => t.to_dot(),
    };
    outcome(EXIT_PASS, out)
}

fn cmd_confusion(fmt: Format, theory: &str, size: usize, fuel: usize) -> Result<Outcome> {
    let t = load_theory(theory)?;
    let r = detect_confusion(&t, size, fuel);
    let code = match r.verdict {
        CongruenceVerdict::Yes { .. } => EXIT_FAIL,
        CongruenceVerdict::No => EXIT_PASS,
        CongruenceVerdict::Unknown { .. } => EXIT_UNKNOWN,
    };
    if fmt == Format::Json {
        return outcome(code, json(&r)?);
    }
    let out = match &r.witness {
        Some((a, b)) => format!("confusing: {a} ≡ {b}\n"),
        None if code == EXIT_PASS => format!(
            "non-confusing up to size {size}: {} implications and {} universal propositions compared\n",
            r.imp_props, r.forall_props
        ),
        None => format!("unknown: {} comparisons undecided within fuel\n", r.undecided),
    };
    outcome(code, out)
}

fn parse_algebra(s: &str) -> Result<PowersetAlgebra> {
    let n = s
        .strip_prefix("powerset:")
        .and_then(|n| n.parse::<u32>().ok())
        .ok_or_else(|| anyhow!("unknown algebra `{s}`; expected `powerset:N`"))?;
    powerset_algebra(n).ok_or_else(|| anyhow!("powerset:{n} is out of range; N must be between 1 and 5"))
}

fn closed_terms(t: &Theory, k: usize) -> Vec<Term> {
    let mut out = Vec::new();
    let mut size = 1;
    while out.len() < k && size <= 8 {
        out.extend(enumerate_terms(&t.signature, &[], size));
        size += 1;
    }
    out.truncate(k);
    out
}

fn cmd_model_check(fmt: Format, a: &ModelCheckArgs) -> Result<Outcome> {
    let t = load_theory(&a.theory)?;
    let alg = parse_algebra(&a.algebra)?;
    let fuel = resolve_fuel(a.fuel)?;
    let mut universe = closed_terms(&t, a.universe_size);
    let generic = universe.is_empty();
    if generic {
        universe.push(Term::var("u0"));
    }
    if let Some(path) = &a.table {
        let tab = parse_table(&read(path)?, &alg, &t.signature).with_context(|| format!("parsing table `{path}`"))?;
        let r = check_model2(&tab, &alg, &t, &universe, fuel);
        let code = if !r.passes() {
            EXIT_FAIL
        } else if r.unknown_pairs > 0 && r.congruence.checked == 0 {
            EXIT_UNKNOWN
        } else {
            EXIT_PASS
        };
        if fmt == Format::Json {
            return outcome(code, json(&r)?);
        }
        let mut out = String::new();
        for (label, c) in [("connectives", &r.connectives), ("substitution", &r.substitution), ("congruence", &r.congruence)] {
            writeln!(out, "{label}: {} checked, {} failed, {} skipped", c.checked, c.failed, c.skipped)?;
            for f in &c.failures {
                writeln!(out, "  {f}")?;
            }
        }
        writeln!(out, "{} congruence questions left open", r.unknown_pairs)?;
        return outcome(code, out);
    }
    let value = alg
        .parse_elem(&a.value)
        .ok_or_else(|| anyhow!("unknown element `{}`", a.value))?;
    let vs = ValuedStructure::constant(alg, t.signature.clone(), value);
    let binders = [name("x"), name("y")];
    let mut props = Vec::new();
    for s in 1..=a.prop_size {
        props.extend(enumerate_props(&t.signature, &[], &binders, s));
    }
    let r = is_model_inductive(&vs, &t, &props, &[Env::new()], &universe, fuel)?;
    if fmt == Format::Json {
        return outcome(verdict_code(r.verdict), json(&r)?);
    }
    let mut out = format!(
        "{}: {} pairs, {} congruent, {} undecided, universe of {} terms{}\n",
        r.verdict,
        r.pairs,
        r.congruent_pairs,
        r.unknown_pairs.len(),
        r.universe_size,
        if generic { " (no closed term; one generic element u0)" } else { "" }
    );
    if let Some(c) = &r.counterexample {
        writeln!(out, "  [{}] = {} but [{}] = {} at {{{}}}", c.lhs, c.lhs_value, c.rhs, c.rhs_value, c.env)?;
    }
    outcome(verdict_code(r.verdict), out)
}

fn subformulas(p: &Prop, out: &mut Vec<Prop>) {
    if out.iter().any(|q| q.alpha_eq(p)) {
        return;
    }
    out.push(p.clone());
    match p {
        Prop::Atom(..) => {}
        Prop::Imp(a, b) => {
            subformulas(a, out);
            subformulas(b, out);
        }
        Prop::Forall(_, b) => subformulas(b, out),
    }
}

fn parse_slice(t: &Theory, text: Option<&str>, props: &[Prop]) -> Result<UniversalContext> {
    let mut decls = Vec::new();
    match text {
        Some(s) => {
            for item in s.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                let (p, n) = match item.rsplit_once('*') {
                    Some((p, n)) => (p, n.trim().parse::<usize>().with_context(|| format!("bad count in `{item}`"))?),
                    None => (item, 1),
                };
                decls.push((parse_prop(p.trim(), Some(&t.signature))?, n));
            }
        }
        None => {
            let mut subs = Vec::new();
            for p in props {
                subformulas(p, &mut subs);
            }
            decls.extend(subs.into_iter().filter(|p| p.free_term_vars().is_empty()).map(|p| (p, 1)));
        }
    }
    Ok(UniversalContext::with_slice(&decls))
}

struct Lab {
    theory: Theory,
    delta: UniversalContext,
    universe: Universe,
    bounds: ClosureBounds,
}

fn lab(theory: Theory, b: &BoundsArgs, props: &[Prop]) -> Result<Lab> {
    let b = &b.resolved()?;
    let delta = parse_slice(&theory, b.slice.as_deref(), props)?;
    let mut universe = Universe::new(&delta.names(), b.size, 200);
    universe.prepare(2);
    let bounds = ClosureBounds {
        depth: b.depth,
        k_max: b.k,
        fuel: resolve_fuel(b.fuel)?,
    };
    Ok(Lab {
        theory,
        delta,
        universe,
        bounds,
    })
}

#[derive(Serialize)]
struct StageEntry {
    term: String,
    stage: usize,
    sn_max_length: Option<usize>,
}

#[derive(Serialize)]
struct ClosureSummary {
    prop: String,
    env: String,
    universe_size: usize,
    slice: Vec<String>,
    bounds: ClosureBounds,
    stage_sizes: Vec<usize>,
    boundary: Vec<usize>,
    fixpoint: bool,
    members: Vec<StageEntry>,
}

fn stage_dump(tab: &ClosureTable, u: &Universe) -> Vec<StageEntry> {
    tab.set()
        .ids()
        .map(|id| StageEntry {
            term: u.term(id).to_string(),
            stage: tab.first_stage[id].expect("members have a stage"),
            sn_max_length: u.max_length(id),
        })
        .collect()
}

fn cmd_closure(fmt: Format, a: &ClosureArgs) -> Result<Outcome> {
    let t = load_theory(&a.theory)?;
    let prop = parse_prop(&a.prop, Some(&t.signature))?;
    let env = parse_env(&a.env, Some(&t.signature))?;
    let lab = lab(t, &a.bounds, &[prop.subst_env(&env)])?;
    let terms: Vec<Term> = env.values().cloned().collect();
    let mut typer = Typer::new(&lab.theory, &lab.delta, std::slice::from_ref(&prop), &terms, lab.bounds.fuel);
    let tab = closure(&mut typer, &lab.universe, &prop, &env, lab.bounds);
    let members = stage_dump(&tab, &lab.universe);
    if let Some(path) = &a.emit {
        std::fs::write(path, json(&members)?).with_context(|| format!("writing `{path}`"))?;
    }
    let summary = ClosureSummary {
        prop: prop.to_string(),
        env: format_env(&env),
        universe_size: lab.universe.len(),
        slice: lab.delta.context().0.iter().map(|(n, p)| format!("{n}:{p}")).collect(),
        bounds: lab.bounds,
        stage_sizes: tab.stages.iter().map(|s| s.len()).collect(),
        boundary: tab.boundary.clone(),
        fixpoint: tab.is_fixpoint(),
        members,
    };
    if fmt == Format::Json {
        return outcome(EXIT_PASS, json(&summary)?);
    }
    let mut out = format!(
        "Cl({}) at {{{}}}: universe {} terms, slice [{}]\nstage sizes {:?}, boundary exclusions {:?}, fixpoint {}\n",
        summary.prop,
        summary.env,
        summary.universe_size,
        summary.slice.join(", "),
        summary.stage_sizes,
        summary.boundary,
        summary.fixpoint
    );
    for m in &summary.members {
        let sn = m.sn_max_length.map_or_else(|| "?".to_string(), |n| n.to_string());
        writeln!(out, "  {:<3} {} (longest reduction {sn})", m.stage, m.term)?;
    }
    outcome(EXIT_PASS, out)
}

fn lemma_at(lab: &Lab, a: &VerifyArgs, depth: usize, props: &[Prop]) -> Result<LemmaReport> {
    let sig = Some(&lab.theory.signature);
    let u = &lab.universe;
    let bounds = ClosureBounds { depth, ..lab.bounds };
    let terms: Vec<Term> = a
        .terms
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| mdm_core::syntax::parse_term(s, sig))
        .collect::<Result<_, _>>()?;
    let mut typer = Typer::new(&lab.theory, &lab.delta, props, &terms, bounds.fuel);
    let env = Env::new();
    let need = |s: &Option<String>, what: &str| -> Result<Prop> {
        let s = s.as_ref().ok_or_else(|| anyhow!("--{what} is required for this lemma"))?;
        Ok(parse_prop(s, sig)?)
    };
    let r = match a.lemma {
        LemmaArg::Mink | LemmaArg::Monotone => {
            let pa = need(&a.a, "a")?;
            let tab = closure(&mut typer, u, &pa, &env, bounds);
            if a.lemma == LemmaArg::Mink {
                check_mink(&tab, u)
            } else {
                check_monotone(&tab)
            }
        }
        LemmaArg::Clramorph | LemmaArg::Lambdacl => {
            let (pa, pb) = (need(&a.a, "a")?, need(&a.b, "b")?);
            let ta = closure(&mut typer, u, &pa, &env, bounds);
            let tb = closure(&mut typer, u, &pb, &env, bounds);
            let tab = closure(&mut typer, u, &Prop::imp(pa.clone(), pb), &env, bounds);
            if a.lemma == LemmaArg::Clramorph {
                check_clramorph(u, &ta, &tb, &tab)
            } else {
                check_lambdacl(u, &lab.delta, &pa, &env, &tb, &tab)
            }
        }
        LemmaArg::Clsubst => {
            let pa = need(&a.a, "a")?;
            let x = name(&a.var);
            let mut out: Option<LemmaReport> = None;
            for t in &terms {
                let r = check_clsubst(&mut typer, u, &pa, &x, t, &env, bounds);
                out = Some(match out {
                    None => r,
                    Some(mut acc) => {
                        acc.checked += r.checked;
                        acc.violations += r.violations;
                        acc.verdict = acc.verdict.and(r.verdict);
                        acc.examples.extend(r.examples);
                        acc
                    }
                });
            }
            out.ok_or_else(|| anyhow!("--terms is empty"))?
        }
        LemmaArg::Clfamorph => {
            let pa = need(&a.a, "a")?;
            let x = name(&a.var);
            let all = Prop::Forall(x.clone(), Box::new(pa.clone()));
            let cl_all = closure(&mut typer, u, &all, &env, bounds);
            let family: Vec<ClosureTable> = terms
                .iter()
                .map(|t| {
                    let mut e = Env::new();
                    e.insert(x.clone(), t.clone());
                    closure(&mut typer, u, &pa, &e, bounds)
                })
                .collect();
            check_clfamorph(u, &cl_all, &family)
        }
        LemmaArg::Adequacy => unreachable!("handled by cmd_verify"),
    };
    Ok(r)
}

fn verify_adequacy(fmt: Format, lab: &Lab, a: &VerifyArgs) -> Result<Outcome> {
    let path = a.drv.as_ref().ok_or_else(|| anyhow!("--drv is required for adequacy"))?;
    let ds = parse_drv_many(&read(path)?, Style::Curry, Some(&lab.theory.signature))?;
    let u = &lab.universe;
    #[derive(Serialize)]
    struct Row {
        subject: String,
        prop: String,
        verdict: Verdict,
    }
    let mut rows = Vec::new();
    let mut total = Verdict::Pass;
    for d in &ds {
        let mut props: Vec<Prop> = d.ctx().0.iter().map(|(_, p)| p.clone()).collect();
        props.push(d.prop().clone());
        let mut typer = Typer::new(&lab.theory, &lab.delta, &props, &[], lab.bounds.fuel);
        let table = closure(&mut typer, u, d.prop(), &Env::new(), lab.bounds);
        let mut hyp_tables = Vec::new();
        let mut sigma = Vec::new();
        let mut missing = None;
        for (h, p) in &d.ctx().0 {
            hyp_tables.push((h.clone(), closure(&mut typer, u, p, &Env::new(), lab.bounds)));
            match lab.delta.names_at(p).first() {
                Some(n) => sigma.push((h.clone(), Proof::Var(n.clone()))),
                None => missing = Some(p.to_string()),
            }
        }
        if let Some(p) = missing {
            bail!("the slice declares no name at `{p}`; extend --slice");
        }
        let refs: Vec<(Name, &ClosureTable)> = hyp_tables.iter().map(|(n, t)| (n.clone(), t)).collect();
        let v = adequacy_check(&lab.theory, d, &table, &refs, &sigma, u, lab.bounds.fuel);
        total = total.and(v);
        rows.push(Row {
            subject: d.subject().to_string(),
            prop: d.prop().to_string(),
            verdict: v,
        });
    }
    if fmt == Format::Json {
        return outcome(verdict_code(total), json(&rows)?);
    }
    let mut out = String::new();
    for r in &rows {
        writeln!(out, "{:<7} {} : {}", r.verdict, r.subject, r.prop)?;
    }
    writeln!(out, "adequacy {total}")?;
    outcome(verdict_code(total), out)
}

fn cmd_verify(fmt: Format, a: &VerifyArgs) -> Result<Outcome> {
    let t = load_theory(&a.theory)?;
    let sig = Some(&t.signature);
    let mut props = Vec::new();
    for s in [&a.a, &a.b].into_iter().flatten() {
        props.push(parse_prop(s, sig)?);
    }
    if let (Some(pa), Some(pb)) = (props.first().cloned(), props.get(1).cloned()) {
        props.push(Prop::imp(pa, pb));
    }
    if a.lemma == LemmaArg::Clfamorph {
        if let Some(pa) = props.first().cloned() {
            props.push(Prop::forall(&a.var, pa));
        }
    }
    if a.lemma == LemmaArg::Adequacy {
        let path = a.drv.as_ref().ok_or_else(|| anyhow!("--drv is required for adequacy"))?;
        let ds = parse_drv_many(&read(path)?, Style::Curry, sig)?;
        for d in &ds {
            props.extend(d.ctx().0.iter().map(|(_, p)| p.clone()));
            props.push(d.prop().clone());
        }
        let lab = lab(t, &a.bounds, &props)?;
        return verify_adequacy(fmt, &lab, a);
    }
    let lab = lab(t, &a.bounds, &props)?;
    let bounded = lemma_at(&lab, a, lab.bounds.depth, &props)?;
    let report = if bounded.violations > 0 && a.relaxed_depth > lab.bounds.depth {
        bounded.relaxed_by(lemma_at(&lab, a, a.relaxed_depth, &props)?)
    } else {
        bounded
    };
    let code = verdict_code(report.verdict);
    if fmt == Format::Json {
        return outcome(code, json(&report)?);
    }
    let mut out = format!(
        "{}: {} ({} checked, {} violations, {} boundary",
        report.lemma, report.verdict, report.checked, report.violations, report.boundary
    );
    if let Some(b) = report.bounded_violations {
        write!(out, ", {b} violations at depth {} before the rerun at depth {}", lab.bounds.depth, a.relaxed_depth)?;
    }
    out.push_str(")\n");
    for e in &report.examples {
        writeln!(out, "  {e}")?;
    }
    outcome(code, out)
}

fn cmd_corpus(seed: u64, count: usize, style: Style, max_size: usize, fuel: usize, path: Option<&str>) -> Result<Outcome> {
    let t = corpus_theory();
    let ctx = base_context(&t);
    let cfg = CorpusConfig {
        style,
        count,
        max_subject: max_size,
        seed,
    };
    let ds = generate(&t, &ctx, cfg, fuel)?;
    let mut out = format!("# corpus: theory {}, style {style}, seed {seed}, {count} derivations\n", t.name);
    for d in &ds {
        writeln!(out, "{}", print_drv(d))?;
    }
    if let Some(path) = path {
        std::fs::write(path, &out).with_context(|| format!("writing `{path}`"))?;
        return outcome(EXIT_PASS, format!("{} derivations written to {path}\n", ds.len()));
    }
    outcome(EXIT_PASS, out)
}

fn cmd_suite(fmt: Format, quick: bool, only: &[usize], seed: u64) -> Result<Outcome> {
    let scale = if quick { Scale::quick(seed) } else { Scale::full(seed) };
    let results = suite::run(only, scale);
    let total = results.iter().fold(Verdict::Pass, |acc, r| acc.and(r.verdict));
    let out = if fmt == Format::Json {
        json(&results)?
    } else {
        let mut s = String::new();
        for r in &results {
            writeln!(s, "{}", r.line())?;
        }
        let passed = results.iter().filter(|r| r.verdict == Verdict::Pass).count();
        writeln!(s, "{passed}/{} criteria pass (seed {seed}, {})", results.len(), if quick { "quick" } else { "full" })?;
        s
    };
    outcome(verdict_code(total), out)
}
