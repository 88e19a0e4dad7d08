//! The `leafspace` command line: load a model from the gallery or a spec
//! document, run queries and checkers on a window, print reports.
//!
//! Exit status is 0 on success (possibly with warnings for truncated or
//! inapplicable checks), 1 when a check reports a violation or a model
//! fails validation, and 2 on usage or input errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use leafspace_core::checks::{self, CheckError, CheckReport, Verdict};
use leafspace_core::doc::parse_unchecked;
use leafspace_core::{
    branch_loci, branching_type, classify_element, emit, expand, gallery, parse, random_spec,
    run_check, run_suite, validate, Cell, Comparability, Error, Finding, LeafSpaceSpec, Order,
    Path, Point, RandomParams, SuiteOptions, SuiteOutcome, Truncation, Word, CHECKS,
};

#[derive(Debug, Parser)]
#[command(
    name = "leafspace",
    version,
    about = "Queries and property checks on leaf-space models"
)]
pub struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Opts {
    /// Use a gallery model.
    #[arg(long, global = true)]
    gallery: Option<String>,
    /// Read a spec document.
    #[arg(long, global = true, value_name = "FILE")]
    spec: Option<PathBuf>,
    /// Window depth.
    #[arg(long, global = true, default_value_t = 4)]
    depth: u32,
    /// Word length bound for enumerations.
    #[arg(long = "word-len", global = true, default_value_t = 6)]
    word_len: usize,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the model's structural conditions on the window.
    Validate,
    /// Summarize the window.
    Expand,
    /// The path between two points.
    Path(Pair),
    /// Compare two points.
    Compare(Pair),
    /// Tangentiable and transversable tests for a word.
    Classify {
        #[arg(long)]
        word: String,
    },
    /// Branch loci in the window and the branching type.
    Loci,
    /// The stabilizer ball of a locus, of radius --word-len.
    Stab {
        /// Comma-separated locus members.
        #[arg(long)]
        locus: String,
    },
    /// Run one checker; inputs not given are chosen automatically.
    Check(CheckArgs),
    /// Print a gallery model as a spec document.
    Gallery { name: String },
    /// Print a random finite model as a spec document.
    Random(RandomArgs),
    /// Run every checker with automatically chosen inputs.
    Suite {
        #[arg(long = "k-max", default_value_t = 4)]
        k_max: u32,
    },
}

#[derive(Debug, Args)]
struct Pair {
    #[arg(long)]
    from: String,
    #[arg(long)]
    to: String,
}

#[derive(Debug, Args)]
struct CheckArgs {
    name: String,
    #[arg(long)]
    word: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    mu: Option<String>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long = "k-max")]
    k_max: Option<u32>,
    #[arg(long = "x-pos")]
    x_pos: Option<String>,
    #[arg(long = "x-neg")]
    x_neg: Option<String>,
    /// Comma-separated locus members.
    #[arg(long)]
    locus: Option<String>,
}

#[derive(Debug, Args)]
struct RandomArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long = "loci-min", default_value_t = 1)]
    loci_min: usize,
    #[arg(long = "loci-max", default_value_t = 3)]
    loci_max: usize,
    #[arg(long = "size-min", default_value_t = 2)]
    size_min: usize,
    #[arg(long = "size-max", default_value_t = 4)]
    size_max: usize,
    /// Probability that a branch point is positive.
    #[arg(long = "positive-share", default_value_t = 0.5)]
    positive_share: f64,
    #[arg(long = "extra-edges", default_value_t = 3)]
    extra_edges: usize,
    /// Symmetric copies below a root branch point, permuted by generators.
    #[arg(long, default_value_t = 0)]
    copies: usize,
}

/// What a command produced.
struct Output {
    text: String,
    json: Value,
    code: i32,
    warnings: usize,
}

impl Output {
    fn ok(text: String, json: Value) -> Output {
        Output {
            text,
            json,
            code: 0,
            warnings: 0,
        }
    }
}

struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Usage {
        Usage(e.to_string())
    }
}

struct Model {
    name: String,
    spec: LeafSpaceSpec,
}

fn load(opts: &Opts, checked: bool) -> Result<Model, Usage> {
    match (&opts.gallery, &opts.spec) {
        (Some(_), Some(_)) => Err(Usage("give either --gallery or --spec, not both".into())),
        (None, None) => Err(Usage(
            "a model is required: --gallery NAME or --spec FILE".into(),
        )),
        (Some(name), None) => {
            let entry = gallery::by_name(name)
                .ok_or_else(|| Usage(format!("unknown gallery model {name}")))?;
            Ok(Model {
                name: entry.name.to_string(),
                spec: entry.spec,
            })
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Usage(format!("{}: {e}", path.display())))?;
            let spec = if checked {
                parse(&text)
            } else {
                parse_unchecked(&text)
            }
            .map_err(|e| Usage(format!("{}: {e}", path.display())))?;
            Ok(Model {
                name: path.display().to_string(),
                spec,
            })
        }
    }
}

/// A point given as a mark name or in point syntax.
fn point(spec: &LeafSpaceSpec, text: &str) -> Result<Point, Usage> {
    if let Some(p) = spec.mark(text) {
        return Ok(p.clone());
    }
    text.parse::<Point>()
        .map_err(|e| Usage(format!("bad point {text}: {e}")))
}

fn cells(text: &str) -> Result<Vec<Cell>, Usage> {
    text.split(',')
        .map(|c| c.trim().parse::<Point>().map(|p| p.cell().clone()))
        .collect::<Result<_, _>>()
        .map_err(|e| Usage(format!("bad locus {text}: {e}")))
}

fn word(text: &str) -> Result<Word, Usage> {
    text.parse::<Word>().map_err(|e| Usage(e.to_string()))
}

fn window(spec: &LeafSpaceSpec, depth: u32) -> Result<Truncation, Usage> {
    Ok(expand(spec, depth)?)
}

fn path_text(tr: &Truncation, p: &Path) -> String {
    let mut s = format!("length {}\n", p.length());
    for (i, iv) in p.intervals.iter().enumerate() {
        let dir = if iv.is_degenerate() {
            "point"
        } else {
            match iv.direction {
                leafspace_core::Direction::Ascending => "ascending",
                leafspace_core::Direction::Descending => "descending",
            }
        };
        let _ = writeln!(
            s,
            "  interval {}: {dir} {} -> {}",
            i + 1,
            tr.display_point(&iv.start),
            tr.display_point(&iv.end)
        );
        if let Some(j) = p.junctions.get(i) {
            let _ = writeln!(
                s,
                "  junction {}: {} -> {}",
                i + 1,
                cell_text(tr, &j.check),
                cell_text(tr, &j.hat)
            );
        }
    }
    s
}

fn cell_text(tr: &Truncation, c: &Cell) -> String {
    match tr.lookup(c) {
        Some(ix) => tr.display_cell(ix),
        None => c.to_string(),
    }
}

fn path_json(tr: &Truncation, p: &Path) -> Value {
    json!({
        "length": p.length(),
        "intervals": p.intervals.iter().map(|iv| json!({
            "start": tr.display_point(&iv.start),
            "end": tr.display_point(&iv.end),
            "direction": iv.direction,
        })).collect::<Vec<_>>(),
        "junctions": p.junctions.iter().map(|j| json!({
            "check": cell_text(tr, &j.check),
            "hat": cell_text(tr, &j.hat),
            "locus": j.locus.iter().map(|c| cell_text(tr, c)).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

pub fn report_text(r: &CheckReport) -> String {
    let mut s = format!(
        "{}: {}\n  {}\n  depth {}",
        r.check, r.verdict, r.summary, r.depth
    );
    if let Some(n) = r.word_len {
        let _ = write!(s, ", word length {n}");
    }
    s.push('\n');
    for (k, v) in &r.witness {
        let _ = writeln!(s, "  witness {k} = {v}");
    }
    if let Some(d) = &r.disclaimer {
        let _ = writeln!(s, "  note: {d}");
    }
    s
}

fn skipped_text(check: &str, reason: &str) -> String {
    format!("{check}: PRECONDITION FAILED\n  {reason}\n")
}

fn finding_text(name: &str, f: &Finding, tr: &Truncation) -> String {
    match &f.witness {
        Some(p) => format!("{name}: {} (witness {})", f.answer, tr.display_point(p)),
        None if f.undecided > 0 => {
            format!("{name}: {} ({} samples undecided)", f.answer, f.undecided)
        }
        None => format!("{name}: {}", f.answer),
    }
}

fn verdict_code(v: Verdict) -> i32 {
    if v == Verdict::Violation {
        1
    } else {
        0
    }
}

fn cmd_validate(m: &Model, opts: &Opts) -> Result<Output, Usage> {
    let tr = window(&m.spec, opts.depth)?;
    let report = validate(&tr);
    let mut text = format!(
        "{}: {} at depth {} ({} truncated ends)\n",
        m.name,
        if report.is_valid() {
            "valid"
        } else {
            "INVALID"
        },
        report.depth,
        report.truncated_ends
    );
    for v in &report.violations {
        let _ = writeln!(text, "  {v}");
    }
    let mut out = Output::ok(text, serde_json::to_value(&report)?);
    out.code = if report.is_valid() { 0 } else { 1 };
    Ok(out)
}

fn cmd_expand(m: &Model, opts: &Opts) -> Result<Output, Usage> {
    let tr = window(&m.spec, opts.depth)?;
    let vertices = tr.vertices().count();
    let edges = tr.edges().count();
    let branch = tr.limits().iter().filter(|l| l.is_branching()).count();
    let mut text = format!(
        "{} depth {}: {} vertices, {} edges, {} tails, {} limits ({} branching), {} truncated ends, {}\n",
        m.name,
        tr.depth(),
        vertices,
        edges,
        tr.tails().len(),
        tr.limits().len(),
        branch,
        tr.truncated_ends().len(),
        if tr.is_closed() { "closed" } else { "open" }
    );
    let names: Vec<String> = tr.cell_ixs().map(|c| tr.display_cell(c)).collect();
    let _ = writeln!(text, "  cells: {}", names.join(" "));
    let json = json!({
        "model": m.name,
        "depth": tr.depth(),
        "cells": names,
        "tails": tr.tails().len(),
        "limits": tr.limits().len(),
        "branching_limits": branch,
        "truncated_ends": tr.truncated_ends().len(),
        "closed": tr.is_closed(),
    });
    Ok(Output::ok(text, json))
}

fn cmd_path(m: &Model, opts: &Opts, pair: &Pair, compare_only: bool) -> Result<Output, Usage> {
    let tr = window(&m.spec, opts.depth)?;
    let order = Order::new(&tr)?;
    let x = point(&m.spec, &pair.from)?;
    let y = point(&m.spec, &pair.to)?;
    if compare_only {
        let c = order.compare(&x, &y)?;
        let text = format!(
            "{} {} {}\n",
            tr.display_point(&x),
            symbol(c),
            tr.display_point(&y)
        );
        let json = json!({"from": tr.display_point(&x), "to": tr.display_point(&y), "comparability": c.to_string()});
        return Ok(Output::ok(text, json));
    }
    match order.path(&x, &y) {
        Ok(p) => Ok(Output::ok(path_text(&tr, &p), path_json(&tr, &p))),
        Err(Error::Truncated) => {
            let mut out = Output::ok(
                "TRUNCATED: the window does not connect the points\n".into(),
                json!({"truncated": true}),
            );
            out.warnings = 1;
            Ok(out)
        }
        Err(e) => Err(e.into()),
    }
}

fn symbol(c: Comparability) -> &'static str {
    match c {
        Comparability::Less => "<",
        Comparability::Greater => ">",
        Comparability::Equal => "=",
        Comparability::Incomparable => "incomparable with",
        Comparability::Truncated => "undecided in the window against",
    }
}

fn cmd_classify(m: &Model, opts: &Opts, w: &str) -> Result<Output, Usage> {
    let w = word(w)?;
    let tr = window(&m.spec, opts.depth)?;
    let p = classify_element(&m.spec, &w, opts.depth)?;
    let text = format!(
        "{w}\n  {}\n  {}\n  {}\n",
        finding_text("tangentiable", &p.tangentiable, &tr),
        finding_text("positively transversable", &p.pos_transversable, &tr),
        finding_text("negatively transversable", &p.neg_transversable, &tr),
    );
    Ok(Output::ok(text, serde_json::to_value(&p)?))
}

fn cmd_loci(m: &Model, opts: &Opts) -> Result<Output, Usage> {
    let tr = window(&m.spec, opts.depth)?;
    Order::new(&tr)?;
    let loci = branch_loci(&tr);
    let b = branching_type(&m.spec, opts.depth)?;
    let mut text = format!(
        "{} loci, branching {}{}\n",
        loci.len(),
        b.value.as_str(),
        if b.window_limited {
            " (window-limited)"
        } else {
            ""
        }
    );
    let mut rows = Vec::new();
    for l in &loci {
        let members: Vec<String> = l.members.iter().map(|c| cell_text(&tr, c)).collect();
        let _ = writeln!(text, "  {} {{{}}}", l.sign, members.join(", "));
        rows.push(json!({"sign": l.sign.to_string(), "members": members}));
    }
    let json =
        json!({"branching": b.value.as_str(), "window_limited": b.window_limited, "loci": rows});
    Ok(Output::ok(text, json))
}

fn cmd_stab(m: &Model, opts: &Opts, locus: &str) -> Result<Output, Usage> {
    let tr = window(&m.spec, opts.depth)?;
    let locus = cells(locus)?;
    let ball = match checks::stabilizer_ball(&m.spec, &locus, opts.word_len, opts.depth) {
        Ok(b) => b,
        Err(e) => return Err(Usage(e.to_string())),
    };
    let mut text = format!(
        "stabilizer ball of radius {}: {} elements; cyclic {}; acts nontrivially {}\n",
        ball.radius,
        ball.members.len(),
        match &ball.cyclic_generator {
            Some(c) => format!("yes, generated by {c}"),
            None => "no".into(),
        },
        if ball.acts_nontrivially { "yes" } else { "no" }
    );
    for (w, perm) in &ball.table {
        let moves: Vec<String> = perm
            .iter()
            .map(|(a, b)| format!("{} -> {}", cell_text(&tr, a), cell_text(&tr, b)))
            .collect();
        let _ = writeln!(text, "  {w}: {}", moves.join(", "));
    }
    Ok(Output::ok(text, serde_json::to_value(&ball)?))
}

fn check_outcome(name: &str, r: Result<CheckReport, CheckError>) -> Result<Output, Usage> {
    match r {
        Ok(report) => {
            let mut out = Output::ok(report_text(&report), serde_json::to_value(&report)?);
            out.code = verdict_code(report.verdict);
            out.warnings = usize::from(report.verdict == Verdict::Truncated);
            Ok(out)
        }
        Err(CheckError::PreconditionFailed(reason)) => {
            let json = json!({"check": name, "status": "precondition_failed", "reason": reason});
            let mut out = Output::ok(skipped_text(name, &reason), json);
            out.warnings = 1;
            Ok(out)
        }
        Err(CheckError::Model(e)) => Err(e.into()),
    }
}

fn require<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str, Usage> {
    v.as_deref()
        .ok_or_else(|| Usage(format!("--{flag} is required with explicit inputs")))
}

fn cmd_check(m: &Model, opts: &Opts, a: &CheckArgs) -> Result<Output, Usage> {
    if !CHECKS.contains(&a.name.as_str()) {
        return Err(Usage(format!(
            "unknown checker {}; known: {}",
            a.name,
            CHECKS.join(", ")
        )));
    }
    let explicit = a.word.is_some()
        || a.lambda.is_some()
        || a.mu.is_some()
        || a.x_pos.is_some()
        || a.x_neg.is_some()
        || a.locus.is_some()
        || a.k.is_some();
    let (spec, d, n) = (&m.spec, opts.depth, opts.word_len);
    let k_max = a.k_max.unwrap_or(4);
    if !explicit {
        let opts = SuiteOptions {
            depth: d,
            word_len: n,
            k_max,
        };
        return check_outcome(&a.name, run_check(spec, &a.name, opts));
    }
    let w = || -> Result<Word, Usage> { word(require(&a.word, "word")?) };
    let p =
        |v: &Option<String>, flag: &str| -> Result<Point, Usage> { point(spec, require(v, flag)?) };
    let r = match a.name.as_str() {
        "check_lower_bound" => {
            checks::check_lower_bound(spec, &w()?, &p(&a.lambda, "lambda")?, &p(&a.mu, "mu")?, d)
        }
        "check_path_in_comparable_set" => checks::check_path_in_comparable_set(
            spec,
            &w()?,
            &p(&a.lambda, "lambda")?,
            &p(&a.mu, "mu")?,
            d,
        ),
        "check_connected_open" => checks::check_connected_open(spec, &w()?, d),
        "check_odd_path" => checks::check_odd_path(spec, &w()?, &p(&a.lambda, "lambda")?, k_max, d),
        "check_return" => {
            let k = a.k.ok_or_else(|| Usage("--k is required".into()))?;
            checks::check_return(spec, &w()?, &p(&a.lambda, "lambda")?, k, d)
        }
        "check_invariant_locus_stem" => {
            checks::check_invariant_locus_stem(spec, &w()?, &cells(require(&a.locus, "locus")?)?, d)
        }
        "check_stabilizer_cyclic" => checks::check_stabilizer_cyclic(spec, n, d),
        "check_fix_propagation" => {
            checks::check_fix_propagation(spec, &cells(require(&a.locus, "locus")?)?, n, d)
        }
        "check_faithfulness" => checks::check_faithfulness(spec, n, d),
        "check_intermediate_fixed" => checks::check_intermediate_fixed(
            spec,
            &w()?,
            &p(&a.x_pos, "x-pos")?,
            &p(&a.x_neg, "x-neg")?,
            d,
        ),
        "screen_infinite_locus" => checks::screen_infinite_locus(spec, n, d),
        _ => unreachable!("checked against CHECKS"),
    };
    check_outcome(&a.name, r)
}

fn cmd_suite(m: &Model, opts: &Opts, k_max: u32) -> Result<Output, Usage> {
    let so = SuiteOptions {
        depth: opts.depth,
        word_len: opts.word_len,
        k_max,
    };
    let outcomes = run_suite(&m.spec, so)?;
    let mut text = format!(
        "suite {}: depth {}, word length {}\n",
        m.name, so.depth, so.word_len
    );
    let (mut pass, mut violation, mut truncated, mut skipped) = (0, 0, 0, 0);
    for o in &outcomes {
        match o {
            SuiteOutcome::Ran(r) => {
                match r.verdict {
                    Verdict::Pass => pass += 1,
                    Verdict::Violation => violation += 1,
                    Verdict::Truncated => truncated += 1,
                }
                text.push_str(&report_text(r));
            }
            SuiteOutcome::Skipped { check, reason } => {
                skipped += 1;
                text.push_str(&skipped_text(check, reason));
            }
        }
    }
    let _ = writeln!(
        text,
        "summary: {pass} pass, {violation} violation, {truncated} truncated, {skipped} not applicable"
    );
    let json = json!({
        "model": m.name,
        "depth": so.depth,
        "word_len": so.word_len,
        "k_max": so.k_max,
        "outcomes": outcomes,
        "summary": {"pass": pass, "violation": violation, "truncated": truncated, "not_applicable": skipped},
    });
    Ok(Output {
        text,
        json,
        code: if violation > 0 { 1 } else { 0 },
        warnings: truncated + skipped,
    })
}

fn cmd_random(a: &RandomArgs) -> Result<Output, Usage> {
    let params = RandomParams {
        seed: a.seed,
        loci: (a.loci_min, a.loci_max),
        locus_size: (a.size_min, a.size_max),
        positive_share: a.positive_share,
        extra_edges: a.extra_edges,
        copies: a.copies,
        finite_only: true,
    };
    if a.loci_min > a.loci_max
        || a.size_min > a.size_max
        || !(0.0..=1.0).contains(&a.positive_share)
    {
        return Err(Usage("empty range in random parameters".into()));
    }
    let doc = emit(&random_spec(&params)?);
    Ok(Output::ok(doc.clone(), json!({ "document": doc })))
}

fn dispatch(cli: &Cli) -> Result<Output, Usage> {
    let opts = &cli.opts;
    match &cli.command {
        Command::Gallery { name } => {
            let entry = gallery::by_name(name)
                .ok_or_else(|| Usage(format!("unknown gallery model {name}")))?;
            let doc = format!("# {}: {}\n{}", entry.name, entry.summary, emit(&entry.spec));
            Ok(Output::ok(
                doc.clone(),
                json!({"name": entry.name, "document": emit(&entry.spec)}),
            ))
        }
        Command::Random(a) => cmd_random(a),
        cmd => {
            let m = load(opts, !matches!(cmd, Command::Validate))?;
            match cmd {
                Command::Validate => cmd_validate(&m, opts),
                Command::Expand => cmd_expand(&m, opts),
                Command::Path(p) => cmd_path(&m, opts, p, false),
                Command::Compare(p) => cmd_path(&m, opts, p, true),
                Command::Classify { word } => cmd_classify(&m, opts, word),
                Command::Loci => cmd_loci(&m, opts),
                Command::Stab { locus } => cmd_stab(&m, opts, locus),
                Command::Check(a) => cmd_check(&m, opts, a),
                Command::Suite { k_max } => cmd_suite(&m, opts, *k_max),
                Command::Gallery { .. } | Command::Random(_) => unreachable!(),
            }
        }
    }
}

/// Runs the command line and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(rendered.as_bytes());
            } else {
                let _ = err.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let json = cli.opts.json;
    match dispatch(&cli) {
        Ok(o) => {
            if json {
                let _ = writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&o.json).unwrap_or_default()
                );
            } else {
                let _ = out.write_all(o.text.as_bytes());
            }
            if o.warnings > 0 {
                let _ = writeln!(
                    err,
                    "warning: {} result(s) truncated or not applicable",
                    o.warnings
                );
            }
            o.code
        }
        Err(Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}
