//! Runs checkers on inputs chosen automatically from a window: words are
//! the shortest representatives of distinct window actions, points are the
//! window's sample points. Each checker runs over every selected instance
//! and the results are folded into one report.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::action::{Transform, Word};
use crate::checks::{self, CheckError, CheckReport, Verdict};
use crate::comparable::membership;
use crate::error::Error;
use crate::expand::{expand, Truncation};
use crate::loci::branch_loci;
use crate::model::LeafSpaceSpec;
use crate::order::{Comparability, Order};
use crate::point::{Cell, Point};
use crate::tri::Tri;
use crate::words::word_classes;

pub const CHECKS: [&str; 11] = [
    "check_lower_bound",
    "check_path_in_comparable_set",
    "check_connected_open",
    "check_odd_path",
    "check_return",
    "check_invariant_locus_stem",
    "check_stabilizer_cyclic",
    "check_fix_propagation",
    "check_faithfulness",
    "check_intermediate_fixed",
    "screen_infinite_locus",
];

const PAIRS_PER_WORD: usize = 24;
const POINTS_PER_WORD: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    pub depth: u32,
    pub word_len: usize,
    pub k_max: u32,
}

impl Default for SuiteOptions {
    fn default() -> SuiteOptions {
        SuiteOptions {
            depth: 4,
            word_len: 6,
            k_max: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SuiteOutcome {
    Ran(CheckReport),
    Skipped { check: String, reason: String },
}

impl SuiteOutcome {
    pub fn check(&self) -> &str {
        match self {
            SuiteOutcome::Ran(r) => &r.check,
            SuiteOutcome::Skipped { check, .. } => check,
        }
    }

    pub fn verdict(&self) -> Option<Verdict> {
        match self {
            SuiteOutcome::Ran(r) => Some(r.verdict),
            SuiteOutcome::Skipped { .. } => None,
        }
    }
}

struct Ctx<'a> {
    order: Order<'a>,
    words: Vec<(Word, Transform)>,
    samples: Vec<Point>,
    opts: SuiteOptions,
}

impl<'a> Ctx<'a> {
    fn new(tr: &'a Truncation, opts: SuiteOptions) -> Result<Ctx<'a>, Error> {
        let order = Order::new(tr)?;
        let words = word_classes(tr, opts.word_len)?
            .into_iter()
            .skip(1)
            .collect();
        Ok(Ctx {
            order,
            words,
            samples: tr.sample_points(),
            opts,
        })
    }

    fn tr(&self) -> &'a Truncation {
        self.order.truncation()
    }

    fn members(&self, t: &Transform) -> Result<Vec<Tri>, Error> {
        self.samples
            .iter()
            .map(|p| membership(&self.order, t, p))
            .collect()
    }

    fn image_cmp(&self, t: &Transform, x: &Point) -> Result<Comparability, Error> {
        let y = t.apply_point(self.tr().spec(), x)?;
        if self.tr().resolve(&y).is_none() {
            return Ok(Comparability::Truncated);
        }
        self.order.compare(x, &y)
    }
}

type Instance = Result<CheckReport, CheckError>;

fn fold(check: &str, instances: Vec<Instance>, none: &str) -> Instance {
    let mut ran = Vec::new();
    let mut first_reason = None;
    for r in instances {
        match r {
            Ok(report) => ran.push(report),
            Err(CheckError::PreconditionFailed(reason)) => {
                first_reason.get_or_insert(reason);
            }
            Err(e) => return Err(e),
        }
    }
    if ran.is_empty() {
        let reason = match first_reason {
            Some(r) => format!("no instance in the window satisfies the hypotheses ({r})"),
            None => none.to_string(),
        };
        return Err(CheckError::PreconditionFailed(reason));
    }
    let n = ran.len();
    if let Some(i) = ran.iter().position(|r| r.verdict == Verdict::Violation) {
        let mut r = ran.swap_remove(i);
        r.summary = format!("instance {} of {n}: {}", i + 1, r.summary);
        return Ok(r);
    }
    let pass = ran.iter().filter(|r| r.verdict == Verdict::Pass).count();
    let pick = ran
        .iter()
        .position(|r| r.verdict == Verdict::Pass)
        .unwrap_or(0);
    let mut r = ran.swap_remove(pick);
    if n > 1 {
        r.summary = format!(
            "{n} instances, {pass} pass, {} truncated; first: {}",
            n - pass,
            r.summary
        );
        r.witness.clear();
    }
    r.verdict = if pass > 0 {
        Verdict::Pass
    } else {
        Verdict::Truncated
    };
    debug_assert_eq!(r.check, check);
    Ok(r)
}

fn lower_bound(cx: &Ctx) -> Instance {
    let mut out = Vec::new();
    for (w, t) in &cx.words {
        let mut found = 0;
        for mu in &cx.samples {
            if found == POINTS_PER_WORD {
                break;
            }
            let wmu = t.apply_point(cx.tr().spec(), mu)?;
            if cx.tr().resolve(&wmu).is_none() {
                continue;
            }
            for lambda in &cx.samples {
                if cx.order.compare(lambda, mu)? == Comparability::Less
                    && cx.order.compare(lambda, &wmu)? == Comparability::Less
                {
                    out.push(checks::check_lower_bound_in(&cx.order, w, lambda, mu));
                    found += 1;
                    break;
                }
            }
        }
        if let Some(Err(CheckError::PreconditionFailed(_))) = out.last() {
            // The branching hypothesis does not depend on the word.
            break;
        }
    }
    fold(
        "check_lower_bound",
        out,
        "no point pair in the window has a common lower bound",
    )
}

fn path_in_comparable_set(cx: &Ctx) -> Instance {
    let mut out = Vec::new();
    for (w, t) in &cx.words {
        let yes: Vec<&Point> = cx
            .samples
            .iter()
            .zip(cx.members(t)?)
            .filter(|(_, m)| *m == Tri::Yes)
            .map(|(p, _)| p)
            .collect();
        let mut pairs = BTreeSet::new();
        if yes.len() >= 2 {
            let last = yes.len() - 1;
            for j in 1..yes.len() {
                pairs.insert((0, j));
                if j != last {
                    pairs.insert((j, last));
                }
            }
        }
        for (i, j) in pairs.into_iter().take(PAIRS_PER_WORD) {
            out.push(checks::check_path_in_comparable_set_in(
                &cx.order, w, yes[i], yes[j],
            ));
        }
    }
    fold(
        "check_path_in_comparable_set",
        out,
        "no comparable set has two sampled points",
    )
}

fn connected_open(cx: &Ctx) -> Instance {
    let out = cx
        .words
        .iter()
        .map(|(w, _)| checks::check_connected_open_in(&cx.order, w))
        .collect();
    fold("check_connected_open", out, "the model has no generators")
}

fn odd_path(cx: &Ctx) -> Instance {
    let mut out = Vec::new();
    for (w, t) in &cx.words {
        for (x, m) in cx.samples.iter().zip(cx.members(t)?) {
            if m != Tri::No {
                continue;
            }
            let y = t.apply_point(cx.tr().spec(), x)?;
            let odd = match cx.order.path(x, &y) {
                Ok(p) => p.length() % 2 == 1,
                Err(Error::Truncated | Error::PointOutOfRange(_)) => false,
                Err(e) => return Err(e.into()),
            };
            if odd {
                out.push(checks::check_odd_path_in(&cx.order, w, x, cx.opts.k_max));
                break;
            }
        }
    }
    fold(
        "check_odd_path",
        out,
        "no point outside its comparable set has an odd path to its image",
    )
}

fn return_check(cx: &Ctx) -> Instance {
    let mut out = Vec::new();
    for (w, t) in &cx.words {
        let base = cx.members(t)?;
        let mut found = 0;
        'k: for k in 2..=cx.opts.k_max.max(2) {
            let tk = Transform::of_word(cx.tr().spec(), &w.pow(k as i64))?;
            for (x, m) in cx.samples.iter().zip(&base) {
                if found == POINTS_PER_WORD {
                    break 'k;
                }
                if *m == Tri::No && membership(&cx.order, &tk, x)? == Tri::Yes {
                    out.push(checks::check_return_in(&cx.order, w, x, k));
                    found += 1;
                }
            }
        }
    }
    fold(
        "check_return",
        out,
        "no point leaves C_w but returns in C_{w^k}",
    )
}

fn invariant_locus_stem(cx: &Ctx) -> Instance {
    let spec = cx.tr().spec();
    let mut out = Vec::new();
    for locus in branch_loci(cx.tr()) {
        let members: BTreeSet<&Cell> = locus.members.iter().collect();
        for (w, t) in &cx.words {
            let images: BTreeSet<Cell> = locus
                .members
                .iter()
                .map(|c| t.apply_cell(spec, c))
                .collect::<Result<_, _>>()?;
            if images.iter().collect::<BTreeSet<_>>() == members {
                out.push(checks::check_invariant_locus_stem_in(
                    &cx.order,
                    w,
                    &locus.members,
                ));
            }
        }
    }
    fold(
        "check_invariant_locus_stem",
        out,
        "no element maps a branch locus to itself",
    )
}

fn fix_propagation(cx: &Ctx) -> Instance {
    let out = branch_loci(cx.tr())
        .iter()
        .map(|l| checks::check_fix_propagation_in(&cx.order, &l.members, cx.opts.word_len))
        .collect();
    fold("check_fix_propagation", out, "no branch loci in the window")
}

fn intermediate_fixed(cx: &Ctx) -> Instance {
    let mut out = Vec::new();
    for (w, t) in &cx.words {
        let mut pos = None;
        let mut neg = None;
        for x in &cx.samples {
            match cx.image_cmp(t, x)? {
                Comparability::Less if pos.is_none() => pos = Some(x),
                Comparability::Greater if neg.is_none() => neg = Some(x),
                _ => {}
            }
            if pos.is_some() && neg.is_some() {
                break;
            }
        }
        if let (Some(p), Some(n)) = (pos, neg) {
            out.push(checks::check_intermediate_fixed_in(&cx.order, w, p, n));
        }
    }
    fold(
        "check_intermediate_fixed",
        out,
        "no element moves one point up and another down",
    )
}

fn run_in(cx: &Ctx, name: &str) -> Instance {
    let radius = cx.opts.word_len;
    match name {
        "check_lower_bound" => lower_bound(cx),
        "check_path_in_comparable_set" => path_in_comparable_set(cx),
        "check_connected_open" => connected_open(cx),
        "check_odd_path" => odd_path(cx),
        "check_return" => return_check(cx),
        "check_invariant_locus_stem" => invariant_locus_stem(cx),
        "check_stabilizer_cyclic" => checks::check_stabilizer_cyclic_in(&cx.order, radius),
        "check_fix_propagation" => fix_propagation(cx),
        "check_faithfulness" => checks::check_faithfulness_in(&cx.order, radius),
        "check_intermediate_fixed" => intermediate_fixed(cx),
        "screen_infinite_locus" => checks::screen_infinite_locus_in(&cx.order, radius),
        other => Err(CheckError::PreconditionFailed(format!(
            "unknown checker {other}"
        ))),
    }
}

/// Runs one checker with automatically selected inputs.
pub fn run_check(spec: &LeafSpaceSpec, name: &str, opts: SuiteOptions) -> Instance {
    let tr = expand(spec, opts.depth)?;
    let cx = Ctx::new(&tr, opts)?;
    run_in(&cx, name)
}

fn outcome(name: &str, r: Instance) -> Result<SuiteOutcome, Error> {
    match r {
        Ok(report) => Ok(SuiteOutcome::Ran(report)),
        Err(CheckError::PreconditionFailed(reason)) => Ok(SuiteOutcome::Skipped {
            check: name.to_string(),
            reason,
        }),
        Err(CheckError::Model(e)) => Err(e),
    }
}

/// Every checker, run concurrently on one shared window; results are in
/// [`CHECKS`] order.
pub fn run_suite(spec: &LeafSpaceSpec, opts: SuiteOptions) -> Result<Vec<SuiteOutcome>, Error> {
    let tr = expand(spec, opts.depth)?;
    let cx = Ctx::new(&tr, opts)?;
    let results: Vec<Instance> = std::thread::scope(|s| {
        let handles: Vec<_> = CHECKS
            .iter()
            .map(|name| {
                let cx = &cx;
                s.spawn(move || run_in(cx, name))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("checker thread panicked"))
            .collect()
    });
    CHECKS
        .iter()
        .zip(results)
        .map(|(name, r)| outcome(name, r))
        .collect()
}
