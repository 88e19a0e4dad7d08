//! Executable checks of structural statements about leaf spaces and their
//! group actions. Each returns a [`CheckReport`] with verdict Pass,
//! Violation (with a witness that replays under the primitive operations)
//! or Truncated; a failed hypothesis is an error, and the body never runs.

use std::collections::BTreeSet;
use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::Serialize;
use thiserror::Error;

use crate::action::{Transform, Word};
use crate::comparable::{
    branching_in, classify_in, fixed_cells_in, membership as window_membership, BranchingType,
};
use crate::error::Error;
use crate::expand::{expand, CellIx, EndLink, Segment, SideLink, Truncation};
use crate::loci::{branch_loci, BranchLocus};
use crate::model::{CellKind, End, LeafSpaceSpec};
use crate::order::{on_interval, Comparability, Order, Path, PathItem};
use crate::point::{Cell, Coord, Point};
use crate::tri::Tri;
use crate::words::{
    all_words, fingerprint, fixed_members, stabilizer_ball_in, word_classes, StabilizerBall,
};

/// Printed with every check whose conclusion needs more than the
/// combinatorics of the model.
pub const REALIZABILITY_DISCLAIMER: &str =
    "realizability screen: a Violation means this model cannot be the \
     leaf space of a leafwise hyperbolic taut foliation, not that the underlying statement fails";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Verdict {
    Pass,
    Violation,
    Truncated,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Violation => "VIOLATION",
            Verdict::Truncated => "TRUNCATED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    pub summary: String,
    /// Named, serialized witness values; present for every Violation.
    pub witness: Vec<(String, String)>,
    pub depth: u32,
    pub word_len: Option<usize>,
    pub disclaimer: Option<String>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error(transparent)]
    Model(#[from] Error),
}

struct Builder {
    check: &'static str,
    depth: u32,
    word_len: Option<usize>,
    screen: bool,
    witness: Vec<(String, String)>,
}

impl Builder {
    fn new(check: &'static str, depth: u32) -> Builder {
        Builder {
            check,
            depth,
            word_len: None,
            screen: false,
            witness: Vec::new(),
        }
    }

    fn words(mut self, n: usize) -> Builder {
        self.word_len = Some(n);
        self
    }

    fn screen(mut self) -> Builder {
        self.screen = true;
        self
    }

    fn with(&mut self, key: &str, value: impl fmt::Display) {
        self.witness.push((key.to_string(), value.to_string()));
    }

    fn done(self, verdict: Verdict, summary: impl Into<String>) -> Result<CheckReport, CheckError> {
        Ok(CheckReport {
            check: self.check.to_string(),
            verdict,
            summary: summary.into(),
            witness: self.witness,
            depth: self.depth,
            word_len: self.word_len,
            disclaimer: self.screen.then(|| REALIZABILITY_DISCLAIMER.to_string()),
        })
    }
}

fn pre(reason: impl Into<String>) -> CheckError {
    CheckError::PreconditionFailed(reason.into())
}

fn resolve(tr: &Truncation, p: &Point) -> Result<(), CheckError> {
    tr.resolve(p)
        .map(|_| ())
        .ok_or_else(|| CheckError::Model(Error::PointOutOfRange(p.clone())))
}

fn display_point(tr: &Truncation, p: &Point) -> String {
    tr.display_point(p)
}

fn display_cell(tr: &Truncation, c: &Cell) -> String {
    match tr.lookup(c) {
        Some(ix) => tr.display_cell(ix),
        None => c.to_string(),
    }
}

fn display_cells(tr: &Truncation, cs: &[Cell]) -> String {
    let parts: Vec<String> = cs.iter().map(|c| display_cell(tr, c)).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Memberships of `points` in `C_t`. Points whose image leaves the window
/// are retried in a window widened by the largest shift of `t`, which
/// contains every such image.
fn memberships(order: &Order, t: &Transform, points: &[Point]) -> Result<Vec<Tri>, Error> {
    let tr = order.truncation();
    let mut out = points
        .iter()
        .map(|p| window_membership(order, t, p))
        .collect::<Result<Vec<_>, _>>()?;
    if tr.is_closed() || !out.contains(&Tri::Truncated) {
        return Ok(out);
    }
    let spec = tr.spec();
    let reach = (0..spec.families().len())
        .map(|f| t.image(f).1.unsigned_abs())
        .max()
        .unwrap_or(0);
    let Ok(reach) = u32::try_from(reach) else {
        return Ok(out);
    };
    if reach == 0 {
        return Ok(out);
    }
    let wide = match expand(spec, tr.depth().saturating_add(reach)) {
        Ok(wide) => wide,
        Err(Error::DepthTooLarge(_)) => return Ok(out),
        Err(e) => return Err(e),
    };
    let wide_order = Order::new(&wide)?;
    for (m, p) in out.iter_mut().zip(points) {
        if *m == Tri::Truncated {
            *m = window_membership(&wide_order, t, p)?;
        }
    }
    Ok(out)
}

fn membership(order: &Order, t: &Transform, x: &Point) -> Result<Tri, Error> {
    Ok(memberships(order, t, std::slice::from_ref(x))?[0])
}

fn compare_images(order: &Order, t: &Transform, x: &Point) -> Result<Comparability, Error> {
    let tr = order.truncation();
    let y = t.apply_point(tr.spec(), x)?;
    if tr.resolve(&y).is_none() {
        return Ok(Comparability::Truncated);
    }
    order.compare(x, &y)
}

/// Common lower bounds of `mu` and `w(mu)` lie in `C_w`, under one-sided
/// positive branching.
pub fn check_lower_bound(
    spec: &LeafSpaceSpec,
    w: &Word,
    lambda: &Point,
    mu: &Point,
    depth: u32,
) -> Result<CheckReport, CheckError> {
    let tr = expand(spec, depth)?;
    let order = Order::new(&tr)?;
    check_lower_bound_in(&order, w, lambda, mu)
}

pub(crate) fn check_lower_bound_in(
    order: &Order,
    w: &Word,
    lambda: &Point,
    mu: &Point,
) -> Result<CheckReport, CheckError> {
    let tr = order.truncation();
    let spec = tr.spec();
    let depth = tr.depth();
    let mut b = Builder::new("check_lower_bound", depth);
    let t = Transform::of_word(spec, w)?;
    resolve(tr, lambda)?;
    resolve(tr, mu)?;
    let branching = branching_in(tr);
    if branching.value != BranchingType::OneSidedPositive {
        return Err(pre(format!(
            "branching type is {}, not one_sided_positive",
            branching.value.as_str()
        )));
    }
    let wmu = t.apply_point(spec, mu)?;
    if tr.resolve(&wmu).is_none() {
        return b.done(
            Verdict::Truncated,
            format!("{w}({}) lies outside the window", display_point(tr, mu)),
        );
    }
    let c1 = order.compare(lambda, mu)?;
    let c2 = order.compare(lambda, &wmu)?;
    if c1 == Comparability::Truncated || c2 == Comparability::Truncated {
        return b.done(
            Verdict::Truncated,
            "bounds cannot be decided inside the window",
        );
    }
    if c1 != Comparability::Less || c2 != Comparability::Less {
        return Err(pre(format!(
            "{} is not below both {} ({c1}) and {} ({c2})",
            display_point(tr, lambda),
            display_point(tr, mu),
            display_point(tr, &wmu)
        )));
    }
    match membership(order, &t, lambda)? {
        Tri::Yes => b.done(
            Verdict::Pass,
            format!("{} is in C_{w}", display_point(tr, lambda)),
        ),
        Tri::Truncated => b.done(
            Verdict::Truncated,
            "membership of the lower bound leaves the window",
        ),
        Tri::No => {
            b.with("word", w);
            b.with("lambda", display_point(tr, lambda));
            b.with("mu", display_point(tr, mu));
            b.done(
                Verdict::Violation,
                format!(
                    "common lower bound {} is not in C_{w}",
                    display_point(tr, lambda)
                ),
            )
        }
    }
}

/// Points at which a path is tested: its endpoints, every vertex and every
/// edge midpoint it covers. Tails have no sample points.
pub(crate) fn path_samples(path: &Path) -> (Vec<Point>, usize) {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut tails = 0;
    for iv in &path.intervals {
        let mut push = |p: Point| {
            if seen.insert(p.clone()) {
                out.push(p);
            }
        };
        push(iv.start.clone());
        for item in &iv.items {
            match item {
                PathItem::Vertex(c) => push(Point::Vertex(c.clone())),
                PathItem::Edge(c) => {
                    let mid = Point::Interior(c.clone(), Coord::half());
                    if on_interval(iv, &mid) {
                        push(mid);
                    }
                }
                PathItem::Tail { .. } => tails += 1,
            }
        }
        push(iv.end.clone());
    }
    (out, tails)
}

/// The path between two points of `C_w` stays in `C_w`, and its junction
/// points are fixed by `w`.
pub fn check_path_in_comparable_set(
    spec: &LeafSpaceSpec,
    w: &Word,
    lambda: &Point,
    mu: &Point,
    depth: u32,
) -> Result<CheckReport, CheckError> {
    let tr = expand(spec, depth)?;
    let order = Order::new(&tr)?;
    check_path_in_comparable_set_in(&order, w, lambda, mu)
}

pub(crate) fn check_path_in_comparable_set_in(
    order: &Order,
    w: &Word,
    lambda: &Point,
    mu: &Point,
) -> Result<CheckReport, CheckError> {
    let tr = order.truncation();
    let spec = tr.spec();
    let depth = tr.depth();
    let mut b = Builder::new("check_path_in_comparable_set", depth);
    let t = Transform::of_word(spec, w)?;
    for p in [lambda, mu] {
        match membership(order, &t, p)? {
            Tri::Yes => {}
            Tri::No => return Err(pre(format!("{} is not in C_{w}", display_point(tr, p)))),
            Tri::Truncated => {
                return b.done(
                    Verdict::Truncated,
                    format!("membership of {} leaves the window", display_point(tr, p)),
                )
            }
        }
    }
    let path = match order.path(lambda, mu) {
        Ok(p) => p,
        Err(Error::Truncated) => {
            return b.done(Verdict::Truncated, "the path does not fit in the window")
        }
        Err(e) => return Err(e.into()),
    };
    for j in &path.junctions {
        for c in [&j.check, &j.hat] {
            let img = t.apply_cell(spec, c)?;
            if img != *c {
                b.with("word", w);
                b.with("lambda", display_point(tr, lambda));
                b.with("mu", display_point(tr, mu));
                b.with(
                    "junction",
                    format!(
                        "{} -> {}",
                        display_cell(tr, &j.check),
                        display_cell(tr, &j.hat)
                    ),
                );
                b.with(
                    "moved",
                    format!("{} -> {}", display_cell(tr, c), display_cell(tr, &img)),
                );
                return b.done(
                    Verdict::Violation,
                    format!("junction point {} is not fixed by {w}", display_cell(tr, c)),
                );
            }
        }
    }
    let (samples, tails) = path_samples(&path);
    let mut undecided = 0;
    let answers = memberships(order, &t, &samples)?;
    for (x, m) in samples.iter().zip(answers) {
        match m {
            Tri::Yes => {}
            Tri::Truncated => undecided += 1,
            Tri::No => {
                b.with("word", w);
                b.with("lambda", display_point(tr, lambda));
                b.with("mu", display_point(tr, mu));
                b.with("point", display_point(tr, x));
                return b.done(
                    Verdict::Violation,
                    format!("{} lies on the path but not in C_{w}", display_point(tr, x)),
                );
            }
        }
    }
    if undecided > 0 {
        return b.done(
            Verdict::Truncated,
            format!("{undecided} path samples could not be decided in the window"),
        );
    }
    let mut summary = format!(
        "path of length {} with {} junctions; {} samples in C_{w}",
        path.length(),
        path.junctions.len(),
        samples.len()
    );
    if tails > 0 {
        summary.push_str(&format!(
            "; {tails} chain tails beyond the window not sampled"
        ));
    }
    b.done(Verdict::Pass, summary)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Node {
    Cell(CellIx),
    Tail(usize),
}

fn node_index(tr: &Truncation, n: Node) -> usize {
    match n {
        Node::Cell(c) => c.get(),
        Node::Tail(t) => tr.cells().len() + t,
    }
}

fn seg_node(seg: Segment) -> Node {
    match seg {
        Segment::Edge(c) => Node::Cell(c),
        Segment::Tail(t) => Node::Tail(t),
    }
}

/// Cell adjacency of the window, with tails as extra nodes.
fn adjacency(tr: &Truncation) -> Vec<(Node, Node)> {
    let mut out = Vec::new();
    for seg in tr.segments() {
        for end in [End::Low, End::High] {
            let here = seg_node(seg);
            match tr.end_link(seg, end) {
                Some(EndLink::Vertex(v)) => out.push((here, Node::Cell(v))),
                Some(EndLink::Joint(s2, _)) => out.push((here, seg_node(s2))),
                Some(EndLink::Limit(id)) => {
                    for &m in &tr.limits()[id].members {
                        out.push((here, Node::Cell(m)));
                    }
                }
                _ => {}
            }
        }
    }
    out
}

/// `C_w` is connected and open; checked on one sample per window cell.
pub fn check_connected_open(
    spec: &LeafSpaceSpec,
    w: &Word,
    depth: u32,
) -> Result<CheckReport, CheckError> {
    let tr = expand(spec, depth)?;
    let order = Order::new(&tr)?;
    check_connected_open_in(&order, w)
}

pub(crate) fn check_connected_open_in(order: &Order, w: &Word) -> Result<CheckReport, CheckError> {
    let tr = order.truncation();
    let spec = tr.spec();
    let depth = tr.depth();
    let mut b = Builder::new("check_connected_open", depth);
    let t = Transform::of_word(spec, w)?;
    let samples = tr.sample_points();
    let member = memberships(order, &t, &samples)?;
    let yes: Vec<CellIx> = tr
        .cell_ixs()
        .filter(|c| member[c.get()] == Tri::Yes)
        .collect();
    if yes.is_empty() {
        return b.done(
            Verdict::Pass,
            format!("C_{w} has no sampled points in the window"),
        );
    }

    let status = |n: Node| match n {
        Node::Cell(c) => Some(member[c.get()]),
        Node::Tail(_) => None,
    };
    let size = tr.cells().len() + tr.tails().len();
    let adj = adjacency(tr);
    let mut strict = UnionFind::<usize>::new(size);
    let mut loose = UnionFind::<usize>::new(size);
    for &(a, c) in &adj {
        let (sa, sc) = (status(a), status(c));
        let ok_strict = |s: Option<Tri>| s.is_none() || s == Some(Tri::Yes);
        let ok_loose = |s: Option<Tri>| s != Some(Tri::No);
        if ok_strict(sa) && ok_strict(sc) {
            strict.union(node_index(tr, a), node_index(tr, c));
        }
        if ok_loose(sa) && ok_loose(sc) {
            loose.union(node_index(tr, a), node_index(tr, c));
        }
    }
    let first = node_index(tr, Node::Cell(yes[0]));
    let mut truncated_link = false;
    for &c in &yes[1..] {
        let ci = node_index(tr, Node::Cell(c));
        if strict.equiv(first, ci) {
            continue;
        }
        if loose.equiv(first, ci) {
            truncated_link = true;
            continue;
        }
        let k = order.tree();
        let comp = |x: CellIx| match tr.kind(x) {
            CellKind::Vertex => k.component(k.vertex_node(x)),
            CellKind::Edge => k.component(k.segment_nodes(Segment::Edge(x)).0),
        };
        if comp(yes[0]) != comp(c) {
            truncated_link = true;
            continue;
        }
        b.with("word", w);
        b.with("a", display_point(tr, &samples[yes[0].get()]));
        b.with("b", display_point(tr, &samples[c.get()]));
        return b.done(Verdict::Violation, format!("C_{w} is disconnected"));
    }

    for &v in yes.iter().filter(|&&c| tr.kind(c) == CellKind::Vertex) {
        for side in [End::Low, End::High] {
            let neighbor = match tr.side_link(v, side) {
                Some(SideLink::Segment(Segment::Edge(e), _)) => Some(e),
                Some(SideLink::Limit(id)) => match tr.limits()[id].stem.0 {
                    Segment::Edge(e) => Some(e),
                    Segment::Tail(_) => None,
                },
                _ => None,
            };
            if let Some(e) = neighbor {
                if member[e.get()] == Tri::No {
                    b.with("word", w);
                    b.with("vertex", tr.display_cell(v));
                    b.with("side", side);
                    b.with("neighbor", tr.display_cell(e));
                    return b.done(
                        Verdict::Violation,
                        format!(
                            "C_{w} is not open at {}: its {side} side is outside",
                            tr.display_cell(v)
                        ),
                    );
                }
            }
        }
    }
    if truncated_link {
        return b.done(
            Verdict::Truncated,
            format!("parts of C_{w} connect only through undecided cells"),
        );
    }
    b.done(
        Verdict::Pass,
        format!("C_{w} has {} sampled cells, connected and open", yes.len()),
    )
}

/// If the path from `lambda` to `w(lambda)` has odd length then no point
/// is comparable with its image under any positive power of `w`.
pub fn check_odd_path(
    spec: &LeafSpaceSpec,
    w: &Word,
    lambda: &Point,
    k_max: u32,
    depth: u32,
) -> Result<CheckReport, CheckError> {
    let tr = expand(spec, depth)?;
    let order = Order::new(&tr)?;
    check_odd_path_in(&order, w, lambda, k_max)
}

pub(crate) fn check_odd_path_in(
    order: &Order,
    w: &Word,
    lambda: &Point,
    k_max: u32,
) -> Result<CheckReport, CheckError> {
    let tr = order.truncation();
    let spec = tr.spec();
    let depth = tr.depth();
    let mut b = Builder::new("check_odd_path", depth);
    let t = Transform::of_word(spec, w)?;
    resolve(tr, lambda)?;
    match membership(order, &t, lambda)? {
        Tri::No => {}
        Tri::Yes => return Err(pre(format!("{} is in C_{w}", display_point(tr, lambda)))),
        Tri::Truncated => {
            return b.done(Verdict::Truncated, "membership of lambda leaves the window")
        }
    }
    let image = t.apply_point(spec, lambda)?;
    let gamma = match order.path(lambda, &image) {
        Ok(p) => p,
        Err(Error::Truncated) => {
            return b.done(Verdict::Truncated, "the path to the image does not fit")
        }
        Err(e) => return Err(e.into()),
    };
    if gamma.length() % 2 == 0 {
        return Err(pre(format!(
            "path from {} to its image has even length {}",
            display_point(tr, lambda),
            gamma.length()
        )));
    }
    let samples = tr.sample_points();
    let mut undecided = 0;
    for k in 1..=k_max {
        let tk = Transform::of_word(spec, &w.pow(k as i64))?;
        let answers = memberships(order, &tk, &samples)?;
        for (x, m) in samples.iter().zip(answers) {
            match m {
                Tri::No => {}
                Tri::Truncated => undecided += 1,
                Tri::Yes => {
                    b.with("word", w);
                    b.with("k", k);
                    b.with("point", display_point(tr, x));
                    return b.done(
                        Verdict::Violation,
                        format!(
                            "{} is comparable with its image under {}",
                            display_point(tr, x),
                            w.pow(k as i64)
                        ),
                    );
                }
            }
        }
    }
    b.done(
        Verdict::Pass,
        format!(
            "path length {}; no sampled point in C_{{{w}^k}} for 1 <= k <= {k_max} ({} samples, {undecided} leave the window)",
            gamma.length(),
            samples.len() * k_max as usize
        ),
    )
}

/// With `lambda` outside `C_w` but inside `C_{w^k}`, the middle junction of
/// the path from `lambda` to `w(lambda)` is exchanged by `w` and fixed by
/// `w^k`.
pub fn check_return(
    spec: &LeafSpaceSpec,
    w: &Word,
    lambda: &Point,
    k: u32,
    depth: u32,
) -> Result<CheckReport, CheckError> {
    let tr = expand(spec, depth)?;
    let order = Order::new(&tr)?;
    check_return_in(&order, w, lambda, k)
}

pub(crate) fn check_return_in(
    order: &Order,
    w: &Word,
    lambda: &Point,
    k: u32,
) -> Result<CheckReport, CheckError> {
    let tr = order.truncation();
    let spec = tr.spec();
    let depth = tr.depth();
    let mut b = Builder::new("check_return", depth);
    let t = Transform::of_word(spec, w)?;
    resolve(tr, lambda)?;
    if k < 2 {
        return Err(pre("k must be at least 2"));
    }
    let wk = w.pow(k as i64);
    let tk = Transform::of_word(spec, &wk)?;
    match membership(order, &t, lambda)? {
        Tri::No => {}
        Tri::Yes => return Err(pre(format!("{} is in C_{w}", display_point(tr, lambda)))),
        Tri::Truncated => return b.done(Verdict::Truncated, "membership in C_w leaves the window"),
    }
    match membership(order, &tk, lambda)? {
        Tri::Yes => {}
        Tri::No => {
            return Err(pre(format!(
                "{} is not in C_{{{wk}}}",
                display_point(tr, lambda)
            )))
        }
        Tri::Truncated => {
            return b.done(
                Verdict::Truncated,
                format!("membership in C_{{{wk}}} leaves the window"),
            )
        }
    }
    let image = t.apply_point(spec, lambda)?;
    let gamma = match order.path(lambda, &image) {
        Ok(p) => p,
        Err(Error::Truncated) => {
            return b.done(Verdict::Truncated, "the path to the image does not fit")
        }
        Err(e) => return Err(e.into()),
    };
    b.with("length", gamma.length());
    if gamma.length() % 2 == 1 {
        b.with("word", w);
        b.with("lambda", display_point(tr, lambda));
        return b.done(
            Verdict::Violation,
            format!("path to the image has odd length {}", gamma.length()),
        );
    }
    let m = gamma.length() / 2;
    let j = &gamma.junctions[m - 1];
    let check_img = t.apply_cell(spec, &j.check)?;
    let check_k = tk.apply_cell(spec, &j.check)?;
    b.with("m", m);
    b.with("check", display_cell(tr, &j.check));
    b.with("hat", display_cell(tr, &j.hat));
    if check_img != j.hat || check_k != j.check {
        b.with("word", w);
        b.with("lambda", display_point(tr, lambda));
        b.with("w(check)", display_cell(tr, &check_img));
        b.with("w^k(check)", display_cell(tr, &check_k));
        return b.done(
            Verdict::Violation,
            format!("junction {m} is not exchanged by {w} and fixed by {wk}"),
        );
    }
    b.done(
        Verdict::Pass,
        format!(
            "m = {m}: {w} sends {} to {}, {wk} fixes {}",
            display_cell(tr, &j.check),
            display_cell(tr, &j.hat),
            display_cell(tr, &j.check)
        ),
    )
}

fn find_locus(tr: &Truncation, members: &[Cell]) -> Option<BranchLocus> {
    let want: BTreeSet<&Cell> = members.iter().collect();
    branch_loci(tr)
        .into_iter()
        .find(|l| l.members.iter().collect::<BTreeSet<_>>() == want)
}

/// Stem cells from the locus outward: the stem segment, then whatever
/// continues it, as far as the window allows.
fn stem_cells(tr: &Truncation, locus: &BranchLocus) -> (Vec<CellIx>, usize) {
    let (mut seg, mut toward) = tr.limits()[locus.limit].stem;
    let mut cells = Vec::new();
    let mut tails = 0;
    let mut guard = 0;
    loop {
        guard += 1;
        if guard > tr.cells().len() + tr.tails().len() + 1 {
            break;
        }
        match seg {
            Segment::Edge(e) => cells.push(e),
            Segment::Tail(_) => tails += 1,
        }
        let away = toward.opposite();
        match tr.end_link(seg, away) {
            Some(EndLink::Joint(s2, e2)) => {
                seg = s2;
                toward = e2;
            }
            Some(EndLink::Vertex(v)) => {
                cells.push(v);
                match tr.side_link(v, away) {
                    Some(SideLink::Segment(s2, e2)) => {
                        seg = s2;
                        toward = e2;
                    }
                    _ => break,
                }
            }
            _ => break,
        }
    }
    (cells, tails)
}

/// If `w` maps a branch locus to itself, the stem of the locus near the
/// locus lies in `C_w`.
pub fn check_invariant_locus_stem(
    spec: &LeafSpaceSpec,
    w: &Word,
    locus: &[Cell],
    depth: u32,
) -> Result<CheckReport, CheckError> {
    let tr = expand(spec, depth)?;
    let order = Order::new(&tr)?;
    check_invariant_locus_stem_in(&order, w, locus)
}

pub(crate) fn check_invariant_locus_stem_in(
    order: &Order,
    w: &Word,
    locus: &[Cell],
) -> Result<CheckReport, CheckError> {
    let tr = order.truncation();
    let spec = tr.spec();
    let depth = tr.depth();
    let mut b = Builder::new("check_invariant_locus_stem", depth);
    let t = Transform::of_word(spec, w)?;
    let Some(locus) = find_locus(tr, locus) else {
        return Err(pre(format!(
            "{} is not a branch locus of the window",
            display_cells(tr, locus)
        )));
    };
    let members: BTreeSet<Cell> = locus.members.iter().cloned().collect();
    let images: BTreeSet<Cell> = locus
        .members
        .iter()
        .map(|c| t.apply_cell(spec, c))
        .collect::<Result<_, _>>()?;
    if images != members {
        return Err(pre(format!(
            "{w} does not map {} to itself",
            display_cells(tr, &locus.members)
        )));
    }
    let (cells, _) = stem_cells(tr, &locus);
    let mut skipped = 0;
    for c in cells {
        let p = match tr.kind(c) {
            CellKind::Vertex => Point::Vertex(tr.cell(c).clone()),
            CellKind::Edge => Point::Interior(tr.cell(c).clone(), Coord::half()),
        };
        match membership(order, &t, &p)? {
            Tri::Truncated => skipped += 1,
            Tri::Yes => {
                return b.done(
                    Verdict::Pass,
                    format!(
                        "stem point {} next to {} is in C_{w}",
                        display_point(tr, &p),
                        display_cells(tr, &locus.members)
                    ),
                )
            }
            Tri::No if skipped == 0 => {
                b.with("word", w);
                b.with("locus", display_cells(tr, &locus.members));
                b.with("point", display_point(tr, &p));
                return b.done(
                    Verdict::Violation,
                    format!(
                        "stem point {} nearest the locus is not in C_{w}",
                        display_point(tr, &p)
                    ),
                );
            }
            Tri::No => {
                return b.done(
                    Verdict::Truncated,
                    format!(
                        "stem cells nearest the locus are undecided; {} is not in C_{w}",
                        display_point(tr, &p)
                    ),
                )
            }
        }
    }
    b.done(
        Verdict::Truncated,
        "no stem cell could be decided inside the window",
    )
}

pub fn stabilizer_ball(
    spec: &LeafSpaceSpec,
    locus: &[Cell],
    radius: usize,
    depth: u32,
) -> Result<StabilizerBall, CheckError> {
    let tr = expand(spec, depth)?;
    Order::new(&tr)?;
    let Some(l) = find_locus(&tr, locus) else {
        return Err(pre(format!(
            "{} is not a branch locus of the window",
            display_cells(&tr, locus)
        )));
    };
    Ok(stabilizer_ball_in(&tr, &l, radius)?)
}

/// Every stabilizer ball of a window locus is generated by one element.
pub fn check_stabilizer_cyclic(
    spec: &LeafSpaceSpec,
    radius: usize,
    depth: u32,
) -> Result<CheckReport, CheckError> {
    let tr = expand(spec, depth)?;
    let order = Order::new(&tr)?;
    check_stabilizer_cyclic_in(&order, radius)
}

pub(crate) fn check_stabilizer_cyclic_in(
    order: &Order,
    radius: usize,
) -> Result<CheckReport, CheckError> {
    let tr = order.truncation();
    let depth = tr.depth();
    let mut b = Builder::new("check_stabilizer_cyclic", depth)
        .words(radius)
        .screen();
    let loci = branch_loci(tr);
    if loci.is_empty() {
        return b.done(Verdict::Pass, "no branch loci in the window");
    }
    let mut lines = Vec::new();
    for l in &loci {
        let ball = stabilizer_ball_in(tr, l, radius)?;
        match &ball.cyclic_generator {
            Some(c) => lines.push(format!(
                "{}: {} elements, generated by {c}",
                display_cells(tr, &l.members),
                ball.members.len()
            )),
            None => {
                b.with("locus", display_cells(tr, &l.members));
                let ws: Vec<String> = ball.members.iter().map(|w| w.to_string()).collect();
                b.with("ball", ws.join(", "));
                return b.done(
                    Verdict::Violation,
                    format!(
                        "stabilizer of {} is not cyclic at radius {radius}",
                        display_cells(tr, &l.members)
                    ),
                );
            }
        }
    }
    b.done(
        Verdict::Pass,
        format!(
            "{} loci; {}",
            loci.len(),
            lines.first().cloned().unwrap_or_default()
        ),
    )
}

/// An element of a stabilizer ball fixing one point of the locus fixes
/// all of them.
pub fn check_fix_propagation(
    spec: &LeafSpaceSpec,
    locus: &[Cell],
    radius: usize,
    depth: u32,
) -> Result<CheckReport, CheckError> {
    let tr = expand(spec, depth)?;
    let order = Order::new(&tr)?;
    check_fix_propagation_in(&order, locus, radius)
}

pub(crate) fn check_fix_propagation_in(
    order: &Order,
    locus: &[Cell],
    radius: usize,
) -> Result<CheckReport, CheckError> {
    let tr = order.truncation();
    let depth = tr.depth();
    let mut b = Builder::new("check_fix_propagation", depth)
        .words(radius)
        .screen();
    let Some(l) = find_locus(tr, locus) else {
        return Err(pre(format!(
            "{} is not a branch locus of the window",
            display_cells(tr, locus)
        )));
    };
    let ball = stabilizer_ball_in(tr, &l, radius)?;
    let fixed = fixed_members(&ball);
    for w in &ball.members {
        let f = &fixed[w];
        if !f.is_empty() && f.len() < l.members.len() {
            b.with("word", w);
            b.with("locus", display_cells(tr, &l.members));
            b.with("fixed", display_cells(tr, f));
            return b.done(
                Verdict::Violation,
                format!(
                    "{w} fixes {} but not all of the locus",
                    display_cells(tr, f)
                ),
            );
        }
    }
    b.done(
        Verdict::Pass,
        format!(
            "{} stabilizer elements; each fixes all or none of the locus",
            ball.members.len()
        ),
    )
}

/// No nontrivial reduced word acts trivially, given branching.
pub fn check_faithfulness(
    spec: &LeafSpaceSpec,
    max_len: usize,
    depth: u32,
) -> Result<CheckReport, CheckError> {
    let tr = expand(spec, depth)?;
    let order = Order::new(&tr)?;
    check_faithfulness_in(&order, max_len)
}

pub(crate) fn check_faithfulness_in(
    order: &Order,
    max_len: usize,
) -> Result<CheckReport, CheckError> {
    let tr = order.truncation();
    let spec = tr.spec();
    let depth = tr.depth();
    let mut b = Builder::new("check_faithfulness", depth)
        .words(max_len)
        .screen();
    if branching_in(tr).value == BranchingType::None {
        return Err(pre("the model has no branching"));
    }
    let id = fingerprint(tr, &Transform::identity(spec));
    let words = all_words(spec, max_len)?;
    for (w, t) in &words[1..] {
        if fingerprint(tr, t) == id {
            b.with("word", w);
            return b.done(
                Verdict::Violation,
                format!("{w} acts as the identity on the window"),
            );
        }
    }
    b.done(
        Verdict::Pass,
        format!(
            "{} nontrivial reduced words, none acting trivially",
            words.len() - 1
        ),
    )
}

/// An element moving one point up and another down fixes a point on the
/// path between them, inside a branch locus if the two are incomparable.
pub fn check_intermediate_fixed(
    spec: &LeafSpaceSpec,
    w: &Word,
    x_pos: &Point,
    x_neg: &Point,
    depth: u32,
) -> Result<CheckReport, CheckError> {
    let tr = expand(spec, depth)?;
    let order = Order::new(&tr)?;
    check_intermediate_fixed_in(&order, w, x_pos, x_neg)
}

pub(crate) fn check_intermediate_fixed_in(
    order: &Order,
    w: &Word,
    x_pos: &Point,
    x_neg: &Point,
) -> Result<CheckReport, CheckError> {
    let tr = order.truncation();
    let spec = tr.spec();
    let depth = tr.depth();
    let mut b = Builder::new("check_intermediate_fixed", depth).screen();
    let t = Transform::of_word(spec, w)?;
    resolve(tr, x_pos)?;
    resolve(tr, x_neg)?;
    for (x, want) in [
        (x_pos, Comparability::Less),
        (x_neg, Comparability::Greater),
    ] {
        match compare_images(order, &t, x)? {
            Comparability::Truncated => {
                return b.done(
                    Verdict::Truncated,
                    format!("{} cannot be compared with its image", display_point(tr, x)),
                )
            }
            c if c != want => {
                return Err(pre(format!(
                    "{} vs its image under {w} is {c}, expected {want}",
                    display_point(tr, x)
                )))
            }
            _ => {}
        }
    }
    let path = match order.path(x_pos, x_neg) {
        Ok(p) => p,
        Err(Error::Truncated) => {
            return b.done(Verdict::Truncated, "the path does not fit in the window")
        }
        Err(e) => return Err(e.into()),
    };
    let fixed: BTreeSet<Cell> = fixed_cells_in(tr, &t)?
        .into_iter()
        .map(|c| tr.cell(c).clone())
        .collect();
    let loci = branch_loci(tr);
    let in_locus = |c: &Cell| loci.iter().any(|l| l.members.contains(c));
    let (samples, tails) = path_samples(&path);
    let on_path: Vec<Cell> = samples
        .iter()
        .map(|p| p.cell().clone())
        .filter(|c| fixed.contains(c))
        .collect();
    let comparable = path.length() == 1;
    let witness = if comparable {
        on_path.first()
    } else {
        on_path.iter().find(|c| in_locus(c))
    };
    match witness {
        Some(c) => {
            b.with("fixed", display_cell(tr, c));
            let where_ = if in_locus(c) {
                ", in a branch locus"
            } else {
                ""
            };
            b.done(
                Verdict::Pass,
                format!("{w} fixes {}{where_}", display_cell(tr, c)),
            )
        }
        None if tails > 0 => b.done(
            Verdict::Truncated,
            "no fixed point on the sampled part of the path",
        ),
        None => {
            b.with("word", w);
            b.with("x_pos", display_point(tr, x_pos));
            b.with("x_neg", display_point(tr, x_neg));
            let what = if comparable {
                "fixed point"
            } else {
                "fixed point in a branch locus"
            };
            b.done(Verdict::Violation, format!("no {what} on the path"))
        }
    }
}

/// On a model whose loci are all finite, every tangentiable element should
/// also be transversable.
pub fn screen_infinite_locus(
    spec: &LeafSpaceSpec,
    max_len: usize,
    depth: u32,
) -> Result<CheckReport, CheckError> {
    let tr = expand(spec, depth)?;
    let order = Order::new(&tr)?;
    screen_infinite_locus_in(&order, max_len)
}

pub(crate) fn screen_infinite_locus_in(
    order: &Order,
    max_len: usize,
) -> Result<CheckReport, CheckError> {
    let tr = order.truncation();
    let depth = tr.depth();
    let mut b = Builder::new("screen_infinite_locus", depth)
        .words(max_len)
        .screen();
    let branching = branching_in(tr);
    let mut neither = None;
    let classes = word_classes(tr, max_len)?;
    for (w, t) in &classes[1..] {
        let p = classify_in(order, w, t)?;
        let transversable =
            p.pos_transversable.answer == Tri::Yes || p.neg_transversable.answer == Tri::Yes;
        if p.tangentiable.answer == Tri::Yes && !transversable {
            b.with("word", w);
            if let Some(x) = &p.tangentiable.witness {
                b.with("fixed", display_point(tr, x));
            }
            return b.done(
                Verdict::Violation,
                format!("{w} is tangentiable but moves no point up or down, with all loci finite"),
            );
        }
        if neither.is_none() && p.is_neither_in_window() {
            neither = Some(w.clone());
        }
    }
    let remark = match (&neither, branching.value == BranchingType::TwoSided) {
        (Some(w), true) => format!("neither-element {w} with two-sided branching"),
        (Some(w), false) => {
            format!("neither-element {w} without two-sided branching (window-limited)")
        }
        (None, true) => "two-sided branching, no neither-element within radius".to_string(),
        (None, false) => format!("no neither-element; branching {}", branching.value.as_str()),
    };
    b.done(
        Verdict::Pass,
        format!("{} elements screened; {remark}", classes.len() - 1),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn pt(s: &str) -> Point {
        s.parse().unwrap()
    }

    fn cells(names: &[&str]) -> Vec<Cell> {
        names.iter().map(|&n| Cell::unit(n)).collect()
    }

    fn verdict(r: Result<CheckReport, CheckError>) -> Verdict {
        r.unwrap().verdict
    }

    fn precondition(r: Result<CheckReport, CheckError>) -> bool {
        matches!(r, Err(CheckError::PreconditionFailed(_)))
    }

    #[test]
    fn lower_bound() {
        let comb = gallery::comb().spec;
        let r = check_lower_bound(&comb, &w("t"), &pt("e[-2]:1/2"), &pt("e[0]:1/2"), 3);
        assert_eq!(verdict(r), Verdict::Pass);
        let swap = gallery::swap().spec;
        assert!(precondition(check_lower_bound(
            &swap,
            &w("g"),
            &pt("ra[0]:1/2"),
            &pt("rb[0]:1/2"),
            3
        )));
        let zig = gallery::zigzag().spec;
        assert!(precondition(check_lower_bound(
            &zig,
            &w("h"),
            &pt("E[0]:1/2"),
            &pt("E[1]:1/2"),
            3
        )));
    }

    #[test]
    fn path_in_comparable_set() {
        let swap = gallery::swap().spec;
        let r =
            check_path_in_comparable_set(&swap, &w("g^2"), &pt("ra[0]:1/2"), &pt("rb[0]:1/2"), 3)
                .unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{}", r.summary);
        let r = check_path_in_comparable_set(&swap, &w("g^2"), &pt("s[0]:1/2"), &pt("s[1]:1/2"), 3);
        assert_eq!(verdict(r), Verdict::Pass);
        let tripod = gallery::tripod().spec;
        let r =
            check_path_in_comparable_set(&tripod, &w("x"), &pt("p:1/2"), &pt("q:1/2"), 2).unwrap();
        assert_eq!(r.verdict, Verdict::Violation);
        assert!(r.witness.iter().any(|(k, _)| k == "junction"));
    }

    #[test]
    fn connected_open() {
        assert_eq!(
            verdict(check_connected_open(&gallery::swap().spec, &w("g"), 3)),
            Verdict::Pass
        );
        assert_eq!(
            verdict(check_connected_open(&gallery::zigzag().spec, &w("h"), 3)),
            Verdict::Pass
        );
        assert_eq!(
            verdict(check_connected_open(&gallery::line().spec, &w("t"), 3)),
            Verdict::Pass
        );
    }

    #[test]
    fn odd_path() {
        let zig = gallery::zigzag().spec;
        assert_eq!(
            verdict(check_odd_path(&zig, &w("h"), &pt("E[0]:1/2"), 4, 6)),
            Verdict::Pass
        );
        let swap = gallery::swap().spec;
        assert!(precondition(check_odd_path(
            &swap,
            &w("g"),
            &pt("ra[0]:1/2"),
            4,
            3
        )));
        match check_odd_path(&zig, &w("h^2"), &pt("E[0]:1/2"), 2, 4) {
            Ok(r) => assert_ne!(r.verdict, Verdict::Violation),
            Err(e) => assert!(matches!(e, CheckError::PreconditionFailed(_))),
        }
    }

    #[test]
    fn swap_return() {
        let swap = gallery::swap().spec;
        let r = check_return(&swap, &w("g"), &pt("ra[0]:1/2"), 2, 3).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{}", r.summary);
        let get = |k: &str| {
            r.witness
                .iter()
                .find(|(n, _)| n == k)
                .map(|(_, v)| v.clone())
        };
        assert_eq!(get("m").as_deref(), Some("1"));
        assert_eq!(get("check").as_deref(), Some("a"));
        assert_eq!(get("hat").as_deref(), Some("b"));
        assert!(precondition(check_return(
            &swap,
            &w("g"),
            &pt("s[0]:1/2"),
            2,
            3
        )));
        assert!(precondition(check_return(
            &swap,
            &w("g"),
            &pt("ra[0]:1/2"),
            3,
            3
        )));
    }

    #[test]
    fn invariant_locus_stem() {
        let swap = gallery::swap().spec;
        let ab = cells(&["a", "b"]);
        assert_eq!(
            verdict(check_invariant_locus_stem(&swap, &w("g"), &ab, 3)),
            Verdict::Pass
        );
        assert_eq!(
            verdict(check_invariant_locus_stem(&swap, &w("g^2"), &ab, 3)),
            Verdict::Pass
        );
        let twin = gallery::twinswap().spec;
        assert!(precondition(check_invariant_locus_stem(
            &twin,
            &w("u"),
            &cells(&["a1", "b1"]),
            3
        )));
    }

    #[test]
    fn stabilizers() {
        let swap = gallery::swap().spec;
        let ball = stabilizer_ball(&swap, &cells(&["a", "b"]), 6, 4).unwrap();
        assert!(ball.is_cyclic() && ball.acts_nontrivially);
        assert_eq!(verdict(check_stabilizer_cyclic(&swap, 6, 4)), Verdict::Pass);
        assert_eq!(
            verdict(check_stabilizer_cyclic(&gallery::line().spec, 6, 2)),
            Verdict::Pass
        );
        assert_eq!(
            verdict(check_fix_propagation(&swap, &cells(&["a", "b"]), 6, 4)),
            Verdict::Pass
        );
        let tripod = gallery::tripod().spec;
        let r = check_fix_propagation(&tripod, &cells(&["a", "b", "c"]), 2, 2).unwrap();
        assert_eq!(r.verdict, Verdict::Violation);
        assert_eq!(r.disclaimer.as_deref(), Some(REALIZABILITY_DISCLAIMER));
    }

    #[test]
    fn faithfulness() {
        assert_eq!(
            verdict(check_faithfulness(&gallery::swap().spec, 6, 4)),
            Verdict::Pass
        );
        assert_eq!(
            verdict(check_faithfulness(&gallery::zigzag().spec, 6, 4)),
            Verdict::Pass
        );
        assert!(precondition(check_faithfulness(
            &gallery::line().spec,
            6,
            4
        )));
    }

    #[test]
    fn intermediate_fixed() {
        let swap = gallery::swap().spec;
        let r = check_intermediate_fixed(&swap, &w("g^2"), &pt("s[0]:1/2"), &pt("ra[0]:1/2"), 3)
            .unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{}", r.summary);
        assert_eq!(r.witness, vec![("fixed".to_string(), "a".to_string())]);
        let line = gallery::line().spec;
        assert!(precondition(check_intermediate_fixed(
            &line,
            &w("t"),
            &pt("e[0]:1/2"),
            &pt("e[1]:1/2"),
            3
        )));
    }

    #[test]
    fn infinite_locus_screen() {
        for g in [gallery::swap(), gallery::zigzag(), gallery::comb()] {
            let r = screen_infinite_locus(&g.spec, 6, 4).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{}: {}", g.name, r.summary);
        }
        let r = screen_infinite_locus(&gallery::zigzag().spec, 6, 4).unwrap();
        assert!(
            r.summary
                .contains("neither-element h with two-sided branching"),
            "{}",
            r.summary
        );
    }
}
