//! Comparable sets, fixed cells, element classification and branching type.
//!
//! `C_w` is the set of points `x` comparable with `w(x)`. Under shift
//! actions membership is constant along the interior of an edge, so the
//! window's sample points (every vertex, every edge midpoint) decide it at
//! cell resolution.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::action::{Transform, Word};
use crate::error::Error;
use crate::expand::{expand, CellIx, Truncation};
use crate::loci::{branch_loci, Sign};
use crate::model::{CellKind, LeafSpaceSpec};
use crate::order::{Comparability, Order};
use crate::point::{Cell, Point};
use crate::tri::Tri;
use crate::validate::validate;

/// Membership of `x` in `C_t`; `x` must lie in the window.
pub fn membership(order: &Order, t: &Transform, x: &Point) -> Result<Tri, Error> {
    let tr = order.truncation();
    let xi = tr
        .resolve(x)
        .ok_or_else(|| Error::PointOutOfRange(x.clone()))?;
    let y = t.apply_point(tr.spec(), x)?;
    let Some(yi) = tr.resolve(&y) else {
        return Ok(Tri::Truncated);
    };
    Ok(match order.compare_ix(xi, yi)? {
        Comparability::Less | Comparability::Greater | Comparability::Equal => Tri::Yes,
        Comparability::Incomparable => Tri::No,
        Comparability::Truncated => Tri::Truncated,
    })
}

pub fn in_comparable_set(
    spec: &LeafSpaceSpec,
    w: &Word,
    x: &Point,
    depth: u32,
) -> Result<Tri, Error> {
    let t = Transform::of_word(spec, w)?;
    let tr = expand(spec, depth)?;
    let order = Order::new(&tr)?;
    membership(&order, &t, x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparableSample {
    pub word: Word,
    pub depth: u32,
    pub members: Vec<(Point, Tri)>,
}

impl ComparableSample {
    pub fn yes(&self) -> impl Iterator<Item = &Point> {
        self.members
            .iter()
            .filter(|(_, t)| *t == Tri::Yes)
            .map(|(p, _)| p)
    }
}

pub fn sample_in(order: &Order, word: &Word, t: &Transform) -> Result<ComparableSample, Error> {
    let tr = order.truncation();
    let members = tr
        .sample_points()
        .into_iter()
        .map(|p| membership(order, t, &p).map(|m| (p, m)))
        .collect::<Result<_, _>>()?;
    Ok(ComparableSample {
        word: word.clone(),
        depth: tr.depth(),
        members,
    })
}

/// Membership of every sample point of the window.
pub fn comparable_sample(
    spec: &LeafSpaceSpec,
    w: &Word,
    depth: u32,
) -> Result<ComparableSample, Error> {
    let t = Transform::of_word(spec, w)?;
    let tr = expand(spec, depth)?;
    let order = Order::new(&tr)?;
    sample_in(&order, w, &t)
}

pub fn fixed_cells_in(tr: &Truncation, t: &Transform) -> Result<Vec<CellIx>, Error> {
    let mut out = Vec::new();
    for c in tr.cell_ixs() {
        if t.apply_cell(tr.spec(), tr.cell(c))? == *tr.cell(c) {
            out.push(c);
        }
    }
    Ok(out)
}

/// Window cells mapped to themselves. A fixed edge is fixed pointwise,
/// since actions preserve interior coordinates.
pub fn fixed_cells(spec: &LeafSpaceSpec, w: &Word, depth: u32) -> Result<BTreeSet<Cell>, Error> {
    let t = Transform::of_word(spec, w)?;
    let tr = expand(spec, depth)?;
    Ok(fixed_cells_in(&tr, &t)?
        .into_iter()
        .map(|c| tr.cell(c).clone())
        .collect())
}

/// One classification answer. When no witness exists, `answer` is `No`
/// only if the window is the whole model; otherwise it is `Truncated`, and
/// `undecided` counts samples whose test could not be completed inside
/// the window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub answer: Tri,
    pub witness: Option<Point>,
    pub undecided: usize,
}

impl Finding {
    fn found(p: Point) -> Finding {
        Finding {
            answer: Tri::Yes,
            witness: Some(p),
            undecided: 0,
        }
    }

    fn absent(tr: &Truncation, undecided: usize) -> Finding {
        let answer = if tr.is_closed() && undecided == 0 {
            Tri::No
        } else {
            Tri::Truncated
        };
        Finding {
            answer,
            witness: None,
            undecided,
        }
    }

    /// No witness anywhere in the window.
    pub fn absent_in_window(&self) -> bool {
        self.answer != Tri::Yes
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementProfile {
    pub word: Word,
    pub depth: u32,
    pub tangentiable: Finding,
    pub pos_transversable: Finding,
    pub neg_transversable: Finding,
}

impl ElementProfile {
    pub fn is_neither_in_window(&self) -> bool {
        self.tangentiable.absent_in_window()
            && self.pos_transversable.absent_in_window()
            && self.neg_transversable.absent_in_window()
    }
}

fn sample_of(tr: &Truncation, c: CellIx) -> Point {
    match tr.kind(c) {
        CellKind::Vertex => Point::Vertex(tr.cell(c).clone()),
        CellKind::Edge => Point::Interior(tr.cell(c).clone(), crate::point::Coord::half()),
    }
}

pub fn classify_in(order: &Order, word: &Word, t: &Transform) -> Result<ElementProfile, Error> {
    let tr = order.truncation();
    let tangentiable = match fixed_cells_in(tr, t)?.first() {
        Some(&c) => Finding::found(sample_of(tr, c)),
        None => Finding::absent(tr, 0),
    };
    let mut pos = None;
    let mut neg = None;
    let mut undecided = 0;
    for x in tr.sample_points() {
        if pos.is_some() && neg.is_some() {
            break;
        }
        let y = t.apply_point(tr.spec(), &x)?;
        let (Some(xi), Some(yi)) = (tr.resolve(&x), tr.resolve(&y)) else {
            undecided += 1;
            continue;
        };
        match order.compare_ix(xi, yi)? {
            Comparability::Less if pos.is_none() => pos = Some(x),
            Comparability::Greater if neg.is_none() => neg = Some(x),
            Comparability::Truncated => undecided += 1,
            _ => {}
        }
    }
    let finish = |w: Option<Point>| match w {
        Some(p) => Finding::found(p),
        None => Finding::absent(tr, undecided),
    };
    Ok(ElementProfile {
        word: word.clone(),
        depth: tr.depth(),
        tangentiable,
        pos_transversable: finish(pos),
        neg_transversable: finish(neg),
    })
}

/// Tangentiable: has a fixed point. Positively (negatively) transversable:
/// moves some point strictly up (down).
pub fn classify_element(
    spec: &LeafSpaceSpec,
    w: &Word,
    depth: u32,
) -> Result<ElementProfile, Error> {
    let t = Transform::of_word(spec, w)?;
    let tr = expand(spec, depth)?;
    let order = Order::new(&tr)?;
    classify_in(&order, w, &t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchingType {
    None,
    OneSidedPositive,
    OneSidedNegative,
    TwoSided,
}

impl BranchingType {
    pub fn as_str(self) -> &'static str {
        match self {
            BranchingType::None => "none",
            BranchingType::OneSidedPositive => "one_sided_positive",
            BranchingType::OneSidedNegative => "one_sided_negative",
            BranchingType::TwoSided => "two_sided",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Branching {
    pub value: BranchingType,
    /// Loci beyond the window could still change the answer.
    pub window_limited: bool,
}

pub fn branching_in(tr: &Truncation) -> Branching {
    let loci = branch_loci(tr);
    let pos = loci.iter().any(|l| l.sign == Sign::Positive);
    let neg = loci.iter().any(|l| l.sign == Sign::Negative);
    let value = match (pos, neg) {
        (false, false) => BranchingType::None,
        (true, false) => BranchingType::OneSidedPositive,
        (false, true) => BranchingType::OneSidedNegative,
        (true, true) => BranchingType::TwoSided,
    };
    Branching {
        value,
        window_limited: !tr.is_closed() && value != BranchingType::TwoSided,
    }
}

pub fn branching_type(spec: &LeafSpaceSpec, depth: u32) -> Result<Branching, Error> {
    let tr = expand(spec, depth)?;
    let report = validate(&tr);
    if !report.is_valid() {
        return Err(Error::InvalidModel(report.summary()));
    }
    Ok(branching_in(&tr))
}
