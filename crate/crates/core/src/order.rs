//! Geodesic paths and the induced partial order.
//!
//! The path between two points is computed in two stages: a geodesic in the
//! Hausdorff tree, then a lift back to the leaf space. Wherever the lift has
//! to move between non-separated vertices of one class it leaves the
//! current monotone interval, records a junction, and starts a new one.
//! `x < y` exactly when the path from `x` to `y` is a single ascending
//! interval.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::Error;
use crate::expand::{CellIx, EndLink, PointIx, Segment, Truncation};
use crate::hausdorff::{self, HausdorffTree};
use crate::model::{ChainDir, End};
use crate::point::{Cell, Point};
use crate::tri::Tri;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Direction {
    Ascending,
    Descending,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Ascending => Direction::Descending,
            Direction::Descending => Direction::Ascending,
        }
    }

    fn arrive(self) -> End {
        match self {
            Direction::Ascending => End::High,
            Direction::Descending => End::Low,
        }
    }

    fn depart(self) -> End {
        self.arrive().opposite()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PathItem {
    Edge(Cell),
    /// The part of a self-glued chain beyond the window.
    Tail {
        family: String,
        toward: ChainDir,
    },
    Vertex(Cell),
}

/// A monotone piece of a path. Single-point intervals are `Ascending` by
/// convention.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub start: Point,
    pub end: Point,
    pub direction: Direction,
    /// Cells touched, in path order, endpoints included.
    pub items: Vec<PathItem>,
}

impl Interval {
    pub fn is_degenerate(&self) -> bool {
        self.start == self.end
    }
}

/// A jump between two distinct non-separated vertices `check` and `hat`
/// belonging to the branch locus `locus`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Junction {
    pub check: Cell,
    pub hat: Cell,
    pub locus: Vec<Cell>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Path {
    pub intervals: Vec<Interval>,
    pub junctions: Vec<Junction>,
}

impl Path {
    /// Number of monotone intervals.
    pub fn length(&self) -> usize {
        self.intervals.len()
    }

    pub fn start(&self) -> &Point {
        &self.intervals[0].start
    }

    pub fn end(&self) -> &Point {
        &self.intervals[self.intervals.len() - 1].end
    }

    /// The same path traversed backwards.
    pub fn reverse(&self) -> Path {
        let intervals = self
            .intervals
            .iter()
            .rev()
            .map(|iv| Interval {
                start: iv.end.clone(),
                end: iv.start.clone(),
                direction: if iv.is_degenerate() {
                    Direction::Ascending
                } else {
                    iv.direction.flip()
                },
                items: iv.items.iter().rev().cloned().collect(),
            })
            .collect();
        let junctions = self
            .junctions
            .iter()
            .rev()
            .map(|j| Junction {
                check: j.hat.clone(),
                hat: j.check.clone(),
                locus: j.locus.clone(),
            })
            .collect();
        Path {
            intervals,
            junctions,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Comparability {
    Less,
    Greater,
    Equal,
    Incomparable,
    /// The points are not joined inside the window.
    Truncated,
}

impl fmt::Display for Comparability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Comparability::Less => "less",
            Comparability::Greater => "greater",
            Comparability::Equal => "equal",
            Comparability::Incomparable => "incomparable",
            Comparability::Truncated => "truncated",
        };
        f.write_str(s)
    }
}

/// Path and order queries on one window; builds the Hausdorff tree once.
#[derive(Clone, Debug)]
pub struct Order<'a> {
    tr: &'a Truncation,
    tree: HausdorffTree,
}

#[derive(Clone, Copy, Debug)]
struct Trav {
    seg: Segment,
    dir: Direction,
}

enum Contact {
    Joint,
    Members(Vec<CellIx>),
}

struct Lift<'o, 'a> {
    order: &'o Order<'a>,
    intervals: Vec<Interval>,
    junctions: Vec<Junction>,
    start: PointIx,
    dir: Option<Direction>,
    items: Vec<PathItem>,
}

impl<'a> Order<'a> {
    pub fn new(tr: &'a Truncation) -> Result<Order<'a>, Error> {
        Ok(Order {
            tr,
            tree: hausdorff::hausdorffify(tr)?,
        })
    }

    pub fn truncation(&self) -> &'a Truncation {
        self.tr
    }

    pub fn tree(&self) -> &HausdorffTree {
        &self.tree
    }

    fn resolve(&self, p: &Point) -> Result<PointIx, Error> {
        self.tr
            .resolve(p)
            .ok_or_else(|| Error::PointOutOfRange(p.clone()))
    }

    pub fn path(&self, x: &Point, y: &Point) -> Result<Path, Error> {
        let (x, y) = (self.resolve(x)?, self.resolve(y)?);
        self.path_ix(x, y)
    }

    pub fn compare(&self, x: &Point, y: &Point) -> Result<Comparability, Error> {
        let (xi, yi) = (self.resolve(x)?, self.resolve(y)?);
        if xi == yi {
            return Ok(Comparability::Equal);
        }
        match self.path_ix(xi, yi) {
            Ok(p) => Ok(classify(&p)),
            Err(Error::Truncated) => Ok(Comparability::Truncated),
            Err(e) => Err(e),
        }
    }

    pub(crate) fn compare_ix(&self, x: PointIx, y: PointIx) -> Result<Comparability, Error> {
        if x == y {
            return Ok(Comparability::Equal);
        }
        match self.path_ix(x, y) {
            Ok(p) => Ok(classify(&p)),
            Err(Error::Truncated) => Ok(Comparability::Truncated),
            Err(e) => Err(e),
        }
    }

    fn item_of(&self, p: PointIx) -> PathItem {
        match p {
            PointIx::Vertex(v) => PathItem::Vertex(self.tr.cell(v).clone()),
            PointIx::Interior(e, _) => PathItem::Edge(self.tr.cell(e).clone()),
        }
    }

    fn seg_item(&self, seg: Segment) -> PathItem {
        match seg {
            Segment::Edge(e) => PathItem::Edge(self.tr.cell(e).clone()),
            Segment::Tail(t) => {
                let tail = &self.tr.tails()[t];
                PathItem::Tail {
                    family: tail.family.clone(),
                    toward: tail.toward,
                }
            }
        }
    }

    pub(crate) fn path_ix(&self, x: PointIx, y: PointIx) -> Result<Path, Error> {
        let tr = self.tr;
        if x == y {
            return Ok(Path {
                intervals: vec![Interval {
                    start: tr.point(x),
                    end: tr.point(y),
                    direction: Direction::Ascending,
                    items: vec![self.item_of(x)],
                }],
                junctions: vec![],
            });
        }
        if let (PointIx::Interior(e1, t1), PointIx::Interior(e2, t2)) = (x, y) {
            if e1 == e2 {
                let direction = if t1 < t2 {
                    Direction::Ascending
                } else {
                    Direction::Descending
                };
                return Ok(Path {
                    intervals: vec![Interval {
                        start: tr.point(x),
                        end: tr.point(y),
                        direction,
                        items: vec![self.item_of(x)],
                    }],
                    junctions: vec![],
                });
            }
        }

        let k = &self.tree;
        let exits: Vec<(_, Option<Trav>)> = match x {
            PointIx::Vertex(v) => vec![(k.vertex_node(v), None)],
            PointIx::Interior(e, _) => {
                let (lo, hi) = k.segment_nodes(Segment::Edge(e));
                vec![
                    (
                        hi,
                        Some(Trav {
                            seg: Segment::Edge(e),
                            dir: Direction::Ascending,
                        }),
                    ),
                    (
                        lo,
                        Some(Trav {
                            seg: Segment::Edge(e),
                            dir: Direction::Descending,
                        }),
                    ),
                ]
            }
        };
        let entries: Vec<(_, Option<Trav>)> = match y {
            PointIx::Vertex(v) => vec![(k.vertex_node(v), None)],
            PointIx::Interior(e, _) => {
                let (lo, hi) = k.segment_nodes(Segment::Edge(e));
                vec![
                    (
                        lo,
                        Some(Trav {
                            seg: Segment::Edge(e),
                            dir: Direction::Ascending,
                        }),
                    ),
                    (
                        hi,
                        Some(Trav {
                            seg: Segment::Edge(e),
                            dir: Direction::Descending,
                        }),
                    ),
                ]
            }
        };
        if k.component(exits[0].0) != k.component(entries[0].0) {
            return Err(Error::Truncated);
        }
        let mut best: Option<(usize, Vec<Trav>)> = None;
        for (xn, xt) in &exits {
            for (yn, yt) in &entries {
                let Some(route) = k.route(*xn, *yn) else {
                    continue;
                };
                let mut travs: Vec<Trav> = xt.iter().copied().collect();
                let mut at = *xn;
                for (seg, reached) in route {
                    let (lo, _) = k.segment_nodes(seg);
                    let dir = if lo == at {
                        Direction::Ascending
                    } else {
                        Direction::Descending
                    };
                    travs.push(Trav { seg, dir });
                    at = reached;
                }
                travs.extend(yt.iter().copied());
                if best.as_ref().is_none_or(|(n, _)| travs.len() < *n) {
                    best = Some((travs.len(), travs));
                }
            }
        }
        let (_, travs) = best.ok_or(Error::Truncated)?;
        self.lift(x, y, &travs)
    }

    fn contact(&self, seg: Segment, end: End) -> Result<Contact, Error> {
        match self.tr.end_link(seg, end) {
            Some(EndLink::Vertex(v)) => Ok(Contact::Members(vec![v])),
            Some(EndLink::Limit(id)) => Ok(Contact::Members(self.tr.limits()[id].members.clone())),
            Some(EndLink::Joint(..)) => Ok(Contact::Joint),
            _ => Err(Error::InvalidModel(format!(
                "route crosses the free {end} end of {}",
                self.tr.display_segment(seg)
            ))),
        }
    }

    fn lift(&self, x: PointIx, y: PointIx, travs: &[Trav]) -> Result<Path, Error> {
        let mut lift = Lift {
            order: self,
            intervals: Vec::new(),
            junctions: Vec::new(),
            start: x,
            dir: None,
            items: vec![self.item_of(x)],
        };
        // A vertex start crosses its node before the first traversal.
        if let PointIx::Vertex(v) = x {
            let s2 = match travs.first() {
                Some(t) => self.contact(t.seg, t.dir.depart())?,
                None => Contact::Members(vec![match y {
                    PointIx::Vertex(w) => w,
                    PointIx::Interior(..) => {
                        unreachable!("interior targets are entered by a traversal")
                    }
                }]),
            };
            let Contact::Members(s2) = s2 else {
                unreachable!("vertices never sit at joints")
            };
            lift.cross(vec![v], s2, true)?;
        }
        for (i, t) in travs.iter().enumerate() {
            let partial_first = i == 0 && matches!(x, PointIx::Interior(..));
            if !partial_first {
                lift.push_item(self.seg_item(t.seg));
            }
            lift.traverse(t.dir)?;
            let s1 = self.contact(t.seg, t.dir.arrive());
            match travs.get(i + 1) {
                Some(next) => match (s1?, self.contact(next.seg, next.dir.depart())?) {
                    (Contact::Members(a), Contact::Members(b)) => lift.cross(a, b, false)?,
                    (Contact::Joint, Contact::Joint) => {}
                    _ => return Err(Error::InvalidModel("joint meets a vertex".into())),
                },
                None => {
                    if let PointIx::Vertex(w) = y {
                        let Contact::Members(a) = s1? else {
                            return Err(Error::InvalidModel("path ends at a joint".into()));
                        };
                        lift.cross(a, vec![w], false)?;
                    }
                }
            }
        }
        Ok(lift.finish(y))
    }
}

impl Lift<'_, '_> {
    fn push_item(&mut self, item: PathItem) {
        if self.items.last() != Some(&item) {
            self.items.push(item);
        }
    }

    fn traverse(&mut self, dir: Direction) -> Result<(), Error> {
        match self.dir {
            Some(d) if d != dir => Err(Error::InvalidModel(
                "inconsistent orientation along a path".into(),
            )),
            _ => {
                self.dir = Some(dir);
                Ok(())
            }
        }
    }

    fn close(&mut self, end: PointIx) {
        let tr = self.order.tr;
        let items = std::mem::take(&mut self.items);
        self.intervals.push(Interval {
            start: tr.point(self.start),
            end: tr.point(end),
            direction: self.dir.unwrap_or(Direction::Ascending),
            items,
        });
        self.dir = None;
    }

    /// Move from the vertices touched on arrival to those touched on
    /// departure, jumping across co-locus vertices when they differ.
    fn cross(&mut self, s1: Vec<CellIx>, s2: Vec<CellIx>, at_start: bool) -> Result<(), Error> {
        let tr = self.order.tr;
        let targets: BTreeSet<CellIx> = s2.iter().copied().collect();
        if let Some(&v) = s1.iter().filter(|v| targets.contains(v)).min() {
            if !at_start {
                self.push_item(PathItem::Vertex(tr.cell(v).clone()));
            }
            return Ok(());
        }
        let hops = self.hops(&s1, &targets)?;
        let v0 = hops[0].0;
        self.push_item(PathItem::Vertex(tr.cell(v0).clone()));
        self.close(PointIx::Vertex(v0));
        for (j, &(from, to, lim)) in hops.iter().enumerate() {
            let members = tr.limits()[lim]
                .members
                .iter()
                .map(|&m| tr.cell(m).clone())
                .collect();
            self.junctions.push(Junction {
                check: tr.cell(from).clone(),
                hat: tr.cell(to).clone(),
                locus: members,
            });
            self.start = PointIx::Vertex(to);
            self.items = vec![PathItem::Vertex(tr.cell(to).clone())];
            if j + 1 < hops.len() {
                self.close(PointIx::Vertex(to));
            }
        }
        Ok(())
    }

    /// Fewest jumps from any of `from` to any of `to`, as (from, to, limit)
    /// steps.
    fn hops(
        &self,
        from: &[CellIx],
        to: &BTreeSet<CellIx>,
    ) -> Result<Vec<(CellIx, CellIx, usize)>, Error> {
        let tr = self.order.tr;
        let mut prev: BTreeMap<CellIx, (CellIx, usize)> = BTreeMap::new();
        let mut seen: BTreeSet<CellIx> = from.iter().copied().collect();
        let mut starts: Vec<CellIx> = from.to_vec();
        starts.sort();
        let mut queue: VecDeque<CellIx> = starts.into_iter().collect();
        while let Some(u) = queue.pop_front() {
            if to.contains(&u) {
                let mut steps = Vec::new();
                let mut cur = u;
                while let Some(&(p, lim)) = prev.get(&cur) {
                    steps.push((p, cur, lim));
                    cur = p;
                }
                steps.reverse();
                return Ok(steps);
            }
            for &lim in tr.branch_limits_of(u) {
                for &w in &tr.limits()[lim].members {
                    if seen.insert(w) {
                        prev.insert(w, (u, lim));
                        queue.push_back(w);
                    }
                }
            }
        }
        Err(Error::InvalidModel(
            "no chain of branch loci joins two vertices of one class".into(),
        ))
    }

    fn finish(mut self, y: PointIx) -> Path {
        let item = self.order.item_of(y);
        self.push_item(item);
        self.close(y);
        Path {
            intervals: self.intervals,
            junctions: self.junctions,
        }
    }
}

fn classify(p: &Path) -> Comparability {
    match p.intervals.as_slice() {
        [one] if one.is_degenerate() => Comparability::Equal,
        [one] => match one.direction {
            Direction::Ascending => Comparability::Less,
            Direction::Descending => Comparability::Greater,
        },
        _ => Comparability::Incomparable,
    }
}

pub fn path(tr: &Truncation, x: &Point, y: &Point) -> Result<Path, Error> {
    Order::new(tr)?.path(x, y)
}

pub fn compare(tr: &Truncation, x: &Point, y: &Point) -> Result<Comparability, Error> {
    Order::new(tr)?.compare(x, y)
}

/// Whether `z` lies on the interval. `z` must be a point of the window.
pub fn interval_contains(tr: &Truncation, interval: &Interval, z: &Point) -> Result<Tri, Error> {
    tr.resolve(z)
        .ok_or_else(|| Error::PointOutOfRange(z.clone()))?;
    Ok(Tri::from_bool(on_interval(interval, z)))
}

pub(crate) fn on_interval(interval: &Interval, z: &Point) -> bool {
    if *z == interval.start || *z == interval.end {
        return true;
    }
    match z {
        Point::Vertex(c) => interval.items.contains(&PathItem::Vertex(c.clone())),
        Point::Interior(c, t) => {
            if !interval.items.contains(&PathItem::Edge(c.clone())) {
                return false;
            }
            // On the first or last edge only the part between the endpoints
            // is covered.
            let ascending = interval.direction == Direction::Ascending;
            let after_start = match &interval.start {
                Point::Interior(sc, st) if sc == c => {
                    if ascending {
                        t > st
                    } else {
                        t < st
                    }
                }
                _ => true,
            };
            let before_end = match &interval.end {
                Point::Interior(ec, et) if ec == c => {
                    if ascending {
                        t < et
                    } else {
                        t > et
                    }
                }
                _ => true,
            };
            after_start && before_end
        }
    }
}
