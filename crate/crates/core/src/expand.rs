//! Depth-bounded windows onto a model.
//!
//! `expand(spec, d)` instantiates every chain cell with index in `[-d, d]`
//! (unit cells always) and resolves every edge end and every vertex side
//! against the window. Ends whose neighbor falls outside the window are
//! recorded as truncated. The boundary cells of a self-glued chain get a
//! *tail*: a symbolic segment standing for all the chain cells beyond the
//! window, ending at whatever the chain end attaches to.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Error;
use crate::model::{CellKind, ChainDir, End, LeafSpaceSpec, Source, Target};
use crate::point::{Cell, CellDisplay, Coord, Point};

/// Dense index of a window cell; cells are sorted by family name, then
/// index, so indices order deterministically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellIx(pub u32);

impl CellIx {
    pub fn get(self) -> usize {
        self.0 as usize
    }
}

pub type TailId = usize;
pub type LimitId = usize;
pub type TruncId = usize;

/// A 1-dimensional piece of the window: an edge cell or a tail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Segment {
    Edge(CellIx),
    Tail(TailId),
}

/// What an end of a segment is attached to inside the window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndLink {
    Vertex(CellIx),
    Joint(Segment, End),
    Limit(LimitId),
    Open,
    Truncated(TruncId),
}

/// What is incident to one side of a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideLink {
    Segment(Segment, End),
    Limit(LimitId),
    Truncated(TruncId),
}

/// A segment end accumulating on one or more vertices. With two or more
/// members this is a branch event.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitEvent {
    pub stem: (Segment, End),
    pub members: Vec<CellIx>,
}

impl LimitEvent {
    pub fn is_branching(&self) -> bool {
        self.members.len() >= 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tail {
    pub family: String,
    pub toward: ChainDir,
    /// The window cell the tail continues, and the end of that cell it
    /// hangs off.
    pub boundary: (CellIx, End),
}

impl Tail {
    /// The end of the tail glued to the boundary cell.
    pub fn near_end(&self) -> End {
        self.boundary.1.opposite()
    }

    pub fn far_end(&self) -> End {
        self.boundary.1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Continuation {
    /// The next cell, outside the window.
    Next(Cell),
    /// A limit whose stem or members are not all inside the window.
    Limit(Vec<Cell>),
    /// The rest of a self-glued chain, carried by a tail.
    Chain { family: String, toward: ChainDir },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Site {
    SegmentEnd(Segment, End),
    VertexSide(CellIx, End),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedEnd {
    pub site: Site,
    pub continuation: Continuation,
}

/// Inconsistencies noticed while resolving attachments; reported by
/// validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ExpandProblem {
    pub family: String,
    pub detail: String,
}

/// A resolved point of the window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointIx {
    Vertex(CellIx),
    Interior(CellIx, Coord),
}

#[derive(Clone, Debug)]
pub struct Truncation {
    spec: LeafSpaceSpec,
    depth: u32,
    cells: Vec<Cell>,
    kinds: Vec<CellKind>,
    units: Vec<bool>,
    lookup: BTreeMap<Cell, CellIx>,
    ends: BTreeMap<(Segment, End), Vec<EndLink>>,
    sides: BTreeMap<(CellIx, End), Vec<SideLink>>,
    limits: Vec<LimitEvent>,
    tails: Vec<Tail>,
    truncated: Vec<TruncatedEnd>,
    problems: Vec<ExpandProblem>,
    limits_of: BTreeMap<CellIx, Vec<LimitId>>,
}

/// Largest depth accepted by [`expand`].
pub const MAX_DEPTH: u32 = 4096;

pub fn expand(spec: &LeafSpaceSpec, depth: u32) -> Result<Truncation, Error> {
    if depth > MAX_DEPTH {
        return Err(Error::DepthTooLarge(depth));
    }
    Ok(Builder::new(spec, depth).build())
}

fn target_index(src_chain: bool, src_index: i64, tgt_chain: bool, offset: i64) -> i64 {
    match (tgt_chain, src_chain) {
        (false, _) => 0,
        (true, true) => src_index + offset,
        (true, false) => offset,
    }
}

struct Builder<'a> {
    spec: &'a LeafSpaceSpec,
    depth: i64,
    t: Truncation,
    tail_of: BTreeMap<(String, ChainDir), TailId>,
}

impl<'a> Builder<'a> {
    fn new(spec: &'a LeafSpaceSpec, depth: u32) -> Self {
        Builder {
            spec,
            depth: depth as i64,
            t: Truncation {
                spec: spec.clone(),
                depth,
                cells: Vec::new(),
                kinds: Vec::new(),
                units: Vec::new(),
                lookup: BTreeMap::new(),
                ends: BTreeMap::new(),
                sides: BTreeMap::new(),
                limits: Vec::new(),
                tails: Vec::new(),
                truncated: Vec::new(),
                problems: Vec::new(),
                limits_of: BTreeMap::new(),
            },
            tail_of: BTreeMap::new(),
        }
    }

    fn is_chain(&self, family: &str) -> bool {
        self.spec
            .family(family)
            .map(|f| f.is_chain())
            .unwrap_or(false)
    }

    fn in_range(&self, family: &str, index: i64) -> bool {
        if self.is_chain(family) {
            index.abs() <= self.depth
        } else {
            index == 0
        }
    }

    fn source_indices(&self, family: &str) -> std::ops::RangeInclusive<i64> {
        if self.is_chain(family) {
            let reach = self.depth + self.spec.max_offset() + 2;
            -reach..=reach
        } else {
            0..=0
        }
    }

    fn build(mut self) -> Truncation {
        self.collect_cells();
        self.resolve_cell_rules();
        self.resolve_chain_ends();
        self.fill_missing();
        for (id, lim) in self.t.limits.iter().enumerate() {
            if lim.is_branching() {
                for &m in &lim.members {
                    self.t.limits_of.entry(m).or_default().push(id);
                }
            }
        }
        self.t
    }

    fn collect_cells(&mut self) {
        let spec = self.spec;
        let mut cells = Vec::new();
        for fam in spec.families() {
            let range = if fam.is_chain() {
                -self.depth..=self.depth
            } else {
                0..=0
            };
            for n in range {
                if fam.kind == CellKind::Edge && !self.edge_fits(&fam.name, n) {
                    continue;
                }
                cells.push((Cell::new(fam.name.clone(), n), fam.kind, !fam.is_chain()));
            }
        }
        cells.sort_by(|a, b| a.0.cmp(&b.0));
        for (i, (cell, kind, unit)) in cells.into_iter().enumerate() {
            self.t.lookup.insert(cell.clone(), CellIx(i as u32));
            self.t.cells.push(cell);
            self.t.kinds.push(kind);
            self.t.units.push(unit);
        }
    }

    /// An edge cell belongs to the window when every vertex it attaches to
    /// directly does.
    fn edge_fits(&self, family: &str, n: i64) -> bool {
        let src_chain = self.is_chain(family);
        self.spec
            .attachments()
            .iter()
            .all(|a| match (&a.source, &a.target) {
                (Source::Cell { family: f, .. }, Target::Vertex(v)) if f == family => {
                    let idx = target_index(src_chain, n, self.is_chain(&v.family), v.offset);
                    self.in_range(&v.family, idx)
                }
                _ => true,
            })
    }

    fn ix(&self, cell: &Cell) -> Option<CellIx> {
        self.t.lookup.get(cell).copied()
    }

    fn push_end(&mut self, seg: Segment, end: End, link: EndLink) {
        self.t.ends.entry((seg, end)).or_default().push(link);
    }

    fn push_side(&mut self, v: CellIx, side: End, link: SideLink) {
        self.t.sides.entry((v, side)).or_default().push(link);
    }

    fn truncate(&mut self, site: Site, continuation: Continuation) -> TruncId {
        self.t.truncated.push(TruncatedEnd { site, continuation });
        self.t.truncated.len() - 1
    }

    fn problem(&mut self, family: &str, detail: String) {
        self.t.problems.push(ExpandProblem {
            family: family.to_string(),
            detail,
        });
    }

    fn tail(&mut self, family: &str, toward: ChainDir, boundary: (CellIx, End)) -> TailId {
        let key = (family.to_string(), toward);
        if let Some(&id) = self.tail_of.get(&key) {
            return id;
        }
        let id = self.t.tails.len();
        self.t.tails.push(Tail {
            family: family.to_string(),
            toward,
            boundary,
        });
        self.tail_of.insert(key, id);
        let seg = Segment::Tail(id);
        let near = boundary.1.opposite();
        self.push_end(
            seg,
            near,
            EndLink::Joint(Segment::Edge(boundary.0), boundary.1),
        );
        self.push_end(
            Segment::Edge(boundary.0),
            boundary.1,
            EndLink::Joint(seg, near),
        );
        id
    }

    fn resolve_cell_rules(&mut self) {
        let spec = self.spec;
        for a in spec.attachments() {
            let Source::Cell { family, end } = &a.source else {
                continue;
            };
            let end = *end;
            let src_chain = self.is_chain(family);
            for n in self.source_indices(family) {
                let src_cell = Cell::new(family.clone(), n);
                let src = self.ix(&src_cell);
                match &a.target {
                    Target::Vertex(v) => {
                        let idx = target_index(src_chain, n, self.is_chain(&v.family), v.offset);
                        let tgt = self.ix(&Cell::new(v.family.clone(), idx));
                        if let Some(s) = src {
                            match tgt {
                                Some(t) => self.push_end(Segment::Edge(s), end, EndLink::Vertex(t)),
                                None => {
                                    let id = self.truncate(
                                        Site::SegmentEnd(Segment::Edge(s), end),
                                        Continuation::Next(Cell::new(v.family.clone(), idx)),
                                    );
                                    self.push_end(Segment::Edge(s), end, EndLink::Truncated(id));
                                }
                            }
                        }
                        if let Some(t) = tgt {
                            let link = match src {
                                Some(s) => SideLink::Segment(Segment::Edge(s), end),
                                None => SideLink::Truncated(self.truncate(
                                    Site::VertexSide(t, end.opposite()),
                                    Continuation::Next(src_cell.clone()),
                                )),
                            };
                            self.push_side(t, end.opposite(), link);
                        }
                    }
                    Target::Glue {
                        family: gf,
                        end: gend,
                        offset,
                    } => {
                        let gend = *gend;
                        let idx = target_index(src_chain, n, self.is_chain(gf), *offset);
                        let tgt_cell = Cell::new(gf.clone(), idx);
                        let tgt = self.ix(&tgt_cell);
                        let self_glue =
                            gf == family && offset.abs() == 1 && gend != end && src_chain;
                        let toward = if idx > n {
                            ChainDir::Plus
                        } else {
                            ChainDir::Minus
                        };
                        match (src, tgt) {
                            (Some(s), Some(t)) => {
                                self.push_end(
                                    Segment::Edge(s),
                                    end,
                                    EndLink::Joint(Segment::Edge(t), gend),
                                );
                                self.push_end(
                                    Segment::Edge(t),
                                    gend,
                                    EndLink::Joint(Segment::Edge(s), end),
                                );
                            }
                            (Some(s), None) => {
                                if self_glue {
                                    self.tail(family, toward, (s, end));
                                } else {
                                    let id = self.truncate(
                                        Site::SegmentEnd(Segment::Edge(s), end),
                                        Continuation::Next(tgt_cell.clone()),
                                    );
                                    self.push_end(Segment::Edge(s), end, EndLink::Truncated(id));
                                }
                            }
                            (None, Some(t)) => {
                                if self_glue {
                                    let away = if n > idx {
                                        ChainDir::Plus
                                    } else {
                                        ChainDir::Minus
                                    };
                                    self.tail(family, away, (t, gend));
                                } else {
                                    let id = self.truncate(
                                        Site::SegmentEnd(Segment::Edge(t), gend),
                                        Continuation::Next(src_cell.clone()),
                                    );
                                    self.push_end(Segment::Edge(t), gend, EndLink::Truncated(id));
                                }
                            }
                            (None, None) => {}
                        }
                    }
                    Target::Limit(members) => {
                        let member_cells: Vec<Cell> = members
                            .iter()
                            .map(|v| {
                                Cell::new(
                                    v.family.clone(),
                                    target_index(src_chain, n, self.is_chain(&v.family), v.offset),
                                )
                            })
                            .collect();
                        let member_ix: Vec<Option<CellIx>> =
                            member_cells.iter().map(|c| self.ix(c)).collect();
                        if src.is_none() && member_ix.iter().all(Option::is_none) {
                            continue;
                        }
                        if member_cells.is_empty() {
                            continue;
                        }
                        let complete = src.is_some() && member_ix.iter().all(Option::is_some);
                        if complete {
                            let s = src.unwrap();
                            let mut ms: Vec<CellIx> =
                                member_ix.iter().map(|m| m.unwrap()).collect();
                            ms.sort();
                            ms.dedup();
                            let id = self.t.limits.len();
                            self.t.limits.push(LimitEvent {
                                stem: (Segment::Edge(s), end),
                                members: ms.clone(),
                            });
                            self.push_end(Segment::Edge(s), end, EndLink::Limit(id));
                            for m in ms {
                                self.push_side(m, end.opposite(), SideLink::Limit(id));
                            }
                        } else {
                            if let Some(s) = src {
                                let id = self.truncate(
                                    Site::SegmentEnd(Segment::Edge(s), end),
                                    Continuation::Limit(member_cells.clone()),
                                );
                                self.push_end(Segment::Edge(s), end, EndLink::Truncated(id));
                            }
                            for m in &member_ix {
                                if let Some(m) = *m {
                                    let id = self.truncate(
                                        Site::VertexSide(m, end.opposite()),
                                        Continuation::Next(src_cell.clone()),
                                    );
                                    self.push_side(m, end.opposite(), SideLink::Truncated(id));
                                }
                            }
                        }
                    }
                    Target::Open => {
                        if let Some(s) = src {
                            self.push_end(Segment::Edge(s), end, EndLink::Open);
                        }
                    }
                }
            }
        }
    }

    fn resolve_chain_ends(&mut self) {
        let spec = self.spec;
        for a in spec.attachments() {
            let Source::ChainEnd { family, toward } = &a.source else {
                continue;
            };
            let toward = *toward;
            let Some(step) = spec.self_glue_step(family) else {
                self.problem(
                    family,
                    format!("chain end attachment on `{family}`, which is not a self-glued chain"),
                );
                continue;
            };
            let Some(&tid) = self.tail_of.get(&(family.clone(), toward)) else {
                continue;
            };
            let far = self.t.tails[tid].far_end();
            // The far end of the tail points up exactly when the chain ascends
            // toward this end.
            let expect_far = if step * toward.sign() > 0 {
                End::High
            } else {
                End::Low
            };
            if far != expect_far {
                self.problem(
                    family,
                    "tail orientation disagrees with the chain's glue step".into(),
                );
            }
            let seg = Segment::Tail(tid);
            match &a.target {
                Target::Open => self.push_end(seg, far, EndLink::Open),
                Target::Limit(members) => {
                    let cells: Vec<Cell> = members
                        .iter()
                        .map(|v| {
                            Cell::new(
                                v.family.clone(),
                                if self.is_chain(&v.family) {
                                    v.offset
                                } else {
                                    0
                                },
                            )
                        })
                        .collect();
                    let ixs: Vec<Option<CellIx>> = cells.iter().map(|c| self.ix(c)).collect();
                    if !cells.is_empty() && ixs.iter().all(Option::is_some) {
                        let mut ms: Vec<CellIx> = ixs.into_iter().map(Option::unwrap).collect();
                        ms.sort();
                        ms.dedup();
                        let id = self.t.limits.len();
                        self.t.limits.push(LimitEvent {
                            stem: (seg, far),
                            members: ms.clone(),
                        });
                        self.push_end(seg, far, EndLink::Limit(id));
                        for m in ms {
                            self.push_side(m, far.opposite(), SideLink::Limit(id));
                        }
                    } else {
                        let id = self.truncate(
                            Site::SegmentEnd(seg, far),
                            Continuation::Limit(cells.clone()),
                        );
                        self.push_end(seg, far, EndLink::Truncated(id));
                        for m in ixs.into_iter().flatten() {
                            let id = self.truncate(
                                Site::VertexSide(m, far.opposite()),
                                Continuation::Chain {
                                    family: family.clone(),
                                    toward,
                                },
                            );
                            self.push_side(m, far.opposite(), SideLink::Truncated(id));
                        }
                    }
                }
                Target::Vertex(_) | Target::Glue { .. } => {
                    self.problem(family, "chain ends may only be open or limits".into());
                }
            }
        }
    }

    /// Chain ends without an attachment are open.
    fn fill_missing(&mut self) {
        for tid in 0..self.t.tails.len() {
            let far = self.t.tails[tid].far_end();
            let key = (Segment::Tail(tid), far);
            if !self.t.ends.contains_key(&key) {
                self.push_end(Segment::Tail(tid), far, EndLink::Open);
            }
        }
        for tid in 0..self.t.tails.len() {
            let tail = self.t.tails[tid].clone();
            self.t.truncated.push(TruncatedEnd {
                site: Site::SegmentEnd(Segment::Edge(tail.boundary.0), tail.boundary.1),
                continuation: Continuation::Chain {
                    family: tail.family.clone(),
                    toward: tail.toward,
                },
            });
        }
    }
}

impl Truncation {
    pub fn spec(&self) -> &LeafSpaceSpec {
        &self.spec
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, ix: CellIx) -> &Cell {
        &self.cells[ix.get()]
    }

    pub fn kind(&self, ix: CellIx) -> CellKind {
        self.kinds[ix.get()]
    }

    pub fn is_unit(&self, ix: CellIx) -> bool {
        self.units[ix.get()]
    }

    pub fn lookup(&self, cell: &Cell) -> Option<CellIx> {
        self.lookup.get(cell).copied()
    }

    pub fn cell_ixs(&self) -> impl Iterator<Item = CellIx> + '_ {
        (0..self.cells.len()).map(|i| CellIx(i as u32))
    }

    pub fn vertices(&self) -> impl Iterator<Item = CellIx> + '_ {
        self.cell_ixs()
            .filter(|&c| self.kind(c) == CellKind::Vertex)
    }

    pub fn edges(&self) -> impl Iterator<Item = CellIx> + '_ {
        self.cell_ixs().filter(|&c| self.kind(c) == CellKind::Edge)
    }

    /// Edge cells followed by tails.
    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.edges()
            .map(Segment::Edge)
            .chain((0..self.tails.len()).map(Segment::Tail))
    }

    pub fn end_links(&self, seg: Segment, end: End) -> &[EndLink] {
        self.ends.get(&(seg, end)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// The unique link of a segment end, if there is exactly one.
    pub fn end_link(&self, seg: Segment, end: End) -> Option<EndLink> {
        match self.end_links(seg, end) {
            [one] => Some(*one),
            _ => None,
        }
    }

    pub fn side_links(&self, v: CellIx, side: End) -> &[SideLink] {
        self.sides.get(&(v, side)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn side_link(&self, v: CellIx, side: End) -> Option<SideLink> {
        match self.side_links(v, side) {
            [one] => Some(*one),
            _ => None,
        }
    }

    pub fn limits(&self) -> &[LimitEvent] {
        &self.limits
    }

    /// Branching limits (two or more members) containing `v`.
    pub fn branch_limits_of(&self, v: CellIx) -> &[LimitId] {
        self.limits_of.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn tails(&self) -> &[Tail] {
        &self.tails
    }

    /// Every place where the window cuts the model, tails included.
    pub fn truncated_ends(&self) -> &[TruncatedEnd] {
        &self.truncated
    }

    /// True when nothing was cut: the window is the whole model.
    pub fn is_closed(&self) -> bool {
        self.truncated.is_empty()
    }

    pub(crate) fn problems(&self) -> &[ExpandProblem] {
        &self.problems
    }

    pub fn resolve(&self, p: &Point) -> Option<PointIx> {
        match p {
            Point::Vertex(c) => {
                let ix = self.lookup(c)?;
                (self.kind(ix) == CellKind::Vertex).then_some(PointIx::Vertex(ix))
            }
            Point::Interior(c, t) => {
                let ix = self.lookup(c)?;
                (self.kind(ix) == CellKind::Edge).then_some(PointIx::Interior(ix, *t))
            }
        }
    }

    pub fn point(&self, p: PointIx) -> Point {
        match p {
            PointIx::Vertex(v) => Point::Vertex(self.cell(v).clone()),
            PointIx::Interior(e, t) => Point::Interior(self.cell(e).clone(), t),
        }
    }

    /// One sample point per window cell: each vertex, and the midpoint of
    /// each edge. Comparable-set membership is constant on edge interiors
    /// under shift actions, so this sampling is exact at cell resolution.
    pub fn sample_points(&self) -> Vec<Point> {
        self.cell_ixs()
            .map(|c| match self.kind(c) {
                CellKind::Vertex => Point::Vertex(self.cell(c).clone()),
                CellKind::Edge => Point::Interior(self.cell(c).clone(), Coord::half()),
            })
            .collect()
    }

    pub fn display_cell(&self, ix: CellIx) -> String {
        CellDisplay {
            cell: self.cell(ix),
            unit: self.is_unit(ix),
        }
        .to_string()
    }

    pub fn display_segment(&self, seg: Segment) -> String {
        match seg {
            Segment::Edge(c) => self.display_cell(c),
            Segment::Tail(t) => {
                let tail = &self.tails[t];
                let dir = match tail.toward {
                    ChainDir::Minus => "-inf",
                    ChainDir::Plus => "+inf",
                };
                format!(
                    "{}[{}..{}]",
                    tail.family,
                    self.cell(tail.boundary.0).index,
                    dir
                )
            }
        }
    }

    pub fn display_point(&self, p: &Point) -> String {
        let unit = self
            .spec
            .family(&p.cell().family)
            .map(|f| !f.is_chain())
            .unwrap_or(false);
        let cell = CellDisplay {
            cell: p.cell(),
            unit,
        }
        .to_string();
        match p {
            Point::Vertex(_) => cell,
            Point::Interior(_, t) => format!("{cell}:{t}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    #[test]
    fn line_depth_two_counts() {
        let t = expand(&gallery::line().spec, 2).unwrap();
        assert_eq!(t.vertices().count(), 5);
        assert_eq!(t.edges().count(), 4);
        assert_eq!(t.truncated_ends().len(), 2);
        assert!(t.tails().is_empty());
    }

    #[test]
    fn unit_models_ignore_depth() {
        let spec = gallery::yplus().spec;
        let a = expand(&spec, 0).unwrap();
        let b = expand(&spec, 7).unwrap();
        assert_eq!(a.cells(), b.cells());
        assert!(a.is_closed());
    }

    #[test]
    fn swap_depth_one_counts() {
        let t = expand(&gallery::swap().spec, 1).unwrap();
        let names: Vec<String> = t.cell_ixs().map(|c| t.display_cell(c)).collect();
        assert_eq!(
            names,
            [
                "a", "b", "ra[-1]", "ra[0]", "ra[1]", "rb[-1]", "rb[0]", "rb[1]", "s[-1]", "s[0]",
                "s[1]"
            ]
        );
        assert_eq!(t.truncated_ends().len(), 6);
        assert_eq!(t.tails().len(), 6);
    }

    #[test]
    fn expansion_is_monotone() {
        for entry in gallery::all() {
            for d in 0..5 {
                let small = expand(&entry.spec, d).unwrap();
                let big = expand(&entry.spec, d + 1).unwrap();
                for c in small.cells() {
                    assert!(
                        big.lookup(c).is_some(),
                        "{}: {c} lost at depth {}",
                        entry.name,
                        d + 1
                    );
                }
                // Links that were resolved inside the small window stay resolved
                // to the same cells.
                for e in small.edges() {
                    for end in [End::Low, End::High] {
                        if let Some(EndLink::Vertex(v)) = small.end_link(Segment::Edge(e), end) {
                            let be = big.lookup(small.cell(e)).unwrap();
                            let bv = big.lookup(small.cell(v)).unwrap();
                            assert_eq!(
                                big.end_link(Segment::Edge(be), end),
                                Some(EndLink::Vertex(bv))
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_huge_depth() {
        assert!(matches!(
            expand(&gallery::line().spec, MAX_DEPTH + 1),
            Err(Error::DepthTooLarge(_))
        ));
    }
}
