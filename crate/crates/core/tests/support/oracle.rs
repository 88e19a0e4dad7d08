//! Brute-force path lengths computed straight from the window's
//! attachments, without the Hausdorff tree.
//!
//! A walker moves monotonically through cells; its state is the cell it is
//! in and the end or side it is heading for. Passing a vertex or a limit
//! costs nothing. At a member of a branch limit, heading for the side the
//! limit occupies, it may instead jump to another member and leave that
//! one the other way; each jump starts a new monotone interval. The
//! cheapest walk between two points is the path, and its length is one
//! more than its jump count.

#![allow(dead_code)]

use std::collections::VecDeque;

use leafspace_core::{
    CellIx, CellKind, Coord, Direction, End, EndLink, Path, Point, Segment, SideLink, Truncation,
};

fn heading_ix(h: End) -> usize {
    match h {
        End::Low => 0,
        End::High => 1,
    }
}

struct Walker<'a> {
    tr: &'a Truncation,
    cells: Vec<CellIx>,
}

impl<'a> Walker<'a> {
    fn new(tr: &'a Truncation) -> Walker<'a> {
        Walker {
            tr,
            cells: tr.cell_ixs().collect(),
        }
    }

    fn nodes(&self) -> usize {
        self.cells.len() + self.tr.tails().len()
    }

    fn seg_node(&self, s: Segment) -> usize {
        match s {
            Segment::Edge(c) => c.get(),
            Segment::Tail(t) => self.cells.len() + t,
        }
    }

    fn node_seg(&self, n: usize) -> Option<Segment> {
        if n >= self.cells.len() {
            return Some(Segment::Tail(n - self.cells.len()));
        }
        let c = self.cells[n];
        (self.tr.kind(c) == CellKind::Edge).then_some(Segment::Edge(c))
    }

    /// Moves out of node `n` through its end or side `h`.
    fn moves(&self, n: usize, h: End) -> Vec<(usize, End, usize)> {
        let tr = self.tr;
        let mut out = Vec::new();
        if let Some(seg) = self.node_seg(n) {
            match tr.end_link(seg, h) {
                Some(EndLink::Vertex(v)) => out.push((v.get(), h, 0)),
                Some(EndLink::Joint(s2, e2)) => out.push((self.seg_node(s2), e2.opposite(), 0)),
                Some(EndLink::Limit(id)) => {
                    for m in &tr.limits()[id].members {
                        out.push((m.get(), h, 0));
                    }
                }
                _ => {}
            }
            return out;
        }
        let v = self.cells[n];
        match tr.side_link(v, h) {
            Some(SideLink::Segment(s, e)) => out.push((self.seg_node(s), e.opposite(), 0)),
            Some(SideLink::Limit(id)) => {
                let ev = &tr.limits()[id];
                out.push((self.seg_node(ev.stem.0), ev.stem.1.opposite(), 0));
                if ev.members.len() >= 2 {
                    for m in &ev.members {
                        if *m != v {
                            out.push((m.get(), h.opposite(), 1));
                        }
                    }
                }
            }
            _ => {}
        }
        out
    }

    /// Cheapest walk cost from `from` (any heading, or the one given) to
    /// node `to`, and whether zero-cost moves suffice.
    fn search(&self, from: usize, headings: &[End], to: usize, zero_only: bool) -> Option<usize> {
        if from == to {
            return Some(0);
        }
        let mut dist = vec![usize::MAX; self.nodes() * 2];
        let mut queue = VecDeque::new();
        for &h in headings {
            dist[from * 2 + heading_ix(h)] = 0;
            queue.push_back((from, h));
        }
        while let Some((n, h)) = queue.pop_front() {
            let d = dist[n * 2 + heading_ix(h)];
            if n == to {
                return Some(d);
            }
            for (m, mh, cost) in self.moves(n, h) {
                if zero_only && cost > 0 {
                    continue;
                }
                let nd = d + cost;
                let slot = &mut dist[m * 2 + heading_ix(mh)];
                if nd < *slot {
                    *slot = nd;
                    if cost == 0 {
                        queue.push_front((m, mh));
                    } else {
                        queue.push_back((m, mh));
                    }
                }
            }
        }
        None
    }
}

fn node_of(tr: &Truncation, p: &Point) -> usize {
    tr.lookup(p.cell()).expect("point in window").get()
}

/// Length of the path from `x` to `y`, or `None` when the window does not
/// connect them.
pub fn path_length(tr: &Truncation, x: &Point, y: &Point) -> Option<usize> {
    let w = Walker::new(tr);
    w.search(
        node_of(tr, x),
        &[End::Low, End::High],
        node_of(tr, y),
        false,
    )
    .map(|jumps| jumps + 1)
}

fn heading(d: Direction) -> End {
    match d {
        Direction::Ascending => End::High,
        Direction::Descending => End::Low,
    }
}

fn coord(p: &Point) -> Option<Coord> {
    match p {
        Point::Interior(_, t) => Some(*t),
        Point::Vertex(_) => None,
    }
}

/// Checks that `path` is a chain of monotone intervals from `x` to `y`
/// joined by jumps between distinct members of one branch limit.
pub fn check_path(tr: &Truncation, path: &Path, x: &Point, y: &Point) -> Result<(), String> {
    let w = Walker::new(tr);
    if path.start() != x || path.end() != y {
        return Err(format!("endpoints {} .. {}", path.start(), path.end()));
    }
    if path.junctions.len() + 1 != path.intervals.len() {
        return Err("junction count".into());
    }
    for (i, iv) in path.intervals.iter().enumerate() {
        if iv.is_degenerate() {
            continue;
        }
        let h = heading(iv.direction);
        let (a, b) = (node_of(tr, &iv.start), node_of(tr, &iv.end));
        if a == b {
            let ok = match (coord(&iv.start), coord(&iv.end)) {
                (Some(s), Some(e)) => (s < e) == (h == End::High),
                _ => false,
            };
            if !ok {
                return Err(format!("interval {i} runs backwards inside one cell"));
            }
        } else if w.search(a, &[h], b, true).is_none() {
            return Err(format!(
                "interval {i} from {} to {} is not monotone",
                iv.start, iv.end
            ));
        }
    }
    for (i, j) in path.junctions.iter().enumerate() {
        if j.check == j.hat {
            return Err(format!("junction {i} does not move"));
        }
        if path.intervals[i].end != Point::Vertex(j.check.clone())
            || path.intervals[i + 1].start != Point::Vertex(j.hat.clone())
        {
            return Err(format!("junction {i} does not join its intervals"));
        }
        let c = tr.lookup(&j.check).ok_or("junction outside window")?;
        let hh = tr.lookup(&j.hat).ok_or("junction outside window")?;
        let shared = [End::Low, End::High].into_iter().find(|&s| {
            matches!(tr.side_link(c, s), Some(SideLink::Limit(id)) if tr.limits()[id].members.contains(&hh))
        });
        let Some(side) = shared else {
            return Err(format!(
                "junction {i}: {} and {} share no limit",
                j.check, j.hat
            ));
        };
        let before = &path.intervals[i];
        if !before.is_degenerate() && heading(before.direction) != side {
            return Err(format!(
                "junction {i} is entered moving away from its limit"
            ));
        }
        let after = &path.intervals[i + 1];
        if !after.is_degenerate() && heading(after.direction) != side.opposite() {
            return Err(format!("junction {i} is left moving toward its limit"));
        }
    }
    Ok(())
}
