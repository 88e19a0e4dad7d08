//! The Hausdorff tree of a window: collapse every class of non-separated
//! vertices (and every glue joint) to a single node.

use std::collections::{BTreeMap, VecDeque};

use petgraph::graph::{EdgeIndex, NodeIndex, UnGraph};
use petgraph::unionfind::UnionFind;
use petgraph::visit::EdgeRef;

use crate::error::Error;
use crate::expand::{CellIx, EndLink, Segment, Truncation};
use crate::model::End;
use crate::validate;

/// A node of the tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    /// A class of pairwise non-separated vertices (often a single vertex).
    Class(Vec<CellIx>),
    /// Two segment ends glued to each other with no vertex between them.
    Joint,
    /// A segment end with nothing beyond it: open, or cut by the window.
    Dangling,
}

#[derive(Clone, Debug)]
pub struct HausdorffTree {
    graph: UnGraph<Node, Segment>,
    vertex_node: BTreeMap<CellIx, NodeIndex>,
    segment_edge: BTreeMap<Segment, EdgeIndex>,
    /// Segments that closed a cycle while building.
    pub(crate) cycles: Vec<Segment>,
    component: Vec<usize>,
}

fn term_vertex(v: CellIx) -> usize {
    v.get()
}

fn seg_slot(tr: &Truncation, seg: Segment) -> usize {
    match seg {
        Segment::Edge(c) => c.get(),
        Segment::Tail(t) => tr.cells().len() + t,
    }
}

fn term_end(tr: &Truncation, seg: Segment, end: End) -> usize {
    let n = tr.cells().len();
    n + 2 * seg_slot(tr, seg) + usize::from(end == End::High)
}

/// Build the tree without checking validity first; used by validation.
pub(crate) fn build(tr: &Truncation) -> HausdorffTree {
    let n = tr.cells().len();
    let terms = n + 2 * (n + tr.tails().len());
    let mut uf = UnionFind::<usize>::new(terms);
    for seg in tr.segments() {
        for end in [End::Low, End::High] {
            let here = term_end(tr, seg, end);
            let Some(link) = tr.end_links(seg, end).first() else {
                continue;
            };
            match *link {
                EndLink::Vertex(v) => {
                    uf.union(here, term_vertex(v));
                }
                EndLink::Joint(s2, e2) => {
                    uf.union(here, term_end(tr, s2, e2));
                }
                EndLink::Limit(id) => {
                    for &m in &tr.limits()[id].members {
                        uf.union(here, term_vertex(m));
                    }
                }
                EndLink::Open | EndLink::Truncated(_) => {}
            }
        }
    }

    // Group terminals that matter (vertex cells and segment ends) by root.
    let mut classes: BTreeMap<usize, (Vec<CellIx>, usize)> = BTreeMap::new();
    let mut order: Vec<usize> = Vec::new();
    let mut touch =
        |root: usize, v: Option<CellIx>, classes: &mut BTreeMap<usize, (Vec<CellIx>, usize)>| {
            let entry = classes.entry(root).or_insert_with(|| {
                order.push(root);
                (Vec::new(), 0)
            });
            match v {
                Some(v) => entry.0.push(v),
                None => entry.1 += 1,
            }
        };
    for v in tr.vertices() {
        touch(uf.find(term_vertex(v)), Some(v), &mut classes);
    }
    for seg in tr.segments() {
        for end in [End::Low, End::High] {
            touch(uf.find(term_end(tr, seg, end)), None, &mut classes);
        }
    }

    let mut graph = UnGraph::<Node, Segment>::new_undirected();
    let mut node_of_root = BTreeMap::new();
    for root in order {
        let (mut vs, ends) = classes.remove(&root).unwrap();
        vs.sort();
        let node = if !vs.is_empty() {
            Node::Class(vs)
        } else if ends >= 2 {
            Node::Joint
        } else {
            Node::Dangling
        };
        node_of_root.insert(root, graph.add_node(node));
    }

    let mut vertex_node = BTreeMap::new();
    for v in tr.vertices() {
        vertex_node.insert(v, node_of_root[&uf.find(term_vertex(v))]);
    }

    let mut cycle_uf = UnionFind::<usize>::new(graph.node_count());
    let mut cycles = Vec::new();
    let mut segment_edge = BTreeMap::new();
    for seg in tr.segments() {
        let lo = node_of_root[&uf.find(term_end(tr, seg, End::Low))];
        let hi = node_of_root[&uf.find(term_end(tr, seg, End::High))];
        if !cycle_uf.union(lo.index(), hi.index()) {
            cycles.push(seg);
        }
        segment_edge.insert(seg, graph.add_edge(lo, hi, seg));
    }

    let labels = cycle_uf.into_labeling();
    let mut relabel = BTreeMap::new();
    let component = labels
        .iter()
        .map(|l| {
            let next = relabel.len();
            *relabel.entry(*l).or_insert(next)
        })
        .collect();

    HausdorffTree {
        graph,
        vertex_node,
        segment_edge,
        cycles,
        component,
    }
}

/// Build the Hausdorff tree of a valid window.
pub fn hausdorffify(tr: &Truncation) -> Result<HausdorffTree, Error> {
    let report = validate::validate(tr);
    if !report.is_valid() {
        return Err(Error::InvalidModel(report.summary()));
    }
    Ok(build(tr))
}

impl HausdorffTree {
    pub fn graph(&self) -> &UnGraph<Node, Segment> {
        &self.graph
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn node(&self, n: NodeIndex) -> &Node {
        &self.graph[n]
    }

    pub fn vertex_node(&self, v: CellIx) -> NodeIndex {
        self.vertex_node[&v]
    }

    /// Nodes at the low and high end of a segment.
    pub fn segment_nodes(&self, seg: Segment) -> (NodeIndex, NodeIndex) {
        let e = self.segment_edge[&seg];
        let (a, b) = self.graph.edge_endpoints(e).unwrap();
        // Edges are added low-to-high.
        (a, b)
    }

    pub fn component(&self, n: NodeIndex) -> usize {
        self.component[n.index()]
    }

    pub fn component_count(&self) -> usize {
        self.component
            .iter()
            .copied()
            .max()
            .map(|m| m + 1)
            .unwrap_or(0)
    }

    /// Class nodes containing two or more vertices.
    pub fn branch_classes(&self) -> impl Iterator<Item = (NodeIndex, &[CellIx])> + '_ {
        self.graph
            .node_indices()
            .filter_map(|n| match &self.graph[n] {
                Node::Class(vs) if vs.len() >= 2 => Some((n, vs.as_slice())),
                _ => None,
            })
    }

    /// Shortest node path from `from` to `to` as a list of (segment,
    /// node reached) steps, or `None` when they lie in different components.
    pub fn route(&self, from: NodeIndex, to: NodeIndex) -> Option<Vec<(Segment, NodeIndex)>> {
        if from == to {
            return Some(Vec::new());
        }
        let mut prev: BTreeMap<NodeIndex, (NodeIndex, Segment)> = BTreeMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = vec![false; self.graph.node_count()];
        seen[from.index()] = true;
        while let Some(u) = queue.pop_front() {
            let mut nbrs: Vec<(Segment, NodeIndex)> = self
                .graph
                .edges(u)
                .map(|e| (*e.weight(), other_end(e.source(), e.target(), u)))
                .collect();
            nbrs.sort();
            for (seg, w) in nbrs {
                if seen[w.index()] {
                    continue;
                }
                seen[w.index()] = true;
                prev.insert(w, (u, seg));
                if w == to {
                    let mut steps = Vec::new();
                    let mut cur = to;
                    while cur != from {
                        let (p, s) = prev[&cur];
                        steps.push((s, cur));
                        cur = p;
                    }
                    steps.reverse();
                    return Some(steps);
                }
                queue.push_back(w);
            }
        }
        None
    }

    /// Distance in segments, or `None` across components.
    pub fn distance(&self, from: NodeIndex, to: NodeIndex) -> Option<usize> {
        if self.component(from) != self.component(to) {
            return None;
        }
        self.route(from, to).map(|r| r.len())
    }
}

fn other_end(a: NodeIndex, b: NodeIndex, u: NodeIndex) -> NodeIndex {
    if a == u {
        b
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expand::expand;
    use crate::gallery;

    #[test]
    fn yplus_collapses_branch_pair() {
        let tr = expand(&gallery::yplus().spec, 0).unwrap();
        let k = hausdorffify(&tr).unwrap();
        assert_eq!(k.edge_count(), 3);
        assert_eq!(k.branch_classes().count(), 1);
        assert_eq!(k.component_count(), 1);
    }

    #[test]
    fn swap_tree_is_connected_tree() {
        for d in 0..4 {
            let tr = expand(&gallery::swap().spec, d).unwrap();
            let k = hausdorffify(&tr).unwrap();
            assert!(k.cycles.is_empty());
            assert_eq!(k.component_count(), 1, "depth {d}");
            assert_eq!(k.node_count(), k.edge_count() + 1);
        }
    }
}
