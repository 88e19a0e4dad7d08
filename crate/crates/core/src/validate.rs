//! Structural checks on a window.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::expand::{Segment, Site, Truncation};
use crate::hausdorff;
use crate::model::{End, LeafSpaceSpec, Source, Target};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Condition {
    /// Every vertex side and every segment end has exactly one incidence.
    Incidence,
    /// Limits list at least one vertex and no vertex twice.
    LimitMembers,
    /// The Hausdorff tree is acyclic, and every component reaches the
    /// window boundary when there is more than one.
    Tree,
    /// Glues join opposite ends and chain ends sit on self-glued chains.
    Orientation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: Condition,
    pub family: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} ({}): {}", self.condition, self.family, self.detail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub depth: u32,
    pub truncated_ends: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn summary(&self) -> String {
        match self.violations.first() {
            None => "valid".into(),
            Some(v) if self.violations.len() == 1 => v.to_string(),
            Some(v) => format!("{v} (and {} more)", self.violations.len() - 1),
        }
    }
}

pub fn validate(tr: &Truncation) -> ValidationReport {
    let mut out = Vec::new();
    spec_checks(tr.spec(), &mut out);
    for p in tr.problems() {
        out.push(Violation {
            condition: Condition::Orientation,
            family: p.family.clone(),
            detail: p.detail.clone(),
        });
    }
    incidence_checks(tr, &mut out);
    if out.iter().all(|v| v.condition != Condition::Incidence) {
        tree_checks(tr, &mut out);
    }
    ValidationReport {
        depth: tr.depth(),
        truncated_ends: tr.truncated_ends().len(),
        violations: out,
    }
}

fn spec_checks(spec: &LeafSpaceSpec, out: &mut Vec<Violation>) {
    for a in spec.attachments() {
        let family = a.source.family().to_string();
        if let Target::Limit(members) = &a.target {
            if members.is_empty() {
                out.push(Violation {
                    condition: Condition::LimitMembers,
                    family: family.clone(),
                    detail: "limit with no members".into(),
                });
            }
            if members.windows(2).any(|w| w[0] == w[1]) {
                out.push(Violation {
                    condition: Condition::LimitMembers,
                    family: family.clone(),
                    detail: "limit lists a vertex twice".into(),
                });
            }
        }
        match (&a.source, &a.target) {
            (
                Source::Cell { family: src, end },
                Target::Glue {
                    family: tgt,
                    end: tend,
                    offset,
                },
            ) => {
                if end == tend {
                    out.push(Violation {
                        condition: Condition::Orientation,
                        family: family.clone(),
                        detail: format!("{end} end glued to a {tend} end"),
                    });
                }
                if src == tgt && offset.abs() != 1 {
                    out.push(Violation {
                        condition: Condition::Orientation,
                        family: family.clone(),
                        detail: format!(
                            "self-glue with offset {offset}; chains glue to a neighbor"
                        ),
                    });
                }
            }
            (Source::ChainEnd { family: f, .. }, _) if spec.self_glue_step(f).is_none() => {
                out.push(Violation {
                    condition: Condition::Orientation,
                    family: family.clone(),
                    detail: "chain end attachment on a chain that is not self-glued".into(),
                });
            }
            _ => {}
        }
    }
}

fn incidence_checks(tr: &Truncation, out: &mut Vec<Violation>) {
    for v in tr.vertices() {
        for side in [End::Low, End::High] {
            let n = tr.side_links(v, side).len();
            if n != 1 {
                out.push(Violation {
                    condition: Condition::Incidence,
                    family: tr.cell(v).family.clone(),
                    detail: format!(
                        "{} has {n} incidences on its {side} side",
                        tr.display_cell(v)
                    ),
                });
            }
        }
    }
    for seg in tr.segments() {
        for end in [End::Low, End::High] {
            let n = tr.end_links(seg, end).len();
            if n != 1 {
                out.push(Violation {
                    condition: Condition::Incidence,
                    family: segment_family(tr, seg),
                    detail: format!("{} {end} end has {n} attachments", tr.display_segment(seg)),
                });
            }
        }
    }
}

fn segment_family(tr: &Truncation, seg: Segment) -> String {
    match seg {
        Segment::Edge(c) => tr.cell(c).family.clone(),
        Segment::Tail(t) => tr.tails()[t].family.clone(),
    }
}

fn tree_checks(tr: &Truncation, out: &mut Vec<Violation>) {
    let k = hausdorff::build(tr);
    for &seg in &k.cycles {
        out.push(Violation {
            condition: Condition::Tree,
            family: segment_family(tr, seg),
            detail: format!("{} closes a cycle", tr.display_segment(seg)),
        });
    }
    if k.component_count() <= 1 {
        return;
    }
    let mut reaches_boundary = BTreeSet::new();
    for te in tr.truncated_ends() {
        let node = match te.site {
            Site::SegmentEnd(seg, _) => k.segment_nodes(seg).0,
            Site::VertexSide(v, _) => k.vertex_node(v),
        };
        reaches_boundary.insert(k.component(node));
    }
    let closed: BTreeSet<usize> = (0..k.component_count())
        .filter(|c| !reaches_boundary.contains(c))
        .collect();
    if let Some(seg) = tr
        .segments()
        .find(|&seg| closed.contains(&k.component(k.segment_nodes(seg).0)))
    {
        out.push(Violation {
            condition: Condition::Tree,
            family: segment_family(tr, seg),
            detail: format!(
                "{} components, {} of them closed off; the model is disconnected",
                k.component_count(),
                closed.len()
            ),
        });
    } else if let Some(v) = tr
        .vertices()
        .find(|&v| closed.contains(&k.component(k.vertex_node(v))))
    {
        out.push(Violation {
            condition: Condition::Tree,
            family: tr.cell(v).family.clone(),
            detail: format!(
                "{} is isolated; the model is disconnected",
                tr.display_cell(v)
            ),
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expand::expand;
    use crate::gallery;
    use crate::model::{Attachment, CellFamily, CellKind, Indexing, VertexRef};

    #[test]
    fn gallery_is_valid() {
        for entry in gallery::all() {
            for d in 0..4 {
                let r = validate(&expand(&entry.spec, d).unwrap());
                assert!(r.is_valid(), "{} depth {d}: {}", entry.name, r.summary());
            }
        }
    }

    fn edge(n: &str) -> CellFamily {
        CellFamily::new(n, CellKind::Edge, Indexing::Unit)
    }

    fn vertex(n: &str) -> CellFamily {
        CellFamily::new(n, CellKind::Vertex, Indexing::Unit)
    }

    fn conditions(spec: &LeafSpaceSpec) -> Vec<Condition> {
        validate(&expand(spec, 1).unwrap())
            .violations
            .into_iter()
            .map(|v| v.condition)
            .collect()
    }

    #[test]
    fn double_incidence_is_rejected() {
        let spec = LeafSpaceSpec::new(
            vec![edge("e"), edge("f"), vertex("v")],
            vec![
                Attachment::cell("e", End::High, Target::Vertex(VertexRef::new("v", 0))),
                Attachment::cell("f", End::High, Target::Vertex(VertexRef::new("v", 0))),
                Attachment::cell("e", End::Low, Target::Open),
                Attachment::cell("f", End::Low, Target::Open),
            ],
            vec![],
            vec![],
        )
        .unwrap();
        assert!(conditions(&spec).contains(&Condition::Incidence));
    }

    #[test]
    fn cycle_is_rejected() {
        let spec = LeafSpaceSpec::new(
            vec![edge("e"), edge("f"), vertex("u"), vertex("v")],
            vec![
                Attachment::cell("e", End::Low, Target::Vertex(VertexRef::new("u", 0))),
                Attachment::cell("e", End::High, Target::Vertex(VertexRef::new("v", 0))),
                Attachment::cell("f", End::Low, Target::Limit(vec![VertexRef::new("v", 0)])),
                Attachment::cell("f", End::High, Target::Limit(vec![VertexRef::new("u", 0)])),
            ],
            vec![],
            vec![],
        )
        .unwrap();
        assert_eq!(conditions(&spec), vec![Condition::Tree]);
    }

    #[test]
    fn same_end_glue_is_rejected() {
        let spec = LeafSpaceSpec::new(
            vec![edge("e"), edge("f")],
            vec![
                Attachment::cell(
                    "e",
                    End::High,
                    Target::Glue {
                        family: "f".into(),
                        end: End::High,
                        offset: 0,
                    },
                ),
                Attachment::cell("e", End::Low, Target::Open),
                Attachment::cell("f", End::Low, Target::Open),
            ],
            vec![],
            vec![],
        )
        .unwrap();
        assert!(conditions(&spec).contains(&Condition::Orientation));
    }

    #[test]
    fn empty_limit_is_rejected() {
        let spec = LeafSpaceSpec::new(
            vec![edge("e")],
            vec![
                Attachment::cell("e", End::High, Target::Limit(vec![])),
                Attachment::cell("e", End::Low, Target::Open),
            ],
            vec![],
            vec![],
        )
        .unwrap();
        assert!(conditions(&spec).contains(&Condition::LimitMembers));
    }

    #[test]
    fn disconnected_finite_model_is_rejected() {
        let spec = LeafSpaceSpec::new(
            vec![edge("e"), edge("f")],
            vec![
                Attachment::cell("e", End::Low, Target::Open),
                Attachment::cell("e", End::High, Target::Open),
                Attachment::cell("f", End::Low, Target::Open),
                Attachment::cell("f", End::High, Target::Open),
            ],
            vec![],
            vec![],
        )
        .unwrap();
        assert_eq!(conditions(&spec), vec![Condition::Tree]);
    }
}
