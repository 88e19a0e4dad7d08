//! Finite presentations of simply connected, oriented, possibly
//! non-Hausdorff 1-manifolds.
//!
//! A model is a list of cell families (edges or vertices, either a single
//! cell or one cell per integer) together with attachment rules saying how
//! the ends of edge cells are joined. Every edge is oriented from its low
//! end to its high end. Non-separated points arise only from `Limit`
//! targets listing two or more vertices: the attaching edge end (the stem)
//! approaches every listed vertex at once.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::point::{Cell, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CellKind {
    Edge,
    Vertex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Indexing {
    /// A single cell, addressed with index 0.
    Unit,
    /// One cell for every integer.
    Chain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum End {
    Low,
    High,
}

impl End {
    pub fn opposite(self) -> End {
        match self {
            End::Low => End::High,
            End::High => End::Low,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            End::Low => "low",
            End::High => "high",
        }
    }
}

/// Which infinite end of an integer chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ChainDir {
    Minus,
    Plus,
}

impl ChainDir {
    pub fn sign(self) -> i64 {
        match self {
            ChainDir::Minus => -1,
            ChainDir::Plus => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellFamily {
    pub name: String,
    pub kind: CellKind,
    pub indexing: Indexing,
}

impl CellFamily {
    pub fn new(name: impl Into<String>, kind: CellKind, indexing: Indexing) -> Self {
        CellFamily {
            name: name.into(),
            kind,
            indexing,
        }
    }

    pub fn is_chain(&self) -> bool {
        self.indexing == Indexing::Chain
    }
}

/// Reference to a vertex cell relative to the source of an attachment.
///
/// When both the source and the target family are chains, the target is
/// `family[n + offset]`. When the source is a unit cell or a chain end, a
/// chain target is the absolute cell `family[offset]`. Unit targets always
/// carry offset 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexRef {
    pub family: String,
    pub offset: i64,
}

impl VertexRef {
    pub fn new(family: impl Into<String>, offset: i64) -> Self {
        VertexRef {
            family: family.into(),
            offset,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Source {
    /// The given end of every cell of an edge family.
    Cell { family: String, end: End },
    /// The infinite end of a self-glued edge chain.
    ChainEnd { family: String, toward: ChainDir },
}

impl Source {
    pub fn family(&self) -> &str {
        match self {
            Source::Cell { family, .. } | Source::ChainEnd { family, .. } => family,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Target {
    Vertex(VertexRef),
    /// Glue directly onto an end of another edge cell; offsets follow the
    /// same rule as [`VertexRef`].
    Glue {
        family: String,
        end: End,
        offset: i64,
    },
    /// The source end accumulates on every listed vertex.
    Limit(Vec<VertexRef>),
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Attachment {
    pub source: Source,
    pub target: Target,
}

impl Attachment {
    pub fn new(source: Source, target: Target) -> Self {
        let target = match target {
            Target::Limit(mut members) => {
                members.sort();
                Target::Limit(members)
            }
            other => other,
        };
        Attachment { source, target }
    }

    pub fn cell(family: &str, end: End, target: Target) -> Self {
        Attachment::new(
            Source::Cell {
                family: family.to_string(),
                end,
            },
            target,
        )
    }

    pub fn chain_end(family: &str, toward: ChainDir, target: Target) -> Self {
        Attachment::new(
            Source::ChainEnd {
                family: family.to_string(),
                toward,
            },
            target,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FamilyImage {
    pub family: String,
    pub shift: i64,
}

/// A generator acting by a family permutation composed with index shifts.
/// Families absent from `images` are fixed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GeneratorAction {
    pub name: String,
    pub images: BTreeMap<String, FamilyImage>,
}

impl GeneratorAction {
    pub fn new(name: impl Into<String>) -> Self {
        GeneratorAction {
            name: name.into(),
            images: BTreeMap::new(),
        }
    }

    pub fn map(mut self, from: &str, to: &str, shift: i64) -> Self {
        self.images.insert(
            from.to_string(),
            FamilyImage {
                family: to.to_string(),
                shift,
            },
        );
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mark {
    pub name: String,
    pub point: Point,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("unresolved family name `{0}`")]
    UnresolvedName(String),
    #[error("duplicate family name `{0}`")]
    DuplicateName(String),
    #[error("bad index offset in attachment of `{family}`: {reason}")]
    BadOffset { family: String, reason: String },
    #[error("family `{family}` used as {expected}")]
    WrongKind {
        family: String,
        expected: &'static str,
    },
    #[error("generator `{generator}`: {reason}")]
    BadGenerator { generator: String, reason: String },
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
}

/// Index into the name-sorted family list of a spec.
pub type FamilyId = usize;

/// A validated, canonically ordered model.
///
/// Construction sorts families, attachments, generators and marks, and
/// checks that every name resolves and every offset has the right shape.
/// Structural 1-manifold conditions are checked on truncations by
/// [`crate::validate::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafSpaceSpec {
    families: Vec<CellFamily>,
    attachments: Vec<Attachment>,
    generators: Vec<GeneratorAction>,
    marks: Vec<Mark>,
}

impl LeafSpaceSpec {
    pub fn new(
        mut families: Vec<CellFamily>,
        attachments: Vec<Attachment>,
        mut generators: Vec<GeneratorAction>,
        mut marks: Vec<Mark>,
    ) -> Result<Self, SpecError> {
        families.sort();
        for pair in families.windows(2) {
            if pair[0].name == pair[1].name {
                return Err(SpecError::DuplicateName(pair[0].name.clone()));
            }
        }
        let mut attachments: Vec<Attachment> = attachments
            .into_iter()
            .map(|a| Attachment::new(a.source, a.target))
            .collect();
        attachments.sort();
        attachments.dedup();
        generators.sort_by(|a, b| a.name.cmp(&b.name));
        for pair in generators.windows(2) {
            if pair[0].name == pair[1].name {
                return Err(SpecError::DuplicateGenerator(pair[0].name.clone()));
            }
        }
        // Identity entries carry no information; drop them so equal actions
        // have equal representations.
        for g in &mut generators {
            g.images
                .retain(|from, img| !(img.family == *from && img.shift == 0));
        }
        marks.sort();
        let spec = LeafSpaceSpec {
            families,
            attachments,
            generators,
            marks,
        };
        spec.check_names()?;
        Ok(spec)
    }

    fn check_names(&self) -> Result<(), SpecError> {
        for a in &self.attachments {
            let src_fam = self.require(a.source.family())?;
            if src_fam.kind != CellKind::Edge {
                return Err(SpecError::WrongKind {
                    family: src_fam.name.clone(),
                    expected: "an edge source",
                });
            }
            if matches!(a.source, Source::ChainEnd { .. }) && !src_fam.is_chain() {
                return Err(SpecError::BadOffset {
                    family: src_fam.name.clone(),
                    reason: "chain end of a unit family".into(),
                });
            }
            let check_ref = |family: &str, offset: i64, kind: CellKind| -> Result<(), SpecError> {
                let fam = self.require(family)?;
                if fam.kind != kind {
                    let expected = match kind {
                        CellKind::Vertex => "a vertex target",
                        CellKind::Edge => "a glue target",
                    };
                    return Err(SpecError::WrongKind {
                        family: fam.name.clone(),
                        expected,
                    });
                }
                if !fam.is_chain() && offset != 0 {
                    return Err(SpecError::BadOffset {
                        family: fam.name.clone(),
                        reason: format!("unit family indexed with offset {offset}"),
                    });
                }
                Ok(())
            };
            match &a.target {
                Target::Vertex(v) => check_ref(&v.family, v.offset, CellKind::Vertex)?,
                Target::Glue { family, offset, .. } => check_ref(family, *offset, CellKind::Edge)?,
                Target::Limit(members) => {
                    for v in members {
                        check_ref(&v.family, v.offset, CellKind::Vertex)?;
                    }
                }
                Target::Open => {}
            }
        }
        for g in &self.generators {
            for (from, img) in &g.images {
                let f = self.require(from).map_err(|_| SpecError::BadGenerator {
                    generator: g.name.clone(),
                    reason: format!("unknown family `{from}`"),
                })?;
                let t = self
                    .require(&img.family)
                    .map_err(|_| SpecError::BadGenerator {
                        generator: g.name.clone(),
                        reason: format!("unknown family `{}`", img.family),
                    })?;
                if f.kind != t.kind || f.indexing != t.indexing {
                    return Err(SpecError::BadGenerator {
                        generator: g.name.clone(),
                        reason: format!("`{from}` and `{}` differ in kind or indexing", img.family),
                    });
                }
                if !f.is_chain() && img.shift != 0 {
                    return Err(SpecError::BadGenerator {
                        generator: g.name.clone(),
                        reason: format!("unit family `{from}` cannot shift"),
                    });
                }
            }
            // Unlisted families map to themselves; the whole map must be a
            // permutation of the family list.
            let total = self.families.len();
            let mut images: Vec<&str> = self
                .families
                .iter()
                .map(|f| {
                    g.images
                        .get(&f.name)
                        .map(|i| i.family.as_str())
                        .unwrap_or(f.name.as_str())
                })
                .collect();
            images.sort();
            images.dedup();
            if images.len() != total {
                return Err(SpecError::BadGenerator {
                    generator: g.name.clone(),
                    reason: "family map is not a permutation".into(),
                });
            }
        }
        for m in &self.marks {
            let cell = m.point.cell();
            self.require(&cell.family)?;
        }
        Ok(())
    }

    fn require(&self, name: &str) -> Result<&CellFamily, SpecError> {
        self.family_id(name)
            .map(|i| &self.families[i])
            .ok_or_else(|| SpecError::UnresolvedName(name.to_string()))
    }

    pub fn families(&self) -> &[CellFamily] {
        &self.families
    }

    pub fn attachments(&self) -> &[Attachment] {
        &self.attachments
    }

    pub fn generators(&self) -> &[GeneratorAction] {
        &self.generators
    }

    pub fn marks(&self) -> &[Mark] {
        &self.marks
    }

    pub fn family_id(&self, name: &str) -> Option<FamilyId> {
        self.families
            .binary_search_by(|f| f.name.as_str().cmp(name))
            .ok()
    }

    pub fn family(&self, name: &str) -> Option<&CellFamily> {
        self.family_id(name).map(|i| &self.families[i])
    }

    pub fn generator(&self, name: &str) -> Option<&GeneratorAction> {
        self.generators.iter().find(|g| g.name == name)
    }

    pub fn mark(&self, name: &str) -> Option<&Point> {
        self.marks.iter().find(|m| m.name == name).map(|m| &m.point)
    }

    /// Largest absolute offset mentioned by any attachment.
    pub fn max_offset(&self) -> i64 {
        let mut m = 0;
        for a in &self.attachments {
            match &a.target {
                Target::Vertex(v) => m = m.max(v.offset.abs()),
                Target::Glue { offset, .. } => m = m.max(offset.abs()),
                Target::Limit(vs) => {
                    for v in vs {
                        m = m.max(v.offset.abs());
                    }
                }
                Target::Open => {}
            }
        }
        m
    }

    /// True when no family is an integer chain.
    pub fn is_finite(&self) -> bool {
        self.families.iter().all(|f| !f.is_chain())
    }

    /// The ascending step of a self-glued edge chain: `Some(1)` when
    /// `f[n].high` is glued to `f[n+1].low`, `Some(-1)` for `f[n-1].low`.
    pub fn self_glue_step(&self, family: &str) -> Option<i64> {
        let fam = self.family(family)?;
        if fam.kind != CellKind::Edge || !fam.is_chain() {
            return None;
        }
        for a in &self.attachments {
            if let (
                Source::Cell { family: src, end },
                Target::Glue {
                    family: tgt,
                    end: tend,
                    offset,
                },
            ) = (&a.source, &a.target)
            {
                if src == family && tgt == family && *end != *tend && offset.abs() == 1 {
                    return Some(match end {
                        End::High => *offset,
                        End::Low => -*offset,
                    });
                }
            }
        }
        None
    }

    /// Resolve a cell reference, checking that the index is valid for the
    /// family's indexing.
    pub fn resolve_cell(&self, cell: &Cell) -> Option<(FamilyId, &CellFamily)> {
        let id = self.family_id(&cell.family)?;
        let fam = &self.families[id];
        if !fam.is_chain() && cell.index != 0 {
            return None;
        }
        Some((id, fam))
    }
}

impl fmt::Display for End {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
