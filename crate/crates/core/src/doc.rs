//! The `leafspace/1` text format.
//!
//! ```text
//! leafspace/1
//! family s edge chain
//! family a vertex unit
//! family b vertex unit
//! attach s[n].high -> s[n-1].low
//! attach s[-inf] -> limit(a, b)
//! attach s[+inf] -> open
//! generator g
//! map g s -> s[n-1]
//! map g a -> b
//! mark stem = s[0]:1/2
//! ```
//!
//! Lines are independent; `#` starts a comment. Families must be declared
//! before they are used. Chain-to-chain references are written relative to
//! `n`; references from unit cells and chain ends use absolute indices.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::expand::expand;
use crate::model::{
    Attachment, CellFamily, CellKind, ChainDir, End, FamilyImage, GeneratorAction, Indexing,
    LeafSpaceSpec, Mark, Source, SpecError, Target, VertexRef,
};
use crate::point::{is_ident, CellDisplay, Point};
use crate::validate::validate;

pub const HEADER: &str = "leafspace/1";

/// Depth at which parsed models are validated.
pub const PARSE_CHECK_DEPTH: u32 = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DocError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: {source}")]
    Semantic { line: usize, source: SpecError },
    #[error("{0}")]
    Spec(#[from] SpecError),
    #[error("model is not a valid leaf space: {0}")]
    Invalid(String),
}

struct Ctx {
    families: BTreeMap<String, CellFamily>,
    line: usize,
}

impl Ctx {
    fn err(&self, reason: impl Into<String>) -> DocError {
        DocError::Parse {
            line: self.line,
            reason: reason.into(),
        }
    }

    fn semantic(&self, source: SpecError) -> DocError {
        DocError::Semantic {
            line: self.line,
            source,
        }
    }

    fn family(&self, name: &str) -> Result<&CellFamily, DocError> {
        if !is_ident(name) {
            return Err(self.err(format!("bad family name `{name}`")));
        }
        self.families
            .get(name)
            .ok_or_else(|| self.semantic(SpecError::UnresolvedName(name.to_string())))
    }

    /// `name`, `name[k]` (absolute) or `name[n+k]` (relative). Returns the
    /// family, the offset, and whether the index was relative.
    fn reference(&self, text: &str) -> Result<(CellFamily, i64, bool), DocError> {
        let text = text.trim();
        let Some(open) = text.find('[') else {
            let fam = self.family(text)?.clone();
            return Ok((fam, 0, false));
        };
        let name = &text[..open];
        let inner = text[open + 1..]
            .strip_suffix(']')
            .ok_or_else(|| self.err(format!("missing `]` in `{text}`")))?;
        let fam = self.family(name)?.clone();
        let (offset, relative) = parse_index(inner).map_err(|reason| {
            self.semantic(SpecError::BadOffset {
                family: fam.name.clone(),
                reason,
            })
        })?;
        Ok((fam, offset, relative))
    }
}

/// `n`, `n+2`, `n - 1` (relative) or `3`, `-1` (absolute).
fn parse_index(inner: &str) -> Result<(i64, bool), String> {
    let s: String = inner.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(rest) = s.strip_prefix('n') {
        if rest.is_empty() {
            return Ok((0, true));
        }
        let (sign, digits) = match rest.as_bytes()[0] {
            b'+' => (1, &rest[1..]),
            b'-' => (-1, &rest[1..]),
            _ => return Err(format!("`{inner}` is not of the form n+k")),
        };
        let k: i64 = digits
            .parse()
            .map_err(|_| format!("`{inner}` is not of the form n+k"))?;
        return Ok((sign * k, true));
    }
    s.parse::<i64>()
        .map(|k| (k, false))
        .map_err(|_| format!("`{inner}` is not an index shift of n"))
}

fn parse_end(ctx: &Ctx, s: &str) -> Result<End, DocError> {
    match s.trim() {
        "low" => Ok(End::Low),
        "high" => Ok(End::High),
        other => Err(ctx.err(format!("expected `low` or `high`, found `{other}`"))),
    }
}

fn check_ref_form(
    ctx: &Ctx,
    fam: &CellFamily,
    relative: bool,
    src_chain: bool,
    offset: i64,
) -> Result<(), DocError> {
    let bad = |reason: &str| {
        ctx.semantic(SpecError::BadOffset {
            family: fam.name.clone(),
            reason: reason.into(),
        })
    };
    match (fam.is_chain(), src_chain) {
        (false, _) if relative || offset != 0 => Err(bad("unit families take no index")),
        (true, true) if !relative => Err(bad("chain-to-chain references must be relative to n")),
        (true, false) if relative => Err(bad(
            "references from unit cells or chain ends take an absolute index",
        )),
        _ => Ok(()),
    }
}

fn parse_vertex_ref(ctx: &Ctx, text: &str, src_chain: bool) -> Result<VertexRef, DocError> {
    let (fam, offset, relative) = ctx.reference(text)?;
    check_ref_form(ctx, &fam, relative, src_chain, offset)?;
    Ok(VertexRef::new(fam.name, offset))
}

fn parse_target(ctx: &Ctx, text: &str, src_chain: bool) -> Result<Target, DocError> {
    let text = text.trim();
    if text == "open" {
        return Ok(Target::Open);
    }
    if let Some(inner) = text.strip_prefix("limit(") {
        let inner = inner
            .strip_suffix(')')
            .ok_or_else(|| ctx.err("missing `)` after limit members"))?;
        let members = inner
            .split(',')
            .map(str::trim)
            .filter(|m| !m.is_empty())
            .map(|m| parse_vertex_ref(ctx, m, src_chain))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(Target::Limit(members));
    }
    if let Some((r, end)) = text.rsplit_once('.') {
        let end = parse_end(ctx, end)?;
        let (fam, offset, relative) = ctx.reference(r)?;
        check_ref_form(ctx, &fam, relative, src_chain, offset)?;
        return Ok(Target::Glue {
            family: fam.name,
            end,
            offset,
        });
    }
    Ok(Target::Vertex(parse_vertex_ref(ctx, text, src_chain)?))
}

fn parse_attach(ctx: &Ctx, rest: &str) -> Result<Attachment, DocError> {
    let (src, tgt) = rest
        .split_once("->")
        .ok_or_else(|| ctx.err("expected `source -> target`"))?;
    let src = src.trim();
    for (suffix, toward) in [("[-inf]", ChainDir::Minus), ("[+inf]", ChainDir::Plus)] {
        if let Some(name) = src.strip_suffix(suffix) {
            let fam = ctx.family(name)?;
            if !fam.is_chain() {
                return Err(ctx.semantic(SpecError::BadOffset {
                    family: fam.name.clone(),
                    reason: "only chains have infinite ends".into(),
                }));
            }
            let target = parse_target(ctx, tgt, false)?;
            return Ok(Attachment::chain_end(name, toward, target));
        }
    }
    let (r, end) = src
        .rsplit_once('.')
        .ok_or_else(|| ctx.err("attachment source needs `.low` or `.high`"))?;
    let end = parse_end(ctx, end)?;
    let (fam, offset, relative) = ctx.reference(r)?;
    if fam.is_chain() && !(relative && offset == 0) {
        return Err(ctx.semantic(SpecError::BadOffset {
            family: fam.name.clone(),
            reason: "chain sources are written `name[n]`".into(),
        }));
    }
    if !fam.is_chain() && relative {
        return Err(ctx.semantic(SpecError::BadOffset {
            family: fam.name.clone(),
            reason: "unit families take no index".into(),
        }));
    }
    let target = parse_target(ctx, tgt, fam.is_chain())?;
    Ok(Attachment::cell(&fam.name, end, target))
}

/// Parse a model and validate it at a small depth.
pub fn parse(text: &str) -> Result<LeafSpaceSpec, DocError> {
    let spec = parse_unchecked(text)?;
    let report =
        validate(&expand(&spec, PARSE_CHECK_DEPTH).map_err(|e| DocError::Invalid(e.to_string()))?);
    if !report.is_valid() {
        return Err(DocError::Invalid(report.summary()));
    }
    Ok(spec)
}

/// Parse without running structural validation.
pub fn parse_unchecked(text: &str) -> Result<LeafSpaceSpec, DocError> {
    let mut ctx = Ctx {
        families: BTreeMap::new(),
        line: 0,
    };
    let mut attachments = Vec::new();
    let mut generators: BTreeMap<String, GeneratorAction> = BTreeMap::new();
    let mut generator_order = Vec::new();
    let mut marks = Vec::new();
    let mut seen_header = false;
    for (i, raw) in text.lines().enumerate() {
        ctx.line = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if !seen_header {
            if line != HEADER {
                return Err(ctx.err(format!("expected header `{HEADER}`")));
            }
            seen_header = true;
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match keyword {
            "family" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let [name, kind, indexing] = parts.as_slice() else {
                    return Err(ctx.err("expected `family NAME edge|vertex unit|chain`"));
                };
                if !is_ident(name) {
                    return Err(ctx.err(format!("bad family name `{name}`")));
                }
                let kind = match *kind {
                    "edge" => CellKind::Edge,
                    "vertex" => CellKind::Vertex,
                    k => return Err(ctx.err(format!("unknown cell kind `{k}`"))),
                };
                let indexing = match *indexing {
                    "unit" => Indexing::Unit,
                    "chain" => Indexing::Chain,
                    k => return Err(ctx.err(format!("unknown indexing `{k}`"))),
                };
                if ctx.families.contains_key(*name) {
                    return Err(ctx.semantic(SpecError::DuplicateName(name.to_string())));
                }
                ctx.families
                    .insert(name.to_string(), CellFamily::new(*name, kind, indexing));
            }
            "attach" => attachments.push(parse_attach(&ctx, rest)?),
            "generator" => {
                if !is_ident(rest) {
                    return Err(ctx.err(format!("bad generator name `{rest}`")));
                }
                if generators.contains_key(rest) {
                    return Err(ctx.semantic(SpecError::DuplicateGenerator(rest.to_string())));
                }
                generators.insert(rest.to_string(), GeneratorAction::new(rest));
                generator_order.push(rest.to_string());
            }
            "map" => {
                let (head, image) = rest
                    .split_once("->")
                    .ok_or_else(|| ctx.err("expected `map GEN FAMILY -> IMAGE`"))?;
                let mut words = head.split_whitespace();
                let (Some(g), Some(from), None) = (words.next(), words.next(), words.next()) else {
                    return Err(ctx.err("expected `map GEN FAMILY -> IMAGE`"));
                };
                let from_fam = ctx.family(from)?.clone();
                let (to_fam, shift, relative) = ctx.reference(image)?;
                if from_fam.is_chain() && !relative {
                    return Err(ctx.semantic(SpecError::BadOffset {
                        family: from_fam.name.clone(),
                        reason: "chain images are written `name[n+k]`".into(),
                    }));
                }
                if !from_fam.is_chain() && (relative || shift != 0) {
                    return Err(ctx.semantic(SpecError::BadGenerator {
                        generator: g.to_string(),
                        reason: format!("unit family `{from}` cannot shift"),
                    }));
                }
                let gen = generators
                    .get_mut(g)
                    .ok_or_else(|| ctx.err(format!("undeclared generator `{g}`")))?;
                if gen.images.contains_key(from) {
                    return Err(ctx.err(format!("`{from}` mapped twice by `{g}`")));
                }
                gen.images.insert(
                    from.to_string(),
                    FamilyImage {
                        family: to_fam.name,
                        shift,
                    },
                );
            }
            "mark" => {
                let (name, point) = rest
                    .split_once('=')
                    .ok_or_else(|| ctx.err("expected `mark NAME = POINT`"))?;
                let name = name.trim();
                if !is_ident(name) {
                    return Err(ctx.err(format!("bad mark name `{name}`")));
                }
                let point: Point = point.trim().parse().map_err(|e| ctx.err(format!("{e}")))?;
                ctx.family(&point.cell().family)?;
                marks.push(Mark {
                    name: name.to_string(),
                    point,
                });
            }
            other => return Err(ctx.err(format!("unknown keyword `{other}`"))),
        }
    }
    if !seen_header {
        return Err(DocError::Parse {
            line: 0,
            reason: format!("missing header `{HEADER}`"),
        });
    }
    let families = ctx.families.into_values().collect();
    let generators = generator_order
        .into_iter()
        .map(|g| generators.remove(&g).unwrap())
        .collect();
    Ok(LeafSpaceSpec::new(
        families,
        attachments,
        generators,
        marks,
    )?)
}

fn fmt_ref(spec: &LeafSpaceSpec, family: &str, offset: i64, relative: bool) -> String {
    let chain = spec.family(family).map(|f| f.is_chain()).unwrap_or(false);
    if !chain {
        family.to_string()
    } else if relative {
        match offset {
            0 => format!("{family}[n]"),
            k if k > 0 => format!("{family}[n+{k}]"),
            k => format!("{family}[n{k}]"),
        }
    } else {
        format!("{family}[{offset}]")
    }
}

/// One attachment as it would appear after `attach`.
pub fn attachment_line(spec: &LeafSpaceSpec, a: &Attachment) -> String {
    let (src, src_chain) = match &a.source {
        Source::Cell { family, end } => {
            let chain = spec.family(family).map(|f| f.is_chain()).unwrap_or(false);
            (format!("{}.{end}", fmt_ref(spec, family, 0, chain)), chain)
        }
        Source::ChainEnd { family, toward } => {
            let t = match toward {
                ChainDir::Minus => "-inf",
                ChainDir::Plus => "+inf",
            };
            (format!("{family}[{t}]"), false)
        }
    };
    let tgt = match &a.target {
        Target::Vertex(v) => fmt_ref(spec, &v.family, v.offset, src_chain),
        Target::Glue {
            family,
            end,
            offset,
        } => format!("{}.{end}", fmt_ref(spec, family, *offset, src_chain)),
        Target::Limit(members) => {
            let ms: Vec<String> = members
                .iter()
                .map(|v| fmt_ref(spec, &v.family, v.offset, src_chain))
                .collect();
            format!("limit({})", ms.join(", "))
        }
        Target::Open => "open".into(),
    };
    format!("{src} -> {tgt}")
}

/// Canonical text: families, attachments, generators and marks in sorted
/// order. `parse(&emit(s))` reproduces `s`.
pub fn emit(spec: &LeafSpaceSpec) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for f in spec.families() {
        let kind = match f.kind {
            CellKind::Edge => "edge",
            CellKind::Vertex => "vertex",
        };
        let indexing = if f.is_chain() { "chain" } else { "unit" };
        let _ = writeln!(out, "family {} {kind} {indexing}", f.name);
    }
    for a in spec.attachments() {
        let _ = writeln!(out, "attach {}", attachment_line(spec, a));
    }
    for g in spec.generators() {
        let _ = writeln!(out, "generator {}", g.name);
        for (from, img) in &g.images {
            let chain = spec.family(from).map(|f| f.is_chain()).unwrap_or(false);
            let _ = writeln!(
                out,
                "map {} {from} -> {}",
                g.name,
                fmt_ref(spec, &img.family, img.shift, chain)
            );
        }
    }
    for m in spec.marks() {
        let unit = spec
            .family(&m.point.cell().family)
            .map(|f| !f.is_chain())
            .unwrap_or(false);
        let cell = CellDisplay {
            cell: m.point.cell(),
            unit,
        };
        match &m.point {
            Point::Vertex(_) => {
                let _ = writeln!(out, "mark {} = {cell}", m.name);
            }
            Point::Interior(_, t) => {
                let _ = writeln!(out, "mark {} = {cell}:{t}", m.name);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    #[test]
    fn gallery_round_trips() {
        for entry in gallery::all() {
            let text = emit(&entry.spec);
            let back =
                parse_unchecked(&text).unwrap_or_else(|e| panic!("{}: {e}\n{text}", entry.name));
            assert_eq!(back, entry.spec, "{}", entry.name);
            assert_eq!(emit(&back), text);
        }
    }

    #[test]
    fn swap_text() {
        let text = emit(&gallery::swap().spec);
        assert!(text.contains("attach s[n].high -> s[n-1].low\n"));
        assert!(text.contains("attach s[-inf] -> limit(a, b)\n"));
        assert!(text.contains("map g rb -> ra[n-1]\n"));
        assert!(text.contains("mark x = ra[0]:1/2\n"));
    }

    #[test]
    fn reports_line_numbers() {
        let text = "leafspace/1\nfamily e edge chain\nattach e[n].high -> w[n]\n";
        assert_eq!(
            parse(text),
            Err(DocError::Semantic {
                line: 3,
                source: SpecError::UnresolvedName("w".into())
            })
        );
        let text =
            "leafspace/1\nfamily e edge chain\nfamily v vertex chain\nattach e[n].high -> v[2n]\n";
        assert!(matches!(
            parse(text),
            Err(DocError::Semantic {
                line: 4,
                source: SpecError::BadOffset { .. }
            })
        ));
        assert!(matches!(
            parse("nonsense\n"),
            Err(DocError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse("leafspace/1\nfrobnicate\n"),
            Err(DocError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn rejects_invalid_structure() {
        let text = "leafspace/1\nfamily e edge unit\nfamily f edge unit\nfamily v vertex unit\n\
                    attach e.high -> v\nattach f.high -> v\nattach e.low -> open\nattach f.low -> open\n";
        assert!(matches!(parse(text), Err(DocError::Invalid(_))));
    }
}
