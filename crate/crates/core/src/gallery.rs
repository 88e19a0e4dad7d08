//! Named example models.
//!
//! `LINE`, `YPLUS`, `SWAP`, `ZIGZAG` and `COMB` are the reference gallery.
//! `TWINSWAP` and `TRIPOD` are auxiliary fixtures: the first joins two
//! copies of `SWAP` under a common branch point so a second generator can
//! exchange them, the second carries a family permutation that is not an
//! automorphism and is used as a counter-model.

use crate::model::{
    Attachment, CellFamily, CellKind, ChainDir, End, GeneratorAction, Indexing, LeafSpaceSpec,
    Mark, Target, VertexRef,
};
use crate::point::{Cell, Coord, Point};

#[derive(Clone, Debug)]
pub struct GalleryEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub spec: LeafSpaceSpec,
}

fn fam(name: &str, kind: CellKind, indexing: Indexing) -> CellFamily {
    CellFamily::new(name, kind, indexing)
}

fn edges(names: &[&str], indexing: Indexing) -> Vec<CellFamily> {
    names
        .iter()
        .map(|n| fam(n, CellKind::Edge, indexing))
        .collect()
}

fn vertices(names: &[&str], indexing: Indexing) -> Vec<CellFamily> {
    names
        .iter()
        .map(|n| fam(n, CellKind::Vertex, indexing))
        .collect()
}

fn vx(family: &str, offset: i64) -> Target {
    Target::Vertex(VertexRef::new(family, offset))
}

fn lim(members: &[(&str, i64)]) -> Target {
    Target::Limit(
        members
            .iter()
            .map(|(f, o)| VertexRef::new(*f, *o))
            .collect(),
    )
}

fn glue(family: &str, end: End, offset: i64) -> Target {
    Target::Glue {
        family: family.into(),
        end,
        offset,
    }
}

fn at(family: &str, end: End, target: Target) -> Attachment {
    Attachment::cell(family, end, target)
}

fn mark(name: &str, family: &str, index: i64) -> Mark {
    Mark {
        name: name.into(),
        point: Point::Interior(Cell::new(family, index), Coord::half()),
    }
}

fn vmark(name: &str, family: &str, index: i64) -> Mark {
    Mark {
        name: name.into(),
        point: Point::Vertex(Cell::new(family, index)),
    }
}

fn shift_all(name: &str, families: &[&str]) -> GeneratorAction {
    families
        .iter()
        .fold(GeneratorAction::new(name), |g, f| g.map(f, f, 1))
}

fn build(
    families: Vec<CellFamily>,
    attachments: Vec<Attachment>,
    generators: Vec<GeneratorAction>,
    marks: Vec<Mark>,
) -> LeafSpaceSpec {
    LeafSpaceSpec::new(families, attachments, generators, marks)
        .expect("gallery models are well formed")
}

/// The real line as a chain of unit intervals, translated by `t`.
pub fn line() -> GalleryEntry {
    let mut families = edges(&["e"], Indexing::Chain);
    families.extend(vertices(&["v"], Indexing::Chain));
    let spec = build(
        families,
        vec![
            at("e", End::Low, vx("v", 0)),
            at("e", End::High, vx("v", 1)),
        ],
        vec![shift_all("t", &["e", "v"])],
        vec![mark("x", "e", 0), vmark("v0", "v", 0)],
    );
    GalleryEntry {
        name: "LINE",
        summary: "the real line; t translates by one cell",
        spec,
    }
}

/// One stem whose high end branches onto two vertices, each continued by
/// a ray.
pub fn yplus() -> GalleryEntry {
    let mut families = edges(&["p", "q", "s"], Indexing::Unit);
    families.extend(vertices(&["a", "b"], Indexing::Unit));
    let spec = build(
        families,
        vec![
            at("s", End::Low, Target::Open),
            at("s", End::High, lim(&[("a", 0), ("b", 0)])),
            at("p", End::Low, vx("a", 0)),
            at("q", End::Low, vx("b", 0)),
            at("p", End::High, Target::Open),
            at("q", End::High, Target::Open),
        ],
        vec![],
        vec![mark("stem", "s", 0), mark("x", "p", 0), mark("y", "q", 0)],
    );
    GalleryEntry {
        name: "YPLUS",
        summary: "a single branch point with two prongs",
        spec,
    }
}

fn swap_copy(
    s: &str,
    ra: &str,
    rb: &str,
    a: &str,
    b: &str,
    plus_end: Target,
) -> (Vec<CellFamily>, Vec<Attachment>, GeneratorAction) {
    let mut families = edges(&[s, ra, rb], Indexing::Chain);
    families.extend(vertices(&[a, b], Indexing::Unit));
    let attachments = vec![
        at(s, End::High, glue(s, End::Low, -1)),
        Attachment::chain_end(s, ChainDir::Minus, lim(&[(a, 0), (b, 0)])),
        Attachment::chain_end(s, ChainDir::Plus, plus_end),
        at(ra, End::High, glue(ra, End::Low, 1)),
        Attachment::chain_end(ra, ChainDir::Minus, lim(&[(a, 0)])),
        Attachment::chain_end(ra, ChainDir::Plus, Target::Open),
        at(rb, End::High, glue(rb, End::Low, 1)),
        Attachment::chain_end(rb, ChainDir::Minus, lim(&[(b, 0)])),
        Attachment::chain_end(rb, ChainDir::Plus, Target::Open),
    ];
    let g = GeneratorAction::new("g")
        .map(s, s, -1)
        .map(ra, rb, 0)
        .map(rb, ra, -1)
        .map(a, b, 0)
        .map(b, a, 0);
    (families, attachments, g)
}

/// A stem chain accumulating on a non-separated pair `a`, `b`, each
/// continued by a ray chain; `g` exchanges the two sides while sliding
/// along the stem, and `g^2` translates everything.
pub fn swap() -> GalleryEntry {
    let (families, attachments, g) = swap_copy("s", "ra", "rb", "a", "b", Target::Open);
    let spec = build(
        families,
        attachments,
        vec![g],
        vec![mark("x", "ra", 0), mark("y", "rb", 0), mark("stem", "s", 0)],
    );
    GalleryEntry {
        name: "SWAP",
        summary: "a branch pair exchanged by a glide",
        spec,
    }
}

/// Alternating branch points pointing up and down, all translated by `h`.
pub fn zigzag() -> GalleryEntry {
    let mut families = edges(&["E", "F", "sigma", "tau"], Indexing::Chain);
    families.extend(vertices(&["m1", "m2", "p1", "p2"], Indexing::Chain));
    let spec = build(
        families,
        vec![
            at("sigma", End::Low, Target::Open),
            at("sigma", End::High, lim(&[("p1", 0), ("p2", 0)])),
            at("tau", End::High, Target::Open),
            at("tau", End::Low, lim(&[("m1", 0), ("m2", 0)])),
            at("E", End::Low, vx("p2", 0)),
            at("E", End::High, vx("m1", 0)),
            at("F", End::Low, vx("p1", 1)),
            at("F", End::High, vx("m2", 0)),
        ],
        vec![shift_all(
            "h",
            &["E", "F", "sigma", "tau", "m1", "m2", "p1", "p2"],
        )],
        vec![mark("lambda0", "E", 0), mark("mu0", "F", 0)],
    );
    GalleryEntry {
        name: "ZIGZAG",
        summary: "positive and negative branch points alternating along a line",
        spec,
    }
}

/// A spine with a branch point at every integer; one side continues the
/// spine, the other starts a ray. `t` translates along the spine.
pub fn comb() -> GalleryEntry {
    let mut families = edges(&["e", "r"], Indexing::Chain);
    families.extend(vertices(&["a", "b"], Indexing::Chain));
    let spec = build(
        families,
        vec![
            at("e", End::Low, vx("a", 0)),
            at("e", End::High, lim(&[("a", 1), ("b", 1)])),
            at("r", End::Low, vx("b", 0)),
            at("r", End::High, Target::Open),
        ],
        vec![shift_all("t", &["a", "b", "e", "r"])],
        vec![mark("spine", "e", 0), mark("tooth", "r", 0)],
    );
    GalleryEntry {
        name: "COMB",
        summary: "a spine of positive branch points with a ray at each",
        spec,
    }
}

/// Two copies of `SWAP` whose stems both descend from a common branch
/// pair `z1`, `z2` above a unit stem `sigma`. `g` acts as the swap glide on
/// both copies at once; `u` exchanges the copies.
pub fn twinswap() -> GalleryEntry {
    let (mut families, mut attachments, g1) =
        swap_copy("s1", "ra1", "rb1", "a1", "b1", lim(&[("z1", 0)]));
    let (f2, a2, g2) = swap_copy("s2", "ra2", "rb2", "a2", "b2", lim(&[("z2", 0)]));
    families.extend(f2);
    attachments.extend(a2);
    families.extend(edges(&["sigma"], Indexing::Unit));
    families.extend(vertices(&["z1", "z2"], Indexing::Unit));
    attachments.push(at("sigma", End::Low, Target::Open));
    attachments.push(at("sigma", End::High, lim(&[("z1", 0), ("z2", 0)])));
    let mut g = g1;
    g.images.extend(g2.images);
    let mut u = GeneratorAction::new("u");
    for (x, y) in [
        ("s1", "s2"),
        ("ra1", "ra2"),
        ("rb1", "rb2"),
        ("a1", "a2"),
        ("b1", "b2"),
        ("z1", "z2"),
    ] {
        u = u.map(x, y, 0).map(y, x, 0);
    }
    let spec = build(
        families,
        attachments,
        vec![g, u],
        vec![mark("x", "ra1", 0), mark("y", "ra2", 0)],
    );
    GalleryEntry {
        name: "TWINSWAP",
        summary: "two swap glides hanging from a common branch pair",
        spec,
    }
}

/// A stem branching onto three vertices, each continued by a ray. `w`
/// exchanges two prongs and is an automorphism; `x` exchanges two branch
/// vertices without their prongs and is not.
pub fn tripod() -> GalleryEntry {
    let mut families = edges(&["p", "q", "r", "s"], Indexing::Unit);
    families.extend(vertices(&["a", "b", "c"], Indexing::Unit));
    let spec = build(
        families,
        vec![
            at("s", End::Low, Target::Open),
            at("s", End::High, lim(&[("a", 0), ("b", 0), ("c", 0)])),
            at("p", End::Low, vx("a", 0)),
            at("q", End::Low, vx("b", 0)),
            at("r", End::Low, vx("c", 0)),
            at("p", End::High, Target::Open),
            at("q", End::High, Target::Open),
            at("r", End::High, Target::Open),
        ],
        vec![
            GeneratorAction::new("w")
                .map("b", "c", 0)
                .map("c", "b", 0)
                .map("q", "r", 0)
                .map("r", "q", 0),
            GeneratorAction::new("x").map("a", "b", 0).map("b", "a", 0),
        ],
        vec![
            mark("stem", "s", 0),
            mark("x", "p", 0),
            mark("y", "q", 0),
            mark("z", "r", 0),
        ],
    );
    GalleryEntry {
        name: "TRIPOD",
        summary: "a three-pronged branch point; generator x is deliberately not an automorphism",
        spec,
    }
}

/// The five reference models.
pub fn reference() -> Vec<GalleryEntry> {
    vec![line(), yplus(), swap(), zigzag(), comb()]
}

/// Reference models followed by the auxiliary fixtures.
pub fn all() -> Vec<GalleryEntry> {
    let mut v = reference();
    v.push(twinswap());
    v.push(tripod());
    v
}

pub fn by_name(name: &str) -> Option<GalleryEntry> {
    all()
        .into_iter()
        .find(|e| e.name.eq_ignore_ascii_case(name))
}
