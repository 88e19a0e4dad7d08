//! Words in the generators and their action on cells and points.
//!
//! Each generator permutes families and shifts chain indices, so every word
//! acts by a [`Transform`]: a map from families to (family, shift). Words
//! act right to left: `g h` applies `h` first.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::Error;
use crate::model::{Attachment, LeafSpaceSpec, Source, SpecError, Target, VertexRef};
use crate::point::{is_ident, Cell, Point};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: String,
    pub inverse: bool,
}

/// A freely reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    pub fn generator(name: &str) -> Word {
        Word {
            letters: vec![Letter {
                generator: name.to_string(),
                inverse: false,
            }],
        }
    }

    pub fn generator_letter(l: &Letter) -> Word {
        Word {
            letters: vec![l.clone()],
        }
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Word {
        let mut w = Word::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    fn push(&mut self, l: Letter) {
        match self.letters.last() {
            Some(last) if last.generator == l.generator && last.inverse != l.inverse => {
                self.letters.pop();
            }
            _ => self.letters.push(l),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    generator: l.generator.clone(),
                    inverse: !l.inverse,
                })
                .collect(),
        }
    }

    /// `self * other`: `other` acts first.
    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for l in &other.letters {
            w.push(l.clone());
        }
        w
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::identity();
        for _ in 0..k.unsigned_abs() {
            w = w.mul(&base);
        }
        w
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let mut runs: Vec<(&str, i64)> = Vec::new();
        for l in &self.letters {
            let e = if l.inverse { -1 } else { 1 };
            match runs.last_mut() {
                Some((g, n)) if *g == l.generator && (*n > 0) == (e > 0) => *n += e,
                _ => runs.push((&l.generator, e)),
            }
        }
        for (i, (g, n)) in runs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if *n == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{n}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses words such as `g`, `g^-1 h`, `g^2*h` or `1`.
impl FromStr for Word {
    type Err = Error;

    fn from_str(text: &str) -> Result<Word, Error> {
        let bad = |reason: String| Error::BadWord {
            text: text.to_string(),
            reason,
        };
        let mut letters = Vec::new();
        for tok in text
            .split(|c: char| c.is_whitespace() || c == '*' || c == '.')
            .filter(|t| !t.is_empty())
        {
            if tok == "1" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<i64>()
                        .map_err(|_| bad(format!("bad exponent `{e}`")))?,
                ),
                None => (tok, 1),
            };
            if !is_ident(name) {
                return Err(bad(format!("bad generator name `{name}`")));
            }
            if exp.unsigned_abs() > 1_000_000 {
                return Err(bad(format!("exponent {exp} too large")));
            }
            for _ in 0..exp.unsigned_abs() {
                letters.push(Letter {
                    generator: name.to_string(),
                    inverse: exp < 0,
                });
            }
        }
        Ok(Word::from_letters(letters))
    }
}

/// The action of a group element on families: family `f` goes to
/// `images[f].0` with index shift `images[f].1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transform {
    names: Vec<String>,
    images: Vec<(usize, i64)>,
}

impl Transform {
    pub fn identity(spec: &LeafSpaceSpec) -> Transform {
        Transform {
            names: spec.families().iter().map(|f| f.name.clone()).collect(),
            images: (0..spec.families().len()).map(|i| (i, 0)).collect(),
        }
    }

    pub fn generator(spec: &LeafSpaceSpec, name: &str, inverse: bool) -> Result<Transform, Error> {
        let g = spec
            .generator(name)
            .ok_or_else(|| Error::UndefinedGenerator(name.to_string()))?;
        let mut t = Transform::identity(spec);
        for (from, img) in &g.images {
            let a = spec
                .family_id(from)
                .ok_or_else(|| SpecError::UnresolvedName(from.clone()))?;
            let b = spec
                .family_id(&img.family)
                .ok_or_else(|| SpecError::UnresolvedName(img.family.clone()))?;
            t.images[a] = (b, img.shift);
        }
        Ok(if inverse { t.inverse() } else { t })
    }

    pub fn of_word(spec: &LeafSpaceSpec, w: &Word) -> Result<Transform, Error> {
        let mut t = Transform::identity(spec);
        for l in w.letters().iter().rev() {
            t = Transform::generator(spec, &l.generator, l.inverse)?.compose(&t);
        }
        Ok(t)
    }

    pub fn inverse(&self) -> Transform {
        let mut images = self.images.clone();
        for (from, &(to, shift)) in self.images.iter().enumerate() {
            images[to] = (from, -shift);
        }
        Transform {
            names: self.names.clone(),
            images,
        }
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Transform) -> Transform {
        let images = other
            .images
            .iter()
            .map(|&(mid, s1)| {
                let (to, s2) = self.images[mid];
                (to, s1 + s2)
            })
            .collect();
        Transform {
            names: self.names.clone(),
            images,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &(to, s))| i == to && s == 0)
    }

    /// Image of family `f` as (family id, shift).
    pub fn image(&self, f: usize) -> (usize, i64) {
        self.images[f]
    }

    pub fn apply_cell(&self, spec: &LeafSpaceSpec, cell: &Cell) -> Result<Cell, Error> {
        let (id, _) = spec
            .resolve_cell(cell)
            .ok_or_else(|| SpecError::UnresolvedName(cell.to_string()))?;
        let (to, shift) = self.images[id];
        Ok(Cell::new(self.names[to].clone(), cell.index + shift))
    }

    pub fn apply_point(&self, spec: &LeafSpaceSpec, p: &Point) -> Result<Point, Error> {
        Ok(match p {
            Point::Vertex(c) => Point::Vertex(self.apply_cell(spec, c)?),
            Point::Interior(c, t) => Point::Interior(self.apply_cell(spec, c)?, *t),
        })
    }
}

pub fn act(spec: &LeafSpaceSpec, w: &Word, x: &Point) -> Result<Point, Error> {
    Transform::of_word(spec, w)?.apply_point(spec, x)
}

pub fn act_cell(spec: &LeafSpaceSpec, w: &Word, c: &Cell) -> Result<Cell, Error> {
    Transform::of_word(spec, w)?.apply_cell(spec, c)
}

fn image_attachment(spec: &LeafSpaceSpec, t: &Transform, a: &Attachment) -> Attachment {
    let map = |name: &str| {
        let (to, shift) = t.image(spec.family_id(name).expect("spec names resolve"));
        (t.names[to].clone(), shift)
    };
    let chain = |name: &str| spec.family(name).map(|f| f.is_chain()).unwrap_or(false);
    let (source, src_shift, src_chain) = match &a.source {
        Source::Cell { family, end } => {
            let (f, s) = map(family);
            (
                Source::Cell {
                    family: f,
                    end: *end,
                },
                s,
                chain(family),
            )
        }
        Source::ChainEnd { family, toward } => {
            let (f, _) = map(family);
            (
                Source::ChainEnd {
                    family: f,
                    toward: *toward,
                },
                0,
                false,
            )
        }
    };
    let shift_ref = |family: &str, offset: i64| -> (String, i64) {
        let (f, s) = map(family);
        let off = match (chain(family), src_chain) {
            (false, _) => 0,
            (true, true) => offset + s - src_shift,
            (true, false) => offset + s,
        };
        (f, off)
    };
    let target = match &a.target {
        Target::Vertex(v) => {
            let (f, o) = shift_ref(&v.family, v.offset);
            Target::Vertex(VertexRef::new(f, o))
        }
        Target::Glue {
            family,
            end,
            offset,
        } => {
            let (f, o) = shift_ref(family, *offset);
            Target::Glue {
                family: f,
                end: *end,
                offset: o,
            }
        }
        Target::Limit(members) => Target::Limit(
            members
                .iter()
                .map(|v| {
                    let (f, o) = shift_ref(&v.family, v.offset);
                    VertexRef::new(f, o)
                })
                .collect(),
        ),
        Target::Open => Target::Open,
    };
    Attachment::new(source, target)
}

/// The same glue rule written from its other side, when that is expressible.
fn mirror(spec: &LeafSpaceSpec, a: &Attachment) -> Option<Attachment> {
    let (
        Source::Cell { family, end },
        Target::Glue {
            family: g,
            end: gend,
            offset,
        },
    ) = (&a.source, &a.target)
    else {
        return None;
    };
    let chain = |name: &str| spec.family(name).map(|f| f.is_chain()).unwrap_or(false);
    if chain(family) != chain(g) {
        return None;
    }
    Some(Attachment::cell(
        g,
        *gend,
        Target::Glue {
            family: family.clone(),
            end: *end,
            offset: -offset,
        },
    ))
}

/// Attachment rules whose image under `generator` is not a rule of the
/// spec. Empty when the generator is an automorphism.
pub fn check_automorphism(spec: &LeafSpaceSpec, generator: &str) -> Result<Vec<String>, Error> {
    let t = Transform::generator(spec, generator, false)?;
    let rules: BTreeSet<&Attachment> = spec.attachments().iter().collect();
    let mut problems = Vec::new();
    for a in spec.attachments() {
        let img = image_attachment(spec, &t, a);
        let ok = rules.contains(&img) || mirror(spec, &img).is_some_and(|m| rules.contains(&m));
        if !ok {
            problems.push(format!(
                "image of `{}` is `{}`, which is not a rule",
                crate::doc::attachment_line(spec, a),
                crate::doc::attachment_line(spec, &img)
            ));
        }
    }
    Ok(problems)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn words_reduce_and_print() {
        assert_eq!(w("g g^-1 h").to_string(), "h");
        assert_eq!(w("g^3 h^-2").to_string(), "g^3 h^-2");
        assert_eq!(w("g^2").inverse().to_string(), "g^-2");
        assert_eq!(w("1").to_string(), "1");
        assert_eq!(w("g h").pow(2).len(), 4);
        assert!(w("g h").mul(&w("h^-1 g^-1")).is_identity());
        assert!("g^x".parse::<Word>().is_err());
    }

    #[test]
    fn swap_glide_squares_to_translation() {
        let spec = gallery::swap().spec;
        let x: Point = "ra[0]:1/2".parse().unwrap();
        assert_eq!(act(&spec, &w("g"), &x).unwrap().to_string(), "rb[0]:1/2");
        assert_eq!(act(&spec, &w("g^2"), &x).unwrap().to_string(), "ra[-1]:1/2");
        assert_eq!(act(&spec, &w("g^-1 g"), &x).unwrap(), x);
        assert_eq!(
            act_cell(&spec, &w("g"), &Cell::unit("a")).unwrap(),
            Cell::unit("b")
        );
    }

    #[test]
    fn words_act_right_to_left() {
        let spec = gallery::twinswap().spec;
        let x: Point = "ra1[0]:1/2".parse().unwrap();
        // u first, then g: ra1 -> ra2 -> rb2.
        assert_eq!(act(&spec, &w("g u"), &x).unwrap().to_string(), "rb2[0]:1/2");
    }

    #[test]
    fn undefined_generator() {
        let spec = gallery::line().spec;
        assert!(matches!(
            act(&spec, &w("q"), &Point::vertex("v", 0)),
            Err(Error::UndefinedGenerator(_))
        ));
    }

    #[test]
    fn gallery_generators_are_automorphisms() {
        for entry in gallery::all() {
            for g in entry.spec.generators() {
                let problems = check_automorphism(&entry.spec, &g.name).unwrap();
                if entry.name == "TRIPOD" && g.name == "x" {
                    assert!(!problems.is_empty());
                } else {
                    assert!(
                        problems.is_empty(),
                        "{} {}: {problems:?}",
                        entry.name,
                        g.name
                    );
                }
            }
        }
    }

    #[test]
    fn transform_inverse_undoes() {
        let spec = gallery::swap().spec;
        let t = Transform::of_word(&spec, &w("g^3")).unwrap();
        assert!(t.compose(&t.inverse()).is_identity());
    }
}
