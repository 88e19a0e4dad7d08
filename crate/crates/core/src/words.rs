//! Enumeration of group elements by word length, and stabilizer balls.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::action::{Letter, Transform, Word};
use crate::error::Error;
use crate::expand::Truncation;
use crate::loci::BranchLocus;
use crate::model::LeafSpaceSpec;
use crate::point::Cell;

/// The letters of a spec in a fixed order: each generator, then its
/// inverse.
pub fn alphabet(spec: &LeafSpaceSpec) -> Vec<Letter> {
    spec.generators()
        .iter()
        .flat_map(|g| {
            [false, true].map(|inverse| Letter {
                generator: g.name.clone(),
                inverse,
            })
        })
        .collect()
}

/// The action of a transform on the families present in the window. Two
/// elements with equal fingerprints act identically on every window cell.
pub fn fingerprint(tr: &Truncation, t: &Transform) -> Vec<(usize, i64)> {
    let spec = tr.spec();
    let mut present = BTreeSet::new();
    for c in tr.cells() {
        present.insert(spec.family_id(&c.family).expect("window cells resolve"));
    }
    present.into_iter().map(|f| t.image(f)).collect()
}

/// All reduced words of length at most `max_len`, shortest first, with
/// their transforms.
pub fn all_words(spec: &LeafSpaceSpec, max_len: usize) -> Result<Vec<(Word, Transform)>, Error> {
    let letters = alphabet(spec);
    let gens: Vec<Transform> = letters
        .iter()
        .map(|l| Transform::generator(spec, &l.generator, l.inverse))
        .collect::<Result<_, _>>()?;
    let mut out = vec![(Word::identity(), Transform::identity(spec))];
    let mut frontier = 0..1;
    for len in 1..=max_len {
        let mut next = Vec::new();
        for i in frontier.clone() {
            let (w, t) = &out[i];
            for (l, g) in letters.iter().zip(&gens) {
                let nw = Word::generator_letter(l).mul(w);
                if nw.len() != len {
                    continue;
                }
                next.push((nw, g.compose(t)));
            }
        }
        let start = out.len();
        out.extend(next);
        frontier = start..out.len();
    }
    Ok(out)
}

/// One shortest word per distinct window action, up to `max_len`.
///
/// Words are extended on the left; since the image of `l·w` depends only
/// on the action of `w`, extending one representative per action reaches
/// every action reachable by any word.
pub fn word_classes(tr: &Truncation, max_len: usize) -> Result<Vec<(Word, Transform)>, Error> {
    let spec = tr.spec();
    let letters = alphabet(spec);
    let gens: Vec<Transform> = letters
        .iter()
        .map(|l| Transform::generator(spec, &l.generator, l.inverse))
        .collect::<Result<_, _>>()?;
    let id = Transform::identity(spec);
    let mut seen = BTreeSet::from([fingerprint(tr, &id)]);
    let mut out = vec![(Word::identity(), id)];
    let mut frontier = 0..1;
    for _ in 1..=max_len {
        let start = out.len();
        for i in frontier.clone() {
            for (l, g) in letters.iter().zip(&gens) {
                let (w, t) = &out[i];
                let nw = Word::generator_letter(l).mul(w);
                if nw.len() <= w.len() {
                    continue;
                }
                let nt = g.compose(t);
                if seen.insert(fingerprint(tr, &nt)) {
                    out.push((nw, nt));
                }
            }
        }
        frontier = start..out.len();
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizerBall {
    pub locus: Vec<Cell>,
    pub radius: usize,
    /// Shortest representatives of the distinct actions fixing the locus
    /// setwise, identity first.
    pub members: Vec<Word>,
    /// How each member permutes the locus.
    pub table: Vec<(Word, Vec<(Cell, Cell)>)>,
    /// A member whose powers `c^i`, `|i| <= radius`, account for the whole
    /// ball, when one exists.
    pub cyclic_generator: Option<Word>,
    /// Some member moves some point of the locus.
    pub acts_nontrivially: bool,
}

impl StabilizerBall {
    pub fn is_cyclic(&self) -> bool {
        self.cyclic_generator.is_some()
    }
}

fn image_set(
    spec: &LeafSpaceSpec,
    t: &Transform,
    cells: &[Cell],
) -> Result<Vec<(Cell, Cell)>, Error> {
    cells
        .iter()
        .map(|c| Ok((c.clone(), t.apply_cell(spec, c)?)))
        .collect()
}

pub fn stabilizer_ball_in(
    tr: &Truncation,
    locus: &BranchLocus,
    radius: usize,
) -> Result<StabilizerBall, Error> {
    let spec = tr.spec();
    let members: BTreeSet<&Cell> = locus.members.iter().collect();
    let mut ball = Vec::new();
    for (w, t) in word_classes(tr, radius)? {
        let images = image_set(spec, &t, &locus.members)?;
        if images.iter().map(|(_, i)| i).collect::<BTreeSet<_>>() == members {
            ball.push((w, t, images));
        }
    }
    let acts_nontrivially = ball.iter().any(|(_, _, im)| im.iter().any(|(a, b)| a != b));

    let prints: Vec<Vec<(usize, i64)>> = ball.iter().map(|(_, t, _)| fingerprint(tr, t)).collect();
    let radius_i = radius as i64;
    let mut cyclic_generator = None;
    // Identity first, so a trivial ball is generated by the identity.
    for (cw, ct, _) in &ball {
        let mut powers = BTreeSet::new();
        let mut up = Transform::identity(spec);
        let mut down = Transform::identity(spec);
        let inv = ct.inverse();
        powers.insert(fingerprint(tr, &up));
        for _ in 0..radius_i {
            up = ct.compose(&up);
            down = inv.compose(&down);
            powers.insert(fingerprint(tr, &up));
            powers.insert(fingerprint(tr, &down));
        }
        if prints.iter().all(|p| powers.contains(p)) {
            cyclic_generator = Some(cw.clone());
            if !cw.is_identity() || ball.len() == 1 {
                break;
            }
        }
    }
    let mut locus_cells = locus.members.clone();
    locus_cells.sort();
    Ok(StabilizerBall {
        locus: locus_cells,
        radius,
        members: ball.iter().map(|(w, _, _)| w.clone()).collect(),
        table: ball.into_iter().map(|(w, _, im)| (w, im)).collect(),
        cyclic_generator,
        acts_nontrivially,
    })
}

/// Which members each ball element fixes, keyed by word.
pub fn fixed_members(ball: &StabilizerBall) -> BTreeMap<Word, Vec<Cell>> {
    ball.table
        .iter()
        .map(|(w, im)| {
            (
                w.clone(),
                im.iter()
                    .filter(|(a, b)| a == b)
                    .map(|(a, _)| a.clone())
                    .collect(),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expand::expand;
    use crate::gallery;
    use crate::loci::branch_loci;

    #[test]
    fn swap_ball_is_powers_of_g() {
        let tr = expand(&gallery::swap().spec, 4).unwrap();
        let locus = &branch_loci(&tr)[0];
        let ball = stabilizer_ball_in(&tr, locus, 6).unwrap();
        assert_eq!(ball.members.len(), 13);
        for k in -6i64..=6 {
            let w = Word::generator("g").pow(k);
            assert!(ball.members.contains(&w), "missing {w}");
        }
        assert_eq!(ball.cyclic_generator, Some(Word::generator("g")));
        assert!(ball.acts_nontrivially);
    }

    #[test]
    fn second_generator_leaves_ball_cyclic() {
        let tr = expand(&gallery::twinswap().spec, 3).unwrap();
        let locus = branch_loci(&tr)
            .into_iter()
            .find(|l| l.members.contains(&Cell::unit("a1")))
            .unwrap();
        let ball = stabilizer_ball_in(&tr, &locus, 6).unwrap();
        assert!(ball
            .members
            .iter()
            .all(|w| w.letters().iter().all(|l| l.generator == "g")));
        assert!(ball.is_cyclic());
    }

    #[test]
    fn class_counts() {
        let tr = expand(&gallery::swap().spec, 2).unwrap();
        assert_eq!(word_classes(&tr, 3).unwrap().len(), 7);
        assert_eq!(all_words(tr.spec(), 3).unwrap().len(), 7);
        let tw = expand(&gallery::twinswap().spec, 2).unwrap();
        // Z x Z/2 within radius 2: 1, g, g^-1, u, g^2, g^-2, gu, g^-1u.
        assert_eq!(word_classes(&tw, 2).unwrap().len(), 8);
    }
}
