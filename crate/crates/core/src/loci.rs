//! Branch loci: sets of two or more pairwise non-separated vertices
//! approached by a common stem.

use std::fmt;

use serde::Serialize;

use crate::expand::{Segment, Truncation};
use crate::model::{ChainDir, End};
use crate::point::Cell;

/// A locus is positive when its stem approaches from below (the members
/// sit above the stem) and negative when it approaches from above.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum StemRef {
    Edge {
        cell: Cell,
        end: End,
    },
    /// The stem is the infinite end of a self-glued chain.
    Tail {
        family: String,
        toward: ChainDir,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BranchLocus {
    pub members: Vec<Cell>,
    pub sign: Sign,
    pub stem: StemRef,
    /// Index of the underlying limit event in the window.
    #[serde(skip)]
    pub limit: usize,
}

pub fn stem_ref(tr: &Truncation, seg: Segment, end: End) -> StemRef {
    match seg {
        Segment::Edge(c) => StemRef::Edge {
            cell: tr.cell(c).clone(),
            end,
        },
        Segment::Tail(t) => {
            let tail = &tr.tails()[t];
            StemRef::Tail {
                family: tail.family.clone(),
                toward: tail.toward,
            }
        }
    }
}

/// Every branch locus lying wholly inside the window, sorted by members.
pub fn branch_loci(tr: &Truncation) -> Vec<BranchLocus> {
    let mut out: Vec<BranchLocus> = tr
        .limits()
        .iter()
        .enumerate()
        .filter(|(_, l)| l.is_branching())
        .map(|(id, l)| {
            let (seg, end) = l.stem;
            BranchLocus {
                members: l.members.iter().map(|&m| tr.cell(m).clone()).collect(),
                sign: if end == End::High {
                    Sign::Positive
                } else {
                    Sign::Negative
                },
                stem: stem_ref(tr, seg, end),
                limit: id,
            }
        })
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expand::expand;
    use crate::gallery;

    #[test]
    fn zigzag_alternates_signs() {
        let tr = expand(&gallery::zigzag().spec, 1).unwrap();
        let loci = branch_loci(&tr);
        let pos = loci.iter().filter(|l| l.sign == Sign::Positive).count();
        let neg = loci.iter().filter(|l| l.sign == Sign::Negative).count();
        assert_eq!((pos, neg), (3, 3));
    }

    #[test]
    fn swap_has_one_positive_locus() {
        for d in 0..3 {
            let tr = expand(&gallery::swap().spec, d).unwrap();
            let loci = branch_loci(&tr);
            assert_eq!(loci.len(), 1);
            assert_eq!(loci[0].sign, Sign::Positive);
            assert_eq!(loci[0].members, vec![Cell::unit("a"), Cell::unit("b")]);
            assert!(matches!(loci[0].stem, StemRef::Tail { .. }));
        }
    }
}
