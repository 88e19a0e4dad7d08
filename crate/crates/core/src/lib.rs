//! Leaf spaces: simply connected, oriented, possibly non-Hausdorff
//! 1-manifolds given by finite cell-complex presentations, together with
//! their path order, group actions and branching structure.

pub mod action;
pub mod checks;
pub mod comparable;
pub mod doc;
pub mod error;
pub mod expand;
pub mod gallery;
pub mod hausdorff;
pub mod loci;
pub mod model;
pub mod order;
pub mod point;
pub mod random;
pub mod suite;
pub mod tri;
pub mod validate;
pub mod words;

pub use action::{act, act_cell, check_automorphism, Letter, Transform, Word};
pub use checks::{CheckError, CheckReport, Verdict, REALIZABILITY_DISCLAIMER};
pub use comparable::{
    branching_type, classify_element, comparable_sample, fixed_cells, in_comparable_set, Branching,
    BranchingType, ComparableSample, ElementProfile, Finding,
};
pub use doc::{emit, parse, DocError};
pub use error::Error;
pub use expand::{
    expand, CellIx, Continuation, EndLink, LimitEvent, PointIx, Segment, SideLink, Tail, Truncation,
};
pub use hausdorff::{hausdorffify, HausdorffTree};
pub use loci::{branch_loci, BranchLocus, Sign, StemRef};
pub use model::{
    Attachment, CellFamily, CellKind, ChainDir, End, FamilyImage, GeneratorAction, Indexing,
    LeafSpaceSpec, Mark, Source, SpecError, Target, VertexRef,
};
pub use order::{
    compare, interval_contains, path, Comparability, Direction, Interval, Junction, Order, Path,
    PathItem,
};
pub use point::{Cell, Coord, Point};
pub use random::{random_spec, RandomParams};
pub use suite::{run_check, run_suite, SuiteOptions, SuiteOutcome, CHECKS};
pub use tri::Tri;
pub use validate::{validate, Condition, ValidationReport, Violation};
pub use words::StabilizerBall;
