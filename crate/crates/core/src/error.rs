use thiserror::Error;

/// Errors raised by the verifiers and constructors of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground set size {0} is outside 1..=30")]
    GroundSetSize(usize),

    #[error("element {element} is outside the ground set [1, {n}]")]
    ElementOutOfRange { element: usize, n: usize },

    #[error("member {index} of the family is empty")]
    EmptyMember { index: usize },

    #[error("member index {index} is out of range for a family of {len} members")]
    MemberIndex { index: usize, len: usize },

    #[error("members {i} and {j} are nested; compressing them does not change the family")]
    NestedPair { i: usize, j: usize },

    #[error("families live on different ground sets ({left} vs {right})")]
    GroundSetMismatch { left: usize, right: usize },

    #[error("instance too large: {0}")]
    InstanceTooLarge(String),

    #[error("family is not a {k}-cover: element {element} lies in only {count} members")]
    NotACover { element: usize, count: usize, k: usize },

    #[error("family is not a uniform {k}-cover: element {element} lies in {count} members")]
    NotUniformCover { element: usize, count: usize, k: usize },

    #[error("the second family is not a compression of the first")]
    NotComparable,

    #[error("empty set where a non-empty one is required")]
    EmptySet,

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid lattice set: {0}")]
    InvalidLattice(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid element {element:?}: {reason}")]
    InvalidElement { element: Vec<i64>, reason: String },

    #[error("element {0:?} is not in the sumset")]
    NotInSumset(Vec<i64>),

    #[error("operation requires a commutative group context")]
    NonCommutative,

    #[error("operation requires an ordered torsion-free (free abelian) context")]
    UnorderedContext,

    #[error("C is not contained in B_1 + ... + B_k: {0} is missing")]
    CNotContained(i64),

    #[error("invalid linear system: {0}")]
    InvalidSystem(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
