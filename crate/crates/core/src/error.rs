use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised by the library. Each variant names the failing precondition.
#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("table is not square or has entries out of range")]
    MalformedTable,
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("size {size} exceeds the configured bound {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error("not a left action: ({0}*{1}).{2} differs from {0}.({1}.{2})")]
    NotAnAction(usize, usize, usize),
    #[error("identity element acts nontrivially on point {0}")]
    IdentityActsNontrivially(usize),
    #[error("linear system has no solution")]
    Infeasible,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("element index {0} out of range")]
    ElementOutOfRange(usize),
    #[error("unknown element name `{0}`")]
    UnknownElement(String),
    #[error("the identity cannot carry a Maurer-Cartan form")]
    IdentityInHatG,
    #[error("edge set is not invariant under left translations")]
    NotLeftCovariant,
    #[error("calculus is not bicovariant")]
    NotBicovariant,
    #[error("element {0} is not in the generating set of the calculus")]
    NotInHatG(usize),
    #[error("operands belong to different calculi")]
    CalculusMismatch,
    #[error("expected {expected} coefficients, got {got}")]
    BadLambdaLength { expected: usize, got: usize },
    #[error("calculus is not the universal one")]
    NotUniversal,
    #[error("connection coefficients are not constant")]
    NotLeftInvariant,
    #[error("connection is not extensible; {} coefficients violate the support condition", .0.len())]
    NotExtensible(Vec<(usize, usize, usize)>),
    #[error("tensor slots do not match the operation")]
    SlotMismatch,
}

pub type Result<T> = core::result::Result<T, Error>;
