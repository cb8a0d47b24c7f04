use thiserror::Error;

use crate::exactnum::NumError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error("matrix determinant must be positive")]
    NonPositiveDet,
    #[error("rational input has a finite continued fraction")]
    RationalInput,
    #[error("{0} is not in P_Z")]
    NotInPZ(String),
    #[error("point {0} lies outside the domain")]
    OutOfDomain(String),
    #[error("maps live on different domains")]
    DomainMismatch,
    #[error("map does not preserve the interval {0}")]
    NotInvariant(String),
    #[error("slope {0} is not a pure power of the base")]
    MalformedSlope(String),
    #[error("invariant violated ({kind}): {detail}")]
    InvariantViolation { kind: &'static str, detail: String },
    #[error("monitoring failed: {0}")]
    NotMonitorable(String),
    #[error("iteration cap {0} exceeded")]
    IterationCap(u64),
    #[error("membership failed: {0}")]
    MembershipFail(String),
    #[error("element is not in G_1: {0}")]
    NotInG1(String),
    #[error("element does not have the G(I)_1 shape: {0}")]
    NotInGI1(String),
    #[error("value {0} is outside (0, 1)")]
    OutOfRange(String),
    #[error("element is not in F_tau,1,-1: {0}")]
    NotInFtau11(String),
    #[error("element is not in F_n,1,-1: {0}")]
    NotInFn11(String),
    #[error("{0} is not n-adic")]
    NotNAdic(String),
    #[error("pieces are identical")]
    IdenticalPieces,
    #[error("no integer anchor available in ({0}, {1})")]
    NoAnchor(String, String),
    #[error("bridge construction failed: {0}")]
    BridgeFail(String),
    #[error("bad target: {0}")]
    BadTarget(String),
    #[error("shift {0} is not minimal")]
    BadShift(String),
    #[error("tree shapes do not match: {0} vs {1} leaves")]
    ShapeMismatch(usize, usize),
    #[error("target is not in the orbit: {0}")]
    NotInOrbit(String),
    #[error("search exhausted at depth {0}")]
    SearchExhausted(usize),
    #[error("end zones too small: {0}")]
    ZoneFail(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
