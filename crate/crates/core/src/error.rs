use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("matrix is singular modulo {0}")]
    SingularModN(u64),
    #[error("exterior power degree {k} out of range for a {dim}x{dim} matrix")]
    ExteriorDegree { k: usize, dim: usize },
    #[error("residue characteristic {0} is neither 0 nor a prime")]
    InvalidCharacteristic(u64),
    #[error("matrix is not symplectic with respect to the standard form")]
    NotSymplectic,
    #[error("characteristic polynomial has a non-cyclotomic factor {remainder}")]
    NotQuasiUnipotent { remainder: String },
    #[error("unipotent part of tau^{order} does not square to zero")]
    UnipotentIndexTooLarge { order: u64 },
    #[error("residue characteristic {p} divides the semisimple order {order} (wild ramification)")]
    WildRamification { p: u64, order: u64 },
    #[error("residue characteristic {p} divides {what} = {value}")]
    CharacteristicDivides { p: u64, what: &'static str, value: u64 },
    #[error("pairing matrix is not alternating modulo {0}")]
    NotAlternating(u64),
    #[error("pairing is degenerate modulo {0}")]
    DegeneratePairing(u64),
    #[error("subgroup enumeration refused: an estimated {estimate} subgroups exceeds the cap of {cap}")]
    EnumerationCap { estimate: String, cap: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("polarization degree {degree} shares a factor with the level {n}")]
    DegreeObstruction { degree: String, n: u64 },
    #[error("generator does not have finite order (not potentially good)")]
    NotPotentiallyGood,
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("polynomial has a non-cyclotomic factor {0}")]
    NonCyclotomicFactor(String),
    #[error("level {n} lies in N({k}); the criterion does not apply")]
    PreconditionExcluded { n: u64, k: u64 },
    #[error("unknown identifier {0:?}")]
    Unknown(String),
    #[error("value does not fit in a machine word: {0}")]
    Overflow(String),
    #[error("invalid scenario: {0}")]
    Scenario(String),
}
