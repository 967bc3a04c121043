use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("size bound exceeded: {0}")]
    SizeBound(String),
    #[error("{0} is not a unit")]
    NonUnit(String),
    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(String, String),
    #[error("dimension or modulus mismatch: {0}")]
    Mismatch(String),
    #[error("{0} is not irreducible")]
    NotIrreducible(String),
    #[error("bad reduction at place {0}")]
    BadReduction(String),
    #[error("ideal {0} is not coprime to the characteristic place")]
    CharacteristicPlace(String),
    #[error("splitting degree search exceeded its cap of {0}")]
    SplittingCap(u64),
    #[error("the zero ideal has no torsion submodule")]
    ZeroIdeal,
    #[error("no good places of degree <= {0}")]
    NoGoodPlaces(usize),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
}
