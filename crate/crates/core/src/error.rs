//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors reported by field construction, ring operations, action builders
/// and the analyzer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    InvalidDegree,
    #[error("field order {p}^{m} exceeds the supported bound 2^26")]
    FieldTooLarge { p: u64, m: u32 },
    #[error("modulus encoding {0} is not a monic polynomial of the requested degree")]
    InvalidModulus(u64),
    #[error("modulus encoding {0} is reducible")]
    ReducibleModulus(u64),
    #[error("element encoding {enc} out of range for a field of order {order}")]
    OutOfRange { enc: u64, order: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("discrete log of zero")]
    LogOfZero,
    #[error("exponent {i} outside the residue range [0, {n})")]
    ExponentOutOfRange { i: u64, n: u64 },
    #[error("iterated Frobenius power {r} outside [0, {m})")]
    FrobeniusOutOfRange { r: u32, m: u32 },
    #[error("zero is not an element of the star ring carrier")]
    StarZeroOperand,
    #[error("gamma^{exponent} is a star zero divisor: {exponent}*{witness} = 0 mod {n}")]
    StarZeroDivisor { exponent: u64, witness: u64, n: u64 },
    #[error("factorization shortcut needs a composite exponent, got {0}")]
    CompositeExponentRequired(u32),
    #[error("factorization base must exceed 1, got {0}")]
    BaseTooSmall(u64),
    #[error("arithmetic overflow in factorization")]
    Overflow,
    #[error("modulus {0} outside the supported range for subgroup search")]
    ModulusOutOfRange(u64),
    #[error("{residues:?} is not a subgroup of the units mod {n}")]
    NotAUnitSubgroup { n: u64, residues: Vec<u64> },
    #[error("subgroup member {member} violates the difference-unit property mod {n}")]
    MissingDifferenceUnit { n: u64, member: u64 },
    #[error("subgroup defined mod {got} used with a ring mod {expected}")]
    SubgroupModulusMismatch { expected: u64, got: u64 },
    #[error("group table is not a valid finite group: {0}")]
    InvalidGroup(String),
    #[error("permutation family is not a valid group action: {0}")]
    InvalidAction(String),
    #[error("S-box entry {entry} outside the codomain of size {codomain}")]
    EntryOutOfRange { entry: u64, codomain: u64 },
    #[error("derivative direction must not be the group identity")]
    IdentityDirection,
    #[error("S-box domain of size {sbox} does not match the action carrier of size {carrier}")]
    DomainMismatch { sbox: usize, carrier: usize },
    #[error("S-box codomain of size {sbox} does not match the target group of order {group}")]
    CodomainMismatch { sbox: u64, group: u64 },
    #[error("carrier of size {0} exceeds the analyzer bound 2^16 - 1")]
    CarrierTooLarge(usize),
    #[error("invertible input {x} maps to zero, outside the multiplicative target")]
    NonzeroMapsToZero { x: u64 },
    #[error("value 0 at input {x} has no index in a multiplicative target group")]
    ZeroValueInMultiplicativeTarget { x: u64 },
    #[error("power-map exponent must be at least 1")]
    ZeroPowerExponent,
    #[error("source dimension {src} is smaller than target dimension {tgt}")]
    DimensionTooSmall { src: u32, tgt: u32 },
    #[error("source and target characteristics differ: {src} vs {tgt}")]
    CharacteristicMismatch { src: u64, tgt: u64 },
    #[error("matrix shape {rows}x{cols} does not match the declared spaces")]
    MatrixShape { rows: usize, cols: usize },
    #[error("matrix digit {0} is not reduced mod the characteristic")]
    MatrixDigitOutOfRange(u64),
    #[error("extension degree {m} must exceed 1 for the subgroup setting")]
    DegreeTooSmallForSubgroupSetting { m: u32 },
    #[error("subgroup setting requires characteristic 2, got {0}")]
    CharacteristicNotTwo(u64),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
