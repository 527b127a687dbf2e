use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    #[error("field GF({p}^{k}) exceeds the supported table size")]
    FieldTooLarge { p: u32, k: u32 },
    #[error("modulus is not irreducible over GF({0})")]
    ReducibleModulus(u32),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("operands belong to different algebras")]
    ParentMismatch,
    #[error("matrix is singular")]
    Singular,
    #[error("size guard exceeded for {what}: {size} > {limit}")]
    SizeGuard {
        what: &'static str,
        size: u128,
        limit: u128,
    },
    #[error("p = {p} divides n = {n}; the trace form is degenerate")]
    TraceFormDegenerate { p: u32, n: usize },
    #[error("the p-character does not vanish on the subalgebra")]
    CharacterNonzeroOnSubalgebra,
    #[error("the Borel subalgebra is not in the Springer fiber")]
    NotInFiber,
    #[error("no torus-fixed Borel subalgebra kills the character")]
    NoWeylSeed,
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
