use thiserror::Error;

/// Errors raised by the exact algebra layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("constants belong to different contexts")]
    ContextMismatch,
    #[error("root of unity of order {order} is not representable (only orders dividing 4 are supported)")]
    UnsupportedRootOfUnity { order: u64 },
    #[error("non-integer multiple of a formal logarithm cannot be exponentiated")]
    FractionalLogPower,
    #[error("exponential-constant exponent denominator {denominator} exceeds the context bound {bound}")]
    ExponentDenominatorBound { denominator: i64, bound: i64 },
    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("basis does not span exponent {exponent}")]
    BasisDoesNotSpan { exponent: String },
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("polynomial is not simple")]
    NotSimple,
    #[error("coefficients involve transcendental generators; factorization is only supported over Q(i)")]
    CoefficientsOutsideBaseField,
    #[error("input polynomial is already reducible")]
    ReducibleInput,
    #[error("polynomial does not vanish on all integers")]
    DoesNotVanish,
    #[error("expected a two-term factor of the form 1 - a*e^(alpha*z)")]
    NotLinearFactor,
    #[error("solution must be nonzero")]
    ZeroSolution,
    #[error("the two solutions must be distinct")]
    EqualSolutions,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("too many terms for subset enumeration: {len} > {max}")]
    TooLong { len: usize, max: usize },
    #[error("input polynomial is simple")]
    SimpleInput,
    #[error("subset must be proper and nonempty")]
    BadSubset,
    #[error("set must be nonempty")]
    EmptySet,
    #[error("point has a zero coordinate")]
    ZeroCoordinate,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
