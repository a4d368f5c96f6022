use thiserror::Error;

/// Errors raised by the library. Mismatch variants signal a bug in an
/// implementation rather than bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("size guard: {what} = {value} exceeds the bound {bound}")]
    SizeGuard { what: &'static str, value: usize, bound: usize },
    #[error("expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("partition {mu} has more than {n} parts")]
    RankMismatch { mu: String, n: usize },
    #[error("substitution q -> 1 hits the factor (1 - q^{0}) in the denominator")]
    SubstitutionSingular(i64),
    #[error("rational function is not regular at T = 0")]
    NotRegularAtZero,
    #[error("denominator factor (1 - q^{0}) does not cancel, coefficients are not Laurent polynomials")]
    NonPolynomialCoefficient(i64),
    #[error("rational sum did not reduce to a polynomial")]
    NonPolynomialReduction,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("alternating form is degenerate or not alternating")]
    DegenerateForm,
    #[error("enumeration budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error(
        "factorization mismatch at lambda={lambda} mu={mu} p={p}: lattices {lattices}, lagrangians x alpha {predicted}"
    )]
    FactorizationMismatch { lambda: String, mu: String, p: u64, lattices: u64, predicted: String },
    #[error("identity failed: {0}")]
    IdentityMismatch(String),
    #[error("functional equation fails for n = {0}")]
    FunctionalEquationFailure(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn guard(what: &'static str, value: usize, bound: usize) -> Result<()> {
    if value > bound {
        Err(Error::SizeGuard { what, value, bound })
    } else {
        Ok(())
    }
}
