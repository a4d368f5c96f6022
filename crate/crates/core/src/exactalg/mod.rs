//! Exact arithmetic in `q` and `T = q^-s`: bivariate polynomials with Laurent
//! exponents in `q`, rational functions with factored denominators, and
//! q-series building blocks.

pub mod json;
mod poly;
mod qseries;
mod rational;

pub use poly::{BivariatePolynomial, Poly};
pub use qseries::{gauss_binom, gauss_multinom, q_factorial, q_int, qpochhammer};
pub use rational::{FactoredRational, SignedMonomial};

/// Binary operation selector for [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith(lhs: &Poly, rhs: &Poly, op: PolyOp) -> Poly {
    match op {
        PolyOp::Add => lhs + rhs,
        PolyOp::Sub => lhs - rhs,
        PolyOp::Mul => lhs * rhs,
    }
}

/// Substitution rules accepted by [`substitute`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Substitution {
    /// `q -> q^-1` and `T -> T^-1` together.
    InvertQT,
    /// `q -> 1`.
    QToOne,
    /// `T -> sign q^a T^b`.
    TToMonomial(SignedMonomial),
}

pub fn substitute(f: &FactoredRational, rule: Substitution) -> crate::Result<FactoredRational> {
    match rule {
        Substitution::InvertQT => Ok(f.invert_qt()),
        Substitution::QToOne => f.at_q_one(),
        Substitution::TToMonomial(m) => Ok(f.subst_t(m)),
    }
}

pub fn series_in_t(f: &FactoredRational, order: u32) -> crate::Result<Vec<Poly>> {
    f.series_in_t(order)
}
