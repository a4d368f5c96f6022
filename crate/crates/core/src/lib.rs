//! Subalgebra zeta functions of the higher Heisenberg Lie rings `h_n` over a
//! compact discrete valuation ring with residue field of size `q`.
//!
//! Three closed forms are implemented ([`zeta::zeta_thm_a`],
//! [`zeta::zeta_thm_b`], [`zeta::zeta_thm_c`]) together with the generating
//! function machinery they are built from and brute-force enumeration oracles
//! over finite rings that the formulas are tested against.

pub mod checks;
pub mod combinat;
pub mod counts;
pub mod error;
pub mod exactalg;
pub mod igusa;
pub mod oracle;
pub mod par;
pub mod zeta;

pub use error::{Error, Result};
pub use exactalg::{BivariatePolynomial, FactoredRational, Poly, SignedMonomial};
