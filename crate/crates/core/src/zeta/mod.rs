//! The local subalgebra zeta function of `h_n(o)` in three closed forms, plus
//! the ideal and graded variants, the series oracle, the functional equation
//! and the residue identity behind the type-B form.
//!
//! All forms are returned over the common denominator
//! `(T;q)_{2n} prod_{m=0}^n (1 - q^{c_m} T^{n+1})`; see [`canonical`].

mod global;
mod poles;
mod reduced;

pub use global::{
    dirichlet_coeffs, global_factor, global_factor_eval, max_nontrivial_exponent, primes_up_to, rn_numeric, RnEstimate,
};
pub use poles::{pole_analysis, pole_candidates, PoleReport};
pub use reduced::{
    reduced_c, reduced_c_limit, reduced_cone_series, reduced_zeta, reduced_zeta_brenti, reduced_zeta_eulerian,
};

use num_bigint::BigInt;

use crate::combinat::{c_seq, c_seq_graded, gen_w, partitions_up_to, weight_c, WVector};
use crate::counts::{birkhoff_alpha, n_aggregate};
use crate::error::{guard, Error, Result};
use crate::exactalg::{FactoredRational, Poly, SignedMonomial};
use crate::igusa::{igusa_a, igusa_a_descent, igusa_b, igusa_b_residue, AVariant, BVariant};
use crate::par;

pub const THM_A_BOUND: usize = 5;
pub const THM_B_BOUND: usize = 12;
pub const THM_C_BOUND: usize = 6;
pub const SERIES_ORACLE_BOUND: u32 = 6;

/// `a_{n,r} = 2n + r(2n+1-r)/2`.
pub fn a_nr(n: usize, r: usize) -> i64 {
    let (n, r) = (n as i64, r as i64);
    2 * n + r * (2 * n + 1 - r) / 2
}

/// Factors `(a, b, 1)` of `(q^a T^b; q^step)_m`.
fn poch(a: i64, b: u32, step: i64, m: i64) -> impl Iterator<Item = (i64, u32, u32)> {
    (0..m.max(0)).map(move |i| (a + step * i, b, 1))
}

/// `(q^a T^b; q^step)_m` as a polynomial.
fn poch_poly(a: i64, b: u32, step: i64, m: i64) -> Poly {
    poch(a, b, step, m).fold(Poly::one(), |p, (a, b, _)| p.mul_binomial(a, b))
}

/// `(T;q)_{2n} prod_{m=0}^n (1 - q^{c_m} T^{n+1})`.
pub fn canonical_den(n: usize) -> Vec<(i64, u32, u32)> {
    let mut d: Vec<_> = poch(0, 1, 1, 2 * n as i64).collect();
    d.extend(c_seq(n).into_iter().map(|c| (c, n as u32 + 1, 1)));
    d
}

/// Rewrite a zeta function over [`canonical_den`]. Falls back to the
/// reduced form if the numerator over that denominator is not polynomial.
pub fn canonical(n: usize, f: &FactoredRational) -> FactoredRational {
    let den = canonical_den(n);
    match f.numerator_over(&den) {
        Some(num) => FactoredRational::new(num, SignedMonomial::ONE, den),
        None => f.reduce(),
    }
}

/// Slots `X_0(w), .., X_n(w)` with `X_k = q^{u_k + 2k(n-k)} T^k` for
/// `k >= 1`, `u_k = w_1 + .. + w_k`, and `X_0 = q^{2n} T X_n`.
pub fn thm_a_slots(w: &WVector, n: usize) -> Vec<SignedMonomial> {
    let u = w.partial_sums();
    let mut xs: Vec<SignedMonomial> =
        (1..=n).map(|k| SignedMonomial::qt(u[k - 1] as i64 + 2 * (k * (n - k)) as i64, k as i64)).collect();
    let x0 = xs[n - 1].mul(SignedMonomial::qt(2 * n as i64, 1));
    xs.insert(0, x0);
    xs
}

/// Sum over `W_n` of `C_n(w)` times an augmented Igusa function.
pub fn zeta_thm_a(n: usize) -> Result<FactoredRational> {
    guard("n for the W_n-sum form", n, THM_A_BOUND)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let ws = gen_w(n);
    let items: Vec<FactoredRational> = par::map(&ws, |w| {
        let ig = igusa_a_descent(n, -2, &thm_a_slots(w, n)).expect("arity and size are checked");
        &weight_c(w) * &ig
    })
    .into_iter()
    .collect();
    Ok(canonical(n, &FactoredRational::sum(&items)))
}

/// The `r`-th summand of the `(n+1)`-term form:
/// `(-q)^r (1 - q^{2n-2r+1}) (q^2;q^2)_n / ((q;q)_{2n-r+1} (q;q)_r (q^r T;q^2)_{n-r} (q^{2n-r} T;q)_r (1 - q^{a_{n,r}} T^{n+1}))`.
pub fn thm_b_summand(n: usize, r: usize) -> FactoredRational {
    let (ni, ri) = (n as i64, r as i64);
    let num = poch_poly(2, 0, 2, ni).mul_binomial(2 * ni - 2 * ri + 1, 0);
    let den = poch(1, 0, 1, 2 * ni - ri + 1)
        .chain(poch(1, 0, 1, ri))
        .chain(poch(ri, 1, 2, ni - ri))
        .chain(poch(2 * ni - ri, 1, 1, ri))
        .chain([(a_nr(n, r), n as u32 + 1, 1)]);
    let sign = if r % 2 == 0 { 1 } else { -1 };
    FactoredRational::new(num, SignedMonomial::new(sign, ri, 0), den)
}

/// The `(n+1)`-term closed form; the reference implementation.
pub fn zeta_thm_b(n: usize) -> Result<FactoredRational> {
    guard("n for the (n+1)-term form", n, THM_B_BOUND)?;
    let items: Vec<FactoredRational> = (0..=n).map(|r| thm_b_summand(n, r)).collect();
    Ok(canonical(n, &FactoredRational::sum(&items)))
}

/// `Z = -q^n T` and the slots `q^{c_i} T^{n+1}`.
fn thm_c_args(n: usize, c: &[i64]) -> (SignedMonomial, Vec<SignedMonomial>) {
    let z = SignedMonomial::new(-1, n as i64, 1);
    let xs = c.iter().map(|&ci| SignedMonomial::qt(ci, n as i64 + 1)).collect();
    (z, xs)
}

fn type_b_form(n: usize, c: &[i64]) -> Result<FactoredRational> {
    guard("n for the type-B form", n, THM_C_BOUND)?;
    let (z, xs) = thm_c_args(n, c);
    let ig = igusa_b(n, -1, z, &xs, BVariant::Full)?;
    Ok(ig.div_factors(&poch(0, 1, 1, 2 * n as i64).collect::<Vec<_>>()))
}

/// `(T;q)_{2n}^{-1} I_{B_n}(q^-1, -q^n T; q^{c_0} T^{n+1}, .., q^{c_n} T^{n+1})`.
pub fn zeta_thm_c(n: usize) -> Result<FactoredRational> {
    Ok(canonical(n, &type_b_form(n, &c_seq(n))?))
}

/// Ideal zeta function `1 / ((T;q)_{2n} (1 - q^{2n} T^{n+1}))`.
pub fn zeta_ideal(n: usize) -> FactoredRational {
    let mut den: Vec<_> = poch(0, 1, 1, 2 * n as i64).collect();
    den.push((2 * n as i64, n as u32 + 1, 1));
    FactoredRational::new(Poly::one(), SignedMonomial::ONE, den)
}

/// EXPERIMENTAL. The type-B form with every `c_i` replaced by
/// `c'_i = binom(n+1, 2) - binom(i+1, 2)`, prefactor unchanged.
pub fn zeta_graded(n: usize) -> Result<FactoredRational> {
    Ok(type_b_form(n, &c_seq_graded(n))?.reduce())
}

/// `zeta = zeta_ideal * I^-_{B_n}(q^-1, -q^n T; q^{c_0} T^{n+1}, .., q^{c_{n-1}} T^{n+1})`.
pub fn check_ideal_factorization(n: usize) -> Result<()> {
    let (z, xs) = thm_c_args(n, &c_seq(n));
    let trunc = igusa_b(n, -1, z, &xs[..n], BVariant::Truncated)?;
    if &zeta_ideal(n) * &trunc != zeta_thm_c(n)? {
        return Err(Error::IdentityMismatch(format!("ideal factorization at n={n}")));
    }
    Ok(())
}

/// `T`-series through `T^order` of
/// `(1 - q^{2n} T)^{-1} sum_mu weight(mu) T^{|mu|} (1 - q^{2n(mu_n+1)} T^{mu_n+1})`
/// over partitions with at most `n` parts.
fn mu_series(n: usize, order: u32, weight: impl Fn(&crate::combinat::Partition) -> Result<Poly>) -> Result<Vec<Poly>> {
    let mut s = Poly::zero();
    for mu in partitions_up_to(order, n) {
        let last = mu.padded(n)?[n - 1] as i64;
        let f = Poly::one() - Poly::monomial(BigInt::from(1), 2 * n as i64 * (last + 1), (last + 1) as u32);
        s += &(&weight(&mu)? * &f).shift(0, mu.size());
    }
    let geo = Poly::from_terms((0..=order).map(|k| (BigInt::from(1), 2 * (n * k as usize) as i64, k)));
    Ok(s.mul_trunc(&geo, order).t_coeffs(order))
}

/// Series through `T^order` from the partition sum
/// `(1 - q^{2n} T)^{-1} sum_mu N'(mu) alpha_n(mu; q^2) T^{|mu|} (1 - q^{2n(mu_n+1)} T^{mu_n+1})`.
pub fn zeta_series_oracle(n: usize, order: u32) -> Result<Vec<Poly>> {
    guard("truncation for the partition sum", order as usize, SERIES_ORACLE_BOUND as usize)?;
    mu_series(n, order, |mu| n_aggregate(mu, n))
}

/// `Z(w)` as the augmented Igusa function
/// `I^-_n(q^-2; X_1..X_{n-1}) / ((1 - X_n)(1 - X_0))`.
pub fn z_of_w(w: &WVector, n: usize) -> Result<FactoredRational> {
    if w.n() != n || !w.is_member() {
        return Err(Error::ArityMismatch { expected: n, got: w.n() });
    }
    let xs = thm_a_slots(w, n);
    let trunc = igusa_a(n, AVariant::Truncated, -2, &xs[1..n])?;
    let ends = &FactoredRational::geometric(xs[0]) * &FactoredRational::geometric(xs[n]);
    Ok(&trunc * &ends)
}

/// `Z(w)` through `T^order` from its defining partition sum with weights
/// `q^{mu . w} alpha_n(mu; q^2)`.
pub fn z_of_w_series(w: &WVector, n: usize, order: u32) -> Result<Vec<Poly>> {
    mu_series(n, order, |mu| {
        let e = w.dot(&mu.padded(n)?) as i64;
        Ok(birkhoff_alpha(mu, n, 2)?.shift(e, 0))
    })
}

/// Verify `zeta(q^-1, T^-1) = -q^{binom(2n+1, 2)} T^{2n+1} zeta(q, T)`.
pub fn funeq_check(n: usize) -> Result<()> {
    let z = zeta_thm_b(n)?;
    let e = ((2 * n + 1) * (2 * n) / 2) as i64;
    let rhs = z.mul_monomial(SignedMonomial::new(-1, e, 2 * n as i64 + 1));
    if z.invert_qt() != rhs {
        return Err(Error::FunctionalEquationFailure(n));
    }
    Ok(())
}

/// `L_{n,m}`: the residue of `I_{B_n}(q^-1, -q^n T; q^{c_i} Y)` at
/// `Y = q^{-c_m}`, via the residue factorization.
pub fn residue_l(n: usize, m: usize) -> Result<FactoredRational> {
    let c = c_seq(n);
    let z = SignedMonomial::new(-1, n as i64, 1);
    let xs: Vec<SignedMonomial> = (0..=n).filter(|&i| i != m).map(|i| SignedMonomial::qt(c[i] - c[m], 0)).collect();
    igusa_b_residue(n, m, -1, z, &xs)
}

/// `(T;q)_{2n} A_m(T)` with
/// `A_m = (-q)^{n-m} (1 - q^{2m+1}) (q^2;q^2)_n / ((q;q)_{n+m+1} (q;q)_{n-m} (q^{n-m} T;q^2)_m (q^{n+m} T;q)_{n-m})`.
pub fn residue_target(n: usize, m: usize) -> FactoredRational {
    let (ni, mi) = (n as i64, m as i64);
    let num = &poch_poly(2, 0, 2, ni).mul_binomial(2 * mi + 1, 0) * &poch_poly(0, 1, 1, 2 * ni);
    let den = poch(1, 0, 1, ni + mi + 1).chain(poch(1, 0, 1, ni - mi)).chain(poch(ni - mi, 1, 2, mi)).chain(poch(
        ni + mi,
        1,
        1,
        ni - mi,
    ));
    let sign = if (n - m) % 2 == 0 { 1 } else { -1 };
    FactoredRational::new(num, SignedMonomial::new(sign, ni - mi, 0), den)
}

pub fn check_residue_identity(n: usize, m: usize) -> Result<()> {
    if residue_l(n, m)? != residue_target(n, m) {
        return Err(Error::IdentityMismatch(format!("residue identity at n={n}, m={m}")));
    }
    Ok(())
}

/// Compare the three closed forms exactly.
pub fn check_cross_forms(n: usize) -> Result<()> {
    let b = zeta_thm_b(n)?;
    let a = zeta_thm_a(n)?;
    if a != b {
        return Err(Error::IdentityMismatch(format!("W_n-sum form vs (n+1)-term form at n={n}")));
    }
    let c = zeta_thm_c(n)?;
    if c != b {
        return Err(Error::IdentityMismatch(format!("type-B form vs (n+1)-term form at n={n}")));
    }
    Ok(())
}
