//! The global factor `N_n(X, Y)`, the Euler product constant `R_n` and
//! Dirichlet coefficients of the local factors.

use num_bigint::BigInt;
use serde::Serialize;

use super::zeta_thm_b;
use crate::combinat::{apply_signs, c_seq, permutations, signed_perms, SignedPermutation};
use crate::error::{guard, Error, Result};
use crate::exactalg::Poly;
use crate::par;

pub const GLOBAL_BOUND: usize = 6;

/// `N_n(X, Y) = sum_{g in B_n} (-1)^{neg(g)} X^{C(g)} Y^{D(g)}`, stored with
/// `X` as `q` and `Y` as `T`.
pub fn global_factor(n: usize) -> Result<Poly> {
    guard("n for the global factor", n, GLOBAL_BOUND)?;
    let perms = permutations(n);
    let c = c_seq(n);
    Ok(par::map_reduce(
        &perms,
        Poly::zero(),
        |w| {
            let mut p = Poly::zero();
            for mask in 0u32..1 << n {
                let s = apply_signs(w, mask).stats_with(&c);
                let sign = if s.neg % 2 == 0 { 1 } else { -1 };
                p.add_term(BigInt::from(sign), s.c, s.d);
            }
            p
        },
        |a, b| a + b,
    ))
}

/// `N_n(p, p^{-2n})` as a polynomial in `p`: the exponent of each term is
/// `C(g) - 2n D(g)`.
pub fn global_factor_eval(n: usize) -> Result<Poly> {
    Ok(global_factor(n)?.subst_t(1, -2 * n as i64, 0))
}

/// The largest exponent `C(g) - 2n D(g)` over `g != 1`, and the elements
/// attaining it.
pub fn max_nontrivial_exponent(n: usize) -> Result<(i64, Vec<SignedPermutation>)> {
    guard("n for the global factor", n, GLOBAL_BOUND)?;
    let mut best = i64::MIN;
    let mut arg = Vec::new();
    for g in signed_perms(n)? {
        let s = g.stats();
        if s.length == 0 {
            continue;
        }
        let e = s.c - 2 * n as i64 * s.d as i64;
        if e > best {
            best = e;
            arg.clear();
        }
        if e == best {
            arg.push(g);
        }
    }
    Ok((best, arg))
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; bound as usize + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= bound as usize {
        if sieve[i] {
            (i * i..=bound as usize).step_by(i).for_each(|j| sieve[j] = false);
        }
        i += 1;
    }
    (0..=bound).filter(|&i| sieve[i as usize]).collect()
}

/// APPROXIMATE value of `R_n` from Euler products truncated at a prime bound.
#[derive(Debug, Clone, Serialize)]
pub struct RnEstimate {
    pub n: usize,
    pub prime_bound: u64,
    pub local_product: f64,
    pub zeta_product: f64,
    pub value: f64,
    /// `value` at half the prime bound minus `value`.
    pub delta_half_bound: f64,
    pub label: &'static str,
}

/// Exponents `s` with `prod_s zeta(s)` the zeta factor of `R_n`.
pub fn rn_zeta_exponents(n: usize) -> Vec<i64> {
    let n = n as i64;
    let mut v: Vec<i64> = (0..=2 * n - 2).map(|i| 2 * n - i).collect();
    v.extend((0..=n).map(|i| 2 * n * n - n * (n + 1) / 2 + i * (i + 1) / 2));
    v
}

fn rn_parts(n: usize, local: &Poly, bound: u64) -> (f64, f64) {
    let exps = rn_zeta_exponents(n);
    let (mut l, mut z) = (1.0f64, 1.0f64);
    for p in primes_up_to(bound) {
        let pf = p as f64;
        l *= local.to_f64_at(pf, 1.0);
        for &s in &exps {
            z /= 1.0 - pf.powi(-(s as i32));
        }
    }
    (l, z)
}

/// `R_n = prod_p N_n(p, p^{-2n}) prod_{i=0}^{2n-2} zeta(2n-i)
/// prod_{i=0}^n zeta(2n^2 - binom(n+1, 2) + binom(i+1, 2))`, truncated.
pub fn rn_numeric(n: usize, prime_bound: u64) -> Result<RnEstimate> {
    if n < 2 {
        return Err(Error::InvalidArgument("R_n needs n >= 2".into()));
    }
    if prime_bound < 2 {
        return Err(Error::InvalidArgument("prime bound must be at least 2".into()));
    }
    let local = global_factor_eval(n)?;
    let (l, z) = rn_parts(n, &local, prime_bound);
    let (lh, zh) = rn_parts(n, &local, prime_bound / 2);
    Ok(RnEstimate {
        n,
        prime_bound,
        local_product: l,
        zeta_product: z,
        value: l * z,
        delta_half_bound: lh * zh - l * z,
        label: "APPROXIMATE",
    })
}

/// Coefficients `a_{p^0}, .., a_{p^order}` of the local factor at `q = p`.
pub fn dirichlet_coeffs(n: usize, p: u64, order: u32) -> Result<Vec<BigInt>> {
    let s = zeta_thm_b(n)?.series_in_t(order)?;
    s.iter().map(|c| c.eval_q_int(p as i64).ok_or(Error::NonPolynomialReduction)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::zeta_thm_c;

    fn exps(p: &Poly) -> Vec<(i64, i64)> {
        let mut v: Vec<(i64, i64)> = p.terms().map(|(c, e, _)| (e, i64::try_from(c).unwrap())).collect();
        v.sort_by(|a, b| b.0.cmp(&a.0));
        v
    }

    #[test]
    fn table_values() {
        assert_eq!(global_factor(1).unwrap(), Poly::binomial(3, 3));
        assert_eq!(exps(&global_factor_eval(1).unwrap()), vec![(0, 1), (-3, -1)]);
        let n2 = vec![(0, 1), (-7, 1), (-8, -1), (-9, -1), (-10, -1), (-11, -1), (-12, 1), (-19, 1)];
        assert_eq!(exps(&global_factor_eval(2).unwrap()), n2);
        let n3 = exps(&global_factor_eval(3).unwrap());
        assert_eq!(&n3[..6], &[(0, 1), (-14, 1), (-15, 1), (-18, -2), (-19, -2), (-20, -2)]);
        assert_eq!(n3.last(), Some(&(-58, -1)));
    }

    #[test]
    fn matches_type_b_numerator() {
        for n in 1..=4 {
            assert_eq!(&global_factor(n).unwrap(), zeta_thm_c(n).unwrap().numerator());
        }
    }

    #[test]
    fn maximizers() {
        for n in 1..=5usize {
            let (best, arg) = max_nontrivial_exponent(n).unwrap();
            let n_i = n as i64;
            assert_eq!(best, -(3 * n_i * n_i - n_i + 4) / 2, "n = {n}");
            assert_eq!(arg.len(), 1);
            let expect: Vec<i32> = if n == 1 {
                vec![-1]
            } else {
                let mut w = vec![2, 1];
                w.extend(3..=n as i32);
                w
            };
            assert_eq!(arg[0].window, expect);
        }
    }

    #[test]
    fn primes() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert!(primes_up_to(1).is_empty());
    }

    #[test]
    fn rn_converges() {
        let r = rn_numeric(2, 2000).unwrap();
        assert!(r.value.is_finite() && r.value > 0.0);
        assert!(r.delta_half_bound.abs() < 1e-3);
        assert!(rn_numeric(1, 100).is_err());
        assert_eq!(rn_zeta_exponents(2), vec![4, 3, 2, 5, 6, 8]);
    }

    #[test]
    fn dirichlet_nonnegative() {
        for n in 1..=3 {
            for p in [2, 3, 5] {
                let c = dirichlet_coeffs(n, p, 8).unwrap();
                assert_eq!(c[0], BigInt::from(1));
                assert!(c.iter().all(|x| x.sign() != num_bigint::Sign::Minus));
            }
        }
        // n = 1, p = 2: 1, 3, 19 at p^0, p^1, p^2
        assert_eq!(dirichlet_coeffs(1, 2, 2).unwrap(), vec![1.into(), 3.into(), 19.into()]);
    }
}
