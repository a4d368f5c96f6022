//! Closed-form counts: Birkhoff numbers, the Lagrangian count `N'(mu)` and
//! the lattice count `N(mu) = N'(mu) alpha_n(mu; q^2)`.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use crate::combinat::{gen_w, weight_c, Partition};
use crate::error::{Error, Result};
use crate::exactalg::{gauss_multinom, q_factorial, FactoredRational, Poly};

/// `alpha_n(mu; q^base)` from the multiplicity formula
/// `q^<mu, 2 rho> [n]_{q^-1}! / prod_j [m_j(mu)]_{q^-1}!`.
pub fn birkhoff_alpha_multiplicity(mu: &Partition, n: usize, base: i64) -> Result<Poly> {
    let parts = mu.padded(n)?;
    // <mu, 2 rho> = sum mu_i (n + 1 - 2i)
    let e: i64 = parts.iter().enumerate().map(|(i, &m)| m as i64 * (n as i64 - 1 - 2 * i as i64)).sum();
    let mut num = q_factorial(n as u32, -1);
    let top = parts.first().copied().unwrap_or(0);
    for j in 0..=top {
        let m = mu.multiplicity(j, n) as u32;
        for i in 1..=m {
            // divide by [i]_{q^-1} = (1 - q^-i)/(1 - q^-1)
            num = num.mul_binomial(-1, 0).div_binomial(-(i as i64), 0).expect("multinomial quotient is exact");
        }
    }
    Ok(num.shift(e, 0).subst_q_pow(base))
}

/// `alpha_n(mu; q^base)` from the support formula
/// `q^{d . rho'} binom(n, Supp+_{n-1}(d))_{q^-1}` with `rho'_k = k(n-k)`.
pub fn birkhoff_alpha_support(mu: &Partition, n: usize, base: i64) -> Result<Poly> {
    let d = mu.difference_vector(n)?;
    let e: i64 = d
        .iter()
        .enumerate()
        .map(|(i, &di)| {
            let k = i as i64 + 1;
            di as i64 * k * (n as i64 - k)
        })
        .sum();
    let supp: Vec<u32> = (1..n).filter(|&i| d[i - 1] > 0).map(|i| i as u32).collect();
    Ok(gauss_multinom(n as u32, &supp, -1).shift(e, 0).subst_q_pow(base))
}

/// Birkhoff number `alpha_n(mu; q^base)`: the number of sublattices of `o^n`
/// of cotype `mu`. Both formulas are evaluated and required to agree.
pub fn birkhoff_alpha(mu: &Partition, n: usize, base: i64) -> Result<Poly> {
    let a = birkhoff_alpha_multiplicity(mu, n, base)?;
    let b = birkhoff_alpha_support(mu, n, base)?;
    if a != b {
        return Err(Error::IdentityMismatch(format!("Birkhoff formulas disagree at mu=({mu}), n={n}: {a} vs {b}")));
    }
    Ok(a)
}

/// `N'(mu) = sum_{w in W_n} C_n(w) q^{w . mu}` with `n` the number of parts.
pub fn nprime_closed(mu: &Partition) -> Result<Poly> {
    nprime_closed_padded(mu, mu.len())
}

/// As [`nprime_closed`], with `mu` padded by zeros to `n` parts.
pub fn nprime_closed_padded(mu: &Partition, n: usize) -> Result<Poly> {
    let parts = mu.padded(n)?;
    let terms: Vec<FactoredRational> =
        gen_w(n).iter().map(|w| weight_c(w).scale_poly(&Poly::q_pow(w.dot(&parts) as i64))).collect();
    let s = FactoredRational::sum(&terms).reduce();
    if !s.den_factors().is_empty() || s.unit().e_t != 0 {
        return Err(Error::NonPolynomialReduction);
    }
    Ok(s.numerator().clone())
}

type Memo = RwLock<HashMap<Vec<u32>, Poly>>;

fn memo() -> &'static Memo {
    static M: OnceLock<Memo> = OnceLock::new();
    M.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `N'` of a composition through the recursion
/// `N'(mu) = N'(mu_1 - 1, mu_2, ...) + q^{|mu|} N'(mu_2, ...)`, after
/// dropping zeros and sorting.
pub fn nprime_recursive(mu: &[u32]) -> Poly {
    let mut key: Vec<u32> = mu.iter().copied().filter(|&x| x > 0).collect();
    key.sort_unstable_by(|a, b| b.cmp(a));
    if key.is_empty() {
        return Poly::one();
    }
    if let Some(p) = memo().read().unwrap().get(&key) {
        return p.clone();
    }
    let size: u32 = key.iter().sum();
    let mut first = key.clone();
    first[0] -= 1;
    let rest = &key[1..];
    let p = &nprime_recursive(&first) + &nprime_recursive(rest).shift(size as i64, 0);
    memo().write().unwrap().insert(key, p.clone());
    p
}

/// `N(mu) = N'(mu) alpha_n(mu; q^2)`.
pub fn n_aggregate(mu: &Partition, n: usize) -> Result<Poly> {
    let alpha = birkhoff_alpha(mu, n, 2)?;
    Ok(&nprime_closed_padded(mu, n)? * &alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::partitions_up_to;
    use num_bigint::BigInt;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec())
    }

    #[test]
    fn birkhoff_examples() {
        assert_eq!(birkhoff_alpha(&Partition::empty(), 3, 1).unwrap(), Poly::one());
        assert_eq!(birkhoff_alpha(&p(&[4]), 1, 1).unwrap(), Poly::one());
        assert_eq!(birkhoff_alpha(&p(&[1]), 2, 1).unwrap(), Poly::from_q_coeffs(&[1, 1]));
        assert!(birkhoff_alpha(&p(&[1, 1]), 1, 1).is_err());
        assert_ne!(birkhoff_alpha(&p(&[1]), 2, 1).unwrap(), birkhoff_alpha(&p(&[1]), 1, 1).unwrap());
    }

    #[test]
    fn birkhoff_formulas_agree() {
        for n in 1..=5 {
            for mu in partitions_up_to(4 * n as u32, n) {
                if mu.parts().first().copied().unwrap_or(0) > 4 {
                    continue;
                }
                for base in [1, 2] {
                    assert_eq!(
                        birkhoff_alpha_multiplicity(&mu, n, base).unwrap(),
                        birkhoff_alpha_support(&mu, n, base).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn nprime_examples() {
        assert_eq!(nprime_closed(&Partition::empty()).unwrap(), Poly::one());
        for a in 0..5u32 {
            let expect = Poly::from_q_coeffs(&vec![1; a as usize + 1]);
            assert_eq!(nprime_closed(&p(&[a])).unwrap(), expect);
        }
        let n11 = nprime_closed(&p(&[1, 1])).unwrap();
        assert_eq!(n11, Poly::from_q_coeffs(&[1, 1, 1, 1]));
        assert_eq!(n11.eval_q_int(2), Some(BigInt::from(15)));
        assert_eq!(nprime_recursive(&[0, 0]), Poly::one());
        assert_eq!(nprime_recursive(&[1]), Poly::from_q_coeffs(&[1, 1]));
        assert_eq!(nprime_recursive(&[2, 1]).coeff_sum(), BigInt::from(6));
        assert_eq!(nprime_recursive(&[1, 2]), nprime_recursive(&[2, 1, 0]));
    }

    #[test]
    fn closed_matches_recursive_and_q_one() {
        for mu in partitions_up_to(16, 4) {
            if mu.parts().first().copied().unwrap_or(0) > 4 {
                continue;
            }
            let c = nprime_closed(&mu).unwrap();
            assert_eq!(c, nprime_recursive(mu.parts()), "mu = {mu}");
            let prod: u64 = mu.parts().iter().map(|&m| m as u64 + 1).product();
            assert_eq!(c.coeff_sum(), BigInt::from(prod));
            assert_eq!(nprime_closed_padded(&mu, mu.len() + 1).unwrap(), c);
        }
    }

    #[test]
    fn aggregate() {
        assert_eq!(n_aggregate(&Partition::empty(), 2).unwrap(), Poly::one());
        assert_eq!(n_aggregate(&p(&[1]), 1).unwrap(), Poly::from_q_coeffs(&[1, 1]));
        assert_eq!(n_aggregate(&p(&[1]), 2).unwrap(), &Poly::from_q_coeffs(&[1, 1]) * &Poly::from_q_coeffs(&[1, 0, 1]));
    }
}
