//! The reduced zeta function `zeta(q -> 1)` and its combinatorial models.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinat::{brenti_b, eulerian_a};
use crate::error::{guard, Error, Result};
use crate::exactalg::{FactoredRational, Poly, SignedMonomial};

pub const REDUCED_BOUND: usize = 8;
pub const REDUCED_C_BOUND: usize = 20;

/// `B_n(T^{n+1}, -T) / ((1-T)^{2n} (1-T^{n+1})^{n+1})`.
pub fn reduced_zeta_brenti(n: usize) -> Result<FactoredRational> {
    guard("n for the reduced zeta function", n, REDUCED_BOUND)?;
    let table = brenti_b(n)?;
    let mut num = Poly::zero();
    for (des, row) in table.iter().enumerate() {
        for (neg, &c) in row.iter().enumerate() {
            let c = if neg % 2 == 0 { BigInt::from(c) } else { -BigInt::from(c) };
            num.add_term(c, 0, ((n + 1) * des + neg) as u32);
        }
    }
    Ok(FactoredRational::new(num, SignedMonomial::ONE, [(0, 1, 2 * n as u32), (0, n as u32 + 1, n as u32 + 1)]))
}

/// `sum_d binom(n, d) A_d(T^{n+1}) / ((1-T)^{2n-d} (1-T^{n+1})^{d+1})`.
pub fn reduced_zeta_eulerian(n: usize) -> Result<FactoredRational> {
    guard("n for the reduced zeta function", n, REDUCED_BOUND)?;
    let mut binom = BigInt::one();
    let mut items = Vec::with_capacity(n + 1);
    for d in 0..=n {
        let a = eulerian_a(d)?;
        let num = Poly::from_terms(a.iter().enumerate().map(|(k, &c)| (&binom * c, 0, ((n + 1) * k) as u32)));
        let den = [(0, 1, (2 * n - d) as u32), (0, n as u32 + 1, d as u32 + 1)];
        items.push(FactoredRational::new(num, SignedMonomial::ONE, den));
        binom = binom * (n - d) / (d + 1);
    }
    Ok(FactoredRational::sum(&items))
}

/// Series through `T^order` of `sum_{k>=0} T^k f_k(T)^n` with
/// `f_k = sum_{m>=k} (m+1) T^m`.
pub fn reduced_cone_series(n: usize, order: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); order + 1];
    for k in 0..=order {
        let mut f = vec![BigInt::zero(); order + 1];
        for (m, c) in f.iter_mut().enumerate().skip(k) {
            *c = BigInt::from(m + 1);
        }
        let mut pw = vec![BigInt::zero(); order + 1];
        pw[0] = BigInt::one();
        for _ in 0..n {
            let mut next = vec![BigInt::zero(); order + 1];
            for (i, a) in pw.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
                for (j, b) in f.iter().enumerate().take(order + 1 - i) {
                    next[i + j] += a * b;
                }
            }
            pw = next;
        }
        for (i, c) in pw.into_iter().enumerate().take(order + 1 - k) {
            out[i + k] += c;
        }
    }
    out
}

/// The reduced zeta function over `(1-T)^n (1-T^{n+1})^{n+1}`.
pub fn reduced_zeta(n: usize) -> Result<FactoredRational> {
    let f = reduced_zeta_brenti(n)?;
    let den = [(0, 1, n as u32), (0, n as u32 + 1, n as u32 + 1)];
    let num = f.numerator_over(&den).ok_or(Error::NonPolynomialReduction)?;
    Ok(FactoredRational::new(num, SignedMonomial::ONE, den))
}

/// `c_n = sum_{k=0}^n binom(n, k) k! / (n+1)^{k+1}`.
pub fn reduced_c(n: usize) -> Result<BigRational> {
    guard("n for the constant c_n", n, REDUCED_C_BOUND)?;
    let base = BigInt::from(n + 1);
    let mut term = BigInt::one(); // n! / (n-k)!
    let mut s = BigRational::zero();
    for k in 0..=n {
        s += BigRational::new(term.clone(), base.pow(k as u32 + 1));
        term *= n - k;
    }
    Ok(s)
}

/// `c_n` as `P_n(1) / (n+1)^{n+1}` with `P_n` the numerator of
/// [`reduced_zeta`].
pub fn reduced_c_limit(n: usize) -> Result<BigRational> {
    let p = reduced_zeta(n)?.numerator().coeff_sum();
    Ok(BigRational::new(p, BigInt::from(n + 1).pow(n as u32 + 1)))
}
