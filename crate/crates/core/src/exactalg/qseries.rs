use num_bigint::BigInt;

use super::poly::Poly;
use super::rational::{FactoredRational, SignedMonomial};

/// `(a; q^step)_m`. For `m >= 0` this is `prod_{i<m} (1 - a q^{step*i})`; for
/// `m < 0` it is `1 / (a q^{step*m}; q^step)_{-m}`.
pub fn qpochhammer(a: SignedMonomial, step: i64, m: i64) -> FactoredRational {
    if m >= 0 {
        let p = (0..m).map(|i| Poly::one() - a.q_shift(step * i).to_poly()).product();
        return FactoredRational::from_poly(p);
    }
    let items: Vec<FactoredRational> = (0..-m)
        .map(|i| {
            let x = a.q_shift(step * (m + i));
            assert!(
                !(x.e_q == 0 && x.e_t == 0),
                "(a;q)_m with m < 0 has a factor 1 - (+-1), which is not invertible over Z"
            );
            FactoredRational::geometric(x)
        })
        .collect();
    FactoredRational::product(&items)
}

/// `[r]_Y = 1 + Y + ... + Y^{r-1}` with `Y = q^y`.
pub fn q_int(r: u32, y: i64) -> Poly {
    Poly::from_terms((0..r).map(|i| (BigInt::from(1), y * i as i64, 0)))
}

/// `[r]_Y! = [1]_Y [2]_Y ... [r]_Y`.
pub fn q_factorial(r: u32, y: i64) -> Poly {
    (1..=r).map(|i| q_int(i, y)).product()
}

/// Gaussian binomial `binom(n, r)_Y` with `Y = q^y`; zero outside `0 <= r <= n`.
pub fn gauss_binom(n: u32, r: i64, y: i64) -> Poly {
    if r < 0 || r > n as i64 {
        return Poly::zero();
    }
    let r = r as u32;
    let r = r.min(n - r);
    if y == 0 {
        let mut c = BigInt::from(1);
        for i in 0..r {
            c = c * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        return Poly::monomial(c, 0, 0);
    }
    // prod_{i=1}^{r} (1 - Y^{n-r+i}) / (1 - Y^i), divided out exactly.
    let mut num = Poly::one();
    for i in 1..=r {
        num = num.mul_binomial(y * (n - r + i) as i64, 0);
    }
    for i in 1..=r {
        num = num.div_binomial(y * i as i64, 0).expect("Gaussian binomial quotient is exact");
    }
    num
}

/// Gaussian multinomial `binom(n, I)_Y` for `I` a subset of `{0..n}`, as the
/// telescoping product `binom(n, i_l) binom(i_l, i_{l-1}) ... binom(i_2, i_1)`.
pub fn gauss_multinom(n: u32, subset: &[u32], y: i64) -> Poly {
    let mut s: Vec<u32> = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    assert!(s.iter().all(|&i| i <= n), "subset must lie in [n]_0");
    let mut out = Poly::one();
    let mut top = n;
    for &i in s.iter().rev() {
        out = &out * &gauss_binom(top, i as i64, y);
        top = i;
    }
    out
}
