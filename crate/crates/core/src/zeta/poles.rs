//! Real poles of the local zeta function at a fixed prime, as functions of
//! `s` with `T = p^-s`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use serde::Serialize;

use super::{a_nr, zeta_thm_b};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pole {
    /// `s = num / den` in lowest terms.
    pub num: i64,
    pub den: i64,
    pub order: u32,
}

impl Pole {
    pub fn s(&self) -> Ratio<i64> {
        Ratio::new(self.num, self.den)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PoleReport {
    pub n: usize,
    pub p: u64,
    pub poles: Vec<Pole>,
}

/// `{0, .., 2n-1}` together with `a_{n,r} / (n+1)` for `r = 0..n`.
pub fn pole_candidates(n: usize) -> Vec<Ratio<i64>> {
    let mut v: Vec<Ratio<i64>> = (0..2 * n as i64).map(Ratio::from_integer).collect();
    v.extend((0..=n).map(|r| Ratio::new(a_nr(n, r), n as i64 + 1)));
    v.sort();
    v.dedup();
    v
}

/// Number of times `1 - c T^v` divides `f` (coefficients of `T^0, T^1, ..`).
fn divisibility(mut f: Vec<BigRational>, c: &BigRational, v: usize) -> u32 {
    let mut k = 0;
    loop {
        while f.last().is_some_and(|x| x.is_zero()) {
            f.pop();
        }
        if f.len() <= v {
            return k;
        }
        // f = (1 - c T^v) g  iff  g_i = f_i + c g_{i-v} and the top v
        // coefficients of f equal -c g_{i-v}
        let len = f.len() - v;
        let mut g: Vec<BigRational> = Vec::with_capacity(len);
        for i in 0..len {
            let prev = if i >= v { &g[i - v] * c } else { BigRational::zero() };
            g.push(&f[i] + prev);
        }
        let top = |i: usize| {
            let own = if i < len { g[i].clone() } else { BigRational::zero() };
            let shifted = if i >= v && i - v < len { &g[i - v] * c } else { BigRational::zero() };
            own - shifted
        };
        if !(len..f.len()).all(|i| f[i] == top(i)) {
            return k;
        }
        f = g;
        k += 1;
    }
}

/// Real poles and their orders at each prime in `primes`.
pub fn pole_analysis(n: usize, primes: &[u64]) -> Result<Vec<PoleReport>> {
    let z = zeta_thm_b(n)?.reduce();
    let mut groups: BTreeMap<(i64, i64), u32> = BTreeMap::new();
    for (a, b, m) in z.den_factors() {
        if b == 0 {
            continue;
        }
        let g = a.gcd(&(b as i64));
        let key = if a == 0 { (0, 1) } else { (a / g, b as i64 / g) };
        *groups.entry(key).or_default() += m;
    }
    let unit = z.unit();
    let mut out = Vec::new();
    for &p in primes {
        let mut coeffs = z.numerator().eval_q(p as i64);
        let scale = BigRational::from_integer(BigInt::from(p).pow(unit.e_q.unsigned_abs() as u32));
        for c in coeffs.iter_mut() {
            *c = if unit.e_q >= 0 { &*c * &scale } else { &*c / &scale };
        }
        let mut poles = Vec::new();
        for (&(u, v), &m) in &groups {
            let c = BigRational::from_integer(BigInt::from(p).pow(u as u32));
            let c = if u >= 0 { c } else { BigRational::one() / c };
            let cancel = divisibility(coeffs.clone(), &c, v as usize);
            if m > cancel {
                poles.push(Pole { num: u, den: v, order: m - cancel });
            }
        }
        out.push(PoleReport { n, p, poles });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Ratio<i64> {
        Ratio::new(a, b)
    }

    #[test]
    fn n1_poles() {
        for rep in pole_analysis(1, &[2, 3]).unwrap() {
            let s: Vec<_> = rep.poles.iter().map(|p| (p.s(), p.order)).collect();
            assert_eq!(s, vec![(r(0, 1), 1), (r(1, 1), 1), (r(3, 2), 1)]);
        }
    }

    #[test]
    fn candidates() {
        assert_eq!(pole_candidates(1), vec![r(0, 1), r(1, 1), r(3, 2)]);
        assert_eq!(pole_candidates(2).len(), 6);
    }

    #[test]
    fn double_pole_n3() {
        let rep = &pole_analysis(3, &[2]).unwrap()[0];
        let doubles: Vec<_> = rep.poles.iter().filter(|p| p.order > 1).collect();
        assert_eq!(doubles.len(), 1);
        assert_eq!((doubles[0].s(), doubles[0].order), (r(3, 1), 2));
    }

    #[test]
    fn divisibility_counts() {
        let f = |v: &[i64]| v.iter().map(|&x| BigRational::from_integer(x.into())).collect::<Vec<_>>();
        let two = BigRational::from_integer(2.into());
        // (1 - 2T)^2 = 1 - 4T + 4T^2
        assert_eq!(divisibility(f(&[1, -4, 4]), &two, 1), 2);
        assert_eq!(divisibility(f(&[1, 0, -2]), &two, 2), 1);
        assert_eq!(divisibility(f(&[1, 1]), &two, 1), 0);
    }
}
