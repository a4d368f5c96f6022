use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Polynomial in `T` whose coefficients are Laurent polynomials in `q` with
/// integer coefficients. Terms are keyed by `(e_T, e_q)`, so iteration order is
/// the serialization order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BivariatePolynomial {
    terms: BTreeMap<(u32, i64), BigInt>,
}

pub type Poly = BivariatePolynomial;

impl BivariatePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(BigInt::from(c), 0, 0)
    }

    pub fn monomial(coeff: BigInt, e_q: i64, e_t: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert((e_t, e_q), coeff);
        }
        Self { terms }
    }

    /// `q^e`.
    pub fn q_pow(e: i64) -> Self {
        Self::monomial(BigInt::one(), e, 0)
    }

    /// `1 - q^a T^b`.
    pub fn binomial(a: i64, b: u32) -> Self {
        let mut p = Self::one();
        p.add_term(BigInt::from(-1), a, b);
        p
    }

    /// Build from `(coeff, e_q, e_T)` triples; repeated exponents are summed.
    pub fn from_terms<I: IntoIterator<Item = (BigInt, i64, u32)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (c, eq, et) in it {
            p.add_term(c, eq, et);
        }
        p
    }

    pub fn from_i64_terms(terms: &[(i64, i64, u32)]) -> Self {
        Self::from_terms(terms.iter().map(|&(c, eq, et)| (BigInt::from(c), eq, et)))
    }

    /// Univariate polynomial in `q` from a coefficient list starting at `q^0`.
    pub fn from_q_coeffs(coeffs: &[i64]) -> Self {
        Self::from_terms(coeffs.iter().enumerate().map(|(i, &c)| (BigInt::from(c), i as i64, 0)))
    }

    pub fn add_term(&mut self, c: BigInt, e_q: i64, e_t: u32) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((e_t, e_q)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add_term_ref(&mut self, c: &BigInt, e_q: i64, e_t: u32) {
        use std::collections::btree_map::Entry;
        match self.terms.entry((e_t, e_q)) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `(coeff, e_q, e_T)` in ascending `(e_T, e_q)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&BigInt, i64, u32)> + '_ {
        self.terms.iter().map(|(&(et, eq), c)| (c, eq, et))
    }

    pub fn coeff(&self, e_q: i64, e_t: u32) -> BigInt {
        self.terms.get(&(e_t, e_q)).cloned().unwrap_or_default()
    }

    pub fn t_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|k| k.0)
    }

    pub fn t_valuation(&self) -> Option<u32> {
        self.terms.keys().next().map(|k| k.0)
    }

    pub fn q_range(&self) -> Option<(i64, i64)> {
        let mut it = self.terms.keys().map(|k| k.1);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    /// True when every term has `e_T = 0`.
    pub fn is_q_only(&self) -> bool {
        self.terms.keys().all(|k| k.0 == 0)
    }

    /// The coefficient of `T^d`, a Laurent polynomial in `q`.
    pub fn t_coeff(&self, d: u32) -> Poly {
        Poly {
            terms: self.terms.range((d, i64::MIN)..=(d, i64::MAX)).map(|(&(_, eq), c)| ((0, eq), c.clone())).collect(),
        }
    }

    /// Coefficients of `T^0 .. T^order`.
    pub fn t_coeffs(&self, order: u32) -> Vec<Poly> {
        (0..=order).map(|d| self.t_coeff(d)).collect()
    }

    pub fn truncate_t(&self, order: u32) -> Poly {
        Poly { terms: self.terms.range(..=(order, i64::MAX)).map(|(k, c)| (*k, c.clone())).collect() }
    }

    /// Multiply by `c q^a T^b`.
    pub fn shift(&self, a: i64, b: u32) -> Poly {
        Poly { terms: self.terms.iter().map(|(&(et, eq), c)| ((et + b, eq + a), c.clone())).collect() }
    }

    /// Divide by `T^b`; panics if some term has `e_T < b`.
    pub fn unshift_t(&self, b: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(&(et, eq), c)| ((et.checked_sub(b).expect("T-degree underflow"), eq), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    /// Multiply by `1 - q^a T^b`.
    pub fn mul_binomial(&self, a: i64, b: u32) -> Poly {
        let mut out = self.clone();
        for (&(et, eq), c) in &self.terms {
            out.add_term(-c, eq + a, et + b);
        }
        out
    }

    /// `self * (1 - q^a T^b)^m`.
    pub fn mul_binomial_pow(&self, a: i64, b: u32, m: u32) -> Poly {
        (0..m).fold(self.clone(), |p, _| p.mul_binomial(a, b))
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Product truncated at `T^order`.
    pub fn mul_trunc(&self, rhs: &Poly, order: u32) -> Poly {
        let mut out = Poly::zero();
        for (&(et1, eq1), c1) in &self.terms {
            if et1 > order {
                break;
            }
            for (&(et2, eq2), c2) in &rhs.terms {
                if et1 + et2 > order {
                    break;
                }
                out.add_term(c1 * c2, eq1 + eq2, et1 + et2);
            }
        }
        out
    }

    /// Exact quotient by `1 - q^a T^b` if it divides; `b = 0` divides
    /// coefficientwise in the Laurent ring `Z[q, q^-1]`.
    pub fn div_binomial(&self, a: i64, b: u32) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if b == 0 {
            return self.div_q_binomial(a);
        }
        // Long division in ascending T: quotient term c q^e T^d forces the
        // remainder term -c q^{e+a} T^{d+b}.
        let deg = self.t_degree().unwrap();
        if deg < b {
            return None;
        }
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((&(et, eq), _)) = rem.terms.iter().next() {
            if et + b > deg {
                return None;
            }
            let c = rem.terms.remove(&(et, eq)).unwrap();
            rem.add_term(c.clone(), eq + a, et + b);
            quot.terms.insert((et, eq), c);
        }
        Some(quot)
    }

    fn div_q_binomial(&self, a: i64) -> Option<Poly> {
        if a == 0 {
            return None;
        }
        // (1 - q^a) with a < 0 equals -q^a (1 - q^-a).
        if a < 0 {
            return self.div_q_binomial(-a).map(|p| p.shift(-a, 0).scale(&BigInt::from(-1)));
        }
        let mut quot = Poly::zero();
        let mut rem = self.clone();
        while let Some((&(et, eq), _)) = rem.terms.iter().next() {
            let hi = rem.terms.range((et, i64::MIN)..=(et, i64::MAX)).next_back().map(|k| k.0 .1).unwrap();
            if eq + a > hi {
                return None;
            }
            let c = rem.terms.remove(&(et, eq)).unwrap();
            rem.add_term(c.clone(), eq + a, et);
            quot.terms.insert((et, eq), c);
        }
        Some(quot)
    }

    /// Exact quotient by `1 - q^a T^b` for `b >= 1`, or `None` if the
    /// binomial does not divide.
    pub fn divide_out_factor(&self, a: i64, b: u32) -> Option<Poly> {
        assert!(b >= 1, "divide_out_factor needs a positive T-exponent");
        self.div_binomial(a, b)
    }

    /// Substitute `q -> q^-1, T -> T^-1` and multiply by `T^d` with `d` the
    /// T-degree; returns the polynomial and `d`.
    pub fn invert_qt(&self) -> (Poly, u32) {
        let d = self.t_degree().unwrap_or(0);
        let p = Poly { terms: self.terms.iter().map(|(&(et, eq), c)| ((d - et, -eq), c.clone())).collect() };
        (p, d)
    }

    /// Substitute `q -> 1`.
    pub fn at_q_one(&self) -> Poly {
        let mut out = Poly::zero();
        for (&(et, _), c) in &self.terms {
            out.add_term_ref(c, 0, et);
        }
        out
    }

    /// Substitute `T -> sign q^a T^b`.
    pub fn subst_t(&self, sign: i8, a: i64, b: u32) -> Poly {
        let mut out = Poly::zero();
        for (&(et, eq), c) in &self.terms {
            let c = if sign < 0 && et % 2 == 1 { -c } else { c.clone() };
            out.add_term(c, eq + a * et as i64, b * et);
        }
        out
    }

    /// Substitute `q -> q^k` (k may be negative).
    pub fn subst_q_pow(&self, k: i64) -> Poly {
        Poly { terms: self.terms.iter().map(|(&(et, eq), c)| ((et, eq * k), c.clone())).collect() }
    }

    /// Evaluate at an integer `q`, returning the coefficients of `T^0..T^deg`.
    pub fn eval_q(&self, q: i64) -> Vec<BigRational> {
        let deg = self.t_degree().map_or(0, |d| d as usize + 1);
        let mut out = vec![BigRational::zero(); deg];
        let qb = BigInt::from(q);
        for (&(et, eq), c) in &self.terms {
            let pw = BigRational::from_integer(qb.pow(eq.unsigned_abs() as u32));
            let v = if eq >= 0 {
                BigRational::from_integer(c.clone()) * pw
            } else {
                BigRational::from_integer(c.clone()) / pw
            };
            out[et as usize] += v;
        }
        out
    }

    /// Evaluate a `q`-only polynomial at an integer `q`; `None` if the value
    /// is not an integer.
    pub fn eval_q_int(&self, q: i64) -> Option<BigInt> {
        let v = self.eval_q(q);
        let total = v.into_iter().fold(BigRational::zero(), |a, b| a + b);
        total.is_integer().then(|| total.to_integer())
    }

    /// Evaluate at `q = 1`, `T = 1`.
    pub fn coeff_sum(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn to_f64_at(&self, q: f64, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(et, eq), c)| c.to_f64().unwrap_or(f64::NAN) * q.powi(eq as i32) * t.powi(et as i32))
            .sum()
    }

    /// Plain-text rendering, e.g. `1 − q^3 T^3`.
    pub fn to_plain(&self) -> String {
        render(self, "q", "T", false)
    }

    pub fn to_latex(&self) -> String {
        render(self, "q", "T", true)
    }

    /// Plain-text rendering with the variables renamed.
    pub fn to_plain_in(&self, x: &str, y: &str) -> String {
        render(self, x, y, false)
    }
}

fn render(p: &Poly, x: &str, y: &str, latex: bool) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let minus = if latex { "-" } else { "\u{2212}" };
    let mut s = String::new();
    for (i, (c, eq, et)) in p.terms().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                s.push_str(minus);
            }
        } else {
            s.push_str(if neg { " " } else { " + " });
            if neg {
                s.push_str(minus);
                s.push(' ');
            }
        }
        let mag = c.abs();
        let mut parts: Vec<String> = Vec::new();
        if !mag.is_one() || (eq == 0 && et == 0) {
            parts.push(mag.to_string());
        }
        if eq != 0 {
            parts.push(power(x, eq, latex));
        }
        if et != 0 {
            parts.push(power(y, et as i64, latex));
        }
        s.push_str(&parts.join(" "));
    }
    s
}

pub(crate) fn power(var: &str, e: i64, latex: bool) -> String {
    match (e, latex) {
        (1, _) => var.to_string(),
        (_, true) => format!("{var}^{{{e}}}"),
        (_, false) => format!("{var}^{e}"),
    }
}

impl fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_plain())
    }
}

impl fmt::Debug for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.to_plain())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (&(et, eq), c) in &rhs.terms {
            self.add_term_ref(c, eq, et);
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (&(et, eq), c) in &rhs.terms {
            self.add_term(-c, eq, et);
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        if self.len() < rhs.len() {
            return rhs + self;
        }
        self += &rhs;
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= &rhs;
        self
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -self.clone()
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let (small, big) = if self.len() <= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = Poly::zero();
        for (&(et1, eq1), c1) in &small.terms {
            if c1.is_one() {
                for (&(et2, eq2), c2) in &big.terms {
                    out.add_term_ref(c2, eq1 + eq2, et1 + et2);
                }
            } else {
                for (&(et2, eq2), c2) in &big.terms {
                    out.add_term(c1 * c2, eq1 + eq2, et1 + et2);
                }
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for Poly {
    fn product<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::one(), |a, b| &a * &b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(t: &[(i64, i64, u32)]) -> Poly {
        Poly::from_i64_terms(t)
    }

    #[test]
    fn additive_inverse_is_empty() {
        let s = &Poly::one() + &Poly::constant(-1);
        assert!(s.is_zero());
        assert_eq!(s.len(), 0);
    }

    #[test]
    fn difference_of_squares() {
        let a = p(&[(1, 0, 0), (-1, 1, 1)]);
        let b = p(&[(1, 0, 0), (1, 1, 1)]);
        assert_eq!(&a * &b, p(&[(1, 0, 0), (-1, 2, 2)]));
    }

    #[test]
    fn cube_factorization() {
        let geo = p(&[(1, 0, 0), (1, 1, 1), (1, 2, 2)]);
        assert_eq!(geo.mul_binomial(1, 1), Poly::binomial(3, 3));
    }

    #[test]
    fn divide_out() {
        let f = Poly::binomial(3, 3);
        assert_eq!(f.divide_out_factor(1, 1), Some(p(&[(1, 0, 0), (1, 1, 1), (1, 2, 2)])));
        assert_eq!(f.divide_out_factor(2, 1), None);
        let g = &Poly::binomial(4, 3) * &Poly::binomial(0, 1);
        assert_eq!(g.divide_out_factor(4, 3), Some(Poly::binomial(0, 1)));
    }

    #[test]
    fn q_only_division() {
        let f = &Poly::binomial(3, 0) * &p(&[(2, 5, 1), (-1, -4, 0)]);
        assert_eq!(f.div_binomial(3, 0), Some(p(&[(2, 5, 1), (-1, -4, 0)])));
        let g = Poly::binomial(-2, 0).mul_binomial(1, 2);
        assert_eq!(g.div_binomial(-2, 0), Some(Poly::binomial(1, 2)));
        assert_eq!(Poly::binomial(1, 0).div_binomial(2, 0), None);
    }

    #[test]
    fn rendering() {
        assert_eq!(Poly::binomial(3, 3).to_plain(), "1 \u{2212} q^3 T^3");
        assert_eq!(p(&[(2, -1, 1), (1, 0, 0)]).to_plain(), "1 + 2 q^-1 T");
        assert_eq!(Poly::binomial(0, 1).to_latex(), "1 - T");
    }
}
