use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::{power, Poly};
use crate::error::{Error, Result};
use crate::par;

/// `sign * q^e_q * T^e_t`. The `T`-exponent is signed so that the unit of a
/// [`FactoredRational`] can absorb the `T^-d` produced by `T -> T^-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedMonomial {
    pub sign: i8,
    pub e_q: i64,
    pub e_t: i64,
}

impl SignedMonomial {
    pub const ONE: Self = Self { sign: 1, e_q: 0, e_t: 0 };

    pub fn new(sign: i8, e_q: i64, e_t: i64) -> Self {
        assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
        Self { sign, e_q, e_t }
    }

    /// `q^a T^b`.
    pub fn qt(e_q: i64, e_t: i64) -> Self {
        Self::new(1, e_q, e_t)
    }

    pub fn neg(self) -> Self {
        Self { sign: -self.sign, ..self }
    }

    pub fn mul(self, o: Self) -> Self {
        Self::new(self.sign * o.sign, self.e_q + o.e_q, self.e_t + o.e_t)
    }

    pub fn pow(self, k: u32) -> Self {
        let s = if self.sign < 0 && k % 2 == 1 { -1 } else { 1 };
        Self::new(s, self.e_q * k as i64, self.e_t * k as i64)
    }

    /// Multiply by `q^a`.
    pub fn q_shift(self, a: i64) -> Self {
        Self { e_q: self.e_q + a, ..self }
    }

    pub fn is_one(self) -> bool {
        self == Self::ONE
    }

    /// As a polynomial; panics on a negative `T`-exponent.
    pub fn to_poly(self) -> Poly {
        let et = u32::try_from(self.e_t).expect("negative T-exponent in polynomial context");
        Poly::monomial(BigInt::from(self.sign), self.e_q, et)
    }
}

/// Rational function `unit * num / prod (1 - q^a T^b)^mult`.
///
/// Denominator factors are kept as a multiset keyed by `(b, a)`, which is also
/// the display order. Equality is decided by cross-multiplication, so two
/// values compare equal exactly when they denote the same rational function.
#[derive(Clone)]
pub struct FactoredRational {
    num: Poly,
    unit: SignedMonomial,
    den: BTreeMap<(u32, i64), u32>,
}

impl FactoredRational {
    /// Normalizing constructor: `q`-only factors are rewritten with positive
    /// exponent, the unit is folded into the numerator, and any remaining
    /// negative `T`-power is stored in the unit.
    pub fn new(num: Poly, unit: SignedMonomial, den: impl IntoIterator<Item = (i64, u32, u32)>) -> Self {
        let mut unit = unit;
        let mut map = BTreeMap::new();
        for (a, b, m) in den {
            if m == 0 {
                continue;
            }
            assert!(!(a == 0 && b == 0), "denominator factor 1 - q^0 T^0 is zero");
            if b == 0 && a < 0 {
                // 1/(1 - q^a) = -q^-a / (1 - q^-a)
                unit = unit.mul(SignedMonomial::new(-1, -a, 0).pow(m));
                *map.entry((0, -a)).or_insert(0) += m;
            } else {
                *map.entry((b, a)).or_insert(0) += m;
            }
        }
        let mut f = Self { num, unit, den: map };
        f.fold_unit();
        f
    }

    fn fold_unit(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            self.unit = SignedMonomial::ONE;
            return;
        }
        let u = self.unit;
        if u.e_t >= 0 {
            self.num = self.num.shift(u.e_q, u.e_t as u32).scale(&BigInt::from(u.sign));
            self.unit = SignedMonomial::ONE;
        } else {
            self.num = self.num.shift(u.e_q, 0).scale(&BigInt::from(u.sign));
            let v = self.num.t_valuation().unwrap();
            let k = v.min((-u.e_t) as u32);
            self.num = self.num.unshift_t(k);
            self.unit = SignedMonomial::new(1, 0, u.e_t + k as i64);
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::new(p, SignedMonomial::ONE, [])
    }

    pub fn from_monomial(m: SignedMonomial) -> Self {
        Self::new(Poly::one(), m, [])
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    /// `1 / (1 - m)` for a signed monomial `m`. A negative sign uses
    /// `1/(1 + x) = (1 - x)/(1 - x^2)`.
    pub fn geometric(m: SignedMonomial) -> Self {
        Self::binomial_pow(m, -1)
    }

    /// `(1 - m)^k` for any integer `k`.
    pub fn binomial_pow(m: SignedMonomial, k: i32) -> Self {
        assert!(m.e_t >= 0, "negative T-exponent in (1 - m)");
        let (a, b) = (m.e_q, m.e_t as u32);
        if k >= 0 {
            let base = Poly::one() - m.to_poly();
            return Self::from_poly(base.pow(k as u32));
        }
        let k = (-k) as u32;
        if m.sign > 0 {
            Self::new(Poly::one(), SignedMonomial::ONE, [(a, b, k)])
        } else {
            let num = Poly::binomial(a, b).pow(k);
            Self::new(num, SignedMonomial::ONE, [(2 * a, 2 * b, k)])
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn unit(&self) -> SignedMonomial {
        self.unit
    }

    /// Denominator factors as `(a, b, mult)` for `(1 - q^a T^b)^mult`, in
    /// ascending `(b, a)` order.
    pub fn den_factors(&self) -> Vec<(i64, u32, u32)> {
        self.den.iter().map(|(&(b, a), &m)| (a, b, m)).collect()
    }

    pub fn den_degree_t(&self) -> u32 {
        self.den.iter().map(|(&(b, _), &m)| b * m).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn expand_den(&self) -> Poly {
        self.den.iter().fold(Poly::one(), |p, (&(b, a), &m)| p.mul_binomial_pow(a, b, m))
    }

    /// `unit * num` as a polynomial, with the `T`-exponent of the unit
    /// returned separately when negative.
    fn scaled_num(&self) -> (Poly, i64) {
        (self.num.clone(), self.unit.e_t)
    }

    pub fn scale_poly(&self, p: &Poly) -> Self {
        Self { num: &self.num * p, unit: self.unit, den: self.den.clone() }.normalized()
    }

    fn normalized(mut self) -> Self {
        self.fold_unit();
        self
    }

    pub fn mul_monomial(&self, m: SignedMonomial) -> Self {
        let mut f = self.clone();
        f.unit = f.unit.mul(m);
        f.normalized()
    }

    /// Divide by `prod (1 - q^a T^b)^mult`.
    pub fn div_factors(&self, factors: &[(i64, u32, u32)]) -> Self {
        let mut den: Vec<(i64, u32, u32)> = self.den_factors();
        den.extend_from_slice(factors);
        Self::new(self.num.clone(), self.unit, den)
    }

    /// Multiply by `prod (1 - q^a T^b)^mult`, cancelling against the
    /// denominator where possible.
    pub fn mul_factors(&self, factors: &[(i64, u32, u32)]) -> Self {
        let mut f = self.clone();
        for &(a, b, m) in factors {
            let (a, b, sign) = if b == 0 && a < 0 { (-a, 0, true) } else { (a, b, false) };
            for _ in 0..m {
                if sign {
                    f.unit = f.unit.mul(SignedMonomial::new(-1, -a, 0));
                }
                match f.den.get_mut(&(b, a)) {
                    Some(k) => {
                        *k -= 1;
                        if *k == 0 {
                            f.den.remove(&(b, a));
                        }
                    }
                    None => f.num = f.num.mul_binomial(a, b),
                }
            }
        }
        f.normalized()
    }

    /// Cancel denominator factors that divide the numerator exactly.
    pub fn reduce(&self) -> Self {
        let mut num = self.num.clone();
        let mut den = BTreeMap::new();
        for (&(b, a), &m) in &self.den {
            let mut left = m;
            while left > 0 {
                match num.div_binomial(a, b) {
                    Some(qt) => {
                        num = qt;
                        left -= 1;
                    }
                    None => break,
                }
            }
            if left > 0 {
                den.insert((b, a), left);
            }
        }
        Self { num, unit: self.unit, den }.normalized()
    }

    /// Exact numerator of `self` over the given denominator, if it is a
    /// polynomial.
    pub fn numerator_over(&self, factors: &[(i64, u32, u32)]) -> Option<Poly> {
        // 1/prod(factors) normalizes to mono/D with mono = +-q^e.
        let target = Self::new(Poly::one(), SignedMonomial::ONE, factors.iter().copied());
        let f = self.mul_factors(&target.den_factors()).reduce();
        if !f.den.is_empty() || f.unit.e_t < 0 {
            return None;
        }
        let (c, e_q, _) = target.num.terms().next().map(|(c, e, t)| (c.clone(), e, t))?;
        Some(f.num.shift(-e_q, 0).scale(&c))
    }

    /// Sum of many rational functions over the least common multiple of their
    /// factor multisets. The result does not depend on the order of `items`.
    pub fn sum(items: &[FactoredRational]) -> Self {
        if items.is_empty() {
            return Self::zero();
        }
        let mut lcm: BTreeMap<(u32, i64), u32> = BTreeMap::new();
        let mut tmin = 0i64;
        for f in items.iter().filter(|f| !f.is_zero()) {
            for (&k, &m) in &f.den {
                let e = lcm.entry(k).or_insert(0);
                *e = (*e).max(m);
            }
            tmin = tmin.min(f.unit.e_t);
        }
        let lcm_ref = &lcm;
        let num = par::map_reduce(
            items,
            Poly::zero(),
            |f| {
                if f.is_zero() {
                    return Poly::zero();
                }
                let (mut p, et) = f.scaled_num();
                p = p.shift(0, (et - tmin) as u32);
                for (&(b, a), &m) in lcm_ref {
                    let have = f.den.get(&(b, a)).copied().unwrap_or(0);
                    p = p.mul_binomial_pow(a, b, m - have);
                }
                p
            },
            |x, y| x + y,
        );
        Self { num, unit: SignedMonomial::new(1, 0, tmin), den: lcm }.normalized()
    }

    /// Product of many rational functions.
    pub fn product(items: &[FactoredRational]) -> Self {
        items.iter().fold(Self::one(), |a, b| &a * b)
    }

    /// Value equality by cross-multiplication over the common denominator.
    pub fn value_eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }

    /// Substitute `q -> q^-1, T -> T^-1`.
    pub fn invert_qt(&self) -> Self {
        let (p, d) = self.num.invert_qt();
        let mut unit = SignedMonomial::new(self.unit.sign, -self.unit.e_q, -self.unit.e_t - d as i64);
        let mut den = Vec::new();
        for (&(b, a), &m) in &self.den {
            // 1 - q^-a T^-b = -q^-a T^-b (1 - q^a T^b)
            unit = unit.mul(SignedMonomial::new(-1, a, b as i64).pow(m));
            den.push((a, b, m));
        }
        Self::new(p, unit, den)
    }

    /// Substitute `q -> 1`. Fails if a `q`-only factor remains in the
    /// denominator.
    pub fn at_q_one(&self) -> Result<Self> {
        let f = self.reduce();
        if let Some((&(_, a), _)) = f.den.iter().find(|(k, _)| k.0 == 0) {
            return Err(Error::SubstitutionSingular(a));
        }
        let den: Vec<_> = f.den.iter().map(|(&(b, _), &m)| (0, b, m)).collect();
        let unit = SignedMonomial::new(f.unit.sign, 0, f.unit.e_t);
        Ok(Self::new(f.num.at_q_one(), unit, den))
    }

    /// Substitute `T -> m` with `m` a signed monomial with `e_t >= 0`.
    pub fn subst_t(&self, m: SignedMonomial) -> Self {
        assert!(m.e_t >= 0 && self.unit.e_t >= 0);
        let num = self.num.subst_t(m.sign, m.e_q, m.e_t as u32);
        let mut out = Self::from_poly(num);
        let mut den = Vec::new();
        for (&(b, a), &k) in &self.den {
            let x = SignedMonomial::new(1, a, 0).mul(m.pow(b));
            if x.sign > 0 {
                den.push((x.e_q, x.e_t as u32, k));
            } else {
                out = &out * &Self::binomial_pow(x, -(k as i32));
            }
        }
        out.div_factors(&den)
    }

    /// Substitute `q -> q^k`.
    pub fn subst_q_pow(&self, k: i64) -> Self {
        let den: Vec<_> = self.den.iter().map(|(&(b, a), &m)| (a * k, b, m)).collect();
        let u = self.unit;
        Self::new(self.num.subst_q_pow(k), SignedMonomial::new(u.sign, u.e_q * k, u.e_t), den)
    }

    /// Coefficients of `T^0..T^order` of the power series at `T = 0`.
    pub fn series_in_t(&self, order: u32) -> Result<Vec<Poly>> {
        if self.unit.e_t < 0 {
            return Err(Error::NotRegularAtZero);
        }
        let f = self.reduce();
        if let Some((&(_, a), _)) = f.den.iter().find(|(k, _)| k.0 == 0) {
            return Err(Error::NonPolynomialCoefficient(a));
        }
        let mut acc = f.num.truncate_t(order);
        for (&(b, a), &m) in &f.den {
            let mut geo = Poly::zero();
            let mut k = 0u32;
            while k * b <= order {
                geo.add_term(BigInt::one(), a * k as i64, k * b);
                k += 1;
            }
            for _ in 0..m {
                acc = acc.mul_trunc(&geo, order);
            }
        }
        Ok(acc.t_coeffs(order))
    }

    pub fn to_plain(&self) -> String {
        self.render(false)
    }

    pub fn to_latex(&self) -> String {
        self.render(true)
    }

    fn render(&self, latex: bool) -> String {
        let minus = if latex { "-" } else { "\u{2212}" };
        let num = if latex { self.num.to_latex() } else { self.num.to_plain() };
        let mut num = if self.num.len() > 1 && !self.den.is_empty() && !latex { format!("({num})") } else { num };
        if self.unit.e_t != 0 {
            let t = power("T", self.unit.e_t, latex);
            num = if self.num.len() > 1 {
                format!("{t} ({num})")
            } else if self.num.is_one() {
                t
            } else {
                format!("{num} {t}")
            };
        }
        if self.den.is_empty() {
            return num;
        }
        let mut den = String::new();
        for (&(b, a), &m) in &self.den {
            let mut x = Vec::new();
            if a != 0 {
                x.push(power("q", a, latex));
            }
            if b != 0 {
                x.push(power("T", b as i64, latex));
            }
            den.push_str(&format!("(1 {minus} {})", x.join(" ")));
            if m > 1 {
                den.push_str(&if latex { format!("^{{{m}}}") } else { format!("^{m}") });
            }
        }
        if latex {
            format!("\\frac{{{num}}}{{{den}}}")
        } else if self.den.len() == 1 && self.den.values().all(|&m| m == 1) {
            format!("{num} / {den}")
        } else {
            format!("{num} / ({den})")
        }
    }
}

impl PartialEq for FactoredRational {
    fn eq(&self, other: &Self) -> bool {
        self.value_eq(other)
    }
}

impl Eq for FactoredRational {}

impl fmt::Debug for FactoredRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FactoredRational({})", self.to_plain())
    }
}

impl fmt::Display for FactoredRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_plain())
    }
}

impl<'a> Mul<&'a FactoredRational> for &'a FactoredRational {
    type Output = FactoredRational;
    fn mul(self, rhs: &FactoredRational) -> FactoredRational {
        if self.is_zero() || rhs.is_zero() {
            return FactoredRational::zero();
        }
        let mut den = self.den.clone();
        for (&k, &m) in &rhs.den {
            *den.entry(k).or_insert(0) += m;
        }
        FactoredRational { num: &self.num * &rhs.num, unit: self.unit.mul(rhs.unit), den }.normalized()
    }
}

impl Mul for FactoredRational {
    type Output = FactoredRational;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<'a> Add<&'a FactoredRational> for &'a FactoredRational {
    type Output = FactoredRational;
    fn add(self, rhs: &FactoredRational) -> FactoredRational {
        FactoredRational::sum(&[self.clone(), rhs.clone()])
    }
}

impl Add for FactoredRational {
    type Output = FactoredRational;
    fn add(self, rhs: Self) -> Self {
        FactoredRational::sum(&[self, rhs])
    }
}

impl Neg for FactoredRational {
    type Output = FactoredRational;
    fn neg(self) -> Self {
        FactoredRational { num: -self.num, ..self }
    }
}

impl Neg for &FactoredRational {
    type Output = FactoredRational;
    fn neg(self) -> FactoredRational {
        -self.clone()
    }
}

impl<'a> Sub<&'a FactoredRational> for &'a FactoredRational {
    type Output = FactoredRational;
    fn sub(self, rhs: &FactoredRational) -> FactoredRational {
        FactoredRational::sum(&[self.clone(), -rhs])
    }
}

impl Sub for FactoredRational {
    type Output = FactoredRational;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl From<Poly> for FactoredRational {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}

impl Zero for FactoredRational {
    fn zero() -> Self {
        FactoredRational::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeta1() -> FactoredRational {
        FactoredRational::new(Poly::binomial(3, 3), SignedMonomial::ONE, [(0, 1, 1), (1, 1, 1), (3, 2, 1), (2, 2, 1)])
    }

    #[test]
    fn equality_by_cross_multiplication() {
        // (1 - qT)/(1 - q^2T^2) = 1/(1 + qT)
        let a = FactoredRational::new(Poly::binomial(1, 1), SignedMonomial::ONE, [(2, 2, 1)]);
        let b = FactoredRational::geometric(SignedMonomial::new(-1, 1, 1));
        assert_eq!(a, b);
        let plus = Poly::from_i64_terms(&[(1, 0, 0), (1, 1, 1)]);
        assert_eq!(a.scale_poly(&plus), FactoredRational::one());
        assert_ne!(a, FactoredRational::one());
    }

    #[test]
    fn invert_geometric() {
        let f = FactoredRational::new(Poly::one(), SignedMonomial::ONE, [(1, 1, 1)]);
        let g = f.invert_qt();
        let expected = FactoredRational::new(Poly::one(), SignedMonomial::new(-1, 1, 1), [(1, 1, 1)]);
        assert_eq!(g, expected);
        assert_eq!(g.to_plain(), "\u{2212}q T / (1 \u{2212} q T)");
    }

    #[test]
    fn q_to_one() {
        let r = zeta1().at_q_one().unwrap();
        let expected = FactoredRational::new(
            Poly::from_i64_terms(&[(1, 0, 0), (1, 0, 1), (1, 0, 2)]),
            SignedMonomial::ONE,
            [(0, 1, 1), (0, 2, 2)],
        );
        assert_eq!(r, expected);
        let bad = FactoredRational::new(Poly::one(), SignedMonomial::ONE, [(2, 0, 1)]);
        assert_eq!(bad.at_q_one(), Err(Error::SubstitutionSingular(2)));
        assert_eq!(FactoredRational::one().at_q_one().unwrap(), FactoredRational::one());
        assert_eq!(FactoredRational::one().invert_qt(), FactoredRational::one());
    }

    #[test]
    fn series() {
        let f = FactoredRational::new(Poly::one(), SignedMonomial::ONE, [(1, 1, 1)]);
        assert_eq!(f.series_in_t(2).unwrap(), vec![Poly::one(), Poly::q_pow(1), Poly::q_pow(2)]);
        let s = zeta1().series_in_t(2).unwrap();
        assert_eq!(s[1], Poly::from_q_coeffs(&[1, 1]));
        assert_eq!(s[2], Poly::from_q_coeffs(&[1, 1, 2, 1]));
        let id = FactoredRational::new(Poly::binomial(0, 1), SignedMonomial::ONE, [(0, 1, 1)]);
        assert_eq!(id.series_in_t(3).unwrap(), vec![Poly::one(), Poly::zero(), Poly::zero(), Poly::zero()]);
        let pole = FactoredRational::from_monomial(SignedMonomial::new(1, 0, -1));
        assert_eq!(pole.series_in_t(1), Err(Error::NotRegularAtZero));
    }

    #[test]
    fn display_and_reduce() {
        assert_eq!(
            zeta1().to_plain(),
            "(1 \u{2212} q^3 T^3) / ((1 \u{2212} T)(1 \u{2212} q T)(1 \u{2212} q^2 T^2)(1 \u{2212} q^3 T^2))"
        );
        let f = FactoredRational::new(Poly::binomial(3, 3), SignedMonomial::ONE, [(1, 1, 2)]).reduce();
        assert_eq!(f.den_factors(), vec![(1, 1, 1)]);
        assert_eq!(f.numerator(), &Poly::from_i64_terms(&[(1, 0, 0), (1, 1, 1), (1, 2, 2)]));
        let over = zeta1().numerator_over(&[(0, 1, 1), (1, 1, 1), (2, 2, 1), (3, 2, 1), (5, 5, 1)]).unwrap();
        assert_eq!(over, Poly::binomial(3, 3).mul_binomial(5, 5));
    }

    #[test]
    fn negative_q_factor_normalized() {
        let f = FactoredRational::new(Poly::one(), SignedMonomial::ONE, [(-1, 0, 1)]);
        assert_eq!(f.den_factors(), vec![(1, 0, 1)]);
        assert_eq!(f.numerator(), &Poly::from_i64_terms(&[(-1, 1, 0)]));
    }
}
