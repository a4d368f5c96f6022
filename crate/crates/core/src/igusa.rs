//! Igusa functions of types A and B, the type-B residue factorization, and
//! the fibre sums `I_n^{k,r}`, `K_n^{k,r}` built from `E_{k,r}`.
//!
//! Slots are signed monomials `+-q^a T^b`. Identities that hold for
//! independent indeterminates are tested by instantiating the slots at
//! [`generic_slots`].

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;

use crate::combinat::{apply_signs, coset_reps, coset_stats, fibre_w, permutations, weight_c, Permutation};
use crate::error::{guard, Error, Result};
use crate::exactalg::{gauss_binom, gauss_multinom, q_factorial, FactoredRational, Poly, SignedMonomial};
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AVariant {
    /// Subsets of `[n-1]`, slots `X_1..X_{n-1}`.
    Truncated,
    /// Subsets of `[n]`, slots `X_1..X_n`.
    Plain,
    /// Subsets of `[n]_0`, slots `X_0..X_n`.
    Augmented,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BVariant {
    /// Slots `X_0..X_n`.
    Full,
    /// `(1 - X_n)` times the full function; slots `X_0..X_{n-1}`.
    Truncated,
}

pub const DESCENT_BOUND: usize = 8;
pub const TYPE_B_BOUND: usize = 6;

/// `count` slots `q^{a_i} T^{b_i}` with distinct prime `a_i` and
/// `b_i = 2^i`, offset so that different calls can use disjoint markers.
pub fn generic_slots(count: usize, offset: usize) -> Vec<SignedMonomial> {
    const PRIMES: [i64; 16] = [101, 211, 307, 401, 503, 601, 701, 809, 907, 1009, 1103, 1201, 1301, 1409, 1511, 1601];
    (0..count)
        .map(|i| {
            let j = i + offset;
            SignedMonomial::qt(PRIMES[j % PRIMES.len()] + 1700 * (j / PRIMES.len()) as i64, 1 << j.min(20))
        })
        .collect()
}

fn check_arity(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::ArityMismatch { expected, got });
    }
    Ok(())
}

fn one_minus(x: SignedMonomial) -> Poly {
    Poly::one() - x.to_poly()
}

/// `1 / prod (1 - X_i)`.
fn slot_den(xs: &[SignedMonomial]) -> FactoredRational {
    let items: Vec<FactoredRational> = xs.iter().map(|&x| FactoredRational::geometric(x)).collect();
    FactoredRational::product(&items)
}

fn slot_product(xs: &[SignedMonomial], idx: impl IntoIterator<Item = usize>) -> SignedMonomial {
    idx.into_iter().fold(SignedMonomial::ONE, |m, i| m.mul(xs[i]))
}

/// `sum_I weight(I) prod_{i in I} X_i/(1 - X_i)` with `labels[p]` the index
/// of slot `xs[p]`.
fn subset_sum<W>(labels: &[u32], xs: &[SignedMonomial], weight: W) -> FactoredRational
where
    W: Fn(&[u32]) -> Poly + Sync,
{
    let m = labels.len();
    let masks: Vec<u64> = (0..1u64 << m).collect();
    let num = par::map_reduce(
        &masks,
        Poly::zero(),
        |&mask| {
            let set: Vec<u32> = (0..m).filter(|p| mask >> p & 1 == 1).map(|p| labels[p]).collect();
            let w = weight(&set);
            if w.is_zero() {
                return w;
            }
            let mut t = &w * &slot_product(xs, (0..m).filter(|p| mask >> p & 1 == 1)).to_poly();
            for p in (0..m).filter(|p| mask >> p & 1 == 0) {
                t = &t * &one_minus(xs[p]);
            }
            t
        },
        |a, b| a + b,
    );
    slot_den(xs).scale_poly(&num)
}

/// Type-A Igusa function with `Y = q^y`:
/// `sum_I binom(n, I)_Y prod_{i in I} X_i / (1 - X_i)`.
pub fn igusa_a(n: usize, variant: AVariant, y: i64, xs: &[SignedMonomial]) -> Result<FactoredRational> {
    let labels: Vec<u32> = match variant {
        AVariant::Truncated => (1..n as u32).collect(),
        AVariant::Plain => (1..=n as u32).collect(),
        AVariant::Augmented => (0..=n as u32).collect(),
    };
    check_arity(labels.len(), xs.len())?;
    Ok(subset_sum(&labels, xs, |set| gauss_multinom(n as u32, set, y)))
}

/// Augmented type-A Igusa function from the descent expansion
/// `sum_{g in S_n} Y^{l(g)} prod_{j in Des(g)} X_j / prod_{i=0}^n (1 - X_i)`.
pub fn igusa_a_descent(n: usize, y: i64, xs: &[SignedMonomial]) -> Result<FactoredRational> {
    guard("n for the descent form", n, DESCENT_BOUND)?;
    check_arity(n + 1, xs.len())?;
    let perms = permutations(n);
    let num = par::map_reduce(
        &perms,
        Poly::zero(),
        |g| {
            let m = slot_product(xs, g.descents().into_iter().map(|j| j as usize)).q_shift(y * g.inversions() as i64);
            m.to_poly()
        },
        |a, b| a + b,
    );
    Ok(slot_den(xs).scale_poly(&num))
}

/// `(-Y^n Z; Y^-1)_j = prod_{i<j} (1 + Y^{n-i} Z)`.
pub fn neg_pochhammer(n: usize, y: i64, z: SignedMonomial, j: usize) -> Poly {
    (0..j).map(|i| Poly::one() + z.q_shift(y * (n - i) as i64).to_poly()).product()
}

/// `sum_{g in B_n} Y^{l(g)} Z^{neg(g)} prod_{i in Des_B(g)} X_i`. Only the
/// slots `X_0..X_{n-1}` can occur.
pub fn igusa_b_numerator(n: usize, y: i64, z: SignedMonomial, xs: &[SignedMonomial]) -> Result<Poly> {
    guard("n for type-B Igusa functions", n, TYPE_B_BOUND)?;
    assert!(xs.len() >= n, "need slots X_0..X_(n-1)");
    let perms = permutations(n);
    Ok(par::map_reduce(
        &perms,
        Poly::zero(),
        |p| {
            let mut acc = Poly::zero();
            for mask in 0u32..1 << n {
                let g = apply_signs(p, mask);
                let m = slot_product(xs, g.descents().into_iter().map(|i| i as usize))
                    .mul(z.pow(g.neg()))
                    .q_shift(y * g.length() as i64);
                acc.add_term(BigInt::from(m.sign), m.e_q, m.e_t as u32);
            }
            acc
        },
        |a, b| a + b,
    ))
}

/// Type-B Igusa function in its descent form over `B_n`.
pub fn igusa_b(
    n: usize,
    y: i64,
    z: SignedMonomial,
    xs: &[SignedMonomial],
    variant: BVariant,
) -> Result<FactoredRational> {
    let slots = match variant {
        BVariant::Full => n + 1,
        BVariant::Truncated => n,
    };
    check_arity(slots, xs.len())?;
    let num = igusa_b_numerator(n, y, z, xs)?;
    Ok(slot_den(xs).scale_poly(&num))
}

/// Type-B Igusa function from the subset expansion
/// `sum_I binom(n, I)_Y (-Y^n Z; Y^-1)_{n - min(I u {n})} prod X_i/(1 - X_i)`.
pub fn igusa_b_subset(
    n: usize,
    y: i64,
    z: SignedMonomial,
    xs: &[SignedMonomial],
    variant: BVariant,
) -> Result<FactoredRational> {
    guard("n for type-B Igusa functions", n, TYPE_B_BOUND)?;
    let labels: Vec<u32> = match variant {
        BVariant::Full => (0..=n as u32).collect(),
        BVariant::Truncated => (0..n as u32).collect(),
    };
    check_arity(labels.len(), xs.len())?;
    Ok(subset_sum(&labels, xs, |set| {
        let lo = set.first().copied().unwrap_or(n as u32).min(n as u32) as usize;
        &gauss_multinom(n as u32, set, y) * &neg_pochhammer(n, y, z, n - lo)
    }))
}

/// `lim_{X_m -> 1} (1 - X_m)` of the full type-B function, read off the
/// descent form: the numerator at `X_m = 1` over `prod_{i != m} (1 - X_i)`.
pub fn igusa_b_residue_limit(
    n: usize,
    m: usize,
    y: i64,
    z: SignedMonomial,
    xs: &[SignedMonomial],
) -> Result<FactoredRational> {
    check_arity(n, xs.len())?;
    assert!(m <= n, "m must lie in [n]_0");
    let mut full = xs.to_vec();
    full.insert(m, SignedMonomial::ONE);
    let num = igusa_b_numerator(n, y, z, &full)?;
    Ok(slot_den(xs).scale_poly(&num))
}

/// `m`-th residue of the full type-B function, with `xs` the slots
/// `X_0..X_n` without `X_m`, as
/// `binom(n, m)_Y (-Y^n Z; Y^-1)_{n-m} I^-_{B_m}(X_0..X_{m-1}) I_{n-m}(X_{m+1}..X_n)`.
/// For `n <= 3` the product is compared with the direct limit.
pub fn igusa_b_residue(
    n: usize,
    m: usize,
    y: i64,
    z: SignedMonomial,
    xs: &[SignedMonomial],
) -> Result<FactoredRational> {
    guard("n for type-B Igusa functions", n, TYPE_B_BOUND)?;
    check_arity(n, xs.len())?;
    if m > n {
        return Err(Error::ArityMismatch { expected: n, got: m });
    }
    let scalar = &gauss_binom(n as u32, m as i64, y) * &neg_pochhammer(n, y, z, n - m);
    let b_part = igusa_b(m, y, z, &xs[..m], BVariant::Truncated)?;
    let a_part = igusa_a(n - m, AVariant::Plain, y, &xs[m..])?;
    let res = (&b_part * &a_part).scale_poly(&scalar);
    if n <= 3 {
        let lim = igusa_b_residue_limit(n, m, y, z, xs)?;
        if lim != res {
            return Err(Error::IdentityMismatch(format!("type-B residue n={n}, m={m}")));
        }
    }
    Ok(res)
}

/// `Y_j(r, T) = q^{r(2j+1-r)/2 - 2j^2} T^j`.
pub fn y_slot(j: usize, r: i64, t: SignedMonomial) -> SignedMonomial {
    let j = j as i64;
    t.pow(j as u32).q_shift(r * (2 * j + 1 - r) / 2 - 2 * j * j)
}

/// Roots data of `F_s(x) = (-q^{1-s} x; q^2)_{floor(s/2)}`: exponents `c`
/// with `F_s = prod (1 + q^c x)` for `s >= 0`, or `F_s = 1 / prod (1 + q^c x)`
/// for `s < 0`.
fn f_exponents(s: i64) -> (Vec<i64>, bool) {
    let m = s.div_euclid(2);
    if m >= 0 {
        ((0..m).map(|i| 1 - s + 2 * i).collect(), false)
    } else {
        ((1..=-m).map(|i| 1 - s - 2 * i).collect(), true)
    }
}

/// Exponents `c` with `E_{k,r}(x) = prod (1 + q^c x)`, for `r` in
/// `[0, 2k+1]`.
pub fn e_exponents(k: usize, r: i64) -> Vec<i64> {
    let top = 2 * k as i64 + 1;
    assert!((0..=top).contains(&r), "E_(k,r) is a polynomial only for r in [0, 2k+1]");
    let mut v = f_exponents(r).0;
    v.extend(f_exponents(top - r).0);
    v
}

/// Coefficients of `x^0..x^order` of `E_{k,r}(x) = F_r(x) F_{2k+1-r}(x)`
/// for any integer `r`, expanded as a power series in `x`.
pub fn epsilon_series(k: usize, r: i64, order: usize) -> Vec<Poly> {
    let mut c = vec![Poly::zero(); order + 1];
    c[0] = Poly::one();
    for s in [r, 2 * k as i64 + 1 - r] {
        let (exps, inverse) = f_exponents(s);
        for e in exps {
            if inverse {
                // multiply by 1/(1 + q^e x): c_t -= q^e c_{t-1}
                for t in 1..=order {
                    let prev = c[t - 1].shift(e, 0);
                    c[t] = &c[t] - &prev;
                }
            } else {
                for t in (1..=order).rev() {
                    let prev = c[t - 1].shift(e, 0);
                    c[t] = &c[t] + &prev;
                }
            }
        }
    }
    c
}

/// Coefficients of `E_{k,r}` and the derived weights
/// `B^{(t)} = q^{-t(t-1)} [t]_{q^2}! [k-t]_{q^2}! e^{(t)}`, `t = 0..k`.
#[derive(Clone, Debug)]
pub struct FibreE {
    pub k: usize,
    pub r: i64,
    pub e: Vec<Poly>,
    pub b: Vec<Poly>,
}

type ECache = RwLock<HashMap<(usize, i64), Arc<FibreE>>>;

fn e_cache() -> &'static ECache {
    static C: OnceLock<ECache> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `e_{k,r}^{(t)}` (zero unless `r` lies in `[0, 2k+1]`) and `B_{k,r}^{(t)}`.
pub fn fibre_e(k: usize, r: i64) -> Arc<FibreE> {
    if let Some(f) = e_cache().read().unwrap().get(&(k, r)) {
        return f.clone();
    }
    let e = if (0..=2 * k as i64 + 1).contains(&r) { epsilon_series(k, r, k) } else { vec![Poly::zero(); k + 1] };
    let b = e
        .iter()
        .enumerate()
        .map(|(t, et)| {
            let w = &q_factorial(t as u32, 2) * &q_factorial((k - t) as u32, 2);
            (&w * et).shift(-(t as i64) * (t as i64 - 1), 0)
        })
        .collect();
    let f = Arc::new(FibreE { k, r, e, b });
    e_cache().write().unwrap().insert((k, r), f.clone());
    f
}

/// Fibre sum
/// `I_n^{k,r}(X_{k+1..n}; T) = sum_{w in W_{k,r}} C_k(w) I_n(q^-2; Y_1(w_1,T), .., Y_k(w_k,T), X_{k+1}, .., X_n)`.
pub fn fibre_i(n: usize, k: usize, r: i64, xs: &[SignedMonomial], t: SignedMonomial) -> Result<FactoredRational> {
    if k > n {
        return Err(Error::ArityMismatch { expected: n, got: k });
    }
    check_arity(n - k, xs.len())?;
    let ws = fibre_w(k, r);
    let items = par::map(&ws, |w| -> Result<FactoredRational> {
        let mut slots: Vec<SignedMonomial> =
            w.0.iter().enumerate().map(|(j, &wj)| y_slot(j + 1, wj as i64, t)).collect();
        slots.extend_from_slice(xs);
        Ok(&weight_c(w) * &igusa_a(n, AVariant::Plain, -2, &slots)?)
    });
    let items: Vec<FactoredRational> = items.into_iter().collect::<Result<_>>()?;
    Ok(FactoredRational::sum(&items))
}

fn k_sum(
    n: usize,
    k: usize,
    r: i64,
    xs: &[SignedMonomial],
    t: SignedMonomial,
    keep: impl Fn(&Permutation) -> bool + Sync,
) -> Result<Poly> {
    guard("n for coset sums", n, DESCENT_BOUND)?;
    if k > n {
        return Err(Error::ArityMismatch { expected: n, got: k });
    }
    check_arity(n - k, xs.len())?;
    let fe = fibre_e(k, r);
    let reps: Vec<Permutation> = coset_reps(n, k).into_iter().filter(|g| keep(g)).collect();
    Ok(par::map_reduce(
        &reps,
        Poly::zero(),
        |g| {
            let st = coset_stats(g, k);
            let m = slot_product(xs, st.des_gt_k.iter().map(|&j| j as usize - k - 1))
                .mul(t.pow(st.t))
                .q_shift(-2 * st.ell_plus as i64);
            &fe.b[st.t as usize] * &m.to_poly()
        },
        |a, b| a + b,
    ))
}

/// Coset sum `K_n^{k,r} = sum_{g S_k} B_{k,r}^{(t_k)} q^{-2 l_k^+} X^{Des_{>k}} T^{t_k}`.
pub fn fibre_k(n: usize, k: usize, r: i64, xs: &[SignedMonomial], t: SignedMonomial) -> Result<Poly> {
    k_sum(n, k, r, xs, t, |_| true)
}

/// `P_{k,r}(q) = (-q)^r (1-q^2)^k (1 - q^{2k-2r+1}) / ((q;q)_{2k-r+1} (q;q)_r)`,
/// zero for `r` outside `[0, 2k+1]`.
pub fn p_factor(k: usize, r: i64) -> FactoredRational {
    let k = k as i64;
    if !(0..=2 * k + 1).contains(&r) {
        return FactoredRational::zero();
    }
    let num = Poly::binomial(2, 0).pow(k as u32).mul_binomial(2 * k - 2 * r + 1, 0);
    let den = (1..=2 * k - r + 1).chain(1..=r).map(|i| (i, 0, 1));
    let sign = if r % 2 == 0 { 1 } else { -1 };
    FactoredRational::new(num, SignedMonomial::new(sign, r, 0), den)
}

/// `1 / E_{k,r}(-T)` for `r` in `[0, 2k+1]`.
fn inv_e_minus(k: usize, r: i64, t: SignedMonomial) -> FactoredRational {
    let items: Vec<FactoredRational> =
        e_exponents(k, r).into_iter().map(|c| FactoredRational::geometric(t.q_shift(c))).collect();
    FactoredRational::product(&items)
}

/// Right-hand side `P_{k,r} K_n^{k,r} / (E_{k,r}(-T) prod_{j>k} (1 - X_j))`.
pub fn fibre_i_from_k(
    n: usize,
    k: usize,
    r: i64,
    xs: &[SignedMonomial],
    t: SignedMonomial,
) -> Result<FactoredRational> {
    let p = p_factor(k, r);
    if p.is_zero() {
        return Ok(p);
    }
    let kk = fibre_k(n, k, r, xs, t)?;
    Ok(&(&p * &inv_e_minus(k, r, t)) * &slot_den(xs).scale_poly(&kk))
}

/// Compare `I_n^{k,r}` with its coset form at generic slots and `T` itself.
pub fn check_i_equals_k(n: usize, k: usize, r: i64) -> Result<()> {
    guard("n for the fibre identity", n, 4)?;
    if k > n {
        return Err(Error::ArityMismatch { expected: n, got: k });
    }
    let xs = generic_slots(n - k, k);
    let t = SignedMonomial::qt(0, 1);
    let lhs = fibre_i(n, k, r, &xs, t)?;
    let rhs = fibre_i_from_k(n, k, r, &xs, t)?;
    if lhs != rhs {
        return Err(Error::IdentityMismatch(format!("fibre sums I and K at (n,k,r)=({n},{k},{r})")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::subsets;
    use crate::exactalg::qpochhammer;

    fn qt(a: i64, b: i64) -> SignedMonomial {
        SignedMonomial::qt(a, b)
    }

    /// `1 / (a; q^step)_m`.
    fn inv_pochhammer(a: SignedMonomial, step: i64, m: usize) -> FactoredRational {
        let items: Vec<FactoredRational> =
            (0..m).map(|i| FactoredRational::geometric(a.q_shift(step * i as i64))).collect();
        FactoredRational::product(&items)
    }

    fn fr(p: Poly) -> FactoredRational {
        FactoredRational::from_poly(p)
    }

    #[test]
    fn type_a_examples() {
        let xs = generic_slots(3, 0);
        let aug1 = igusa_a(1, AVariant::Augmented, -2, &xs[..2]).unwrap();
        assert_eq!(aug1, slot_den(&xs[..2]));
        let aug2 = igusa_a(2, AVariant::Augmented, -2, &xs).unwrap();
        let num = Poly::one() + xs[1].q_shift(-2).to_poly();
        assert_eq!(aug2, slot_den(&xs).scale_poly(&num));
        assert_eq!(igusa_a(0, AVariant::Plain, -2, &[]).unwrap(), FactoredRational::one());
        assert_eq!(igusa_a(0, AVariant::Augmented, -2, &xs[..1]).unwrap(), slot_den(&xs[..1]));
        assert!(matches!(igusa_a(2, AVariant::Plain, -2, &xs), Err(Error::ArityMismatch { expected: 2, got: 3 })));
    }

    #[test]
    fn descent_form_matches_subsets() {
        for n in 0..=5 {
            let xs = generic_slots(n + 1, 1);
            for y in [-2, -1, 1] {
                assert_eq!(igusa_a_descent(n, y, &xs).unwrap(), igusa_a(n, AVariant::Augmented, y, &xs).unwrap());
            }
        }
        let xs = generic_slots(4, 0);
        let f = igusa_a_descent(3, -2, &xs).unwrap();
        let (x1, x2) = (xs[1].to_poly(), xs[2].to_poly());
        let c = Poly::from_i64_terms(&[(1, -2, 0), (1, -4, 0)]);
        let num = Poly::one() + &c * &x1 + &c * &x2 + (&x1 * &x2).shift(-6, 0);
        assert_eq!(f, slot_den(&xs).scale_poly(&num));
    }

    #[test]
    fn bridge_and_reversal() {
        for n in 1..=5 {
            let xs = generic_slots(n + 1, 2);
            let y = -2;
            let trunc = igusa_a(n, AVariant::Truncated, y, &xs[1..n]).unwrap();
            let plain = igusa_a(n, AVariant::Plain, y, &xs[1..]).unwrap();
            let aug = igusa_a(n, AVariant::Augmented, y, &xs).unwrap();
            let d0 = FactoredRational::geometric(xs[0]);
            let dn = FactoredRational::geometric(xs[n]);
            assert_eq!(&(&trunc * &d0) * &dn, aug);
            assert_eq!(&plain * &d0, aug);
            let mut rev = xs[1..n].to_vec();
            rev.reverse();
            assert_eq!(igusa_a(n, AVariant::Truncated, y, &rev).unwrap(), trunc);
        }
    }

    #[test]
    fn pascal_induction() {
        for n in 0..=5 {
            let xs = generic_slots(n, 3);
            for y in [-2, -1] {
                let lhs = igusa_a(n, AVariant::Plain, y, &xs).unwrap();
                let items: Vec<FactoredRational> = (0..=n)
                    .map(|j| {
                        let xj = if j == 0 { SignedMonomial::ONE } else { xs[j - 1] };
                        igusa_a(j, AVariant::Plain, y, &xs[..j])
                            .unwrap()
                            .mul_monomial(xj)
                            .scale_poly(&gauss_binom(n as u32, j as i64, y))
                    })
                    .collect();
                assert_eq!(lhs, FactoredRational::sum(&items), "n = {n}");
            }
        }
    }

    #[test]
    fn triangular_specialization() {
        for u in [qt(7, 1), qt(-3, 2)] {
            for n in 0..=5 {
                let xs: Vec<SignedMonomial> =
                    (1..=n as i64).map(|r| u.pow(r as u32).q_shift(-r * (r + 1) / 2)).collect();
                let lhs = igusa_a(n, AVariant::Plain, -1, &xs).unwrap();
                let num = qpochhammer(u.q_shift(-1).neg(), -1, n as i64);
                let rhs = &num * &inv_pochhammer(u.pow(2).q_shift(-2), -1, n);
                assert_eq!(lhs, rhs, "n = {n}");
            }
        }
    }

    #[test]
    fn type_b_small() {
        let xs = generic_slots(3, 0);
        let z = qt(13, 3);
        let n2 = igusa_b_numerator(2, -1, z, &xs).unwrap();
        let total: BigInt = n2.terms().map(|(c, _, _)| c.clone()).sum();
        assert_eq!(total, BigInt::from(8));
        let b1 = igusa_b_numerator(1, -1, z, &xs).unwrap();
        // id: 1; [-1]: Y Z X_0
        assert_eq!(b1, Poly::one() + xs[0].mul(z).q_shift(-1).to_poly());
        // Z = 0 would leave the S_n part: compare the Z-free terms with type A.
        let n3 = igusa_b_numerator(3, -1, qt(0, 1000), &generic_slots(4, 0)).unwrap();
        let a3 = igusa_a_descent(3, -1, &generic_slots(4, 0)).unwrap();
        let low = n3.truncate_t(999);
        assert_eq!(
            fr(low),
            a3.mul_factors(&generic_slots(4, 0).iter().map(|x| (x.e_q, x.e_t as u32, 1)).collect::<Vec<_>>())
        );
    }

    #[test]
    fn type_b_subset_expansion() {
        for n in 0..=4 {
            let xs = generic_slots(n + 1, 0);
            for z in [qt(17, 3), SignedMonomial::new(-1, 2, 1)] {
                for y in [-1, -2] {
                    let a = igusa_b(n, y, z, &xs, BVariant::Full).unwrap();
                    let b = igusa_b_subset(n, y, z, &xs, BVariant::Full).unwrap();
                    assert_eq!(a, b, "n = {n}");
                    let at = igusa_b(n, y, z, &xs[..n], BVariant::Truncated).unwrap();
                    let bt = igusa_b_subset(n, y, z, &xs[..n], BVariant::Truncated).unwrap();
                    assert_eq!(at, bt);
                    assert_eq!(at, a.mul_factors(&[(xs[n].e_q, xs[n].e_t as u32, 1)]));
                }
            }
        }
    }

    #[test]
    fn residues_factor() {
        for n in 0..=3 {
            let xs = generic_slots(n, 4);
            let z = qt(19, 2);
            for m in 0..=n {
                igusa_b_residue(n, m, -1, z, &xs).unwrap();
            }
        }
        let xs = generic_slots(1, 0);
        let z = qt(5, 1);
        let r = igusa_b_residue(1, 0, -1, z, &xs).unwrap();
        let expect = igusa_a(1, AVariant::Plain, -1, &xs).unwrap().scale_poly(&(Poly::one() + z.q_shift(-1).to_poly()));
        assert_eq!(r, expect);
    }

    #[test]
    fn truncated_b_via_type_a() {
        for n in 0..=4 {
            let xs = generic_slots(n, 5);
            let z = qt(23, 1);
            let lhs = igusa_b(n, -1, z, &xs, BVariant::Truncated).unwrap();
            let items: Vec<FactoredRational> = (0..=n)
                .map(|j| {
                    let xnj = if j == 0 { SignedMonomial::ONE } else { xs[n - j] };
                    let rev: Vec<SignedMonomial> = (1..=j).map(|i| xs[n - i]).collect();
                    igusa_a(j, AVariant::Plain, -1, &rev)
                        .unwrap()
                        .mul_monomial(xnj)
                        .scale_poly(&(&gauss_binom(n as u32, j as i64, -1) * &neg_pochhammer(n, -1, z, j)))
                })
                .collect();
            assert_eq!(lhs, FactoredRational::sum(&items), "n = {n}");
        }
    }

    #[test]
    fn truncated_b_specialization() {
        for k in 0..=4i64 {
            let xs: Vec<SignedMonomial> = (0..k).map(|r| qt(k * (k + 1) / 2 - r * (r + 1) / 2, 0)).collect();
            for z in [qt(3, 1), SignedMonomial::new(-1, 4, 1)] {
                let lhs = igusa_b(k as usize, -1, z, &xs, BVariant::Truncated).unwrap();
                let num = qpochhammer(z.q_shift(1 - k).neg(), 2, k);
                let rhs = &num * &inv_pochhammer(qt(1, 0), 2, k as usize);
                assert_eq!(lhs, rhs, "k = {k}");
            }
        }
    }

    #[test]
    fn example_e22() {
        let f = fibre_e(2, 2);
        assert_eq!(f.e[0], Poly::one());
        assert_eq!(f.e[1], Poly::from_i64_terms(&[(1, -2, 0), (1, -1, 0)]));
        assert_eq!(f.e[2], Poly::q_pow(-3));
        assert!(fibre_e(0, 0).e[0].is_one());
        assert!(fibre_e(2, 6).e.iter().all(|p| p.is_zero()));
        assert!(fibre_e(2, -1).e.iter().all(|p| p.is_zero()));
    }

    #[test]
    fn top_coefficient() {
        for k in 0..=5usize {
            for r in 0..=2 * k as i64 + 3 {
                let rp = 2 * k as i64 + 3 - r;
                let f = fibre_e(k + 1, r);
                let e = r * rp / 2 - (k as i64 + 1) * (k as i64 + 2);
                assert_eq!(f.e[k + 1], Poly::q_pow(e), "k={k} r={r}");
            }
        }
    }

    fn a_coef(u: i64) -> Poly {
        // (1 - q^{u-1})(q^-u - 1)
        &Poly::binomial(u - 1, 0) * &(Poly::q_pow(-u) - Poly::one())
    }

    #[test]
    fn e_pieri_and_crossdiff() {
        for k in 0..=5usize {
            let top = 2 * k as i64 + 3;
            for r in -1..=top + 1 {
                let rp = top - r;
                let o = k + 3;
                let ekr = epsilon_series(k, r, o);
                let ekrp = epsilon_series(k, rp, o);
                let ek1 = epsilon_series(k + 1, r, o);
                for t in 0..=o {
                    let prev = |v: &Vec<Poly>, e: i64| if t == 0 { Poly::zero() } else { v[t - 1].shift(e, 0) };
                    assert_eq!(ek1[t], &ekr[t] + &prev(&ekr, 1 - rp));
                    assert_eq!(ek1[t], &ekrp[t] + &prev(&ekrp, 1 - r));
                    let lhs = &(&a_coef(rp) * &ekr[t]) - &(&a_coef(r) * &ekrp[t]);
                    let d = Poly::q_pow(-rp) - Poly::q_pow(-r);
                    let rhs = &(&d * &(Poly::q_pow(2 * t as i64) - Poly::q_pow(2 * k as i64 + 2))) * &ek1[t];
                    assert_eq!(lhs, rhs, "k={k} r={r} t={t}");
                }
                // with T, for the truncated e's
                let (e0, e1, e2) = (fibre_e(k, r), fibre_e(k, rp), fibre_e(k + 1, r));
                for t in 0..=k {
                    let tt = Poly::monomial(BigInt::from(1), 0, 1);
                    let l1 = &Poly::one() - &tt.shift(1 - rp, 0);
                    let l2 = &Poly::one() - &tt.shift(1 - r, 0);
                    let lhs = &(&(&l1 * &a_coef(rp)) * &e0.e[t]) - &(&(&l2 * &a_coef(r)) * &e1.e[t]);
                    let d = Poly::q_pow(-rp) - Poly::q_pow(-r);
                    let c0 = &(Poly::q_pow(2 * t as i64) - Poly::q_pow(2 * k as i64 + 2)) * &e2.e[t];
                    let c1 = &(&(Poly::q_pow(2 * t as i64 + 2) - Poly::one()) * &e2.e[t + 1]) * &tt;
                    assert_eq!(lhs, &d * &(c0 + c1), "k={k} r={r} t={t}");
                }
            }
        }
    }

    #[test]
    fn fibre_base_cases() {
        let t = qt(0, 1);
        for n in 0..=3 {
            let xs = generic_slots(n, 0);
            let plain = igusa_a(n, AVariant::Plain, -2, &xs).unwrap();
            assert_eq!(fibre_i(n, 0, 0, &xs, t).unwrap(), plain);
            assert_eq!(fibre_i(n, 0, 1, &xs, t).unwrap(), plain);
            assert!(fibre_i(n, 0, 2, &xs, t).unwrap().is_zero());
            let k0: Poly = permutations(n)
                .iter()
                .map(|g| {
                    slot_product(&xs, g.descents().into_iter().map(|j| j as usize - 1))
                        .q_shift(-2 * g.inversions() as i64)
                        .to_poly()
                })
                .sum();
            assert_eq!(fibre_k(n, 0, 0, &xs, t).unwrap(), k0);
            for r in 0..=2 * n as i64 + 1 {
                assert_eq!(fibre_k(n, n, r, &[], t).unwrap(), q_factorial(n as u32, 2));
            }
        }
    }

    #[test]
    fn example_k422() {
        let t = qt(0, 1);
        let x3 = qt(0, 100);
        let x4 = qt(0, 10_000);
        let k = fibre_k(4, 2, 2, &[x3, x4], t).unwrap();
        let terms: &[(i64, i64, u32)] = &[
            (1, 0, 0),
            (1, 2, 0),
            (1, -6, 1),
            (1, -5, 1),
            (1, -4, 1),
            (1, -3, 1),
            (1, -13, 2),
            (2, -11, 2),
            (2, -9, 2),
            (1, -7, 2),
            (1, -6, 100),
            (2, -4, 100),
            (2, -2, 100),
            (1, 0, 100),
            (1, -10, 101),
            (1, -9, 101),
            (1, -8, 101),
            (1, -7, 101),
            (1, -15, 102),
            (1, -13, 102),
        ];
        assert_eq!(k, Poly::from_i64_terms(terms));
        let p = p_factor(2, 2);
        let expect_p = FactoredRational::new(Poly::q_pow(2), SignedMonomial::ONE, [(1, 0, 1), (3, 0, 1)]);
        assert_eq!(p, expect_p);
    }

    #[test]
    fn i_equals_k() {
        for n in 0..=3 {
            for k in 0..=n {
                for r in -1..=2 * k as i64 + 2 {
                    check_i_equals_k(n, k, r).unwrap();
                }
            }
        }
        check_i_equals_k(4, 2, 2).unwrap();
    }

    #[test]
    fn i_recursion() {
        let t = qt(0, 1);
        for n in 1..=3 {
            for k in 0..n {
                for r in -1..=2 * k as i64 + 4 {
                    let rp = 2 * k as i64 + 3 - r;
                    let xs = generic_slots(n - k - 1, k + 1);
                    let lhs = fibre_i(n, k + 1, r, &xs, t).unwrap();
                    let mut slots = vec![y_slot(k + 1, r, t)];
                    slots.extend_from_slice(&xs);
                    let items: Vec<FactoredRational> = [r, rp]
                        .iter()
                        .map(|&u| fibre_i(n, k, u, &slots, t).unwrap().div_factors(&[(2 * k as i64 + 1 - 2 * u, 0, 1)]))
                        .collect();
                    assert_eq!(lhs, FactoredRational::sum(&items), "n={n} k={k} r={r}");
                }
            }
        }
    }

    #[test]
    fn k_block_recursion() {
        let t = qt(0, 1);
        for n in 1..=3usize {
            for k in 0..n {
                for r in -1..=2 * k as i64 + 4 {
                    let rp = 2 * k as i64 + 3 - r;
                    let xs = generic_slots(n - k - 1, k + 1);
                    let y = y_slot(k + 1, r, t);
                    let mut slots = vec![y];
                    slots.extend_from_slice(&xs);
                    let tt = t.to_poly();
                    let d = &(&(Poly::q_pow(-rp) - Poly::q_pow(-r)) * &Poly::binomial(2, 0)) * &one_minus(y);
                    for h in coset_reps(n, k + 1) {
                        let mut key = h.0[..=k].to_vec();
                        key.sort_unstable();
                        let in_block = |g: &Permutation| {
                            let mut a = g.0[..=k].to_vec();
                            a.sort_unstable();
                            a == key && g.0[k + 1..] == h.0[k + 1..]
                        };
                        let lhs = k_sum(n, k + 1, r, &xs, t, |g| g == &h).unwrap();
                        let kr = k_sum(n, k, r, &slots, t, in_block).unwrap();
                        let krp = k_sum(n, k, rp, &slots, t, in_block).unwrap();
                        let num = &(&(&(Poly::one() - tt.shift(1 - rp, 0)) * &a_coef(rp)) * &kr)
                            - &(&(&(Poly::one() - tt.shift(1 - r, 0)) * &a_coef(r)) * &krp);
                        assert_eq!(&d * &lhs, num, "n={n} k={k} r={r} h={:?}", h.0);
                    }
                }
            }
        }
    }

    #[test]
    fn subsets_cover_superset_expansion() {
        // prod X^S / prod (1 - X_i) = sum_{I >= S} prod_{i in I} X_i / (1 - X_i)
        let xs = generic_slots(3, 0);
        for s in subsets(0, 2) {
            let lhs = slot_den(&xs).mul_monomial(slot_product(&xs, s.iter().map(|&i| i as usize)));
            let rhs =
                subset_sum(
                    &[0, 1, 2],
                    &xs,
                    |set| {
                        if s.iter().all(|i| set.contains(i)) {
                            Poly::one()
                        } else {
                            Poly::zero()
                        }
                    },
                );
            assert_eq!(lhs, rhs);
        }
    }
}
