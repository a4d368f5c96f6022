//! Brute-force enumeration over finite rings: Lagrangian submodules of the
//! alternating modules `M_mu`, sublattices of `Z^2n` classified by quotient
//! type and alternating type, and subalgebras of `h_n (x) Z_p` of small index.
//!
//! Sublattices are enumerated through their Hermite normal forms: upper
//! triangular matrices whose rows are a basis, with positive diagonal and
//! every entry above the diagonal reduced modulo the diagonal entry of its
//! column.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::combinat::{partitions_of_size, partitions_up_to, Partition};
use crate::counts::birkhoff_alpha;
use crate::error::{Error, Result};
use crate::par;

/// Explicit enumeration limits. Exceeding one is an error, never a silent
/// truncation.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    /// Largest module `|M_mu| = p^{2|mu|}` to enumerate.
    pub max_module: u128,
    /// Largest number of Hermite normal forms to visit.
    pub max_matrices: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_module: 59_049, max_matrices: 20_000_000 }
    }
}

fn pow(p: u64, e: u32) -> u64 {
    p.checked_pow(e).expect("prime power overflows u64")
}

/// The module `M_mu = (+)_i (o/p^{mu_i}) e_i (+) (o/p^{mu_i}) f_i` with the
/// pairing `(e_i, f_i) = p^{-mu_i}`. Elements are indexed in mixed radix.
#[derive(Clone, Debug)]
pub struct AltModule {
    pub mu: Partition,
    pub p: u64,
    moduli: Vec<u64>,
    top: u32,
}

impl AltModule {
    pub fn new(mu: &Partition, p: u64) -> Self {
        let moduli = mu.parts().iter().flat_map(|&m| [pow(p, m), pow(p, m)]).collect();
        Self { mu: mu.clone(), p, moduli, top: mu.parts().first().copied().unwrap_or(0) }
    }

    pub fn order(&self) -> u64 {
        self.moduli.iter().product()
    }

    pub fn decode(&self, mut idx: u64) -> Vec<u64> {
        self.moduli
            .iter()
            .map(|&m| {
                let c = idx % m;
                idx /= m;
                c
            })
            .collect()
    }

    pub fn encode(&self, c: &[u64]) -> u64 {
        self.moduli.iter().zip(c).rev().fold(0, |acc, (&m, &x)| acc * m + x % m)
    }

    pub fn add(&self, x: u64, y: u64) -> u64 {
        let (a, b) = (self.decode(x), self.decode(y));
        let s: Vec<u64> = a.iter().zip(&b).map(|(u, v)| u + v).collect();
        self.encode(&s)
    }

    pub fn scale(&self, x: u64, k: u64) -> u64 {
        let s: Vec<u64> = self.decode(x).iter().zip(&self.moduli).map(|(u, &m)| (u * (k % m)) % m).collect();
        self.encode(&s)
    }

    /// The pairing scaled by `p^{mu_1}`, as a residue mod `p^{mu_1}`.
    pub fn pairing(&self, x: u64, y: u64) -> u64 {
        let (a, b) = (self.decode(x), self.decode(y));
        let big = pow(self.p, self.top);
        let mut acc: i128 = 0;
        for (i, &m) in self.mu.parts().iter().enumerate() {
            let w = pow(self.p, self.top - m) as i128;
            acc += (a[2 * i] as i128 * b[2 * i + 1] as i128 - a[2 * i + 1] as i128 * b[2 * i] as i128) * w;
        }
        acc.rem_euclid(big as i128) as u64
    }

    /// Subgroup generated by `gens`, as a sorted list of element indices.
    pub fn span(&self, gens: &[u64]) -> Vec<u64> {
        let mut elems = vec![0u64];
        let mut seen: HashSet<u64> = HashSet::from([0]);
        for &g in gens {
            let mut frontier = elems.clone();
            while !frontier.is_empty() {
                let mut next = Vec::new();
                for &x in &frontier {
                    let y = self.add(x, g);
                    if seen.insert(y) {
                        next.push(y);
                    }
                }
                elems.extend_from_slice(&next);
                frontier = next;
            }
        }
        elems.sort_unstable();
        elems
    }

    /// `N^perp` for the subgroup generated by `gens`.
    pub fn perp(&self, gens: &[u64]) -> Vec<u64> {
        (0..self.order()).filter(|&x| gens.iter().all(|&g| self.pairing(x, g) == 0)).collect()
    }

    /// Isomorphism type of a subgroup given by its elements.
    pub fn subgroup_type(&self, elems: &[u64]) -> Partition {
        let mut conj = Vec::new();
        let mut prev = 1u64;
        for j in 1..=self.top {
            let k = pow(self.p, j);
            let size = elems.iter().filter(|&&x| self.scale(x, k) == 0).count() as u64;
            let mut ratio = size / prev;
            let mut e = 0;
            while ratio > 1 {
                ratio /= self.p;
                e += 1;
            }
            conj.push(e);
            prev = size;
        }
        Partition::new(conj).conjugate()
    }
}

/// Counts of Lagrangian submodules `N = N^perp` of `M_mu`, keyed by the
/// isomorphism type `lambda` of `N`. The total is `N'(mu)` at `q = p`.
pub fn enum_lagrangians(mu: &Partition, p: u64, budget: &Budget) -> Result<BTreeMap<Partition, u64>> {
    let size = (p as u128).pow(2 * mu.size());
    if size > budget.max_module {
        return Err(Error::BudgetExceeded { needed: size, budget: budget.max_module });
    }
    let m = AltModule::new(mu, p);
    // Isotropic subgroups of order p^l, grown one index-p step at a time.
    let mut level: Vec<(Vec<u64>, Vec<u64>)> = vec![(vec![0], Vec::new())];
    for _ in 0..mu.size() {
        let found: Vec<Vec<(Vec<u64>, Vec<u64>)>> = par::map(&level, |(elems, gens)| {
            let inside: HashSet<u64> = elems.iter().copied().collect();
            let mut out = Vec::new();
            for x in m.perp(gens) {
                if inside.contains(&x) || !inside.contains(&m.scale(x, p)) {
                    continue;
                }
                let mut g = gens.clone();
                g.push(x);
                let mut e: Vec<u64> = Vec::with_capacity(elems.len() * p as usize);
                for k in 0..p {
                    let kx = m.scale(x, k);
                    e.extend(elems.iter().map(|&y| m.add(y, kx)));
                }
                e.sort_unstable();
                out.push((e, g));
            }
            out
        });
        let mut seen = HashSet::new();
        level = found.into_iter().flatten().filter(|(e, _)| seen.insert(e.clone())).collect();
    }
    let mut counts = BTreeMap::new();
    for (elems, _) in &level {
        *counts.entry(m.subgroup_type(elems)).or_insert(0) += 1;
    }
    Ok(counts)
}

/// Integer determinant by fraction-free elimination.
pub fn det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

fn valuation(x: &BigInt, p: u64) -> u32 {
    let mut x = x.abs();
    let pb = BigInt::from(p);
    let mut v = 0;
    while !x.is_zero() && (&x % &pb).is_zero() {
        x /= &pb;
        v += 1;
    }
    v
}

fn val_mod(x: i128, p: i128, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut x = x;
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn inv_mod(a: i128, m: i128) -> i128 {
    let (mut t, mut nt, mut r, mut nr) = (0i128, 1i128, m, a.rem_euclid(m));
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    assert_eq!(r, 1, "not a unit");
    t.rem_euclid(m)
}

/// Working modulus `p^N` with `N = 2 v_p(det) + 2`, enough precision for all
/// divisions by pivots during local elimination.
fn working_modulus(p: u64, vdet: u32) -> Result<(i128, u32)> {
    let n = 2 * vdet + 2;
    let m = (p as i128)
        .checked_pow(n)
        .filter(|m| *m < (1i128 << 62))
        .ok_or(Error::BudgetExceeded { needed: n as u128, budget: 62 })?;
    Ok((m, n))
}

/// Valuations of the Smith invariants of an integer matrix over `Z_(p)`,
/// sorted decreasingly: the type of the quotient `Z^r / (row span)` at `p`.
pub fn smith_type(m: &[Vec<i64>], p: u64) -> Result<Partition> {
    let d = det(m);
    if d.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let vdet = valuation(&d, p);
    let (modulus, cap) = working_modulus(p, vdet)?;
    let pi = p as i128;
    let mut a: Vec<Vec<i128>> =
        m.iter().map(|r| r.iter().map(|&x| (x as i128).rem_euclid(modulus)).collect()).collect();
    let n = a.len();
    let mut vals = Vec::new();
    for k in 0..n {
        let mut best = (cap + 1, k, k);
        for i in k..n {
            for j in k..n {
                let v = val_mod(a[i][j], pi, cap);
                if v < best.0 {
                    best = (v, i, j);
                }
            }
        }
        let (v, bi, bj) = best;
        if v >= cap {
            return Err(Error::SingularMatrix);
        }
        a.swap(k, bi);
        for row in a.iter_mut() {
            row.swap(k, bj);
        }
        let pv = pi.pow(v);
        let unit_inv = inv_mod(a[k][k] / pv, modulus);
        for i in k + 1..n {
            let f = (a[i][k] / pv) % modulus * unit_inv % modulus;
            for j in k..n {
                a[i][j] = (a[i][j] - f * a[k][j]).rem_euclid(modulus);
            }
        }
        for j in k + 1..n {
            let f = (a[k][j] / pv) % modulus * unit_inv % modulus;
            for i in k..n {
                a[i][j] = (a[i][j] - f * a[i][k]).rem_euclid(modulus);
            }
        }
        vals.push(v);
    }
    Ok(Partition::new(vals))
}

/// Alternating type of a nondegenerate alternating Gram matrix over
/// `Z_(p)`: the valuations `mu_i` of the symplectic elementary divisors, each
/// hyperbolic block `[[0, p^mu_i], [-p^mu_i, 0]]` contributing one part.
pub fn alt_type(gram: &[Vec<i64>], p: u64) -> Result<Partition> {
    let n = gram.len();
    if n % 2 == 1 || (0..n).any(|i| gram[i][i] != 0 || (0..n).any(|j| gram[i][j] != -gram[j][i])) {
        return Err(Error::DegenerateForm);
    }
    let d = det(gram);
    if d.is_zero() {
        return Err(Error::DegenerateForm);
    }
    let (modulus, cap) = working_modulus(p, valuation(&d, p))?;
    let pi = p as i128;
    let mut g: Vec<Vec<i128>> =
        gram.iter().map(|r| r.iter().map(|&x| (x as i128).rem_euclid(modulus)).collect()).collect();
    let mut mu = Vec::new();
    let mut k = 0;
    // Congruence g -> P g P^T applied by paired row/column operations.
    let swap = |g: &mut Vec<Vec<i128>>, a: usize, b: usize| {
        g.swap(a, b);
        for row in g.iter_mut() {
            row.swap(a, b);
        }
    };
    while k < n {
        let mut best = (cap + 1, k, k + 1);
        for i in k..n {
            for j in i + 1..n {
                let v = val_mod(g[i][j], pi, cap);
                if v < best.0 {
                    best = (v, i, j);
                }
            }
        }
        let (v, bi, bj) = best;
        if v >= cap {
            return Err(Error::DegenerateForm);
        }
        swap(&mut g, k, bi);
        let bj = if bj == k { bi } else { bj };
        swap(&mut g, k + 1, bj);
        let pv = pi.pow(v);
        let a = g[k][k + 1];
        let ainv = inv_mod(a / pv, modulus);
        for t in k + 2..n {
            // b_t <- b_t - (g[t][k+1]/a) b_k + (g[t][k]/a) b_{k+1}
            let c1 = (g[t][k + 1] / pv) % modulus * ainv % modulus;
            let c0 = (g[t][k] / pv) % modulus * ainv % modulus;
            for j in 0..n {
                g[t][j] = (g[t][j] - c1 * g[k][j] + c0 * g[k + 1][j]).rem_euclid(modulus);
            }
            for i in 0..n {
                g[i][t] = (g[i][t] - c1 * g[i][k] + c0 * g[i][k + 1]).rem_euclid(modulus);
            }
        }
        mu.push(v);
        k += 2;
    }
    Ok(Partition::new(mu))
}

/// The standard alternating form on `Z^2n` with hyperbolic pairs
/// `(x_{2i-1}, x_{2i})`.
pub fn omega(u: &[i64], v: &[i64]) -> i64 {
    (0..u.len() / 2).map(|i| u[2 * i] * v[2 * i + 1] - u[2 * i + 1] * v[2 * i]).sum()
}

/// Gram matrix of `omega` on the rows of `h`.
pub fn gram(h: &[Vec<i64>]) -> Vec<Vec<i64>> {
    h.iter().map(|u| h.iter().map(|v| omega(u, v)).collect()).collect()
}

/// The Lie ring `h_n`: basis `x_1 .. x_2n, y` with `[x_{2i-1}, x_{2i}] = y`.
#[derive(Clone, Copy, Debug)]
pub struct HnLieRing {
    pub n: usize,
}

impl HnLieRing {
    pub fn rank(&self) -> usize {
        2 * self.n + 1
    }

    /// Bracket of coordinate vectors.
    pub fn bracket(&self, u: &[i64], v: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.rank()];
        out[2 * self.n] = omega(&u[..2 * self.n], &v[..2 * self.n]);
        out
    }
}

/// Hermite normal forms of a given diagonal exponent profile, visited in a
/// fixed order.
pub fn for_each_hnf(p: u64, exps: &[u32], mut f: impl FnMut(&[Vec<i64>])) {
    let r = exps.len();
    let diag: Vec<i64> = exps.iter().map(|&e| pow(p, e) as i64).collect();
    let slots: Vec<(usize, usize)> = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).collect();
    let mut h = vec![vec![0i64; r]; r];
    for i in 0..r {
        h[i][i] = diag[i];
    }
    let mut counter = vec![0i64; slots.len()];
    loop {
        f(&h);
        // odometer over entries h[i][j] in [0, diag[j])
        let mut pos = 0;
        loop {
            if pos == slots.len() {
                return;
            }
            let (i, j) = slots[pos];
            counter[pos] += 1;
            if counter[pos] < diag[j] {
                h[i][j] = counter[pos];
                break;
            }
            counter[pos] = 0;
            h[i][j] = 0;
            pos += 1;
        }
    }
}

/// Number of Hermite normal forms with the given diagonal profile.
pub fn hnf_count(p: u64, exps: &[u32]) -> u128 {
    let r = exps.len();
    (0..r).map(|j| (p as u128).pow(exps[j] * j as u32)).product()
}

/// Exponent profiles of length `r` with sum exactly `total`.
pub fn profiles(r: usize, total: u32) -> Vec<Vec<u32>> {
    fn go(r: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == r - 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in 0..=left {
            cur.push(e);
            go(r, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(r, total, &mut Vec::new(), &mut out);
    out
}

fn check_budget(p: u64, r: usize, max_val: u32, budget: &Budget) -> Result<Vec<Vec<u32>>> {
    let all: Vec<Vec<u32>> = (0..=max_val).flat_map(|j| profiles(r, j)).collect();
    let needed: u128 = all.iter().map(|e| hnf_count(p, e)).sum();
    if needed > budget.max_matrices {
        return Err(Error::BudgetExceeded { needed, budget: budget.max_matrices });
    }
    Ok(all)
}

fn merge<K: Ord>(mut a: BTreeMap<K, u64>, b: BTreeMap<K, u64>) -> BTreeMap<K, u64> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

/// Counts `N(lambda, mu)` of sublattices of `Z^2n` of index at most
/// `p^max_val`, by quotient type and alternating type.
pub fn enum_sublattices(
    n: usize,
    p: u64,
    max_val: u32,
    budget: &Budget,
) -> Result<BTreeMap<(Partition, Partition), u64>> {
    let strata = check_budget(p, 2 * n, max_val, budget)?;
    let parts: Vec<Result<BTreeMap<(Partition, Partition), u64>>> = par::map(&strata, |exps| {
        let mut local = BTreeMap::new();
        let mut err = None;
        for_each_hnf(p, exps, |h| {
            if err.is_some() {
                return;
            }
            match (smith_type(h, p), alt_type(&gram(h), p)) {
                (Ok(l), Ok(m)) => *local.entry((l, m)).or_insert(0) += 1,
                (Err(e), _) | (_, Err(e)) => err = Some(e),
            }
        });
        err.map_or(Ok(local), Err)
    });
    parts.into_iter().try_fold(BTreeMap::new(), |acc, r| Ok(merge(acc, r?)))
}

/// Membership of `v` in the row span of an upper triangular `h`.
pub fn in_lattice(h: &[Vec<i64>], v: &[i64]) -> bool {
    let mut rest = v.to_vec();
    for i in 0..h.len() {
        if rest[i] % h[i][i] != 0 {
            return false;
        }
        let z = rest[i] / h[i][i];
        for j in i..h.len() {
            rest[j] -= z * h[i][j];
        }
    }
    rest.iter().all(|&x| x == 0)
}

/// `a_{p^i}` for `i <= max_val`: the number of subalgebras of index `p^i` in
/// `h_n (x) Z_p`, found by testing every sublattice of `Z^{2n+1}` for closure
/// under the bracket.
pub fn enum_subalgebras(n: usize, p: u64, max_val: u32, budget: &Budget) -> Result<Vec<u64>> {
    let lie = HnLieRing { n };
    let strata = check_budget(p, lie.rank(), max_val, budget)?;
    let counts: Vec<(u32, u64)> = par::map(&strata, |exps| {
        let mut c = 0u64;
        for_each_hnf(p, exps, |h| {
            let closed = (0..h.len()).all(|i| (i + 1..h.len()).all(|j| in_lattice(h, &lie.bracket(&h[i], &h[j]))));
            if closed {
                c += 1;
            }
        });
        (exps.iter().sum(), c)
    });
    let mut out = vec![0u64; max_val as usize + 1];
    for (v, c) in counts {
        out[v as usize] += c;
    }
    Ok(out)
}

/// One row of a factorization check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationRow {
    pub lambda: Partition,
    pub mu: Partition,
    pub p: u64,
    pub lattices: u64,
    pub lagrangians: u64,
    pub alpha: BigInt,
}

impl FactorizationRow {
    pub fn holds(&self) -> bool {
        BigInt::from(self.lattices) == BigInt::from(self.lagrangians) * &self.alpha
    }
}

/// Compare `N(lambda, mu)` from the lattice oracle with
/// `N'(lambda, mu) alpha_n(mu; p^2)` from the Lagrangian oracle, for every
/// pair with `|lambda| = |mu| <= max_val`. Also confirms that no lattice has
/// `|lambda| != |mu|`.
pub fn check_factorization(n: usize, p: u64, max_val: u32, budget: &Budget) -> Result<Vec<FactorizationRow>> {
    let lattices = enum_sublattices(n, p, max_val, budget)?;
    if let Some(((l, m), _)) = lattices.iter().find(|((l, m), _)| l.size() != m.size()) {
        return Err(Error::FactorizationMismatch {
            lambda: l.to_string(),
            mu: m.to_string(),
            p,
            lattices: lattices[&(l.clone(), m.clone())],
            predicted: "0".into(),
        });
    }
    let mut rows = Vec::new();
    for mu in partitions_up_to(max_val, n) {
        let lag = enum_lagrangians(&mu, p, budget)?;
        let alpha = birkhoff_alpha(&mu, n, 2)?.eval_q_int(p as i64).expect("Birkhoff numbers are integers");
        for lambda in partitions_of_size(mu.size(), 2 * n) {
            let row = FactorizationRow {
                lattices: lattices.get(&(lambda.clone(), mu.clone())).copied().unwrap_or(0),
                lagrangians: lag.get(&lambda).copied().unwrap_or(0),
                lambda,
                mu: mu.clone(),
                p,
                alpha: alpha.clone(),
            };
            if !row.holds() {
                return Err(Error::FactorizationMismatch {
                    lambda: row.lambda.to_string(),
                    mu: row.mu.to_string(),
                    p,
                    lattices: row.lattices,
                    predicted: (BigInt::from(row.lagrangians) * &row.alpha).to_string(),
                });
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

/// For each `lambda` with `|lambda| <= max_val`: the oracle total
/// `sum_mu N(lambda, mu)` and the Birkhoff number `alpha_2n(lambda; p)`.
pub fn aggregation_table(n: usize, p: u64, max_val: u32, budget: &Budget) -> Result<Vec<(Partition, u64, BigInt)>> {
    let lattices = enum_sublattices(n, p, max_val, budget)?;
    let mut out = Vec::new();
    for lambda in partitions_up_to(max_val, 2 * n) {
        let total: u64 = lattices.iter().filter(|((l, _), _)| *l == lambda).map(|(_, c)| c).sum();
        let alpha = birkhoff_alpha(&lambda, 2 * n, 1)?.eval_q_int(p as i64).unwrap();
        out.push((lambda, total, alpha));
    }
    Ok(out)
}

/// Total of a Lagrangian count map, i.e. `N'(mu)` at `q = p`.
pub fn lagrangian_total(counts: &BTreeMap<Partition, u64>) -> u64 {
    counts.values().sum()
}
