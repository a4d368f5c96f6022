//! Partitions, the sets `W_n` and their fibres, permutations and signed
//! permutations with their descent statistics, Eulerian polynomials.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{guard, Error, Result};
use crate::exactalg::{FactoredRational, Poly, SignedMonomial};

/// Weakly decreasing tuple of nonnegative integers. Trailing zeros are
/// dropped on construction, so `(2,1,0) == (2,1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Self { parts }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Nonzero parts.
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Parts padded with zeros to length `n`.
    pub fn padded(&self, n: usize) -> Result<Vec<u32>> {
        if self.parts.len() > n {
            return Err(Error::RankMismatch { mu: self.to_string(), n });
        }
        let mut v = self.parts.clone();
        v.resize(n, 0);
        Ok(v)
    }

    /// `m_j`: number of parts equal to `j`, counting zeros up to rank `n`.
    pub fn multiplicity(&self, j: u32, n: usize) -> usize {
        if j == 0 {
            n.saturating_sub(self.parts.len())
        } else {
            self.parts.iter().filter(|&&p| p == j).count()
        }
    }

    /// `d_i = mu_i - mu_{i+1}` for `i < n` and `d_n = mu_n`.
    pub fn difference_vector(&self, n: usize) -> Result<Vec<u32>> {
        let v = self.padded(n)?;
        Ok((0..n).map(|i| v[i] - if i + 1 < n { v[i + 1] } else { 0 }).collect())
    }

    /// Inverse of [`difference_vector`](Self::difference_vector).
    pub fn from_difference_vector(d: &[u32]) -> Self {
        let mut parts = vec![0; d.len()];
        let mut acc = 0;
        for i in (0..d.len()).rev() {
            acc += d[i];
            parts[i] = acc;
        }
        Self::new(parts)
    }

    /// `n(lambda) = sum (i-1) lambda_i`.
    pub fn n_stat(&self) -> u32 {
        self.parts.iter().enumerate().map(|(i, &p)| i as u32 * p).sum()
    }

    pub fn conjugate(&self) -> Partition {
        let m = self.parts.first().copied().unwrap_or(0);
        Partition::new((1..=m).map(|j| self.parts.iter().filter(|&&p| p >= j).count() as u32).collect())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        f.write_str(&s.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad part {p:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!("{s:?} is not weakly decreasing")));
        }
        Ok(Self::new(parts))
    }
}

/// All partitions with at most `max_parts` parts and size at most
/// `max_size`, ordered by size and then reverse-lexicographically.
pub fn partitions_up_to(max_size: u32, max_parts: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    for size in 0..=max_size {
        let mut cur = Vec::new();
        partitions_of(size, size, max_parts, &mut cur, &mut out);
    }
    out
}

/// Partitions of exactly `size` with at most `max_parts` parts.
pub fn partitions_of_size(size: u32, max_parts: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    partitions_of(size, size, max_parts, &mut Vec::new(), &mut out);
    out
}

fn partitions_of(rest: u32, cap: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition::new(cur.clone()));
        return;
    }
    if slots == 0 {
        return;
    }
    for p in (1..=cap.min(rest)).rev() {
        cur.push(p);
        partitions_of(rest - p, p, slots - 1, cur, out);
        cur.pop();
    }
}

/// Element of `W_n`: `w_0 = 0` and `w_i` is `w_{i-1}` or `2i - 1 - w_{i-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WVector(pub Vec<u32>);

impl WVector {
    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn is_member(&self) -> bool {
        let mut prev = 0u32;
        for (i, &w) in self.0.iter().enumerate() {
            let i = i as u32 + 1;
            if w != prev && w + prev != 2 * i - 1 {
                return false;
            }
            prev = w;
        }
        true
    }

    /// `sum_{i <= j} w_i` for `j = 1..n`.
    pub fn partial_sums(&self) -> Vec<u32> {
        self.0
            .iter()
            .scan(0, |acc, &w| {
                *acc += w;
                Some(*acc)
            })
            .collect()
    }

    /// `w . mu` for a partition padded to length `n`.
    pub fn dot(&self, mu: &[u32]) -> u64 {
        self.0.iter().zip(mu).map(|(&w, &m)| w as u64 * m as u64).sum()
    }
}

/// `W_n` in lexicographic order.
pub fn gen_w(n: usize) -> Vec<WVector> {
    let mut level = vec![Vec::new()];
    for i in 1..=n as u32 {
        let mut next = Vec::with_capacity(level.len() * 2);
        for v in &level {
            let prev = v.last().copied().unwrap_or(0);
            for w in [prev, 2 * i - 1 - prev] {
                let mut x: Vec<u32> = v.clone();
                x.push(w);
                next.push(x);
            }
        }
        level = next;
    }
    let mut out: Vec<WVector> = level.into_iter().map(WVector).collect();
    out.sort();
    out
}

/// `C_n(w) = prod_i 1 / (1 - q^{2i - 1 - 2 w_i})`.
pub fn weight_c(w: &WVector) -> FactoredRational {
    let den: Vec<(i64, u32, u32)> =
        w.0.iter().enumerate().map(|(i, &wi)| (2 * (i as i64 + 1) - 1 - 2 * wi as i64, 0, 1)).collect();
    FactoredRational::new(Poly::one(), SignedMonomial::ONE, den)
}

/// Fibre `W_{k,r} = { w in W_k : w_k in {r, 2k + 1 - r} }`; for `k = 0` and
/// `r` in `{0, 1}` it is `{()}`.
pub fn fibre_w(k: usize, r: i64) -> Vec<WVector> {
    let top = 2 * k as i64 + 1;
    if !(0..=top).contains(&r) {
        return Vec::new();
    }
    if k == 0 {
        return vec![WVector(Vec::new())];
    }
    gen_w(k)
        .into_iter()
        .filter(|w| {
            let last = *w.0.last().unwrap() as i64;
            last == r || last == top - r
        })
        .collect()
}

/// Permutation of `[n]` in one-line notation (1-based values).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(pub Vec<u32>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self((1..=n as u32).collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// `Des(g) = { i in [n-1] : g(i) > g(i+1) }`.
    pub fn descents(&self) -> Vec<u32> {
        (1..self.0.len()).filter(|&i| self.0[i - 1] > self.0[i]).map(|i| i as u32).collect()
    }

    pub fn inversions(&self) -> u32 {
        inversions(&self.0)
    }

    /// `self * h`, i.e. `i -> self(h(i))`.
    pub fn compose(&self, h: &Permutation) -> Permutation {
        Permutation(h.0.iter().map(|&j| self.0[j as usize - 1]).collect())
    }
}

fn inversions<T: PartialOrd>(w: &[T]) -> u32 {
    let mut c = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                c += 1;
            }
        }
    }
    c
}

/// All permutations of `[n]` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Permutation> {
    let mut cur: Vec<u32> = (1..=n as u32).collect();
    let mut out = vec![Permutation(cur.clone())];
    // Standard next-permutation loop.
    loop {
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(Permutation(cur.clone()));
    }
    out
}

/// Coset statistics of `g S_k` in `S_n / S_k`, with the convention
/// `g(n+1) = n+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetStats {
    /// `t_k = #{ i <= k : g(i) > g(k+1) }`.
    pub t: u32,
    /// `l_k^+ = #{ i < j, j >= k+1 : g(i) > g(j) }`.
    pub ell_plus: u32,
    /// `Des(g)` restricted to `{k+1, ..., n-1}`.
    pub des_gt_k: Vec<u32>,
}

pub fn coset_stats(g: &Permutation, k: usize) -> CosetStats {
    let n = g.n();
    assert!(k <= n, "k must not exceed n");
    let at = |i: usize| if i == n + 1 { n as u32 + 1 } else { g.0[i - 1] };
    let t = (1..=k).filter(|&i| at(i) > at(k + 1)).count() as u32;
    let mut ell_plus = 0;
    for j in (k + 1).max(2)..=n {
        for i in 1..j {
            if at(i) > at(j) {
                ell_plus += 1;
            }
        }
    }
    let des_gt_k = g.descents().into_iter().filter(|&d| d as usize > k).collect();
    CosetStats { t, ell_plus, des_gt_k }
}

/// Canonical coset representatives of `S_n / S_k`: permutations whose first
/// `k` entries increase.
pub fn coset_reps(n: usize, k: usize) -> Vec<Permutation> {
    permutations(n).into_iter().filter(|g| g.0[..k].windows(2).all(|w| w[0] < w[1])).collect()
}

/// Signed permutation in window notation `g(1) .. g(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    pub window: Vec<i32>,
}

/// Statistics of a signed permutation used by the type-B formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BStats {
    pub length: u32,
    /// `Des_B(g) = { i in [n-1]_0 : g(i) > g(i+1) }` with `g(0) = 0`.
    pub descents: Vec<u32>,
    pub neg: u32,
    /// `C(g) = n neg(g) - l(g) + sum_{i in Des_B} c_i`.
    pub c: i64,
    /// `D(g) = (n+1) des_B(g) + neg(g)`.
    pub d: u32,
}

/// `c_i = (n(n+5) - i(i+1)) / 2`.
pub fn c_seq(n: usize) -> Vec<i64> {
    let n = n as i64;
    (0..=n).map(|i| (n * (n + 5) - i * (i + 1)) / 2).collect()
}

/// `c'_i = binom(n+1, 2) - binom(i+1, 2) = c_i - 2n`.
pub fn c_seq_graded(n: usize) -> Vec<i64> {
    let n = n as i64;
    (0..=n).map(|i| (n * (n + 1) - i * (i + 1)) / 2).collect()
}

impl SignedPermutation {
    pub fn new(window: Vec<i32>) -> Self {
        let mut abs: Vec<u32> = window.iter().map(|x| x.unsigned_abs()).collect();
        abs.sort_unstable();
        assert!(abs.iter().enumerate().all(|(i, &a)| a == i as u32 + 1), "window must be a signed arrangement of [n]");
        Self { window }
    }

    pub fn n(&self) -> usize {
        self.window.len()
    }

    /// Coxeter length `inv(g) + sum_{g(i) < 0} |g(i)|`.
    pub fn length(&self) -> u32 {
        inversions(&self.window) + self.window.iter().filter(|&&x| x < 0).map(|x| x.unsigned_abs()).sum::<u32>()
    }

    pub fn descents(&self) -> Vec<u32> {
        let mut v = vec![0];
        v.extend_from_slice(&self.window);
        (0..self.window.len()).filter(|&i| v[i] > v[i + 1]).map(|i| i as u32).collect()
    }

    pub fn neg(&self) -> u32 {
        self.window.iter().filter(|&&x| x < 0).count() as u32
    }

    /// Statistics with `C` computed from the given `c`-sequence.
    pub fn stats_with(&self, c: &[i64]) -> BStats {
        let n = self.n();
        let length = self.length();
        let descents = self.descents();
        let neg = self.neg();
        let cstat = n as i64 * neg as i64 - length as i64 + descents.iter().map(|&i| c[i as usize]).sum::<i64>();
        let d = (n as u32 + 1) * descents.len() as u32 + neg;
        BStats { length, descents, neg, c: cstat, d }
    }

    pub fn stats(&self) -> BStats {
        self.stats_with(&c_seq(self.n()))
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.window.iter().map(|x| x.to_string()).collect();
        f.write_str(&s.join(","))
    }
}

pub const SIGNED_PERM_BOUND: usize = 8;

/// All `2^n n!` signed permutations, ordered by underlying permutation and
/// then by sign mask.
pub fn signed_perms(n: usize) -> Result<impl Iterator<Item = SignedPermutation>> {
    guard("n for signed permutations", n, SIGNED_PERM_BOUND)?;
    Ok(permutations(n).into_iter().flat_map(move |p| (0u32..1 << n).map(move |mask| apply_signs(&p, mask))))
}

/// `p` with the entries at positions in `mask` negated.
pub fn apply_signs(p: &Permutation, mask: u32) -> SignedPermutation {
    SignedPermutation {
        window: p.0.iter().enumerate().map(|(i, &x)| if mask >> i & 1 == 1 { -(x as i32) } else { x as i32 }).collect(),
    }
}

/// Coxeter lengths in `B_n` by breadth-first search on the generators
/// `s_0` (negate the first entry) and `s_i` (swap entries `i`, `i+1`).
pub fn b_lengths_bfs(n: usize) -> HashMap<Vec<i32>, u32> {
    let id: Vec<i32> = (1..=n as i32).collect();
    let mut dist = HashMap::from([(id.clone(), 0)]);
    let mut queue = VecDeque::from([id]);
    while let Some(w) = queue.pop_front() {
        let d = dist[&w];
        for s in 0..n {
            let mut x = w.clone();
            if s == 0 {
                x[0] = -x[0];
            } else {
                x.swap(s - 1, s);
            }
            if !dist.contains_key(&x) {
                dist.insert(x.clone(), d + 1);
                queue.push_back(x);
            }
        }
    }
    dist
}

/// Eulerian polynomial `A_d(X) = sum_{w in S_d} X^{des(w)+1}`, `A_0 = 1`, as a
/// coefficient list.
pub fn eulerian_a(d: usize) -> Result<Vec<u64>> {
    guard("d for Eulerian polynomials", d, 10)?;
    if d == 0 {
        return Ok(vec![1]);
    }
    let mut c = vec![0u64; d + 1];
    for g in permutations(d) {
        c[g.descents().len() + 1] += 1;
    }
    Ok(c)
}

/// Brenti's `B_n(X, Y) = sum_{g in B_n} Y^{neg} X^{des_B}` as a table
/// `[des][neg]`.
pub fn brenti_b(n: usize) -> Result<Vec<Vec<u64>>> {
    let mut t = vec![vec![0u64; n + 1]; n + 1];
    for g in signed_perms(n)? {
        t[g.descents().len()][g.neg() as usize] += 1;
    }
    Ok(t)
}

/// Subsets of `{lo..=hi}` as sorted vectors, in order of bitmask.
pub fn subsets(lo: u32, hi: u32) -> Vec<Vec<u32>> {
    if hi < lo {
        return vec![Vec::new()];
    }
    let m = hi - lo + 1;
    (0u64..1 << m).map(|mask| (0..m).filter(|i| mask >> i & 1 == 1).map(|i| lo + i).collect()).collect()
}
