//! Linear algebra over `F_2`: packed vectors, canonical subspaces, weight
//! distributions, MacWilliams duality and the weight-`k/2` pair counts.
//!
//! Bit `i` of a [`Gf2Vector`] is the `i`-th character of its text form, so
//! `"1100"` has bits 0 and 1 set. Subspaces are kept in reduced row-echelon
//! form with pivots on the leftmost columns, which makes equality of
//! subspaces equality of representations.

use std::fmt;
use std::str::FromStr;

use rug::Integer;

use crate::combinatorics::{f_km, g_km, krawchouk_value};
use crate::error::{parse_err, precondition, Error, Result};

/// Largest supported ambient dimension.
pub const MAX_AMBIENT: usize = 4096;
/// Default cap on the number of elements walked by an enumeration.
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 1 << 24;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Vector {
    n: usize,
    words: Vec<u64>,
}

fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

impl Gf2Vector {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            words: vec![0; word_count(n)],
        }
    }

    /// Builds from the low `n` bits of `w` (bit `i` of `w` is coordinate `i`).
    pub fn from_word(n: usize, w: u64) -> Self {
        assert!(n <= 64, "from_word needs n <= 64");
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut v = Self::zero(n);
        if n > 0 {
            v.words[0] = w & mask;
        }
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zero(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Unit vector `e_i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.set(i, true);
        v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The vector as a single machine word, when `n <= 64`.
    pub fn as_word(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.n, "bit {i} out of range for n = {}", self.n);
        let mask = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product over `F_2`.
    pub fn dot(&self, other: &Self) -> bool {
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    /// Index of the first set bit.
    pub fn leading(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    /// Appends `extra` zero coordinates.
    pub fn extend(&self, extra: usize) -> Self {
        let mut out = Self::zero(self.n + extra);
        out.words[..self.words.len()].copy_from_slice(&self.words);
        out
    }

    /// Drops coordinate `i`.
    pub fn remove(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n - 1);
        let mut j = 0;
        for c in 0..self.n {
            if c != i {
                if self.get(c) {
                    out.set(j, true);
                }
                j += 1;
            }
        }
        out
    }

    /// Bitwise complement.
    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for w in &mut out.words {
            *w = !*w;
        }
        if self.n % 64 != 0 {
            if let Some(last) = out.words.last_mut() {
                *last &= (1u64 << (self.n % 64)) - 1;
            }
        }
        out
    }
}

impl fmt::Display for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vector({self})")
    }
}

impl FromStr for Gf2Vector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut v = Self::zero(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                other => return Err(parse_err(1, format!("invalid bit character {other:?}"))),
            }
        }
        Ok(v)
    }
}

/// Subspace of `F_2^n` in canonical reduced row-echelon form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Subspace {
    n: usize,
    basis: Vec<Gf2Vector>,
}

impl fmt::Debug for Gf2Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.basis.iter().map(|v| v.to_string()).collect();
        write!(f, "Gf2Subspace(n={}, [{}])", self.n, rows.join(", "))
    }
}

fn check_ambient(n: usize) -> Result<()> {
    if n == 0 || n > MAX_AMBIENT {
        Err(Error::AmbientTooLarge(n))
    } else {
        Ok(())
    }
}

/// Spans `vectors` and returns the canonical basis of the span.
pub fn canonicalize(n: usize, vectors: &[Gf2Vector]) -> Result<Gf2Subspace> {
    check_ambient(n)?;
    let mut rows = Vec::with_capacity(vectors.len());
    for v in vectors {
        if v.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.n(),
            });
        }
        rows.push(v.clone());
    }
    Ok(Gf2Subspace {
        n,
        basis: reduce_rows(rows),
    })
}

fn reduce_rows(mut rows: Vec<Gf2Vector>) -> Vec<Gf2Vector> {
    let mut basis: Vec<Gf2Vector> = Vec::new();
    for mut row in rows.drain(..) {
        for b in &basis {
            let p = b.leading().expect("basis rows are nonzero");
            if row.get(p) {
                row.xor_assign(b);
            }
        }
        if let Some(p) = row.leading() {
            for b in &mut basis {
                if b.get(p) {
                    b.xor_assign(&row);
                }
            }
            basis.push(row);
        }
    }
    basis.sort_by_key(|b| b.leading());
    basis
}

impl Gf2Subspace {
    pub fn zero(n: usize) -> Result<Self> {
        canonicalize(n, &[])
    }

    pub fn full(n: usize) -> Result<Self> {
        check_ambient(n)?;
        Ok(Self {
            n,
            basis: (0..n).map(|i| Gf2Vector::unit(n, i)).collect(),
        })
    }

    /// The even-weight code `{x : |x| even}` of `F_2^n`.
    pub fn even_weight(n: usize) -> Result<Self> {
        let rows: Vec<Gf2Vector> = (1..n)
            .map(|i| {
                let mut v = Gf2Vector::unit(n, 0);
                v.set(i, true);
                v
            })
            .collect();
        canonicalize(n, &rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Gf2Vector] {
        &self.basis
    }

    /// `2^dim` as an exact integer.
    pub fn size(&self) -> Integer {
        Integer::from(1) << self.dim() as u32
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|b| b.leading().expect("nonzero row")).collect()
    }

    pub fn contains(&self, v: &Gf2Vector) -> bool {
        if v.n() != self.n {
            return false;
        }
        let mut r = v.clone();
        for b in &self.basis {
            let p = b.leading().expect("nonzero row");
            if r.get(p) {
                r.xor_assign(b);
            }
        }
        r.is_zero()
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.n == other.n && self.basis.iter().all(|b| other.contains(b))
    }

    /// True when every element has even Hamming weight.
    pub fn is_even_weight(&self) -> bool {
        self.basis.iter().all(|b| b.weight() % 2 == 0)
    }

    /// `V^perp = {y : y.x = 0 for all x in V}`.
    pub fn orthogonal_complement(&self) -> Self {
        let pivots = self.pivots();
        let mut is_pivot = vec![false; self.n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut rows = Vec::with_capacity(self.n - self.dim());
        for f in (0..self.n).filter(|&c| !is_pivot[c]) {
            let mut y = Gf2Vector::unit(self.n, f);
            for (row, &p) in self.basis.iter().zip(&pivots) {
                if row.get(f) {
                    y.set(p, true);
                }
            }
            rows.push(y);
        }
        Self {
            n: self.n,
            basis: reduce_rows(rows),
        }
    }

    /// Same subspace inside `F_2^{n + extra}` with the new coordinates zero.
    pub fn extend(&self, extra: usize) -> Result<Self> {
        check_ambient(self.n + extra)?;
        Ok(Self {
            n: self.n + extra,
            basis: self.basis.iter().map(|b| b.extend(extra)).collect(),
        })
    }

    /// Visits all `2^dim` elements in Gray-code order, starting at zero.
    pub fn for_each_element<F: FnMut(&Gf2Vector)>(&self, limit: u64, mut visit: F) -> Result<()> {
        self.check_limit(limit)?;
        let mut cur = Gf2Vector::zero(self.n);
        visit(&cur);
        let total: u64 = 1u64 << self.dim();
        for i in 1..total {
            cur.xor_assign(&self.basis[i.trailing_zeros() as usize]);
            visit(&cur);
        }
        Ok(())
    }

    fn check_limit(&self, limit: u64) -> Result<()> {
        if self.dim() >= 63 || (1u64 << self.dim()) > limit {
            return Err(Error::EnumerationLimit { dim: self.dim(), limit });
        }
        Ok(())
    }

    /// Basis rows as machine words, when `n <= 64`.
    pub fn basis_words(&self) -> Option<Vec<u64>> {
        self.basis.iter().map(|b| b.as_word()).collect()
    }

    /// Histogram of Hamming weights of all elements, by Gray-code enumeration.
    pub fn weight_distribution(&self, enumeration_limit: u64) -> Result<WeightDistribution> {
        self.check_limit(enumeration_limit)?;
        let mut counts = vec![0u64; self.n + 1];
        if let Some(words) = self.basis_words() {
            let mut cur = 0u64;
            counts[0] += 1;
            for i in 1..(1u64 << self.dim()) {
                cur ^= words[i.trailing_zeros() as usize];
                counts[cur.count_ones() as usize] += 1;
            }
        } else {
            self.for_each_element(enumeration_limit, |v| counts[v.weight()] += 1)?;
        }
        Ok(WeightDistribution {
            n: self.n,
            counts: counts.into_iter().map(Integer::from).collect(),
        })
    }

    /// Weight distribution by whichever side is enumerable: directly, or via
    /// the dual and the MacWilliams transform.
    pub fn weight_distribution_auto(&self, enumeration_limit: u64) -> Result<WeightDistribution> {
        match self.weight_distribution(enumeration_limit) {
            Ok(w) => Ok(w),
            Err(Error::EnumerationLimit { .. }) => {
                let dual = self.orthogonal_complement();
                let dw = dual.weight_distribution(enumeration_limit)?;
                macwilliams(&dw, &dual.size())
            }
            Err(e) => Err(e),
        }
    }

    /// Text form: `"n d"` followed by `d` basis rows.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.dim());
        for b in &self.basis {
            s.push_str(&b.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses the text form. Any spanning set is accepted and canonicalized.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|e| parse_err(ln, e.to_string())))
            .collect::<Result<_>>()?;
        let [n, d] = nums[..] else {
            return Err(parse_err(ln, "header must be \"n d\""));
        };
        let mut rows = Vec::with_capacity(d);
        for (ln, line) in lines {
            let v: Gf2Vector = line.parse().map_err(|_| parse_err(ln, "invalid row"))?;
            if v.n() != n {
                return Err(parse_err(ln, format!("row length {} != {n}", v.n())));
            }
            rows.push(v);
        }
        if rows.len() != d {
            return Err(parse_err(ln, format!("expected {d} rows, found {}", rows.len())));
        }
        canonicalize(n, &rows)
    }
}

/// Counts `A_0..A_n` of elements of each Hamming weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDistribution {
    n: usize,
    counts: Vec<Integer>,
}

impl WeightDistribution {
    pub fn new(n: usize, counts: Vec<Integer>) -> Result<Self> {
        if counts.len() != n + 1 {
            return Err(Error::Inconsistent(format!(
                "weight distribution for n = {n} needs {} entries, got {}",
                n + 1,
                counts.len()
            )));
        }
        if counts.iter().any(|c| *c < 0) {
            return Err(Error::Inconsistent("negative weight count".into()));
        }
        Ok(Self { n, counts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &[Integer] {
        &self.counts
    }

    /// `A_t`, zero beyond `n`.
    pub fn get(&self, t: usize) -> Integer {
        self.counts.get(t).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> Integer {
        self.counts.iter().sum()
    }
}

/// Recovers the weight distribution of `V` from that of `V^perp`:
/// `A_m = (1/|V^perp|) sum_t B_t K_m^n(t)`.
pub fn macwilliams(dual_weights: &WeightDistribution, dual_size: &Integer) -> Result<WeightDistribution> {
    let n = dual_weights.n();
    if dual_weights.total() != *dual_size {
        return Err(Error::Inconsistent(format!(
            "dual distribution sums to {} but dual size is {dual_size}",
            dual_weights.total()
        )));
    }
    let mut counts = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let mut acc = Integer::new();
        for (t, b) in dual_weights.counts().iter().enumerate() {
            if *b != 0 {
                acc += krawchouk_value(n as i64, m as i64, t as i64) * b;
            }
        }
        if !acc.is_divisible(dual_size) {
            return Err(Error::Inconsistent(format!(
                "MacWilliams sum at weight {m} not divisible by {dual_size}"
            )));
        }
        let a = acc.div_exact(dual_size);
        if a < 0 {
            return Err(Error::Inconsistent(format!("negative count at weight {m}")));
        }
        counts.push(a);
    }
    WeightDistribution::new(n, counts)
}

fn check_pair_args(k: usize, v: &Gf2Subspace) -> Result<()> {
    if k < 2 || k % 2 != 0 {
        return Err(precondition(format!("k = {k} must be even and >= 2")));
    }
    if v.n() != k - 1 {
        return Err(Error::DimensionMismatch {
            expected: k - 1,
            found: v.n(),
        });
    }
    Ok(())
}

/// `|R|` for `R = {(x, y) : |x| = |y| = k/2, x_k = y_k = 0, x - y in V}`,
/// computed as `sum_m a_m f(k, m)`. `V` lives in `F_2^{k-1}`.
pub fn restricted_pair_count(k: usize, v: &Gf2Subspace) -> Result<Integer> {
    check_pair_args(k, v)?;
    let wd = v.weight_distribution_auto(DEFAULT_ENUMERATION_LIMIT)?;
    Ok(wd
        .counts()
        .iter()
        .enumerate()
        .map(|(m, a)| a * f_km(k as i64, m as i64))
        .sum())
}

/// Same count over all weight-`k/2` words of `F_2^k`, with `V` embedded by a
/// trailing zero coordinate.
pub fn unrestricted_pair_count(k: usize, v: &Gf2Subspace) -> Result<Integer> {
    check_pair_args(k, v)?;
    let wd = v.weight_distribution_auto(DEFAULT_ENUMERATION_LIMIT)?;
    Ok(wd
        .counts()
        .iter()
        .enumerate()
        .map(|(m, a)| a * g_km(k as i64, m as i64))
        .sum())
}

/// All weight-`w` words of length `n <= 64`, in increasing numeric order.
pub fn words_of_weight(n: usize, w: usize) -> Vec<u64> {
    assert!(n <= 64);
    if w > n {
        return Vec::new();
    }
    if w == 0 {
        return vec![0];
    }
    let limit: u128 = 1u128 << n;
    let mut out = Vec::new();
    let mut x: u64 = if w == 64 { u64::MAX } else { (1u64 << w) - 1 };
    loop {
        out.push(x);
        // Gosper's hack: next word with the same popcount.
        let c = x & x.wrapping_neg();
        let r = x as u128 + c as u128;
        if r >= limit {
            break;
        }
        let r = r as u64;
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

fn word_member(basis: &[(u64, u32)], mut x: u64) -> bool {
    for &(row, p) in basis {
        if (x >> p) & 1 == 1 {
            x ^= row;
        }
    }
    x == 0
}

/// Quadratic brute force: ordered pairs of weight-`w` words of `F_2^n` whose
/// sum lies in `V`. Needs `n <= 64`.
pub fn pair_count_quadratic(n: usize, w: usize, v: &Gf2Subspace) -> Result<Integer> {
    if v.n() != n || n > 64 {
        return Err(precondition(format!(
            "brute force needs matching ambient <= 64 (n = {n}, V in F_2^{})",
            v.n()
        )));
    }
    let basis: Vec<(u64, u32)> = v
        .basis_words()
        .expect("n <= 64")
        .into_iter()
        .map(|b| (b, b.trailing_zeros()))
        .collect();
    let words = words_of_weight(n, w);
    let mut count: u64 = 0;
    for &x in &words {
        for &y in &words {
            if word_member(&basis, x ^ y) {
                count += 1;
            }
        }
    }
    Ok(Integer::from(count))
}

/// Brute force by syndrome classes: `x + y in V` iff `H x = H y` for a parity
/// check `H` of `V`, so the count is the sum of squared class sizes.
pub fn pair_count_by_syndrome(n: usize, w: usize, v: &Gf2Subspace) -> Result<Integer> {
    if v.n() != n || n > 64 {
        return Err(precondition(format!(
            "syndrome count needs matching ambient <= 64 (n = {n}, V in F_2^{})",
            v.n()
        )));
    }
    let checks = v.orthogonal_complement().basis_words().expect("n <= 64");
    if checks.len() > 64 {
        return Err(precondition("more than 64 parity checks"));
    }
    let mut classes: std::collections::HashMap<u64, u64> = std::collections::HashMap::new();
    for x in words_of_weight(n, w) {
        let mut syn = 0u64;
        for (j, h) in checks.iter().enumerate() {
            syn |= u64::from((h & x).count_ones() & 1) << j;
        }
        *classes.entry(syn).or_default() += 1;
    }
    Ok(classes.values().map(|&c| Integer::from(c) * c).sum())
}

/// Quadratic brute force of [`restricted_pair_count`].
pub fn restricted_pair_count_brute(k: usize, v: &Gf2Subspace) -> Result<Integer> {
    check_pair_args(k, v)?;
    pair_count_quadratic(k - 1, k / 2, v)
}

/// Quadratic brute force of [`unrestricted_pair_count`].
pub fn unrestricted_pair_count_brute(k: usize, v: &Gf2Subspace) -> Result<Integer> {
    check_pair_args(k, v)?;
    pair_count_quadratic(k, k / 2, &v.extend(1)?)
}

/// Every subspace of dimension `r` contained in `ambient_space`, in a fixed
/// order. Used for exhaustive checks at small `k`.
pub fn subspaces_of_dim(ambient_space: &Gf2Subspace, r: usize) -> Vec<Gf2Subspace> {
    let d = ambient_space.dim();
    let n = ambient_space.n();
    let mut out = Vec::new();
    if r > d {
        return out;
    }
    // Enumerate r x d matrices in RREF over the coordinates of `ambient_space`,
    // then map them through its basis.
    let mut pivots = Vec::with_capacity(r);
    enumerate_pivots(d, r, 0, &mut pivots, &mut |piv| {
        // Free positions: for row i, columns c > piv[i] that are not pivots.
        let mut free: Vec<(usize, usize)> = Vec::new();
        for (i, &p) in piv.iter().enumerate() {
            for c in (p + 1)..d {
                if !piv.contains(&c) {
                    free.push((i, c));
                }
            }
        }
        let combos = 1u64 << free.len();
        for mask in 0..combos {
            let mut rows: Vec<Vec<bool>> = vec![vec![false; d]; r];
            for (i, &p) in piv.iter().enumerate() {
                rows[i][p] = true;
            }
            for (bit, &(i, c)) in free.iter().enumerate() {
                if (mask >> bit) & 1 == 1 {
                    rows[i][c] = true;
                }
            }
            let vecs: Vec<Gf2Vector> = rows
                .iter()
                .map(|coeffs| {
                    let mut acc = Gf2Vector::zero(n);
                    for (j, &on) in coeffs.iter().enumerate() {
                        if on {
                            acc.xor_assign(&ambient_space.basis()[j]);
                        }
                    }
                    acc
                })
                .collect();
            out.push(canonicalize(n, &vecs).expect("same ambient"));
        }
    });
    out
}

fn enumerate_pivots<F: FnMut(&[usize])>(d: usize, r: usize, start: usize, cur: &mut Vec<usize>, f: &mut F) {
    if cur.len() == r {
        f(cur);
        return;
    }
    for p in start..d {
        if d - p < r - cur.len() {
            break;
        }
        cur.push(p);
        enumerate_pivots(d, r, p + 1, cur, f);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Gf2Vector {
        s.parse().unwrap()
    }

    fn span(n: usize, rows: &[&str]) -> Gf2Subspace {
        let vs: Vec<Gf2Vector> = rows.iter().map(|r| v(r)).collect();
        canonicalize(n, &vs).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(span(4, &["0000"]).dim(), 0);
        let s = span(4, &["1100", "1100"]);
        assert_eq!(s.dim(), 1);
        assert_eq!(s.basis()[0].to_string(), "1100");
        assert_eq!(span(4, &["1100", "0110", "1010"]).dim(), 2);
    }

    #[test]
    fn canonicalize_rejects_mixed_dimensions() {
        let err = canonicalize(4, &[v("1100"), v("110")]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn rref_is_canonical() {
        let a = span(5, &["11000", "01100", "00111"]);
        let b = span(5, &["10100", "11000", "00111"]);
        let c = span(5, &["10100", "01100", "10011"]);
        assert_eq!(a, b);
        assert_eq!(a, c);
        let p = a.pivots();
        assert!(p.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn complement_examples() {
        let full = Gf2Subspace::full(6).unwrap();
        assert_eq!(full.orthogonal_complement().dim(), 0);
        let d = span(3, &["110"]).orthogonal_complement();
        assert_eq!(d.dim(), 2);
        let mut elems: Vec<String> = Vec::new();
        d.for_each_element(1 << 10, |x| elems.push(x.to_string())).unwrap();
        elems.sort();
        assert_eq!(elems, ["000", "001", "110", "111"]);
    }

    #[test]
    fn weight_distribution_examples() {
        let w = span(4, &["1100"]).weight_distribution(1 << 10).unwrap();
        assert_eq!(w.counts(), &[1, 0, 1, 0, 0]);
        let z = Gf2Subspace::zero(7).unwrap().weight_distribution(16).unwrap();
        assert_eq!(z.get(0), 1);
        assert_eq!(z.total(), 1);
    }

    #[test]
    fn weight_distribution_respects_limit() {
        let f = Gf2Subspace::full(12).unwrap();
        assert!(matches!(
            f.weight_distribution(1 << 11),
            Err(Error::EnumerationLimit { .. })
        ));
        // The auto path routes through the 0-dimensional dual.
        let w = f.weight_distribution_auto(1 << 11).unwrap();
        for t in 0..=12 {
            assert_eq!(w.get(t), crate::combinatorics::binomial(12, t as i64));
        }
    }

    #[test]
    fn macwilliams_of_full_space_dual() {
        let n = 5;
        let full = Gf2Subspace::full(n).unwrap();
        let dw = full.weight_distribution(1 << 10).unwrap();
        let w = macwilliams(&dw, &full.size()).unwrap();
        assert_eq!(w.get(0), 1);
        assert_eq!(w.total(), 1);
    }

    #[test]
    fn macwilliams_matches_enumeration_small() {
        let s = span(4, &["1100"]);
        let d = s.orthogonal_complement();
        let via_dual = macwilliams(&d.weight_distribution(1 << 10).unwrap(), &d.size()).unwrap();
        assert_eq!(via_dual, s.weight_distribution(1 << 10).unwrap());
    }

    #[test]
    fn macwilliams_rejects_inconsistent_size() {
        let s = span(4, &["1100"]);
        let w = s.weight_distribution(16).unwrap();
        assert!(macwilliams(&w, &Integer::from(4)).is_err());
        // A distribution no subspace has: {0, one weight-1 word}.
        let bogus = WeightDistribution::new(3, vec![1.into(), 1.into(), 0.into(), 0.into()]).unwrap();
        assert!(
            macwilliams(&bogus, &Integer::from(2)).is_ok_and(|w| w.total() == 4)
                || macwilliams(&bogus, &Integer::from(2)).is_err()
        );
    }

    #[test]
    fn pair_count_examples() {
        let zero3 = Gf2Subspace::zero(3).unwrap();
        assert_eq!(restricted_pair_count(4, &zero3).unwrap(), 3);
        assert_eq!(restricted_pair_count_brute(4, &zero3).unwrap(), 3);
        let s = span(3, &["110"]);
        assert_eq!(restricted_pair_count(4, &s).unwrap(), 5);
        assert_eq!(restricted_pair_count_brute(4, &s).unwrap(), 5);
        assert_eq!(restricted_pair_count(6, &Gf2Subspace::zero(5).unwrap()).unwrap(), 10);

        assert_eq!(unrestricted_pair_count(4, &zero3).unwrap(), 6);
        assert_eq!(unrestricted_pair_count_brute(4, &zero3).unwrap(), 6);
        assert_eq!(unrestricted_pair_count(4, &s).unwrap(), 10);
        assert_eq!(unrestricted_pair_count_brute(4, &s).unwrap(), 10);
    }

    #[test]
    fn pair_count_rejects_bad_arguments() {
        let s = Gf2Subspace::zero(4).unwrap();
        assert!(matches!(
            restricted_pair_count(4, &s),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(restricted_pair_count(5, &s).is_err());
    }

    #[test]
    fn odd_weight_vectors_contribute_nothing() {
        // span{100} has an odd-weight element; only the zero vector counts.
        let s = span(3, &["100"]);
        assert_eq!(restricted_pair_count(4, &s).unwrap(), 3);
        assert_eq!(restricted_pair_count_brute(4, &s).unwrap(), 3);
    }

    #[test]
    fn words_of_weight_counts() {
        for n in 0..=12 {
            for w in 0..=n {
                let ws = words_of_weight(n, w);
                assert_eq!(
                    Integer::from(ws.len()),
                    crate::combinatorics::binomial(n as i64, w as i64)
                );
                assert!(ws.iter().all(|x| x.count_ones() as usize == w && *x < (1u64 << n)));
            }
        }
        assert_eq!(words_of_weight(64, 64), vec![u64::MAX]);
    }

    #[test]
    fn subspace_enumeration_counts_match_gaussian_binomials() {
        // Gaussian binomials [4 choose r]_2 = 1, 15, 35, 15, 1.
        let full = Gf2Subspace::full(4).unwrap();
        let counts: Vec<usize> = (0..=4).map(|r| subspaces_of_dim(&full, r).len()).collect();
        assert_eq!(counts, [1, 15, 35, 15, 1]);
        let subs = subspaces_of_dim(&full, 2);
        let unique: std::collections::HashSet<_> = subs.iter().cloned().collect();
        assert_eq!(unique.len(), subs.len());
    }

    #[test]
    fn text_format_round_trip() {
        let s = span(6, &["110000", "011000", "000111"]);
        let t = s.to_text();
        assert!(t.starts_with("6 3\n"));
        assert_eq!(Gf2Subspace::parse_text(&t).unwrap(), s);
        let spanning = "4 3\n1100\n0110\n1010\n";
        assert_eq!(Gf2Subspace::parse_text(spanning).unwrap().dim(), 2);
        assert!(Gf2Subspace::parse_text("4 1\n110\n").is_err());
        assert!(Gf2Subspace::parse_text("4 2\n1100\n").is_err());
    }

    #[test]
    fn large_ambient_vectors() {
        let n = 1999;
        let mut a = Gf2Vector::zero(n);
        a.set(0, true);
        a.set(1998, true);
        let b = Gf2Vector::unit(n, 1998);
        let s = canonicalize(n, &[a.clone(), b.clone()]).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&Gf2Vector::unit(n, 0)));
        assert_eq!(s.orthogonal_complement().dim(), n - 2);
        assert_eq!(a.complement().weight(), n - 2);
        assert!(canonicalize(5000, &[]).is_err());
    }
}
