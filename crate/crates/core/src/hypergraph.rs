//! k-partite k-uniform hypergraphs ("k-graphs"), type graphs, Kronecker
//! products and exact induced-matching numbers.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{parse_err, precondition, Error, Result};

/// Default node budget for [`subrank`].
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Integer partition `lambda_1 >= ... >= lambda_n > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(precondition("partition needs at least one part"));
        }
        if parts.contains(&0) {
            return Err(precondition("partition parts must be positive"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(precondition(format!("partition {parts:?} is not weakly decreasing")));
        }
        Ok(Self { parts })
    }

    /// `(k/2, k/2)`.
    pub fn balanced(k: u32) -> Result<Self> {
        if k < 2 || k % 2 != 0 {
            return Err(precondition(format!("balanced partition needs even k >= 2, got {k}")));
        }
        Self::new(vec![k / 2, k / 2])
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of letters `n`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `k = sum lambda_i`.
    pub fn k(&self) -> u32 {
        self.parts.iter().sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.parts.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", p.join(","))
    }
}

/// Edge set `Phi` inside `V_1 x ... x V_k` with `V_i = [n_i]`, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "KGraphJson", into = "KGraphJson")]
pub struct KGraph {
    sizes: Vec<u32>,
    edges: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct KGraphJson {
    order: usize,
    sizes: Vec<u32>,
    edges: Vec<Vec<u32>>,
}

impl TryFrom<KGraphJson> for KGraph {
    type Error = Error;

    fn try_from(j: KGraphJson) -> Result<Self> {
        if j.order != j.sizes.len() {
            return Err(Error::OrderMismatch {
                left: j.order,
                right: j.sizes.len(),
            });
        }
        KGraph::new(j.sizes, j.edges)
    }
}

impl From<KGraph> for KGraphJson {
    fn from(g: KGraph) -> Self {
        Self {
            order: g.order(),
            sizes: g.sizes,
            edges: g.edges,
        }
    }
}

impl KGraph {
    /// Validates coordinates, then sorts and deduplicates the edges.
    pub fn new(sizes: Vec<u32>, mut edges: Vec<Vec<u32>>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(precondition("k-graph needs order >= 1"));
        }
        for e in &edges {
            if e.len() != sizes.len() {
                return Err(Error::OrderMismatch {
                    left: sizes.len(),
                    right: e.len(),
                });
            }
            for (i, (&a, &n)) in e.iter().zip(&sizes).enumerate() {
                if a == 0 || a > n {
                    return Err(precondition(format!(
                        "edge {e:?}: coordinate {} value {a} outside 1..={n}",
                        i + 1
                    )));
                }
            }
        }
        edges.sort();
        edges.dedup();
        Ok(Self { sizes, edges })
    }

    /// Vertex-set sizes inferred as the largest coordinate used.
    pub fn from_edges(edges: Vec<Vec<u32>>) -> Result<Self> {
        let k = edges.first().map_or(0, |e| e.len());
        let mut sizes = vec![0u32; k];
        for e in &edges {
            for (s, &a) in sizes.iter_mut().zip(e) {
                *s = (*s).max(a);
            }
        }
        Self::new(sizes, edges)
    }

    pub fn order(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: &[u32]) -> bool {
        self.edges.binary_search_by(|x| x.as_slice().cmp(e)).is_ok()
    }

    /// The graph with a single edge `(1, ..., 1)`.
    pub fn single_edge(k: usize) -> Self {
        Self {
            sizes: vec![1; k],
            edges: vec![vec![1; k]],
        }
    }

    /// Edge-list text format: `"k n_1 ... n_k"`, then one edge per line.
    pub fn to_text(&self) -> String {
        let mut s = self.order().to_string();
        for n in &self.sizes {
            s.push(' ');
            s.push_str(&n.to_string());
        }
        s.push('\n');
        for e in &self.edges {
            let row: Vec<String> = e.iter().map(|a| a.to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let head = parse_ints(ln, header)?;
        let (&k, sizes) = head.split_first().ok_or_else(|| parse_err(ln, "empty header"))?;
        if sizes.len() != k as usize {
            return Err(parse_err(
                ln,
                format!("header declares k = {k} but lists {} sizes", sizes.len()),
            ));
        }
        let mut edges = Vec::new();
        for (ln, line) in lines {
            let e = parse_ints(ln, line)?;
            if e.len() != k as usize {
                return Err(parse_err(ln, format!("edge has {} entries, expected {k}", e.len())));
            }
            edges.push(e);
        }
        Self::new(sizes.to_vec(), edges)
    }

    /// Parses the edge-list text format, or the JSON form when the input
    /// starts with `{`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Ok(serde_json::from_str(text)?)
        } else {
            Self::parse_text(text)
        }
    }
}

fn parse_ints(ln: usize, line: &str) -> Result<Vec<u32>> {
    line.split_whitespace()
        .map(|t| t.parse::<u32>().map_err(|e| parse_err(ln, format!("{t:?}: {e}"))))
        .collect()
}

/// `Phi_lambda`: all `k`-strings over `[n]` in which letter `j` occurs
/// `lambda_j` times.
pub fn type_graph(lambda: &Partition) -> KGraph {
    let n = lambda.len() as u32;
    let k = lambda.k() as usize;
    let mut remaining: Vec<u32> = lambda.parts().to_vec();
    let mut cur = Vec::with_capacity(k);
    let mut edges = Vec::new();
    multiset_perms(&mut remaining, &mut cur, k, &mut edges);
    KGraph {
        sizes: vec![n; k],
        edges,
    }
}

// Emits in lexicographic order, so the result is already canonical.
fn multiset_perms(remaining: &mut [u32], cur: &mut Vec<u32>, k: usize, out: &mut Vec<Vec<u32>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for j in 0..remaining.len() {
        if remaining[j] > 0 {
            remaining[j] -= 1;
            cur.push(j as u32 + 1);
            multiset_perms(remaining, cur, k, out);
            cur.pop();
            remaining[j] += 1;
        }
    }
}

/// Kronecker product with pair vertices flattened as `(a - 1) m_i + b`.
pub fn kronecker(phi: &KGraph, psi: &KGraph) -> Result<KGraph> {
    if phi.order() != psi.order() {
        return Err(Error::OrderMismatch {
            left: phi.order(),
            right: psi.order(),
        });
    }
    let sizes: Vec<u32> = phi.sizes.iter().zip(&psi.sizes).map(|(n, m)| n * m).collect();
    let mut edges = Vec::with_capacity(phi.len() * psi.len());
    for a in &phi.edges {
        for b in &psi.edges {
            edges.push(
                a.iter()
                    .zip(b)
                    .zip(&psi.sizes)
                    .map(|((&ai, &bi), &mi)| (ai - 1) * mi + bi)
                    .collect(),
            );
        }
    }
    KGraph::new(sizes, edges)
}

/// `Phi^{⊠n}`, with `n = 0` giving the single-edge graph.
pub fn kronecker_power(phi: &KGraph, n: u32) -> Result<KGraph> {
    let mut acc = KGraph::single_edge(phi.order());
    for _ in 0..n {
        acc = kronecker(&acc, phi)?;
    }
    Ok(acc)
}

/// True iff `psi` is coordinatewise disjoint and
/// `psi = phi ∩ (psi_1 x ... x psi_k)`.
pub fn is_induced_matching(psi: &[Vec<u32>], phi: &KGraph) -> Result<bool> {
    for e in psi {
        if !phi.contains(e) {
            return Err(Error::NotSubset(e.clone()));
        }
    }
    let k = phi.order();
    let mut marginals: Vec<std::collections::HashSet<u32>> = vec![Default::default(); k];
    let mut distinct = psi.to_vec();
    distinct.sort();
    distinct.dedup();
    for e in &distinct {
        for (i, &a) in e.iter().enumerate() {
            if !marginals[i].insert(a) {
                return Ok(false);
            }
        }
    }
    let inside = phi
        .edges()
        .iter()
        .filter(|e| e.iter().enumerate().all(|(i, a)| marginals[i].contains(a)))
        .count();
    Ok(inside == distinct.len())
}

/// Outcome of a branch-and-bound search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubrankResult {
    /// Size of the best induced matching found.
    pub value: usize,
    /// The lexicographically least optimal witness (when `exact`).
    pub witness: Vec<Vec<u32>>,
    /// False when the node budget ran out; `value` is then a lower bound.
    pub exact: bool,
    pub nodes: u64,
}

struct Search<'a> {
    k: usize,
    edges: &'a [Vec<u32>],
    // incident[i][v] = edges whose i-th coordinate is v (0-based vertex).
    incident: Vec<Vec<Vec<usize>>>,
    used: Vec<Vec<bool>>,
    cov: Vec<usize>,
    in_m: Vec<bool>,
    current: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl Search<'_> {
    fn compatible(&self, j: usize) -> bool {
        self.edges[j]
            .iter()
            .enumerate()
            .all(|(i, &a)| !self.used[i][a as usize - 1])
    }

    fn upper_bound(&self, from: usize) -> usize {
        let mut count = 0;
        let mut free: Vec<std::collections::HashSet<u32>> = vec![Default::default(); self.k];
        for j in from..self.edges.len() {
            if self.compatible(j) {
                count += 1;
                for (i, &a) in self.edges[j].iter().enumerate() {
                    free[i].insert(a);
                }
            }
        }
        let vertex_cap = free.iter().map(|s| s.len()).min().unwrap_or(0);
        self.current.len() + count.min(vertex_cap)
    }

    /// Adds edge `j`; returns false (and leaves state unchanged) if that
    /// would put some non-member edge entirely inside the marginals.
    fn include(&mut self, j: usize) -> bool {
        self.in_m[j] = true;
        let mut ok = true;
        for i in 0..self.k {
            let v = self.edges[j][i] as usize - 1;
            self.used[i][v] = true;
            for &e in &self.incident[i][v] {
                self.cov[e] += 1;
                if self.cov[e] == self.k && !self.in_m[e] {
                    ok = false;
                }
            }
        }
        if !ok {
            self.exclude_member(j);
        } else {
            self.current.push(j);
        }
        ok
    }

    fn exclude_member(&mut self, j: usize) {
        for i in 0..self.k {
            let v = self.edges[j][i] as usize - 1;
            self.used[i][v] = false;
            for &e in &self.incident[i][v] {
                self.cov[e] -= 1;
            }
        }
        self.in_m[j] = false;
    }

    fn remove_last(&mut self) {
        let j = self.current.pop().expect("nonempty");
        self.exclude_member(j);
    }

    fn run(&mut self, from: usize) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        if from == self.edges.len() || self.upper_bound(from) <= self.best.len() {
            return;
        }
        if self.compatible(from) && self.include(from) {
            self.run(from + 1);
            self.remove_last();
        }
        self.run(from + 1);
    }
}

/// Exact induced-matching number by branch-and-bound over edges in
/// lexicographic order, including before excluding.
pub fn subrank(phi: &KGraph, budget: u64) -> SubrankResult {
    let k = phi.order();
    let mut incident: Vec<Vec<Vec<usize>>> = phi.sizes().iter().map(|&n| vec![Vec::new(); n as usize]).collect();
    for (j, e) in phi.edges().iter().enumerate() {
        for (i, &a) in e.iter().enumerate() {
            incident[i][a as usize - 1].push(j);
        }
    }
    let mut s = Search {
        k,
        edges: phi.edges(),
        incident,
        used: phi.sizes().iter().map(|&n| vec![false; n as usize]).collect(),
        cov: vec![0; phi.len()],
        in_m: vec![false; phi.len()],
        current: Vec::new(),
        best: Vec::new(),
        nodes: 0,
        budget,
        exhausted: false,
    };
    s.run(0);
    let witness: Vec<Vec<u32>> = s.best.iter().map(|&j| phi.edges()[j].clone()).collect();
    debug_assert!(is_induced_matching(&witness, phi).unwrap_or(false));
    SubrankResult {
        value: witness.len(),
        witness,
        exact: !s.exhausted,
        nodes: s.nodes,
    }
}

/// `Q(Phi^{⊠n})` and the lower estimate `Q(Phi^{⊠n})^{1/n}` of the
/// asymptotic subrank.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerRate {
    pub power: u32,
    pub q: usize,
    pub exact: bool,
    /// `q^{1/n}` rounded down to an `f64`.
    pub rate: f64,
    /// `q^{1/n}` when it is an integer.
    pub integer_rate: Option<u64>,
}

pub fn subrank_power_rate(phi: &KGraph, n: u32, budget: u64) -> Result<PowerRate> {
    if n == 0 {
        return Err(precondition("power must be >= 1"));
    }
    let power = kronecker_power(phi, n)?;
    let res = subrank(&power, budget);
    let q = res.value as u64;
    let mut root = (q as f64).powf(1.0 / f64::from(n)).round() as u64;
    while root > 0 && root.checked_pow(n).map_or(true, |p| p > q) {
        root -= 1;
    }
    while (root + 1).checked_pow(n).is_some_and(|p| p <= q) {
        root += 1;
    }
    let integer_rate = (root.checked_pow(n) == Some(q)).then_some(root);
    let rate = match integer_rate {
        Some(r) => r as f64,
        None => next_down((q as f64).powf(1.0 / f64::from(n))),
    };
    Ok(PowerRate {
        power: n,
        q: res.value,
        exact: res.exact,
        rate,
        integer_rate,
    })
}

fn next_down(x: f64) -> f64 {
    if x > 0.0 {
        f64::from_bits(x.to_bits() - 1)
    } else {
        x
    }
}

/// Injective integer maps `alpha_i : [n_i] -> Z` as lookup tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaMaps {
    maps: Vec<BTreeMap<u32, i64>>,
}

impl AlphaMaps {
    pub fn new(maps: Vec<BTreeMap<u32, i64>>) -> Self {
        Self { maps }
    }

    /// Builds `alpha_i(v) = f(i, v)` on `[sizes[i]]` (coordinates 0-based).
    pub fn from_fn(sizes: &[u32], f: impl Fn(usize, u32) -> i64) -> Self {
        Self {
            maps: sizes
                .iter()
                .enumerate()
                .map(|(i, &n)| (1..=n).map(|v| (v, f(i, v))).collect())
                .collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.maps.len()
    }

    pub fn maps(&self) -> &[BTreeMap<u32, i64>] {
        &self.maps
    }

    pub fn get(&self, i: usize, v: u32) -> Option<i64> {
        self.maps.get(i)?.get(&v).copied()
    }

    /// `alpha(x) = (alpha_1(x_1), ..., alpha_k(x_k))`.
    pub fn apply(&self, x: &[u32]) -> Option<Vec<i64>> {
        x.iter().enumerate().map(|(i, &v)| self.get(i, v)).collect()
    }

    pub fn is_injective(&self) -> bool {
        self.maps.iter().all(|m| {
            let mut vals: Vec<i64> = m.values().copied().collect();
            vals.sort_unstable();
            vals.windows(2).all(|w| w[0] != w[1])
        })
    }

    /// Text format: one line per coordinate, `"i: v->a, v->a, ..."`, with
    /// `i` 1-based. `→` is accepted in place of `->`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, m) in self.maps.iter().enumerate() {
            let pairs: Vec<String> = m.iter().map(|(v, a)| format!("{v}->{a}")).collect();
            s.push_str(&format!("{}: {}\n", i + 1, pairs.join(", ")));
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut maps: BTreeMap<usize, BTreeMap<u32, i64>> = BTreeMap::new();
        for (ln, line) in text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (idx, rest) = line
                .split_once(':')
                .ok_or_else(|| parse_err(ln, "expected \"i: v->a, ...\""))?;
            let idx: usize = idx.trim().parse().map_err(|_| parse_err(ln, "bad coordinate index"))?;
            if idx == 0 {
                return Err(parse_err(ln, "coordinate indices are 1-based"));
            }
            let entry = maps.entry(idx).or_default();
            let rest = rest.replace('→', "->");
            for pair in rest.split([',', ';']).map(str::trim).filter(|p| !p.is_empty()) {
                let (v, a) = pair
                    .split_once("->")
                    .ok_or_else(|| parse_err(ln, format!("bad pair {pair:?}")))?;
                let v: u32 = v
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(ln, format!("bad vertex in {pair:?}")))?;
                let a: i64 = a
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(ln, format!("bad value in {pair:?}")))?;
                if entry.insert(v, a).is_some() {
                    return Err(parse_err(ln, format!("vertex {v} mapped twice")));
                }
            }
        }
        let k = maps.keys().next_back().copied().unwrap_or(0);
        if maps.len() != k {
            return Err(parse_err(0, "coordinates must be numbered 1..k without gaps"));
        }
        Ok(Self {
            maps: maps.into_values().collect(),
        })
    }
}
