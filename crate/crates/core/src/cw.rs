//! Coppersmith-Winograd style lower bounds: tightness via alpha-maps, ranks of
//! difference sets, the `R -> R'` reduction, maximum-entropy fitting and the
//! 3-graph maximin `max_P min_i H(P_i)`.

use std::collections::BTreeSet;

use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::gf2::{canonicalize, Gf2Vector};
use crate::hypergraph::{AlphaMaps, KGraph, Partition};

/// Grid resolution per simplex coordinate for the maximin search.
pub const CW3_GRID: u32 = 200;
/// Upper limit on grid points; coarser grids are used above it.
pub const CW3_MAX_GRID_POINTS: u64 = 2_000_000;
pub const IPF_MAX_ITERS: usize = 100_000;
pub const IPF_TOLERANCE: f64 = 1e-10;

/// Shannon entropy in bits, with `0 log 0 = 0`.
pub fn entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// `h(x) = H(x, 1 - x)`.
pub fn binary_entropy(x: f64) -> f64 {
    entropy(&[x, 1.0 - x])
}

/// An entropy in bits with the accuracy it was evaluated to.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyValue {
    pub bits: f64,
    /// Absolute accuracy of `bits` (0 for closed forms evaluated in `f64`).
    pub tolerance: f64,
}

/// `alpha_1 .. alpha_{k-1}` the identity, `alpha_k(x) = x - sum_j j lambda_j`.
pub fn alpha_for_type_graph(lambda: &Partition) -> AlphaMaps {
    let k = lambda.k() as usize;
    let n = lambda.len() as u32;
    let shift: i64 = lambda
        .parts()
        .iter()
        .enumerate()
        .map(|(j, &l)| (j as i64 + 1) * i64::from(l))
        .sum();
    AlphaMaps::from_fn(&vec![n; k], |i, v| {
        if i + 1 == k {
            i64::from(v) - shift
        } else {
            i64::from(v)
        }
    })
}

/// True iff every `alpha_i` is injective, defined on all of `V_i`, and
/// `sum_i alpha_i(a_i) = 0` on every edge.
pub fn check_tightness(phi: &KGraph, alpha: &AlphaMaps) -> bool {
    if alpha.order() != phi.order() || !alpha.is_injective() {
        return false;
    }
    let covers = phi
        .sizes()
        .iter()
        .enumerate()
        .all(|(i, &n)| (1..=n).all(|v| alpha.get(i, v).is_some()));
    covers
        && phi
            .edges()
            .iter()
            .all(|e| alpha.apply(e).is_some_and(|a| a.iter().sum::<i64>() == 0))
}

/// Ordered edge pairs that agree on one fixed coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSet {
    pairs: Vec<(Vec<u32>, Vec<u32>)>,
    coordinate: usize,
}

impl PairSet {
    /// Validates and picks the first coordinate on which all pairs agree.
    pub fn new(pairs: Vec<(Vec<u32>, Vec<u32>)>) -> Result<Self> {
        let Some((x0, _)) = pairs.first() else {
            return Err(precondition("pair set must be nonempty"));
        };
        let k = x0.len();
        if pairs.iter().any(|(x, y)| x.len() != k || y.len() != k) {
            return Err(precondition("all tuples must have the same length"));
        }
        if pairs.iter().all(|(x, y)| x == y) {
            return Err(precondition("pair set lies inside the diagonal"));
        }
        let coordinate = (0..k)
            .find(|&i| pairs.iter().all(|(x, y)| x[i] == y[i]))
            .ok_or_else(|| precondition("no coordinate on which every pair agrees"))?;
        Ok(Self { pairs, coordinate })
    }

    /// Also checks that every tuple is an edge of `phi`.
    pub fn in_graph(phi: &KGraph, pairs: Vec<(Vec<u32>, Vec<u32>)>) -> Result<Self> {
        for (x, y) in &pairs {
            for e in [x, y] {
                if !phi.contains(e) {
                    return Err(Error::NotSubset(e.clone()));
                }
            }
        }
        Self::new(pairs)
    }

    pub fn pairs(&self) -> &[(Vec<u32>, Vec<u32>)] {
        &self.pairs
    }

    /// 0-based coordinate with `x_i = y_i` throughout.
    pub fn coordinate(&self) -> usize {
        self.coordinate
    }

    pub fn order(&self) -> usize {
        self.pairs[0].0.len()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Integer>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| Integer::from(x)).collect())
        .collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut prev = Integer::from(1);
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            for j in col + 1..ncols {
                let v = Integer::from(&m[rank][col] * &m[i][j]) - Integer::from(&m[i][col] * &m[rank][j]);
                m[i][j] = v.div_exact(&prev);
            }
            m[i][col] = Integer::new();
        }
        prev = m[rank][col].clone();
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Rank over `Q` of the rows `alpha(x) - alpha(y)`.
pub fn rank_q(r: &PairSet, alpha: &AlphaMaps) -> Result<usize> {
    let rows = r
        .pairs()
        .iter()
        .map(|(x, y)| {
            let ax = alpha
                .apply(x)
                .ok_or_else(|| precondition(format!("alpha undefined on {x:?}")))?;
            let ay = alpha
                .apply(y)
                .ok_or_else(|| precondition(format!("alpha undefined on {y:?}")))?;
            Ok(ax.iter().zip(&ay).map(|(a, b)| a - b).collect())
        })
        .collect::<Result<Vec<Vec<i64>>>>()?;
    Ok(integer_rank(&rows))
}

fn diff_mod2(x: &[u32], y: &[u32]) -> Gf2Vector {
    let bits: Vec<bool> = x.iter().zip(y).map(|(a, b)| (a ^ b) & 1 == 1).collect();
    Gf2Vector::from_bits(&bits)
}

/// `F_2`-rank of the differences `x - y` reduced mod 2.
pub fn rank_f2(r: &PairSet) -> Result<usize> {
    let rows: Vec<Gf2Vector> = r.pairs().iter().map(|(x, y)| diff_mod2(x, y)).collect();
    Ok(canonicalize(r.order(), &rows)?.dim())
}

/// Outcome of reducing `R` over `{0,1}`-tuples of weight `k/2` to `R'` over
/// weight-`(k/2 - 1)` tuples of length `k - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    /// Deduplicated pairs of `R'`, as 0/1 tuples.
    pub pairs: Vec<(Vec<u32>, Vec<u32>)>,
    pub size_before: usize,
    pub size_after: usize,
    pub rank_before: usize,
    pub rank_after: usize,
}

impl Reduction {
    /// `|R| <= 2 |R'|` and equal `F_2`-ranks.
    pub fn is_sound(&self) -> bool {
        self.size_before <= 2 * self.size_after && self.rank_before == self.rank_after
    }
}

/// Drops the agreeing coordinate: pairs with value 1 there keep the rest,
/// pairs with value 0 there keep the complement of the rest.
pub fn reduce_r_to_rprime(r: &PairSet) -> Result<Reduction> {
    let k = r.order();
    if k < 2 || k % 2 != 0 {
        return Err(precondition(format!("tuples must have even length >= 2, got {k}")));
    }
    for (x, y) in r.pairs() {
        for t in [x, y] {
            if t.iter().any(|&v| v > 1) || t.iter().sum::<u32>() as usize != k / 2 {
                return Err(precondition(format!("{t:?} is not a 0/1 tuple of weight {}", k / 2)));
            }
        }
    }
    let c = r.coordinate();
    let rest = |t: &[u32], flip: bool| -> Vec<u32> {
        t.iter()
            .enumerate()
            .filter(|&(i, _)| i != c)
            .map(|(_, &v)| if flip { 1 - v } else { v })
            .collect()
    };
    let mut out: BTreeSet<(Vec<u32>, Vec<u32>)> = BTreeSet::new();
    for (x, y) in r.pairs() {
        let flip = x[c] == 0;
        out.insert((rest(x, flip), rest(y, flip)));
    }
    let pairs: Vec<(Vec<u32>, Vec<u32>)> = out.into_iter().collect();
    let rows: Vec<Gf2Vector> = pairs.iter().map(|(x, y)| diff_mod2(x, y)).collect();
    let rank_after = canonicalize(k - 1, &rows)?.dim();
    Ok(Reduction {
        size_before: r.pairs().iter().collect::<BTreeSet<_>>().len(),
        size_after: pairs.len(),
        pairs,
        rank_before: rank_f2(r)?,
        rank_after,
    })
}

/// `{0,1}` form of a tuple over letters `{1, 2}` (letter `v` becomes `v - 1`).
pub fn to_binary(t: &[u32]) -> Vec<u32> {
    t.iter().map(|&v| v - 1).collect()
}

/// Result of iterative proportional fitting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxEntropy {
    pub entropy: EntropyValue,
    /// Probability per pair, aligned with the pair order.
    pub q: Vec<f64>,
    /// Largest absolute marginal error at exit.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Maximum-entropy distribution on `R` whose `2k` marginals (the `k`
/// coordinates of `x`, then those of `y`) equal `targets`. `targets[j][v-1]`
/// is the mass on vertex `v`.
pub fn max_entropy_with_marginals(r: &PairSet, targets: &[Vec<f64>], iters: usize, tol: f64) -> Result<MaxEntropy> {
    max_entropy_on_support(r.pairs(), targets, iters, tol)
}

/// [`max_entropy_with_marginals`] on an arbitrary nonempty support, including
/// purely diagonal ones.
pub fn max_entropy_on_support(
    pairs: &[(Vec<u32>, Vec<u32>)],
    targets: &[Vec<f64>],
    iters: usize,
    tol: f64,
) -> Result<MaxEntropy> {
    let Some((x0, _)) = pairs.first() else {
        return Err(precondition("support must be nonempty"));
    };
    let k = x0.len();
    if targets.len() != 2 * k {
        return Err(precondition(format!(
            "expected {} marginals, got {}",
            2 * k,
            targets.len()
        )));
    }
    for t in targets {
        let s: f64 = t.iter().sum();
        if t.iter().any(|&x| x < 0.0) || (s - 1.0).abs() > 1e-9 {
            return Err(precondition("each target must be a probability distribution"));
        }
    }
    let value = |p: usize, j: usize| -> usize {
        let (x, y) = &pairs[p];
        (if j < k { x[j] } else { y[j - k] }) as usize - 1
    };
    for p in 0..pairs.len() {
        for (j, t) in targets.iter().enumerate() {
            if value(p, j) >= t.len() {
                return Err(precondition(format!("pair {p} uses a vertex outside target {j}")));
            }
        }
    }
    let n = pairs.len();
    let mut q = vec![1.0 / n as f64; n];
    let residual_of = |q: &[f64]| -> f64 {
        let mut worst: f64 = 0.0;
        for (j, t) in targets.iter().enumerate() {
            let mut m = vec![0.0; t.len()];
            for (p, &qp) in q.iter().enumerate() {
                m[value(p, j)] += qp;
            }
            for (a, b) in m.iter().zip(t) {
                worst = worst.max((a - b).abs());
            }
        }
        worst
    };
    let mut iterations = 0;
    let mut residual = residual_of(&q);
    while residual >= tol && iterations < iters {
        for (j, t) in targets.iter().enumerate() {
            let mut m = vec![0.0; t.len()];
            for (p, &qp) in q.iter().enumerate() {
                m[value(p, j)] += qp;
            }
            for (p, qp) in q.iter_mut().enumerate() {
                let v = value(p, j);
                *qp = if m[v] > 0.0 { *qp * t[v] / m[v] } else { 0.0 };
            }
        }
        iterations += 1;
        residual = residual_of(&q);
    }
    let h = entropy(&q);
    debug_assert!(h <= (n as f64).log2() + 1e-9);
    Ok(MaxEntropy {
        entropy: EntropyValue {
            bits: h.min((n as f64).log2()),
            tolerance: residual,
        },
        q,
        residual,
        iterations,
        converged: residual < tol,
    })
}

/// Lower bound `max_P min_i H(P_i)` on `log2` of the asymptotic subrank of a
/// tight 3-graph, with the distribution attaining it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cw3Bound {
    pub value: EntropyValue,
    /// Probability per edge in canonical edge order.
    pub distribution: Vec<f64>,
    /// Grid resolution actually used.
    pub grid: u32,
}

fn marginal_entropies(phi: &KGraph, p: &[f64]) -> Vec<f64> {
    (0..phi.order())
        .map(|i| {
            let mut m = vec![0.0; phi.sizes()[i] as usize];
            for (e, &pe) in phi.edges().iter().zip(p) {
                m[e[i] as usize - 1] += pe;
            }
            entropy(&m)
        })
        .collect()
}

fn maximin_objective(phi: &KGraph, p: &[f64]) -> f64 {
    marginal_entropies(phi, p).into_iter().fold(f64::INFINITY, f64::min)
}

fn binom_u64(n: u64, k: u64) -> u64 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Largest resolution `<= CW3_GRID` with at most `CW3_MAX_GRID_POINTS`
/// compositions over `d` parts.
pub fn cw3_grid_resolution(d: usize) -> u32 {
    let mut n = CW3_GRID;
    while n > 1 && binom_u64(u64::from(n) + d as u64 - 1, d as u64 - 1) > CW3_MAX_GRID_POINTS {
        n -= 1;
    }
    n
}

fn for_each_composition(n: u32, d: usize, f: &mut impl FnMut(&[u32])) {
    let mut cur = vec![0u32; d];
    fn rec(i: usize, left: u32, cur: &mut [u32], f: &mut impl FnMut(&[u32])) {
        if i + 1 == cur.len() {
            cur[i] = left;
            f(cur);
            return;
        }
        for a in 0..=left {
            cur[i] = a;
            rec(i + 1, left - a, cur, f);
        }
    }
    if d > 0 {
        rec(0, n, &mut cur, f);
    }
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (j, &x) in u.iter().enumerate() {
        cum += x;
        let t = (cum - 1.0) / (j as f64 + 1.0);
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

pub fn cw3_lower_bound(phi: &KGraph, alpha: &AlphaMaps) -> Result<Cw3Bound> {
    if phi.order() != 3 {
        return Err(Error::OrderMismatch {
            left: 3,
            right: phi.order(),
        });
    }
    if !check_tightness(phi, alpha) {
        return Err(precondition("3-graph is not tight for the given alpha-maps"));
    }
    let d = phi.len();
    if d == 0 {
        return Err(precondition("empty 3-graph"));
    }
    let grid = cw3_grid_resolution(d);
    let mut best = vec![1.0 / d as f64; d];
    let mut best_val = maximin_objective(phi, &best);
    for_each_composition(grid, d, &mut |c| {
        let p: Vec<f64> = c.iter().map(|&a| f64::from(a) / f64::from(grid)).collect();
        let v = maximin_objective(phi, &p);
        if v > best_val + 1e-15 {
            best_val = v;
            best = p;
        }
    });

    // Projected subgradient ascent on the concave objective min_i H(P_i).
    let mut p = best.clone();
    let mut step = 0.5 / f64::from(grid);
    for _ in 0..4000 {
        let hs = marginal_entropies(phi, &p);
        let (imin, _) = hs
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &h)| if h < acc.1 { (i, h) } else { acc });
        let mut m = vec![0.0; phi.sizes()[imin] as usize];
        for (e, &pe) in phi.edges().iter().zip(&p) {
            m[e[imin] as usize - 1] += pe;
        }
        let g: Vec<f64> = phi
            .edges()
            .iter()
            .map(|e| {
                let mv = m[e[imin] as usize - 1].max(1e-300);
                -(mv.log2() + std::f64::consts::LOG2_E)
            })
            .collect();
        let cand: Vec<f64> = project_simplex(&p.iter().zip(&g).map(|(a, b)| a + step * b).collect::<Vec<_>>());
        let v = maximin_objective(phi, &cand);
        if v > best_val {
            best_val = v;
            best = cand.clone();
        }
        p = cand;
        step *= 0.998;
    }

    // Pairwise polish: move mass between two edges while it helps.
    let mut delta = 1.0 / f64::from(grid);
    while delta > 1e-12 {
        let mut improved = false;
        for a in 0..d {
            for b in 0..d {
                if a == b || best[a] < delta {
                    continue;
                }
                let mut c = best.clone();
                c[a] -= delta;
                c[b] += delta;
                let v = maximin_objective(phi, &c);
                if v > best_val {
                    best_val = v;
                    best = c;
                    improved = true;
                }
            }
        }
        if !improved {
            delta /= 2.0;
        }
    }
    let value = maximin_objective(phi, &best);
    Ok(Cw3Bound {
        value: EntropyValue {
            bits: value,
            tolerance: 0.0,
        },
        distribution: best,
        grid,
    })
}

/// `H(lambda_1/k, ..., lambda_n/k)` in bits.
pub fn conjectured_value(lambda: &Partition) -> EntropyValue {
    let k = f64::from(lambda.k());
    let p: Vec<f64> = lambda.parts().iter().map(|&l| f64::from(l) / k).collect();
    let bits = if lambda.len() == 2 && lambda.parts()[0] == lambda.parts()[1] {
        1.0
    } else {
        entropy(&p)
    };
    EntropyValue { bits, tolerance: 0.0 }
}

/// The partition `lambda` with `phi = Phi_lambda`, when there is one.
pub fn recognize_type_graph(phi: &KGraph) -> Option<Partition> {
    let e = phi.edges().first()?;
    let n = *phi.sizes().iter().max()? as usize;
    let mut counts = vec![0u32; n];
    for &v in e {
        counts[v as usize - 1] += 1;
    }
    let lambda = Partition::new(counts).ok()?;
    (crate::hypergraph::type_graph(&lambda) == *phi).then_some(lambda)
}
