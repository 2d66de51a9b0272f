//! Certification of `|R| <= B^{r/(k-2) + 1}` with `B = C(k-1, k/2)` for every
//! even-weight subspace `V <= F_2^{k-1}` of dimension `r`.
//!
//! The inequality is exactified as `U^{k-2} <= B^{r+k-2}` where `U` is an
//! upper bound on `|R|`. Comparisons run on certified `log2` enclosures and
//! fall back to exact big-integer powers when the enclosures overlap.

mod scan;

pub use scan::{scan_conjecture, ScanCache, ScanOptions, ScanReport, ScanRow, ScanSummary};

use std::fmt;
use std::time::Instant;

use rug::ops::Pow;
use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::certified::{
    decide_escalating, default_precision, log2_interval, CertifiedReal, LogBound, Verdict, MAX_PRECISION,
};
use crate::combinatorics::{binomial, f_km};
use crate::error::{precondition, Result};
use crate::gf2::{restricted_pair_count, subspaces_of_dim, Gf2Subspace};

/// Largest `k` for which the exhaustive subspace method is attempted.
pub const EXACT_ENUMERATION_MAX_K: u32 = 10;

/// Bound method that certified a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    RZero,
    TrivialTop,
    GreedyWeights,
    SScan,
    ExactEnumeration,
    None,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::RZero,
        Method::TrivialTop,
        Method::GreedyWeights,
        Method::SScan,
        Method::ExactEnumeration,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::RZero => "r-zero",
            Method::TrivialTop => "trivial-top",
            Method::GreedyWeights => "greedy-weights",
            Method::SScan => "s-scan",
            Method::ExactEnumeration => "exact-enumeration",
            Method::None => "none",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How the deciding comparison was carried out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    Interval,
    ExactBigint,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Interval => "interval",
            Decision::ExactBigint => "exact-bigint",
        })
    }
}

/// Which methods to try and how hard to compare.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyPolicy {
    pub methods: Vec<Method>,
    /// Fall back to exact powers when intervals up to `max_precision` overlap.
    pub exact_fallback: bool,
    pub start_precision: u32,
    pub max_precision: u32,
}

impl Default for VerifyPolicy {
    fn default() -> Self {
        Self {
            methods: Method::ALL.to_vec(),
            exact_fallback: true,
            start_precision: default_precision(),
            max_precision: MAX_PRECISION,
        }
    }
}

impl VerifyPolicy {
    /// Only the bound of the s-scan (plus the two identities).
    pub fn s_scan_only() -> Self {
        Self {
            methods: vec![Method::RZero, Method::TrivialTop, Method::SScan],
            ..Self::default()
        }
    }

    /// Stable text identifying the method menu and comparison settings.
    pub fn signature(&self) -> String {
        let names: Vec<&str> = self.methods.iter().map(|m| m.as_str()).collect();
        format!(
            "{};fallback={};prec={}..{}",
            names.join(","),
            self.exact_fallback,
            self.start_precision,
            self.max_precision
        )
    }

    fn enabled(&self, m: Method) -> bool {
        self.methods.contains(&m)
    }
}

/// Outcome for one `(k, r)` cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub k: u32,
    pub r: u32,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    pub decision: Decision,
    pub verified: bool,
    /// Set when exhaustive enumeration found a subspace violating the bound.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub counterexample: bool,
    /// Extremal subspace (text form) for exhaustive decisions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Mantissa bits of the deciding interval comparison.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    pub elapsed_ms: u64,
}

/// Per-`k` data shared by all cells of a row.
#[derive(Clone, Debug)]
pub struct KContext {
    k: u32,
    b: Integer,
    /// `f(k, m)` for `m = 0..=k`.
    f: Vec<Integer>,
    greedy: GreedyTable,
}

#[derive(Clone, Debug)]
struct GreedyTable {
    f: Vec<Integer>,
    cap_prefix: Vec<Integer>,
    sum_prefix: Vec<Integer>,
}

impl KContext {
    pub fn new(k: u32) -> Result<Self> {
        if k < 4 || k % 2 != 0 {
            return Err(precondition(format!("k = {k} must be even and >= 4")));
        }
        let ki = i64::from(k);
        let f: Vec<Integer> = (0..=ki).map(|m| f_km(ki, m)).collect();
        let mut cells: Vec<(Integer, i64)> = (0..=ki - 2).step_by(2).map(|m| (f[m as usize].clone(), m)).collect();
        cells.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut cap_prefix = vec![Integer::new()];
        let mut sum_prefix = vec![Integer::new()];
        let mut fs = Vec::with_capacity(cells.len());
        for (fm, m) in cells {
            let cap = binomial(ki - 1, m);
            let next_cap = Integer::from(cap_prefix.last().unwrap() + &cap);
            let next_sum = sum_prefix.last().unwrap() + Integer::from(&cap * &fm);
            cap_prefix.push(next_cap);
            sum_prefix.push(next_sum);
            fs.push(fm);
        }
        Ok(Self {
            k,
            b: binomial(ki - 1, ki / 2),
            f,
            greedy: GreedyTable {
                f: fs,
                cap_prefix,
                sum_prefix,
            },
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `B = C(k-1, k/2)`.
    pub fn b(&self) -> &Integer {
        &self.b
    }

    pub fn f(&self, m: u32) -> Integer {
        self.f.get(m as usize).cloned().unwrap_or_default()
    }

    /// Largest `sum a_m f(k,m)` with `a_m <= C(k-1, m)`, `a_m = 0` for odd `m`
    /// and `sum a_m = 2^r`, filled in decreasing order of `f`.
    pub fn greedy_bound(&self, r: u32) -> Integer {
        let total = Integer::from(1) << r;
        let g = &self.greedy;
        // Largest j with cap_prefix[j] <= total.
        let j = g.cap_prefix.partition_point(|p| *p <= total) - 1;
        let mut u = g.sum_prefix[j].clone();
        if j < g.f.len() {
            u += Integer::from(&total - &g.cap_prefix[j]) * &g.f[j];
        }
        u
    }

    /// `sum_{m even, 0..=s-2} C(k, m) f(k, m) + 2^r f(k, s)`.
    pub fn ukrs_lhs(&self, r: u32, s: u32) -> Result<Integer> {
        if s < 2 || s % 2 != 0 || s > self.k / 2 {
            return Err(precondition(format!("s = {s} must be even in [2, {}]", self.k / 2)));
        }
        let ki = i64::from(self.k);
        let mut acc = Integer::new();
        for m in (0..=s - 2).step_by(2) {
            acc += binomial(ki, i64::from(m)) * &self.f[m as usize];
        }
        acc += Integer::from(&self.f[s as usize] << r);
        Ok(acc)
    }
}

/// Checks Proposition-style properties of `f(k, m)` exactly:
/// symmetry `f(k,m) = f(k,k-m)` for even `0 < m < k`, strict decrease over
/// even `m <= k/2`, `f(k,0) = C(k-1,k/2-1) = C(k-1,k/2)`, and the chain
/// `f(k,0) >= f(k,k-2) = f(k,2) >= f(k,k-4) = f(k,4) >= ...`.
pub fn check_f_properties(k: u32) -> Result<bool> {
    if k < 4 || k % 2 != 0 {
        return Err(precondition(format!("k = {k} must be even and >= 4")));
    }
    let ki = i64::from(k);
    let f: Vec<Integer> = (0..=ki).map(|m| f_km(ki, m)).collect();
    let symmetric = (2..ki).step_by(2).all(|m| f[m as usize] == f[(ki - m) as usize]);
    let decreasing = (0..=ki / 2 - 2).step_by(2).all(|m| f[m as usize] > f[m as usize + 2]);
    let at_zero = f[0] == binomial(ki - 1, ki / 2 - 1) && f[0] == binomial(ki - 1, ki / 2);
    let mut chain = true;
    let mut m = 2;
    while m <= ki / 2 {
        chain &= f[(m - 2) as usize] >= f[(ki - m) as usize] && f[(ki - m) as usize] == f[m as usize];
        m += 2;
    }
    Ok(symmetric && decreasing && at_zero && chain)
}

/// Free-function form of [`KContext::ukrs_lhs`].
pub fn ukrs_lhs(k: u32, r: u32, s: u32) -> Result<Integer> {
    KContext::new(k)?.ukrs_lhs(r, s)
}

/// Free-function form of [`KContext::greedy_bound`].
pub fn greedy_weight_bound(k: u32, r: u32) -> Result<Integer> {
    if r > k.saturating_sub(2) {
        return Err(precondition(format!("r = {r} outside [0, {}]", k.saturating_sub(2))));
    }
    Ok(KContext::new(k)?.greedy_bound(r))
}

/// Decides `u^a <= b^c` for positive `u`, `b`: certified intervals with
/// doubling precision, then exact powers if allowed.
pub fn power_le(u: &Integer, a: u32, b: &Integer, c: u32, policy: &VerifyPolicy) -> Result<(Verdict, Decision, u32)> {
    if *u <= 0 || *b <= 0 {
        return Err(precondition("power comparison needs positive bases"));
    }
    let mut failure = None;
    let (verdict, prec) = decide_escalating(policy.start_precision, policy.max_precision, |prec| {
        match (log2_interval(u, prec), log2_interval(b, prec)) {
            (Ok(lu), Ok(lb)) => lu.scale(u64::from(a)).le(&lb.scale(u64::from(c))),
            (Err(e), _) | (_, Err(e)) => {
                failure = Some(e);
                Verdict::Undecided
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    if verdict != Verdict::Undecided || !policy.exact_fallback {
        return Ok((verdict, Decision::Interval, prec));
    }
    let lhs = Integer::from(u.pow(a));
    let rhs = Integer::from(b.pow(c));
    Ok((Verdict::from_bool(lhs <= rhs), Decision::ExactBigint, prec))
}

fn base_cert(k: u32, r: u32) -> RankCertificate {
    RankCertificate {
        k,
        r,
        method: Method::None,
        s: None,
        decision: Decision::Interval,
        verified: false,
        counterexample: false,
        witness: None,
        precision: None,
        elapsed_ms: 0,
    }
}

/// Certifies the exactified inequality at `(k, r)`, trying the enabled
/// methods cheapest first.
pub fn verify_rank_inequality(k: u32, r: u32, policy: &VerifyPolicy) -> Result<RankCertificate> {
    let ctx = KContext::new(k)?;
    verify_with_context(&ctx, r, policy)
}

pub fn verify_with_context(ctx: &KContext, r: u32, policy: &VerifyPolicy) -> Result<RankCertificate> {
    let k = ctx.k;
    if r > k - 2 {
        return Err(precondition(format!("r = {r} outside [0, {}]", k - 2)));
    }
    let start = Instant::now();
    let mut cert = base_cert(k, r);
    let finish = |mut c: RankCertificate| {
        c.elapsed_ms = start.elapsed().as_millis() as u64;
        Ok(c)
    };

    if r == 0 && policy.enabled(Method::RZero) {
        // Only x = y survives, so |R| = f(k, 0) = B and both sides are B^{k-2}.
        cert.method = Method::RZero;
        cert.decision = Decision::ExactBigint;
        cert.verified = ctx.f(0) == ctx.b;
        return finish(cert);
    }
    if r == k - 2 && policy.enabled(Method::TrivialTop) {
        // |R| <= B^2, and (B^2)^{k-2} = B^{2k-4} = B^{r+k-2}.
        cert.method = Method::TrivialTop;
        cert.decision = Decision::ExactBigint;
        cert.verified = 2 * (k - 2) <= r + k - 2;
        return finish(cert);
    }
    if policy.enabled(Method::GreedyWeights) {
        let u = ctx.greedy_bound(r);
        let (v, d, p) = power_le(&u, k - 2, &ctx.b, r + k - 2, policy)?;
        if v.holds() {
            cert.method = Method::GreedyWeights;
            cert.decision = d;
            cert.precision = (d == Decision::Interval).then_some(p);
            cert.verified = true;
            return finish(cert);
        }
    }
    if policy.enabled(Method::SScan) {
        if let Some((s, d, p)) = s_scan(ctx, r, policy)? {
            cert.method = Method::SScan;
            cert.s = Some(s);
            cert.decision = d;
            cert.precision = (d == Decision::Interval).then_some(p);
            cert.verified = true;
            return finish(cert);
        }
    }
    if policy.enabled(Method::ExactEnumeration) && k <= EXACT_ENUMERATION_MAX_K {
        let (max_r, witness) = max_restricted_pair_count(k, r)?;
        let lhs = Integer::from((&max_r).pow(k - 2));
        let rhs = Integer::from((&ctx.b).pow(r + k - 2));
        cert.method = Method::ExactEnumeration;
        cert.decision = Decision::ExactBigint;
        cert.verified = lhs <= rhs;
        cert.counterexample = !cert.verified;
        cert.witness = Some(witness.to_text());
        return finish(cert);
    }
    finish(cert)
}

/// Smallest even `s` in `[2, k/2]` for which the s-scan bound certifies
/// `(k, r)`.
pub fn s_scan(ctx: &KContext, r: u32, policy: &VerifyPolicy) -> Result<Option<(u32, Decision, u32)>> {
    for s in (2..=ctx.k / 2).step_by(2) {
        let lhs = ctx.ukrs_lhs(r, s)?;
        let (v, d, p) = power_le(&lhs, ctx.k - 2, &ctx.b, r + ctx.k - 2, policy)?;
        if v.holds() {
            return Ok(Some((s, d, p)));
        }
    }
    Ok(None)
}

/// Largest restricted pair count over all even-weight subspaces of
/// `F_2^{k-1}` of dimension `r`, with the first maximizer found.
pub fn max_restricted_pair_count(k: u32, r: u32) -> Result<(Integer, Gf2Subspace)> {
    let even = Gf2Subspace::even_weight(k as usize - 1)?;
    let mut best: Option<(Integer, Gf2Subspace)> = None;
    for v in subspaces_of_dim(&even, r as usize) {
        let c = restricted_pair_count(k as usize, &v)?;
        if best.as_ref().map_or(true, |(b, _)| c > *b) {
            best = Some((c, v));
        }
    }
    best.ok_or_else(|| precondition(format!("no subspace of dimension {r} in the even-weight code")))
}

/// Re-decides an interval certificate with exact big integers. Returns
/// `None` for methods that carry no bound to recheck.
pub fn recheck_exact(cert: &RankCertificate) -> Result<Option<bool>> {
    let ctx = KContext::new(cert.k)?;
    let u = match cert.method {
        Method::GreedyWeights => ctx.greedy_bound(cert.r),
        Method::SScan => ctx.ukrs_lhs(
            cert.r,
            cert.s.ok_or_else(|| precondition("s-scan certificate without s"))?,
        )?,
        _ => return Ok(None),
    };
    let lhs = u.pow(cert.k - 2);
    let rhs = Integer::from((&ctx.b).pow(cert.r + cert.k - 2));
    Ok(Some(lhs <= rhs))
}

/// Certificate that `log2 Q~(Phi_{(k/2,k/2)}) >= 1` via every `r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MainBoundCertificate {
    pub k: u32,
    pub certified: bool,
    pub cells: Vec<RankCertificate>,
}

/// For `k = 2` the type graph is itself a matching; for even `k >= 4` every
/// `r in [0, k-2]` must verify.
pub fn certify_main_bound(k: u32, policy: &VerifyPolicy) -> Result<MainBoundCertificate> {
    if k == 2 {
        return Ok(MainBoundCertificate {
            k,
            certified: true,
            cells: Vec::new(),
        });
    }
    let ctx = KContext::new(k)?;
    let cells = (0..=k - 2)
        .map(|r| verify_with_context(&ctx, r, policy))
        .collect::<Result<Vec<_>>>()?;
    Ok(MainBoundCertificate {
        k,
        certified: cells.iter().all(|c| c.verified),
        cells,
    })
}

/// Right-hand side of the small-`r` threshold,
/// `2(k-2) log(1/(1/4 + k/(2(k-1)))) / log(pi/2 (k+1))`, against
/// `k / (2 log2 k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdCheck {
    pub k: u32,
    pub rhs: CertifiedReal,
    pub target: CertifiedReal,
    pub verdict: Verdict,
}

pub fn small_r_threshold_check(k: u32) -> Result<ThresholdCheck> {
    if k < 27 || k % 2 != 0 {
        return Err(precondition(format!("k = {k} must be even and >= 27")));
    }
    let mut out = None;
    let (verdict, _) = decide_escalating(default_precision(), MAX_PRECISION, |prec| {
        let kk = CertifiedReal::from_i64(i64::from(k), prec);
        let inner = CertifiedReal::from_rational(&rug::Rational::from((1, 4)), prec)
            .add(&kk.div(&CertifiedReal::from_i64(2 * (i64::from(k) - 1), prec)));
        let num = inner.recip().ln().mul_int(&Integer::from(2 * (i64::from(k) - 2)));
        let den = CertifiedReal::pi(prec)
            .div(&CertifiedReal::from_i64(2, prec))
            .mul(&CertifiedReal::from_i64(i64::from(k) + 1, prec))
            .ln();
        let rhs = num.div(&den);
        let target = kk.div(&kk.log2().mul_int(&Integer::from(2)));
        let v = target.le(&rhs);
        out = Some((rhs, target));
        v
    });
    let (rhs, target) = out.expect("closure ran");
    Ok(ThresholdCheck {
        k,
        rhs,
        target,
        verdict,
    })
}

/// `log2` of `2^r (pi (k+1)/2)^{-r/(2(k-2))}` and the verdict of the chain
/// `that <= (2^{k-1}/sqrt(pi(k+1)/2))^{r/(k-2)} <= C(k-1, k/2-1)^{r/(k-2)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BinomialPowerFloor {
    pub k: u32,
    pub r: u32,
    pub log2_floor: LogBound,
    pub verdict: Verdict,
}

pub fn binomial_power_floor(k: u32, r: u32) -> Result<BinomialPowerFloor> {
    if k < 4 || k % 2 != 0 {
        return Err(precondition(format!("k = {k} must be even and >= 4")));
    }
    let ki = i64::from(k);
    let c = binomial(ki - 1, ki / 2 - 1);
    let mut out = None;
    let (verdict, _) = decide_escalating(default_precision(), MAX_PRECISION, |prec| {
        let x = CertifiedReal::pi(prec)
            .mul(&CertifiedReal::from_i64(ki + 1, prec))
            .div(&CertifiedReal::from_i64(2, prec))
            .log2();
        let exp = CertifiedReal::from_rational(&rug::Rational::from((i64::from(r), ki - 2)), prec);
        let half = CertifiedReal::from_rational(&rug::Rational::from((1, 2)), prec);
        let rr = CertifiedReal::from_i64(i64::from(r), prec);
        // All three terms in log2.
        let first = rr.sub(&exp.mul(&half).mul(&x));
        let second = exp.mul(&CertifiedReal::from_i64(ki - 1, prec).sub(&half.mul(&x)));
        let third = exp.mul(&CertifiedReal::from_integer(&c, prec).log2());
        let v = first.le(&second).and(second.le(&third));
        out = Some(first);
        v
    });
    Ok(BinomialPowerFloor {
        k,
        r,
        log2_floor: LogBound::from_interval(out.expect("closure ran")),
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn policy() -> VerifyPolicy {
        VerifyPolicy::default()
    }

    #[test]
    fn f_properties_hold() {
        for k in [4, 6, 10, 12, 400] {
            assert!(check_f_properties(k).unwrap(), "k = {k}");
        }
        assert!(check_f_properties(5).is_err());
    }

    #[test]
    fn ukrs_examples() {
        assert_eq!(ukrs_lhs(4, 1, 2).unwrap(), 7);
        assert_eq!(ukrs_lhs(6, 0, 2).unwrap(), 16);
        assert!(ukrs_lhs(6, 0, 3).is_err());
        assert!(ukrs_lhs(6, 0, 4).is_err());
        let ctx = KContext::new(20).unwrap();
        for r in 0..10 {
            let want = ctx.f(0) + (ctx.f(2) << r);
            assert_eq!(ctx.ukrs_lhs(r, 2).unwrap(), want);
        }
    }

    #[test]
    fn greedy_examples() {
        assert_eq!(greedy_weight_bound(4, 1).unwrap(), 5);
        assert_eq!(greedy_weight_bound(4, 0).unwrap(), 3);
        // Full even-weight code: sum over all even m of C(k-1,m) f(k,m) = B^2.
        for k in (4..40).step_by(2) {
            let ctx = KContext::new(k).unwrap();
            assert_eq!(ctx.greedy_bound(k - 2), Integer::from(ctx.b().square_ref()));
        }
    }

    #[test]
    fn greedy_dominates_s_scan_bound() {
        for k in (4..=60).step_by(2) {
            let ctx = KContext::new(k).unwrap();
            for r in 0..=k - 2 {
                let g = ctx.greedy_bound(r);
                for s in (2..=k / 2).step_by(2) {
                    assert!(g <= ctx.ukrs_lhs(r, s).unwrap(), "k={k} r={r} s={s}");
                }
            }
        }
    }

    #[test]
    fn k4_cells() {
        let c0 = verify_rank_inequality(4, 0, &policy()).unwrap();
        assert_eq!((c0.method, c0.verified), (Method::RZero, true));
        let c1 = verify_rank_inequality(4, 1, &policy()).unwrap();
        assert_eq!((c1.method, c1.verified), (Method::GreedyWeights, true));
        let c2 = verify_rank_inequality(4, 2, &policy()).unwrap();
        assert_eq!((c2.method, c2.verified), (Method::TrivialTop, true));
        // The s-scan alone cannot take (4, 1): 7^2 = 49 > 27.
        let ctx = KContext::new(4).unwrap();
        assert_eq!(s_scan(&ctx, 1, &policy()).unwrap(), None);
        let only = verify_rank_inequality(4, 1, &VerifyPolicy::s_scan_only()).unwrap();
        assert!(!only.verified);
        assert_eq!(only.method, Method::None);
    }

    #[test]
    fn exact_enumeration_agrees_for_small_k() {
        let p = VerifyPolicy {
            methods: vec![Method::ExactEnumeration],
            ..policy()
        };
        for k in [4u32, 6, 8] {
            for r in 0..=k - 2 {
                let c = verify_rank_inequality(k, r, &p).unwrap();
                assert!(c.verified && !c.counterexample, "k={k} r={r}");
                let (max, _) = max_restricted_pair_count(k, r).unwrap();
                assert!(max <= greedy_weight_bound(k, r).unwrap());
            }
        }
    }

    #[test]
    fn power_le_paths() {
        let p = policy();
        let (v, d, _) = power_le(&Integer::from(5), 2, &Integer::from(3), 3, &p).unwrap();
        assert_eq!((v, d), (Verdict::Holds, Decision::Interval));
        // 9^2 vs 3^4: equal, so intervals overlap and the exact path decides.
        let (v, d, _) = power_le(&Integer::from(9), 2, &Integer::from(3), 4, &p).unwrap();
        assert_eq!((v, d), (Verdict::Holds, Decision::ExactBigint));
        let no_fallback = VerifyPolicy {
            exact_fallback: false,
            ..p
        };
        let (v, _, _) = power_le(&Integer::from(9), 2, &Integer::from(3), 4, &no_fallback).unwrap();
        assert_eq!(v, Verdict::Undecided);
    }

    #[test]
    fn main_bound_small() {
        assert!(certify_main_bound(2, &policy()).unwrap().certified);
        let c = certify_main_bound(4, &policy()).unwrap();
        assert!(c.certified);
        assert_eq!(c.cells.len(), 3);
        assert!(certify_main_bound(30, &policy()).unwrap().certified);
    }

    #[test]
    fn recheck_matches_interval_decisions() {
        for k in (4..=40).step_by(2) {
            for r in 0..=k - 2 {
                let c = verify_rank_inequality(k, r, &policy()).unwrap();
                if let Some(ok) = recheck_exact(&c).unwrap() {
                    assert_eq!(ok, c.verified);
                }
            }
        }
    }

    #[test]
    fn threshold_examples() {
        for k in [28, 100, 2000] {
            assert_eq!(small_r_threshold_check(k).unwrap().verdict, Verdict::Holds, "k = {k}");
        }
        assert!(small_r_threshold_check(26).is_err());
    }

    #[test]
    fn binomial_power_floor_examples() {
        assert_eq!(binomial_power_floor(4, 1).unwrap().verdict, Verdict::Holds);
        let z = binomial_power_floor(10, 0).unwrap();
        assert_eq!(z.verdict, Verdict::Holds);
        assert!(z.log2_floor.lo_f64() <= 0.0 && z.log2_floor.hi_f64() >= 0.0);
        assert_eq!(binomial_power_floor(1000, 900).unwrap().verdict, Verdict::Holds);
    }
}
