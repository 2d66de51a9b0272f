//! Fourier analysis on `{0,1}^n`: the Walsh transform, Krawchouk polynomials,
//! subspace spectra, the KKL-derived dual weight bound and the binomial
//! inequalities used to bound the weight-`(n-1)/2` pair count.

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::certified::{decide_escalating, default_precision, CertifiedReal, Verdict, MAX_PRECISION};
use crate::combinatorics::{binomial, krawchouk_value};
use crate::error::{precondition, Error, Result};
use crate::gf2::{canonicalize, Gf2Subspace, Gf2Vector, WeightDistribution};

/// Largest `n` accepted for dense tables.
pub const MAX_TABLE_BITS: u32 = 26;
/// Relative tolerance of the floating-point convolution identity.
pub const CONVOLUTION_TOLERANCE: f64 = 1e-9;

/// A real function on `{0,1}^n`, indexed by the integer whose bit `i` is `x_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct BooleanTable {
    n: u32,
    values: Vec<f64>,
}

impl BooleanTable {
    pub fn new(n: u32, values: Vec<f64>) -> Result<Self> {
        check_bits(n)?;
        if values.len() != 1usize << n {
            return Err(Error::DimensionMismatch {
                expected: 1usize << n,
                found: values.len(),
            });
        }
        Ok(Self { n, values })
    }

    pub fn from_fn<F: FnMut(u64) -> f64>(n: u32, f: F) -> Result<Self> {
        check_bits(n)?;
        Ok(Self {
            n,
            values: (0..1u64 << n).map(f).collect(),
        })
    }

    /// The character `chi_w(x) = (-1)^{w.x}`.
    pub fn character(n: u32, w: u64) -> Result<Self> {
        Self::from_fn(n, |x| if (x & w).count_ones() % 2 == 0 { 1.0 } else { -1.0 })
    }

    /// `[|x| = k]`.
    pub fn weight_indicator(n: u32, k: u32) -> Result<Self> {
        Self::from_fn(n, |x| if x.count_ones() == k { 1.0 } else { 0.0 })
    }

    /// 0/1 indicator of a subspace of `F_2^n`.
    pub fn subspace_indicator(v: &Gf2Subspace) -> Result<Self> {
        let n = v.n() as u32;
        check_bits(n)?;
        let mut values = vec![0.0; 1usize << n];
        v.for_each_element(u64::MAX, |x| values[x.as_word().unwrap_or(0) as usize] = 1.0)?;
        Ok(Self { n, values })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, x: u64) -> f64 {
        self.values[x as usize]
    }

    /// `<f, f> = 2^{-n} sum_x f(x)^2`.
    pub fn norm_squared(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>() / self.values.len() as f64
    }
}

fn check_bits(n: u32) -> Result<()> {
    if n > MAX_TABLE_BITS {
        return Err(Error::AmbientTooLarge(n as usize));
    }
    Ok(())
}

fn butterfly<T, F>(values: &mut [T], mut step: F)
where
    F: FnMut(&mut T, &mut T),
{
    let mut h = 1;
    while h < values.len() {
        for block in values.chunks_mut(2 * h) {
            let (a, b) = block.split_at_mut(h);
            for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                step(x, y);
            }
        }
        h *= 2;
    }
}

/// `f^(z) = 2^{-n} sum_x f(x) (-1)^{z.x}` by the in-place fast transform.
pub fn walsh_transform(f: &BooleanTable) -> BooleanTable {
    let mut values = f.values.clone();
    butterfly(&mut values, |x, y| {
        let (a, b) = (*x, *y);
        *x = a + b;
        *y = a - b;
    });
    let scale = (-(f.n as i32) as f64).exp2();
    for v in &mut values {
        *v *= scale;
    }
    BooleanTable { n: f.n, values }
}

/// Unnormalized exact transform `F(z) = sum_x f(x) (-1)^{z.x}`; the length
/// must be a power of two.
pub fn walsh_transform_exact(f: &[Integer]) -> Result<Vec<Integer>> {
    table_bits(f.len())?;
    let mut values = f.to_vec();
    butterfly(&mut values, |x, y| {
        let a = x.clone();
        *x += &*y;
        *y = a - &*y;
    });
    Ok(values)
}

fn table_bits(len: usize) -> Result<u32> {
    if !len.is_power_of_two() {
        return Err(precondition(format!("table length {len} is not a power of two")));
    }
    let n = len.trailing_zeros();
    check_bits(n)?;
    Ok(n)
}

/// Both sides of `sum_{x,y} f(x) f(y) g(x+y) = 2^{2n} sum_z f^(z)^2 g^(z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvolutionSides {
    pub lhs: f64,
    pub rhs: f64,
    /// `sum_{x,y} |f(x) f(y) g(x+y)|`, the scale of the relative tolerance.
    pub scale: f64,
}

impl ConvolutionSides {
    pub fn agree(&self) -> bool {
        (self.lhs - self.rhs).abs() <= CONVOLUTION_TOLERANCE * self.scale.max(f64::MIN_POSITIVE)
    }
}

/// Left side by the direct double sum, right side through the transform.
pub fn convolution_sides(f: &BooleanTable, g: &BooleanTable) -> Result<ConvolutionSides> {
    if f.n != g.n {
        return Err(Error::DimensionMismatch {
            expected: f.n as usize,
            found: g.n as usize,
        });
    }
    let size = f.values.len();
    let (mut lhs, mut scale) = (0.0, 0.0);
    for x in 0..size {
        let fx = f.values[x];
        if fx == 0.0 {
            continue;
        }
        for y in 0..size {
            let term = fx * f.values[y] * g.values[x ^ y];
            lhs += term;
            scale += term.abs();
        }
    }
    let fh = walsh_transform(f);
    let gh = walsh_transform(g);
    let sum: f64 = fh.values.iter().zip(&gh.values).map(|(a, b)| a * a * b).sum();
    let rhs = sum * (2.0 * f.n as f64).exp2();
    Ok(ConvolutionSides { lhs, rhs, scale })
}

pub fn convolution_identity_check(f: &BooleanTable, g: &BooleanTable) -> Result<bool> {
    Ok(convolution_sides(f, g)?.agree())
}

/// The identity for integer tables in exact arithmetic, as
/// `2^n sum_{x,y} f(x) f(y) g(x+y) = sum_z F(z)^2 G(z)`.
pub fn convolution_identity_exact(f: &[Integer], g: &[Integer]) -> Result<bool> {
    if f.len() != g.len() {
        return Err(Error::DimensionMismatch {
            expected: f.len(),
            found: g.len(),
        });
    }
    let n = table_bits(f.len())?;
    let mut lhs = Integer::new();
    for (x, fx) in f.iter().enumerate() {
        if *fx == 0 {
            continue;
        }
        for (y, fy) in f.iter().enumerate() {
            lhs += Integer::from(fx * fy) * &g[x ^ y];
        }
    }
    lhs <<= n;
    let fh = walsh_transform_exact(f)?;
    let gh = walsh_transform_exact(g)?;
    let mut rhs = Integer::new();
    for (a, b) in fh.iter().zip(&gh) {
        rhs += Integer::from(a.square_ref()) * b;
    }
    Ok(lhs == rhs)
}

/// An exact value `K_k^n(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KrawchoukValue {
    pub n: u32,
    pub k: u32,
    pub t: u32,
    pub value: Integer,
}

fn check_krawchouk_range(n: u32, k: u32, t: u32) -> Result<()> {
    if k > n || t > n {
        return Err(precondition(format!(
            "Krawchouk index out of range: n = {n}, k = {k}, t = {t}"
        )));
    }
    Ok(())
}

/// `K_k^n(t)` by the alternating binomial sum.
pub fn krawchouk(n: u32, k: u32, t: u32) -> Result<KrawchoukValue> {
    check_krawchouk_range(n, k, t)?;
    Ok(KrawchoukValue {
        n,
        k,
        t,
        value: krawchouk_value(n as i64, k as i64, t as i64),
    })
}

/// `K_{(n-1)/2}^n(t) = (-1)^{floor(t/2)} C(n,(n-1)/2) C((n-1)/2, floor(t/2)) / C(n,t)`
/// for odd `n`.
pub fn middle_krawchouk_closed(n: u32, t: u32) -> Result<KrawchoukValue> {
    if n % 2 == 0 {
        return Err(precondition(format!("n = {n} must be odd")));
    }
    let h = (n - 1) / 2;
    check_krawchouk_range(n, h, t)?;
    let (n, hh, tt) = (n as i64, h as i64, t as i64);
    let num = binomial(n, hh) * binomial(hh, tt / 2);
    let den = binomial(n, tt);
    if !num.is_divisible(&den) {
        return Err(Error::Inconsistent(format!(
            "closed-form Krawchouk quotient not integral at n = {n}, t = {t}"
        )));
    }
    let mut value = num.div_exact(&den);
    if (t / 2) % 2 == 1 {
        value = -value;
    }
    Ok(KrawchoukValue {
        n: n as u32,
        k: h,
        t,
        value,
    })
}

/// Fourier transform of a subspace indicator: the constant `1/|V^perp|` on
/// `V^perp`, zero elsewhere.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSpectrum {
    support: Gf2Subspace,
    value: Rational,
}

impl SparseSpectrum {
    /// The subspace carrying the spectrum.
    pub fn support(&self) -> &Gf2Subspace {
        &self.support
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn get(&self, z: &Gf2Vector) -> Rational {
        if self.support.contains(z) {
            self.value.clone()
        } else {
            Rational::new()
        }
    }

    /// Support points with their value.
    pub fn entries(&self, limit: u64) -> Result<Vec<(Gf2Vector, Rational)>> {
        let mut out = Vec::new();
        self.support
            .for_each_element(limit, |z| out.push((z.clone(), self.value.clone())))?;
        Ok(out)
    }

    /// Dense table for `n <= MAX_TABLE_BITS`.
    pub fn to_table(&self) -> Result<BooleanTable> {
        let n = self.support.n() as u32;
        check_bits(n)?;
        let v = self.value.to_f64();
        let mut values = vec![0.0; 1usize << n];
        self.support
            .for_each_element(u64::MAX, |z| values[z.as_word().unwrap_or(0) as usize] = v)?;
        Ok(BooleanTable { n, values })
    }
}

pub fn subspace_indicator_hat(v: &Gf2Subspace, enumeration_limit: u64) -> Result<SparseSpectrum> {
    let dual = v.orthogonal_complement();
    if dual.dim() >= 63 || (1u64 << dual.dim()) > enumeration_limit {
        return Err(Error::EnumerationLimit {
            dim: dual.dim(),
            limit: enumeration_limit,
        });
    }
    let value = Rational::from((1, dual.size()));
    Ok(SparseSpectrum { support: dual, value })
}

/// `V = {x : x_0 = .. = x_{n-d-1} = 0}`, the strings beginning with `n - d`
/// zeros. Its dual is the strings ending with `d` zeros.
pub fn axis_aligned_subspace(n: usize, d: usize) -> Result<Gf2Subspace> {
    if d > n {
        return Err(precondition(format!("dimension {d} exceeds ambient {n}")));
    }
    let basis: Vec<Gf2Vector> = (n - d..n).map(|i| Gf2Vector::unit(n, i)).collect();
    canonicalize(n, &basis)
}

fn dual_weights(v: &Gf2Subspace, enumeration_limit: u64) -> Result<WeightDistribution> {
    v.orthogonal_complement().weight_distribution(enumeration_limit)
}

/// `floor(ln(2) c)`; never a tie since `ln(2) c` is irrational for `c >= 1`.
pub fn floor_ln2_times(c: u32) -> u32 {
    if c == 0 {
        return 0;
    }
    let mut p = default_precision();
    loop {
        let x = CertifiedReal::ln2(p).mul_int(&Integer::from(c));
        if let Some(f) = x.floor_exact() {
            return f.to_u32().unwrap_or(u32::MAX);
        }
        p *= 2;
    }
}

/// `(2 e ln(2) c / t)^t`.
pub fn kkl_bound(c: u32, t: u32, prec: u32) -> CertifiedReal {
    CertifiedReal::e(prec)
        .mul(&CertifiedReal::ln2(prec))
        .mul_int(&Integer::from(2 * c as u64))
        .div(&CertifiedReal::from_i64(t as i64, prec))
        .powu(t)
}

#[derive(Clone, Debug, PartialEq)]
pub struct KklRow {
    pub t: u32,
    /// `|(V^perp)_t|`
    pub count_t: Integer,
    /// `|(V^perp)_{n-t}|`
    pub count_n_minus_t: Integer,
    pub bound: CertifiedReal,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KklReport {
    pub n: usize,
    pub c: u32,
    pub rows: Vec<KklRow>,
    pub verdict: Verdict,
}

/// Checks `|(V^perp)_t|, |(V^perp)_{n-t}| <= (2 e ln(2) c / t)^t` for every
/// integer `1 <= t <= ln(2) c`, with `c = n - dim V`.
pub fn kkl_subspace_check(v: &Gf2Subspace, enumeration_limit: u64) -> Result<KklReport> {
    let n = v.n();
    let c = (n - v.dim()) as u32;
    if c < 2 {
        return Err(precondition(format!("codimension {c} < 2 leaves no t to check")));
    }
    let wd = v.orthogonal_complement().weight_distribution_auto(enumeration_limit)?;
    let mut rows = Vec::new();
    let mut verdict = Verdict::Holds;
    for t in 1..=floor_ln2_times(c).min(n as u32) {
        let count_t = wd.get(t as usize);
        let count_n_minus_t = wd.get(n - t as usize);
        let larger = count_t.clone().max(count_n_minus_t.clone());
        let mut bound = kkl_bound(c, t, default_precision());
        let (row_verdict, _) = decide_escalating(default_precision(), MAX_PRECISION, |p| {
            bound = kkl_bound(c, t, p);
            CertifiedReal::from_integer(&larger, p).le(&bound)
        });
        verdict = verdict.and(row_verdict);
        rows.push(KklRow {
            t,
            count_t,
            count_n_minus_t,
            bound,
            verdict: row_verdict,
        });
    }
    Ok(KklReport { n, c, rows, verdict })
}

/// `(c/t)^t <= C(c,t)`, the lower bound showing the axis-aligned family is
/// nearly tight; checked as `c^t <= C(c,t) t^t`.
pub fn axis_aligned_lower_bound_check(c: u32, t: u32) -> bool {
    let lhs = Integer::from(c).pow(t);
    let rhs = binomial(c as i64, t as i64) * Integer::from(t).pow(t);
    lhs <= rhs
}

/// `#{(x, y) : |x| = |y| = w, x + y in V}` as
/// `2^{-c} sum_t K_w^n(t)^2 |(V^perp)_t|`, `c = n - dim V`.
pub fn pair_count_fourier_weight(n: usize, w: usize, v: &Gf2Subspace, enumeration_limit: u64) -> Result<Integer> {
    if v.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.n(),
        });
    }
    if w > n {
        return Err(precondition(format!("weight {w} exceeds ambient {n}")));
    }
    let wd = dual_weights(v, enumeration_limit)?;
    let mut sum = Integer::new();
    for (t, count) in wd.counts().iter().enumerate() {
        if *count == 0 {
            continue;
        }
        let k = krawchouk_value(n as i64, w as i64, t as i64);
        sum += Integer::from(k.square_ref()) * count;
    }
    let c = (n - v.dim()) as u32;
    if !sum.is_divisible_2pow(c) {
        return Err(Error::Inconsistent(format!(
            "Fourier pair count not integral for n = {n}, w = {w}"
        )));
    }
    Ok(sum >> c)
}

/// The weight-`(n-1)/2` pair count for odd `n`.
pub fn pair_count_fourier(n: usize, v: &Gf2Subspace, enumeration_limit: u64) -> Result<Integer> {
    if n % 2 == 0 {
        return Err(precondition(format!("n = {n} must be odd")));
    }
    pair_count_fourier_weight(n, (n - 1) / 2, v, enumeration_limit)
}

/// `f(n, c) = 16 c^2 / n^2 + (e ln(2) c / n)^{ln(2) c}`.
pub fn f_nc(n: u32, c: u32, prec: u32) -> CertifiedReal {
    let quad = Rational::from((16 * c as u64 * c as u64, n as u64 * n as u64));
    let ln2c = CertifiedReal::ln2(prec).mul_int(&Integer::from(c));
    let base = CertifiedReal::e(prec)
        .mul(&ln2c)
        .div(&CertifiedReal::from_i64(n as i64, prec));
    CertifiedReal::from_rational(&quad, prec).add(&base.powf(&ln2c))
}

fn check_lemma_range(n: u32, c: u32) -> Result<()> {
    if n % 2 == 0 {
        return Err(precondition(format!("n = {n} must be odd")));
    }
    if c < 2 || 12 * c > n {
        return Err(precondition(format!("c = {c} outside [2, n/12] for n = {n}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma1Check {
    pub n: u32,
    pub c: u32,
    pub lhs: Rational,
    pub rhs: CertifiedReal,
    pub verdict: Verdict,
    pub precision: u32,
}

/// `sum_{1 <= t <= n-1} C((n-1)/2, floor(t/2))^2 / C(n,t)^2 |(V^perp)_t|`, exact.
pub fn lemma1_lhs(n: u32, wd: &WeightDistribution) -> Rational {
    let h = ((n - 1) / 2) as i64;
    let mut sum = Rational::new();
    for t in 1..n as usize {
        let count = wd.get(t);
        if count == 0 {
            continue;
        }
        let num = binomial(h, t as i64 / 2).square() * count;
        let den = binomial(n as i64, t as i64).square();
        sum += Rational::from((num, den));
    }
    sum
}

/// Lemma instance: exact left side against a certified `f(n, c)`.
pub fn lemma1_instance_check(v: &Gf2Subspace, enumeration_limit: u64) -> Result<Lemma1Check> {
    let n = v.n() as u32;
    let c = n - v.dim() as u32;
    check_lemma_range(n, c)?;
    let lhs = lemma1_lhs(n, &dual_weights(v, enumeration_limit)?);
    let mut rhs = f_nc(n, c, default_precision());
    let (verdict, precision) = decide_escalating(default_precision(), MAX_PRECISION, |p| {
        rhs = f_nc(n, c, p);
        CertifiedReal::from_rational(&lhs, p).le(&rhs)
    });
    Ok(Lemma1Check {
        n,
        c,
        lhs,
        rhs,
        verdict,
        precision,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma2Check {
    pub n: u32,
    pub c: u32,
    /// Enclosure of `f(n, c)` used for the decision.
    pub f: CertifiedReal,
    pub verdict: Verdict,
    pub precision: u32,
}

/// `(2 + x)^{n-1} C^{c-1} <= 2^{c(n-1)}` for rational `x`, `C = C(n, (n-1)/2)`.
fn lemma2_side_holds(x: &Rational, n: u32, c: u32, central: &Integer) -> bool {
    let (p, q) = (x.numer(), x.denom());
    let lhs = (Integer::from(q << 1) + p).pow(n - 1) * Integer::from(central.pow(c - 1));
    let rhs = (Integer::from(1) << (c * (n - 1))) * Integer::from(q.pow(n - 1));
    lhs <= rhs
}

/// `2 + f(n, c) <= 2^c C(n, (n-1)/2)^{(1-c)/(n-1)}` for odd `n >= 59`,
/// `2 <= c <= n/12`, decided in exact integers from the rational endpoints of
/// the `f(n, c)` enclosure.
pub fn lemma2_instance_check(n: u32, c: u32) -> Result<Lemma2Check> {
    if n < 59 {
        return Err(precondition(format!("n = {n} < 59")));
    }
    check_lemma_range(n, c)?;
    let central = binomial(n as i64, ((n - 1) / 2) as i64);
    let mut f = f_nc(n, c, default_precision());
    let (verdict, precision) = decide_escalating(default_precision(), MAX_PRECISION, |p| {
        f = f_nc(n, c, p);
        let (Some(hi), Some(lo)) = (f.hi_rational(), f.lo_rational()) else {
            return Verdict::Undecided;
        };
        if lemma2_side_holds(&hi, n, c, &central) {
            Verdict::Holds
        } else if !lemma2_side_holds(&lo, n, c, &central) {
            Verdict::Violated
        } else {
            Verdict::Undecided
        }
    });
    Ok(Lemma2Check {
        n,
        c,
        f,
        verdict,
        precision,
    })
}

/// Both sides of `C(n/2, m) / C(n+1, 2m+1) <= 2 ((2m+1) / (2(n-m+1)))^{m+1}`
/// for even `n`, `0 <= m <= n/3`.
pub fn binomial_ratio_first_sides(n: u32, m: u32) -> Result<(Rational, Rational)> {
    if n % 2 == 1 || 3 * m > n {
        return Err(precondition(format!(
            "first ratio bound needs even n and m <= n/3, got n = {n}, m = {m}"
        )));
    }
    let (n, m) = (n as i64, m as i64);
    let lhs = Rational::from((binomial(n / 2, m), binomial(n + 1, 2 * m + 1)));
    let base = Rational::from((2 * m + 1, 2 * (n - m + 1)));
    let rhs = base.pow((m + 1) as u32) * 2u32;
    Ok((lhs, rhs))
}

/// Both sides of `C(n/2, m) / C(n+1, 2m) <= (m / (n-m+1))^m` for even `n`,
/// `1 <= m <= (n+1)/3`.
pub fn binomial_ratio_second_sides(n: u32, m: u32) -> Result<(Rational, Rational)> {
    if n % 2 == 1 || m < 1 || 3 * m > n + 1 {
        return Err(precondition(format!(
            "second ratio bound needs even n and 1 <= m <= (n+1)/3, got n = {n}, m = {m}"
        )));
    }
    let (n, m) = (n as i64, m as i64);
    let lhs = Rational::from((binomial(n / 2, m), binomial(n + 1, 2 * m)));
    let rhs = Rational::from((m, n - m + 1)).pow(m as u32);
    Ok((lhs, rhs))
}

pub fn binomial_ratio_first(n: u32, m: u32) -> Result<bool> {
    let (lhs, rhs) = binomial_ratio_first_sides(n, m)?;
    Ok(lhs <= rhs)
}

pub fn binomial_ratio_second(n: u32, m: u32) -> Result<bool> {
    let (lhs, rhs) = binomial_ratio_second_sides(n, m)?;
    Ok(lhs <= rhs)
}

/// Both ratio bounds wherever `m` is in their range; an error when it is in
/// neither.
pub fn binomial_ratio_bounds_check(n: u32, m: u32) -> Result<bool> {
    let first = (n % 2 == 0 && 3 * m <= n).then(|| binomial_ratio_first(n, m));
    let second = (n % 2 == 0 && m >= 1 && 3 * m <= n + 1).then(|| binomial_ratio_second(n, m));
    match (first, second) {
        (None, None) => Err(precondition(format!("(n, m) = ({n}, {m}) outside both ranges"))),
        (a, b) => Ok(a.transpose()?.unwrap_or(true) && b.transpose()?.unwrap_or(true)),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SumRatioCheck {
    pub k: u32,
    pub s: u32,
    /// `sum_{m even <= s} C(k/2, m/2)^2 / sum_{m even <= s} C(k, m)`
    pub lhs: Rational,
    /// Bound with constant `4 / sqrt(pi)`.
    pub verdict: Verdict,
    /// Same with the constant `sqrt(2 / pi)`; informational.
    pub sharp_verdict: Verdict,
    pub precision: u32,
}

/// The ratio bound `lhs <= C sqrt(k / (s (k - s)))`, squared:
/// `lhs^2 pi s (k - s) <= 16 k` for `C = 4/sqrt(pi)` and `<= 2 k` for
/// `C = sqrt(2/pi)`.
pub fn sumratio_check(k: u32, s: u32) -> Result<SumRatioCheck> {
    if k % 2 == 1 || s < 2 || 2 * s > k {
        return Err(precondition(format!(
            "need even k and 2 <= s <= k/2, got k = {k}, s = {s}"
        )));
    }
    let (kk, ss) = (k as i64, s as i64);
    let mut num = Integer::new();
    let mut den = Integer::new();
    for m in (0..=ss).step_by(2) {
        num += binomial(kk / 2, m / 2).square();
        den += binomial(kk, m);
    }
    let lhs = Rational::from((num.clone(), den.clone()));
    let scaled = num.square() * Integer::from(ss * (kk - ss));
    let den2 = den.square();
    let against = |factor: i64| {
        let rhs = Integer::from(factor * kk) * &den2;
        decide_escalating(default_precision(), MAX_PRECISION, |p| {
            CertifiedReal::from_integer(&scaled, p)
                .mul(&CertifiedReal::pi(p))
                .le(&CertifiedReal::from_integer(&rhs, p))
        })
    };
    let (verdict, precision) = against(16);
    let (sharp_verdict, _) = against(2);
    Ok(SumRatioCheck {
        k,
        s,
        lhs,
        verdict,
        sharp_verdict,
        precision,
    })
}

/// Stirling bounds around `n!`.
#[derive(Clone, Debug, PartialEq)]
pub struct RobbinsCheck {
    pub n: u32,
    pub lower: CertifiedReal,
    pub upper: CertifiedReal,
    pub verdict: Verdict,
}

/// `sqrt(2 pi n) (n/e)^n e^{1/(12n+1)} < n! < sqrt(2 pi n) (n/e)^n e^{1/(12n)}`.
pub fn robbins_check(n: u32) -> Result<RobbinsCheck> {
    if n == 0 {
        return Err(precondition("Robbins bounds need n >= 1"));
    }
    let fact = Integer::from(Integer::factorial(n));
    let bounds = |p: u32| {
        let nn = CertifiedReal::from_i64(n as i64, p);
        let stirling = CertifiedReal::pi(p)
            .mul_int(&Integer::from(2 * n as u64))
            .sqrt()
            .mul(&nn.div(&CertifiedReal::e(p)).powu(n));
        let lower = stirling.mul(&CertifiedReal::from_rational(&Rational::from((1, 12 * n as u64 + 1)), p).exp());
        let upper = stirling.mul(&CertifiedReal::from_rational(&Rational::from((1, 12 * n as u64)), p).exp());
        (lower, upper)
    };
    let (mut lower, mut upper) = bounds(default_precision());
    let (verdict, _) = decide_escalating(default_precision(), MAX_PRECISION, |p| {
        (lower, upper) = bounds(p);
        let x = CertifiedReal::from_integer(&fact, p);
        lower.lt(&x).and(x.lt(&upper))
    });
    Ok(RobbinsCheck {
        n,
        lower,
        upper,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::{pair_count_quadratic, restricted_pair_count, DEFAULT_ENUMERATION_LIMIT};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const LIM: u64 = DEFAULT_ENUMERATION_LIMIT;

    fn random_table(rng: &mut ChaCha8Rng, n: u32) -> BooleanTable {
        BooleanTable::from_fn(n, |_| rng.random_range(-1.0..1.0)).unwrap()
    }

    fn random_subspace(rng: &mut ChaCha8Rng, n: usize, rows: usize) -> Gf2Subspace {
        let vs: Vec<Gf2Vector> = (0..rows)
            .map(|_| Gf2Vector::from_bits(&(0..n).map(|_| rng.random::<bool>()).collect::<Vec<_>>()))
            .collect();
        canonicalize(n, &vs).unwrap()
    }

    #[test]
    fn constant_transforms_to_point_mass() {
        let f = BooleanTable::from_fn(4, |_| 1.0).unwrap();
        let h = walsh_transform(&f);
        assert_eq!(h.get(0), 1.0);
        assert!(h.values()[1..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn character_transforms_to_indicator() {
        for w in 0..16 {
            let h = walsh_transform(&BooleanTable::character(4, w).unwrap());
            for z in 0..16 {
                assert_eq!(h.get(z), if z == w { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn double_transform_and_parseval() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for i in 0..1000 {
            let n = (i % 12 + 1) as u32;
            let f = random_table(&mut rng, n);
            let h = walsh_transform(&f);
            let back = walsh_transform(&h);
            let scale = (n as f64).exp2();
            for (a, b) in f.values().iter().zip(back.values()) {
                assert!((a - b * scale).abs() < 1e-9);
            }
            let parseval: f64 = h.values().iter().map(|v| v * v).sum();
            assert!((parseval - f.norm_squared()).abs() < 1e-9);
        }
    }

    #[test]
    fn table_length_is_checked() {
        assert!(BooleanTable::new(3, vec![0.0; 7]).is_err());
        assert!(BooleanTable::new(MAX_TABLE_BITS + 1, vec![]).is_err());
        assert!(walsh_transform_exact(&vec![Integer::new(); 3]).is_err());
    }

    #[test]
    fn convolution_point_mass() {
        let d = BooleanTable::from_fn(3, |x| if x == 0 { 1.0 } else { 0.0 }).unwrap();
        let s = convolution_sides(&d, &d).unwrap();
        assert_eq!(s.lhs, 1.0);
        assert!((s.rhs - 1.0).abs() < 1e-12);
    }

    #[test]
    fn convolution_random_float_and_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..=8 {
            let f = random_table(&mut rng, n);
            let g = random_table(&mut rng, n);
            assert!(convolution_identity_check(&f, &g).unwrap());
            let fi: Vec<Integer> = (0..1 << n).map(|_| Integer::from(rng.random_range(0..2))).collect();
            let gi: Vec<Integer> = (0..1 << n).map(|_| Integer::from(rng.random_range(0..2))).collect();
            assert!(convolution_identity_exact(&fi, &gi).unwrap());
        }
        let fi = vec![Integer::from(1); 4];
        let mut gi = vec![Integer::new(); 4];
        gi[1] = Integer::from(1);
        assert!(convolution_identity_exact(&fi, &gi).unwrap());
    }

    #[test]
    fn convolution_of_weight_and_subspace_indicators_is_pair_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let v = random_subspace(&mut rng, 7, 4);
            let w = BooleanTable::weight_indicator(7, 3).unwrap();
            let g = BooleanTable::subspace_indicator(&v).unwrap();
            let s = convolution_sides(&w, &g).unwrap();
            let brute = pair_count_quadratic(7, 3, &v).unwrap().to_f64();
            assert_eq!(s.lhs, brute);
            assert!(s.agree());
        }
    }

    #[test]
    fn krawchouk_basics() {
        for n in 0..12 {
            for k in 0..=n {
                assert_eq!(krawchouk(n, k, 0).unwrap().value, binomial(n as i64, k as i64));
            }
            for t in 0..=n {
                if n >= 1 {
                    assert_eq!(krawchouk(n, 1, t).unwrap().value, n as i64 - 2 * t as i64);
                }
            }
        }
        assert!(krawchouk(3, 4, 0).is_err());
        assert!(krawchouk(3, 1, 4).is_err());
    }

    #[test]
    fn krawchouk_is_character_sum() {
        for n in 1..=14u32 {
            let sizes: Vec<Vec<u64>> = (0..=n)
                .map(|k| crate::gf2::words_of_weight(n as usize, k as usize))
                .collect();
            for t in 0..=n {
                let x = if t == 0 { 0 } else { (1u64 << t) - 1 };
                for k in 0..=n {
                    let direct: i64 = sizes[k as usize]
                        .iter()
                        .map(|z| if (z & x).count_ones() % 2 == 0 { 1 } else { -1 })
                        .sum();
                    let kv = krawchouk(n, k, t).unwrap();
                    assert_eq!(kv.value, direct, "n={n} k={k} t={t}");
                    assert!(Integer::from(kv.value.abs_ref()) <= binomial(n as i64, k as i64));
                }
            }
        }
    }

    #[test]
    fn middle_closed_form() {
        assert_eq!(middle_krawchouk_closed(3, 0).unwrap().value, 3);
        assert_eq!(middle_krawchouk_closed(3, 1).unwrap().value, 1);
        for n in (1..=31).step_by(2) {
            for t in 0..=n {
                assert_eq!(
                    middle_krawchouk_closed(n, t).unwrap().value,
                    krawchouk(n, (n - 1) / 2, t).unwrap().value
                );
            }
        }
        assert!(middle_krawchouk_closed(4, 0).is_err());
        assert!(middle_krawchouk_closed(5, 6).is_err());
    }

    #[test]
    fn subspace_hat_trivial_cases() {
        let z = subspace_indicator_hat(&Gf2Subspace::zero(4).unwrap(), LIM).unwrap();
        assert_eq!(z.support().dim(), 4);
        assert_eq!(*z.value(), Rational::from((1, 16)));
        let f = subspace_indicator_hat(&Gf2Subspace::full(4).unwrap(), LIM).unwrap();
        assert_eq!(f.entries(LIM).unwrap(), vec![(Gf2Vector::zero(4), Rational::from(1))]);
        assert!(subspace_indicator_hat(&Gf2Subspace::zero(30).unwrap(), 1 << 20).is_err());
    }

    #[test]
    fn subspace_hat_matches_dense_transform() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for i in 0..60 {
            let n = i % 12 + 1;
            let rows = rng.random_range(0..=n);
            let v = random_subspace(&mut rng, n, rows);
            let dense = walsh_transform(&BooleanTable::subspace_indicator(&v).unwrap());
            let sparse = subspace_indicator_hat(&v, LIM).unwrap().to_table().unwrap();
            for (a, b) in dense.values().iter().zip(sparse.values()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kkl_codim_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let n = rng.random_range(3..20);
            let mut v = random_subspace(&mut rng, n, n - 2);
            while v.dim() != n - 2 {
                v = random_subspace(&mut rng, n, n - 2);
            }
            let r = kkl_subspace_check(&v, LIM).unwrap();
            assert_eq!(r.rows.len(), 1);
            assert!(r.rows[0].count_t <= 3);
            let expect = 4.0 * std::f64::consts::E * std::f64::consts::LN_2;
            assert!((r.rows[0].bound.mid_f64() - expect).abs() < 1e-12);
            assert_eq!(r.verdict, Verdict::Holds);
        }
        assert!(kkl_subspace_check(&Gf2Subspace::full(5).unwrap(), LIM).is_err());
    }

    #[test]
    fn kkl_axis_aligned_family() {
        for n in 2..=24 {
            for d in 0..=n - 2 {
                let v = axis_aligned_subspace(n, d).unwrap();
                let c = (n - d) as u32;
                let r = kkl_subspace_check(&v, LIM).unwrap();
                assert_eq!(r.verdict, Verdict::Holds);
                for row in &r.rows {
                    assert_eq!(row.count_t, binomial(c as i64, row.t as i64));
                    assert!(axis_aligned_lower_bound_check(c, row.t));
                }
            }
        }
    }

    #[test]
    fn floor_ln2() {
        for c in 0..200 {
            assert_eq!(floor_ln2_times(c), (c as f64 * std::f64::consts::LN_2).floor() as u32);
        }
    }

    #[test]
    fn fourier_pair_count_examples() {
        assert_eq!(pair_count_fourier(3, &Gf2Subspace::full(3).unwrap(), LIM).unwrap(), 9);
        assert_eq!(pair_count_fourier(3, &Gf2Subspace::zero(3).unwrap(), LIM).unwrap(), 3);
        assert!(pair_count_fourier(4, &Gf2Subspace::zero(4).unwrap(), LIM).is_err());
    }

    #[test]
    fn fourier_pair_count_matches_brute_force_and_restricted_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in (3..=13).step_by(2) {
            for _ in 0..20 {
                let rows = rng.random_range(0..=n);
                let v = random_subspace(&mut rng, n, rows);
                let fourier = pair_count_fourier(n, &v, LIM).unwrap();
                assert_eq!(fourier, pair_count_quadratic(n, (n - 1) / 2, &v).unwrap());
                assert_eq!(fourier, restricted_pair_count(n + 1, &v).unwrap());
            }
        }
    }

    #[test]
    fn f_nc_values() {
        let f = f_nc(59, 2, 192);
        let l = 2.0 * std::f64::consts::LN_2;
        let expect = 64.0 / 3481.0 + (std::f64::consts::E * l / 59.0).powf(l);
        assert!((f.mid_f64() - expect).abs() < 1e-12);
        assert!(f.width() < 1e-12);
        assert!(f_nc(10_000, 2, 192).hi_f64() < 1.0);
        for c in 2..59 / 12 {
            assert_eq!(f_nc(59, c, 192).le(&f_nc(59, c + 1, 192)), Verdict::Holds);
        }
    }

    #[test]
    fn f_nc_not_monotone_for_larger_n() {
        assert_eq!(f_nc(101, 3, 192).lt(&f_nc(101, 2, 192)), Verdict::Holds);
        assert_eq!(f_nc(301, 3, 192).lt(&f_nc(301, 2, 192)), Verdict::Holds);
    }

    #[test]
    fn lemma1_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (n, c, reps) in [(25usize, 2usize, 10), (59, 4, 10)] {
            for _ in 0..reps {
                let mut dual = random_subspace(&mut rng, n, c);
                while dual.dim() != c {
                    dual = random_subspace(&mut rng, n, c);
                }
                let v = dual.orthogonal_complement();
                let r = lemma1_instance_check(&v, LIM).unwrap();
                assert_eq!(r.verdict, Verdict::Holds);
                assert_eq!(r.c, c as u32);
            }
        }
        let ones = Gf2Vector::from_bits(&[true; 25]);
        let v = canonicalize(25, &[ones, Gf2Vector::zero(25)]).unwrap();
        assert_eq!(v.dim(), 1);
        let too_small = lemma1_instance_check(&v.orthogonal_complement(), LIM);
        assert!(too_small.is_err());
        let wd = WeightDistribution::new(25, {
            let mut c = vec![Integer::new(); 26];
            c[0] = Integer::from(1);
            c[25] = Integer::from(1);
            c
        })
        .unwrap();
        assert_eq!(lemma1_lhs(25, &wd), 0);
        assert!(lemma1_instance_check(&Gf2Subspace::full(24).unwrap(), LIM).is_err());
    }

    #[test]
    fn lemma2_examples() {
        for (n, c) in [(59, 2), (101, 8), (59, 4)] {
            let r = lemma2_instance_check(n, c).unwrap();
            assert_eq!(r.verdict, Verdict::Holds, "n={n} c={c}");
        }
        assert!(lemma2_instance_check(57, 2).is_err());
        assert!(lemma2_instance_check(59, 5).is_err());
        assert!(lemma2_instance_check(60, 2).is_err());
    }

    #[test]
    fn lemma2_base_case_fails_below_53_in_float() {
        let g = |n: f64| {
            let l = 2.0 * std::f64::consts::LN_2;
            2.0 + 64.0 / (n * n) + (std::f64::consts::E * l / n).powf(l) - 2.0 * (n.sqrt() / 2.0).powf(1.0 / (n - 1.0))
        };
        assert!(g(53.0) <= 0.0);
        assert!(g(41.0) > 0.0);
    }

    #[test]
    fn binomial_ratio_examples() {
        assert!(binomial_ratio_first(10, 0).unwrap());
        assert!(binomial_ratio_first(12, 4).unwrap());
        assert!(binomial_ratio_second(12, 4).unwrap());
        assert!(binomial_ratio_first(12, 5).is_err());
        assert!(binomial_ratio_second(12, 0).is_err());
        assert!(binomial_ratio_bounds_check(11, 1).is_err());
        assert!(binomial_ratio_bounds_check(12, 5).is_err());
        for n in (0..=120).step_by(2) {
            for m in 0..=(n + 1) / 3 {
                assert!(binomial_ratio_bounds_check(n, m).unwrap(), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn binomial_ratio_first_is_equality_at_zero() {
        for n in (0..50).step_by(2) {
            let (lhs, rhs) = binomial_ratio_first_sides(n, 0).unwrap();
            assert_eq!(lhs, Rational::from((1, n + 1)));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn binomial_ratio_matches_cross_multiplied_form() {
        for n in (0..=80i64).step_by(2) {
            for m in 0..=(n + 1) / 3 {
                if 3 * m <= n {
                    let l = binomial(n / 2, m) * Integer::from(2 * (n - m + 1)).pow((m + 1) as u32);
                    let r =
                        Integer::from(2) * Integer::from(2 * m + 1).pow((m + 1) as u32) * binomial(n + 1, 2 * m + 1);
                    assert_eq!(binomial_ratio_first(n as u32, m as u32).unwrap(), l <= r);
                }
                if m >= 1 {
                    let l = binomial(n / 2, m) * Integer::from(n - m + 1).pow(m as u32);
                    let r = Integer::from(m).pow(m as u32) * binomial(n + 1, 2 * m);
                    assert_eq!(binomial_ratio_second(n as u32, m as u32).unwrap(), l <= r);
                }
            }
        }
    }

    #[test]
    fn sumratio_examples() {
        let r = sumratio_check(4, 2).unwrap();
        assert_eq!(r.lhs, Rational::from((5, 7)));
        assert_eq!(r.verdict, Verdict::Holds);
        for k in (4..=60).step_by(2) {
            for s in 2..=k / 2 {
                assert_eq!(sumratio_check(k, s).unwrap().verdict, Verdict::Holds);
            }
        }
        assert!(sumratio_check(5, 2).is_err());
        assert!(sumratio_check(8, 1).is_err());
        assert!(sumratio_check(8, 5).is_err());
    }

    #[test]
    fn robbins() {
        let r = robbins_check(1).unwrap();
        assert!((r.lower.mid_f64() - 0.995870).abs() < 1e-6);
        assert!((r.upper.mid_f64() - 1.002274).abs() < 1e-6);
        for n in 1..=60 {
            assert_eq!(robbins_check(n).unwrap().verdict, Verdict::Holds);
        }
        assert!(robbins_check(0).is_err());
    }
}
