//! Outward-rounded interval arithmetic on MPFR floats.
//!
//! Every [`CertifiedReal`] is a pair `lo <= x <= hi` where both endpoints are
//! computed with directed rounding, so the true value is always enclosed.
//! Comparisons return a three-valued [`Verdict`] and never guess when the
//! enclosures overlap.

use std::cmp::Ordering;
use std::fmt;

use rug::float::{Constant, Round, Special};
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default working precision in mantissa bits.
pub const DEFAULT_PRECISION: u32 = 192;
/// Highest precision tried before giving up on an interval decision.
pub const MAX_PRECISION: u32 = 1024;
/// Environment override for the starting precision.
pub const PRECISION_ENV: &str = "SUBRANK_PRECISION_BITS";

/// Starting precision, honouring `SUBRANK_PRECISION_BITS` when it parses to a
/// value in `[64, 65536]`.
pub fn default_precision() -> u32 {
    std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<u32>().ok())
        .filter(|p| (64..=65536).contains(p))
        .unwrap_or(DEFAULT_PRECISION)
}

/// Outcome of a sound comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Violated,
    Undecided,
}

impl Verdict {
    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Holds
        } else {
            Verdict::Violated
        }
    }

    /// Conjunction: any violation dominates, then any undecided.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Violated, _) | (_, Violated) => Violated,
            (Undecided, _) | (_, Undecided) => Undecided,
            _ => Holds,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Undecided => "undecided",
        })
    }
}

/// Runs `decide` at increasing precision (doubling from `start` up to `max`)
/// until the verdict is no longer [`Verdict::Undecided`]. Returns the verdict
/// and the precision that produced it.
pub fn decide_escalating<F>(start: u32, max: u32, mut decide: F) -> (Verdict, u32)
where
    F: FnMut(u32) -> Verdict,
{
    let mut prec = start.max(16);
    loop {
        let v = decide(prec);
        if v != Verdict::Undecided || prec >= max {
            return (v, prec);
        }
        prec = (prec * 2).min(max);
    }
}

fn rounded<T>(prec: u32, val: T, round: Round) -> Float
where
    Float: rug::Assign<T> + rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, val, round).0
}

/// Closed interval `[lo, hi]` with outward rounding.
#[derive(Clone, PartialEq)]
pub struct CertifiedReal {
    lo: Float,
    hi: Float,
}

impl fmt::Debug for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:.6e}, {:.6e}]@{}",
            self.lo.to_f64_round(Round::Down),
            self.hi.to_f64_round(Round::Up),
            self.prec()
        )
    }
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            self.lo.to_f64_round(Round::Down),
            self.hi.to_f64_round(Round::Up)
        )
    }
}

impl CertifiedReal {
    /// Interval from explicit endpoints. Fails if `lo > hi` or either is NaN.
    pub fn from_bounds(lo: Float, hi: Float) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::Inconsistent("interval endpoints out of order".into()));
        }
        Ok(Self { lo, hi })
    }

    pub fn from_integer(x: &Integer, prec: u32) -> Self {
        Self {
            lo: rounded(prec, x, Round::Down),
            hi: rounded(prec, x, Round::Up),
        }
    }

    pub fn from_i64(x: i64, prec: u32) -> Self {
        Self::from_integer(&Integer::from(x), prec)
    }

    pub fn from_rational(x: &Rational, prec: u32) -> Self {
        Self {
            lo: rounded(prec, x, Round::Down),
            hi: rounded(prec, x, Round::Up),
        }
    }

    pub fn pi(prec: u32) -> Self {
        Self {
            lo: rounded(prec, Constant::Pi, Round::Down),
            hi: rounded(prec, Constant::Pi, Round::Up),
        }
    }

    pub fn ln2(prec: u32) -> Self {
        Self {
            lo: rounded(prec, Constant::Log2, Round::Down),
            hi: rounded(prec, Constant::Log2, Round::Up),
        }
    }

    /// Euler's number `e`.
    pub fn e(prec: u32) -> Self {
        Self::from_i64(1, prec).exp()
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64_round(Round::Down)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64_round(Round::Up)
    }

    pub fn mid_f64(&self) -> f64 {
        0.5 * (self.lo.to_f64() + self.hi.to_f64())
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> Float {
        rounded(self.prec(), &self.hi - &self.lo, Round::Up)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    fn prec_with(&self, other: &Self) -> u32 {
        self.prec().max(other.prec())
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.prec_with(other);
        Self {
            lo: rounded(p, &self.lo + &other.lo, Round::Down),
            hi: rounded(p, &self.hi + &other.hi, Round::Up),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.prec_with(other);
        Self {
            lo: rounded(p, &self.lo - &other.hi, Round::Down),
            hi: rounded(p, &self.hi - &other.lo, Round::Up),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            lo: Float::with_val(self.lo.prec(), -&self.hi),
            hi: Float::with_val(self.hi.prec(), -&self.lo),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.prec_with(other);
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let d = rounded(p, a * b, Round::Down);
            let u = rounded(p, a * b, Round::Up);
            // 0 * inf is NaN; treat the product as unbounded.
            let d = if d.is_nan() {
                Float::with_val(p, Special::NegInfinity)
            } else {
                d
            };
            let u = if u.is_nan() {
                Float::with_val(p, Special::Infinity)
            } else {
                u
            };
            lo = Some(match lo {
                Some(cur) if cur <= d => cur,
                _ => d,
            });
            hi = Some(match hi {
                Some(cur) if cur >= u => cur,
                _ => u,
            });
        }
        Self {
            lo: lo.expect("four candidates"),
            hi: hi.expect("four candidates"),
        }
    }

    /// Multiplication by an exact integer.
    pub fn mul_int(&self, k: &Integer) -> Self {
        self.mul(&Self::from_integer(k, self.prec()))
    }

    pub fn recip(&self) -> Self {
        let p = self.prec();
        if self.lo <= 0 && self.hi >= 0 {
            return Self::unbounded(p);
        }
        Self {
            lo: rounded(p, 1 / &self.hi, Round::Down),
            hi: rounded(p, 1 / &self.lo, Round::Up),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.recip())
    }

    fn unbounded(p: u32) -> Self {
        Self {
            lo: Float::with_val(p, Special::NegInfinity),
            hi: Float::with_val(p, Special::Infinity),
        }
    }

    /// Natural logarithm; a nonpositive lower endpoint maps to `-inf`.
    pub fn ln(&self) -> Self {
        let p = self.prec();
        let lo = if self.lo <= 0 {
            Float::with_val(p, Special::NegInfinity)
        } else {
            rounded(p, self.lo.ln_ref(), Round::Down)
        };
        let hi = if self.hi <= 0 {
            Float::with_val(p, Special::NegInfinity)
        } else {
            rounded(p, self.hi.ln_ref(), Round::Up)
        };
        Self { lo, hi }
    }

    pub fn log2(&self) -> Self {
        let p = self.prec();
        let lo = if self.lo <= 0 {
            Float::with_val(p, Special::NegInfinity)
        } else {
            rounded(p, self.lo.log2_ref(), Round::Down)
        };
        let hi = if self.hi <= 0 {
            Float::with_val(p, Special::NegInfinity)
        } else {
            rounded(p, self.hi.log2_ref(), Round::Up)
        };
        Self { lo, hi }
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        Self {
            lo: rounded(p, self.lo.exp_ref(), Round::Down),
            hi: rounded(p, self.hi.exp_ref(), Round::Up),
        }
    }

    /// Square root; negative parts of the interval are clamped to zero.
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        let zero = Float::new(p);
        let lo = if self.lo <= 0 {
            zero.clone()
        } else {
            rounded(p, self.lo.sqrt_ref(), Round::Down)
        };
        let hi = if self.hi <= 0 {
            zero
        } else {
            rounded(p, self.hi.sqrt_ref(), Round::Up)
        };
        Self { lo, hi }
    }

    /// `self^n` for a nonnegative interval (negative lower endpoints are
    /// clamped to zero).
    pub fn powu(&self, n: u32) -> Self {
        let p = self.prec();
        let lo = if self.lo <= 0 {
            Float::new(p)
        } else {
            rounded(p, (&self.lo).pow(n), Round::Down)
        };
        let hi = rounded(p, (&self.hi).pow(n), Round::Up);
        let hi = if self.hi < 0 { Float::new(p) } else { hi };
        Self { lo, hi }
    }

    /// `self^y = exp(y ln self)` for a positive base.
    pub fn powf(&self, y: &Self) -> Self {
        y.mul(&self.ln()).exp()
    }

    /// Certain `self <= other`.
    pub fn le(&self, other: &Self) -> Verdict {
        if self.hi <= other.lo {
            Verdict::Holds
        } else if self.lo > other.hi {
            Verdict::Violated
        } else {
            Verdict::Undecided
        }
    }

    /// Certain `self < other`.
    pub fn lt(&self, other: &Self) -> Verdict {
        if self.hi < other.lo {
            Verdict::Holds
        } else if self.lo >= other.hi {
            Verdict::Violated
        } else {
            Verdict::Undecided
        }
    }

    /// Certain `self >= other`.
    pub fn ge(&self, other: &Self) -> Verdict {
        other.le(self)
    }

    /// Largest integer certainly `<= self`, when the floor is determined by
    /// the enclosure (both endpoints share the same floor).
    pub fn floor_exact(&self) -> Option<Integer> {
        let a = self.lo.to_integer_round(Round::Down)?.0;
        let b = self.hi.to_integer_round(Round::Down)?.0;
        (a == b).then_some(a)
    }

    /// Upper endpoint as an exact rational.
    pub fn hi_rational(&self) -> Option<Rational> {
        self.hi.to_rational()
    }

    /// Lower endpoint as an exact rational.
    pub fn lo_rational(&self) -> Option<Rational> {
        self.lo.to_rational()
    }
}

/// Certified enclosure of `log2(x)` for a positive integer `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogBound {
    value: CertifiedReal,
}

impl LogBound {
    pub fn interval(&self) -> &CertifiedReal {
        &self.value
    }

    pub fn lo_f64(&self) -> f64 {
        self.value.lo_f64()
    }

    pub fn hi_f64(&self) -> f64 {
        self.value.hi_f64()
    }

    pub fn precision(&self) -> u32 {
        self.value.prec()
    }

    pub fn from_interval(value: CertifiedReal) -> Self {
        Self { value }
    }

    /// `log2(x^k) = k log2(x)`.
    pub fn scale(&self, k: u64) -> Self {
        Self {
            value: self.value.mul_int(&Integer::from(k)),
        }
    }

    /// `log2(x y)`.
    pub fn add(&self, other: &Self) -> Self {
        Self {
            value: self.value.add(&other.value),
        }
    }

    /// Sound `x <= y` decision from the two enclosures.
    pub fn le(&self, other: &Self) -> Verdict {
        self.value.le(&other.value)
    }
}

/// Encloses `log2(x)` at `precision` mantissa bits.
///
/// Exact powers of two produce a zero-width enclosure.
pub fn log2_interval(x: &Integer, precision: u32) -> Result<LogBound> {
    if *x <= 0 {
        return Err(Error::Precondition(format!("log2 of nonpositive integer {x}")));
    }
    let prec = precision.max(16);
    let lo_x = rounded(prec, x, Round::Down);
    let hi_x = rounded(prec, x, Round::Up);
    let lo = rounded(prec, lo_x.log2_ref(), Round::Down);
    let hi = rounded(prec, hi_x.log2_ref(), Round::Up);
    Ok(LogBound {
        value: CertifiedReal { lo, hi },
    })
}
