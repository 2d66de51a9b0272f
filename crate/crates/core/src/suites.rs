//! Batch identity and inequality suites. Each suite expands into independent
//! instances, checks them in parallel on the current rayon pool and returns
//! the rows in instance order.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::certified::{CertifiedReal, Verdict};
use crate::combinatorics::binomial;
use crate::error::{precondition, Error, Result};
use crate::exact_bounds::check_f_properties;
use crate::gf2::{pair_count_quadratic, DEFAULT_ENUMERATION_LIMIT};
use crate::sampling::{instance_rng, random_subspace, random_subspace_of_codim};
use crate::spectral::{
    axis_aligned_lower_bound_check, axis_aligned_subspace, binomial_ratio_first_sides, binomial_ratio_second_sides,
    kkl_subspace_check, krawchouk, lemma1_instance_check, lemma2_instance_check, middle_krawchouk_closed,
    pair_count_fourier, sumratio_check, KklReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Props,
    Bounds,
    Sumratio,
    Kraw,
    Fourier,
    Kkl,
    Lem12,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Props,
        Suite::Bounds,
        Suite::Sumratio,
        Suite::Kraw,
        Suite::Fourier,
        Suite::Kkl,
        Suite::Lem12,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Props => "props",
            Suite::Bounds => "bounds",
            Suite::Sumratio => "sumratio",
            Suite::Kraw => "kraw",
            Suite::Fourier => "fourier",
            Suite::Kkl => "kkl",
            Suite::Lem12 => "lem12",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| precondition(format!("unknown suite {s:?}")))
    }
}

/// Range flags; `None` picks the suite default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub suite: Suite,
    pub n_max: Option<u32>,
    pub k_max: Option<u32>,
    pub samples: Option<u32>,
    pub seed: u64,
}

impl SuiteOptions {
    pub fn new(suite: Suite) -> Self {
        Self {
            suite,
            n_max: None,
            k_max: None,
            samples: None,
            seed: 0,
        }
    }

    /// Resolved `(n_max or k_max, samples)` for the suite.
    pub fn resolved(&self) -> (u32, u32) {
        let (range, samples) = match self.suite {
            Suite::Props => (self.k_max.unwrap_or(400), 0),
            Suite::Bounds => (self.n_max.unwrap_or(500), 0),
            Suite::Sumratio => (self.k_max.unwrap_or(400), 0),
            Suite::Kraw => (self.n_max.unwrap_or(31), 0),
            Suite::Fourier => (self.n_max.unwrap_or(15), 100),
            Suite::Kkl => (self.n_max.unwrap_or(24), 10_000),
            Suite::Lem12 => (self.n_max.unwrap_or(101), 100),
        };
        (range, self.samples.unwrap_or(samples))
    }
}

/// One checked instance. `informational` rows never affect the outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteRow {
    pub check: String,
    pub instance: String,
    pub lhs: String,
    pub rhs: String,
    pub verdict: Verdict,
    pub informational: bool,
    pub seed: Option<u64>,
}

impl SuiteRow {
    fn new(check: &str, instance: String, lhs: String, rhs: String, verdict: Verdict) -> Self {
        Self {
            check: check.to_string(),
            instance,
            lhs,
            rhs,
            verdict,
            informational: false,
            seed: None,
        }
    }

    fn seeded(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    fn informational(mut self) -> Self {
        self.informational = true;
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub rows: usize,
    pub holds: usize,
    pub violated: usize,
    pub undecided: usize,
    pub informational: usize,
    pub informational_violations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub options: SuiteOptions,
    pub rows: Vec<SuiteRow>,
    pub summary: SuiteSummary,
}

impl SuiteReport {
    fn new(options: SuiteOptions, rows: Vec<SuiteRow>) -> Self {
        let mut s = SuiteSummary {
            rows: rows.len(),
            ..Default::default()
        };
        for r in &rows {
            if r.informational {
                s.informational += 1;
                s.informational_violations += usize::from(r.verdict != Verdict::Holds);
                continue;
            }
            match r.verdict {
                Verdict::Holds => s.holds += 1,
                Verdict::Violated => s.violated += 1,
                Verdict::Undecided => s.undecided += 1,
            }
        }
        Self {
            options,
            rows,
            summary: s,
        }
    }

    pub fn all_hold(&self) -> bool {
        self.summary.violated == 0 && self.summary.undecided == 0
    }

    /// 0 when every asserted row holds, 1 on a violation, 2 when something is
    /// undecided and nothing is violated.
    pub fn exit_code(&self) -> i32 {
        if self.summary.violated > 0 {
            1
        } else if self.summary.undecided > 0 {
            2
        } else {
            0
        }
    }

    pub fn write_csv<W: Write>(&self, out: W, extra: &[(&str, String)]) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec![
            "suite",
            "check",
            "instance",
            "lhs",
            "rhs",
            "verdict",
            "informational",
            "seed",
        ];
        header.extend(extra.iter().map(|(h, _)| *h));
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![
                self.options.suite.to_string(),
                r.check.clone(),
                r.instance.clone(),
                r.lhs.clone(),
                r.rhs.clone(),
                r.verdict.to_string(),
                r.informational.to_string(),
                r.seed.map(|s| s.to_string()).unwrap_or_default(),
            ];
            rec.extend(extra.iter().map(|(_, v)| v.clone()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn approx(x: &Rational) -> String {
    Float::with_val(64, x).to_string_radix(10, Some(12))
}

/// Runs one suite on the current rayon pool.
pub fn run_suite(options: &SuiteOptions) -> Result<SuiteReport> {
    let (range, samples) = options.resolved();
    let seed = options.seed;
    let rows = match options.suite {
        Suite::Props => props(range)?,
        Suite::Bounds => bounds(range)?,
        Suite::Sumratio => sumratio(range)?,
        Suite::Kraw => kraw(range)?,
        Suite::Fourier => fourier(range, samples, seed)?,
        Suite::Kkl => kkl(range, samples, seed)?,
        Suite::Lem12 => lem12(range, samples, seed)?,
    };
    Ok(SuiteReport::new(options.clone(), rows))
}

/// Runs one suite on a dedicated pool of `jobs` threads. The rows do not
/// depend on `jobs`.
pub fn run_suite_with_jobs(options: &SuiteOptions, jobs: usize) -> Result<SuiteReport> {
    if jobs == 0 {
        return Err(precondition("jobs must be >= 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    pool.install(|| run_suite(options))
}

fn flatten(rows: Vec<Result<Vec<SuiteRow>>>) -> Result<Vec<SuiteRow>> {
    let mut out = Vec::new();
    for r in rows {
        out.extend(r?);
    }
    Ok(out)
}

fn props(k_max: u32) -> Result<Vec<SuiteRow>> {
    let ks: Vec<u32> = (4..=k_max).step_by(2).collect();
    let rows: Vec<Result<Vec<SuiteRow>>> = ks
        .par_iter()
        .map(|&k| {
            let ok = check_f_properties(k)?;
            Ok(vec![SuiteRow::new(
                "f-properties",
                format!("k={k}"),
                ok.to_string(),
                "true".into(),
                Verdict::from_bool(ok),
            )])
        })
        .collect();
    flatten(rows)
}

fn bounds(n_max: u32) -> Result<Vec<SuiteRow>> {
    let ns: Vec<u32> = (0..=n_max).step_by(2).collect();
    let rows: Vec<Result<Vec<SuiteRow>>> = ns
        .par_iter()
        .map(|&n| {
            let mut out = Vec::new();
            for m in 0..=(n + 1) / 3 {
                if 3 * m <= n {
                    let (l, r) = binomial_ratio_first_sides(n, m)?;
                    let v = Verdict::from_bool(l <= r);
                    out.push(SuiteRow::new(
                        "ratio-odd",
                        format!("n={n};m={m}"),
                        approx(&l),
                        approx(&r),
                        v,
                    ));
                }
                if m >= 1 {
                    let (l, r) = binomial_ratio_second_sides(n, m)?;
                    let v = Verdict::from_bool(l <= r);
                    out.push(SuiteRow::new(
                        "ratio-even",
                        format!("n={n};m={m}"),
                        approx(&l),
                        approx(&r),
                        v,
                    ));
                }
            }
            Ok(out)
        })
        .collect();
    flatten(rows)
}

fn sumratio(k_max: u32) -> Result<Vec<SuiteRow>> {
    let ks: Vec<u32> = (4..=k_max).step_by(2).collect();
    let rows: Vec<Result<Vec<SuiteRow>>> = ks
        .par_iter()
        .map(|&k| {
            let mut out = Vec::new();
            for s in (2..=k / 2).step_by(2) {
                let c = sumratio_check(k, s)?;
                let inst = format!("k={k};s={s}");
                let bound = |num: f64| num * (k as f64 / (s as f64 * (k - s) as f64)).sqrt();
                let pi = std::f64::consts::PI;
                out.push(SuiteRow::new(
                    "sumratio",
                    inst.clone(),
                    approx(&c.lhs),
                    format!("{:.12e}", bound(4.0 / pi.sqrt())),
                    c.verdict,
                ));
                out.push(
                    SuiteRow::new(
                        "sumratio-sharp",
                        inst,
                        approx(&c.lhs),
                        format!("{:.12e}", bound((2.0 / pi).sqrt())),
                        c.sharp_verdict,
                    )
                    .informational(),
                );
            }
            Ok(out)
        })
        .collect();
    flatten(rows)
}

fn kraw(n_max: u32) -> Result<Vec<SuiteRow>> {
    let ns: Vec<u32> = (1..=n_max).step_by(2).collect();
    let rows: Vec<Result<Vec<SuiteRow>>> = ns
        .par_iter()
        .map(|&n| {
            let mut out = Vec::new();
            for t in 0..=n {
                let closed = middle_krawchouk_closed(n, t)?.value;
                let sum = krawchouk(n, (n - 1) / 2, t)?.value;
                let v = Verdict::from_bool(closed == sum);
                out.push(SuiteRow::new(
                    "middle-krawchouk",
                    format!("n={n};t={t}"),
                    closed.to_string(),
                    sum.to_string(),
                    v,
                ));
            }
            Ok(out)
        })
        .collect();
    flatten(rows)
}

fn fourier(n_max: u32, samples: u32, seed: u64) -> Result<Vec<SuiteRow>> {
    let jobs: Vec<(usize, u32)> = (3..=n_max as usize)
        .step_by(2)
        .flat_map(|n| (0..samples).map(move |i| (n, i)))
        .collect();
    let rows: Vec<Result<Vec<SuiteRow>>> = jobs
        .par_iter()
        .map(|&(n, i)| {
            let mut rng = instance_rng(seed, &format!("fourier:{n}:{i}"));
            let v = random_subspace(n, 0, n, &mut rng)?;
            let lhs = pair_count_fourier(n, &v, DEFAULT_ENUMERATION_LIMIT)?;
            let rhs = pair_count_quadratic(n, (n - 1) / 2, &v)?;
            let verdict = Verdict::from_bool(lhs == rhs);
            let inst = format!("n={n};dim={};sample={i}", v.dim());
            Ok(vec![SuiteRow::new(
                "fourier-pair-count",
                inst,
                lhs.to_string(),
                rhs.to_string(),
                verdict,
            )
            .seeded(seed)])
        })
        .collect();
    flatten(rows)
}

fn kkl_rows(instance: &str, report: &KklReport, seed: Option<u64>) -> Vec<SuiteRow> {
    report
        .rows
        .iter()
        .map(|r| {
            let lhs = format!("{}/{}", r.count_t, r.count_n_minus_t);
            let mut row = SuiteRow::new(
                "kkl",
                format!("{instance};t={}", r.t),
                lhs,
                r.bound.to_string(),
                r.verdict,
            );
            row.seed = seed;
            row
        })
        .collect()
}

fn kkl(n_max: u32, samples: u32, seed: u64) -> Result<Vec<SuiteRow>> {
    if n_max < 2 {
        return Err(precondition("kkl suite needs n_max >= 2"));
    }
    let span = n_max - 1;
    let sampled: Vec<Result<Vec<SuiteRow>>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let n = (2 + i % span) as usize;
            let mut rng = instance_rng(seed, &format!("kkl:{i}"));
            let c = rand::Rng::random_range(&mut rng, 2..=n);
            let v = random_subspace_of_codim(n, c, &mut rng)?;
            let report = kkl_subspace_check(&v, DEFAULT_ENUMERATION_LIMIT)?;
            Ok(kkl_rows(&format!("n={n};c={c};sample={i}"), &report, Some(seed)))
        })
        .collect();
    let mut rows = flatten(sampled)?;
    let family: Vec<(usize, usize)> = (2..=n_max as usize)
        .flat_map(|n| (0..=n - 2).map(move |d| (n, d)))
        .collect();
    let axis: Vec<Result<Vec<SuiteRow>>> = family
        .par_iter()
        .map(|&(n, d)| {
            let v = axis_aligned_subspace(n, d)?;
            let report = kkl_subspace_check(&v, DEFAULT_ENUMERATION_LIMIT)?;
            let inst = format!("axis;n={n};d={d}");
            let c = report.c;
            let mut out = kkl_rows(&inst, &report, None);
            for r in &report.rows {
                let exact = r.count_t == binomial(c as i64, r.t as i64);
                let lower = axis_aligned_lower_bound_check(c, r.t);
                out.push(SuiteRow::new(
                    "axis-lower-bound",
                    format!("{inst};t={}", r.t),
                    format!("({c}/{})^{}", r.t, r.t),
                    r.count_t.to_string(),
                    Verdict::from_bool(exact && lower),
                ));
            }
            Ok(out)
        })
        .collect();
    rows.extend(flatten(axis)?);
    Ok(rows)
}

fn lem12(n_max: u32, samples: u32, seed: u64) -> Result<Vec<SuiteRow>> {
    let pairs: Vec<(u32, u32)> = (59..=n_max)
        .step_by(2)
        .flat_map(|n| (2..=n / 12).map(move |c| (n, c)))
        .collect();
    let rows: Vec<Result<Vec<SuiteRow>>> = pairs
        .par_iter()
        .map(|&(n, c)| {
            let mut out = Vec::new();
            let l2 = lemma2_instance_check(n, c)?;
            let central = binomial(n as i64, ((n - 1) / 2) as i64).to_f64();
            let rhs = (c as f64).exp2() * central.powf((1.0 - c as f64) / (n as f64 - 1.0));
            let lhs = CertifiedReal::from_i64(2, l2.f.prec()).add(&l2.f);
            out.push(SuiteRow::new(
                "lem2",
                format!("n={n};c={c}"),
                lhs.to_string(),
                format!("{rhs:.12e}"),
                l2.verdict,
            ));
            let lem1: Vec<Result<SuiteRow>> = (0..samples)
                .into_par_iter()
                .map(|i| {
                    let mut rng = instance_rng(seed, &format!("lem1:{n}:{c}:{i}"));
                    let v = random_subspace_of_codim(n as usize, c as usize, &mut rng)?;
                    let r = lemma1_instance_check(&v, DEFAULT_ENUMERATION_LIMIT)?;
                    let inst = format!("n={n};c={c};sample={i}");
                    Ok(SuiteRow::new("lem1", inst, approx(&r.lhs), r.rhs.to_string(), r.verdict).seeded(seed))
                })
                .collect();
            for r in lem1 {
                out.push(r?);
            }
            Ok(out)
        })
        .collect();
    flatten(rows)
}
