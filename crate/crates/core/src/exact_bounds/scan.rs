//! The full `(k, r)` scan: parallel over `k`, merged in key order, with an
//! append-only JSON-lines cache for resuming long runs.

use std::collections::{BTreeMap, HashMap};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{s_scan, verify_with_context, Decision, KContext, Method, RankCertificate, VerifyPolicy};
use crate::error::{precondition, Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub k_min: u32,
    pub k_max: u32,
    pub jobs: usize,
    pub policy: VerifyPolicy,
    /// When false all timing fields are zero, making reports reproducible
    /// byte for byte.
    pub record_timing: bool,
    /// Also record, per cell, the smallest `s` for which the s-scan bound
    /// alone certifies it.
    pub audit_s_scan: bool,
}

impl ScanOptions {
    pub fn new(k_max: u32) -> Self {
        Self {
            k_min: 4,
            k_max,
            jobs: 1,
            policy: VerifyPolicy::default(),
            record_timing: true,
            audit_s_scan: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.k_min < 4 || self.k_min % 2 != 0 || self.k_max % 2 != 0 || self.k_max < self.k_min {
            return Err(precondition(format!(
                "k range [{}, {}] must be even with 4 <= k_min <= k_max",
                self.k_min, self.k_max
            )));
        }
        if self.jobs == 0 {
            return Err(precondition("jobs must be >= 1"));
        }
        Ok(())
    }
}

/// One scan row: the certificate and, when audited, the s-scan outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    #[serde(flatten)]
    pub certificate: RankCertificate,
    /// `Some(Some(s))`: the s-scan certifies with this `s`; `Some(None)`: it
    /// does not; `None`: not audited.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_scan_audit: Option<Option<u32>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub cells: u64,
    pub verified: u64,
    pub counterexamples: u64,
    pub inconclusive: u64,
    pub k_certified: u64,
    pub k_total: u64,
    pub by_method: BTreeMap<String, u64>,
    pub by_decision: BTreeMap<String, u64>,
    /// Cells the s-scan alone certifies, when audited.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_scan_certified: Option<u64>,
    pub cached_cells: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub k_min: u32,
    pub k_max: u32,
    pub policy: String,
    pub rows: Vec<ScanRow>,
    /// `(k, certified)` for every scanned `k`.
    pub main_bound: Vec<(u32, bool)>,
    /// Cells that did not verify.
    pub failures: Vec<(u32, u32)>,
    pub summary: ScanSummary,
    pub elapsed_ms: u64,
}

impl ScanReport {
    pub fn all_verified(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn has_counterexample(&self) -> bool {
        self.summary.counterexamples > 0
    }

    /// One CSV row per `(k, r)` cell.
    pub fn write_csv<W: Write>(&self, out: W, extra: &[(&str, String)]) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec![
            "k",
            "r",
            "method",
            "s",
            "decision",
            "verified",
            "counterexample",
            "precision",
            "s_scan",
            "elapsed_ms",
        ];
        header.extend(extra.iter().map(|(h, _)| *h));
        w.write_record(&header)?;
        for row in &self.rows {
            let c = &row.certificate;
            let mut rec = vec![
                c.k.to_string(),
                c.r.to_string(),
                c.method.to_string(),
                c.s.map(|s| s.to_string()).unwrap_or_default(),
                c.decision.to_string(),
                c.verified.to_string(),
                c.counterexample.to_string(),
                c.precision.map(|p| p.to_string()).unwrap_or_default(),
                match row.s_scan_audit {
                    None => String::new(),
                    Some(None) => "none".into(),
                    Some(Some(s)) => s.to_string(),
                },
                c.elapsed_ms.to_string(),
            ];
            rec.extend(extra.iter().map(|(_, v)| v.clone()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CacheLine {
    key: String,
    row: ScanRow,
}

/// Append-only JSON-lines cache keyed by `(k, r, method-set hash)`.
pub struct ScanCache {
    path: PathBuf,
    entries: HashMap<String, ScanRow>,
    writer: Mutex<BufWriter<File>>,
}

impl ScanCache {
    /// Opens (creating if needed) and loads the cache. A torn last line from
    /// an interrupted run is ignored.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut entries = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(&path)?);
            for line in reader.lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                if let Ok(entry) = serde_json::from_str::<CacheLine>(&line) {
                    entries.insert(entry.key, entry.row);
                }
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(Self {
            path,
            entries,
            writer: Mutex::new(BufWriter::new(file)),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn get(&self, key: &str) -> Option<&ScanRow> {
        self.entries.get(key)
    }

    fn append(&self, rows: &[(String, ScanRow)]) -> Result<()> {
        let mut w = self.writer.lock().expect("cache writer poisoned");
        for (key, row) in rows {
            let line = serde_json::to_string(&CacheLine {
                key: key.clone(),
                row: row.clone(),
            })?;
            writeln!(w, "{line}")?;
        }
        w.flush()?;
        Ok(())
    }
}

// Cells computed by a different build or with different settings never match.
fn policy_hash(policy: &VerifyPolicy) -> String {
    let mut h = Sha256::new();
    h.update(crate::report::code_version().as_bytes());
    h.update(policy.signature().as_bytes());
    let digest = h.finalize();
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn cache_key(k: u32, r: u32, hash: &str) -> String {
    format!("verify:{k}:{r}:{hash}")
}

fn scan_k(k: u32, opts: &ScanOptions, cache: Option<&ScanCache>, hash: &str) -> Result<(Vec<ScanRow>, u64)> {
    let ctx = KContext::new(k)?;
    let mut rows = Vec::with_capacity(k as usize - 1);
    let mut fresh = Vec::new();
    let mut cached = 0;
    for r in 0..=k - 2 {
        let key = cache_key(k, r, hash);
        let hit = cache.and_then(|c| c.get(&key)).cloned();
        let from_cache = hit.is_some();
        let mut row = match hit {
            Some(row) => row,
            None => ScanRow {
                certificate: verify_with_context(&ctx, r, &opts.policy)?,
                s_scan_audit: None,
            },
        };
        let mut changed = !from_cache;
        if opts.audit_s_scan && row.s_scan_audit.is_none() {
            row.s_scan_audit = Some(s_scan(&ctx, r, &VerifyPolicy::s_scan_only())?.map(|(s, _, _)| s));
            changed = true;
        }
        cached += u64::from(from_cache);
        if cache.is_some() && changed {
            fresh.push((key, row.clone()));
        }
        if !opts.record_timing {
            row.certificate.elapsed_ms = 0;
        }
        rows.push(row);
    }
    if let Some(c) = cache {
        if !fresh.is_empty() {
            c.append(&fresh)?;
        }
    }
    Ok((rows, cached))
}

/// Runs [`verify_with_context`](super::verify_with_context) over every even
/// `k` in range and every `r in [0, k-2]`. The report does not depend on
/// `jobs`.
pub fn scan_conjecture(opts: &ScanOptions, cache: Option<&ScanCache>) -> Result<ScanReport> {
    opts.validate()?;
    let start = Instant::now();
    let hash = policy_hash(&opts.policy);
    let mut ks: Vec<u32> = (opts.k_min..=opts.k_max).step_by(2).collect();
    // Largest rows first so the pool is not left waiting on them.
    ks.reverse();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    let per_k: Vec<(Vec<ScanRow>, u64)> = pool.install(|| {
        ks.par_iter()
            .map(|&k| scan_k(k, opts, cache, &hash))
            .collect::<Result<_>>()
    })?;

    let mut rows: Vec<ScanRow> = Vec::new();
    let mut cached_cells = 0;
    for (r, c) in per_k {
        rows.extend(r);
        cached_cells += c;
    }
    rows.sort_by_key(|row| (row.certificate.k, row.certificate.r));

    let mut summary = ScanSummary {
        cached_cells,
        ..Default::default()
    };
    let mut failures = Vec::new();
    let mut main_bound: BTreeMap<u32, bool> = BTreeMap::new();
    let mut s_scan_ok = 0;
    for row in &rows {
        let c = &row.certificate;
        summary.cells += 1;
        *summary.by_method.entry(c.method.to_string()).or_default() += 1;
        let decision = match c.decision {
            Decision::Interval => "interval",
            Decision::ExactBigint => "exact-bigint",
        };
        *summary.by_decision.entry(decision.to_string()).or_default() += 1;
        let entry = main_bound.entry(c.k).or_insert(true);
        if c.verified {
            summary.verified += 1;
        } else {
            *entry = false;
            failures.push((c.k, c.r));
            if c.counterexample {
                summary.counterexamples += 1;
            } else {
                summary.inconclusive += 1;
            }
        }
        if let Some(Some(_)) = row.s_scan_audit {
            s_scan_ok += 1;
        }
    }
    if opts.audit_s_scan {
        summary.s_scan_certified = Some(s_scan_ok);
    }
    summary.k_total = main_bound.len() as u64;
    summary.k_certified = main_bound.values().filter(|&&v| v).count() as u64;
    debug_assert!(rows
        .iter()
        .all(|r| r.certificate.method != Method::None || !r.certificate.verified));

    Ok(ScanReport {
        k_min: opts.k_min,
        k_max: opts.k_max,
        policy: opts.policy.signature(),
        rows,
        main_bound: main_bound.into_iter().collect(),
        failures,
        summary,
        elapsed_ms: if opts.record_timing {
            start.elapsed().as_millis() as u64
        } else {
            0
        },
    })
}
