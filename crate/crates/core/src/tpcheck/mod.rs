//! Exhaustive certification of coefficientwise total positivity.
//!
//! All minors of the leading `N x N` block are enumerated in a fixed order
//! (see [`minors`]), grouped into chunks of consecutive indices, and checked in
//! waves of chunks. A wave is fully evaluated before its results are reduced,
//! so the reported witness is always the first failure in enumeration order,
//! whatever the degree of parallelism.

pub mod checkpoint;
pub mod det;
pub mod minors;

use std::path::{Path, PathBuf};
#[cfg(not(target_arch = "wasm32"))]
use std::time::Instant;
#[cfg(target_arch = "wasm32")]
use web_time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::triangle::Triangle;

use checkpoint::{Checkpoint, CheckpointWriter, ChunkRecord, ChunkStatus, Header};
pub use det::{det_bareiss, minor_det, minor_det_bareiss, MinorCache};
pub use minors::{enumerate_minors, MinorIndex, MinorSpec};

/// Largest supported matrix size (row/column subsets are 32-bit masks).
pub const MAX_N: usize = 31;

#[derive(Clone, Debug, Default)]
pub struct Budget {
    pub seconds: Option<f64>,
    /// Stop after this many chunks in the current run.
    pub chunks: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct TpOptions {
    /// Highest minor order examined; `None` means all orders.
    pub rmax: Option<usize>,
    pub jobs: usize,
    pub chunk_size: u64,
    pub checkpoint: Option<PathBuf>,
    pub budget: Budget,
}

impl Default for TpOptions {
    fn default() -> Self {
        TpOptions {
            rmax: None,
            jobs: 1,
            chunk_size: 64,
            checkpoint: None,
            budget: Budget::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Certified,
    Refuted,
    Partial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub index: u64,
    pub minor: MinorSpec,
    pub monomial: String,
    pub coefficient: String,
    pub determinant: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderCount {
    pub order: usize,
    pub total: u64,
    pub checked: u64,
}

/// Deterministic part of a report: identical for identical inputs and
/// options, independent of parallelism and of interruptions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportBody {
    pub matrix: String,
    pub digest: String,
    pub n: usize,
    pub rmax: usize,
    pub coverage: String,
    pub chunk_size: u64,
    pub status: Status,
    pub minors_checked: u64,
    pub minors_total: u64,
    pub per_order: Vec<OrderCount>,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunMeta {
    pub wall_seconds: f64,
    pub jobs: usize,
    pub resumed_from_chunk: Option<u64>,
    pub chunks_this_run: u64,
    pub cached_minors: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TpReport {
    pub report: ReportBody,
    pub meta: RunMeta,
}

impl TpReport {
    pub fn status(&self) -> Status {
        self.report.status
    }

    pub fn body_json(&self) -> String {
        serde_json::to_string_pretty(&self.report).expect("serializable")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// SHA-256 over the serialized leading `n x n` block.
pub fn matrix_digest(tri: &Triangle, n: usize) -> [u8; 32] {
    let rows = &tri.to_doc().rows[..n];
    let bytes = serde_json::to_vec(rows).expect("serializable");
    Sha256::digest(&bytes).into()
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn describe(tri: &Triangle) -> String {
    if tri.params().is_empty() {
        return tri.family().to_string();
    }
    let p: Vec<String> = tri.params().iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{}({})", tri.family(), p.join(", "))
}

fn validate(tri: &Triangle, n: usize, opts: &TpOptions) -> Result<usize> {
    if n == 0 || n > tri.nmax() + 1 {
        return Err(Error::SizeOutOfRange { n, rows: tri.nmax() + 1 });
    }
    if n > MAX_N {
        return Err(Error::GuardExceeded { what: "matrix size", got: n, limit: MAX_N });
    }
    if opts.budget.seconds.is_some_and(|s| s.is_nan() || s <= 0.0) || opts.budget.chunks == Some(0) {
        return Err(Error::NonPositiveBudget);
    }
    if opts.chunk_size == 0 {
        return Err(Error::BadParameter("chunk size must be positive".into()));
    }
    let rmax = opts.rmax.unwrap_or(n);
    if rmax == 0 || rmax > n {
        return Err(Error::BadParameter(format!("rmax must lie in 1..={n}")));
    }
    Ok(rmax)
}

/// Checks every minor of order `<= rmax` of the leading `n x n` block.
pub fn check_total_positivity(tri: &Triangle, n: usize, opts: &TpOptions) -> Result<TpReport> {
    let rmax = validate(tri, n, opts)?;
    let header = Header {
        digest: matrix_digest(tri, n),
        n: n as u32,
        rmax: rmax as u32,
        chunk_size: opts.chunk_size,
    };
    let writer = match &opts.checkpoint {
        Some(p) => Some(CheckpointWriter::create(p, &header)?),
        None => None,
    };
    Run::new(tri, &header, opts).execute(0, writer, None)
}

/// Continues the run recorded in `path`. Size, order bound and chunking come
/// from the checkpoint; parallelism and budget from `opts`.
pub fn resume(path: &Path, tri: &Triangle, opts: &TpOptions) -> Result<TpReport> {
    let ck = Checkpoint::read(path)?;
    let h = &ck.header;
    let n = h.n as usize;
    let opts = TpOptions {
        rmax: Some(h.rmax as usize),
        chunk_size: h.chunk_size,
        checkpoint: Some(path.to_path_buf()),
        ..opts.clone()
    };
    validate(tri, n, &opts).map_err(|e| match e {
        Error::SizeOutOfRange { .. } => Error::DigestMismatch { path: path.to_path_buf() },
        other => other,
    })?;
    if matrix_digest(tri, n) != h.digest {
        return Err(Error::DigestMismatch { path: path.to_path_buf() });
    }
    let run = Run::new(tri, h, &opts);
    let cursor = ck.cursor();
    if cursor > run.chunks {
        return Err(Error::CorruptCheckpoint("more records than chunks".into()));
    }
    if let Some(idx) = ck.failure() {
        if idx >= run.index.len() {
            return Err(Error::CorruptCheckpoint("failure index out of range".into()));
        }
        let cache = MinorCache::new(tri);
        return Ok(run.finish(Outcome::Refuted(idx), &cache, Some(cursor), 0));
    }
    let writer = CheckpointWriter::append_to(path)?;
    run.execute(cursor, Some(writer), Some(cursor))
}

enum Outcome {
    Done,
    Refuted(u64),
    Stopped { chunks_done: u64 },
}

struct Run<'a> {
    tri: &'a Triangle,
    header: Header,
    opts: TpOptions,
    index: MinorIndex,
    chunks: u64,
    started: Instant,
}

struct ChunkOutcome {
    id: u64,
    checked: u64,
    failure: Option<u64>,
}

impl<'a> Run<'a> {
    fn new(tri: &'a Triangle, header: &Header, opts: &TpOptions) -> Run<'a> {
        let index = MinorIndex::new(header.n as usize, 1, header.rmax as usize);
        let chunks = index.len().div_ceil(header.chunk_size);
        Run {
            tri,
            header: header.clone(),
            opts: opts.clone(),
            index,
            chunks,
            started: Instant::now(),
        }
    }

    fn chunk_range(&self, id: u64) -> std::ops::Range<u64> {
        let start = id * self.header.chunk_size;
        start..(start + self.header.chunk_size).min(self.index.len())
    }

    fn check_chunk(&self, cache: &MinorCache<'_>, id: u64) -> ChunkOutcome {
        let range = self.chunk_range(id);
        let mut checked = 0;
        for idx in range {
            let (r, c) = self.index.masks(idx);
            checked += 1;
            if !cache.det(r, c).is_coeffwise_nonneg() {
                return ChunkOutcome { id, checked, failure: Some(idx) };
            }
        }
        ChunkOutcome { id, checked, failure: None }
    }

    fn check_wave(&self, cache: &MinorCache<'_>, ids: std::ops::Range<u64>) -> Vec<ChunkOutcome> {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            if self.opts.jobs > 1 {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(self.opts.jobs)
                    .build()
                    .expect("thread pool");
                return pool.install(|| {
                    ids.into_par_iter()
                        .map(|id| self.check_chunk(cache, id))
                        .collect()
                });
            }
        }
        ids.map(|id| self.check_chunk(cache, id)).collect()
    }

    fn budget_exhausted(&self, chunks_this_run: u64) -> bool {
        let b = &self.opts.budget;
        b.chunks.is_some_and(|c| chunks_this_run >= c)
            || b.seconds.is_some_and(|s| self.started.elapsed().as_secs_f64() >= s)
    }

    fn execute(
        &self,
        start: u64,
        mut writer: Option<CheckpointWriter>,
        resumed: Option<u64>,
    ) -> Result<TpReport> {
        let cache = MinorCache::new(self.tri);
        let wave_len = (self.opts.jobs.max(1) * 2) as u64;
        let mut next = start;
        let mut this_run = 0u64;
        let outcome = loop {
            if next >= self.chunks {
                break Outcome::Done;
            }
            if self.budget_exhausted(this_run) {
                break Outcome::Stopped { chunks_done: next };
            }
            let mut len = wave_len.min(self.chunks - next);
            if let Some(c) = self.opts.budget.chunks {
                len = len.min(c - this_run);
            }
            // order r only needs minors of order r - 1
            let lowest = self.index.order_of(self.chunk_range(next).start) as u32;
            cache.evict_below(lowest.saturating_sub(1));
            let results = self.check_wave(&cache, next..next + len);
            let failed_at = results.iter().position(|r| r.failure.is_some());
            let keep = failed_at.map_or(results.len(), |p| p + 1);
            let records: Vec<ChunkRecord> = results[..keep]
                .iter()
                .map(|r| ChunkRecord {
                    chunk_id: r.id,
                    status: r.failure.map_or(ChunkStatus::Passed, ChunkStatus::Failed),
                    minors_done: r.checked,
                })
                .collect();
            if let Some(w) = writer.as_mut() {
                w.append(&records)?;
            }
            this_run += keep as u64;
            next += keep as u64;
            if let Some(p) = failed_at {
                break Outcome::Refuted(results[p].failure.unwrap());
            }
        };
        Ok(self.finish(outcome, &cache, resumed, this_run))
    }

    fn finish(
        &self,
        outcome: Outcome,
        cache: &MinorCache<'_>,
        resumed: Option<u64>,
        chunks_this_run: u64,
    ) -> TpReport {
        let n = self.header.n as usize;
        let rmax = self.header.rmax as usize;
        let total = self.index.len();
        let (status, checked, witness) = match outcome {
            Outcome::Done if rmax == n => (Status::Certified, total, None),
            Outcome::Done => (Status::Partial, total, None),
            Outcome::Stopped { chunks_done } => {
                (Status::Partial, (chunks_done * self.header.chunk_size).min(total), None)
            }
            Outcome::Refuted(idx) => (Status::Refuted, idx + 1, Some(self.witness(cache, idx))),
        };
        let per_order = self
            .index
            .per_order_counts(checked)
            .into_iter()
            .map(|(order, total, checked)| OrderCount { order, total, checked })
            .collect();
        let coverage = if rmax == n {
            "all orders".to_string()
        } else {
            format!("orders 1..={rmax} of {n} (partial order coverage)")
        };
        TpReport {
            report: ReportBody {
                matrix: describe(self.tri),
                digest: hex(&self.header.digest),
                n,
                rmax,
                coverage,
                chunk_size: self.header.chunk_size,
                status,
                minors_checked: checked,
                minors_total: total,
                per_order,
                witness,
            },
            meta: RunMeta {
                wall_seconds: self.started.elapsed().as_secs_f64(),
                jobs: self.opts.jobs,
                resumed_from_chunk: resumed,
                chunks_this_run,
                cached_minors: cache.len(),
            },
        }
    }

    fn witness(&self, cache: &MinorCache<'_>, idx: u64) -> Witness {
        let (r, c) = self.index.masks(idx);
        let det = cache.det(r, c);
        let (mono, coeff) = det
            .first_negative_term()
            .expect("witness determinant has a negative coefficient");
        let mono = Polynomial::from_terms(self.tri.table(), [(mono.clone(), 1.into())]);
        Witness {
            index: idx,
            minor: MinorSpec::from_masks(r, c),
            monomial: mono.to_string(),
            coefficient: coeff.to_string(),
            determinant: det.to_string(),
        }
    }
}
