//! Checkpointed prime sweeps for `pi_f(x, z)`.
//!
//! The output is JSONL: one `{"p": .., "hit": ..}` record per prime followed
//! by a single `{"summary": {...}}` line. Primes are processed in batches;
//! each batch is evaluated in parallel and written in prime order, and a
//! checkpoint is written whenever the running prime count reaches a
//! multiple of the checkpoint interval.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use simroots::counting::sweep_hits;
use simroots::{primes_in_range, IntPolynomial};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_CHECKPOINT_EVERY: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SweepCounters {
    pub pi_f: u64,
    pub pi: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepCheckpoint {
    pub schema_version: u32,
    pub params_digest: String,
    pub last_prime: u64,
    pub counters: SweepCounters,
}

impl SweepCheckpoint {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Writes via a temporary file and rename so a crash never leaves a torn checkpoint.
    pub fn store(&self, path: &Path) -> CliResult<()> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_string_pretty(self)?)?;
        fs::rename(tmp, path)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub x: u64,
    pub pi_f: u64,
    pub pi: u64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct RecordLine {
    p: u64,
    hit: bool,
}

#[derive(Serialize)]
struct SummaryLine {
    summary: SweepSummary,
}

#[derive(Debug, Clone)]
pub struct SweepParams {
    pub z: i64,
    pub poly: IntPolynomial,
    pub x_max: u64,
    pub out: PathBuf,
    pub checkpoint: Option<PathBuf>,
    pub resume: bool,
    pub checkpoint_every: u64,
    /// Stop after this many primes in the current run, as an interrupted run would.
    pub halt_after: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepOutcome {
    Complete(SweepSummary),
    Halted {
        last_prime: u64,
        counters: SweepCounters,
    },
}

/// Content hash of everything that determines the per-prime records.
pub fn params_digest(z: i64, poly: &IntPolynomial) -> String {
    let mut h = Sha256::new();
    h.update(format!("z={z};poly={poly};normalization=pi").as_bytes());
    hex::encode(h.finalize())
}

/// Keeps the records with `p <= last_prime`, rewriting the file in place,
/// and returns the counters they imply.
fn truncate_output(path: &Path, last_prime: u64) -> CliResult<SweepCounters> {
    let mut kept = String::new();
    let mut counters = SweepCounters::default();
    if path.exists() {
        for line in BufReader::new(File::open(path)?).lines() {
            let line = line?;
            let Ok(rec) = serde_json::from_str::<RecordLine>(&line) else {
                break;
            };
            if rec.p > last_prime {
                break;
            }
            counters.pi += 1;
            counters.pi_f += rec.hit as u64;
            kept.push_str(&line);
            kept.push('\n');
        }
    }
    fs::write(path, kept)?;
    Ok(counters)
}

pub fn run_sweep(params: &SweepParams) -> CliResult<SweepOutcome> {
    let digest = params_digest(params.z, &params.poly);
    let every = params.checkpoint_every.max(1);
    let (start, mut counters) = if params.resume {
        let path = params
            .checkpoint
            .as_deref()
            .ok_or_else(|| CliError::Failure("--resume needs --checkpoint".into()))?;
        let ckpt = SweepCheckpoint::load(path)?;
        if ckpt.schema_version != SCHEMA_VERSION {
            return Err(CliError::CheckpointMismatch(format!(
                "schema version {} (expected {SCHEMA_VERSION})",
                ckpt.schema_version
            )));
        }
        if ckpt.params_digest != digest {
            return Err(CliError::CheckpointMismatch(format!(
                "checkpoint digest {} does not match parameters digest {digest}",
                ckpt.params_digest
            )));
        }
        let on_disk = truncate_output(&params.out, ckpt.last_prime)?;
        if on_disk != ckpt.counters {
            return Err(CliError::Failure(format!(
                "output file holds {on_disk:?} up to p = {}, checkpoint says {:?}",
                ckpt.last_prime, ckpt.counters
            )));
        }
        (ckpt.last_prime + 1, ckpt.counters)
    } else {
        File::create(&params.out)?;
        (2, SweepCounters::default())
    };

    let mut out = BufWriter::new(OpenOptions::new().append(true).open(&params.out)?);
    let mut primes = primes_in_range(start, params.x_max)?.peekable();
    let mut done_this_run = 0u64;
    let mut last_prime = start.saturating_sub(1);
    let mut batch = Vec::new();

    while primes.peek().is_some() {
        let to_boundary = every - counters.pi % every;
        let mut take = to_boundary;
        if let Some(limit) = params.halt_after {
            take = take.min(limit - done_this_run);
        }
        batch.clear();
        batch.extend(primes.by_ref().take(take as usize));
        let hits = sweep_hits(&batch, params.z, &params.poly);
        for (&p, &hit) in batch.iter().zip(&hits) {
            serde_json::to_writer(&mut out, &RecordLine { p, hit })?;
            out.write_all(b"\n")?;
            counters.pi += 1;
            counters.pi_f += hit as u64;
            last_prime = p;
        }
        out.flush()?;
        done_this_run += batch.len() as u64;
        if counters.pi % every == 0 {
            if let Some(path) = &params.checkpoint {
                SweepCheckpoint {
                    schema_version: SCHEMA_VERSION,
                    params_digest: digest.clone(),
                    last_prime,
                    counters,
                }
                .store(path)?;
            }
        }
        if params.halt_after == Some(done_this_run) {
            return Ok(SweepOutcome::Halted {
                last_prime,
                counters,
            });
        }
    }

    let summary = SweepSummary {
        x: params.x_max,
        pi_f: counters.pi_f,
        pi: counters.pi,
        ratio: if counters.pi == 0 {
            0.0
        } else {
            counters.pi_f as f64 / counters.pi as f64
        },
    };
    serde_json::to_writer(&mut out, &SummaryLine { summary })?;
    out.write_all(b"\n")?;
    out.flush()?;
    if let Some(path) = &params.checkpoint {
        SweepCheckpoint {
            schema_version: SCHEMA_VERSION,
            params_digest: digest,
            last_prime: last_prime.max(start.saturating_sub(1)),
            counters,
        }
        .store(path)?;
    }
    Ok(SweepOutcome::Complete(summary))
}
