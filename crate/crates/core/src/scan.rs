//! The streaming scan pipeline: corpus file in, match file and summary out.
//!
//! Posts are read in fixed-size batches, matched by a pool of scoped worker
//! threads (each owning a private summary), then written by the single
//! collector in post order. Memory is bounded by the batch size, never by
//! the corpus, and the outputs are byte-identical for any worker count:
//! the counters are exact integers and the merge order is fixed.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::thread;

use thiserror::Error;

use crate::analytics::ScanSummary;
use crate::corpus::{write_match_line, CorpusError, CorpusReader, ParseMode, PostRecord};
use crate::matcher::{HateMatch, Matcher};

#[derive(Debug, Clone, Copy)]
pub struct ScanOptions {
    /// Worker threads; values below 1 behave as 1.
    pub workers: usize,
    /// Skip malformed corpus lines instead of failing.
    pub lenient: bool,
    /// Posts held in memory at once.
    pub batch_size: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            workers: 1,
            lenient: false,
            batch_size: 4096,
        }
    }
}

#[derive(Debug)]
pub struct ScanOutcome {
    pub summary: ScanSummary,
    pub matches_written: u64,
    /// Malformed lines skipped (lenient mode).
    pub skipped_lines: u64,
}

#[derive(Debug, Error)]
pub enum ScanError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("cannot create output file {path}: {source}")]
    CreateOutput {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("i/o failure writing matches after {written} records: {source}")]
    WriteMatches {
        written: u64,
        #[source]
        source: io::Error,
    },
}

/// Scan a corpus file, writing matches as JSON-Lines to `out_path`.
pub fn scan_corpus(
    corpus_path: &Path,
    matcher: &Matcher<'_>,
    out_path: &Path,
    opts: ScanOptions,
) -> Result<ScanOutcome, ScanError> {
    let mode = if opts.lenient {
        ParseMode::Lenient
    } else {
        ParseMode::Strict
    };
    let mut reader = CorpusReader::open(corpus_path, mode)?;
    let out = File::create(out_path).map_err(|source| ScanError::CreateOutput {
        path: out_path.to_path_buf(),
        source,
    })?;
    let mut out = BufWriter::new(out);

    let workers = opts.workers.max(1);
    let batch_size = opts.batch_size.max(1);
    let mut summary = ScanSummary::new();
    let mut written = 0u64;

    loop {
        let mut batch: Vec<PostRecord> = Vec::with_capacity(batch_size);
        for record in reader.by_ref() {
            batch.push(record?);
            if batch.len() == batch_size {
                break;
            }
        }
        if batch.is_empty() {
            break;
        }
        let chunk_len = batch.len().div_ceil(workers);
        let results: Vec<(Vec<Vec<HateMatch>>, ScanSummary)> = thread::scope(|scope| {
            let handles: Vec<_> = batch
                .chunks(chunk_len)
                .map(|posts| {
                    scope.spawn(move || {
                        let lex = matcher.lexicon();
                        let mut local = ScanSummary::new();
                        let mut lists = Vec::with_capacity(posts.len());
                        for post in posts {
                            let matches = matcher.match_post(post);
                            local.observe_post(&matches, lex);
                            lists.push(matches);
                        }
                        (lists, local)
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("scan worker panicked"))
                .collect()
        });
        for (lists, local) in results {
            summary = summary.merge(local);
            for matches in lists {
                for m in &matches {
                    write_match_line(&mut out, m)
                        .map_err(|source| ScanError::WriteMatches { written, source })?;
                    written += 1;
                }
            }
        }
    }
    out.flush()
        .map_err(|source| ScanError::WriteMatches { written, source })?;
    Ok(ScanOutcome {
        summary,
        matches_written: written,
        skipped_lines: reader.skipped() as u64,
    })
}
