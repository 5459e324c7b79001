//! Streaming corpus input and match output, both JSON-Lines.
//!
//! A corpus file carries one post object per line with required `id` and
//! `text` fields and optional `source`, `timestamp` (epoch seconds) and
//! `location`. Unknown fields are ignored, so labeled ground-truth corpora
//! read as plain corpora. The reader holds one record at a time; it never
//! buffers the file, so memory stays flat on corpora of any size. Id
//! uniqueness is the producer's contract and is not re-checked here (that
//! would mean remembering every id seen).

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matcher::HateMatch;

/// One social-media post.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PostRecord {
    pub id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
}

impl PostRecord {
    /// A record with just the required fields.
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        PostRecord {
            id: id.into(),
            text: text.into(),
            source: None,
            timestamp: None,
            location: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot open corpus {path}: {source}")]
    Open {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("i/o error reading corpus at line {line}: {source}")]
    Read {
        line: usize,
        #[source]
        source: io::Error,
    },
    #[error("malformed corpus record at line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

/// How the reader treats malformed lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    /// Stop with an error naming the offending line.
    #[default]
    Strict,
    /// Skip malformed lines, counting them.
    Lenient,
}

/// Streaming reader over a JSON-Lines corpus file.
///
/// Iterates `Result<PostRecord, CorpusError>` in file order, skipping blank
/// lines. In lenient mode malformed lines are skipped and counted instead of
/// yielding errors; see [`CorpusReader::skipped`].
pub struct CorpusReader<R: BufRead> {
    lines: io::Lines<R>,
    mode: ParseMode,
    line_no: usize,
    skipped: usize,
}

impl CorpusReader<BufReader<File>> {
    pub fn open<P: AsRef<Path>>(path: P, mode: ParseMode) -> Result<Self, CorpusError> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|source| CorpusError::Open {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(Self::from_reader(BufReader::new(file), mode))
    }
}

impl<R: BufRead> CorpusReader<R> {
    pub fn from_reader(reader: R, mode: ParseMode) -> Self {
        CorpusReader {
            lines: reader.lines(),
            mode,
            line_no: 0,
            skipped: 0,
        }
    }

    /// Malformed lines skipped so far (lenient mode only).
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    fn parse_line(line: &str, line_no: usize) -> Result<PostRecord, CorpusError> {
        let record: PostRecord =
            serde_json::from_str(line).map_err(|e| CorpusError::Malformed {
                line: line_no,
                reason: e.to_string(),
            })?;
        if record.id.is_empty() {
            return Err(CorpusError::Malformed {
                line: line_no,
                reason: "empty id".to_string(),
            });
        }
        if record.text.is_empty() {
            return Err(CorpusError::Malformed {
                line: line_no,
                reason: "empty text".to_string(),
            });
        }
        Ok(record)
    }
}

impl<R: BufRead> Iterator for CorpusReader<R> {
    type Item = Result<PostRecord, CorpusError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.line_no += 1;
            let line = match self.lines.next()? {
                Ok(line) => line,
                Err(source) => {
                    return Some(Err(CorpusError::Read {
                        line: self.line_no,
                        source,
                    }))
                }
            };
            if line.trim().is_empty() {
                continue;
            }
            match Self::parse_line(&line, self.line_no) {
                Ok(record) => return Some(Ok(record)),
                Err(err) => match self.mode {
                    ParseMode::Strict => return Some(Err(err)),
                    ParseMode::Lenient => {
                        self.skipped += 1;
                        continue;
                    }
                },
            }
        }
    }
}

/// Read a whole corpus file strictly into memory. Convenience for tests and
/// small fixtures; the scan pipeline streams instead.
pub fn read_corpus<P: AsRef<Path>>(path: P) -> Result<Vec<PostRecord>, CorpusError> {
    CorpusReader::open(path, ParseMode::Strict)?.collect()
}

#[derive(Debug, Error)]
#[error("i/o failure writing matches after {written} records: {source}")]
pub struct WriteError {
    /// Records successfully written before the failure.
    pub written: u64,
    #[source]
    pub source: io::Error,
}

/// Write matches as JSON-Lines, one object per match. Returns the count
/// written; on failure the error carries the partial count.
pub fn write_matches<'a, I, P>(matches: I, path: P) -> Result<u64, WriteError>
where
    I: IntoIterator<Item = &'a HateMatch>,
    P: AsRef<Path>,
{
    let file = File::create(path.as_ref()).map_err(|source| WriteError { written: 0, source })?;
    let mut out = BufWriter::new(file);
    let mut written = 0u64;
    for m in matches {
        write_match_line(&mut out, m).map_err(|source| WriteError { written, source })?;
        written += 1;
    }
    out.flush().map_err(|source| WriteError { written, source })?;
    Ok(written)
}

/// Serialize one match as a JSONL line onto an open writer.
pub fn write_match_line<W: Write>(out: &mut W, m: &HateMatch) -> io::Result<()> {
    let line = serde_json::to_string(m).expect("match serializes");
    writeln!(out, "{line}")
}

/// Read a match file written by [`write_matches`].
pub fn read_matches<P: AsRef<Path>>(path: P) -> Result<Vec<HateMatch>, CorpusError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| CorpusError::Open {
        path: path.to_path_buf(),
        source,
    })?;
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|source| CorpusError::Read {
            line: line_no,
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let m: HateMatch = serde_json::from_str(&line).map_err(|e| CorpusError::Malformed {
            line: line_no,
            reason: e.to_string(),
        })?;
        out.push(m);
    }
    Ok(out)
}
