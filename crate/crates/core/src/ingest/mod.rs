//! Turning bibliography sources into a stream of [`PaperRecord`]s.
//!
//! Two sources produce identical record semantics: the DBLP XML dump
//! (plain or gzip, see [`open_input`]) and the line-oriented TSV fixture
//! format used by tests and small experiments.

pub mod entities;
mod fixture;
mod name;
mod xml;

use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;

use flate2::read::MultiGzDecoder;
use thiserror::Error;

pub use fixture::{load_fixture, write_fixture, FixtureReader};
pub use name::{collapse_whitespace, full_key, is_homonym_suffix, normalize_name, NormalizedName};
pub use xml::{parse_stream, DblpReader};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("malformed XML at byte {offset}: {message}")]
    Xml { offset: u64, message: String },
    #[error("fixture line {line}: {message}")]
    Fixture { line: usize, message: String },
    #[error("rejected author name {0:?}: empty after normalization")]
    RejectedName(String),
    #[error("cannot export record {key:?} as fixture: {message}")]
    Export { key: String, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Publication types that carry personal authorship.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RecordKind {
    Article,
    Inproceedings,
    Incollection,
    Book,
    PhdThesis,
    MastersThesis,
}

impl RecordKind {
    pub fn from_tag(tag: &[u8]) -> Option<Self> {
        Some(match tag {
            b"article" => Self::Article,
            b"inproceedings" => Self::Inproceedings,
            b"incollection" => Self::Incollection,
            b"book" => Self::Book,
            b"phdthesis" => Self::PhdThesis,
            b"mastersthesis" => Self::MastersThesis,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Article => "article",
            Self::Inproceedings => "inproceedings",
            Self::Incollection => "incollection",
            Self::Book => "book",
            Self::PhdThesis => "phdthesis",
            Self::MastersThesis => "mastersthesis",
        }
    }
}

/// Top-level DBLP elements that are recognised but never emitted.
pub(crate) fn is_skipped_kind(tag: &[u8]) -> bool {
    matches!(tag, b"www" | b"proceedings" | b"data")
}

/// One bibliographic record with its author mentions in document order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaperRecord {
    pub dblp_key: String,
    pub kind: RecordKind,
    pub year: Option<i32>,
    pub title: String,
    /// Raw (entity-decoded, whitespace-collapsed) author strings, suffix
    /// still attached.
    pub authors: Vec<String>,
}

impl PaperRecord {
    pub fn new(dblp_key: impl Into<String>, year: Option<i32>, title: impl Into<String>) -> Self {
        Self {
            dblp_key: dblp_key.into(),
            kind: RecordKind::Article,
            year,
            title: title.into(),
            authors: Vec::new(),
        }
    }

    pub fn with_authors<I, S>(mut self, authors: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.authors = authors.into_iter().map(Into::into).collect();
        self
    }
}

/// Counters for everything the readers tolerate instead of failing on.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestStats {
    pub records: usize,
    /// `www`, `proceedings` and `data` elements.
    pub skipped_kinds: usize,
    /// Top-level elements that are neither accepted nor known-skipped.
    pub unknown_elements: usize,
    pub missing_title: usize,
    pub missing_key: usize,
    pub unknown_entities: usize,
    pub empty_author_tokens: usize,
    pub bad_year: usize,
}

impl IngestStats {
    pub fn warnings(&self) -> usize {
        self.missing_title
            + self.missing_key
            + self.unknown_entities
            + self.empty_author_tokens
            + self.bad_year
    }
}

/// Opens a file for streaming, transparently decompressing gzip input
/// (detected by the `1F 8B` magic bytes rather than the extension).
pub fn open_input(path: impl AsRef<Path>) -> io::Result<Box<dyn BufRead + Send>> {
    let file = File::open(path)?;
    maybe_decompress(BufReader::with_capacity(1 << 16, file))
}

pub fn maybe_decompress<R: BufRead + Send + 'static>(
    mut reader: R,
) -> io::Result<Box<dyn BufRead + Send>> {
    let head = reader.fill_buf()?;
    if head.starts_with(&[0x1f, 0x8b]) {
        Ok(Box::new(BufReader::with_capacity(
            1 << 16,
            MultiGzDecoder::new(reader),
        )))
    } else {
        Ok(Box::new(reader))
    }
}
