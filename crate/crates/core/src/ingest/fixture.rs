//! TSV fixture format: `dblp_key<TAB>year<TAB>title<TAB>author1|author2|...`
//!
//! The year may be empty. There is no escaping, so fields must not contain
//! tabs, pipes or line breaks.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::{IngestError, IngestStats, PaperRecord, RecordKind};

pub struct FixtureReader<R: BufRead> {
    lines: std::io::Lines<R>,
    line_no: usize,
    stats: IngestStats,
    done: bool,
}

pub fn load_fixture(path: impl AsRef<Path>) -> Result<FixtureReader<BufReader<File>>, IngestError> {
    Ok(FixtureReader::new(BufReader::new(File::open(path)?)))
}

impl<R: BufRead> FixtureReader<R> {
    pub fn new(input: R) -> Self {
        Self {
            lines: input.lines(),
            line_no: 0,
            stats: IngestStats::default(),
            done: false,
        }
    }

    pub fn stats(&self) -> &IngestStats {
        &self.stats
    }

    fn error(&self, message: impl Into<String>) -> IngestError {
        IngestError::Fixture {
            line: self.line_no,
            message: message.into(),
        }
    }

    fn parse_line(&mut self, line: &str) -> Result<Option<PaperRecord>, IngestError> {
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 4 {
            return Err(self.error(format!(
                "expected 4 tab-separated columns, found {}",
                cols.len()
            )));
        }
        let key = cols[0].trim();
        if key.is_empty() {
            return Err(self.error("empty dblp_key"));
        }
        let year = match cols[1].trim() {
            "" => None,
            y => Some(
                y.parse::<i32>()
                    .map_err(|_| self.error(format!("invalid year {y:?}")))?,
            ),
        };
        let title = cols[2].trim();
        if title.is_empty() {
            self.stats.missing_title += 1;
            return Ok(None);
        }
        let mut authors = Vec::new();
        for token in cols[3].split('|') {
            let token = token.trim();
            if token.is_empty() {
                self.stats.empty_author_tokens += 1;
            } else {
                authors.push(token.to_owned());
            }
        }
        Ok(Some(PaperRecord {
            dblp_key: key.to_owned(),
            kind: RecordKind::Article,
            year,
            title: title.to_owned(),
            authors,
        }))
    }
}

impl<R: BufRead> Iterator for FixtureReader<R> {
    type Item = Result<PaperRecord, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            let line = match self.lines.next()? {
                Ok(l) => l,
                Err(e) => {
                    self.done = true;
                    return Some(Err(e.into()));
                }
            };
            self.line_no += 1;
            let line = line.strip_suffix('\r').unwrap_or(&line);
            if line.trim().is_empty() {
                continue;
            }
            match self.parse_line(line) {
                Ok(Some(rec)) => {
                    self.stats.records += 1;
                    return Some(Ok(rec));
                }
                Ok(None) => continue,
                Err(e) => {
                    self.done = true;
                    return Some(Err(e));
                }
            }
        }
        None
    }
}

/// Writes records in fixture format. Record kind is not representable and
/// is dropped; records read back are articles.
pub fn write_fixture<'a, W, I>(mut out: W, records: I) -> Result<(), IngestError>
where
    W: Write,
    I: IntoIterator<Item = &'a PaperRecord>,
{
    for rec in records {
        let bad = |s: &str| s.contains(['\t', '\n', '\r']);
        let export_err = |message: &str| IngestError::Export {
            key: rec.dblp_key.clone(),
            message: message.to_owned(),
        };
        if bad(&rec.dblp_key) || bad(&rec.title) {
            return Err(export_err("key or title contains a tab or line break"));
        }
        if rec
            .authors
            .iter()
            .any(|a| bad(a) || a.contains('|') || a.trim().is_empty())
        {
            return Err(export_err("author contains a separator or is empty"));
        }
        let year = rec.year.map(|y| y.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            rec.dblp_key,
            year,
            rec.title,
            rec.authors.join("|")
        )?;
    }
    Ok(())
}
