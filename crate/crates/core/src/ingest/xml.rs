//! Pull parser over the DBLP XML dump.
//!
//! Memory is bounded by the largest single record: the reader keeps one
//! event buffer plus the fields of the record currently open.

use std::io::BufRead;

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::entities::{decode_references, resolve_reference};
use super::name::collapse_whitespace;
use super::{is_skipped_kind, IngestError, IngestStats, PaperRecord, RecordKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Author,
    Title,
    Year,
}

impl Field {
    fn from_tag(tag: &[u8]) -> Option<Self> {
        match tag {
            b"author" => Some(Self::Author),
            b"title" => Some(Self::Title),
            b"year" => Some(Self::Year),
            _ => None,
        }
    }
}

#[derive(Debug, Default)]
struct OpenRecord {
    kind: Option<RecordKind>,
    key: String,
    title: Option<String>,
    year_text: Option<String>,
    authors: Vec<String>,
    /// Elements open inside the record element.
    depth: usize,
    capture: Option<Field>,
    text: String,
}

/// Streaming iterator of [`PaperRecord`]s from DBLP XML.
///
/// Stops after the first error; tolerated anomalies are tallied in
/// [`DblpReader::stats`].
pub struct DblpReader<R: BufRead> {
    reader: Reader<R>,
    buf: Vec<u8>,
    skip_buf: Vec<u8>,
    record: Option<OpenRecord>,
    open_elements: usize,
    stats: IngestStats,
    done: bool,
}

/// Parses a DBLP XML byte stream. Gzip input should be unwrapped first
/// with [`super::maybe_decompress`].
pub fn parse_stream<R: BufRead>(input: R) -> DblpReader<R> {
    DblpReader::new(input)
}

impl<R: BufRead> DblpReader<R> {
    pub fn new(input: R) -> Self {
        let mut reader = Reader::from_reader(input);
        let config = reader.config_mut();
        config.trim_text(false);
        config.check_end_names = true;
        Self {
            reader,
            buf: Vec::with_capacity(4096),
            skip_buf: Vec::new(),
            record: None,
            open_elements: 0,
            stats: IngestStats::default(),
            done: false,
        }
    }

    pub fn stats(&self) -> &IngestStats {
        &self.stats
    }

    /// Byte offset just past the last consumed event.
    pub fn position(&self) -> u64 {
        self.reader.buffer_position()
    }

    fn xml_error(&self, message: impl Into<String>) -> IngestError {
        IngestError::Xml {
            offset: self.reader.error_position(),
            message: message.into(),
        }
    }

    fn eof_error(&self, message: &str) -> IngestError {
        IngestError::Xml {
            offset: self.reader.buffer_position(),
            message: message.to_owned(),
        }
    }

    fn next_record(&mut self) -> Result<Option<PaperRecord>, IngestError> {
        loop {
            self.buf.clear();
            let event = match self.reader.read_event_into(&mut self.buf) {
                Ok(ev) => ev,
                Err(e) => {
                    let message = e.to_string();
                    return Err(self.xml_error(message));
                }
            };
            match event {
                Event::Start(start) => {
                    if let Some(rec) = self.record.as_mut() {
                        rec.depth += 1;
                        if rec.depth == 1 && rec.capture.is_none() {
                            if let Some(field) = Field::from_tag(start.name().as_ref().as_bytes()) {
                                rec.capture = Some(field);
                                rec.text.clear();
                            }
                        }
                        continue;
                    }
                    let tag = start.name().as_ref().as_bytes().to_vec();
                    if let Some(kind) = RecordKind::from_tag(&tag) {
                        self.record = Some(OpenRecord {
                            kind: Some(kind),
                            key: record_key(&start),
                            ..OpenRecord::default()
                        });
                    } else if is_skipped_kind(&tag) || self.open_elements > 0 {
                        if is_skipped_kind(&tag) {
                            self.stats.skipped_kinds += 1;
                        } else {
                            self.stats.unknown_elements += 1;
                        }
                        let end = start.to_end().into_owned();
                        self.skip_buf.clear();
                        if let Err(e) = self.reader.read_to_end_into(end.name(), &mut self.skip_buf)
                        {
                            let message = e.to_string();
                            return Err(self.xml_error(message));
                        }
                    } else {
                        // document root
                        self.open_elements += 1;
                    }
                }
                Event::Empty(start) => {
                    if let Some(rec) = self.record.as_mut() {
                        // <author/> and friends carry no text
                        if rec.depth == 0 && start.name().as_ref() == "author" {
                            self.stats.empty_author_tokens += 1;
                        }
                        continue;
                    }
                    let name = start.name();
                    let tag = name.as_ref().as_bytes();
                    if RecordKind::from_tag(tag).is_some() {
                        self.stats.missing_title += 1;
                    } else if is_skipped_kind(tag) {
                        self.stats.skipped_kinds += 1;
                    } else if self.open_elements > 0 {
                        self.stats.unknown_elements += 1;
                    }
                }
                Event::Text(text) => {
                    if let Some(rec) = self.record.as_mut() {
                        if rec.capture.is_some() {
                            rec.text.push_str(&text.xml10_content());
                        }
                    }
                }
                Event::CData(data) => {
                    if let Some(rec) = self.record.as_mut() {
                        if rec.capture.is_some() {
                            rec.text.push_str(data.as_ref());
                        }
                    }
                }
                Event::GeneralRef(reference) => {
                    if let Some(rec) = self.record.as_mut() {
                        if rec.capture.is_some() {
                            match resolve_reference(&reference) {
                                Some(c) => rec.text.push(c),
                                None => {
                                    log::debug!("unknown entity &{};", &*reference);
                                    self.stats.unknown_entities += 1;
                                    rec.text.push(char::REPLACEMENT_CHARACTER);
                                }
                            }
                        }
                    }
                }
                Event::End(_) => {
                    let Some(rec) = self.record.as_mut() else {
                        self.open_elements = self.open_elements.saturating_sub(1);
                        continue;
                    };
                    if rec.depth == 0 {
                        let rec = self.record.take().expect("record is open");
                        if let Some(paper) = self.finish_record(rec) {
                            self.stats.records += 1;
                            return Ok(Some(paper));
                        }
                        continue;
                    }
                    if rec.depth == 1 {
                        if let Some(field) = rec.capture.take() {
                            let value = collapse_whitespace(&rec.text);
                            match field {
                                Field::Author => {
                                    if value.is_empty() {
                                        self.stats.empty_author_tokens += 1;
                                    } else {
                                        rec.authors.push(value);
                                    }
                                }
                                Field::Title => rec.title = Some(value),
                                Field::Year => rec.year_text = Some(value),
                            }
                        }
                    }
                    rec.depth -= 1;
                }
                Event::Eof => {
                    if self.record.is_some() {
                        return Err(self.eof_error("unexpected end of input inside a record"));
                    }
                    if self.open_elements > 0 {
                        return Err(
                            self.eof_error("unexpected end of input: unclosed root element")
                        );
                    }
                    return Ok(None);
                }
                Event::Decl(_) | Event::PI(_) | Event::DocType(_) | Event::Comment(_) => {}
            }
        }
    }

    fn finish_record(&mut self, rec: OpenRecord) -> Option<PaperRecord> {
        if rec.key.is_empty() {
            self.stats.missing_key += 1;
            return None;
        }
        let title = match rec.title {
            Some(t) if !t.is_empty() => t,
            _ => {
                self.stats.missing_title += 1;
                return None;
            }
        };
        let year = match rec.year_text.as_deref() {
            None | Some("") => None,
            Some(y) => match y.parse::<i32>() {
                Ok(v) => Some(v),
                Err(_) => {
                    self.stats.bad_year += 1;
                    None
                }
            },
        };
        Some(PaperRecord {
            dblp_key: rec.key,
            kind: rec.kind.unwrap_or(RecordKind::Article),
            year,
            title,
            authors: rec.authors,
        })
    }
}

fn record_key(start: &BytesStart<'_>) -> String {
    start
        .try_get_attribute("key")
        .ok()
        .flatten()
        .map(|attr| decode_references(&attr.value).0.trim().to_owned())
        .unwrap_or_default()
}

impl<R: BufRead> Iterator for DblpReader<R> {
    type Item = Result<PaperRecord, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        match self.next_record() {
            Ok(Some(rec)) => Some(Ok(rec)),
            Ok(None) => {
                self.done = true;
                None
            }
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
        }
    }
}
