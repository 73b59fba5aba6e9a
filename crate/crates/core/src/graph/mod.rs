//! Immutable bipartite author-paper graph in CSR form.
//!
//! Author and paper identities are interned to dense `u32` ids. Every
//! suffixed DBLP name ("Chen Li 0001") is its own author node; hiding that
//! ground truth from scoring is the disambiguator's job, not the store's.

pub mod intersect;
pub mod snapshot;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{full_key, is_homonym_suffix, normalize_name, PaperRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AuthorId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PaperId(pub u32);

impl AuthorId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl PaperId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for AuthorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

impl fmt::Display for PaperId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("author name is empty after normalization")]
    EmptyName,
    #[error("homonym suffix {0:?} is not exactly four decimal digits")]
    InvalidSuffix(String),
    #[error("author id {0} out of range")]
    AuthorOutOfRange(u32),
    #[error("paper id {0} out of range")]
    PaperOutOfRange(u32),
    #[error("path count between an author and itself is undefined")]
    SameAuthor,
    #[error("only max_len == 2 is supported, got {0}")]
    UnsupportedPathLength(usize),
    #[error("duplicate dblp key {0:?}")]
    DuplicateKey(String),
    #[error("record {0:?} has no usable author")]
    NoAuthors(String),
    #[error("cannot finalize a graph with no papers")]
    EmptyGraph,
    #[error("too many nodes for 32-bit ids")]
    Overflow,
    #[error("invalid snapshot: {0}")]
    Snapshot(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuthorNode {
    pub id: AuthorId,
    pub canonical_name: String,
    pub homonym_suffix: Option<String>,
}

impl AuthorNode {
    pub fn full_key(&self) -> String {
        full_key(&self.canonical_name, self.homonym_suffix.as_deref())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaperNode {
    pub id: PaperId,
    pub dblp_key: String,
    pub year: Option<i32>,
    pub title: String,
}

/// Anomalies the builder tolerates instead of failing on.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildWarnings {
    pub duplicate_authors: usize,
    pub duplicate_keys: usize,
    pub no_authors: usize,
    pub rejected_names: usize,
}

/// Sorted, deduplicated set of author ids removed from neighbour sets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExclusionSet(Vec<AuthorId>);

impl ExclusionSet {
    pub fn new(ids: impl IntoIterator<Item = AuthorId>) -> Self {
        let mut v: Vec<AuthorId> = ids.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn contains(&self, id: AuthorId) -> bool {
        self.0.binary_search(&id).is_ok()
    }

    pub fn as_slice(&self) -> &[AuthorId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Single-writer builder. Papers are stored in insertion order.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    authors: Vec<AuthorNode>,
    author_index: HashMap<String, AuthorId>,
    papers: Vec<PaperNode>,
    paper_index: HashMap<String, PaperId>,
    paper_offsets: Vec<u64>,
    edges: Vec<AuthorId>,
    warnings: BuildWarnings,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self {
            paper_offsets: vec![0],
            ..Self::default()
        }
    }

    pub fn warnings(&self) -> &BuildWarnings {
        &self.warnings
    }

    pub fn paper_count(&self) -> usize {
        self.papers.len()
    }

    /// Returns the id for `(canonical_name, suffix)`, creating it on first
    /// sight. The name is whitespace-collapsed before interning.
    pub fn intern_author(
        &mut self,
        canonical_name: &str,
        suffix: Option<&str>,
    ) -> Result<AuthorId, GraphError> {
        let canonical = crate::ingest::collapse_whitespace(canonical_name);
        if canonical.is_empty() {
            return Err(GraphError::EmptyName);
        }
        if let Some(s) = suffix {
            if !is_homonym_suffix(s) {
                return Err(GraphError::InvalidSuffix(s.to_owned()));
            }
        }
        let key = full_key(&canonical, suffix);
        if let Some(id) = self.author_index.get(&key) {
            return Ok(*id);
        }
        let id = AuthorId(u32::try_from(self.authors.len()).map_err(|_| GraphError::Overflow)?);
        self.authors.push(AuthorNode {
            id,
            canonical_name: canonical,
            homonym_suffix: suffix.map(str::to_owned),
        });
        self.author_index.insert(key, id);
        Ok(id)
    }

    /// Adds one paper with an edge per distinct author.
    ///
    /// Rejected records (duplicate key, no usable author) leave the builder
    /// untouched apart from the warning counters.
    pub fn add_paper(&mut self, record: &PaperRecord) -> Result<PaperId, GraphError> {
        if self.paper_index.contains_key(&record.dblp_key) {
            self.warnings.duplicate_keys += 1;
            return Err(GraphError::DuplicateKey(record.dblp_key.clone()));
        }
        let mut names = Vec::with_capacity(record.authors.len());
        for raw in &record.authors {
            match normalize_name(raw) {
                Ok(n) => names.push(n),
                Err(_) => self.warnings.rejected_names += 1,
            }
        }
        if names.is_empty() {
            self.warnings.no_authors += 1;
            return Err(GraphError::NoAuthors(record.dblp_key.clone()));
        }
        let id = PaperId(u32::try_from(self.papers.len()).map_err(|_| GraphError::Overflow)?);
        let mut row = Vec::with_capacity(names.len());
        for n in &names {
            row.push(self.intern_author(&n.canonical, n.suffix.as_deref())?);
        }
        row.sort_unstable();
        let before = row.len();
        row.dedup();
        self.warnings.duplicate_authors += before - row.len();

        self.edges.extend_from_slice(&row);
        self.paper_offsets.push(self.edges.len() as u64);
        self.papers.push(PaperNode {
            id,
            dblp_key: record.dblp_key.clone(),
            year: record.year,
            title: record.title.clone(),
        });
        self.paper_index.insert(record.dblp_key.clone(), id);
        Ok(id)
    }

    pub fn finalize(self) -> Result<BipartiteGraph, GraphError> {
        if self.papers.is_empty() {
            return Err(GraphError::EmptyGraph);
        }
        BipartiteGraph::from_parts(self.authors, self.papers, self.paper_offsets, self.edges)
    }
}

/// Finalized, immutable author-paper graph.
///
/// Both directions are stored as CSR: an offset array of length
/// `count + 1` and a flat neighbour array of length `edge_count`, with each
/// row strictly ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    authors: Vec<AuthorNode>,
    papers: Vec<PaperNode>,
    paper_offsets: Vec<u64>,
    paper_authors: Vec<AuthorId>,
    author_offsets: Vec<u64>,
    author_papers: Vec<PaperId>,
    author_index: HashMap<String, AuthorId>,
    by_canonical: HashMap<String, Vec<AuthorId>>,
    paper_index: HashMap<String, PaperId>,
}

impl BipartiteGraph {
    /// Builds the reverse direction and lookup tables from the paper rows.
    pub(crate) fn from_parts(
        authors: Vec<AuthorNode>,
        papers: Vec<PaperNode>,
        paper_offsets: Vec<u64>,
        paper_authors: Vec<AuthorId>,
    ) -> Result<Self, GraphError> {
        let mut degree = vec![0u64; authors.len()];
        for a in &paper_authors {
            *degree
                .get_mut(a.index())
                .ok_or(GraphError::AuthorOutOfRange(a.0))? += 1;
        }
        let mut author_offsets = Vec::with_capacity(authors.len() + 1);
        author_offsets.push(0u64);
        for d in &degree {
            author_offsets.push(author_offsets.last().copied().unwrap_or(0) + d);
        }
        let mut cursor: Vec<u64> = author_offsets[..authors.len()].to_vec();
        let mut author_papers = vec![PaperId(0); paper_authors.len()];
        // Papers are visited in id order, so every author row comes out sorted.
        for p in 0..papers.len() {
            let (lo, hi) = (paper_offsets[p] as usize, paper_offsets[p + 1] as usize);
            for a in &paper_authors[lo..hi] {
                let slot = &mut cursor[a.index()];
                author_papers[*slot as usize] = PaperId(p as u32);
                *slot += 1;
            }
        }

        let author_index = authors.iter().map(|a| (a.full_key(), a.id)).collect();
        let mut by_canonical: HashMap<String, Vec<AuthorId>> = HashMap::new();
        for a in &authors {
            by_canonical
                .entry(a.canonical_name.clone())
                .or_default()
                .push(a.id);
        }
        let paper_index = papers.iter().map(|p| (p.dblp_key.clone(), p.id)).collect();

        Ok(Self {
            authors,
            papers,
            paper_offsets,
            paper_authors,
            author_offsets,
            author_papers,
            author_index,
            by_canonical,
            paper_index,
        })
    }

    pub fn author_count(&self) -> usize {
        self.authors.len()
    }

    pub fn paper_count(&self) -> usize {
        self.papers.len()
    }

    pub fn edge_count(&self) -> usize {
        self.paper_authors.len()
    }

    pub fn authors(&self) -> &[AuthorNode] {
        &self.authors
    }

    pub fn papers(&self) -> &[PaperNode] {
        &self.papers
    }

    pub fn author(&self, a: AuthorId) -> Result<&AuthorNode, GraphError> {
        self.authors
            .get(a.index())
            .ok_or(GraphError::AuthorOutOfRange(a.0))
    }

    pub fn paper(&self, p: PaperId) -> Result<&PaperNode, GraphError> {
        self.papers
            .get(p.index())
            .ok_or(GraphError::PaperOutOfRange(p.0))
    }

    /// Looks up an author by its full key (`"Chen Li 0001"`).
    pub fn author_by_key(&self, full_key: &str) -> Option<AuthorId> {
        self.author_index.get(full_key).copied()
    }

    pub fn paper_by_key(&self, dblp_key: &str) -> Option<PaperId> {
        self.paper_index.get(dblp_key).copied()
    }

    /// All author nodes sharing a canonical name, every suffix variant
    /// included, in ascending id order.
    pub fn authors_by_canonical(&self, canonical: &str) -> &[AuthorId] {
        self.by_canonical.get(canonical).map_or(&[], Vec::as_slice)
    }

    /// Distinct canonical names, unordered.
    pub fn canonical_names(&self) -> impl Iterator<Item = &str> {
        self.by_canonical.keys().map(String::as_str)
    }

    pub fn paper_authors(&self, p: PaperId) -> Result<&[AuthorId], GraphError> {
        let i = p.index();
        if i >= self.papers.len() {
            return Err(GraphError::PaperOutOfRange(p.0));
        }
        Ok(&self.paper_authors[self.paper_offsets[i] as usize..self.paper_offsets[i + 1] as usize])
    }

    pub fn author_papers(&self, a: AuthorId) -> Result<&[PaperId], GraphError> {
        let i = a.index();
        if i >= self.authors.len() {
            return Err(GraphError::AuthorOutOfRange(a.0));
        }
        Ok(&self.author_papers
            [self.author_offsets[i] as usize..self.author_offsets[i + 1] as usize])
    }

    pub fn author_degree(&self, a: AuthorId) -> Result<usize, GraphError> {
        self.author_papers(a).map(<[_]>::len)
    }

    pub fn paper_degree(&self, p: PaperId) -> Result<usize, GraphError> {
        self.paper_authors(p).map(<[_]>::len)
    }

    /// Authors of both papers, minus `exclude`, ascending.
    ///
    /// For `p1 == p2` this is the paper's own author row minus `exclude`.
    pub fn common_neighbors(
        &self,
        p1: PaperId,
        p2: PaperId,
        exclude: &ExclusionSet,
    ) -> Result<Vec<AuthorId>, GraphError> {
        let r1 = self.paper_authors(p1)?;
        let r2 = self.paper_authors(p2)?;
        let mut out = Vec::new();
        if p1 == p2 {
            out.extend_from_slice(r1);
        } else {
            intersect::intersect_into(r1, r2, &mut out);
        }
        if !exclude.is_empty() {
            out.retain(|a| !exclude.contains(*a));
        }
        Ok(out)
    }

    /// Number of author-author paths of length at most `max_len` edges.
    ///
    /// Author nodes are never adjacent, so the only paths of length ≤ 2 are
    /// `a1 - p - a2` through a shared paper. Only `max_len == 2` is
    /// supported.
    pub fn bounded_path_count(
        &self,
        a1: AuthorId,
        a2: AuthorId,
        max_len: usize,
    ) -> Result<u64, GraphError> {
        if max_len != 2 {
            return Err(GraphError::UnsupportedPathLength(max_len));
        }
        let r1 = self.author_papers(a1)?;
        let r2 = self.author_papers(a2)?;
        if a1 == a2 {
            return Err(GraphError::SameAuthor);
        }
        Ok(intersect::intersect_count(r1, r2) as u64)
    }

    pub(crate) fn raw_parts(&self) -> (&[u64], &[AuthorId], &[u64], &[PaperId]) {
        (
            &self.paper_offsets,
            &self.paper_authors,
            &self.author_offsets,
            &self.author_papers,
        )
    }
}

/// Builds a graph from records, skipping (and counting) rejected ones.
pub fn build_graph<'a, I>(records: I) -> Result<(BipartiteGraph, BuildWarnings), GraphError>
where
    I: IntoIterator<Item = &'a PaperRecord>,
{
    let mut builder = GraphBuilder::new();
    for rec in records {
        match builder.add_paper(rec) {
            Ok(_) | Err(GraphError::DuplicateKey(_)) | Err(GraphError::NoAuthors(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let warnings = *builder.warnings();
    Ok((builder.finalize()?, warnings))
}
