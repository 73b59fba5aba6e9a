//! Two-step traversal disambiguation of a homonymous author name.
//!
//! Every occurrence of the query name on a paper is a [`Mention`]. Two
//! mentions are compared by walking author → paper → co-authors on both
//! sides and scoring the two papers with one of the [`Measure`]s, with
//! every author node carrying the query name excluded from the
//! neighbourhoods. Suffixes are carried on mentions for evaluation only.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{AuthorId, BipartiteGraph, ExclusionSet, GraphError, PaperId};
use crate::similarity::{self, Measure, SimilarityScore};
use crate::union_find::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MentionId(pub u32);

impl MentionId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for MentionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error)]
pub enum DisambiguationError {
    #[error("a mention cannot be compared with itself ({0})")]
    SameMention(MentionId),
    #[error("mention {0} is not part of this query")]
    UnknownMention(MentionId),
    #[error("nothing to disambiguate: {0} mention(s) found, need at least 2")]
    TooFewMentions(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mention {
    pub id: MentionId,
    pub paper: PaperId,
    pub author: AuthorId,
    /// Ground-truth identifier; never consulted while scoring.
    pub suffix: Option<String>,
}

/// All mentions of one query name plus the homonym exclusion set.
#[derive(Debug, Clone)]
pub struct MentionSet {
    pub query: String,
    pub mentions: Vec<Mention>,
    /// Every author node whose canonical name matched the query.
    pub homonyms: ExclusionSet,
}

impl MentionSet {
    pub fn len(&self) -> usize {
        self.mentions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mentions.is_empty()
    }

    pub fn get(&self, id: MentionId) -> Result<&Mention, DisambiguationError> {
        self.mentions
            .get(id.index())
            .ok_or(DisambiguationError::UnknownMention(id))
    }
}

/// Mentions of `query` (an already-normalized, suffix-free canonical name)
/// across the unsuffixed node and every suffixed variant, ordered by
/// paper id then author id.
pub fn find_mentions(g: &BipartiteGraph, query: &str) -> MentionSet {
    collect_mentions(g, query, g.authors_by_canonical(query).to_vec())
}

/// Like [`find_mentions`], optionally matching canonical names without
/// regard to case.
pub fn find_mentions_matching(
    g: &BipartiteGraph,
    query: &str,
    case_insensitive: bool,
) -> MentionSet {
    if !case_insensitive {
        return find_mentions(g, query);
    }
    let wanted = query.to_lowercase();
    let mut ids: Vec<AuthorId> = g
        .canonical_names()
        .filter(|name| name.to_lowercase() == wanted)
        .flat_map(|name| g.authors_by_canonical(name).iter().copied())
        .collect();
    ids.sort_unstable();
    collect_mentions(g, query, ids)
}

fn collect_mentions(g: &BipartiteGraph, query: &str, homonyms: Vec<AuthorId>) -> MentionSet {
    let mut occurrences: Vec<(PaperId, AuthorId)> = homonyms
        .iter()
        .flat_map(|&a| {
            g.author_papers(a)
                .expect("homonym ids come from the graph")
                .iter()
                .map(move |&p| (p, a))
        })
        .collect();
    occurrences.sort_unstable();
    let mentions = occurrences
        .into_iter()
        .enumerate()
        .map(|(i, (paper, author))| Mention {
            id: MentionId(i as u32),
            paper,
            author,
            suffix: g
                .author(author)
                .expect("homonym ids come from the graph")
                .homonym_suffix
                .clone(),
        })
        .collect();
    MentionSet {
        query: query.to_owned(),
        mentions,
        homonyms: ExclusionSet::new(homonyms),
    }
}

/// Scores two mentions through their papers.
pub fn two_step_score(
    g: &BipartiteGraph,
    set: &MentionSet,
    m1: MentionId,
    m2: MentionId,
    measure: Measure,
) -> Result<SimilarityScore, DisambiguationError> {
    if m1 == m2 {
        return Err(DisambiguationError::SameMention(m1));
    }
    let (a, b) = (set.get(m1)?, set.get(m2)?);
    Ok(similarity::score(
        g,
        measure,
        a.paper,
        b.paper,
        &set.homonyms,
    )?)
}

/// Positive iff the score is strictly greater than `rho`.
pub fn classify(score: &SimilarityScore, rho: f64) -> bool {
    score.value > rho
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CandidatePair {
    /// Always `a < b`.
    pub a: MentionId,
    pub b: MentionId,
    pub score: SimilarityScore,
    pub predicted_same: Option<bool>,
    pub same_paper: bool,
}

/// Scores every unordered mention pair (optionally dropping pairs that sit
/// on the same paper) without classifying them.
///
/// Runs on the current rayon pool; output order is `(a, b)` lexicographic
/// regardless of how many threads score it.
pub fn score_pairs(
    g: &BipartiteGraph,
    set: &MentionSet,
    measure: Measure,
    include_same_paper: bool,
) -> Result<Vec<CandidatePair>, DisambiguationError> {
    let n = set.len();
    if n < 2 {
        return Err(DisambiguationError::TooFewMentions(n));
    }
    let mentions = &set.mentions;
    let rows: Vec<Vec<CandidatePair>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let a = &mentions[i];
            let mut row = Vec::with_capacity(n - i - 1);
            for b in &mentions[i + 1..] {
                let same_paper = a.paper == b.paper;
                if same_paper && !include_same_paper {
                    continue;
                }
                let score = similarity::score(g, measure, a.paper, b.paper, &set.homonyms)?;
                row.push(CandidatePair {
                    a: a.id,
                    b: b.id,
                    score,
                    predicted_same: None,
                    same_paper,
                });
            }
            Ok(row)
        })
        .collect::<Result<_, GraphError>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Sets `predicted_same` on every pair for threshold `rho`.
pub fn apply_threshold(pairs: &mut [CandidatePair], rho: f64) {
    for p in pairs {
        p.predicted_same = Some(classify(&p.score, rho));
    }
}

/// Scores and classifies all `n(n-1)/2` mention pairs, same-paper pairs
/// included.
pub fn run_all_pairs(
    g: &BipartiteGraph,
    set: &MentionSet,
    measure: Measure,
    rho: f64,
) -> Result<Vec<CandidatePair>, DisambiguationError> {
    let mut pairs = score_pairs(g, set, measure, true)?;
    apply_threshold(&mut pairs, rho);
    Ok(pairs)
}

/// Mention clusters. `representative[m]` is the smallest mention id in
/// `m`'s cluster.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterAssignment {
    pub representative: Vec<MentionId>,
}

impl ClusterAssignment {
    pub fn root(&self, m: MentionId) -> MentionId {
        self.representative[m.index()]
    }

    pub fn cluster_count(&self) -> usize {
        self.representative
            .iter()
            .enumerate()
            .filter(|(i, r)| r.index() == *i)
            .count()
    }

    /// Clusters ordered by representative, members ascending.
    pub fn clusters(&self) -> Vec<Vec<MentionId>> {
        let mut by_root: Vec<Vec<MentionId>> = vec![Vec::new(); self.representative.len()];
        for (i, r) in self.representative.iter().enumerate() {
            by_root[r.index()].push(MentionId(i as u32));
        }
        by_root.into_iter().filter(|c| !c.is_empty()).collect()
    }
}

/// Connected components of the positive-prediction graph over
/// `mention_count` mentions. Unclassified pairs count as negative.
pub fn transitive_closure(mention_count: usize, pairs: &[CandidatePair]) -> ClusterAssignment {
    let mut uf = UnionFind::new(mention_count);
    for p in pairs.iter().filter(|p| p.predicted_same == Some(true)) {
        uf.union(p.a.index(), p.b.index());
    }
    let mut smallest = vec![usize::MAX; mention_count];
    for i in 0..mention_count {
        let r = uf.find(i);
        smallest[r] = smallest[r].min(i);
    }
    let representative = (0..mention_count)
        .map(|i| MentionId(smallest[uf.find(i)] as u32))
        .collect();
    ClusterAssignment { representative }
}
