//! Disambiguation of homonymous author names in co-authorship networks.
//!
//! The pipeline is: ingest DBLP records ([`ingest`]), intern them into an
//! immutable author-paper graph ([`graph`]), collect every mention of an
//! ambiguous name and score mention pairs through their papers' co-author
//! sets ([`disambiguate`], [`similarity`]), then compare the verdicts with
//! DBLP's suffix ground truth ([`eval`]).

pub mod disambiguate;
pub mod eval;
pub mod graph;
pub mod ingest;
pub mod similarity;
pub mod synth;
pub mod union_find;

pub use disambiguate::{
    classify, find_mentions, find_mentions_matching, run_all_pairs, score_pairs,
    transitive_closure, two_step_score, CandidatePair, ClusterAssignment, Mention, MentionId,
    MentionSet,
};
pub use graph::{
    build_graph, AuthorId, BipartiteGraph, ExclusionSet, GraphBuilder, GraphError, PaperId,
};
pub use ingest::{normalize_name, PaperRecord};
pub use similarity::{Measure, SimilarityScore};
