#![allow(dead_code)]

use coref_core::{build_graph, BipartiteGraph, PaperRecord};
use proptest::prelude::*;

/// Paper rows over author indices `0..authors`; every row non-empty.
pub fn rows(authors: usize, papers: usize) -> impl Strategy<Value = Vec<Vec<usize>>> {
    prop::collection::vec(
        prop::collection::btree_set(0..authors, 1..=authors.min(6)),
        1..=papers,
    )
    .prop_map(|v| v.into_iter().map(|s| s.into_iter().collect()).collect())
}

pub fn records(rows: &[Vec<usize>]) -> Vec<PaperRecord> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            PaperRecord::new(format!("p/{i}"), Some(2000), format!("t{i}"))
                .with_authors(r.iter().map(|a| format!("Author{a}")))
        })
        .collect()
}

pub fn graph(rows: &[Vec<usize>]) -> BipartiteGraph {
    build_graph(&records(rows)).unwrap().0
}
