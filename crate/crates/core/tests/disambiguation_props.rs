mod support;

use std::collections::BTreeSet;

use coref_core::disambiguate::{apply_threshold, score_pairs};
use coref_core::similarity::SimilarityScore;
use coref_core::{
    build_graph, classify, find_mentions, run_all_pairs, transitive_closure, two_step_score,
    CandidatePair, Measure, MentionId, PaperRecord,
};
use proptest::prelude::*;

fn positive(a: u32, b: u32) -> CandidatePair {
    CandidatePair {
        a: MentionId(a),
        b: MentionId(b),
        score: SimilarityScore {
            measure: Measure::Cn,
            value: 1.0,
            zero_tail: false,
            degenerate_terms: 0,
        },
        predicted_same: Some(true),
        same_paper: false,
    }
}

/// Records where some authors are "Chen Li" variants.
fn homonym_rows() -> impl Strategy<Value = Vec<PaperRecord>> {
    let author = prop_oneof![
        3 => (0usize..6).prop_map(|a| format!("Other{a}")),
        1 => Just("Chen Li".to_owned()),
        2 => (1u32..4).prop_map(|s| format!("Chen Li {s:04}")),
    ];
    prop::collection::vec(prop::collection::btree_set(author, 1..5), 2..8).prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, r)| PaperRecord::new(format!("p/{i}"), None, "t").with_authors(r))
            .collect()
    })
}

fn reach(n: usize, edges: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![vec![false; n]; n];
    for (i, row) in adj.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in edges {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if adj[i][k] && adj[k][j] {
                    adj[i][j] = true;
                }
            }
        }
    }
    (0..n)
        .map(|i| (0..n).filter(|&j| adj[i][j]).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn pairs_are_complete_symmetric_and_blind(recs in homonym_rows()) {
        let (g, _) = build_graph(&recs).unwrap();
        let set = find_mentions(&g, "Chen Li");
        prop_assume!(set.len() >= 2);
        let n = set.len();
        for m in Measure::ALL {
            let pairs = run_all_pairs(&g, &set, m, 0.0).unwrap();
            prop_assert_eq!(pairs.len(), n * (n - 1) / 2);
            let distinct: BTreeSet<_> = pairs.iter().map(|p| (p.a, p.b)).collect();
            prop_assert_eq!(distinct.len(), pairs.len());
            for p in &pairs {
                prop_assert!(p.a < p.b);
                let ba = two_step_score(&g, &set, p.b, p.a, m).unwrap();
                prop_assert_eq!(p.score, ba);
                let (ma, mb) = (&set.mentions[p.a.index()], &set.mentions[p.b.index()]);
                prop_assert_eq!(p.same_paper, ma.paper == mb.paper);
                for c in g.common_neighbors(ma.paper, mb.paper, &set.homonyms).unwrap() {
                    prop_assert_ne!(g.author(c).unwrap().canonical_name.as_str(), "Chen Li");
                }
            }
        }
    }

    #[test]
    fn threshold_is_monotone(recs in homonym_rows(), r1 in -2.0f64..3.0, dr in 0.0f64..3.0) {
        let (g, _) = build_graph(&recs).unwrap();
        let set = find_mentions(&g, "Chen Li");
        prop_assume!(set.len() >= 2);
        for m in Measure::ALL {
            for p in score_pairs(&g, &set, m, true).unwrap() {
                if !classify(&p.score, r1) {
                    prop_assert!(!classify(&p.score, r1 + dr));
                }
                if p.score.zero_tail {
                    prop_assert!(!classify(&p.score, r1.max(0.0)));
                }
            }
        }
    }

    #[test]
    fn closure_matches_reachability(n in 1usize..12, raw in prop::collection::vec((0usize..12, 0usize..12), 0..20)) {
        let edges: Vec<(usize, usize)> = raw
            .into_iter()
            .map(|(a, b)| (a % n, b % n))
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        let pairs: Vec<_> = edges.iter().map(|&(a, b)| positive(a as u32, b as u32)).collect();
        let clusters = transitive_closure(n, &pairs);
        let oracle = reach(n, &edges);
        for (i, reachable) in oracle.iter().enumerate() {
            let root = clusters.root(MentionId(i as u32)).index();
            prop_assert_eq!(root, *reachable.iter().next().unwrap());
        }
        let members: usize = clusters.clusters().iter().map(Vec::len).sum();
        prop_assert_eq!(members, n);
        let distinct: BTreeSet<_> = oracle.iter().collect();
        prop_assert_eq!(clusters.cluster_count(), distinct.len());
    }
}

#[test]
fn two_disjoint_triangles_make_two_clusters() {
    let edges = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)];
    let pairs: Vec<_> = edges.iter().map(|&(a, b)| positive(a, b)).collect();
    let c = transitive_closure(6, &pairs);
    let oracle = reach(6, &edges.map(|(a, b)| (a as usize, b as usize)));
    assert_eq!(c.cluster_count(), 2);
    for (i, reachable) in oracle.iter().enumerate() {
        let mine: BTreeSet<usize> = (0..6)
            .filter(|&j| c.root(MentionId(j as u32)) == c.root(MentionId(i as u32)))
            .collect();
        assert_eq!(&mine, reachable);
    }
}

#[test]
fn twenty_four_variants_give_all_pairs() {
    let mut recs = Vec::new();
    for v in 0..24 {
        let name = if v == 0 {
            "Chen Li".to_owned()
        } else {
            format!("Chen Li {v:04}")
        };
        recs.push(
            PaperRecord::new(format!("p/{v}/a"), None, "t")
                .with_authors([name.clone(), format!("Coauthor{v}")]),
        );
        recs.push(
            PaperRecord::new(format!("p/{v}/b"), None, "t")
                .with_authors([name, format!("Coauthor{v}")]),
        );
    }
    let (g, _) = build_graph(&recs).unwrap();
    let set = find_mentions(&g, "Chen Li");
    assert_eq!(set.homonyms.len(), 24);
    assert_eq!(set.len(), 48);
    let mut pairs = score_pairs(&g, &set, Measure::Cn, true).unwrap();
    assert_eq!(pairs.len(), 48 * 47 / 2);
    apply_threshold(&mut pairs, 0.0);
    assert_eq!(transitive_closure(set.len(), &pairs).cluster_count(), 24);
}
