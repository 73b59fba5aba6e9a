//! Ranking quality of a scored pair list.
//!
//! `kta_literal` evaluates the Kendall-style link prediction score term by
//! term, with no normalization added:
//!
//! ```text
//! KtA = 1 / (|A_pot| - 1 - |A_new|) · Σ_{t=|A_new|}^{|A_pot|-1} (r_t - |A_new| + 1)
//! ```
//!
//! Rank convention: potential links are listed ideal-first (every new link
//! before every other link) and `ranks[t]` is the 1-indexed position the
//! ranking function gives the `t`-th of them. The formula does not
//! normalize to `[0, 1]`, so `auc_rank` is reported next to it.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{pair_truth, EvalError, GroundTruth};
use crate::disambiguate::{CandidatePair, MentionSet};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankEvaluation {
    pub n_new: usize,
    pub n_pot: usize,
    pub kta_literal: Option<f64>,
    pub auc: Option<f64>,
}

/// Literal evaluation; `Ok(None)` when the normalizer is zero.
pub fn kta_literal(n_new: usize, n_pot: usize, ranks: &[usize]) -> Result<Option<f64>, EvalError> {
    if ranks.len() != n_pot {
        return Err(EvalError::NotAPermutation(n_pot));
    }
    let mut seen = vec![false; n_pot];
    for &r in ranks {
        if r == 0 || r > n_pot || std::mem::replace(&mut seen[r - 1], true) {
            return Err(EvalError::NotAPermutation(n_pot));
        }
    }
    let denominator = n_pot as i64 - 1 - n_new as i64;
    if denominator == 0 {
        return Ok(None);
    }
    if denominator < 0 {
        return Err(EvalError::InvalidRankInput { n_new, n_pot });
    }
    let sum: i64 = ranks[n_new..]
        .iter()
        .map(|&r| r as i64 - n_new as i64 + 1)
        .sum();
    Ok(Some(sum as f64 / denominator as f64))
}

/// Probability that a random (same, different) pair is ordered correctly,
/// ties counting one half. `Ok(None)` when either class is empty.
///
/// Zero-tail PMI scores are `-inf` and so sort below every finite score.
pub fn auc_rank(scores: &[f64], truth_same: &[bool]) -> Result<Option<f64>, EvalError> {
    if scores.len() != truth_same.len() {
        return Err(EvalError::LengthMismatch(scores.len(), truth_same.len()));
    }
    if let Some(i) = scores.iter().position(|s| s.is_nan()) {
        return Err(EvalError::NanScore(i));
    }
    let positives = truth_same.iter().filter(|t| **t).count();
    let negatives = truth_same.len() - positives;
    if positives == 0 || negatives == 0 {
        return Ok(None);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap_or(Ordering::Equal));

    // Mann-Whitney U with averaged ranks; work in doubled ranks to stay integral.
    let mut positive_rank_sum2: u128 = 0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // ranks i+1..=j+1 share the average (i + j + 2) / 2
        let doubled = (i + j + 2) as u128;
        for &k in &order[i..=j] {
            if truth_same[k] {
                positive_rank_sum2 += doubled;
            }
        }
        i = j + 1;
    }
    let p = positives as u128;
    let u2 = positive_rank_sum2 - p * (p + 1);
    Ok(Some(u2 as f64 / (2 * positives * negatives) as f64))
}

/// Ranks the pairs with known ground truth by score (zero-tail last, then
/// higher value first, ties by pair order) and evaluates both measures.
pub fn rank_evaluation(
    pairs: &[CandidatePair],
    set: &MentionSet,
) -> Result<RankEvaluation, EvalError> {
    let mut known = Vec::new();
    for p in pairs {
        match pair_truth(set, p)? {
            GroundTruth::Unknown => {}
            t => known.push((p, t == GroundTruth::Same)),
        }
    }
    let n_pot = known.len();
    let n_new = known.iter().filter(|(_, same)| *same).count();

    let mut by_score: Vec<usize> = (0..n_pot).collect();
    by_score.sort_by(|&x, &y| {
        let (sx, sy) = (&known[x].0.score, &known[y].0.score);
        sx.zero_tail
            .cmp(&sy.zero_tail)
            .then(sy.value.partial_cmp(&sx.value).unwrap_or(Ordering::Equal))
            .then(x.cmp(&y))
    });
    let mut position = vec![0usize; n_pot];
    for (pos, &idx) in by_score.iter().enumerate() {
        position[idx] = pos + 1;
    }
    let ideal_first: Vec<usize> = (0..n_pot)
        .filter(|&i| known[i].1)
        .chain((0..n_pot).filter(|&i| !known[i].1))
        .collect();
    let ranks: Vec<usize> = ideal_first.iter().map(|&i| position[i]).collect();

    let kta = match kta_literal(n_new, n_pot, &ranks) {
        Ok(v) => v,
        Err(EvalError::InvalidRankInput { .. }) => None,
        Err(e) => return Err(e),
    };
    let scores: Vec<f64> = known
        .iter()
        .map(|(p, _)| {
            if p.score.zero_tail {
                f64::NEG_INFINITY
            } else {
                p.score.value
            }
        })
        .collect();
    let truth: Vec<bool> = known.iter().map(|(_, same)| *same).collect();
    Ok(RankEvaluation {
        n_new,
        n_pot,
        kta_literal: kta,
        auc: auc_rank(&scores, &truth)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kta_examples() {
        assert_eq!(kta_literal(2, 4, &[1, 2, 3, 4]).unwrap(), Some(5.0));
        assert_eq!(kta_literal(2, 4, &[1, 2, 4, 3]).unwrap(), Some(5.0));
        assert_eq!(kta_literal(0, 3, &[1, 2, 3]).unwrap(), Some(4.5));
    }

    #[test]
    fn kta_edge_cases() {
        assert_eq!(kta_literal(2, 3, &[1, 2, 3]).unwrap(), None);
        assert!(matches!(
            kta_literal(1, 3, &[1, 1, 3]),
            Err(EvalError::NotAPermutation(3))
        ));
        assert!(matches!(
            kta_literal(1, 3, &[1, 2]),
            Err(EvalError::NotAPermutation(3))
        ));
        assert!(matches!(
            kta_literal(0, 3, &[0, 1, 2]),
            Err(EvalError::NotAPermutation(3))
        ));
        assert!(matches!(
            kta_literal(3, 3, &[1, 2, 3]),
            Err(EvalError::InvalidRankInput { .. })
        ));
    }

    #[test]
    fn auc_examples() {
        assert_eq!(
            auc_rank(&[0.9, 0.8, 0.1], &[true, true, false]).unwrap(),
            Some(1.0)
        );
        assert_eq!(auc_rank(&[0.5, 0.5], &[true, false]).unwrap(), Some(0.5));
        assert_eq!(auc_rank(&[0.1, 0.9], &[true, false]).unwrap(), Some(0.0));
        assert_eq!(auc_rank(&[0.1, 0.9], &[true, true]).unwrap(), None);
        assert!(auc_rank(&[0.1], &[true, false]).is_err());
        assert!(auc_rank(&[f64::NAN, 0.0], &[true, false]).is_err());
    }

    #[test]
    fn zero_tail_sorts_below_finite() {
        let s = [f64::NEG_INFINITY, -5.0, f64::NEG_INFINITY];
        assert_eq!(auc_rank(&s, &[false, true, false]).unwrap(), Some(1.0));
    }

    fn brute_auc(scores: &[f64], truth: &[bool]) -> Option<f64> {
        let mut wins = 0.0;
        let mut total = 0.0;
        for (i, &ti) in truth.iter().enumerate() {
            for (j, &tj) in truth.iter().enumerate() {
                if ti && !tj {
                    total += 1.0;
                    if scores[i] > scores[j] {
                        wins += 1.0;
                    } else if scores[i] == scores[j] {
                        wins += 0.5;
                    }
                }
            }
        }
        (total > 0.0).then(|| wins / total)
    }

    proptest! {
        #[test]
        fn auc_matches_brute_force(
            data in proptest::collection::vec((0u8..6, any::<bool>()), 0..100)
        ) {
            let scores: Vec<f64> = data.iter().map(|(s, _)| *s as f64 / 2.0).collect();
            let truth: Vec<bool> = data.iter().map(|(_, t)| *t).collect();
            let got = auc_rank(&scores, &truth).unwrap();
            let want = brute_auc(&scores, &truth);
            match (got, want) {
                (None, None) => {}
                (Some(g), Some(w)) => prop_assert!((g - w).abs() < 1e-12),
                other => prop_assert!(false, "{:?}", other),
            }
        }
    }
}
