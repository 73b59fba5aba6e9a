//! Pairwise evaluation against DBLP's suffix-based ground truth.
//!
//! Two suffixed mentions are the same person iff their suffixes match. Any
//! pair touching an unsuffixed mention has no ground truth and is kept out
//! of the confusion matrix.

mod rank;
mod report;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::disambiguate::{CandidatePair, Mention, MentionId, MentionSet};
use crate::graph::GraphError;

pub use rank::{auc_rank, kta_literal, rank_evaluation, RankEvaluation};
pub use report::{
    build_pair_rows, evaluate_run, write_clusters, write_report, write_sweep, Counts,
    MetricsSection, PairRow, RankingSection, ReportFormat, RunReport, SweepRow, ZeroTailSection,
};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("pair ({0}, {1}) has no prediction")]
    MissingPrediction(MentionId, MentionId),
    #[error("length mismatch: {0} scores vs {1} labels")]
    LengthMismatch(usize, usize),
    #[error("score at index {0} is NaN")]
    NanScore(usize),
    #[error("ranks are not a permutation of 1..={0}")]
    NotAPermutation(usize),
    #[error("invalid rank input: n_new={n_new}, n_pot={n_pot}")]
    InvalidRankInput { n_new: usize, n_pot: usize },
    #[error("unsupported report format {0:?} (expected json or csv)")]
    UnsupportedFormat(String),
    #[error("unknown mention {0}")]
    UnknownMention(MentionId),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroundTruth {
    Same,
    Different,
    Unknown,
}

impl GroundTruth {
    pub fn as_str(self) -> &'static str {
        match self {
            GroundTruth::Same => "same",
            GroundTruth::Different => "different",
            GroundTruth::Unknown => "unknown",
        }
    }
}

pub fn ground_truth(m1: &Mention, m2: &Mention) -> GroundTruth {
    match (&m1.suffix, &m2.suffix) {
        (Some(a), Some(b)) if a == b => GroundTruth::Same,
        (Some(_), Some(_)) => GroundTruth::Different,
        _ => GroundTruth::Unknown,
    }
}

pub(crate) fn pair_truth(set: &MentionSet, pair: &CandidatePair) -> Result<GroundTruth, EvalError> {
    let a = set
        .mentions
        .get(pair.a.index())
        .ok_or(EvalError::UnknownMention(pair.a))?;
    let b = set
        .mentions
        .get(pair.b.index())
        .ok_or(EvalError::UnknownMention(pair.b))?;
    Ok(ground_truth(a, b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    #[serde(rename = "TP")]
    TruePositive,
    #[serde(rename = "FP")]
    FalsePositive,
    #[serde(rename = "TN")]
    TrueNegative,
    #[serde(rename = "FN")]
    FalseNegative,
    #[serde(rename = "UNK")]
    Unknown,
}

impl Classification {
    pub fn of(predicted_same: bool, truth: GroundTruth) -> Self {
        match (predicted_same, truth) {
            (_, GroundTruth::Unknown) => Classification::Unknown,
            (true, GroundTruth::Same) => Classification::TruePositive,
            (true, GroundTruth::Different) => Classification::FalsePositive,
            (false, GroundTruth::Different) => Classification::TrueNegative,
            (false, GroundTruth::Same) => Classification::FalseNegative,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::TruePositive => "TP",
            Classification::FalsePositive => "FP",
            Classification::TrueNegative => "TN",
            Classification::FalseNegative => "FN",
            Classification::Unknown => "UNK",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub r#fn: u64,
    /// Pairs without ground truth, not part of the four cells.
    pub excluded_unknown: u64,
}

impl ConfusionMatrix {
    pub fn evaluated(&self) -> u64 {
        self.tp + self.fp + self.tn + self.r#fn
    }

    pub fn record(&mut self, c: Classification) {
        match c {
            Classification::TruePositive => self.tp += 1,
            Classification::FalsePositive => self.fp += 1,
            Classification::TrueNegative => self.tn += 1,
            Classification::FalseNegative => self.r#fn += 1,
            Classification::Unknown => self.excluded_unknown += 1,
        }
    }
}

pub fn confusion(pairs: &[CandidatePair], set: &MentionSet) -> Result<ConfusionMatrix, EvalError> {
    let mut cm = ConfusionMatrix::default();
    for p in pairs {
        let predicted = p
            .predicted_same
            .ok_or(EvalError::MissingPrediction(p.a, p.b))?;
        cm.record(Classification::of(predicted, pair_truth(set, p)?));
    }
    Ok(cm)
}

/// A ratio that stays exact until it is displayed; `None` denominators are
/// never constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub numerator: u64,
    pub denominator: u64,
}

impl Ratio {
    pub fn new(numerator: u64, denominator: u64) -> Option<Self> {
        (denominator != 0).then_some(Self {
            numerator,
            denominator,
        })
    }

    pub fn value(self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

/// Precision, accuracy, specificity and sensitivity. A metric is `None`
/// exactly when its denominator is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Metrics {
    pub precision: Option<Ratio>,
    pub accuracy: Option<Ratio>,
    pub specificity: Option<Ratio>,
    pub sensitivity: Option<Ratio>,
}

pub fn metrics(cm: &ConfusionMatrix) -> Metrics {
    Metrics {
        precision: Ratio::new(cm.tp, cm.tp + cm.fp),
        accuracy: Ratio::new(cm.tp + cm.tn, cm.evaluated()),
        specificity: Ratio::new(cm.tn, cm.tn + cm.fp),
        sensitivity: Ratio::new(cm.tp, cm.tp + cm.r#fn),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ZeroTailStats {
    pub pairs: u64,
    /// Zero-tail pairs whose ground truth is "same": forced false negatives.
    pub same: u64,
}

pub fn zero_tail_stats(
    pairs: &[CandidatePair],
    set: &MentionSet,
) -> Result<ZeroTailStats, EvalError> {
    let mut stats = ZeroTailStats::default();
    for p in pairs.iter().filter(|p| p.score.zero_tail) {
        stats.pairs += 1;
        if pair_truth(set, p)? == GroundTruth::Same {
            stats.same += 1;
        }
    }
    Ok(stats)
}
