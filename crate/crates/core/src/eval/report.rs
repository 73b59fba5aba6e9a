use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    confusion, metrics, pair_truth, rank_evaluation, zero_tail_stats, Classification,
    ConfusionMatrix, EvalError, Metrics,
};
use crate::disambiguate::{CandidatePair, ClusterAssignment, MentionSet};
use crate::graph::BipartiteGraph;
use crate::similarity::Measure;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(EvalError::UnsupportedFormat(other.to_owned())),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub r#fn: u64,
    pub unknown: u64,
}

impl From<&ConfusionMatrix> for Counts {
    fn from(cm: &ConfusionMatrix) -> Self {
        Self {
            tp: cm.tp,
            fp: cm.fp,
            tn: cm.tn,
            r#fn: cm.r#fn,
            unknown: cm.excluded_unknown,
        }
    }
}

/// Metrics as serialized: `null` marks a zero denominator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricsSection {
    pub precision: Option<f64>,
    pub accuracy: Option<f64>,
    pub specificity: Option<f64>,
    pub sensitivity: Option<f64>,
}

impl From<&Metrics> for MetricsSection {
    fn from(m: &Metrics) -> Self {
        Self {
            precision: m.precision.map(|r| r.value()),
            accuracy: m.accuracy.map(|r| r.value()),
            specificity: m.specificity.map(|r| r.value()),
            sensitivity: m.sensitivity.map(|r| r.value()),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroTailSection {
    pub pairs: u64,
    pub r#fn: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RankingSection {
    pub kta_literal: Option<f64>,
    pub auc: Option<f64>,
}

/// The JSON run report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub measure: Measure,
    pub rho: f64,
    pub counts: Counts,
    pub metrics: MetricsSection,
    pub zero_tail: ZeroTailSection,
    pub ranking: RankingSection,
}

/// Evaluates classified pairs into a [`RunReport`].
pub fn evaluate_run(
    set: &MentionSet,
    pairs: &[CandidatePair],
    measure: Measure,
    rho: f64,
) -> Result<RunReport, EvalError> {
    let cm = confusion(pairs, set)?;
    let zt = zero_tail_stats(pairs, set)?;
    let rank = rank_evaluation(pairs, set)?;
    Ok(RunReport {
        measure,
        rho,
        counts: Counts::from(&cm),
        metrics: MetricsSection::from(&metrics(&cm)),
        zero_tail: ZeroTailSection {
            pairs: zt.pairs,
            r#fn: zt.same,
        },
        ranking: RankingSection {
            kta_literal: rank.kta_literal,
            auc: rank.auc,
        },
    })
}

/// One line of the per-pair CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct PairRow {
    pub mention_a: u32,
    pub mention_b: u32,
    pub paper_a_key: String,
    pub paper_b_key: String,
    pub measure: Measure,
    pub value: f64,
    pub zero_tail: bool,
    pub predicted: bool,
    pub truth: super::GroundTruth,
    pub classification: Classification,
}

pub fn build_pair_rows(
    g: &BipartiteGraph,
    set: &MentionSet,
    pairs: &[CandidatePair],
) -> Result<Vec<PairRow>, EvalError> {
    pairs
        .iter()
        .map(|p| {
            let predicted = p
                .predicted_same
                .ok_or(EvalError::MissingPrediction(p.a, p.b))?;
            let truth = pair_truth(set, p)?;
            let paper_key = |m: crate::disambiguate::MentionId| -> Result<String, EvalError> {
                let mention = set
                    .mentions
                    .get(m.index())
                    .ok_or(EvalError::UnknownMention(m))?;
                Ok(g.paper(mention.paper)?.dblp_key.clone())
            };
            Ok(PairRow {
                mention_a: p.a.0,
                mention_b: p.b.0,
                paper_a_key: paper_key(p.a)?,
                paper_b_key: paper_key(p.b)?,
                measure: p.score.measure,
                value: p.score.value,
                zero_tail: p.score.zero_tail,
                predicted,
                truth,
                classification: Classification::of(predicted, truth),
            })
        })
        .collect()
}

const PAIR_HEADER: [&str; 10] = [
    "mention_a",
    "mention_b",
    "paper_a_key",
    "paper_b_key",
    "measure",
    "value",
    "zero_tail",
    "predicted",
    "truth",
    "classification",
];

/// Serializes a run: `Json` writes the report, `Csv` the per-pair table.
pub fn write_report(
    report: &RunReport,
    per_pair: &[PairRow],
    format: ReportFormat,
) -> Result<Vec<u8>, EvalError> {
    match format {
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(report)?;
            out.push(b'\n');
            Ok(out)
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(PAIR_HEADER)?;
            for r in per_pair {
                w.write_record([
                    r.mention_a.to_string(),
                    r.mention_b.to_string(),
                    r.paper_a_key.clone(),
                    r.paper_b_key.clone(),
                    r.measure.to_string(),
                    r.value.to_string(),
                    r.zero_tail.to_string(),
                    r.predicted.to_string(),
                    r.truth.as_str().to_owned(),
                    r.classification.as_str().to_owned(),
                ])?;
            }
            w.into_inner().map_err(|e| EvalError::Io(e.into_error()))
        }
    }
}

/// `mention_id,paper_key,author_key,cluster` for every mention.
pub fn write_clusters(
    g: &BipartiteGraph,
    set: &MentionSet,
    clusters: &ClusterAssignment,
) -> Result<Vec<u8>, EvalError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["mention_id", "paper_key", "author_key", "cluster"])?;
    for m in &set.mentions {
        w.write_record([
            m.id.to_string(),
            g.paper(m.paper)?.dblp_key.clone(),
            g.author(m.author)?.full_key(),
            clusters.root(m.id).to_string(),
        ])?;
    }
    w.into_inner().map_err(|e| EvalError::Io(e.into_error()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub measure: Measure,
    pub rho: f64,
    pub counts: Counts,
    pub metrics: MetricsSection,
}

impl From<&RunReport> for SweepRow {
    fn from(r: &RunReport) -> Self {
        Self {
            measure: r.measure,
            rho: r.rho,
            counts: r.counts,
            metrics: r.metrics,
        }
    }
}

pub fn write_sweep(rows: &[SweepRow]) -> Result<Vec<u8>, EvalError> {
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "measure",
        "rho",
        "tp",
        "fp",
        "tn",
        "fn",
        "unknown",
        "precision",
        "accuracy",
        "specificity",
        "sensitivity",
    ])?;
    for r in rows {
        w.write_record([
            r.measure.to_string(),
            r.rho.to_string(),
            r.counts.tp.to_string(),
            r.counts.fp.to_string(),
            r.counts.tn.to_string(),
            r.counts.r#fn.to_string(),
            r.counts.unknown.to_string(),
            opt(r.metrics.precision),
            opt(r.metrics.accuracy),
            opt(r.metrics.specificity),
            opt(r.metrics.sensitivity),
        ])?;
    }
    w.into_inner().map_err(|e| EvalError::Io(e.into_error()))
}
