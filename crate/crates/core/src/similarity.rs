//! Paper-pair similarity measures over the co-author neighbourhood.
//!
//! Each measure sees the two papers' author rows with an exclusion set
//! removed (the focal authors, and in practice every homonym of the query
//! name). Logarithms are natural.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::graph::{intersect, BipartiteGraph, ExclusionSet, GraphError, PaperId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    /// Common neighbours.
    Cn,
    /// Adamic-Adar.
    Aa,
    /// Topological pointwise mutual information.
    Pmi,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::Cn, Measure::Aa, Measure::Pmi];

    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Cn => "cn",
            Measure::Aa => "aa",
            Measure::Pmi => "pmi",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cn" => Ok(Measure::Cn),
            "aa" => Ok(Measure::Aa),
            "pmi" => Ok(Measure::Pmi),
            other => Err(format!(
                "unknown measure {other:?} (expected cn, aa or pmi)"
            )),
        }
    }
}

/// Value PMI reports for pairs without any common neighbour. It compares
/// below every finite threshold.
pub const PMI_ZERO_TAIL: f64 = f64::NEG_INFINITY;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityScore {
    pub measure: Measure,
    pub value: f64,
    /// No common neighbour survived the exclusion.
    pub zero_tail: bool,
    /// Adamic-Adar terms skipped because the neighbour has degree < 2.
    pub degenerate_terms: u32,
}

impl SimilarityScore {
    fn zero_tail(measure: Measure) -> Self {
        Self {
            measure,
            value: if measure == Measure::Pmi {
                PMI_ZERO_TAIL
            } else {
                0.0
            },
            zero_tail: true,
            degenerate_terms: 0,
        }
    }
}

pub fn score(
    g: &BipartiteGraph,
    measure: Measure,
    p1: PaperId,
    p2: PaperId,
    exclude: &ExclusionSet,
) -> Result<SimilarityScore, GraphError> {
    match measure {
        Measure::Cn => cn_score(g, p1, p2, exclude),
        Measure::Aa => aa_score(g, p1, p2, exclude),
        Measure::Pmi => pmi_score(g, p1, p2, exclude),
    }
}

pub fn cn_score(
    g: &BipartiteGraph,
    p1: PaperId,
    p2: PaperId,
    exclude: &ExclusionSet,
) -> Result<SimilarityScore, GraphError> {
    let common = g.common_neighbors(p1, p2, exclude)?;
    if common.is_empty() {
        return Ok(SimilarityScore::zero_tail(Measure::Cn));
    }
    Ok(SimilarityScore {
        measure: Measure::Cn,
        value: common.len() as f64,
        zero_tail: false,
        degenerate_terms: 0,
    })
}

/// `Σ 1 / ln(deg(c))` over common neighbours `c`; neighbours of degree 1
/// (only possible when `p1 == p2`) are skipped and counted.
pub fn aa_score(
    g: &BipartiteGraph,
    p1: PaperId,
    p2: PaperId,
    exclude: &ExclusionSet,
) -> Result<SimilarityScore, GraphError> {
    let common = g.common_neighbors(p1, p2, exclude)?;
    if common.is_empty() {
        return Ok(SimilarityScore::zero_tail(Measure::Aa));
    }
    let mut value = 0.0;
    let mut degenerate = 0;
    for c in common {
        let deg = g.author_degree(c)?;
        if deg < 2 {
            degenerate += 1;
        } else {
            value += 1.0 / (deg as f64).ln();
        }
    }
    Ok(SimilarityScore {
        measure: Measure::Aa,
        value,
        zero_tail: false,
        degenerate_terms: degenerate,
    })
}

/// `ln(C·N / (|Γ₁'|·|Γ₂'|))` with `N` the author population and `Γᵢ'` the
/// author rows after exclusion.
pub fn pmi_score(
    g: &BipartiteGraph,
    p1: PaperId,
    p2: PaperId,
    exclude: &ExclusionSet,
) -> Result<SimilarityScore, GraphError> {
    let r1 = g.paper_authors(p1)?;
    let r2 = g.paper_authors(p2)?;
    let kept = |row: &[_]| row.iter().filter(|a| !exclude.contains(**a)).count();
    let (n1, n2) = (kept(r1), kept(r2));
    let common = if p1 == p2 {
        n1
    } else {
        let mut both = Vec::new();
        intersect::intersect_into(r1, r2, &mut both);
        both.iter().filter(|a| !exclude.contains(**a)).count()
    };
    if common == 0 || n1 == 0 || n2 == 0 {
        return Ok(SimilarityScore::zero_tail(Measure::Pmi));
    }
    let n = g.author_count() as f64;
    let ratio = (common as f64 * n) / (n1 as f64 * n2 as f64);
    Ok(SimilarityScore {
        measure: Measure::Pmi,
        value: ratio.ln(),
        zero_tail: false,
        degenerate_terms: 0,
    })
}
