//! Batch runs over DBLP data: ingest to a graph snapshot, disambiguate one
//! homonymous name, sweep thresholds, print graph statistics.
//!
//! The `coref` binary is a thin clap wrapper around the `cmd_*` functions.

use std::fs::{self, File};
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use coref_core::disambiguate::{apply_threshold, score_pairs, DisambiguationError};
use coref_core::eval::{
    build_pair_rows, evaluate_run, write_clusters, write_report, write_sweep, EvalError,
    ReportFormat, RunReport, SweepRow,
};
use coref_core::graph::snapshot::{read_snapshot, write_snapshot, MAGIC};
use coref_core::graph::BuildWarnings;
use coref_core::ingest::{open_input, parse_stream, FixtureReader, IngestError, IngestStats};
use coref_core::{
    find_mentions_matching, normalize_name, transitive_closure, BipartiteGraph, GraphBuilder,
    GraphError, Measure,
};
use thiserror::Error;

pub const REPORT_JSON: &str = "report.json";
pub const PAIRS_CSV: &str = "pairs.csv";
pub const CLUSTERS_CSV: &str = "clusters.csv";
pub const SWEEP_CSV: &str = "sweep.csv";
pub const SNAPSHOT_FILE: &str = "graph.crg";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Open { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error("graph: {0}")]
    Graph(#[from] GraphError),
    #[error("query: {0}")]
    Query(String),
    #[error("invalid argument: {0}")]
    Usage(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

impl CliError {
    /// 2 for unreadable or malformed input, 3 for query problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Open { .. } | CliError::Ingest(_) => 2,
            CliError::Graph(GraphError::Snapshot(_)) | CliError::Graph(GraphError::Io(_)) => 2,
            CliError::Query(_) => 3,
            _ => 1,
        }
    }
}

impl From<DisambiguationError> for CliError {
    fn from(e: DisambiguationError) -> Self {
        match e {
            DisambiguationError::TooFewMentions(_) => CliError::Query(e.to_string()),
            DisambiguationError::Graph(g) => CliError::Graph(g),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    Xml,
    Fixture,
    Snapshot,
}

impl FromStr for InputKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "xml" => Ok(InputKind::Xml),
            "fixture" | "tsv" => Ok(InputKind::Fixture),
            "snapshot" => Ok(InputKind::Snapshot),
            other => Err(CliError::Usage(format!(
                "unknown input kind {other:?} (expected xml, fixture or snapshot)"
            ))),
        }
    }
}

impl InputKind {
    /// Snapshot if the file starts with the snapshot magic, fixture for
    /// `.tsv`/`.txt`, XML (possibly gzipped) otherwise.
    pub fn infer(path: &Path) -> Result<Self, CliError> {
        let mut head = [0u8; 4];
        let mut file = File::open(path).map_err(|source| CliError::Open {
            path: path.to_owned(),
            source,
        })?;
        let n = file.read(&mut head).map_err(|source| CliError::Open {
            path: path.to_owned(),
            source,
        })?;
        if n == 4 && &head == MAGIC {
            return Ok(InputKind::Snapshot);
        }
        match path.extension().and_then(|e| e.to_str()) {
            Some("tsv") | Some("txt") => Ok(InputKind::Fixture),
            _ => Ok(InputKind::Xml),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub input_kind: Option<InputKind>,
    pub query: String,
    pub measure: Measure,
    pub rho: f64,
    pub include_same_paper: bool,
    pub out: PathBuf,
    pub formats: Vec<ReportFormat>,
    pub case_insensitive: bool,
}

impl RunConfig {
    pub fn new(
        input: impl Into<PathBuf>,
        query: impl Into<String>,
        out: impl Into<PathBuf>,
    ) -> Self {
        Self {
            input: input.into(),
            input_kind: None,
            query: query.into(),
            measure: Measure::Cn,
            rho: 0.0,
            include_same_paper: true,
            out: out.into(),
            formats: vec![ReportFormat::Json, ReportFormat::Csv],
            case_insensitive: false,
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        if !self.rho.is_finite() {
            return Err(CliError::Usage(format!(
                "rho must be finite, got {}",
                self.rho
            )));
        }
        Ok(())
    }
}

/// Parses `json,csv`.
pub fn parse_formats(s: &str) -> Result<Vec<ReportFormat>, CliError> {
    let mut formats = Vec::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let f: ReportFormat = part.parse()?;
        if !formats.contains(&f) {
            formats.push(f);
        }
    }
    if formats.is_empty() {
        return Err(CliError::Usage("no report format given".into()));
    }
    Ok(formats)
}

/// Parses a comma-separated list of finite thresholds.
pub fn parse_rho_list(s: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let rho: f64 = part
            .parse()
            .map_err(|_| CliError::Usage(format!("invalid rho {part:?}")))?;
        if !rho.is_finite() {
            return Err(CliError::Usage(format!("rho must be finite, got {part}")));
        }
        out.push(rho);
    }
    if out.is_empty() {
        return Err(CliError::Usage("empty rho list".into()));
    }
    Ok(out)
}

pub fn parse_measures(s: &str) -> Result<Vec<Measure>, CliError> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let m: Measure = part.parse().map_err(|_| {
            CliError::Usage(format!("unknown measure {part:?} (expected cn, aa or pmi)"))
        })?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("no measure given".into()));
    }
    Ok(out)
}

/// Counters from loading a graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadStats {
    pub ingest: IngestStats,
    pub build: BuildWarnings,
}

fn build_from<I>(records: I, stats: &mut BuildWarnings) -> Result<BipartiteGraph, CliError>
where
    I: Iterator<Item = Result<coref_core::PaperRecord, IngestError>>,
{
    let mut builder = GraphBuilder::new();
    for rec in records {
        match builder.add_paper(&rec?) {
            Ok(_) | Err(GraphError::DuplicateKey(_)) | Err(GraphError::NoAuthors(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    *stats = *builder.warnings();
    Ok(builder.finalize()?)
}

/// Loads a graph from XML (plain or gzip), a fixture, or a snapshot.
pub fn load_graph(
    path: &Path,
    kind: Option<InputKind>,
) -> Result<(BipartiteGraph, LoadStats), CliError> {
    let kind = match kind {
        Some(k) => k,
        None => InputKind::infer(path)?,
    };
    let open_err = |source| CliError::Open {
        path: path.to_owned(),
        source,
    };
    let mut stats = LoadStats::default();
    let graph = match kind {
        InputKind::Snapshot => {
            let file = File::open(path).map_err(open_err)?;
            read_snapshot(io::BufReader::new(file))?
        }
        InputKind::Xml => {
            let mut reader = parse_stream(open_input(path).map_err(open_err)?);
            let g = build_from(reader.by_ref(), &mut stats.build)?;
            stats.ingest = *reader.stats();
            g
        }
        InputKind::Fixture => {
            let mut reader = FixtureReader::new(open_input(path).map_err(open_err)?);
            let g = build_from(reader.by_ref(), &mut stats.build)?;
            stats.ingest = *reader.stats();
            g
        }
    };
    log::info!(
        "loaded {} authors, {} papers, {} edges from {}",
        graph.author_count(),
        graph.paper_count(),
        graph.edge_count(),
        path.display()
    );
    Ok((graph, stats))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let write_err = |source| CliError::Write {
        path: path.to_owned(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(write_err)?;
    }
    fs::write(path, bytes).map_err(write_err)
}

/// Runs `f` on a dedicated pool of `threads` workers (all cores if `None`).
pub fn with_threads<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::ThreadPool(e.to_string()))?;
    Ok(pool.install(f))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestSummary {
    pub authors: usize,
    pub papers: usize,
    pub edges: usize,
    pub stats: LoadStats,
    pub snapshot: PathBuf,
}

impl IngestSummary {
    pub fn render(&self) -> String {
        let s = &self.stats;
        format!(
            "authors\t{}\npapers\t{}\nedges\t{}\nrecords\t{}\nskipped_kinds\t{}\nunknown_elements\t{}\n\
             missing_title\t{}\nmissing_key\t{}\nunknown_entities\t{}\nempty_author_tokens\t{}\n\
             bad_year\t{}\nduplicate_keys\t{}\nduplicate_authors\t{}\nno_authors\t{}\nrejected_names\t{}\n",
            self.authors,
            self.papers,
            self.edges,
            s.ingest.records,
            s.ingest.skipped_kinds,
            s.ingest.unknown_elements,
            s.ingest.missing_title,
            s.ingest.missing_key,
            s.ingest.unknown_entities,
            s.ingest.empty_author_tokens,
            s.ingest.bad_year,
            s.build.duplicate_keys,
            s.build.duplicate_authors,
            s.build.no_authors,
            s.build.rejected_names,
        )
    }
}

/// Parses the input and writes a snapshot to `out` (a file path, or
/// `out/graph.crg` when `out` is a directory). Nothing is written when
/// parsing fails.
pub fn cmd_ingest(
    input: &Path,
    kind: Option<InputKind>,
    out: &Path,
) -> Result<IngestSummary, CliError> {
    let (g, stats) = load_graph(input, kind)?;
    let target = if out.is_dir() {
        out.join(SNAPSHOT_FILE)
    } else {
        out.to_owned()
    };
    let write_err = |source| CliError::Write {
        path: target.clone(),
        source,
    };
    if let Some(dir) = target.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(write_err)?;
    }
    let mut w = BufWriter::new(File::create(&target).map_err(write_err)?);
    write_snapshot(&g, &mut w)?;
    w.flush().map_err(write_err)?;
    Ok(IngestSummary {
        authors: g.author_count(),
        papers: g.paper_count(),
        edges: g.edge_count(),
        stats,
        snapshot: target,
    })
}

/// Graph counters without writing anything.
pub fn cmd_stats(input: &Path, kind: Option<InputKind>) -> Result<IngestSummary, CliError> {
    let (g, stats) = load_graph(input, kind)?;
    Ok(IngestSummary {
        authors: g.author_count(),
        papers: g.paper_count(),
        edges: g.edge_count(),
        stats,
        snapshot: PathBuf::new(),
    })
}

/// Normalizes the query the same way author names are normalized. A
/// trailing identifier is dropped: the query names the whole homonym group.
pub fn normalize_query(raw: &str) -> Result<String, CliError> {
    let n = normalize_name(raw).map_err(|_| CliError::Query("empty query name".into()))?;
    if let Some(s) = &n.suffix {
        log::warn!(
            "ignoring identifier {s} in query; all homonyms of {:?} are used",
            n.canonical
        );
    }
    Ok(n.canonical)
}

fn mentions_for(g: &BipartiteGraph, cfg: &RunConfig) -> Result<coref_core::MentionSet, CliError> {
    let query = normalize_query(&cfg.query)?;
    let set = find_mentions_matching(g, &query, cfg.case_insensitive);
    if set.homonyms.is_empty() {
        return Err(CliError::Query(format!(
            "name {query:?} not found in the graph"
        )));
    }
    if set.len() < 2 {
        return Err(DisambiguationError::TooFewMentions(set.len()).into());
    }
    Ok(set)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisambiguationRun {
    pub report: RunReport,
    pub mentions: usize,
    pub pairs: usize,
    pub clusters: usize,
    pub written: Vec<PathBuf>,
}

/// Scores, classifies, clusters and evaluates one query on an already
/// loaded graph, writing the requested outputs under `cfg.out`.
pub fn disambiguate_graph(
    g: &BipartiteGraph,
    cfg: &RunConfig,
) -> Result<DisambiguationRun, CliError> {
    cfg.validate()?;
    let set = mentions_for(g, cfg)?;
    let mut pairs = score_pairs(g, &set, cfg.measure, cfg.include_same_paper)?;
    apply_threshold(&mut pairs, cfg.rho);
    let clusters = transitive_closure(set.len(), &pairs);
    let report = evaluate_run(&set, &pairs, cfg.measure, cfg.rho)?;

    let mut written = Vec::new();
    for format in &cfg.formats {
        let (name, bytes) = match format {
            ReportFormat::Json => (REPORT_JSON, write_report(&report, &[], *format)?),
            ReportFormat::Csv => {
                let rows = build_pair_rows(g, &set, &pairs)?;
                (PAIRS_CSV, write_report(&report, &rows, *format)?)
            }
        };
        let path = cfg.out.join(name);
        write_file(&path, &bytes)?;
        written.push(path);
    }
    let path = cfg.out.join(CLUSTERS_CSV);
    write_file(&path, &write_clusters(g, &set, &clusters)?)?;
    written.push(path);

    Ok(DisambiguationRun {
        report,
        mentions: set.len(),
        pairs: pairs.len(),
        clusters: clusters.cluster_count(),
        written,
    })
}

pub fn cmd_disambiguate(cfg: &RunConfig) -> Result<DisambiguationRun, CliError> {
    cfg.validate()?;
    let (g, _) = load_graph(&cfg.input, cfg.input_kind)?;
    disambiguate_graph(&g, cfg)
}

/// Metrics for every `(measure, rho)` combination on a loaded graph.
/// Scores are computed once per measure and re-thresholded.
pub fn sweep_graph(
    g: &BipartiteGraph,
    cfg: &RunConfig,
    measures: &[Measure],
    rhos: &[f64],
) -> Result<Vec<SweepRow>, CliError> {
    if rhos.is_empty() {
        return Err(CliError::Usage("empty rho list".into()));
    }
    if measures.is_empty() {
        return Err(CliError::Usage("no measure given".into()));
    }
    if let Some(bad) = rhos.iter().find(|r| !r.is_finite()) {
        return Err(CliError::Usage(format!("rho must be finite, got {bad}")));
    }
    let set = mentions_for(g, cfg)?;
    let mut rows = Vec::with_capacity(measures.len() * rhos.len());
    for &m in measures {
        let mut pairs = score_pairs(g, &set, m, cfg.include_same_paper)?;
        for &rho in rhos {
            apply_threshold(&mut pairs, rho);
            rows.push(SweepRow::from(&evaluate_run(&set, &pairs, m, rho)?));
        }
    }
    Ok(rows)
}

/// Writes `sweep.csv` under `cfg.out`.
pub fn cmd_sweep(
    cfg: &RunConfig,
    measures: &[Measure],
    rhos: &[f64],
) -> Result<Vec<SweepRow>, CliError> {
    let (g, _) = load_graph(&cfg.input, cfg.input_kind)?;
    let rows = sweep_graph(&g, cfg, measures, rhos)?;
    write_file(&cfg.out.join(SWEEP_CSV), &write_sweep(&rows)?)?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use coref_core::ingest::write_fixture;
    use coref_core::PaperRecord;

    fn fixture(dir: &Path, records: &[PaperRecord]) -> PathBuf {
        let path = dir.join("in.tsv");
        let mut bytes = Vec::new();
        write_fixture(&mut bytes, records).unwrap();
        fs::write(&path, bytes).unwrap();
        path
    }

    fn figure_one() -> Vec<PaperRecord> {
        vec![
            PaperRecord::new("p/1", Some(2017), "first").with_authors(["Chen Li 0001", "C1", "C2"]),
            PaperRecord::new("p/2", Some(2018), "second").with_authors([
                "Chen Li 0001",
                "C2",
                "C3",
            ]),
        ]
    }

    #[test]
    fn parses_lists() {
        assert_eq!(parse_rho_list("0, 0.5,1").unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(parse_rho_list("").is_err());
        assert!(parse_rho_list("inf").is_err());
        assert!(parse_rho_list("x").is_err());
        assert_eq!(parse_formats("json,csv,json").unwrap().len(), 2);
        assert!(parse_formats("xml").is_err());
        assert_eq!(
            parse_measures("pmi,cn").unwrap(),
            vec![Measure::Pmi, Measure::Cn]
        );
        assert!(parse_measures("jaccard").is_err());
    }

    #[test]
    fn query_is_normalized() {
        assert_eq!(normalize_query("  Chen   Li ").unwrap(), "Chen Li");
        assert_eq!(normalize_query("Chen Li 0003").unwrap(), "Chen Li");
        assert_eq!(normalize_query("   ").unwrap_err().exit_code(), 3);
    }

    #[test]
    fn figure_one_run_predicts_same() {
        let dir = tempfile::tempdir().unwrap();
        let input = fixture(dir.path(), &figure_one());
        let cfg = RunConfig::new(&input, "Chen Li", dir.path().join("out"));
        let run = cmd_disambiguate(&cfg).unwrap();
        assert_eq!((run.mentions, run.pairs, run.clusters), (2, 1, 1));
        assert_eq!(run.report.counts.tp, 1);
        let pairs = fs::read_to_string(dir.path().join("out").join(PAIRS_CSV)).unwrap();
        assert_eq!(pairs.lines().count(), 2);
        assert!(pairs.lines().nth(1).unwrap().ends_with(",true,same,TP"));
    }

    #[test]
    fn high_threshold_gives_singletons() {
        let dir = tempfile::tempdir().unwrap();
        let input = fixture(dir.path(), &figure_one());
        let mut cfg = RunConfig::new(&input, "Chen Li", dir.path().join("out"));
        cfg.rho = 10.0;
        let run = cmd_disambiguate(&cfg).unwrap();
        assert_eq!(run.clusters, 2);
        assert_eq!(run.report.counts.r#fn, 1);
    }

    #[test]
    fn query_errors_exit_three() {
        let dir = tempfile::tempdir().unwrap();
        let input = fixture(dir.path(), &figure_one());
        let cfg = RunConfig::new(&input, "Wei Wang", dir.path().join("out"));
        assert_eq!(cmd_disambiguate(&cfg).unwrap_err().exit_code(), 3);

        let one = vec![PaperRecord::new("p/1", None, "t").with_authors(["Chen Li", "X"])];
        let input = fixture(dir.path(), &one);
        let cfg = RunConfig::new(&input, "Chen Li", dir.path().join("out"));
        let err = cmd_disambiguate(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("nothing to disambiguate"));
    }

    #[test]
    fn case_insensitive_flag() {
        let dir = tempfile::tempdir().unwrap();
        let input = fixture(dir.path(), &figure_one());
        let mut cfg = RunConfig::new(&input, "chen li", dir.path().join("out"));
        assert_eq!(cmd_disambiguate(&cfg).unwrap_err().exit_code(), 3);
        cfg.case_insensitive = true;
        assert_eq!(cmd_disambiguate(&cfg).unwrap().mentions, 2);
    }

    #[test]
    fn non_finite_rho_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let input = fixture(dir.path(), &figure_one());
        let mut cfg = RunConfig::new(&input, "Chen Li", dir.path().join("out"));
        cfg.rho = f64::NAN;
        assert_eq!(cmd_disambiguate(&cfg).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn kind_inference() {
        let dir = tempfile::tempdir().unwrap();
        let input = fixture(dir.path(), &figure_one());
        assert_eq!(InputKind::infer(&input).unwrap(), InputKind::Fixture);
        let snap = dir.path().join("g.bin");
        let summary = cmd_ingest(&input, None, &snap).unwrap();
        assert_eq!(summary.papers, 2);
        assert_eq!(InputKind::infer(&snap).unwrap(), InputKind::Snapshot);
        let xml = dir.path().join("d.xml");
        fs::write(&xml, "<dblp></dblp>").unwrap();
        assert_eq!(InputKind::infer(&xml).unwrap(), InputKind::Xml);
    }

    #[test]
    fn sweep_single_rho_matches_disambiguate() {
        let dir = tempfile::tempdir().unwrap();
        let input = fixture(dir.path(), &figure_one());
        let cfg = RunConfig::new(&input, "Chen Li", dir.path().join("out"));
        let rows = cmd_sweep(&cfg, &[Measure::Aa], &[0.0]).unwrap();
        let mut single = cfg.clone();
        single.measure = Measure::Aa;
        let run = cmd_disambiguate(&single).unwrap();
        assert_eq!(rows, vec![SweepRow::from(&run.report)]);
        assert!(cmd_sweep(&cfg, &[Measure::Aa], &[]).is_err());
    }
}
