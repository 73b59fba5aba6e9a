use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use coref_cli::{
    cmd_disambiguate, cmd_ingest, cmd_stats, cmd_sweep, parse_formats, parse_measures,
    parse_rho_list, with_threads, CliError, InputKind, RunConfig,
};
use coref_core::Measure;

#[derive(Parser)]
#[command(
    name = "coref",
    version,
    about = "Disambiguate homonymous author names in DBLP"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse XML or a fixture and write a graph snapshot.
    Ingest {
        #[command(flatten)]
        input: InputArgs,
        /// Snapshot path, or a directory to receive graph.crg.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Score, classify and cluster every mention pair of one name.
    Disambiguate {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value = "cn")]
        measure: Measure,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        rho: f64,
    },
    /// Metrics for each measure at each threshold.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// One or more of cn, aa, pmi, comma separated.
        #[arg(long, default_value = "cn,aa,pmi")]
        measure: String,
        #[arg(long, allow_hyphen_values = true)]
        rho_list: String,
    },
    /// Print graph and ingestion counters.
    Stats {
        #[command(flatten)]
        input: InputArgs,
    },
}

#[derive(Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    /// xml, fixture or snapshot; inferred when omitted.
    #[arg(long)]
    input_kind: Option<InputKind>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    query: String,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    include_same_paper: bool,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, default_value = "json,csv")]
    format: String,
    /// Worker threads for pair scoring (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    case_insensitive: bool,
}

impl RunArgs {
    fn config(&self, measure: Measure, rho: f64) -> Result<RunConfig, CliError> {
        Ok(RunConfig {
            input: self.input.input.clone(),
            input_kind: self.input.input_kind,
            query: self.query.clone(),
            measure,
            rho,
            include_same_paper: self.include_same_paper,
            out: self.out.clone(),
            formats: parse_formats(&self.format)?,
            case_insensitive: self.case_insensitive,
        })
    }
}

fn fmt_metric(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_owned(), |x| format!("{x:.4}"))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Ingest { input, out } => {
            let summary = cmd_ingest(&input.input, input.input_kind, &out)?;
            print!("{}", summary.render());
            println!("snapshot\t{}", summary.snapshot.display());
        }
        Command::Stats { input } => {
            print!("{}", cmd_stats(&input.input, input.input_kind)?.render());
        }
        Command::Disambiguate { run, measure, rho } => {
            let cfg = run.config(measure, rho)?;
            let result = with_threads(run.threads, || cmd_disambiguate(&cfg))??;
            let r = &result.report;
            println!(
                "{} mentions, {} pairs, {} clusters",
                result.mentions, result.pairs, result.clusters
            );
            println!(
                "tp {} fp {} tn {} fn {} unknown {}",
                r.counts.tp, r.counts.fp, r.counts.tn, r.counts.r#fn, r.counts.unknown
            );
            println!(
                "precision {} accuracy {} specificity {} sensitivity {}",
                fmt_metric(r.metrics.precision),
                fmt_metric(r.metrics.accuracy),
                fmt_metric(r.metrics.specificity),
                fmt_metric(r.metrics.sensitivity)
            );
            for path in &result.written {
                println!("wrote {}", path.display());
            }
        }
        Command::Sweep {
            run,
            measure,
            rho_list,
        } => {
            let measures = parse_measures(&measure)?;
            let rhos = parse_rho_list(&rho_list)?;
            let cfg = run.config(measures[0], rhos[0])?;
            let rows = with_threads(run.threads, || cmd_sweep(&cfg, &measures, &rhos))??;
            println!(
                "{} rows, wrote {}",
                rows.len(),
                cfg.out.join(coref_cli::SWEEP_CSV).display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("COREF_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // exit code 2 is reserved for unreadable input
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
