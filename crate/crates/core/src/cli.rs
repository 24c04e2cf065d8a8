//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 algorithmic failure,
//! 3 audit failure (or lemma counterexamples).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::components::tight_components;
use crate::error::{Error, Result};
use crate::format::{parse_colouring, write_colouring};
use crate::generators;
use crate::kgraph::{ColouredKGraph, Colour};
use crate::matching::{audit_result, connected_matching, AuditReport, ConnectedMatchingResult};
use crate::plane::{self, hex_walk, TriangulationExport};
use crate::structure::verify_lemma_exhaustive;
use crate::walks::TightPseudoWalk;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_ALGORITHM: i32 = 2;
pub const EXIT_AUDIT: i32 = 3;

/// Environment variable capping worker threads.
pub const THREADS_VAR: &str = "KGRAPH_THREADS";

/// Header of the `experiment` CSV.
pub const EXPERIMENT_COLUMNS: [&str; 9] = [
    "seed",
    "n",
    "k",
    "components_used",
    "leftover",
    "i_star",
    "red_components",
    "blue_components",
    "audit_passed",
];

#[derive(Debug, Parser)]
#[command(name = "tightcover", version, about = "Monochromatic tight components and connected matchings in 2-edge-coloured k-graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Label the monochromatic tight components (JSON).
    Components {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: Output,
    },
    /// Run the layered connected matching and audit it (JSON; exit 3 if the audit fails).
    Matching {
        #[command(flatten)]
        source: Source,
        /// Stop at the first round leaving at most eta*n vertices.
        #[arg(long, default_value_t = 0.0)]
        eta: f64,
        /// Density parameter for the audit's small-leftover escape clause.
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Triangulate a closed tight pseudo-walk (JSON).
    Triangulate {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        walk: WalkSource,
        /// Longest walk handled without splitting.
        #[arg(long, default_value_t = plane::DEFAULT_THRESHOLD)]
        threshold: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Trace the Hex walk through a triangulation coloured by the graph (JSON).
    Hexwalk {
        #[command(flatten)]
        source: Source,
        /// Triangulation JSON as written by `triangulate`.
        #[arg(long)]
        triangulation: PathBuf,
        /// Colour each vertex with the opposite of its edge's colour.
        #[arg(long)]
        swap_colours: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Check the crossing-witness lemma on every short closed walk (JSON; exit 3 on counterexamples).
    VerifyLemma {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Sweep seeds through the matching algorithm (CSV: seed,n,k,components_used,leftover,i_star,red_components,blue_components,audit_passed).
    Experiment {
        #[command(flatten)]
        source: Source,
        /// Inclusive range `a..b`, a single seed, or a comma-separated list.
        #[arg(long, value_parser = parse_seeds)]
        seeds: Seeds,
        #[arg(long, default_value_t = 0.0)]
        eta: f64,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Write a generated colouring in the text format.
    Generate {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Generator {
    /// Complete graph, each edge red with probability `--p-red`.
    Random,
    /// Complete graph split into `--l` parts; blue iff one part holds a strict majority.
    Adversary,
}

/// Where the colouring comes from: a file, or a generator and its parameters.
#[derive(Clone, Debug, Args)]
pub struct Source {
    /// Colouring in the text format.
    #[arg(long, conflicts_with = "generator")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub generator: Option<Generator>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    pub p_red: f64,
    /// Number of parts for the adversary.
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Delete edges with this probability and clean up to a dense graph.
    #[arg(long)]
    pub sparsify: Option<f64>,
}

#[derive(Clone, Debug, Args)]
pub struct WalkSource {
    /// Walk JSON: `{"closed": true, "edges": [[0,1,2], ...]}`.
    #[arg(long, conflicts_with = "random_walk")]
    pub walk: Option<PathBuf>,
    /// Generate a random closed walk of at least this many edges.
    #[arg(long)]
    pub random_walk: Option<usize>,
    /// Seed for `--random-walk` (defaults to `--seed`).
    #[arg(long)]
    pub walk_seed: Option<u64>,
}

#[derive(Clone, Debug, Args)]
pub struct Output {
    /// Write here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seeds(pub Vec<u64>);

pub fn parse_seeds(s: &str) -> std::result::Result<Seeds, String> {
    let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("bad seed {t:?}: {e}"));
    let seeds = if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            return Err(format!("empty seed range {s}"));
        }
        (a..=b).collect()
    } else {
        s.split(',').map(num).collect::<std::result::Result<Vec<_>, _>>()?
    };
    Ok(Seeds(seeds))
}

enum Failure {
    Usage(String),
    Algorithm(Error),
    Audit(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Algorithm(e)
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

impl Source {
    fn load(&self) -> CliResult<ColouredKGraph> {
        let graph = match (&self.input, self.generator) {
            (Some(path), _) => parse_colouring(&read(path)?)?,
            (None, Some(generator)) => self.generate(generator, self.seed)?,
            (None, None) => return Err(Failure::Usage("give either --input or --generator".into())),
        };
        self.maybe_sparsify(graph, self.seed)
    }

    fn generate(&self, generator: Generator, seed: u64) -> CliResult<ColouredKGraph> {
        let need = |name: &str, v: Option<usize>| v.ok_or_else(|| Failure::Usage(format!("--{name} is required with --generator")));
        let (n, k) = (need("n", self.n)?, need("k", self.k)?);
        Ok(match generator {
            Generator::Random => generators::random_colouring(n, k, self.p_red, seed)?,
            Generator::Adversary => generators::partition_adversary(n, k, need("l", self.l)?)?,
        })
    }

    fn maybe_sparsify(&self, graph: ColouredKGraph, seed: u64) -> CliResult<ColouredKGraph> {
        match self.sparsify {
            Some(eps) => Ok(generators::sparsify(&graph, eps, seed)?),
            None => Ok(graph),
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(out: &Output, stdout: &mut dyn Write, text: &str) -> CliResult<()> {
    match &out.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Usage(format!("cannot write output: {e}"))),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn thread_pool() -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Failure::Usage(format!("{THREADS_VAR} must be a positive integer, got {v:?}")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| Failure::Usage(e.to_string()))
}

#[derive(Serialize)]
struct MatchingOutput<'a> {
    result: &'a ConnectedMatchingResult,
    audit: &'a AuditReport,
}

/// One experiment row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentRow {
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub components_used: usize,
    pub leftover: usize,
    pub i_star: usize,
    pub red_components: usize,
    pub blue_components: usize,
    pub audit_passed: bool,
}

fn experiment_row(source: &Source, seed: u64, eta: f64, epsilon: f64) -> Result<ExperimentRow> {
    let generator = source.generator.expect("checked by caller");
    let graph = source.generate(generator, seed).map_err(failure_to_error)?;
    let graph = source.maybe_sparsify(graph, seed).map_err(failure_to_error)?;
    let result = connected_matching(&graph, eta)?;
    let audit = audit_result(&graph, &result, epsilon);
    Ok(ExperimentRow {
        seed,
        n: graph.n(),
        k: graph.k(),
        components_used: result.components_used,
        leftover: result.leftover.len(),
        i_star: result.i_star,
        red_components: result.colour_counts.red,
        blue_components: result.colour_counts.blue,
        audit_passed: audit.passed(),
    })
}

fn failure_to_error(f: Failure) -> Error {
    match f {
        Failure::Usage(s) | Failure::Audit(s) => Error::InvalidInput(s),
        Failure::Algorithm(e) => e,
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Components { source, out } => {
            let graph = source.load()?;
            let labeling = tight_components(&graph);
            emit(&out, stdout, &to_json(&labeling.to_export(&graph)))
        }
        Command::Matching { source, eta, epsilon, out } => {
            let graph = source.load()?;
            let result = connected_matching(&graph, eta)?;
            let audit = audit_result(&graph, &result, epsilon);
            emit(&out, stdout, &to_json(&MatchingOutput { result: &result, audit: &audit }))?;
            if audit.passed() {
                Ok(())
            } else {
                let names: Vec<&str> = audit.failures().map(|c| c.name.as_str()).collect();
                Err(Failure::Audit(format!("audit failed: {}", names.join(", "))))
            }
        }
        Command::Triangulate { source, walk, threshold, out } => {
            let graph = source.load()?;
            let q = match (&walk.walk, walk.random_walk) {
                (Some(path), _) => read_json::<TightPseudoWalk>(path)?,
                (None, Some(m)) => generators::random_closed_walk(&graph, m, walk.walk_seed.unwrap_or(source.seed))?,
                (None, None) => return Err(Failure::Usage("give either --walk or --random-walk".into())),
            };
            let t = plane::triangulate(&graph, &q, threshold)?;
            emit(&out, stdout, &to_json(&t.to_export(&graph)))
        }
        Command::Hexwalk { source, triangulation, swap_colours, out } => {
            let graph = source.load()?;
            let export: TriangulationExport = read_json(&triangulation)?;
            let t = export.into_triangulation();
            let walk = TightPseudoWalk::closed(t.outer_cycle().iter().map(|&v| t.phi[v]).collect());
            t.check(&graph, &walk)
                .map_err(|e| Failure::Usage(format!("triangulation does not fit the colouring: {e}")))?;
            let colours = t
                .phi
                .iter()
                .map(|&e| graph.colour(e).map(|c| if swap_colours { c.swap() } else { c }))
                .collect::<Result<Vec<Colour>>>()?;
            emit(&out, stdout, &to_json(&hex_walk(&t.plane, &colours)?))
        }
        Command::VerifyLemma { source, max_len, out } => {
            let graph = source.load()?;
            let report = thread_pool()?.install(|| verify_lemma_exhaustive(&graph, max_len))?;
            emit(&out, stdout, &to_json(&report))?;
            if report.is_clean() {
                Ok(())
            } else {
                Err(Failure::Audit(format!("{} counterexamples", report.counterexample_count)))
            }
        }
        Command::Experiment { source, seeds, eta, epsilon, out } => {
            if source.input.is_some() || source.generator.is_none() {
                return Err(Failure::Usage("experiment needs --generator".into()));
            }
            let rows = thread_pool()?.install(|| {
                seeds
                    .0
                    .par_iter()
                    .map(|&seed| experiment_row(&source, seed, eta, epsilon))
                    .collect::<Result<Vec<_>>>()
            })?;
            let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            writer.write_record(EXPERIMENT_COLUMNS).map_err(|e| Failure::Usage(e.to_string()))?;
            for row in &rows {
                writer.serialize(row).map_err(|e| Failure::Usage(e.to_string()))?;
            }
            let bytes = writer.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
            emit(&out, stdout, &String::from_utf8(bytes).expect("csv is utf-8"))?;
            let failed: Vec<String> = rows.iter().filter(|r| !r.audit_passed).map(|r| r.seed.to_string()).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::Audit(format!("audit failed for seeds {}", failed.join(","))))
            }
        }
        Command::Generate { source, out } => {
            let graph = source.load()?;
            emit(&out, stdout, &write_colouring(&graph))
        }
    }
}

/// Parses `argv` (including the program name), runs the command and returns the exit code.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let to_stdout = !e.use_stderr();
            let text = e.render().to_string();
            let _ = if to_stdout { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return if to_stdout { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match execute(cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Algorithm(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ALGORITHM
        }
        Err(Failure::Audit(msg)) => {
            let _ = writeln!(stderr, "{msg}");
            EXIT_AUDIT
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    let code = run_with(argv, &mut out, &mut err);
    let _ = out.flush();
    code
}
