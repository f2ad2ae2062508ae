//! Command-line front end.
//!
//! Exit codes: 0 success or positive answer, 1 negative answer, 2 input
//! error, 3 capability limit.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use compgraph::enumerate::{check_buckets, ConfigError, Enumerator};
use compgraph::io::{self as gio, FormatError, Summary};
use compgraph::{
    all_graphs, are_isomorphic, bipartite_adversarial_pair, figure2_pair, graph_invariant, AdversarialError,
    Backend, Color, ComputationalGraph, EnumerationConfig, IsoWitness, NonIsoCertificate, OracleError,
    VerifyError,
};

const EXIT_NEGATIVE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_LIMIT: u8 = 3;

#[derive(Parser)]
#[command(name = "compgraph", version, about = "Hash, enumerate, and compare colored computational DAGs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the invariant digest of a graph file as lowercase hex.
    Hash {
        file: PathBuf,
        #[arg(long, default_value = "md5")]
        backend: Backend,
        /// Relabel by topological sort before validating.
        #[arg(long)]
        normalize: bool,
    },
    /// Decide isomorphism exactly; prints the witness permutation.
    Iso {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        normalize: bool,
    },
    /// Enumerate all graphs up to the invariant and write JSON lines.
    Enumerate {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "md5")]
        backend: Backend,
        /// Hash batches of matrices on all cores.
        #[arg(long)]
        parallel: bool,
    },
    /// Check that every hash bucket holds a single isomorphism class.
    Verify {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value = "md5")]
        backend: Backend,
        /// Extra graph files appended to the enumeration stream.
        #[arg(long = "inject")]
        inject: Vec<PathBuf>,
    },
    /// Build a non-isomorphic pair with equal digests.
    Adversarial(AdversarialArgs),
}

#[derive(Args)]
struct ConfigArgs {
    #[arg(long)]
    max_vertices: usize,
    #[arg(long, default_value_t = usize::MAX)]
    max_edges: usize,
    #[arg(long)]
    colors: Color,
    /// Reserve colors k+1 and k+2 for the input and output vertices.
    #[arg(long)]
    reserved_io: bool,
}

impl ConfigArgs {
    fn config(&self) -> Result<EnumerationConfig, ConfigError> {
        EnumerationConfig::new(self.max_vertices, self.max_edges, self.colors, self.reserved_io)
    }
}

#[derive(Args)]
#[group(required = true, multiple = true)]
struct AdversarialArgs {
    /// The 10-vertex counterexample.
    #[arg(long, conflicts_with_all = ["degree", "size"])]
    figure2: bool,
    #[arg(long, default_value_t = 1, requires = "figure2")]
    color_a: Color,
    #[arg(long, default_value_t = 2, requires = "figure2")]
    color_b: Color,
    /// Middle-layer degree of the bipartite family.
    #[arg(long, requires = "size")]
    degree: Option<usize>,
    /// Vertices per middle layer of the bipartite family.
    #[arg(long, requires = "degree")]
    size: Option<usize>,
    /// Write left.json and right.json here instead of printing them.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, default_value = "md5")]
    backend: Backend,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        let code = match e {
            ConfigError::TooManyVertices(_) => EXIT_LIMIT,
            _ => EXIT_INPUT,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure::new(EXIT_LIMIT, e.to_string())
    }
}

fn load(path: &Path, normalize: bool) -> Result<ComputationalGraph, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    gio::parse_graph(&text, normalize).map_err(|e| match e {
        FormatError::Graph(g) => Failure::new(EXIT_INPUT, format!("{}: invalid graph: {g}", path.display())),
        other => Failure::new(EXIT_INPUT, format!("{}: {other}", path.display())),
    })
}

fn write_failure(e: io::Error) -> Failure {
    Failure::new(EXIT_INPUT, format!("write failed: {e}"))
}

fn cmd_hash(out: &mut impl Write, file: &Path, backend: Backend, normalize: bool) -> Result<u8, Failure> {
    let graph = load(file, normalize)?;
    writeln!(out, "{}", graph_invariant(&graph, backend)).map_err(write_failure)?;
    Ok(0)
}

fn cmd_iso(out: &mut impl Write, first: &Path, second: &Path, normalize: bool) -> Result<u8, Failure> {
    let g1 = load(first, normalize)?;
    let g2 = load(second, normalize)?;
    match are_isomorphic(&g1, &g2)? {
        IsoWitness::Isomorphic(p) => {
            writeln!(out, "{p}").map_err(write_failure)?;
            Ok(0)
        }
        IsoWitness::NonIsomorphic => {
            writeln!(out, "non-isomorphic").map_err(write_failure)?;
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn print_counts(out: &mut impl Write, summary: &Summary) -> io::Result<()> {
    for (n, count) in &summary.per_n {
        writeln!(out, "n={n}: {count}")?;
    }
    writeln!(out, "total: {}", summary.total)
}

fn cmd_enumerate(
    out: &mut impl Write,
    config: EnumerationConfig,
    path: &Path,
    backend: Backend,
    parallel: bool,
) -> Result<u8, Failure> {
    let run = || -> io::Result<Summary> {
        let mut writer = BufWriter::new(File::create(path)?);
        let mut enumerator = Enumerator::new(config)
            .expect("validated")
            .backend(backend)
            .parallel(parallel);
        for record in enumerator.by_ref() {
            gio::write_record(&mut writer, &record)?;
        }
        let per_n = enumerator.counts().clone();
        let summary = Summary {
            total: per_n.values().sum(),
            per_n,
        };
        gio::write_summary(&mut writer, summary.clone())?;
        writer.into_inner().map_err(|e| e.into_error())?.sync_all()?;
        Ok(summary)
    };
    match run() {
        Ok(summary) => {
            print_counts(out, &summary).map_err(write_failure)?;
            Ok(0)
        }
        Err(e) => {
            let _ = fs::remove_file(path);
            Err(Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))
        }
    }
}

fn cmd_verify(
    out: &mut impl Write,
    config: EnumerationConfig,
    backend: Backend,
    inject: &[PathBuf],
) -> Result<u8, Failure> {
    let extras = inject
        .iter()
        .map(|p| load(p, false))
        .collect::<Result<Vec<_>, _>>()?;
    let graphs = all_graphs(config)?.chain(extras);
    match check_buckets(graphs, backend, false) {
        Ok(report) => {
            let summary = Summary {
                per_n: report.per_n.clone(),
                total: report.total,
            };
            print_counts(out, &summary).map_err(write_failure)?;
            writeln!(out, "graphs examined: {}", report.graphs_examined).map_err(write_failure)?;
            writeln!(out, "duplicates verified isomorphic: {}", report.duplicates_verified)
                .map_err(write_failure)?;
            writeln!(out, "all buckets pure").map_err(write_failure)?;
            Ok(0)
        }
        Err(VerifyError::FalseMerge(merge)) => {
            writeln!(out, "false merge under digest {}", merge.digest).map_err(write_failure)?;
            writeln!(out, "canonical: {}", gio::graph_to_json(&merge.canonical)).map_err(write_failure)?;
            writeln!(out, "offending: {}", gio::graph_to_json(&merge.offending)).map_err(write_failure)?;
            Ok(EXIT_NEGATIVE)
        }
        Err(VerifyError::Oracle(e)) => Err(e.into()),
        Err(VerifyError::Config(e)) => Err(e.into()),
    }
}

fn cmd_adversarial(out: &mut impl Write, args: &AdversarialArgs) -> Result<u8, Failure> {
    let built = if args.figure2 {
        figure2_pair(args.color_a, args.color_b)
    } else {
        let (degree, size) = (args.degree.unwrap_or(0), args.size.unwrap_or(0));
        bipartite_adversarial_pair(degree, size)
    };
    let pair = match built {
        Ok(pair) => pair,
        Err(e @ AdversarialError::ConstructionDegenerate { .. }) => {
            writeln!(out, "{e}").map_err(write_failure)?;
            return Ok(EXIT_NEGATIVE);
        }
        Err(e) => return Err(Failure::new(EXIT_INPUT, e.to_string())),
    };

    let (left_json, right_json) = (gio::graph_to_json(&pair.left), gio::graph_to_json(&pair.right));
    match &args.out_dir {
        Some(dir) => {
            let write = || -> io::Result<()> {
                fs::create_dir_all(dir)?;
                fs::write(dir.join("left.json"), format!("{left_json}\n"))?;
                fs::write(dir.join("right.json"), format!("{right_json}\n"))
            };
            write().map_err(write_failure)?;
        }
        None => {
            writeln!(out, "left: {left_json}").map_err(write_failure)?;
            writeln!(out, "right: {right_json}").map_err(write_failure)?;
        }
    }
    let left = graph_invariant(&pair.left, args.backend);
    let right = graph_invariant(&pair.right, args.backend);
    let lines = [
        format!(
            "vertices: {}, edges: {}",
            pair.left.vertex_count(),
            pair.left.edge_count()
        ),
        format!("left digest ({}): {}", args.backend, abbreviate(&left.to_hex())),
        format!("right digest ({}): {}", args.backend, abbreviate(&right.to_hex())),
        format!("digests equal: {}", left == right),
        match &pair.certificate {
            NonIsoCertificate::Oracle => "non-isomorphic: exhaustive permutation search found no isomorphism".into(),
            NonIsoCertificate::ComponentSizes { left, right } => format!(
                "non-isomorphic: middle-layer component sizes differ ({left:?} vs {right:?})"
            ),
        },
    ];
    for line in lines {
        writeln!(out, "{line}").map_err(write_failure)?;
    }
    Ok(if left == right { 0 } else { EXIT_NEGATIVE })
}

/// Concat digests can run to megabytes.
fn abbreviate(hex: &str) -> String {
    if hex.len() <= 64 {
        hex.to_string()
    } else {
        format!("{}... ({} bytes)", &hex[..64], hex.len() / 2)
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Hash {
            file,
            backend,
            normalize,
        } => cmd_hash(&mut out, &file, backend, normalize),
        Command::Iso {
            first,
            second,
            normalize,
        } => cmd_iso(&mut out, &first, &second, normalize),
        Command::Enumerate {
            config,
            out: path,
            backend,
            parallel,
        } => {
            let config = config.config()?;
            cmd_enumerate(&mut out, config, &path, backend, parallel)
        }
        Command::Verify {
            config,
            backend,
            inject,
        } => {
            let config = config.config()?;
            cmd_verify(&mut out, config, backend, &inject)
        }
        Command::Adversarial(args) => cmd_adversarial(&mut out, &args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
