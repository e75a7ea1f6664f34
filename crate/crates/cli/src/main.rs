//! `rigidlink`: JSON front end for the rigidity engine.
//!
//! Every successful run prints one `CliReport` line on stdout. Failures print
//! `{"error": {..}}` on stderr and exit with 1 (unreadable or malformed
//! input), 2 (bad arguments or a violated precondition) or 3 (the numeric
//! oracle disagrees with the combinatorial answer).

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rigidlink_core::connectivity::{three_block, ThreeBlockOutcome};
use rigidlink_core::linkedness::audit_minimally_globally_rigid_seeded;
use rigidlink_core::oracle::{equivalence_sampler, generic_rank_with, verify_witness};
use rigidlink_core::sparsity::fundamental_circuit;
use rigidlink_core::{
    edge, is_globally_rigid2, parse_graph, rank2, serialize_graph, Edge, Error, Format, Graph,
    PairClassifier,
};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Seed used when neither `--seed` nor `RIGIDLINK_SEED` is given.
const DEFAULT_SEED: u64 = 2024;
const SEED_VAR: &str = "RIGIDLINK_SEED";

#[derive(Parser, Debug)]
#[command(
    name = "rigidlink",
    version,
    about = "Rigidity and weak global linkedness of graphs in the plane"
)]
struct Cli {
    /// Input graph format; guessed from the first character when omitted.
    #[arg(long, global = true, value_enum)]
    format: Option<GraphFormat>,

    /// Include certificates in pair verdicts.
    #[arg(long, global = true, value_enum, default_value_t = Switch::On)]
    certificate: Switch,

    /// Worker threads for parallel commands.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    EdgeList,
    Json,
}

impl From<GraphFormat> for Format {
    fn from(f: GraphFormat) -> Self {
        match f {
            GraphFormat::EdgeList => Format::EdgeList,
            GraphFormat::Json => Format::Json,
        }
    }
}

#[derive(Args, Debug)]
struct PairArgs {
    file: PathBuf,
    /// Vertex label or id.
    u: String,
    /// Vertex label or id.
    v: String,
}

#[derive(Args, Debug)]
struct OracleCheck {
    /// Recompute with the numeric rank oracle; exit 3 on disagreement.
    #[arg(long)]
    oracle_check: bool,
    /// Oracle seed (default: RIGIDLINK_SEED, then a fixed value).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank of the planar rigidity matroid.
    Rank {
        file: PathBuf,
        #[command(flatten)]
        check: OracleCheck,
    },
    /// Generic rigidity in the plane.
    IsRigid {
        file: PathBuf,
        #[command(flatten)]
        check: OracleCheck,
    },
    /// Global rigidity in the plane, with a failure witness.
    IsGloballyRigid { file: PathBuf },
    /// Classifies one vertex pair.
    Pair(PairArgs),
    /// Classifies every non-adjacent pair.
    AllPairs { file: PathBuf },
    /// The 3-block of a vertex pair in a 2-connected graph.
    ThreeBlock(PairArgs),
    /// The fundamental circuit of a linked non-adjacent pair.
    Circuit(PairArgs),
    /// Minimal global rigidity audit.
    AuditMgr {
        file: PathBuf,
        /// Seed for subset sampling on large graphs.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Generic rank of the rigidity matrix in dimension `d`, over a prime field.
    OracleRank {
        file: PathBuf,
        #[arg(short, long, default_value_t = 2)]
        d: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = rigidlink_core::oracle::DEFAULT_REPETITIONS)]
        repetitions: usize,
    },
    /// Searches for an equivalent framework that moves the pair distance.
    SampleEquivalence {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(short, long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Rewrites a graph file in the other format.
    Convert {
        file: PathBuf,
        /// Output format.
        #[arg(long, value_enum)]
        to: GraphFormat,
        /// Write the graph here instead of embedding it in the report.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Rank { .. } => "rank",
            Command::IsRigid { .. } => "is-rigid",
            Command::IsGloballyRigid { .. } => "is-globally-rigid",
            Command::Pair(_) => "pair",
            Command::AllPairs { .. } => "all-pairs",
            Command::ThreeBlock(_) => "three-block",
            Command::Circuit(_) => "circuit",
            Command::AuditMgr { .. } => "audit-mgr",
            Command::OracleRank { .. } => "oracle-rank",
            Command::SampleEquivalence { .. } => "sample-equivalence",
            Command::Convert { .. } => "convert",
        }
    }

    fn file(&self) -> &PathBuf {
        match self {
            Command::Rank { file, .. }
            | Command::IsRigid { file, .. }
            | Command::IsGloballyRigid { file }
            | Command::AllPairs { file }
            | Command::AuditMgr { file, .. }
            | Command::OracleRank { file, .. }
            | Command::Convert { file, .. } => file,
            Command::Pair(p) | Command::ThreeBlock(p) | Command::Circuit(p) => &p.file,
            Command::SampleEquivalence { pair, .. } => &pair.file,
        }
    }
}

#[derive(Serialize)]
struct CliReport {
    command: &'static str,
    input_digest: String,
    result: Value,
    timing_ms: f64,
}

/// A failed run: exit code plus the JSON error body.
struct Failure {
    code: u8,
    body: Value,
}

impl Failure {
    fn new(code: u8, kind: &str, message: impl Into<String>) -> Self {
        Failure {
            code,
            body: json!({ "kind": kind, "message": message.into() }),
        }
    }

    fn with(mut self, key: &str, value: Value) -> Self {
        self.body[key] = value;
        self
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_parse_error() { 1 } else { 2 };
        let failure = Failure::new(code, e.kind(), e.to_string());
        match e {
            Error::Parse { line, .. } => failure.with("line", json!(line)),
            _ => failure,
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results serialize to JSON")
}

fn digest(g: &Graph) -> String {
    let hash = Sha256::digest(serialize_graph(g, Format::Json).as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

fn seed_or_default(explicit: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = explicit {
        return Ok(s);
    }
    match std::env::var(SEED_VAR) {
        Ok(s) => s.trim().parse().map_err(|_| {
            Failure::new(
                2,
                "invalid_seed",
                format!("{SEED_VAR} is not an unsigned integer: {s:?}"),
            )
        }),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn load(path: &PathBuf, format: Option<GraphFormat>) -> Result<Graph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(1, "io", format!("{}: {e}", path.display())))?;
    let format = format
        .map(Format::from)
        .unwrap_or_else(|| Format::sniff(&text));
    Ok(parse_graph(&text, format)?)
}

fn resolve(g: &Graph, p: &PairArgs) -> Result<(usize, usize), Failure> {
    Ok((g.resolve_vertex(&p.u)?, g.resolve_vertex(&p.v)?))
}

fn oracle_rank2(g: &Graph, seed: u64) -> Result<Value, Failure> {
    Ok(to_value(&generic_rank_with(
        g,
        2,
        seed,
        rigidlink_core::oracle::DEFAULT_REPETITIONS,
    )?))
}

fn mismatch(what: &str, engine: Value, oracle: Value) -> Failure {
    Failure::new(
        3,
        "oracle_mismatch",
        format!("{what} disagrees with the numeric oracle"),
    )
    .with("engine", engine)
    .with("oracle", oracle)
}

fn execute(cli: &Cli, g: &Graph) -> Result<Value, Failure> {
    let certificates = cli.certificate == Switch::On;
    let result = match &cli.command {
        Command::Rank { check, .. } => {
            let rank = rank2(g);
            let mut out = json!({ "rank": rank });
            if check.oracle_check {
                let oracle = oracle_rank2(g, seed_or_default(check.seed)?)?;
                if oracle["rank"] != json!(rank) {
                    return Err(mismatch("rank", json!(rank), oracle));
                }
                out["oracle"] = oracle;
            }
            out
        }
        Command::IsRigid { check, .. } => {
            let rank = rank2(g);
            let rigid = rigidlink_core::is_rigid2(g);
            let mut out = json!({ "rigid": rigid, "rank": rank });
            if check.oracle_check {
                let oracle = oracle_rank2(g, seed_or_default(check.seed)?)?;
                let oracle_rigid = if g.n() <= 2 {
                    g.is_complete()
                } else {
                    oracle["rank"] == json!(2 * g.n() - 3)
                };
                if oracle_rigid != rigid {
                    return Err(mismatch("rigidity", json!(rigid), oracle));
                }
                out["oracle"] = oracle;
            }
            out
        }
        Command::IsGloballyRigid { .. } => to_value(&is_globally_rigid2(g)),
        Command::Pair(p) => {
            let (u, v) = resolve(g, p)?;
            let mut c = PairClassifier::new(g).classify(u, v)?;
            if !certificates {
                c = c.without_certificate();
            }
            to_value(&c)
        }
        Command::AllPairs { .. } => {
            let all = PairClassifier::new(g).classify_all(cli.threads)?;
            let linked: Vec<Edge> = all
                .iter()
                .filter(|c| c.is_weakly_globally_linked())
                .map(|c| (c.u, c.v))
                .collect();
            let pairs: Vec<_> = all
                .into_iter()
                .map(|c| {
                    if certificates {
                        c
                    } else {
                        c.without_certificate()
                    }
                })
                .collect();
            json!({ "weakly_linked_pairs": linked, "pairs": pairs })
        }
        Command::ThreeBlock(p) => {
            let (u, v) = resolve(g, p)?;
            match three_block(g, u, v)? {
                ThreeBlockOutcome::SeparatingPair => json!({ "outcome": "SeparatingPair" }),
                ThreeBlockOutcome::Block(tb) => {
                    let mut edges: Vec<Edge> =
                        tb.block.edges().iter().map(|&e| tb.lift_edge(e)).collect();
                    edges.sort_unstable();
                    json!({
                        "outcome": "Block",
                        "vertices": tb.to_parent,
                        "edges": edges,
                        "virtual_edges": tb.added_edges,
                    })
                }
            }
        }
        Command::Circuit(p) => {
            let (u, v) = resolve(g, p)?;
            let circuit = fundamental_circuit(g, u, v)?;
            let mut out = to_value(&circuit);
            out["pair"] = json!(edge(u, v));
            out
        }
        Command::AuditMgr { seed, .. } => to_value(&audit_minimally_globally_rigid_seeded(
            g,
            seed_or_default(*seed)?,
        )),
        Command::OracleRank {
            d,
            seed,
            repetitions,
            ..
        } => to_value(&generic_rank_with(
            g,
            *d,
            seed_or_default(*seed)?,
            *repetitions,
        )?),
        Command::SampleEquivalence {
            pair,
            d,
            trials,
            seed,
            ..
        } => {
            let (u, v) = resolve(g, pair)?;
            let seed = seed_or_default(*seed)?;
            let witness = match cli.threads {
                Some(t) => rayon::ThreadPoolBuilder::new()
                    .num_threads(t.max(1))
                    .build()
                    .map_err(|e| Failure::new(2, "threads", e.to_string()))?
                    .install(|| equivalence_sampler(g, u, v, *d, *trials, seed))?,
                None => equivalence_sampler(g, u, v, *d, *trials, seed)?,
            };
            let verified = witness.as_ref().map(|w| verify_witness(g, w));
            json!({
                "u": u,
                "v": v,
                "dimension": d,
                "trials": trials,
                "seed": seed,
                "found": witness.is_some(),
                "verified": verified,
                "witness": witness,
            })
        }
        Command::Convert { to, output, .. } => {
            let text = serialize_graph(g, (*to).into());
            let format = match to {
                GraphFormat::EdgeList => "edge-list",
                GraphFormat::Json => "json",
            };
            match output {
                Some(path) => {
                    std::fs::write(path, &text)
                        .map_err(|e| Failure::new(2, "io", format!("{}: {e}", path.display())))?;
                    json!({ "format": format, "output": path.display().to_string() })
                }
                None => json!({ "format": format, "graph": text }),
            }
        }
    };
    Ok(result)
}

fn run(cli: &Cli) -> Result<CliReport, Failure> {
    let g = load(cli.command.file(), cli.format)?;
    let start = Instant::now();
    let result = execute(cli, &g)?;
    Ok(CliReport {
        command: cli.command.name(),
        input_digest: digest(&g),
        result,
        timing_ms: start.elapsed().as_secs_f64() * 1000.0,
    })
}

fn fail(f: Failure) -> ExitCode {
    eprintln!("{}", json!({ "error": f.body }));
    ExitCode::from(f.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.render().to_string();
            return fail(Failure::new(2, "usage", message.trim_end()));
        }
    };
    match run(&cli) {
        Ok(report) => {
            println!(
                "{}",
                serde_json::to_string(&report).expect("reports serialize to JSON")
            );
            ExitCode::SUCCESS
        }
        Err(f) => fail(f),
    }
}
