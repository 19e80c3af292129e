//! `simplex-mutator`: JSON in, JSON out over the mutation library.
//!
//! Exit codes: 0 success, 1 failed verification or internal invariant,
//! 2 usage or parse error, 3 invalid input, 4 resource limit.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use simplex_mutator::corpus::{generate_corpus, CorpusConfig, DEFAULT_SEED};
use simplex_mutator::json;
use simplex_mutator::mutation::{find_simplex_mutations, move_with_face, mutate, mutate_simplex, validate_factor};
use simplex_mutator::polytope::LatticePolytope;
use simplex_mutator::simplex::{degree, simplex_from_weights, weights_of};
use simplex_mutator::singularity::{classify_polytope, classify_weights, classify_weights_at, DEFAULT_MAX_H};
use simplex_mutator::sylvester::{build_mutation_tree, kappa_witness, tower, Variant};
use simplex_mutator::verify::{appendix_suite, mutation_suite, singularity_suite, SuiteReport};
use simplex_mutator::{DualVector, Error, FanoSimplex, WeightSystem};

const MAX_H_ENV: &str = "SIMPLEX_MUTATOR_MAX_H";
const MAX_TOWER_STEPS: usize = 12;

#[derive(Parser)]
#[command(name = "simplex-mutator", version, about = "Mutations of Fano simplices and weighted projective spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weights and multiplicity of a simplex.
    Weights {
        /// Simplex JSON; standard input when omitted.
        file: Option<PathBuf>,
    },
    /// A simplex realising a weight system.
    Build {
        /// Weight JSON; standard input when omitted.
        file: Option<PathBuf>,
    },
    /// Apply one mutation and print the resulting polytope.
    Mutate {
        file: Option<PathBuf>,
        /// Index into the list printed by `moves`.
        #[arg(long = "move", conflicts_with_all = ["w", "apex"])]
        index: Option<usize>,
        /// Height function, e.g. `1,0,0`.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "apex")]
        w: Option<String>,
        /// Factor points as a JSON list, e.g. `[[0,0,0],[2,1,3]]`; needs `--w`.
        #[arg(long, requires = "w")]
        factor: Option<String>,
        /// Apex vertex of the move; needs `--min-face`.
        #[arg(long, requires = "min_face")]
        apex: Option<usize>,
        /// Min-face vertices, comma separated; the first is the fixed vertex.
        #[arg(long, value_delimiter = ',', requires = "apex")]
        min_face: Option<Vec<usize>>,
    },
    /// Every mutation of a simplex.
    Moves {
        file: Option<PathBuf>,
        /// Drop moves that keep the simplex.
        #[arg(long)]
        nontrivial: bool,
    },
    /// Canonical, terminal and Gorenstein tests for a simplex or weight system.
    Classify {
        file: Option<PathBuf>,
        /// Only test these κ, comma separated; the answer is then not exhaustive.
        #[arg(long, value_delimiter = ',')]
        kappa: Option<Vec<String>>,
    },
    /// Anticanonical degree of a simplex or weight system.
    Degree { file: Option<PathBuf> },
    /// The Sylvester tower λ^(m,a) for m = 0..=M.
    Tower {
        n: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::Canonical)]
        variant: VariantArg,
        #[arg(long, default_value_t = 0)]
        a: usize,
        #[arg(long, default_value_t = 3)]
        m: usize,
    },
    /// Breadth-first mutation graph from the maximal-degree space.
    Tree {
        n: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::Canonical)]
        variant: VariantArg,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Also write Graphviz output here.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Classify every node with weight sum within the κ-scan bound.
        #[arg(long)]
        classify: bool,
    },
    /// Run a verification suite and print a pass/fail table.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Dimension for the tower suite.
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Tower depth for the tower suite.
        #[arg(long, default_value_t = 3)]
        m: usize,
        /// Corpus seed for the mutation and singularity suites.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Canonical,
    Terminal,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Canonical => Variant::Canonical,
            VariantArg::Terminal => Variant::Terminal,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Appendix,
    Mutation,
    Singularity,
}

enum Failure {
    Lib(Error),
    Usage(String),
    Io(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Verification => 1,
            Failure::Lib(Error::Invariant(_)) => 1,
            Failure::Usage(_) | Failure::Io(_) | Failure::Lib(Error::Parse(_)) => 2,
            Failure::Lib(e) if e.is_resource_limit() => 4,
            Failure::Lib(_) => 3,
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn read_input(file: Option<&Path>) -> std::result::Result<Value, Failure> {
    let text = match file {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Io(format!("stdin: {e}")))?;
            s
        }
    };
    Ok(json::parse_value(&text)?)
}

fn emit(v: &Value) {
    println!("{}", serde_json::to_string(v).expect("values serialise"));
}

fn max_h() -> std::result::Result<u64, Failure> {
    match std::env::var(MAX_H_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{MAX_H_ENV} must be a non-negative integer, got {s:?}"))),
        Err(_) => Ok(DEFAULT_MAX_H),
    }
}

enum Input {
    Simplex(FanoSimplex),
    Weights(WeightSystem),
}

/// A bare list of numbers or an object with `weights` is a weight system;
/// anything else is read as a simplex.
fn read_either(v: &Value) -> std::result::Result<Input, Failure> {
    let is_weights = match v {
        Value::Object(obj) => obj.contains_key("weights"),
        Value::Array(items) => items.iter().all(|x| !x.is_array()) && !items.is_empty(),
        _ => false,
    };
    if is_weights {
        Ok(Input::Weights(json::parse_weights(v)?))
    } else {
        Ok(Input::Simplex(json::parse_simplex(v)?))
    }
}

fn parse_ints(text: &str, what: &str) -> std::result::Result<Vec<BigInt>, Failure> {
    text.split(',')
        .map(|s| s.trim().parse().map_err(|_| Failure::Usage(format!("{what}: {s:?} is not an integer"))))
        .collect()
}

fn cmd_mutate(
    file: Option<&Path>,
    index: Option<usize>,
    w: Option<String>,
    factor: Option<String>,
    apex: Option<usize>,
    min_face: Option<Vec<usize>>,
) -> Outcome {
    let p = json::parse_simplex(&read_input(file)?)?;
    if let Some(points) = factor {
        let w = DualVector::new(parse_ints(w.as_deref().unwrap_or_default(), "--w")?);
        let points = json::parse_vectors(&json::parse_value(&points)?)?;
        let f = validate_factor(&LatticePolytope::from(&p), &w, &points)?;
        let q = mutate(&f)?;
        emit(&json::polytope_json(q.dim(), q.vertices()));
        return Ok(());
    }
    let moves = find_simplex_mutations(&p);
    let mv = if let Some(i) = index {
        moves
            .get(i)
            .cloned()
            .ok_or_else(|| Error::OutOfRange(format!("move {i} of {}", moves.len())))?
    } else if let Some(w) = w {
        let w = DualVector::new(parse_ints(&w, "--w")?);
        moves
            .into_iter()
            .find(|m| m.w == w)
            .ok_or_else(|| Error::InvalidMove(format!("no simplex move has w = {w}")))?
    } else if let (Some(apex), Some(face)) = (apex, min_face) {
        move_with_face(&p, apex, &face)
            .ok_or_else(|| Error::InvalidMove(format!("no move with apex {apex} and min-face {face:?}")))?
    } else {
        return Err(Failure::Usage("choose a move with --move, --w or --apex/--min-face".into()));
    };
    emit(&json::simplex_json(&mutate_simplex(&p, &mv)?));
    Ok(())
}

fn cmd_classify(file: Option<&Path>, kappa: Option<Vec<String>>) -> Outcome {
    let input = read_either(&read_input(file)?)?;
    let report = match (input, kappa) {
        (input, Some(list)) => {
            let ws = match input {
                Input::Simplex(p) => weights_of(&p),
                Input::Weights(ws) => ws,
            };
            let kappas = parse_ints(&list.join(","), "--kappa")?;
            classify_weights_at(&ws, &kappas)?
        }
        (Input::Simplex(p), None) => classify_polytope(&p)?,
        (Input::Weights(ws), None) => classify_weights(&ws, max_h()?)?,
    };
    emit(&json::report_json(&report));
    Ok(())
}

fn cmd_tower(n: usize, variant: Variant, a: usize, m: usize) -> Outcome {
    if m > MAX_TOWER_STEPS {
        return Err(Error::TooLarge(format!("m = {m} exceeds {MAX_TOWER_STEPS}")).into());
    }
    let states = tower(n, variant, a, m)?;
    let out: Vec<Value> = states
        .iter()
        .map(|s| {
            let w = if s.m == 0 { None } else { Some(kappa_witness(s)?) };
            Ok(json::tower_state_json(s, w.as_ref()))
        })
        .collect::<simplex_mutator::Result<_>>()?;
    emit(&Value::Array(out));
    Ok(())
}

fn cmd_tree(n: usize, variant: Variant, depth: usize, dot: Option<&Path>, classify: bool) -> Outcome {
    let mut g = build_mutation_tree(n, variant, depth)?;
    if classify {
        g.annotate_singularities(max_h()?)?;
    }
    if let Some(path) = dot {
        std::fs::write(path, g.to_dot()).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    emit(&json::graph_json(&g));
    Ok(())
}

fn cmd_verify(suite: Suite, n: usize, m: usize, seed: u64) -> Outcome {
    let report: SuiteReport = match suite {
        Suite::Appendix => appendix_suite(n, m)?,
        Suite::Mutation => mutation_suite(&generate_corpus(&CorpusConfig { seed, ..CorpusConfig::default() }))?,
        Suite::Singularity => singularity_suite(
            &generate_corpus(&CorpusConfig { seed, ..CorpusConfig::default() }),
            10_000,
        )?,
    };
    print!("{report}");
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Weights { file } => {
            let p = json::parse_simplex(&read_input(file.as_deref())?)?;
            emit(&json::weights_json(&weights_of(&p)));
        }
        Command::Build { file } => {
            let ws = json::parse_weights(&read_input(file.as_deref())?)?;
            emit(&json::simplex_json(&simplex_from_weights(&ws)?));
        }
        Command::Mutate { file, index, w, factor, apex, min_face } => {
            cmd_mutate(file.as_deref(), index, w, factor, apex, min_face)?
        }
        Command::Moves { file, nontrivial } => {
            let p = json::parse_simplex(&read_input(file.as_deref())?)?;
            let moves: Vec<Value> = find_simplex_mutations(&p)
                .iter()
                .filter(|m| !(nontrivial && m.trivial))
                .map(json::move_json)
                .collect();
            emit(&Value::Array(moves));
        }
        Command::Classify { file, kappa } => cmd_classify(file.as_deref(), kappa)?,
        Command::Degree { file } => {
            let ws = match read_either(&read_input(file.as_deref())?)? {
                Input::Simplex(p) => weights_of(&p),
                Input::Weights(ws) => ws,
            };
            emit(&json!({ "degree": json::rational(&degree(&ws)) }));
        }
        Command::Tower { n, variant, a, m } => cmd_tower(n, variant.into(), a, m)?,
        Command::Tree { n, variant, depth, dot, classify } => {
            cmd_tree(n, variant.into(), depth, dot.as_deref(), classify)?
        }
        Command::Verify { suite, n, m, seed } => cmd_verify(suite, n, m, seed)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Lib(e) => eprintln!("error: {e}"),
                Failure::Usage(msg) | Failure::Io(msg) => eprintln!("error: {msg}"),
                Failure::Verification => {}
            }
            ExitCode::from(f.exit_code())
        }
    }
}
