//! `rigidlab`: generate window complexes, test rigidity, evaluate first-order
//! sentences, check the Hanf relation and run the counterexample verifiers.
//!
//! Exit codes: 0 when the property holds or the verification passes, 1 when
//! it does not, 2 on usage or input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use rigidlab_core::fo::{evaluate_sentence, free_vars, parse_formula, SigmaStructure};
use rigidlab_core::locality::{
    ball_census, rigidity_dispatch, verify_circuit, verify_connectivity,
    verify_neighborhood_lemma, QueryOptions,
};
use rigidlab_core::report::graph_hash;
use rigidlab_core::rigidity::{
    cjt_globally_rigid_predicate, geiringer_locally_2_rigid, is_globally_1_rigid,
    is_globally_rigid_generic, is_locally_1_rigid, is_locally_rigid_generic, CjtOutcome, Method,
    Property, RigidityVerdict, DEFAULT_TRIALS,
};
use rigidlab_core::{
    build_cyclic_complex, build_path_complex, disjoint_union, graph_of, hanf_equivalent,
    verify_theorem, Graph, SimplicialComplex, VerificationReport,
};

#[derive(Parser, Debug)]
#[command(name = "rigidlab", version, about = "Rigidity and Hanf-locality workbench")]
struct Cli {
    /// Seed for the randomized rank tests. Drawn from entropy when absent;
    /// always recorded in the output.
    #[arg(long, global = true, env = "RIGIDLAB_SEED")]
    seed: Option<u64>,
    /// Random configurations tried per rank test.
    #[arg(long, global = true, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit a window complex or a graph as JSON.
    #[command(subcommand)]
    Gen(Gen),
    /// Decide local or global rigidity of a graph (or of the graph of a complex).
    Rigidity {
        #[arg(long)]
        dim: usize,
        #[arg(long, value_enum)]
        property: PropertyArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        file: PathBuf,
    },
    /// Look for a witness of the Hanf relation at radius R.
    Hanf {
        #[arg(long)]
        r: usize,
        file1: PathBuf,
        file2: PathBuf,
    },
    /// First-order model checking.
    #[command(subcommand)]
    Fo(Fo),
    /// Verification reports for the cyclic-window counterexample.
    Verify {
        #[arg(value_enum)]
        what: VerifyKind,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        r: usize,
        /// Order of the cyclic complex; defaults to 2rd + 2.
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum Gen {
    /// Cyclic window complex C_n^d.
    Cyclic {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Emit the graph of the complex instead of its facets.
        #[arg(long)]
        graph: bool,
    },
    /// Path window complex P_n^d.
    Path {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        graph: bool,
    },
    /// Disjoint union of two graphs (second relabeled after the first).
    Union { file1: PathBuf, file2: PathBuf },
}

#[derive(Subcommand, Debug)]
enum Fo {
    /// Evaluate a sentence on a structure.
    Eval {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        structure: PathBuf,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum PropertyArg {
    Local,
    Global,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Numeric,
    Pebble,
    Connectivity,
    Cjt,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum VerifyKind {
    Neighborhoods,
    Circuit,
    Connectivity,
    Theorem,
}

/// A finished run: the JSON record, its text rendering, and whether the
/// property held.
struct Outcome {
    json: String,
    text: String,
    holds: bool,
}

impl Outcome {
    fn new(record: &impl Serialize, text: String, holds: bool) -> Self {
        Self {
            json: serde_json::to_string_pretty(record).expect("records serialize to JSON"),
            text,
            holds,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Json => out.json,
                Format::Text => out.text,
            };
            let written = match &cli.output {
                Some(path) => fs::write(path, body + "\n")
                    .with_context(|| format!("--output: cannot write {}", path.display())),
                None => {
                    println!("{body}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => ExitCode::from(if out.holds { 0 } else { 1 }),
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::from(2)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let seed = cli.seed.unwrap_or_else(rand::random);
    if cli.trials == 0 {
        bail!("--trials: must be at least 1");
    }
    match &cli.command {
        Command::Gen(g) => gen(g),
        Command::Rigidity {
            dim,
            property,
            method,
            file,
        } => rigidity(*dim, *property, *method, file, seed, cli.trials),
        Command::Hanf { r, file1, file2 } => hanf(*r, file1, file2, seed),
        Command::Fo(Fo::Eval { formula, structure }) => fo_eval(formula, structure, seed),
        Command::Verify { what, d, r, n } => verify(*what, *d, *r, *n, seed, cli.trials),
    }
}

fn read_json(path: &Path, field: &str) -> Result<Value> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("{field}: cannot read {}", path.display()))?;
    serde_json::from_str(&text)
        .with_context(|| format!("{field}: {} is not valid JSON", path.display()))
}

fn read_graph(path: &Path, field: &str) -> Result<Graph> {
    serde_json::from_value(read_json(path, field)?)
        .with_context(|| format!("{field}: {} is not a graph", path.display()))
}

enum Input {
    Graph(Graph),
    Complex(SimplicialComplex),
}

/// Graph JSON has `"order"`, complex JSON has `"ground_size"`.
fn read_graph_or_complex(path: &Path, field: &str) -> Result<Input> {
    let v = read_json(path, field)?;
    if v.get("ground_size").is_some() {
        let c = serde_json::from_value(v)
            .with_context(|| format!("{field}: {} is not a complex", path.display()))?;
        Ok(Input::Complex(c))
    } else {
        let g = serde_json::from_value(v)
            .with_context(|| format!("{field}: {} is not a graph", path.display()))?;
        Ok(Input::Graph(g))
    }
}

fn graph_summary(g: &Graph) -> String {
    format!("{} vertices, {} edges", g.order(), g.edge_count())
}

fn gen(g: &Gen) -> Result<Outcome> {
    let emit = |c: SimplicialComplex, graph: bool| {
        if graph {
            let g = graph_of(&c);
            let text = format!("graph: {}\n{}", graph_summary(&g), g.to_json());
            Outcome::new(&g, text, true)
        } else {
            let text = format!(
                "complex on {} vertices with {} facets\n{}",
                c.ground_size(),
                c.facets().len(),
                c.to_json()
            );
            Outcome::new(&c, text, true)
        }
    };
    match g {
        Gen::Cyclic { n, d, graph } => {
            let c = build_cyclic_complex(*n, *d).map_err(|e| anyhow!("--n/--d: {e}"))?;
            Ok(emit(c, *graph))
        }
        Gen::Path { n, d, graph } => {
            let c = build_path_complex(*n, *d).map_err(|e| anyhow!("--n/--d: {e}"))?;
            Ok(emit(c, *graph))
        }
        Gen::Union { file1, file2 } => {
            let a = read_graph(file1, "FILE1")?;
            let b = read_graph(file2, "FILE2")?;
            let u = disjoint_union(&a, &b);
            let text = format!("graph: {}\n{}", graph_summary(&u), u.to_json());
            Ok(Outcome::new(&u, text, true))
        }
    }
}

#[derive(Serialize)]
struct RigidityRecord {
    seed: u64,
    input_sha256: String,
    method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<RigidityVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    circuit_predicate: Option<CjtOutcome>,
    holds: bool,
}

fn rigidity(
    dim: usize,
    property: PropertyArg,
    method: MethodArg,
    file: &Path,
    seed: u64,
    trials: usize,
) -> Result<Outcome> {
    if dim == 0 {
        bail!("--dim: must be at least 1");
    }
    let property = match property {
        PropertyArg::Local => Property::Local,
        PropertyArg::Global => Property::Global,
    };
    let input = read_graph_or_complex(file, "FILE")?;
    let g = match &input {
        Input::Graph(g) => g.clone(),
        Input::Complex(c) => graph_of(c),
    };
    let method_name = format!("{method:?}").to_lowercase();
    let mut circuit_predicate = None;
    let verdict = match method {
        MethodArg::Auto => Some(rigidity_dispatch(&g, dim, property, QueryOptions { trials, seed })),
        MethodArg::Numeric => Some(match property {
            Property::Local => is_locally_rigid_generic(&g, dim, trials, seed),
            Property::Global => is_globally_rigid_generic(&g, dim, trials, seed),
        }),
        MethodArg::Pebble => {
            if dim != 2 || property != Property::Local {
                bail!("--method: pebble decides only --dim 2 --property local");
            }
            let rigid = geiringer_locally_2_rigid(&g).map_err(|e| anyhow!("FILE: {e}"))?;
            Some(RigidityVerdict::combinatorial(&g, property, 2, rigid, Method::Pebble))
        }
        MethodArg::Connectivity => {
            if dim != 1 {
                bail!("--method: connectivity decides only --dim 1");
            }
            let rigid = match property {
                Property::Local => is_locally_1_rigid(&g),
                Property::Global => is_globally_1_rigid(&g),
            };
            Some(RigidityVerdict::combinatorial(&g, property, 1, rigid, Method::Connectivity))
        }
        MethodArg::Cjt => {
            let Input::Complex(c) = &input else {
                bail!("--method: cjt needs a complex file (with \"ground_size\" and \"facets\")");
            };
            if property != Property::Global || dim < 4 {
                bail!("--method: cjt decides only --property global with --dim at least 4");
            }
            let out = cjt_globally_rigid_predicate(c, dim - 1).map_err(|e| anyhow!("FILE: {e}"))?;
            circuit_predicate = Some(out);
            None
        }
    };
    let holds = match (&verdict, &circuit_predicate) {
        (Some(v), _) => v.is_rigid(),
        (None, Some(c)) => c.prediction,
        (None, None) => unreachable!("every method yields a verdict or a prediction"),
    };
    let mut text = format!(
        "{}: {} {} {}-rigid ({})",
        file.display(),
        if holds { "is" } else { "is not" },
        if property == Property::Local { "locally" } else { "globally" },
        dim,
        graph_summary(&g)
    );
    if let Some(v) = &verdict {
        text += &format!("\nmethod {:?}, certainty {:?}", v.method, v.certainty);
        if let (Some(o), Some(t)) = (v.observed_rank, v.target_rank) {
            text += &format!(", rank {o} of {t}");
        }
    }
    if let Some(c) = &circuit_predicate {
        text += &format!("\ncircuit predicate via {}", c.via);
    }
    text += &format!("\nseed {seed}");
    let record = RigidityRecord {
        seed,
        input_sha256: graph_hash(&g),
        method: method_name,
        verdict,
        circuit_predicate,
        holds,
    };
    Ok(Outcome::new(&record, text, holds))
}

#[derive(Serialize)]
struct HanfRecord {
    seed: u64,
    radius: usize,
    equivalent: bool,
    census_classes: [usize; 2],
    witness: Option<Vec<usize>>,
    sha256: [String; 2],
}

fn hanf(r: usize, file1: &Path, file2: &Path, seed: u64) -> Result<Outcome> {
    let a = read_graph(file1, "FILE1")?;
    let b = read_graph(file2, "FILE2")?;
    let w = hanf_equivalent(&a, &b, r);
    let record = HanfRecord {
        seed,
        radius: r,
        equivalent: w.is_some(),
        census_classes: [ball_census(&a, r).classes.len(), ball_census(&b, r).classes.len()],
        witness: w.map(|w| w.as_slice().to_vec()),
        sha256: [graph_hash(&a), graph_hash(&b)],
    };
    let text = format!(
        "radius {r}: {} ({} and {} ball classes)\nwitness: {:?}",
        if record.equivalent { "equivalent" } else { "not equivalent" },
        record.census_classes[0],
        record.census_classes[1],
        record.witness
    );
    let holds = record.equivalent;
    Ok(Outcome::new(&record, text, holds))
}

#[derive(Serialize)]
struct FoRecord {
    seed: u64,
    formula: String,
    depth: usize,
    universe: usize,
    holds: bool,
}

fn fo_eval(formula: &Path, structure: &Path, seed: u64) -> Result<Outcome> {
    let s: SigmaStructure = serde_json::from_value(read_json(structure, "--structure")?)
        .with_context(|| format!("--structure: {} is not a structure", structure.display()))?;
    let text = fs::read_to_string(formula)
        .with_context(|| format!("--formula: cannot read {}", formula.display()))?;
    let f = parse_formula(text.trim(), s.signature()).map_err(|e| anyhow!("--formula: {e}"))?;
    let free = free_vars(&f);
    if !free.is_empty() {
        let names: Vec<String> = free.iter().map(ToString::to_string).collect();
        bail!("--formula: not a sentence, free variables {}", names.join(", "));
    }
    let holds = evaluate_sentence(&s, &f).map_err(|e| anyhow!("--formula: {e}"))?;
    let record = FoRecord {
        seed,
        formula: f.to_string(),
        depth: f.depth(),
        universe: s.universe(),
        holds,
    };
    let text = format!("{}\n{}", record.formula, if holds { "true" } else { "false" });
    Ok(Outcome::new(&record, text, holds))
}

fn report_text(rep: &VerificationReport) -> String {
    let mut out = format!(
        "{}: {}",
        rep.kind,
        if rep.passed { "passed" } else { "failed" }
    );
    for c in &rep.claims {
        out += &format!(
            "\n  {:<36} {:<9} claimed {} computed {}",
            c.name,
            format!("{:?}", c.verdict).to_lowercase(),
            c.claimed,
            c.computed
        );
    }
    for f in &rep.flags {
        out += &format!("\n  flag: {f}");
    }
    for n in &rep.notes {
        out += &format!("\n  note: {n}");
    }
    out
}

fn verify(
    what: VerifyKind,
    d: usize,
    r: usize,
    n: Option<usize>,
    seed: u64,
    trials: usize,
) -> Result<Outcome> {
    let n = n.unwrap_or(2 * r * d + 2);
    let mut rep = match what {
        VerifyKind::Theorem => {
            let rep = verify_theorem(d, r, seed, trials).map_err(|e| anyhow!("--d/--r: {e}"))?;
            let mut text = format!(
                "theorem d = {d}, r = {r}: {}\n  G1: {} vertices, {} edges\n  G2: {} vertices, {} edges",
                if rep.passed { "passed" } else { "failed" },
                rep.g1.order,
                rep.g1.edge_count,
                rep.g2.order,
                rep.g2.edge_count
            );
            for c in &rep.claims {
                text += &format!(
                    "\n  {:<36} {:<9} claimed {} computed {}",
                    c.name,
                    format!("{:?}", c.verdict).to_lowercase(),
                    c.claimed,
                    c.computed
                );
            }
            for note in &rep.notes {
                text += &format!("\n  note: {note}");
            }
            text += &format!("\n  seed {seed}");
            let passed = rep.passed;
            return Ok(Outcome::new(&rep, text, passed));
        }
        VerifyKind::Neighborhoods => verify_neighborhood_lemma(d, r, n),
        VerifyKind::Circuit => verify_circuit(d, n),
        VerifyKind::Connectivity => verify_connectivity(d, n),
    }
    .map_err(|e| anyhow!("--d/--r/--n: {e}"))?;
    rep.seed = Some(seed);
    let text = report_text(&rep) + &format!("\n  seed {seed}");
    let passed = rep.passed;
    Ok(Outcome::new(&rep, text, passed))
}
