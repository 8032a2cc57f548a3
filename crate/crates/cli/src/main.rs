use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qutrit_toffoli::sim::BasisRunner;
use qutrit_toffoli::synth::{synth_cnx, synth_cnz};
use qutrit_toffoli::topology::min_height_tree;
use qutrit_toffoli::verify::{verify_circuit, DEFAULT_TOLERANCE};
use qutrit_toffoli::{Circuit, CouplingMap};

/// Ancilla-free multi-controlled Z / X synthesis on qutrit coupling maps.
#[derive(Parser)]
#[command(name = "qutrit-toffoli", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a multi-controlled gate and write the circuit file.
    Synth(SynthArgs),
    /// Check a circuit file against the ideal truth table.
    Verify(VerifyArgs),
    /// Print gate counts and depth of a circuit file.
    Stats {
        #[arg(long)]
        circuit: PathBuf,
    },
    /// Write the chosen spanning tree as a DOT digraph.
    ExportTree {
        #[command(flatten)]
        select: Selection,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Selection {
    /// Coupling-map JSON file.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    topology: Option<PathBuf>,
    /// Built-in map: `aspen-like`, `path-N` or `star-N`.
    #[arg(long)]
    preset: Option<String>,
    /// `all` or a comma-separated list of qutrit indices.
    #[arg(long, default_value = "all")]
    nodes: String,
    /// `auto` (minimum height) or a qutrit index.
    #[arg(long, default_value = "auto")]
    root: String,
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    select: Selection,
    #[arg(long, value_enum, default_value = "cnz")]
    gate: GateKind,
    /// Qutrit flipped by `cnx`.
    #[arg(long)]
    target: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum GateKind {
    Cnz,
    Cnx,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Dump the basis-state trace of the all-ones input to stderr.
    #[arg(long)]
    trace: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Worker threads for the input sweep.
    #[arg(long)]
    jobs: Option<usize>,
}

/// Failure of a command, mapped to the process exit code.
enum Failure {
    Usage(String),
    Verification,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Res<T> = Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Res<T> {
    Err(Failure::Usage(msg.into()))
}

fn read(path: &Path, flag: &str) -> Res<String> {
    fs::read_to_string(path).or_else(|e| usage(format!("{flag}: cannot read {}: {e}", path.display())))
}

fn write(path: &Path, flag: &str, text: &str) -> Res<()> {
    fs::write(path, text).or_else(|e| usage(format!("{flag}: cannot write {}: {e}", path.display())))
}

fn preset(name: &str) -> Res<CouplingMap> {
    let sized = |prefix: &str| {
        name.strip_prefix(prefix)
            .map(|k| k.parse::<usize>().ok().filter(|&k| k >= 1))
    };
    if name == "aspen-like" {
        Ok(CouplingMap::aspen_like())
    } else if let Some(k) = sized("path-") {
        k.map(CouplingMap::path)
            .map_or_else(|| usage(format!("--preset: bad size in `{name}`")), Ok)
    } else if let Some(k) = sized("star-") {
        k.map(CouplingMap::star)
            .map_or_else(|| usage(format!("--preset: bad size in `{name}`")), Ok)
    } else {
        usage(format!(
            "--preset: unknown preset `{name}` (aspen-like, path-N, star-N)"
        ))
    }
}

fn load_map(sel: &Selection) -> Res<CouplingMap> {
    match (&sel.topology, &sel.preset) {
        (Some(path), _) => {
            CouplingMap::from_json(&read(path, "--topology")?).or_else(|e| usage(format!("--topology: {e}")))
        }
        (None, Some(name)) => preset(name),
        (None, None) => usage("one of --topology or --preset is required"),
    }
}

fn parse_nodes(arg: &str, map: &CouplingMap) -> Res<Vec<usize>> {
    if arg == "all" {
        return Ok((0..map.n()).collect());
    }
    arg.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .or_else(|_| usage(format!("--nodes: `{s}` is not a qutrit index")))
        })
        .collect()
}

fn parse_root(arg: &str) -> Res<Option<usize>> {
    match arg {
        "auto" => Ok(None),
        s => s
            .parse()
            .map(Some)
            .or_else(|_| usage(format!("--root: `{s}` is neither auto nor an index"))),
    }
}

fn select_tree(sel: &Selection) -> Res<(CouplingMap, qutrit_toffoli::RootedTree)> {
    let map = load_map(sel)?;
    let nodes = parse_nodes(&sel.nodes, &map)?;
    let root = parse_root(&sel.root)?;
    let tree = min_height_tree(&map, &nodes, root).or_else(|e| usage(format!("--nodes: {e}")))?;
    Ok((map, tree))
}

fn stats_line(c: &Circuit) -> String {
    let s = c.stats();
    format!(
        "N={} two-qutrit={} iswap={} cz={} depth={} height={}",
        c.n, s.two_qutrit_count, s.iswap_count, s.cz_count, s.depth_layers, s.tree_height
    )
}

fn synth(args: SynthArgs) -> Res<()> {
    let (map, tree) = select_tree(&args.select)?;
    let circuit = match (args.gate, args.target) {
        (GateKind::Cnz, None) => synth_cnz(&tree, &map)?,
        (GateKind::Cnz, Some(_)) => return usage("--target: only valid with --gate cnx"),
        (GateKind::Cnx, Some(t)) => synth_cnx(&tree, &map, t).or_else(|e| usage(format!("--target: {e}")))?,
        (GateKind::Cnx, None) => return usage("--target: required with --gate cnx"),
    };
    write(&args.out, "--out", &circuit.to_json())?;
    println!("{}", stats_line(&circuit));
    Ok(())
}

fn load_circuit(path: &Path) -> Res<Circuit> {
    Circuit::from_json(&read(path, "--circuit")?).or_else(|e| usage(format!("--circuit: {e}")))
}

fn verify(args: VerifyArgs) -> Res<()> {
    if args.tolerance.is_nan() || args.tolerance <= 0.0 {
        return usage("--tolerance: must be positive");
    }
    if let Some(jobs) = args.jobs {
        if jobs == 0 {
            return usage("--jobs: must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global()?;
    }
    let circuit = load_circuit(&args.circuit)?;
    if args.trace {
        let runner = BasisRunner::new(&circuit);
        if runner.is_permutation_circuit() {
            let ones = (0..circuit.n).fold(0u64, |acc, _| acc * 3 + 1);
            let (_, trace) = runner.run_traced(ones)?;
            eprintln!("# op, gate, targets, in, out");
            trace.iter().for_each(|ev| eprintln!("{ev}"));
        } else {
            eprintln!("# no basis trace: circuit creates superpositions");
        }
    }
    let report = verify_circuit(&circuit, args.tolerance);
    match &args.report {
        Some(path) => write(path, "--report", &report.to_json())?,
        None => print!("{}", report.to_json()),
    }
    if report.phase_table_ok {
        eprintln!(
            "PASS {} inputs, max error {:.1e}",
            report.inputs_checked, report.max_amplitude_error
        );
        Ok(())
    } else {
        eprintln!("FAIL {} violation(s)", report.violations.len());
        for v in report.violations.iter().take(10) {
            eprintln!(
                "  input {} expected {} got {} (error {:.3e}, leakage {:.3e})",
                v.input, v.expected, v.got, v.error, v.leakage
            );
        }
        Err(Failure::Verification)
    }
}

fn run(cli: Cli) -> Res<()> {
    match cli.command {
        Command::Synth(args) => synth(args),
        Command::Verify(args) => verify(args),
        Command::Stats { circuit } => {
            let c = load_circuit(&circuit)?;
            println!("{} native-iswap={}", stats_line(&c), c.stats().native_iswap_equivalent);
            Ok(())
        }
        Command::ExportTree { select, out } => {
            let (_, tree) = select_tree(&select)?;
            match out {
                Some(path) => write(&path, "--out", &tree.to_dot()),
                None => {
                    print!("{}", tree.to_dot());
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
