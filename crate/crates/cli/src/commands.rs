use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use setlab_core::apps::{
    bfs_distance, distoracle_encode, rangemode_encode, threesum_encode, RangeModeDecider, ThreeSumSolver,
};
use setlab_core::bench::{build_structure, run_bench, to_csv, RunConfig, Structure};
use setlab_core::gen::{gen_heavy_tailed, gen_mixed_instance, gen_random_instance, random_distinct};
use setlab_core::instance::load_pairs;
use setlab_core::oracle::oracle_intersect;
use setlab_core::quadtree::{HashFamily, InnerBuilders, ThreeSumIndex, TsConfig};
use setlab_core::universe::{Alg1Builder, InnerBuilder, Mode, OracleBuilder, ReducedStructure, ReductionParams};
use setlab_core::{load_instance, save_instance, CostMeter, SetSystem};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("verification failed: {0}")]
    Mismatch(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            Self::Mismatch(_) => 1,
            Self::Io(_) => 2,
            Self::Config(_) => 3,
            Self::Other(_) => 4,
        }
    }
}

impl From<setlab_core::Error> for CliError {
    fn from(e: setlab_core::Error) -> Self {
        use setlab_core::Error as E;
        match e {
            E::Io(_) | E::Parse(_) | E::InvalidInstance(_) => Self::Io(e.to_string()),
            E::InvalidParameter(_) | E::BudgetTooSmall { .. } | E::IndexOutOfRange { .. } => {
                Self::Config(e.to_string())
            }
            _ => Self::Other(e.to_string()),
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "setlab",
    version,
    about = "Set intersection structures and fine-grained reductions"
)]
pub struct Cli {
    /// File of `key=value` lines; each becomes `--key value` and overrides the command line.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random instance file.
    Gen(GenArgs),
    /// Build a structure and report its size.
    Build(StructArgs),
    /// Answer a file of `i j` queries.
    Query(QueryArgs),
    /// Compare a structure against the oracle; exits 1 on any mismatch.
    Verify(VerifyArgs),
    /// Parameter sweep written as CSV.
    Bench(BenchArgs),
    /// Run one of the reductions.
    #[command(subcommand)]
    Reduce(ReduceCommand),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GenKind {
    Random,
    Mixed,
    Heavy,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct GenArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub u: u32,
    #[arg(long, value_enum, default_value = "random")]
    pub kind: GenKind,
    /// Target total size for `random`.
    #[arg(long)]
    pub n: Option<usize>,
    /// Largest set size for `mixed`.
    #[arg(long)]
    pub max_size: Option<usize>,
    /// Element popularity exponent for `heavy`.
    #[arg(long, default_value_t = 1.5)]
    pub skew: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct StructArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// alg1, alg2, alg3, hybrid or oracle.
    #[arg(long, default_value = "alg1")]
    pub structure: String,
    /// `r` for the algorithms, the word budget for the hybrid.
    #[arg(long, default_value_t = 1)]
    pub param: usize,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct QueryArgs {
    #[command(flatten)]
    pub structure: StructArgs,
    #[arg(long)]
    pub pairs: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub structure: StructArgs,
    /// Defaults to every ordered pair.
    #[arg(long)]
    pub pairs: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct BenchArgs {
    /// Instance file; a heavy-tailed instance is generated when absent.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub u: Option<u32>,
    #[arg(long)]
    pub skew: Option<f64>,
    /// Comma-separated structure names.
    #[arg(long)]
    pub structures: Option<String>,
    /// Comma-separated parameter values.
    #[arg(long)]
    pub params: Option<String>,
    #[arg(long)]
    pub queries: Option<usize>,
    /// Fill the `ms` column with wall time (breaks byte-identical replays).
    #[arg(long)]
    pub timing: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ReduceCommand {
    /// Bounded-universe reduction, checked against the oracle on all pairs.
    Universe(UniverseArgs),
    /// 3SUM-Indexing through hybrid quad trees on random arrays.
    Quadtree(QuadtreeArgs),
    /// Range-mode string plus query table.
    Rangemode(EncodeArgs),
    /// Bipartite graph edge list plus query table.
    Distoracle(EncodeArgs),
    /// 3SUM-Indexing arrays plus query table.
    Threesum(EncodeArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum InnerKind {
    Oracle,
    Alg1,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct UniverseArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub eps: f64,
    /// sd or si.
    #[arg(long, default_value = "sd")]
    pub mode: String,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value = "alg1")]
    pub inner: InnerKind,
    #[arg(long, default_value_t = 32)]
    pub max_rounds: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct QuadtreeArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub x: usize,
    #[arg(long)]
    pub eps: f64,
    /// One query sum per line.
    #[arg(long)]
    pub queries: PathBuf,
    /// Leaves answered by SetIntersection; queries report every pair.
    #[arg(long)]
    pub si: bool,
    /// mulmod or multshift.
    #[arg(long, default_value = "mulmod")]
    pub family: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct EncodeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Artifact file; the query table goes to `<out>.queries`.
    #[arg(long)]
    pub out: PathBuf,
    /// Also answer every pair in reporting form.
    #[arg(long)]
    pub report: bool,
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, text: &str) -> CliResult {
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult {
    match out {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn structure_kind(name: &str) -> CliResult<Structure> {
    name.parse()
        .map_err(|e: setlab_core::Error| CliError::Config(e.to_string()))
}

fn all_pairs(m: usize) -> Vec<(usize, usize)> {
    (1..=m).flat_map(|i| (1..=m).map(move |j| (i, j))).collect()
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Gen(a) => cmd_gen(&a),
        Command::Build(a) => cmd_build(&a),
        Command::Query(a) => cmd_query(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Bench(a) => cmd_bench(&a),
        Command::Reduce(r) => match r {
            ReduceCommand::Universe(a) => cmd_reduce_universe(&a),
            ReduceCommand::Quadtree(a) => cmd_reduce_quadtree(&a),
            ReduceCommand::Rangemode(a) => cmd_reduce_rangemode(&a),
            ReduceCommand::Distoracle(a) => cmd_reduce_distoracle(&a),
            ReduceCommand::Threesum(a) => cmd_reduce_threesum(&a),
        },
    }
}

fn cmd_gen(a: &GenArgs) -> CliResult {
    let sys = match a.kind {
        GenKind::Random => gen_random_instance(a.m, a.u, a.n.unwrap_or(a.m * 4), a.seed)?,
        GenKind::Mixed => gen_mixed_instance(a.m, a.u, a.max_size.unwrap_or(a.u as usize), a.seed)?,
        GenKind::Heavy => gen_heavy_tailed(a.m, a.u, a.skew, a.seed)?,
    };
    save_instance(&sys, &a.out)?;
    println!(
        "wrote {} (m={} u={} N={})",
        a.out.display(),
        sys.m(),
        sys.universe(),
        sys.total()
    );
    Ok(())
}

fn cmd_build(a: &StructArgs) -> CliResult {
    let sys = load_instance(&a.input)?;
    let index = build_structure(structure_kind(&a.structure)?, &sys, a.param)?;
    println!(
        "structure={} param={} m={} u={} N={} words={}",
        index.name(),
        a.param,
        sys.m(),
        sys.universe(),
        sys.total(),
        index.words()
    );
    Ok(())
}

fn cmd_query(a: &QueryArgs) -> CliResult {
    let sys = load_instance(&a.structure.input)?;
    let index = build_structure(structure_kind(&a.structure.structure)?, &sys, a.structure.param)?;
    let pairs = load_pairs(&a.pairs)?;
    let mut text = String::new();
    for (i, j) in pairs {
        let mut meter = CostMeter::default();
        let r = index.query(i, j, &mut meter)?;
        let _ = writeln!(text, "{i} {j}: {}", join(&r.elements));
    }
    emit(a.out.as_deref(), &text)
}

fn cmd_verify(a: &VerifyArgs) -> CliResult {
    let sys = load_instance(&a.structure.input)?;
    let index = build_structure(structure_kind(&a.structure.structure)?, &sys, a.structure.param)?;
    let pairs = match &a.pairs {
        Some(p) => load_pairs(p)?,
        None => all_pairs(sys.m()),
    };
    let mismatches = verify_against_oracle(&sys, &pairs, |i, j| {
        let mut meter = CostMeter::default();
        Ok(index.query(i, j, &mut meter)?.elements)
    })?;
    report_verification(index.name(), pairs.len(), &mismatches)
}

fn verify_against_oracle(
    sys: &SetSystem,
    pairs: &[(usize, usize)],
    mut answer: impl FnMut(usize, usize) -> CliResult<Vec<u32>>,
) -> CliResult<Vec<(usize, usize)>> {
    let mut bad = Vec::new();
    for &(i, j) in pairs {
        if answer(i, j)? != oracle_intersect(sys, i, j)?.elements {
            bad.push((i, j));
        }
    }
    Ok(bad)
}

fn report_verification(name: &str, total: usize, mismatches: &[(usize, usize)]) -> CliResult {
    if mismatches.is_empty() {
        println!("pass {name}: {total} queries match the oracle");
        Ok(())
    } else {
        for (i, j) in mismatches.iter().take(10) {
            eprintln!("mismatch at ({i}, {j})");
        }
        Err(CliError::Mismatch(format!(
            "{name}: {} of {total} queries differ",
            mismatches.len()
        )))
    }
}

fn cmd_bench(a: &BenchArgs) -> CliResult {
    let mut config = RunConfig::default();
    let mut set = |k: &str, v: Option<String>| -> CliResult {
        if let Some(v) = v {
            config.set(k, &v)?;
        }
        Ok(())
    };
    set("seed", a.seed.map(|v| v.to_string()))?;
    set("m", a.m.map(|v| v.to_string()))?;
    set("u", a.u.map(|v| v.to_string()))?;
    set("skew", a.skew.map(|v| v.to_string()))?;
    set("structures", a.structures.clone())?;
    set("params", a.params.clone())?;
    set("queries", a.queries.map(|v| v.to_string()))?;
    config.timing = a.timing;
    config.validate()?;
    let sys = match &a.input {
        Some(p) => load_instance(p)?,
        None => config.instance()?,
    };
    let records = run_bench(&sys, &config)?;
    emit(a.out.as_deref(), &to_csv(&records))
}

fn cmd_reduce_universe(a: &UniverseArgs) -> CliResult {
    let sys = load_instance(&a.input)?;
    let mode: Mode = a
        .mode
        .parse()
        .map_err(|e: setlab_core::Error| CliError::Config(e.to_string()))?;
    let params = ReductionParams {
        alpha: a.alpha,
        max_rounds: a.max_rounds,
        seed: a.seed,
        ..ReductionParams::new(sys.universe(), a.eps, mode)
    };
    let inner: Box<dyn InnerBuilder> = match a.inner {
        InnerKind::Oracle => Box::new(OracleBuilder),
        InnerKind::Alg1 => Box::new(Alg1Builder::default()),
    };
    let st = ReducedStructure::build(&sys, params, inner.as_ref())?;
    let mut text = format!("# d e k rounds inner_universe\n{}\n", st.summary());
    let mut mismatches = Vec::new();
    for (i, j) in all_pairs(sys.m()) {
        let mut meter = CostMeter::default();
        let answer = st.query(i, j, &mut meter)?;
        let truth = oracle_intersect(&sys, i, j)?;
        let ok = match &answer {
            setlab_core::universe::Answer::Disjointness(d) => *d == truth.disjoint(),
            setlab_core::universe::Answer::Intersection(r) => *r == truth,
        };
        if !ok {
            mismatches.push((i, j));
        }
        let shown = match answer {
            setlab_core::universe::Answer::Disjointness(d) => {
                if d {
                    "disjoint".to_string()
                } else {
                    "intersecting".to_string()
                }
            }
            setlab_core::universe::Answer::Intersection(r) => join(&r.elements),
        };
        let _ = writeln!(text, "{i} {j}: {shown}");
    }
    emit(a.out.as_deref(), &text)?;
    report_verification(&format!("reduced-{mode}"), sys.m() * sys.m(), &mismatches)
}

fn read_queries(path: &Path) -> CliResult<Vec<i64>> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    text.lines()
        .enumerate()
        .map(|(n, l)| (n, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(n, l)| {
            l.parse()
                .map_err(|_| CliError::Io(format!("{}:{}: bad query `{l}`", path.display(), n + 1)))
        })
        .collect()
}

fn cmd_reduce_quadtree(a: &QuadtreeArgs) -> CliResult {
    let family: HashFamily = a.family.parse()?;
    let bound = 4 * a.n as u64;
    let arr_a = random_distinct(a.n, bound, a.seed)?;
    let arr_b = random_distinct(a.n, bound, a.seed.wrapping_add(1))?;
    let config = TsConfig {
        family,
        si: a.si,
        seed: a.seed,
        ..TsConfig::new(a.x, a.eps)
    };
    let index = ThreeSumIndex::build(&arr_a, &arr_b, config, &InnerBuilders::default())?;
    let p = index.params();
    let mut text = format!(
        "# n={} X={} eps={} R={} implicit_levels={} leaf_len={} cap={} overflow={}\n",
        a.n,
        a.x,
        a.eps,
        p.r,
        p.implicit,
        p.leaf_len,
        p.cap,
        index.arrays().overflow_total()
    );
    text.push_str("# level depth z sets elements max_set_len set_len_bound n*sqrt(z) n*sqrt(X/z) n*R/sqrt(z)\n");
    for l in index.level_reports() {
        let _ = writeln!(
            text,
            "level {} {} {} {} {} {} {:.1} {:.1} {:.1}",
            l.depth,
            l.z,
            l.sets,
            l.elements,
            l.max_set_len,
            l.set_len_bound,
            l.elements_bound,
            l.analysis_elements,
            l.analysis_sets
        );
    }
    text.push_str("# z found sd_queries false_witnesses\n");
    for z in read_queries(&a.queries)? {
        let outcome = index.query(z, !a.si)?;
        let c = outcome.counters;
        let _ = writeln!(
            text,
            "{z} {} {} {}",
            u8::from(!outcome.pairs.is_empty()),
            c.sd_queries,
            c.false_witnesses
        );
        if a.si {
            let pairs: Vec<String> = outcome.pairs.iter().map(|(x, y)| format!("{x}+{y}")).collect();
            let _ = writeln!(text, "pairs {z}: {}", pairs.join(" "));
        }
    }
    emit(a.out.as_deref(), &text)
}

fn table_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".queries");
    PathBuf::from(s)
}

fn cmd_reduce_rangemode(a: &EncodeArgs) -> CliResult {
    let sys = load_instance(&a.input)?;
    let enc = rangemode_encode(&sys);
    let artifact: String = enc.str.iter().map(|x| format!("{x}\n")).collect();
    write_file(&a.out, &artifact)?;
    let decider = if a.report && !enc.str.is_empty() {
        Some(RangeModeDecider::build(&sys, None)?)
    } else {
        None
    };
    let mut table = String::from("# i j -> lo hi threshold\n");
    for (i, j) in all_pairs(sys.m()) {
        let ((lo, hi), threshold) = enc.query_range(i, j)?;
        let _ = write!(table, "{i} {j} -> {lo} {hi} {threshold}");
        if let Some(d) = &decider {
            let mut meter = CostMeter::default();
            let _ = write!(table, " : {}", join(&d.intersection(i, j, &mut meter)?));
        }
        table.push('\n');
    }
    write_file(&table_path(&a.out), &table)
}

fn cmd_reduce_distoracle(a: &EncodeArgs) -> CliResult {
    let sys = load_instance(&a.input)?;
    let enc = distoracle_encode(&sys);
    let mut artifact = format!(
        "# vertices={} edges={} avg_degree={:.3}\n",
        enc.vertices(),
        enc.edges,
        enc.average_degree()
    );
    for (i, x) in enc.edge_list() {
        let _ = writeln!(artifact, "v{i} u{x}");
    }
    write_file(&a.out, &artifact)?;
    let mut table = String::from("# i j -> source target threshold\n");
    for (i, j) in all_pairs(sys.m()).into_iter().filter(|(i, j)| i != j) {
        let _ = write!(table, "{i} {j} -> v{i} v{j} 2");
        if a.report {
            let dist = bfs_distance(&enc, i, j)?;
            let common: Vec<u32> = oracle_via_graph(&enc, i, j);
            let shown = dist.map_or("inf".to_string(), |d| d.to_string());
            let _ = write!(table, " : dist={shown} via {}", join(&common));
        }
        table.push('\n');
    }
    write_file(&table_path(&a.out), &table)
}

/// Element vertices adjacent to both set vertices.
fn oracle_via_graph(enc: &setlab_core::apps::BipartiteEncoding, i: usize, j: usize) -> Vec<u32> {
    let mut out: Vec<u32> = enc.adjacency[i - 1]
        .iter()
        .filter(|w| enc.adjacency[j - 1].contains(w))
        .map(|&w| (w - enc.m + 1) as u32)
        .collect();
    out.sort_unstable();
    out
}

fn cmd_reduce_threesum(a: &EncodeArgs) -> CliResult {
    let sys = load_instance(&a.input)?;
    let enc = threesum_encode(&sys)?;
    let mut artifact = format!("# w_m={} w_u={} width={}\nA\n", enc.w_m, enc.w_u, enc.measured_width());
    for v in &enc.a {
        let _ = writeln!(artifact, "{v}");
    }
    artifact.push_str("B\n");
    for v in &enc.b {
        let _ = writeln!(artifact, "{v}");
    }
    write_file(&a.out, &artifact)?;
    let solver = ThreeSumSolver::new(&enc);
    let mut table = String::from("# i j -> z\n");
    for (i, j) in all_pairs(sys.m()) {
        let z = enc.query_number(i, j)?;
        let _ = write!(table, "{i} {j} -> {z}");
        if a.report {
            let elements: Vec<u32> = solver.report(z).into_iter().map(|(x, _)| enc.decode_a(x).1).collect();
            let _ = write!(table, " : {}", join(&elements));
        }
        table.push('\n');
    }
    write_file(&table_path(&a.out), &table)
}
