use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use causal_screen::experiments::{
    bench_run, connectome_run, ingest_connectome, summarize, write_csv, BenchConfig, ConnectomeSpec, CorpusConfig,
};
use causal_screen::hawkes::{
    causal_graph, simulate, simulate_intervened, stationarity_check, HawkesModel, Intervention, SimulationOptions,
};
use causal_screen::screening::{run, AlgorithmId, PairOrder, ScreeningOptions};
use causal_screen::separation::{brute_force_mu_separated_capped, mu_separated, GraphOracle, SeparationQuery};
use causal_screen::Dmg;

#[derive(Parser)]
#[command(name = "causal-screen", version, about = "Causal screening for dynamical systems")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Learn a parent graph from the separation oracle of a known graph.
    Learn(LearnArgs),
    /// Simulate a linear Hawkes process.
    Simulate(SimulateArgs),
    /// Benchmark the learners on random graphs.
    Bench(BenchArgs),
    /// Learn subsampled connectome subnetworks.
    Connectome(ConnectomeArgs),
    /// Answer one mu-separation query.
    Musep(MusepArgs),
}

#[derive(clap::Args)]
struct LearnArgs {
    /// Graph JSON with `nodes`, `directed` and `bidirected`.
    #[arg(long)]
    graph: PathBuf,
    /// Observed labels, comma separated, or `@file`. Default: all nodes.
    #[arg(long)]
    observed: Option<String>,
    #[arg(long, default_value = "cs")]
    algo: AlgorithmId,
    /// `lex` or `random(SEED)`.
    #[arg(long, default_value = "lex")]
    order: PairOrder,
    /// Repeat the parent step until nothing changes.
    #[arg(long)]
    fixpoint: bool,
    #[arg(long)]
    out_dot: Option<PathBuf>,
    #[arg(long)]
    out_json: Option<PathBuf>,
    #[arg(long)]
    emit_certificates: bool,
    #[arg(long)]
    emit_trace: bool,
    /// Write every oracle query as `A;B;C;answer`.
    #[arg(long)]
    query_log: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SimulateArgs {
    /// Model JSON `{"mu": [...], "kernels": [[{"a": .., "b": ..}, ..], ..], "T": ..}`.
    #[arg(long)]
    model: PathBuf,
    /// `node@t1,t2,...`: fix the node's events to these times.
    #[arg(long)]
    intervene: Option<String>,
    /// Event CSV `node,time`; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the model's causal graph as JSON.
    #[arg(long)]
    out_graph: Option<PathBuf>,
    /// Simulate even if the model is not stationary.
    #[arg(long)]
    force: bool,
    #[arg(long, default_value_t = causal_screen::hawkes::DEFAULT_EVENT_CAP)]
    event_cap: usize,
}

#[derive(clap::Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 5)]
    n: usize,
    #[arg(long, default_value_t = 500)]
    replicates: usize,
    /// Directed-edge probabilities to sweep.
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.4,0.6,0.8")]
    p_dir: Vec<f64>,
    /// Bidirected-edge probabilities to sweep.
    #[arg(long, value_delimiter = ',', default_value = "0.2")]
    p_bi: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "cs,csapc,csap,ca")]
    algos: Vec<AlgorithmId>,
    /// Fraction of nodes hidden from the learners.
    #[arg(long, default_value_t = 0.0)]
    latent_fraction: f64,
    #[arg(long, default_value = "lex")]
    order: PairOrder,
    /// Record wall-clock milliseconds (makes output run-dependent).
    #[arg(long)]
    timing: bool,
    /// Per-run metrics; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-cell means.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ConnectomeArgs {
    /// CSV `pre,post,count,type` with type `chem` or `gap`.
    #[arg(long)]
    input: PathBuf,
    /// Keep connections with more synapses than this.
    #[arg(long, default_value_t = 4)]
    threshold: u32,
    /// Neurons per sampled subnetwork.
    #[arg(long, default_value_t = 75)]
    m: usize,
    /// Sampling weight exponent on `1 + degree`.
    #[arg(long, default_value_t = 1.0)]
    weight: f64,
    #[arg(long, default_value_t = 10)]
    replicates: usize,
    #[arg(long, default_value_t = 15)]
    top_k: usize,
    #[arg(long, default_value = "cs")]
    algo: AlgorithmId,
    /// Write the ingested graph as JSON.
    #[arg(long)]
    out_graph: Option<PathBuf>,
    /// Per-replicate rows; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct MusepArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Source labels, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    a: Vec<String>,
    /// Target labels, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    b: Vec<String>,
    /// Conditioning labels, comma separated.
    #[arg(long, value_delimiter = ',')]
    c: Vec<String>,
    /// Also check by walk enumeration (small graphs only).
    #[arg(long)]
    brute_force: bool,
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Err(e) = try_main() {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn try_main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    match &cli.command {
        Command::Learn(a) => learn(&cli, a),
        Command::Simulate(a) => simulate_cmd(&cli, a),
        Command::Bench(a) => bench(&cli, a),
        Command::Connectome(a) => connectome(&cli, a),
        Command::Musep(a) => musep(&cli, a),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graph(path: &Path) -> Result<Dmg> {
    Dmg::from_json_str(&read(path)?).with_context(|| format!("parsing graph {}", path.display()))
}

/// Writes to `path`, or to stdout when absent.
fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn json_bytes<T: serde::Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn table<T: serde::Serialize>(format: Format, rows: &[T]) -> Result<Vec<u8>> {
    match format {
        Format::Json => json_bytes(&rows),
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(rows, &mut buf)?;
            Ok(buf)
        }
    }
}

fn labels_arg(spec: &str) -> Result<Vec<String>> {
    let text = match spec.strip_prefix('@') {
        Some(file) => read(Path::new(file))?,
        None => spec.to_owned(),
    };
    Ok(text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(str::to_owned)
        .collect())
}

fn learn(cli: &Cli, a: &LearnArgs) -> Result<()> {
    let truth = load_graph(&a.graph)?;
    let observed = match &a.observed {
        Some(spec) => truth.resolve_labels(&labels_arg(spec)?)?,
        None => truth.all_nodes(),
    };
    let mut oracle = GraphOracle::new(truth, &observed)?;
    if a.query_log.is_some() {
        oracle = oracle.with_log();
    }
    let options = ScreeningOptions { order: a.order, parent_fixpoint: a.fixpoint };
    let result = run(a.algo, &oracle, options)?;
    let report = json_bytes(&result.to_json(a.emit_certificates, a.emit_trace))?;
    if let Some(p) = &a.out_json {
        emit(Some(p), &report)?;
    }
    if let Some(p) = &a.out_dot {
        emit(Some(p), result.graph.to_dot().as_bytes())?;
    }
    if let Some(p) = &a.query_log {
        let mut buf = Vec::new();
        oracle.write_log_csv(&mut buf)?;
        emit(Some(p), &buf)?;
    }
    match cli.format {
        Format::Json => emit(None, &report),
        Format::Csv => {
            let l = result.graph.labels();
            let mut out = String::from("tail,head\n");
            for (t, h) in result.graph.directed_edges() {
                out.push_str(&format!("{},{}\n", l[t], l[h]));
            }
            emit(None, out.as_bytes())?;
            eprintln!("{}: {} edges, {} oracle calls", a.algo, result.graph.directed_count(), result.oracle_calls);
            Ok(())
        }
    }
}

fn parse_intervention(spec: &str, m: &HawkesModel) -> Result<Intervention> {
    let Some((node, times)) = spec.split_once('@') else {
        bail!("intervention `{spec}` is not of the form node@t1,t2,...");
    };
    let node = m.node_by_label(node.trim()).or_else(|e| node.trim().parse::<usize>().map_err(|_| e))?;
    let times = times
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|t| t.trim().parse::<f64>().with_context(|| format!("bad time `{t}`")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Intervention::new(node, times))
}

fn simulate_cmd(cli: &Cli, a: &SimulateArgs) -> Result<()> {
    let m = HawkesModel::from_json_str(&read(&a.model)?).with_context(|| format!("parsing model {}", a.model.display()))?;
    let s = stationarity_check(&m);
    eprintln!("spectral radius {:.6} ({})", s.spectral_radius, if s.stationary { "stationary" } else { "not stationary" });
    let opts = SimulationOptions { force: a.force, event_cap: a.event_cap };
    let h = match &a.intervene {
        Some(spec) => simulate_intervened(&m, &parse_intervention(spec, &m)?, cli.seed, opts)?,
        None => simulate(&m, cli.seed, opts)?,
    };
    if let Some(p) = &a.out_graph {
        emit(Some(p), causal_graph(&m).to_json_string().as_bytes())?;
    }
    let labels = m.labels();
    let bytes = match cli.format {
        Format::Csv => {
            let mut buf = Vec::new();
            h.write_csv(&labels, &mut buf)?;
            buf
        }
        Format::Json => {
            let events: Vec<_> = h.merged().into_iter().map(|(v, t)| serde_json::json!({"node": labels[v], "time": t})).collect();
            json_bytes(&events)?
        }
    };
    emit(a.out.as_deref(), &bytes)?;
    eprintln!("{} events", h.total());
    Ok(())
}

/// Sweep cell `k` gets its own seed so that cells use unrelated graphs.
fn cell_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_add((k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn bench(cli: &Cli, a: &BenchArgs) -> Result<()> {
    let mut rows = Vec::new();
    let cells = a.p_dir.iter().flat_map(|&d| a.p_bi.iter().map(move |&b| (d, b)));
    for (k, (p_dir, p_bi)) in cells.enumerate() {
        let corpus = CorpusConfig { n: a.n, p_dir, p_bi, count: a.replicates, seed: cell_seed(cli.seed, k) };
        let cfg = BenchConfig {
            corpus,
            algorithms: a.algos.clone(),
            latent_fraction: a.latent_fraction,
            options: ScreeningOptions { order: a.order, parent_fixpoint: false },
            timing: a.timing,
        };
        rows.extend(bench_run(&cfg)?.rows);
    }
    let summary = summarize(&rows);
    emit(a.out.as_deref(), &table(cli.format, &rows)?)?;
    if let Some(p) = &a.summary {
        emit(Some(p), &table(cli.format, &summary)?)?;
    }
    for s in &summary {
        eprintln!(
            "{:>6} p_dir={} p_bi={}: mean excess {:.3}, mean calls {:.2}",
            s.algo, s.p_dir, s.p_bi, s.mean_excess, s.mean_calls
        );
    }
    Ok(())
}

fn connectome(cli: &Cli, a: &ConnectomeArgs) -> Result<()> {
    let file = fs::File::open(&a.input).with_context(|| format!("opening {}", a.input.display()))?;
    let g = ingest_connectome(file, a.threshold)?;
    eprintln!(
        "{} neurons, {} directed, {} bidirected edges",
        g.node_count(),
        g.directed_count(),
        g.bidirected_count()
    );
    if let Some(p) = &a.out_graph {
        emit(Some(p), g.to_json_string().as_bytes())?;
    }
    let spec = ConnectomeSpec {
        threshold: a.threshold,
        m: a.m,
        weight_exponent: a.weight,
        replicates: a.replicates,
        top_k: a.top_k,
        algorithm: a.algo,
        seed: cli.seed,
    };
    let rows = connectome_run(&g, &spec)?;
    emit(a.out.as_deref(), &table(cli.format, &rows)?)?;
    if !rows.is_empty() {
        let k = rows.len() as f64;
        let mean = |f: fn(&causal_screen::experiments::ConnectomeRow) -> f64| rows.iter().map(f).sum::<f64>() / k;
        eprintln!(
            "mean edges {:.1}, excess {:.1}, spearman in {:.3} out {:.3}, top-{} in {:.1} out {:.1}",
            mean(|r| r.output_edges as f64),
            mean(|r| r.excess as f64),
            mean(|r| r.spearman_in),
            mean(|r| r.spearman_out),
            a.top_k,
            mean(|r| r.top_in as f64),
            mean(|r| r.top_out as f64),
        );
    }
    Ok(())
}

fn musep(cli: &Cli, a: &MusepArgs) -> Result<()> {
    let g = load_graph(&a.graph)?;
    let q = SeparationQuery::new(g.resolve_labels(&a.a)?, g.resolve_labels(&a.b)?, g.resolve_labels(&a.c)?);
    let separated = mu_separated(&g, &q)?;
    let brute = if a.brute_force {
        Some(brute_force_mu_separated_capped(&g, &q, g.node_count())?)
    } else {
        None
    };
    if brute.is_some_and(|b| b != separated) {
        bail!("state search and walk enumeration disagree");
    }
    match cli.format {
        Format::Json => emit(
            None,
            &json_bytes(&serde_json::json!({
                "a": a.a, "b": a.b, "c": a.c, "separated": separated,
            }))?,
        ),
        Format::Csv => emit(None, format!("{}\n", if separated { "separated" } else { "connected" }).as_bytes()),
    }
}
