use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use surfex::construction::{build_extremal_candidates, construct_ex, inner_graph, CANDIDATE_MAX_ORDER};
use surfex::embedding::{
    min_euler_genus, splice_into_face, trace_faces, verify_triangulation_facecounts, EmbeddingScheme, GenusLimits,
};
use surfex::extremal::{candidate_sweep, SweepConfig, SweepScope};
use surfex::graph::{graph6, DegreeSequence, Graph};
use surfex::numeric::round_sig;
use surfex::spectral::{bounds, spectral_radius};
use surfex::w3max::{max_w3_degseq, W3Budget};
use surfex::walks::{walk_compare, walk_counts, zhang_rho, JoinPart, WalkComparison, WalkMode};
use surfex::{Error, Result};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "surfex", version, about = "Extremal spectral graph theory on surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    run: RunConfig,
}

#[derive(Args, Clone)]
struct RunConfig {
    /// Orders, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    n: Vec<usize>,
    /// Euler genera, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    gamma: Vec<usize>,
    /// Relative residual for eigensolves and root finding.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to the machine's parallelism.
    #[arg(long, global = true, env = "SURFEX_THREADS")]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Report file; `construct` takes a directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct GraphInput {
    /// Input graph in graph6.
    #[arg(long)]
    graph6: Option<String>,
    /// File whose first line is a graph6 string.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build EX(n, γ) members and write graph6 plus the trace JSON.
    Construct,
    /// Spectral radius of a graph, or of construct_ex over the grid.
    Rho(GraphInput),
    /// Spectral radius against the two-sided bound over the grid.
    Bounds,
    /// Walk counts of a graph, or of the inner graph of construct_ex.
    Walks {
        #[command(flatten)]
        graph: GraphInput,
        #[arg(long, default_value_t = 10)]
        lmax: usize,
        /// Store counts divided by this scale per step instead of exactly.
        #[arg(long)]
        scaled: Option<f64>,
    },
    /// Spectral radius of a join from its characteristic equation.
    Zhang {
        /// Parts: a size for an independent set, or `g6:CODE` for a graph.
        #[arg(required = true)]
        parts: Vec<String>,
    },
    /// First walk length at which two graphs differ.
    Compare {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Defaults to 2n − 1, which decides equality.
        #[arg(long)]
        lmax: Option<usize>,
    },
    /// Minimum Euler genus by searching rotation systems.
    Genus {
        #[command(flatten)]
        graph: GraphInput,
        #[arg(long)]
        orientable: bool,
        #[arg(long, default_value_t = 1_000_000_000)]
        max_schemes: u64,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 20_000)]
        steps: usize,
    },
    /// Faces, genus and orientability of an embedding scheme file.
    VerifyEmbedding {
        scheme: PathBuf,
        /// Dominating pair `a,b` for the triangulation face counts.
        #[arg(long, value_delimiter = ',')]
        dominating: Option<Vec<usize>>,
    },
    /// Glue a plane scheme into a triangular face of a host scheme.
    Splice {
        #[arg(long)]
        host: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        face: Vec<usize>,
        #[arg(long)]
        inner: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        outer: Vec<usize>,
    },
    /// Chord-set sweep for the ρ-argmax under the K_{3,2γ+3} minor filter.
    Search {
        /// Use windows of this width instead of the default scope.
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        restarts: Option<usize>,
    },
    /// Largest w³ over realizations of a degree sequence.
    W3max {
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        /// Seconds after which no new restart begins.
        #[arg(long, default_value_t = 60)]
        time_limit: u64,
        /// Allow disconnected realizations.
        #[arg(long)]
        any: bool,
    },
    /// Construction, eigensolve, bounds and candidate comparison per grid point.
    Report,
}

/// Rows of named cells, written as CSV or JSON.
struct Table {
    command: &'static str,
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    fn new(command: &'static str, columns: &[&'static str]) -> Self {
        Table {
            command,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = String::from("schema_version");
                for c in &self.columns {
                    out.push(',');
                    out.push_str(c);
                }
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&SCHEMA_VERSION.to_string());
                    for cell in row {
                        out.push(',');
                        out.push_str(&csv_cell(cell));
                    }
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| Value::Object(self.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect()))
                    .collect();
                let doc = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": self.command,
                    "rows": rows,
                });
                serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
            }
        }
    }
}

fn csv_cell(v: &Value) -> String {
    let text = match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text
    }
}

fn num(x: f64) -> Value {
    json!(round_sig(x, 12))
}

fn grid(run: &RunConfig) -> Result<Vec<(usize, usize)>> {
    if run.n.is_empty() || run.gamma.is_empty() {
        return Err(Error::Domain("this command needs --n and --gamma".into()));
    }
    Ok(run.gamma.iter().flat_map(|&g| run.n.iter().map(move |&n| (n, g))).collect())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_graph(input: &GraphInput) -> Result<Option<Graph>> {
    match (&input.graph6, &input.input) {
        (Some(_), Some(_)) => Err(Error::Domain("give either --graph6 or --input".into())),
        (Some(code), None) => graph6::decode(code.trim()).map(Some),
        (None, Some(path)) => {
            let text = read(path)?;
            let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
            graph6::decode(line.trim()).map(Some)
        }
        (None, None) => Ok(None),
    }
}

fn load_scheme(path: &Path) -> Result<EmbeddingScheme> {
    EmbeddingScheme::from_json(&read(path)?)
}

fn comparison(c: &WalkComparison) -> (Value, Value, Value) {
    match *c {
        WalkComparison::Equal { conclusive } => (json!("equal"), Value::Null, json!(conclusive)),
        WalkComparison::FirstDiffers { k, sign } => (json!("differs"), json!(k), json!(sign)),
    }
}

fn construct(run: &RunConfig) -> Result<Table> {
    let dir = run.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut t = Table::new("construct", &["n", "gamma", "e", "graph6_file", "trace_file"]);
    for (n, gamma) in grid(run)? {
        let trace = construct_ex(n, gamma)?;
        trace.verify()?;
        let stem = format!("ex-n{n}-g{gamma}");
        let g6 = dir.join(format!("{stem}.g6"));
        let js = dir.join(format!("{stem}.json"));
        write(&g6, &(graph6::encode(&trace.graph) + "\n"))?;
        write(&js, &(trace.to_json()? + "\n"))?;
        t.push(vec![
            json!(n),
            json!(gamma),
            json!(trace.graph.size()),
            json!(g6.display().to_string()),
            json!(js.display().to_string()),
        ]);
    }
    Ok(t)
}

fn rho(run: &RunConfig, input: &GraphInput) -> Result<Table> {
    let cols = ["n", "gamma", "e", "rho", "residual", "matvecs"];
    let mut t = Table::new("rho", &cols);
    if let Some(g) = load_graph(input)? {
        let r = spectral_radius(&g, run.tol)?;
        t.push(vec![json!(g.order()), Value::Null, json!(g.size()), num(r.rho), num(r.residual), json!(r.iterations)]);
        return Ok(t);
    }
    for (n, gamma) in grid(run)? {
        let g = construct_ex(n, gamma)?.graph;
        let r = spectral_radius(&g, run.tol)?;
        t.push(vec![json!(n), json!(gamma), json!(g.size()), num(r.rho), num(r.residual), json!(r.iterations)]);
    }
    Ok(t)
}

fn bounds_sweep(run: &RunConfig) -> Result<Table> {
    let mut t = Table::new(
        "bounds",
        &["n", "gamma", "rho", "rho0", "lower", "upper", "ellingham_zha", "inside", "above_threshold"],
    );
    for (n, gamma) in grid(run)? {
        let b = bounds(n, gamma)?;
        let r = spectral_radius(&construct_ex(n, gamma)?.graph, run.tol)?.rho;
        t.push(vec![
            json!(n),
            json!(gamma),
            num(r),
            num(b.rho0),
            num(b.lower),
            num(b.upper),
            num(b.ellingham_zha),
            json!(b.lower < r && r < b.upper),
            json!(n as u128 >= b.n_threshold),
        ]);
    }
    Ok(t)
}

fn walks(run: &RunConfig, input: &GraphInput, lmax: usize, scaled: Option<f64>) -> Result<Table> {
    let mode = match scaled {
        Some(s) if s > 0.0 && s.is_finite() => WalkMode::Scaled(s),
        Some(s) => return Err(Error::Domain(format!("scale must be positive, got {s}"))),
        None => WalkMode::Exact,
    };
    let mut graphs: Vec<(Value, Value, Graph)> = Vec::new();
    match load_graph(input)? {
        Some(g) => graphs.push((Value::Null, Value::Null, g)),
        None => {
            for (n, gamma) in grid(run)? {
                let h = inner_graph(&construct_ex(n, gamma)?)?;
                graphs.push((json!(n), json!(gamma), h));
            }
        }
    }
    let mut t = Table::new("walks", &["n", "gamma", "length", "walks"]);
    for (n, gamma, g) in graphs {
        let p = walk_counts(&g, lmax, mode)?;
        for l in 1..=lmax {
            let w = match p.exact(l) {
                Some(x) => json!(x.to_string()),
                None => num(p.approx(l).unwrap_or(f64::NAN)),
            };
            t.push(vec![n.clone(), gamma.clone(), json!(l), w]);
        }
    }
    Ok(t)
}

fn zhang(run: &RunConfig, specs: &[String]) -> Result<Table> {
    let mut graphs: Vec<Option<Graph>> = Vec::new();
    let mut sizes = Vec::new();
    for s in specs {
        if let Some(code) = s.strip_prefix("g6:") {
            let g = graph6::decode(code)?;
            sizes.push(g.order());
            graphs.push(Some(g));
        } else {
            let k: usize = s
                .parse()
                .map_err(|_| Error::Domain(format!("part {s:?} is neither a size nor g6:CODE")))?;
            sizes.push(k);
            graphs.push(None);
        }
    }
    let parts: Vec<JoinPart> = sizes
        .iter()
        .zip(&graphs)
        .map(|(&k, g)| match g {
            Some(g) => JoinPart::with_graph(k, g),
            None => JoinPart::independent(k),
        })
        .collect();
    let s = zhang_rho(&parts, run.tol)?;
    let mut t = Table::new("zhang", &["order", "rho", "bracket_low", "bracket_high", "bisection_steps", "equation_error"]);
    t.push(vec![
        json!(sizes.iter().sum::<usize>()),
        num(s.rho),
        num(s.bracket.0),
        num(s.bracket.1),
        json!(s.bisection_steps),
        num(s.equation_error),
    ]);
    Ok(t)
}

fn compare(a: &str, b: &str, lmax: Option<usize>) -> Result<Table> {
    let (ga, gb) = (graph6::decode(a)?, graph6::decode(b)?);
    let l = lmax.unwrap_or((2 * ga.order()).saturating_sub(1).max(1));
    let (result, k, sign_or_conclusive) = comparison(&walk_compare(&ga, &gb, l)?);
    let mut t = Table::new("compare", &["n", "lmax", "result", "first_length", "sign_or_conclusive"]);
    t.push(vec![json!(ga.order()), json!(l), result, k, sign_or_conclusive]);
    Ok(t)
}

fn genus(input: &GraphInput, orientable: bool, limits: GenusLimits) -> Result<Table> {
    let g = load_graph(input)?.ok_or_else(|| Error::Domain("genus needs --graph6 or --input".into()))?;
    let r = min_euler_genus(&g, orientable, &limits)?;
    let mut t = Table::new("genus", &["n", "e", "euler_genus", "exact", "lower_bound", "examined", "scheme"]);
    t.push(vec![
        json!(g.order()),
        json!(g.size()),
        json!(r.genus),
        json!(r.exact),
        json!(r.lower_bound),
        json!(r.examined),
        json!(r.scheme.to_json()),
    ]);
    Ok(t)
}

fn verify_embedding(path: &Path, dominating: Option<&[usize]>) -> Result<Table> {
    let s = load_scheme(path)?;
    let f = trace_faces(&s)?;
    let mut t = Table::new(
        "verify-embedding",
        &["n", "e", "faces", "euler_genus", "orientable", "avoiding_faces", "expected_avoiding", "counts_hold"],
    );
    let (avoiding, expected, hold) = match dominating {
        Some(&[a, b]) => {
            let r = verify_triangulation_facecounts(&s, a, b)?;
            (json!(r.avoiding), json!(r.expected_avoiding), json!(r.all_hold()))
        }
        Some(other) => return Err(Error::Domain(format!("--dominating takes two vertices, got {other:?}"))),
        None => (Value::Null, Value::Null, Value::Null),
    };
    t.push(vec![
        json!(s.order()),
        json!(s.graph().size()),
        json!(f.f),
        json!(f.genus),
        json!(f.orientable),
        avoiding,
        expected,
        hold,
    ]);
    Ok(t)
}

/// Writes the spliced scheme to `--out` and reports on it, or prints the
/// scheme when there is no `--out`.
fn splice(run: &RunConfig, host: &Path, face: &[usize], inner: &Path, outer: &[usize]) -> Result<String> {
    let (&[a, b, c], &[x, y, z]) = (face, outer) else {
        return Err(Error::Domain("--face and --outer take three vertices each".into()));
    };
    let (h, i) = (load_scheme(host)?, load_scheme(inner)?);
    let s = splice_into_face(&h, [a, b, c], &i, [x, y, z])?;
    let text = s.to_json() + "\n";
    let Some(p) = &run.out else { return Ok(text) };
    write(p, &text)?;
    let f = trace_faces(&s)?;
    let mut t = Table::new("splice", &["n", "e", "euler_genus", "scheme_file"]);
    t.push(vec![json!(s.order()), json!(s.graph().size()), json!(f.genus), json!(p.display().to_string())]);
    Ok(t.render(run.format))
}

fn search(run: &RunConfig, window: Option<usize>, restarts: Option<usize>) -> Result<String> {
    let mut out = String::new();
    let mut docs = Vec::new();
    for (n, gamma) in grid(run)? {
        let mut cfg = SweepConfig::new(n, gamma, run.seed);
        if let Some(w) = window {
            cfg.scope = SweepScope::Windowed { width: w };
        }
        if let Some(r) = restarts {
            cfg.restarts = r;
        }
        let rep = candidate_sweep(&cfg)?;
        match run.format {
            Format::Csv => out.push_str(&rep.to_csv()),
            Format::Json => {
                let row = |i: Option<usize>| {
                    i.map(|i| {
                        let r = &rep.rows[i];
                        json!({"index": i, "graph6": r.graph6, "rho": round_sig(r.rho, 12), "chords": r.chords,
                               "balanced_clique": r.balanced_clique})
                    })
                };
                docs.push(json!({
                    "n": n,
                    "gamma": gamma,
                    "config": rep.config,
                    "threshold": round_sig(rep.threshold, 12),
                    "chord_sets_examined": rep.chord_sets_examined,
                    "chord_sets_kept": rep.chord_sets_kept,
                    "distinct_graphs": rep.rows.len(),
                    "argmax": row(rep.best),
                    "argmax_clean": row(rep.best_clean),
                    "confirms_balanced_clique": rep.confirms_balanced_clique(),
                }));
            }
        }
    }
    if run.format == Format::Json {
        let doc = json!({"schema_version": SCHEMA_VERSION, "command": "search", "rows": docs});
        out = serde_json::to_string_pretty(&doc)? + "\n";
    }
    Ok(out)
}

fn w3max(run: &RunConfig, degrees: Vec<usize>, restarts: usize, time_limit: u64, any: bool) -> Result<Table> {
    let pi = DegreeSequence::new(degrees)?;
    let budget = W3Budget {
        restarts,
        seed: run.seed,
        time_limit: Duration::from_secs(time_limit),
        connected: !any,
        ..W3Budget::default()
    };
    let r = max_w3_degseq(&pi, &budget)?;
    let mut t = Table::new("w3max", &["order", "w3", "exhaustive", "restarts_run", "witness"]);
    t.push(vec![
        json!(pi.len()),
        json!(r.w3),
        json!(r.exhaustive),
        json!(r.restarts_run),
        json!(graph6::encode(&r.witness)),
    ]);
    Ok(t)
}

fn report(run: &RunConfig) -> Result<Table> {
    let mut t = Table::new(
        "report",
        &[
            "n", "gamma", "e", "rho", "rho_candidate", "rho0", "lower", "upper", "inside",
            "candidate_vs_construction",
        ],
    );
    for (n, gamma) in grid(run)? {
        let trace = construct_ex(n, gamma)?;
        trace.verify()?;
        let r = spectral_radius(&trace.graph, run.tol)?.rho;
        let b = bounds(n, gamma)?;
        let (rc, cmp) = if (1..=2).contains(&gamma) && n >= gamma + 5 && n <= CANDIDATE_MAX_ORDER {
            let (c, _) = build_extremal_candidates(n, gamma)?;
            let rc = spectral_radius(&c, run.tol)?.rho;
            let hc = c.induced_subgraph(&(2..n).collect::<Vec<_>>())?;
            let he = inner_graph(&trace)?;
            let (res, _, sign) = comparison(&walk_compare(&hc, &he, 2 * (n - 2))?);
            let label = if res == "equal" { json!(0) } else { sign };
            (num(rc), label)
        } else {
            (Value::Null, Value::Null)
        };
        t.push(vec![
            json!(n),
            json!(gamma),
            json!(trace.graph.size()),
            num(r),
            rc,
            num(b.rho0),
            num(b.lower),
            num(b.upper),
            json!(b.lower < r && r < b.upper),
            cmp,
        ]);
    }
    Ok(t)
}

fn run(cli: Cli) -> Result<()> {
    let run = cli.run;
    if let Some(k) = run.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build_global()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
    }
    let table = match cli.command {
        Command::Construct => {
            let t = construct(&run)?;
            print!("{}", t.render(run.format));
            return Ok(());
        }
        Command::Rho(input) => rho(&run, &input)?,
        Command::Bounds => bounds_sweep(&run)?,
        Command::Walks { graph, lmax, scaled } => walks(&run, &graph, lmax, scaled)?,
        Command::Zhang { parts } => zhang(&run, &parts)?,
        Command::Compare { a, b, lmax } => compare(&a, &b, lmax)?,
        Command::Genus {
            graph,
            orientable,
            max_schemes,
            restarts,
            steps,
        } => {
            let limits = GenusLimits {
                max_schemes,
                restarts,
                steps,
                seed: run.seed,
            };
            genus(&graph, orientable, limits)?
        }
        Command::VerifyEmbedding { scheme, dominating } => verify_embedding(&scheme, dominating.as_deref())?,
        Command::Splice { host, face, inner, outer } => {
            print!("{}", splice(&run, &host, &face, &inner, &outer)?);
            return Ok(());
        }
        Command::Search { window, restarts } => {
            let text = search(&run, window, restarts)?;
            return emit(&run, &text);
        }
        Command::W3max {
            degrees,
            restarts,
            time_limit,
            any,
        } => w3max(&run, degrees, restarts, time_limit, any)?,
        Command::Report => report(&run)?,
    };
    emit(&run, &table.render(run.format))
}

fn emit(run: &RunConfig, text: &str) -> Result<()> {
    match &run.out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
