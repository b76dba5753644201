use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use holoshadow::analysis::{ceff_continuous, fit_ceff, fit_ceff_with_intercept};
use holoshadow::cut::{cut_sweep, plr_large_d, CostMode};
use holoshadow::ising::SpinModel;
use holoshadow::tiling::{generate_tiling, TilingGraph};
use holoshadow::tree::{beta, crossover_kstar, crossover_numeric, crossover_table, plr_tree, plr_tree_exact, TreeSpec};
use holoshadow::{ModelParams, PlrResult, SupportMask};

/// Shadow-norm calculator for tree circuits and holographic tensor networks.
#[derive(Parser, Debug)]
#[command(name = "holoshadow", version)]
struct Cli {
    /// Omit the generation-time line from outputs.
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// Worker threads for sweeps (overrides HOLOSHADOW_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Decimal places for floating-point CSV and scalar output.
    #[arg(long, global = true, default_value_t = 10)]
    precision: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tree-circuit learning rates.
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Tiling graph generation.
    #[command(subcommand)]
    Tiling(TilingCmd),
    /// Minimal cuts.
    #[command(subcommand)]
    Cut(CutCmd),
    /// Exact Ising sums on small graphs.
    #[command(subcommand)]
    Ising(IsingCmd),
    /// Effective central charge fits.
    #[command(subcommand)]
    Fit(FitCmd),
    /// Poincaré-disk geometry.
    #[command(subcommand)]
    Geom(GeomCmd),
}

#[derive(Subcommand, Debug)]
enum TreeCmd {
    /// PLR of a Pauli on an N-qudit tree.
    Plr {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        n: usize,
        /// Comma-separated START:LEN intervals.
        #[arg(long)]
        support: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Q(d) and beta(d) for a list of dimensions.
    Table {
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,10,20")]
        d: Vec<u32>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Tree versus shallow-circuit squared norms of contiguous supports.
    Crossover {
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long, default_value_t = 1024)]
        k_max: u64,
        /// Add interpolated rows between powers of two.
        #[arg(long)]
        interpolate: bool,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand, Debug)]
enum TilingCmd {
    /// Generate a {p,q} tensor-network graph.
    Gen {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        layers: usize,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand, Debug)]
enum CutCmd {
    /// Minimal cuts of every contiguous boundary interval.
    Sweep {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "per-leg")]
        mode: CostMode,
        /// Only intervals made of whole boundary vertices.
        #[arg(long)]
        vertex_aligned: bool,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand, Debug)]
enum IsingCmd {
    /// Pinned-spin PLR (or d^-minC with --d inf).
    Plr {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        d: Dim,
        #[arg(long)]
        support: String,
        #[arg(long, default_value = "per-vertex")]
        mode: CostMode,
        #[command(flatten)]
        out: OutArg,
    },
    /// Entanglement feature of a set of boundary vertices.
    Ef {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        d: u32,
        /// Comma-separated vertex ids.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        region: Vec<usize>,
        #[arg(long, default_value = "per-vertex")]
        mode: CostMode,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand, Debug)]
enum FitCmd {
    /// Fit c_eff to a cut-sweep CSV.
    Ceff {
        #[arg(long)]
        csv: PathBuf,
        /// Boundary size; inferred from the sweep when omitted.
        #[arg(long = "N")]
        n: Option<usize>,
        /// Dimension label of the input (cut units for sweeps).
        #[arg(long, default_value = "inf")]
        d: Dim,
        /// Also fit a free intercept (diagnostic).
        #[arg(long)]
        intercept: bool,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand, Debug)]
enum GeomCmd {
    /// d_L / ln L for an arc of angle phi at radius rho.
    Ceff {
        #[arg(long = "R", default_value_t = 1.0)]
        r: f64,
        #[arg(long)]
        rho: f64,
        /// Angle; accepts numbers and forms like pi, pi/2, 2pi.
        #[arg(long, default_value = "pi")]
        phi: Angle,
    },
}

#[derive(Args, Debug)]
struct OutArg {
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy)]
enum Dim {
    Finite(u32),
    Inf,
}

impl FromStr for Dim {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "inf" {
            return Ok(Dim::Inf);
        }
        s.parse().map(Dim::Finite).map_err(|_| format!("expected an integer or inf, got {s:?}"))
    }
}

impl std::fmt::Display for Dim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Dim::Finite(d) => write!(f, "{d}"),
            Dim::Inf => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Angle(f64);

impl FromStr for Angle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("cannot parse angle {s:?}");
        let t = s.trim().replace('*', "");
        let Some(i) = t.find("pi") else {
            return t.parse().map(Angle).map_err(|_| bad());
        };
        let coef = match &t[..i] {
            "" => 1.0,
            c => c.parse::<f64>().map_err(|_| bad())?,
        };
        let div = match &t[i + 2..] {
            "" => 1.0,
            rest => rest.strip_prefix('/').and_then(|x| x.parse::<f64>().ok()).ok_or_else(bad)?,
        };
        Ok(Angle(coef * std::f64::consts::PI / div))
    }
}

/// `START:LEN[,START:LEN...]` on a ring of `n` sites.
fn parse_support(spec: &str, n: usize) -> Result<SupportMask> {
    let mut sites = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (s, l) = part.split_once(':').with_context(|| format!("support {part:?} is not START:LEN"))?;
        let start: usize = s.parse().with_context(|| format!("bad start in {part:?}"))?;
        let len: usize = l.parse().with_context(|| format!("bad length in {part:?}"))?;
        sites.extend(SupportMask::interval(n, start, len)?.sites().iter().copied());
    }
    Ok(SupportMask::new(n, sites)?)
}

fn single_interval(spec: &str, n: usize) -> Result<SupportMask> {
    if spec.contains(',') {
        bail!("only a single START:LEN interval is accepted here");
    }
    parse_support(spec, n)
}

struct Ctx {
    timestamp: bool,
    precision: usize,
}

impl Ctx {
    fn float(&self, x: f64) -> String {
        format!("{:.*}", self.precision, x)
    }

    fn open(&self, out: &OutArg) -> Result<Box<dyn Write>> {
        Ok(match &out.out {
            Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    fn header(&self, w: &mut dyn Write, config: &Value) -> Result<()> {
        writeln!(w, "# config: {config}")?;
        if self.timestamp {
            writeln!(w, "# generated_at: {}", unix_time())?;
        }
        Ok(())
    }

    fn write_csv(&self, out: &OutArg, config: &Value, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
        let mut w = self.open(out)?;
        self.header(&mut w, config)?;
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(header)?;
        for row in rows {
            csv.write_record(&row)?;
        }
        csv.flush()?;
        Ok(())
    }

    fn write_json(&self, out: &OutArg, config: Value, mut body: Map<String, Value>) -> Result<()> {
        body.insert("config".into(), config);
        if self.timestamp {
            body.insert("generated_at".into(), json!(unix_time()));
        }
        let mut w = self.open(out)?;
        serde_json::to_writer_pretty(&mut w, &Value::Object(body))?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }
}

fn unix_time() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn plr_body(p: &PlrResult) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("w".into(), json!(p.w));
    m.insert("shadow_norm_sq".into(), json!(p.shadow_norm_sq));
    m.insert("log_d_norm".into(), json!(p.log_d_norm));
    m
}

fn read_graph(path: &Path) -> Result<TilingGraph> {
    TilingGraph::read_json(path).with_context(|| format!("reading graph {}", path.display()))
}

// largest tree for which the exact rational rate is also reported
const EXACT_TREE_LIMIT: usize = 1024;

fn run(cli: Cli) -> Result<()> {
    let ctx = Ctx { timestamp: !cli.no_timestamp, precision: cli.precision };
    match cli.command {
        Command::Tree(TreeCmd::Plr { d, n, support, out }) => {
            let spec = TreeSpec::new(n, d)?;
            let mask = parse_support(&support, n)?;
            let mut body = plr_body(&plr_tree(&mask, &spec)?);
            if n <= EXACT_TREE_LIMIT {
                body.insert("w_exact".into(), json!(plr_tree_exact(&mask, &spec)?.to_string()));
            }
            ctx.write_json(&out, json!({"command": "tree plr", "d": d, "n": n, "support": support}), body)
        }
        Command::Tree(TreeCmd::Table { d, out }) => {
            let rows = d
                .iter()
                .map(|&d| {
                    let b = beta(d)?;
                    Ok(vec![d.to_string(), ctx.float(b.q), ctx.float(b.beta_norm)])
                })
                .collect::<Result<Vec<_>>>()?;
            ctx.write_csv(&out, &json!({"command": "tree table", "d": d}), &["d", "Q", "beta"], rows)
        }
        Command::Tree(TreeCmd::Crossover { d, k_max, interpolate, out }) => {
            let table = crossover_table(d, k_max, interpolate)?;
            let numeric = crossover_numeric(d, k_max)?;
            let closed = crossover_kstar(d).ok();
            let config = json!({
                "command": "tree crossover", "d": d, "k_max": k_max, "interpolate": interpolate,
                "kstar_closed_form": closed.map(|(lo, hi)| json!([lo, hi])),
                "crossover_numeric": numeric,
            });
            let rows = table.iter().map(|r| {
                vec![
                    r.k.to_string(),
                    ctx.float(r.ln_tree_norm),
                    ctx.float(r.ln_shallow_norm),
                    r.tree_better().to_string(),
                    r.interpolated.to_string(),
                ]
            });
            ctx.write_csv(&out, &config, &["k", "ln_tree_norm", "ln_shallow_norm", "tree_better", "interpolated"], rows)
        }
        Command::Tiling(TilingCmd::Gen { p, q, layers, out }) => {
            let g = generate_tiling(p, q, layers)?;
            let mut w = ctx.open(&out)?;
            writeln!(w, "{}", g.to_json())?;
            w.flush()?;
            Ok(())
        }
        Command::Cut(CutCmd::Sweep { graph, mode, vertex_aligned, out }) => {
            let g = read_graph(&graph)?;
            let rows = cut_sweep(&g, mode, vertex_aligned)?;
            let config = json!({
                "command": "cut sweep", "graph": graph.display().to_string(), "mode": mode.to_string(),
                "vertex_aligned": vertex_aligned, "N": g.n_legs(),
            });
            let rows = rows.iter().map(|r| {
                [r.start, r.k, r.bdry, r.bulk, r.min].iter().map(|x| x.to_string()).collect()
            });
            ctx.write_csv(&out, &config, &["start", "k", "bdryC", "bulkC", "minC"], rows)
        }
        Command::Ising(IsingCmd::Plr { graph, d, support, mode, out }) => {
            let g = read_graph(&graph)?;
            let mask = single_interval(&support, g.n_legs())?;
            let body = match d {
                Dim::Finite(d) => plr_body(&SpinModel::new(&g, ModelParams::new(d)?, mode)?.plr_exact(&mask)?),
                Dim::Inf => {
                    // only the exponent survives the limit; it does not depend on d
                    let p = plr_large_d(&g, &mask, 2, mode)?;
                    let mut m = plr_body(&p);
                    m.insert("w".into(), Value::Null);
                    m.insert("shadow_norm_sq".into(), Value::Null);
                    m
                }
            };
            let config = json!({
                "command": "ising plr", "graph": graph.display().to_string(), "d": d.to_string(),
                "support": support, "mode": mode.to_string(),
            });
            ctx.write_json(&out, config, body)
        }
        Command::Ising(IsingCmd::Ef { graph, d, region, mode, out }) => {
            let g = read_graph(&graph)?;
            let model = SpinModel::new(&g, ModelParams::new(d)?, mode)?;
            let ln_w = model.ln_entanglement_feature(&region)?;
            let mut body = Map::new();
            body.insert("ef".into(), json!(ln_w.exp()));
            body.insert("renyi_log_d".into(), json!(-ln_w / (d as f64).ln()));
            let config = json!({
                "command": "ising ef", "graph": graph.display().to_string(), "d": d, "region": region,
                "mode": mode.to_string(),
            });
            ctx.write_json(&out, config, body)
        }
        Command::Fit(FitCmd::Ceff { csv, n, d, intercept, out }) => {
            let points = read_sweep(&csv)?;
            let n = match n {
                Some(n) => n,
                None => points.iter().map(|p| p.0).max().context("empty sweep")? + 1,
            };
            let (fit, b) = if intercept {
                let (f, b) = fit_ceff_with_intercept(&points, n)?;
                (f, Some(b))
            } else {
                (fit_ceff(&points, n)?, None)
            };
            let Value::Object(mut body) = serde_json::to_value(fit)? else { unreachable!() };
            if let Some(b) = b {
                body.insert("intercept".into(), json!(b));
            }
            let config = json!({
                "command": "fit ceff", "csv": csv.display().to_string(), "N": n, "d": d.to_string(),
                "intercept": intercept, "units": "cut",
            });
            ctx.write_json(&out, config, body)
        }
        Command::Geom(GeomCmd::Ceff { r, rho, phi }) => {
            let c = ceff_continuous(rho, phi.0, r)?;
            println!("{}", ctx.float(c));
            Ok(())
        }
    }
}

/// `(k, log_d_norm)` pairs from a sweep CSV; the exponent is `minC` unless a
/// `log_d_norm` column is present.
fn read_sweep(path: &Path) -> Result<Vec<(usize, f64)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let headers = rdr.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let k_col = col("k").context("sweep has no k column")?;
    let y_col = col("log_d_norm").or_else(|| col("minC")).context("sweep has neither log_d_norm nor minC")?;
    let mut points = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let k: usize = rec[k_col].parse().with_context(|| format!("bad k {:?}", &rec[k_col]))?;
        let y: f64 = rec[y_col].parse().with_context(|| format!("bad value {:?}", &rec[y_col]))?;
        points.push((k, y));
    }
    Ok(points)
}

fn init_threads(cli_threads: Option<usize>) -> Result<()> {
    let n = match cli_threads {
        Some(n) => Some(n),
        None => match std::env::var("HOLOSHADOW_THREADS") {
            Ok(s) => Some(s.parse().with_context(|| format!("HOLOSHADOW_THREADS={s:?} is not a number"))?),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads(cli.threads).and_then(|()| run(cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
