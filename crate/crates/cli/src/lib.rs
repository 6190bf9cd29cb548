//! Command-line front end for `qrgraph`.
//!
//! Every subcommand validates its inputs, runs one library operation and
//! renders the result once, as text, JSON or CSV. JSON documents carry a
//! `schema` field and echo the full run configuration.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use qrgraph::cut::{self, CutOptions};
use qrgraph::graph::{count_subgraphs, parse_graph, t_inj};
use qrgraph::graphon::{self, box_integral, box_integral_symmetrized, t_density};
use qrgraph::hf::{self, HfOptions, TwoTypeSearch};
use qrgraph::qr::{self, HereditaryMode, HereditaryTest, Sampler, SubsetSize};
use qrgraph::{BoxSpec, Graph, PatternGraph, StepKernel, VertexConstraint, VertexSet};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "qrgraph", version, about = "Quasi-random graph and step-graphon computations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Emit a JSON document.
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV (reports and convergence tables).
    #[arg(long)]
    pub csv: bool,
    /// Write the output to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<String>,
}

impl OutputArgs {
    fn format(&self) -> Format {
        match (self.json, self.csv) {
            (true, _) => Format::Json,
            (_, true) => Format::Csv,
            _ => Format::Text,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count labelled copies of a pattern in a graph.
    Count(CountArgs),
    /// Homomorphism density of a pattern in a kernel or graph.
    Density(DensityArgs),
    /// Box integral of the pattern functional over fractional part sets.
    Boxint(BoxintArgs),
    /// Cut norm of a kernel, or of the difference of two kernels.
    Cutnorm(CutnormArgs),
    /// Permutation upper bound on the cut distance of two graphs.
    Cutdist(CutdistArgs),
    /// Deviation statistic of a quasi-randomness property.
    Qr(QrArgs),
    /// Hereditary induced-forcing check of a pattern.
    Hf(HfArgs),
    /// Search for non-constant two-type solutions of a pattern functional.
    Twotype(TwotypeArgs),
    /// Degree moments against star homomorphism densities.
    Degree(DegreeArgs),
    /// Generate a seeded random graph.
    Generate(GenerateArgs),
    /// Density convergence table for a sequence of graphs.
    Converge(ConvergeArgs),
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(format!("{x} is not in [0, 1]"))
    }
}

fn open_unit_interval(s: &str) -> Result<f64, String> {
    let x = unit_interval(s)?;
    if x > 0.0 && x < 1.0 {
        Ok(x)
    } else {
        Err(format!("{x} is not in (0, 1)"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{x} must be positive"))
    }
}

fn vertex_list(s: &str) -> Result<VertexSet, String> {
    let vertices = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| format!("`{t}` is not a vertex index")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VertexSet::new(vertices))
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// Host graph (edge-list file).
    #[arg(long)]
    pub graph: String,
    /// Pattern file or built-in name (K3, P3, C4, S3, E2, ...).
    #[arg(long)]
    pub pattern: String,
    /// Count induced copies.
    #[arg(long)]
    pub induced: bool,
    /// Restrict every pattern vertex to this comma-separated vertex set.
    #[arg(long, value_parser = vertex_list, conflicts_with = "set")]
    pub subset: Option<VertexSet>,
    /// Per-vertex constraint: give once per pattern vertex, in order.
    #[arg(long, value_parser = vertex_list)]
    pub set: Vec<VertexSet>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long)]
    pub pattern: String,
    /// Kernel JSON file.
    #[arg(long, required_unless_present = "graph", conflicts_with = "graph")]
    pub kernel: Option<String>,
    /// Graph file; its step kernel is used, and the injective density is reported too.
    #[arg(long)]
    pub graph: Option<String>,
    #[arg(long)]
    pub induced: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BoxintArgs {
    #[arg(long)]
    pub pattern: String,
    #[arg(long)]
    pub kernel: String,
    /// JSON file: one membership vector per pattern vertex, `[[a_11, ...], ...]`.
    #[arg(long)]
    pub boxes: String,
    #[arg(long)]
    pub induced: bool,
    /// Integrate the functional averaged over pattern relabellings.
    #[arg(long)]
    pub symmetrized: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CutnormArgs {
    #[arg(long)]
    pub kernel: String,
    /// Subtract this kernel (same part weights) first.
    #[arg(long)]
    pub minus: Option<String>,
    /// Largest part count solved by exact enumeration.
    #[arg(long, default_value_t = cut::DEFAULT_EXACT_THRESHOLD)]
    pub exact_threshold: usize,
    #[arg(long, default_value_t = cut::DEFAULT_RESTARTS)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CutdistArgs {
    #[arg(long)]
    pub graph: String,
    #[arg(long)]
    pub graph2: String,
    /// Local-search restarts for graphs on more than 8 vertices.
    #[arg(long, default_value_t = 8)]
    pub budget: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PropertyArg {
    Global,
    HereditarySingle,
    HereditaryMulti,
    HereditaryDisjoint,
    Cut,
    Regularity,
    DegreeMoment,
}

#[derive(Debug, Args)]
pub struct QrArgs {
    #[arg(long)]
    pub graph: String,
    #[arg(long, value_enum)]
    pub property: PropertyArg,
    /// Target edge density.
    #[arg(long, value_parser = unit_interval, required_unless_present = "kmax")]
    pub p: Option<f64>,
    /// Pattern(s); repeat for the global property.
    #[arg(long)]
    pub pattern: Vec<String>,
    /// Fixed set size fraction, sets of size floor(gamma n).
    #[arg(long, value_parser = open_unit_interval)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub induced: bool,
    #[arg(long, default_value_t = qr::DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest k for the degree-moment property.
    #[arg(long)]
    pub kmax: Option<u32>,
    /// Permit gamma = 1/f for disjoint fixed-size sets.
    #[arg(long)]
    pub allow_boundary_gamma: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct HfArgs {
    #[arg(long)]
    pub pattern: String,
    #[arg(long, value_parser = open_unit_interval)]
    pub p: f64,
    #[arg(long, value_parser = positive, default_value_t = hf::DEFAULT_TOLERANCE)]
    pub tol: f64,
    #[arg(long, default_value_t = hf::DEFAULT_GRID)]
    pub grid: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TwotypeArgs {
    #[arg(long)]
    pub pattern: String,
    /// Target value alpha = beta_F(p) (induced) or p^e(F).
    #[arg(long, value_parser = unit_interval, required_unless_present = "alpha", conflicts_with = "alpha")]
    pub p: Option<f64>,
    /// Target value of the functional.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub induced: bool,
    #[arg(long)]
    pub symmetrized: bool,
    #[arg(long, value_parser = positive, default_value_t = hf::DEFAULT_TOLERANCE)]
    pub tol: f64,
    #[arg(long, default_value_t = hf::DEFAULT_GRID)]
    pub grid: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DegreeArgs {
    #[arg(long)]
    pub graph: String,
    #[arg(long, default_value_t = 4)]
    pub kmax: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Erdős–Rényi graph: vertex count and edge probability.
    #[arg(long, num_args = 2, value_names = ["N", "P"], required_unless_present = "kernel", conflicts_with = "kernel")]
    pub gnp: Vec<String>,
    /// Sample from this kernel instead.
    #[arg(long, requires = "n")]
    pub kernel: Option<String>,
    /// Vertex count for kernel sampling.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    /// Graph files; repeat for each graph.
    #[arg(long)]
    pub graph: Vec<String>,
    /// Also generate G(n, p) graphs of these sizes (comma-separated), seeded by --seed.
    #[arg(long, value_delimiter = ',', requires = "p")]
    pub gnp_sizes: Vec<usize>,
    /// Target kernel file.
    #[arg(long, conflicts_with = "p")]
    pub kernel: Option<String>,
    /// Constant target density.
    #[arg(long, value_parser = unit_interval)]
    pub p: Option<f64>,
    #[arg(long, required = true)]
    pub pattern: Vec<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Failure of a run: usage errors exit with 2, runtime errors with 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => m,
        }
    }
}

fn usage(arg: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{arg}: {reason}"))
}

fn runtime(arg: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Runtime(format!("{arg}: {reason}"))
}

type CliResult<T> = Result<T, CliError>;

fn read(arg: &str, path: &str) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| runtime(arg, format!("cannot read `{path}`: {e}")))
}

fn load_graph(arg: &str, path: &str) -> CliResult<Graph> {
    parse_graph(&read(arg, path)?).map_err(|e| runtime(arg, format!("`{path}`: {e}")))
}

fn load_kernel(arg: &str, path: &str) -> CliResult<StepKernel> {
    StepKernel::from_json(&read(arg, path)?).map_err(|e| runtime(arg, format!("`{path}`: {e}")))
}

/// A readable file is parsed as an edge list; anything else must be a
/// built-in name.
fn load_pattern(arg: &str, spec: &str) -> CliResult<PatternGraph> {
    if Path::new(spec).is_file() {
        return PatternGraph::parse(&read(arg, spec)?).map_err(|e| runtime(arg, format!("`{spec}`: {e}")));
    }
    PatternGraph::builtin(spec).map_err(|e| usage(arg, format!("`{spec}` is neither a file nor a built-in pattern ({e})")))
}

/// Echo of everything that determined the run.
#[derive(Debug, Default, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "serde_json::Map::is_empty")]
    pub inputs: serde_json::Map<String, Value>,
    #[serde(skip_serializing_if = "serde_json::Map::is_empty")]
    pub parameters: serde_json::Map<String, Value>,
}

impl RunConfig {
    fn new(command: &'static str, output: &OutputArgs) -> Self {
        Self {
            command,
            format: Some(output.format()),
            ..Self::default()
        }
    }

    fn input(mut self, key: &str, value: impl Serialize) -> Self {
        self.inputs.insert(key.into(), serde_json::to_value(value).expect("serializable"));
        self
    }

    fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters.insert(key.into(), serde_json::to_value(value).expect("serializable"));
        self
    }
}

/// Rendered output of one run.
struct Rendered {
    text: String,
    csv: Option<String>,
    result: Value,
}

impl Rendered {
    fn new(text: String, result: impl Serialize) -> Self {
        Self {
            text,
            csv: None,
            result: serde_json::to_value(result).expect("serializable"),
        }
    }

    fn csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }
}

/// Rejected parameter values are usage errors; everything else is a runtime failure.
fn lib_err(arg: &str) -> impl Fn(qrgraph::Error) -> CliError + '_ {
    move |e| match e {
        qrgraph::Error::InvalidParameter { .. } | qrgraph::Error::PatternTooLarge { .. } => usage(arg, e),
        _ => runtime(arg, e),
    }
}

#[derive(Serialize)]
struct Document<'a> {
    schema: String,
    config: &'a RunConfig,
    result: &'a Value,
}

/// Parses `argv` (program name first) and runs the command, returning the
/// text to emit. Output goes to `--out` when given, in which case the
/// returned string is empty.
pub fn run<I, T>(argv: I) -> CliResult<String>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => match e.kind() {
            clap::error::ErrorKind::DisplayHelp
            | clap::error::ErrorKind::DisplayVersion
            | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => return Ok(e.render().to_string()),
            _ => {
                let rendered = e.render().to_string();
                let first = rendered.lines().next().unwrap_or("usage error");
                return Err(CliError::Usage(first.trim_start_matches("error: ").to_string()));
            }
        },
    };
    let (config, output, rendered) = dispatch(&cli.command)?;
    let body = match output.format() {
        Format::Text => rendered.text,
        Format::Json => {
            let doc = Document {
                schema: format!("qrgraph.{}/{SCHEMA_VERSION}", config.command),
                config: &config,
                result: &rendered.result,
            };
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
        Format::Csv => rendered
            .csv
            .ok_or_else(|| usage("--csv", format!("`{}` has no CSV form", config.command)))?,
    };
    match &output.out {
        Some(path) => {
            write_atomically(path, &body)?;
            Ok(String::new())
        }
        None => Ok(body),
    }
}

fn write_atomically(path: &str, body: &str) -> CliResult<()> {
    let target = Path::new(path);
    let name = target.file_name().ok_or_else(|| usage("--out", format!("`{path}` is not a file path")))?;
    let tmp = target.with_file_name(format!(".{}.tmp", name.to_string_lossy()));
    fs::write(&tmp, body).map_err(|e| runtime("--out", format!("cannot write `{path}`: {e}")))?;
    fs::rename(&tmp, target).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        runtime("--out", format!("cannot write `{path}`: {e}"))
    })
}

fn dispatch(command: &Command) -> CliResult<(RunConfig, &OutputArgs, Rendered)> {
    Ok(match command {
        Command::Count(a) => (count_config(a), &a.output, run_count(a)?),
        Command::Density(a) => (
            RunConfig::new("density", &a.output)
                .input("pattern", &a.pattern)
                .input("kernel", &a.kernel)
                .input("graph", &a.graph)
                .param("induced", a.induced),
            &a.output,
            run_density(a)?,
        ),
        Command::Boxint(a) => (
            RunConfig::new("boxint", &a.output)
                .input("pattern", &a.pattern)
                .input("kernel", &a.kernel)
                .input("boxes", &a.boxes)
                .param("induced", a.induced)
                .param("symmetrized", a.symmetrized),
            &a.output,
            run_boxint(a)?,
        ),
        Command::Cutnorm(a) => (
            RunConfig::new("cutnorm", &a.output)
                .input("kernel", &a.kernel)
                .input("minus", &a.minus)
                .param("exact_threshold", a.exact_threshold)
                .param("restarts", a.restarts)
                .param("seed", a.seed),
            &a.output,
            run_cutnorm(a)?,
        ),
        Command::Cutdist(a) => (
            RunConfig::new("cutdist", &a.output)
                .input("graph", &a.graph)
                .input("graph2", &a.graph2)
                .param("budget", a.budget)
                .param("seed", a.seed),
            &a.output,
            run_cutdist(a)?,
        ),
        Command::Qr(a) => (qr_config(a), &a.output, run_qr(a)?),
        Command::Hf(a) => (
            RunConfig::new("hf", &a.output)
                .input("pattern", &a.pattern)
                .param("p", a.p)
                .param("tol", a.tol)
                .param("grid", a.grid),
            &a.output,
            run_hf(a)?,
        ),
        Command::Twotype(a) => (
            RunConfig::new("twotype", &a.output)
                .input("pattern", &a.pattern)
                .param("p", a.p)
                .param("alpha", a.alpha)
                .param("induced", a.induced)
                .param("symmetrized", a.symmetrized)
                .param("tol", a.tol)
                .param("grid", a.grid)
                .param("seed", a.seed),
            &a.output,
            run_twotype(a)?,
        ),
        Command::Degree(a) => (
            RunConfig::new("degree", &a.output).input("graph", &a.graph).param("kmax", a.kmax),
            &a.output,
            run_degree(a)?,
        ),
        Command::Generate(a) => (
            RunConfig::new("generate", &a.output)
                .input("kernel", &a.kernel)
                .param("gnp", &a.gnp)
                .param("n", a.n)
                .param("seed", a.seed),
            &a.output,
            run_generate(a)?,
        ),
        Command::Converge(a) => (
            RunConfig::new("converge", &a.output)
                .input("graphs", &a.graph)
                .input("kernel", &a.kernel)
                .input("patterns", &a.pattern)
                .param("gnp_sizes", &a.gnp_sizes)
                .param("p", a.p)
                .param("seed", a.seed),
            &a.output,
            run_converge(a)?,
        ),
    })
}

fn count_config(a: &CountArgs) -> RunConfig {
    RunConfig::new("count", &a.output)
        .input("graph", &a.graph)
        .input("pattern", &a.pattern)
        .param("induced", a.induced)
        .param("subset", &a.subset)
        .param("sets", &a.set)
}

fn run_count(a: &CountArgs) -> CliResult<Rendered> {
    let g = load_graph("--graph", &a.graph)?;
    let f = load_pattern("--pattern", &a.pattern)?;
    let constraint = match (&a.subset, a.set.is_empty()) {
        (Some(u), _) => VertexConstraint::Single(u.clone()),
        (None, true) => VertexConstraint::None,
        (None, false) => {
            if a.set.len() != f.f() {
                return Err(usage("--set", format!("given {} times, the pattern has {} vertices", a.set.len(), f.f())));
            }
            VertexConstraint::PerVertex(a.set.clone())
        }
    };
    let arg = if a.set.is_empty() { "--subset" } else { "--set" };
    let n = count_subgraphs(&f, &g, &constraint, a.induced).map_err(lib_err(arg))?;
    Ok(Rendered::new(format!("{n}\n"), json!({ "count": n, "pattern": f })))
}

fn run_density(a: &DensityArgs) -> CliResult<Rendered> {
    let f = load_pattern("--pattern", &a.pattern)?;
    let (w, g) = match (&a.kernel, &a.graph) {
        (Some(k), _) => (load_kernel("--kernel", k)?, None),
        (None, Some(path)) => {
            let g = load_graph("--graph", path)?;
            (StepKernel::from_graph(&g).map_err(lib_err("--graph"))?, Some(g))
        }
        (None, None) => return Err(usage("--kernel", "one of --kernel or --graph is required")),
    };
    let arg = if a.kernel.is_some() { "--kernel" } else { "--graph" };
    let t = t_density(&f, &w, a.induced).map_err(lib_err(arg))?;
    let injective = match &g {
        Some(g) => Some(t_inj(&f, g, a.induced).map_err(lib_err("--graph"))?),
        None => None,
    };
    let mut text = format!("{t}\n");
    if let Some(ti) = injective {
        writeln!(text, "injective: {ti}").expect("string write");
    }
    Ok(Rendered::new(text, json!({ "density": t, "injective_density": injective, "pattern": f })))
}

fn run_boxint(a: &BoxintArgs) -> CliResult<Rendered> {
    let f = load_pattern("--pattern", &a.pattern)?;
    let w = load_kernel("--kernel", &a.kernel)?;
    let raw = read("--boxes", &a.boxes)?;
    let memberships: Vec<Vec<f64>> = serde_json::from_str(&raw)
        .or_else(|_| serde_json::from_str::<BoxSpec>(&raw).map(|b| b.memberships))
        .map_err(|e| runtime("--boxes", format!("`{}`: {e}", a.boxes)))?;
    let boxes = BoxSpec::new(memberships).map_err(lib_err("--boxes"))?;
    let value = if a.symmetrized {
        box_integral_symmetrized(&f, &w, &boxes, a.induced)
    } else {
        box_integral(&f, &w, &boxes, a.induced)
    }
    .map_err(lib_err("--boxes"))?;
    let measures: Vec<f64> = (0..boxes.memberships.len()).map(|i| boxes.measure(i, &w)).collect();
    Ok(Rendered::new(format!("{value}\n"), json!({ "value": value, "measures": measures })))
}

fn cut_text(r: &qrgraph::CutResult) -> String {
    let mut text = format!("{}\n", r.value);
    writeln!(text, "exact: {}", r.exact).expect("string write");
    writeln!(text, "S: {:?}", r.witness_s).expect("string write");
    writeln!(text, "T: {:?}", r.witness_t).expect("string write");
    if let Some(perm) = &r.permutation {
        writeln!(text, "permutation: {perm:?}").expect("string write");
    }
    if let Some(note) = &r.note {
        writeln!(text, "note: {note}").expect("string write");
    }
    text
}

fn run_cutnorm(a: &CutnormArgs) -> CliResult<Rendered> {
    let mut w = load_kernel("--kernel", &a.kernel)?;
    if let Some(path) = &a.minus {
        let other = load_kernel("--minus", path)?;
        w = cut::kernel_difference(&w, &other).map_err(lib_err("--minus"))?;
    }
    let r = cut::cut_norm_with(
        &w,
        &CutOptions {
            exact_threshold: a.exact_threshold,
            restarts: a.restarts,
            seed: a.seed,
        },
    );
    Ok(Rendered::new(cut_text(&r), r))
}

fn run_cutdist(a: &CutdistArgs) -> CliResult<Rendered> {
    let g = load_graph("--graph", &a.graph)?;
    let h = load_graph("--graph2", &a.graph2)?;
    let r = cut::cut_distance_graphs(&g, &h, a.budget, a.seed).map_err(lib_err("--graph2"))?;
    Ok(Rendered::new(cut_text(&r), r))
}

fn qr_config(a: &QrArgs) -> RunConfig {
    RunConfig::new("qr", &a.output)
        .input("graph", &a.graph)
        .input("patterns", &a.pattern)
        .param("property", format!("{:?}", a.property).to_lowercase())
        .param("p", a.p)
        .param("gamma", a.gamma)
        .param("induced", a.induced)
        .param("samples", a.samples)
        .param("seed", a.seed)
        .param("kmax", a.kmax)
        .param("allow_boundary_gamma", a.allow_boundary_gamma)
}

fn report_text(r: &qr::DeviationReport) -> String {
    let mut text = format!("{}\n", r.max_dev);
    let w = &mut text;
    writeln!(w, "property: {}", r.property).expect("string write");
    if let Some(f) = &r.pattern {
        writeln!(w, "pattern: {f}").expect("string write");
    }
    writeln!(w, "samples: {} (exhaustive: {})", r.samples, r.exhaustive).expect("string write");
    for (i, s) in r.witness.iter().enumerate() {
        writeln!(w, "witness {}: {:?}", i + 1, s.as_slice()).expect("string write");
    }
    for e in &r.entries {
        writeln!(w, "{}: {}", e.label, e.value).expect("string write");
    }
    if let Some(note) = &r.annotation {
        writeln!(w, "note: {note}").expect("string write");
    }
    text
}

fn run_qr(a: &QrArgs) -> CliResult<Rendered> {
    let g = load_graph("--graph", &a.graph)?;
    let need_p = || a.p.ok_or_else(|| usage("--p", "required for this property"));
    let sampler = Sampler {
        samples: a.samples,
        seed: a.seed,
    };
    let size = a.gamma.map_or(SubsetSize::All, SubsetSize::Fixed);
    let one_pattern = || -> CliResult<PatternGraph> {
        match a.pattern.as_slice() {
            [single] => load_pattern("--pattern", single),
            [] => Err(usage("--pattern", "required for this property")),
            _ => Err(usage("--pattern", "give exactly one pattern for this property")),
        }
    };
    let report = match a.property {
        PropertyArg::Global => {
            if a.pattern.is_empty() {
                return Err(usage("--pattern", "at least one pattern is required"));
            }
            let patterns = a.pattern.iter().map(|p| load_pattern("--pattern", p)).collect::<CliResult<Vec<_>>>()?;
            qr::dev_global(&g, need_p()?, &patterns).map_err(lib_err("--pattern"))?
        }
        PropertyArg::HereditarySingle | PropertyArg::HereditaryMulti | PropertyArg::HereditaryDisjoint => {
            let mode = match a.property {
                PropertyArg::HereditarySingle => HereditaryMode::Single,
                PropertyArg::HereditaryMulti => HereditaryMode::Multi,
                _ => HereditaryMode::Disjoint,
            };
            let f = one_pattern()?;
            let test = HereditaryTest::new(mode)
                .size(size)
                .induced(a.induced)
                .sampler(sampler)
                .allow_boundary_gamma(a.allow_boundary_gamma);
            qr::dev_hereditary(&g, &f, need_p()?, &test).map_err(lib_err("--gamma"))?
        }
        PropertyArg::Cut => qr::dev_cut(&g, need_p()?, size, sampler).map_err(lib_err("--graph"))?,
        PropertyArg::Regularity => qr::dev_regularity(&g, need_p()?).map_err(lib_err("--graph"))?,
        PropertyArg::DegreeMoment => {
            let kmax = a.kmax.ok_or_else(|| usage("--kmax", "required for degree-moment"))?;
            qr::degree_moment_check(&g, kmax).map_err(lib_err("--kmax"))?
        }
    };
    Ok(Rendered::new(report_text(&report), &report).csv(report.to_csv()))
}

fn run_hf(a: &HfArgs) -> CliResult<Rendered> {
    let f = load_pattern("--pattern", &a.pattern)?;
    let v = hf::hf_check_with(&f, a.p, &HfOptions { tol: a.tol, grid: a.grid }).map_err(lib_err("--pattern"))?;
    let status = serde_json::to_value(v.status).expect("serializable");
    let mut text = format!("{}\n", status.as_str().unwrap_or_default());
    writeln!(text, "p = {}, p_bar = {}", v.p, v.p_bar).expect("string write");
    for w in &v.witnesses {
        writeln!(text, "witness u = {} v = {} s = {} residual = {:e}", w.u, w.v, w.s, w.residual).expect("string write");
    }
    Ok(Rendered::new(text, &v))
}

fn run_twotype(a: &TwotypeArgs) -> CliResult<Rendered> {
    let f = load_pattern("--pattern", &a.pattern)?;
    let phi = hf::build_psi_polynomial(&f, a.induced, a.symmetrized).map_err(lib_err("--pattern"))?;
    let alpha = match (a.alpha, a.p) {
        (Some(alpha), _) => alpha,
        (None, Some(p)) if a.induced => hf::beta(&f, p),
        (None, Some(p)) => p.powi(f.edge_count() as i32),
        (None, None) => return Err(usage("--p", "one of --p or --alpha is required")),
    };
    let search = TwoTypeSearch::new(a.tol, a.grid, a.seed);
    let found = hf::find_two_type_solutions(&phi, alpha, &search);
    let mut text = if found.is_empty() { "none\n".to_string() } else { String::new() };
    for w in &found {
        writeln!(text, "u = {} v = {} s = {} residual = {:e}", w.u, w.v, w.s, w.residual).expect("string write");
    }
    Ok(Rendered::new(
        text,
        json!({ "alpha": alpha, "polynomial": phi, "solutions": found, "min_spread": search.min_spread }),
    ))
}

fn run_degree(a: &DegreeArgs) -> CliResult<Rendered> {
    let g = load_graph("--graph", &a.graph)?;
    let r = qr::degree_moment_check(&g, a.kmax).map_err(lib_err("--kmax"))?;
    Ok(Rendered::new(report_text(&r), &r).csv(r.to_csv()))
}

fn run_generate(a: &GenerateArgs) -> CliResult<Rendered> {
    let g = match &a.kernel {
        Some(path) => {
            let w = load_kernel("--kernel", path)?;
            let n = a.n.ok_or_else(|| usage("--n", "required with --kernel"))?;
            graphon::sample_graph(&w, n, a.seed).map_err(lib_err("--kernel"))?
        }
        None => {
            let [n, p] = a.gnp.as_slice() else {
                return Err(usage("--gnp", "expects N P"));
            };
            let n: usize = n.parse().map_err(|_| usage("--gnp", format!("`{n}` is not a vertex count")))?;
            let p = unit_interval(p).map_err(|e| usage("--gnp", e))?;
            Graph::gnp(n, p, a.seed)
        }
    };
    let edges: Vec<(usize, usize)> = g.edges().collect();
    Ok(Rendered::new(g.to_edge_list(), json!({ "n": g.n(), "edges": edges })))
}

fn run_converge(a: &ConvergeArgs) -> CliResult<Rendered> {
    let mut graphs = a.graph.iter().map(|p| load_graph("--graph", p)).collect::<CliResult<Vec<_>>>()?;
    if let Some(p) = a.p {
        graphs.extend(a.gnp_sizes.iter().map(|&n| Graph::gnp(n, p, a.seed)));
    }
    if graphs.is_empty() {
        return Err(usage("--graph", "give at least one graph or --gnp-sizes"));
    }
    let target = match (&a.kernel, a.p) {
        (Some(path), _) => load_kernel("--kernel", path)?,
        (None, Some(p)) => StepKernel::constant(p).map_err(lib_err("--p"))?,
        (None, None) => return Err(usage("--kernel", "one of --kernel or --p is required")),
    };
    let patterns = a.pattern.iter().map(|p| load_pattern("--pattern", p)).collect::<CliResult<Vec<_>>>()?;
    let table = qr::convergence_report(&graphs, &target, &patterns).map_err(lib_err("--graph"))?;
    let mut text = String::new();
    for r in &table.rows {
        writeln!(text, "{}\t{}\t{}", r.n, r.pattern, r.deviation).expect("string write");
    }
    Ok(Rendered::new(text, &table).csv(table.to_csv()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_parsers() {
        assert_eq!(unit_interval("0.25"), Ok(0.25));
        assert!(unit_interval("1.01").is_err());
        assert!(open_unit_interval("1").is_err());
        assert!(positive("0").is_err());
        assert_eq!(vertex_list("3, 1,2").unwrap().as_slice(), &[1, 2, 3]);
        assert!(vertex_list("1,x").is_err());
    }

    #[test]
    fn out_writes_file_and_returns_nothing() {
        let dir = std::env::temp_dir().join(format!("qrgraph-cli-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("g.txt");
        let body = run(["qrgraph", "generate", "--gnp", "5", "1", "--out", path.to_str().unwrap()]).unwrap();
        assert!(body.is_empty());
        assert_eq!(fs::read_to_string(&path).unwrap(), Graph::complete(5).to_edge_list());
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn csv_only_where_defined() {
        let err = run(["qrgraph", "hf", "--pattern", "K2", "--p", "0.5", "--csv"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.message().starts_with("--csv"));
    }
}
