//! Command-line front end.
//!
//! Exit codes: 0 when every requested verdict holds, 1 when an inclusion or
//! convexity verdict fails, 2 on usage or configuration errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::catalog;
use crate::convexity::{
    check_coord_convex, check_h_convex_1d, check_joint_convex, CheckMode, ConvexityVerdict, HFunction, SamplingSpec,
};
use crate::error::{Error, Result};
use crate::family::DEFAULT_BASE_SEED;
use crate::function::{AnyFunction, FunctionSpec};
use crate::hh::{
    chain_k2, chain_k4_k3, chain_k5_k6, chain_mt1, chain_mt2, chain_mt3, chain_zhtm1, ChainId, ChainOptions,
    InclusionReport, PmnVariant,
};
use crate::integration::{
    id_integral_2d, integral_sum, integral_sum_1d, ir_integral_1d, PartitionSpec, QuadratureConfig, Rule, TagRule,
};
use crate::report::ReportDocument;
use crate::suite::{run_suite, SuiteName, SuiteReport};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser, Serialize)]
#[command(name = "ivhh", version, about = "Interval-valued integrals, convexity checks and Hermite–Hadamard inclusion chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Integrate an interval-valued function endpoint by endpoint.
    Integrate(IntegrateArgs),
    /// Sample a convexity inclusion and report violations.
    Convexity(ConvexityArgs),
    /// Evaluate an inclusion chain and judge each link.
    Check(CheckArgs),
    /// Run a canned suite.
    Suite(SuiteArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FunctionArgs {
    /// Catalog entry.
    #[arg(long, conflicts_with_all = ["lower", "upper"])]
    pub catalog: Option<String>,
    /// Lower endpoint expression.
    #[arg(long, requires_all = ["upper", "domain"])]
    pub lower: Option<String>,
    /// Upper endpoint expression.
    #[arg(long, requires = "lower")]
    pub upper: Option<String>,
    /// `a,b` for one variable or `a,b,c,d` for two.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub domain: Option<Vec<f64>>,
}

impl FunctionArgs {
    fn build(&self) -> Result<AnyFunction> {
        build_function(self.catalog.as_deref(), self.lower.as_deref(), self.upper.as_deref(), self.domain.as_deref(), "")
    }
}

/// The second function of a product chain.
#[derive(Debug, Clone, Args, Serialize)]
pub struct SecondFunctionArgs {
    #[arg(long = "g-catalog", conflicts_with_all = ["g_lower", "g_upper"])]
    pub g_catalog: Option<String>,
    #[arg(long = "g-lower", requires = "g_upper")]
    pub g_lower: Option<String>,
    #[arg(long = "g-upper", requires = "g_lower")]
    pub g_upper: Option<String>,
    /// Domain of G; defaults to the domain of F.
    #[arg(long = "g-domain", value_delimiter = ',', allow_hyphen_values = true)]
    pub g_domain: Option<Vec<f64>>,
}

fn build_function(
    name: Option<&str>,
    lower: Option<&str>,
    upper: Option<&str>,
    domain: Option<&[f64]>,
    prefix: &str,
) -> Result<AnyFunction> {
    match (name, lower, upper) {
        (Some(name), None, None) => catalog(name),
        (None, Some(lower), Some(upper)) => {
            let domain = domain.ok_or_else(|| Error::Config(format!("--{prefix}lower/--{prefix}upper need a domain")))?;
            FunctionSpec { lower: lower.into(), upper: upper.into(), domain: domain.to_vec() }.build()
        }
        _ => Err(Error::Config(format!("give --{prefix}catalog or both --{prefix}lower and --{prefix}upper"))),
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct QuadratureArgs {
    /// Quadrature nodes per axis.
    #[arg(long, default_value_t = 512)]
    pub nodes: usize,
    #[arg(long, value_enum, default_value_t = Rule::Simpson)]
    pub rule: Rule,
    /// Keep doubling the mesh until successive results agree to this distance.
    #[arg(long)]
    pub refine_until: Option<f64>,
}

impl QuadratureArgs {
    fn config(&self) -> Result<QuadratureConfig> {
        let cfg = QuadratureConfig { nodes_per_axis: self.nodes, rule: self.rule, refine_until: self.refine_until };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Human,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tags {
    Midpoint,
    Left,
    Right,
    Random,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IntegrateArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[command(flatten)]
    pub quadrature: QuadratureArgs,
    /// Compare against a tagged integral sum.
    #[arg(long)]
    pub oracle: bool,
    /// Cells per axis of the tagged partition.
    #[arg(long, default_value_t = 256)]
    pub mesh: usize,
    #[arg(long, value_enum, default_value_t = Tags::Midpoint)]
    pub tags: Tags,
    /// Largest accepted distance between the integral and the tagged sum.
    #[arg(long, default_value_t = 1e-4)]
    pub oracle_tol: f64,
    /// Seed for random tags.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Output::Human)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvexityMode {
    /// h-convexity of a one-variable function.
    H1d,
    /// Convexity on coordinates.
    Coord,
    /// Convexity on the rectangle as a whole.
    Joint,
}

impl ConvexityMode {
    fn name(self) -> &'static str {
        match self {
            ConvexityMode::H1d => "h1d",
            ConvexityMode::Coord => "coord",
            ConvexityMode::Joint => "joint",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ConvexityArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, value_enum, default_value_t = ConvexityMode::Coord)]
    pub mode: ConvexityMode,
    /// `t`, `pow:<s>` or `expr:<dsl>`.
    #[arg(long, default_value = "t")]
    pub h: String,
    /// Grid points per axis.
    #[arg(long, default_value_t = 17)]
    pub grid: usize,
    /// Random samples on top of the grid.
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Compare lower endpoints only; needs point-valued input.
    #[arg(long)]
    pub scalar: bool,
    #[arg(long, value_enum, default_value_t = Output::Human)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    pub chain: ChainId,
    #[command(flatten)]
    pub function: FunctionArgs,
    #[command(flatten)]
    pub second: SecondFunctionArgs,
    /// Use G = F.
    #[arg(long, conflicts_with_all = ["g_catalog", "g_lower"])]
    pub squared: bool,
    #[arg(long, value_enum, default_value_t = PmnVariant::FourCorner)]
    pub variant: PmnVariant,
    /// Link tolerance for every link, replacing the defaults.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Weight `h` (or `h₁` for F).
    #[arg(long, default_value = "t")]
    pub h: String,
    /// Weight `h₂` for G; defaults to `--h`.
    #[arg(long)]
    pub h2: Option<String>,
    #[command(flatten)]
    pub quadrature: QuadratureArgs,
    /// Compare lower endpoints only; needs point-valued input.
    #[arg(long)]
    pub scalar: bool,
    #[arg(long, value_enum, default_value_t = Output::Human)]
    pub output: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SuiteArgs {
    /// `paper-golden` or `properties`.
    pub name: String,
    /// Base seed of the property seed list.
    #[arg(long, default_value_t = DEFAULT_BASE_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Output::Human)]
    pub output: Output,
}

impl Command {
    fn output(&self) -> Output {
        match self {
            Command::Integrate(a) => a.output,
            Command::Convexity(a) => a.output,
            Command::Check(a) => a.output,
            Command::Suite(a) => a.output,
        }
    }
}

struct Outcome {
    results: Value,
    human: String,
    holds: bool,
}

fn to_json(v: impl Serialize) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Config(e.to_string()))
}

/// Parses `args` (program name first), runs the command and writes its
/// report to `out`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_HOLDS };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let start = Instant::now();
    let outcome = match execute(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let code = if outcome.holds { EXIT_HOLDS } else { EXIT_VIOLATION };
    let written = match cli.command.output() {
        Output::Human => {
            let verdict = if outcome.holds { "all verdicts hold" } else { "violation found" };
            write!(out, "{}verdict: {verdict}\n", outcome.human)
        }
        Output::Json => {
            let doc = ReportDocument::new(&cli, &outcome.results, outcome.holds).map(|mut d| {
                d.duration_ms = start.elapsed().as_millis() as u64;
                d
            });
            match doc.and_then(|d| d.to_json()) {
                Ok(text) => writeln!(out, "{text}"),
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_USAGE;
                }
            }
        }
    };
    if written.is_err() {
        return EXIT_USAGE;
    }
    code
}

fn execute(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Integrate(a) => integrate(a),
        Command::Convexity(a) => convexity(a),
        Command::Check(a) => check(a),
        Command::Suite(a) => suite(a),
    }
}

fn integrate(a: &IntegrateArgs) -> Result<Outcome> {
    let cfg = a.quadrature.config()?;
    let f = a.function.build()?;
    if a.oracle && a.mesh == 0 {
        return Err(Error::Config("--mesh must be at least 1".into()));
    }
    if !(a.oracle_tol > 0.0) {
        return Err(Error::Config(format!("--oracle-tol must be > 0, got {}", a.oracle_tol)));
    }
    let tag_rule = match a.tags {
        Tags::Midpoint => TagRule::Midpoint,
        Tags::Left => TagRule::Left,
        Tags::Right => TagRule::Right,
        Tags::Random => TagRule::Random(a.seed),
    };
    let (label, integral, measure, oracle) = match &f {
        AnyFunction::One(f) => {
            let integral = ir_integral_1d(f, &cfg)?;
            let sum = if a.oracle { Some((integral_sum_1d(f, a.mesh, tag_rule)?, f.domain().width() / a.mesh as f64)) } else { None };
            (f.label().to_string(), integral, f.domain().width(), sum)
        }
        AnyFunction::Two(f) => {
            let integral = id_integral_2d(f, &cfg)?;
            let sum = if a.oracle {
                let p = PartitionSpec::uniform(f.domain(), a.mesh, a.mesh, tag_rule)?;
                Some((integral_sum(f, &p)?, p.delta()))
            } else {
                None
            };
            (f.label().to_string(), integral, f.domain().area(), sum)
        }
    };
    let mean = integral.scale(1.0 / measure)?;
    let mut human = format!("integral of {label}\n  integral  {integral}\n  mean      {mean}\n");
    let mut results = json!({ "function": label, "integral": integral, "mean": mean, "quadrature": cfg });
    let mut holds = true;
    if let Some((sum, delta)) = oracle {
        let distance = sum.hausdorff(&integral);
        holds = distance < a.oracle_tol;
        let _ = writeln!(human, "  tagged sum {sum} (mesh {}, δ {delta:e}), distance {distance:e}", a.mesh);
        results["oracle"] = json!({
            "sum": sum, "mesh": a.mesh, "tags": a.tags, "seed": a.seed,
            "delta": delta, "distance": distance, "tolerance": a.oracle_tol, "holds": holds,
        });
    }
    Ok(Outcome { results, human, holds })
}

fn mode_of(scalar: bool) -> CheckMode {
    if scalar {
        CheckMode::Scalar
    } else {
        CheckMode::Interval
    }
}

fn convexity(a: &ConvexityArgs) -> Result<Outcome> {
    if !(a.tol > 0.0) {
        return Err(Error::Config(format!("--tol must be > 0, got {}", a.tol)));
    }
    let spec = SamplingSpec {
        points_per_axis: a.grid,
        random_samples: a.samples,
        seed: a.seed,
        tol: a.tol,
        mode: mode_of(a.scalar),
        ..Default::default()
    };
    let f = a.function.build()?;
    let (label, verdict, h) = match (a.mode, &f) {
        (ConvexityMode::H1d, AnyFunction::One(f)) => {
            let h = HFunction::parse(&a.h)?;
            (f.label().to_string(), check_h_convex_1d(f, &h, &spec)?, Some(h.label().to_string()))
        }
        (ConvexityMode::Coord, AnyFunction::Two(f)) => (f.label().to_string(), check_coord_convex(f, &spec)?, None),
        (ConvexityMode::Joint, AnyFunction::Two(f)) => (f.label().to_string(), check_joint_convex(f, &spec)?, None),
        (mode, f) => {
            let want = if mode == ConvexityMode::H1d { "one-variable" } else { "two-variable" };
            return Err(Error::Config(format!("--mode {} needs a {want} function, got a {} one", mode.name(), f.arity())));
        }
    };
    let sections_hold = verdict.sections.as_ref().map_or(true, |s| s.holds);
    let holds = verdict.holds && sections_hold;
    let mut human = format!("convexity ({}) of {label}\n  {}\n", a.mode.name(), verdict.summary());
    if let Some(s) = &verdict.sections {
        let _ = writeln!(human, "  sections: {} checked, {} failing", s.sections_checked, s.failing_sections.len());
    }
    write_witnesses(&mut human, &verdict);
    let results = json!({ "function": label, "h": h, "sampling": spec, "verdict": to_json(&verdict)? });
    Ok(Outcome { results, human, holds })
}

fn write_witnesses(human: &mut String, v: &ConvexityVerdict) {
    for w in v.witnesses.iter().take(3) {
        let _ = writeln!(human, "  witness {:?} at {:?}: {} ⊉ {} (defect {:e})", w.points, w.params, w.lhs, w.rhs, w.defect);
    }
}

fn check(a: &CheckArgs) -> Result<Outcome> {
    let opts = ChainOptions { quadrature: a.quadrature.config()?, tol: a.tol, mode: mode_of(a.scalar), variant: a.variant };
    let f = a.function.build()?;
    let g = if a.chain.is_product() {
        Some(if a.squared {
            f.clone()
        } else {
            let s = &a.second;
            let domain = s.g_domain.as_deref().or(a.function.domain.as_deref());
            if s.g_catalog.is_none() && s.g_lower.is_none() {
                return Err(Error::Config(format!("chain {} needs G: give --g-catalog, --g-lower/--g-upper or --squared", a.chain.name())));
            }
            build_function(s.g_catalog.as_deref(), s.g_lower.as_deref(), s.g_upper.as_deref(), domain, "g-")?
        })
    } else {
        None
    };
    let h1 = HFunction::parse(&a.h)?;
    let h2 = HFunction::parse(a.h2.as_deref().unwrap_or(&a.h))?;

    let arity_error = |what: &AnyFunction| {
        let want = if a.chain.is_2d() { "two-variable" } else { "one-variable" };
        Error::Config(format!("chain {} needs {want} functions, got a {} one", a.chain.name(), what.arity()))
    };
    let report = match (&f, &g) {
        (AnyFunction::One(f), None) => match a.chain {
            ChainId::Zhtm1 => chain_zhtm1(f, &h1, &opts)?,
            ChainId::K2 => chain_k2(f, &opts)?,
            _ => return Err(arity_error(&AnyFunction::One(f.clone()))),
        },
        (AnyFunction::One(f), Some(AnyFunction::One(g))) => match a.chain {
            ChainId::K3 => chain_k4_k3(f, g, &h1, &h2, &opts)?.midpoint,
            ChainId::K4 => chain_k4_k3(f, g, &h1, &h2, &opts)?.mean,
            ChainId::K5 => chain_k5_k6(f, g, &opts)?.mean,
            ChainId::K6 => chain_k5_k6(f, g, &opts)?.midpoint,
            _ => return Err(arity_error(&AnyFunction::One(f.clone()))),
        },
        (AnyFunction::Two(f), None) if a.chain == ChainId::Mt1 => chain_mt1(f, &opts)?,
        (AnyFunction::Two(f), Some(AnyFunction::Two(g))) => match a.chain {
            ChainId::Mt2 => chain_mt2(f, g, &opts)?,
            ChainId::Mt3 => chain_mt3(f, g, &opts)?,
            _ => return Err(arity_error(&AnyFunction::Two(f.clone()))),
        },
        (f, Some(g)) if f.arity() != g.arity() => {
            return Err(Error::Config(format!("F is {} but G is {}", f.arity(), g.arity())));
        }
        (f, _) => return Err(arity_error(f)),
    };
    let human = render_chain(&report);
    Ok(Outcome { holds: report.holds(), results: to_json(&report)?, human })
}

fn render_chain(rep: &InclusionReport) -> String {
    let mode = match rep.mode {
        CheckMode::Interval => "interval",
        CheckMode::Scalar => "scalar",
    };
    let mut s = format!("chain {} on {} ({mode} mode)\n", rep.chain.chain.name(), rep.config.functions.join(", "));
    let width = rep.chain.terms.iter().chain(&rep.aux).map(|t| t.label.len()).max().unwrap_or(0);
    for t in &rep.chain.terms {
        let _ = writeln!(s, "  {:width$}  {}", t.label, t.value);
    }
    for t in &rep.aux {
        let _ = writeln!(s, "  {:width$}  {}  (aux)", t.label, t.value);
    }
    let rel = if rep.mode == CheckMode::Scalar { "≤" } else { "⊇" };
    for l in &rep.links {
        let verdict = if l.holds { "holds" } else { "FAILS" };
        let _ = writeln!(
            s,
            "  {} {rel} {}: {verdict} (defect lo {:e}, hi {:e}; tol {:e})",
            l.from, l.to, l.defect_lo, l.defect_hi, l.tolerance
        );
    }
    s
}

fn suite(a: &SuiteArgs) -> Result<Outcome> {
    let name: SuiteName = a.name.parse()?;
    let rep = run_suite(name, a.seed)?;
    Ok(Outcome { holds: rep.holds(), human: render_suite(&rep), results: to_json(&rep)? })
}

fn render_suite(rep: &SuiteReport) -> String {
    let passed = rep.cases.iter().filter(|c| c.holds).count();
    let mut s = format!("suite {}: {passed}/{} cases hold\n", serde_json::to_value(rep.suite).unwrap_or(Value::Null), rep.cases.len());
    for c in &rep.cases {
        let seed = c.seed.map(|v| format!(" seed {v}")).unwrap_or_default();
        let _ = writeln!(s, "  [{}] {}{seed}: {}", if c.holds { "ok" } else { "FAIL" }, c.name, c.detail);
    }
    s
}
