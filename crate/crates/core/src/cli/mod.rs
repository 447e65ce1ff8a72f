//! The `drx` command line: argument parsing, dispatch, output and caching.

mod cache;
pub mod selftest;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

pub use cache::Cache;

use crate::aell::{reduced_dr_invariant_closed, reduced_dr_invariant_graphsum, AellData};
use crate::error::Error;
use crate::graph::{canonicalize, enumerate_stable_graphs, Graph, VertexLabel};
use crate::math::format_rational;
use crate::pixton::{chiodo_constant_class, compute_p_constant_with_report, compute_p_fixed_r, DRRequest, ZContext};
use crate::strata::TautClass;
use crate::target::{CurveClass, TargetModel};

#[derive(Parser, Debug)]
#[command(name = "drx", version, about = "Double ramification cycles as decorated-graph classes")]
struct Cli {
    /// Worker threads; defaults to the number of available cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, env = "DRX_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    no_cache: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Debug, Clone)]
struct Problem {
    /// `point`, an inline JSON descriptor, or a path to one.
    #[arg(long, default_value = "point")]
    target: String,
    #[arg(long)]
    g: u32,
    #[arg(long = "A", value_delimiter = ',', allow_negative_numbers = true, required = true)]
    a: Vec<i64>,
    /// Curve class; zero when omitted.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    beta: Option<Vec<i64>>,
    #[arg(long)]
    r_min: Option<i64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The double ramification cycle.
    Dr(Problem),
    /// The constant-term class in any degree.
    Pclass {
        #[command(flatten)]
        problem: Problem,
        #[arg(long, visible_alias = "d")]
        degree: usize,
    },
    /// The graph-sum class at a fixed modulus.
    Pfixed {
        #[command(flatten)]
        problem: Problem,
        #[arg(long, visible_alias = "d")]
        degree: usize,
        #[arg(long)]
        r: i64,
    },
    /// The twisted constant-term class on degree graphs.
    Chiodo {
        #[command(flatten)]
        problem: Problem,
        #[arg(long, visible_alias = "d")]
        degree: usize,
    },
    /// Reduced invariants of a resolved A_ell surface.
    Aell(AellArgs),
    /// Stable graphs with automorphism counts.
    Graphs {
        #[arg(long, default_value = "point")]
        target: String,
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        beta: Option<Vec<i64>>,
        #[arg(long)]
        max_edges: Option<usize>,
    },
    /// Runs the built-in invariant suite.
    Selftest,
}

#[derive(Args, Debug)]
#[group(skip)]
#[command(group(ArgGroup::new("mode").required(true).args(["check", "graphsum", "closed"])))]
struct AellArgs {
    #[arg(long)]
    check: bool,
    #[arg(long)]
    graphsum: bool,
    #[arg(long)]
    closed: bool,
    #[arg(long)]
    ell: usize,
    #[arg(long)]
    g: u32,
    #[arg(long)]
    d: i64,
    #[arg(long = "A", value_delimiter = ',', allow_negative_numbers = true, required = true)]
    a: Vec<i64>,
    /// Root in simple-root coordinates; the highest root when omitted.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    alpha: Option<Vec<i64>>,
    /// 1-based indices of the simple-root duals inserted at the markings.
    #[arg(long, value_delimiter = ',')]
    omega: Option<Vec<usize>>,
    #[arg(long = "c1S", value_delimiter = ',', allow_negative_numbers = true)]
    c1s: Option<Vec<i64>>,
}

/// What a subcommand produced: a JSON value, its text rendering, and the exit code.
struct Output {
    json: Value,
    text: String,
    code: i32,
}

struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, kind: "usage", message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Incompatible(_) | Error::Invalid(_) | Error::Target(_) | Error::AmbientMismatch(_) => (2, "usage"),
            Error::Polynomiality { .. } => (1, "polynomiality"),
            Error::UnstableInsertion(_) => (1, "unstable insertion"),
            Error::Math(_) => (1, "math"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let jobs = cli.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let result = if jobs == 0 {
        Err(Failure::usage("--jobs must be positive"))
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => {
                let mut warnings = Vec::new();
                let result = pool.install(|| execute(&cli, &mut warnings));
                for w in warnings {
                    let _ = writeln!(err, "warning: {w}");
                }
                result
            }
            Err(e) => Err(Failure { code: 1, kind: "runtime", message: e.to_string() }),
        }
    };
    match result {
        Ok(output) => {
            let written = match cli.format {
                Format::Json => writeln!(out, "{}", output.json),
                Format::Text => write!(out, "{}", output.text),
            };
            if written.is_err() {
                return 1;
            }
            output.code
        }
        Err(f) => {
            let _ = writeln!(err, "{}", json!({"error": {"kind": f.kind, "message": f.message}}));
            f.code
        }
    }
}

fn parse_target(arg: &str) -> Result<TargetModel, Failure> {
    if arg == "point" {
        return Ok(TargetModel::point());
    }
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::usage(format!("cannot read target {arg}: {e}")))?
    };
    let value: Value = serde_json::from_str(&text).map_err(|e| Failure::usage(format!("bad target JSON: {e}")))?;
    Ok(TargetModel::from_json(&value).map_err(Error::from)?)
}

fn parse_beta(beta: &Option<Vec<i64>>, target: &TargetModel) -> Result<CurveClass, Failure> {
    let beta = match beta {
        Some(b) => CurveClass(b.clone()),
        None => target.zero_class(),
    };
    if beta.rank() != target.rank() {
        return Err(Failure::usage(format!("beta has {} entries but the target has rank {}", beta.rank(), target.rank())));
    }
    Ok(beta)
}

fn request(problem: &Problem, degree: usize) -> Result<DRRequest, Failure> {
    let target = parse_target(&problem.target)?;
    let beta = parse_beta(&problem.beta, &target)?;
    if problem.r_min.is_some_and(|r| r < 2) {
        return Err(Failure::usage("--r-min must be at least 2"));
    }
    Ok(DRRequest::new(problem.g, problem.a.clone(), beta, target, degree)?)
}

fn request_key(command: &str, req: &DRRequest, extra: Value) -> Value {
    json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "g": req.g,
        "A": req.a,
        "beta": req.beta.0,
        "target": req.target.to_json(),
        "degree": req.degree,
        "extra": extra,
    })
}

fn class_json<L: VertexLabel>(class: &TautClass<L>) -> Value {
    json!({"ambient": class.ambient().to_json(), "terms": class.to_json()})
}

fn class_text<L: VertexLabel>(class: &TautClass<L>) -> String {
    if class.is_empty() {
        "0\n".to_string()
    } else {
        class.render_text()
    }
}

/// Looks the request up in the cache, computing and storing on a miss.
fn cached(
    cli: &Cli,
    warnings: &mut Vec<String>,
    key: Value,
    compute: impl FnOnce() -> Result<Value, Failure>,
) -> Result<Value, Failure> {
    let cache = match (&cli.cache_dir, cli.no_cache) {
        (Some(dir), false) => Some(Cache::new(dir)),
        _ => None,
    };
    if let Some(cache) = &cache {
        match cache.get(&key) {
            Ok(Some(value)) => return Ok(value),
            Ok(None) => {}
            Err(reason) => {
                warnings.push(format!("ignoring corrupt cache entry {reason}; recomputing"));
            }
        }
    }
    let value = compute()?;
    if let Some(cache) = &cache {
        if let Err(e) = cache.put(&key, &value) {
            log::warn!("cache write to {} failed: {e}", cache.dir().display());
        }
    }
    Ok(value)
}

fn stable_class_output(value: Value, req: &DRRequest) -> Result<Output, Failure> {
    let class = TautClass::from_json(req.ambient(), &value["terms"])?;
    Ok(Output { text: class_text(&class), json: value, code: 0 })
}

fn execute(cli: &Cli, warnings: &mut Vec<String>) -> Result<Output, Failure> {
    match &cli.command {
        Command::Dr(problem) => p_constant(cli, warnings, "dr", problem, problem.g as usize),
        Command::Pclass { problem, degree } => p_constant(cli, warnings, "pclass", problem, *degree),
        Command::Pfixed { problem, degree, r } => {
            let req = request(problem, *degree)?;
            if *r < 2 {
                return Err(Failure::usage("--r must be at least 2"));
            }
            let key = request_key("pfixed", &req, json!({"r": r}));
            let value = cached(cli, warnings, key, || Ok(class_json(&compute_p_fixed_r(&req, *r)?)))?;
            stable_class_output(value, &req)
        }
        Command::Chiodo { problem, degree } => {
            let req = request(problem, *degree)?;
            let key = request_key("chiodo", &req, json!({}));
            let ctx = ZContext::from_stable(req.g, &req.a, &req.beta, &req.target, *degree)?;
            let value = cached(cli, warnings, key, || Ok(class_json(&chiodo_constant_class(&ctx, *degree)?)))?;
            let amb = crate::strata::Ambient::twisted(req.g, req.n());
            let class = TautClass::<i64>::from_json(amb, &value["terms"])?;
            Ok(Output { text: class_text(&class), json: value, code: 0 })
        }
        Command::Aell(args) => aell(args),
        Command::Graphs { target, g, n, beta, max_edges } => {
            let target = parse_target(target)?;
            let beta = parse_beta(beta, &target)?;
            // a stable graph of genus g with n legs has at most 3g - 3 + n edges
            let bound = (3 * *g as usize + *n).saturating_sub(3);
            let graphs = enumerate_stable_graphs(*g, *n, &beta, &target, max_edges.unwrap_or(bound));
            let mut by_edges = std::collections::BTreeMap::<String, usize>::new();
            let mut text = String::new();
            let list: Vec<Value> = graphs
                .iter()
                .map(|graph| {
                    *by_edges.entry(graph.num_edges().to_string()).or_default() += 1;
                    let aut = canonicalize(graph).automorphisms;
                    text.push_str(&format!("|Aut| = {aut:<3} {}\n", graph_text(graph)));
                    json!({"graph": graph.to_json(), "automorphisms": aut})
                })
                .collect();
            text.push_str(&format!("{} graphs\n", graphs.len()));
            Ok(Output { json: json!({"count": graphs.len(), "by_edges": by_edges, "graphs": list}), text, code: 0 })
        }
        Command::Selftest => {
            let checks = selftest::run_selftest();
            let passed = checks.iter().all(|c| c.passed);
            let text = checks
                .iter()
                .map(|c| format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail))
                .collect();
            let json = json!({"passed": passed, "checks": checks.iter().map(|c| c.to_json()).collect::<Vec<_>>()});
            Ok(Output { json, text, code: if passed { 0 } else { 1 } })
        }
    }
}

fn p_constant(cli: &Cli, warnings: &mut Vec<String>, command: &str, problem: &Problem, degree: usize) -> Result<Output, Failure> {
    let req = request(problem, degree)?;
    let key = request_key(command, &req, json!({"r_min": problem.r_min}));
    let value = cached(cli, warnings, key, || {
        let (class, report) = compute_p_constant_with_report(&req, problem.r_min)?;
        if report.retries > 0 {
            log::warn!("{} interpolation retries with a larger r_min", report.retries);
        }
        Ok(class_json(&class))
    })?;
    stable_class_output(value, &req)
}

/// `v0[g=1 beta=[0]] legs 1,2@v0 | v0-v1 v1-v1`
fn graph_text<L: VertexLabel>(graph: &Graph<L>) -> String {
    let vertices: Vec<String> = graph
        .vertices
        .iter()
        .enumerate()
        .map(|(v, vert)| format!("v{v}[g={} {}={}]", vert.genus, L::JSON_KEY, vert.label.to_json()))
        .collect();
    let legs: Vec<String> = graph.legs.iter().enumerate().map(|(i, v)| format!("{}@v{v}", i + 1)).collect();
    let edges: Vec<String> = graph.edges.iter().map(|e| format!("v{}-v{}", e[0], e[1])).collect();
    format!("{} legs {} | {}", vertices.join(" "), legs.join(","), edges.join(" ")).trim_end().to_string()
}

fn aell(args: &AellArgs) -> Result<Output, Failure> {
    if args.ell == 0 {
        return Err(Failure::usage("--ell must be positive"));
    }
    let alpha = args.alpha.clone().unwrap_or_else(|| vec![1; args.ell]);
    let c1s = args.c1s.clone().unwrap_or_else(|| vec![0; args.ell]);
    let data = AellData::new(args.ell, alpha, c1s)?;
    let indices = args.omega.clone().unwrap_or_else(|| vec![1; args.a.len()]);
    if indices.len() != args.a.len() || indices.iter().any(|&i| i == 0 || i > args.ell) {
        return Err(Failure::usage(format!("--omega needs {} indices in 1..={}", args.a.len(), args.ell)));
    }
    let omegas: Vec<_> = indices.iter().map(|&i| data.simple_root_dual(i - 1)).collect();
    let graphsum = || reduced_dr_invariant_graphsum(&data, args.g, args.d, &args.a, &omegas);
    let closed = || reduced_dr_invariant_closed(&data, args.g, args.d, &args.a, &omegas);
    if args.check {
        let (x, y) = (graphsum()?, closed()?);
        let (xs, ys) = (format_rational(&x), format_rational(&y));
        return Ok(if x == y {
            Output { text: format!("MATCH {xs}\n"), json: json!({"status": "MATCH", "value": xs}), code: 0 }
        } else {
            Output {
                text: format!("MISMATCH graphsum {xs} closed {ys}\n"),
                json: json!({"status": "MISMATCH", "graphsum": xs, "closed": ys}),
                code: 1,
            }
        });
    }
    let (method, value) = if args.graphsum { ("graphsum", graphsum()?) } else { ("closed", closed()?) };
    let v = format_rational(&value);
    Ok(Output { text: format!("{v}\n"), json: json!({"method": method, "value": v}), code: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("drx").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn genus_zero_dr_is_fundamental() {
        let (code, out, _) = call(&["dr", "--target", "point", "--g", "0", "--A", "1,1,-2"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["terms"].as_array().unwrap().len(), 1);
        assert_eq!(v["terms"][0]["coeff"], "1");
    }

    #[test]
    fn unbalanced_a_is_a_usage_error() {
        let (code, _, err) = call(&["dr", "--g", "1", "--A", "1"]);
        assert_eq!(code, 2);
        assert!(err.contains("sum of A must equal pairing"));
        let (code, _, _) = call(&["dr", "--g", "1"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn aell_check_matches() {
        let (code, out, _) = call(&["aell", "--check", "--ell", "1", "--g", "2", "--d", "1", "--A", "1,-1"]);
        assert_eq!(code, 0);
        assert!(out.contains("MATCH"));
        let (code, out, _) =
            call(&["--format", "text", "aell", "--check", "--ell", "2", "--g", "1", "--d", "2", "--A", "2,-2", "--omega", "1,2"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("MATCH "));
    }

    #[test]
    fn graph_counts() {
        let (code, out, _) = call(&["graphs", "--g", "1", "--n", "1"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["count"], 2);
    }
}
