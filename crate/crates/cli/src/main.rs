use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use mhbc::joint::{bc_ratio_estimate, relative_bc_estimate};
use mhbc::testkit::generators::{generate, GeneratorSpec};
use mhbc::testkit::suites::{run_suite, Suite};
use mhbc::{
    exact_betweenness, parse_edge_list, ratio_identity_check, relative_bc_exact, relative_bc_stationary,
    required_samples, run_joint_chain, tail_bound, ChainConfig, Error, Graph, Vertex, RNG_ALGORITHM,
};

mod report;

use report::{opt, render, SCHEMA_VERSION};

const EXIT_FAILURE: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "mhbc",
    version,
    about = "Betweenness centrality by Metropolis-Hastings sampling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact betweenness by Brandes accumulation.
    Exact {
        #[command(flatten)]
        source: GraphSource,
        /// Read a third edge-list column as the edge weight.
        #[arg(long, requires = "graph")]
        weighted: bool,
        /// Report only this vertex.
        #[arg(long)]
        vertex: Option<String>,
    },
    /// Single-vertex estimate from the single-space chain.
    Estimate {
        #[command(flatten)]
        source: GraphSource,
        /// Read a third edge-list column as the edge weight.
        #[arg(long, requires = "graph")]
        weighted: bool,
        #[arg(long)]
        vertex: String,
        /// Number of transitions.
        #[arg(long = "T", visible_alias = "iterations", required_unless_present = "epsilon")]
        iterations: Option<u64>,
        #[arg(long, requires = "delta", conflicts_with = "iterations")]
        epsilon: Option<f64>,
        #[arg(long, requires = "epsilon")]
        delta: Option<f64>,
        /// Use this μ for planning instead of computing it exactly.
        #[arg(long, requires = "epsilon")]
        mu: Option<f64>,
        #[arg(long, env = "MHBC_SEED", default_value_t = 0)]
        seed: u64,
        /// Also compute the exact value and the absolute error.
        #[arg(long)]
        exact_check: bool,
    },
    /// Relative betweenness for every ordered pair of a vertex set, from one joint chain.
    Relative {
        #[command(flatten)]
        source: GraphSource,
        /// Read a third edge-list column as the edge weight.
        #[arg(long, requires = "graph")]
        weighted: bool,
        /// Comma-separated vertex labels, at least two.
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
        #[arg(long = "T", visible_alias = "iterations")]
        iterations: u64,
        #[arg(long, env = "MHBC_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        exact_check: bool,
    },
    /// Run a named verification suite; exits 1 if any check fails.
    Verify {
        suite: String,
        #[arg(long, env = "MHBC_SEED", default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct GraphSource {
    /// Edge-list file: one `u v` (or `u v w` with --weighted) per line.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Generator spec such as star:5, path:8, gnp:8:0.4:7, two_blocks_cut:5:5.
    #[arg(long = "gen")]
    generator: Option<String>,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    kind: String,
    message: String,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        let code = match error {
            Error::SigmaOverflow { .. }
            | Error::TraceMismatch(_)
            | Error::ZeroDenominator
            | Error::ZeroBetweenness { .. }
            | Error::EmptyStratum { .. }
            | Error::AllZeroDependency => EXIT_FAILURE,
            _ => EXIT_INPUT,
        };
        let kind = format!("{error:?}");
        let kind = kind.split(['(', ' ', '{']).next().unwrap_or("Error").to_string();
        Failure {
            code,
            kind,
            message: error.to_string(),
        }
    }
}

fn io_failure(path: &std::path::Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_INPUT,
        kind: "Io".to_string(),
        message: format!("cannot read {}: {e}", path.display()),
    }
}

struct Loaded {
    graph: Graph,
    spec: Option<GeneratorSpec>,
    summary: Value,
}

fn load(source: &GraphSource, weighted: bool) -> Result<Loaded, Failure> {
    let (graph, spec, origin) = match (&source.graph, &source.generator) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
            (
                parse_edge_list(&text, weighted)?,
                None,
                json!({"file": path.display().to_string()}),
            )
        }
        (None, Some(s)) => {
            let spec: GeneratorSpec = s.parse()?;
            (
                generate(&spec)?,
                Some(spec),
                json!({"generator": spec.to_string()}),
            )
        }
        (None, None) => unreachable!("clap requires one graph source"),
    };
    graph.assert_connected()?;
    let summary = json!({
        "source": origin,
        "n": graph.n(),
        "m": graph.m(),
        "weighted": graph.is_weighted(),
    });
    Ok(Loaded { graph, spec, summary })
}

/// Resolves a vertex token: an exact label first; on generated graphs (labelled
/// `0..n`) also `center`/`cut`/`focal` for the family's focal vertex and a single
/// lowercase letter `a`, `b`, … for vertex `0`, `1`, ….
fn resolve(loaded: &Loaded, token: &str) -> Result<Vertex, Failure> {
    let g = &loaded.graph;
    match g.vertex(token) {
        Ok(v) => return Ok(v),
        Err(e) if loaded.spec.is_none() => return Err(e.into()),
        Err(_) => {}
    }
    let spec = loaded.spec.as_ref().expect("generated graph");
    if matches!(token, "center" | "cut" | "focal") {
        if let Some(v) = spec.focal_vertex() {
            return Ok(v);
        }
    }
    let mut chars = token.chars();
    if let (Some(c @ 'a'..='z'), None) = (chars.next(), chars.next()) {
        let v = c as usize - 'a' as usize;
        if v < g.n() {
            return Ok(v);
        }
    }
    Err(Error::UnknownVertex(token.to_string()).into())
}

struct Timer {
    phases: Map<String, Value>,
    start: Instant,
}

impl Timer {
    fn new() -> Self {
        Timer {
            phases: Map::new(),
            start: Instant::now(),
        }
    }

    fn lap(&mut self, phase: &str) {
        let now = Instant::now();
        self.phases.insert(
            format!("{phase}_seconds"),
            Value::from((now - self.start).as_secs_f64()),
        );
        self.start = now;
    }
}

struct Outcome {
    report: Value,
    summary: String,
    code: u8,
}

fn echo(argv: &[String], name: &str) -> Value {
    json!({"name": name, "argv": argv})
}

fn cmd_exact(
    argv: &[String],
    source: &GraphSource,
    weighted: bool,
    vertex: Option<&str>,
) -> Result<Outcome, Failure> {
    let mut timer = Timer::new();
    let loaded = load(source, weighted)?;
    timer.lap("load");
    let target = vertex.map(|t| resolve(&loaded, t)).transpose()?;
    let bc = exact_betweenness(&loaded.graph)?.bc;
    timer.lap("exact");
    let g = &loaded.graph;
    let (results, summary) = match target {
        Some(v) => (
            json!({"vertex": g.label(v), "bc": bc[v]}),
            format!("BC({}) = {:.6}", g.label(v), bc[v]),
        ),
        None => (
            json!({"labels": g.labels(), "bc": bc}),
            format!("exact betweenness for {} vertices", g.n()),
        ),
    };
    Ok(Outcome {
        report: json!({
            "schema_version": SCHEMA_VERSION,
            "command": echo(argv, "exact"),
            "graph": loaded.summary,
            "parameters": {"vertex": target.map(|v| g.label(v))},
            "results": results,
            "timing": timer.phases,
        }),
        summary,
        code: 0,
    })
}

struct EstimateArgs<'a> {
    vertex: &'a str,
    iterations: Option<u64>,
    epsilon: Option<f64>,
    delta: Option<f64>,
    mu: Option<f64>,
    seed: u64,
    exact_check: bool,
}

fn cmd_estimate(
    argv: &[String],
    source: &GraphSource,
    weighted: bool,
    a: EstimateArgs,
) -> Result<Outcome, Failure> {
    let mut timer = Timer::new();
    let loaded = load(source, weighted)?;
    let g = &loaded.graph;
    let r = resolve(&loaded, a.vertex)?;
    timer.lap("load");

    // Planning: explicit T, or T from (ε, δ, μ) with μ supplied or computed exactly.
    let mut mu = a.mu;
    let mut mu_source = a.mu.map(|_| "override");
    let mut traffic_free = false;
    let planned = match (a.iterations, a.epsilon, a.delta) {
        (Some(t), _, _) => Some(t),
        (None, Some(eps), Some(delta)) => {
            if mu.is_none() {
                match mhbc::mu_exact(g, r) {
                    Ok(bound) => {
                        mu = Some(bound.mu);
                        mu_source = Some("exact (n dependency accumulations)");
                    }
                    Err(Error::AllZeroDependency) => traffic_free = true,
                    Err(e) => return Err(e.into()),
                }
            }
            match mu {
                Some(m) => Some(required_samples(eps, delta, m)?),
                None => None,
            }
        }
        _ => unreachable!("clap enforces T or epsilon with delta"),
    };
    timer.lap("planning");

    let mut results = Map::new();
    if let Some(t) = planned {
        let mut cfg = ChainConfig::new(r, t, a.seed);
        cfg.epsilon = a.epsilon;
        cfg.delta = a.delta;
        let est = mhbc::single::estimate(g, &cfg)?;
        traffic_free = est.traffic_free;
        results.insert("estimate".into(), Value::from(est.estimate));
        results.insert(
            "iterations_run".into(),
            Value::from(if est.traffic_free { 0 } else { t }),
        );
        results.insert("accepted".into(), Value::from(est.accepted));
        results.insert(
            "acceptance_rate".into(),
            if est.traffic_free {
                Value::Null
            } else {
                Value::from(est.accepted as f64 / t as f64)
            },
        );
        results.insert("dependency_evaluations".into(), Value::from(est.evaluations));
        if let (Some(eps), Some(m), false) = (a.epsilon, mu, est.traffic_free) {
            results.insert("tail_bound".into(), Value::from(tail_bound(eps, t, m)?));
        }
    } else {
        results.insert("estimate".into(), Value::from(0.0));
        results.insert("iterations_run".into(), Value::from(0));
        results.insert("accepted".into(), Value::from(0));
        results.insert("acceptance_rate".into(), Value::Null);
        results.insert("dependency_evaluations".into(), Value::from(0));
    }
    results.insert("traffic_free".into(), Value::from(traffic_free));
    results.insert("mu".into(), opt(mu));
    timer.lap("chain");

    let estimate = results["estimate"].as_f64().unwrap_or(0.0);
    let mut summary = format!(
        "estimate BC({}) = {:.6} (T = {}){}",
        g.label(r),
        estimate,
        planned.map_or("none".to_string(), |t| t.to_string()),
        if traffic_free { ", traffic free" } else { "" }
    );
    if a.exact_check {
        let exact = mhbc::exact_betweenness_single(g, r)?;
        results.insert("exact_bc".into(), Value::from(exact));
        results.insert("abs_error".into(), Value::from((estimate - exact).abs()));
        results.insert("chain_limit".into(), opt(mhbc::estimator_limit(g, r).ok()));
        timer.lap("exact_check");
        summary.push_str(&format!(", exact {exact:.6}"));
    }

    Ok(Outcome {
        report: json!({
            "schema_version": SCHEMA_VERSION,
            "command": echo(argv, "estimate"),
            "graph": loaded.summary,
            "parameters": {
                "r": g.label(r),
                "T": planned,
                "epsilon": opt(a.epsilon),
                "delta": opt(a.delta),
                "mu_source": mu_source,
                "seed": a.seed,
                "rng": RNG_ALGORITHM,
            },
            "results": results,
            "timing": timer.phases,
        }),
        summary,
        code: 0,
    })
}

fn or_reason(res: mhbc::Result<f64>) -> Result<(Value, Value), Failure> {
    match res {
        Ok(x) => Ok((Value::from(x), Value::Null)),
        Err(e @ (Error::EmptyStratum { .. } | Error::ZeroDenominator | Error::ZeroBetweenness { .. })) => {
            Ok((Value::Null, Value::from(e.to_string())))
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_relative(
    argv: &[String],
    source: &GraphSource,
    weighted: bool,
    set: &[String],
    iterations: u64,
    seed: u64,
    exact_check: bool,
) -> Result<Outcome, Failure> {
    let mut timer = Timer::new();
    let loaded = load(source, weighted)?;
    let g = &loaded.graph;
    let targets = set
        .iter()
        .map(|t| resolve(&loaded, t))
        .collect::<Result<Vec<_>, _>>()?;
    timer.lap("load");

    let trace = match run_joint_chain(g, &targets, iterations, seed) {
        Err(Error::AllZeroDependency) => None,
        other => Some(other?),
    };
    timer.lap("chain");

    let label = |v: Vertex| g.label(v).to_string();
    let mut pairs = Vec::new();
    let mut unestimable = 0usize;
    for &r_i in &targets {
        for &r_j in &targets {
            if r_i == r_j {
                continue;
            }
            let mut entry = Map::new();
            entry.insert("r_i".into(), Value::from(label(r_i)));
            entry.insert("r_j".into(), Value::from(label(r_j)));
            match &trace {
                Some(t) => {
                    let (rel, why) = or_reason(relative_bc_estimate(t, r_i, r_j))?;
                    let (ratio, ratio_why) = or_reason(bc_ratio_estimate(t, r_i, r_j))?;
                    if rel.is_null() {
                        unestimable += 1;
                    }
                    entry.insert("relative".into(), rel);
                    entry.insert("relative_unestimable".into(), why);
                    entry.insert("ratio".into(), ratio);
                    entry.insert("ratio_unestimable".into(), ratio_why);
                }
                None => {
                    unestimable += 1;
                    entry.insert("relative".into(), Value::Null);
                    entry.insert(
                        "relative_unestimable".into(),
                        Value::from(Error::AllZeroDependency.to_string()),
                    );
                    entry.insert("ratio".into(), Value::Null);
                    entry.insert(
                        "ratio_unestimable".into(),
                        Value::from(Error::AllZeroDependency.to_string()),
                    );
                }
            }
            if exact_check {
                entry.insert(
                    "exact_relative".into(),
                    Value::from(relative_bc_exact(g, r_i, r_j)?),
                );
                entry.insert(
                    "stationary_relative".into(),
                    Value::from(relative_bc_stationary(g, r_i, r_j)?),
                );
                let identity = match ratio_identity_check(g, r_i, r_j) {
                    Ok(id) => {
                        json!({"bc_ratio": id.lhs, "relative_ratio": id.rhs, "abs_diff": id.abs_diff()})
                    }
                    Err(e @ (Error::ZeroBetweenness { .. } | Error::ZeroDenominator)) => {
                        json!({"unavailable": e.to_string()})
                    }
                    Err(e) => return Err(e.into()),
                };
                entry.insert("ratio_identity".into(), identity);
            }
            pairs.push(Value::Object(entry));
        }
    }
    if exact_check {
        timer.lap("exact_check");
    }

    let strata: Map<String, Value> = targets
        .iter()
        .map(|&r| {
            let size = trace
                .as_ref()
                .map_or(0, |t| t.stratum(r).map_or(0, <[Vertex]>::len));
            (label(r), Value::from(size))
        })
        .collect();
    let results = json!({
        "pairs": pairs,
        "strata": strata,
        "accepted": trace.as_ref().map_or(0, |t| t.accepted()),
        "acceptance_rate": trace.as_ref().map(|t| t.acceptance_rate()),
        "traffic_free": trace.is_none(),
    });
    let summary = format!(
        "{} ordered pairs from one joint chain (T = {iterations}), {unestimable} unestimable",
        pairs_len(targets.len())
    );
    Ok(Outcome {
        report: json!({
            "schema_version": SCHEMA_VERSION,
            "command": echo(argv, "relative"),
            "graph": loaded.summary,
            "parameters": {
                "R": targets.iter().map(|&r| label(r)).collect::<Vec<_>>(),
                "T": iterations,
                "seed": seed,
                "rng": RNG_ALGORITHM,
            },
            "results": results,
            "timing": timer.phases,
        }),
        summary,
        code: 0,
    })
}

fn pairs_len(k: usize) -> usize {
    k * (k - 1)
}

fn cmd_verify(argv: &[String], suite: &str, seed: u64) -> Result<Outcome, Failure> {
    let mut timer = Timer::new();
    let suite: Suite = suite.parse()?;
    let rep = run_suite(suite, seed)?;
    timer.lap("suite");
    let checks: Vec<Value> = rep
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "passed": c.passed,
                "observed": c.observed,
                "threshold": c.threshold,
                "detail": c.detail,
            })
        })
        .collect();
    let failed: Vec<&str> = rep.failures().map(|c| c.name.as_str()).collect();
    let mut summary = format!(
        "verify {suite}: {}/{} checks passed",
        rep.checks.len() - failed.len(),
        rep.checks.len()
    );
    for c in rep.failures() {
        summary.push_str(&format!(
            "\n  FAIL {}: observed {:.6}, threshold {:.6} ({})",
            c.name, c.observed, c.threshold, c.detail
        ));
    }
    Ok(Outcome {
        report: json!({
            "schema_version": SCHEMA_VERSION,
            "command": echo(argv, "verify"),
            "parameters": {"suite": suite.name(), "seed": seed, "rng": RNG_ALGORITHM},
            "results": {"passed": rep.passed(), "checks": checks, "failed": failed},
            "timing": timer.phases,
        }),
        summary,
        code: if rep.passed() { 0 } else { EXIT_FAILURE },
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();

    let outcome = match &cli.command {
        Command::Exact {
            source,
            weighted,
            vertex,
        } => cmd_exact(&argv, source, *weighted, vertex.as_deref()),
        Command::Estimate {
            source,
            weighted,
            vertex,
            iterations,
            epsilon,
            delta,
            mu,
            seed,
            exact_check,
        } => cmd_estimate(
            &argv,
            source,
            *weighted,
            EstimateArgs {
                vertex,
                iterations: *iterations,
                epsilon: *epsilon,
                delta: *delta,
                mu: *mu,
                seed: *seed,
                exact_check: *exact_check,
            },
        ),
        Command::Relative {
            source,
            weighted,
            set,
            iterations,
            seed,
            exact_check,
        } => cmd_relative(&argv, source, *weighted, set, *iterations, *seed, *exact_check),
        Command::Verify { suite, seed } => cmd_verify(&argv, suite, *seed),
    };

    match outcome {
        Ok(out) => {
            print!("{}", render(out.report));
            eprintln!("{}", out.summary);
            ExitCode::from(out.code)
        }
        Err(f) => {
            print!(
                "{}",
                render(json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": {"argv": argv},
                    "error": {"kind": f.kind, "message": f.message},
                    "exit_code": f.code,
                }))
            );
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
