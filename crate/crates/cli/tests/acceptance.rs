//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use serde_json::Value;

use mhbc::joint::relative_bc_estimate;
use mhbc::single::estimate;
use mhbc::testkit::coverage::{joint_coverage, single_coverage};
use mhbc::testkit::generators::{generate, GeneratorSpec};
use mhbc::testkit::suites::{
    failure_ceiling, run_suite, Check, Suite, COVERAGE_DELTA, COVERAGE_EPSILON, COVERAGE_MIN_FRACTION,
    COVERAGE_RUNS,
};
use mhbc::{exact_betweenness, run_chain, run_joint_chain, ChainConfig, Error};

const SEED: u64 = 20_240_601;
const CLOSED_FORM_TOL: f64 = 1e-12;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    passed: bool,
    detail: String,
}

fn budget(elapsed: Duration, limit_secs: u64) -> Verdict {
    Verdict {
        passed: elapsed <= Duration::from_secs(limit_secs),
        detail: format!("runtime {:.2}s (limit {limit_secs}s)", elapsed.as_secs_f64()),
    }
}

fn from_checks<'a>(checks: impl IntoIterator<Item = &'a Check>) -> Verdict {
    let mut passed = true;
    let mut parts = Vec::new();
    for c in checks {
        passed &= c.passed;
        parts.push(format!(
            "{} {} {:.3e} vs {:.3e}",
            if c.passed { "ok" } else { "FAILED" },
            c.name,
            c.observed,
            c.threshold
        ));
    }
    Verdict {
        passed,
        detail: parts.join("; "),
    }
}

fn all(verdicts: Vec<Verdict>) -> Verdict {
    Verdict {
        passed: verdicts.iter().all(|v| v.passed),
        detail: verdicts
            .into_iter()
            .map(|v| v.detail)
            .collect::<Vec<_>>()
            .join("; "),
    }
}

fn timed_suite(suite: Suite, limit_secs: u64, names: &[&str]) -> Verdict {
    let start = Instant::now();
    let report = run_suite(suite, SEED).expect("suite runs");
    let time = budget(start.elapsed(), limit_secs);
    let checks = report
        .checks
        .iter()
        .filter(|c| names.is_empty() || names.contains(&c.name.as_str()));
    all(vec![from_checks(checks), time])
}

fn oracle_equivalence() -> Verdict {
    timed_suite(Suite::Oracle, 10, &["brandes_vs_brute_force"])
}

fn closed_forms() -> Verdict {
    let bc = |spec| exact_betweenness(&generate(&spec).unwrap()).unwrap().bc;
    let mut worst: f64 = 0.0;
    for n in 4..=12 {
        worst = worst.max((bc(GeneratorSpec::Star(n))[0] - (n as f64 - 2.0) / n as f64).abs());
    }
    worst = worst.max((bc(GeneratorSpec::Path(3))[1] - 1.0 / 3.0).abs());
    for x in bc(GeneratorSpec::Cycle(4)) {
        worst = worst.max((x - 1.0 / 12.0).abs());
    }
    Verdict {
        passed: worst <= CLOSED_FORM_TOL,
        detail: format!("star_n center, P3 middle, C4: max error {worst:.3e} (tol {CLOSED_FORM_TOL:.0e})"),
    }
}

fn kernel_balance() -> Verdict {
    timed_suite(Suite::Kernel, 30, &[])
}

fn ratio_identity() -> Verdict {
    timed_suite(Suite::RatioIdentity, 60, &["ratio_identity"])
}

fn single_coverage_criterion() -> Verdict {
    let start = Instant::now();
    let ceiling = failure_ceiling(COVERAGE_DELTA, COVERAGE_RUNS);
    let mut verdicts = Vec::new();
    for spec in [
        GeneratorSpec::Star(8),
        GeneratorSpec::TwoBlocksCut { k1: 5, k2: 5 },
    ] {
        let g = generate(&spec).unwrap();
        let r = spec.focal_vertex().unwrap();
        let cov = single_coverage(&g, r, COVERAGE_EPSILON, COVERAGE_DELTA, COVERAGE_RUNS, SEED).unwrap();
        let within = cov.fraction_within_exact();
        let failure = 1.0 - within;
        let mean = cov.estimates.iter().sum::<f64>() / cov.estimates.len() as f64;
        verdicts.push(Verdict {
            passed: within >= COVERAGE_MIN_FRACTION && failure <= ceiling,
            detail: format!(
                "{spec}: T={} within-eps {within:.3} (need >= {COVERAGE_MIN_FRACTION}), failure {failure:.3} (ceiling {ceiling:.4}), \
                 exact BC {:.4}, mean estimate {mean:.4}",
                cov.iterations, cov.exact_bc
            ),
        });
    }
    verdicts.push(budget(start.elapsed(), 300));
    all(verdicts)
}

fn joint_coverage_criterion() -> Verdict {
    let start = Instant::now();
    let ceiling = failure_ceiling(COVERAGE_DELTA, COVERAGE_RUNS);
    let g = generate(&GeneratorSpec::Path(8)).unwrap();
    let targets = [3, 4];
    let mut verdicts = Vec::new();
    for (r_i, r_j) in [(3, 4), (4, 3)] {
        let cov = joint_coverage(
            &g,
            &targets,
            r_i,
            r_j,
            COVERAGE_EPSILON,
            COVERAGE_DELTA,
            COVERAGE_RUNS,
            SEED,
        )
        .unwrap();
        let failure = 1.0 - cov.fraction_within_exact();
        verdicts.push(Verdict {
            passed: failure <= ceiling,
            detail: format!(
                "path:8 rel({r_i}|{r_j}): |M(j)| planned {} min {}, failure {failure:.3} (ceiling {ceiling:.4}), exact {:.4}",
                cov.stratum_target,
                cov.min_stratum(),
                cov.exact_relative
            ),
        });
    }
    verdicts.push(budget(start.elapsed(), 300));
    all(verdicts)
}

fn constant_mu() -> Verdict {
    timed_suite(Suite::ConstantMu, 60, &[])
}

fn run_cli(args: &[&str]) -> (Option<i32>, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_mhbc"))
        .args(args)
        .env_remove("MHBC_SEED")
        .output()
        .expect("binary runs");
    let mut v: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    if let Some(map) = v.as_object_mut() {
        map.remove("timing");
    }
    (out.status.code(), v)
}

fn determinism() -> Verdict {
    let commands: &[&[&str]] = &[
        &["exact", "--gen", "barbell:4:2"],
        &["exact", "--gen", "gnp:9:0.4:3", "--vertex", "2"],
        &[
            "estimate",
            "--gen",
            "star:8",
            "--vertex",
            "center",
            "--epsilon",
            "0.05",
            "--delta",
            "0.1",
            "--seed",
            "1",
            "--exact-check",
        ],
        &[
            "estimate",
            "--gen",
            "gnp:10:0.4:8",
            "--vertex",
            "3",
            "--T",
            "5000",
            "--seed",
            "77",
        ],
        &[
            "estimate", "--gen", "path:3", "--vertex", "a", "--T", "100", "--seed", "2",
        ],
        &[
            "relative",
            "--gen",
            "path:8",
            "--set",
            "2,3,4",
            "--T",
            "20000",
            "--seed",
            "5",
            "--exact-check",
        ],
        &[
            "relative", "--gen", "star:5", "--set", "0,1", "--T", "500", "--seed", "6",
        ],
        &["verify", "theorem3", "--seed", "4"],
        &["verify", "coverage", "--seed", "4"],
        &["relative", "--gen", "path:4", "--set", "b", "--T", "10"],
    ];
    let mut mismatches = Vec::new();
    for args in commands {
        if run_cli(args) != run_cli(args) {
            mismatches.push(args.join(" "));
        }
    }
    Verdict {
        passed: mismatches.is_empty(),
        detail: if mismatches.is_empty() {
            format!(
                "{} commands repeated with identical output (timing excluded)",
                commands.len()
            )
        } else {
            format!("differing output: {}", mismatches.join(" | "))
        },
    }
}

fn degenerate_handling() -> Verdict {
    let mut problems = Vec::new();

    // leaf targets: traffic free with estimate exactly 0, through library and CLI
    for spec in [
        GeneratorSpec::Path(3),
        GeneratorSpec::Star(6),
        GeneratorSpec::Barbell { k: 3, bridge_len: 0 },
    ] {
        let g = generate(&spec).unwrap();
        let leaf = (0..g.n()).find(|&v| g.degree(v) == 1).unwrap_or(1);
        let rep = estimate(&g, &ChainConfig::new(leaf, 1000, 3)).unwrap();
        if !(rep.traffic_free && rep.estimate == 0.0) {
            problems.push(format!("{spec} leaf {leaf}: {rep:?}"));
        }
        if run_chain(&g, &ChainConfig::new(leaf, 10, 3)) != Err(Error::AllZeroDependency) {
            problems.push(format!("{spec}: run_chain did not report AllZeroDependency"));
        }
    }
    let (code, out) = run_cli(&[
        "estimate",
        "--gen",
        "star:6",
        "--vertex",
        "b",
        "--epsilon",
        "0.1",
        "--delta",
        "0.1",
    ]);
    if code != Some(0)
        || out["results"]["traffic_free"] != true
        || out["results"]["estimate"].as_f64() != Some(0.0)
    {
        problems.push(format!("CLI leaf estimate: exit {code:?}, {}", out["results"]));
    }

    // empty stratum: a zero-mass leaf stratum the chain leaves after its first step
    let star = generate(&GeneratorSpec::Star(5)).unwrap();
    let empty = (0..500u64).find_map(|seed| {
        let trace = run_joint_chain(&star, &[0, 1], 50, seed).unwrap();
        trace.stratum(1).unwrap().is_empty().then_some((seed, trace))
    });
    match empty {
        Some((seed, trace)) => {
            if relative_bc_estimate(&trace, 0, 1) != Err(Error::EmptyStratum { vertex: 1 }) {
                problems.push("empty stratum not reported".into());
            }
            let seed = seed.to_string();
            let (code, out) = run_cli(&[
                "relative", "--gen", "star:5", "--set", "0,1", "--T", "50", "--seed", &seed,
            ]);
            let pair = &out["results"]["pairs"][0];
            if code != Some(0) || !pair["relative"].is_null() || !pair["relative_unestimable"].is_string() {
                problems.push(format!("CLI empty stratum: exit {code:?}, {pair}"));
            }
        }
        None => problems.push("no seed produced an empty stratum".into()),
    }

    Verdict {
        passed: problems.is_empty(),
        detail: if problems.is_empty() {
            "leaf targets traffic free with estimate 0; AllZeroDependency and EmptyStratum surfaced".into()
        } else {
            problems.join("; ")
        },
    }
}

fn main() -> ExitCode {
    // `cargo test` passes harness flags; a name filter that matches nothing skips the gate
    let filter = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    if filter.is_some_and(|f| !"acceptance".contains(&f)) {
        return ExitCode::SUCCESS;
    }

    let criteria: [Criterion; 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("closed-form spot checks", closed_forms),
        ("kernel stationarity and detailed balance", kernel_balance),
        ("betweenness ratio identity", ratio_identity),
        ("single-vertex coverage", single_coverage_criterion),
        ("relative-score coverage", joint_coverage_criterion),
        ("constant-mu instantiation", constant_mu),
        ("CLI determinism", determinism),
        ("degenerate handling", degenerate_handling),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        failed += usize::from(!v.passed);
        println!(
            "{} criterion {}: {name} -- {}",
            if v.passed { "PASS" } else { "FAIL" },
            i + 1,
            v.detail
        );
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
