//! Named verification suites at pinned desk-scale sizes.
//!
//! Every suite returns a list of [`Check`]s; a suite passes iff every check does.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::brandes::{exact_betweenness, DependencyWorkspace};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::joint::ratio_identity_check;
use crate::mh::clamped_ratio;
use crate::single::mu_exact;
use crate::testkit::brute::brute_force_betweenness;
use crate::testkit::coverage::{joint_coverage, single_coverage};
use crate::testkit::generators::{generate, GeneratorSpec};
use crate::testkit::kernel::{build_kernel_joint, build_kernel_single};

pub const ORACLE_TOL: f64 = 1e-9;
pub const CLOSED_FORM_TOL: f64 = 1e-12;
pub const KERNEL_TOL: f64 = 1e-12;
pub const IDENTITY_TOL: f64 = 1e-9;
pub const CONSTANT_MU_BOUND: f64 = 2.2;
pub const COVERAGE_EPSILON: f64 = 0.05;
pub const COVERAGE_DELTA: f64 = 0.1;
pub const COVERAGE_RUNS: usize = 200;
/// Lower bound on the within-ε fraction: `1 − δ`.
pub const COVERAGE_MIN_FRACTION: f64 = 1.0 - COVERAGE_DELTA;
pub const RANDOM_GRAPHS: usize = 100;
pub const GNP_P: f64 = 0.4;

/// `δ + 3 sqrt(δ (1 − δ) / runs)`: binomial 3σ ceiling on the failure fraction.
pub fn failure_ceiling(delta: f64, runs: usize) -> f64 {
    delta + 3.0 * (delta * (1.0 - delta) / runs as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Oracle,
    Kernel,
    Coverage,
    RatioIdentity,
    ConstantMu,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Oracle,
        Suite::Kernel,
        Suite::Coverage,
        Suite::RatioIdentity,
        Suite::ConstantMu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Kernel => "kernel",
            Suite::Coverage => "coverage",
            Suite::RatioIdentity => "theorem2",
            Suite::ConstantMu => "theorem3",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub observed: f64,
    pub threshold: f64,
    pub detail: String,
}

impl Check {
    fn at_most(name: impl Into<String>, observed: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: observed <= threshold,
            observed,
            threshold,
            detail: detail.into(),
        }
    }

    fn at_least(name: impl Into<String>, observed: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: observed >= threshold,
            observed,
            threshold,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Oracle => oracle_checks(seed)?,
        Suite::Kernel => kernel_checks(seed)?,
        Suite::Coverage => coverage_checks(seed)?,
        Suite::RatioIdentity => ratio_identity_checks(seed)?,
        Suite::ConstantMu => constant_mu_checks()?,
    };
    Ok(SuiteReport { suite, seed, checks })
}

/// Deterministic families with at most `max_n` vertices.
pub fn family_graphs(max_n: usize) -> Vec<(String, Graph)> {
    let mut specs = Vec::new();
    for n in 2..=max_n {
        specs.push(GeneratorSpec::Path(n));
        specs.push(GeneratorSpec::Star(n));
        specs.push(GeneratorSpec::Complete(n));
        if n >= 3 {
            specs.push(GeneratorSpec::Cycle(n));
        }
    }
    for k in 2..=max_n / 2 {
        for bridge_len in 0..=max_n - 2 * k {
            specs.push(GeneratorSpec::Barbell { k, bridge_len });
        }
    }
    for k1 in 1..max_n {
        for k2 in k1..max_n - k1 {
            specs.push(GeneratorSpec::TwoBlocksCut { k1, k2 });
        }
    }
    specs
        .into_iter()
        .map(|s| (s.to_string(), generate(&s).expect("family parameters are valid")))
        .collect()
}

/// `count` connected `gnp(n, 0.4)` graphs with `n` cycling through `min_n..=max_n`.
pub fn random_graphs(seed: u64, count: usize, min_n: usize, max_n: usize) -> Result<Vec<(String, Graph)>> {
    (0..count)
        .map(|i| {
            let spec = GeneratorSpec::Gnp {
                n: min_n + i % (max_n - min_n + 1),
                p: GNP_P,
                seed: seed.wrapping_add(i as u64),
            };
            Ok((spec.to_string(), generate(&spec)?))
        })
        .collect()
}

/// Random graphs with integer weights in `1..=3`, so equal-length paths are common.
pub fn weighted_random_graphs(seed: u64, count: usize) -> Result<Vec<(String, Graph)>> {
    random_graphs(seed, count, 4, 10)?
        .into_iter()
        .enumerate()
        .map(|(i, (name, g))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let edges: Vec<_> = g
                .edges()
                .iter()
                .map(|&(u, v, _)| (u, v, rng.gen_range(1..=3) as f64))
                .collect();
            Ok((
                format!("{name}+w"),
                Graph::from_weighted_edges(g.n(), edges, true)?,
            ))
        })
        .collect()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn oracle_checks(seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let mut worst = (0.0f64, String::new());
    let mut graphs = family_graphs(12);
    let family_count = graphs.len();
    graphs.extend(random_graphs(seed, RANDOM_GRAPHS, 4, 10)?);
    graphs.extend(weighted_random_graphs(seed, 20)?);
    for (name, g) in &graphs {
        let diff = max_abs_diff(&exact_betweenness(g)?.bc, &brute_force_betweenness(g)?.bc);
        if diff >= worst.0 {
            worst = (diff, name.clone());
        }
    }
    checks.push(Check::at_most(
        "brandes_vs_brute_force",
        worst.0,
        ORACLE_TOL,
        format!(
            "{family_count} family graphs, {RANDOM_GRAPHS} gnp(4..=10, {GNP_P}), 20 weighted gnp; worst on {}",
            worst.1
        ),
    ));

    let mut star_err: f64 = 0.0;
    for n in 4..=12 {
        let bc = exact_betweenness(&generate(&GeneratorSpec::Star(n))?)?.bc;
        star_err = star_err.max((bc[0] - (n as f64 - 2.0) / n as f64).abs());
    }
    checks.push(Check::at_most(
        "star_center_closed_form",
        star_err,
        CLOSED_FORM_TOL,
        "BC(center of star_n) = (n-2)/n for n in 4..=12",
    ));
    let p3 = exact_betweenness(&generate(&GeneratorSpec::Path(3))?)?.bc;
    checks.push(Check::at_most(
        "path3_middle_closed_form",
        (p3[1] - 1.0 / 3.0).abs(),
        CLOSED_FORM_TOL,
        "BC(middle of P3) = 1/3",
    ));
    let c4 = exact_betweenness(&generate(&GeneratorSpec::Cycle(4))?)?.bc;
    checks.push(Check::at_most(
        "cycle4_closed_form",
        c4.iter().map(|x| (x - 1.0 / 12.0).abs()).fold(0.0, f64::max),
        CLOSED_FORM_TOL,
        "BC(v) = 1/12 on C4",
    ));
    Ok(checks)
}

fn kernel_checks(seed: u64) -> Result<Vec<Check>> {
    let mut graphs = family_graphs(8);
    graphs.extend(random_graphs(seed, 20, 4, 8)?);

    let (mut single_count, mut joint_count) = (0usize, 0usize);
    let mut rows: f64 = 0.0;
    let mut single_stat: f64 = 0.0;
    let mut single_balance: f64 = 0.0;
    let mut joint_stat: f64 = 0.0;
    let mut joint_balance: f64 = 0.0;
    for (_, g) in &graphs {
        let n = g.n();
        for r in 0..n {
            match build_kernel_single(g, r) {
                Ok(k) => {
                    single_count += 1;
                    rows = rows.max(k.max_row_sum_error());
                    single_stat = single_stat.max(k.stationarity_residual());
                    single_balance = single_balance.max(k.detailed_balance_residual());
                }
                Err(Error::AllZeroDependency) => {}
                Err(e) => return Err(e),
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                match build_kernel_joint(g, &[a, b]) {
                    Ok(k) => {
                        joint_count += 1;
                        rows = rows.max(k.max_row_sum_error());
                        joint_stat = joint_stat.max(k.stationarity_residual());
                        joint_balance = joint_balance.max(k.detailed_balance_residual());
                    }
                    Err(Error::AllZeroDependency) => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }
    let scope = format!("{} graphs with n <= 8", graphs.len());
    Ok(vec![
        Check::at_most("row_sums", rows, KERNEL_TOL, scope.clone()),
        Check::at_most(
            "single_stationarity",
            single_stat,
            KERNEL_TOL,
            format!("{single_count} single-space kernels over {scope}"),
        ),
        Check::at_most(
            "single_detailed_balance",
            single_balance,
            KERNEL_TOL,
            scope.clone(),
        ),
        Check::at_most(
            "joint_stationarity",
            joint_stat,
            KERNEL_TOL,
            format!("{joint_count} joint kernels (|R| = 2) over {scope}"),
        ),
        Check::at_most("joint_detailed_balance", joint_balance, KERNEL_TOL, scope),
    ])
}

fn ratio_identity_checks(seed: u64) -> Result<Vec<Check>> {
    let graphs = random_graphs(seed, RANDOM_GRAPHS, 5, 10)?;
    let mut pairs = 0usize;
    // no source depends on both vertices: both sides of the ratio are 0/0
    let mut degenerate = 0usize;
    let mut worst: f64 = 0.0;
    let mut clamp_worst: f64 = 0.0;
    for (_, g) in &graphs {
        let bc = exact_betweenness(g)?.bc;
        let positive: Vec<usize> = (0..g.n()).filter(|&v| bc[v] > 0.0).collect();

        let mut ws = DependencyWorkspace::new();
        let mut deps = Vec::with_capacity(g.n());
        for v in 0..g.n() {
            deps.push(ws.dependencies(g, v)?.to_vec());
        }

        for (x, &a) in positive.iter().enumerate() {
            for &b in &positive[x + 1..] {
                pairs += 1;
                match ratio_identity_check(g, a, b) {
                    Ok(id) => worst = worst.max(id.abs_diff()),
                    Err(Error::ZeroDenominator) => degenerate += 1,
                    Err(e) => return Err(e),
                }

                let (mut lhs, mut rhs) = (0.0, 0.0);
                for d in &deps {
                    lhs += d[a] * clamped_ratio(d[b], d[a]);
                    rhs += d[b] * clamped_ratio(d[a], d[b]);
                }
                clamp_worst = clamp_worst.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0));
            }
        }
    }
    Ok(vec![
        Check::at_most(
            "ratio_identity",
            worst,
            IDENTITY_TOL,
            format!(
                "{pairs} pairs with positive betweenness over {RANDOM_GRAPHS} gnp(5..=10, {GNP_P}); \
                 {degenerate} with disjoint dependency support (ratio 0/0) skipped"
            ),
        ),
        Check::at_most(
            "clamped_mass_symmetry",
            clamp_worst,
            IDENTITY_TOL,
            "sum_v d(a) min{1, d(b)/d(a)} = sum_v d(b) min{1, d(a)/d(b)}",
        ),
    ])
}

fn constant_mu_checks() -> Result<Vec<Check>> {
    let mut worst_mu: f64 = 0.0;
    for k in 3..=20 {
        let g = generate(&GeneratorSpec::TwoBlocksCut { k1: k, k2: k })?;
        worst_mu = worst_mu.max(mu_exact(&g, 0)?.mu);
    }
    let mut star_err: f64 = 0.0;
    for n in 4..=50 {
        let g = generate(&GeneratorSpec::Star(n))?;
        let expected = n as f64 / (n as f64 - 1.0);
        star_err = star_err.max((mu_exact(&g, 0)?.mu - expected).abs());
    }
    Ok(vec![
        Check::at_most(
            "two_blocks_cut_mu_bounded",
            worst_mu,
            CONSTANT_MU_BOUND,
            "max mu(cut vertex) over two_blocks_cut(k, k), k in 3..=20",
        ),
        Check::at_most(
            "star_center_mu_closed_form",
            star_err,
            CLOSED_FORM_TOL,
            "mu(center of star_n) = n/(n-1) for n in 4..=50",
        ),
    ])
}

fn coverage_checks(seed: u64) -> Result<Vec<Check>> {
    let ceiling = failure_ceiling(COVERAGE_DELTA, COVERAGE_RUNS);
    let mut checks = Vec::new();
    for spec in [
        GeneratorSpec::Star(8),
        GeneratorSpec::TwoBlocksCut { k1: 5, k2: 5 },
    ] {
        let g = generate(&spec)?;
        let cov = single_coverage(&g, 0, COVERAGE_EPSILON, COVERAGE_DELTA, COVERAGE_RUNS, seed)?;
        let within = cov.fraction_within_exact();
        let detail = format!(
            "T = {}, mu = {:.6}, exact BC = {:.6}, chain-average limit = {:.6}",
            cov.iterations, cov.mu, cov.exact_bc, cov.limit
        );
        checks.push(Check::at_least(
            format!("{spec}:within_eps_of_exact_bc"),
            within,
            COVERAGE_MIN_FRACTION,
            detail.clone(),
        ));
        checks.push(Check::at_most(
            format!("{spec}:failure_fraction_vs_exact_bc"),
            1.0 - within,
            ceiling,
            detail.clone(),
        ));
        checks.push(Check::at_most(
            format!("{spec}:failure_fraction_vs_chain_limit"),
            1.0 - cov.fraction_within_limit(),
            ceiling,
            detail,
        ));
    }

    let g = generate(&GeneratorSpec::Path(8))?;
    let targets = [3, 4];
    for (r_i, r_j) in [(3, 4), (4, 3)] {
        let cov = joint_coverage(
            &g,
            &targets,
            r_i,
            r_j,
            COVERAGE_EPSILON,
            COVERAGE_DELTA,
            COVERAGE_RUNS,
            seed,
        )?;
        let detail = format!(
            "R = {targets:?}, T = {}, |M(j)| planned {} / min achieved {}, mu_j = {:.6}, exact relative = {:.6}, stationary relative = {:.6}",
            cov.iterations,
            cov.stratum_target,
            cov.min_stratum(),
            cov.mu_j,
            cov.exact_relative,
            cov.stationary_relative
        );
        checks.push(Check::at_most(
            format!("path:8:rel({r_i}|{r_j}):failure_fraction_vs_exact_relative"),
            1.0 - cov.fraction_within_exact(),
            ceiling,
            detail.clone(),
        ));
        checks.push(Check::at_most(
            format!("path:8:rel({r_i}|{r_j}):failure_fraction_vs_stationary_relative"),
            1.0 - cov.fraction_within_stationary(),
            ceiling,
            detail,
        ));
    }
    Ok(checks)
}
