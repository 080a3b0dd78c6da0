//! Single-space sampler: an independence Metropolis–Hastings chain on `V(G)`
//! whose target is `P_r[v] ∝ δ_v•(r)`.
//!
//! Each step proposes a vertex uniformly at random and accepts it with
//! probability `min{1, δ_proposed / δ_current}` (zero operands handled by
//! [`clamped_ratio`]). The chain keeps every state `x_0..x_T`, including the
//! initial one and the repeats caused by rejections, and the estimate is
//!
//! ```text
//! (1 / ((T + 1)(n - 1))) · Σ_t δ_{x_t}•(r)
//! ```
//!
//! Note that the long-run value of this average is `E_{P_r}[δ_v•(r)] / (n - 1)`
//! (see [`estimator_limit`]), which coincides with `BC(r)` only when the
//! nonzero dependencies on `r` are all equal to each other and cover every
//! vertex but `r`.

use crate::brandes::{dependencies_on_target, DependencyWorkspace};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::mh::{clamped_ratio, ChainRng, RNG_ALGORITHM};

#[derive(Debug, Clone, PartialEq)]
pub struct ChainConfig {
    pub target: Vertex,
    /// Number of transitions `T`; the chain holds `T + 1` states.
    pub iterations: u64,
    pub seed: u64,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
}

impl ChainConfig {
    pub fn new(target: Vertex, iterations: u64, seed: u64) -> Self {
        ChainConfig {
            target,
            iterations,
            seed,
            epsilon: None,
            delta: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations < 1 {
            return Err(Error::InvalidParameter("iterations must be at least 1".into()));
        }
        if let Some(eps) = self.epsilon {
            check_epsilon(eps)?;
        }
        if let Some(delta) = self.delta {
            check_delta(delta)?;
        }
        Ok(())
    }
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon.is_finite() && epsilon > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "epsilon must be > 0, got {epsilon}"
        )))
    }
}

pub(crate) fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "delta must lie in (0, 1), got {delta}"
        )))
    }
}

fn check_mu(mu: f64) -> Result<()> {
    if mu.is_finite() && mu >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "mu must be finite and >= 1, got {mu}"
        )))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainTrace {
    target: Vertex,
    graph_shape: (usize, usize),
    states: Vec<Vertex>,
    accepted: u64,
    delta_cache: Vec<Option<f64>>,
}

impl ChainTrace {
    pub fn target(&self) -> Vertex {
        self.target
    }

    pub fn states(&self) -> &[Vertex] {
        &self.states
    }

    pub fn iterations(&self) -> u64 {
        self.states.len() as u64 - 1
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    pub fn acceptance_rate(&self) -> f64 {
        self.accepted as f64 / self.iterations() as f64
    }

    /// `δ_v•(r)` if the chain ever evaluated `v`.
    pub fn cached_delta(&self, v: Vertex) -> Option<f64> {
        self.delta_cache.get(v).copied().flatten()
    }

    /// Number of distinct dependency accumulations the chain paid for.
    pub fn evaluations(&self) -> usize {
        self.delta_cache.iter().filter(|d| d.is_some()).count()
    }

    fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.graph_shape != (g.n(), g.m()) {
            return Err(Error::TraceMismatch(format!(
                "trace built on (n, m) = {:?}, graph has ({}, {})",
                self.graph_shape,
                g.n(),
                g.m()
            )));
        }
        Ok(())
    }
}

/// Memoized `v ↦ δ_v•(r)` for a fixed target `r`.
struct TargetDependencies<'g> {
    graph: &'g Graph,
    target: Vertex,
    workspace: DependencyWorkspace,
    cache: Vec<Option<f64>>,
}

impl<'g> TargetDependencies<'g> {
    fn new(graph: &'g Graph, target: Vertex) -> Self {
        TargetDependencies {
            graph,
            target,
            workspace: DependencyWorkspace::new(),
            cache: vec![None; graph.n()],
        }
    }

    fn get(&mut self, v: Vertex) -> Result<f64> {
        if let Some(d) = self.cache[v] {
            return Ok(d);
        }
        let d = self.workspace.dependencies(self.graph, v)?[self.target];
        self.cache[v] = Some(d);
        Ok(d)
    }

    /// Whether any shortest path has `target` as an interior vertex.
    ///
    /// Such a path passes through two neighbours `u, w` of the target, and its
    /// `u..w` segment is itself shortest, so some neighbour has positive
    /// dependency on the target.
    fn carries_traffic(&mut self) -> Result<bool> {
        let graph = self.graph;
        for &(u, _) in graph.neighbors(self.target) {
            if self.get(u)? > 0.0 {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Runs the single-space chain for `cfg.iterations` transitions.
pub fn run_chain(g: &Graph, cfg: &ChainConfig) -> Result<ChainTrace> {
    cfg.validate()?;
    g.check_vertex(cfg.target)?;
    g.assert_connected()?;

    let mut deps = TargetDependencies::new(g, cfg.target);
    if !deps.carries_traffic()? {
        return Err(Error::AllZeroDependency);
    }

    let n = g.n();
    let mut rng = ChainRng::new(cfg.seed);
    let mut states = Vec::with_capacity(cfg.iterations as usize + 1);
    let mut current = rng.propose(n);
    let mut current_delta = deps.get(current)?;
    states.push(current);

    let mut accepted = 0;
    for _ in 0..cfg.iterations {
        let proposal = rng.propose(n);
        let proposal_delta = deps.get(proposal)?;
        if rng.accept(clamped_ratio(proposal_delta, current_delta)) {
            accepted += 1;
            current = proposal;
            current_delta = proposal_delta;
        }
        states.push(current);
    }

    Ok(ChainTrace {
        target: cfg.target,
        graph_shape: (g.n(), g.m()),
        states,
        accepted,
        delta_cache: deps.cache,
    })
}

/// `(1 / ((T + 1)(n - 1))) Σ_{x ∈ states} δ_x•(r)`.
pub fn estimate_bc(trace: &ChainTrace, g: &Graph) -> Result<f64> {
    trace.check_graph(g)?;
    let mut sum = 0.0;
    for &v in &trace.states {
        sum += trace
            .cached_delta(v)
            .ok_or_else(|| Error::TraceMismatch(format!("state {v} has no cached dependency")))?;
    }
    Ok(sum / (trace.states.len() as f64 * (g.n() as f64 - 1.0)))
}

/// Exact long-run value of [`estimate_bc`]: `Σ_v δ_v•(r)² / ((n - 1) Σ_v δ_v•(r))`.
pub fn estimator_limit(g: &Graph, r: Vertex) -> Result<f64> {
    let deps = dependencies_on_target(g, r)?;
    let total: f64 = deps.iter().sum();
    if total == 0.0 {
        return Err(Error::AllZeroDependency);
    }
    let second: f64 = deps.iter().map(|d| d * d).sum();
    Ok(second / (total * (g.n() as f64 - 1.0)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub target: Vertex,
    pub estimate: f64,
    /// `true` when no shortest path passes through the target; the estimate is then exactly 0.
    pub traffic_free: bool,
    pub iterations: u64,
    pub accepted: u64,
    pub evaluations: usize,
    pub seed: u64,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub rng: &'static str,
}

/// Runs the chain and folds the all-zero case into a `traffic_free` report.
pub fn estimate(g: &Graph, cfg: &ChainConfig) -> Result<EstimateReport> {
    let base = EstimateReport {
        target: cfg.target,
        estimate: 0.0,
        traffic_free: false,
        iterations: cfg.iterations,
        accepted: 0,
        evaluations: 0,
        seed: cfg.seed,
        epsilon: cfg.epsilon,
        delta: cfg.delta,
        rng: RNG_ALGORITHM,
    };
    match run_chain(g, cfg) {
        Ok(trace) => Ok(EstimateReport {
            estimate: estimate_bc(&trace, g)?,
            accepted: trace.accepted(),
            evaluations: trace.evaluations(),
            ..base
        }),
        Err(Error::AllZeroDependency) => Ok(EstimateReport {
            traffic_free: true,
            ..base
        }),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MuBound {
    pub mu: f64,
    pub argmax_vertex: Vertex,
    pub mean_delta: f64,
}

/// Tightest `μ(r)` with `δ_v•(r) ≤ μ(r) · mean_v δ_v•(r)` for every `v`.
///
/// Costs `n` dependency accumulations.
pub fn mu_exact(g: &Graph, r: Vertex) -> Result<MuBound> {
    let deps = dependencies_on_target(g, r)?;
    let total: f64 = deps.iter().sum();
    if total == 0.0 {
        return Err(Error::AllZeroDependency);
    }
    let (argmax_vertex, max) = deps.iter().copied().enumerate().fold(
        (0, f64::NEG_INFINITY),
        |best, (v, d)| if d > best.1 { (v, d) } else { best },
    );
    let n = g.n() as f64;
    Ok(MuBound {
        mu: n * max / total,
        argmax_vertex,
        mean_delta: total / n,
    })
}

/// Smallest integer `T ≥ μ² / (2 ε²) · ln(2 / δ)`.
pub fn required_samples(epsilon: f64, delta: f64, mu: f64) -> Result<u64> {
    check_epsilon(epsilon)?;
    check_delta(delta)?;
    check_mu(mu)?;
    let t = (mu * mu / (2.0 * epsilon * epsilon) * (2.0 / delta).ln()).ceil();
    if t >= u64::MAX as f64 {
        return Err(Error::InvalidParameter(format!(
            "required sample count {t} overflows"
        )));
    }
    Ok(t as u64)
}

/// `2 exp{-(T/2)(2ε/μ - 3/T)²}` clamped to `[0, 1]`; exactly 1 once `2ε/μ ≤ 3/T`.
pub fn tail_bound(epsilon: f64, iterations: u64, mu: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    check_mu(mu)?;
    if iterations < 1 {
        return Err(Error::InvalidParameter("iterations must be at least 1".into()));
    }
    let t = iterations as f64;
    let gap = 2.0 * epsilon / mu - 3.0 / t;
    if gap <= 0.0 {
        return Ok(1.0);
    }
    Ok((2.0 * (-(t / 2.0) * gap * gap).exp()).min(1.0))
}
