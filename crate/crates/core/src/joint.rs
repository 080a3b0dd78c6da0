//! Joint-space sampler over `R × V(G)` and relative betweenness.
//!
//! States are pairs `(r, v)`. Each step redraws `r'` uniformly from `R` and
//! `v'` uniformly from `V(G)`, and accepts with
//! `min{1, δ_v'•(r') / δ_v•(r)}`, so the chain targets
//! `P[r, v] ∝ δ_v•(r)`. Restricted to the states with a fixed `r_j`
//! (the stratum `M(j)`), the samples follow `P_{r_j}[v] ∝ δ_v•(r_j)`.
//!
//! Two exact quantities are exposed for a pair `(r_i, r_j)`:
//!
//! * [`relative_bc_exact`]: the uniform average
//!   `BC_{r_j}(r_i) = (1/n) Σ_v min{1, δ_v•(r_i) / δ_v•(r_j)}`;
//! * [`relative_bc_stationary`]: the same term averaged under `P_{r_j}`,
//!   which is what the stratum mean [`relative_bc_estimate`] converges to and
//!   whose two directions have ratio `BC(r_i) / BC(r_j)`.

use crate::brandes::{exact_betweenness_single, DependencyWorkspace};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::mh::{clamped_ratio, ChainRng};
use crate::single::required_samples;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct JointState {
    pub r: Vertex,
    pub v: Vertex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointChainTrace {
    targets: Vec<Vertex>,
    graph_shape: (usize, usize),
    states: Vec<JointState>,
    accepted: u64,
    /// `delta_cache[v][k] = δ_v•(targets[k])`, filled for every evaluated `v`.
    delta_cache: Vec<Option<Vec<f64>>>,
    strata: Vec<Vec<Vertex>>,
}

impl JointChainTrace {
    pub fn targets(&self) -> &[Vertex] {
        &self.targets
    }

    pub fn states(&self) -> &[JointState] {
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

    fn slot(&self, r: Vertex) -> Result<usize> {
        self.targets
            .iter()
            .position(|&t| t == r)
            .ok_or_else(|| Error::InvalidParameter(format!("vertex {r} is not in the target set")))
    }

    /// `M(r)`: the `v`-components of the states whose `r`-component is `r`, in chain order.
    pub fn stratum(&self, r: Vertex) -> Result<&[Vertex]> {
        Ok(&self.strata[self.slot(r)?])
    }

    pub fn stratum_sizes(&self) -> Vec<(Vertex, usize)> {
        self.targets
            .iter()
            .zip(&self.strata)
            .map(|(&r, m)| (r, m.len()))
            .collect()
    }

    pub fn cached_delta(&self, r: Vertex, v: Vertex) -> Option<f64> {
        let k = self.slot(r).ok()?;
        self.delta_cache.get(v)?.as_ref().map(|d| d[k])
    }

    pub fn evaluations(&self) -> usize {
        self.delta_cache.iter().filter(|d| d.is_some()).count()
    }

    pub fn check_graph(&self, g: &Graph) -> Result<()> {
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

/// Memoized `v ↦ (δ_v•(r))_{r ∈ R}`; one accumulation per distinct `v`.
struct SetDependencies<'g> {
    graph: &'g Graph,
    targets: &'g [Vertex],
    workspace: DependencyWorkspace,
    cache: Vec<Option<Vec<f64>>>,
}

impl<'g> SetDependencies<'g> {
    fn new(graph: &'g Graph, targets: &'g [Vertex]) -> Self {
        SetDependencies {
            graph,
            targets,
            workspace: DependencyWorkspace::new(),
            cache: vec![None; graph.n()],
        }
    }

    fn get(&mut self, v: Vertex, k: usize) -> Result<f64> {
        if self.cache[v].is_none() {
            let delta = self.workspace.dependencies(self.graph, v)?;
            self.cache[v] = Some(self.targets.iter().map(|&r| delta[r]).collect());
        }
        Ok(self.cache[v].as_ref().expect("filled above")[k])
    }

    fn any_traffic(&mut self) -> Result<bool> {
        let graph = self.graph;
        for (k, &r) in self.targets.iter().enumerate() {
            for &(u, _) in graph.neighbors(r) {
                if self.get(u, k)? > 0.0 {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

fn validate_targets(g: &Graph, targets: &[Vertex]) -> Result<()> {
    if targets.len() < 2 {
        return Err(Error::TooFewTargets(targets.len()));
    }
    for (i, &r) in targets.iter().enumerate() {
        g.check_vertex(r)?;
        if targets[..i].contains(&r) {
            return Err(Error::DuplicateTarget(r));
        }
    }
    Ok(())
}

/// Runs the joint-space chain for `iterations` transitions.
pub fn run_joint_chain(g: &Graph, targets: &[Vertex], iterations: u64, seed: u64) -> Result<JointChainTrace> {
    validate_targets(g, targets)?;
    if iterations < 1 {
        return Err(Error::InvalidParameter("iterations must be at least 1".into()));
    }
    g.assert_connected()?;

    let mut deps = SetDependencies::new(g, targets);
    if !deps.any_traffic()? {
        return Err(Error::AllZeroDependency);
    }

    let n = g.n();
    let mut rng = ChainRng::new(seed);
    let mut strata = vec![Vec::new(); targets.len()];
    let mut states = Vec::with_capacity(iterations as usize + 1);

    let mut k = rng.propose(targets.len());
    let mut v = rng.propose(n);
    let mut current_delta = deps.get(v, k)?;
    states.push(JointState { r: targets[k], v });
    strata[k].push(v);

    let mut accepted = 0;
    for _ in 0..iterations {
        let k_new = rng.propose(targets.len());
        let v_new = rng.propose(n);
        let proposal_delta = deps.get(v_new, k_new)?;
        if rng.accept(clamped_ratio(proposal_delta, current_delta)) {
            accepted += 1;
            k = k_new;
            v = v_new;
            current_delta = proposal_delta;
        }
        states.push(JointState { r: targets[k], v });
        strata[k].push(v);
    }

    Ok(JointChainTrace {
        targets: targets.to_vec(),
        graph_shape: (g.n(), g.m()),
        states,
        accepted,
        delta_cache: deps.cache,
        strata,
    })
}

/// Stratum mean `(1/|M(j)|) Σ_{v ∈ M(j)} min{1, δ_v•(r_i) / δ_v•(r_j)}`.
pub fn relative_bc_estimate(trace: &JointChainTrace, r_i: Vertex, r_j: Vertex) -> Result<f64> {
    let i = trace.slot(r_i)?;
    let j = trace.slot(r_j)?;
    let stratum = &trace.strata[j];
    if stratum.is_empty() {
        return Err(Error::EmptyStratum { vertex: r_j });
    }
    let mut sum = 0.0;
    for &v in stratum {
        let d = trace.delta_cache[v]
            .as_ref()
            .ok_or_else(|| Error::TraceMismatch(format!("state vertex {v} has no cached dependency")))?;
        sum += clamped_ratio(d[i], d[j]);
    }
    Ok(sum / stratum.len() as f64)
}

/// Estimate of `BC(r_i) / BC(r_j)` from one joint chain.
///
/// The denominator (sampled from `M(i)`) is checked first, so a vanishing
/// denominator is reported even when `M(j)` is empty.
pub fn bc_ratio_estimate(trace: &JointChainTrace, r_i: Vertex, r_j: Vertex) -> Result<f64> {
    let den = relative_bc_estimate(trace, r_j, r_i)?;
    if den == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    let num = relative_bc_estimate(trace, r_i, r_j)?;
    Ok(num / den)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelativeScoreReport {
    pub r_i: Vertex,
    pub r_j: Vertex,
    /// Estimate of `BC_{r_j}(r_i)`; `None` when `M(j)` is empty.
    pub rel_ij: Option<f64>,
    /// Estimate of `BC_{r_i}(r_j)`; `None` when `M(i)` is empty.
    pub rel_ji: Option<f64>,
    /// `rel_ij / rel_ji`; `None` when either side is missing or `rel_ji == 0`.
    pub ratio: Option<f64>,
    pub m_i: usize,
    pub m_j: usize,
}

pub fn relative_report(trace: &JointChainTrace, r_i: Vertex, r_j: Vertex) -> Result<RelativeScoreReport> {
    let optional = |res: Result<f64>| match res {
        Ok(x) => Ok(Some(x)),
        Err(Error::EmptyStratum { .. }) => Ok(None),
        Err(e) => Err(e),
    };
    let rel_ij = optional(relative_bc_estimate(trace, r_i, r_j))?;
    let rel_ji = optional(relative_bc_estimate(trace, r_j, r_i))?;
    let ratio = match (rel_ij, rel_ji) {
        (Some(a), Some(b)) if b > 0.0 => Some(a / b),
        _ => None,
    };
    Ok(RelativeScoreReport {
        r_i,
        r_j,
        rel_ij,
        rel_ji,
        ratio,
        m_i: trace.stratum(r_i)?.len(),
        m_j: trace.stratum(r_j)?.len(),
    })
}

/// `(δ_v•(r_i), δ_v•(r_j))` for every source `v`, in ascending order.
fn pair_dependencies(g: &Graph, r_i: Vertex, r_j: Vertex) -> Result<Vec<(f64, f64)>> {
    g.check_vertex(r_i)?;
    g.check_vertex(r_j)?;
    let mut ws = DependencyWorkspace::new();
    (0..g.n())
        .map(|v| ws.dependencies(g, v).map(|d| (d[r_i], d[r_j])))
        .collect()
}

/// `BC_{r_j}(r_i) = (1/n) Σ_v min{1, δ_v•(r_i) / δ_v•(r_j)}` by direct summation.
pub fn relative_bc_exact(g: &Graph, r_i: Vertex, r_j: Vertex) -> Result<f64> {
    let pairs = pair_dependencies(g, r_i, r_j)?;
    let sum: f64 = pairs.iter().map(|&(di, dj)| clamped_ratio(di, dj)).sum();
    Ok(sum / g.n() as f64)
}

/// `E_{P_{r_j}}[min{1, δ_v•(r_i) / δ_v•(r_j)}]`, the limit of [`relative_bc_estimate`].
pub fn relative_bc_stationary(g: &Graph, r_i: Vertex, r_j: Vertex) -> Result<f64> {
    let pairs = pair_dependencies(g, r_i, r_j)?;
    let mass: f64 = pairs.iter().map(|&(_, dj)| dj).sum();
    if mass == 0.0 {
        return Err(Error::AllZeroDependency);
    }
    let weighted: f64 = pairs.iter().map(|&(di, dj)| dj * clamped_ratio(di, dj)).sum();
    Ok(weighted / mass)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioIdentity {
    /// `BC(r_i) / BC(r_j)` from exact betweenness.
    pub lhs: f64,
    /// `E_{P_{r_j}}[min{1, δ(r_i)/δ(r_j)}] / E_{P_{r_i}}[min{1, δ(r_j)/δ(r_i)}]`.
    pub rhs: f64,
}

impl RatioIdentity {
    pub fn abs_diff(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

/// Both sides of the betweenness-ratio identity, computed exactly.
pub fn ratio_identity_check(g: &Graph, r_i: Vertex, r_j: Vertex) -> Result<RatioIdentity> {
    let bc_i = exact_betweenness_single(g, r_i)?;
    let bc_j = exact_betweenness_single(g, r_j)?;
    for (r, bc) in [(r_i, bc_i), (r_j, bc_j)] {
        if bc == 0.0 {
            return Err(Error::ZeroBetweenness { vertex: r });
        }
    }
    let den = relative_bc_stationary(g, r_j, r_i)?;
    if den == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(RatioIdentity {
        lhs: bc_i / bc_j,
        rhs: relative_bc_stationary(g, r_i, r_j)? / den,
    })
}

/// Stratum size `|M(j)| ≥ μ(r_j)² / (2 ε²) · ln(2 / δ)`.
pub fn required_samples_joint(epsilon: f64, delta: f64, mu_j: f64) -> Result<u64> {
    required_samples(epsilon, delta, mu_j)
}

/// Total transitions expected to yield `stratum_size` states in `M(j)`.
///
/// Uses the exact stratum masses (`n` accumulations), so it is a planning aid
/// for desk-scale runs: `T = ⌈|M(j)| · Σ_{r,v} δ_v•(r) / Σ_v δ_v•(r_j)⌉`.
pub fn planned_total_iterations(
    g: &Graph,
    targets: &[Vertex],
    r_j: Vertex,
    stratum_size: u64,
) -> Result<u64> {
    validate_targets(g, targets)?;
    let j = targets
        .iter()
        .position(|&t| t == r_j)
        .ok_or_else(|| Error::InvalidParameter(format!("vertex {r_j} is not in the target set")))?;
    let mut ws = DependencyWorkspace::new();
    let mut masses = vec![0.0; targets.len()];
    for v in 0..g.n() {
        let d = ws.dependencies(g, v)?;
        for (m, &r) in masses.iter_mut().zip(targets) {
            *m += d[r];
        }
    }
    if masses[j] == 0.0 {
        return Err(Error::AllZeroDependency);
    }
    let total: f64 = masses.iter().sum();
    Ok((stratum_size as f64 * total / masses[j]).ceil() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;

    // a=0 b=1 c=2 d=3
    fn p4() -> Graph {
        parse_edge_list("a b\nb c\nc d", false).unwrap()
    }

    fn star(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|l| (0, l))).unwrap()
    }

    #[test]
    fn p4_strata_split_evenly() {
        // Σ_v δ_v•(b) = Σ_v δ_v•(c) = 4
        let trace = run_joint_chain(&p4(), &[1, 2], 200_000, 5).unwrap();
        let sizes = trace.stratum_sizes();
        let total = trace.states().len() as f64;
        assert_eq!(sizes.iter().map(|s| s.1).sum::<usize>(), trace.states().len());
        for (_, m) in sizes {
            assert!((m as f64 / total - 0.5).abs() < 0.01);
        }
    }

    #[test]
    fn leaf_target_stratum_is_abandoned() {
        // star center 0 and leaf 1; every δ_v•(1) is 0
        let trace = run_joint_chain(&star(5), &[0, 1], 2000, 8).unwrap();
        let escape = trace.states().iter().position(|s| s.r == 0 && s.v != 0).unwrap();
        assert!(trace.states()[escape..].iter().all(|s| s.r == 0 && s.v != 0));
    }

    #[test]
    fn length_and_partition_contract() {
        let trace = run_joint_chain(&p4(), &[1, 2], 1, 0).unwrap();
        assert_eq!(trace.states().len(), 2);
        let trace = run_joint_chain(&p4(), &[1, 2], 300, 0).unwrap();
        for (k, &r) in trace.targets().iter().enumerate() {
            let from_states: Vec<Vertex> = trace.states().iter().filter(|s| s.r == r).map(|s| s.v).collect();
            assert_eq!(from_states, trace.strata[k]);
        }
    }

    #[test]
    fn target_set_validation() {
        let g = p4();
        assert_eq!(
            run_joint_chain(&g, &[1], 10, 0).unwrap_err(),
            Error::TooFewTargets(1)
        );
        assert_eq!(
            run_joint_chain(&g, &[1, 1], 10, 0).unwrap_err(),
            Error::DuplicateTarget(1)
        );
        assert!(run_joint_chain(&g, &[1, 9], 10, 0).is_err());
        assert!(run_joint_chain(&g, &[1, 2], 0, 0).is_err());
        assert_eq!(
            run_joint_chain(&g, &[0, 3], 10, 0).unwrap_err(),
            Error::AllZeroDependency
        );
    }

    #[test]
    fn exact_relative_values() {
        // δ(b) = (2, 0, 1, 1), δ(c) = (1, 1, 0, 2) over sources a..d
        assert!((relative_bc_exact(&p4(), 1, 2).unwrap() - 0.625).abs() < 1e-15);
        // P_c = (1/4, 1/4, 0, 1/2): 1/4 · 1 + 1/4 · 0 + 1/2 · 1/2
        assert!((relative_bc_stationary(&p4(), 1, 2).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(relative_bc_exact(&p4(), 2, 2).unwrap(), 1.0);
        let c4 = parse_edge_list("a b\nb c\nc d\nd a", false).unwrap();
        // δ(a) = δ(c) = (0, 1/2, 0, 1/2), δ(b) = δ(d) = (1/2, 0, 1/2, 0)
        for i in 0..4 {
            for j in 0..4 {
                let expected = if (i + j) % 2 == 0 { 1.0 } else { 0.5 };
                assert_eq!(relative_bc_exact(&c4, i, j).unwrap(), expected, "({i}, {j})");
            }
        }
        // leaf vs center of star_5: only v = center has 0/0
        assert!((relative_bc_exact(&star(5), 1, 0).unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(relative_bc_stationary(&star(5), 1, 0).unwrap(), 0.0);
    }

    #[test]
    fn estimates_converge_to_stationary_values() {
        let g = p4();
        let trace = run_joint_chain(&g, &[1, 2], 200_000, 11).unwrap();
        let est = relative_bc_estimate(&trace, 1, 2).unwrap();
        assert!((est - 0.5).abs() < 0.01, "{est}");
        let ratio = bc_ratio_estimate(&trace, 1, 2).unwrap();
        assert!((ratio - 1.0).abs() < 0.05, "{ratio}");
    }

    #[test]
    fn self_pair_is_exactly_one() {
        let trace = run_joint_chain(&p4(), &[1, 2], 500, 2).unwrap();
        assert_eq!(relative_bc_estimate(&trace, 1, 1).unwrap(), 1.0);
        assert_eq!(bc_ratio_estimate(&trace, 2, 2).unwrap(), 1.0);
    }

    #[test]
    fn empty_stratum_and_zero_denominator() {
        let g = star(5);
        // a start at (center, leaf) has positive mass, so M(leaf) stays empty
        let trace = (0..64)
            .map(|seed| run_joint_chain(&g, &[0, 1], 500, seed).unwrap())
            .find(|t| t.states()[0].r == 0 && t.states()[0].v != 0)
            .unwrap();
        assert_eq!(
            relative_bc_estimate(&trace, 0, 1).unwrap_err(),
            Error::EmptyStratum { vertex: 1 }
        );
        assert_eq!(
            bc_ratio_estimate(&trace, 0, 1).unwrap_err(),
            Error::ZeroDenominator
        );

        let report = relative_report(&trace, 0, 1).unwrap();
        assert_eq!(report.rel_ij, None);
        assert_eq!(report.rel_ji, Some(0.0));
        assert_eq!(report.ratio, None);
        assert_eq!(report.m_i + report.m_j, 501);
    }

    #[test]
    fn ratio_identity_on_p4_and_barbell() {
        let id = ratio_identity_check(&p4(), 1, 2).unwrap();
        assert!((id.lhs - 1.0).abs() < 1e-12 && (id.rhs - 1.0).abs() < 1e-12);

        // two K5 joined through the path 4 - 5 - 6 - 7
        let mut edges = Vec::new();
        for (lo, hi) in [(0usize, 5usize), (7, 12)] {
            for a in lo..hi {
                for b in a + 1..hi {
                    edges.push((a, b));
                }
            }
        }
        edges.extend([(4, 5), (5, 6), (6, 7)]);
        let g = Graph::from_edges(12, edges).unwrap();
        let id = ratio_identity_check(&g, 5, 6).unwrap();
        assert!(id.abs_diff() < 1e-9, "{id:?}");
        let id = ratio_identity_check(&g, 4, 6).unwrap();
        assert!(id.abs_diff() < 1e-9, "{id:?}");

        assert_eq!(
            ratio_identity_check(&star(5), 0, 1).unwrap_err(),
            Error::ZeroBetweenness { vertex: 1 }
        );
    }

    #[test]
    fn uniform_average_does_not_satisfy_ratio_identity() {
        // path 0-1-...-7 with (1, 2): BC ratio 19/27 ≈ 0.7037, uniform ratio ≈ 0.6151
        let g = Graph::from_edges(8, (0..7).map(|i| (i, i + 1))).unwrap();
        let id = ratio_identity_check(&g, 1, 2).unwrap();
        assert!(id.abs_diff() < 1e-12);
        let uniform = relative_bc_exact(&g, 1, 2).unwrap() / relative_bc_exact(&g, 2, 1).unwrap();
        assert!((uniform - id.lhs).abs() > 0.05);
    }

    #[test]
    fn planning_helpers() {
        assert_eq!(required_samples_joint(0.1, 0.05, 1.25).unwrap(), 289);
        // μ = 1: ln(2/δ) / (2 ε²)
        assert_eq!(
            required_samples_joint(0.1, 0.05, 1.0).unwrap(),
            ((2.0f64 / 0.05).ln() / 0.02).ceil() as u64
        );
        // equal masses on P4 → total is twice the stratum
        assert_eq!(planned_total_iterations(&p4(), &[1, 2], 2, 289).unwrap(), 578);
        assert!(planned_total_iterations(&p4(), &[0, 2], 0, 10).is_err());
    }

    #[test]
    fn joint_determinism() {
        let g = parse_edge_list("a b\nb c\nc d\nd e\ne a\nb e", false).unwrap();
        let a = run_joint_chain(&g, &[0, 1, 3], 400, 21).unwrap();
        let b = run_joint_chain(&g, &[0, 1, 3], 400, 21).unwrap();
        assert_eq!(a, b);
    }
}
