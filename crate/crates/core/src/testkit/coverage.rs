//! Replica experiments for the (ε, δ) guarantees.
//!
//! Replica `i` uses seed `base ^ i`. Replicas run on the rayon pool and are
//! collected in index order, so results do not depend on scheduling.

use rayon::prelude::*;

use crate::brandes::exact_betweenness_single;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::joint::{
    planned_total_iterations, relative_bc_estimate, relative_bc_exact, relative_bc_stationary,
    required_samples_joint, run_joint_chain,
};
use crate::single::{
    check_delta, check_epsilon, estimate_bc, estimator_limit, mu_exact, required_samples, run_chain,
    ChainConfig,
};

pub fn replica_seed(base: u64, i: u64) -> u64 {
    base ^ i
}

fn check_runs(runs: usize) -> Result<()> {
    if runs == 0 {
        Err(Error::InvalidParameter("runs must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Fraction of `values` within `epsilon` of `target` (`None` counts as a miss).
pub fn fraction_within<I>(values: I, target: f64, epsilon: f64) -> f64
where
    I: IntoIterator<Item = Option<f64>>,
{
    let (mut hits, mut total) = (0usize, 0usize);
    for v in values {
        total += 1;
        if matches!(v, Some(x) if (x - target).abs() <= epsilon) {
            hits += 1;
        }
    }
    hits as f64 / total as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingleCoverage {
    pub epsilon: f64,
    pub delta: f64,
    pub mu: f64,
    pub iterations: u64,
    pub exact_bc: f64,
    /// Long-run value of the chain average.
    pub limit: f64,
    pub estimates: Vec<f64>,
}

impl SingleCoverage {
    pub fn fraction_within_exact(&self) -> f64 {
        fraction_within(
            self.estimates.iter().copied().map(Some),
            self.exact_bc,
            self.epsilon,
        )
    }

    pub fn fraction_within_limit(&self) -> f64 {
        fraction_within(self.estimates.iter().copied().map(Some), self.limit, self.epsilon)
    }
}

/// Runs `runs` single-space chains of length `required_samples(ε, δ, μ_exact(r))`.
pub fn single_coverage(
    g: &Graph,
    r: Vertex,
    epsilon: f64,
    delta: f64,
    runs: usize,
    seed: u64,
) -> Result<SingleCoverage> {
    check_runs(runs)?;
    check_epsilon(epsilon)?;
    check_delta(delta)?;
    let mu = mu_exact(g, r)?.mu;
    let iterations = required_samples(epsilon, delta, mu)?;
    let estimates = (0..runs as u64)
        .into_par_iter()
        .map(|i| {
            let cfg = ChainConfig::new(r, iterations, replica_seed(seed, i));
            estimate_bc(&run_chain(g, &cfg)?, g)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(SingleCoverage {
        epsilon,
        delta,
        mu,
        iterations,
        exact_bc: exact_betweenness_single(g, r)?,
        limit: estimator_limit(g, r)?,
        estimates,
    })
}

/// Fraction of replicas whose estimate lands within `epsilon` of the exact betweenness.
pub fn coverage_experiment(
    g: &Graph,
    r: Vertex,
    epsilon: f64,
    delta: f64,
    runs: usize,
    seed: u64,
) -> Result<f64> {
    Ok(single_coverage(g, r, epsilon, delta, runs, seed)?.fraction_within_exact())
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointCoverage {
    pub r_i: Vertex,
    pub r_j: Vertex,
    pub epsilon: f64,
    pub delta: f64,
    pub mu_j: f64,
    /// Planned `|M(j)|`.
    pub stratum_target: u64,
    pub iterations: u64,
    /// `BC_{r_j}(r_i)`, uniform average over sources.
    pub exact_relative: f64,
    /// `E_{P_{r_j}}` of the same term: the long-run stratum mean.
    pub stationary_relative: f64,
    /// `None` when `M(j)` came out empty.
    pub estimates: Vec<Option<f64>>,
    pub stratum_sizes: Vec<usize>,
}

impl JointCoverage {
    pub fn fraction_within_exact(&self) -> f64 {
        fraction_within(self.estimates.iter().copied(), self.exact_relative, self.epsilon)
    }

    pub fn fraction_within_stationary(&self) -> f64 {
        fraction_within(
            self.estimates.iter().copied(),
            self.stationary_relative,
            self.epsilon,
        )
    }

    pub fn min_stratum(&self) -> usize {
        self.stratum_sizes.iter().copied().min().unwrap_or(0)
    }
}

/// Runs `runs` joint chains sized so that `M(j)` is expected to reach
/// `required_samples_joint(ε, δ, μ_exact(r_j))`, and records the stratum mean for `(r_i, r_j)`.
#[allow(clippy::too_many_arguments)]
pub fn joint_coverage(
    g: &Graph,
    targets: &[Vertex],
    r_i: Vertex,
    r_j: Vertex,
    epsilon: f64,
    delta: f64,
    runs: usize,
    seed: u64,
) -> Result<JointCoverage> {
    check_runs(runs)?;
    let mu_j = mu_exact(g, r_j)?.mu;
    let stratum_target = required_samples_joint(epsilon, delta, mu_j)?;
    let iterations = planned_total_iterations(g, targets, r_j, stratum_target)?;
    let outcomes = (0..runs as u64)
        .into_par_iter()
        .map(|i| {
            let trace = run_joint_chain(g, targets, iterations, replica_seed(seed, i))?;
            let size = trace.stratum(r_j)?.len();
            match relative_bc_estimate(&trace, r_i, r_j) {
                Ok(x) => Ok((Some(x), size)),
                Err(Error::EmptyStratum { .. }) => Ok((None, size)),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let (estimates, stratum_sizes) = outcomes.into_iter().unzip();
    Ok(JointCoverage {
        r_i,
        r_j,
        epsilon,
        delta,
        mu_j,
        stratum_target,
        iterations,
        exact_relative: relative_bc_exact(g, r_i, r_j)?,
        stationary_relative: relative_bc_stationary(g, r_i, r_j)?,
        estimates,
        stratum_sizes,
    })
}
