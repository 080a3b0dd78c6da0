//! Metropolis–Hastings estimation of betweenness centrality.
//!
//! * [`single`]: an independence sampler on `V(G)` targeting `P_r[v] ∝ δ_v•(r)`
//!   for one vertex `r`, with sample-size planning.
//! * [`joint`]: a sampler on `R × V(G)` for relative betweenness and
//!   betweenness ratios within a vertex set `R`.
//! * [`brandes`]: exact dependency scores and betweenness, used both as the
//!   per-sample kernel and as the exact baseline.
//! * [`testkit`]: brute-force oracles, generators, exact kernels and
//!   coverage experiments.

pub mod brandes;
pub mod error;
pub mod graph;
pub mod joint;
pub mod mh;
pub mod single;
pub mod spd;
pub mod testkit;

pub use brandes::{
    dependency_on_target, dependency_vector, exact_betweenness, exact_betweenness_single, BetweennessVector,
    DependencyVector, DependencyWorkspace,
};
pub use error::{Error, Result};
pub use graph::{parse_edge_list, Graph, Vertex};
pub use joint::{
    bc_ratio_estimate, ratio_identity_check, relative_bc_estimate, relative_bc_exact, relative_bc_stationary,
    required_samples_joint, run_joint_chain, JointChainTrace, JointState, RatioIdentity, RelativeScoreReport,
};
pub use mh::{clamped_ratio, RNG_ALGORITHM};
pub use single::{
    estimate_bc, estimator_limit, mu_exact, required_samples, run_chain, tail_bound, ChainConfig, ChainTrace,
    EstimateReport, MuBound,
};
pub use spd::{shortest_path_dag, ShortestPathDag};
