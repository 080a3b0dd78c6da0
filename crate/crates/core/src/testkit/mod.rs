//! Ground truth for the samplers: brute-force betweenness, graph generators,
//! exact transition kernels, replica coverage experiments and the named
//! verification suites built from them.

pub mod brute;
pub mod coverage;
pub mod generators;
pub mod kernel;
pub mod suites;

pub use brute::{brute_force_betweenness, enumerate_shortest_paths};
pub use coverage::{coverage_experiment, joint_coverage, single_coverage, JointCoverage, SingleCoverage};
pub use generators::{generate, GeneratorSpec};
pub use kernel::{build_kernel_joint, build_kernel_single, KernelMatrix};
pub use suites::{run_suite, Check, Suite, SuiteReport};
