//! Exact transition matrices of both samplers on tiny graphs.

use crate::brandes::{dependencies_on_target, DependencyWorkspace};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::joint::JointState;
use crate::mh::clamped_ratio;

pub const SINGLE_KERNEL_MAX_N: usize = 8;
pub const JOINT_KERNEL_MAX_STATES: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    /// For the single-space kernel every state has `r` equal to the target.
    pub states: Vec<JointState>,
    /// Row-stochastic: `transition[x][y]` is the probability of moving from `x` to `y`.
    pub transition: Vec<Vec<f64>>,
    /// Target distribution; zero off the support.
    pub pi: Vec<f64>,
}

/// Independence MH kernel with uniform proposal over all states (including the current one).
fn independence_kernel(mass: &[f64]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = mass.len();
    let proposal = 1.0 / n as f64;
    let mut transition = vec![vec![0.0; n]; n];
    for x in 0..n {
        let mut leave = 0.0;
        for y in 0..n {
            if y != x {
                let p = proposal * clamped_ratio(mass[y], mass[x]);
                transition[x][y] = p;
                leave += p;
            }
        }
        transition[x][x] = 1.0 - leave;
    }
    let total: f64 = mass.iter().sum();
    let pi = mass.iter().map(|m| m / total).collect();
    (transition, pi)
}

pub fn build_kernel_single(g: &Graph, r: Vertex) -> Result<KernelMatrix> {
    if g.n() > SINGLE_KERNEL_MAX_N {
        return Err(Error::TooLarge {
            what: "single-space kernel vertex count",
            size: g.n(),
            limit: SINGLE_KERNEL_MAX_N,
        });
    }
    let mass = dependencies_on_target(g, r)?;
    if mass.iter().all(|&d| d == 0.0) {
        return Err(Error::AllZeroDependency);
    }
    let (transition, pi) = independence_kernel(&mass);
    Ok(KernelMatrix {
        states: (0..g.n()).map(|v| JointState { r, v }).collect(),
        transition,
        pi,
    })
}

/// States are ordered `r`-major: `(R[0], 0), (R[0], 1), …, (R[1], 0), …`.
pub fn build_kernel_joint(g: &Graph, targets: &[Vertex]) -> Result<KernelMatrix> {
    let size = g.n() * targets.len();
    if size > JOINT_KERNEL_MAX_STATES {
        return Err(Error::TooLarge {
            what: "joint kernel state count",
            size,
            limit: JOINT_KERNEL_MAX_STATES,
        });
    }
    if targets.len() < 2 {
        return Err(Error::TooFewTargets(targets.len()));
    }
    for &r in targets {
        g.check_vertex(r)?;
    }
    let mut ws = DependencyWorkspace::new();
    let mut by_source = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        by_source.push(ws.dependencies(g, v)?.to_vec());
    }
    let mut states = Vec::with_capacity(size);
    let mut mass = Vec::with_capacity(size);
    for &r in targets {
        for (v, delta) in by_source.iter().enumerate() {
            states.push(JointState { r, v });
            mass.push(delta[r]);
        }
    }
    if mass.iter().all(|&d| d == 0.0) {
        return Err(Error::AllZeroDependency);
    }
    let (transition, pi) = independence_kernel(&mass);
    Ok(KernelMatrix {
        states,
        transition,
        pi,
    })
}

impl KernelMatrix {
    pub fn max_row_sum_error(&self) -> f64 {
        self.transition
            .iter()
            .map(|row| (row.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `max_y |(πP)[y] − π[y]|`.
    pub fn stationarity_residual(&self) -> f64 {
        let n = self.pi.len();
        (0..n)
            .map(|y| {
                let flow: f64 = (0..n).map(|x| self.pi[x] * self.transition[x][y]).sum();
                (flow - self.pi[y]).abs()
            })
            .fold(0.0, f64::max)
    }

    /// `max |π[x] P[x][y] − π[y] P[y][x]|` over pairs of support states.
    pub fn detailed_balance_residual(&self) -> f64 {
        let support: Vec<usize> = (0..self.pi.len()).filter(|&x| self.pi[x] > 0.0).collect();
        let mut worst: f64 = 0.0;
        for &x in &support {
            for &y in &support {
                let lhs = self.pi[x] * self.transition[x][y];
                let rhs = self.pi[y] * self.transition[y][x];
                worst = worst.max((lhs - rhs).abs());
            }
        }
        worst
    }

    pub fn pi_of(&self, state: JointState) -> Option<f64> {
        self.states.iter().position(|&s| s == state).map(|i| self.pi[i])
    }
}
