//! Exact dependency scores and betweenness centrality (Brandes accumulation).
//!
//! For a source `s`, the dependency of `s` on `v` is
//!
//! ```text
//! δ_s•(v) = Σ_{t ≠ s, v} σ_st(v) / σ_st
//! ```
//!
//! and is accumulated backwards over the shortest-path DAG rooted at `s`:
//!
//! ```text
//! δ_s•(v) = Σ_{w : v ∈ P_s(w)} (σ_sv / σ_sw) · (1 + δ_s•(w))
//! ```
//!
//! Betweenness is normalized by `1 / (n (n - 1))`; dependency scores are not.

use crate::error::Result;
use crate::graph::{Graph, Vertex};
use crate::spd::{shortest_path_dag, ShortestPathDag};

#[derive(Debug, Clone, PartialEq)]
pub struct DependencyVector {
    pub source: Vertex,
    pub delta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetweennessVector {
    pub bc: Vec<f64>,
}

/// Reusable scratch space for repeated dependency accumulations on one graph.
///
/// Single-owner; each sampler chain keeps its own.
#[derive(Debug, Clone)]
pub struct DependencyWorkspace {
    dag: Option<ShortestPathDag>,
    delta: Vec<f64>,
}

impl Default for DependencyWorkspace {
    fn default() -> Self {
        Self::new()
    }
}

impl DependencyWorkspace {
    pub fn new() -> Self {
        DependencyWorkspace {
            dag: None,
            delta: Vec::new(),
        }
    }

    /// Dependencies of `source` on every vertex. The slice is valid until the next call.
    pub fn dependencies(&mut self, g: &Graph, source: Vertex) -> Result<&[f64]> {
        let dag = match &mut self.dag {
            Some(dag) => {
                dag.rebuild(g, source)?;
                dag
            }
            slot => slot.insert(shortest_path_dag(g, source)?),
        };
        self.delta.clear();
        self.delta.resize(g.n(), 0.0);
        for &w in dag.order.iter().rev() {
            let coeff = (1.0 + self.delta[w]) / dag.sigma[w] as f64;
            for &v in &dag.preds[w] {
                self.delta[v] += dag.sigma[v] as f64 * coeff;
            }
        }
        self.delta[source] = 0.0;
        Ok(&self.delta)
    }
}

pub fn dependency_vector(g: &Graph, source: Vertex) -> Result<DependencyVector> {
    let mut ws = DependencyWorkspace::new();
    let delta = ws.dependencies(g, source)?.to_vec();
    Ok(DependencyVector { source, delta })
}

/// `δ_s•(r)`: full accumulation from `s`, projected onto `r`.
pub fn dependency_on_target(g: &Graph, source: Vertex, target: Vertex) -> Result<f64> {
    g.check_vertex(target)?;
    let mut ws = DependencyWorkspace::new();
    Ok(ws.dependencies(g, source)?[target])
}

/// Dependencies of every source on `target`, indexed by source.
pub fn dependencies_on_target(g: &Graph, target: Vertex) -> Result<Vec<f64>> {
    g.check_vertex(target)?;
    let mut ws = DependencyWorkspace::new();
    (0..g.n())
        .map(|s| ws.dependencies(g, s).map(|d| d[target]))
        .collect()
}

fn normalizer(n: usize) -> f64 {
    if n < 2 {
        0.0
    } else {
        1.0 / (n as f64 * (n as f64 - 1.0))
    }
}

/// Exact normalized betweenness of every vertex. Sources are summed in ascending order.
pub fn exact_betweenness(g: &Graph) -> Result<BetweennessVector> {
    let n = g.n();
    let mut ws = DependencyWorkspace::new();
    let mut sums = vec![0.0; n];
    for s in 0..n {
        let delta = ws.dependencies(g, s)?;
        for (acc, d) in sums.iter_mut().zip(delta) {
            *acc += d;
        }
    }
    let scale = normalizer(n);
    Ok(BetweennessVector {
        bc: sums.into_iter().map(|x| x * scale).collect(),
    })
}

/// Exact normalized betweenness of `r`; bit-identical to `exact_betweenness(g).bc[r]`.
pub fn exact_betweenness_single(g: &Graph, r: Vertex) -> Result<f64> {
    g.check_vertex(r)?;
    let mut ws = DependencyWorkspace::new();
    let mut sum = 0.0;
    for s in 0..g.n() {
        sum += ws.dependencies(g, s)?[r];
    }
    Ok(sum * normalizer(g.n()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;

    fn p4() -> Graph {
        parse_edge_list("a b\nb c\nc d", false).unwrap()
    }

    fn c4() -> Graph {
        parse_edge_list("a b\nb c\nc d\nd a", false).unwrap()
    }

    fn star(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|l| (0, l))).unwrap()
    }

    #[test]
    fn path4_dependencies_from_end() {
        let dv = dependency_vector(&p4(), 0).unwrap();
        assert_eq!(dv.delta, vec![0.0, 2.0, 1.0, 0.0]);
    }

    #[test]
    fn star_leaf_source_loads_center() {
        let g = star(5);
        let dv = dependency_vector(&g, 1).unwrap();
        assert_eq!(dv.delta[0], 3.0);
        assert!(dv.delta[1..].iter().all(|&d| d == 0.0));
    }

    #[test]
    fn self_dependency_is_zero() {
        for g in [p4(), c4(), star(6)] {
            for s in 0..g.n() {
                assert_eq!(dependency_on_target(&g, s, s).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn single_target_values() {
        assert_eq!(dependency_on_target(&p4(), 0, 2).unwrap(), 1.0);
        assert_eq!(dependency_on_target(&c4(), 0, 1).unwrap(), 0.5);
        assert!(dependency_on_target(&p4(), 0, 9).is_err());
    }

    #[test]
    fn closed_form_betweenness() {
        let p3 = parse_edge_list("a b\nb c", false).unwrap();
        assert_eq!(exact_betweenness(&p3).unwrap().bc, vec![0.0, 1.0 / 3.0, 0.0]);

        let bc = exact_betweenness(&star(5)).unwrap().bc;
        assert!((bc[0] - 0.6).abs() < 1e-12);
        assert!(bc[1..].iter().all(|&x| x == 0.0));

        for x in exact_betweenness(&c4()).unwrap().bc {
            assert!((x - 1.0 / 12.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_vertex_matches_vector_bitwise() {
        assert!((exact_betweenness_single(&p4(), 1).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(exact_betweenness_single(&star(5), 3).unwrap(), 0.0);
        assert!((exact_betweenness_single(&c4(), 0).unwrap() - 1.0 / 12.0).abs() < 1e-15);

        let g = parse_edge_list("a b\nb c\nc d\nd a\na e\ne f\nf c\nb f", false).unwrap();
        let all = exact_betweenness(&g).unwrap().bc;
        for (r, bc) in all.iter().enumerate() {
            assert_eq!(exact_betweenness_single(&g, r).unwrap().to_bits(), bc.to_bits());
        }
    }

    #[test]
    fn weighted_accumulation_uses_dijkstra_dag() {
        // heavy a-c edge forces both a->c paths through b
        let g = parse_edge_list("a b 1\nb c 1\na c 3", true).unwrap();
        let bc = exact_betweenness(&g).unwrap().bc;
        assert!((bc[1] - 2.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn workspace_reuse_matches_fresh() {
        let g = c4();
        let mut ws = DependencyWorkspace::new();
        for s in [2, 0, 3, 1, 0] {
            let reused = ws.dependencies(&g, s).unwrap().to_vec();
            assert_eq!(reused, dependency_vector(&g, s).unwrap().delta);
        }
    }
}
