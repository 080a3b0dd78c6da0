//! Shortest-path DAGs: per-source distances, path counts and predecessor lists.
//!
//! Unweighted graphs use BFS; weighted graphs use Dijkstra followed by a
//! predecessor pass with a relative tolerance on `dist[u] + w == dist[v]`.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Relative tolerance for deciding weighted predecessor membership.
pub const DIST_REL_TOL: f64 = 1e-9;

pub(crate) fn dist_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= DIST_REL_TOL * a.abs().max(b.abs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShortestPathDag {
    pub source: Vertex,
    /// Hop count or weighted length; `f64::INFINITY` never survives on a connected graph.
    pub dist: Vec<f64>,
    pub sigma: Vec<u64>,
    pub preds: Vec<Vec<Vertex>>,
    /// Vertices reached from `source` in nondecreasing distance.
    pub order: Vec<Vertex>,
}

impl ShortestPathDag {
    fn with_capacity(n: usize) -> Self {
        ShortestPathDag {
            source: 0,
            dist: vec![f64::INFINITY; n],
            sigma: vec![0; n],
            preds: vec![Vec::new(); n],
            order: Vec::with_capacity(n),
        }
    }

    fn reset(&mut self, n: usize, source: Vertex) {
        self.source = source;
        self.dist.clear();
        self.dist.resize(n, f64::INFINITY);
        self.sigma.clear();
        self.sigma.resize(n, 0);
        self.preds.resize_with(n, Vec::new);
        self.preds.truncate(n);
        self.preds.iter_mut().for_each(Vec::clear);
        self.order.clear();
    }

    /// Recomputes the DAG in place, reusing the existing buffers.
    pub fn rebuild(&mut self, g: &Graph, source: Vertex) -> Result<()> {
        g.check_vertex(source)?;
        self.reset(g.n(), source);
        if g.is_weighted() {
            self.dijkstra(g)
        } else {
            self.bfs(g)
        }
    }

    fn bfs(&mut self, g: &Graph) -> Result<()> {
        let s = self.source;
        self.dist[s] = 0.0;
        self.sigma[s] = 1;
        let mut queue = VecDeque::with_capacity(g.n());
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            self.order.push(v);
            let next = self.dist[v] + 1.0;
            for &(w, _) in g.neighbors(v) {
                if self.dist[w].is_infinite() {
                    self.dist[w] = next;
                    queue.push_back(w);
                }
                if self.dist[w] == next {
                    self.sigma[w] = self.sigma[w]
                        .checked_add(self.sigma[v])
                        .ok_or(Error::SigmaOverflow {
                            source_vertex: s,
                            vertex: w,
                        })?;
                    self.preds[w].push(v);
                }
            }
        }
        Ok(())
    }

    fn dijkstra(&mut self, g: &Graph) -> Result<()> {
        let s = self.source;
        self.dist[s] = 0.0;
        let mut settled = vec![false; g.n()];
        let mut heap = BinaryHeap::new();
        heap.push(Frontier { dist: 0.0, vertex: s });
        while let Some(Frontier { dist, vertex: v }) = heap.pop() {
            if settled[v] {
                continue;
            }
            settled[v] = true;
            for &(w, weight) in g.neighbors(v) {
                let candidate = dist + weight;
                if candidate < self.dist[w] {
                    self.dist[w] = candidate;
                    heap.push(Frontier {
                        dist: candidate,
                        vertex: w,
                    });
                }
            }
        }

        self.order
            .extend((0..g.n()).filter(|&v| self.dist[v].is_finite()));
        let dist = &self.dist;
        self.order
            .sort_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(a.cmp(&b)));

        self.sigma[s] = 1;
        for i in 1..self.order.len() {
            let v = self.order[i];
            let mut sigma = 0u64;
            for &(u, weight) in g.neighbors(v) {
                if self.dist[u] < self.dist[v] && dist_eq(self.dist[u] + weight, self.dist[v]) {
                    sigma = sigma.checked_add(self.sigma[u]).ok_or(Error::SigmaOverflow {
                        source_vertex: s,
                        vertex: v,
                    })?;
                    self.preds[v].push(u);
                }
            }
            self.sigma[v] = sigma;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct Frontier {
    dist: f64,
    vertex: Vertex,
}

impl PartialEq for Frontier {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Frontier {}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frontier {
    // min-heap on distance, ties broken by vertex index
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

/// Builds the shortest-path DAG rooted at `source`.
pub fn shortest_path_dag(g: &Graph, source: Vertex) -> Result<ShortestPathDag> {
    let mut dag = ShortestPathDag::with_capacity(g.n());
    dag.rebuild(g, source)?;
    Ok(dag)
}
