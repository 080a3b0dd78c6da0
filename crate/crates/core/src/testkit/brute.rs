//! Betweenness by definition: all-pairs distances from Floyd–Warshall, then
//! every shortest path enumerated explicitly. Shares no code with the
//! shortest-path DAG or the Brandes accumulation.

use crate::brandes::BetweennessVector;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

pub const BRUTE_FORCE_MAX_N: usize = 12;

fn same_length(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}

pub fn all_pairs_distances(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.n();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0.0;
    }
    for &(u, v, w) in g.edges() {
        let w = if g.is_weighted() { w } else { 1.0 };
        d[u][v] = d[u][v].min(w);
        d[v][u] = d[v][u].min(w);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Every shortest `s → t` path as a vertex sequence, found by depth-first search
/// that only follows edges staying on some shortest `s → t` route.
pub fn enumerate_shortest_paths(g: &Graph, dist: &[Vec<f64>], s: Vertex, t: Vertex) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    let mut path = vec![s];
    extend(g, dist, s, t, 0.0, &mut path, &mut out);
    out
}

fn extend(
    g: &Graph,
    dist: &[Vec<f64>],
    s: Vertex,
    t: Vertex,
    len: f64,
    path: &mut Vec<Vertex>,
    out: &mut Vec<Vec<Vertex>>,
) {
    let cur = *path.last().expect("path starts at s");
    if cur == t {
        out.push(path.clone());
        return;
    }
    for &(next, w) in g.neighbors(cur) {
        let w = if g.is_weighted() { w } else { 1.0 };
        let reached = len + w;
        if path.contains(&next) {
            continue;
        }
        if same_length(reached, dist[s][next]) && same_length(reached + dist[next][t], dist[s][t]) {
            path.push(next);
            extend(g, dist, s, t, reached, path, out);
            path.pop();
        }
    }
}

pub fn brute_force_betweenness(g: &Graph) -> Result<BetweennessVector> {
    let n = g.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge {
            what: "brute-force betweenness vertex count",
            size: n,
            limit: BRUTE_FORCE_MAX_N,
        });
    }
    let dist = all_pairs_distances(g);
    let mut bc = vec![0.0; n];
    if n < 2 {
        return Ok(BetweennessVector { bc });
    }
    for s in 0..n {
        for t in 0..n {
            if s == t {
                continue;
            }
            let paths = enumerate_shortest_paths(g, &dist, s, t);
            let mut through = vec![0usize; n];
            for p in &paths {
                for &v in &p[1..p.len() - 1] {
                    through[v] += 1;
                }
            }
            for v in 0..n {
                bc[v] += through[v] as f64 / paths.len() as f64;
            }
        }
    }
    let scale = 1.0 / (n as f64 * (n as f64 - 1.0));
    Ok(BetweennessVector {
        bc: bc.into_iter().map(|x| x * scale).collect(),
    })
}
