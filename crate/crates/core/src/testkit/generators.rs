//! Deterministic graph families, addressable by spec strings such as
//! `star:5`, `barbell:5:2`, `two_blocks_cut:5:5` or `gnp:8:0.4:7`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Connectivity retries for `gnp` before giving up.
pub const GNP_MAX_ATTEMPTS: u32 = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorSpec {
    /// `0 - 1 - … - (n-1)`.
    Path(usize),
    Cycle(usize),
    /// Center `0`, leaves `1..n`; `n` counts the center.
    Star(usize),
    Complete(usize),
    /// Two `K_k` joined by a path of `bridge_len` extra vertices (networkx layout):
    /// clique `0..k`, bridge `k..k+bridge_len`, clique `k+bridge_len..2k+bridge_len`.
    Barbell {
        k: usize,
        bridge_len: usize,
    },
    /// Cut vertex `0` adjacent to every vertex of a `K_k1` (`1..=k1`) and a `K_k2` (the rest).
    TwoBlocksCut {
        k1: usize,
        k2: usize,
    },
    /// Erdős–Rényi `G(n, p)`, redrawn until connected.
    Gnp {
        n: usize,
        p: f64,
        seed: u64,
    },
}

impl GeneratorSpec {
    /// Vertex the family is built around: star center, cut vertex, first bridge vertex.
    pub fn focal_vertex(&self) -> Option<Vertex> {
        match *self {
            GeneratorSpec::Star(_) | GeneratorSpec::TwoBlocksCut { .. } => Some(0),
            GeneratorSpec::Barbell { k, bridge_len } if bridge_len > 0 => Some(k),
            _ => None,
        }
    }
}

fn clique(edges: &mut Vec<(Vertex, Vertex)>, vertices: std::ops::Range<Vertex>) {
    for a in vertices.clone() {
        for b in a + 1..vertices.end {
            edges.push((a, b));
        }
    }
}

fn need(cond: bool, spec: &GeneratorSpec) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidGeneratorSpec(spec.to_string()))
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Graph> {
    let mut edges = Vec::new();
    match *spec {
        GeneratorSpec::Path(n) => {
            need(n >= 2, spec)?;
            edges.extend((0..n - 1).map(|i| (i, i + 1)));
            Graph::from_edges(n, edges)
        }
        GeneratorSpec::Cycle(n) => {
            need(n >= 3, spec)?;
            edges.extend((0..n).map(|i| (i, (i + 1) % n)));
            Graph::from_edges(n, edges)
        }
        GeneratorSpec::Star(n) => {
            need(n >= 2, spec)?;
            edges.extend((1..n).map(|leaf| (0, leaf)));
            Graph::from_edges(n, edges)
        }
        GeneratorSpec::Complete(n) => {
            need(n >= 2, spec)?;
            clique(&mut edges, 0..n);
            Graph::from_edges(n, edges)
        }
        GeneratorSpec::Barbell { k, bridge_len } => {
            need(k >= 2, spec)?;
            let n = 2 * k + bridge_len;
            clique(&mut edges, 0..k);
            clique(&mut edges, k + bridge_len..n);
            // k-1, bridge..., k+bridge_len form a path
            edges.extend((k - 1..k + bridge_len).map(|i| (i, i + 1)));
            Graph::from_edges(n, edges)
        }
        GeneratorSpec::TwoBlocksCut { k1, k2 } => {
            need(k1 >= 1 && k2 >= 1, spec)?;
            let n = 1 + k1 + k2;
            clique(&mut edges, 1..1 + k1);
            clique(&mut edges, 1 + k1..n);
            edges.extend((1..n).map(|v| (0, v)));
            Graph::from_edges(n, edges)
        }
        GeneratorSpec::Gnp { n, p, seed } => {
            need(n >= 2 && (0.0..=1.0).contains(&p) && p > 0.0, spec)?;
            gnp_connected(n, p, seed)
        }
    }
}

/// Attempt `i` draws from ChaCha8 seeded with `seed`, stream `i`.
fn gnp_connected(n: usize, p: f64, seed: u64) -> Result<Graph> {
    for attempt in 0..GNP_MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt as u64);
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen::<f64>() < p {
                    edges.push((a, b));
                }
            }
        }
        if edges.is_empty() {
            continue;
        }
        let g = Graph::from_edges(n, edges)?;
        if g.n() == n && g.assert_connected().is_ok() {
            return Ok(g);
        }
    }
    Err(Error::GeneratorRetriesExhausted {
        n,
        p,
        attempts: GNP_MAX_ATTEMPTS,
    })
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Path(n) => write!(f, "path:{n}"),
            GeneratorSpec::Cycle(n) => write!(f, "cycle:{n}"),
            GeneratorSpec::Star(n) => write!(f, "star:{n}"),
            GeneratorSpec::Complete(n) => write!(f, "complete:{n}"),
            GeneratorSpec::Barbell { k, bridge_len } => write!(f, "barbell:{k}:{bridge_len}"),
            GeneratorSpec::TwoBlocksCut { k1, k2 } => write!(f, "two_blocks_cut:{k1}:{k2}"),
            GeneratorSpec::Gnp { n, p, seed } => write!(f, "gnp:{n}:{p}:{seed}"),
        }
    }
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidGeneratorSpec(s.to_owned());
        let parts: Vec<&str> = s.trim().split(':').collect();
        let int = |i: usize| -> Result<usize> { parts.get(i).ok_or_else(bad)?.parse().map_err(|_| bad()) };
        let spec = match (parts[0], parts.len()) {
            ("path", 2) => GeneratorSpec::Path(int(1)?),
            ("cycle", 2) => GeneratorSpec::Cycle(int(1)?),
            ("star", 2) => GeneratorSpec::Star(int(1)?),
            ("complete", 2) => GeneratorSpec::Complete(int(1)?),
            ("barbell", 3) => GeneratorSpec::Barbell {
                k: int(1)?,
                bridge_len: int(2)?,
            },
            ("two_blocks_cut", 3) => GeneratorSpec::TwoBlocksCut {
                k1: int(1)?,
                k2: int(2)?,
            },
            ("gnp", 4) => GeneratorSpec::Gnp {
                n: int(1)?,
                p: parts[2].parse().map_err(|_| bad())?,
                seed: parts[3].parse().map_err(|_| bad())?,
            },
            _ => return Err(bad()),
        };
        Ok(spec)
    }
}
