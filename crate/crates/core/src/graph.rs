//! Undirected, loop-free graphs without multi-edges.
//!
//! Vertices are dense indices `0..n`. External labels are kept only so that
//! input and output can speak the caller's vocabulary.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};

/// Dense vertex index.
pub type Vertex = usize;

#[derive(Debug, Clone)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, Vertex>,
    adjacency: Vec<Vec<(Vertex, f64)>>,
    edges: Vec<(Vertex, Vertex, f64)>,
    weighted: bool,
}

impl Graph {
    /// Builds an unweighted graph on `n` vertices labelled `"0"..n`.
    ///
    /// Intended for generators; parse-style line numbers are not available, so
    /// invariant violations are reported as [`Error::InvalidParameter`].
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        Self::from_weighted_edges(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)), false)
    }

    pub fn from_weighted_edges<I>(n: usize, edges: I, weighted: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex, f64)>,
    {
        let mut g = Graph::empty(weighted);
        for v in 0..n {
            g.intern(&v.to_string());
        }
        let mut seen = HashSet::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop on vertex {u}")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidParameter(format!("edge {u}-{v} has weight {w}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidParameter(format!("duplicate edge {u}-{v}")));
            }
            g.push_edge(u, v, w);
        }
        if g.edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Ok(g)
    }

    fn empty(weighted: bool) -> Self {
        Graph {
            labels: Vec::new(),
            index: HashMap::new(),
            adjacency: Vec::new(),
            edges: Vec::new(),
            weighted,
        }
    }

    fn intern(&mut self, label: &str) -> Vertex {
        if let Some(&v) = self.index.get(label) {
            return v;
        }
        let v = self.labels.len();
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), v);
        self.adjacency.push(Vec::new());
        v
    }

    fn push_edge(&mut self, u: Vertex, v: Vertex, w: f64) {
        self.adjacency[u].push((v, w));
        self.adjacency[v].push((u, w));
        self.edges.push((u, v, w));
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn neighbors(&self, v: Vertex) -> &[(Vertex, f64)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex, f64)] {
        &self.edges
    }

    pub fn label(&self, v: Vertex) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex(&self, label: &str) -> Result<Vertex> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(label.to_owned()))
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            })
        }
    }

    /// Sizes of the connected components, ordered by their smallest vertex.
    pub fn component_sizes(&self) -> Vec<usize> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut sizes = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut size = 0;
            while let Some(v) = queue.pop_front() {
                size += 1;
                for &(w, _) in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            sizes.push(size);
        }
        sizes
    }

    pub fn assert_connected(&self) -> Result<()> {
        let component_sizes = self.component_sizes();
        if component_sizes.len() <= 1 {
            Ok(())
        } else {
            Err(Error::Disconnected { component_sizes })
        }
    }
}

/// Parses a whitespace-separated edge list.
///
/// Each non-comment line is `u v` (or `u v w` when `weighted`, where a missing
/// weight defaults to 1). `#` starts a comment. Vertex indices are assigned in
/// order of first appearance.
pub fn parse_edge_list(text: &str, weighted: bool) -> Result<Graph> {
    let mut g = Graph::empty(weighted);
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let w = match (tokens.len(), weighted) {
            (2, _) => 1.0,
            (3, false) => return Err(Error::UnexpectedWeight { line }),
            (3, true) => match tokens[2].parse::<f64>() {
                Ok(w) if w.is_finite() && w > 0.0 => w,
                Ok(_) => {
                    return Err(Error::NonPositiveWeight {
                        line,
                        weight: tokens[2].to_owned(),
                    })
                }
                Err(_) => {
                    return Err(Error::Malformed {
                        line,
                        content: raw.to_owned(),
                    })
                }
            },
            _ => {
                return Err(Error::Malformed {
                    line,
                    content: raw.to_owned(),
                })
            }
        };
        let (a, b) = (tokens[0], tokens[1]);
        if a == b {
            return Err(Error::SelfLoop {
                line,
                label: a.to_owned(),
            });
        }
        let u = g.intern(a);
        let v = g.intern(b);
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::DuplicateEdge {
                line,
                u: a.to_owned(),
                v: b.to_owned(),
            });
        }
        g.push_edge(u, v, w);
    }
    if g.edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    Ok(g)
}
