//! Finite bounded-degree graphs with port numbering.
//!
//! Vertices are dense indices `0..n`. Each vertex's neighbor list is sorted
//! by neighbor index at construction and never reordered afterwards; the
//! position of a neighbor in that list *is* the port number. Edges may carry
//! an integer generator label; the label of the reversed edge is the
//! negation, which is how Cayley-style ±generator pairs are stored.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

use crate::bits::BitString;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex count must be at least {min}, got {got}")]
    TooSmall { min: usize, got: usize },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("edge label must be nonzero on edge {0}-{1}")]
    ZeroLabel(usize, usize),
    #[error("torus dimensions must be nonempty and each at least 3")]
    BadTorusDims,
    #[error("tree degree must be at least 2, got {0}")]
    BadTreeDegree(usize),
    #[error("power radius must be at least 1")]
    BadPowerRadius,
    #[error("payload has {got} entries but the graph has {want} vertices")]
    PayloadSize { got: usize, want: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Finite graph with port numbering and optional generator edge labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    /// Parallel to `adj`: label of the directed edge `v → adj[v][i]`.
    labels: Option<Vec<Vec<i32>>>,
    degree_bound: usize,
}

impl Graph {
    /// Builds a graph from undirected edges. Rejects self-loops and
    /// duplicates; adjacency lists end up sorted by neighbor index.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        Self::build(n, edges.iter().map(|&(u, v)| (u, v, None)))
    }

    /// Builds a labeled graph; edge `(u, v, l)` gets label `l` in the
    /// direction `u → v` and `-l` in the direction `v → u`.
    pub fn from_labeled_edges(n: usize, edges: &[(usize, usize, i32)]) -> Result<Self, GraphError> {
        Self::build(n, edges.iter().map(|&(u, v, l)| (u, v, Some(l))))
    }

    fn build(
        n: usize,
        edges: impl Iterator<Item = (usize, usize, Option<i32>)>,
    ) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::TooSmall { min: 1, got: 0 });
        }
        let mut pairs: Vec<Vec<(usize, i32)>> = vec![Vec::new(); n];
        let mut labeled = false;
        for (u, v, l) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let l = match l {
                Some(0) => return Err(GraphError::ZeroLabel(u, v)),
                Some(l) => {
                    labeled = true;
                    l
                }
                None => 0,
            };
            if pairs[u].iter().any(|&(w, _)| w == v) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            pairs[u].push((v, l));
            pairs[v].push((u, -l));
        }
        let mut adj = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        let mut degree_bound = 0;
        for mut row in pairs {
            row.sort_unstable_by_key(|&(w, _)| w);
            degree_bound = degree_bound.max(row.len());
            adj.push(row.iter().map(|&(w, _)| w).collect::<Vec<_>>());
            labels.push(row.iter().map(|&(_, l)| l).collect::<Vec<_>>());
        }
        Ok(Graph {
            adj,
            labels: labeled.then_some(labels),
            degree_bound,
        })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Maximum degree of the graph.
    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Neighbors of `v` in port order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub(crate) fn adjacency_lists(&self) -> &[Vec<usize>] {
        &self.adj
    }

    /// The neighbor reached from `v` through port `port`, if that port exists.
    pub fn neighbor_at_port(&self, v: usize, port: usize) -> Option<usize> {
        self.adj[v].get(port).copied()
    }

    /// The port of `v` that leads to `u`.
    pub fn port_to(&self, v: usize, u: usize) -> Option<usize> {
        self.adj[v].binary_search(&u).ok()
    }

    /// Label of the directed edge leaving `v` through `port`, if the graph
    /// is labeled.
    pub fn edge_label(&self, v: usize, port: usize) -> Option<i32> {
        self.labels.as_ref().map(|ls| ls[v][port])
    }

    pub fn is_labeled(&self) -> bool {
        self.labels.is_some()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Undirected edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Serializes to the edge-list text format: a `n d` header line, then
    /// one `u v` (or `u v label`) line per edge with `u < v`, sorted.
    pub fn save(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.n(), self.degree_bound).unwrap();
        for (u, v) in self.edges() {
            let port = self.port_to(u, v).unwrap();
            match self.edge_label(u, port) {
                Some(l) => writeln!(out, "{u} {v} {l}").unwrap(),
                None => writeln!(out, "{u} {v}").unwrap(),
            }
        }
        out
    }

    /// Parses the edge-list text format. The stored degree bound must cover
    /// the actual degrees.
    pub fn load(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| GraphError::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let mut it = header.split_whitespace();
        let parse = |tok: Option<&str>, line: usize| -> Result<usize, GraphError> {
            tok.ok_or_else(|| GraphError::Parse {
                line,
                msg: "missing field".into(),
            })?
            .parse()
            .map_err(|e| GraphError::Parse {
                line,
                msg: format!("{e}"),
            })
        };
        let n = parse(it.next(), 1)?;
        let d = parse(it.next(), 1)?;
        let mut plain = Vec::new();
        let mut labeled = Vec::new();
        for (idx, line) in lines {
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.len() {
                2 => {
                    let u = parse(Some(toks[0]), line_no)?;
                    let v = parse(Some(toks[1]), line_no)?;
                    plain.push((u, v));
                }
                3 => {
                    let u = parse(Some(toks[0]), line_no)?;
                    let v = parse(Some(toks[1]), line_no)?;
                    let l: i32 = toks[2].parse().map_err(|e| GraphError::Parse {
                        line: line_no,
                        msg: format!("{e}"),
                    })?;
                    labeled.push((u, v, l));
                }
                k => {
                    return Err(GraphError::Parse {
                        line: line_no,
                        msg: format!("expected 2 or 3 fields, got {k}"),
                    })
                }
            }
        }
        if !plain.is_empty() && !labeled.is_empty() {
            return Err(GraphError::Parse {
                line: 1,
                msg: "mix of labeled and unlabeled edges".into(),
            });
        }
        let g = if labeled.is_empty() {
            Graph::from_edges(n, &plain)?
        } else {
            Graph::from_labeled_edges(n, &labeled)?
        };
        if g.degree_bound() > d {
            return Err(GraphError::Parse {
                line: 1,
                msg: format!(
                    "declared degree bound {d} below actual {}",
                    g.degree_bound()
                ),
            });
        }
        Ok(g)
    }

    /// BFS distances from `source`, up to `cap` (`usize::MAX` marks
    /// unreachable or beyond-cap vertices).
    pub fn bfs_distances(&self, source: usize, cap: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            if dist[u] == cap {
                continue;
            }
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

/// Path on `n ≥ 1` vertices: edges `i — i+1`.
pub fn make_path(n: usize) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::TooSmall { min: 1, got: 0 });
    }
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges)
}

/// Cycle on `n ≥ 3` vertices with generator labels ±1 along the orientation
/// `i → i+1 (mod n)`.
pub fn make_cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::TooSmall { min: 3, got: n });
    }
    let edges: Vec<(usize, usize, i32)> = (0..n).map(|i| (i, (i + 1) % n, 1)).collect();
    Graph::from_labeled_edges(n, &edges)
}

/// Grid torus with the given dimensions (each ≥ 3). The edge stepping +1
/// along dimension `k` is labeled `k+1`; the reverse step is `-(k+1)`.
pub fn make_grid_torus(dims: &[usize]) -> Result<Graph, GraphError> {
    if dims.is_empty() || dims.iter().any(|&d| d < 3) {
        return Err(GraphError::BadTorusDims);
    }
    let n: usize = dims.iter().product();
    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let coord = |v: usize, k: usize| (v / strides[k]) % dims[k];
    let mut edges = Vec::with_capacity(n * dims.len());
    for v in 0..n {
        for k in 0..dims.len() {
            let c = coord(v, k);
            let up = v - c * strides[k] + ((c + 1) % dims[k]) * strides[k];
            edges.push((v, up, (k + 1) as i32));
        }
    }
    Graph::from_labeled_edges(n, &edges)
}

/// The radius-`depth` ball of the infinite `d`-regular tree: the root has
/// `d` children, interior vertices `d-1`, and leaves sit at distance `depth`.
pub fn make_regular_tree(d: usize, depth: usize) -> Result<Graph, GraphError> {
    if d < 2 {
        return Err(GraphError::BadTreeDegree(d));
    }
    let mut edges = Vec::new();
    let mut next = 1usize;
    // (vertex, remaining depth) in BFS order
    let mut queue = VecDeque::from([(0usize, depth)]);
    let mut first = true;
    while let Some((v, rem)) = queue.pop_front() {
        if rem == 0 {
            continue;
        }
        let children = if first { d } else { d - 1 };
        first = false;
        for _ in 0..children {
            edges.push((v, next));
            queue.push_back((next, rem - 1));
            next += 1;
        }
    }
    Graph::from_edges(next, &edges)
}

/// Random graph on `n` vertices with maximum degree at most `max_deg`,
/// grown by sampling candidate edges until `target_edges` are placed or no
/// candidate fits. Deterministic in `seed`.
pub fn make_random_bounded(
    n: usize,
    max_deg: usize,
    target_edges: usize,
    seed: u64,
) -> Result<Graph, GraphError> {
    use rand::seq::SliceRandom;

    if n == 0 {
        return Err(GraphError::TooSmall { min: 1, got: 0 });
    }
    let mut rng = crate::rng::vertex_stream(seed, 0, 0x67726170);
    let mut candidates: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    candidates.shuffle(&mut rng);
    let mut deg = vec![0usize; n];
    let mut edges = Vec::new();
    for (u, v) in candidates {
        if edges.len() == target_edges {
            break;
        }
        if deg[u] < max_deg && deg[v] < max_deg {
            deg[u] += 1;
            deg[v] += 1;
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges)
}

/// Graph on the same vertices where `x ~ y` iff `1 ≤ dist(x, y) ≤ r`.
/// Labels are not carried over.
pub fn power_graph(g: &Graph, r: usize) -> Result<Graph, GraphError> {
    if r == 0 {
        return Err(GraphError::BadPowerRadius);
    }
    let mut edges = Vec::new();
    for v in 0..g.n() {
        let dist = g.bfs_distances(v, r);
        for (u, &d) in dist.iter().enumerate() {
            if u > v && d != usize::MAX && d >= 1 {
                edges.push((v, u));
            }
        }
    }
    Graph::from_edges(g.n(), &edges)
}

/// The radius-`T` view around a vertex: the induced ball with canonical
/// local indices, host port numbers, host degrees, and per-vertex payloads.
///
/// Canonical indexing is BFS discovery order from the root, where each
/// vertex's neighbors are scanned in host port order. Two balls that are
/// isomorphic as rooted port-numbered graphs with equal payloads therefore
/// produce equal `View` values. The root is always index 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct View {
    radius: usize,
    dist: Vec<usize>,
    host_degree: Vec<usize>,
    /// Per vertex: `(host port, canonical neighbor)` pairs, in port order,
    /// restricted to neighbors inside the ball.
    adj: Vec<Vec<(usize, usize)>>,
    payload: Vec<BitString>,
}

impl View {
    /// Always 0: the canonical index of the center.
    pub fn root(&self) -> usize {
        0
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Number of vertices in the ball.
    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dist(&self, i: usize) -> usize {
        self.dist[i]
    }

    /// Degree of vertex `i` in the host graph (its in-view neighbor list may
    /// be shorter at the boundary of the ball).
    pub fn host_degree(&self, i: usize) -> usize {
        self.host_degree[i]
    }

    /// In-ball neighbors of `i` as `(host port, canonical index)`, in port
    /// order.
    pub fn adj(&self, i: usize) -> &[(usize, usize)] {
        &self.adj[i]
    }

    pub fn payload(&self, i: usize) -> &BitString {
        &self.payload[i]
    }
}

/// Extracts the canonical radius-`T` view around `v`.
///
/// `payload` must supply a bit string for every vertex of the graph.
pub fn ball(g: &Graph, v: usize, t: usize, payload: &[BitString]) -> Result<View, GraphError> {
    if v >= g.n() {
        return Err(GraphError::VertexOutOfRange(v));
    }
    if payload.len() != g.n() {
        return Err(GraphError::PayloadSize {
            got: payload.len(),
            want: g.n(),
        });
    }
    // usize::MAX = not in ball; otherwise the canonical index.
    let mut canon = vec![usize::MAX; g.n()];
    let mut order = vec![v];
    let mut dist = vec![0usize];
    canon[v] = 0;
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        let du = dist[head];
        head += 1;
        if du == t {
            continue;
        }
        for &w in g.neighbors(u) {
            if canon[w] == usize::MAX {
                canon[w] = order.len();
                order.push(w);
                dist.push(du + 1);
            }
        }
    }
    let adj = order
        .iter()
        .map(|&u| {
            g.neighbors(u)
                .iter()
                .enumerate()
                .filter(|&(_, &w)| canon[w] != usize::MAX)
                .map(|(port, &w)| (port, canon[w]))
                .collect()
        })
        .collect();
    Ok(View {
        radius: t,
        host_degree: order.iter().map(|&u| g.degree(u)).collect(),
        payload: order.iter().map(|&u| payload[u]).collect(),
        dist,
        adj,
    })
}
