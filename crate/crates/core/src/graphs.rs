//! Relationship graphs, chordality, and simplicial elimination orderings.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::polarize::{SquarefreeIdeal, SquarefreeMonomial};

/// Largest vertex count accepted by [`all_elimination_orderings`].
pub const MAX_ENUMERATION_VERTICES: usize = 9;

/// Simple undirected graph on vertices `1..=n`, stored as adjacency masks.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    // adj[v] has bit u set when {u+1, v+1} is an edge.
    adj: Vec<u32>,
}

impl Graph {
    pub fn empty(n: usize) -> Graph {
        assert!(n <= 32, "at most 32 vertices");
        Graph { adj: vec![0; n] }
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 1..=n {
            for v in u + 1..=n {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Builds a graph from 1-based edges. Self-loops and out-of-range
    /// endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            for w in [u, v] {
                if w == 0 || w > n {
                    return Err(Error::IndexOutOfRange { index: w, n });
                }
            }
            if u == v {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("self-loop at vertex {u}"),
                });
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u - 1] |= 1 << (v - 1);
        self.adj[v - 1] |= 1 << (u - 1);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u - 1] & (1 << (v - 1)) != 0
    }

    /// Neighbor mask of `v` (bit `u - 1` for neighbor `u`).
    pub fn neighbors(&self, v: usize) -> u32 {
        self.adj[v - 1]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 1..=self.n() {
            for v in u + 1..=self.n() {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    /// The vertices in `mask` are pairwise adjacent.
    pub fn is_clique(&self, mask: u32) -> bool {
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if mask & !(1 << v) & !self.adj[v] != 0 {
                return false;
            }
        }
        true
    }

    /// `"i-j"` lines.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n={}\n", self.n());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u}-{v}\n"));
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for v in 1..=self.n() {
            out.push_str(&format!("  {v};\n"));
        }
        for (u, v) in self.edges() {
            out.push_str(&format!("  {u} -- {v};\n"));
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, {:?})", self.n(), self.edges())
    }
}

/// Parses the edge-list format: `i-j` per line, `#` comments, optional
/// `n=<int>` header (otherwise the largest endpoint).
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut declared = None;
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: String| Error::Parse { line: lineno + 1, msg };
        if let Some(rest) = line.strip_prefix("n=") {
            let n: usize = rest.trim().parse().map_err(|_| bad(format!("bad vertex count {rest:?}")))?;
            if n > 32 {
                return Err(Error::Guard { what: "graph vertices", max: 32, got: n });
            }
            declared = Some(n);
            continue;
        }
        let (a, b) = line
            .split_once('-')
            .ok_or_else(|| bad(format!("expected i-j, got {line:?}")))?;
        let u: usize = a.trim().parse().map_err(|_| bad(format!("bad vertex {a:?}")))?;
        let v: usize = b.trim().parse().map_err(|_| bad(format!("bad vertex {b:?}")))?;
        if u == 0 || v == 0 {
            return Err(bad("vertices are numbered from 1".into()));
        }
        if u == v {
            return Err(bad(format!("self-loop at vertex {u}")));
        }
        edges.push((u, v));
    }
    let seen = edges.iter().map(|&(u, v)| u.max(v)).max().unwrap_or(0);
    let n = declared.unwrap_or(seen);
    if n > 32 {
        return Err(Error::Guard { what: "graph vertices", max: 32, got: n });
    }
    Graph::from_edges(n, &edges)
}

/// General relationship graph of a quadratic polarized neural ideal:
/// `{i, j}` is an edge unless one of `x_i x_j`, `x_i y_j`, `x_j y_i` is a
/// generator.
pub fn relationship_graph(ideal: &SquarefreeIdeal) -> Result<Graph> {
    if let Some(g) = ideal.gens().iter().find(|g| g.degree() != 2) {
        return Err(Error::NotQuadratic(g.to_string()));
    }
    let n = ideal.n();
    let mut graph = Graph::empty(n);
    for i in 1..=n {
        for j in i + 1..=n {
            let forbidden = [
                SquarefreeMonomial::from_lists(&[i, j], &[]),
                SquarefreeMonomial::from_lists(&[i], &[j]),
                SquarefreeMonomial::from_lists(&[j], &[i]),
            ];
            if !forbidden.iter().any(|m| ideal.contains_generator(m)) {
                graph.add_edge(i, j);
            }
        }
    }
    Ok(graph)
}

/// A removal order of all vertices with each vertex's degree in the
/// residual graph at its removal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EliminationOrdering {
    pub ordering: Vec<usize>,
    pub degrees: Vec<usize>,
}

impl EliminationOrdering {
    /// Sorted simplicial degrees.
    pub fn degree_multiset(&self) -> Vec<usize> {
        let mut d = self.degrees.clone();
        d.sort_unstable();
        d
    }
}

/// Checks that `ordering` removes a simplicial vertex at every step and
/// returns the residual degrees.
pub fn simplicial_degrees(g: &Graph, ordering: &[usize]) -> Result<Vec<usize>> {
    let n = g.n();
    let mut seen = 0u32;
    for &v in ordering {
        if v == 0 || v > n || seen & (1 << (v - 1)) != 0 {
            return Err(Error::InvalidProfile(format!(
                "ordering {ordering:?} is not a permutation of 1..={n}"
            )));
        }
        seen |= 1 << (v - 1);
    }
    if ordering.len() != n {
        return Err(Error::InvalidProfile(format!(
            "ordering {ordering:?} is not a permutation of 1..={n}"
        )));
    }
    let mut remaining: u32 = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    let mut degrees = Vec::with_capacity(n);
    for (step, &v) in ordering.iter().enumerate() {
        let nbrs = g.neighbors(v) & remaining;
        if !g.is_clique(nbrs) {
            return Err(Error::NotSimplicial { step: step + 1, vertex: v });
        }
        degrees.push(nbrs.count_ones() as usize);
        remaining &= !(1 << (v - 1));
    }
    Ok(degrees)
}

/// Multiset of simplicial degrees along `ord`, re-verified against `g`.
pub fn simplicial_degree_profile(g: &Graph, ord: &EliminationOrdering) -> Result<Vec<usize>> {
    let mut degrees = simplicial_degrees(g, &ord.ordering)?;
    degrees.sort_unstable();
    Ok(degrees)
}

/// Maximum-cardinality search. Returns vertices in visit order; the
/// reverse is a perfect elimination ordering iff the graph is chordal.
fn maximum_cardinality_search(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut weight = vec![0usize; n];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !visited[v])
            .max_by_key(|&v| (weight[v], std::cmp::Reverse(v)))
            .expect("unvisited vertex");
        visited[v] = true;
        order.push(v + 1);
        let mut nbrs = g.adj[v];
        while nbrs != 0 {
            let u = nbrs.trailing_zeros() as usize;
            nbrs &= nbrs - 1;
            if !visited[u] {
                weight[u] += 1;
            }
        }
    }
    order
}

/// A simplicial elimination ordering if `g` is chordal.
pub fn chordality(g: &Graph) -> Option<EliminationOrdering> {
    let mut ordering = maximum_cardinality_search(g);
    ordering.reverse();
    let degrees = simplicial_degrees(g, &ordering).ok()?;
    Some(EliminationOrdering { ordering, degrees })
}

pub fn is_chordal(g: &Graph) -> bool {
    chordality(g).is_some()
}

/// A chordless cycle of length at least four, if one exists.
///
/// For every vertex `v` and pair of non-adjacent neighbors `a`, `b`, looks
/// for a shortest `a`–`b` path avoiding `v` and its other neighbors. Such a
/// path closes an induced cycle through `v`; every chordless cycle arises
/// this way from any of its vertices.
pub fn chordless_cycle(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    for v in 1..=n {
        let nbrs: Vec<usize> = (1..=n).filter(|&u| g.has_edge(v, u)).collect();
        for (ai, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[ai + 1..] {
                if g.has_edge(a, b) {
                    continue;
                }
                let mut blocked = g.neighbors(v) | (1 << (v - 1));
                blocked &= !((1 << (a - 1)) | (1 << (b - 1)));
                if let Some(path) = shortest_path(g, a, b, blocked) {
                    let mut cycle = vec![v];
                    cycle.extend(path);
                    return Some(cycle);
                }
            }
        }
    }
    None
}

fn shortest_path(g: &Graph, from: usize, to: usize, blocked: u32) -> Option<Vec<usize>> {
    let n = g.n();
    let mut prev = vec![0usize; n + 1];
    let mut seen = blocked | (1 << (from - 1));
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = prev[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        let mut nbrs = g.neighbors(u) & !seen;
        while nbrs != 0 {
            let w = nbrs.trailing_zeros() as usize + 1;
            nbrs &= nbrs - 1;
            seen |= 1 << (w - 1);
            prev[w] = u;
            queue.push_back(w);
        }
    }
    None
}

/// Iterator over every simplicial elimination ordering of a graph, in
/// lexicographic order of the vertex sequence.
pub struct EliminationOrderings<'a> {
    graph: &'a Graph,
    // Removed vertices so far and, per depth, the next candidate to try.
    prefix: Vec<usize>,
    next_candidate: Vec<usize>,
    remaining: u32,
    done: bool,
}

impl<'a> EliminationOrderings<'a> {
    fn simplicial_in_residual(&self, v: usize) -> bool {
        self.remaining & (1 << (v - 1)) != 0
            && self.graph.is_clique(self.graph.neighbors(v) & self.remaining)
    }
}

impl<'a> Iterator for EliminationOrderings<'a> {
    type Item = EliminationOrdering;

    fn next(&mut self) -> Option<EliminationOrdering> {
        let n = self.graph.n();
        if self.done {
            return None;
        }
        loop {
            let depth = self.prefix.len();
            if depth == n {
                let ordering = self.prefix.clone();
                let degrees = simplicial_degrees(self.graph, &ordering)
                    .expect("search only removes simplicial vertices");
                // Backtrack one level before yielding.
                self.pop();
                if n == 0 {
                    self.done = true;
                }
                return Some(EliminationOrdering { ordering, degrees });
            }
            let start = self.next_candidate[depth];
            let found = (start..=n).find(|&v| self.simplicial_in_residual(v));
            match found {
                Some(v) => {
                    self.next_candidate[depth] = v + 1;
                    self.prefix.push(v);
                    self.remaining &= !(1 << (v - 1));
                    if depth + 1 < n {
                        self.next_candidate[depth + 1] = 1;
                    }
                }
                None => {
                    if depth == 0 {
                        self.done = true;
                        return None;
                    }
                    self.pop();
                }
            }
        }
    }
}

impl<'a> EliminationOrderings<'a> {
    fn pop(&mut self) {
        if let Some(v) = self.prefix.pop() {
            self.remaining |= 1 << (v - 1);
        }
    }
}

/// Every simplicial elimination ordering of `g`, by backtracking over
/// simplicial vertices. Limited to [`MAX_ENUMERATION_VERTICES`] vertices.
pub fn all_elimination_orderings(g: &Graph) -> Result<EliminationOrderings<'_>> {
    let n = g.n();
    if n > MAX_ENUMERATION_VERTICES {
        return Err(Error::Guard {
            what: "vertices for ordering enumeration",
            max: MAX_ENUMERATION_VERTICES,
            got: n,
        });
    }
    Ok(EliminationOrderings {
        graph: g,
        prefix: Vec::with_capacity(n),
        next_candidate: vec![1; n.max(1)],
        remaining: if n == 0 { 0 } else { u32::MAX >> (32 - n) },
        done: false,
    })
}
