//! Undirected multigraphs with stable edge identifiers, plus the structural
//! predicates and even-subgraph utilities the rest of the crate builds on.
//!
//! Vertices are dense indices `0..n`, edges are dense indices `0..m` in
//! insertion order. Parallel edges are allowed, loops are not.

use std::collections::{BTreeMap, BTreeSet};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    /// `adjacency[v]` lists `(edge, other endpoint)` in edge order.
    adjacency: Vec<Vec<(EdgeId, VertexId)>>,
}

impl Multigraph {
    /// Graph on `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        Multigraph {
            n,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list; edge ids follow iteration order.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut g = Multigraph::empty(n);
        for (line, (u, v)) in edges.into_iter().enumerate() {
            if u >= n {
                return Err(Error::UnknownVertex(u));
            }
            if v >= n {
                return Err(Error::UnknownVertex(v));
            }
            if u == v {
                return Err(Error::Loop { line: line + 1, vertex: u });
            }
            let e = g.edges.len();
            g.edges.push((u, v));
            g.adjacency[u].push((e, v));
            g.adjacency[v].push((e, u));
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Endpoints of `e` in stored order.
    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn incident(&self, v: VertexId) -> &[(EdgeId, VertexId)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn check_edge(&self, e: EdgeId) -> Result<()> {
        if e < self.edges.len() {
            Ok(())
        } else {
            Err(Error::UnknownEdge(e))
        }
    }

    /// True if no two edges share the same endpoint pair.
    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges
            .iter()
            .all(|&(u, v)| seen.insert((u.min(v), u.max(v))))
    }

    pub fn is_cubic(&self) -> bool {
        self.n > 0 && (0..self.n).all(|v| self.degree(v) == 3)
    }

    /// Two-colouring by BFS over every component.
    pub fn is_bipartite(&self) -> bool {
        let mut colour: Vec<Option<bool>> = vec![None; self.n];
        let mut queue = std::collections::VecDeque::new();
        for start in 0..self.n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                let c = colour[v].unwrap();
                for &(_, w) in &self.adjacency[v] {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!c);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == c => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    /// Cut edges, found with an iterative low-link DFS that skips the
    /// parent *edge* (not vertex) so parallel edges are never bridges.
    pub fn bridges(&self) -> BTreeSet<EdgeId> {
        let n = self.n;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut out = BTreeSet::new();
        let mut time = 0;
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            // (vertex, parent edge, next adjacency index)
            let mut stack: Vec<(VertexId, Option<EdgeId>, usize)> = vec![(root, None, 0)];
            disc[root] = time;
            low[root] = time;
            time += 1;
            while let Some(top) = stack.last_mut() {
                let (v, parent_edge, idx) = *top;
                if idx < self.adjacency[v].len() {
                    top.2 += 1;
                    let (e, w) = self.adjacency[v][idx];
                    if Some(e) == parent_edge {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = time;
                        low[w] = time;
                        time += 1;
                        stack.push((w, Some(e), 0));
                    } else {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let (Some(e), Some(parent)) = (parent_edge, stack.last()) {
                        let p = parent.0;
                        low[p] = low[p].min(low[v]);
                        if low[v] > disc[p] {
                            out.insert(e);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_bridgeless(&self) -> bool {
        self.bridges().is_empty()
    }

    /// Fails with the lowest-numbered bridge, if any.
    pub fn require_bridgeless(&self) -> Result<()> {
        match self.bridges().into_iter().next() {
            Some(e) => Err(Error::Bridge(e)),
            None => Ok(()),
        }
    }

    /// Connected components as vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &(_, w) in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Hex SHA-256 of the canonical edge list: a header line `n m`, then
    /// one `min max` line per edge with the lines sorted.
    pub fn canonical_hash(&self) -> String {
        let mut lines: Vec<(VertexId, VertexId)> =
            self.edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        lines.sort_unstable();
        let mut text = format!("{} {}\n", self.n, self.edges.len());
        for (u, v) in lines {
            text.push_str(&format!("{u} {v}\n"));
        }
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    /// Degrees of `edge_set` as a subgraph; unknown ids are an error.
    pub fn subgraph_degrees<'a, I>(&self, edge_set: I) -> Result<Vec<usize>>
    where
        I: IntoIterator<Item = &'a EdgeId>,
    {
        let mut deg = vec![0usize; self.n];
        for &e in edge_set {
            self.check_edge(e)?;
            let (u, v) = self.edges[e];
            deg[u] += 1;
            deg[v] += 1;
        }
        Ok(deg)
    }

    pub fn is_even_subgraph<'a, I>(&self, edge_set: I) -> Result<bool>
    where
        I: IntoIterator<Item = &'a EdgeId>,
    {
        Ok(self.subgraph_degrees(edge_set)?.iter().all(|d| d % 2 == 0))
    }
}

/// An arc `(tail, head)` per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    arcs: Vec<(VertexId, VertexId)>,
}

impl Orientation {
    /// Tail is the smaller endpoint index.
    pub fn canonical(g: &Multigraph) -> Self {
        Orientation {
            arcs: g.edges().iter().map(|&(u, v)| (u.min(v), u.max(v))).collect(),
        }
    }

    pub fn from_arcs(g: &Multigraph, arcs: Vec<(VertexId, VertexId)>) -> Result<Self> {
        if arcs.len() != g.edge_count() {
            return Err(Error::InvalidOrientation(format!(
                "{} arcs for {} edges",
                arcs.len(),
                g.edge_count()
            )));
        }
        for (e, &(t, h)) in arcs.iter().enumerate() {
            if !same_endpoints(g.endpoints(e), (t, h)) {
                return Err(Error::InvalidOrientation(format!(
                    "arc ({t},{h}) does not match edge {e} {:?}",
                    g.endpoints(e)
                )));
            }
        }
        Ok(Orientation { arcs })
    }

    pub fn arcs(&self) -> &[(VertexId, VertexId)] {
        &self.arcs
    }

    pub fn arc(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.arcs[e]
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// +1 if `arc` runs the same way as this orientation on `e`, else -1.
    pub fn sign_of(&self, e: EdgeId, arc: (VertexId, VertexId)) -> i64 {
        if self.arcs[e] == arc {
            1
        } else {
            -1
        }
    }
}

pub(crate) fn same_endpoints(a: (VertexId, VertexId), b: (VertexId, VertexId)) -> bool {
    (a.0 == b.0 && a.1 == b.1) || (a.0 == b.1 && a.1 == b.0)
}

/// Edge set in which every vertex has even degree. May be empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EvenSubgraph {
    edges: BTreeSet<EdgeId>,
}

impl EvenSubgraph {
    pub fn new(g: &Multigraph, edges: impl IntoIterator<Item = EdgeId>) -> Result<Self> {
        let edges: BTreeSet<EdgeId> = edges.into_iter().collect();
        let deg = g.subgraph_degrees(&edges)?;
        if let Some((vertex, &degree)) = deg.iter().enumerate().find(|(_, d)| *d % 2 == 1) {
            return Err(Error::NotEven { vertex, degree });
        }
        Ok(EvenSubgraph { edges })
    }

    /// Skips the parity check. Callers must validate before relying on it.
    pub(crate) fn unchecked(edges: BTreeSet<EdgeId>) -> Self {
        EvenSubgraph { edges }
    }

    pub fn edges(&self) -> &BTreeSet<EdgeId> {
        &self.edges
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Edge subset with a direction per edge such that indegree equals
/// outdegree at every vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DirectedEvenSubgraph {
    arcs: BTreeMap<EdgeId, (VertexId, VertexId)>,
}

impl DirectedEvenSubgraph {
    pub fn new(g: &Multigraph, arcs: BTreeMap<EdgeId, (VertexId, VertexId)>) -> Result<Self> {
        let mut balance = vec![0i64; g.vertex_count()];
        for (&e, &(t, h)) in &arcs {
            g.check_edge(e)?;
            if !same_endpoints(g.endpoints(e), (t, h)) {
                return Err(Error::InvalidOrientation(format!(
                    "arc ({t},{h}) does not match edge {e}"
                )));
            }
            balance[t] -= 1;
            balance[h] += 1;
        }
        if let Some(v) = balance.iter().position(|&b| b != 0) {
            return Err(Error::InvalidOrientation(format!(
                "vertex {v} has in-out imbalance {}",
                balance[v]
            )));
        }
        Ok(DirectedEvenSubgraph { arcs })
    }

    pub(crate) fn unchecked(arcs: BTreeMap<EdgeId, (VertexId, VertexId)>) -> Self {
        DirectedEvenSubgraph { arcs }
    }

    pub fn arcs(&self) -> &BTreeMap<EdgeId, (VertexId, VertexId)> {
        &self.arcs
    }

    pub fn arc(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.arcs.get(&e).copied()
    }

    pub fn edge_set(&self) -> EvenSubgraph {
        EvenSubgraph::unchecked(self.arcs.keys().copied().collect())
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Indegree minus outdegree at every vertex.
    pub fn imbalance(&self, n: usize) -> Vec<i64> {
        let mut balance = vec![0i64; n];
        for &(t, h) in self.arcs.values() {
            balance[t] -= 1;
            balance[h] += 1;
        }
        balance
    }
}

/// Orients an even subgraph by splitting it into closed walks and
/// directing each walk the way it was traversed.
pub fn eulerian_orientation(g: &Multigraph, s: &EvenSubgraph) -> Result<DirectedEvenSubgraph> {
    let deg = g.subgraph_degrees(s.edges())?;
    if let Some((vertex, &degree)) = deg.iter().enumerate().find(|(_, d)| *d % 2 == 1) {
        return Err(Error::NotEven { vertex, degree });
    }
    let mut used: BTreeSet<EdgeId> = BTreeSet::new();
    let mut cursor = vec![0usize; g.vertex_count()];
    let mut arcs = BTreeMap::new();
    for &first in s.edges() {
        if used.contains(&first) {
            continue;
        }
        let start = g.endpoints(first).0;
        let mut v = start;
        // Every vertex has even degree among unused edges except the walk's
        // current end, so the walk can only get stuck back at `start`.
        loop {
            let adj = g.incident(v);
            let mut next = None;
            while cursor[v] < adj.len() {
                let (e, w) = adj[cursor[v]];
                cursor[v] += 1;
                if s.contains(e) && !used.contains(&e) {
                    next = Some((e, w));
                    break;
                }
            }
            match next {
                Some((e, w)) => {
                    used.insert(e);
                    arcs.insert(e, (v, w));
                    v = w;
                }
                None => {
                    debug_assert_eq!(v, start);
                    break;
                }
            }
        }
    }
    Ok(DirectedEvenSubgraph::unchecked(arcs))
}
