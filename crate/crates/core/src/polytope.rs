//! The adjacency graph on `H_d`, crown graphs, line graphs, and an explicit
//! check that the first is the line graph of the second.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::flows::in_hd;
use crate::geometry::hd_vectors;
use crate::graph::{EdgeId, Multigraph, VertexId};

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledGraph<L> {
    pub graph: Multigraph,
    pub labels: Vec<L>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CrownVertex {
    U(usize),
    V(usize),
}

/// Line-graph vertex: an edge of the original graph with its endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeLabel {
    pub edge: EdgeId,
    pub endpoints: (VertexId, VertexId),
}

fn require_d(d: usize) -> Result<()> {
    if d < 3 {
        Err(Error::InvalidArgument(format!("d = {d} must be at least 3")))
    } else {
        Ok(())
    }
}

/// Vertices are `H_d`; `a ~ b` iff `a - b` is again in `H_d`.
pub fn gd_graph(d: usize) -> Result<LabeledGraph<Vec<i64>>> {
    require_d(d)?;
    let labels = hd_vectors(d);
    let mut edges = Vec::new();
    for a in 0..labels.len() {
        for b in a + 1..labels.len() {
            let diff: Vec<i64> = labels[a].iter().zip(&labels[b]).map(|(x, y)| x - y).collect();
            if in_hd(&diff) {
                edges.push((a, b));
            }
        }
    }
    Ok(LabeledGraph {
        graph: Multigraph::from_edges(labels.len(), edges)?,
        labels,
    })
}

/// `K_{d,d}` minus a perfect matching: `u_i` is vertex `i`, `v_j` is
/// vertex `d + j`, edges `u_i v_j` for `i != j` in `(i, j)` order.
pub fn crown_graph(d: usize) -> Result<LabeledGraph<CrownVertex>> {
    require_d(d)?;
    let mut edges = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i != j {
                edges.push((i, d + j));
            }
        }
    }
    let labels = (0..d)
        .map(CrownVertex::U)
        .chain((0..d).map(CrownVertex::V))
        .collect();
    Ok(LabeledGraph {
        graph: Multigraph::from_edges(2 * d, edges)?,
        labels,
    })
}

/// Line graph of a simple graph; vertex `e` stands for edge `e`.
pub fn line_graph(g: &Multigraph) -> Result<LabeledGraph<EdgeLabel>> {
    if !g.is_simple() {
        return Err(Error::InvalidArgument(
            "line graph needs a simple graph".into(),
        ));
    }
    let mut edges = Vec::new();
    for v in 0..g.vertex_count() {
        let inc = g.incident(v);
        for a in 0..inc.len() {
            for b in a + 1..inc.len() {
                let (x, y) = (inc[a].0.min(inc[b].0), inc[a].0.max(inc[b].0));
                edges.push((x, y));
            }
        }
    }
    edges.sort_unstable();
    let labels = g
        .edges()
        .iter()
        .enumerate()
        .map(|(edge, &endpoints)| EdgeLabel { edge, endpoints })
        .collect();
    Ok(LabeledGraph {
        graph: Multigraph::from_edges(g.edge_count(), edges)?,
        labels,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsoCheck {
    pub holds: bool,
    /// `(i, j, vector)`: crown edge `u_i v_j` maps to `e_i - e_j`.
    pub bijection: Vec<(usize, usize, Vec<i64>)>,
    pub vertices: usize,
    pub edges: usize,
}

/// Checks that `u_i v_j -> e_i - e_j` is a bijection from the line graph
/// of the crown graph onto `G_d` that preserves adjacency and
/// non-adjacency.
pub fn check_crown_line_iso(d: usize) -> Result<IsoCheck> {
    let gd = gd_graph(d)?;
    let crown = crown_graph(d)?;
    let line = line_graph(&crown.graph)?;

    let index: HashMap<&Vec<i64>, usize> =
        gd.labels.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut map = Vec::with_capacity(line.labels.len());
    let mut bijection = Vec::with_capacity(line.labels.len());
    for lab in &line.labels {
        let (a, b) = lab.endpoints;
        let (i, j) = match (crown.labels[a], crown.labels[b]) {
            (CrownVertex::U(i), CrownVertex::V(j)) | (CrownVertex::V(j), CrownVertex::U(i)) => (i, j),
            _ => return Ok(failed(bijection, &gd)),
        };
        let mut v = vec![0i64; d];
        v[i] = 1;
        v[j] = -1;
        match index.get(&v) {
            Some(&target) => map.push(target),
            None => return Ok(failed(bijection, &gd)),
        }
        bijection.push((i, j, v));
    }

    let n = gd.graph.vertex_count();
    let mut hit = vec![false; n];
    for &t in &map {
        if hit[t] {
            return Ok(failed(bijection, &gd));
        }
        hit[t] = true;
    }
    let injective_onto = map.len() == n && hit.iter().all(|&h| h);

    let adjacency = |g: &Multigraph| {
        let n = g.vertex_count();
        let mut m = vec![false; n * n];
        for &(u, v) in g.edges() {
            m[u * n + v] = true;
            m[v * n + u] = true;
        }
        m
    };
    let a_line = adjacency(&line.graph);
    let a_gd = adjacency(&gd.graph);
    let mut same = injective_onto && line.graph.edge_count() == gd.graph.edge_count();
    if same {
        'outer: for x in 0..n {
            for y in 0..n {
                if a_line[x * n + y] != a_gd[map[x] * n + map[y]] {
                    same = false;
                    break 'outer;
                }
            }
        }
    }
    Ok(IsoCheck {
        holds: same,
        bijection,
        vertices: n,
        edges: gd.graph.edge_count(),
    })
}

fn failed(bijection: Vec<(usize, usize, Vec<i64>)>, gd: &LabeledGraph<Vec<i64>>) -> IsoCheck {
    IsoCheck {
        holds: false,
        bijection,
        vertices: gd.graph.vertex_count(),
        edges: gd.graph.edge_count(),
    }
}
