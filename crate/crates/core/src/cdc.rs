//! Cycle double covers: types, verification, and backtracking search for
//! plain and oriented k-covers.

use std::collections::BTreeMap;
use std::fmt;

use crate::correspondence::hd_flow_to_oriented_cdc;
use crate::error::{Error, Result};
use crate::flows::VectorFlow;
use crate::graph::{
    eulerian_orientation, same_endpoints, DirectedEvenSubgraph, EdgeId, EvenSubgraph, Multigraph,
    Orientation, VertexId,
};
use crate::search::{NodeCounter, SearchOutcome, Step};

/// Largest number of members the searches support (label sets are bitmasks).
pub const MAX_MEMBERS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleDoubleCover {
    members: Vec<EvenSubgraph>,
}

impl CycleDoubleCover {
    /// Wraps members without checking them against a graph; see [`verify_cdc`].
    pub fn new(members: Vec<EvenSubgraph>) -> Self {
        CycleDoubleCover { members }
    }

    pub fn members(&self) -> &[EvenSubgraph] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn empty_members(&self) -> Vec<usize> {
        empty_positions(self.members.iter().map(EvenSubgraph::is_empty))
    }

    /// Appends empty members until there are `k`.
    pub fn padded(&self, k: usize) -> CycleDoubleCover {
        let mut members = self.members.clone();
        while members.len() < k {
            members.push(EvenSubgraph::default());
        }
        CycleDoubleCover { members }
    }

    /// Member indices covering each edge, in increasing order.
    pub fn covering_members(&self, m: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); m];
        for (i, member) in self.members.iter().enumerate() {
            for &e in member.edges() {
                if e < m {
                    out[e].push(i);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedCdc {
    members: Vec<DirectedEvenSubgraph>,
}

impl OrientedCdc {
    pub fn new(members: Vec<DirectedEvenSubgraph>) -> Self {
        OrientedCdc { members }
    }

    pub fn members(&self) -> &[DirectedEvenSubgraph] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn empty_members(&self) -> Vec<usize> {
        empty_positions(self.members.iter().map(DirectedEvenSubgraph::is_empty))
    }

    /// Forgets directions.
    pub fn underlying(&self) -> CycleDoubleCover {
        CycleDoubleCover::new(self.members.iter().map(|m| m.edge_set()).collect())
    }
}

fn empty_positions(flags: impl Iterator<Item = bool>) -> Vec<usize> {
    flags
        .enumerate()
        .filter_map(|(i, empty)| empty.then_some(i))
        .collect()
}

/// First violation found by a cover verifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverDefect {
    UnknownEdge { member: usize, edge: EdgeId },
    OddVertex { member: usize, vertex: VertexId },
    CoverCount { edge: EdgeId, count: usize },
    ArcMismatch { member: usize, edge: EdgeId },
    Unbalanced { member: usize, vertex: VertexId },
    SameDirection { edge: EdgeId, members: (usize, usize) },
}

impl fmt::Display for CoverDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverDefect::UnknownEdge { member, edge } => {
                write!(f, "member {member} uses unknown edge {edge}")
            }
            CoverDefect::OddVertex { member, vertex } => {
                write!(f, "member {member} has odd degree at vertex {vertex}")
            }
            CoverDefect::CoverCount { edge, count } => {
                write!(f, "edge {edge} is covered {count} times")
            }
            CoverDefect::ArcMismatch { member, edge } => {
                write!(f, "member {member} directs edge {edge} between wrong endpoints")
            }
            CoverDefect::Unbalanced { member, vertex } => {
                write!(f, "member {member} is not balanced at vertex {vertex}")
            }
            CoverDefect::SameDirection { edge, members } => write!(
                f,
                "members {} and {} traverse edge {edge} in the same direction",
                members.0, members.1
            ),
        }
    }
}

impl From<CoverDefect> for Error {
    fn from(d: CoverDefect) -> Self {
        Error::InvalidCover(d.to_string())
    }
}

pub fn verify_cdc(g: &Multigraph, c: &CycleDoubleCover) -> std::result::Result<(), CoverDefect> {
    let m = g.edge_count();
    let mut count = vec![0usize; m];
    for (i, member) in c.members().iter().enumerate() {
        let mut deg = vec![0usize; g.vertex_count()];
        for &e in member.edges() {
            if e >= m {
                return Err(CoverDefect::UnknownEdge { member: i, edge: e });
            }
            count[e] += 1;
            let (u, v) = g.endpoints(e);
            deg[u] += 1;
            deg[v] += 1;
        }
        if let Some(vertex) = deg.iter().position(|d| d % 2 == 1) {
            return Err(CoverDefect::OddVertex { member: i, vertex });
        }
    }
    if let Some(edge) = count.iter().position(|&c| c != 2) {
        return Err(CoverDefect::CoverCount {
            edge,
            count: count[edge],
        });
    }
    Ok(())
}

pub fn verify_oriented_cdc(g: &Multigraph, c: &OrientedCdc) -> std::result::Result<(), CoverDefect> {
    let m = g.edge_count();
    let mut seen: Vec<Vec<(usize, (VertexId, VertexId))>> = vec![Vec::new(); m];
    for (i, member) in c.members().iter().enumerate() {
        let mut balance = vec![0i64; g.vertex_count()];
        for (&e, &(t, h)) in member.arcs() {
            if e >= m {
                return Err(CoverDefect::UnknownEdge { member: i, edge: e });
            }
            if !same_endpoints(g.endpoints(e), (t, h)) {
                return Err(CoverDefect::ArcMismatch { member: i, edge: e });
            }
            balance[t] -= 1;
            balance[h] += 1;
            seen[e].push((i, (t, h)));
        }
        if let Some(vertex) = balance.iter().position(|&b| b != 0) {
            return Err(CoverDefect::Unbalanced { member: i, vertex });
        }
    }
    for (edge, covers) in seen.iter().enumerate() {
        if covers.len() != 2 {
            return Err(CoverDefect::CoverCount {
                edge,
                count: covers.len(),
            });
        }
        if covers[0].1 == covers[1].1 {
            return Err(CoverDefect::SameDirection {
                edge,
                members: (covers[0].0, covers[1].0),
            });
        }
    }
    Ok(())
}

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "k = {k}: a cover needs at least two members"
        )));
    }
    if k > MAX_MEMBERS {
        return Err(Error::InvalidArgument(format!(
            "k = {k} exceeds the supported maximum of {MAX_MEMBERS}"
        )));
    }
    Ok(())
}

/// Edge processing order: start from a maximum-degree vertex, then
/// repeatedly take the vertex with the most edges into the visited set
/// (ties by degree, then index) and append its unprocessed edges. Vertices
/// get completed early, which is where the parity pruning bites.
pub(crate) fn search_edge_order(g: &Multigraph) -> Vec<EdgeId> {
    let n = g.vertex_count();
    let mut visited = vec![false; n];
    let mut links = vec![0usize; n];
    let mut taken = vec![false; g.edge_count()];
    let mut order = Vec::with_capacity(g.edge_count());
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !visited[v])
            .max_by_key(|&v| (links[v], g.degree(v), std::cmp::Reverse(v)))
            .expect("unvisited vertex remains");
        visited[v] = true;
        for &(e, w) in g.incident(v) {
            if !taken[e] {
                taken[e] = true;
                order.push(e);
            }
            links[w] += 1;
        }
    }
    order
}

/// Searches for a k-cycle double cover by assigning every edge an
/// unordered pair of member labels.
///
/// Labels are introduced in increasing order along the edge sequence,
/// which removes the `k!` relabelling symmetry. A vertex's last edge is
/// forced to the two labels that are odd there.
pub fn find_cdc(g: &Multigraph, k: usize, budget: u64) -> Result<SearchOutcome<CycleDoubleCover>> {
    check_k(k)?;
    if g.edge_count() == 0 {
        return Ok(SearchOutcome::Found {
            witness: CycleDoubleCover::new(vec![EvenSubgraph::default(); k]),
            nodes: 0,
        });
    }
    if !g.is_bridgeless() {
        return Ok(SearchOutcome::Exhausted { nodes: 0 });
    }
    if k == 2 {
        let all: Vec<EdgeId> = (0..g.edge_count()).collect();
        return Ok(match EvenSubgraph::new(g, all) {
            Ok(s) => SearchOutcome::Found {
                witness: CycleDoubleCover::new(vec![s.clone(), s]),
                nodes: 1,
            },
            Err(_) => SearchOutcome::Exhausted { nodes: 1 },
        });
    }

    let order = search_edge_order(g);
    let mut remaining: Vec<usize> = g.degrees();
    let mut search = UnorientedSearch {
        g,
        k,
        order: &order,
        parity: vec![0u64; g.vertex_count()],
        remaining: &mut remaining,
        labels: vec![(0, 0); g.edge_count()],
        counter: NodeCounter::new(budget),
    };
    let step = search.descend(0, 0);
    let nodes = search.counter.nodes;
    match step {
        Step::Found => {
            let mut members = vec![Vec::new(); k];
            for (e, &(a, b)) in search.labels.iter().enumerate() {
                members[a].push(e);
                members[b].push(e);
            }
            let cover = CycleDoubleCover::new(
                members
                    .into_iter()
                    .map(|m| EvenSubgraph::unchecked(m.into_iter().collect()))
                    .collect(),
            );
            verify_cdc(g, &cover)?;
            Ok(SearchOutcome::Found {
                witness: cover,
                nodes,
            })
        }
        Step::Dead => Ok(SearchOutcome::Exhausted { nodes }),
        Step::OutOfBudget => Ok(SearchOutcome::Unknown { nodes }),
    }
}

struct UnorientedSearch<'a> {
    g: &'a Multigraph,
    k: usize,
    order: &'a [EdgeId],
    parity: Vec<u64>,
    remaining: &'a mut Vec<usize>,
    labels: Vec<(usize, usize)>,
    counter: NodeCounter,
}

impl UnorientedSearch<'_> {
    fn forced(&self, v: VertexId) -> Option<u64> {
        (self.remaining[v] == 1).then_some(self.parity[v])
    }

    fn feasible(&self, v: VertexId) -> bool {
        self.parity[v].count_ones() as usize <= 2 * self.remaining[v]
    }

    fn descend(&mut self, i: usize, used: usize) -> Step {
        if i == self.order.len() {
            return Step::Found;
        }
        if !self.counter.tick() {
            return Step::OutOfBudget;
        }
        let e = self.order[i];
        let (u, v) = self.g.endpoints(e);
        let forced = match (self.forced(u), self.forced(v)) {
            (Some(a), Some(b)) if a != b => return Step::Dead,
            (Some(a), _) | (_, Some(a)) => Some(a),
            (None, None) => None,
        };
        let candidates: Vec<(usize, usize)> = match forced {
            Some(mask) => {
                if mask.count_ones() != 2 {
                    return Step::Dead;
                }
                let a = mask.trailing_zeros() as usize;
                let b = 63 - mask.leading_zeros() as usize;
                vec![(a, b)]
            }
            None => {
                let top = (used + 1).min(self.k - 1);
                let mut c = Vec::new();
                for a in 0..=used.min(self.k - 1) {
                    for b in a + 1..=top {
                        c.push((a, b));
                    }
                }
                c
            }
        };
        self.remaining[u] -= 1;
        self.remaining[v] -= 1;
        for (a, b) in candidates {
            let mask = (1u64 << a) | (1u64 << b);
            self.parity[u] ^= mask;
            self.parity[v] ^= mask;
            if self.feasible(u) && self.feasible(v) {
                self.labels[e] = (a, b);
                match self.descend(i + 1, used.max(b + 1)) {
                    Step::Dead => {}
                    other => {
                        return other;
                    }
                }
            }
            self.parity[u] ^= mask;
            self.parity[v] ^= mask;
        }
        self.remaining[u] += 1;
        self.remaining[v] += 1;
        Step::Dead
    }
}

/// Searches for an oriented k-cycle double cover by searching for an
/// `H_k`-valued flow on the canonical orientation and converting it.
///
/// Each edge gets an ordered label pair `(p, q)`: member `p` traverses it
/// along the reference direction and member `q` against it. Per-vertex
/// signed sums per label must vanish; a vertex's last edge is forced.
pub fn find_oriented_cdc(g: &Multigraph, k: usize, budget: u64) -> Result<SearchOutcome<OrientedCdc>> {
    find_hd_flow(g, k, budget)?.map_result(|f| hd_flow_to_oriented_cdc(g, &f))
}

/// The flow side of [`find_oriented_cdc`]: an exact `H_k`-flow on the
/// canonical orientation.
pub fn find_hd_flow(g: &Multigraph, k: usize, budget: u64) -> Result<SearchOutcome<VectorFlow>> {
    check_k(k)?;
    let orientation = Orientation::canonical(g);
    if g.edge_count() == 0 {
        return Ok(SearchOutcome::Found {
            witness: VectorFlow::exact(k, orientation, Vec::new())?,
            nodes: 0,
        });
    }
    if !g.is_bridgeless() {
        return Ok(SearchOutcome::Exhausted { nodes: 0 });
    }
    let order = search_edge_order(g);
    let mut search = OrientedSearch {
        g,
        k,
        orientation: &orientation,
        order: &order,
        sums: vec![0i32; g.vertex_count() * k],
        l1: vec![0usize; g.vertex_count()],
        remaining: g.degrees(),
        labels: vec![(0, 0); g.edge_count()],
        counter: NodeCounter::new(budget),
    };
    let step = search.descend(0, 0);
    let nodes = search.counter.nodes;
    Ok(match step {
        Step::Found => {
            let values = search
                .labels
                .iter()
                .map(|&(p, q)| {
                    let mut x = vec![0i64; k];
                    x[p] = 1;
                    x[q] = -1;
                    x
                })
                .collect();
            SearchOutcome::Found {
                witness: VectorFlow::exact(k, orientation.clone(), values)?,
                nodes,
            }
        }
        Step::Dead => SearchOutcome::Exhausted { nodes },
        Step::OutOfBudget => SearchOutcome::Unknown { nodes },
    })
}

impl<T> SearchOutcome<T> {
    fn map_result<U>(self, f: impl FnOnce(T) -> Result<U>) -> Result<SearchOutcome<U>> {
        Ok(match self {
            SearchOutcome::Found { witness, nodes } => SearchOutcome::Found {
                witness: f(witness)?,
                nodes,
            },
            SearchOutcome::Exhausted { nodes } => SearchOutcome::Exhausted { nodes },
            SearchOutcome::Unknown { nodes } => SearchOutcome::Unknown { nodes },
        })
    }
}

struct OrientedSearch<'a> {
    g: &'a Multigraph,
    k: usize,
    orientation: &'a Orientation,
    order: &'a [EdgeId],
    /// Net outflow per (vertex, label), row-major.
    sums: Vec<i32>,
    l1: Vec<usize>,
    remaining: Vec<usize>,
    labels: Vec<(usize, usize)>,
    counter: NodeCounter,
}

impl OrientedSearch<'_> {
    /// Label pair the last edge at `w` must carry, given `w`'s side of it.
    /// `None` inside means infeasible.
    fn forced(&self, w: VertexId, is_tail: bool) -> Option<Option<(usize, usize)>> {
        if self.remaining[w] != 1 {
            return None;
        }
        if self.l1[w] != 2 {
            return Some(None);
        }
        let row = &self.sums[w * self.k..(w + 1) * self.k];
        let pos = row.iter().position(|&s| s == 1);
        let neg = row.iter().position(|&s| s == -1);
        Some(match (pos, neg) {
            // At the tail the edge adds +1 at p and -1 at q to the outflow,
            // so it must cancel: p is where the sum is -1.
            (Some(a), Some(b)) if is_tail => Some((b, a)),
            (Some(a), Some(b)) => Some((a, b)),
            _ => None,
        })
    }

    fn apply(&mut self, w: VertexId, p: usize, q: usize, sign: i32) {
        let base = w * self.k;
        for (label, delta) in [(p, sign), (q, -sign)] {
            let before = self.sums[base + label].unsigned_abs() as usize;
            self.sums[base + label] += delta;
            let after = self.sums[base + label].unsigned_abs() as usize;
            self.l1[w] = self.l1[w] + after - before;
        }
    }

    fn descend(&mut self, i: usize, used: usize) -> Step {
        if i == self.order.len() {
            return Step::Found;
        }
        if !self.counter.tick() {
            return Step::OutOfBudget;
        }
        let e = self.order[i];
        let (t, h) = self.orientation.arc(e);
        let forced = match (self.forced(t, true), self.forced(h, false)) {
            (Some(None), _) | (_, Some(None)) => return Step::Dead,
            (Some(Some(a)), Some(Some(b))) if a != b => return Step::Dead,
            (Some(Some(a)), _) | (_, Some(Some(a))) => Some(a),
            (None, None) => None,
        };
        let candidates: Vec<(usize, usize)> = match forced {
            Some(pair) => vec![pair],
            None => {
                let mut c = Vec::new();
                for p in 0..self.k {
                    for q in 0..self.k {
                        if p == q || p.max(q) > used + 1 {
                            continue;
                        }
                        // a brand-new label may only appear with its predecessor
                        if p.max(q) == used + 1 && p.min(q) != used {
                            continue;
                        }
                        // two brand-new labels: the smaller one takes +1
                        if p.min(q) == used && p.max(q) == used + 1 && p > q {
                            continue;
                        }
                        c.push((p, q));
                    }
                }
                c
            }
        };
        self.remaining[t] -= 1;
        self.remaining[h] -= 1;
        for (p, q) in candidates {
            self.apply(t, p, q, 1);
            self.apply(h, p, q, -1);
            if self.l1[t] <= 2 * self.remaining[t] && self.l1[h] <= 2 * self.remaining[h] {
                self.labels[e] = (p, q);
                let next_used = used.max(p.max(q) + 1);
                match self.descend(i + 1, next_used) {
                    Step::Dead => {}
                    other => return other,
                }
            }
            self.apply(t, p, q, -1);
            self.apply(h, p, q, 1);
        }
        self.remaining[t] += 1;
        self.remaining[h] += 1;
        debug_assert!(self.g.edge_count() == self.labels.len());
        Step::Dead
    }
}

/// Eulerian orientation of every member of an unoriented cover, in member order.
pub fn orient_members(g: &Multigraph, c: &CycleDoubleCover) -> Result<Vec<DirectedEvenSubgraph>> {
    c.members()
        .iter()
        .map(|m| eulerian_orientation(g, m))
        .collect()
}

/// Builds an oriented cover from explicit per-member arcs, validating it.
pub fn oriented_cdc_from_arcs(
    g: &Multigraph,
    members: Vec<BTreeMap<EdgeId, (VertexId, VertexId)>>,
) -> Result<OrientedCdc> {
    let members = members
        .into_iter()
        .map(|arcs| DirectedEvenSubgraph::new(g, arcs))
        .collect::<Result<Vec<_>>>()?;
    let c = OrientedCdc::new(members);
    verify_oriented_cdc(g, &c)?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_graph6;
    use crate::search::DEFAULT_BUDGET;

    fn k4() -> Multigraph {
        parse_graph6(b"C~").unwrap()
    }

    fn cycle(n: usize) -> Multigraph {
        Multigraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn edge_id(g: &Multigraph, a: usize, b: usize) -> EdgeId {
        g.edges()
            .iter()
            .position(|&(u, v)| (u, v) == (a, b) || (u, v) == (b, a))
            .unwrap()
    }

    fn tour(g: &Multigraph, vs: &[usize]) -> EvenSubgraph {
        let edges = (0..vs.len()).map(|i| edge_id(g, vs[i], vs[(i + 1) % vs.len()]));
        EvenSubgraph::new(g, edges).unwrap()
    }

    #[test]
    fn k4_hamiltonian_cover_verifies() {
        let g = k4();
        let c = CycleDoubleCover::new(vec![
            tour(&g, &[0, 1, 2, 3]),
            tour(&g, &[0, 1, 3, 2]),
            tour(&g, &[0, 2, 1, 3]),
        ]);
        assert_eq!(verify_cdc(&g, &c), Ok(()));
        let broken = CycleDoubleCover::new(vec![
            tour(&g, &[0, 1, 2, 3]),
            tour(&g, &[0, 2, 3, 1]),
            EvenSubgraph::default(),
        ]);
        assert!(matches!(
            verify_cdc(&g, &broken),
            Err(CoverDefect::CoverCount { count: 1, .. })
        ));
    }

    #[test]
    fn petersen_pentagons_verify() {
        let g = parse_graph6(b"IheA@GUAo").unwrap();
        let pents = enumerate_pentagons(&g);
        assert_eq!(pents.len(), 12);
        let covers: Vec<_> = pents.iter().map(|p| tour(&g, p)).collect();
        let mut found = false;
        for mask in 0u32..(1 << 12) {
            if mask.count_ones() != 6 {
                continue;
            }
            let c = CycleDoubleCover::new(
                (0..12).filter(|i| mask >> i & 1 == 1).map(|i| covers[i].clone()).collect(),
            );
            if verify_cdc(&g, &c).is_ok() {
                found = true;
                break;
            }
        }
        assert!(found);
    }

    fn enumerate_pentagons(g: &Multigraph) -> Vec<Vec<usize>> {
        let n = g.vertex_count();
        let adj = |a: usize, b: usize| g.edges().iter().any(|&(u, v)| (u, v) == (a, b) || (u, v) == (b, a));
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        for e in 0..n {
                            let p = [a, b, c, d, e];
                            let distinct = (0..5).all(|i| (i + 1..5).all(|j| p[i] != p[j]));
                            if distinct && (0..5).all(|i| adj(p[i], p[(i + 1) % 5])) {
                                let mut key = p.to_vec();
                                key.sort_unstable();
                                if seen.insert(key) {
                                    out.push(p.to_vec());
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn oriented_verifier_catches_same_direction() {
        let g = cycle(3);
        let arcs: BTreeMap<_, _> = [(0, (0, 1)), (1, (1, 2)), (2, (2, 0))].into();
        let forward = DirectedEvenSubgraph::new(&g, arcs.clone()).unwrap();
        let same = OrientedCdc::new(vec![forward.clone(), forward.clone()]);
        assert!(matches!(
            verify_oriented_cdc(&g, &same),
            Err(CoverDefect::SameDirection { .. })
        ));
        let backward: BTreeMap<_, _> = arcs.iter().map(|(&e, &(t, h))| (e, (h, t))).collect();
        let ok = OrientedCdc::new(vec![forward, DirectedEvenSubgraph::new(&g, backward).unwrap()]);
        assert_eq!(verify_oriented_cdc(&g, &ok), Ok(()));
    }

    #[test]
    fn find_cdc_examples() {
        let g = k4();
        let c = find_cdc(&g, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(verify_cdc(&g, c.witness().unwrap()), Ok(()));

        let c5 = cycle(5);
        let c = find_cdc(&c5, 2, DEFAULT_BUDGET).unwrap().into_witness().unwrap();
        assert_eq!(c.members()[0], c.members()[1]);
        assert_eq!(c.members()[0].len(), 5);

        let p = parse_graph6(b"IheA@GUAo").unwrap();
        assert!(matches!(find_cdc(&p, 3, DEFAULT_BUDGET).unwrap(), SearchOutcome::Exhausted { .. }));
        assert!(find_cdc(&p, 1, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn find_oriented_cdc_examples() {
        let k33 = parse_graph6(b"EFz_").unwrap();
        let c = find_oriented_cdc(&k33, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(verify_oriented_cdc(&k33, c.witness().unwrap()), Ok(()));
        assert!(matches!(
            find_oriented_cdc(&k4(), 3, DEFAULT_BUDGET).unwrap(),
            SearchOutcome::Exhausted { .. }
        ));
        assert!(find_oriented_cdc(&k4(), 4, DEFAULT_BUDGET).unwrap().is_found());
    }

    #[test]
    fn bridges_short_circuit() {
        let path = Multigraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(find_cdc(&path, 4, 10).unwrap(), SearchOutcome::Exhausted { nodes: 0 });
        assert!(matches!(
            find_oriented_cdc(&path, 4, 10).unwrap(),
            SearchOutcome::Exhausted { nodes: 0 }
        ));
    }

    #[test]
    fn digon_has_oriented_two_cover() {
        let g = Multigraph::from_edges(2, [(0, 1), (0, 1)]).unwrap();
        let c = find_oriented_cdc(&g, 2, 100).unwrap().into_witness().unwrap();
        assert_eq!(verify_oriented_cdc(&g, &c), Ok(()));
    }
}
