//! Vector-valued flows: representation, conservation and norm checks,
//! membership in the special value sets, the projection of the
//! zero-sum sphere onto a standard sphere, and integer nowhere-zero
//! k-flow search.

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Multigraph, Orientation, VertexId};
use crate::search::{NodeCounter, SearchOutcome, Step};

/// Default tolerance for floating residuals and set membership.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum FlowValues {
    Exact(Vec<Vec<i64>>),
    Float(Vec<Vec<f64>>),
}

impl FlowValues {
    pub fn len(&self) -> usize {
        match self {
            FlowValues::Exact(v) => v.len(),
            FlowValues::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_float(&self) -> Vec<Vec<f64>> {
        match self {
            FlowValues::Exact(v) => v
                .iter()
                .map(|x| x.iter().map(|&c| c as f64).collect())
                .collect(),
            FlowValues::Float(v) => v.clone(),
        }
    }

    /// Integer view, available when every coordinate is integral.
    pub fn to_integers(&self) -> Option<Vec<Vec<i64>>> {
        match self {
            FlowValues::Exact(v) => Some(v.clone()),
            FlowValues::Float(v) => v
                .iter()
                .map(|x| {
                    x.iter()
                        .map(|&c| {
                            if c.fract() == 0.0 && c.abs() < 2f64.powi(52) {
                                Some(c as i64)
                            } else {
                                None
                            }
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

/// Orientation plus one `d`-vector per edge.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorFlow {
    dim: usize,
    orientation: Orientation,
    values: FlowValues,
}

impl VectorFlow {
    pub fn new(dim: usize, orientation: Orientation, values: FlowValues) -> Result<Self> {
        if values.len() != orientation.len() {
            return Err(Error::InvalidArgument(format!(
                "{} values for {} oriented edges",
                values.len(),
                orientation.len()
            )));
        }
        let lengths: Vec<usize> = match &values {
            FlowValues::Exact(v) => v.iter().map(Vec::len).collect(),
            FlowValues::Float(v) => v.iter().map(Vec::len).collect(),
        };
        if let Some((edge, &found)) = lengths.iter().enumerate().find(|(_, &l)| l != dim) {
            return Err(Error::DimensionMismatch {
                edge,
                expected: dim,
                found,
            });
        }
        Ok(VectorFlow {
            dim,
            orientation,
            values,
        })
    }

    pub fn exact(dim: usize, orientation: Orientation, values: Vec<Vec<i64>>) -> Result<Self> {
        Self::new(dim, orientation, FlowValues::Exact(values))
    }

    pub fn float(dim: usize, orientation: Orientation, values: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(dim, orientation, FlowValues::Float(values))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    pub fn values(&self) -> &FlowValues {
        &self.values
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.values, FlowValues::Exact(_))
    }

    pub fn edge_count(&self) -> usize {
        self.values.len()
    }

    pub fn value_f64(&self, e: EdgeId) -> Vec<f64> {
        match &self.values {
            FlowValues::Exact(v) => v[e].iter().map(|&c| c as f64).collect(),
            FlowValues::Float(v) => v[e].clone(),
        }
    }

    pub fn float_values(&self) -> Vec<Vec<f64>> {
        self.values.to_float()
    }

    pub fn to_float(&self) -> VectorFlow {
        VectorFlow {
            dim: self.dim,
            orientation: self.orientation.clone(),
            values: FlowValues::Float(self.values.to_float()),
        }
    }

    /// Same flow expressed against `target`: values flip sign on every
    /// edge whose direction differs.
    pub fn reoriented(&self, target: &Orientation) -> Result<VectorFlow> {
        if target.len() != self.orientation.len() {
            return Err(Error::InvalidOrientation("edge count differs".into()));
        }
        let flip: Vec<bool> = (0..target.len())
            .map(|e| target.arc(e) != self.orientation.arc(e))
            .collect();
        let values = match &self.values {
            FlowValues::Exact(v) => FlowValues::Exact(
                v.iter()
                    .zip(&flip)
                    .map(|(x, &f)| x.iter().map(|&c| if f { -c } else { c }).collect())
                    .collect(),
            ),
            FlowValues::Float(v) => FlowValues::Float(
                v.iter()
                    .zip(&flip)
                    .map(|(x, &f)| x.iter().map(|&c| if f { -c } else { c }).collect())
                    .collect(),
            ),
        };
        Ok(VectorFlow {
            dim: self.dim,
            orientation: target.clone(),
            values,
        })
    }

    /// Appends zero coordinates up to dimension `dim`.
    pub fn padded(&self, dim: usize) -> Result<VectorFlow> {
        if dim < self.dim {
            return Err(Error::InvalidArgument(format!(
                "cannot pad dimension {} down to {dim}",
                self.dim
            )));
        }
        let values = match &self.values {
            FlowValues::Exact(v) => FlowValues::Exact(
                v.iter()
                    .map(|x| {
                        let mut y = x.clone();
                        y.resize(dim, 0);
                        y
                    })
                    .collect(),
            ),
            FlowValues::Float(v) => FlowValues::Float(
                v.iter()
                    .map(|x| {
                        let mut y = x.clone();
                        y.resize(dim, 0.0);
                        y
                    })
                    .collect(),
            ),
        };
        Ok(VectorFlow {
            dim,
            orientation: self.orientation.clone(),
            values,
        })
    }

    /// Applies `matrix` (rows x dim) to every edge value.
    pub fn mapped(&self, matrix: &[Vec<f64>]) -> Result<VectorFlow> {
        if let Some(row) = matrix.iter().find(|r| r.len() != self.dim) {
            return Err(Error::DimensionMismatch {
                edge: 0,
                expected: self.dim,
                found: row.len(),
            });
        }
        let values = self
            .float_values()
            .into_iter()
            .map(|x| {
                matrix
                    .iter()
                    .map(|row| row.iter().zip(&x).map(|(a, b)| a * b).sum())
                    .collect()
            })
            .collect();
        VectorFlow::float(matrix.len(), self.orientation.clone(), values)
    }
}

fn check_shape(g: &Multigraph, f: &VectorFlow) -> Result<()> {
    if f.edge_count() != g.edge_count() {
        return Err(Error::InvalidArgument(format!(
            "flow has {} edges, graph has {}",
            f.edge_count(),
            g.edge_count()
        )));
    }
    for (e, &(t, h)) in f.orientation().arcs().iter().enumerate() {
        if !crate::graph::same_endpoints(g.endpoints(e), (t, h)) {
            return Err(Error::InvalidOrientation(format!(
                "arc ({t},{h}) does not match edge {e}"
            )));
        }
    }
    Ok(())
}

/// Net inflow vector at every vertex (incoming minus outgoing).
pub fn net_inflow(g: &Multigraph, f: &VectorFlow) -> Result<Vec<Vec<f64>>> {
    check_shape(g, f)?;
    let d = f.dim();
    match f.values() {
        FlowValues::Exact(vals) => {
            let mut acc = vec![vec![0i64; d]; g.vertex_count()];
            for (e, x) in vals.iter().enumerate() {
                let (t, h) = f.orientation().arc(e);
                for i in 0..d {
                    acc[h][i] += x[i];
                    acc[t][i] -= x[i];
                }
            }
            Ok(acc
                .into_iter()
                .map(|v| v.into_iter().map(|c| c as f64).collect())
                .collect())
        }
        FlowValues::Float(vals) => {
            let mut acc = vec![vec![0f64; d]; g.vertex_count()];
            for (e, x) in vals.iter().enumerate() {
                let (t, h) = f.orientation().arc(e);
                for i in 0..d {
                    acc[h][i] += x[i];
                    acc[t][i] -= x[i];
                }
            }
            Ok(acc)
        }
    }
}

/// Largest Euclidean norm of a vertex's net inflow, with the vertex where
/// it occurs. Exact flows are summed in integers.
pub fn conservation_defect(g: &Multigraph, f: &VectorFlow) -> Result<(f64, Option<VertexId>)> {
    let net = net_inflow(g, f)?;
    let mut worst = (0.0, None);
    for (v, x) in net.iter().enumerate() {
        let r = norm(x);
        if r > worst.0 {
            worst = (r, Some(v));
        }
    }
    Ok(worst)
}

pub fn conservation_residual(g: &Multigraph, f: &VectorFlow) -> Result<f64> {
    Ok(conservation_defect(g, f)?.0)
}

/// True when every vertex balances exactly (integer arithmetic). Float
/// flows only qualify if all coordinates are integral.
pub fn is_exactly_conserved(g: &Multigraph, f: &VectorFlow) -> Result<bool> {
    check_shape(g, f)?;
    let Some(vals) = f.values().to_integers() else {
        return Ok(false);
    };
    let mut acc = vec![vec![0i64; f.dim()]; g.vertex_count()];
    for (e, x) in vals.iter().enumerate() {
        let (t, h) = f.orientation().arc(e);
        for (i, &c) in x.iter().enumerate() {
            acc[h][i] += c;
            acc[t][i] -= c;
        }
    }
    Ok(acc.iter().all(|v| v.iter().all(|&c| c == 0)))
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|c| c * c).sum::<f64>().sqrt()
}

pub fn norms(f: &VectorFlow) -> Vec<f64> {
    f.float_values().iter().map(|x| norm(x)).collect()
}

/// Minimum and maximum edge norm.
pub fn norm_range(f: &VectorFlow) -> Result<(f64, f64)> {
    let ns = norms(f);
    if ns.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let min = ns.iter().copied().fold(f64::INFINITY, f64::min);
    let max = ns.iter().copied().fold(0.0, f64::max);
    Ok((min, max))
}

/// Scales so the smallest norm is 1 and returns `r = 1 + max/min`.
pub fn normalize(f: &VectorFlow) -> Result<(VectorFlow, f64)> {
    let ns = norms(f);
    if ns.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if let Some(e) = ns.iter().position(|&x| x == 0.0) {
        return Err(Error::ZeroValue(e));
    }
    let (min, max) = norm_range(f)?;
    let values = f
        .float_values()
        .into_iter()
        .map(|x| x.into_iter().map(|c| c / min).collect())
        .collect();
    let scaled = VectorFlow::float(f.dim(), f.orientation().clone(), values)?;
    Ok((scaled, 1.0 + max / min))
}

/// Exactly one +1, exactly one -1, zeros elsewhere.
pub fn in_hd(v: &[i64]) -> bool {
    let plus = v.iter().filter(|&&c| c == 1).count();
    let minus = v.iter().filter(|&&c| c == -1).count();
    let zero = v.iter().filter(|&&c| c == 0).count();
    plus == 1 && minus == 1 && zero == v.len() - 2
}

/// Exactly two non-zero coordinates, each +1 or -1.
pub fn in_td(v: &[i64]) -> bool {
    let unit = v.iter().filter(|&&c| c == 1 || c == -1).count();
    let zero = v.iter().filter(|&&c| c == 0).count();
    unit == 2 && zero + 2 == v.len()
}

/// Coordinate sum 0 and squared norm 2, both within `tol`.
pub fn in_sigma(v: &[f64], tol: f64) -> bool {
    let sum: f64 = v.iter().sum();
    let sq: f64 = v.iter().map(|c| c * c).sum();
    sum.abs() <= tol && (sq - 2.0).abs() <= tol
}

pub fn in_hd_f64(v: &[f64]) -> bool {
    as_integers(v).is_some_and(|x| in_hd(&x))
}

pub fn in_td_f64(v: &[f64]) -> bool {
    as_integers(v).is_some_and(|x| in_td(&x))
}

fn as_integers(v: &[f64]) -> Option<Vec<i64>> {
    v.iter()
        .map(|&c| (c.fract() == 0.0 && c.abs() < 1e15).then_some(c as i64))
        .collect()
}

/// Isometry between the hyperplane `sum x_i = 0` of `R^d` and `R^(d-1)`,
/// scaled by `1/sqrt(2)` so the zero-sum sphere of squared radius 2 lands
/// on the unit sphere.
#[derive(Clone, Debug)]
pub struct SigmaProjection {
    d: usize,
    /// `d - 1` orthonormal vectors of length `d`.
    basis: Vec<Vec<f64>>,
}

impl SigmaProjection {
    /// Gram-Schmidt on `e_1 - e_2, e_2 - e_3, ..., e_(d-1) - e_d`.
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!("dimension {d} < 2")));
        }
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d - 1);
        for i in 0..d - 1 {
            let mut v = vec![0.0; d];
            v[i] = 1.0;
            v[i + 1] = -1.0;
            for b in &basis {
                let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= dot * y;
                }
            }
            let n = norm(&v);
            v.iter_mut().for_each(|x| *x /= n);
            basis.push(v);
        }
        Ok(SigmaProjection { d, basis })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// `R^d -> R^(d-1)`.
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        self.basis
            .iter()
            .map(|b| b.iter().zip(v).map(|(x, y)| x * y).sum::<f64>() / std::f64::consts::SQRT_2)
            .collect()
    }

    /// `R^(d-1) -> R^d`, inverse of `project` on the hyperplane.
    pub fn lift(&self, u: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.d];
        for (coef, b) in u.iter().zip(&self.basis) {
            for (o, x) in out.iter_mut().zip(b) {
                *o += std::f64::consts::SQRT_2 * coef * x;
            }
        }
        out
    }

    fn matrix(&self, inverse: bool) -> Vec<Vec<f64>> {
        let s = std::f64::consts::SQRT_2;
        if inverse {
            (0..self.d)
                .map(|i| self.basis.iter().map(|b| b[i] * s).collect())
                .collect()
        } else {
            self.basis
                .iter()
                .map(|b| b.iter().map(|x| x / s).collect())
                .collect()
        }
    }
}

/// Maps a zero-sum-sphere-valued flow to a unit-vector flow one dimension
/// lower. Conservation is preserved because the map is linear.
pub fn sigma_to_sphere(f: &VectorFlow, tol: f64) -> Result<VectorFlow> {
    let proj = SigmaProjection::new(f.dim())?;
    for (e, x) in f.float_values().iter().enumerate() {
        if !in_sigma(x, tol) {
            return Err(Error::NotInSet {
                edge: e,
                value: x.clone(),
            });
        }
    }
    f.mapped(&proj.matrix(false))
}

/// Inverse of [`sigma_to_sphere`]: unit vectors in `R^(d-1)` back to the
/// zero-sum sphere in `R^d`.
pub fn sphere_to_sigma(f: &VectorFlow, tol: f64) -> Result<VectorFlow> {
    for (e, x) in f.float_values().iter().enumerate() {
        if (norm(x) - 1.0).abs() > tol {
            return Err(Error::NotInSet {
                edge: e,
                value: x.clone(),
            });
        }
    }
    let proj = SigmaProjection::new(f.dim() + 1)?;
    f.mapped(&proj.matrix(true))
}

/// Exhaustive search for an integer flow with values in `±{1..k-1}`.
///
/// Cotree edges of a DFS forest are enumerated; each tree edge is forced
/// by conservation at its lower endpoint as soon as that vertex's subtree
/// is complete, and pruned immediately if the forced value is out of range.
pub fn integer_nzk_flow(g: &Multigraph, k: i64, budget: u64) -> Result<SearchOutcome<VectorFlow>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k = {k} must be at least 2")));
    }
    if !g.is_bridgeless() {
        return Ok(SearchOutcome::Exhausted { nodes: 0 });
    }
    let orientation = Orientation::canonical(g);
    let plan = cotree_plan(g);
    let mut state = IntFlowSearch {
        g,
        orientation: &orientation,
        k,
        plan: &plan,
        value: vec![0i64; g.edge_count()],
        net_out: vec![0i64; g.vertex_count()],
        counter: NodeCounter::new(budget),
    };
    let step = state.descend(0);
    let nodes = state.counter.nodes;
    Ok(match step {
        Step::Found => SearchOutcome::Found {
            witness: VectorFlow::exact(
                1,
                orientation.clone(),
                state.value.iter().map(|&x| vec![x]).collect(),
            )?,
            nodes,
        },
        Step::Dead => SearchOutcome::Exhausted { nodes },
        Step::OutOfBudget => SearchOutcome::Unknown { nodes },
    })
}

#[derive(Clone, Copy, Debug)]
enum PlanStep {
    /// Free value on a cotree edge; `positive_only` breaks the global sign symmetry.
    Choose { edge: EdgeId, positive_only: bool },
    /// Tree edge forced by conservation at `vertex`.
    Force { edge: EdgeId, vertex: VertexId },
}

/// DFS forest, then post-order: a vertex's remaining cotree edges are
/// chosen, after which its parent edge is forced.
fn cotree_plan(g: &Multigraph) -> Vec<PlanStep> {
    let n = g.vertex_count();
    let mut parent_edge: Vec<Option<EdgeId>> = vec![None; n];
    let mut visited = vec![false; n];
    let mut postorder = Vec::with_capacity(n);
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut stack = vec![(root, 0usize)];
        while let Some(top) = stack.last_mut() {
            let (v, idx) = *top;
            if idx < g.incident(v).len() {
                top.1 += 1;
                let (e, w) = g.incident(v)[idx];
                if !visited[w] {
                    visited[w] = true;
                    parent_edge[w] = Some(e);
                    stack.push((w, 0));
                }
            } else {
                postorder.push(v);
                stack.pop();
            }
        }
    }
    let is_tree: Vec<bool> = {
        let mut t = vec![false; g.edge_count()];
        for e in parent_edge.iter().flatten() {
            t[*e] = true;
        }
        t
    };
    let mut scheduled = vec![false; g.edge_count()];
    let mut plan = Vec::new();
    let mut first_choice = true;
    for &v in &postorder {
        for &(e, _) in g.incident(v) {
            if !is_tree[e] && !scheduled[e] {
                scheduled[e] = true;
                plan.push(PlanStep::Choose {
                    edge: e,
                    positive_only: first_choice,
                });
                first_choice = false;
            }
        }
        if let Some(e) = parent_edge[v] {
            scheduled[e] = true;
            plan.push(PlanStep::Force { edge: e, vertex: v });
        }
    }
    plan
}

struct IntFlowSearch<'a> {
    g: &'a Multigraph,
    orientation: &'a Orientation,
    k: i64,
    plan: &'a [PlanStep],
    value: Vec<i64>,
    net_out: Vec<i64>,
    counter: NodeCounter,
}

impl IntFlowSearch<'_> {
    fn assign(&mut self, e: EdgeId, x: i64) {
        let (t, h) = self.orientation.arc(e);
        self.value[e] = x;
        self.net_out[t] += x;
        self.net_out[h] -= x;
    }

    fn unassign(&mut self, e: EdgeId) {
        let x = self.value[e];
        let (t, h) = self.orientation.arc(e);
        self.net_out[t] -= x;
        self.net_out[h] += x;
        self.value[e] = 0;
    }

    fn descend(&mut self, i: usize) -> Step {
        if i == self.plan.len() {
            return Step::Found;
        }
        if !self.counter.tick() {
            return Step::OutOfBudget;
        }
        match self.plan[i] {
            PlanStep::Choose {
                edge,
                positive_only,
            } => {
                for mag in 1..self.k {
                    for sign in [1, -1] {
                        if positive_only && sign < 0 {
                            continue;
                        }
                        self.assign(edge, sign * mag);
                        let r = self.descend(i + 1);
                        if !matches!(r, Step::Dead) {
                            return r;
                        }
                        self.unassign(edge);
                    }
                }
                Step::Dead
            }
            PlanStep::Force { edge, vertex } => {
                let (t, _) = self.orientation.arc(edge);
                let x = if t == vertex {
                    -self.net_out[vertex]
                } else {
                    self.net_out[vertex]
                };
                if x == 0 || x.abs() >= self.k {
                    return Step::Dead;
                }
                self.assign(edge, x);
                let r = self.descend(i + 1);
                if matches!(r, Step::Dead) {
                    self.unassign(edge);
                }
                debug_assert!(self.g.edge_count() == self.value.len());
                r
            }
        }
    }
}
