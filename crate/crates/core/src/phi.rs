//! Heuristic upper bounds on the d-dimensional flow number.
//!
//! Flows are parametrized by their values on the cotree edges of a spanning
//! forest: every coefficient matrix yields a conserved flow, so the search
//! is unconstrained. The objective is the ratio of largest to smallest edge
//! norm, smoothed as `softmax(log |f_e|) - softmin(log |f_e|)` with a
//! shrinking temperature. Whatever the optimizer does, the reported bound
//! comes from a witness that is re-verified from scratch.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::flows::{conservation_residual, integer_nzk_flow, norm, norm_range, normalize, VectorFlow};
use crate::graph::{EdgeId, Multigraph, Orientation};

/// Spanning forest and the fundamental cycle of each cotree edge.
#[derive(Clone, Debug)]
pub struct CycleBasis {
    pub tree_edges: Vec<EdgeId>,
    pub cotree_edges: Vec<EdgeId>,
    /// Per cotree edge: `(edge, ±1)` around its fundamental cycle, signs
    /// relative to the canonical orientation; the cotree edge itself is `+1`.
    pub cycles: Vec<Vec<(EdgeId, f64)>>,
    orientation: Orientation,
    edge_count: usize,
}

impl CycleBasis {
    /// BFS forest; cotree edges in edge-id order.
    pub fn new(g: &Multigraph) -> Self {
        let n = g.vertex_count();
        let orientation = Orientation::canonical(g);
        let mut parent: Vec<Option<(usize, EdgeId)>> = vec![None; n];
        let mut depth = vec![usize::MAX; n];
        let mut is_tree = vec![false; g.edge_count()];
        for root in 0..n {
            if depth[root] != usize::MAX {
                continue;
            }
            depth[root] = 0;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &(e, w) in g.incident(v) {
                    if depth[w] == usize::MAX {
                        depth[w] = depth[v] + 1;
                        parent[w] = Some((v, e));
                        is_tree[e] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        let tree_edges: Vec<EdgeId> = (0..g.edge_count()).filter(|&e| is_tree[e]).collect();
        let cotree_edges: Vec<EdgeId> = (0..g.edge_count()).filter(|&e| !is_tree[e]).collect();
        let cycles = cotree_edges
            .iter()
            .map(|&c| {
                // c runs t -> h; close the cycle with the tree path h -> t.
                let (t, h) = orientation.arc(c);
                let mut cycle = vec![(c, 1.0)];
                let (mut a, mut b) = (h, t);
                let mut tail_part = Vec::new();
                while a != b {
                    if depth[a] >= depth[b] {
                        let (p, e) = parent[a].expect("non-root has a parent");
                        // walking a -> p
                        cycle.push((e, orientation.sign_of(e, (a, p)) as f64));
                        a = p;
                    } else {
                        let (p, e) = parent[b].expect("non-root has a parent");
                        // the path from the meeting point down to t walks p -> b
                        tail_part.push((e, orientation.sign_of(e, (p, b)) as f64));
                        b = p;
                    }
                }
                cycle.extend(tail_part.into_iter().rev());
                cycle
            })
            .collect();
        CycleBasis {
            tree_edges,
            cotree_edges,
            cycles,
            orientation,
            edge_count: g.edge_count(),
        }
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    /// Edge values (canonical orientation) for a `cotree x d` coefficient matrix.
    pub fn values(&self, coefficients: &[Vec<f64>], d: usize) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; d]; self.edge_count];
        for (cycle, coef) in self.cycles.iter().zip(coefficients) {
            for &(e, s) in cycle {
                for (x, c) in out[e].iter_mut().zip(coef) {
                    *x += s * c;
                }
            }
        }
        out
    }

    pub fn flow(&self, coefficients: &[Vec<f64>], d: usize) -> Result<VectorFlow> {
        VectorFlow::float(d, self.orientation.clone(), self.values(coefficients, d))
    }
}

/// A flow expressed in cotree coordinates.
#[derive(Clone, Debug)]
pub struct CycleBasisParam {
    pub basis: CycleBasis,
    pub dim: usize,
    pub coefficients: Vec<Vec<f64>>,
}

/// Expresses a conserved, nowhere-zero flow in cotree coordinates.
pub fn seed_from_witness(g: &Multigraph, f: &VectorFlow, tol: f64) -> Result<CycleBasisParam> {
    let residual = conservation_residual(g, f)?;
    let (lo, hi) = norm_range(f)?;
    if residual > tol * hi.max(1.0) {
        return Err(Error::NotConserved {
            vertex: crate::flows::conservation_defect(g, f)?.1.unwrap_or(0),
            residual,
        });
    }
    if lo == 0.0 {
        let e = crate::flows::norms(f).iter().position(|&x| x == 0.0).unwrap_or(0);
        return Err(Error::ZeroValue(e));
    }
    let basis = CycleBasis::new(g);
    let canon = f.reoriented(basis.orientation())?;
    let values = canon.float_values();
    let coefficients = basis.cotree_edges.iter().map(|&e| values[e].clone()).collect();
    Ok(CycleBasisParam {
        basis,
        dim: f.dim(),
        coefficients,
    })
}

#[derive(Clone, Debug)]
pub struct PhiOptions {
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    pub tol: f64,
    pub warm_starts: Vec<VectorFlow>,
    /// Also start from the smallest integer k-flow (k <= 6) found within
    /// `integer_budget` nodes, zero-padded to the target dimension.
    pub integer_warm_start: bool,
    pub integer_budget: u64,
    pub temperature_start: f64,
    pub temperature_decay: f64,
    pub temperature_every: usize,
    pub temperature_floor: f64,
}

impl Default for PhiOptions {
    fn default() -> Self {
        PhiOptions {
            restarts: 32,
            max_iters: 500,
            seed: 0,
            tol: crate::flows::DEFAULT_TOL,
            warm_starts: Vec::new(),
            integer_warm_start: true,
            integer_budget: 2_000_000,
            temperature_start: 1.0,
            temperature_decay: 0.7,
            temperature_every: 50,
            temperature_floor: 1e-4,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StartKind {
    Warm(usize),
    Integer(i64),
    Random(u64),
}

#[derive(Clone, Debug)]
pub struct RestartTrace {
    pub start: StartKind,
    /// Best true ratio `max/min` after each iteration (non-increasing).
    pub best_ratio: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct PhiEstimate {
    /// Certified upper bound `1 + max/min` of the witness.
    pub r: f64,
    /// Normalized: smallest norm 1.
    pub witness: VectorFlow,
    pub residual: f64,
    pub traces: Vec<RestartTrace>,
}

/// Multi-start local minimization of the norm ratio over the cycle space.
pub fn estimate_phi(g: &Multigraph, d: usize, opts: &PhiOptions) -> Result<PhiEstimate> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    g.require_bridgeless()?;
    let basis = CycleBasis::new(g);
    let p = basis.cotree_edges.len();

    let mut starts: Vec<(StartKind, Vec<Vec<f64>>)> = Vec::new();
    for (i, w) in opts.warm_starts.iter().enumerate() {
        let padded = w.padded(d)?;
        let seed = seed_from_witness(g, &padded, opts.tol.max(1e-9))?;
        starts.push((StartKind::Warm(i), seed.coefficients));
    }
    if opts.integer_warm_start {
        for k in 2..=6 {
            if let Some(f) = integer_nzk_flow(g, k, opts.integer_budget)?.into_witness() {
                let seed = seed_from_witness(g, &f.padded(d)?, opts.tol.max(1e-9))?;
                starts.push((StartKind::Integer(k), seed.coefficients));
                break;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for r in 0..opts.restarts {
        let c: Vec<Vec<f64>> = (0..p)
            .map(|_| (0..d).map(|_| StandardNormal.sample(&mut rng)).collect())
            .collect();
        starts.push((StartKind::Random(r as u64), c));
    }

    let mut best: Option<(f64, VectorFlow, f64)> = None;
    let mut traces = Vec::with_capacity(starts.len());
    for (kind, start) in starts {
        let (coefs, trace) = descend(&basis, d, start, opts);
        traces.push(RestartTrace {
            start: kind,
            best_ratio: trace,
        });
        let Some(coefs) = coefs else { continue };
        // Certify independently of the optimizer's bookkeeping.
        let flow = basis.flow(&coefs, d)?;
        let Ok((scaled, r)) = normalize(&flow) else {
            continue;
        };
        let residual = conservation_residual(g, &scaled)?;
        let (lo, hi) = norm_range(&scaled)?;
        if residual > opts.tol || (lo - 1.0).abs() > opts.tol || hi > r - 1.0 + opts.tol {
            continue;
        }
        if best.as_ref().is_none_or(|b| r < b.0) {
            best = Some((r, scaled, residual));
        }
    }
    let (r, witness, residual) = best.ok_or_else(|| {
        Error::NonConvergence("no restart produced a verifiable nowhere-zero witness".into())
    })?;
    Ok(PhiEstimate {
        r,
        witness,
        residual,
        traces,
    })
}

fn ratio_of(values: &[Vec<f64>]) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for x in values {
        let n = norm(x);
        lo = lo.min(n);
        hi = hi.max(n);
    }
    if lo > 0.0 {
        hi / lo
    } else {
        f64::INFINITY
    }
}

/// Smoothed log-ratio and its gradient with respect to the coefficients.
fn objective(
    basis: &CycleBasis,
    d: usize,
    coefs: &[Vec<f64>],
    temp: f64,
) -> Option<(f64, Vec<Vec<f64>>)> {
    let values = basis.values(coefs, d);
    let logs: Vec<f64> = values.iter().map(|x| norm(x).ln()).collect();
    if logs.iter().any(|l| !l.is_finite()) {
        return None;
    }
    let hi = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = logs.iter().copied().fold(f64::INFINITY, f64::min);
    let wmax: Vec<f64> = logs.iter().map(|l| ((l - hi) / temp).exp()).collect();
    let wmin: Vec<f64> = logs.iter().map(|l| ((lo - l) / temp).exp()).collect();
    let smax_sum: f64 = wmax.iter().sum();
    let smin_sum: f64 = wmin.iter().sum();
    let value = (hi + temp * smax_sum.ln()) - (lo - temp * smin_sum.ln());

    let mut grad = vec![vec![0.0; d]; coefs.len()];
    let edge_grad: Vec<Vec<f64>> = values
        .iter()
        .enumerate()
        .map(|(e, x)| {
            let w = wmax[e] / smax_sum - wmin[e] / smin_sum;
            let n2: f64 = x.iter().map(|c| c * c).sum();
            x.iter().map(|c| w * c / n2).collect()
        })
        .collect();
    for (gc, cycle) in grad.iter_mut().zip(&basis.cycles) {
        for &(e, s) in cycle {
            for (g, x) in gc.iter_mut().zip(&edge_grad[e]) {
                *g += s * x;
            }
        }
    }
    Some((value, grad))
}

fn frob(m: &[Vec<f64>]) -> f64 {
    m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

/// One restart. Returns the best coefficients seen (by true ratio) and the
/// best-so-far ratio trace.
fn descend(
    basis: &CycleBasis,
    d: usize,
    start: Vec<Vec<f64>>,
    opts: &PhiOptions,
) -> (Option<Vec<Vec<f64>>>, Vec<f64>) {
    let scale = frob(&start);
    if scale == 0.0 || !scale.is_finite() {
        return (None, Vec::new());
    }
    let mut coefs: Vec<Vec<f64>> = start
        .into_iter()
        .map(|r| r.into_iter().map(|x| x / scale).collect())
        .collect();
    let mut best_ratio = ratio_of(&basis.values(&coefs, d));
    let mut best = best_ratio.is_finite().then(|| coefs.clone());
    let mut trace = Vec::with_capacity(opts.max_iters + 1);
    trace.push(best_ratio);
    let mut step = 0.1;
    for it in 0..opts.max_iters {
        let temp = (opts.temperature_start
            * opts
                .temperature_decay
                .powi((it / opts.temperature_every.max(1)) as i32))
        .max(opts.temperature_floor);
        let Some((value, grad)) = objective(basis, d, &coefs, temp) else {
            break;
        };
        let gnorm = frob(&grad);
        if gnorm < 1e-14 {
            trace.push(best_ratio);
            continue;
        }
        let mut accepted = None;
        let mut alpha = step;
        for _ in 0..40 {
            let trial: Vec<Vec<f64>> = coefs
                .iter()
                .zip(&grad)
                .map(|(c, g)| c.iter().zip(g).map(|(a, b)| a - alpha * b / gnorm).collect())
                .collect();
            if let Some((tv, _)) = objective(basis, d, &trial, temp) {
                if tv <= value - 1e-4 * alpha * gnorm {
                    accepted = Some(trial);
                    break;
                }
            }
            alpha *= 0.5;
        }
        match accepted {
            Some(next) => {
                let s = frob(&next);
                coefs = next.into_iter().map(|r| r.into_iter().map(|x| x / s).collect()).collect();
                step = (alpha * 2.0).min(1.0);
            }
            None => step = (step * 0.5).max(1e-12),
        }
        let ratio = ratio_of(&basis.values(&coefs, d));
        if ratio < best_ratio {
            best_ratio = ratio;
            best = Some(coefs.clone());
        }
        trace.push(best_ratio);
        if best_ratio - 1.0 < 1e-13 {
            break;
        }
    }
    (best, trace)
}
