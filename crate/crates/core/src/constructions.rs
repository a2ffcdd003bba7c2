//! Vector flows built from covers by sending a fixed point along each
//! member, and a symmetric unit-vector flow on the Petersen graph.

use nalgebra::{Matrix5, Vector5};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cdc::{orient_members, verify_cdc, verify_oriented_cdc, CycleDoubleCover, OrientedCdc};
use crate::error::{Error, Result};
use crate::flows::{conservation_residual, norm, norm_range, normalize, VectorFlow};
use crate::geometry::{cover_flow_bound, cover_points, oriented_cover_flow_bound, two_simplex_points, PointConfiguration};
use crate::graph::{DirectedEvenSubgraph, EdgeId, Multigraph, Orientation};

/// Which members contributed to an edge and with which sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeTerms {
    pub edge: EdgeId,
    /// `(member, sign)` pairs, sign `+1` when the member runs along the
    /// reference orientation.
    pub terms: Vec<(usize, i8)>,
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub points: PointConfiguration,
    /// Flow before scaling.
    pub raw: VectorFlow,
    /// Scaled so the smallest edge norm is 1.
    pub flow: VectorFlow,
    pub r: f64,
    pub bound: f64,
    pub residual: f64,
    pub trace: Vec<EdgeTerms>,
}

fn assemble(
    g: &Multigraph,
    members: &[DirectedEvenSubgraph],
    points: PointConfiguration,
    bound: f64,
) -> Result<Construction> {
    let o = Orientation::canonical(g);
    let mut values = vec![vec![0.0; points.m]; g.edge_count()];
    let mut trace: Vec<EdgeTerms> = (0..g.edge_count())
        .map(|edge| EdgeTerms {
            edge,
            terms: Vec::with_capacity(2),
        })
        .collect();
    for (i, member) in members.iter().enumerate() {
        for (&e, &arc) in member.arcs() {
            let sign = o.sign_of(e, arc);
            for (x, p) in values[e].iter_mut().zip(&points.points[i]) {
                *x += sign as f64 * p;
            }
            trace[e].terms.push((i, sign as i8));
        }
    }
    let raw = VectorFlow::float(points.m, o, values)?;
    let (flow, r) = normalize(&raw)?;
    let residual = conservation_residual(g, &flow)?;
    Ok(Construction {
        points,
        raw,
        flow,
        r,
        bound,
        residual,
        trace,
    })
}

/// From an unoriented d-cover (`d >= 3`): each member gets an eulerian
/// orientation and carries the point `a_i` in `R^(d-1)`, so an edge in
/// members `i, j` receives `±a_i ± a_j`.
pub fn cover_flow(g: &Multigraph, c: &CycleDoubleCover) -> Result<Construction> {
    let d = c.len();
    if d < 3 {
        return Err(Error::InvalidArgument(format!(
            "cover has {d} members, need at least 3"
        )));
    }
    verify_cdc(g, c)?;
    let members = orient_members(g, c)?;
    assemble(g, &members, cover_points(d)?, cover_flow_bound(d))
}

/// From an oriented d-cover (`d >= 4`): member `i` carries `P_i` along its
/// own direction, so an edge receives exactly `P_i - P_j` where `i` is the
/// member agreeing with the reference orientation.
pub fn oriented_cover_flow(g: &Multigraph, c: &OrientedCdc) -> Result<Construction> {
    let d = c.len();
    if d < 4 {
        return Err(Error::InvalidArgument(format!(
            "cover has {d} members; d = 3 is covered by the integer 3-flow equivalence"
        )));
    }
    verify_oriented_cdc(g, c)?;
    assemble(g, c.members(), two_simplex_points(d)?, oriented_cover_flow_bound(d))
}

#[derive(Clone, Debug)]
pub struct PetersenS2 {
    pub graph: Multigraph,
    pub flow: VectorFlow,
    pub residual: f64,
    pub newton_iterations: usize,
    pub attempts: usize,
}

/// Outer cycle `k -> k+1`, spokes `k -> k+5`, inner star `k+5 -> (k+2)%5 + 5`.
pub fn petersen_graph() -> Multigraph {
    let mut edges = Vec::with_capacity(15);
    for k in 0..5 {
        edges.push((k, (k + 1) % 5));
    }
    for k in 0..5 {
        edges.push((k, k + 5));
    }
    for k in 0..5 {
        edges.push((k + 5, (k + 2) % 5 + 5));
    }
    Multigraph::from_edges(10, edges).expect("valid edge list")
}

fn rotate(v: &[f64; 3], angle: f64) -> [f64; 3] {
    let (s, c) = angle.sin_cos();
    [c * v[0] - s * v[1], s * v[0] + c * v[1], v[2]]
}

/// Unit-vector flow in `R^3` on [`petersen_graph`] with 5-fold symmetry.
///
/// Outer edge `k` carries `R^k x`, inner edge `k` carries `R^k y` (so the
/// star's consecutive edges differ by a `4π/5` turn), `R` being rotation
/// by `2π/5` about the z-axis. Spokes are fixed by conservation at the outer
/// vertices: spoke `k` carries `R^(k-1) x - R^k x`. Gauging `x = (a, 0, b)`
/// leaves five unknowns `(a, b, y)` and five equations: `|x| = |y| = 1`,
/// unit spoke, and conservation at an inner vertex (two non-trivial
/// coordinates). Newton's method from random starts solves them.
pub fn petersen_s2_flow(tol: f64, seed: u64) -> Result<PetersenS2> {
    const MAX_ATTEMPTS: usize = 64;
    const MAX_NEWTON: usize = 100;
    let theta = 2.0 * std::f64::consts::PI / 5.0;
    let g = petersen_graph();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Linear maps M = R^-1 - I and N = R^-2 - I on the xy-plane.
    let lin = |angle: f64| {
        let (s, c) = angle.sin_cos();
        [[c - 1.0, -s], [s, c - 1.0]]
    };
    let m = lin(-theta);
    let nm = lin(-2.0 * theta);

    let residual_vec = |z: &Vector5<f64>| -> Vector5<f64> {
        let (a, b, c, e, f) = (z[0], z[1], z[2], z[3], z[4]);
        let sx = m[0][0] * a;
        let sy = m[1][0] * a;
        Vector5::new(
            a * a + b * b - 1.0,
            c * c + e * e + f * f - 1.0,
            sx * sx + sy * sy - 1.0,
            sx + nm[0][0] * c + nm[0][1] * e,
            sy + nm[1][0] * c + nm[1][1] * e,
        )
    };
    let jacobian = |z: &Vector5<f64>| -> Matrix5<f64> {
        let (a, b, c, e, f) = (z[0], z[1], z[2], z[3], z[4]);
        let k = m[0][0] * m[0][0] + m[1][0] * m[1][0];
        Matrix5::new(
            2.0 * a, 2.0 * b, 0.0, 0.0, 0.0, //
            0.0, 0.0, 2.0 * c, 2.0 * e, 2.0 * f, //
            2.0 * k * a, 0.0, 0.0, 0.0, 0.0, //
            m[0][0], 0.0, nm[0][0], nm[0][1], 0.0, //
            m[1][0], 0.0, nm[1][0], nm[1][1], 0.0,
        )
    };

    let mut last_residual = f64::INFINITY;
    for attempt in 1..=MAX_ATTEMPTS {
        let mut z = Vector5::from_fn(|_, _| rng.random_range(-1.0..1.0));
        let mut iterations = 0;
        for it in 0..MAX_NEWTON {
            iterations = it + 1;
            let r = residual_vec(&z);
            if r.amax() < 1e-15 {
                break;
            }
            let Some(step) = jacobian(&z).lu().solve(&r) else {
                break;
            };
            z -= step;
            if !z.iter().all(|x| x.is_finite()) {
                break;
            }
        }
        if !z.iter().all(|x| x.is_finite()) || residual_vec(&z).amax() > 1e-12 {
            last_residual = residual_vec(&z).amax();
            continue;
        }
        let x0 = [z[0], 0.0, z[1]];
        let y0 = [z[2], z[3], z[4]];
        let mut values = vec![Vec::new(); 15];
        for k in 0..5 {
            let xk = rotate(&x0, theta * k as f64);
            let xprev = rotate(&x0, theta * (k as f64 - 1.0));
            values[k] = xk.to_vec();
            values[5 + k] = (0..3).map(|i| xprev[i] - xk[i]).collect();
            values[10 + k] = rotate(&y0, theta * k as f64).to_vec();
        }
        let flow = VectorFlow::float(3, Orientation::from_arcs(&g, g.edges().to_vec())?, values)?;
        let residual = conservation_residual(&g, &flow)?;
        let (lo, hi) = norm_range(&flow)?;
        if residual <= tol && (lo - 1.0).abs() <= tol && (hi - 1.0).abs() <= tol {
            return Ok(PetersenS2 {
                graph: g,
                flow,
                residual,
                newton_iterations: iterations,
                attempts: attempt,
            });
        }
        last_residual = residual.max((lo - 1.0).abs()).max((hi - 1.0).abs());
    }
    Err(Error::NonConvergence(format!(
        "no unit flow after {MAX_ATTEMPTS} starts; last defect {last_residual:e}"
    )))
}

/// Pairwise angles (degrees) between the three signed edge vectors at a
/// cubic vertex, signed as outflow.
pub fn vertex_angles(g: &Multigraph, f: &VectorFlow, v: usize) -> Vec<f64> {
    let vecs: Vec<Vec<f64>> = g
        .incident(v)
        .iter()
        .map(|&(e, _)| {
            let x = f.value_f64(e);
            if f.orientation().arc(e).0 == v {
                x
            } else {
                x.into_iter().map(|c| -c).collect()
            }
        })
        .collect();
    let mut out = Vec::new();
    for i in 0..vecs.len() {
        for j in i + 1..vecs.len() {
            let dot: f64 = vecs[i].iter().zip(&vecs[j]).map(|(a, b)| a * b).sum();
            let cos = (dot / (norm(&vecs[i]) * norm(&vecs[j]))).clamp(-1.0, 1.0);
            out.push(cos.acos().to_degrees());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdc::{find_cdc, find_oriented_cdc};
    use crate::flows::norms;
    use crate::graph::EvenSubgraph;
    use crate::io::parse_graph6;
    use crate::search::DEFAULT_BUDGET;

    #[test]
    fn k4_hamiltonian_cover_gives_exact_bound() {
        let g = parse_graph6(b"C~").unwrap();
        let c = find_cdc(&g, 3, DEFAULT_BUDGET).unwrap().into_witness().unwrap();
        let out = cover_flow(&g, &c).unwrap();
        assert_eq!(out.flow.dim(), 2);
        assert!(out.residual <= 1e-9);
        assert!((out.r - (1.0 + 3f64.sqrt())).abs() < 1e-6, "r = {}", out.r);
        assert!(out.trace.iter().all(|t| t.terms.len() == 2));
    }

    #[test]
    fn padded_doubled_cycle() {
        let g = Multigraph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        let all = EvenSubgraph::new(&g, 0..5).unwrap();
        let c = CycleDoubleCover::new(vec![all.clone(), all]).padded(3);
        let out = cover_flow(&g, &c).unwrap();
        assert!(out.residual <= 1e-9);
        assert!(out.r <= cover_flow_bound(3) + 1e-9);
    }

    #[test]
    fn cover_flow_rejects_small_or_invalid_covers() {
        let g = Multigraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let all = EvenSubgraph::new(&g, 0..3).unwrap();
        assert!(cover_flow(&g, &CycleDoubleCover::new(vec![all.clone(), all.clone()])).is_err());
        let bad = CycleDoubleCover::new(vec![all, EvenSubgraph::default(), EvenSubgraph::default()]);
        assert!(matches!(cover_flow(&g, &bad), Err(Error::InvalidCover(_))));
    }

    #[test]
    fn cube_oriented_four_cover() {
        let g = parse_graph6(b"Gr`HOk").unwrap();
        let c = find_oriented_cdc(&g, 4, DEFAULT_BUDGET).unwrap().into_witness().unwrap();
        let out = oriented_cover_flow(&g, &c).unwrap();
        assert_eq!(out.flow.dim(), 2);
        assert!(out.residual <= 1e-9);
        assert!(out.r <= 1.0 + 2f64.sqrt() + 1e-9);
    }

    #[test]
    fn oriented_cover_flow_rejects_three_members() {
        let g = parse_graph6(b"EFz_").unwrap();
        let c = find_oriented_cdc(&g, 3, DEFAULT_BUDGET).unwrap().into_witness().unwrap();
        assert!(matches!(oriented_cover_flow(&g, &c), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn petersen_unit_flow() {
        let out = petersen_s2_flow(1e-9, 7).unwrap();
        assert!(out.residual <= 1e-9);
        assert!(norms(&out.flow).iter().all(|n| (n - 1.0).abs() <= 1e-9));
        for v in 0..10 {
            for a in vertex_angles(&out.graph, &out.flow, v) {
                assert!((a - 120.0).abs() < 1e-6, "angle {a} at {v}");
            }
        }
        // cubic on 10 vertices with girth 5 is the Petersen graph
        assert!(out.graph.is_cubic() && out.graph.vertex_count() == 10);
        assert_eq!(girth(&out.graph), 5);
    }

    fn girth(g: &Multigraph) -> usize {
        let n = g.vertex_count();
        let mut best = usize::MAX;
        for s in 0..n {
            let mut dist = vec![usize::MAX; n];
            let mut parent = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &(e, w) in g.incident(v) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        parent[w] = e;
                        queue.push_back(w);
                    } else if parent[v] != e {
                        best = best.min(dist[v] + dist[w] + 1);
                    }
                }
            }
        }
        best
    }
}
