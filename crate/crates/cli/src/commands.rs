use anyhow::{bail, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use vecflow::cdc::{find_cdc, find_oriented_cdc, CycleDoubleCover, OrientedCdc};
use vecflow::constructions::{petersen_s2_flow, cover_flow, oriented_cover_flow, vertex_angles, Construction};
use vecflow::correspondence::{
    cdc_to_td_flow, three_flow_audit, hd_flow_to_oriented_cdc, oriented_cdc_to_hd_flow,
    oriented_cover_with_flow, td_flow_to_cdc, AuditVerdict,
};
use vecflow::flows::{
    conservation_residual, in_hd_f64, in_sigma, in_td_f64, is_exactly_conserved, norm_range, norms,
    sigma_to_sphere, sphere_to_sigma, VectorFlow,
};
use vecflow::io::{write_edge_list, write_graph6};
use vecflow::json::{Certificate, CoverJson, FlowJson, PointSetJson};
use vecflow::phi::{estimate_phi, PhiOptions, StartKind};
use vecflow::polytope::{check_crown_line_iso, crown_graph, gd_graph, CrownVertex};
use vecflow::{Multigraph, Orientation, Verdict};

use crate::input::BatchItem;
use crate::{AuditArgs, BatchAudit, BatchCdc, BatchCmd, BatchPhi, CdcFindArgs, CoverSource, PhiArgs, ValueSet};

/// JSON to print and the process exit code.
pub struct Outcome {
    pub json: Option<Value>,
    pub code: u8,
}

impl Outcome {
    fn new(json: Value, code: u8) -> Self {
        Outcome {
            json: Some(json),
            code,
        }
    }

    pub fn printed(code: u8) -> Self {
        Outcome { json: None, code }
    }
}

pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_UNKNOWN: u8 = 2;
pub const EXIT_INPUT: u8 = 3;

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Found => 0,
        Verdict::None => EXIT_NEGATIVE,
        Verdict::Unknown => EXIT_UNKNOWN,
    }
}

/// A bridge rules out every nowhere-zero flow, so it is a negative answer
/// rather than bad input.
pub fn error_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<vecflow::Error>() {
        Some(vecflow::Error::Bridge(_)) => EXIT_NEGATIVE,
        Some(vecflow::Error::NonConvergence(_)) => EXIT_UNKNOWN,
        _ => EXIT_INPUT,
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn edge_list(g: &Multigraph) -> Value {
    json!(g.edges().iter().map(|&(u, v)| [u, v]).collect::<Vec<_>>())
}

pub fn analyze(g: &Multigraph) -> Outcome {
    let degrees = g.degrees();
    let mut histogram = std::collections::BTreeMap::new();
    for &d in &degrees {
        *histogram.entry(d).or_insert(0usize) += 1;
    }
    let bridges: Vec<usize> = g.bridges().into_iter().collect();
    Outcome::new(
        json!({
            "graph_hash": g.canonical_hash(),
            "n": g.vertex_count(),
            "m": g.edge_count(),
            "simple": g.is_simple(),
            "bridgeless": bridges.is_empty(),
            "bridges": bridges,
            "bipartite": g.is_bipartite(),
            "cubic": g.is_cubic(),
            "components": g.components().len(),
            "degrees": degrees,
            "degree_histogram": histogram.into_iter().map(|(d, c)| [d, c]).collect::<Vec<_>>(),
        }),
        0,
    )
}

fn flow_stats(cert: &mut Certificate, g: &Multigraph, f: &VectorFlow) -> Result<()> {
    cert.residual = Some(conservation_residual(g, f)?);
    if f.edge_count() > 0 {
        let (lo, hi) = norm_range(f)?;
        cert.min_norm = Some(lo);
        cert.max_norm = Some(hi);
        if lo > 0.0 {
            cert.r = Some(1.0 + hi / lo);
        }
    }
    cert.flow = Some(FlowJson::from_flow(f));
    Ok(())
}

pub fn cdc_find(g: &Multigraph, args: &CdcFindArgs) -> Result<Outcome> {
    let k = args.k;
    let (mut cert, verdict) = if args.oriented {
        let out = oriented_cover_with_flow(g, k, args.budget)?;
        let verdict = out.verdict();
        let mut cert = Certificate::new(g, format!("oriented {k}-cycle double cover"), verdict);
        cert.nodes = Some(out.nodes());
        if let Some((cover, flow)) = out.into_witness() {
            cert.empty_members = cover.empty_members();
            cert.cover = Some(CoverJson::from_oriented(&cover));
            flow_stats(&mut cert, g, &flow)?;
        }
        (cert, verdict)
    } else {
        let out = find_cdc(g, k, args.budget)?;
        let verdict = out.verdict();
        let mut cert = Certificate::new(g, format!("{k}-cycle double cover"), verdict);
        cert.nodes = Some(out.nodes());
        if let Some(cover) = out.into_witness() {
            cert.empty_members = cover.empty_members();
            cert.cover = Some(CoverJson::from_cdc(&cover));
        }
        (cert, verdict)
    };
    if cert.cover.is_none() {
        cert.empty_members.clear();
    }
    Ok(Outcome::new(to_value(&cert), verdict_code(verdict)))
}

pub fn flow_verify(g: &Multigraph, f: &VectorFlow, set: Option<ValueSet>, tol: f64) -> Result<Outcome> {
    let residual = conservation_residual(g, f)?;
    let conserved = if f.is_exact() {
        is_exactly_conserved(g, f)?
    } else {
        residual <= tol
    };
    let ns = norms(f);
    let zero_threshold = if f.is_exact() { 0.0 } else { tol };
    let zero_edges: Vec<usize> = (0..ns.len()).filter(|&e| ns[e] <= zero_threshold).collect();
    let (min_norm, max_norm) = if ns.is_empty() {
        (None, None)
    } else {
        let (lo, hi) = norm_range(f)?;
        (Some(lo), Some(hi))
    };
    let r = match (min_norm, max_norm) {
        (Some(lo), Some(hi)) if lo > 0.0 => Some(1.0 + hi / lo),
        _ => None,
    };
    let violations: Vec<usize> = match set {
        None => Vec::new(),
        Some(s) => (0..f.edge_count())
            .filter(|&e| {
                let v = f.value_f64(e);
                !match s {
                    ValueSet::Hd => in_hd_f64(&v),
                    ValueSet::Td => in_td_f64(&v),
                    ValueSet::Sigma => in_sigma(&v, tol),
                    ValueSet::Unit => (ns[e] - 1.0).abs() <= tol,
                }
            })
            .collect(),
    };
    let valid = conserved && zero_edges.is_empty() && violations.is_empty();
    let set_name = set.map(|s| match s {
        ValueSet::Hd => "hd",
        ValueSet::Td => "td",
        ValueSet::Sigma => "sigma",
        ValueSet::Unit => "unit",
    });
    Ok(Outcome::new(
        json!({
            "graph_hash": g.canonical_hash(),
            "d": f.dim(),
            "exact": f.is_exact(),
            "tol": tol,
            "residual": residual,
            "conserved": conserved,
            "min_norm": min_norm,
            "max_norm": max_norm,
            "r": r,
            "nowhere_zero": zero_edges.is_empty(),
            "zero_edges": zero_edges,
            "set": set_name,
            "set_violations": violations,
            "valid": valid,
        }),
        if valid { 0 } else { EXIT_NEGATIVE },
    ))
}

fn flow_out(f: &VectorFlow) -> Outcome {
    Outcome::new(to_value(&FlowJson::from_flow(f)), 0)
}

pub fn convert_cdc_to_flow(g: &Multigraph, c: &CoverJson) -> Result<Outcome> {
    let cover = c.to_oriented(g)?;
    Ok(flow_out(&oriented_cdc_to_hd_flow(g, &cover, &Orientation::canonical(g))?))
}

pub fn convert_flow_to_cdc(g: &Multigraph, f: &VectorFlow) -> Result<Outcome> {
    let cover = hd_flow_to_oriented_cdc(g, f)?;
    Ok(Outcome::new(to_value(&CoverJson::from_oriented(&cover)), 0))
}

pub fn convert_cdc_to_td(g: &Multigraph, c: &CoverJson) -> Result<Outcome> {
    let cover = c.to_cdc(g)?;
    Ok(flow_out(&cdc_to_td_flow(g, &cover, &Orientation::canonical(g))?))
}

pub fn convert_td_to_cdc(g: &Multigraph, f: &VectorFlow) -> Result<Outcome> {
    let cover = td_flow_to_cdc(g, f)?;
    Ok(Outcome::new(to_value(&CoverJson::from_cdc(&cover)), 0))
}

pub fn convert_sigma(g: &Multigraph, f: &VectorFlow, tol: f64, forward: bool) -> Result<Outcome> {
    let out = if forward {
        sigma_to_sphere(f, tol)?
    } else {
        sphere_to_sigma(f, tol)?
    };
    // the map is linear, so this only reports rounding
    conservation_residual(g, &out)?;
    Ok(flow_out(&out))
}

enum Cover {
    Plain(CycleDoubleCover),
    Oriented(OrientedCdc),
}

fn obtain_cover(g: &Multigraph, src: &CoverSource, oriented: bool) -> Result<std::result::Result<Cover, Outcome>> {
    if let Some(path) = &src.cdc {
        let cj = crate::input::read_cover(path)?;
        return Ok(Ok(if oriented {
            Cover::Oriented(cj.to_oriented(g)?)
        } else {
            Cover::Plain(cj.to_cdc(g)?)
        }));
    }
    let Some(k) = src.k else {
        bail!("either --cdc or -k is required");
    };
    let (verdict, nodes, cover) = if oriented {
        let out = find_oriented_cdc(g, k, src.budget)?;
        (out.verdict(), out.nodes(), out.into_witness().map(Cover::Oriented))
    } else {
        let out = find_cdc(g, k, src.budget)?;
        (out.verdict(), out.nodes(), out.into_witness().map(Cover::Plain))
    };
    match cover {
        Some(c) => Ok(Ok(c)),
        None => {
            let kind = if oriented { "oriented " } else { "" };
            let mut cert = Certificate::new(g, format!("{kind}{k}-cycle double cover"), verdict);
            cert.nodes = Some(nodes);
            Ok(Err(Outcome::new(to_value(&cert), verdict_code(verdict))))
        }
    }
}

fn construction_json(g: &Multigraph, name: &str, c: &Construction, empty: Vec<usize>, tol: f64) -> Result<Outcome> {
    let (raw_min, raw_max) = norm_range(&c.raw)?;
    let within = c.r <= c.bound + 1e-9 && c.residual <= tol;
    Ok(Outcome::new(
        json!({
            "graph_hash": g.canonical_hash(),
            "construction": name,
            "members": c.points.len(),
            "dim": c.points.m,
            "r": c.r,
            "bound": c.bound,
            "within_bound": within,
            "residual": c.residual,
            "raw_min_norm": raw_min,
            "raw_max_norm": raw_max,
            "empty_members": empty,
            "points": to_value(&PointSetJson::from(&c.points)),
            "flow": to_value(&FlowJson::from_flow(&c.flow)),
            "trace": c.trace.iter().map(|t| json!({
                "edge": t.edge,
                "terms": t.terms.iter().map(|&(m, s)| json!([m, s])).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }),
        if within { 0 } else { EXIT_NEGATIVE },
    ))
}

pub fn construct(g: &Multigraph, src: &CoverSource, oriented: bool, tol: f64) -> Result<Outcome> {
    match obtain_cover(g, src, oriented)? {
        Err(out) => Ok(out),
        Ok(Cover::Plain(c)) => construction_json(g, "cover-flow", &cover_flow(g, &c)?, c.empty_members(), tol),
        Ok(Cover::Oriented(c)) => construction_json(g, "oriented-cover-flow", &oriented_cover_flow(g, &c)?, c.empty_members(), tol),
    }
}

pub fn petersen(tol: f64, seed: u64) -> Result<Outcome> {
    let p = petersen_s2_flow(tol, seed)?;
    let (lo, hi) = norm_range(&p.flow)?;
    let max_angle_error = (0..p.graph.vertex_count())
        .flat_map(|v| vertex_angles(&p.graph, &p.flow, v))
        .map(|a| (a - 120.0).abs())
        .fold(0.0f64, f64::max);
    let ok = p.residual <= tol && (lo - 1.0).abs() <= tol && (hi - 1.0).abs() <= tol;
    Ok(Outcome::new(
        json!({
            "graph_hash": p.graph.canonical_hash(),
            "graph6": write_graph6(&p.graph)?,
            "edges": edge_list(&p.graph),
            "residual": p.residual,
            "min_norm": lo,
            "max_norm": hi,
            "r": 1.0 + hi / lo,
            "max_angle_error_deg": max_angle_error,
            "newton_iterations": p.newton_iterations,
            "attempts": p.attempts,
            "flow": to_value(&FlowJson::from_flow(&p.flow)),
        }),
        if ok { 0 } else { EXIT_NEGATIVE },
    ))
}

fn regular_degree(g: &Multigraph) -> Option<usize> {
    let d = g.degrees();
    d.first().copied().filter(|&x| d.iter().all(|&y| y == x))
}

pub fn polytope_gd(d: usize) -> Result<Outcome> {
    let lg = gd_graph(d)?;
    Ok(Outcome::new(
        json!({
            "kind": "gd",
            "d": d,
            "vertices": lg.graph.vertex_count(),
            "edges": lg.graph.edge_count(),
            "regular_degree": regular_degree(&lg.graph),
            "labels": lg.labels,
            "edge_list": edge_list(&lg.graph),
            "graph6": write_graph6(&lg.graph)?,
        }),
        0,
    ))
}

pub fn polytope_crown(d: usize) -> Result<Outcome> {
    let lg = crown_graph(d)?;
    let labels: Vec<String> = lg
        .labels
        .iter()
        .map(|l| match l {
            CrownVertex::U(i) => format!("u{i}"),
            CrownVertex::V(j) => format!("v{j}"),
        })
        .collect();
    Ok(Outcome::new(
        json!({
            "kind": "crown",
            "d": d,
            "vertices": lg.graph.vertex_count(),
            "edges": lg.graph.edge_count(),
            "regular_degree": regular_degree(&lg.graph),
            "labels": labels,
            "edge_list": edge_list(&lg.graph),
            "graph6": write_graph6(&lg.graph)?,
            "edge_list_text": write_edge_list(&lg.graph),
        }),
        0,
    ))
}

pub fn polytope_iso(d: usize) -> Result<Outcome> {
    let r = check_crown_line_iso(d)?;
    Ok(Outcome::new(
        json!({
            "d": d,
            "holds": r.holds,
            "vertices": r.vertices,
            "edges": r.edges,
            "bijection": r.bijection.iter().map(|(i, j, v)| json!({"u": i, "v": j, "vector": v})).collect::<Vec<_>>(),
        }),
        if r.holds { 0 } else { EXIT_NEGATIVE },
    ))
}

pub fn phi_estimate(g: &Multigraph, args: &PhiArgs, warm: Vec<VectorFlow>, tol: f64) -> Result<Outcome> {
    let opts = PhiOptions {
        restarts: args.restarts,
        max_iters: args.iters,
        seed: args.seed,
        tol,
        warm_starts: warm,
        integer_warm_start: !args.no_integer_start,
        ..PhiOptions::default()
    };
    let est = estimate_phi(g, args.d, &opts)?;
    // Re-check the witness here rather than trusting the estimator.
    let residual = conservation_residual(g, &est.witness)?;
    let (lo, hi) = norm_range(&est.witness)?;
    let verified = residual <= tol && (lo - 1.0).abs() <= tol && hi <= est.r - 1.0 + tol;
    let starts: Vec<Value> = est
        .traces
        .iter()
        .map(|t| {
            let start = match t.start {
                StartKind::Warm(i) => format!("warm:{i}"),
                StartKind::Integer(k) => format!("integer:{k}"),
                StartKind::Random(i) => format!("random:{i}"),
            };
            json!({"start": start, "ratio": t.best_ratio.last().copied().filter(|x| x.is_finite())})
        })
        .collect();
    Ok(Outcome::new(
        json!({
            "graph_hash": g.canonical_hash(),
            "d": args.d,
            "r": est.r,
            "residual": residual,
            "min_norm": lo,
            "max_norm": hi,
            "verified": verified,
            "starts": starts,
            "flow": to_value(&FlowJson::from_flow(&est.witness)),
        }),
        if verified { 0 } else { EXIT_UNKNOWN },
    ))
}

pub fn audit(g: &Multigraph, args: &AuditArgs) -> Result<Outcome> {
    let a = three_flow_audit(g, args.budget)?;
    let code = match a.verdict {
        AuditVerdict::Consistent => 0,
        AuditVerdict::Inconsistent => EXIT_NEGATIVE,
        AuditVerdict::Unknown => EXIT_UNKNOWN,
    };
    Ok(Outcome::new(
        json!({
            "graph_hash": g.canonical_hash(),
            "nowhere_zero_3_flow": to_value(&a.nowhere_zero_3_flow),
            "r3_flow": to_value(&a.r3_flow),
            "h3_flow": to_value(&a.h3_flow),
            "oriented_3_cdc": to_value(&a.oriented_3_cdc),
            "cubic": a.cubic,
            "bipartite": a.bipartite,
            "bipartite_agrees": a.cubic.then(|| (a.nowhere_zero_3_flow == Verdict::Found) == a.bipartite),
            "verdict": to_value(&a.verdict),
            "integer_search_nodes": a.integer_search_nodes,
            "cover_search_nodes": a.cover_search_nodes,
            "integer_flow": a.integer_flow.as_ref().map(|f| to_value(&FlowJson::from_flow(f))),
            "h3_witness": a.h3_witness.as_ref().map(|f| to_value(&FlowJson::from_flow(f))),
            "cover": a.cover.as_ref().map(|c| to_value(&CoverJson::from_oriented(c))),
        }),
        code,
    ))
}

fn batch_one(g: &Multigraph, cmd: &BatchCmd, tol: f64) -> Result<Outcome> {
    match cmd {
        BatchCmd::Analyze => Ok(analyze(g)),
        BatchCmd::Cdc(BatchCdc::Find(args)) => cdc_find(g, args),
        BatchCmd::Audit(BatchAudit::ThreeFlow(args)) => audit(g, args),
        BatchCmd::Phi(BatchPhi::Estimate(args)) => phi_estimate(g, args, Vec::new(), tol),
    }
}

/// One JSON object per input graph, in input order.
pub fn batch(items: &[BatchItem], cmd: &BatchCmd, tol: f64) -> Vec<Value> {
    items
        .par_iter()
        .map(|(source, parsed)| match parsed {
            Err(msg) => json!({"source": source, "exit": EXIT_INPUT, "error": msg}),
            Ok(g) => match batch_one(g, cmd, tol) {
                Ok(out) => json!({
                    "source": source,
                    "graph_hash": g.canonical_hash(),
                    "exit": out.code,
                    "result": out.json,
                }),
                Err(e) => json!({
                    "source": source,
                    "graph_hash": g.canonical_hash(),
                    "exit": error_code(&e),
                    "error": format!("{e:#}"),
                }),
            },
        })
        .collect()
}
