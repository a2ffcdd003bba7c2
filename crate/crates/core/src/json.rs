//! JSON forms of flows, covers, point sets and certificates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cdc::{verify_cdc, verify_oriented_cdc, CycleDoubleCover, OrientedCdc};
use crate::error::{Error, Result};
use crate::flows::{FlowValues, VectorFlow};
use crate::geometry::PointConfiguration;
use crate::graph::{DirectedEvenSubgraph, EvenSubgraph, Multigraph, Orientation, VertexId};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValuesJson {
    Exact(Vec<Vec<i64>>),
    Float(Vec<Vec<f64>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowJson {
    pub d: usize,
    pub orientation: Vec<[VertexId; 2]>,
    pub values: ValuesJson,
    pub exact: bool,
}

impl FlowJson {
    pub fn from_flow(f: &VectorFlow) -> Self {
        let values = match f.values() {
            FlowValues::Exact(v) => ValuesJson::Exact(v.clone()),
            FlowValues::Float(v) => ValuesJson::Float(v.clone()),
        };
        FlowJson {
            d: f.dim(),
            orientation: f.orientation().arcs().iter().map(|&(t, h)| [t, h]).collect(),
            values,
            exact: f.is_exact(),
        }
    }

    /// Checks the orientation against `g`. Integer-looking values are kept
    /// exact only when `exact` is set.
    pub fn to_flow(&self, g: &Multigraph) -> Result<VectorFlow> {
        let arcs = self.orientation.iter().map(|a| (a[0], a[1])).collect();
        let o = Orientation::from_arcs(g, arcs)?;
        match (&self.values, self.exact) {
            (ValuesJson::Exact(v), true) => VectorFlow::exact(self.d, o, v.clone()),
            (ValuesJson::Exact(v), false) => VectorFlow::float(
                self.d,
                o,
                v.iter().map(|x| x.iter().map(|&c| c as f64).collect()).collect(),
            ),
            (ValuesJson::Float(v), false) => VectorFlow::float(self.d, o, v.clone()),
            (ValuesJson::Float(v), true) => {
                let ints = v
                    .iter()
                    .map(|x| {
                        x.iter()
                            .map(|&c| {
                                if c.fract() == 0.0 && c.abs() < 9.0e15 {
                                    Ok(c as i64)
                                } else {
                                    Err(Error::InvalidArgument(format!(
                                        "exact flow has non-integer coordinate {c}"
                                    )))
                                }
                            })
                            .collect::<Result<Vec<i64>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                VectorFlow::exact(self.d, o, ints)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MemberJson {
    pub edges: Vec<usize>,
    pub directions: Option<Vec<[VertexId; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverJson {
    pub k: usize,
    pub members: Vec<MemberJson>,
}

impl CoverJson {
    pub fn from_cdc(c: &CycleDoubleCover) -> Self {
        CoverJson {
            k: c.len(),
            members: c
                .members()
                .iter()
                .map(|m| MemberJson {
                    edges: m.edges().iter().copied().collect(),
                    directions: None,
                })
                .collect(),
        }
    }

    pub fn from_oriented(c: &OrientedCdc) -> Self {
        CoverJson {
            k: c.len(),
            members: c
                .members()
                .iter()
                .map(|m| MemberJson {
                    edges: m.arcs().keys().copied().collect(),
                    directions: Some(m.arcs().values().map(|&(t, h)| [t, h]).collect()),
                })
                .collect(),
        }
    }

    pub fn is_oriented(&self) -> bool {
        !self.members.is_empty() && self.members.iter().all(|m| m.directions.is_some())
    }

    fn check_k(&self) -> Result<()> {
        if self.k != self.members.len() {
            return Err(Error::InvalidCover(format!(
                "k = {} but {} members listed",
                self.k,
                self.members.len()
            )));
        }
        Ok(())
    }

    /// Verified unoriented cover; directions, if present, are ignored.
    pub fn to_cdc(&self, g: &Multigraph) -> Result<CycleDoubleCover> {
        self.check_k()?;
        let members = self
            .members
            .iter()
            .map(|m| EvenSubgraph::new(g, m.edges.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        let c = CycleDoubleCover::new(members);
        verify_cdc(g, &c)?;
        Ok(c)
    }

    /// Verified oriented cover; every member must carry directions.
    pub fn to_oriented(&self, g: &Multigraph) -> Result<OrientedCdc> {
        self.check_k()?;
        let members = self
            .members
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let dirs = m.directions.as_ref().ok_or_else(|| {
                    Error::InvalidCover(format!("member {i} has no directions"))
                })?;
                if dirs.len() != m.edges.len() {
                    return Err(Error::InvalidCover(format!(
                        "member {i}: {} edges but {} directions",
                        m.edges.len(),
                        dirs.len()
                    )));
                }
                let arcs: BTreeMap<_, _> = m
                    .edges
                    .iter()
                    .zip(dirs)
                    .map(|(&e, a)| (e, (a[0], a[1])))
                    .collect();
                if arcs.len() != m.edges.len() {
                    return Err(Error::InvalidCover(format!("member {i} repeats an edge")));
                }
                DirectedEvenSubgraph::new(g, arcs)
            })
            .collect::<Result<Vec<_>>>()?;
        let c = OrientedCdc::new(members);
        verify_oriented_cdc(g, &c)?;
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSetJson {
    pub m: usize,
    pub points: Vec<Vec<f64>>,
    pub exact: bool,
}

impl From<&PointConfiguration> for PointSetJson {
    fn from(p: &PointConfiguration) -> Self {
        PointSetJson {
            m: p.m,
            points: p.points.clone(),
            exact: p.exact,
        }
    }
}

/// A claim about one graph together with what backs it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub graph_hash: String,
    pub claim: String,
    pub verdict: crate::search::Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub nodes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub min_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bound: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub empty_members: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub flow: Option<FlowJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cover: Option<CoverJson>,
}

impl Certificate {
    pub fn new(g: &Multigraph, claim: impl Into<String>, verdict: crate::search::Verdict) -> Self {
        Certificate {
            graph_hash: g.canonical_hash(),
            claim: claim.into(),
            verdict,
            nodes: None,
            residual: None,
            min_norm: None,
            max_norm: None,
            r: None,
            bound: None,
            empty_members: Vec::new(),
            flow: None,
            cover: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdc::find_oriented_cdc;
    use crate::io::parse_graph6;

    #[test]
    fn flow_round_trip() {
        let g = parse_graph6(b"EFz_").unwrap();
        let c = find_oriented_cdc(&g, 3, 1_000_000).unwrap().into_witness().unwrap();
        let f = crate::correspondence::oriented_cdc_to_hd_flow(&g, &c, &Orientation::canonical(&g))
            .unwrap();
        let text = serde_json::to_string(&FlowJson::from_flow(&f)).unwrap();
        let back: FlowJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_flow(&g).unwrap(), f);

        let cj = CoverJson::from_oriented(&c);
        let text = serde_json::to_string(&cj).unwrap();
        let back: CoverJson = serde_json::from_str(&text).unwrap();
        assert!(back.is_oriented());
        assert_eq!(back.to_oriented(&g).unwrap(), c);
        assert_eq!(back.to_cdc(&g).unwrap(), c.underlying());
    }

    #[test]
    fn float_flow_parses() {
        let g = Multigraph::from_edges(2, [(0, 1), (0, 1)]).unwrap();
        let j: FlowJson = serde_json::from_str(
            r#"{"d":1,"orientation":[[0,1],[1,0]],"values":[[0.5],[0.5]],"exact":false}"#,
        )
        .unwrap();
        let f = j.to_flow(&g).unwrap();
        assert_eq!(crate::flows::conservation_residual(&g, &f).unwrap(), 0.0);
    }

    #[test]
    fn bad_cover_rejected() {
        let g = parse_graph6(b"C~").unwrap();
        let j = CoverJson {
            k: 1,
            members: vec![MemberJson {
                edges: vec![0, 1, 2, 3, 4, 5],
                directions: None,
            }],
        };
        assert!(j.to_cdc(&g).is_err());
    }
}
