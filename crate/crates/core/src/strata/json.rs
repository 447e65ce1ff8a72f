use serde_json::{json, Value};

use super::{Ambient, DecoratedGraph, Decoration, EdgeDeco, EtaMonomial, LegDeco, TautClass};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexLabel};
use crate::math::{format_rational, parse_rational};
use crate::target::TargetModel;

fn bad(what: &str) -> Error {
    Error::Invalid(format!("malformed class JSON: {what}"))
}

fn as_u32(v: &Value, what: &str) -> Result<u32> {
    v.as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(|| bad(what))
}

impl Decoration {
    pub fn to_json(&self) -> Value {
        json!({
            "legs": self.legs.iter().map(|l| json!({"psi": l.psi, "xi": l.xi})).collect::<Vec<_>>(),
            "halfedges": self.edges.iter().flat_map(|e| e.psi).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| e.xi).collect::<Vec<_>>(),
            "vertices": self.vertices.iter().map(|m| {
                m.factors().map(|((a, b), e)| json!([a, b, e])).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let arr = |key: &str| value[key].as_array().ok_or_else(|| bad(key));
        let legs = arr("legs")?
            .iter()
            .map(|l| Ok(LegDeco { psi: as_u32(&l["psi"], "leg psi")?, xi: as_u32(&l["xi"], "leg xi")? }))
            .collect::<Result<Vec<_>>>()?;
        let halves = arr("halfedges")?.iter().map(|h| as_u32(h, "half-edge psi")).collect::<Result<Vec<_>>>()?;
        let xis = arr("edges")?.iter().map(|x| as_u32(x, "edge xi")).collect::<Result<Vec<_>>>()?;
        if halves.len() != 2 * xis.len() {
            return Err(bad("half-edge count"));
        }
        let edges = xis
            .iter()
            .enumerate()
            .map(|(e, &xi)| EdgeDeco { psi: [halves[2 * e], halves[2 * e + 1]], xi })
            .collect();
        let vertices = arr("vertices")?
            .iter()
            .map(|m| {
                let mut mono = EtaMonomial::one();
                for f in m.as_array().ok_or_else(|| bad("eta monomial"))? {
                    let (a, b, e) = (as_u32(&f[0], "eta a")?, as_u32(&f[1], "eta b")?, as_u32(&f[2], "eta exponent")?);
                    if a + b < 2 {
                        return Err(bad("eta index below 2"));
                    }
                    mono = mono.times(&EtaMonomial::eta(a, b, e));
                }
                Ok(mono)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Decoration { legs, edges, vertices })
    }
}

impl<L: VertexLabel> Ambient<L> {
    pub fn to_json(&self) -> Value {
        json!({
            "g": self.g,
            "n": self.n,
            "total": self.total.to_json(),
            "target": self.target.as_ref().map_or(Value::Null, TargetModel::to_json),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let target = match &value["target"] {
            Value::Null => None,
            t => Some(TargetModel::from_json(t)?),
        };
        Ok(Ambient {
            g: as_u32(&value["g"], "g")?,
            n: value["n"].as_u64().ok_or_else(|| bad("n"))? as usize,
            total: L::from_json(&value["total"]).ok_or_else(|| bad("total"))?,
            target,
        })
    }
}

impl<L: VertexLabel> TautClass<L> {
    /// Terms in canonical order as `{"coeff", "graph", "decor"}` objects.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms()
                .map(|(dg, c)| {
                    json!({
                        "coeff": format_rational(c),
                        "graph": dg.graph.to_json(),
                        "decor": dg.decoration.to_json(),
                    })
                })
                .collect(),
        )
    }

    pub fn from_json(ambient: Ambient<L>, value: &Value) -> Result<Self> {
        let mut raw = Vec::new();
        for term in value.as_array().ok_or_else(|| bad("expected a list of terms"))? {
            let coeff = parse_rational(term["coeff"].as_str().ok_or_else(|| bad("coeff"))?)?;
            let graph = Graph::<L>::from_json(&term["graph"]).map_err(Error::Invalid)?;
            let decoration = Decoration::from_json(&term["decor"])?;
            if decoration.legs.len() != graph.num_legs()
                || decoration.edges.len() != graph.num_edges()
                || decoration.vertices.len() != graph.num_vertices()
            {
                return Err(bad("decoration does not fit its graph"));
            }
            raw.push((DecoratedGraph::new(graph, decoration), coeff));
        }
        TautClass::normalize(ambient, raw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Vertex;
    use crate::math::frac;
    use crate::target::CurveClass;

    #[test]
    fn round_trip_is_exact() {
        let t = TargetModel::free(vec![1]);
        let amb = Ambient::stable(1, 2, CurveClass(vec![1]), t);
        let g = Graph {
            vertices: vec![
                Vertex { genus: 0, label: CurveClass(vec![1]) },
                Vertex { genus: 0, label: CurveClass(vec![0]) },
            ],
            legs: vec![1, 1],
            edges: vec![[0, 1], [1, 0]],
        };
        let mut d = Decoration::trivial(&g);
        d.legs[1] = LegDeco { psi: 1, xi: 2 };
        d.edges[0] = EdgeDeco { psi: [0, 2], xi: 1 };
        d.vertices[0] = EtaMonomial::eta(0, 2, 1).times(&EtaMonomial::eta(1, 1, 2));
        let c = TautClass::normalize(amb.clone(), [(DecoratedGraph::new(g, d), frac(-3, 7))]).unwrap();
        let text = serde_json::to_string(&c.to_json()).unwrap();
        let back = TautClass::from_json(amb.clone(), &serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, c);
        assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), text);
        let amb_back = Ambient::<CurveClass>::from_json(&amb.to_json()).unwrap();
        assert_eq!(amb_back, amb);
    }
}
