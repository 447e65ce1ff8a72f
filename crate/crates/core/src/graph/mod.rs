//! Stable graphs with vertex labels (curve classes or integer degrees),
//! validation, contraction, isomorphisms and canonical forms.

mod canon;
mod enumerate;

pub use canon::{canonical_labeling, canonicalize, CanonicalForm, Colors, Labeling};
pub use enumerate::enumerate_stable_graphs;

use std::collections::BTreeSet;
use std::fmt::Debug;
use std::hash::Hash;

use serde_json::{json, Value};

use crate::target::{CurveClass, TargetModel};

/// Data carried by a vertex besides its genus.
pub trait VertexLabel: Clone + Debug + Eq + Ord + Hash + Send + Sync + 'static {
    /// Key used for the label in graph JSON.
    const JSON_KEY: &'static str;
    fn is_zero(&self) -> bool;
    fn encode(&self, out: &mut Vec<i64>);
    fn add(&self, other: &Self) -> Self;
    fn to_json(&self) -> Value;
    fn from_json(value: &Value) -> Option<Self>;
}

impl VertexLabel for CurveClass {
    const JSON_KEY: &'static str = "beta";

    fn is_zero(&self) -> bool {
        CurveClass::is_zero(self)
    }

    fn encode(&self, out: &mut Vec<i64>) {
        out.push(self.0.len() as i64);
        out.extend_from_slice(&self.0);
    }

    fn add(&self, other: &Self) -> Self {
        self.plus(other)
    }

    fn to_json(&self) -> Value {
        json!(self.0)
    }

    fn from_json(value: &Value) -> Option<Self> {
        serde_json::from_value(value.clone()).ok()
    }
}

/// Integer vertex degree of a prestable graph with a line bundle.
impl VertexLabel for i64 {
    const JSON_KEY: &'static str = "d";

    fn is_zero(&self) -> bool {
        *self == 0
    }

    fn encode(&self, out: &mut Vec<i64>) {
        out.push(*self);
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn to_json(&self) -> Value {
        json!(self)
    }

    fn from_json(value: &Value) -> Option<Self> {
        value.as_i64()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex<L> {
    pub genus: u32,
    pub label: L,
}

/// A graph with numbered legs. `legs[i]` is the vertex carrying marking `i + 1`;
/// `edges[e] = [u, v]` lists the vertices of the two half-edges `(e, 0)` and `(e, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph<L> {
    pub vertices: Vec<Vertex<L>>,
    pub legs: Vec<usize>,
    pub edges: Vec<[usize; 2]>,
}

/// Target-valued stable graph.
pub type StableGraph = Graph<CurveClass>;
/// Prestable graph with integer vertex degrees.
pub type ZGraph = Graph<i64>;

/// A half-edge that is not a leg: `(edge, side)`.
pub type HalfEdge = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Violation {
    Legs,
    Edges,
    Connected,
    Genus,
    Stability,
    Degree,
    Effective,
}

impl Violation {
    pub fn name(self) -> &'static str {
        match self {
            Violation::Legs => "legs",
            Violation::Edges => "edges",
            Violation::Connected => "connected",
            Violation::Genus => "genus",
            Violation::Stability => "stability",
            Violation::Degree => "degree",
            Violation::Effective => "effective",
        }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Result of contracting a set of edges.
#[derive(Clone, Debug)]
pub struct Contraction {
    /// Vertex of the contracted graph containing each old vertex.
    pub vertex_map: Vec<usize>,
    /// New index of each surviving edge, with orientation preserved.
    pub edge_map: Vec<Option<usize>>,
}

/// Isomorphism between two graphs: vertex images and, per edge, the image
/// edge and whether side 0 lands on side 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub vertex: Vec<usize>,
    pub edge: Vec<(usize, bool)>,
}

impl<L: VertexLabel> Graph<L> {
    pub fn single_vertex(genus: u32, label: L, n: usize) -> Self {
        Graph { vertices: vec![Vertex { genus, label }], legs: vec![0; n], edges: Vec::new() }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_legs(&self) -> usize {
        self.legs.len()
    }

    /// `|E| - |V| + 1`.
    pub fn first_betti(&self) -> i64 {
        self.edges.len() as i64 - self.vertices.len() as i64 + 1
    }

    pub fn legs_at(&self, v: usize) -> Vec<usize> {
        (0..self.legs.len()).filter(|&i| self.legs[i] == v).collect()
    }

    /// Non-leg half-edges at `v`, in `(edge, side)` order. Their position in this
    /// list is the local slot.
    pub fn half_edges_at(&self, v: usize) -> Vec<HalfEdge> {
        let mut out = Vec::new();
        for (e, ends) in self.edges.iter().enumerate() {
            for (side, &u) in ends.iter().enumerate() {
                if u == v {
                    out.push((e, side));
                }
            }
        }
        out
    }

    /// `n(v)`: legs plus edge ends, a loop counting twice.
    pub fn valence(&self, v: usize) -> usize {
        self.legs.iter().filter(|&&u| u == v).count()
            + self.edges.iter().map(|e| e.iter().filter(|&&u| u == v).count()).sum::<usize>()
    }

    pub fn slot(&self, (e, side): HalfEdge) -> usize {
        let v = self.edges[e][side];
        self.half_edges_at(v).iter().position(|&h| h == (e, side)).expect("half-edge at its vertex")
    }

    pub fn total_genus(&self) -> i64 {
        self.vertices.iter().map(|v| v.genus as i64).sum::<i64>() + self.first_betti()
    }

    pub fn total_label(&self, zero: L) -> L {
        self.vertices.iter().fold(zero, |acc, v| acc.add(&v.label))
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                for side in 0..2 {
                    if e[side] == v && !seen[e[1 - side]] {
                        seen[e[1 - side]] = true;
                        stack.push(e[1 - side]);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// `2g(v) - 2 + n(v) > 0`, or a nonzero label.
    pub fn vertex_is_stable(&self, v: usize) -> bool {
        !self.vertices[v].label.is_zero()
            || 2 * self.vertices[v].genus as i64 - 2 + self.valence(v) as i64 > 0
    }

    /// Structural checks shared by every label type: index ranges,
    /// connectivity, genus and leg count.
    pub fn validate_shape(&self, g: u32, n: usize) -> Vec<Violation> {
        let nv = self.vertices.len();
        let mut out = BTreeSet::new();
        if self.legs.len() != n || self.legs.iter().any(|&v| v >= nv) {
            out.insert(Violation::Legs);
        }
        if self.edges.iter().any(|e| e[0] >= nv || e[1] >= nv) {
            out.insert(Violation::Edges);
            return out.into_iter().collect();
        }
        if !self.is_connected() {
            out.insert(Violation::Connected);
        } else if self.total_genus() != g as i64 {
            out.insert(Violation::Genus);
        }
        out.into_iter().collect()
    }

    /// Contracts every edge with `contract[e] == true`. Vertices of the result
    /// are ordered by the smallest old vertex they contain.
    pub fn contract(&self, contract: &[bool]) -> (Graph<L>, Contraction) {
        let nv = self.vertices.len();
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (e, ends) in self.edges.iter().enumerate() {
            if contract[e] {
                let (a, b) = (find(&mut parent, ends[0]), find(&mut parent, ends[1]));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let roots: Vec<usize> = (0..nv).map(|v| find(&mut parent, v)).collect();
        let mut new_index = vec![usize::MAX; nv];
        let mut count = 0;
        for v in 0..nv {
            if new_index[roots[v]] == usize::MAX {
                new_index[roots[v]] = count;
                count += 1;
            }
        }
        let vertex_map: Vec<usize> = (0..nv).map(|v| new_index[roots[v]]).collect();
        let mut genus = vec![0i64; count];
        let mut labels: Vec<Option<L>> = vec![None; count];
        for (v, vert) in self.vertices.iter().enumerate() {
            let t = vertex_map[v];
            genus[t] += vert.genus as i64;
            labels[t] = Some(match labels[t].take() {
                None => vert.label.clone(),
                Some(l) => l.add(&vert.label),
            });
        }
        // each contracted edge adds one to the genus, each merge removes one
        let mut members = vec![0i64; count];
        for &t in &vertex_map {
            members[t] += 1;
        }
        for (e, ends) in self.edges.iter().enumerate() {
            if contract[e] {
                genus[vertex_map[ends[0]]] += 1;
            }
        }
        for t in 0..count {
            genus[t] -= members[t] - 1;
        }
        let vertices = genus
            .into_iter()
            .zip(labels)
            .map(|(g, l)| Vertex { genus: g as u32, label: l.expect("every class has a member") })
            .collect();
        let mut edges = Vec::new();
        let mut edge_map = vec![None; self.edges.len()];
        for (e, ends) in self.edges.iter().enumerate() {
            if !contract[e] {
                edge_map[e] = Some(edges.len());
                edges.push([vertex_map[ends[0]], vertex_map[ends[1]]]);
            }
        }
        let legs = self.legs.iter().map(|&v| vertex_map[v]).collect();
        (Graph { vertices, legs, edges }, Contraction { vertex_map, edge_map })
    }

    /// Every isomorphism `self -> other` fixing marking labels, genera and labels.
    pub fn isomorphisms(&self, other: &Graph<L>) -> Vec<Isomorphism> {
        let nv = self.vertices.len();
        if nv != other.vertices.len()
            || self.edges.len() != other.edges.len()
            || self.legs.len() != other.legs.len()
        {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut vmap = vec![usize::MAX; nv];
        let mut used = vec![false; nv];
        self.iso_vertices(other, 0, &mut vmap, &mut used, &mut out);
        out
    }

    fn iso_vertices(
        &self,
        other: &Graph<L>,
        v: usize,
        vmap: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Isomorphism>,
    ) {
        if v == self.vertices.len() {
            if self.legs.iter().zip(&other.legs).all(|(&a, &b)| vmap[a] == b) {
                let mut emap = vec![(usize::MAX, false); self.edges.len()];
                let mut eused = vec![false; other.edges.len()];
                self.iso_edges(other, 0, vmap, &mut emap, &mut eused, out);
            }
            return;
        }
        for t in 0..other.vertices.len() {
            if !used[t]
                && self.vertices[v] == other.vertices[t]
                && self.valence(v) == other.valence(t)
            {
                vmap[v] = t;
                used[t] = true;
                self.iso_vertices(other, v + 1, vmap, used, out);
                used[t] = false;
            }
        }
    }

    fn iso_edges(
        &self,
        other: &Graph<L>,
        e: usize,
        vmap: &[usize],
        emap: &mut Vec<(usize, bool)>,
        eused: &mut Vec<bool>,
        out: &mut Vec<Isomorphism>,
    ) {
        if e == self.edges.len() {
            out.push(Isomorphism { vertex: vmap.to_vec(), edge: emap.clone() });
            return;
        }
        let [a, b] = self.edges[e];
        let (ia, ib) = (vmap[a], vmap[b]);
        for f in 0..other.edges.len() {
            if eused[f] {
                continue;
            }
            let [x, y] = other.edges[f];
            for flip in [false, true] {
                // a loop matches in both orientations, any other edge in one
                let ok = if flip { x == ib && y == ia } else { x == ia && y == ib };
                if ok {
                    eused[f] = true;
                    emap[e] = (f, flip);
                    self.iso_edges(other, e + 1, vmap, emap, eused, out);
                    eused[f] = false;
                }
            }
        }
    }

    /// Colours for canonical labelling of the bare graph.
    pub fn plain_colors(&self) -> Colors {
        Colors {
            vertex: self
                .vertices
                .iter()
                .map(|v| {
                    let mut c = vec![v.genus as i64];
                    v.label.encode(&mut c);
                    c
                })
                .collect(),
            leg: vec![Vec::new(); self.legs.len()],
            half: vec![[Vec::new(), Vec::new()]; self.edges.len()],
            edge: vec![Vec::new(); self.edges.len()],
        }
    }

    /// Relabels vertices (`perm[old] = new`) and edges (`order[k] = (old, flipped)`).
    pub fn relabeled(&self, perm: &[usize], order: &[(usize, bool)]) -> Graph<L> {
        let mut vertices = self.vertices.clone();
        for (old, v) in self.vertices.iter().enumerate() {
            vertices[perm[old]] = v.clone();
        }
        let legs = self.legs.iter().map(|&v| perm[v]).collect();
        let edges = order
            .iter()
            .map(|&(e, flip)| {
                let [a, b] = self.edges[e];
                if flip {
                    [perm[b], perm[a]]
                } else {
                    [perm[a], perm[b]]
                }
            })
            .collect();
        Graph { vertices, legs, edges }
    }

    pub fn to_json(&self) -> Value {
        let vertices: Vec<Value> = self
            .vertices
            .iter()
            .map(|v| {
                let mut m = serde_json::Map::new();
                m.insert("g".into(), json!(v.genus));
                m.insert(L::JSON_KEY.into(), v.label.to_json());
                Value::Object(m)
            })
            .collect();
        let legs: Vec<Value> = self
            .legs
            .iter()
            .enumerate()
            .map(|(i, &v)| json!({"marking": i + 1, "vertex": v}))
            .collect();
        let edges: Vec<Value> = (0..self.edges.len())
            .map(|e| {
                json!([
                    [self.edges[e][0], self.slot((e, 0))],
                    [self.edges[e][1], self.slot((e, 1))]
                ])
            })
            .collect();
        json!({"vertices": vertices, "legs": legs, "edges": edges})
    }

    pub fn from_json(value: &Value) -> Result<Self, String> {
        let err = |m: &str| format!("malformed graph: {m}");
        let vertices = value["vertices"]
            .as_array()
            .ok_or_else(|| err("vertices"))?
            .iter()
            .map(|v| {
                Ok(Vertex {
                    genus: v["g"].as_u64().ok_or_else(|| err("genus"))? as u32,
                    label: L::from_json(&v[L::JSON_KEY]).ok_or_else(|| err(L::JSON_KEY))?,
                })
            })
            .collect::<Result<Vec<_>, String>>()?;
        let mut legs_raw = value["legs"]
            .as_array()
            .ok_or_else(|| err("legs"))?
            .iter()
            .map(|l| {
                Ok((
                    l["marking"].as_u64().ok_or_else(|| err("marking"))? as usize,
                    l["vertex"].as_u64().ok_or_else(|| err("leg vertex"))? as usize,
                ))
            })
            .collect::<Result<Vec<_>, String>>()?;
        legs_raw.sort();
        if legs_raw.iter().enumerate().any(|(i, &(m, _))| m != i + 1) {
            return Err(err("markings must be 1..n"));
        }
        let legs = legs_raw.into_iter().map(|(_, v)| v).collect();
        let edges = value["edges"]
            .as_array()
            .ok_or_else(|| err("edges"))?
            .iter()
            .map(|e| {
                let end = |k: usize| e[k][0].as_u64().map(|v| v as usize).ok_or_else(|| err("edge end"));
                Ok([end(0)?, end(1)?])
            })
            .collect::<Result<Vec<_>, String>>()?;
        let graph = Graph { vertices, legs, edges };
        let nv = graph.vertices.len();
        if graph.legs.iter().chain(graph.edges.iter().flatten()).any(|&v| v >= nv) {
            return Err(err("vertex index out of range"));
        }
        for (e, ends) in value["edges"].as_array().expect("checked").iter().enumerate() {
            for side in 0..2 {
                if ends[side][1].as_u64() != Some(graph.slot((e, side)) as u64) {
                    return Err(err("slot numbering"));
                }
            }
        }
        Ok(graph)
    }
}

impl StableGraph {
    /// Checks the stable-graph conditions for genus `g`, `n` markings and class `beta`.
    pub fn validate(
        &self,
        g: u32,
        n: usize,
        beta: &CurveClass,
        target: &TargetModel,
    ) -> Result<(), Vec<Violation>> {
        let mut out: BTreeSet<Violation> = self.validate_shape(g, n).into_iter().collect();
        if !out.contains(&Violation::Edges) && !out.contains(&Violation::Legs) {
            if (0..self.vertices.len()).any(|v| !self.vertex_is_stable(v)) {
                out.insert(Violation::Stability);
            }
        }
        if self.vertices.iter().any(|v| !target.is_effective(&v.label)) {
            out.insert(Violation::Effective);
        } else if self.total_label(target.zero_class()) != *beta {
            out.insert(Violation::Degree);
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out.into_iter().collect())
        }
    }

    /// Integer degrees `∫_{β(v)} c1(S) - Σ_{i at v} a_i`.
    pub fn degree_graph(&self, a: &[i64], target: &TargetModel) -> ZGraph {
        let vertices = self
            .vertices
            .iter()
            .enumerate()
            .map(|(v, vert)| Vertex {
                genus: vert.genus,
                label: target.pairing_unchecked(&vert.label)
                    - self.legs_at(v).iter().map(|&i| a[i]).sum::<i64>(),
            })
            .collect();
        Graph { vertices, legs: self.legs.clone(), edges: self.edges.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt() -> CurveClass {
        CurveClass::zero(0)
    }

    fn v(genus: u32) -> Vertex<CurveClass> {
        Vertex { genus, label: pt() }
    }

    #[test]
    fn betti_numbers() {
        let tree = Graph { vertices: vec![v(0), v(0)], legs: vec![0, 0, 1, 1], edges: vec![[0, 1]] };
        assert_eq!(tree.first_betti(), 0);
        let lp = Graph { vertices: vec![v(0)], legs: vec![0], edges: vec![[0, 0]] };
        assert_eq!(lp.first_betti(), 1);
        let banana =
            Graph { vertices: vec![v(0), v(0)], legs: vec![], edges: vec![[0, 1], [0, 1], [1, 0]] };
        assert_eq!(banana.first_betti(), 2);
    }

    #[test]
    fn validation_names() {
        let t = TargetModel::point();
        let ok = Graph::single_vertex(0, pt(), 3);
        assert!(ok.validate(0, 3, &pt(), &t).is_ok());
        let unstable = Graph { vertices: vec![v(0), v(1)], legs: vec![0], edges: vec![[0, 1]] };
        assert_eq!(unstable.validate(1, 1, &pt(), &t), Err(vec![Violation::Stability]));
        let split = Graph { vertices: vec![v(0), v(0)], legs: vec![0, 0, 0, 1, 1, 1], edges: vec![] };
        assert!(split.validate(0, 6, &pt(), &t).unwrap_err().contains(&Violation::Connected));
        assert_eq!(ok.validate(1, 3, &pt(), &t), Err(vec![Violation::Genus]));
        let free = TargetModel::free(vec![1]);
        let deg = Graph::single_vertex(0, CurveClass(vec![1]), 0);
        assert_eq!(deg.validate(0, 0, &CurveClass(vec![2]), &free), Err(vec![Violation::Degree]));
        assert_eq!(Violation::Stability.name(), "stability");
    }

    #[test]
    fn contraction_tracks_genus() {
        let banana = Graph { vertices: vec![v(0), v(1)], legs: vec![0, 1], edges: vec![[0, 1], [0, 1]] };
        let (c, map) = banana.contract(&[true, false]);
        assert_eq!(c.vertices, vec![v(1)]);
        assert_eq!(c.edges, vec![[0, 0]]);
        assert_eq!(map.edge_map, vec![None, Some(0)]);
        let (all, _) = banana.contract(&[true, true]);
        assert_eq!(all.vertices, vec![v(2)]);
        assert_eq!(all.total_genus(), banana.total_genus());
    }

    #[test]
    fn isomorphism_counts() {
        let lp = Graph { vertices: vec![v(1)], legs: vec![], edges: vec![[0, 0]] };
        assert_eq!(lp.isomorphisms(&lp).len(), 2);
        let banana = Graph { vertices: vec![v(1), v(1)], legs: vec![], edges: vec![[0, 1], [0, 1]] };
        assert_eq!(banana.isomorphisms(&banana).len(), 4);
        let flipped = Graph { vertices: vec![v(1), v(1)], legs: vec![], edges: vec![[1, 0], [0, 1]] };
        assert_eq!(banana.isomorphisms(&flipped).len(), 4);
    }

    #[test]
    fn json_round_trip() {
        let g = Graph {
            vertices: vec![v(0), Vertex { genus: 1, label: pt() }],
            legs: vec![0, 1],
            edges: vec![[0, 1], [0, 0]],
        };
        let back = StableGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
        let z: ZGraph = g.degree_graph(&[1, -1], &TargetModel::point());
        assert_eq!(z.vertices[0].label, -1);
        assert_eq!(ZGraph::from_json(&z.to_json()).unwrap(), z);
    }
}
