//! Tautological classes as exact linear combinations of decorated graphs.
//!
//! A term with coefficient `c` on `(Γ, γ)` stands for `c · j_{Γ*}[γ]`, so
//! isomorphic decorated graphs simply add.

mod json;
mod product;
mod pullback;

pub use product::{product, Product, RMode};
pub use pullback::pullback_piz;

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{canonical_labeling, Colors, Graph, VertexLabel};
use crate::math::{format_rational, Rational};
use crate::target::{CurveClass, TargetModel};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LegDeco {
    pub psi: u32,
    pub xi: u32,
}

/// `ψ` exponents on the two half-edges and the `ξ_e` exponent of an edge.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeDeco {
    pub psi: [u32; 2],
    pub xi: u32,
}

/// Monomial in the `η_{a,b}`, `a + b ≥ 2`, as a map `(a, b) ↦ exponent`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EtaMonomial(BTreeMap<(u32, u32), u32>);

impl EtaMonomial {
    pub fn one() -> Self {
        EtaMonomial::default()
    }

    pub fn eta(a: u32, b: u32, exp: u32) -> Self {
        assert!(a + b >= 2, "η_{{a,b}} needs a + b ≥ 2");
        let mut m = BTreeMap::new();
        if exp > 0 {
            m.insert((a, b), exp);
        }
        EtaMonomial(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = ((u32, u32), u32)> + '_ {
        self.0.iter().map(|(&k, &e)| (k, e))
    }

    /// Each factor listed once per power.
    pub fn factor_list(&self) -> Vec<(u32, u32)> {
        self.0.iter().flat_map(|(&k, &e)| std::iter::repeat(k).take(e as usize)).collect()
    }

    pub fn times(&self, other: &EtaMonomial) -> EtaMonomial {
        let mut m = self.0.clone();
        for (&k, &e) in &other.0 {
            *m.entry(k).or_insert(0) += e;
        }
        EtaMonomial(m)
    }

    pub fn times_factor(&self, ab: (u32, u32)) -> EtaMonomial {
        self.times(&EtaMonomial::eta(ab.0, ab.1, 1))
    }

    /// `η_{a,b}` has degree `a + b - 1`.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|(&(a, b), &e)| ((a + b - 1) * e) as usize).sum()
    }

    fn encode(&self, out: &mut Vec<i64>) {
        out.push(self.0.len() as i64);
        for (&(a, b), &e) in &self.0 {
            out.extend([a as i64, b as i64, e as i64]);
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Decoration {
    pub legs: Vec<LegDeco>,
    pub edges: Vec<EdgeDeco>,
    pub vertices: Vec<EtaMonomial>,
}

impl Decoration {
    pub fn trivial<L>(graph: &Graph<L>) -> Self {
        Decoration {
            legs: vec![LegDeco::default(); graph.legs.len()],
            edges: vec![EdgeDeco::default(); graph.edges.len()],
            vertices: vec![EtaMonomial::one(); graph.vertices.len()],
        }
    }

    pub fn degree(&self) -> usize {
        self.legs.iter().map(|l| (l.psi + l.xi) as usize).sum::<usize>()
            + self.edges.iter().map(|e| (e.psi[0] + e.psi[1] + e.xi) as usize).sum::<usize>()
            + self.vertices.iter().map(EtaMonomial::degree).sum::<usize>()
    }

    /// Whether the decoration involves `ξ` or some `η_{a,b}` with `b > 0`.
    pub fn involves_bundle(&self) -> bool {
        self.legs.iter().any(|l| l.xi > 0)
            || self.edges.iter().any(|e| e.xi > 0)
            || self.vertices.iter().any(|m| m.factors().any(|((_, b), _)| b > 0))
    }

    /// Same relabelling convention as [`Graph::relabeled`].
    pub fn relabeled(&self, perm: &[usize], order: &[(usize, bool)]) -> Decoration {
        let mut vertices = self.vertices.clone();
        for (old, m) in self.vertices.iter().enumerate() {
            vertices[perm[old]] = m.clone();
        }
        let edges = order
            .iter()
            .map(|&(e, flip)| {
                let mut d = self.edges[e];
                if flip {
                    d.psi.swap(0, 1);
                }
                d
            })
            .collect();
        Decoration { legs: self.legs.clone(), edges, vertices }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DecoratedGraph<L> {
    pub graph: Graph<L>,
    pub decoration: Decoration,
}

impl<L: VertexLabel> DecoratedGraph<L> {
    pub fn new(graph: Graph<L>, decoration: Decoration) -> Self {
        assert_eq!(decoration.legs.len(), graph.legs.len(), "leg decorations");
        assert_eq!(decoration.edges.len(), graph.edges.len(), "edge decorations");
        assert_eq!(decoration.vertices.len(), graph.vertices.len(), "vertex decorations");
        DecoratedGraph { graph, decoration }
    }

    pub fn undecorated(graph: Graph<L>) -> Self {
        let decoration = Decoration::trivial(&graph);
        DecoratedGraph { graph, decoration }
    }

    /// `|E| + deg γ`.
    pub fn codim(&self) -> usize {
        self.graph.num_edges() + self.decoration.degree()
    }

    fn colors(&self) -> Colors {
        let mut colors = self.graph.plain_colors();
        for (c, m) in colors.vertex.iter_mut().zip(&self.decoration.vertices) {
            m.encode(c);
        }
        colors.leg = self.decoration.legs.iter().map(|l| vec![l.psi as i64, l.xi as i64]).collect();
        colors.half = self
            .decoration
            .edges
            .iter()
            .map(|e| [vec![e.psi[0] as i64], vec![e.psi[1] as i64]])
            .collect();
        colors.edge = self.decoration.edges.iter().map(|e| vec![e.xi as i64]).collect();
        colors
    }

    /// Canonical representative and its code.
    pub fn canonical(&self) -> (Vec<i64>, DecoratedGraph<L>) {
        let g = &self.graph;
        let lab = canonical_labeling(g.num_vertices(), &g.legs, &g.edges, &self.colors());
        let graph = g.relabeled(&lab.vertex_perm, &lab.edge_order);
        let decoration = self.decoration.relabeled(&lab.vertex_perm, &lab.edge_order);
        (lab.code, DecoratedGraph { graph, decoration })
    }
}

/// Genus, number of markings, total vertex label and (for target-valued
/// classes) the target.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ambient<L> {
    pub g: u32,
    pub n: usize,
    pub total: L,
    pub target: Option<TargetModel>,
}

impl Ambient<CurveClass> {
    pub fn stable(g: u32, n: usize, beta: CurveClass, target: TargetModel) -> Self {
        Ambient { g, n, total: beta, target: Some(target) }
    }
}

impl Ambient<i64> {
    /// Prestable graphs with integer vertex degrees summing to zero.
    pub fn twisted(g: u32, n: usize) -> Self {
        Ambient { g, n, total: 0, target: None }
    }
}

impl<L: VertexLabel> Ambient<L> {
    /// Point targets carry a trivial bundle, so `ξ` and `η_{a,b}`, `b > 0`, vanish.
    fn is_flat(&self) -> bool {
        self.target.as_ref().is_some_and(TargetModel::is_point)
    }

    fn check(&self, graph: &Graph<L>) -> Result<()> {
        let mismatch = |what: &str| Err(Error::AmbientMismatch(format!("graph {what} differs from ambient")));
        if graph.num_legs() != self.n {
            return mismatch("leg count");
        }
        if graph.vertices.is_empty() || graph.total_genus() != self.g as i64 {
            return mismatch("genus");
        }
        let total = graph.vertices[1..]
            .iter()
            .fold(graph.vertices[0].label.clone(), |acc, v| acc.add(&v.label));
        if total != self.total {
            return mismatch("total class");
        }
        Ok(())
    }
}

/// Exact rational combination of decorated graphs keyed by canonical code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TautClass<L> {
    ambient: Ambient<L>,
    terms: BTreeMap<Vec<i64>, (DecoratedGraph<L>, Rational)>,
}

impl<L: VertexLabel> TautClass<L> {
    pub fn zero(ambient: Ambient<L>) -> Self {
        TautClass { ambient, terms: BTreeMap::new() }
    }

    /// The single-vertex graph with trivial decoration.
    pub fn fundamental(ambient: Ambient<L>) -> Self {
        let graph = Graph::single_vertex(ambient.g, ambient.total.clone(), ambient.n);
        let mut out = Self::zero(ambient);
        out.push(DecoratedGraph::undecorated(graph), Rational::from_integer(1.into()))
            .expect("fundamental graph fits its ambient");
        out
    }

    /// Canonicalizes each term, merges isomorphic ones and drops zeros.
    pub fn normalize(
        ambient: Ambient<L>,
        raw: impl IntoIterator<Item = (DecoratedGraph<L>, Rational)>,
    ) -> Result<Self> {
        let mut out = Self::zero(ambient);
        for (dg, c) in raw {
            out.push(dg, c)?;
        }
        Ok(out)
    }

    pub fn push(&mut self, dg: DecoratedGraph<L>, coeff: Rational) -> Result<()> {
        self.ambient.check(&dg.graph)?;
        if coeff.is_zero() || (self.ambient.is_flat() && dg.decoration.involves_bundle()) {
            return Ok(());
        }
        let (code, canon) = dg.canonical();
        self.add_canonical(code, canon, coeff);
        Ok(())
    }

    fn add_canonical(&mut self, code: Vec<i64>, canon: DecoratedGraph<L>, coeff: Rational) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(code) {
            Entry::Vacant(slot) => {
                slot.insert((canon, coeff));
            }
            Entry::Occupied(mut slot) => {
                slot.get_mut().1 += coeff;
                if slot.get().1.is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn ambient(&self) -> &Ambient<L> {
        &self.ambient
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&DecoratedGraph<L>, &Rational)> {
        self.terms.values().map(|(dg, c)| (dg, c))
    }

    pub fn coefficient(&self, dg: &DecoratedGraph<L>) -> Rational {
        let (code, _) = dg.canonical();
        self.terms.get(&code).map_or_else(Rational::zero, |(_, c)| c.clone())
    }

    fn same_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch("classes live on different spaces".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ambient(other)?;
        let mut out = self.clone();
        for (code, (dg, c)) in &other.terms {
            out.add_canonical(code.clone(), dg.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.ambient.clone());
        }
        let mut out = self.clone();
        for (_, coeff) in out.terms.values_mut() {
            *coeff *= c;
        }
        out
    }

    /// Terms of codimension exactly `d`.
    pub fn degree_component(&self, d: usize) -> Self {
        TautClass {
            ambient: self.ambient.clone(),
            terms: self.terms.iter().filter(|(_, (dg, _))| dg.codim() == d).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    pub fn max_codim(&self) -> Option<usize> {
        self.terms.values().map(|(dg, _)| dg.codim()).max()
    }

    /// One line per term: coefficient, graph summary and decoration.
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        for (dg, c) in self.terms() {
            s.push_str(&format!("{:>12}  ", format_rational(c)));
            let g = &dg.graph;
            for (v, vert) in g.vertices.iter().enumerate() {
                s.push_str(&format!("v{v}[g={} {}={}", vert.genus, L::JSON_KEY, vert.label.to_json()));
                for ((a, b), e) in dg.decoration.vertices[v].factors() {
                    s.push_str(&format!(" eta{a}{b}^{e}"));
                }
                s.push_str("] ");
            }
            for (i, (&v, l)) in g.legs.iter().zip(&dg.decoration.legs).enumerate() {
                s.push_str(&format!("{}@v{v}", i + 1));
                if l.psi > 0 {
                    s.push_str(&format!(" psi^{}", l.psi));
                }
                if l.xi > 0 {
                    s.push_str(&format!(" xi^{}", l.xi));
                }
                s.push(' ');
            }
            for (e, d) in g.edges.iter().zip(&dg.decoration.edges) {
                s.push_str(&format!("v{}-v{}", e[0], e[1]));
                if d.psi != [0, 0] {
                    s.push_str(&format!(" psi^({},{})", d.psi[0], d.psi[1]));
                }
                if d.xi > 0 {
                    s.push_str(&format!(" xi^{}", d.xi));
                }
                s.push(' ');
            }
            s.truncate(s.trim_end().len());
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{StableGraph, Vertex};
    use crate::math::{frac, rat};

    fn pt() -> CurveClass {
        CurveClass::zero(0)
    }

    fn v(genus: u32) -> Vertex<CurveClass> {
        Vertex { genus, label: pt() }
    }

    fn amb(g: u32, n: usize) -> Ambient<CurveClass> {
        Ambient::stable(g, n, pt(), TargetModel::point())
    }

    #[test]
    fn relabelled_terms_merge() {
        let lp: StableGraph = Graph { vertices: vec![v(0)], legs: vec![0, 0], edges: vec![[0, 0]] };
        let mut d1 = Decoration::trivial(&lp);
        d1.edges[0].psi = [1, 0];
        let mut d2 = d1.clone();
        d2.edges[0].psi = [0, 1];
        let c = TautClass::normalize(
            amb(1, 2),
            [(DecoratedGraph::new(lp.clone(), d1), frac(1, 2)), (DecoratedGraph::new(lp, d2), frac(1, 2))],
        )
        .unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.terms().next().unwrap().1, &rat(1));
    }

    #[test]
    fn vertex_swap_transports_leg_decorations() {
        let g: StableGraph = Graph { vertices: vec![v(1), v(1)], legs: vec![0, 1], edges: vec![[0, 1]] };
        let swapped: StableGraph = Graph { vertices: vec![v(1), v(1)], legs: vec![1, 0], edges: vec![[1, 0]] };
        let mut d = Decoration::trivial(&g);
        d.legs[0].psi = 1;
        let a = DecoratedGraph::new(g, d.clone()).canonical();
        let b = DecoratedGraph::new(swapped, d).canonical();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
    }

    #[test]
    fn linear_structure() {
        let f = TautClass::fundamental(amb(1, 1));
        assert!(f.add(&f.scale(&rat(-1))).unwrap().is_empty());
        assert_eq!(f.degree_component(0), f);
        assert!(f.degree_component(1).is_empty());
        let other = TautClass::fundamental(amb(2, 1));
        assert!(matches!(f.add(&other), Err(Error::AmbientMismatch(_))));
        let wrong = DecoratedGraph::undecorated(Graph::single_vertex(0, pt(), 1));
        assert!(TautClass::normalize(amb(1, 1), [(wrong, rat(1))]).is_err());
    }

    #[test]
    fn point_target_drops_bundle_terms() {
        let g: StableGraph = Graph::single_vertex(1, pt(), 1);
        let mut d = Decoration::trivial(&g);
        d.legs[0].xi = 1;
        let mut k = Decoration::trivial(&g);
        k.vertices[0] = EtaMonomial::eta(2, 0, 1);
        let c = TautClass::normalize(amb(1, 1), [(DecoratedGraph::new(g.clone(), d), rat(1)), (DecoratedGraph::new(g, k), rat(1))]).unwrap();
        assert_eq!(c.len(), 1);
    }
}
