use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use rayon::prelude::*;

use super::{Ambient, DecoratedGraph, Decoration, EdgeDeco, EtaMonomial, TautClass};
use crate::error::{Error, Result};
use crate::graph::{canonicalize, enumerate_stable_graphs, StableGraph};
use crate::math::{rat, Rational};
use crate::target::CurveClass;

/// How the excess factor `-(1/r)(ψ' + ψ'')` on doubly coloured edges is kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RMode {
    /// Track the power of `1/r` separately.
    Formal,
    /// Set `r = 1`.
    One,
}

/// Product split by the power `k` of `r^{-k}`; with [`RMode::One`] only `k = 0` occurs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Product {
    ambient: Ambient<CurveClass>,
    pub components: BTreeMap<u32, TautClass<CurveClass>>,
}

impl Product {
    pub fn component(&self, k: u32) -> TautClass<CurveClass> {
        self.components.get(&k).cloned().unwrap_or_else(|| TautClass::zero(self.ambient.clone()))
    }

    /// Sum of all components, i.e. the value at `r = 1`.
    pub fn at_r_one(&self) -> TautClass<CurveClass> {
        self.components
            .values()
            .fold(TautClass::zero(self.ambient.clone()), |acc, c| acc.add(c).expect("same ambient"))
    }
}

/// Way of seeing a factor graph inside `Γ`: the kept edges and where the
/// vertices and kept edges of `Γ` land.
struct Structure {
    vertex: Vec<usize>,
    edge: Vec<Option<(usize, bool)>>,
}

fn structures(gamma: &StableGraph, factor: &StableGraph) -> Vec<(u64, Structure)> {
    let ne = gamma.num_edges();
    let mut out = Vec::new();
    for mask in 0u64..(1 << ne) {
        if mask.count_ones() as usize != factor.num_edges() {
            continue;
        }
        let contract: Vec<bool> = (0..ne).map(|e| mask >> e & 1 == 0).collect();
        let (small, map) = gamma.contract(&contract);
        for iso in small.isomorphisms(factor) {
            out.push((
                mask,
                Structure {
                    vertex: map.vertex_map.iter().map(|&u| iso.vertex[u]).collect(),
                    edge: map.edge_map.iter().map(|ce| ce.map(|c| iso.edge[c])).collect(),
                },
            ));
        }
    }
    out
}

fn oriented(d: &EdgeDeco, flip: bool) -> EdgeDeco {
    let mut d = *d;
    if flip {
        d.psi.swap(0, 1);
    }
    d
}

type Partial = (Decoration, Rational, u32);

/// Distributes the `η` factors of each factor-graph vertex over its preimages.
fn distribute(terms: Vec<Partial>, s: &Structure, monos: &[EtaMonomial]) -> Vec<Partial> {
    let mut terms = terms;
    for (u, mono) in monos.iter().enumerate() {
        let pre: Vec<usize> = (0..s.vertex.len()).filter(|&v| s.vertex[v] == u).collect();
        for ab in mono.factor_list() {
            let mut next = Vec::with_capacity(terms.len() * pre.len());
            for (d, c, k) in &terms {
                for &v in &pre {
                    let mut nd = d.clone();
                    nd.vertices[v] = nd.vertices[v].times_factor(ab);
                    next.push((nd, c.clone(), *k));
                }
            }
            terms = next;
        }
    }
    terms
}

fn combine(
    gamma: &StableGraph,
    (sa, da): (&Structure, &Decoration),
    (sb, db): (&Structure, &Decoration),
    coeff: Rational,
    mode: RMode,
) -> Vec<Partial> {
    let mut base = Decoration::trivial(gamma);
    for (i, leg) in base.legs.iter_mut().enumerate() {
        leg.psi = da.legs[i].psi + db.legs[i].psi;
        leg.xi = da.legs[i].xi + db.legs[i].xi;
    }
    let mut shared = Vec::new();
    for e in 0..gamma.num_edges() {
        let parts: Vec<EdgeDeco> = [(sa, da), (sb, db)]
            .iter()
            .filter_map(|(s, d)| s.edge[e].map(|(f, flip)| oriented(&d.edges[f], flip)))
            .collect();
        for p in &parts {
            base.edges[e].psi[0] += p.psi[0];
            base.edges[e].psi[1] += p.psi[1];
            base.edges[e].xi += p.xi;
        }
        if parts.len() == 2 {
            shared.push(e);
        }
    }
    let mut terms = vec![(base, coeff, 0u32)];
    for e in shared {
        let mut next = Vec::with_capacity(2 * terms.len());
        for (d, c, k) in terms {
            for side in 0..2 {
                let mut nd = d.clone();
                nd.edges[e].psi[side] += 1;
                let k = if mode == RMode::Formal { k + 1 } else { k };
                next.push((nd, -c.clone(), k));
            }
        }
        terms = next;
    }
    let terms = distribute(terms, sa, &da.vertices);
    distribute(terms, sb, &db.vertices)
}

/// Product of two classes on target-valued stable graphs. Terms whose total
/// codimension exceeds `max_codim` are skipped.
pub fn product(
    a: &TautClass<CurveClass>,
    b: &TautClass<CurveClass>,
    mode: RMode,
    max_codim: Option<usize>,
) -> Result<Product> {
    if a.ambient() != b.ambient() {
        return Err(Error::AmbientMismatch("factors live on different spaces".into()));
    }
    let amb = a.ambient().clone();
    let target = amb.target.clone().ok_or_else(|| Error::Invalid("product needs a target".into()))?;
    let max_e = |c: &TautClass<CurveClass>| c.terms().map(|(dg, _)| dg.graph.num_edges()).max().unwrap_or(0);
    let candidates = enumerate_stable_graphs(amb.g, amb.n, &amb.total, &target, max_e(a) + max_e(b));
    let auts: Vec<Rational> = candidates.iter().map(|g| rat(canonicalize(g).automorphisms as i64)).collect();

    // structures of every distinct factor graph inside every candidate
    let mut factor_graphs: Vec<StableGraph> = Vec::new();
    let mut index: HashMap<StableGraph, usize> = HashMap::new();
    for (dg, _) in a.terms().chain(b.terms()) {
        index.entry(dg.graph.clone()).or_insert_with(|| {
            factor_graphs.push(dg.graph.clone());
            factor_graphs.len() - 1
        });
    }
    let table: Vec<Vec<Vec<(u64, Structure)>>> = candidates
        .par_iter()
        .map(|gamma| factor_graphs.iter().map(|f| structures(gamma, f)).collect())
        .collect();

    let pairs: Vec<_> = a
        .terms()
        .flat_map(|ta| b.terms().map(move |tb| (ta, tb)))
        .filter(|((da, _), (db, _))| max_codim.is_none_or(|m| da.codim() + db.codim() <= m))
        .collect();
    let raw: Vec<(u32, DecoratedGraph<CurveClass>, Rational)> = pairs
        .par_iter()
        .flat_map_iter(|&((da, ca), (db, cb))| {
            let (ia, ib) = (index[&da.graph], index[&db.graph]);
            let mut out = Vec::new();
            for (gi, gamma) in candidates.iter().enumerate() {
                let full = (1u64 << gamma.num_edges()) - 1;
                let coeff = ca.clone() * cb / &auts[gi];
                for (ma, sa) in &table[gi][ia] {
                    for (mb, sb) in &table[gi][ib] {
                        if ma | mb != full {
                            continue;
                        }
                        for (d, c, k) in combine(gamma, (sa, &da.decoration), (sb, &db.decoration), coeff.clone(), mode) {
                            out.push((k, DecoratedGraph::new(gamma.clone(), d), c));
                        }
                    }
                }
            }
            out
        })
        .collect();

    let mut components: BTreeMap<u32, TautClass<CurveClass>> = BTreeMap::new();
    for (k, dg, c) in raw {
        if !c.is_zero() {
            components.entry(k).or_insert_with(|| TautClass::zero(amb.clone())).push(dg, c)?;
        }
    }
    components.retain(|_, c| !c.is_empty());
    Ok(Product { ambient: amb, components })
}
