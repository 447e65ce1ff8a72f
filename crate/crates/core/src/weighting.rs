//! Weightings mod `r` of a graph, sums of polynomial integrands over them,
//! and the resulting polynomials in `r`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, StableGraph, VertexLabel, ZGraph};
use crate::math::{interpolate_polynomial, modulo, pow_signed, rat, RPolynomial, Rational};
use crate::target::TargetModel;

/// Residues on the half-edges of a graph. Legs carry `a_i mod r`; edge
/// half-edges are listed per edge as `[side 0, side 1]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Weighting {
    pub r: i64,
    pub legs: Vec<i64>,
    pub edges: Vec<[i64; 2]>,
}

/// `coeff * r^{r_exp} * Π_e w(e,0)^{exps[e][0]} w(e,1)^{exps[e][1]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: Rational,
    pub exps: Vec<[u32; 2]>,
    pub r_exp: i32,
}

/// Polynomial in the edge half-edge weights and in `r` (Laurent in `r`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightIntegrand {
    num_edges: usize,
    terms: Vec<Monomial>,
}

impl WeightIntegrand {
    pub fn new(num_edges: usize, terms: Vec<Monomial>) -> Self {
        assert!(terms.iter().all(|t| t.exps.len() == num_edges), "exponent vector length");
        WeightIntegrand { num_edges, terms }
    }

    pub fn constant(num_edges: usize, c: Rational) -> Self {
        Self::new(num_edges, vec![Monomial { coeff: c, exps: vec![[0, 0]; num_edges], r_exp: 0 }])
    }

    /// `c * r^{r_exp} * Π_e (w(e,0) w(e,1))^{m_e}`.
    pub fn edge_products(m: &[u32], c: Rational, r_exp: i32) -> Self {
        Self::new(m.len(), vec![Monomial { coeff: c, exps: m.iter().map(|&k| [k, k]).collect(), r_exp }])
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    /// Total degree in the weight variables.
    pub fn w_degree(&self) -> usize {
        self.terms
            .iter()
            .map(|t| t.exps.iter().map(|e| (e[0] + e[1]) as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// Largest power of `r`; may be negative.
    pub fn r_degree(&self) -> i32 {
        self.terms.iter().map(|t| t.r_exp).max().unwrap_or(0)
    }

    pub fn eval(&self, edges: &[[i64; 2]], r: i64) -> Rational {
        let rr = rat(r);
        let mut total = Rational::zero();
        for t in &self.terms {
            let mut prod = BigInt::one();
            for (w, e) in edges.iter().zip(&t.exps) {
                for side in 0..2 {
                    prod *= num_traits::pow(BigInt::from(w[side]), e[side] as usize);
                }
            }
            total += t.coeff.clone() * Rational::from_integer(prod) * pow_signed(&rr, t.r_exp as i64);
        }
        total
    }
}

/// Vertex conditions of a weighting problem: the residues on the edge
/// half-edges at `v` must sum to `targets[v]` mod `r`. Leg residues are
/// already folded into the targets.
#[derive(Clone, Debug)]
pub struct WeightingProblem {
    num_vertices: usize,
    edges: Vec<[usize; 2]>,
    targets: Vec<i64>,
    legs: Vec<i64>,
}

impl WeightingProblem {
    /// Weightings of a target-valued stable graph for ramification data `a`.
    pub fn from_stable(graph: &StableGraph, a: &[i64], target: &TargetModel) -> Result<Self> {
        if a.len() != graph.num_legs() {
            return Err(Error::Incompatible(format!(
                "{} ramification values for {} legs",
                a.len(),
                graph.num_legs()
            )));
        }
        let mut targets = Vec::with_capacity(graph.num_vertices());
        for (v, vert) in graph.vertices.iter().enumerate() {
            let pairing = target.pair_c1s(&vert.label)?;
            targets.push(pairing - graph.legs_at(v).iter().map(|&i| a[i]).sum::<i64>());
        }
        Self::build(graph, targets, a.to_vec())
    }

    /// Twists of a prestable graph with vertex degrees: legs carry 0 and the
    /// vertex condition reads `Σ tw(h) = d(v)`.
    pub fn from_twisted(graph: &ZGraph) -> Result<Self> {
        let targets = graph.vertices.iter().map(|v| v.label).collect();
        Self::build(graph, targets, vec![0; graph.num_legs()])
    }

    fn build<L: VertexLabel>(graph: &Graph<L>, targets: Vec<i64>, legs: Vec<i64>) -> Result<Self> {
        let total: i64 = targets.iter().sum();
        if total != 0 {
            return Err(Error::Incompatible(format!(
                "vertex conditions sum to {total} instead of 0"
            )));
        }
        if !graph.is_connected() {
            return Err(Error::Invalid("graph is not connected".into()));
        }
        Ok(WeightingProblem { num_vertices: graph.num_vertices(), edges: graph.edges.clone(), targets, legs })
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn first_betti(&self) -> i64 {
        self.edges.len() as i64 - self.num_vertices as i64 + 1
    }

    /// Checks the leg, edge and vertex conditions.
    pub fn is_valid(&self, w: &Weighting) -> bool {
        let r = w.r;
        let legs_ok = w.legs.len() == self.legs.len()
            && w.legs.iter().zip(&self.legs).all(|(&x, &a)| x == modulo(a, r));
        let edges_ok = w.edges.len() == self.edges.len()
            && w.edges.iter().all(|e| (0..r).contains(&e[0]) && (0..r).contains(&e[1]) && (e[0] + e[1]) % r == 0);
        let mut sums = vec![0i64; self.num_vertices];
        for (ends, vals) in self.edges.iter().zip(&w.edges) {
            sums[ends[0]] += vals[0];
            sums[ends[1]] += vals[1];
        }
        legs_ok && edges_ok && sums.iter().zip(&self.targets).all(|(&s, &t)| modulo(s - t, r) == 0)
    }

    fn weighting(&self, r: i64, edges: Vec<[i64; 2]>) -> Weighting {
        Weighting { r, legs: self.legs.iter().map(|&a| modulo(a, r)).collect(), edges }
    }

    /// All weightings by depth-first constraint search, in lexicographic order
    /// of the edge values.
    pub fn enumerate(&self, r: i64) -> Vec<Weighting> {
        assert!(r >= 1, "modulus must be positive");
        let mut remaining = vec![0usize; self.num_vertices];
        for e in &self.edges {
            remaining[e[0]] += 1;
            remaining[e[1]] += 1;
        }
        let mut out = Vec::new();
        let mut sums = vec![0i64; self.num_vertices];
        let mut vals = Vec::with_capacity(self.edges.len());
        // vertices without edges are checked up front
        if (0..self.num_vertices).any(|v| remaining[v] == 0 && modulo(self.targets[v], r) != 0) {
            return out;
        }
        self.search(r, &mut remaining, &mut sums, &mut vals, &mut out);
        out
    }

    fn search(
        &self,
        r: i64,
        remaining: &mut [usize],
        sums: &mut [i64],
        vals: &mut Vec<[i64; 2]>,
        out: &mut Vec<Weighting>,
    ) {
        let e = vals.len();
        if e == self.edges.len() {
            out.push(self.weighting(r, vals.clone()));
            return;
        }
        let [a, b] = self.edges[e];
        for w in 0..r {
            let pair = [w, (r - w) % r];
            sums[a] += pair[0];
            sums[b] += pair[1];
            remaining[a] -= 1;
            remaining[b] -= 1;
            let closed_ok = [a, b]
                .iter()
                .all(|&v| remaining[v] > 0 || modulo(sums[v] - self.targets[v], r) == 0);
            if closed_ok {
                vals.push(pair);
                self.search(r, remaining, sums, vals, out);
                vals.pop();
            }
            sums[a] -= pair[0];
            sums[b] -= pair[1];
            remaining[a] += 1;
            remaining[b] += 1;
        }
    }

    pub fn sum_enum(&self, f: &WeightIntegrand, r: i64) -> Rational {
        self.enumerate(r).iter().map(|w| f.eval(&w.edges, r)).sum()
    }

    /// Visits every weighting by fixing the edges outside a spanning tree and
    /// solving the tree edges from the leaves up.
    pub fn for_each_tree(&self, r: i64, mut visit: impl FnMut(&[[i64; 2]])) {
        assert!(r >= 1, "modulus must be positive");
        let nv = self.num_vertices;
        // breadth-first spanning tree from vertex 0
        let mut order = vec![0usize];
        let mut parent_edge: Vec<Option<(usize, usize)>> = vec![None; nv];
        let mut seen = vec![false; nv];
        let mut in_tree = vec![false; self.edges.len()];
        seen[0] = true;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for (e, ends) in self.edges.iter().enumerate() {
                for side in 0..2 {
                    let u = ends[1 - side];
                    if ends[side] == v && !seen[u] {
                        seen[u] = true;
                        in_tree[e] = true;
                        // side of the edge that sits at the child
                        parent_edge[u] = Some((e, 1 - side));
                        order.push(u);
                    }
                }
            }
        }
        let free: Vec<usize> = (0..self.edges.len()).filter(|&e| !in_tree[e]).collect();
        let mut vals = vec![[0i64; 2]; self.edges.len()];
        let mut counter = vec![0i64; free.len()];
        loop {
            for (k, &e) in free.iter().enumerate() {
                vals[e] = [counter[k], (r - counter[k]) % r];
            }
            let mut sums = vec![0i64; nv];
            for &e in &free {
                sums[self.edges[e][0]] += vals[e][0];
                sums[self.edges[e][1]] += vals[e][1];
            }
            for &v in order.iter().skip(1).rev() {
                let (e, side) = parent_edge[v].expect("non-root vertex has a parent");
                let w = modulo(self.targets[v] - sums[v], r);
                vals[e][side] = w;
                vals[e][1 - side] = (r - w) % r;
                sums[v] += w;
                sums[self.edges[e][1 - side]] += vals[e][1 - side];
            }
            visit(&vals);
            let mut k = free.len();
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                counter[k] += 1;
                if counter[k] < r {
                    break;
                }
                counter[k] = 0;
            }
        }
    }

    pub fn sum_tree(&self, f: &WeightIntegrand, r: i64) -> Rational {
        let mut total = Rational::zero();
        self.for_each_tree(r, |vals| total += f.eval(vals, r));
        total
    }

    /// Tree sums of several integrands in one pass over the weightings.
    pub fn sum_tree_many(&self, fs: &[WeightIntegrand], r: i64) -> Vec<Rational> {
        let mut totals = vec![Rational::zero(); fs.len()];
        self.for_each_tree(r, |vals| {
            for (t, f) in totals.iter_mut().zip(fs) {
                *t += f.eval(vals, r);
            }
        });
        totals
    }

    /// Interpolates `r ↦ Σ_w F(w, r)` from the nodes `r_min ..= r_min + degree_bound + 2`;
    /// the last two nodes are held out and checked.
    pub fn polynomial(&self, f: &WeightIntegrand, r_min: i64, degree_bound: usize) -> Result<RPolynomial> {
        let nodes: Vec<i64> = (r_min..=r_min + degree_bound as i64 + 2).collect();
        let samples: Vec<(i64, Rational)> =
            nodes.par_iter().map(|&r| (r, self.sum_tree(f, r))).collect();
        Ok(interpolate_polynomial(&samples, degree_bound)?)
    }
}

/// Weightings mod `r` of `graph` for ramification data `a`.
pub fn enumerate_weightings(
    graph: &StableGraph,
    a: &[i64],
    target: &TargetModel,
    r: i64,
) -> Result<Vec<Weighting>> {
    Ok(WeightingProblem::from_stable(graph, a, target)?.enumerate(r))
}

pub fn sum_over_weightings_enum(
    graph: &StableGraph,
    a: &[i64],
    target: &TargetModel,
    f: &WeightIntegrand,
    r: i64,
) -> Result<Rational> {
    Ok(WeightingProblem::from_stable(graph, a, target)?.sum_enum(f, r))
}

pub fn sum_over_weightings_tree(
    graph: &StableGraph,
    a: &[i64],
    target: &TargetModel,
    f: &WeightIntegrand,
    r: i64,
) -> Result<Rational> {
    Ok(WeightingProblem::from_stable(graph, a, target)?.sum_tree(f, r))
}

pub fn weighting_polynomial(
    graph: &StableGraph,
    a: &[i64],
    target: &TargetModel,
    f: &WeightIntegrand,
    r_min: i64,
    degree_bound: usize,
) -> Result<RPolynomial> {
    WeightingProblem::from_stable(graph, a, target)?.polynomial(f, r_min, degree_bound)
}

/// Degree bound for `F`: its weight degree, plus `h1`, plus any positive power of `r`.
pub fn degree_bound_for(f: &WeightIntegrand, first_betti: i64) -> usize {
    f.w_degree() + first_betti.max(0) as usize + f.r_degree().max(0) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Vertex;
    use crate::math::frac;
    use crate::target::CurveClass;

    fn pt() -> CurveClass {
        CurveClass::zero(0)
    }

    fn loop_graph(n: usize) -> StableGraph {
        Graph { vertices: vec![Vertex { genus: 1, label: pt() }], legs: vec![0; n], edges: vec![[0, 0]] }
    }

    fn tree() -> StableGraph {
        let v = Vertex { genus: 0, label: pt() };
        Graph { vertices: vec![v.clone(), v], legs: vec![0, 0, 1], edges: vec![[0, 1]] }
    }

    #[test]
    fn counts_match_first_betti() {
        let t = TargetModel::point();
        assert_eq!(enumerate_weightings(&loop_graph(2), &[1, -1], &t, 5).unwrap().len(), 5);
        let ws = enumerate_weightings(&tree(), &[2, 3, -5], &t, 7).unwrap();
        assert_eq!(ws.len(), 1);
        assert_eq!(ws[0].edges, vec![[2, 5]]);
        assert_eq!(ws[0].legs, vec![2, 3, 2]);
    }

    #[test]
    fn incompatible_data_is_rejected() {
        let err = enumerate_weightings(&tree(), &[1, 1, 1], &TargetModel::point(), 5).unwrap_err();
        assert!(err.to_string().contains("incompatible ramification data"));
    }

    #[test]
    fn loop_sums() {
        let t = TargetModel::point();
        let g = loop_graph(0);
        let one = WeightIntegrand::constant(1, rat(1));
        let w0 = WeightIntegrand::new(1, vec![Monomial { coeff: rat(1), exps: vec![[1, 0]], r_exp: 0 }]);
        let ww = WeightIntegrand::edge_products(&[1], rat(1), 0);
        for (f, expected) in [(&one, 5), (&w0, 10), (&ww, 20)] {
            assert_eq!(sum_over_weightings_enum(&g, &[], &t, f, 5).unwrap(), rat(expected));
            assert_eq!(sum_over_weightings_tree(&g, &[], &t, f, 5).unwrap(), rat(expected));
        }
        let p = weighting_polynomial(&g, &[], &t, &ww, 3, degree_bound_for(&ww, 1)).unwrap();
        assert_eq!(p.coeffs(), &[rat(0), frac(-1, 6), rat(0), frac(1, 6)]);
        let p1 = weighting_polynomial(&g, &[], &t, &one, 3, 1).unwrap();
        assert_eq!(p1.coeffs(), &[rat(0), rat(1)]);
    }

    #[test]
    fn laurent_integrands_interpolate() {
        // r^{-1} Σ_w w w' on a loop is (r^2 - 1)/6
        let g = loop_graph(0);
        let f = WeightIntegrand::edge_products(&[1], rat(1), -1);
        let p = weighting_polynomial(&g, &[], &TargetModel::point(), &f, 2, degree_bound_for(&f, 1)).unwrap();
        assert_eq!(p.constant_term(), frac(-1, 6));
    }
}
