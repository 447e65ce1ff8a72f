//! Brute-force oracles shared by the integration tests. Nothing here calls the
//! library's enumeration, isomorphism, weighting or interpolation code.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use drx::math::{factorial, frac, rat};
use drx::strata::{Ambient, DecoratedGraph, Decoration, EtaMonomial, TautClass};
use drx::{CurveClass, Graph, Rational, TargetModel, Vertex};
use num_traits::{One, Zero};

/// A target-valued graph for targets of rank at most one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NGraph {
    pub genus: Vec<u32>,
    pub beta: Vec<i64>,
    pub legs: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

impl NGraph {
    fn permuted(&self, p: &[usize]) -> NGraph {
        let nv = self.genus.len();
        let mut genus = vec![0; nv];
        let mut beta = vec![0; nv];
        for v in 0..nv {
            genus[p[v]] = self.genus[v];
            beta[p[v]] = self.beta[v];
        }
        let legs = self.legs.iter().map(|&v| p[v]).collect();
        let mut edges: Vec<(usize, usize)> =
            self.edges.iter().map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v]))).collect();
        edges.sort();
        NGraph { genus, beta, legs, edges }
    }

    pub fn key(&self) -> NGraph {
        permutations(self.genus.len()).iter().map(|p| self.permuted(p)).min().unwrap()
    }

    pub fn h1(&self) -> i64 {
        self.edges.len() as i64 - self.genus.len() as i64 + 1
    }

    /// Vertex permutations fixing the graph, times edge permutations and loop flips.
    pub fn automorphisms(&self) -> u64 {
        let mut me = self.clone();
        me.edges.sort();
        let vertex = permutations(self.genus.len()).iter().filter(|p| me.permuted(p) == me).count() as u64;
        let mut mult: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for &e in &me.edges {
            *mult.entry(e).or_default() += 1;
        }
        let mut aut = vertex;
        for (&(u, v), &m) in &mult {
            aut *= (1..=m).product::<u64>();
            if u == v {
                aut *= 1 << m;
            }
        }
        aut
    }

    fn connected(&self) -> bool {
        let nv = self.genus.len();
        let mut seen = vec![false; nv];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &(u, v) in &self.edges {
                for (a, b) in [(u, v), (v, u)] {
                    if a == x && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    fn stable(&self) -> bool {
        (0..self.genus.len()).all(|v| {
            let val = self.legs.iter().filter(|&&x| x == v).count()
                + self.edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum::<usize>();
            self.beta[v] != 0 || 2 * self.genus[v] as i64 - 2 + val as i64 > 0
        })
    }

    pub fn to_graph(&self, rank: usize) -> Graph<CurveClass> {
        Graph {
            vertices: self
                .genus
                .iter()
                .zip(&self.beta)
                .map(|(&g, &b)| Vertex { genus: g, label: CurveClass(if rank == 0 { vec![] } else { vec![b] }) })
                .collect(),
            legs: self.legs.clone(),
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }
}

fn vectors(len: usize, total: i64) -> Vec<Vec<i64>> {
    if len == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    (0..=total)
        .flat_map(|x| vectors(len - 1, total - x).into_iter().map(move |mut v| {
            v.insert(0, x);
            v
        }))
        .collect()
}

fn multisets(options: &[(usize, usize)], k: usize, from: usize) -> Vec<Vec<(usize, usize)>> {
    if k == 0 {
        return vec![vec![]];
    }
    (from..options.len())
        .flat_map(|i| multisets(options, k - 1, i).into_iter().map(move |mut rest| {
            rest.insert(0, options[i]);
            rest
        }))
        .collect()
}

/// Isomorphism classes of stable graphs of genus `g`, `n` legs, class `beta`
/// (a non-negative integer, 0 for the point) with at most `max_edges` edges.
pub fn naive_graphs(g: u32, n: usize, beta: i64, max_edges: usize) -> Vec<NGraph> {
    let mut seen = BTreeSet::new();
    for e in 0..=max_edges {
        for nv in 1..=e + 1 {
            let h1 = (e + 1 - nv) as i64;
            if h1 > g as i64 {
                continue;
            }
            let pairs: Vec<(usize, usize)> = (0..nv).flat_map(|u| (u..nv).map(move |v| (u, v))).collect();
            for genus in vectors(nv, g as i64 - h1) {
                for betas in vectors(nv, beta) {
                    for leg_code in 0..nv.pow(n as u32) {
                        let legs: Vec<usize> = (0..n).map(|i| leg_code / nv.pow(i as u32) % nv).collect();
                        for edges in multisets(&pairs, e, 0) {
                            let x = NGraph {
                                genus: genus.iter().map(|&x| x as u32).collect(),
                                beta: betas.clone(),
                                legs: legs.clone(),
                                edges,
                            };
                            if x.connected() && x.stable() {
                                seen.insert(x.key());
                            }
                        }
                    }
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// All weightings mod `r` as edge values `[w(h), w(h')]`.
pub fn naive_weightings(x: &NGraph, a: &[i64], c1: i64, r: i64) -> Vec<Vec<[i64; 2]>> {
    let ne = x.edges.len();
    let mut out = Vec::new();
    for code in 0..r.pow(ne as u32) {
        let w: Vec<[i64; 2]> = (0..ne)
            .map(|e| {
                let h = code / r.pow(e as u32) % r;
                [h, (r - h) % r]
            })
            .collect();
        let ok = (0..x.genus.len()).all(|v| {
            let mut s: i64 = x.legs.iter().zip(a).filter(|(&l, _)| l == v).map(|(_, &ai)| ai).sum();
            for (&(p, q), we) in x.edges.iter().zip(&w) {
                if p == v {
                    s += we[0];
                }
                if q == v {
                    s += we[1];
                }
            }
            (s - c1 * x.beta[v]).rem_euclid(r) == 0
        });
        if ok {
            out.push(w);
        }
    }
    out
}

type Poly = BTreeMap<Vec<u32>, Rational>;

fn poly_mul(p: &Poly, q: &Poly, budget: u32) -> Poly {
    let mut out = Poly::new();
    for (m1, c1) in p {
        let d1: u32 = m1.iter().sum();
        for (m2, c2) in q {
            if d1 + m2.iter().sum::<u32>() > budget {
                continue;
            }
            let m: Vec<u32> = m1.iter().zip(m2).map(|(x, y)| x + y).collect();
            *out.entry(m).or_insert_with(Rational::zero) += c1 * c2;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn poly_exp(x: &Poly, vars: usize, budget: u32) -> Poly {
    let one: Poly = [(vec![0; vars], Rational::one())].into_iter().collect();
    let mut out = one.clone();
    let mut power = one;
    for k in 1..=budget {
        power = poly_mul(&power, x, budget);
        for (m, c) in &power {
            *out.entry(m.clone()).or_insert_with(Rational::zero) += c / Rational::from_integer(factorial(k as u64));
        }
    }
    out
}

fn var(vars: usize, i: usize, c: Rational) -> Poly {
    let mut m = vec![0; vars];
    m[i] = 1;
    [(m, c)].into_iter().collect()
}

/// `Σ_x y(x) Π_{x' ≠ x} (0 - x')/(x - x')`
pub fn lagrange_at_zero(samples: &[(i64, Rational)]) -> Rational {
    let mut total = Rational::zero();
    for (j, (xj, yj)) in samples.iter().enumerate() {
        let mut term = yj.clone();
        for (k, (xk, _)) in samples.iter().enumerate() {
            if k != j {
                term *= frac(-xk, xj - xk);
            }
        }
        total += term;
    }
    total
}

/// The constant-term class by full enumeration: fixed-`r` classes at
/// `2d + 2` consecutive moduli, each coefficient extrapolated to `r = 0` from
/// the first `2d + 1` and checked on the last. `c1` is `None` on the point.
pub fn naive_p_constant(g: u32, a: &[i64], beta: i64, c1: Option<i64>, d: usize) -> TautClass<CurveClass> {
    let n = a.len();
    let (rank, c1v, flat) = match c1 {
        None => (0, 0, true),
        Some(c) => (1, c, false),
    };
    let target = if flat { TargetModel::point() } else { TargetModel::free(vec![c1v]) };
    let beta_class = CurveClass(if flat { vec![] } else { vec![beta] });
    let amb = Ambient::stable(g, n, beta_class, target);
    let r0 = 2 * a.iter().map(|x| x.abs()).sum::<i64>() + 2 * beta * (1 + c1v.abs()) + 3;
    let nodes: Vec<i64> = (r0..r0 + 2 * d as i64 + 2).collect();

    let mut raw = Vec::new();
    for x in naive_graphs(g, n, beta, d) {
        let (nv, ne) = (x.genus.len(), x.edges.len());
        if ne > d {
            continue;
        }
        let budget = (d - ne) as u32;
        let vars = 2 * n + nv + 2 * ne;
        let mut base: Poly = [(vec![0; vars], Rational::one())].into_iter().collect();
        for (i, &ai) in a.iter().enumerate() {
            let mut arg = var(vars, 2 * i, frac(ai * ai, 2));
            if !flat {
                arg.extend(var(vars, 2 * i + 1, rat(ai)));
            }
            base = poly_mul(&base, &poly_exp(&arg, vars, budget), budget);
        }
        if !flat {
            for v in 0..nv {
                base = poly_mul(&base, &poly_exp(&var(vars, 2 * n + v, frac(-1, 2)), vars, budget), budget);
            }
        }
        let aut = rat(x.automorphisms() as i64);
        let mut per_node: BTreeMap<Vec<u32>, Vec<Rational>> = BTreeMap::new();
        for (k, &r) in nodes.iter().enumerate() {
            let mut acc = Poly::new();
            for w in naive_weightings(&x, a, c1v, r) {
                let mut total = base.clone();
                for (e, we) in w.iter().enumerate() {
                    let p = rat(we[0] * we[1]);
                    let s: Poly = var(vars, 2 * n + nv + 2 * e, rat(1))
                        .into_iter()
                        .chain(var(vars, 2 * n + nv + 2 * e + 1, rat(1)))
                        .collect();
                    let mut factor = Poly::new();
                    let mut spow: Poly = [(vec![0; vars], Rational::one())].into_iter().collect();
                    for m in 1..=budget + 1 {
                        let c = num_traits::pow(p.clone() / rat(2), m as usize) / Rational::from_integer(factorial(m as u64))
                            * if m % 2 == 1 { rat(1) } else { rat(-1) };
                        for (mono, sc) in &spow {
                            *factor.entry(mono.clone()).or_insert_with(Rational::zero) += &c * sc;
                        }
                        spow = poly_mul(&spow, &s, budget);
                    }
                    total = poly_mul(&total, &factor, budget);
                }
                for (m, c) in total {
                    if m.iter().sum::<u32>() == budget {
                        *acc.entry(m).or_insert_with(Rational::zero) += c;
                    }
                }
            }
            let scale = Rational::one() / (num_traits::pow(rat(r), x.h1() as usize) * &aut);
            for (m, c) in acc {
                per_node.entry(m).or_insert_with(|| vec![Rational::zero(); nodes.len()])[k] = c * &scale;
            }
        }
        let graph = x.to_graph(rank);
        for (m, values) in per_node {
            let samples: Vec<(i64, Rational)> = nodes.iter().copied().zip(values).collect();
            let (fit, check) = samples.split_at(samples.len() - 1);
            // the held-back node must lie on the same polynomial
            let shifted: Vec<(i64, Rational)> = fit.iter().map(|(x, y)| (x - check[0].0, y.clone())).collect();
            assert_eq!(lagrange_at_zero(&shifted), check[0].1, "naive values are not polynomial in r");
            let value = lagrange_at_zero(fit);
            let mut dec = Decoration::trivial(&graph);
            for i in 0..n {
                dec.legs[i].psi = m[2 * i];
                dec.legs[i].xi = m[2 * i + 1];
            }
            for v in 0..nv {
                dec.vertices[v] = EtaMonomial::eta(0, 2, m[2 * n + v]);
            }
            for e in 0..ne {
                dec.edges[e].psi = [m[2 * n + nv + 2 * e], m[2 * n + nv + 2 * e + 1]];
            }
            raw.push((DecoratedGraph::new(graph.clone(), dec), value));
        }
    }
    TautClass::normalize(amb, raw).expect("one ambient")
}
