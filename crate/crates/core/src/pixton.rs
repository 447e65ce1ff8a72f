//! The graph-sum class at fixed `r`, its constant term in `r`, the double
//! ramification cycle, and the twisted constant-term class on prestable graphs.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{canonical_labeling, enumerate_stable_graphs, Graph, StableGraph, VertexLabel, ZGraph};
use crate::math::{binomial, factorial, frac, interpolate_polynomial, pow_signed, rat, MathError, RPolynomial, Rational};
use crate::strata::{Ambient, DecoratedGraph, Decoration, EtaMonomial, TautClass};
use crate::target::{CurveClass, TargetModel};
use crate::weighting::{degree_bound_for, WeightIntegrand, Weighting, WeightingProblem};

/// Attempts at doubling `r_min` before giving up on polynomiality.
const MAX_RETRIES: u32 = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DRRequest {
    pub g: u32,
    pub a: Vec<i64>,
    pub beta: CurveClass,
    pub target: TargetModel,
    pub degree: usize,
}

impl DRRequest {
    pub fn new(g: u32, a: Vec<i64>, beta: CurveClass, target: TargetModel, degree: usize) -> Result<Self> {
        let pairing = target.pair_c1s(&beta)?;
        let sum: i64 = a.iter().sum();
        if sum != pairing {
            return Err(Error::Incompatible(format!(
                "sum of A must equal pairing: sum of A is {sum}, pairing of beta with c1(S) is {pairing}"
            )));
        }
        Ok(DRRequest { g, a, beta, target, degree })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn ambient(&self) -> Ambient<CurveClass> {
        Ambient::stable(self.g, self.n(), self.beta.clone(), self.target.clone())
    }

    /// `max(Σ|a_i|, 2(a_+ + b)) + 1`, with `a_+` the sum of the positive `a_i`
    /// and `b` the summand bound of `beta`.
    pub fn default_r_min(&self) -> Result<i64> {
        default_r_min(&self.a, &self.beta, &self.target)
    }

    fn graphs(&self) -> Vec<StableGraph> {
        enumerate_stable_graphs(self.g, self.n(), &self.beta, &self.target, self.degree)
    }
}

fn default_r_min(a: &[i64], beta: &CurveClass, target: &TargetModel) -> Result<i64> {
    let abs: i64 = a.iter().map(|x| x.abs()).sum();
    let plus: i64 = a.iter().filter(|&&x| x > 0).sum();
    let b = target.summand_bound_b(beta)?;
    Ok(abs.max(2 * (plus + b)).max(1) + 1)
}

/// Coefficient of `p^m ψ_h^i ψ_{h'}^{m-1-i}` in
/// `(1 - exp(-p(ψ_h + ψ_{h'})/2)) / (ψ_h + ψ_{h'})`.
pub fn edge_factor_coefficient(m: u32, i: u32) -> Rational {
    assert!(m >= 1 && i < m);
    let sign = if m % 2 == 1 { 1 } else { -1 };
    Rational::new(
        BigInt::from(sign) * binomial((m - 1) as u64, i as u64),
        BigInt::from(2).pow(m) * factorial(m as u64),
    )
}

/// One decorated term of a graph contribution before the weights are
/// inserted: its full coefficient is `coeff · Π_e (w(h)w(h'))^{m_e}`.
#[derive(Clone, Debug)]
struct KernelTerm {
    decoration: Decoration,
    coeff: Rational,
    m: Vec<u32>,
}

#[derive(Clone)]
enum Choice {
    Leg { leg: usize, psi: u32, xi: u32 },
    Eta { vertex: usize, k: u32 },
    Edge { edge: usize, m: u32, i: u32 },
}

/// Expands leg, vertex and edge factors of `graph` and keeps decoration
/// degree `d - |E|`. `legs` is `None` when there is no leg factor; `flat`
/// drops every `ξ` and `η` term.
fn kernel<L: VertexLabel>(graph: &Graph<L>, legs: Option<&[i64]>, flat: bool, d: usize) -> Vec<KernelTerm> {
    let ne = graph.num_edges();
    if ne > d {
        return Vec::new();
    }
    let budget = (d - ne) as u32;
    let mut slots: Vec<Vec<(u32, Rational, Choice)>> = Vec::new();
    if let Some(a) = legs {
        for (leg, &ai) in a.iter().enumerate() {
            let half_sq = frac(ai * ai, 2);
            let mut opts = Vec::new();
            for p in 0..=budget {
                for q in 0..=budget - p {
                    if (flat && q > 0) || (ai == 0 && p + q > 0) {
                        continue;
                    }
                    let c = num_traits::pow(half_sq.clone(), p as usize) * pow_signed(&rat(ai), q as i64)
                        / Rational::from_integer(factorial(p as u64) * factorial(q as u64));
                    opts.push((p + q, c, Choice::Leg { leg, psi: p, xi: q }));
                }
            }
            slots.push(opts);
        }
    }
    for vertex in 0..graph.num_vertices() {
        let top = if flat { 0 } else { budget };
        slots.push(
            (0..=top)
                .map(|k| {
                    let c = num_traits::pow(frac(-1, 2), k as usize) / Rational::from_integer(factorial(k as u64));
                    (k, c, Choice::Eta { vertex, k })
                })
                .collect(),
        );
    }
    for edge in 0..ne {
        let mut opts = Vec::new();
        for m in 1..=budget + 1 {
            for i in 0..m {
                opts.push((m - 1, edge_factor_coefficient(m, i), Choice::Edge { edge, m, i }));
            }
        }
        slots.push(opts);
    }
    let mut out = Vec::new();
    let mut picked = Vec::with_capacity(slots.len());
    expand_slots(&slots, budget, &mut picked, &mut |choices| {
        let mut dec = Decoration::trivial(graph);
        let mut coeff = Rational::one();
        let mut m = vec![0u32; ne];
        for (c, choice) in choices {
            coeff *= *c;
            match choice {
                Choice::Leg { leg, psi, xi } => {
                    dec.legs[*leg].psi = *psi;
                    dec.legs[*leg].xi = *xi;
                }
                Choice::Eta { vertex, k } => dec.vertices[*vertex] = EtaMonomial::eta(0, 2, *k),
                Choice::Edge { edge, m: me, i } => {
                    dec.edges[*edge].psi = [*i, me - 1 - i];
                    m[*edge] = *me;
                }
            }
        }
        out.push(KernelTerm { decoration: dec, coeff, m });
    });
    out
}

fn expand_slots<'a>(
    slots: &'a [Vec<(u32, Rational, Choice)>],
    remaining: u32,
    picked: &mut Vec<(&'a Rational, &'a Choice)>,
    emit: &mut impl FnMut(&[(&'a Rational, &'a Choice)]),
) {
    let k = picked.len();
    if k == slots.len() {
        if remaining == 0 {
            emit(picked);
        }
        return;
    }
    for (deg, c, choice) in &slots[k] {
        if *deg <= remaining {
            picked.push((c, choice));
            expand_slots(slots, remaining - deg, picked, emit);
            picked.pop();
        }
    }
}

fn edge_weight_product(m: &[u32], w: &[[i64; 2]]) -> Rational {
    let mut acc = BigInt::one();
    for (e, &me) in m.iter().enumerate() {
        acc *= num_traits::pow(BigInt::from(w[e][0] * w[e][1]), me as usize);
    }
    Rational::from_integer(acc)
}

fn automorphisms<L: VertexLabel>(graph: &Graph<L>) -> Rational {
    let lab = canonical_labeling(graph.num_vertices(), &graph.legs, &graph.edges, &graph.plain_colors());
    rat(lab.automorphisms as i64)
}

/// Degree-`d` part of the decorated class of `graph` at a fixed weighting,
/// without the prefactor `r^{-h1}/|Aut|`.
pub fn graph_contribution_fixed_r(
    graph: &StableGraph,
    w: &Weighting,
    a: &[i64],
    target: &TargetModel,
    d: usize,
) -> Result<TautClass<CurveClass>> {
    let problem = WeightingProblem::from_stable(graph, a, target)?;
    if !problem.is_valid(w) {
        return Err(Error::Invalid("weighting does not satisfy the weighting conditions".into()));
    }
    let beta = graph.total_label(target.zero_class());
    let amb = Ambient::stable(graph.total_genus() as u32, a.len(), beta, target.clone());
    let terms = kernel(graph, Some(a), target.is_point(), d);
    TautClass::normalize(
        amb,
        terms.into_iter().map(|t| {
            let c = t.coeff * edge_weight_product(&t.m, &w.edges);
            (DecoratedGraph::new(graph.clone(), t.decoration), c)
        }),
    )
}

/// The degree-`d` class at a fixed modulus `r`.
pub fn compute_p_fixed_r(req: &DRRequest, r: i64) -> Result<TautClass<CurveClass>> {
    if r < 2 {
        return Err(Error::Invalid("modulus r must be at least 2".into()));
    }
    let graphs = req.graphs();
    let parts: Vec<Vec<(DecoratedGraph<CurveClass>, Rational)>> = graphs
        .par_iter()
        .map(|graph| {
            let problem = WeightingProblem::from_stable(graph, &req.a, &req.target)?;
            let weightings = problem.enumerate(r);
            let scale = pow_signed(&rat(r), -graph.first_betti()) / automorphisms(graph);
            let mut sums: HashMap<Vec<u32>, Rational> = HashMap::new();
            let terms = kernel(graph, Some(&req.a), req.target.is_point(), req.degree);
            let mut out = Vec::with_capacity(terms.len());
            for t in terms {
                let s = sums
                    .entry(t.m.clone())
                    .or_insert_with(|| weightings.iter().map(|w| edge_weight_product(&t.m, &w.edges)).sum())
                    .clone();
                out.push((DecoratedGraph::new(graph.clone(), t.decoration), t.coeff * s * &scale));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    TautClass::normalize(req.ambient(), parts.into_iter().flatten())
}

/// The interpolated polynomial behind one coefficient of the constant-term class.
#[derive(Clone, Debug)]
pub struct CoefficientFit {
    pub graph: StableGraph,
    /// Exponents `m_e` of `w(h)w(h')` in the integrand `r^{-h1} Π_e (w(h)w(h'))^{m_e}`.
    pub exponents: Vec<u32>,
    pub polynomial: RPolynomial,
    /// Interpolation nodes followed by the held-out nodes.
    pub nodes: Vec<i64>,
    pub held_out: Vec<i64>,
}

#[derive(Clone, Debug, Default)]
pub struct PConstantReport {
    pub fits: Vec<CoefficientFit>,
    /// Number of times some graph needed a larger `r_min`.
    pub retries: u32,
}

/// Constant terms in `r` of `r^{-h1} Σ_w Π_e (w(h)w(h'))^{m_e}` for each requested `m`.
fn constant_terms(
    problem: &WeightingProblem,
    ms: &[Vec<u32>],
    r_min: i64,
    graph_name: &dyn Fn() -> String,
    retries: &mut u32,
) -> Result<Vec<(RPolynomial, Vec<i64>, usize)>> {
    let h1 = problem.first_betti();
    let integrands: Vec<WeightIntegrand> =
        ms.iter().map(|m| WeightIntegrand::edge_products(m, Rational::one(), -(h1 as i32))).collect();
    let bounds: Vec<usize> = integrands.iter().map(|f| degree_bound_for(f, h1)).collect();
    let top = bounds.iter().copied().max().unwrap_or(0);
    let mut r0 = r_min;
    for attempt in 0..=MAX_RETRIES {
        let nodes: Vec<i64> = (r0..=r0 + top as i64 + 2).collect();
        let sums: Vec<Vec<Rational>> = nodes.iter().map(|&r| problem.sum_tree_many(&integrands, r)).collect();
        let mut fits = Vec::with_capacity(ms.len());
        let mut failure = None;
        for (k, &bound) in bounds.iter().enumerate() {
            let samples: Vec<(i64, Rational)> = nodes.iter().zip(&sums).map(|(&r, s)| (r, s[k].clone())).collect();
            match interpolate_polynomial(&samples, bound) {
                Ok(p) => fits.push((p, nodes.clone(), bound)),
                Err(e @ MathError::PolynomialityViolated { .. }) => {
                    failure = Some(e);
                    break;
                }
                Err(e) => return Err(e.into()),
            }
        }
        match failure {
            None => return Ok(fits),
            Some(e) if attempt < MAX_RETRIES => {
                log::warn!("{e} for graph {}; retrying with r_min = {}", graph_name(), 2 * r0);
                *retries += 1;
                r0 *= 2;
            }
            Some(e) => return Err(Error::Polynomiality { graph: graph_name(), source: e }),
        }
    }
    unreachable!("loop returns on the last attempt")
}

/// Like [`compute_p_constant`], also returning every interpolated polynomial.
pub fn compute_p_constant_with_report(
    req: &DRRequest,
    r_min: Option<i64>,
) -> Result<(TautClass<CurveClass>, PConstantReport)> {
    let r_min = match r_min {
        Some(r) => r,
        None => req.default_r_min()?,
    };
    let graphs = req.graphs();
    let per_graph: Vec<(Vec<(DecoratedGraph<CurveClass>, Rational)>, Vec<CoefficientFit>, u32)> = graphs
        .par_iter()
        .map(|graph| {
            let terms = kernel(graph, Some(&req.a), req.target.is_point(), req.degree);
            if terms.is_empty() {
                return Ok((Vec::new(), Vec::new(), 0));
            }
            let problem = WeightingProblem::from_stable(graph, &req.a, &req.target)?;
            let mut ms: Vec<Vec<u32>> = terms.iter().map(|t| t.m.clone()).collect();
            ms.sort();
            ms.dedup();
            let mut retries = 0;
            let name = || graph.to_json().to_string();
            let fits = constant_terms(&problem, &ms, r_min, &name, &mut retries)?;
            let aut = automorphisms(graph);
            let constants: BTreeMap<&Vec<u32>, Rational> =
                ms.iter().zip(&fits).map(|(m, (p, _, _))| (m, p.constant_term())).collect();
            let out = terms
                .into_iter()
                .map(|t| {
                    let c = t.coeff * &constants[&t.m] / &aut;
                    (DecoratedGraph::new(graph.clone(), t.decoration), c)
                })
                .collect();
            let reports = ms
                .iter()
                .zip(fits)
                .map(|(m, (polynomial, nodes, bound))| CoefficientFit {
                    graph: graph.clone(),
                    exponents: m.clone(),
                    polynomial,
                    held_out: nodes[bound + 1..].to_vec(),
                    nodes,
                })
                .collect();
            Ok((out, reports, retries))
        })
        .collect::<Result<_>>()?;
    let mut report = PConstantReport::default();
    let mut raw = Vec::new();
    for (terms, fits, retries) in per_graph {
        raw.extend(terms);
        report.fits.extend(fits);
        report.retries += retries;
    }
    Ok((TautClass::normalize(req.ambient(), raw)?, report))
}

/// Value at `r = 0` of the polynomial interpolating the fixed-`r` classes.
pub fn compute_p_constant(req: &DRRequest) -> Result<TautClass<CurveClass>> {
    Ok(compute_p_constant_with_report(req, None)?.0)
}

/// The double ramification cycle: the constant-term class in degree `g`.
pub fn compute_dr(g: u32, a: &[i64], beta: &CurveClass, target: &TargetModel) -> Result<TautClass<CurveClass>> {
    compute_p_constant(&DRRequest::new(g, a.to_vec(), beta.clone(), target.clone(), g as usize)?)
}

/// Prestable graphs with integer vertex degrees that arise from the stable
/// graphs of given data, together with a modulus threshold.
#[derive(Clone, Debug)]
pub struct ZContext {
    pub g: u32,
    pub n: usize,
    pub graphs: Vec<ZGraph>,
    pub r_min: i64,
}

impl ZContext {
    /// Degree graphs `d(v) = ∫_{β(v)} c1(S) - Σ_{i at v} a_i` of all stable
    /// graphs with at most `max_edges` edges, one per isomorphism class.
    pub fn from_stable(
        g: u32,
        a: &[i64],
        beta: &CurveClass,
        target: &TargetModel,
        max_edges: usize,
    ) -> Result<Self> {
        let req = DRRequest::new(g, a.to_vec(), beta.clone(), target.clone(), max_edges)?;
        let mut unique = BTreeMap::new();
        for graph in req.graphs() {
            let z = graph.degree_graph(a, target);
            let lab = canonical_labeling(z.num_vertices(), &z.legs, &z.edges, &z.plain_colors());
            unique.entry(lab.code).or_insert_with(|| z.relabeled(&lab.vertex_perm, &lab.edge_order));
        }
        Ok(ZContext { g, n: a.len(), graphs: unique.into_values().collect(), r_min: req.default_r_min()? })
    }
}

/// Constant term in `r` of the twisted graph sum with vertex factor
/// `exp(-η/2)` and no leg factor, in degree `k`.
pub fn chiodo_constant_class(ctx: &ZContext, k: usize) -> Result<TautClass<i64>> {
    let parts: Vec<Vec<(DecoratedGraph<i64>, Rational)>> = ctx
        .graphs
        .par_iter()
        .map(|graph| {
            let terms = kernel(graph, None, false, k);
            if terms.is_empty() {
                return Ok(Vec::new());
            }
            let problem = WeightingProblem::from_twisted(graph)?;
            let mut ms: Vec<Vec<u32>> = terms.iter().map(|t| t.m.clone()).collect();
            ms.sort();
            ms.dedup();
            let name = || graph.to_json().to_string();
            let fits = constant_terms(&problem, &ms, ctx.r_min, &name, &mut 0)?;
            let constants: BTreeMap<&Vec<u32>, Rational> =
                ms.iter().zip(&fits).map(|(m, (p, _, _))| (m, p.constant_term())).collect();
            let aut = automorphisms(graph);
            Ok(terms
                .into_iter()
                .map(|t| {
                    let c = t.coeff * &constants[&t.m] / &aut;
                    (DecoratedGraph::new(graph.clone(), t.decoration), c)
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    TautClass::normalize(Ambient::twisted(ctx.g, ctx.n), parts.into_iter().flatten())
}

/// Polynomial in `p, ψ, ψ'` with exponents `(p, ψ, ψ')`.
type Poly3 = BTreeMap<(u32, u32, u32), Rational>;

fn poly_mul(a: &Poly3, b: &Poly3, psi_trunc: u32) -> Poly3 {
    let mut out = Poly3::new();
    for (&(p1, x1, y1), c1) in a {
        for (&(p2, x2, y2), c2) in b {
            if x1 + x2 + y1 + y2 > psi_trunc {
                continue;
            }
            *out.entry((p1 + p2, x1 + x2, y1 + y2)).or_insert_with(Rational::zero) += c1 * c2;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrrCheck {
    pub name: String,
    pub k: u32,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrrReport {
    pub k_max: u32,
    pub psi_truncation: u32,
    pub checks: Vec<GrrCheck>,
}

impl GrrReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Checks that exponentiating the single-edge term `p/2` of the first Chern
/// character, with self-intersection `-(ψ + ψ')` on the shared edge,
/// reproduces the edge factor used by the graph sum, in powers `p^k`, `k ≤ k_max`.
/// Also checks the alternating-sum identity and the lowest `r`-term of the
/// Bernoulli-polynomial edge coefficient. `flip_sign` replaces the excess
/// factor by `+(ψ + ψ')` as a negative control.
pub fn verify_grr_exponentiation(k_max: u32, psi_truncation: u32, flip_sign: bool) -> GrrReport {
    let mut checks = Vec::new();
    let sign = if flip_sign { rat(1) } else { rat(-1) };
    let x: Poly3 = [((1, 0, 0), frac(1, 2))].into_iter().collect();
    let excess: Poly3 = [((0, 1, 0), sign.clone()), ((0, 0, 1), sign)].into_iter().collect();
    // Σ_n X^n (±Y)^{n-1} / n!
    let mut lhs = Poly3::new();
    let mut power = x.clone();
    for n in 1..=k_max {
        for (key, c) in &power {
            *lhs.entry(*key).or_insert_with(Rational::zero) += c / Rational::from_integer(factorial(n as u64));
        }
        power = poly_mul(&poly_mul(&power, &excess, psi_truncation), &x, psi_truncation);
    }
    lhs.retain(|_, c| !c.is_zero());
    for k in 1..=k_max {
        let got: Poly3 = lhs.iter().filter(|(key, _)| key.0 == k).map(|(key, c)| (*key, c.clone())).collect();
        // p^k sits in ψ-degree k - 1, beyond the truncation it is absent
        let want: Poly3 = if k - 1 <= psi_truncation {
            (0..k).map(|i| ((k, i, k - 1 - i), edge_factor_coefficient(k, i))).collect()
        } else {
            Poly3::new()
        };
        checks.push(GrrCheck { name: "edge factor".into(), k, passed: got == want });
    }
    // Σ_{i+j=k-1} (-1)^i ψ^i ψ'^j · (ψ + ψ') = ψ'^k - (-ψ)^k
    for k in 1..=k_max.min(psi_truncation) {
        let alt: Poly3 = (0..k).map(|i| ((0, i, k - 1 - i), rat(if i % 2 == 0 { 1 } else { -1 }))).collect();
        let plus: Poly3 = [((0, 1, 0), rat(1)), ((0, 0, 1), rat(1))].into_iter().collect();
        let got = poly_mul(&alt, &plus, psi_truncation);
        let mut want: Poly3 = [((0, 0, k), rat(1))].into_iter().collect();
        *want.entry((0, k, 0)).or_insert_with(Rational::zero) -= if k % 2 == 0 { rat(1) } else { rat(-1) };
        want.retain(|_, c| !c.is_zero());
        checks.push(GrrCheck { name: "alternating sum".into(), k, passed: got == want });
    }
    // r B_{k+1}(tw/r) has lowest r-term r^{-k} tw^{k+1}: B_{k+1} is monic of degree k+1
    for k in 1..=k_max {
        let samples: Vec<(i64, Rational)> = (0..=(k as i64 + 3))
            .map(|x| (x, crate::math::bernoulli_polynomial(k as usize + 1, &rat(x))))
            .collect();
        let passed = interpolate_polynomial(&samples, k as usize + 1)
            .map(|p| p.degree() == Some(k as usize + 1) && p.coeff(k as usize + 1) == rat(1))
            .unwrap_or(false);
        checks.push(GrrCheck { name: "bernoulli lowest term".into(), k, passed });
    }
    GrrReport { k_max, psi_truncation, checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Vertex;

    #[test]
    fn edge_series_by_independent_expansion() {
        // (1 - e^{-pY/2})/Y = Σ_m (-1)^{m-1} (p/2)^m Y^{m-1} / m!, expanded by hand to m = 2
        assert_eq!(edge_factor_coefficient(1, 0), frac(1, 2));
        assert_eq!(edge_factor_coefficient(2, 0), frac(-1, 8));
        assert_eq!(edge_factor_coefficient(2, 1), frac(-1, 8));
        assert_eq!(edge_factor_coefficient(3, 1), frac(2, 48));
    }

    #[test]
    fn degree_zero_is_fundamental() {
        let t = TargetModel::point();
        let req = DRRequest::new(1, vec![1, -1], CurveClass::zero(0), t.clone(), 0).unwrap();
        let amb = req.ambient();
        assert_eq!(compute_p_constant(&req).unwrap(), TautClass::fundamental(amb.clone()));
        assert_eq!(compute_p_fixed_r(&req, 5).unwrap(), TautClass::fundamental(amb));
        let g0 = compute_dr(0, &[1, 1, -2], &CurveClass::zero(0), &t).unwrap();
        assert_eq!(g0.len(), 1);
    }

    #[test]
    fn incompatible_request() {
        let err = DRRequest::new(1, vec![1], CurveClass::zero(0), TargetModel::point(), 1).unwrap_err();
        assert!(err.to_string().contains("sum of A must equal pairing"));
    }

    #[test]
    fn genus_one_leg_terms() {
        // the smooth-graph ψ_1 coefficient is a_1^2/2
        let t = TargetModel::point();
        let dr = compute_dr(1, &[2, -2], &CurveClass::zero(0), &t).unwrap();
        let g = Graph::single_vertex(1, CurveClass::zero(0), 2);
        let mut d = Decoration::trivial(&g);
        d.legs[0].psi = 1;
        assert_eq!(dr.coefficient(&DecoratedGraph::new(g, d)), rat(2));
    }

    #[test]
    fn fixed_r_contribution_single_edge() {
        let t = TargetModel::point();
        let v = Vertex { genus: 0, label: CurveClass::zero(0) };
        let g = Graph { vertices: vec![v.clone(), v], legs: vec![0, 0, 1, 1], edges: vec![[0, 1]] };
        let a = [1, 2, -1, -2];
        let w = WeightingProblem::from_stable(&g, &a, &t).unwrap().enumerate(7).remove(0);
        let p = w.edges[0][0] * w.edges[0][1];
        let c = graph_contribution_fixed_r(&g, &w, &a, &t, 1).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.terms().next().unwrap().1, &frac(p, 2));
    }

    #[test]
    fn grr_identity() {
        assert!(verify_grr_exponentiation(1, 1, false).passed());
        assert!(verify_grr_exponentiation(8, 8, false).passed());
        assert!(!verify_grr_exponentiation(8, 8, true).passed());
    }

    #[test]
    fn chiodo_pullback_matches_constant_term() {
        let cases = [
            (TargetModel::point(), CurveClass::zero(0), vec![1, -1]),
            (TargetModel::point(), CurveClass::zero(0), vec![2, -2]),
            (TargetModel::free(vec![0]), CurveClass(vec![1]), vec![1, -1]),
            (TargetModel::free(vec![1]), CurveClass(vec![1]), vec![2, -1]),
        ];
        for (t, beta, a) in cases {
            for k in 0..=1 {
                let ctx = ZContext::from_stable(1, &a, &beta, &t, k).unwrap();
                let pulled = crate::strata::pullback_piz(&chiodo_constant_class(&ctx, k).unwrap(), &a, &beta, &t).unwrap();
                let req = DRRequest::new(1, a.clone(), beta.clone(), t.clone(), k).unwrap();
                assert_eq!(pulled, compute_p_constant(&req).unwrap(), "{a:?} {beta:?} k={k}");
            }
        }
    }
}
