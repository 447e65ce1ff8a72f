use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Ambient, DecoratedGraph, Decoration, EtaMonomial, TautClass};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::math::{binomial, Rational};
use crate::target::{CurveClass, TargetModel};

/// A multiplicative change to a decoration.
#[derive(Clone, Copy)]
enum Factor {
    Leg { leg: usize, psi: u32, xi: u32 },
    Eta { vertex: usize, ab: (u32, u32) },
}

fn apply(d: &mut Decoration, f: Factor) {
    match f {
        Factor::Leg { leg, psi, xi } => {
            d.legs[leg].psi += psi;
            d.legs[leg].xi += xi;
        }
        Factor::Eta { vertex, ab } => d.vertices[vertex] = d.vertices[vertex].times_factor(ab),
    }
}

/// Multiplies every term by the sum `Σ c · factor` over `options`.
fn expand(terms: Vec<(Decoration, Rational)>, options: &[(Rational, Factor)]) -> Vec<(Decoration, Rational)> {
    let mut out = Vec::with_capacity(terms.len() * options.len());
    for (d, c) in terms {
        for (oc, f) in options {
            if oc.is_zero() {
                continue;
            }
            let mut nd = d.clone();
            apply(&mut nd, *f);
            out.push((nd, c.clone() * oc));
        }
    }
    out
}

fn int(x: BigInt) -> Rational {
    Rational::from_integer(x)
}

/// Pulls a class on prestable graphs with vertex degrees back to target-valued
/// stable graphs of class `beta` with ramification data `a`.
pub fn pullback_piz(
    cls: &TautClass<i64>,
    a: &[i64],
    beta: &CurveClass,
    target: &TargetModel,
) -> Result<TautClass<CurveClass>> {
    let amb = cls.ambient();
    if a.len() != amb.n {
        return Err(Error::AmbientMismatch(format!("{} ramification values for {} markings", a.len(), amb.n)));
    }
    if amb.total != 0 {
        return Err(Error::AmbientMismatch("vertex degrees must sum to zero".into()));
    }
    if a.iter().sum::<i64>() != target.pair_c1s(beta)? {
        return Err(Error::Incompatible("sum of A must equal the pairing of beta with c1(S)".into()));
    }
    let mut out = TautClass::zero(Ambient::stable(amb.g, amb.n, beta.clone(), target.clone()));
    for (dg, coeff) in cls.terms() {
        let z = &dg.graph;
        let leg_sum: Vec<i64> = (0..z.num_vertices()).map(|v| z.legs_at(v).iter().map(|&i| a[i]).sum()).collect();
        for classes in target.effective_splittings(beta, z.num_vertices())? {
            let fits = classes
                .iter()
                .enumerate()
                .all(|(v, b)| target.pairing_unchecked(b) - leg_sum[v] == z.vertices[v].label);
            if !fits {
                continue;
            }
            let graph = Graph {
                vertices: z
                    .vertices
                    .iter()
                    .zip(&classes)
                    .map(|(v, b)| Vertex { genus: v.genus, label: b.clone() })
                    .collect(),
                legs: z.legs.clone(),
                edges: z.edges.clone(),
            };
            // an unstable component has no stable maps over it
            if (0..graph.num_vertices()).any(|v| !graph.vertex_is_stable(v)) {
                continue;
            }
            for (decoration, c) in substitute(&dg.decoration, &graph, a, coeff) {
                out.push(DecoratedGraph::new(graph.clone(), decoration), c)?;
            }
        }
    }
    Ok(out)
}

/// The `ξ_i` and `η_{0,b}` substitutions.
fn substitute(
    d: &Decoration,
    graph: &Graph<CurveClass>,
    a: &[i64],
    coeff: &Rational,
) -> Vec<(Decoration, Rational)> {
    let mut base = d.clone();
    let mut eta_0b = Vec::new();
    for (v, mono) in d.vertices.iter().enumerate() {
        let mut kept = EtaMonomial::one();
        for ((p, b), e) in mono.factors() {
            if p == 0 {
                eta_0b.extend(std::iter::repeat((v, b)).take(e as usize));
            } else {
                kept = kept.times(&EtaMonomial::eta(p, b, e));
            }
        }
        base.vertices[v] = kept;
    }
    for leg in &mut base.legs {
        leg.xi = 0;
    }
    let mut terms = vec![(base, coeff.clone())];
    // ξ_i ↦ ξ_i + a_i ψ_i on the original leg decorations
    for (i, leg) in d.legs.iter().enumerate() {
        let q = leg.xi;
        if q == 0 {
            continue;
        }
        let options: Vec<_> = (0..=q)
            .map(|j| {
                let c = int(binomial(q as u64, j as u64) * num_traits::pow(BigInt::from(a[i]), j as usize));
                (c, Factor::Leg { leg: i, psi: j, xi: q - j })
            })
            .collect();
        terms = expand(terms, &options);
    }
    // η_{0,b} ↦ η_{0,b} - Σ_{i at v} Σ_k C(b,k) a_i^k ψ_i^{k-1} ξ_i^{b-k}
    for (v, b) in eta_0b {
        let mut options = vec![(Rational::one(), Factor::Eta { vertex: v, ab: (0, b) })];
        for i in graph.legs_at(v) {
            for k in 1..=b {
                let c = -int(binomial(b as u64, k as u64) * num_traits::pow(BigInt::from(a[i]), k as usize));
                options.push((c, Factor::Leg { leg: i, psi: k - 1, xi: b - k }));
            }
        }
        terms = expand(terms, &options);
    }
    terms
}
