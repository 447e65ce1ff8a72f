use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{canonical_labeling, Graph, StableGraph, Vertex};
use crate::target::{CurveClass, TargetModel};

/// One representative per isomorphism class of stable graphs of genus `g`
/// with `n` legs, total class `beta` and at most `max_edges` edges, sorted by
/// canonical code. Each representative is in canonical labelling.
pub fn enumerate_stable_graphs(
    g: u32,
    n: usize,
    beta: &CurveClass,
    target: &TargetModel,
    max_edges: usize,
) -> Vec<StableGraph> {
    if !target.is_effective(beta) {
        return Vec::new();
    }
    let mut specs: Vec<(Vec<Vertex<CurveClass>>, usize)> = Vec::new();
    for e in 0..=max_edges {
        for nv in 1..=e + 1 {
            let h1 = (e + 1 - nv) as u32;
            if h1 > g {
                continue;
            }
            let splittings = target.effective_splittings(beta, nv).expect("beta is effective");
            for genera in compositions(g - h1, nv) {
                for classes in &splittings {
                    let verts: Vec<Vertex<CurveClass>> = genera
                        .iter()
                        .zip(classes)
                        .map(|(&genus, c)| Vertex { genus, label: c.clone() })
                        .collect();
                    if verts.windows(2).all(|w| w[0] <= w[1]) {
                        specs.push((verts, e));
                    }
                }
            }
        }
    }
    let found: Vec<(Vec<i64>, StableGraph)> = specs
        .par_iter()
        .flat_map_iter(|(verts, e)| gluings(verts, n, *e))
        .collect();
    let mut unique = BTreeMap::new();
    for (code, graph) in found {
        unique.entry(code).or_insert(graph);
    }
    unique.into_values().collect()
}

/// Ordered tuples of `parts` non-negative integers summing to `total`.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// All connected stable graphs on the given vertices with `n` legs and `e`
/// edges, in canonical labelling keyed by code.
fn gluings(verts: &[Vertex<CurveClass>], n: usize, e: usize) -> Vec<(Vec<i64>, StableGraph)> {
    let nv = verts.len();
    let pairs: Vec<[usize; 2]> =
        (0..nv).flat_map(|u| (u..nv).map(move |v| [u, v])).collect();
    let mut out: BTreeMap<Vec<i64>, StableGraph> = BTreeMap::new();
    let mut chosen = Vec::with_capacity(e);
    multisets(pairs.len(), e, 0, &mut chosen, &mut |idx| {
        let edges: Vec<[usize; 2]> = idx.iter().map(|&k| pairs[k]).collect();
        let mut valence = vec![0i64; nv];
        for &[u, v] in &edges {
            valence[u] += 1;
            valence[v] += 1;
        }
        // legs each vertex still needs to become stable
        let need: Vec<usize> = verts
            .iter()
            .zip(&valence)
            .map(|(v, &val)| {
                if v.label.is_zero() {
                    (3 - 2 * v.genus as i64 - val).max(0) as usize
                } else {
                    0
                }
            })
            .collect();
        if need.iter().sum::<usize>() > n {
            return;
        }
        let skeleton = Graph { vertices: verts.to_vec(), legs: Vec::new(), edges };
        if !skeleton.is_connected() {
            return;
        }
        let mut legs = vec![0usize; n];
        let mut count = vec![0usize; nv];
        count[0] = n;
        loop {
            if count.iter().zip(&need).all(|(c, k)| c >= k) {
                let graph = Graph { legs: legs.clone(), ..skeleton.clone() };
                let lab = canonical_labeling(nv, &graph.legs, &graph.edges, &graph.plain_colors());
                out.entry(lab.code)
                    .or_insert_with(|| graph.relabeled(&lab.vertex_perm, &lab.edge_order));
            }
            // next leg assignment in V^n
            let mut k = n;
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                count[legs[k]] -= 1;
                legs[k] += 1;
                if legs[k] < nv {
                    count[legs[k]] += 1;
                    break;
                }
                legs[k] = 0;
                count[0] += 1;
            }
        }
    });
    out.into_iter().collect()
}

/// Non-decreasing index sequences of length `size` from `0..m`.
fn multisets(m: usize, size: usize, start: usize, chosen: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if chosen.len() == size {
        f(chosen);
        return;
    }
    for k in start..m {
        chosen.push(k);
        multisets(m, size, k, chosen, f);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::canonicalize;

    #[test]
    fn small_counts() {
        let pt = TargetModel::point();
        let zero = CurveClass::zero(0);
        assert_eq!(enumerate_stable_graphs(0, 3, &zero, &pt, 3).len(), 1);
        assert_eq!(enumerate_stable_graphs(1, 1, &zero, &pt, 1).len(), 2);
        assert_eq!(enumerate_stable_graphs(2, 0, &zero, &pt, 3).len(), 7);
        assert_eq!(enumerate_stable_graphs(0, 2, &zero, &pt, 3).len(), 0);
    }

    #[test]
    fn output_is_canonical_and_valid() {
        let t = TargetModel::free(vec![1]);
        let beta = CurveClass(vec![2]);
        let graphs = enumerate_stable_graphs(1, 2, &beta, &t, 2);
        assert!(!graphs.is_empty());
        let mut codes: Vec<_> = graphs.iter().map(|g| canonicalize(g).code).collect();
        for (g, code) in graphs.iter().zip(&codes) {
            assert!(g.validate(1, 2, &beta, &t).is_ok());
            let lab = canonical_labeling(g.num_vertices(), &g.legs, &g.edges, &g.plain_colors());
            assert_eq!(&lab.code, code);
        }
        let len = codes.len();
        codes.dedup();
        assert_eq!(codes.len(), len);
    }
}
