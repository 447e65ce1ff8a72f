//! Canonical labelling by colour refinement followed by an exhaustive search
//! over vertex orders compatible with the refined cells.

use super::{Graph, VertexLabel};

/// Extra data attached to the pieces of a graph; all of it must be preserved
/// by an isomorphism.
#[derive(Clone, Debug, Default)]
pub struct Colors {
    pub vertex: Vec<Vec<i64>>,
    pub leg: Vec<Vec<i64>>,
    pub half: Vec<[Vec<i64>; 2]>,
    pub edge: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub code: Vec<i64>,
    pub automorphisms: u64,
}

impl CanonicalForm {
    pub fn bytes(&self) -> Vec<u8> {
        self.code.iter().flat_map(|x| x.to_be_bytes()).collect()
    }
}

/// A canonical relabelling: `vertex_perm[old] = new`, and the new edge list
/// is `edge_order[k] = (old edge, flipped)`.
#[derive(Clone, Debug)]
pub struct Labeling {
    pub vertex_perm: Vec<usize>,
    pub edge_order: Vec<(usize, bool)>,
    pub code: Vec<i64>,
    pub automorphisms: u64,
}

pub fn canonicalize<L: VertexLabel>(graph: &Graph<L>) -> CanonicalForm {
    let lab = canonical_labeling(graph.num_vertices(), &graph.legs, &graph.edges, &graph.plain_colors());
    CanonicalForm { code: lab.code, automorphisms: lab.automorphisms }
}

fn push_prefixed(out: &mut Vec<i64>, items: &[i64]) {
    out.push(items.len() as i64);
    out.extend_from_slice(items);
}

fn ranks(invariants: &[Vec<i64>]) -> Vec<usize> {
    let mut sorted: Vec<&Vec<i64>> = invariants.iter().collect();
    sorted.sort();
    sorted.dedup();
    invariants.iter().map(|x| sorted.binary_search(&x).expect("present")).collect()
}

fn refine(nv: usize, legs: &[usize], edges: &[[usize; 2]], colors: &Colors) -> Vec<usize> {
    let mut inv: Vec<Vec<i64>> = (0..nv)
        .map(|v| {
            let mut x = Vec::new();
            push_prefixed(&mut x, &colors.vertex[v]);
            for (i, &u) in legs.iter().enumerate() {
                if u == v {
                    x.push(i as i64);
                    push_prefixed(&mut x, &colors.leg[i]);
                }
            }
            x.push(-1);
            x.push(edges.iter().map(|e| e.iter().filter(|&&u| u == v).count() as i64).sum());
            x
        })
        .collect();
    let mut rank = ranks(&inv);
    let mut cells = rank.iter().max().map_or(0, |m| m + 1);
    loop {
        inv = (0..nv)
            .map(|v| {
                let mut around: Vec<Vec<i64>> = Vec::new();
                for (e, ends) in edges.iter().enumerate() {
                    for side in 0..2 {
                        if ends[side] == v {
                            let mut t = vec![rank[ends[1 - side]] as i64];
                            push_prefixed(&mut t, &colors.half[e][side]);
                            push_prefixed(&mut t, &colors.half[e][1 - side]);
                            push_prefixed(&mut t, &colors.edge[e]);
                            around.push(t);
                        }
                    }
                }
                around.sort();
                let mut x = vec![rank[v] as i64];
                for t in around {
                    push_prefixed(&mut x, &t);
                }
                x
            })
            .collect();
        rank = ranks(&inv);
        let new_cells = rank.iter().max().map_or(0, |m| m + 1);
        if new_cells == cells {
            return rank;
        }
        cells = new_cells;
    }
}

struct Encoded {
    code: Vec<i64>,
    order: Vec<(usize, bool)>,
    edge_keys: Vec<Vec<i64>>,
    symmetric: usize,
}

fn encode(perm: &[usize], legs: &[usize], edges: &[[usize; 2]], colors: &Colors) -> Encoded {
    let nv = perm.len();
    let mut code = vec![nv as i64, legs.len() as i64, edges.len() as i64];
    let mut by_new = vec![0; nv];
    for (old, &new) in perm.iter().enumerate() {
        by_new[new] = old;
    }
    for &old in &by_new {
        push_prefixed(&mut code, &colors.vertex[old]);
    }
    for (i, &v) in legs.iter().enumerate() {
        code.push(perm[v] as i64);
        push_prefixed(&mut code, &colors.leg[i]);
    }
    let mut symmetric = 0;
    let mut keyed: Vec<(Vec<i64>, usize, bool)> = edges
        .iter()
        .enumerate()
        .map(|(e, ends)| {
            let end = |side: usize| {
                let mut x = vec![perm[ends[side]] as i64];
                push_prefixed(&mut x, &colors.half[e][side]);
                x
            };
            let (e0, e1) = (end(0), end(1));
            let flipped = e1 < e0;
            if e0 == e1 {
                symmetric += 1;
            }
            let (lo, hi) = if flipped { (e1, e0) } else { (e0, e1) };
            let mut key = lo;
            key.extend(hi);
            push_prefixed(&mut key, &colors.edge[e]);
            (key, e, flipped)
        })
        .collect();
    keyed.sort();
    for (key, _, _) in &keyed {
        push_prefixed(&mut code, key);
    }
    Encoded {
        code,
        order: keyed.iter().map(|&(_, e, f)| (e, f)).collect(),
        edge_keys: keyed.into_iter().map(|(k, _, _)| k).collect(),
        symmetric,
    }
}

/// Canonical relabelling of a coloured graph together with its automorphism count.
pub fn canonical_labeling(
    nv: usize,
    legs: &[usize],
    edges: &[[usize; 2]],
    colors: &Colors,
) -> Labeling {
    let rank = refine(nv, legs, edges, colors);
    let ncells = rank.iter().max().map_or(0, |m| m + 1);
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); ncells];
    for v in 0..nv {
        cells[rank[v]].push(v);
    }
    let mut offsets = Vec::with_capacity(ncells);
    let mut acc = 0;
    for c in &cells {
        offsets.push(acc);
        acc += c.len();
    }

    let mut best: Option<(Encoded, Vec<usize>)> = None;
    let mut ties = 0u64;
    let mut perm = vec![0usize; nv];
    let mut visit = |perm: &[usize]| {
        let enc = encode(perm, legs, edges, colors);
        match &best {
            Some((b, _)) if enc.code > b.code => {}
            Some((b, _)) if enc.code == b.code => ties += 1,
            _ => {
                best = Some((enc, perm.to_vec()));
                ties = 1;
            }
        }
    };
    assign_cells(&cells, &offsets, 0, &mut vec![false; nv], &mut perm, 0, &mut visit);

    let (enc, vertex_perm) = best.expect("at least one vertex order");
    let mut automorphisms = ties << enc.symmetric;
    let mut run = 1u64;
    for k in 1..=enc.edge_keys.len() {
        if k < enc.edge_keys.len() && enc.edge_keys[k] == enc.edge_keys[k - 1] {
            run += 1;
            automorphisms *= run;
        } else {
            run = 1;
        }
    }
    Labeling { vertex_perm, edge_order: enc.order, code: enc.code, automorphisms }
}

/// Enumerates the vertex orders sending cell `c` onto positions
/// `offsets[c]..offsets[c] + |cell|`.
fn assign_cells(
    cells: &[Vec<usize>],
    offsets: &[usize],
    cell: usize,
    taken: &mut Vec<bool>,
    perm: &mut Vec<usize>,
    filled: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    if cell == cells.len() {
        visit(perm);
        return;
    }
    let members = &cells[cell];
    if filled == members.len() {
        assign_cells(cells, offsets, cell + 1, taken, perm, 0, visit);
        return;
    }
    for &v in members {
        if !taken[v] {
            taken[v] = true;
            perm[v] = offsets[cell] + filled;
            assign_cells(cells, offsets, cell, taken, perm, filled + 1, visit);
            taken[v] = false;
        }
    }
}
