//! Counts stable graphs by number of edges.
use std::collections::BTreeMap;

use drx::graph::enumerate_stable_graphs;
use drx::{CurveClass, TargetModel};

fn main() {
    for (g, n) in [(1u32, 2usize), (2, 0), (2, 1), (2, 2)] {
        let graphs = enumerate_stable_graphs(g, n, &CurveClass::zero(0), &TargetModel::point(), 3 * g as usize + n - 3);
        let mut by_edges = BTreeMap::new();
        for graph in &graphs {
            *by_edges.entry(graph.num_edges()).or_insert(0) += 1;
        }
        println!("g = {g}, n = {n}: {} graphs {by_edges:?}", graphs.len());
    }
}
