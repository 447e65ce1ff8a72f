//! Products of decorated-graph classes, formally in 1/r and at r = 1.
use drx::graph::enumerate_stable_graphs;
use drx::math::rat;
use drx::strata::{product, Ambient, DecoratedGraph, Decoration, RMode, TautClass};
use drx::{CurveClass, TargetModel};

fn main() -> drx::Result<()> {
    let zero = CurveClass::zero(0);
    let amb = Ambient::stable(1, 2, zero.clone(), TargetModel::point());
    let one_edge: Vec<_> = enumerate_stable_graphs(1, 2, &zero, &TargetModel::point(), 1)
        .into_iter()
        .filter(|g| g.num_edges() == 1)
        .collect();
    let boundary = TautClass::normalize(
        amb.clone(),
        one_edge.iter().map(|g| (DecoratedGraph::undecorated(g.clone()), rat(1))),
    )?;
    let mut psi = Decoration::trivial(&drx::Graph::single_vertex(1, zero.clone(), 2));
    psi.legs[0].psi = 1;
    let psi1 = TautClass::normalize(amb, [(DecoratedGraph::new(drx::Graph::single_vertex(1, zero, 2), psi), rat(1))])?;
    let p = product(&boundary, &psi1, RMode::Formal, None)?;
    for (k, comp) in &p.components {
        println!("r^-{k}:");
        print!("{}", comp.render_text());
    }
    println!("at r = 1: {} terms", p.at_r_one().len());
    Ok(())
}
