//! Weightings mod r of a two-loop graph and a polynomial fit of their sum.
use drx::math::rat;
use drx::weighting::{degree_bound_for, WeightIntegrand, WeightingProblem};
use drx::{CurveClass, Graph, TargetModel, Vertex};

fn main() -> drx::Result<()> {
    let v = |genus| Vertex { genus, label: CurveClass::zero(0) };
    // two vertices joined by three edges
    let graph = Graph { vertices: vec![v(0), v(0)], legs: vec![0, 1], edges: vec![[0, 1]; 3] };
    let a = [2, -2];
    let problem = WeightingProblem::from_stable(&graph, &a, &TargetModel::point())?;
    for r in [2, 3, 5] {
        println!("r = {r}: {} weightings", problem.enumerate(r).len());
    }
    let f = WeightIntegrand::edge_products(&[1, 0, 0], rat(1), -(problem.first_betti() as i32));
    let bound = degree_bound_for(&f, problem.first_betti());
    let p = problem.polynomial(&f, 7, bound)?;
    println!("r^-2 sum of w(h)w(h') over the first edge: {p}");
    println!("constant term: {}", p.constant_term());
    Ok(())
}
