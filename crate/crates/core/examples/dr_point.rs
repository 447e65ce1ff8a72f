//! Double ramification cycles of curves mapping to a point.
use drx::pixton::compute_dr;
use drx::{CurveClass, TargetModel};

fn main() -> drx::Result<()> {
    for (g, a) in [(1, vec![1, -1]), (1, vec![2, -2]), (2, vec![1, -1])] {
        let dr = compute_dr(g, &a, &CurveClass::zero(0), &TargetModel::point())?;
        println!("g = {g}, A = {a:?}: {} terms", dr.len());
        print!("{}", dr.render_text());
    }
    Ok(())
}
