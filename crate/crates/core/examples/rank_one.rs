//! A double ramification cycle for maps to a rank-one target of degree one.
use drx::pixton::compute_dr;
use drx::{CurveClass, TargetModel};

fn main() -> drx::Result<()> {
    let target = TargetModel::free(vec![1]);
    let dr = compute_dr(1, &[2, -1], &CurveClass(vec![1]), &target)?;
    print!("{}", dr.render_text());
    Ok(())
}
