//! Constant terms of Chiodo classes pulled back to stable maps, against the direct route.
use drx::pixton::{chiodo_constant_class, compute_p_constant, DRRequest, ZContext};
use drx::strata::pullback_piz;
use drx::{CurveClass, TargetModel};

fn main() -> drx::Result<()> {
    let target = TargetModel::free(vec![1]);
    let beta = CurveClass(vec![1]);
    let a = [2, -1];
    for k in 0..=1 {
        let ctx = ZContext::from_stable(1, &a, &beta, &target, k)?;
        let twisted = chiodo_constant_class(&ctx, k)?;
        let pulled = pullback_piz(&twisted, &a, &beta, &target)?;
        let direct = compute_p_constant(&DRRequest::new(1, a.to_vec(), beta.clone(), target.clone(), k)?)?;
        println!("degree {k}: {} twisted terms, pullback matches: {}", twisted.len(), pulled == direct);
    }
    Ok(())
}
