//! Compares the graph sum with the closed form for a resolved A_2 surface.
use drx::aell::{positive_roots, reduced_dr_invariant_closed, reduced_dr_invariant_graphsum, AellData};

fn main() -> drx::Result<()> {
    let a = [3, -1, -2];
    for alpha in positive_roots(2) {
        let data = AellData::new(2, alpha, vec![0, 0])?;
        let omegas = vec![data.simple_root_dual(0), data.simple_root_dual(1), data.simple_root_dual(1)];
        for g in 0..=3 {
            let sum = reduced_dr_invariant_graphsum(&data, g, 1, &a, &omegas)?;
            let closed = reduced_dr_invariant_closed(&data, g, 1, &a, &omegas)?;
            assert_eq!(sum, closed);
            println!("alpha = {:?}, g = {g}: {closed}", data.alpha);
        }
    }
    Ok(())
}
