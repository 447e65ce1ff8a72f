//! A quick invariant suite behind `drx selftest`.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::aell::{reduced_dr_invariant_closed, reduced_dr_invariant_graphsum, AellData};
use crate::graph::enumerate_stable_graphs;
use crate::math::{factorial, series_exp, series_g, series_s, Rational};
use crate::pixton::{chiodo_constant_class, compute_dr, compute_p_constant, verify_grr_exponentiation, DRRequest, ZContext};
use crate::strata::{pullback_piz, Ambient, TautClass};
use crate::target::{CurveClass, TargetModel};
use crate::weighting::{WeightIntegrand, WeightingProblem};

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn to_json(&self) -> Value {
        json!({"name": self.name, "passed": self.passed, "detail": self.detail})
    }
}

fn check(name: &'static str, body: impl FnOnce() -> crate::Result<(bool, String)>) -> Check {
    match body() {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check { name, passed: false, detail: e.to_string() },
    }
}

pub fn run_selftest() -> Vec<Check> {
    let point = TargetModel::point();
    let zero = CurveClass::zero(0);
    vec![
        check("series", || {
            let ok = series_exp(&series_g(40))? == series_s(40);
            let sums = (0..=50u64).all(|n| {
                let lhs: Rational = (0..=n)
                    .map(|i| Rational::new(1.into(), factorial(2 * i + 1) * factorial(2 * (n - i) + 1)))
                    .sum();
                lhs == Rational::new(num_bigint::BigInt::from(2).pow(2 * n as u32 + 1), factorial(2 * n + 2))
            });
            Ok((ok && sums, "S = exp(G) to t^40; odd binomial sums to n = 50".into()))
        }),
        check("weighting counts", || {
            let mut graphs = 0;
            for g in 0..=1 {
                for n in 1..=3usize {
                    let a: Vec<i64> = (0..n).map(|i| if i == 0 { n as i64 - 1 } else { -1 }).collect();
                    for graph in enumerate_stable_graphs(g, n, &zero, &point, 3) {
                        let p = WeightingProblem::from_stable(&graph, &a, &point)?;
                        for r in [2, 3] {
                            if p.enumerate(r).len() as i64 != r.pow(p.first_betti() as u32) {
                                return Ok((false, format!("count mismatch at r = {r}")));
                            }
                            let f = WeightIntegrand::edge_products(&vec![1; p.num_edges()], Rational::one(), 0);
                            if p.sum_enum(&f, r) != p.sum_tree(&f, r) {
                                return Ok((false, format!("sum mismatch at r = {r}")));
                            }
                        }
                        graphs += 1;
                    }
                }
            }
            Ok((true, format!("{graphs} graphs")))
        }),
        check("grr", || {
            let ok = verify_grr_exponentiation(8, 8, false).passed() && !verify_grr_exponentiation(8, 8, true).passed();
            Ok((ok, "k_max = 8 with negative control".into()))
        }),
        check("degree zero", || {
            let mut ok = true;
            for a in [vec![1, -1], vec![2, 1, -3], vec![0, 0]] {
                let req = DRRequest::new(2, a, zero.clone(), point.clone(), 0)?;
                ok &= compute_p_constant(&req)? == TautClass::fundamental(req.ambient());
            }
            let amb = Ambient::stable(0, 3, zero.clone(), point.clone());
            ok &= compute_dr(0, &[1, 1, -2], &zero, &point)? == TautClass::fundamental(amb);
            Ok((ok, "fundamental class".into()))
        }),
        check("chiodo pullback", || {
            let a = [1, -1];
            let ctx = ZContext::from_stable(1, &a, &zero, &point, 1)?;
            let pulled = pullback_piz(&chiodo_constant_class(&ctx, 1)?, &a, &zero, &point)?;
            let direct = compute_p_constant(&DRRequest::new(1, a.to_vec(), zero.clone(), point.clone(), 1)?)?;
            Ok((pulled == direct, "g = 1, A = (1,-1)".into()))
        }),
        check("serialization", || {
            let dr = compute_dr(1, &[2, -2], &zero, &point)?;
            let back = TautClass::from_json(dr.ambient().clone(), &dr.to_json())?;
            Ok((back == dr, format!("{} terms", dr.len())))
        }),
        check("aell", || {
            let data = AellData::new(1, vec![1], vec![0])?;
            let mut cases = 0;
            for g in 0..=2 {
                for a in [vec![0], vec![1, -1], vec![2, -1, -1], vec![3, -2, 0, -1]] {
                    let w = vec![data.simple_root_dual(0); a.len()];
                    let x = reduced_dr_invariant_graphsum(&data, g, 2, &a, &w)?;
                    if x != reduced_dr_invariant_closed(&data, g, 2, &a, &w)? {
                        return Ok((false, format!("g = {g}, A = {a:?}")));
                    }
                    cases += usize::from(!x.is_zero());
                }
            }
            Ok((true, format!("{cases} nonzero values")))
        }),
    ]
}
