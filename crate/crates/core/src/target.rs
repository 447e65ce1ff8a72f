//! Abstract numerical stand-in for a target variety with a line bundle:
//! a lattice of curve classes, its effective cone, and the pairing with
//! `c1(S)`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TargetError {
    #[error("curve class {0} is not effective for this target")]
    NotEffective(CurveClass),
    #[error("curve class has {got} coordinates, target rank is {rank}")]
    RankMismatch { rank: usize, got: usize },
    #[error("invalid target descriptor: {0}")]
    BadDescriptor(String),
}

/// Integer coordinates of a class in the curve lattice.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CurveClass(pub Vec<i64>);

impl CurveClass {
    pub fn zero(rank: usize) -> Self {
        CurveClass(vec![0; rank])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn plus(&self, other: &CurveClass) -> CurveClass {
        CurveClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn minus(&self, other: &CurveClass) -> CurveClass {
        CurveClass(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scaled(&self, k: i64) -> CurveClass {
        CurveClass(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TargetKind {
    /// `X` is a point: rank 0, only the zero class.
    Point,
    /// Effective classes are the non-negative integer vectors.
    FreeMonoid,
    /// Resolved `A_ell` surface: nonzero effective classes are `d * alpha`, `d > 0`.
    RootLattice { ell: usize, alpha: Vec<i64> },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TargetModel {
    kind: TargetKind,
    c1s: Vec<i64>,
}

impl TargetModel {
    pub fn point() -> Self {
        TargetModel { kind: TargetKind::Point, c1s: Vec::new() }
    }

    pub fn free(c1s: Vec<i64>) -> Self {
        TargetModel { kind: TargetKind::FreeMonoid, c1s }
    }

    /// `A_ell` target whose effective classes are the multiples of `alpha`.
    pub fn a_ell(ell: usize, alpha: Vec<i64>, c1s: Vec<i64>) -> Result<Self, TargetError> {
        if alpha.len() != ell || c1s.len() != ell {
            return Err(TargetError::BadDescriptor(format!(
                "alpha and c1S must have length ell = {ell}"
            )));
        }
        if alpha.iter().all(|&x| x == 0) || alpha.iter().any(|&x| x < 0) {
            return Err(TargetError::BadDescriptor("alpha must be a nonzero positive class".into()));
        }
        Ok(TargetModel { kind: TargetKind::RootLattice { ell, alpha }, c1s })
    }

    pub fn kind(&self) -> &TargetKind {
        &self.kind
    }

    pub fn rank(&self) -> usize {
        self.c1s.len()
    }

    pub fn c1s(&self) -> &[i64] {
        &self.c1s
    }

    pub fn is_point(&self) -> bool {
        matches!(self.kind, TargetKind::Point)
    }

    pub fn zero_class(&self) -> CurveClass {
        CurveClass::zero(self.rank())
    }

    /// Multiple `d` with `beta = d * alpha`, for root-lattice targets.
    fn root_multiple(alpha: &[i64], beta: &CurveClass) -> Option<i64> {
        let (i, a) = alpha.iter().enumerate().find(|(_, &a)| a != 0)?;
        let d = beta.0[i] / a;
        (beta.0[i] % a == 0 && alpha.iter().zip(&beta.0).all(|(a, b)| a * d == *b)).then_some(d)
    }

    pub fn is_effective(&self, beta: &CurveClass) -> bool {
        if beta.rank() != self.rank() {
            return false;
        }
        match &self.kind {
            TargetKind::Point => true,
            TargetKind::FreeMonoid => beta.0.iter().all(|&x| x >= 0),
            TargetKind::RootLattice { alpha, .. } => {
                Self::root_multiple(alpha, beta).is_some_and(|d| d >= 0)
            }
        }
    }

    fn check(&self, beta: &CurveClass) -> Result<(), TargetError> {
        if beta.rank() != self.rank() {
            return Err(TargetError::RankMismatch { rank: self.rank(), got: beta.rank() });
        }
        if !self.is_effective(beta) {
            return Err(TargetError::NotEffective(beta.clone()));
        }
        Ok(())
    }

    /// `∫_β c1(S)`.
    pub fn pair_c1s(&self, beta: &CurveClass) -> Result<i64, TargetError> {
        self.check(beta)?;
        Ok(self.pairing_unchecked(beta))
    }

    pub(crate) fn pairing_unchecked(&self, beta: &CurveClass) -> i64 {
        beta.0.iter().zip(&self.c1s).map(|(a, b)| a * b).sum()
    }

    /// Effective classes `β'` with `β - β'` effective, in lexicographic order.
    pub fn effective_summands(&self, beta: &CurveClass) -> Result<Vec<CurveClass>, TargetError> {
        self.check(beta)?;
        Ok(self
            .effective_splittings(beta, 2)?
            .into_iter()
            .map(|mut parts| parts.swap_remove(0))
            .collect())
    }

    /// All ordered `parts`-tuples of effective classes summing to `beta`,
    /// lexicographic in the first part, then the second, and so on.
    pub fn effective_splittings(
        &self,
        beta: &CurveClass,
        parts: usize,
    ) -> Result<Vec<Vec<CurveClass>>, TargetError> {
        self.check(beta)?;
        assert!(parts > 0, "a splitting needs at least one part");
        match &self.kind {
            TargetKind::Point => Ok(vec![vec![CurveClass::zero(0); parts]]),
            TargetKind::FreeMonoid => {
                let mut out = Vec::new();
                split_vectors(&beta.0, parts, &mut Vec::new(), &mut out);
                Ok(out)
            }
            TargetKind::RootLattice { alpha, .. } => {
                let d = Self::root_multiple(alpha, beta).expect("checked effective");
                let alpha = CurveClass(alpha.clone());
                let mut out = Vec::new();
                split_vectors(&[d], parts, &mut Vec::new(), &mut out);
                Ok(out
                    .into_iter()
                    .map(|tuple| tuple.into_iter().map(|m| alpha.scaled(m.0[0])).collect())
                    .collect())
            }
        }
    }

    /// Largest `|∫_{β'} c1(S)|` over effective summands `β'` of `β`.
    pub fn summand_bound_b(&self, beta: &CurveClass) -> Result<i64, TargetError> {
        Ok(self
            .effective_summands(beta)?
            .iter()
            .map(|b| self.pairing_unchecked(b).abs())
            .max()
            .unwrap_or(0))
    }

    /// Reads a descriptor of the form
    /// `{"kind": "point" | "free", "rank": n, "c1S": [...]}` or
    /// `{"kind": "a_ell", "ell": l, "alpha": [...], "c1S": [...]}`.
    pub fn from_json(value: &serde_json::Value) -> Result<Self, TargetError> {
        let desc: Descriptor = serde_json::from_value(value.clone())
            .map_err(|e| TargetError::BadDescriptor(e.to_string()))?;
        match desc.kind.as_str() {
            "point" => {
                if desc.rank.unwrap_or(0) != 0 || desc.c1s.as_ref().is_some_and(|c| !c.is_empty()) {
                    return Err(TargetError::BadDescriptor("point target has rank 0".into()));
                }
                Ok(Self::point())
            }
            "free" => {
                let c1s = desc.c1s.ok_or_else(|| TargetError::BadDescriptor("missing c1S".into()))?;
                if let Some(rank) = desc.rank {
                    if rank != c1s.len() {
                        return Err(TargetError::BadDescriptor(format!(
                            "rank {rank} but c1S has {} entries",
                            c1s.len()
                        )));
                    }
                }
                Ok(Self::free(c1s))
            }
            "a_ell" => {
                let ell = desc.ell.ok_or_else(|| TargetError::BadDescriptor("missing ell".into()))?;
                let alpha =
                    desc.alpha.ok_or_else(|| TargetError::BadDescriptor("missing alpha".into()))?;
                let c1s = desc.c1s.unwrap_or_else(|| vec![0; ell]);
                Self::a_ell(ell, alpha, c1s)
            }
            other => Err(TargetError::BadDescriptor(format!("unknown kind {other:?}"))),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match &self.kind {
            TargetKind::Point => serde_json::json!({"kind": "point", "rank": 0, "c1S": []}),
            TargetKind::FreeMonoid => {
                serde_json::json!({"kind": "free", "rank": self.rank(), "c1S": self.c1s})
            }
            TargetKind::RootLattice { ell, alpha } => {
                serde_json::json!({"kind": "a_ell", "ell": ell, "alpha": alpha, "c1S": self.c1s})
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Descriptor {
    kind: String,
    rank: Option<usize>,
    ell: Option<usize>,
    alpha: Option<Vec<i64>>,
    #[serde(rename = "c1S")]
    c1s: Option<Vec<i64>>,
}

/// Ordered compositions of a non-negative vector into `parts` non-negative vectors.
fn split_vectors(
    total: &[i64],
    parts: usize,
    prefix: &mut Vec<CurveClass>,
    out: &mut Vec<Vec<CurveClass>>,
) {
    if parts == 1 {
        prefix.push(CurveClass(total.to_vec()));
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    let mut current = vec![0i64; total.len()];
    loop {
        prefix.push(CurveClass(current.clone()));
        let rest: Vec<i64> = total.iter().zip(&current).map(|(t, c)| t - c).collect();
        split_vectors(&rest, parts - 1, prefix, out);
        prefix.pop();
        // odometer, last coordinate fastest
        let mut k = total.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if current[k] < total[k] {
                current[k] += 1;
                for c in current.iter_mut().skip(k + 1) {
                    *c = 0;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cc(v: &[i64]) -> CurveClass {
        CurveClass(v.to_vec())
    }

    #[test]
    fn pairings() {
        assert_eq!(TargetModel::point().pair_c1s(&cc(&[])).unwrap(), 0);
        assert_eq!(TargetModel::free(vec![3]).pair_c1s(&cc(&[2])).unwrap(), 6);
        let a2 = TargetModel::a_ell(2, vec![1, 1], vec![0, 0]).unwrap();
        assert_eq!(a2.pair_c1s(&cc(&[2, 2])).unwrap(), 0);
        assert!(matches!(
            TargetModel::free(vec![1]).pair_c1s(&cc(&[-1])),
            Err(TargetError::NotEffective(_))
        ));
        assert!(a2.pair_c1s(&cc(&[1, 0])).is_err());
    }

    #[test]
    fn splittings() {
        assert_eq!(
            TargetModel::point().effective_splittings(&cc(&[]), 3).unwrap(),
            vec![vec![cc(&[]), cc(&[]), cc(&[])]]
        );
        assert_eq!(
            TargetModel::free(vec![1]).effective_splittings(&cc(&[2]), 2).unwrap(),
            vec![vec![cc(&[0]), cc(&[2])], vec![cc(&[1]), cc(&[1])], vec![cc(&[2]), cc(&[0])]]
        );
        let a1 = TargetModel::a_ell(1, vec![1], vec![0]).unwrap();
        assert_eq!(
            a1.effective_splittings(&cc(&[2]), 2).unwrap(),
            vec![vec![cc(&[0]), cc(&[2])], vec![cc(&[1]), cc(&[1])], vec![cc(&[2]), cc(&[0])]]
        );
        let free2 = TargetModel::free(vec![1, 2]);
        assert_eq!(free2.effective_splittings(&cc(&[1, 1]), 2).unwrap().len(), 4);
    }

    #[test]
    fn summand_bounds() {
        assert_eq!(TargetModel::point().summand_bound_b(&cc(&[])).unwrap(), 0);
        assert_eq!(TargetModel::free(vec![3]).summand_bound_b(&cc(&[2])).unwrap(), 6);
        assert_eq!(TargetModel::free(vec![-2]).summand_bound_b(&cc(&[1])).unwrap(), 2);
    }

    #[test]
    fn descriptors_round_trip() {
        for t in [
            TargetModel::point(),
            TargetModel::free(vec![1, -2]),
            TargetModel::a_ell(2, vec![1, 1], vec![0, 1]).unwrap(),
        ] {
            assert_eq!(TargetModel::from_json(&t.to_json()).unwrap(), t);
        }
        let bad = serde_json::json!({"kind": "free", "rank": 2, "c1S": [1]});
        assert!(TargetModel::from_json(&bad).is_err());
        let unknown = serde_json::json!({"kind": "torus"});
        assert!(TargetModel::from_json(&unknown).is_err());
    }

    proptest::proptest! {
        #[test]
        fn splitting_refines_associatively(b0 in 0i64..4, b1 in 0i64..3, k in 1usize..4) {
            let t = TargetModel::free(vec![1, -1]);
            let beta = cc(&[b0, b1]);
            let mut direct: Vec<_> = t.effective_splittings(&beta, k + 1).unwrap();
            let mut refined = Vec::new();
            for tuple in t.effective_splittings(&beta, k).unwrap() {
                for pair in t.effective_splittings(&tuple[0], 2).unwrap() {
                    let mut v = pair.clone();
                    v.extend(tuple[1..].iter().cloned());
                    refined.push(v);
                }
            }
            direct.sort();
            refined.sort();
            proptest::prop_assert_eq!(direct, refined.clone());
            for parts in refined {
                let total: i64 = parts.iter().map(|p| t.pair_c1s(p).unwrap()).sum();
                proptest::prop_assert_eq!(total, t.pair_c1s(&beta).unwrap());
            }
        }
    }
}
