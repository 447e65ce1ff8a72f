use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use super::{bernoulli_number, factorial, MathError, Rational};

/// Truncated power series `c_0 + c_1 t + ... + c_N t^N` with explicit order `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TSeries {
    coeffs: Vec<Rational>,
}

impl TSeries {
    pub fn zero(order: usize) -> Self {
        TSeries { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    /// Builds a series whose order is `coeffs.len() - 1`. Panics on empty input.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        TSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Result<Rational, MathError> {
        self.coeffs
            .get(k)
            .cloned()
            .ok_or(MathError::BeyondTruncation { index: k, order: self.order() })
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Rational::zero());
        TSeries { coeffs }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Substitutes `t -> a t`.
    pub fn rescale_variable(&self, a: &Rational) -> Self {
        let mut pow = Rational::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c * &pow);
            pow *= a;
        }
        TSeries { coeffs }
    }

    pub fn mul(&self, other: &TSeries) -> TSeries {
        let order = self.order().min(other.order());
        let mut coeffs = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                coeffs[i + j] += a * b;
            }
        }
        TSeries { coeffs }
    }

    pub fn pow(&self, k: u32) -> TSeries {
        (0..k).fold(TSeries::one(self.order()), |acc, _| acc.mul(self))
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<TSeries, MathError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(MathError::NotInvertible);
        }
        let inv0 = c0.recip();
        let mut out = vec![Rational::zero(); self.coeffs.len()];
        out[0] = inv0.clone();
        for n in 1..self.coeffs.len() {
            let mut acc = Rational::zero();
            for k in 1..=n {
                acc += &self.coeffs[k] * &out[n - k];
            }
            out[n] = -acc * &inv0;
        }
        Ok(TSeries { coeffs: out })
    }

    /// `exp(self)`; the constant term must vanish.
    pub fn exp(&self) -> Result<TSeries, MathError> {
        if !self.coeffs[0].is_zero() {
            return Err(MathError::NonNilpotentExponent(super::format_rational(&self.coeffs[0])));
        }
        // E' = F' E  =>  n e_n = sum_{k=1}^{n} k f_k e_{n-k}
        let mut out = vec![Rational::zero(); self.coeffs.len()];
        out[0] = Rational::one();
        for n in 1..self.coeffs.len() {
            let mut acc = Rational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += Rational::from_integer(k.into()) * &self.coeffs[k] * &out[n - k];
                }
            }
            out[n] = acc / Rational::from_integer(n.into());
        }
        Ok(TSeries { coeffs: out })
    }
}

impl Add for &TSeries {
    type Output = TSeries;
    fn add(self, rhs: &TSeries) -> TSeries {
        let order = self.order().min(rhs.order());
        TSeries { coeffs: (0..=order).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect() }
    }
}

impl Sub for &TSeries {
    type Output = TSeries;
    fn sub(self, rhs: &TSeries) -> TSeries {
        self + &(-rhs)
    }
}

impl Neg for &TSeries {
    type Output = TSeries;
    fn neg(self) -> TSeries {
        TSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

/// `sin(t/2)/(t/2) = sum_b (-1)^b t^{2b} / ((2b+1)! 4^b)` through `t^order`.
pub fn series_s(order: usize) -> TSeries {
    let mut s = TSeries::zero(order);
    for b in 0..=order / 2 {
        let denom = Rational::from_integer(factorial(2 * b as u64 + 1) * num_bigint::BigInt::from(4).pow(b as u32));
        let sign = if b % 2 == 0 { Rational::one() } else { -Rational::one() };
        s.coeffs[2 * b] = sign / denom;
    }
    s
}

/// `G(t) = sum_{c>=1} (-1)^c (B_{2c}/2c) t^{2c}/(2c)!` through `t^order`.
pub fn series_g(order: usize) -> TSeries {
    let mut s = TSeries::zero(order);
    for c in 1..=order / 2 {
        let two_c = 2 * c;
        let sign = if c % 2 == 0 { Rational::one() } else { -Rational::one() };
        s.coeffs[two_c] = sign * bernoulli_number(two_c)
            / Rational::from_integer((two_c as u64).into())
            / Rational::from_integer(factorial(two_c as u64));
    }
    s
}

pub fn series_exp(s: &TSeries) -> Result<TSeries, MathError> {
    s.exp()
}

pub fn series_mul(a: &TSeries, b: &TSeries) -> TSeries {
    a.mul(b)
}

pub fn series_coeff(s: &TSeries, k: usize) -> Result<Rational, MathError> {
    s.coeff(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{frac, rat};

    #[test]
    fn s_and_g_low_coefficients() {
        let s = series_s(10);
        assert_eq!(s.coeff(0).unwrap(), rat(1));
        assert_eq!(s.coeff(2).unwrap(), frac(-1, 24));
        assert_eq!(series_coeff(&s, 3).unwrap(), rat(0));
        let g = series_g(10);
        assert_eq!(g.coeff(2).unwrap(), frac(-1, 24));
        assert!(g.coeff(11).is_err());
    }

    #[test]
    fn exp_basics() {
        assert_eq!(series_exp(&TSeries::zero(5)).unwrap(), TSeries::one(5));
        let err = series_exp(&TSeries::one(3)).unwrap_err();
        assert!(err.to_string().contains("non-nilpotent exponent"));
        // exp(t) = sum t^k/k!
        let mut t = TSeries::zero(8);
        t.coeffs[1] = rat(1);
        let e = t.exp().unwrap();
        for k in 0..=8u64 {
            assert_eq!(e.coeff(k as usize).unwrap(), Rational::from_integer(factorial(k)).recip());
        }
    }

    #[test]
    fn s_is_exp_g() {
        for order in [0usize, 1, 2, 7, 20, 40] {
            assert_eq!(series_exp(&series_g(order)).unwrap(), series_s(order), "order {order}");
        }
    }

    #[test]
    fn inverse_round_trip() {
        let s = series_s(16);
        let prod = s.mul(&s.inverse().unwrap());
        assert_eq!(prod, TSeries::one(16));
        assert_eq!(TSeries::zero(3).inverse(), Err(MathError::NotInvertible));
    }

    #[test]
    fn mul_truncates_to_shorter_order() {
        let a = series_s(6);
        let b = series_s(3);
        assert_eq!(a.mul(&b).order(), 3);
        let c = a.rescale_variable(&rat(2));
        assert_eq!(c.coeff(2).unwrap(), frac(-1, 6));
        let _ = &c - &a;
    }
}
