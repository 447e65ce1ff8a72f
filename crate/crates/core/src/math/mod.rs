//! Exact arithmetic substrate: rationals, Bernoulli numbers, truncated power
//! series in `t`, and polynomials in the regularization parameter `r`.

mod bernoulli;
mod poly;
mod series;

pub use bernoulli::{bernoulli_number, bernoulli_polynomial};
pub use poly::{interpolate_polynomial, RPolynomial};
pub use series::{series_coeff, series_exp, series_g, series_mul, series_s, TSeries};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Arbitrary precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MathError {
    #[error("non-nilpotent exponent: constant term {0} is nonzero")]
    NonNilpotentExponent(String),
    #[error("series is not invertible: zero constant term")]
    NotInvertible,
    #[error("coefficient t^{index} lies beyond truncation order {order}")]
    BeyondTruncation { index: usize, order: usize },
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("interpolation nodes are not pairwise distinct (node {0} repeats)")]
    DuplicateNode(i64),
    #[error("polynomiality violated: at node {node} expected {expected}, interpolant gives {actual}")]
    PolynomialityViolated { node: i64, expected: String, actual: String },
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical string form: `p/q`, or `p` when `q = 1`.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p/q` or `p`. Accepts non-reduced input and reduces it.
pub fn parse_rational(s: &str) -> Result<Rational, MathError> {
    let bad = || MathError::BadRational(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `x^e` for a possibly negative exponent. Panics on `0^e` with `e < 0`.
pub fn pow_signed(x: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        assert!(!x.is_zero(), "zero raised to negative power");
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// Least non-negative residue of `a` modulo `m`.
pub fn modulo(a: i64, m: i64) -> i64 {
    a.mod_floor(&m)
}
