use std::fmt;

use num_traits::{One, Zero};

use super::{format_rational, MathError, Rational};

/// Polynomial in `r` with rational coefficients, `coeffs[k]` multiplying `r^k`.
/// Trailing zeros are always stripped; the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RPolynomial {
    coeffs: Vec<Rational>,
}

impl RPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        RPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(0)
    }

    pub fn eval(&self, r: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * r + c)
    }

    pub fn eval_int(&self, r: i64) -> Rational {
        self.eval(&super::rat(r))
    }

    fn mul_linear(&self, root: &Rational) -> RPolynomial {
        // (r - root) * self
        let mut out = vec![Rational::zero(); self.coeffs.len() + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k + 1] += c;
            out[k] -= c * root;
        }
        RPolynomial::new(out)
    }

    fn add_scaled(&mut self, other: &RPolynomial, scale: &Rational) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), Rational::zero());
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            self.coeffs[k] += c * scale;
        }
        *self = RPolynomial::new(std::mem::take(&mut self.coeffs));
    }
}

impl fmt::Display for RPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "({})*r", format_rational(c))?,
                _ => write!(f, "({})*r^{}", format_rational(c), k)?,
            }
        }
        Ok(())
    }
}

/// Unique polynomial of degree at most `degree_bound` through the first
/// `degree_bound + 1` samples. Any further samples are checked against it.
pub fn interpolate_polynomial(
    samples: &[(i64, Rational)],
    degree_bound: usize,
) -> Result<RPolynomial, MathError> {
    let needed = degree_bound + 1;
    if samples.len() < needed {
        return Err(MathError::TooFewSamples { needed, got: samples.len() });
    }
    let mut seen = std::collections::BTreeSet::new();
    for (node, _) in samples {
        if !seen.insert(*node) {
            return Err(MathError::DuplicateNode(*node));
        }
    }
    let (fit, held_out) = samples.split_at(needed);

    // Newton divided differences.
    let xs: Vec<Rational> = fit.iter().map(|(x, _)| super::rat(*x)).collect();
    let mut table: Vec<Rational> = fit.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..needed {
        for i in (level..needed).rev() {
            table[i] = (&table[i] - &table[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    let mut result = RPolynomial::zero();
    let mut basis = RPolynomial::constant(Rational::one());
    for (i, c) in table.iter().enumerate() {
        result.add_scaled(&basis, c);
        basis = basis.mul_linear(&xs[i]);
    }

    for (node, expected) in held_out {
        let actual = result.eval_int(*node);
        if &actual != expected {
            return Err(MathError::PolynomialityViolated {
                node: *node,
                expected: format_rational(expected),
                actual: format_rational(&actual),
            });
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{frac, rat};

    #[test]
    fn spec_examples() {
        let p = interpolate_polynomial(&[(1, rat(1)), (2, rat(4)), (3, rat(9))], 2).unwrap();
        assert_eq!(p, RPolynomial::new(vec![rat(0), rat(0), rat(1)]));
        let c = interpolate_polynomial(&[(5, rat(7)), (6, rat(7)), (7, rat(7))], 2).unwrap();
        assert_eq!(c, RPolynomial::constant(rat(7)));
        assert_eq!(c.degree(), Some(0));
    }

    #[test]
    fn lattice_sum_cubic() {
        // sum_{w=0}^{r-1} w (r - w), summed directly.
        let samples: Vec<_> = (4..=8)
            .map(|r: i64| (r, rat((0..r).map(|w| w * (r - w)).sum())))
            .collect();
        let p = interpolate_polynomial(&samples, 3).unwrap();
        assert_eq!(p.constant_term(), rat(0));
        assert_eq!(p, RPolynomial::new(vec![rat(0), frac(-1, 6), rat(0), frac(1, 6)]));
    }

    #[test]
    fn held_out_mismatch_and_bad_input() {
        let err = interpolate_polynomial(&[(0, rat(0)), (1, rat(1)), (2, rat(5))], 1).unwrap_err();
        assert!(err.to_string().starts_with("polynomiality violated"));
        assert!(matches!(
            interpolate_polynomial(&[(0, rat(0))], 1),
            Err(MathError::TooFewSamples { .. })
        ));
        assert!(matches!(
            interpolate_polynomial(&[(3, rat(0)), (3, rat(1))], 1),
            Err(MathError::DuplicateNode(3))
        ));
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        assert_eq!(RPolynomial::new(vec![rat(0), rat(0)]).degree(), None);
        assert_eq!(RPolynomial::zero().to_string(), "0");
    }
}
