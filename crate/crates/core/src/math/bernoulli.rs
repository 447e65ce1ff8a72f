use std::sync::RwLock;

use num_traits::{One, Zero};

use super::{binomial, Rational};

// B_0, B_1, ... with the t/(e^t - 1) convention (B_1 = -1/2).
static TABLE: RwLock<Vec<Rational>> = RwLock::new(Vec::new());

/// Bernoulli number `B_m`, the coefficient of `t^m / m!` in `t/(e^t - 1)`.
///
/// Values are memoized in a process-wide table; concurrent readers never
/// block each other, and extension takes the write lock once per call.
pub fn bernoulli_number(m: usize) -> Rational {
    if let Some(b) = TABLE.read().unwrap().get(m) {
        return b.clone();
    }
    let mut table = TABLE.write().unwrap();
    while table.len() <= m {
        let k = table.len();
        let value = if k == 0 {
            Rational::one()
        } else {
            // sum_{j=0}^{k} C(k+1, j) B_j = 0
            let mut acc = Rational::zero();
            for (j, b) in table.iter().enumerate() {
                acc += Rational::from_integer(binomial(k as u64 + 1, j as u64)) * b;
            }
            -acc / Rational::from_integer(binomial(k as u64 + 1, k as u64))
        };
        table.push(value);
    }
    table[m].clone()
}

/// Bernoulli polynomial `B_k(x)` from `t e^{xt}/(e^t - 1)`.
pub fn bernoulli_polynomial(k: usize, x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    let mut xpow = Rational::one();
    // sum_j C(k, j) B_j x^{k-j}
    for j in (0..=k).rev() {
        acc += Rational::from_integer(binomial(k as u64, j as u64)) * bernoulli_number(j) * &xpow;
        xpow *= x;
    }
    acc
}
