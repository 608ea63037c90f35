//! Exact rational arithmetic and dense univariate polynomials.

mod polynomial;
mod rational;

pub use polynomial::Polynomial;
pub use rational::{q, sign, Rational};

use crate::error::{Error, Result};

/// Binomial coefficient `C(n, k)` as an exact rational.
pub fn binomial(n: u32, k: u32) -> Result<Rational> {
    if k > n {
        return Err(Error::domain(format!("binomial requires k <= n (got n={n}, k={k})")));
    }
    let k = k.min(n - k);
    let mut acc = num_bigint::BigInt::from(1);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    Ok(Rational::from_bigint(acc))
}
