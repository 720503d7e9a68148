//! Exact integer and rational building blocks.
//!
//! Arbitrary-precision integers and rationals are backed by `num-bigint` /
//! `num-rational`; rationals are therefore always stored reduced with a
//! positive denominator.  On top of those sit the combinatorial quantities
//! everything else consumes: factorials, binomial coefficients (including
//! the generalized kind with negative upper index), Bernoulli numbers,
//! zeta(k)/pi^k ratios, power-divisor sums, and the binomial convolution
//! identities used by the recurrence builders.
//!
//! Factorials and Bernoulli numbers are memoized behind mutexes; results are
//! identical to a fresh computation, so callers may treat every function
//! here as pure.

use std::sync::{LazyLock, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

pub type Int = BigInt;
pub type Rational = BigRational;

/// Rational from an integer pair, reduced with positive denominator.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(Int::from(p), Int::from(q))
}

static FACTORIALS: LazyLock<Mutex<Vec<Int>>> = LazyLock::new(|| Mutex::new(vec![Int::one()]));

/// n! as a big integer, memoized.
pub fn factorial(n: u64) -> Int {
    let n = n as usize;
    let mut cache = FACTORIALS.lock().unwrap();
    while cache.len() <= n {
        let next = cache.last().unwrap() * Int::from(cache.len());
        cache.push(next);
    }
    cache[n].clone()
}

/// Binomial coefficient C(n, k) with the combinatorial convention:
/// 0 whenever k < 0 or k > n.
pub fn binomial(n: u64, k: i64) -> Int {
    if k < 0 || (k as u64) > n {
        return Int::zero();
    }
    let k = k as u64;
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Generalized binomial C(x, k) = x(x-1)...(x-k+1)/k! for integer x of
/// either sign; 0 for k < 0.  Agrees with [`binomial`] when 0 <= k <= x.
pub fn binomial_general(x: i64, k: i64) -> Int {
    if k < 0 {
        return Int::zero();
    }
    let mut prod = Int::one();
    for i in 0..k {
        prod *= Int::from(x - i);
    }
    prod / factorial(k as u64)
}

static BERNOULLI: LazyLock<Mutex<Vec<Rational>>> =
    LazyLock::new(|| Mutex::new(vec![Rational::one()]));

fn bernoulli_raw(k: usize) -> Rational {
    let mut cache = BERNOULLI.lock().unwrap();
    while cache.len() <= k {
        // sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1, solved for B_m.
        // With B_0 = 1 this fixes B_1 = -1/2.
        let m = cache.len();
        let mut acc = Rational::zero();
        for (j, b) in cache.iter().enumerate() {
            acc += b * Rational::from_integer(binomial(m as u64 + 1, j as i64));
        }
        let next = -acc / Rational::from_integer(Int::from(m as u64 + 1));
        cache.push(next);
    }
    cache[k].clone()
}

/// Bernoulli number B_k for even k >= 0 (B_0 = 1, B_2 = 1/6, B_4 = -1/30, ...).
/// Odd indices are rejected; internally the recurrence uses B_1 = -1/2.
pub fn bernoulli(k: u64) -> Result<Rational> {
    if k % 2 != 0 && k != 0 {
        return Err(Error::BadWeight { got: k, min: 0 });
    }
    Ok(bernoulli_raw(k as usize))
}

/// zeta(k)/pi^k as an exact rational for even k >= 2:
/// (-1)^{k/2+1} 2^{k-1} B_k / k!.
pub fn zeta_ratio(k: u64) -> Result<Rational> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::BadWeight { got: k, min: 2 });
    }
    let sign = if (k / 2) % 2 == 0 { -1 } else { 1 };
    let pow2 = Int::one() << (k - 1) as usize;
    let num = Int::from(sign) * pow2 * bernoulli_raw(k as usize).numer();
    let den = bernoulli_raw(k as usize).denom() * factorial(k);
    Ok(Rational::new(num, den))
}

/// Divisor power sum sigma_m(n) = sum_{d | n} d^m for n >= 1.
pub fn sigma_power(m: u64, n: u64) -> Int {
    assert!(n >= 1, "sigma_power needs n >= 1");
    let mut acc = Int::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            acc += Int::from(d).pow(m as u32);
            let e = n / d;
            if e != d {
                acc += Int::from(e).pow(m as u32);
            }
        }
        d += 1;
    }
    acc
}

/// Checks the Hagen-Rothe convolution
/// sum_{j=0}^{k} a/(a+bj) C(a+bj, j) C(c-bj, k-j) == C(a+c, k)
/// by evaluating both sides exactly.  The upper index c - bj may go
/// negative, in which case the generalized binomial applies.
pub fn hagen_rothe_check(a: u64, b: u64, c: u64, k: u64) -> Result<bool> {
    if a == 0 {
        return Err(Error::VanishingDenominator { j: 0 });
    }
    let mut lhs = Rational::zero();
    for j in 0..=k {
        let denom = a + b * j;
        let weight = Rational::new(Int::from(a), Int::from(denom));
        let first = binomial(denom, j as i64);
        let second = binomial_general(c as i64 - (b * j) as i64, k as i64 - j as i64);
        lhs += weight * Rational::from_integer(first * second);
    }
    Ok(lhs == Rational::from_integer(binomial(a + c, k as i64)))
}

/// Binomial convolution B(n) = sum_{j=1}^{2n+1} C(2n+j-1, 2n) C(4n-j+1, 2n),
/// the normalizing constant of the symmetric weight-(6n+2) relation.
/// Equals C(6n+1, 2n) by Hagen-Rothe.
pub fn b_sum(n: u64) -> Int {
    assert!(n >= 1, "b_sum needs n >= 1");
    let mut acc = Int::zero();
    for j in 1..=(2 * n + 1) {
        acc += binomial(2 * n + j - 1, (2 * n) as i64) * binomial(4 * n - j + 1, (2 * n) as i64);
    }
    acc
}

/// Coefficient of the product G_{2n+2k} G_{4n-2k+2} in the weight-(6n+2)
/// recurrence, in its factorial/binomial-quotient form:
/// (1/(6n+1)) ((4n+1)!/(2n)!^2) C(2n, 2k-1) / C(6n, 2n+2k-1).
pub fn recurrence_6n2_coefficient(n: u64, k: u64) -> Result<Rational> {
    if n < 1 {
        return Err(Error::OutOfRange {
            name: "n",
            got: n as i64,
            lo: 1,
            hi: i64::MAX,
        });
    }
    if k < 1 || k > n {
        return Err(Error::OutOfRange {
            name: "k",
            got: k as i64,
            lo: 1,
            hi: n as i64,
        });
    }
    let two_n_fact = factorial(2 * n);
    let lead = Rational::new(
        factorial(4 * n + 1),
        Int::from(6 * n + 1) * (&two_n_fact * &two_n_fact),
    );
    let quot = Rational::new(
        binomial(2 * n, 2 * k as i64 - 1),
        binomial(6 * n, (2 * n + 2 * k) as i64 - 1),
    );
    Ok(lead * quot)
}
