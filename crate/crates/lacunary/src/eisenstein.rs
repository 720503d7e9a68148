//! Normalized Eisenstein q-expansions and quasimodular products.
//!
//! For even k >= 2 the weight-k Eisenstein series divided by pi^k has the
//! purely rational expansion
//!
//!   2 (zeta(k)/pi^k) (1 - (2k/B_k) sum_{n>=1} sigma_{k-1}(n) q^n),
//!
//! which we store as the grade-k/2 component of a [`GradedQSeries`]
//! (grade m standing for pi^{2m}).  Products of two series then land at the
//! sum of their grades, and the weight-2 series contributes its quasimodular
//! derivative corrections one grade lower, so identities can be tested
//! grade-by-grade over the rationals.

use std::collections::HashMap;
use std::sync::{LazyLock, Mutex};

use num_traits::One;

use crate::exact::{bernoulli, ratio, sigma_power, zeta_ratio, Int, Rational};
use crate::series::{GradedQSeries, QSeries};
use crate::{Error, Result};

static EISENSTEIN_CACHE: LazyLock<Mutex<HashMap<(u64, usize), GradedQSeries>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// Weight-k Eisenstein series over pi^k, graded at k/2.  Requires even
/// k >= 2 and precision >= 1; results are memoized per (k, precision).
pub fn eisenstein_series(k: u64, precision: usize) -> Result<GradedQSeries> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::BadWeight { got: k, min: 2 });
    }
    assert!(precision >= 1);
    if let Some(hit) = EISENSTEIN_CACHE
        .lock()
        .unwrap()
        .get(&(k, precision))
        .cloned()
    {
        return Ok(hit);
    }

    let lead = Rational::from_integer(Int::from(2)) * zeta_ratio(k)?;
    // -2k/B_k, e.g. 240 for k = 4, -24 for k = 2.
    let scale = -Rational::from_integer(Int::from(2 * k)) / bernoulli(k)?;
    let mut coeffs = Vec::with_capacity(precision);
    coeffs.push(Rational::one());
    for n in 1..precision {
        coeffs.push(&scale * Rational::from_integer(sigma_power(k - 1, n as u64)));
    }
    let plain = QSeries::new(coeffs).scale(&lead);
    let graded = GradedQSeries::from_component((k / 2) as usize, plain, Some(k));

    EISENSTEIN_CACHE
        .lock()
        .unwrap()
        .insert((k, precision), graded.clone());
    Ok(graded)
}

/// The product basis element for a pair of indices (r, s), r, s >= 1:
/// the plain product of the two normalized series, plus the quasimodular
/// correction (1/s) q d/dq of the weight-s series whenever r = 2 (and
/// symmetrically).  Odd indices make the whole thing vanish, returned as a
/// tagged zero.  Symmetric in r and s.
pub fn p_series(r: u64, s: u64, precision: usize) -> Result<GradedQSeries> {
    if r < 1 {
        return Err(Error::OutOfRange {
            name: "r",
            got: r as i64,
            lo: 1,
            hi: i64::MAX,
        });
    }
    if s < 1 {
        return Err(Error::OutOfRange {
            name: "s",
            got: s as i64,
            lo: 1,
            hi: i64::MAX,
        });
    }
    if r % 2 != 0 || s % 2 != 0 {
        return Ok(GradedQSeries::zero_with_weight(precision, r + s));
    }
    let mut out = &eisenstein_series(r, precision)? * &eisenstein_series(s, precision)?;
    if r == 2 {
        let d = eisenstein_series(s, precision)?.q_derivative();
        out = &out + &d.scale(&ratio(1, s as i64));
    }
    if s == 2 {
        let d = eisenstein_series(r, precision)?.q_derivative();
        out = &out + &d.scale(&ratio(1, r as i64));
    }
    Ok(out)
}
