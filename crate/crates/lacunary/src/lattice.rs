//! Floating-point oracle: the weight-k lattice sum over a truncated square,
//! evaluated against the q-expansion route, with explicit error budgets.
//!
//! Everything here is double precision on purpose — this module spot-checks
//! that the exact series machinery describes the same analytic objects, it
//! does not prove anything.  k = 2 is excluded from the lattice side (the sum
//! is only conditionally convergent); the q-expansion is authoritative there.

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::eisenstein::eisenstein_series;
use crate::exact::{bernoulli, zeta_ratio};
use crate::{Error, Result};

/// Largest square cutoff `compare` is willing to sum (about 5e9 terms).
const M_LIMIT: u64 = 50_000;
/// Largest series length `compare` is willing to evaluate.
const N_LIMIT: usize = 50_000;

/// A point of the open upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperHalfPoint {
    re: f64,
    im: f64,
}

impl UpperHalfPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(re.is_finite() && im.is_finite() && im > 0.0) {
            return Err(Error::NotInUpperHalfPlane(im));
        }
        Ok(Self { re, im })
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

fn check_even_weight(k: u64, min: u64) -> Result<()> {
    if k < min || k % 2 != 0 {
        return Err(Error::BadWeight { got: k, min });
    }
    Ok(())
}

/// Partial lattice sum `sum (m tau + n)^{-k}` over `0 < max(|m|, |n|) <= M`.
///
/// The summand is invariant under (m, n) -> (-m, -n) for even k, so only the
/// half-lattice `m > 0` plus the half-row `m = 0, n > 0` is summed and the
/// result doubled.  Rows are accumulated in a fixed order, so the result is
/// bit-for-bit reproducible.  The truncation error is bounded by
/// [`lattice_tail_bound`], which decays like M^(2-k).
pub fn lattice_sum(k: u64, tau: UpperHalfPoint, cutoff: u64) -> Result<Complex64> {
    check_even_weight(k, 4)?;
    if cutoff < 1 {
        return Err(Error::OutOfRange {
            name: "cutoff",
            got: cutoff as i64,
            lo: 1,
            hi: i64::MAX,
        });
    }
    let t = tau.complex();
    let exp = -(k as i32);
    let m_max = cutoff as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..=m_max {
        acc += Complex64::new(n as f64, 0.0).powi(exp);
    }
    for m in 1..=m_max {
        let base = t * m as f64;
        let mut row = Complex64::new(0.0, 0.0);
        for n in -m_max..=m_max {
            row += (base + n as f64).powi(exp);
        }
        acc += row;
    }
    Ok(2.0 * acc)
}

/// Minimum of |u tau + 1| over u in [-1, 1]: the closest approach of the top
/// edge of the unit sup-norm square to the origin.  Strictly positive for any
/// upper half-plane tau.
fn edge_min(tau: UpperHalfPoint) -> f64 {
    let (x, y) = (tau.re(), tau.im());
    let u = (-x / (x * x + y * y)).clamp(-1.0, 1.0);
    (u * x + 1.0).hypot(u * y)
}

/// Upper bound on the absolute truncation error of [`lattice_sum`] with
/// cutoff M.
///
/// Each discarded shell `max(|m|, |n|) = R > M` is split into side points
/// (|m| = R, at most 6R of them, each with |m tau + n| >= R y) and
/// top/bottom points (|n| = R, |m| < R, where |m tau + n| >= max(|m| y, c R)
/// with c = min |u tau + 1| over the edge).  Summing the crossover split over
/// shells gives
///
/// ```text
/// tail(M) <= 6 y^-k M^(2-k)/(k-2)
///          + 4 c^-k M^(1-k)/(k-1)
///          + 4k c^(1-k) / ((k-1) y) * M^(2-k)/(k-2)
/// ```
pub fn lattice_tail_bound(k: u64, tau: UpperHalfPoint, cutoff: u64) -> f64 {
    let kf = k as f64;
    let y = tau.im();
    let c = edge_min(tau);
    let m = cutoff as f64;
    let side = 6.0 * y.powi(-(k as i32)) * m.powf(2.0 - kf) / (kf - 2.0);
    let corner = 4.0 * c.powi(-(k as i32)) * m.powf(1.0 - kf) / (kf - 1.0);
    let sweep = 4.0 * kf * c.powf(1.0 - kf) / ((kf - 1.0) * y) * m.powf(2.0 - kf) / (kf - 2.0);
    side + corner + sweep
}

/// Evaluates the graded q-expansion of weight k at tau: each grade-m
/// component is a polynomial in q = e^(2 pi i tau), summed with the numerical
/// value pi^(2m) substituted for its grade.  For a pure Eisenstein expansion
/// this reconstructs the analytic value of the lattice sum.
pub fn qexp_eval(k: u64, tau: UpperHalfPoint, terms: usize) -> Result<Complex64> {
    check_even_weight(k, 2)?;
    let n = terms.max(1);
    let series = eisenstein_series(k, n)?;
    let q = (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * tau.complex()).exp();
    let mut acc = Complex64::new(0.0, 0.0);
    for (&grade, part) in series.components() {
        let mut horner = Complex64::new(0.0, 0.0);
        for c in part.coeffs().iter().rev() {
            horner = horner * q + c.to_f64().expect("coefficient fits in f64");
        }
        acc += horner * std::f64::consts::PI.powi(2 * grade as i32);
    }
    Ok(acc)
}

/// Upper bound on the magnitude of the discarded q-expansion tail past
/// `terms` coefficients, at the G_k value level.
///
/// Coefficient n of G_k is bounded by `2 zeta(k) * (2k/|B_k|) * zeta(k-1) *
/// n^(k-1)`, and zeta(k-1) <= zeta(2) < 1.7 for k >= 4 (k = 2 uses sigma_1(n)
/// <= n^2, absorbed by the same shape).  The remaining geometric-with-
/// polynomial tail is bounded through the term ratio.
pub fn qexp_tail_bound(k: u64, tau: UpperHalfPoint, terms: usize) -> f64 {
    let n = terms.max(1) as f64;
    let rho = (-2.0 * std::f64::consts::PI * tau.im()).exp();
    let kf = k as f64;
    let power = if k == 2 { 2.0 } else { kf - 1.0 };
    let ratio = rho * (1.0 + 1.0 / n).powf(power);
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    let zeta_k = zeta_ratio(k).expect("even k >= 2").to_f64().unwrap()
        * std::f64::consts::PI.powi(k as i32);
    let scale = 2.0 * kf / bernoulli(k).unwrap().to_f64().unwrap().abs();
    2.0 * zeta_k * scale * 1.7 * (n + 1.0).powf(power) * rho.powf(n + 1.0) / (1.0 - ratio)
}

/// Outcome of one oracle comparison.
#[derive(Debug, Clone, Copy)]
pub struct CompareReport {
    pub difference: f64,
    pub lattice_cutoff: u64,
    pub series_terms: usize,
    pub lattice_bound: f64,
    pub series_bound: f64,
    pub pass: bool,
}

/// Smallest cutoff whose tail bound meets `budget`, or the (estimated)
/// needed cutoff as an error when it exceeds [`M_LIMIT`].
fn select_cutoff(k: u64, tau: UpperHalfPoint, budget: f64, tol: f64) -> Result<u64> {
    let mut lo = 1u64;
    let mut hi = 1u64;
    while lattice_tail_bound(k, tau, hi) > budget {
        lo = hi;
        hi *= 2;
        if hi > 1 << 40 {
            return Err(Error::UnreachableTolerance {
                tol,
                needed: hi as f64,
                limit: M_LIMIT,
            });
        }
    }
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        if lattice_tail_bound(k, tau, mid) > budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if hi > M_LIMIT {
        return Err(Error::UnreachableTolerance {
            tol,
            needed: hi as f64,
            limit: M_LIMIT,
        });
    }
    Ok(hi)
}

fn select_terms(k: u64, tau: UpperHalfPoint, budget: f64, tol: f64) -> Result<usize> {
    let mut n = (k as usize).max(8);
    while qexp_tail_bound(k, tau, n) > budget {
        n *= 2;
        if n > N_LIMIT {
            return Err(Error::UnreachableTolerance {
                tol,
                needed: n as f64,
                limit: N_LIMIT as u64,
            });
        }
    }
    Ok(n)
}

/// Evaluates both routes with cutoffs chosen so each truncation error is at
/// most 40% of `target_tol`, leaving slack for floating-point accumulation,
/// and reports whether they agree within `target_tol`.
pub fn compare(k: u64, tau: UpperHalfPoint, target_tol: f64) -> Result<CompareReport> {
    check_even_weight(k, 4)?;
    if !(target_tol.is_finite() && target_tol > 0.0) {
        return Err(Error::UnreachableTolerance {
            tol: target_tol,
            needed: f64::INFINITY,
            limit: M_LIMIT,
        });
    }
    let budget = 0.4 * target_tol;
    let m = select_cutoff(k, tau, budget, target_tol)?;
    let n = select_terms(k, tau, budget, target_tol)?;
    let lattice = lattice_sum(k, tau, m)?;
    let series = qexp_eval(k, tau, n)?;
    let difference = (lattice - series).norm();
    Ok(CompareReport {
        difference,
        lattice_cutoff: m,
        series_terms: n,
        lattice_bound: lattice_tail_bound(k, tau, m),
        series_bound: qexp_tail_bound(k, tau, n),
        pass: difference <= target_tol,
    })
}
