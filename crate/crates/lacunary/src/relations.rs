//! Relation vectors tying a weight-k Eisenstein series to binomially
//! weighted products of two lower-weight ones.
//!
//! A parameter triple (r, s, t) with r, s, t >= 1 and k = r+s+t-1 generates a
//! candidate relation through three cyclically wired sums over the
//! compositions i + j = k, i, j >= 1:
//!
//! ```text
//! 0 = sum C(i-1, t-1) C(j-1, s-1) (-1)^(i+r) (P_{i,j} - (-1)^j G_k)
//!   + sum C(i-1, r-1) C(j-1, t-1) (-1)^(i+s) (P_{i,j} - (-1)^j G_k)
//!   + sum C(i-1, s-1) C(j-1, r-1) (-1)^(i+t) (P_{i,j} - (-1)^j G_k)
//! ```
//!
//! Product terms with an odd index vanish identically, but their companion
//! G_k summands do not and are folded into the G coefficient; dropping both
//! is the classic implementation mistake and loses the entire left-hand side.
//!
//! The generated identity is genuinely true whenever min(r, s, t) >= 2 (for
//! odd k it degenerates to 0 = 0).  When min(r, s, t) = 1 and k is even the
//! construction survives but produces a *false* candidate: those vectors keep
//! a nonzero P_{2,k-2} coefficient, and the renormalized derivative hiding in
//! P_{2,k-2} is the only contribution in its pi^2-grade, so the residual
//! cannot vanish.  `verify_triple` therefore refutes exactly the min = 1,
//! even-k triples; everything the named recurrences below need lives safely
//! in the min >= 3 region.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::eisenstein::{eisenstein_series, p_series};
use crate::exact::{b_sum, bernoulli, binomial, recurrence_6n2_coefficient, zeta_ratio, Int, Rational};
use crate::series::GradedQSeries;
use crate::{default_precision, Error, Result};

/// A validated parameter triple (r, s, t), each at least 1, with
/// k = r + s + t - 1 at least 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct RelationSpec {
    r: u64,
    s: u64,
    t: u64,
}

impl RelationSpec {
    pub fn new(r: u64, s: u64, t: u64) -> Result<Self> {
        for (name, v) in [("r", r), ("s", s), ("t", t)] {
            if v < 1 {
                return Err(Error::OutOfRange {
                    name,
                    got: v as i64,
                    lo: 1,
                    hi: i64::MAX,
                });
            }
        }
        let k = (r + s + t) as i64 - 1;
        if k < 3 {
            return Err(Error::BadSpec { r, s, t, k });
        }
        Ok(Self { r, s, t })
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    /// Weight k = r + s + t - 1 of the generated relation.
    pub fn weight(&self) -> u64 {
        self.r + self.s + self.t - 1
    }

    pub fn min_entry(&self) -> u64 {
        self.r.min(self.s).min(self.t)
    }
}

/// Exact coefficients of one candidate relation
/// `g_coeff * G_k = sum p_coeffs[(i,j)] * P_{i,j}`.
///
/// Keys are symmetrized (i <= j), both indices even and at least 2, summing
/// to the weight; zero coefficients are never stored.  `source` remembers the
/// generating triple when there is one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationVector {
    weight: u64,
    g_coeff: Rational,
    p_coeffs: BTreeMap<(u64, u64), Rational>,
    source: Option<(u64, u64, u64)>,
}

impl RelationVector {
    /// Validating constructor, shared by deserialization.  Zero product
    /// coefficients are dropped rather than rejected.
    pub fn from_parts(
        weight: u64,
        g_coeff: Rational,
        p_coeffs: BTreeMap<(u64, u64), Rational>,
    ) -> Result<Self> {
        if weight < 2 {
            return Err(Error::BadDocument(format!("weight {weight} below 2")));
        }
        for &(i, j) in p_coeffs.keys() {
            if i < 2 || i % 2 != 0 || j % 2 != 0 || i > j || i + j != weight {
                return Err(Error::BadDocument(format!(
                    "product key ({i}, {j}) invalid for weight {weight}"
                )));
            }
        }
        let mut p_coeffs = p_coeffs;
        p_coeffs.retain(|_, c| !c.is_zero());
        Ok(Self {
            weight,
            g_coeff,
            p_coeffs,
            source: None,
        })
    }

    pub fn with_source(mut self, r: u64, s: u64, t: u64) -> Self {
        self.source = Some((r, s, t));
        self
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn g_coeff(&self) -> &Rational {
        &self.g_coeff
    }

    pub fn p_coeffs(&self) -> &BTreeMap<(u64, u64), Rational> {
        &self.p_coeffs
    }

    /// Coefficient of P_{i,j} (order-insensitive); zero when absent.
    pub fn p_coeff(&self, i: u64, j: u64) -> Rational {
        self.p_coeffs
            .get(&(i.min(j), i.max(j)))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn source(&self) -> Option<(u64, u64, u64)> {
        self.source
    }

    /// Number of distinct product terms; the thing the search minimizes.
    pub fn sparsity(&self) -> usize {
        self.p_coeffs.len()
    }

    /// No coefficients at all.
    pub fn is_empty(&self) -> bool {
        self.g_coeff.is_zero() && self.p_coeffs.is_empty()
    }

    /// Nothing to check: odd weight (every series involved is zero) or an
    /// entirely empty vector.
    pub fn is_degenerate(&self) -> bool {
        self.weight % 2 == 1 || self.is_empty()
    }

    /// Same relation, every coefficient multiplied by `c`.
    pub fn scaled(&self, c: &Rational) -> Self {
        let mut p_coeffs: BTreeMap<(u64, u64), Rational> = self
            .p_coeffs
            .iter()
            .map(|(k, v)| (*k, v * c))
            .collect();
        p_coeffs.retain(|_, v| !v.is_zero());
        Self {
            weight: self.weight,
            g_coeff: &self.g_coeff * c,
            p_coeffs,
            source: self.source,
        }
    }

    /// Clears denominators (multiplies by the lcm), leaving integer entries.
    pub fn integerized(&self) -> Self {
        let mut l = self.g_coeff.denom().clone();
        for c in self.p_coeffs.values() {
            l = l.lcm(c.denom());
        }
        self.scaled(&Rational::from_integer(l))
    }

    /// Canonical integer form: denominators cleared, common factor divided
    /// out, sign fixed so the G coefficient (or failing that the first
    /// product coefficient) is positive.
    pub fn reduced(&self) -> Self {
        let mut v = self.integerized();
        let mut d = v.g_coeff.numer().clone();
        for c in v.p_coeffs.values() {
            d = d.gcd(c.numer());
        }
        if !d.is_zero() && !d.is_one() {
            v = v.scaled(&Rational::new(Int::one(), d));
        }
        let flip = if !v.g_coeff.is_zero() {
            v.g_coeff.is_negative()
        } else {
            v.p_coeffs.values().next().is_some_and(|c| c.is_negative())
        };
        if flip {
            v = v.scaled(&Rational::from_integer(Int::from(-1)));
        }
        v
    }
}

/// Accumulates the three cyclic sums for a triple into a relation vector.
///
/// The table lists, per sum, which parameter sits under each binomial and
/// which shifts the sign: row (x, y, z) contributes
/// `C(i-1, x-1) C(j-1, y-1) (-1)^(i+z) (P_{i,j} - (-1)^j G_k)`.
pub fn relation_vector(spec: RelationSpec) -> RelationVector {
    let (r, s, t) = (spec.r(), spec.s(), spec.t());
    let k = spec.weight();
    let mut g = Rational::zero();
    let mut p: BTreeMap<(u64, u64), Rational> = BTreeMap::new();
    let wiring = [(t, s, r), (r, t, s), (s, r, t)];
    for (x, y, z) in wiring {
        for i in 1..k {
            let j = k - i;
            let w = binomial(i - 1, (x - 1) as i64) * binomial(j - 1, (y - 1) as i64);
            if w.is_zero() {
                continue;
            }
            let sign = if (i + z) % 2 == 0 { 1 } else { -1 };
            let signed = Rational::from_integer(Int::from(sign) * w);
            if i % 2 == 0 && j % 2 == 0 {
                // survives as a product; the vector keeps products on the
                // right-hand side, hence the flipped sign
                let slot = p
                    .entry((i.min(j), i.max(j)))
                    .or_insert_with(Rational::zero);
                *slot -= &signed;
            }
            // companion G_k summand, kept even when the product vanished
            if j % 2 == 0 {
                g -= &signed;
            } else {
                g += &signed;
            }
        }
    }
    p.retain(|_, c| !c.is_zero());
    RelationVector {
        weight: k,
        g_coeff: g,
        p_coeffs: p,
        source: Some((r, s, t)),
    }
}

/// Residual `g_coeff * G_k - sum p_coeffs[(i,j)] * P_{i,j}` as a graded
/// series truncated at `precision` coefficients; a valid relation gives the
/// zero series.  Odd-weight G_k is zero by convention.
pub fn evaluate_relation(vec: &RelationVector, precision: usize) -> GradedQSeries {
    let n = precision.max(1);
    let mut acc = GradedQSeries::zero(n);
    if vec.weight % 2 == 0 && !vec.g_coeff.is_zero() {
        let gk = eisenstein_series(vec.weight, n).expect("even weight >= 2");
        acc = &acc + &gk.scale(&vec.g_coeff);
    }
    for (&(i, j), c) in &vec.p_coeffs {
        let pij = p_series(i, j, n).expect("validated product key");
        acc = &acc - &pij.scale(c);
    }
    acc
}

/// Exact check of the relation generated by `spec` to `precision` terms.
pub fn verify_triple(spec: RelationSpec, precision: usize) -> bool {
    evaluate_relation(&relation_vector(spec), precision).is_zero()
}

/// Residual of the classical weight-2n convolution recurrence
/// `(n-3)(2n-1)(2n+1) G_2n = 3 sum_{p+q=n, p,q>=2} (2p-1)(2q-1) G_2p G_2q`,
/// defined for n >= 4 (at n = 3 both sides vanish identically).
pub fn hurwitz_residual(n: u64, precision: usize) -> Result<GradedQSeries> {
    if n < 4 {
        return Err(Error::OutOfRange {
            name: "n",
            got: n as i64,
            lo: 4,
            hi: i64::MAX,
        });
    }
    let prec = precision.max(1);
    let lead = Int::from(n - 3) * Int::from(2 * n - 1) * Int::from(2 * n + 1);
    let mut acc = eisenstein_series(2 * n, prec)?.scale(&Rational::from_integer(lead));
    for p in 2..=(n - 2) {
        let q = n - p;
        let c = Int::from(3) * Int::from(2 * p - 1) * Int::from(2 * q - 1);
        let prod = &eisenstein_series(2 * p, prec)? * &eisenstein_series(2 * q, prec)?;
        acc = &acc - &prod.scale(&Rational::from_integer(c));
    }
    Ok(acc)
}

/// Residual of the sparse weight-(6n+2) recurrence
/// `G_{6n+2} = sum_{m=1}^{n} c(n,m) G_{2n+2m} G_{4n-2m+2}`.
pub fn recurrence_6n2_residual(n: u64, precision: usize) -> Result<GradedQSeries> {
    if n < 1 {
        return Err(Error::OutOfRange {
            name: "n",
            got: n as i64,
            lo: 1,
            hi: i64::MAX,
        });
    }
    let prec = precision.max(1);
    let mut acc = eisenstein_series(6 * n + 2, prec)?;
    for m in 1..=n {
        let c = recurrence_6n2_coefficient(n, m)?;
        let prod =
            &eisenstein_series(2 * n + 2 * m, prec)? * &eisenstein_series(4 * n - 2 * m + 2, prec)?;
        acc = &acc - &prod.scale(&c);
    }
    Ok(acc)
}

/// Coefficients of the sparse weight-6n recurrence, n >= 2:
/// `C(6n+1, 2n) G_6n = sum_m [C(..)C(..) + 2 C(..)C(..)] G_{2n+2m} G_{4n-2m}`.
///
/// Ordered terms with mirrored index pairs land in the same symmetrized slot
/// and are added there.
pub fn recurrence_6n_vector(n: u64) -> Result<RelationVector> {
    if n < 2 {
        return Err(Error::OutOfRange {
            name: "n",
            got: n as i64,
            lo: 2,
            hi: i64::MAX,
        });
    }
    let two_n = (2 * n) as i64;
    let g = Rational::from_integer(binomial(6 * n + 1, two_n));
    let mut p: BTreeMap<(u64, u64), Rational> = BTreeMap::new();
    for m in 1..=n {
        let a = 2 * n + 2 * m;
        let b = 4 * n - 2 * m;
        let c = binomial(a - 1, two_n) * binomial(b - 1, two_n)
            + Int::from(2) * binomial(a - 1, two_n) * binomial(b - 1, two_n - 2);
        if !c.is_zero() {
            let slot = p
                .entry((a.min(b), a.max(b)))
                .or_insert_with(Rational::zero);
            *slot += Rational::from_integer(c);
        }
    }
    RelationVector::from_parts(6 * n, g, p)
}

/// Residual of the weight-6n recurrence, computed from the binomial formula
/// directly on series products (independent of the vector machinery).
pub fn recurrence_6n_residual(n: u64, precision: usize) -> Result<GradedQSeries> {
    if n < 2 {
        return Err(Error::OutOfRange {
            name: "n",
            got: n as i64,
            lo: 2,
            hi: i64::MAX,
        });
    }
    let prec = precision.max(1);
    let two_n = (2 * n) as i64;
    let lead = Rational::from_integer(binomial(6 * n + 1, two_n));
    let mut acc = eisenstein_series(6 * n, prec)?.scale(&lead);
    for m in 1..=n {
        let a = 2 * n + 2 * m;
        let b = 4 * n - 2 * m;
        let c = binomial(a - 1, two_n) * binomial(b - 1, two_n)
            + Int::from(2) * binomial(a - 1, two_n) * binomial(b - 1, two_n - 2);
        if c.is_zero() {
            continue;
        }
        let prod = &eisenstein_series(a, prec)? * &eisenstein_series(b, prec)?;
        acc = &acc - &prod.scale(&Rational::from_integer(c));
    }
    Ok(acc)
}

/// Coefficients of the sparse weight-(6n+4) recurrence, n >= 1:
/// `[C(6n+3, 2n+2) + 2 C(6n+3, 2n)] G_{6n+4} = sum_m [..] G_{2n+2m} G_{4n-2m+4}`.
pub fn recurrence_6n4_vector(n: u64) -> Result<RelationVector> {
    if n < 1 {
        return Err(Error::OutOfRange {
            name: "n",
            got: n as i64,
            lo: 1,
            hi: i64::MAX,
        });
    }
    let two_n = (2 * n) as i64;
    let g = Rational::from_integer(
        binomial(6 * n + 3, two_n + 2) + Int::from(2) * binomial(6 * n + 3, two_n),
    );
    let mut p: BTreeMap<(u64, u64), Rational> = BTreeMap::new();
    for m in 1..=(n + 1) {
        let a = 2 * n + 2 * m;
        let b = 4 * n - 2 * m + 4;
        let c = binomial(a - 1, two_n) * binomial(b - 1, two_n)
            + Int::from(2) * binomial(a - 1, two_n) * binomial(b - 1, two_n + 2);
        if !c.is_zero() {
            let slot = p
                .entry((a.min(b), a.max(b)))
                .or_insert_with(Rational::zero);
            *slot += Rational::from_integer(c);
        }
    }
    RelationVector::from_parts(6 * n + 4, g, p)
}

/// Residual of the weight-(6n+4) recurrence from the binomial formula.
pub fn recurrence_6n4_residual(n: u64, precision: usize) -> Result<GradedQSeries> {
    let vec = recurrence_6n4_vector(n)?;
    let prec = precision.max(1);
    let mut acc = eisenstein_series(vec.weight(), prec)?.scale(vec.g_coeff());
    for (&(i, j), c) in vec.p_coeffs() {
        let prod = &eisenstein_series(i, prec)? * &eisenstein_series(j, prec)?;
        acc = &acc - &prod.scale(c);
    }
    Ok(acc)
}

/// The fully symmetric instance r = s = t = 2n+1 (weight 6n+2), rescaled so
/// the G coefficient is the binomial convolution B(n).  Dividing the product
/// coefficients by B(n) recovers the weight-(6n+2) recurrence coefficients.
pub fn symmetric_relation_vector(n: u64) -> Result<RelationVector> {
    if n < 1 {
        return Err(Error::OutOfRange {
            name: "n",
            got: n as i64,
            lo: 1,
            hi: i64::MAX,
        });
    }
    let spec = RelationSpec::new(2 * n + 1, 2 * n + 1, 2 * n + 1)?;
    let v = relation_vector(spec);
    debug_assert!(!v.g_coeff().is_zero());
    let scale = Rational::from_integer(b_sum(n)) / v.g_coeff();
    Ok(v.scaled(&scale))
}

/// One search result: the generating triple, its vector, and the number of
/// product terms.
#[derive(Debug, Clone)]
pub struct SearchHit {
    pub spec: RelationSpec,
    pub vector: RelationVector,
    pub sparsity: usize,
}

/// Enumerates every triple r <= s <= t with r+s+t = k+1, keeps the ones whose
/// vector is nonempty and exactly verified, and returns the sparsest
/// `max_results` of them.  Ties break toward the lexicographically largest
/// (r, s, t); the output order is deterministic.
pub fn lacunarity_search(k: u64, max_results: usize) -> Result<Vec<SearchHit>> {
    if k % 2 != 0 || k < 8 {
        return Err(Error::BadWeight { got: k, min: 8 });
    }
    let prec = default_precision(k);
    let mut hits: Vec<SearchHit> = Vec::new();
    for r in 1..=((k + 1) / 3) {
        for s in r..=((k + 1 - r) / 2) {
            let t = k + 1 - r - s;
            let spec = RelationSpec::new(r, s, t).expect("k >= 8 keeps specs valid");
            let vector = relation_vector(spec);
            if vector.is_empty() || !evaluate_relation(&vector, prec).is_zero() {
                continue;
            }
            let sparsity = vector.sparsity();
            hits.push(SearchHit {
                spec,
                vector,
                sparsity,
            });
        }
    }
    hits.sort_by(|a, b| {
        a.sparsity.cmp(&b.sparsity).then_with(|| {
            let ka = (a.spec.r(), a.spec.s(), a.spec.t());
            let kb = (b.spec.r(), b.spec.s(), b.spec.t());
            kb.cmp(&ka)
        })
    });
    hits.truncate(max_results);
    Ok(hits)
}

/// Constant terms of a relation residual, one rational per grade, together
/// with renderings of the induced identity among zeta ratios and Bernoulli
/// numbers.  Derivative terms never contribute (their constant term is 0), so
/// the grade carrying one reports a zero residual explicitly.
#[derive(Debug, Clone)]
pub struct BernoulliIdentity {
    weight: u64,
    residuals: BTreeMap<usize, Rational>,
    zeta_form: String,
    bernoulli_form: String,
}

impl BernoulliIdentity {
    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn residuals(&self) -> &BTreeMap<usize, Rational> {
        &self.residuals
    }

    pub fn is_consistent(&self) -> bool {
        self.residuals.values().all(Zero::is_zero)
    }

    pub fn zeta_form(&self) -> &str {
        &self.zeta_form
    }

    pub fn bernoulli_form(&self) -> &str {
        &self.bernoulli_form
    }
}

/// Extracts the constant-term identity of a relation vector.  Writing
/// zr(m) = zeta(m)/pi^m, the q^0 coefficient of G_m is 2 zr(m) and that of
/// the product part of P_{i,j} is 4 zr(i) zr(j); the induced identity is
/// `2 g zr(k) = sum 4 p_{ij} zr(i) zr(j)`.
pub fn bernoulli_identity(vec: &RelationVector) -> BernoulliIdentity {
    let k = vec.weight();
    let mut residuals = BTreeMap::new();
    if k % 2 == 0 {
        let two = Rational::from_integer(Int::from(2));
        let four = Rational::from_integer(Int::from(4));
        let mut top = vec.g_coeff() * &two * zeta_ratio(k).expect("even weight >= 2");
        for (&(i, j), c) in vec.p_coeffs() {
            let term = &four * c * zeta_ratio(i).unwrap() * zeta_ratio(j).unwrap();
            top -= term;
        }
        residuals.insert((k / 2) as usize, top);
        if vec.p_coeffs().contains_key(&(2, k - 2)) {
            // the derivative part of P_{2,k-2} lives one grade down and has
            // no constant term
            residuals.insert((k / 2 - 1) as usize, Rational::zero());
        }
    }

    let (zeta_form, bernoulli_form) = if k % 2 == 1 {
        (
            "0 = 0  (odd weight, every term vanishes)".to_string(),
            "0 = 0".to_string(),
        )
    } else {
        let lhs_coeff = vec.g_coeff() * Rational::from_integer(Int::from(2));
        let mut rhs_terms: Vec<String> = Vec::new();
        let mut rhs_value = Rational::zero();
        for (&(i, j), c) in vec.p_coeffs() {
            let coeff = c * Rational::from_integer(Int::from(4));
            rhs_terms.push(format!("{coeff}*zr({i})*zr({j})"));
            rhs_value += coeff * zeta_ratio(i).unwrap() * zeta_ratio(j).unwrap();
        }
        let rhs = if rhs_terms.is_empty() {
            "0".to_string()
        } else {
            rhs_terms.join(" + ")
        };
        let lhs_value = &lhs_coeff * zeta_ratio(k).unwrap();
        let zeta = format!(
            "{lhs_coeff}*zr({k}) = {rhs}   [zr(m) := zeta(m)/pi^m; sides: {lhs_value} vs {rhs_value}]"
        );
        let mut indices: Vec<u64> = vec![k];
        for &(i, j) in vec.p_coeffs().keys() {
            indices.push(i);
            indices.push(j);
        }
        indices.sort_unstable();
        indices.dedup();
        let values = indices
            .iter()
            .map(|&m| format!("B({m}) = {}", bernoulli(m).unwrap()))
            .collect::<Vec<_>>()
            .join(", ");
        let bern = format!("zr(m) = (-1)^(m/2+1) * 2^(m-1) * B(m)/m! with {values}");
        (zeta, bern)
    };

    BernoulliIdentity {
        weight: k,
        residuals,
        zeta_form,
        bernoulli_form,
    }
}

fn latex_coeff(c: &Rational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("\\tfrac{{{}}}{{{}}}", c.numer(), c.denom())
    }
}

fn product_label_latex(i: u64, j: u64) -> String {
    if i == 2 {
        format!("P_{{2,{j}}}")
    } else if i == j {
        format!("G_{{{i}}}^{{2}}")
    } else {
        format!("G_{{{i}}}G_{{{j}}}")
    }
}

fn product_label_text(i: u64, j: u64) -> String {
    if i == 2 {
        format!("P_{{2,{j}}}")
    } else if i == j {
        format!("G_{i}^2")
    } else {
        format!("G_{i} G_{j}")
    }
}

fn render_with<FG, FL, FC>(vec: &RelationVector, g_label: FG, label: FL, coeff: FC) -> String
where
    FG: Fn(u64) -> String,
    FL: Fn(u64, u64) -> String,
    FC: Fn(&Rational) -> String,
{
    let v = vec.reduced();
    if v.weight() % 2 == 1 || v.is_empty() {
        return "0 = 0".to_string();
    }
    let lhs = if v.g_coeff().is_zero() {
        "0".to_string()
    } else {
        let c = v.g_coeff();
        let cs = if c.is_one() {
            String::new()
        } else {
            coeff(c)
        };
        format!("{cs}{}", g_label(v.weight()))
    };
    let mut rhs = String::new();
    for (&(i, j), c) in v.p_coeffs() {
        let mag = c.abs();
        let cs = if mag.is_one() {
            String::new()
        } else {
            coeff(&mag)
        };
        let term = format!("{cs}{}", label(i, j));
        if rhs.is_empty() {
            if c.is_negative() {
                rhs = format!("-{term}");
            } else {
                rhs = term;
            }
        } else if c.is_negative() {
            rhs.push_str(&format!(" - {term}"));
        } else {
            rhs.push_str(&format!(" + {term}"));
        }
    }
    if rhs.is_empty() {
        rhs = "0".to_string();
    }
    format!("{lhs} = {rhs}")
}

/// Renders the reduced integer form, e.g. `143G_{12} = 42G_{4}G_{8} + 25G_{6}^{2}`.
pub fn render_latex(vec: &RelationVector) -> String {
    render_with(vec, |k| format!("G_{{{k}}}"), product_label_latex, latex_coeff)
}

/// Plain-text sibling of [`render_latex`].
pub fn render_text(vec: &RelationVector) -> String {
    render_with(vec, |k| format!("G_{k}"), product_label_text, |c| {
        format!("{c} ")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use proptest::prelude::*;

    fn spec(r: u64, s: u64, t: u64) -> RelationSpec {
        RelationSpec::new(r, s, t).unwrap()
    }

    fn int(v: i64) -> Rational {
        Rational::from_integer(Int::from(v))
    }

    fn pmap(entries: &[((u64, u64), i64)]) -> BTreeMap<(u64, u64), Rational> {
        entries.iter().map(|&(k, v)| (k, int(v))).collect()
    }

    #[test]
    fn spec_validation() {
        assert!(RelationSpec::new(0, 1, 1).is_err());
        assert!(RelationSpec::new(1, 1, 1).is_err());
        let ok = spec(1, 1, 2);
        assert_eq!(ok.weight(), 3);
        assert_eq!(spec(3, 5, 5).weight(), 12);
        assert_eq!(spec(2, 7, 3).min_entry(), 2);
    }

    #[test]
    fn generator_frozen_vectors() {
        let v = relation_vector(spec(3, 3, 3));
        assert_eq!(v.weight(), 8);
        assert_eq!(*v.g_coeff(), int(63));
        assert_eq!(v.p_coeffs(), &pmap(&[((4, 4), 27)]));
        assert_eq!(v.source(), Some((3, 3, 3)));

        let v = relation_vector(spec(3, 5, 5));
        assert_eq!(*v.g_coeff(), int(715));
        assert_eq!(v.p_coeffs(), &pmap(&[((4, 8), 210), ((6, 6), 125)]));

        let v = relation_vector(spec(3, 3, 5));
        assert_eq!(*v.g_coeff(), int(198));
        assert_eq!(v.p_coeffs(), &pmap(&[((4, 6), 90)]));

        let v = relation_vector(spec(5, 5, 5));
        assert_eq!(*v.g_coeff(), int(2145));
        assert_eq!(v.p_coeffs(), &pmap(&[((6, 8), 1050)]));

        let v = relation_vector(spec(3, 3, 7));
        assert_eq!(*v.g_coeff(), int(572));
        assert_eq!(v.p_coeffs(), &pmap(&[((4, 8), 168), ((6, 6), 100)]));
    }

    #[test]
    fn generator_verifies_interior_triples() {
        for (r, s, t, n) in [
            (3, 3, 3, 30),
            (3, 3, 5, 30),
            (3, 5, 5, 40),
            (5, 5, 5, 40),
            (5, 5, 7, 40),
            (3, 3, 7, 30),
        ] {
            assert!(verify_triple(spec(r, s, t), n), "({r},{s},{t})");
        }
    }

    #[test]
    fn min_two_triples_collapse_or_verify() {
        // the three sums cancel exactly here (checked by hand)
        let v = relation_vector(spec(2, 2, 3));
        assert!(v.is_empty());
        assert!(v.is_degenerate());
        assert!(verify_triple(spec(2, 2, 3), 20));

        // an index-2 triple can still land on a real identity, possibly with
        // the opposite overall sign
        let v = relation_vector(spec(2, 3, 4));
        assert_eq!(*v.g_coeff(), int(-21));
        assert_eq!(v.p_coeffs(), &pmap(&[((4, 4), -9)]));
        assert!(verify_triple(spec(2, 3, 4), 20));
        let r = v.reduced();
        assert_eq!(*r.g_coeff(), int(7));
        assert_eq!(r.p_coeffs(), &pmap(&[((4, 4), 3)]));
    }

    #[test]
    fn min_one_even_weight_is_refuted() {
        let v = relation_vector(spec(1, 1, 3));
        assert_eq!(*v.g_coeff(), int(5));
        assert_eq!(v.p_coeffs(), &pmap(&[((2, 2), 1)]));
        assert!(!verify_triple(spec(1, 1, 3), 20));

        // the derivative part of P_{2,4} is the only grade-2 contribution,
        // so this candidate cannot be a real identity
        let v = relation_vector(spec(1, 3, 3));
        assert_eq!(*v.g_coeff(), int(21));
        assert_eq!(v.p_coeff(2, 4), int(6));
        assert!(!verify_triple(spec(1, 3, 3), 20));

        assert!(!verify_triple(spec(1, 2, 10), 24));
        let res = evaluate_relation(&relation_vector(spec(1, 2, 10)), 24);
        assert!(res.component(5).is_some(), "derivative grade must survive");
    }

    #[test]
    fn odd_weight_degenerates() {
        let v = relation_vector(spec(1, 2, 9));
        assert_eq!(v.weight(), 11);
        assert!(v.p_coeffs().is_empty());
        assert!(v.is_degenerate());
        assert!(verify_triple(spec(1, 2, 9), 10));

        let v = relation_vector(spec(1, 1, 2));
        assert!(evaluate_relation(&v, 10).is_zero());
    }

    #[test]
    fn evaluation_is_sound_under_perturbation() {
        let good = relation_vector(spec(3, 3, 5));
        assert!(evaluate_relation(&good, 30).is_zero());

        let bumped = RelationVector::from_parts(
            good.weight(),
            good.g_coeff() + int(1),
            good.p_coeffs().clone(),
        )
        .unwrap();
        assert!(!evaluate_relation(&bumped, 30).is_zero());

        let mut p = good.p_coeffs().clone();
        p.insert((4, 6), ratio(181, 2));
        let shifted = RelationVector::from_parts(good.weight(), good.g_coeff().clone(), p).unwrap();
        assert!(!evaluate_relation(&shifted, 30).is_zero());
    }

    #[test]
    fn hurwitz_small_cases() {
        assert!(hurwitz_residual(3, 20).is_err());
        for n in 4..=8 {
            assert!(hurwitz_residual(n, 30).unwrap().is_zero(), "n = {n}");
        }
    }

    #[test]
    fn recurrence_6n2_small_cases() {
        assert!(recurrence_6n2_residual(0, 20).is_err());
        for n in 1..=3 {
            assert!(recurrence_6n2_residual(n, 40).unwrap().is_zero(), "n = {n}");
        }
    }

    #[test]
    fn recurrence_6n_matches_generator() {
        assert!(recurrence_6n_vector(1).is_err());
        let v = recurrence_6n_vector(2).unwrap();
        assert_eq!(*v.g_coeff(), int(715));
        assert_eq!(v.p_coeffs(), &pmap(&[((4, 8), 210), ((6, 6), 125)]));
        for n in 2..=5 {
            let direct = recurrence_6n_vector(n).unwrap();
            let gen = relation_vector(spec(2 * n - 1, 2 * n + 1, 2 * n + 1));
            assert_eq!(direct.g_coeff(), gen.g_coeff(), "n = {n}");
            assert_eq!(direct.p_coeffs(), gen.p_coeffs(), "n = {n}");
            assert!(recurrence_6n_residual(n, 6 * n as usize).unwrap().is_zero());
        }
    }

    #[test]
    fn recurrence_6n4_matches_generator() {
        let v = recurrence_6n4_vector(1).unwrap();
        assert_eq!(*v.g_coeff(), int(198));
        assert_eq!(v.p_coeffs(), &pmap(&[((4, 6), 90)]));
        for n in 1..=5 {
            let direct = recurrence_6n4_vector(n).unwrap();
            let gen = relation_vector(spec(2 * n + 1, 2 * n + 1, 2 * n + 3));
            assert_eq!(direct.g_coeff(), gen.g_coeff(), "n = {n}");
            assert_eq!(direct.p_coeffs(), gen.p_coeffs(), "n = {n}");
            assert!(recurrence_6n4_residual(n, (6 * n + 4) as usize)
                .unwrap()
                .is_zero());
        }
    }

    #[test]
    fn reduced_reproduces_display_forms() {
        let cases: Vec<(RelationVector, i64, Vec<((u64, u64), i64)>)> = vec![
            (recurrence_6n4_vector(1).unwrap(), 11, vec![((4, 6), 5)]),
            (
                recurrence_6n_vector(2).unwrap(),
                143,
                vec![((4, 8), 42), ((6, 6), 25)],
            ),
            (
                recurrence_6n4_vector(2).unwrap(),
                221,
                vec![((6, 10), 60), ((8, 8), 49)],
            ),
            (
                recurrence_6n_vector(3).unwrap(),
                323,
                vec![((6, 12), 55), ((8, 10), 105)],
            ),
            (
                recurrence_6n4_vector(3).unwrap(),
                7429,
                vec![((8, 14), 1001), ((10, 12), 2706)],
            ),
            (
                recurrence_6n_vector(4).unwrap(),
                2185,
                vec![((8, 16), 182), ((10, 14), 546), ((12, 12), 363)],
            ),
        ];
        for (vec, g, p) in cases {
            let r = vec.reduced();
            assert_eq!(*r.g_coeff(), int(g), "weight {}", vec.weight());
            assert_eq!(r.p_coeffs(), &pmap(&p), "weight {}", vec.weight());
        }
    }

    #[test]
    fn symmetric_vector_normalization() {
        let v = symmetric_relation_vector(1).unwrap();
        assert_eq!(*v.g_coeff(), int(21));
        assert_eq!(v.p_coeffs(), &pmap(&[((4, 4), 9)]));

        let v = symmetric_relation_vector(2).unwrap();
        assert_eq!(*v.g_coeff(), int(715));
        assert_eq!(v.p_coeffs(), &pmap(&[((6, 8), 350)]));

        // raw G coefficient is exactly three copies of B(n)
        for n in 1..=6u64 {
            let raw = relation_vector(spec(2 * n + 1, 2 * n + 1, 2 * n + 1));
            assert_eq!(
                *raw.g_coeff(),
                Rational::from_integer(Int::from(3) * b_sum(n)),
                "n = {n}"
            );
        }

        // merged slots agree with the ordered binomial coefficients
        for n in 1..=6u64 {
            let v = symmetric_relation_vector(n).unwrap();
            let mut expect: BTreeMap<(u64, u64), Rational> = BTreeMap::new();
            for m in 1..=n {
                let a = 2 * n + 2 * m;
                let b = 4 * n - 2 * m + 2;
                let c = binomial(a - 1, (2 * n) as i64) * binomial(b - 1, (2 * n) as i64);
                *expect
                    .entry((a.min(b), a.max(b)))
                    .or_insert_with(Rational::zero) += Rational::from_integer(c);
            }
            assert_eq!(v.p_coeffs(), &expect, "n = {n}");
        }
    }

    #[test]
    fn search_prefers_sparse_then_large_triples() {
        assert!(lacunarity_search(7, 5).is_err());
        assert!(lacunarity_search(6, 5).is_err());

        let hits = lacunarity_search(8, 10).unwrap();
        assert!(!hits.is_empty());
        assert_eq!(
            (hits[0].spec.r(), hits[0].spec.s(), hits[0].spec.t()),
            (3, 3, 3)
        );
        assert_eq!(hits[0].sparsity, 1);

        let hits = lacunarity_search(12, 10).unwrap();
        assert!(hits
            .iter()
            .any(|h| (h.spec.r(), h.spec.s(), h.spec.t()) == (3, 5, 5)));
        let reduced = hits[0].vector.reduced();
        assert_eq!(*reduced.g_coeff(), int(143));
        for w in hits.windows(2) {
            assert!(w[0].sparsity <= w[1].sparsity);
        }

        let hits = lacunarity_search(14, 3).unwrap();
        assert_eq!(
            (hits[0].spec.r(), hits[0].spec.s(), hits[0].spec.t()),
            (5, 5, 5)
        );
        assert_eq!(hits[0].sparsity, 1);
    }

    #[test]
    fn bernoulli_identity_structure() {
        let v = relation_vector(spec(3, 3, 3)).reduced();
        let id = bernoulli_identity(&v);
        assert!(id.is_consistent());
        assert_eq!(id.residuals().len(), 1);
        assert_eq!(id.residuals()[&4], Rational::zero());
        assert!(id.zeta_form().contains("14*zr(8) = 12*zr(4)*zr(4)"));
        assert!(id.bernoulli_form().contains("B(8) = -1/30"));

        // 14 zr(8) = 12 zr(4)^2 pins zr(8)
        let forced = ratio(12, 14) * zeta_ratio(4).unwrap() * zeta_ratio(4).unwrap();
        assert_eq!(forced, zeta_ratio(8).unwrap());
        assert_eq!(forced, ratio(1, 9450));

        let bumped = RelationVector::from_parts(8, int(8), pmap(&[((4, 4), 3)])).unwrap();
        assert!(!bernoulli_identity(&bumped).is_consistent());

        // derivative slot reports a zero residual explicitly
        let false_vec = relation_vector(spec(1, 3, 3));
        let id = bernoulli_identity(&false_vec);
        assert_eq!(id.residuals()[&2], Rational::zero());
        // constant terms alone do hold even for this refuted candidate
        assert!(id.is_consistent());
    }

    #[test]
    fn renderings() {
        let v = relation_vector(spec(3, 3, 3));
        assert_eq!(render_latex(&v), "7G_{8} = 3G_{4}^{2}");
        let v = recurrence_6n_vector(2).unwrap();
        assert_eq!(render_latex(&v), "143G_{12} = 42G_{4}G_{8} + 25G_{6}^{2}");
        assert_eq!(render_text(&v), "143 G_12 = 42 G_4 G_8 + 25 G_6^2");
        let v = relation_vector(spec(1, 1, 3));
        assert_eq!(render_latex(&v), "5G_{4} = P_{2,2}");
        let v = relation_vector(spec(1, 2, 9));
        assert_eq!(render_latex(&v), "0 = 0");
    }

    #[test]
    fn from_parts_validation() {
        assert!(RelationVector::from_parts(1, int(1), BTreeMap::new()).is_err());
        assert!(RelationVector::from_parts(12, int(1), pmap(&[((3, 9), 1)])).is_err());
        assert!(RelationVector::from_parts(12, int(1), pmap(&[((8, 4), 1)])).is_err());
        assert!(RelationVector::from_parts(12, int(1), pmap(&[((4, 6), 1)])).is_err());
        let v = RelationVector::from_parts(12, int(1), pmap(&[((4, 8), 0)])).unwrap();
        assert!(v.p_coeffs().is_empty());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn triples_with_min_two_verify(r in 2u64..=7, s in 2u64..=9, t in 2u64..=9) {
            let (mut a, mut b, mut c) = (r, s, t);
            if a > b { std::mem::swap(&mut a, &mut b); }
            if b > c { std::mem::swap(&mut b, &mut c); }
            if a > b { std::mem::swap(&mut a, &mut b); }
            let sp = RelationSpec::new(a, b, c).unwrap();
            prop_assert!(verify_triple(sp, default_precision(sp.weight())));
        }

        #[test]
        fn scaling_preserves_verification(num in 1i64..=40, den in 1i64..=40) {
            let v = relation_vector(spec(3, 5, 5));
            let scaled = v.scaled(&ratio(num, den));
            prop_assert!(evaluate_relation(&scaled, 24).is_zero());
            prop_assert!(evaluate_relation(&scaled.reduced(), 24).is_zero());
        }

        #[test]
        fn single_slot_perturbations_refute(delta_num in 1i64..=9, delta_den in 1i64..=9, slot in 0usize..3, sign in proptest::bool::ANY) {
            let v = relation_vector(spec(3, 5, 5));
            let mut d = ratio(delta_num, delta_den);
            if sign { d = -d; }
            let refuted = match slot {
                0 => RelationVector::from_parts(v.weight(), v.g_coeff() + &d, v.p_coeffs().clone()).unwrap(),
                1 => {
                    let mut p = v.p_coeffs().clone();
                    let c = v.p_coeff(4, 8) + &d;
                    p.insert((4, 8), c);
                    RelationVector::from_parts(v.weight(), v.g_coeff().clone(), p).unwrap()
                }
                _ => {
                    let mut p = v.p_coeffs().clone();
                    let c = v.p_coeff(6, 6) + &d;
                    p.insert((6, 6), c);
                    RelationVector::from_parts(v.weight(), v.g_coeff().clone(), p).unwrap()
                }
            };
            prop_assert!(!evaluate_relation(&refuted, 24).is_zero());
        }
    }
}
