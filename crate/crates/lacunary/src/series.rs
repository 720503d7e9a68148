//! Dense truncated q-series with exact rational coefficients, plus a graded
//! variant keyed by powers of pi^2.
//!
//! A [`QSeries`] of precision N stores the coefficients of q^0..q^{N-1};
//! every binary operation truncates to the smaller operand precision, so
//! precision only ever shrinks and all stored coefficients stay exact.
//!
//! A [`GradedQSeries`] is a finite sum  sum_m pi^{2m} f_m(q)  represented as
//! grade -> plain series.  Since pi is transcendental, such a sum vanishes
//! identically iff every graded component vanishes, which is what makes the
//! zero test meaningful for quasimodular combinations.  Grades add under
//! multiplication and are preserved by the q-derivative q d/dq.  An optional
//! weight tag rides along purely as a sanity check: tags add under
//! multiplication and gain 2 under the q-derivative.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::exact::Rational;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    /// Series from explicit coefficients; precision = coeffs.len() >= 1.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        QSeries { coeffs }
    }

    pub fn zero(precision: usize) -> Self {
        assert!(precision >= 1);
        QSeries {
            coeffs: vec![Rational::zero(); precision],
        }
    }

    pub fn constant(c: Rational, precision: usize) -> Self {
        let mut s = QSeries::zero(precision);
        s.coeffs[0] = c;
        s
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of q^n; n must be below the precision.
    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Copy truncated to precision n (1 <= n <= current precision).
    pub fn truncated(&self, n: usize) -> Self {
        assert!(n >= 1 && n <= self.coeffs.len());
        QSeries {
            coeffs: self.coeffs[..n].to_vec(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// q d/dq: multiplies the coefficient of q^n by n.  Precision unchanged.
    pub fn q_derivative(&self) -> Self {
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c * Rational::from_integer(n.into()))
                .collect(),
        }
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        QSeries {
            coeffs: (0..n).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect(),
        }
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        QSeries {
            coeffs: (0..n).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect(),
        }
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let mut coeffs = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        QSeries { coeffs }
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// Finite sum of pi^{2m}-graded plain series.  Zero components are never
/// stored; all stored components share `precision`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedQSeries {
    precision: usize,
    weight: Option<u64>,
    components: BTreeMap<usize, QSeries>,
}

fn combine_add_weights(a: Option<u64>, b: Option<u64>) -> Option<u64> {
    match (a, b) {
        (Some(x), Some(y)) if x == y => Some(x),
        _ => None,
    }
}

impl GradedQSeries {
    pub fn zero(precision: usize) -> Self {
        assert!(precision >= 1);
        GradedQSeries {
            precision,
            weight: None,
            components: BTreeMap::new(),
        }
    }

    pub fn zero_with_weight(precision: usize, weight: u64) -> Self {
        let mut z = GradedQSeries::zero(precision);
        z.weight = Some(weight);
        z
    }

    /// Single-grade series pi^{2 grade} * part.
    pub fn from_component(grade: usize, part: QSeries, weight: Option<u64>) -> Self {
        let precision = part.precision();
        let mut components = BTreeMap::new();
        if !part.is_zero() {
            components.insert(grade, part);
        }
        GradedQSeries {
            precision,
            weight,
            components,
        }
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn weight(&self) -> Option<u64> {
        self.weight
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component(&self, grade: usize) -> Option<&QSeries> {
        self.components.get(&grade)
    }

    pub fn grades(&self) -> impl Iterator<Item = usize> + '_ {
        self.components.keys().copied()
    }

    pub fn components(&self) -> &BTreeMap<usize, QSeries> {
        &self.components
    }

    /// Constant term of every stored grade (used for the Bernoulli-number
    /// view of a relation).
    pub fn constant_terms(&self) -> BTreeMap<usize, Rational> {
        self.components
            .iter()
            .map(|(g, s)| (*g, s.coeff(0).clone()))
            .collect()
    }

    pub fn truncated(&self, n: usize) -> Self {
        assert!(n >= 1 && n <= self.precision);
        let mut components = BTreeMap::new();
        for (g, s) in &self.components {
            let t = s.truncated(n);
            if !t.is_zero() {
                components.insert(*g, t);
            }
        }
        GradedQSeries {
            precision: n,
            weight: self.weight,
            components,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return GradedQSeries {
                precision: self.precision,
                weight: self.weight,
                components: BTreeMap::new(),
            };
        }
        GradedQSeries {
            precision: self.precision,
            weight: self.weight,
            components: self
                .components
                .iter()
                .map(|(g, s)| (*g, s.scale(c)))
                .collect(),
        }
    }

    /// q d/dq applied per grade; grades are untouched, the weight tag
    /// (when present) gains 2.  Grades whose derivative vanishes are pruned.
    pub fn q_derivative(&self) -> Self {
        let mut components = BTreeMap::new();
        for (g, s) in &self.components {
            let d = s.q_derivative();
            if !d.is_zero() {
                components.insert(*g, d);
            }
        }
        GradedQSeries {
            precision: self.precision,
            weight: self.weight.map(|w| w + 2),
            components,
        }
    }
}

impl Add for &GradedQSeries {
    type Output = GradedQSeries;
    fn add(self, rhs: &GradedQSeries) -> GradedQSeries {
        let n = self.precision.min(rhs.precision);
        let mut components: BTreeMap<usize, QSeries> = BTreeMap::new();
        for (g, s) in self.components.iter().chain(rhs.components.iter()) {
            let t = s.truncated(n);
            match components.remove(g) {
                Some(prev) => {
                    let sum = &prev + &t;
                    if !sum.is_zero() {
                        components.insert(*g, sum);
                    }
                }
                None => {
                    if !t.is_zero() {
                        components.insert(*g, t);
                    }
                }
            }
        }
        GradedQSeries {
            precision: n,
            weight: combine_add_weights(self.weight, rhs.weight),
            components,
        }
    }
}

impl Sub for &GradedQSeries {
    type Output = GradedQSeries;
    fn sub(self, rhs: &GradedQSeries) -> GradedQSeries {
        let minus_one = -Rational::from_integer(1.into());
        self + &rhs.scale(&minus_one)
    }
}

impl Mul for &GradedQSeries {
    type Output = GradedQSeries;
    fn mul(self, rhs: &GradedQSeries) -> GradedQSeries {
        let n = self.precision.min(rhs.precision);
        let mut components: BTreeMap<usize, QSeries> = BTreeMap::new();
        for (g1, s1) in &self.components {
            let s1 = s1.truncated(n);
            for (g2, s2) in &rhs.components {
                let prod = &s1 * &s2.truncated(n);
                let grade = g1 + g2;
                match components.remove(&grade) {
                    Some(prev) => {
                        let sum = &prev + &prod;
                        if !sum.is_zero() {
                            components.insert(grade, sum);
                        }
                    }
                    None => {
                        if !prod.is_zero() {
                            components.insert(grade, prod);
                        }
                    }
                }
            }
        }
        let weight = match (self.weight, rhs.weight) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        GradedQSeries {
            precision: n,
            weight,
            components,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use proptest::prelude::*;

    fn qs(vals: &[(i64, i64)]) -> QSeries {
        QSeries::new(vals.iter().map(|&(p, q)| ratio(p, q)).collect())
    }

    #[test]
    fn add_truncates_to_min_precision() {
        let a = qs(&[(1, 1), (2, 1), (3, 1)]);
        let b = qs(&[(1, 2), (1, 3)]);
        let c = &a + &b;
        assert_eq!(c.precision(), 2);
        assert_eq!(c.coeff(0), &ratio(3, 2));
        assert_eq!(c.coeff(1), &ratio(7, 3));
    }

    #[test]
    fn mul_is_truncated_cauchy_product() {
        // (1 + q)(1 - q) = 1 - q^2
        let a = qs(&[(1, 1), (1, 1), (0, 1)]);
        let b = qs(&[(1, 1), (-1, 1), (0, 1)]);
        let c = &a * &b;
        assert_eq!(c.coeffs(), &[ratio(1, 1), ratio(0, 1), ratio(-1, 1)]);
    }

    #[test]
    fn q_derivative_multiplies_by_exponent() {
        let a = qs(&[(5, 1), (7, 2), (1, 3)]);
        let d = a.q_derivative();
        assert_eq!(d.coeffs(), &[ratio(0, 1), ratio(7, 2), ratio(2, 3)]);
    }

    #[test]
    fn zero_detection() {
        assert!(QSeries::zero(4).is_zero());
        assert!(!qs(&[(0, 1), (1, 5)]).is_zero());
        let a = qs(&[(1, 2), (3, 4)]);
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn graded_cancellation_prunes_components() {
        let s = qs(&[(1, 1), (2, 1)]);
        let a = GradedQSeries::from_component(1, s.clone(), Some(4));
        let b = a.scale(&ratio(-1, 1));
        let sum = &a + &b;
        assert!(sum.is_zero());
        assert_eq!(sum.precision(), 2);
    }

    #[test]
    fn graded_mul_adds_grades_and_weights() {
        let a = GradedQSeries::from_component(2, qs(&[(1, 1), (1, 1)]), Some(4));
        let b = GradedQSeries::from_component(3, qs(&[(2, 1), (0, 1)]), Some(6));
        let p = &a * &b;
        assert_eq!(p.grades().collect::<Vec<_>>(), vec![5]);
        assert_eq!(p.weight(), Some(10));
        assert_eq!(p.component(5).unwrap().coeffs(), &[ratio(2, 1), ratio(2, 1)]);
    }

    #[test]
    fn graded_derivative_keeps_grade_bumps_weight() {
        let a = GradedQSeries::from_component(1, qs(&[(3, 1), (5, 1)]), Some(2));
        let d = a.q_derivative();
        assert_eq!(d.grades().collect::<Vec<_>>(), vec![1]);
        assert_eq!(d.weight(), Some(4));
        assert_eq!(d.component(1).unwrap().coeffs(), &[ratio(0, 1), ratio(5, 1)]);
        // constants die: derivative of a constant component is pruned
        let c = GradedQSeries::from_component(2, qs(&[(9, 1)]), Some(4));
        assert!(c.q_derivative().is_zero());
    }

    #[test]
    fn mixed_weight_add_drops_tag() {
        let a = GradedQSeries::from_component(1, qs(&[(1, 1)]), Some(2));
        let b = GradedQSeries::from_component(2, qs(&[(1, 1)]), Some(4));
        assert_eq!((&a + &b).weight(), None);
        let c = GradedQSeries::from_component(2, qs(&[(1, 1)]), Some(4));
        assert_eq!((&b + &c).weight(), Some(4));
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-60i64..=60, 1i64..=12).prop_map(|(p, q)| ratio(p, q))
    }

    fn arb_series() -> impl Strategy<Value = QSeries> {
        prop::collection::vec(arb_rational(), 1..=7).prop_map(QSeries::new)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn ring_axioms(a in arb_series(), b in arb_series(), c in arb_series()) {
            let n = a.precision().min(b.precision()).min(c.precision());
            // commutativity
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            // associativity (compare at the common precision)
            prop_assert_eq!((&(&a + &b) + &c).truncated(n), (&a + &(&b + &c)).truncated(n));
            prop_assert_eq!((&(&a * &b) * &c).truncated(n), (&a * &(&b * &c)).truncated(n));
            // distributivity
            prop_assert_eq!(
                (&a * &(&b + &c)).truncated(n),
                (&(&a * &b) + &(&a * &c)).truncated(n)
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]
        #[test]
        fn leibniz_rule(a in arb_series(), b in arb_series()) {
            let lhs = (&a * &b).q_derivative();
            let rhs = &(&a.q_derivative() * &b) + &(&a * &b.q_derivative());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn truncation_commutes_with_ops(a in arb_series(), b in arb_series(), cut in 1usize..=4) {
            let n = a.precision().min(b.precision());
            prop_assume!(cut <= n);
            prop_assert_eq!((&a + &b).truncated(cut), &a.truncated(cut) + &b.truncated(cut));
            prop_assert_eq!((&a * &b).truncated(cut), &a.truncated(cut) * &b.truncated(cut));
        }
    }
}
