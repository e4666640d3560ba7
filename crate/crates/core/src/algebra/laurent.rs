//! Truncated Laurent series at `t = 0`.

use super::field::Field;
use super::poly::Poly;
use super::ratfun::RatFun;

/// First `count` coefficients of `n / d` as a power series; `d(0) != 0`.
pub fn series_quotient<K: Field>(n: &Poly<K>, d: &Poly<K>, count: usize) -> Vec<K> {
    let d0_inv = d.coeff(0).inv().expect("series quotient needs d(0) != 0");
    let mut out: Vec<K> = Vec::with_capacity(count);
    for k in 0..count {
        let mut acc = n.coeff(k);
        for (j, dj) in d.coeffs().iter().enumerate().skip(1).take(k) {
            if !dj.is_zero() {
                acc = acc.sub(&dj.mul(&out[k - j]));
            }
        }
        out.push(acc.mul(&d0_inv));
    }
    out
}

/// `sum_{i} coeffs[i] t^(valuation + i) + O(t^(precision + 1))`.
///
/// Coefficients are exact for every order up to and including `precision`.
/// A series with no known nonzero coefficient is "zero to precision" and has
/// `valuation == precision + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries<K> {
    valuation: i64,
    coeffs: Vec<K>,
    precision: i64,
}

impl<K: Field> LaurentSeries<K> {
    /// Normalizes so that the leading stored coefficient is nonzero.
    pub fn new(valuation: i64, coeffs: Vec<K>, precision: i64) -> Self {
        let mut s = LaurentSeries { valuation, coeffs, precision };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let keep = (self.precision - self.valuation + 1).max(0) as usize;
        self.coeffs.truncate(keep);
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(k) => {
                self.coeffs.drain(..k);
                self.valuation += k as i64;
            }
            None => {
                self.coeffs.clear();
                self.valuation = self.precision + 1;
            }
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `t^k`; `None` beyond the tracked precision.
    pub fn coeff(&self, k: i64) -> Option<K> {
        if k > self.precision {
            return None;
        }
        if k < self.valuation {
            return Some(K::zero());
        }
        Some(self.coeffs.get((k - self.valuation) as usize).cloned().unwrap_or_else(K::zero))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let precision = self.precision.min(rhs.precision);
        let low = self.valuation.min(rhs.valuation).min(precision + 1);
        let coeffs = (low..=precision)
            .map(|k| self.coeff(k).unwrap().add(&rhs.coeff(k).unwrap()))
            .collect();
        Self::new(low, coeffs, precision)
    }

    /// Precision of a product is bounded by each factor's precision shifted by
    /// the other's valuation.
    pub fn mul(&self, rhs: &Self) -> Self {
        let precision = (self.precision + rhs.valuation).min(rhs.precision + self.valuation);
        let low = self.valuation + rhs.valuation;
        if precision < low {
            return Self::new(precision + 1, Vec::new(), precision);
        }
        let len = (precision - low + 1) as usize;
        let mut coeffs = vec![K::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j < len {
                    coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
                }
            }
        }
        Self::new(low, coeffs, precision)
    }
}

/// Expansion of `f` at `t = 0`, exact through order `prec`.
pub fn laurent_expand<K: Field>(f: &RatFun<K>, prec: i64) -> LaurentSeries<K> {
    let (low, coeffs) = f.laurent_terms(prec + 1);
    LaurentSeries::new(low, coeffs, prec)
}

/// Order of vanishing at 0 (`None` = `+inf`).
pub fn valuation_at_zero<K: Field>(f: &RatFun<K>) -> Option<i64> {
    f.valuation()
}

/// Default expansion precision `2 n (q + 2)` for a local system of dimension
/// `n` whose matrix has a pole of order `q` at 0.
pub fn default_precision(n: usize, pole_order: usize) -> i64 {
    (2 * n * (pole_order + 2)) as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FieldElem;
    use proptest::prelude::*;

    fn poly(c: &[i64]) -> Poly<FieldElem> {
        Poly::from_coeffs(c.iter().map(|&v| FieldElem::int(v)).collect())
    }

    fn rf(n: &[i64], d: &[i64]) -> RatFun<FieldElem> {
        RatFun::new(poly(n), poly(d)).unwrap()
    }

    fn ints(s: &LaurentSeries<FieldElem>) -> Vec<i64> {
        (s.valuation()..=s.precision()).map(|k| s.coeff(k).unwrap().to_string().parse().unwrap()).collect()
    }

    #[test]
    fn geometric_series() {
        let s = laurent_expand(&rf(&[1], &[1, -1]), 3);
        assert_eq!(s.valuation(), 0);
        assert_eq!(ints(&s), vec![1, 1, 1, 1]);
    }

    #[test]
    fn pure_pole() {
        let s = laurent_expand(&rf(&[1], &[0, 0, 1]), 0);
        assert_eq!(s.valuation(), -2);
        assert_eq!(ints(&s), vec![1, 0, 0]);
    }

    #[test]
    fn polynomial_division_oracle() {
        // (t^2 + t)/t^3 = t^-2 + t^-1 exactly
        let s = laurent_expand(&rf(&[0, 1, 1], &[0, 0, 0, 1]), 1);
        assert_eq!(s.valuation(), -2);
        assert_eq!(ints(&s), vec![1, 1, 0, 0]);
    }

    #[test]
    fn zero_to_precision() {
        let s = laurent_expand(&rf(&[0, 0, 0, 0, 1], &[1]), 2);
        assert!(s.is_zero_to_precision());
        assert_eq!(s.valuation(), 3);
    }

    proptest! {
        #[test]
        fn expansion_is_multiplicative(
            (an, ad) in (proptest::collection::vec(-3i64..4, 1..4), proptest::collection::vec(-3i64..4, 1..4)),
            (bn, bd) in (proptest::collection::vec(-3i64..4, 1..4), proptest::collection::vec(-3i64..4, 1..4)),
        ) {
            let (Some(f), Some(g)) = (RatFun::new(poly(&an), poly(&ad)), RatFun::new(poly(&bn), poly(&bd))) else { return Ok(()) };
            prop_assume!(!f.is_zero() && !g.is_zero());
            let prec = 6;
            let lhs = laurent_expand(&f.mul_fn(&g), prec);
            let rhs = laurent_expand(&f, prec).mul(&laurent_expand(&g, prec));
            for k in lhs.valuation().min(rhs.valuation())..=rhs.precision().min(lhs.precision()) {
                prop_assert_eq!(lhs.coeff(k), rhs.coeff(k));
            }
        }
    }
}
