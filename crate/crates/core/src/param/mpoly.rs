//! Sparse multivariate polynomials in the parameters.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::field::{Field, FieldElem};

/// `sum c_e lambda^e`, exponent vectors of a fixed length.
#[derive(Clone, PartialEq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, FieldElem>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: FieldElem) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, FieldElem::int(1))
    }

    /// `lambda_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, FieldElem::int(1));
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &FieldElem)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn coeff(&self, e: &[u32]) -> FieldElem {
        self.terms.get(e).cloned().unwrap_or_else(FieldElem::zero)
    }

    fn insert_add(&mut self, e: Vec<u32>, c: FieldElem) {
        let v = self.coeff(&e).add(&c);
        if v.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_add(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert_add(e, c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, x)| (e.clone(), x.mul(c))).collect() }
    }

    pub fn eval(&self, point: &[FieldElem]) -> FieldElem {
        assert_eq!(point.len(), self.nvars);
        self.terms.iter().fold(FieldElem::zero(), |acc, (e, c)| {
            let m = e.iter().zip(point).fold(c.clone(), |m, (&k, x)| m.mul(&x.pow(k)));
            acc.add(&m)
        })
    }

    /// Total degree (`None` for zero).
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Divide by the coefficient of the leading (largest) monomial.
    pub fn monic(&self) -> Self {
        match self.terms.iter().next_back() {
            Some((_, c)) => self.scale(&c.inv().expect("nonzero")),
            None => self.clone(),
        }
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) })
                .collect();
            let mono = mono.join("*");
            let mut cs = c.to_string();
            let negative = !c.is_compound() && cs.starts_with('-');
            if negative {
                cs.remove(0);
            }
            if c.is_compound() {
                cs = format!("({cs})");
            }
            let body = if mono.is_empty() {
                cs
            } else if cs == "1" {
                mono
            } else {
                format!("{cs}*{mono}")
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push(if negative { '-' } else { '+' });
            }
            out.push_str(&body);
        }
        out
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("l{i}")).collect();
        write!(f, "{}", self.display_with(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_evaluation() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let p = x.mul(&x).sub(&y.scale(&FieldElem::int(3))).add(&MPoly::one(2));
        let names = vec!["a".to_string(), "b".to_string()];
        assert_eq!(p.display_with(&names), "a^2-3*b+1");
        assert_eq!(p.eval(&[FieldElem::int(2), FieldElem::int(1)]), FieldElem::int(2));
        assert_eq!(p.degree(), Some(2));
        assert!(p.sub(&p).is_zero());
    }
}
