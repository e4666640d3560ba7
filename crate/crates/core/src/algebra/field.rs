//! Coefficient fields.
//!
//! Everything in the crate is generic over [`Field`]. Two concrete families are
//! provided: the rationals (`BigRational`, mostly used internally for
//! factorization) and [`FieldElem`], which is either a rational number or an
//! element of a single simple algebraic extension `Q[x]/(m)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::Poly;

/// Exact field arithmetic.
///
/// `zero()` and `one()` carry no context; implementations promote them when
/// they meet an element of a larger field.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// The value as a rational number, when it is one.
    fn to_rational(&self) -> Option<BigRational>;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(v)))
    }

    fn is_one(&self) -> bool {
        self.sub(&Self::one()).is_zero()
    }

    /// Panics on division by zero; callers check `is_zero` first.
    fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.inv().expect("division by zero in field"))
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// True when `Display` output needs parentheses inside a product.
    fn is_compound(&self) -> bool {
        false
    }

    /// Rough size, used to pick cheap pivots.
    fn complexity(&self) -> usize {
        0
    }

    /// A shortcut for the monic gcd of two nonzero polynomials; `None`
    /// defers to the Euclidean algorithm.
    fn poly_gcd_hint(_a: &Poly<Self>, _b: &Poly<Self>) -> Option<Poly<Self>> {
        None
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
    fn complexity(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn poly_gcd_hint(a: &Poly<Self>, b: &Poly<Self>) -> Option<Poly<Self>> {
        super::modgcd::rational_gcd(a, b)
    }
}

/// Shorthand for a rational constant.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Default cap on the degree of an algebraic extension.
pub const DEFAULT_DEGREE_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtensionError {
    #[error("minimal polynomial must have degree at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("extension degree {degree} exceeds the cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("minimal polynomial {0} is reducible over the rationals")]
    Reducible(String),
    #[error("could not decide irreducibility of {0}")]
    Undecided(String),
    #[error("a tower of algebraic extensions would be required")]
    Tower,
}

/// A simple algebraic extension `Q[x]/(m)` with `m` monic and irreducible.
#[derive(Debug, Clone)]
pub struct NumberField {
    min_poly: Poly<BigRational>,
    name: String,
}

impl NumberField {
    /// Checks monicity (after normalization), irreducibility and the degree cap.
    pub fn new(min_poly: &Poly<BigRational>, name: &str, cap: usize) -> Result<Arc<Self>, ExtensionError> {
        let degree = min_poly.degree().unwrap_or(0);
        if degree < 2 {
            return Err(ExtensionError::DegreeTooSmall(degree));
        }
        if degree > cap {
            return Err(ExtensionError::DegreeCap { degree, cap });
        }
        let m = min_poly.monic();
        match super::factor::is_irreducible_q(&m) {
            Some(true) => {}
            Some(false) => return Err(ExtensionError::Reducible(m.display_with("x"))),
            None => return Err(ExtensionError::Undecided(m.display_with("x"))),
        }
        Ok(Arc::new(NumberField { min_poly: m, name: name.to_string() }))
    }

    pub fn degree(&self) -> usize {
        self.min_poly.degree().unwrap_or(0)
    }

    pub fn min_poly(&self) -> &Poly<BigRational> {
        &self.min_poly
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generator(self: &Arc<Self>) -> FieldElem {
        FieldElem::Alg(AlgElem::new(Arc::clone(self), Poly::x()))
    }

    pub fn same_as(&self, other: &NumberField) -> bool {
        std::ptr::eq(self, other) || (self.name == other.name && self.min_poly == other.min_poly)
    }

    /// Upper bound on `|alpha|` over all complex embeddings.
    pub fn root_bound(&self) -> f64 {
        super::factor::cauchy_bound(&self.min_poly)
    }

    /// Norm of an element `Q(alpha) -> Q`: determinant of the multiplication map.
    pub fn norm(self: &Arc<Self>, elem: &Poly<BigRational>) -> BigRational {
        let d = self.degree();
        let mut rows = Vec::with_capacity(d);
        let mut cur = elem.rem(&self.min_poly);
        for _ in 0..d {
            let mut row = vec![<BigRational as Zero>::zero(); d];
            for (i, c) in cur.coeffs().iter().enumerate() {
                row[i] = c.clone();
            }
            rows.push(row);
            cur = cur.mul(&Poly::x()).rem(&self.min_poly);
        }
        super::matrix::Matrix::from_rows(rows).det()
    }
}

/// An element `a_0 + a_1 x + ... + a_{d-1} x^{d-1}` of a [`NumberField`].
#[derive(Clone)]
pub struct AlgElem {
    field: Arc<NumberField>,
    rep: Poly<BigRational>,
}

impl AlgElem {
    pub fn new(field: Arc<NumberField>, rep: Poly<BigRational>) -> Self {
        let rep = rep.rem(&field.min_poly);
        AlgElem { field, rep }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn rep(&self) -> &Poly<BigRational> {
        &self.rep
    }

    fn rational_value(&self) -> Option<BigRational> {
        match self.rep.degree() {
            None => Some(<BigRational as Zero>::zero()),
            Some(0) => Some(self.rep.coeff(0)),
            _ => None,
        }
    }
}

impl fmt::Debug for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} mod {}]", self.rep.display_with(&self.field.name), self.field.min_poly.display_with(&self.field.name))
    }
}

/// An element of the base field: a rational, or an element of one simple
/// algebraic extension.
///
/// Algebraic elements that happen to be rational are not demoted, so an
/// analysis that starts in an extension stays in it; equality compares values.
#[derive(Clone)]
pub enum FieldElem {
    Rat(BigRational),
    Alg(AlgElem),
}

impl FieldElem {
    pub fn int(v: i64) -> Self {
        FieldElem::Rat(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        FieldElem::Rat(rat(n, d))
    }

    pub fn extension(&self) -> Option<&Arc<NumberField>> {
        match self {
            FieldElem::Rat(_) => None,
            FieldElem::Alg(a) => Some(&a.field),
        }
    }

    /// Re-home a rational-valued element into `field`; `None` for elements
    /// that are algebraic over a different field.
    pub fn embed_into(&self, field: &Arc<NumberField>) -> Option<Self> {
        match self {
            FieldElem::Alg(a) if a.field.same_as(field) => Some(self.clone()),
            _ => self
                .to_rational()
                .map(|q| FieldElem::Alg(AlgElem::new(Arc::clone(field), Poly::constant(q)))),
        }
    }

    /// Drop to the rationals when the value is rational.
    pub fn to_rat_elem(&self) -> Option<Self> {
        self.to_rational().map(FieldElem::Rat)
    }

    fn lift(field: &Arc<NumberField>, q: &BigRational) -> AlgElem {
        AlgElem { field: Arc::clone(field), rep: Poly::constant(q.clone()) }
    }

    fn binary(
        &self,
        rhs: &Self,
        rat_op: impl Fn(&BigRational, &BigRational) -> BigRational,
        alg_op: impl Fn(&AlgElem, &AlgElem) -> AlgElem,
    ) -> Self {
        match (self, rhs) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(rat_op(a, b)),
            (FieldElem::Alg(a), FieldElem::Rat(b)) => FieldElem::Alg(alg_op(a, &Self::lift(&a.field, b))),
            (FieldElem::Rat(a), FieldElem::Alg(b)) => FieldElem::Alg(alg_op(&Self::lift(&b.field, a), b)),
            (FieldElem::Alg(a), FieldElem::Alg(b)) => {
                if a.field.same_as(&b.field) {
                    FieldElem::Alg(alg_op(a, b))
                } else if let Some(q) = b.rational_value() {
                    FieldElem::Alg(alg_op(a, &Self::lift(&a.field, &q)))
                } else if let Some(q) = a.rational_value() {
                    FieldElem::Alg(alg_op(&Self::lift(&b.field, &q), b))
                } else {
                    panic!(
                        "mixing elements of distinct extensions {} and {}",
                        a.field.min_poly.display_with(&a.field.name),
                        b.field.min_poly.display_with(&b.field.name)
                    )
                }
            }
        }
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => a == b,
            (FieldElem::Alg(a), FieldElem::Alg(b)) if a.field.same_as(&b.field) => a.rep == b.rep,
            _ => match (self.to_rational(), other.to_rational()) {
                (Some(a), Some(b)) => a == b,
                _ => false,
            },
        }
    }
}

impl Field for FieldElem {
    fn zero() -> Self {
        FieldElem::Rat(<BigRational as Zero>::zero())
    }
    fn one() -> Self {
        FieldElem::Rat(<BigRational as One>::one())
    }
    fn from_rational(q: &BigRational) -> Self {
        FieldElem::Rat(q.clone())
    }
    fn is_zero(&self) -> bool {
        match self {
            FieldElem::Rat(q) => Zero::is_zero(q),
            FieldElem::Alg(a) => a.rep.is_zero(),
        }
    }
    fn add(&self, rhs: &Self) -> Self {
        self.binary(rhs, |a, b| a + b, |a, b| AlgElem { field: Arc::clone(&a.field), rep: a.rep.add(&b.rep) })
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.binary(rhs, |a, b| a - b, |a, b| AlgElem { field: Arc::clone(&a.field), rep: a.rep.sub(&b.rep) })
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.binary(rhs, |a, b| a * b, |a, b| AlgElem::new(Arc::clone(&a.field), a.rep.mul(&b.rep)))
    }
    fn neg(&self) -> Self {
        match self {
            FieldElem::Rat(q) => FieldElem::Rat(-q),
            FieldElem::Alg(a) => FieldElem::Alg(AlgElem { field: Arc::clone(&a.field), rep: a.rep.neg() }),
        }
    }
    fn inv(&self) -> Option<Self> {
        match self {
            FieldElem::Rat(q) => Field::inv(q).map(FieldElem::Rat),
            FieldElem::Alg(a) => {
                if a.rep.is_zero() {
                    return None;
                }
                // s*rep + t*m = 1 since m is irreducible
                let (g, s, _) = a.rep.ext_gcd(&a.field.min_poly);
                debug_assert_eq!(g.degree(), Some(0));
                Some(FieldElem::Alg(AlgElem::new(Arc::clone(&a.field), s)))
            }
        }
    }
    fn to_rational(&self) -> Option<BigRational> {
        match self {
            FieldElem::Rat(q) => Some(q.clone()),
            FieldElem::Alg(a) => a.rational_value(),
        }
    }
    fn complexity(&self) -> usize {
        match self {
            FieldElem::Rat(q) => q.complexity(),
            FieldElem::Alg(a) => a.rep.coeffs().iter().map(Field::complexity).sum(),
        }
    }
    fn poly_gcd_hint(a: &Poly<Self>, b: &Poly<Self>) -> Option<Poly<Self>> {
        let rational = |p: &Poly<Self>| -> Option<Poly<BigRational>> {
            let cs: Option<Vec<BigRational>> =
                p.coeffs().iter().map(|c| if let FieldElem::Rat(q) = c { Some(q.clone()) } else { None }).collect();
            cs.map(Poly::from_coeffs)
        };
        let g = super::modgcd::rational_gcd(&rational(a)?, &rational(b)?)?;
        Some(Poly::from_coeffs(g.coeffs().iter().cloned().map(FieldElem::Rat).collect()))
    }
    fn is_compound(&self) -> bool {
        match self {
            FieldElem::Rat(_) => false,
            FieldElem::Alg(a) => a.rep.coeffs().iter().filter(|c| !Zero::is_zero(*c)).count() > 1,
        }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Canonical strings: `-3/2`, `2*a-1/3`. Rational values print the same
/// whether or not they live in an extension.
impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_rational() {
            Some(q) => write!(f, "{}", fmt_rational(&q)),
            None => match self {
                FieldElem::Alg(a) => write!(f, "{}", a.rep.display_with(&a.field.name)),
                FieldElem::Rat(_) => unreachable!(),
            },
        }
    }
}

pub fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Absolute value of a rational as an `f64` (saturating).
pub fn rational_abs_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.abs().to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sqrt2() -> Arc<NumberField> {
        let m = Poly::from_coeffs(vec![rat(-2, 1), rat(0, 1), rat(1, 1)]);
        NumberField::new(&m, "a", DEFAULT_DEGREE_CAP).unwrap()
    }

    #[test]
    fn generator_squares_to_two() {
        let k = sqrt2();
        let a = k.generator();
        assert_eq!(a.mul(&a), FieldElem::int(2));
        assert_eq!(a.inv().unwrap().mul(&a), FieldElem::one());
        assert_eq!(a.to_string(), "a");
        assert_eq!(a.add(&FieldElem::frac(1, 2)).to_string(), "a+1/2");
    }

    #[test]
    fn reducible_minimal_polynomial_rejected() {
        let m = Poly::from_coeffs(vec![rat(-1, 1), rat(0, 1), rat(1, 1)]);
        assert!(matches!(NumberField::new(&m, "a", 6), Err(ExtensionError::Reducible(_))));
        let m7 = Poly::from_coeffs(vec![rat(-2, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 1)]);
        assert!(matches!(NumberField::new(&m7, "a", 6), Err(ExtensionError::DegreeCap { .. })));
    }

    #[test]
    fn embedded_rationals_compare_equal() {
        let k = sqrt2();
        let x = FieldElem::frac(3, 4);
        let e = x.embed_into(&k).unwrap();
        assert!(matches!(e, FieldElem::Alg(_)));
        assert_eq!(e, x);
        assert_eq!(e.to_string(), "3/4");
    }

    #[test]
    fn norm_of_generator() {
        let k = sqrt2();
        // N(1 + a) = (1+a)(1-a) = -1
        let e = Poly::from_coeffs(vec![rat(1, 1), rat(1, 1)]);
        assert_eq!(k.norm(&e), rat(-1, 1));
    }

    fn cubic() -> Arc<NumberField> {
        // x^3 - x - 1
        let m = Poly::from_coeffs(vec![rat(-1, 1), rat(-1, 1), rat(0, 1), rat(1, 1)]);
        NumberField::new(&m, "b", DEFAULT_DEGREE_CAP).unwrap()
    }

    fn elem(k: &Arc<NumberField>, c: [i64; 3]) -> FieldElem {
        FieldElem::Alg(AlgElem::new(Arc::clone(k), Poly::from_coeffs(c.iter().map(|&v| rat(v, 1)).collect())))
    }

    proptest! {
        #[test]
        fn field_axioms_in_cubic_extension(a in proptest::array::uniform3(-5i64..5), b in proptest::array::uniform3(-5i64..5), c in proptest::array::uniform3(-5i64..5)) {
            let k = cubic();
            let (x, y, z) = (elem(&k, a), elem(&k, b), elem(&k, c));
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            prop_assert_eq!(x.add(&y).mul(&z), x.mul(&z).add(&y.mul(&z)));
            prop_assert_eq!(x.sub(&x), FieldElem::zero());
            if !x.is_zero() {
                prop_assert_eq!(x.mul(&x.inv().unwrap()), FieldElem::one());
            }
        }
    }
}
