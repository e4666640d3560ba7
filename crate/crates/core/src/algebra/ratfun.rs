//! Reduced rational functions in one variable.

use std::fmt;

use super::field::Field;
use super::poly::Poly;

/// `num / den` with `den` monic and `gcd(num, den) = 1`, so equality is
/// structural. Zero is `0 / 1`.
#[derive(Clone, PartialEq)]
pub struct RatFun<K> {
    num: Poly<K>,
    den: Poly<K>,
}

impl<K: Field> RatFun<K> {
    /// Reduces `num / den`; `None` when `den` is zero.
    pub fn new(num: Poly<K>, den: Poly<K>) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Self::zero_fn());
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd"), den.div_exact(&g).expect("gcd"))
        };
        let l = d.leading();
        if !l.is_one() {
            let li = l.inv().expect("nonzero");
            n = n.scale(&li);
            d = d.scale(&li);
        }
        Some(RatFun { num: n, den: d })
    }

    pub fn from_poly(p: Poly<K>) -> Self {
        RatFun { num: p, den: Poly::one() }
    }

    pub fn constant(c: K) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero_fn() -> Self {
        RatFun { num: Poly::zero(), den: Poly::one() }
    }

    /// The variable.
    pub fn var() -> Self {
        Self::from_poly(Poly::x())
    }

    /// `x^k` for any integer `k`.
    pub fn var_pow(k: i64) -> Self {
        if k >= 0 {
            Self::from_poly(Poly::monomial(K::one(), k as usize))
        } else {
            RatFun { num: Poly::one(), den: Poly::monomial(K::one(), (-k) as usize) }
        }
    }

    pub fn num(&self) -> &Poly<K> {
        &self.num
    }

    pub fn den(&self) -> &Poly<K> {
        &self.den
    }

    pub fn is_poly(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn as_constant(&self) -> Option<K> {
        (self.is_poly() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> RatFun<L> {
        RatFun::new(self.num.map(&f), self.den.map(&f)).expect("map sends a monic denominator to zero")
    }

    /// Order of vanishing at `x = 0`; `None` stands for `+inf` (zero function).
    pub fn valuation(&self) -> Option<i64> {
        let vn = self.num.low_order()? as i64;
        let vd = self.den.low_order().expect("denominator nonzero") as i64;
        Some(vn - vd)
    }

    /// Value at 0; `None` if there is a pole there.
    pub fn value_at_zero(&self) -> Option<K> {
        match self.valuation() {
            None => Some(K::zero()),
            Some(v) if v > 0 => Some(K::zero()),
            Some(0) => Some(self.num.coeff(0).div(&self.den.coeff(0))),
            Some(_) => None,
        }
    }

    /// Whether the denominator is prime to `x`.
    pub fn is_unit_denominator(&self) -> bool {
        !self.den.coeff(0).is_zero()
    }

    pub fn eval(&self, x: &K) -> Option<K> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x).div(&d))
        }
    }

    pub fn derivative(&self) -> Self {
        if self.is_poly() {
            return Self::from_poly(self.num.derivative());
        }
        // (n/d)' = (n' d - n d') / d^2, reduced through g = gcd(d, d')
        let dd = self.den.derivative();
        let g = self.den.gcd(&dd);
        let d1 = self.den.div_exact(&g).expect("gcd");
        let dd1 = dd.div_exact(&g).expect("gcd");
        let num = self.num.derivative().mul(&d1).sub(&self.num.mul(&dd1));
        Self::new(num, d1.mul(&self.den)).expect("nonzero")
    }

    /// `f(x + a)`.
    pub fn shift(&self, a: &K) -> Self {
        RatFun::new(self.num.taylor_shift(a), self.den.taylor_shift(a)).expect("nonzero")
    }

    /// `f(1/x)`.
    pub fn invert_variable(&self) -> Self {
        let dn = self.num.degree().unwrap_or(0) as i64;
        let dd = self.den.degree().unwrap_or(0) as i64;
        let n = self.num.reversed();
        let d = self.den.reversed();
        // f(1/x) = x^(dd - dn) rev(n) / rev(d)
        let (n, d) = if dd >= dn { (n.shift_up((dd - dn) as usize), d) } else { (n, d.shift_up((dn - dd) as usize)) };
        RatFun::new(n, d).expect("nonzero")
    }

    /// `f(g(x))`.
    pub fn compose(&self, g: &Self) -> Self {
        let horner = |p: &Poly<K>| {
            let mut acc = Self::zero_fn();
            for c in p.coeffs().iter().rev() {
                acc = acc.mul_fn(g).add_fn(&Self::constant(c.clone()));
            }
            acc
        };
        horner(&self.num).div_fn(&horner(&self.den)).expect("composition makes the denominator vanish")
    }

    pub fn add_fn(&self, rhs: &Self) -> Self {
        if self.num.is_zero() {
            return rhs.clone();
        }
        if rhs.num.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return Self::new(self.num.add(&rhs.num), self.den.clone()).expect("nonzero");
        }
        let g = self.den.gcd(&rhs.den);
        if g.degree() == Some(0) {
            let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
            // coprime denominators: only cancellation against num is possible, and it cannot occur
            return RatFun { num, den: self.den.mul(&rhs.den) };
        }
        let b1 = self.den.div_exact(&g).expect("gcd");
        let d1 = rhs.den.div_exact(&g).expect("gcd");
        let num = self.num.mul(&d1).add(&rhs.num.mul(&b1));
        Self::new(num, b1.mul(&rhs.den)).expect("nonzero")
    }

    pub fn neg_fn(&self) -> Self {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub_fn(&self, rhs: &Self) -> Self {
        self.add_fn(&rhs.neg_fn())
    }

    pub fn mul_fn(&self, rhs: &Self) -> Self {
        if self.num.is_zero() || rhs.num.is_zero() {
            return Self::zero_fn();
        }
        if self.is_poly() && rhs.is_poly() {
            let c = self.den.coeff(0).mul(&rhs.den.coeff(0));
            return Self::from_poly(self.num.mul(&rhs.num).scale(&c.inv().expect("nonzero")));
        }
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let split = |p: &Poly<K>, g: &Poly<K>| if g.degree() == Some(0) { p.clone() } else { p.div_exact(g).expect("gcd") };
        let num = split(&self.num, &g1).mul(&split(&rhs.num, &g2));
        let den = split(&self.den, &g2).mul(&split(&rhs.den, &g1));
        let l = den.leading();
        if l.is_one() {
            RatFun { num, den }
        } else {
            let li = l.inv().expect("nonzero");
            RatFun { num: num.scale(&li), den: den.scale(&li) }
        }
    }

    pub fn inv_fn(&self) -> Option<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div_fn(&self, rhs: &Self) -> Option<Self> {
        Some(self.mul_fn(&rhs.inv_fn()?))
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero_fn();
        }
        RatFun { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Terms of the Laurent expansion at 0 of order `< upto`, as a Laurent
    /// polynomial `(lowest order, coefficients)`.
    pub fn laurent_terms(&self, upto: i64) -> (i64, Vec<K>) {
        let Some(v) = self.valuation() else {
            return (upto, Vec::new());
        };
        if v >= upto {
            return (upto, Vec::new());
        }
        let count = (upto - v) as usize;
        let vn = self.num.low_order().unwrap();
        let vd = self.den.low_order().unwrap();
        let n = self.num.shift_down(vn);
        let d = self.den.shift_down(vd);
        (v, super::laurent::series_quotient(&n, &d, count))
    }

    /// Build `sum c_i x^(low + i)`.
    pub fn from_laurent(low: i64, coeffs: &[K]) -> Self {
        let p = Poly::from_coeffs(coeffs.to_vec());
        if low >= 0 {
            Self::from_poly(p.shift_up(low as usize))
        } else {
            Self::new(p, Poly::monomial(K::one(), (-low) as usize)).expect("nonzero")
        }
    }

    pub fn display_with(&self, var: &str) -> String {
        if self.is_poly() {
            return self.num.display_with(var);
        }
        let num = self.num.display_with(var);
        // a lone compound constant already prints in parentheses
        let bare_constant = |p: &Poly<K>| p.degree() == Some(0);
        let num = if self.num.term_count() > 1 || (!bare_constant(&self.num) && self.num.coeffs().iter().any(|c| c.is_compound())) {
            format!("({num})")
        } else {
            num
        };
        let den = self.den.display_with(var);
        let den = if self.den.term_count() > 1 || self.den.degree() > Some(1) || self.den.coeffs().iter().any(|c| c.is_compound()) {
            format!("({den})")
        } else {
            den
        };
        format!("{num}/{den}")
    }
}

impl<K: Field> fmt::Debug for RatFun<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("x"))
    }
}

impl<K: Field> fmt::Display for RatFun<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

/// Rational functions form a field, which lets matrices of them reuse the
/// generic linear algebra.
impl<K: Field> Field for RatFun<K> {
    fn zero() -> Self {
        Self::zero_fn()
    }
    fn one() -> Self {
        Self::constant(K::one())
    }
    fn from_rational(q: &num_rational::BigRational) -> Self {
        Self::constant(K::from_rational(q))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        self.add_fn(rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.sub_fn(rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.mul_fn(rhs)
    }
    fn neg(&self) -> Self {
        self.neg_fn()
    }
    fn inv(&self) -> Option<Self> {
        self.inv_fn()
    }
    fn to_rational(&self) -> Option<num_rational::BigRational> {
        self.as_constant().and_then(|c| c.to_rational())
    }
    fn is_one(&self) -> bool {
        self.is_poly() && self.num.degree() == Some(0) && self.num.coeff(0).is_one()
    }
    fn complexity(&self) -> usize {
        let size = |p: &Poly<K>| p.coeffs().iter().map(|c| 1 + c.complexity()).sum::<usize>();
        size(&self.num) + size(&self.den)
    }
    fn is_compound(&self) -> bool {
        !(self.is_poly() && self.num.term_count() <= 1)
    }
}
