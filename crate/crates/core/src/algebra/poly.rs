//! Dense univariate polynomials over a [`Field`].

use std::fmt;

use super::field::Field;

/// Coefficients are stored lowest degree first with no trailing zeros; the
/// zero polynomial has an empty coefficient vector and degree `None`.
#[derive(Clone, PartialEq)]
pub struct Poly<K> {
    coeffs: Vec<K>,
}

impl<K: Field> Poly<K> {
    pub fn from_coeffs(mut coeffs: Vec<K>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(K::one())
    }

    pub fn constant(c: K) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The variable itself.
    pub fn x() -> Self {
        Poly { coeffs: vec![K::zero(), K::one()] }
    }

    /// `c * x^k`
    pub fn monomial(c: K, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![K::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    /// `x - a`
    pub fn linear_root(a: &K) -> Self {
        Poly { coeffs: vec![a.neg(), K::one()] }
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<K> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> K {
        self.coeffs.get(i).cloned().unwrap_or_else(K::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> K {
        self.coeffs.last().cloned().unwrap_or_else(K::zero)
    }

    /// Order of vanishing at 0; `None` for the zero polynomial.
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> Poly<L> {
        Poly::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    pub fn try_map<L: Field, E>(&self, f: impl Fn(&K) -> Result<L, E>) -> Result<Poly<L>, E> {
        Ok(Poly::from_coeffs(self.coeffs.iter().map(f).collect::<Result<_, _>>()?))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::from_coeffs(out)
    }

    pub fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![K::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect() }
    }

    /// Multiply by `x^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![K::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Divide by `x^k`, dropping lower terms.
    pub fn shift_down(&self, k: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => Self::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|l| l.is_one())
    }

    /// Euclidean division; panics when `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lead_inv = divisor.leading().inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![K::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].mul(&lead_inv);
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub(&c.mul(d));
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Exact quotient; `None` when the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, rhs: &Self) -> Self {
        if self.is_constant() && !self.is_zero() || rhs.is_constant() && !rhs.is_zero() {
            return Self::one();
        }
        if !self.is_zero() && !rhs.is_zero() {
            if let Some(g) = K::poly_gcd_hint(self, rhs) {
                return g;
            }
        }
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `(g, s, t)` with `g = s*self + t*rhs` monic.
    pub fn ext_gcd(&self, rhs: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), rhs.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let l = r0.leading().inv().expect("nonzero");
        (r0.scale(&l), s0.scale(&l), t0.scale(&l))
    }

    pub fn eval(&self, x: &K) -> K {
        let mut acc = K::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&K::from_i64(i as i64)))
                .collect(),
        )
    }

    /// `p(x + a)` by repeated synthetic division.
    pub fn taylor_shift(&self, a: &K) -> Self {
        if a.is_zero() || self.is_constant() {
            return self.clone();
        }
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = c[j + 1].mul(a);
                c[j] = c[j].add(&t);
            }
        }
        Self::from_coeffs(c)
    }

    /// `x^d p(1/x)` with `d = deg p`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::from_coeffs(c)
    }

    /// Square-free factorization (Yun): pairs `(f_i, i)` with `f_i` monic,
    /// square-free, pairwise coprime and `self ~ prod f_i^i`.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact(&a0).expect("gcd divides");
        let mut c = df.div_exact(&a0).expect("gcd divides d");
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a).expect("gcd divides");
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.div_exact(&a).expect("gcd divides");
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// The product of the distinct monic irreducible factors.
    pub fn squarefree_part(&self) -> Self {
        self.squarefree_decomposition().into_iter().fold(Self::one(), |acc, (f, _)| acc.mul(&f))
    }

    /// Resultant via the Euclidean algorithm.
    pub fn resultant(&self, rhs: &Self) -> K {
        let (Some(mut da), Some(mut db)) = (self.degree(), rhs.degree()) else {
            return K::zero();
        };
        let (mut a, mut b) = (self.clone(), rhs.clone());
        let mut acc = K::one();
        loop {
            if db == 0 {
                return acc.mul(&b.leading().pow(da as u32));
            }
            let r = a.rem(&b);
            let Some(dr) = r.degree() else {
                return K::zero();
            };
            // res(a, b) = (-1)^(da db) lc(b)^(da - dr) res(b, r)
            if (da * db) % 2 == 1 {
                acc = acc.neg();
            }
            acc = acc.mul(&b.leading().pow((da - dr) as u32));
            a = b;
            b = r;
            da = db;
            db = dr;
        }
    }

    /// Lagrange interpolation through `(x_i, y_i)` with distinct `x_i`.
    pub fn interpolate(points: &[(K, K)]) -> Self {
        let mut acc = Self::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut basis = Self::one();
            let mut denom = K::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    basis = basis.mul(&Self::linear_root(xj));
                    denom = denom.mul(&xi.sub(xj));
                }
            }
            acc = acc.add(&basis.scale(&yi.div(&denom)));
        }
        acc
    }

    /// Canonical expanded form in the variable `var`, highest degree first.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let mut cs = c.to_string();
            let negative = !c.is_compound() && cs.starts_with('-');
            if negative {
                cs.remove(0);
            }
            let body = if i == 0 {
                if c.is_compound() { format!("({cs})") } else { cs }
            } else if !c.is_compound() && cs == "1" {
                mono
            } else if c.is_compound() {
                format!("({cs})*{mono}")
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

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

impl<K: Field> fmt::Debug for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.display_with("x"))
    }
}

impl<K: Field> fmt::Display for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}
