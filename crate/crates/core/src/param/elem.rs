//! The parameter field `Q(l_1, ..., l_r)` (over a base `FieldElem` field) as
//! a tower of rational function fields.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use super::mpoly::MPoly;
use crate::algebra::field::{Field, FieldElem};
use crate::algebra::poly::Poly;
use crate::algebra::ratfun::RatFun;

/// Element of `Q(l_0)(l_1)...`. `Frac { var, f }` is a non-constant rational
/// function of `l_var` whose coefficients only involve `l_0..l_(var-1)`.
#[derive(Clone)]
pub enum ParamElem {
    Const(FieldElem),
    Frac { var: usize, f: Arc<RatFun<ParamElem>>, names: Arc<[String]> },
}

/// The declared parameter names.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamSpace {
    names: Arc<[String]>,
}

impl ParamSpace {
    pub fn new(names: &[String]) -> Self {
        ParamSpace { names: names.to_vec().into() }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The parameter `l_i`.
    pub fn var(&self, i: usize) -> ParamElem {
        ParamElem::Frac { var: i, f: Arc::new(RatFun::var()), names: Arc::clone(&self.names) }
    }
}

impl ParamElem {
    fn level(&self) -> Option<usize> {
        match self {
            ParamElem::Const(_) => None,
            ParamElem::Frac { var, .. } => Some(*var),
        }
    }

    fn names(&self) -> Option<&Arc<[String]>> {
        match self {
            ParamElem::Const(_) => None,
            ParamElem::Frac { names, .. } => Some(names),
        }
    }

    fn lift(&self, v: usize) -> RatFun<ParamElem> {
        match self {
            ParamElem::Frac { var, f, .. } if *var == v => (**f).clone(),
            _ => RatFun::constant(self.clone()),
        }
    }

    fn make(var: usize, f: RatFun<ParamElem>, names: &Arc<[String]>) -> Self {
        match f.as_constant() {
            Some(c) => c,
            None => ParamElem::Frac { var, f: Arc::new(f), names: Arc::clone(names) },
        }
    }

    fn binary(
        &self,
        rhs: &Self,
        on_const: impl Fn(&FieldElem, &FieldElem) -> FieldElem,
        on_fn: impl Fn(&RatFun<ParamElem>, &RatFun<ParamElem>) -> RatFun<ParamElem>,
    ) -> Self {
        if let (ParamElem::Const(a), ParamElem::Const(b)) = (self, rhs) {
            return ParamElem::Const(on_const(a, b));
        }
        let v = self.level().max(rhs.level()).expect("one side is not constant");
        let names = self.names().or(rhs.names()).expect("names");
        Self::make(v, on_fn(&self.lift(v), &rhs.lift(v)), names)
    }

    pub fn constant(c: FieldElem) -> Self {
        ParamElem::Const(c)
    }

    pub fn as_const(&self) -> Option<&FieldElem> {
        match self {
            ParamElem::Const(c) => Some(c),
            ParamElem::Frac { .. } => None,
        }
    }

    /// Value under `l_i = values[i]`; `None` when a denominator vanishes.
    pub fn specialize(&self, values: &[FieldElem]) -> Option<FieldElem> {
        match self {
            ParamElem::Const(c) => Some(c.clone()),
            ParamElem::Frac { var, f, .. } => {
                let at = &values[*var];
                let eval = |p: &Poly<ParamElem>| -> Option<FieldElem> {
                    let mut acc = FieldElem::zero();
                    for c in p.coeffs().iter().rev() {
                        acc = acc.mul(at).add(&c.specialize(values)?);
                    }
                    Some(acc)
                };
                let d = eval(f.den())?;
                if d.is_zero() {
                    return None;
                }
                Some(eval(f.num())?.div(&d))
            }
        }
    }

    /// A representation `N / D` with `N, D` polynomial in the parameters.
    pub fn to_fraction(&self, nvars: usize) -> (MPoly, MPoly) {
        match self {
            ParamElem::Const(c) => (MPoly::constant(nvars, c.clone()), MPoly::one(nvars)),
            ParamElem::Frac { var, f, .. } => {
                let parts: Vec<(MPoly, MPoly)> =
                    f.num().coeffs().iter().chain(f.den().coeffs()).map(|c| c.to_fraction(nvars)).collect();
                let cleared = clear_denominators(&parts, nvars);
                let (num, den) = cleared.split_at(f.num().coeffs().len());
                let x = MPoly::var(nvars, *var);
                let combine = |cs: &[MPoly]| {
                    let mut acc = MPoly::zero(nvars);
                    let mut power = MPoly::one(nvars);
                    for c in cs {
                        acc = acc.add(&c.mul(&power));
                        power = power.mul(&x);
                    }
                    acc
                };
                (combine(num), combine(den))
            }
        }
    }

    /// Every parameter polynomial whose vanishing blocks `specialize`.
    pub fn denominators(&self, nvars: usize) -> Vec<MPoly> {
        match self {
            ParamElem::Const(_) => Vec::new(),
            ParamElem::Frac { f, .. } => {
                let mut out = vec![self.to_fraction(nvars).1];
                for c in f.num().coeffs().iter().chain(f.den().coeffs()) {
                    out.extend(c.denominators(nvars));
                }
                out
            }
        }
    }
}

/// `n_i * L / d_i` for fractions `n_i / d_i`, with `L` the product of the
/// distinct non-constant `d_i`.
pub fn clear_denominators(parts: &[(MPoly, MPoly)], nvars: usize) -> Vec<MPoly> {
    let mut distinct: Vec<&MPoly> = Vec::new();
    for (_, d) in parts {
        if !d.is_constant() && !distinct.contains(&d) {
            distinct.push(d);
        }
    }
    parts
        .iter()
        .map(|(n, d)| {
            let others = distinct.iter().filter(|x| **x != d).fold(n.clone(), |acc, x| acc.mul(x));
            if d.is_constant() {
                others.scale(&d.coeff(&vec![0; nvars]).inv().expect("nonzero"))
            } else {
                others
            }
        })
        .collect()
}

fn witness_point(nvars: usize, k: i64) -> Vec<FieldElem> {
    (0..nvars as i64).map(|i| FieldElem::frac(37 + 17 * i + 101 * k, 11 + 2 * i + 3 * k)).collect()
}

/// Specialization keeping the degree, or `None`.
fn specialize_poly(p: &Poly<ParamElem>, values: &[FieldElem]) -> Option<Poly<FieldElem>> {
    let q = Poly::from_coeffs(p.coeffs().iter().map(|c| c.specialize(values)).collect::<Option<Vec<_>>>()?);
    (q.degree() == p.degree()).then_some(q)
}

/// `deg gcd(a^c, b^c) >= deg gcd(a, b)` whenever `c` keeps both degrees, so a
/// trivial specialized gcd proves coprimality.
fn coprime_at(a: &Poly<ParamElem>, b: &Poly<ParamElem>, values: &[FieldElem]) -> bool {
    match (specialize_poly(a, values), specialize_poly(b, values)) {
        (Some(x), Some(y)) => x.gcd(&y).degree() == Some(0),
        _ => false,
    }
}

fn space_size(p: &Poly<ParamElem>) -> Option<usize> {
    p.coeffs().iter().find_map(|c| c.names().map(|n| n.len()))
}

impl PartialEq for ParamElem {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (ParamElem::Const(a), ParamElem::Const(b)) => a == b,
            (ParamElem::Frac { var: v1, f: f1, .. }, ParamElem::Frac { var: v2, f: f2, .. }) => v1 == v2 && f1 == f2,
            _ => false,
        }
    }
}

impl Field for ParamElem {
    fn zero() -> Self {
        ParamElem::Const(FieldElem::zero())
    }
    fn one() -> Self {
        ParamElem::Const(FieldElem::one())
    }
    fn from_rational(q: &BigRational) -> Self {
        ParamElem::Const(FieldElem::from_rational(q))
    }
    fn is_zero(&self) -> bool {
        matches!(self, ParamElem::Const(c) if c.is_zero())
    }
    fn add(&self, rhs: &Self) -> Self {
        self.binary(rhs, |a, b| a.add(b), |a, b| a.add_fn(b))
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.binary(rhs, |a, b| a.sub(b), |a, b| a.sub_fn(b))
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.binary(rhs, |a, b| a.mul(b), |a, b| a.mul_fn(b))
    }
    fn neg(&self) -> Self {
        match self {
            ParamElem::Const(c) => ParamElem::Const(c.neg()),
            ParamElem::Frac { var, f, names } => ParamElem::Frac { var: *var, f: Arc::new(f.neg_fn()), names: Arc::clone(names) },
        }
    }
    fn inv(&self) -> Option<Self> {
        match self {
            ParamElem::Const(c) => c.inv().map(ParamElem::Const),
            ParamElem::Frac { var, f, names } => Some(Self::make(*var, f.inv_fn()?, names)),
        }
    }
    fn to_rational(&self) -> Option<BigRational> {
        self.as_const().and_then(|c| c.to_rational())
    }
    /// Recognizes coprime inputs and parameter-free gcds (the common case for
    /// denominators such as `z (z - 1)`) by specialization.
    fn poly_gcd_hint(a: &Poly<Self>, b: &Poly<Self>) -> Option<Poly<Self>> {
        let nvars = space_size(a).or(space_size(b))?;
        let (p1, p2) = (witness_point(nvars, 0), witness_point(nvars, 1));
        let h = specialize_poly(a, &p1)?.gcd(&specialize_poly(b, &p1)?);
        if h.degree() == Some(0) {
            return Some(Poly::one());
        }
        if specialize_poly(a, &p2)?.gcd(&specialize_poly(b, &p2)?) != h {
            return None;
        }
        let h = h.map(|c| ParamElem::Const(c.clone()));
        let (a1, b1) = (a.div_exact(&h)?, b.div_exact(&h)?);
        coprime_at(&a1, &b1, &p1).then_some(h)
    }

    fn complexity(&self) -> usize {
        match self {
            ParamElem::Const(c) => c.complexity(),
            ParamElem::Frac { f, .. } => 1 + f.complexity(),
        }
    }
    fn is_compound(&self) -> bool {
        match self {
            ParamElem::Const(c) => c.is_compound(),
            ParamElem::Frac { f, .. } => f.is_compound(),
        }
    }
}

impl fmt::Display for ParamElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamElem::Const(c) => write!(f, "{c}"),
            ParamElem::Frac { var, f: g, names } => write!(f, "{}", g.display_with(&names[*var])),
        }
    }
}

impl fmt::Debug for ParamElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
