//! Factorization over the rationals and over simple algebraic extensions.
//!
//! Over the rationals: squarefree decomposition, rational roots, then a
//! numeric search for factors of higher degree whose candidates are always
//! confirmed by exact division. Over `Q(a)` the norm method is used.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{Field, FieldElem, NumberField};
use super::numeric::{poly_roots, root_error};
use super::poly::Poly;

/// A monic factor with multiplicity. `certified` is false when the factor
/// might split further (search budget exhausted).
#[derive(Clone, Debug, PartialEq)]
pub struct Factor<K: Field> {
    pub poly: Poly<K>,
    pub multiplicity: usize,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Factorization<K: Field> {
    pub unit: K,
    pub factors: Vec<Factor<K>>,
}

impl<K: Field> Factorization<K> {
    /// True when every factor is known to be irreducible.
    pub fn is_complete(&self) -> bool {
        self.factors.iter().all(|f| f.certified)
    }

    pub fn expand(&self) -> Poly<K> {
        self.factors
            .iter()
            .fold(Poly::constant(self.unit.clone()), |acc, f| acc.mul(&f.poly.pow(f.multiplicity as u32)))
    }
}

/// Largest subset count tried by the numeric factor search.
const SUBSET_BUDGET: usize = 1 << 16;
/// Integer scan limit for root searches; above it candidates come from
/// floating point roots.
const SCAN_LIMIT: u64 = 200_000;

/// `1 + max |a_i / a_n|`.
pub fn cauchy_bound(p: &Poly<BigRational>) -> f64 {
    let Some(n) = p.degree() else { return 0.0 };
    let lead = p.leading();
    1.0 + (0..n)
        .map(|i| (p.coeff(i) / &lead).abs().to_f64().unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max)
}

/// Integer coefficients with content 1 and positive leading coefficient.
pub fn primitive_integer(p: &Poly<BigRational>) -> Vec<BigInt> {
    if p.is_zero() {
        return Vec::new();
    }
    let l = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
    ints.into_iter().map(|c| c / &g * &sign).collect()
}

fn int_poly(c: &[BigInt]) -> Poly<BigRational> {
    Poly::from_coeffs(c.iter().map(|v| BigRational::from_integer(v.clone())).collect())
}

fn eval_int(c: &[BigInt], x: &BigInt) -> BigInt {
    c.iter().rev().fold(BigInt::zero(), |acc, a| acc * x + a)
}

fn complex_coeffs(c: &[BigInt]) -> Vec<Complex64> {
    c.iter().map(|v| Complex64::new(v.to_f64().unwrap_or(f64::INFINITY), 0.0)).collect()
}

/// Distinct integer roots, ascending.
pub fn integer_roots(p: &Poly<BigRational>) -> Vec<BigInt> {
    if p.is_zero() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let low = p.low_order().unwrap_or(0);
    if low > 0 {
        out.push(BigInt::zero());
    }
    let q = p.shift_down(low).squarefree_part();
    if q.degree().unwrap_or(0) == 0 {
        return out;
    }
    let c = primitive_integer(&q);
    let a0 = c[0].abs();
    let bound = cauchy_bound(&q);
    if bound <= SCAN_LIMIT as f64 {
        let b = bound.floor() as u64;
        for k in 1..=b {
            let kb = BigInt::from(k);
            if !(&a0 % &kb).is_zero() {
                continue;
            }
            for cand in [kb.clone(), -kb] {
                if eval_int(&c, &cand).is_zero() {
                    out.push(cand);
                }
            }
        }
    } else {
        for z in poly_roots(&complex_coeffs(&c)) {
            if z.im.abs() > 0.5 || !z.re.is_finite() {
                continue;
            }
            let r = z.re.round();
            for d in [-1.0, 0.0, 1.0] {
                let cand = BigInt::from((r + d) as i64);
                if !cand.is_zero() && (&a0 % cand.abs()).is_zero() && eval_int(&c, &cand).is_zero() {
                    out.push(cand);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Distinct rational roots, ascending.
pub fn rational_roots(p: &Poly<BigRational>) -> Vec<BigRational> {
    if p.is_zero() {
        return Vec::new();
    }
    let c = primitive_integer(p);
    let d = c.len() - 1;
    let lead = c[d].clone();
    // roots of a_d^(d-1) p(y / a_d) are integers
    let mut monic = Vec::with_capacity(d + 1);
    let mut power = BigInt::one();
    for i in (0..=d).rev() {
        monic.push(&c[i] * &power);
        if i > 0 {
            power *= &lead;
        }
    }
    monic.reverse();
    let mut roots: Vec<BigRational> =
        integer_roots(&int_poly(&monic)).into_iter().map(|y| BigRational::new(y, lead.clone())).collect();
    roots.sort();
    roots
}

/// Sort key: degree, then coefficients low to high.
pub fn compare_q_polys(a: &Poly<BigRational>, b: &Poly<BigRational>) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs()))
}

/// Monic factors of a squarefree polynomial with no rational roots, via
/// subset products of its numeric roots.
fn split_rootless(g: &Poly<BigRational>) -> Vec<(Poly<BigRational>, bool)> {
    let n = g.degree().unwrap_or(0);
    if n <= 3 {
        return vec![(g.monic(), true)];
    }
    // monic integer transform h(y) = a^(n-1) g(y/a), factors lie in Z[y]
    let c = primitive_integer(g);
    let lead = c[n].clone();
    let mut h = Vec::with_capacity(n + 1);
    let mut power = BigInt::one();
    for i in (0..=n).rev() {
        h.push(&c[i] * &power);
        if i > 0 {
            power *= &lead;
        }
    }
    h.reverse();
    let hc = complex_coeffs(&h);
    let roots = poly_roots(&hc);
    let err = roots.iter().map(|z| root_error(&hc, *z)).fold(0.0, f64::max);
    let max_root = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
    // coefficient error of a subset product of size k, crudely
    let coeff_err = err * (n as f64) * 2f64.powi(n as i32) * max_root.powi(n as i32);
    let reliable = err.is_finite() && coeff_err < 1e-3 && (1usize << n) <= SUBSET_BUDGET;
    if !reliable {
        return vec![(g.monic(), false)];
    }
    let hpoly = int_poly(&h);
    for k in 2..=n / 2 {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let mut prod = vec![Complex64::new(1.0, 0.0)];
            for &i in &idx {
                let mut next = vec![Complex64::new(0.0, 0.0); prod.len() + 1];
                for (j, a) in prod.iter().enumerate() {
                    next[j + 1] += a;
                    next[j] -= a * roots[i];
                }
                prod = next;
            }
            let near_int = prod.iter().all(|z| z.im.abs() < 0.25 && (z.re - z.re.round()).abs() < 0.25);
            if near_int {
                let cand: Vec<BigInt> = prod.iter().map(|z| BigInt::from(z.re.round() as i64)).collect();
                let cand = int_poly(&cand);
                if let Some(quot) = hpoly.div_exact(&cand) {
                    let back = |p: &Poly<BigRational>| {
                        // y = a x
                        let a = BigRational::from_integer(lead.clone());
                        let mut scale = <BigRational as One>::one();
                        let coeffs: Vec<BigRational> = p
                            .coeffs()
                            .iter()
                            .map(|co| {
                                let v = co * &scale;
                                scale = &scale * &a;
                                v
                            })
                            .collect();
                        Poly::from_coeffs(coeffs).monic()
                    };
                    let mut out = split_rootless(&back(&cand));
                    out.extend(split_rootless(&back(&quot)));
                    return out;
                }
            }
            // next combination
            let mut i = k;
            while i > 0 && idx[i - 1] == n - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    vec![(g.monic(), true)]
}

fn factor_squarefree_q(f: &Poly<BigRational>) -> Vec<(Poly<BigRational>, bool)> {
    let mut rest = f.monic();
    let mut out = Vec::new();
    for r in rational_roots(&rest) {
        let lin = Poly::linear_root(&r);
        rest = rest.div_exact(&lin).expect("rational root divides");
        out.push((lin, true));
    }
    if rest.degree().unwrap_or(0) > 0 {
        out.extend(split_rootless(&rest));
    }
    out
}

/// Complete factorization over the rationals into monic factors.
pub fn factor_q(p: &Poly<BigRational>) -> Factorization<BigRational> {
    if p.is_zero() {
        return Factorization { unit: <BigRational as Zero>::zero(), factors: Vec::new() };
    }
    let unit = p.leading();
    let mut factors = Vec::new();
    for (part, mult) in p.monic().squarefree_decomposition() {
        if part.degree().unwrap_or(0) == 0 {
            continue;
        }
        for (poly, certified) in factor_squarefree_q(&part) {
            factors.push(Factor { poly, multiplicity: mult, certified });
        }
    }
    factors.sort_by(|a, b| compare_q_polys(&a.poly, &b.poly).then(a.multiplicity.cmp(&b.multiplicity)));
    Factorization { unit, factors }
}

/// `Some(true)` irreducible, `Some(false)` reducible, `None` undecided.
pub fn is_irreducible_q(p: &Poly<BigRational>) -> Option<bool> {
    match p.degree() {
        None | Some(0) => return Some(false),
        Some(1) => return Some(true),
        _ => {}
    }
    let f = factor_q(p);
    if f.factors.len() > 1 || f.factors[0].multiplicity > 1 {
        Some(false)
    } else if f.factors[0].certified {
        Some(true)
    } else {
        None
    }
}

/// The rational polynomials `p_j` with `p = sum_j p_j a^j`.
pub fn rational_components(p: &Poly<FieldElem>) -> Vec<Poly<BigRational>> {
    let width = p
        .coeffs()
        .iter()
        .map(|c| match c {
            FieldElem::Rat(_) => 1,
            FieldElem::Alg(a) => a.field().degree(),
        })
        .max()
        .unwrap_or(1);
    (0..width)
        .map(|j| {
            Poly::from_coeffs(
                p.coeffs()
                    .iter()
                    .map(|c| match c {
                        FieldElem::Rat(q) => {
                            if j == 0 { q.clone() } else { <BigRational as Zero>::zero() }
                        }
                        FieldElem::Alg(a) => a.rep().coeff(j),
                    })
                    .collect(),
            )
        })
        .collect()
}

/// The rational polynomial, when all coefficients are rational.
pub fn to_q_poly(p: &Poly<FieldElem>) -> Option<Poly<BigRational>> {
    p.try_map(|c| c.to_rational().ok_or(())).ok()
}

pub fn from_q_poly(p: &Poly<BigRational>) -> Poly<FieldElem> {
    p.map(|c| FieldElem::Rat(c.clone()))
}

fn extension_of(p: &Poly<FieldElem>) -> Option<Arc<NumberField>> {
    p.coeffs().iter().find_map(|c| c.extension().cloned())
}

/// Integer roots of a polynomial over `Q(a)`: common integer roots of its
/// rational components.
pub fn integer_roots_elem(p: &Poly<FieldElem>) -> Vec<BigInt> {
    let comps = rational_components(p);
    let g = comps.iter().filter(|c| !c.is_zero()).fold(Poly::zero(), |acc: Poly<BigRational>, c| acc.gcd(c));
    if g.is_zero() {
        return Vec::new();
    }
    integer_roots(&g)
}

/// Factorization of a polynomial over the field generated by its own
/// coefficients. Rational polynomials are factored over the rationals.
pub fn factor_elem(p: &Poly<FieldElem>) -> Factorization<FieldElem> {
    if let Some(q) = to_q_poly(p) {
        let f = factor_q(&q);
        return Factorization {
            unit: FieldElem::Rat(f.unit),
            factors: f
                .factors
                .into_iter()
                .map(|x| Factor { poly: from_q_poly(&x.poly), multiplicity: x.multiplicity, certified: x.certified })
                .collect(),
        };
    }
    let field = extension_of(p).expect("non-rational coefficient");
    let unit = p.leading();
    let mut factors = Vec::new();
    for (part, mult) in p.monic().squarefree_decomposition() {
        if part.degree().unwrap_or(0) == 0 {
            continue;
        }
        for (poly, certified) in trager(&part, &field) {
            factors.push(Factor { poly, multiplicity: mult, certified });
        }
    }
    factors.sort_by(|a, b| compare_elem_polys(&a.poly, &b.poly).then(a.multiplicity.cmp(&b.multiplicity)));
    Factorization { unit, factors }
}

pub fn compare_elem_polys(a: &Poly<FieldElem>, b: &Poly<FieldElem>) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        match (to_q_poly(a), to_q_poly(b)) {
            (Some(x), Some(y)) => compare_q_polys(&x, &y),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => rational_components(a).iter().flat_map(|c| c.coeffs().to_vec()).cmp(
                rational_components(b).iter().flat_map(|c| c.coeffs().to_vec()),
            ),
        }
    })
}

/// Norm `N(f) = prod_sigma f^sigma` in `Q[x]`, by interpolation.
pub fn norm_poly(f: &Poly<FieldElem>, field: &Arc<NumberField>) -> Poly<BigRational> {
    let d = field.degree();
    let deg = f.degree().unwrap_or(0) * d;
    let points: Vec<(BigRational, BigRational)> = (0..=deg as i64)
        .map(|x| {
            let x = BigRational::from_integer(BigInt::from(x));
            let v = f.eval(&FieldElem::Rat(x.clone()));
            let n = match &v {
                FieldElem::Rat(q) => num_traits::pow::pow(q.clone(), d),
                FieldElem::Alg(a) => field.norm(a.rep()),
            };
            (x, n)
        })
        .collect();
    Poly::interpolate(&points)
}

/// Factors of a squarefree monic `f` over `Q(a)`.
fn trager(f: &Poly<FieldElem>, field: &Arc<NumberField>) -> Vec<(Poly<FieldElem>, bool)> {
    if f.degree() == Some(1) {
        return vec![(f.clone(), true)];
    }
    let alpha = field.generator();
    for s in 0..32i64 {
        let shift = alpha.mul(&FieldElem::int(s));
        // g(x) = f(x - s a)
        let g = f.taylor_shift(&shift.neg());
        let n = norm_poly(&g, field);
        if n.gcd(&n.derivative()).degree() != Some(0) {
            continue;
        }
        let fq = factor_q(&n);
        let mut out = Vec::new();
        for fac in fq.factors {
            let h = g.gcd(&from_q_poly(&fac.poly));
            if h.degree().unwrap_or(0) > 0 {
                out.push((h.taylor_shift(&shift).monic(), fac.certified));
            }
        }
        return out;
    }
    vec![(f.clone(), false)]
}

/// Factorization of `p` with coefficients moved into `field` when given.
pub fn factor_in(p: &Poly<FieldElem>, field: Option<&Arc<NumberField>>) -> Factorization<FieldElem> {
    let f = factor_elem(p);
    match field {
        None => f,
        Some(k) => Factorization {
            unit: f.unit.embed_into(k).unwrap_or(f.unit),
            factors: f
                .factors
                .into_iter()
                .map(|x| Factor {
                    poly: x.poly.map(|c| c.embed_into(k).unwrap_or_else(|| c.clone())),
                    multiplicity: x.multiplicity,
                    certified: x.certified,
                })
                .collect(),
        },
    }
}
