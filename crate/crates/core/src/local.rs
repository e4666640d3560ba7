//! Classification of a local system at `t = 0`: residue and exponents of a
//! simple-pole form, and the shearing procedure deciding regularity.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::chart::LocalSystem;
use crate::algebra::factor::{factor_elem, integer_roots_elem, Factorization};
use crate::algebra::field::{Field, FieldElem};
use crate::algebra::matrix::{Matrix, RatFunMatrix};
use crate::algebra::poly::Poly;
use crate::algebra::ratfun::RatFun;
use crate::lattice::{is_holomorphic, is_simple_pole, reduce_to_simple_pole, Divergence, GaugeCertificate, Reduction};

type K = FieldElem;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LocalError {
    #[error("t*A' has a pole at t = 0")]
    NotSimplePole,
}

/// One exponent with multiplicity, or the roots of an irreducible factor.
#[derive(Clone, Debug, PartialEq)]
pub enum Exponent {
    Exact { value: K, multiplicity: usize },
    Factor { poly: Poly<K>, multiplicity: usize, certified: bool },
}

impl Exponent {
    /// Number of exponents represented, with multiplicity.
    pub fn count(&self) -> usize {
        match self {
            Exponent::Exact { multiplicity, .. } => *multiplicity,
            Exponent::Factor { poly, multiplicity, .. } => poly.degree().unwrap_or(0) * multiplicity,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidueData {
    pub residue: Matrix<K>,
    pub char_poly: Poly<K>,
    pub exponent_factors: Factorization<K>,
}

impl ResidueData {
    pub fn exponents(&self) -> Vec<Exponent> {
        self.exponent_factors
            .factors
            .iter()
            .map(|f| {
                if f.poly.degree() == Some(1) {
                    Exponent::Exact { value: f.poly.coeff(0).neg(), multiplicity: f.multiplicity }
                } else {
                    Exponent::Factor { poly: f.poly.clone(), multiplicity: f.multiplicity, certified: f.certified }
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PointClass {
    /// `exponents` are those of the simple-pole form, when one was computed.
    Regular { exponents: Vec<Exponent> },
    RegularSingular { exponents: Vec<Exponent> },
    Irregular { evidence: Divergence },
    Indeterminate { reason: String },
}

impl PointClass {
    pub fn label(&self) -> &'static str {
        match self {
            PointClass::Regular { .. } => "regular",
            PointClass::RegularSingular { .. } => "regular_singular",
            PointClass::Irregular { .. } => "irregular",
            PointClass::Indeterminate { .. } => "indeterminate",
        }
    }

    pub fn exponents(&self) -> &[Exponent] {
        match self {
            PointClass::Regular { exponents } | PointClass::RegularSingular { exponents } => exponents,
            _ => &[],
        }
    }

    /// Regular or regular singular.
    pub fn is_regular_singular(&self) -> bool {
        matches!(self, PointClass::Regular { .. } | PointClass::RegularSingular { .. })
    }

    /// Same variant, ignoring the attached data.
    pub fn same_variant(&self, other: &PointClass) -> bool {
        self.label() == other.label()
    }
}

/// `(t A)(0)` and its characteristic data.
pub fn residue(cert: &GaugeCertificate<K>) -> Result<ResidueData, LocalError> {
    residue_of(&cert.a_prime)
}

pub fn residue_of(a: &RatFunMatrix<K>) -> Result<ResidueData, LocalError> {
    let t = RatFun::var();
    let residue = a.map(|f| f.mul_fn(&t)).value_at_zero().ok_or(LocalError::NotSimplePole)?;
    let char_poly = residue.char_poly();
    let exponent_factors = factor_elem(&char_poly);
    Ok(ResidueData { residue, char_poly, exponent_factors })
}

/// Integers `m` with `chi(x)` and `chi(x + m)` sharing a root, via the
/// resultant `Res_x(chi(x), chi(x + y))` in `y`.
pub fn integer_resonances(chi: &Poly<K>) -> BTreeSet<BigInt> {
    let n = chi.degree().unwrap_or(0);
    if n == 0 {
        return BTreeSet::new();
    }
    let points: Vec<(K, K)> = (0..=(n * n) as i64)
        .map(|y| {
            let y = K::int(y);
            (y.clone(), chi.resultant(&chi.taylor_shift(&y)))
        })
        .collect();
    integer_roots_elem(&Poly::interpolate(&points)).into_iter().collect()
}

/// Integer exponents with multiplicity, or `None` if some exponent is not an
/// integer.
pub fn integer_exponents(chi: &Poly<K>) -> Option<Vec<(BigInt, usize)>> {
    let mut rest = chi.monic();
    let mut out = Vec::new();
    for k in integer_roots_elem(chi) {
        let lin = Poly::linear_root(&K::Rat(BigRational::from_integer(k.clone())));
        let mut mult = 0;
        while let Some(q) = rest.div_exact(&lin) {
            rest = q;
            mult += 1;
        }
        out.push((k, mult));
    }
    (rest.degree() == Some(0)).then_some(out)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Regularity {
    /// Composed certificate whose `A'` is holomorphic at 0.
    Regular(GaugeCertificate<K>),
    NotRegular,
}

fn scalar_gauge(n: usize, k: i64) -> RatFunMatrix<K> {
    Matrix::identity(n).scale(&RatFun::var_pow(k))
}

/// Decides whether the simple-pole system `cert.a_prime` is gauge equivalent
/// to a holomorphic one by shifting the top exponent block down one step at
/// a time. `a` is the system the certificate starts from.
pub fn is_regular_point(a: &RatFunMatrix<K>, cert: &GaugeCertificate<K>) -> Regularity {
    let n = a.rows();
    let mut cur = cert.clone();
    let Ok(data) = residue(&cur) else { return Regularity::NotRegular };
    let Some(first) = integer_exponents(&data.char_poly) else { return Regularity::NotRegular };
    let spread = {
        let lo = first.iter().map(|(k, _)| k).min().unwrap();
        let hi = first.iter().map(|(k, _)| k).max().unwrap();
        usize::try_from(hi - lo).expect("finite spread")
    };
    for _ in 0..=n * spread {
        let data = residue(&cur).expect("shearing keeps a simple pole");
        let exps = integer_exponents(&data.char_poly).expect("shearing shifts exponents by integers");
        let hi = exps.iter().map(|(k, _)| k.clone()).max().unwrap();
        let lo = exps.iter().map(|(k, _)| k.clone()).min().unwrap();
        if hi == lo {
            let m = i64::try_from(&hi).expect("small exponent");
            let step = GaugeCertificate::from_gauge(&cur.a_prime, scalar_gauge(n, -m)).expect("invertible");
            let next = cur.then(&step);
            return if is_holomorphic(&next.a_prime) { Regularity::Regular(next.normalized(a)) } else { Regularity::NotRegular };
        }
        // split off the generalized eigenspace of the top exponent
        let shifted = data.residue.sub(&Matrix::identity(n).scale(&K::Rat(BigRational::from_integer(hi))));
        let power = shifted.pow(n as u32);
        let mut cols = power.kernel();
        let w = cols.len();
        cols.extend(power.column_space());
        let p = Matrix::from_columns(&cols);
        let p_inv = p.inverse().expect("generalized eigenspaces are complementary");
        let mut shear = RatFunMatrix::<K>::identity(n);
        for i in 0..w {
            shear[(i, i)] = RatFun::var_pow(-1);
        }
        let f = shear.mul(&RatFunMatrix::from_constant(&p_inv));
        let step = GaugeCertificate::from_gauge(&cur.a_prime, f).expect("invertible");
        debug_assert!(is_simple_pole(&step.a_prime));
        cur = cur.then(&step);
    }
    panic!("shearing did not terminate within n * spread steps");
}

/// Everything computed at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalAnalysis {
    pub class: PointClass,
    pub residue: Option<ResidueData>,
    /// Simple-pole certificate.
    pub reduction: Option<GaugeCertificate<K>>,
    /// Holomorphic certificate, for regular points.
    pub regular: Option<GaugeCertificate<K>>,
}

impl LocalAnalysis {
    /// The strongest certificate available.
    pub fn best_certificate(&self) -> Option<&GaugeCertificate<K>> {
        self.regular.as_ref().or(self.reduction.as_ref())
    }
}

pub fn analyze_local(sys: &LocalSystem<K>) -> LocalAnalysis {
    analyze_matrix(&sys.matrix)
}

/// Classification of `y' = A y` at `t = 0`.
pub fn analyze_matrix(a: &RatFunMatrix<K>) -> LocalAnalysis {
    let cert = match reduce_to_simple_pole(a) {
        Reduction::NotRegularSingular(evidence) => {
            return LocalAnalysis { class: PointClass::Irregular { evidence }, residue: None, reduction: None, regular: None };
        }
        Reduction::Reduced(c) => c,
    };
    let data = residue(&cert).expect("simple pole");
    let exponents = data.exponents();
    let (class, regular) = match is_regular_point(a, &cert) {
        Regularity::Regular(c) => (PointClass::Regular { exponents }, Some(c)),
        Regularity::NotRegular => (PointClass::RegularSingular { exponents }, None),
    };
    LocalAnalysis { class, residue: Some(data), reduction: Some(cert), regular }
}

pub fn classify_local(sys: &LocalSystem<K>) -> PointClass {
    analyze_local(sys).class
}

/// Power series `Y = sum Y_m t^m` with `Y_0 = I` solving `Y' = A Y` for
/// holomorphic `A`: `m Y_m = sum_i A_i Y_(m-1-i)`.
pub fn power_series_solution(a: &RatFunMatrix<K>, order: usize) -> Option<Vec<Matrix<K>>> {
    if !is_holomorphic(a) {
        return None;
    }
    let n = a.rows();
    let mut coeffs: Vec<Matrix<K>> = Vec::with_capacity(order);
    let mut grid = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let (low, c) = a[(i, j)].laurent_terms(order as i64);
            let mut padded = vec![K::zero(); order];
            for (k, v) in c.into_iter().enumerate() {
                padded[(low as usize) + k] = v;
            }
            grid[i][j] = padded;
        }
    }
    for k in 0..order {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = grid[i][j][k].clone();
            }
        }
        coeffs.push(m);
    }
    let mut ys = vec![Matrix::identity(n)];
    for m in 1..=order {
        let mut acc = Matrix::zeros(n, n);
        for i in 0..m {
            acc = acc.add(&coeffs[i].mul(&ys[m - 1 - i]));
        }
        ys.push(acc.scale(&K::int(m as i64).inv().unwrap()));
    }
    Some(ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::chart::{localize, Point};
    use crate::lattice::GaugeCertificate;

    type R = RatFun<K>;

    fn t(k: i64) -> R {
        R::var_pow(k)
    }

    fn q(n: i64, d: i64) -> K {
        K::frac(n, d)
    }

    fn scalar(f: R) -> RatFunMatrix<K> {
        Matrix::from_rows(vec![vec![f]])
    }

    #[test]
    fn residue_examples() {
        let d = residue_of(&scalar(t(-1).scale(&q(2, 5)))).unwrap();
        assert_eq!(d.char_poly.display_with("x"), "x-2/5");
        let nil = Matrix::from_rows(vec![vec![R::zero_fn(), t(-1)], vec![R::zero_fn(), R::zero_fn()]]);
        assert_eq!(residue_of(&nil).unwrap().char_poly.display_with("x"), "x^2");
        let diag = Matrix::from_rows(vec![vec![t(-1).scale(&q(1, 2)), R::zero_fn()], vec![R::zero_fn(), t(-1).scale(&q(-1, 3))]]);
        let ex = residue_of(&diag).unwrap().exponents();
        assert_eq!(ex.len(), 2);
        assert!(ex.contains(&Exponent::Exact { value: q(1, 2), multiplicity: 1 }));
        assert!(ex.contains(&Exponent::Exact { value: q(-1, 3), multiplicity: 1 }));
        assert_eq!(residue_of(&scalar(t(-2))), Err(LocalError::NotSimplePole));
    }

    #[test]
    fn classification_examples() {
        let at0 = |f: R| classify_local(&localize(&scalar(f), &Point::Finite(K::int(0)), 6).unwrap());
        assert!(matches!(at0(t(-1)), PointClass::Regular { .. }));
        match at0(t(-1).scale(&q(1, 2))) {
            PointClass::RegularSingular { exponents } => {
                assert_eq!(exponents, vec![Exponent::Exact { value: q(1, 2), multiplicity: 1 }])
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(at0(t(-2)), PointClass::Irregular { .. }));
    }

    #[test]
    fn regularity_examples() {
        let a = scalar(t(-1));
        let Regularity::Regular(c) = is_regular_point(&a, &GaugeCertificate::identity(&a)) else { panic!() };
        assert!(c.a_prime.is_zero());
        assert!(c.verify(&a));
        let nil = Matrix::from_rows(vec![vec![R::zero_fn(), t(-1)], vec![R::zero_fn(), R::zero_fn()]]);
        assert_eq!(is_regular_point(&nil, &GaugeCertificate::identity(&nil)), Regularity::NotRegular);
        let hol = scalar(R::var());
        assert!(matches!(is_regular_point(&hol, &GaugeCertificate::identity(&hol)), Regularity::Regular(_)));
        // negative integer exponent: -1/t is y = 1/t
        let neg = scalar(t(-1).neg_fn());
        assert!(matches!(is_regular_point(&neg, &GaugeCertificate::identity(&neg)), Regularity::Regular(_)));
    }

    #[test]
    fn shearing_across_an_integer_gap() {
        // exponents {2, 0} with a coupling that the shear must absorb
        let a = Matrix::from_rows(vec![vec![t(-1).scale(&K::int(2)), R::constant(K::int(1))], vec![R::zero_fn(), R::zero_fn()]]);
        let Regularity::Regular(c) = is_regular_point(&a, &GaugeCertificate::identity(&a)) else { panic!() };
        assert!(c.verify(&a) && is_holomorphic(&c.a_prime));
        // exponents {1, 0} with a log term: y2 = 1, y1' = y1/t + 1 gives t log t
        let b = Matrix::from_rows(vec![vec![t(-1), R::constant(K::int(1))], vec![R::zero_fn(), R::zero_fn()]]);
        assert_eq!(is_regular_point(&b, &GaugeCertificate::identity(&b)), Regularity::NotRegular);
    }

    #[test]
    fn resonance_examples() {
        let p = |c: &[i64]| Poly::from_coeffs(c.iter().map(|&v| K::int(v)).collect::<Vec<_>>());
        let set = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<BTreeSet<_>>();
        assert_eq!(integer_resonances(&p(&[0, -1, 1])), set(&[-1, 0, 1]));
        // (x - 1/2)(x + 1/3) = x^2 - x/6 - 1/6
        let chi = Poly::from_coeffs(vec![q(-1, 6), q(-1, 6), K::int(1)]);
        assert_eq!(integer_resonances(&chi), set(&[0]));
        assert_eq!(integer_resonances(&p(&[-2, 0, 1])), set(&[0]));
    }

    #[test]
    fn power_series_of_a_regular_point() {
        let a = Matrix::from_rows(vec![vec![R::constant(K::int(1))]]);
        let ys = power_series_solution(&a, 4).unwrap();
        // exp(t) = 1 + t + t^2/2 + t^3/6 + t^4/24
        let got: Vec<K> = ys.iter().map(|m| m[(0, 0)].clone()).collect();
        assert_eq!(got, vec![q(1, 1), q(1, 1), q(1, 2), q(1, 6), q(1, 24)]);
    }
}
