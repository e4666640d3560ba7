//! Whole-line analysis: poles, per-point classification, the Fuchsian
//! builder and Moebius pullbacks.

use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::chart::{compare_points, invert_system, localize, Point};
use crate::algebra::factor::factor_in;
use crate::algebra::field::{Field, FieldElem, NumberField, DEFAULT_DEGREE_CAP};
use crate::algebra::matrix::{self, Matrix, RatFunMatrix};
use crate::algebra::poly::Poly;
use crate::algebra::ratfun::RatFun;
use crate::local::{analyze_local, LocalAnalysis, PointClass};

type K = FieldElem;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GlobalError {
    #[error("gauge matrix is singular")]
    SingularGauge,
    #[error("points must be distinct")]
    RepeatedPoint,
    #[error("expected {expected} residues of size {n}x{n}, got {got}")]
    ResidueShape { expected: usize, got: usize, n: usize },
    #[error("Moebius map is degenerate (ad - bc = 0)")]
    DegenerateMap,
    #[error("coefficient {0} does not lie in the declared extension")]
    ForeignCoefficient(String),
}

#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    pub degree_cap: usize,
    /// Coefficients are moved into this field before any computation.
    pub extension: Option<Arc<NumberField>>,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions { degree_cap: DEFAULT_DEGREE_CAP, extension: None }
    }
}

/// `F A F^-1 + F' F^-1`.
pub fn gauge(a: &RatFunMatrix<K>, f: &RatFunMatrix<K>) -> Result<RatFunMatrix<K>, GlobalError> {
    matrix::gauge(a, f).ok_or(GlobalError::SingularGauge)
}

/// Every coefficient moved into `k`.
pub fn embed_matrix(a: &RatFunMatrix<K>, k: &Arc<NumberField>) -> Result<RatFunMatrix<K>, GlobalError> {
    a.try_map(|f| {
        let emb = |p: &Poly<K>| p.try_map(|c| c.embed_into(k).ok_or_else(|| GlobalError::ForeignCoefficient(c.to_string())));
        Ok(RatFun::new(emb(f.num())?, emb(f.den())?).expect("embedding keeps the denominator"))
    })
}

/// Monic least common multiple of the entry denominators.
pub fn common_denominator<L: Field>(a: &RatFunMatrix<L>) -> Poly<L> {
    a.entries().fold(Poly::one(), |acc, f| {
        let g = acc.gcd(f.den());
        acc.mul(&f.den().div_exact(&g).expect("gcd divides"))
    })
}

/// Finite poles (rational or algebraic) and infinity when the chart matrix
/// has a pole, in report order.
pub fn pole_points(a: &RatFunMatrix<K>, opts: &AnalysisOptions) -> Vec<Point<K>> {
    let den = common_denominator(a);
    let mut out: Vec<Point<K>> = factor_in(&den, opts.extension.as_ref())
        .factors
        .into_iter()
        .map(|f| if f.poly.degree() == Some(1) { Point::Finite(f.poly.coeff(0).neg()) } else { Point::RootOf(f.poly) })
        .collect();
    if invert_system(a).valuation().is_some_and(|v| v < 0) {
        out.push(Point::Infinity);
    }
    out.sort_by(compare_points);
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointEntry {
    pub point: Point<K>,
    pub pole: bool,
    pub analysis: LocalAnalysis,
}

impl PointEntry {
    pub fn class(&self) -> &PointClass {
        &self.analysis.class
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularityReport {
    pub dimension: usize,
    pub pole_points: Vec<Point<K>>,
    /// Every pole point and infinity, in report order.
    pub entries: Vec<PointEntry>,
    /// Points not certified regular.
    pub singular_points: Vec<Point<K>>,
    /// No point is irregular.
    pub is_regular_singular_system: bool,
    /// Some point could not be decided.
    pub indeterminate: bool,
}

impl SingularityReport {
    pub fn class_at(&self, p: &Point<K>) -> Option<&PointClass> {
        self.entries.iter().find(|e| &e.point == p).map(|e| &e.analysis.class)
    }
}

/// Local analysis at one point of `P^1`.
pub fn analyze_point(a: &RatFunMatrix<K>, p: &Point<K>, opts: &AnalysisOptions) -> LocalAnalysis {
    match localize(a, p, opts.degree_cap) {
        Ok(sys) => analyze_local(&sys),
        Err(e) => LocalAnalysis {
            class: PointClass::Indeterminate { reason: e.to_string() },
            residue: None,
            reduction: None,
            regular: None,
        },
    }
}

/// Classification of every pole and of infinity.
pub fn classify_all(a: &RatFunMatrix<K>, opts: &AnalysisOptions) -> Result<SingularityReport, GlobalError> {
    let a = match &opts.extension {
        Some(k) => embed_matrix(a, k)?,
        None => a.clone(),
    };
    let poles = pole_points(&a, opts);
    let mut points = poles.clone();
    if !points.contains(&Point::Infinity) {
        points.push(Point::Infinity);
    }
    let entries: Vec<PointEntry> = points
        .par_iter()
        .map(|p| PointEntry { point: p.clone(), pole: poles.contains(p), analysis: analyze_point(&a, p, opts) })
        .collect();
    let singular_points = entries
        .iter()
        .filter(|e| !matches!(e.analysis.class, PointClass::Regular { .. }))
        .map(|e| e.point.clone())
        .collect();
    let is_regular_singular_system = !entries.iter().any(|e| matches!(e.analysis.class, PointClass::Irregular { .. }));
    let indeterminate = entries.iter().any(|e| matches!(e.analysis.class, PointClass::Indeterminate { .. }));
    Ok(SingularityReport { dimension: a.rows(), pole_points: poles, entries, singular_points, is_regular_singular_system, indeterminate })
}

/// `A(z) = sum_i A_i / (z - a_i)`.
pub fn fuchsian_from_residues(points: &[K], residues: &[Matrix<K>]) -> Result<RatFunMatrix<K>, GlobalError> {
    let n = residues.first().map_or(0, |r| r.rows());
    if residues.len() != points.len() || residues.iter().any(|r| r.rows() != n || r.cols() != n) || n == 0 {
        return Err(GlobalError::ResidueShape { expected: points.len(), got: residues.len(), n });
    }
    for (i, p) in points.iter().enumerate() {
        if points[..i].contains(p) {
            return Err(GlobalError::RepeatedPoint);
        }
    }
    let mut a = RatFunMatrix::<K>::zeros(n, n);
    for (p, r) in points.iter().zip(residues) {
        let pole = RatFun::new(Poly::one(), Poly::linear_root(p)).expect("nonzero");
        a = a.add(&RatFunMatrix::from_constant(r).scale(&pole));
    }
    debug_assert_eq!(infinity_residue(&a), Some(residues.iter().fold(Matrix::zeros(n, n), |s, r| s.add(r)).neg()));
    Ok(a)
}

/// Residue of the chart matrix at infinity, when it has at most a simple pole.
pub fn infinity_residue(a: &RatFunMatrix<K>) -> Option<Matrix<K>> {
    let t = RatFun::var();
    invert_system(a).map(|f| f.mul_fn(&t)).value_at_zero()
}

/// A Moebius map `w -> (a w + b) / (c w + d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mobius {
    pub a: K,
    pub b: K,
    pub c: K,
    pub d: K,
}

impl Mobius {
    pub fn new(a: K, b: K, c: K, d: K) -> Result<Self, GlobalError> {
        if a.mul(&d).sub(&b.mul(&c)).is_zero() {
            return Err(GlobalError::DegenerateMap);
        }
        Ok(Mobius { a, b, c, d })
    }

    pub fn as_ratfun(&self) -> RatFun<K> {
        let num = Poly::from_coeffs(vec![self.b.clone(), self.a.clone()]);
        let den = Poly::from_coeffs(vec![self.d.clone(), self.c.clone()]);
        RatFun::from_poly(num).div_fn(&RatFun::from_poly(den)).expect("nondegenerate")
    }

    /// The point `w` mapped to `z0` (rational points only).
    pub fn preimage(&self, z0: &Point<K>) -> Option<Point<K>> {
        match z0 {
            Point::Infinity => {
                if self.c.is_zero() {
                    Some(Point::Infinity)
                } else {
                    Some(Point::Finite(self.d.neg().div(&self.c)))
                }
            }
            Point::Finite(z) => {
                // w = (d z - b) / (a - c z)
                let den = self.a.sub(&self.c.mul(z));
                if den.is_zero() {
                    Some(Point::Infinity)
                } else {
                    Some(Point::Finite(self.d.mul(z).sub(&self.b).div(&den)))
                }
            }
            Point::RootOf(_) => None,
        }
    }
}

/// The pullback `phi'(w) A(phi(w))` along `z = phi(w)`.
pub fn mobius(a: &RatFunMatrix<K>, map: &Mobius) -> RatFunMatrix<K> {
    let phi = map.as_ratfun();
    let dphi = phi.derivative();
    a.map(|f| f.compose(&phi).mul_fn(&dphi))
}
