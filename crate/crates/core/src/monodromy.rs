//! Numerical analytic continuation of fundamental solutions.
//!
//! `Y' = A Y` is transported with high order Taylor steps in the complex
//! plane. Loops around a pole start at a real basepoint to the right of all
//! poles, climb above them, descend onto a circle around the pole and
//! return the same way.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebra::chart::Point;
use crate::algebra::field::{Field, FieldElem};
use crate::algebra::matrix::RatFunMatrix;
use crate::algebra::numeric::poly_roots;
use crate::algebra::poly::Poly;
use crate::global::{analyze_point, common_denominator, AnalysisOptions};
use crate::local::{integer_resonances, Exponent};

pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MonodromyError {
    #[error("monodromy needs rational coefficients, found {0}")]
    NonRational(String),
    #[error("path passes within {distance:e} of a pole near {at}")]
    PoleProximity { at: String, distance: f64 },
    #[error("step size underflow at {at}")]
    StepUnderflow { at: String },
    #[error("{0} is not a pole")]
    NotAPole(String),
    #[error("matrix must be square")]
    NotSquare,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

/// Degree-bounded numerical copy of a rational coefficient matrix.
#[derive(Clone, Debug)]
pub struct NumericSystem {
    n: usize,
    /// `(num, den)` per entry, row-major, coefficients low-first.
    entries: Vec<(Vec<Complex64>, Vec<Complex64>)>,
    poles: Vec<Complex64>,
}

fn rat_poly(p: &Poly<FieldElem>) -> Result<Vec<Complex64>, MonodromyError> {
    p.coeffs()
        .iter()
        .map(|x| match x.to_rational() {
            Some(q) => Ok(c(q.to_f64().unwrap_or(f64::NAN), 0.0)),
            None => Err(MonodromyError::NonRational(x.to_string())),
        })
        .collect()
}

fn horner(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::zero(), |acc, a| acc * z + a)
}

/// Coefficients of `p(z0 + s)` in `s`.
fn taylor_shift(p: &[Complex64], z0: Complex64) -> Vec<Complex64> {
    let mut a = p.to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let next = a[j + 1];
            a[j] += z0 * next;
        }
    }
    a
}

impl NumericSystem {
    pub fn new(a: &RatFunMatrix<FieldElem>) -> Result<Self, MonodromyError> {
        if a.rows() != a.cols() {
            return Err(MonodromyError::NotSquare);
        }
        let entries = a.entries().map(|f| Ok((rat_poly(f.num())?, rat_poly(f.den())?))).collect::<Result<Vec<_>, _>>()?;
        let mut poles = poly_roots(&rat_poly(&common_denominator(a))?);
        poles.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
        Ok(NumericSystem { n: a.rows(), entries, poles })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Finite poles, numerically, by increasing real part.
    pub fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    pub fn pole_distance(&self, z: Complex64) -> f64 {
        self.poles.iter().map(|p| (p - z).norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn eval(&self, z: Complex64) -> CMatrix {
        CMatrix::from_fn(self.n, self.n, |i, j| {
            let (num, den) = &self.entries[i * self.n + j];
            horner(num, z) / horner(den, z)
        })
    }

    pub fn trace(&self, z: Complex64) -> Complex64 {
        (0..self.n)
            .map(|i| {
                let (num, den) = &self.entries[i * self.n + i];
                horner(num, z) / horner(den, z)
            })
            .sum()
    }

    /// Taylor coefficients `A_0 .. A_order` of `A` at `z0`.
    fn taylor(&self, z0: Complex64, order: usize) -> Vec<CMatrix> {
        let mut out = vec![CMatrix::zeros(self.n, self.n); order + 1];
        for (idx, (num, den)) in self.entries.iter().enumerate() {
            let (i, j) = (idx / self.n, idx % self.n);
            let nu = taylor_shift(num, z0);
            let de = taylor_shift(den, z0);
            let mut q = vec![Complex64::zero(); order + 1];
            for k in 0..=order {
                let mut s = nu.get(k).copied().unwrap_or_default();
                for m in 1..=k.min(de.len().saturating_sub(1)) {
                    s -= de[m] * q[k - m];
                }
                q[k] = s / de[0];
                out[k][(i, j)] = q[k];
            }
        }
        out
    }
}

/// A path piece: a straight segment or a circular arc.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Segment {
    Line { from: Complex64, to: Complex64 },
    /// Angles in radians; `sweep > 0` is counterclockwise.
    Arc { center: Complex64, radius: f64, start: f64, sweep: f64 },
}

impl Segment {
    pub fn start(&self) -> Complex64 {
        self.at(0.0)
    }

    pub fn end(&self) -> Complex64 {
        self.at(1.0)
    }

    /// Point at parameter `s` in `[0, 1]`.
    pub fn at(&self, s: f64) -> Complex64 {
        match *self {
            Segment::Line { from, to } => from + (to - from) * s,
            Segment::Arc { center, radius, start, sweep } => center + Complex64::from_polar(radius, start + sweep * s),
        }
    }

    /// `dz/ds`.
    fn velocity(&self, s: f64) -> Complex64 {
        match *self {
            Segment::Line { from, to } => to - from,
            Segment::Arc { radius, start, sweep, .. } => Complex64::from_polar(radius * sweep, start + sweep * s + PI / 2.0),
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Segment::Line { from, to } => (to - from).norm(),
            Segment::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    pub fn reversed(&self) -> Segment {
        match *self {
            Segment::Line { from, to } => Segment::Line { from: to, to: from },
            Segment::Arc { center, radius, start, sweep } => Segment::Arc { center, radius, start: start + sweep, sweep: -sweep },
        }
    }

    /// Parameter advance for a chord of length at most `h` starting at `s`.
    fn advance(&self, s: f64, h: f64) -> f64 {
        let len = self.length();
        if len == 0.0 {
            return 1.0 - s;
        }
        let ds = match *self {
            Segment::Line { .. } => h / len,
            Segment::Arc { radius, sweep, .. } => {
                let ratio = (h / (2.0 * radius)).min(1.0);
                2.0 * ratio.asin() / sweep.abs()
            }
        };
        ds.min(1.0 - s)
    }
}

/// A piecewise path, traversed in order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Path {
    pub segments: Vec<Segment>,
}

impl Path {
    pub fn new(segments: Vec<Segment>) -> Self {
        Path { segments }
    }

    pub fn line(from: Complex64, to: Complex64) -> Self {
        Path::new(vec![Segment::Line { from, to }])
    }

    /// Full counterclockwise circle starting at angle `start`.
    pub fn circle(center: Complex64, radius: f64, start: f64) -> Self {
        Path::new(vec![Segment::Arc { center, radius, start, sweep: 2.0 * PI }])
    }

    /// Polygonal path through the given vertices.
    pub fn polyline(points: &[Complex64]) -> Self {
        Path::new(points.windows(2).map(|w| Segment::Line { from: w[0], to: w[1] }).collect())
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Path) -> Path {
        Path::new(self.segments.iter().chain(&next.segments).copied().collect())
    }

    pub fn reversed(&self) -> Path {
        Path::new(self.segments.iter().rev().map(Segment::reversed).collect())
    }

    pub fn start(&self) -> Option<Complex64> {
        self.segments.first().map(Segment::start)
    }

    pub fn end(&self) -> Option<Complex64> {
        self.segments.last().map(Segment::end)
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(Segment::length).sum()
    }
}

#[derive(Clone, Debug)]
pub struct TransferOptions {
    /// Local truncation error allowed per unit of path length.
    pub tolerance: f64,
    pub order: usize,
    /// Minimal distance kept from every pole.
    pub clearance: f64,
    pub max_steps: usize,
}

impl Default for TransferOptions {
    fn default() -> Self {
        TransferOptions { tolerance: 1e-12, order: 20, clearance: 1e-8, max_steps: 1_000_000 }
    }
}

impl TransferOptions {
    pub fn with_tolerance(tolerance: f64) -> Self {
        TransferOptions { tolerance, ..Default::default() }
    }
}

/// Transfer matrix `Y(end)` for `Y(start) = I`.
#[derive(Clone, Debug)]
pub struct Transfer {
    pub matrix: CMatrix,
    pub error_estimate: f64,
    pub steps: usize,
}

fn norm(m: &CMatrix) -> f64 {
    m.norm()
}

/// One Taylor step from `z0`: coefficients of the local transfer matrix.
fn solution_series(a: &[CMatrix]) -> Vec<CMatrix> {
    let n = a[0].nrows();
    let order = a.len() - 1;
    let mut y = Vec::with_capacity(order + 1);
    y.push(CMatrix::identity(n, n));
    for k in 0..order {
        let mut s = CMatrix::zeros(n, n);
        for i in 0..=k {
            s += &a[i] * &y[k - i];
        }
        y.push(s / c((k + 1) as f64, 0.0));
    }
    y
}

fn tail(y: &[CMatrix], r: f64) -> f64 {
    let n = y.len() - 1;
    norm(&y[n]) * r.powi(n as i32) + norm(&y[n - 1]) * r.powi(n as i32 - 1)
}

fn eval_series(y: &[CMatrix], s: Complex64) -> CMatrix {
    let mut acc = y.last().unwrap().clone();
    for k in (0..y.len() - 1).rev() {
        acc = acc * s + &y[k];
    }
    acc
}

pub fn transfer(sys: &NumericSystem, path: &Path, opts: &TransferOptions) -> Result<Transfer, MonodromyError> {
    let n = sys.dimension();
    let mut phi = CMatrix::identity(n, n);
    let mut error = 0.0;
    let mut steps = 0usize;
    let min_step = 1e-14 * (1.0 + path.length());
    for seg in &path.segments {
        let mut s = 0.0;
        while s < 1.0 {
            let z0 = seg.at(s);
            let d = sys.pole_distance(z0);
            if d < opts.clearance {
                return Err(MonodromyError::PoleProximity { at: fmt_c(z0), distance: d });
            }
            let y = solution_series(&sys.taylor(z0, opts.order));
            let mut h = (0.5 * d).min(seg.length() * (1.0 - s));
            while h > min_step && tail(&y, h) > opts.tolerance * h {
                h *= 0.7;
            }
            if h <= min_step && seg.length() * (1.0 - s) > min_step {
                return Err(MonodromyError::StepUnderflow { at: fmt_c(z0) });
            }
            let ds = seg.advance(s, h);
            let s1 = if ds >= 1.0 - s - 1e-15 { 1.0 } else { s + ds };
            let step = seg.at(s1) - z0;
            error += tail(&y, step.norm()) * norm(&phi);
            phi = eval_series(&y, step) * phi;
            s = s1;
            steps += 1;
            if steps > opts.max_steps {
                return Err(MonodromyError::StepUnderflow { at: fmt_c(z0) });
            }
        }
    }
    Ok(Transfer { matrix: phi, error_estimate: error, steps })
}

/// Transfers along several paths in parallel.
pub fn transfer_all(sys: &NumericSystem, paths: &[Path], opts: &TransferOptions) -> Vec<Result<Transfer, MonodromyError>> {
    paths.par_iter().map(|p| transfer(sys, p, opts)).collect()
}

/// Default basepoint: one unit right of every pole, on the real axis.
pub fn default_basepoint(sys: &NumericSystem) -> Complex64 {
    let right = sys.poles.iter().map(|p| p.re).fold(0.0f64, f64::max);
    c(right + 1.0, 0.0)
}

/// Loop data around one pole.
#[derive(Clone, Debug)]
pub struct LoopGeometry {
    pub point: Complex64,
    pub radius: f64,
    pub basepoint: Complex64,
    /// Basepoint to the circle.
    pub spoke: Path,
    pub circle: Path,
}

impl LoopGeometry {
    pub fn path(&self) -> Path {
        self.spoke.then(&self.circle).then(&self.spoke.reversed())
    }
}

/// Circle of half the distance to the nearest other pole (radius 1 for a
/// lone pole), reached from above.
pub fn local_loop(sys: &NumericSystem, p: Complex64, basepoint: Option<Complex64>) -> Result<LoopGeometry, MonodromyError> {
    if sys.pole_distance(p) > 1e-9 * (1.0 + p.norm()) {
        return Err(MonodromyError::NotAPole(fmt_c(p)));
    }
    let others = sys.poles.iter().filter(|q| (*q - p).norm() > 1e-9 * (1.0 + p.norm()));
    let nearest = others.map(|q| (q - p).norm()).fold(f64::INFINITY, f64::min);
    let radius = if nearest.is_finite() { 0.5 * nearest } else { 1.0 };
    let b = basepoint.unwrap_or_else(|| default_basepoint(sys));
    let top = sys.poles.iter().map(|q| q.im).fold(b.im, f64::max) + 1.0;
    let height = top.max(p.im + 2.0 * radius);
    let entry = p + c(0.0, radius);
    let spoke = Path::polyline(&[b, c(b.re, height), c(p.re, height), entry]);
    Ok(LoopGeometry { point: p, radius, basepoint: b, spoke, circle: Path::circle(p, radius, PI / 2.0) })
}

#[derive(Clone, Debug)]
pub struct LocalMonodromy {
    pub geometry: LoopGeometry,
    pub matrix: CMatrix,
    pub error_estimate: f64,
    /// The circle alone, normalized on the circle. Similar to `matrix`, and
    /// the better conditioned of the two when the spoke transfer is large.
    pub circle: CMatrix,
}

impl LocalMonodromy {
    /// Eigenvalues, taken from the circle transfer.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        eigenvalues(&self.circle)
    }
}

/// `M = T_spoke^-1 T_circle T_spoke` in the basis normalized at the
/// basepoint: continuation returns `Y` as `Y M`.
pub fn local_monodromy(
    sys: &NumericSystem,
    p: Complex64,
    basepoint: Option<Complex64>,
    opts: &TransferOptions,
) -> Result<LocalMonodromy, MonodromyError> {
    let geometry = local_loop(sys, p, basepoint)?;
    let spoke = transfer(sys, &geometry.spoke, opts)?;
    let circle = transfer(sys, &geometry.circle, opts)?;
    let inv = spoke.matrix.clone().try_inverse().expect("transfer matrices are invertible");
    let matrix = &inv * &circle.matrix * &spoke.matrix;
    let cond = norm(&inv) * norm(&spoke.matrix);
    let error_estimate = cond * (circle.error_estimate + 2.0 * spoke.error_estimate * norm(&circle.matrix));
    Ok(LocalMonodromy { geometry, matrix, error_estimate, circle: circle.matrix })
}

/// Local monodromies around every finite pole, in parallel.
pub fn all_local_monodromies(sys: &NumericSystem, opts: &TransferOptions) -> Vec<Result<LocalMonodromy, MonodromyError>> {
    let b = default_basepoint(sys);
    sys.poles.par_iter().map(|p| local_monodromy(sys, *p, Some(b), opts)).collect()
}

/// `M_k ... M_1` for loops listed by increasing real part of the pole, the
/// class of a counterclockwise circle enclosing all of them. It is the
/// identity when infinity is a regular point and the poles have distinct
/// real parts.
pub fn loop_product(ms: &[CMatrix]) -> CMatrix {
    let n = ms.first().map_or(0, |m| m.nrows());
    ms.iter().fold(CMatrix::identity(n, n), |acc, m| m * acc)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// `\int_path tr A(z) dz` by composite Gauss-Legendre quadrature with
/// panels shrinking near poles.
pub fn trace_integral(sys: &NumericSystem, path: &Path) -> Complex64 {
    let rule = gauss_legendre(16);
    let mut total = Complex64::zero();
    for seg in &path.segments {
        let len = seg.length();
        if len == 0.0 {
            continue;
        }
        let mut s = 0.0;
        while s < 1.0 {
            let d = sys.pole_distance(seg.at(s));
            let ds = (0.25 * d / len).min(1.0 - s).max(1e-12);
            for &(x, w) in &rule {
                let u = s + 0.5 * ds * (x + 1.0);
                total += sys.trace(seg.at(u)) * seg.velocity(u) * (0.5 * ds * w);
            }
            s += ds;
        }
    }
    total
}

/// `det T` against `exp(\int tr A)`.
#[derive(Clone, Debug)]
pub struct AbelCheck {
    pub determinant: Complex64,
    pub predicted: Complex64,
    pub relative_error: f64,
}

pub fn abel_check(sys: &NumericSystem, path: &Path, t: &Transfer) -> AbelCheck {
    let determinant = t.matrix.determinant();
    let predicted = trace_integral(sys, path).exp();
    let relative_error = (determinant - predicted).norm() / predicted.norm().max(f64::MIN_POSITIVE);
    AbelCheck { determinant, predicted, relative_error }
}

pub fn eigenvalues(m: &CMatrix) -> Vec<Complex64> {
    let (_, t) = m.clone().schur().unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// Largest distance under the best pairing of two multisets of equal size.
pub fn matching_error(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    fn go(a: &[Complex64], b: &mut Vec<Complex64>, worst: f64, best: &mut f64) {
        if worst >= *best {
            return;
        }
        let Some((x, rest)) = a.split_first() else {
            *best = worst;
            return;
        };
        for i in 0..b.len() {
            let y = b.swap_remove(i);
            go(rest, b, worst.max((x - y).norm()), best);
            b.push(y);
            let last = b.len() - 1;
            b.swap(i, last);
        }
    }
    let mut best = f64::INFINITY;
    go(a, &mut b.to_vec(), 0.0, &mut best);
    best
}

/// Exponents as complex numbers, with multiplicity.
pub fn exponent_values(exps: &[Exponent]) -> Result<Vec<Complex64>, MonodromyError> {
    let mut out = Vec::new();
    for e in exps {
        match e {
            Exponent::Exact { value, multiplicity } => {
                let q = value.to_rational().ok_or_else(|| MonodromyError::NonRational(value.to_string()))?;
                out.extend(std::iter::repeat_n(c(q.to_f64().unwrap_or(f64::NAN), 0.0), *multiplicity));
            }
            Exponent::Factor { poly, multiplicity, .. } => {
                let roots = poly_roots(&rat_poly(poly)?);
                for _ in 0..*multiplicity {
                    out.extend(&roots);
                }
            }
        }
    }
    Ok(out)
}

/// `exp(2 pi i rho)` over the exponents at a rational point, or why the
/// exponents do not determine the monodromy eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub enum Prediction {
    Eigenvalues(Vec<Complex64>),
    Skipped(String),
}

pub fn predicted_eigenvalues(a: &RatFunMatrix<FieldElem>, p: &FieldElem) -> Result<Prediction, MonodromyError> {
    let analysis = analyze_point(a, &Point::Finite(p.clone()), &AnalysisOptions::default());
    let Some(data) = analysis.residue.as_ref() else {
        return Ok(Prediction::Skipped(format!("no simple-pole form at {p}: {}", analysis.class.label())));
    };
    let resonances: Vec<String> = integer_resonances(&data.char_poly).into_iter().filter(|m| !m.is_zero()).map(|m| m.to_string()).collect();
    if !resonances.is_empty() {
        return Ok(Prediction::Skipped(format!(
            "exponents at {p} differ by the integers {}; the monodromy is not determined by them",
            resonances.join(", ")
        )));
    }
    let values = exponent_values(analysis.class.exponents())?;
    Ok(Prediction::Eigenvalues(values.into_iter().map(|r| (c(0.0, 2.0 * PI) * r).exp()).collect()))
}

#[derive(Clone, Debug)]
pub enum Consistency {
    Checked { predicted: Vec<Complex64>, observed: Vec<Complex64>, max_error: f64, monodromy: LocalMonodromy },
    Skipped { notice: String },
}

/// Eigenvalues of the numerical local monodromy at a rational pole against
/// the exact exponents there.
pub fn exponent_consistency(
    a: &RatFunMatrix<FieldElem>,
    p: &FieldElem,
    opts: &TransferOptions,
) -> Result<Consistency, MonodromyError> {
    let q = p.to_rational().ok_or_else(|| MonodromyError::NonRational(p.to_string()))?;
    let predicted = match predicted_eigenvalues(a, p)? {
        Prediction::Eigenvalues(v) => v,
        Prediction::Skipped(notice) => return Ok(Consistency::Skipped { notice }),
    };
    let sys = NumericSystem::new(a)?;
    let monodromy = local_monodromy(&sys, c(q.to_f64().unwrap_or(f64::NAN), 0.0), None, opts)?;
    let observed = monodromy.eigenvalues();
    let max_error = matching_error(&predicted, &observed);
    Ok(Consistency::Checked { predicted, observed, max_error, monodromy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse::parse_matrix;

    fn sys(text: &str) -> NumericSystem {
        NumericSystem::new(&parse_matrix(text).unwrap()).unwrap()
    }

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn constant_systems() {
        let opts = TransferOptions::default();
        let zero = transfer(&sys("[[0]]"), &Path::line(c(0.0, 0.0), c(1.0, 0.0)), &opts).unwrap();
        assert!(close(&zero.matrix, &CMatrix::identity(1, 1), 1e-14));
        let one = transfer(&sys("[[1]]"), &Path::line(c(0.0, 0.0), c(1.0, 0.0)), &opts).unwrap();
        assert!((one.matrix[(0, 0)] - c(std::f64::consts::E, 0.0)).norm() < 1e-10);
        // Nilpotent constant system: exp(A) = I + A.
        let n = transfer(&sys("[[0, 3], [0, 0]]"), &Path::line(c(0.0, 0.0), c(0.0, 2.0)), &opts).unwrap();
        let want = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 6.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(close(&n.matrix, &want, 1e-12));
    }

    #[test]
    fn circles_against_closed_forms() {
        let opts = TransferOptions::default();
        let one = transfer(&sys("[[1/z]]"), &Path::circle(c(0.0, 0.0), 1.0, 0.0), &opts).unwrap();
        assert!((one.matrix[(0, 0)] - c(1.0, 0.0)).norm() < 1e-10);
        let half = local_monodromy(&sys("[[1/(2*z)]]"), c(0.0, 0.0), None, &opts).unwrap();
        assert!((half.matrix[(0, 0)] - c(-1.0, 0.0)).norm() < 1e-10);
        let log = local_monodromy(&sys("[[0, 1/z], [0, 0]]"), c(0.0, 0.0), None, &opts).unwrap();
        let want = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 2.0 * PI), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(close(&log.matrix, &want, 1e-10));
        // Solution (z - 1)^(1/3): the pole at 0 of the other entry is irrelevant.
        let m = sys("[[1/(3*(z-1)), 0], [0, 1/(5*z)]]");
        let at1 = local_monodromy(&m, c(1.0, 0.0), None, &opts).unwrap();
        assert!((at1.matrix[(0, 0)] - (c(0.0, 2.0 * PI / 3.0)).exp()).norm() < 1e-10);
        assert!((at1.matrix[(1, 1)] - c(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn path_algebra() {
        let m = sys("[[1/z, 1], [z/(z-2), -1/(z+1)]]");
        let opts = TransferOptions::default();
        let p1 = Path::polyline(&[c(1.0, 0.0), c(1.0, 1.0), c(3.0, 1.0)]);
        let p2 = Path::line(c(3.0, 1.0), c(3.0, -1.0));
        let t1 = transfer(&m, &p1, &opts).unwrap().matrix;
        let t2 = transfer(&m, &p2, &opts).unwrap().matrix;
        let t12 = transfer(&m, &p1.then(&p2), &opts).unwrap().matrix;
        assert!(close(&t12, &(&t2 * &t1), 1e-9 * t12.norm()));
        let back = transfer(&m, &p1.reversed(), &opts).unwrap().matrix;
        assert!(close(&(&back * &t1), &CMatrix::identity(2, 2), 1e-9));
        // Homotopic paths avoiding the poles agree.
        let other = Path::polyline(&[c(1.0, 0.0), c(1.5, 2.0), c(3.0, 1.0)]);
        let t_other = transfer(&m, &other, &opts).unwrap().matrix;
        assert!(close(&t_other, &t1, 1e-9 * t1.norm()));
    }

    #[test]
    fn poles_on_the_path_are_rejected() {
        let m = sys("[[1/z]]");
        let err = transfer(&m, &Path::line(c(-1.0, 0.0), c(1.0, 0.0)), &TransferOptions::default()).unwrap_err();
        assert!(matches!(err, MonodromyError::PoleProximity { .. } | MonodromyError::StepUnderflow { .. }));
        assert!(matches!(local_monodromy(&m, c(2.0, 0.0), None, &TransferOptions::default()), Err(MonodromyError::NotAPole(_))));
    }

    #[test]
    fn abel_identity_on_loops() {
        let m = sys("[[1/(3*z), 1/(z-1)], [2, 1/(4*(z-1))]]");
        let opts = TransferOptions::default();
        for p in [c(0.0, 0.0), c(1.0, 0.0)] {
            let g = local_loop(&m, p, None).unwrap();
            let t = transfer(&m, &g.path(), &opts).unwrap();
            assert!(abel_check(&m, &g.path(), &t).relative_error < 1e-8);
        }
    }

    #[test]
    fn fuchsian_monodromies_multiply_to_identity() {
        // Residues R0, R1 and -(R0 + R1) at infinity; the last has integer
        // eigenvalues 0 and 0 is excluded by using R0 + R1 = 0.
        let m = sys("[[1/(3*z) - 1/(3*(z-1)), 1/z - 1/(z-1)], [0, 1/(5*z) - 1/(5*(z-1))]]");
        let opts = TransferOptions::default();
        let ms: Vec<CMatrix> = all_local_monodromies(&m, &opts).into_iter().map(|r| r.unwrap().matrix).collect();
        assert_eq!(ms.len(), 2);
        let prod = loop_product(&ms);
        assert!(close(&prod, &CMatrix::identity(2, 2), 1e-9), "{prod}");
    }

    #[test]
    fn loop_product_order() {
        // Non-commuting residues at 0, 1, 2 summing to zero.
        let m = sys("[[1/(3*z) - 1/(3*(z-2)), 1/(z-1) - 1/(z-2)], [1/(2*z) - 1/(2*(z-1)), 1/(5*(z-1)) - 1/(5*(z-2))]]");
        let opts = TransferOptions::default();
        let ms: Vec<CMatrix> = all_local_monodromies(&m, &opts).into_iter().map(|r| r.unwrap().matrix).collect();
        let id = CMatrix::identity(2, 2);
        assert!(close(&loop_product(&ms), &id, 1e-9));
        let reversed: Vec<CMatrix> = ms.iter().rev().cloned().collect();
        assert!(!close(&loop_product(&reversed), &id, 1e-3));
    }

    #[test]
    fn exponents_predict_eigenvalues() {
        let opts = TransferOptions::default();
        let a = parse_matrix("[[1/(2*z)]]").unwrap();
        match exponent_consistency(&a, &FieldElem::int(0), &opts).unwrap() {
            Consistency::Checked { observed, max_error, .. } => {
                assert!((observed[0] - c(-1.0, 0.0)).norm() < 1e-10);
                assert!(max_error < 1e-10);
            }
            s => panic!("{s:?}"),
        }
        let a = parse_matrix("[[1/(3*z), 1], [0, 1/(5*z)]]").unwrap();
        assert!(matches!(exponent_consistency(&a, &FieldElem::int(0), &opts).unwrap(), Consistency::Checked { max_error, .. } if max_error < 1e-9));
        // Irrational exponents: residue [[0, 1], [2, 0]] / z.
        let a = parse_matrix("[[0, 1/z], [2/z, 0]]").unwrap();
        assert!(matches!(exponent_consistency(&a, &FieldElem::int(0), &opts).unwrap(), Consistency::Checked { max_error, .. } if max_error < 1e-9));
        let a = parse_matrix("[[0, 0], [0, 1/z]]").unwrap();
        assert!(matches!(exponent_consistency(&a, &FieldElem::int(0), &opts).unwrap(), Consistency::Skipped { .. }));
    }

    #[test]
    fn quadrature_rule() {
        let r = gauss_legendre(16);
        let w: f64 = r.iter().map(|p| p.1).sum();
        assert!((w - 2.0).abs() < 1e-13);
        let x8: f64 = r.iter().map(|(x, w)| w * x.powi(8)).sum();
        assert!((x8 - 2.0 / 9.0).abs() < 1e-13);
    }
}
