//! Specialization of parameter-dependent systems, bad loci and
//! preservation sweeps.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::elem::{clear_denominators, ParamElem, ParamSpace};
use super::mpoly::MPoly;
use crate::algebra::chart::{compare_points, localize_at, point_field, Point};
use crate::algebra::factor::factor_in;
use crate::algebra::field::{Field, FieldElem};
use crate::algebra::matrix::{gauge_identity_holds, RatFunMatrix};
use crate::algebra::poly::Poly;
use crate::algebra::ratfun::RatFun;
use crate::global::{classify_all, common_denominator, AnalysisOptions};
use crate::lattice::{is_simple_pole, reduce_to_simple_pole, GaugeCertificate, Reduction};

pub type ParamRatFun = RatFun<ParamElem>;
pub type ParamMatrix = RatFunMatrix<ParamElem>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecializeError {
    #[error("expected values for {expected} parameters, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("unknown parameter {0}")]
    UnknownParameter(String),
    #[error("inadmissible specialization: {polynomial} vanishes")]
    Inadmissible { polynomial: String },
    #[error("generic fiber is not regular singular at {point}")]
    NotRegularSingular { point: String },
    #[error("generic pole set needs a factor of degree {0} in z with parameter-dependent roots")]
    UnsupportedPoles(usize),
    #[error("generic analysis is indeterminate: {0}")]
    Indeterminate(String),
}

/// A system `dy = A y` with coefficients in `Q(l)(z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamSystem {
    pub space: ParamSpace,
    pub matrix: ParamMatrix,
}

/// Values for every declared parameter, in declaration order.
#[derive(Clone, Debug, PartialEq)]
pub struct Specialization {
    values: Vec<FieldElem>,
}

impl Specialization {
    pub fn new(space: &ParamSpace, values: Vec<FieldElem>) -> Result<Self, SpecializeError> {
        if values.len() != space.len() {
            return Err(SpecializeError::Arity { expected: space.len(), got: values.len() });
        }
        Ok(Specialization { values })
    }

    /// From `name = value` pairs covering every parameter.
    pub fn from_assignment(space: &ParamSpace, pairs: &[(String, FieldElem)]) -> Result<Self, SpecializeError> {
        let mut values = vec![None; space.len()];
        for (name, v) in pairs {
            let i = space.index_of(name).ok_or_else(|| SpecializeError::UnknownParameter(name.clone()))?;
            values[i] = Some(v.clone());
        }
        let got = values.iter().filter(|v| v.is_some()).count();
        let values: Option<Vec<FieldElem>> = values.into_iter().collect();
        values.map(|values| Specialization { values }).ok_or(SpecializeError::Arity { expected: space.len(), got })
    }

    pub fn values(&self) -> &[FieldElem] {
        &self.values
    }
}

/// Parameter polynomials that must not vanish.
#[derive(Clone, Debug, PartialEq)]
pub struct BadLocus {
    nvars: usize,
    members: Vec<MPoly>,
}

impl BadLocus {
    pub fn new(nvars: usize) -> Self {
        BadLocus { nvars, members: Vec::new() }
    }

    /// Adds `p` unless it is a nonzero constant or already present.
    pub fn insert(&mut self, p: &MPoly) {
        if p.is_constant() && !p.is_zero() {
            return;
        }
        let p = p.monic();
        if !self.members.contains(&p) {
            self.members.push(p);
        }
    }

    pub fn extend(&mut self, other: &BadLocus) {
        for p in &other.members {
            self.insert(p);
        }
    }

    pub fn members(&self) -> &[MPoly] {
        &self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The first member vanishing at `c`, if any.
    pub fn violated_by(&self, c: &Specialization) -> Option<&MPoly> {
        self.members.iter().find(|p| p.eval(&c.values).is_zero())
    }

    /// Members as sorted strings.
    pub fn display_with(&self, names: &[String]) -> Vec<String> {
        let set: BTreeSet<String> = self.members.iter().map(|p| p.display_with(names)).collect();
        set.into_iter().collect()
    }

    fn collect_elem(&mut self, x: &ParamElem) {
        self.insert(&x.to_fraction(self.nvars).1);
    }

    fn collect_ratfun(&mut self, f: &ParamRatFun) {
        if let Some(p) = admissibility_member(&cleared(f, self.nvars).1) {
            self.insert(&p);
        }
    }

    fn collect_matrix(&mut self, m: &ParamMatrix) {
        for f in m.entries() {
            self.collect_ratfun(f);
        }
    }
}

fn inadmissible(space: &ParamSpace, p: &MPoly) -> SpecializeError {
    SpecializeError::Inadmissible { polynomial: p.display_with(space.names()) }
}

/// Numerator and denominator coefficients of `f` with every parameter
/// denominator cleared jointly, so that both are polynomial in the parameters.
pub fn cleared(f: &ParamRatFun, nvars: usize) -> (Vec<MPoly>, Vec<MPoly>) {
    let parts: Vec<(MPoly, MPoly)> = f.num().coeffs().iter().chain(f.den().coeffs()).map(|c| c.to_fraction(nvars)).collect();
    let mut all = clear_denominators(&parts, nvars);
    let den = all.split_off(f.num().coeffs().len());
    (all, den)
}

/// A coefficient of the cleared denominator whose non-vanishing keeps it
/// nonzero; `None` when some coefficient is a nonzero constant.
fn admissibility_member(den: &[MPoly]) -> Option<MPoly> {
    if den.iter().any(|c| c.is_constant() && !c.is_zero()) {
        return None;
    }
    den.iter().filter(|c| !c.is_zero()).min_by_key(|c| (c.degree(), c.terms().count())).cloned()
}

fn eval_poly(cs: &[MPoly], values: &[FieldElem]) -> Poly<FieldElem> {
    Poly::from_coeffs(cs.iter().map(|m| m.eval(values)).collect())
}

fn specialize_elem(space: &ParamSpace, x: &ParamElem, c: &Specialization) -> Result<FieldElem, SpecializeError> {
    let (n, d) = x.to_fraction(space.len());
    let dv = d.eval(&c.values);
    if dv.is_zero() {
        return Err(inadmissible(space, &d));
    }
    Ok(n.eval(&c.values).div(&dv))
}

/// `f^c`, keeping `c(z) = z`.
pub fn specialize_ratfun(space: &ParamSpace, f: &ParamRatFun, c: &Specialization) -> Result<RatFun<FieldElem>, SpecializeError> {
    let (num, den) = cleared(f, space.len());
    RatFun::new(eval_poly(&num, &c.values), eval_poly(&den, &c.values)).ok_or_else(|| {
        inadmissible(space, &admissibility_member(&den).unwrap_or_else(|| MPoly::zero(space.len())))
    })
}

pub fn specialize_matrix(space: &ParamSpace, m: &ParamMatrix, c: &Specialization) -> Result<RatFunMatrix<FieldElem>, SpecializeError> {
    m.try_map(|f| specialize_ratfun(space, f, c))
}

pub fn specialize_point(space: &ParamSpace, p: &Point<ParamElem>, c: &Specialization) -> Result<Point<FieldElem>, SpecializeError> {
    Ok(match p {
        Point::Finite(a) => Point::Finite(specialize_elem(space, a, c)?),
        Point::RootOf(q) => Point::RootOf(q.try_map(|x| specialize_elem(space, x, c))?),
        Point::Infinity => Point::Infinity,
    })
}

/// Embeds a parameter-free matrix.
pub fn lift_matrix(a: &RatFunMatrix<FieldElem>) -> ParamMatrix {
    a.map(|f| f.map(|c| ParamElem::Const(c.clone())))
}

impl ParamSystem {
    pub fn new(space: ParamSpace, matrix: ParamMatrix) -> Self {
        ParamSystem { space, matrix }
    }

    pub fn dimension(&self) -> usize {
        self.matrix.rows()
    }

    /// Denominators of the coefficients: where `specialize` is undefined.
    pub fn admissibility_locus(&self) -> BadLocus {
        let mut locus = BadLocus::new(self.space.len());
        locus.collect_matrix(&self.matrix);
        locus
    }

    /// `A^c`.
    pub fn specialize(&self, c: &Specialization) -> Result<RatFunMatrix<FieldElem>, SpecializeError> {
        if let Some(p) = self.admissibility_locus().violated_by(c) {
            return Err(inadmissible(&self.space, p));
        }
        specialize_matrix(&self.space, &self.matrix, c)
    }
}

/// A generic pole (or infinity) with its local system over `Q(l)` and a
/// simple-pole certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct GenericPoint {
    pub point: Point<ParamElem>,
    /// Chart root for `RootOf` points.
    pub root: Option<ParamElem>,
    pub local: ParamMatrix,
    pub certificate: GaugeCertificate<ParamElem>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenericAnalysis {
    pub points: Vec<GenericPoint>,
    pub bad_locus: BadLocus,
}

impl GenericAnalysis {
    pub fn specialized_points(&self, space: &ParamSpace, c: &Specialization) -> Result<Vec<Point<FieldElem>>, SpecializeError> {
        self.points.iter().map(|g| specialize_point(space, &g.point, c)).collect()
    }
}

/// Zeros of the common denominator as points over `Q(l)`, plus infinity.
/// The parameter-free content is factored over the rationals; what remains
/// must be linear in `z`.
pub fn generic_pole_points(sys: &ParamSystem) -> Result<Vec<Point<ParamElem>>, SpecializeError> {
    let nvars = sys.space.len();
    let den = common_denominator(&sys.matrix);
    let parts: Vec<(MPoly, MPoly)> = den.coeffs().iter().map(|c| c.to_fraction(nvars)).collect();
    let cleared = clear_denominators(&parts, nvars);
    let mut monomials: BTreeSet<Vec<u32>> = BTreeSet::new();
    for c in &cleared {
        monomials.extend(c.terms().map(|(e, _)| e.clone()));
    }
    let mut content: Option<Poly<FieldElem>> = None;
    for m in &monomials {
        let p = Poly::from_coeffs(cleared.iter().map(|c| c.coeff(m)).collect());
        content = Some(match content {
            None => p.monic(),
            Some(g) => g.gcd(&p).monic(),
        });
    }
    let content = content.unwrap_or_else(Poly::one);
    let rest = den.div_exact(&content.map(|c| ParamElem::Const(c.clone()))).expect("content divides");
    let mut points = Vec::new();
    let factors = factor_in(&content, None);
    if let Some(f) = factors.factors.iter().find(|f| !f.certified) {
        return Err(SpecializeError::Indeterminate(format!("could not factor {}", f.poly.display_with("z"))));
    }
    for f in &factors.factors {
        let q = f.poly.map(|c| ParamElem::Const(c.clone()));
        points.push(if f.poly.degree() == Some(1) { Point::Finite(q.coeff(0).neg()) } else { Point::RootOf(q) });
    }
    match rest.degree() {
        Some(0) => {}
        Some(1) => {
            let rest = rest.monic();
            points.push(Point::Finite(rest.coeff(0).neg()));
        }
        Some(d) => return Err(SpecializeError::UnsupportedPoles(d)),
        None => unreachable!("denominator is nonzero"),
    }
    points.push(Point::Infinity);
    Ok(points)
}

/// Localizes and reduces at every generic pole, then collects the bad locus.
pub fn analyze_generic(sys: &ParamSystem, opts: &AnalysisOptions) -> Result<GenericAnalysis, SpecializeError> {
    let points = generic_pole_points(sys)?;
    let results: Vec<Result<GenericPoint, SpecializeError>> = points
        .par_iter()
        .map(|p| {
            let root = match p {
                Point::RootOf(q) => {
                    let q = q.map(|c| c.as_const().expect("parameter-free descriptor").clone());
                    let k = point_field(&q, opts.degree_cap).map_err(|e| SpecializeError::Indeterminate(e.to_string()))?;
                    Some(ParamElem::Const(k.generator()))
                }
                _ => None,
            };
            let local = localize_at(&sys.matrix, p, root.clone()).matrix;
            match reduce_to_simple_pole(&local) {
                Reduction::Reduced(certificate) => Ok(GenericPoint { point: p.clone(), root, local, certificate }),
                Reduction::NotRegularSingular(_) => Err(SpecializeError::NotRegularSingular { point: p.to_string() }),
            }
        })
        .collect();
    let points: Vec<GenericPoint> = results.into_iter().collect::<Result<_, _>>()?;
    let bad_locus = bad_locus_regsing(sys, &points);
    Ok(GenericAnalysis { points, bad_locus })
}

/// Union of every denominator met by the generic data: coefficients of `A`,
/// moving pole coordinates, local systems, both gauge matrices and `A'`, and
/// the constant terms of the denominators of `t A'`.
pub fn bad_locus_regsing(sys: &ParamSystem, points: &[GenericPoint]) -> BadLocus {
    let nvars = sys.space.len();
    let mut locus = sys.admissibility_locus();
    let den = common_denominator(&sys.matrix);
    for c in den.coeffs() {
        locus.collect_elem(c);
    }
    for g in points {
        if let Point::Finite(a) = &g.point {
            locus.collect_elem(a);
        }
        locus.collect_matrix(&g.local);
        locus.collect_matrix(&g.certificate.f);
        locus.collect_matrix(&g.certificate.basis());
        locus.collect_matrix(&g.certificate.a_prime);
        let t = RatFun::var();
        for f in g.certificate.a_prime.entries() {
            let d0 = &cleared(&f.mul_fn(&t), nvars).1[0];
            locus.insert(d0);
        }
    }
    locus
}

/// Outcome for one sampled specialization.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleOutcome {
    pub values: Vec<FieldElem>,
    pub regular_singular: bool,
    pub poles_contained: bool,
    pub certificates_transported: bool,
    pub indeterminate: bool,
    pub singular_points: Vec<Point<FieldElem>>,
}

impl SampleOutcome {
    pub fn passed(&self) -> bool {
        self.regular_singular && self.poles_contained && self.certificates_transported && !self.indeterminate
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub seed: u64,
    pub requested: usize,
    pub rejected: usize,
    pub generic_points: Vec<Point<ParamElem>>,
    pub bad_locus: Vec<String>,
    pub outcomes: Vec<SampleOutcome>,
    pub elapsed_ms: f64,
}

impl SweepReport {
    pub fn passes(&self) -> usize {
        self.outcomes.iter().filter(|o| o.passed()).count()
    }

    pub fn counterexamples(&self) -> Vec<&SampleOutcome> {
        self.outcomes.iter().filter(|o| !o.passed()).collect()
    }

    pub fn all_passed(&self) -> bool {
        self.outcomes.len() == self.requested && self.passes() == self.requested
    }
}

/// Range of the sampled integer values.
pub const SAMPLE_RANGE: std::ops::RangeInclusive<i64> = -10..=10;

/// Checks one specialization against the generic analysis.
pub fn check_sample(sys: &ParamSystem, generic: &GenericAnalysis, c: &Specialization, opts: &AnalysisOptions) -> Result<SampleOutcome, SpecializeError> {
    let space = &sys.space;
    let a = sys.specialize(c)?;
    let report = classify_all(&a, opts).map_err(|e| SpecializeError::Indeterminate(e.to_string()))?;
    let expected = generic.specialized_points(space, c)?;
    let poles_contained = report
        .pole_points
        .iter()
        .chain(&report.singular_points)
        .all(|p| expected.iter().any(|q| compare_points(p, q).is_eq()));
    let mut transported = true;
    for g in &generic.points {
        let p = specialize_point(space, &g.point, c)?;
        let root = g.root.as_ref().map(|r| r.as_const().expect("constant root").clone());
        let local = specialize_matrix(space, &g.local, c)?;
        let f = specialize_matrix(space, &g.certificate.f, c)?;
        let a_prime = specialize_matrix(space, &g.certificate.a_prime, c)?;
        transported &= local == localize_at(&a, &p, root).matrix
            && !f.det().is_zero()
            && gauge_identity_holds(&local, &f, &a_prime)
            && is_simple_pole(&a_prime);
    }
    Ok(SampleOutcome {
        values: c.values.clone(),
        regular_singular: report.is_regular_singular_system,
        poles_contained,
        certificates_transported: transported,
        indeterminate: report.indeterminate,
        singular_points: report.singular_points,
    })
}

/// Draws up to `samples` admissible integer specializations from a seeded
/// stream and checks each one.
pub fn preservation_sweep(sys: &ParamSystem, samples: usize, seed: u64, opts: &AnalysisOptions) -> Result<SweepReport, SpecializeError> {
    let start = Instant::now();
    let generic = analyze_generic(sys, opts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = Vec::new();
    let mut rejected = 0;
    let max_draws = 100 * samples + 1000;
    let mut draws = 0;
    while chosen.len() < samples && draws < max_draws {
        draws += 1;
        let values = (0..sys.space.len()).map(|_| FieldElem::int(rng.random_range(SAMPLE_RANGE))).collect();
        let c = Specialization { values };
        if generic.bad_locus.violated_by(&c).is_some() {
            rejected += 1;
            continue;
        }
        chosen.push(c);
    }
    let outcomes: Vec<SampleOutcome> = chosen
        .par_iter()
        .map(|c| {
            check_sample(sys, &generic, c, opts).unwrap_or_else(|_| SampleOutcome {
                values: c.values.clone(),
                regular_singular: false,
                poles_contained: false,
                certificates_transported: false,
                indeterminate: true,
                singular_points: Vec::new(),
            })
        })
        .collect();
    Ok(SweepReport {
        seed,
        requested: samples,
        rejected,
        generic_points: generic.points.iter().map(|g| g.point.clone()).collect(),
        bad_locus: generic.bad_locus.display_with(sys.space.names()),
        outcomes,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::chart::localize_at;
    use crate::algebra::matrix::gauge;
    use crate::io::parse::{parse_document, parse_matrix};

    fn system(text: &str) -> ParamSystem {
        parse_document(text, None).unwrap().system()
    }

    fn at(sys: &ParamSystem, v: &[i64]) -> Specialization {
        Specialization::new(&sys.space, v.iter().map(|&x| FieldElem::int(x)).collect()).unwrap()
    }

    #[test]
    fn evaluation() {
        let s = system("params: l\n[[l/z]]");
        assert_eq!(s.specialize(&at(&s, &[2])).unwrap(), parse_matrix("[[2/z]]").unwrap());
        let s = system("params: l\n[[1/(z-l)]]");
        assert_eq!(s.specialize(&at(&s, &[0])).unwrap(), parse_matrix("[[1/z]]").unwrap());
        let s = system("params: l\n[[1/(l*z)]]");
        assert_eq!(s.specialize(&at(&s, &[0])).unwrap_err(), SpecializeError::Inadmissible { polynomial: "l".into() });
        assert_eq!(s.admissibility_locus().display_with(s.space.names()), vec!["l".to_string()]);
    }

    #[test]
    fn generic_poles() {
        let s = system("params: l\n[[l/z + (1-l)/(z-1)]]");
        let ps = generic_pole_points(&s).unwrap();
        assert_eq!(ps.len(), 3);
        let s = system("params: l\n[[1/(z-l), l/(z^2+1)], [0, 0]]");
        let ps = generic_pole_points(&s).unwrap();
        assert!(matches!(ps[0], Point::RootOf(_)));
        assert!(matches!(ps[1], Point::Finite(_)));
        let s = system("params: l\n[[1/(z^2-l)]]");
        assert_eq!(generic_pole_points(&s).unwrap_err(), SpecializeError::UnsupportedPoles(2));
    }

    #[test]
    fn bad_locus_collects_certificate_denominators() {
        let opts = AnalysisOptions::default();
        let s = system("params: l\n[[l/(z*(z-1))]]");
        let g = analyze_generic(&s, &opts).unwrap();
        assert!(g.bad_locus.is_empty());
        let s = system("params: l\n[[1/(z-l)]]");
        assert!(analyze_generic(&s, &opts).unwrap().bad_locus.is_empty());
        // gauge of [[0]] by F = z^2 / (l - 1): A = (2/z) + 0, certificate F carries 1/(l-1)
        let s = system("params: l\n[[1/((l-1)*z^2), 0], [0, 1/z]]");
        let g = analyze_generic(&s, &opts).unwrap_err();
        assert!(matches!(g, SpecializeError::NotRegularSingular { .. }));
        let s = system("params: l\n[[1/(l-1)*(1/z), 1/z^2], [0, 0]]");
        let g = analyze_generic(&s, &opts).unwrap();
        assert!(g.bad_locus.display_with(s.space.names()).contains(&"l-1".to_string()));
    }

    #[test]
    fn irregular_generic_fiber_is_rejected() {
        let s = system("[[1/z^2]]");
        let e = preservation_sweep(&s, 5, 1, &AnalysisOptions::default()).unwrap_err();
        assert!(matches!(e, SpecializeError::NotRegularSingular { .. }));
    }

    #[test]
    fn sweeps() {
        let opts = AnalysisOptions::default();
        let s = system("params: l\n[[l/z]]");
        let r = preservation_sweep(&s, 100, 7, &opts).unwrap();
        assert!(r.all_passed(), "{:?}", r.counterexamples());
        let s = system("params: l\n[[l/z + (1-l)/(z-1)]]");
        let r = preservation_sweep(&s, 50, 7, &opts).unwrap();
        assert!(r.all_passed());
        let at0 = classify_all(&s.specialize(&at(&s, &[0])).unwrap(), &opts).unwrap();
        assert!(!at0.pole_points.contains(&Point::Finite(FieldElem::int(0))));
        let at1 = classify_all(&s.specialize(&at(&s, &[1])).unwrap(), &opts).unwrap();
        assert!(!at1.pole_points.contains(&Point::Finite(FieldElem::int(1))));
    }

    #[test]
    fn commutes_with_localization_and_gauge() {
        let s = system("params: a, b\n[[a/z, 1/(z-1)], [b/z^2, (a+b)/(z*(z+2))]]");
        let f = parse_document("params: a, b\n[[1, a*z], [0, z^2/(b-3)]]", None).unwrap().matrix;
        for v in [[1, 2], [-3, 5], [0, 7]] {
            let c = at(&s, &v);
            let ac = s.specialize(&c).unwrap();
            for p in [Point::Finite(FieldElem::int(0)), Point::Finite(FieldElem::int(1)), Point::Infinity] {
                let gp = match &p {
                    Point::Finite(x) => Point::Finite(ParamElem::Const(x.clone())),
                    _ => Point::Infinity,
                };
                let lhs = specialize_matrix(&s.space, &localize_at(&s.matrix, &gp, None).matrix, &c).unwrap();
                assert_eq!(lhs, localize_at(&ac, &p, None).matrix);
            }
            let fc = specialize_matrix(&s.space, &f, &c).unwrap();
            let gauged = specialize_matrix(&s.space, &gauge(&s.matrix, &f).unwrap(), &c).unwrap();
            assert_eq!(gauged, gauge(&ac, &fc).unwrap());
        }
    }
}
