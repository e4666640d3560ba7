//! Points of the projective line and the local charts at them.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use super::factor::{compare_elem_polys, rational_components};
use super::field::{ExtensionError, Field, FieldElem, NumberField};
use super::matrix::RatFunMatrix;
use super::poly::Poly;
use super::ratfun::RatFun;

/// A point of `P^1`. `RootOf(q)` stands for any root of the monic
/// irreducible `q` of degree at least 2; conjugate roots share their
/// classification.
#[derive(Clone, PartialEq, Debug)]
pub enum Point<K: Field> {
    Finite(K),
    RootOf(Poly<K>),
    Infinity,
}

impl<K: Field> Point<K> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    /// Degree of the defining polynomial (`0` for infinity).
    pub fn degree(&self) -> usize {
        match self {
            Point::Finite(_) => 1,
            Point::RootOf(q) => q.degree().unwrap_or(0),
            Point::Infinity => 0,
        }
    }

    /// The minimal polynomial `z - p` or `q`.
    pub fn descriptor(&self) -> Option<Poly<K>> {
        match self {
            Point::Finite(p) => Some(Poly::linear_root(p)),
            Point::RootOf(q) => Some(q.clone()),
            Point::Infinity => None,
        }
    }

    pub fn display_with(&self, var: &str) -> String {
        match self {
            Point::Finite(p) => p.to_string(),
            Point::RootOf(q) => format!("root({})", q.display_with(var)),
            Point::Infinity => "inf".into(),
        }
    }
}

impl<K: Field> fmt::Display for Point<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("z"))
    }
}

/// Report order: finite before infinity, then descriptor degree, then
/// value (rational points) or coefficients.
pub fn compare_points(a: &Point<FieldElem>, b: &Point<FieldElem>) -> Ordering {
    let rank = |p: &Point<FieldElem>| match p {
        Point::Infinity => (1, 0),
        _ => (0, p.degree()),
    };
    rank(a).cmp(&rank(b)).then_with(|| match (a, b) {
        (Point::Finite(x), Point::Finite(y)) => match (x.to_rational(), y.to_rational()) {
            (Some(x), Some(y)) => x.cmp(&y),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => {
                let cx = rational_components(&Poly::constant(x.clone()));
                let cy = rational_components(&Poly::constant(y.clone()));
                cx.iter().map(|c| c.coeff(0)).cmp(cy.iter().map(|c| c.coeff(0)))
            }
        },
        (Point::RootOf(p), Point::RootOf(q)) => compare_elem_polys(p, q),
        _ => Ordering::Equal,
    })
}

/// The substitution defining a local chart: `z = t + p` or `z = 1/t`.
#[derive(Clone, PartialEq, Debug)]
pub enum Chart<K: Field> {
    Shift(K),
    Inversion,
}

/// A system in the local variable `t` at a point.
#[derive(Clone, PartialEq, Debug)]
pub struct LocalSystem<K: Field> {
    pub matrix: RatFunMatrix<K>,
    pub point: Point<K>,
    pub chart: Chart<K>,
}

impl<K: Field> LocalSystem<K> {
    pub fn dimension(&self) -> usize {
        self.matrix.rows()
    }

    /// Undo the chart substitution.
    pub fn to_global(&self) -> RatFunMatrix<K> {
        match &self.chart {
            Chart::Shift(p) => self.matrix.map(|f| f.shift(&p.neg())),
            Chart::Inversion => invert_system(&self.matrix),
        }
    }
}

/// `-(1/t^2) A(1/t)`; an involution.
pub fn invert_system<K: Field>(a: &RatFunMatrix<K>) -> RatFunMatrix<K> {
    let factor = RatFun::var_pow(-2).neg_fn();
    a.map(|f| f.invert_variable().mul_fn(&factor))
}

/// The system in the given chart.
pub fn localize_chart<K: Field>(a: &RatFunMatrix<K>, chart: &Chart<K>) -> RatFunMatrix<K> {
    match chart {
        Chart::Shift(p) => a.map(|f| f.shift(p)),
        Chart::Inversion => invert_system(a),
    }
}

/// A gauge matrix in the given chart: `F(t + p)` or `F(1/t)`.
pub fn localize_gauge<K: Field>(f: &RatFunMatrix<K>, chart: &Chart<K>) -> RatFunMatrix<K> {
    match chart {
        Chart::Shift(p) => f.map(|g| g.shift(p)),
        Chart::Inversion => f.map(|g| g.invert_variable()),
    }
}

/// Localization at a finite point or at infinity. `RootOf` points need a
/// field containing the root; see [`localize`].
pub fn localize_at<K: Field>(a: &RatFunMatrix<K>, point: &Point<K>, root: Option<K>) -> LocalSystem<K> {
    let chart = match point {
        Point::Finite(p) => Chart::Shift(p.clone()),
        Point::RootOf(_) => Chart::Shift(root.expect("root of the descriptor")),
        Point::Infinity => Chart::Inversion,
    };
    LocalSystem { matrix: localize_chart(a, &chart), point: point.clone(), chart }
}

/// Name of the generator adjoined for `RootOf` points.
pub const ROOT_NAME: &str = "r";

/// The field `Q[x]/(q)` for a `RootOf` point with rational descriptor.
pub fn point_field(q: &Poly<FieldElem>, cap: usize) -> Result<Arc<NumberField>, ExtensionError> {
    let rq = q.try_map(|c| c.to_rational().ok_or(ExtensionError::Tower))?;
    NumberField::new(&rq, ROOT_NAME, cap)
}

/// Localization over the rationals or their extensions; `RootOf` points
/// adjoin a root of the descriptor.
pub fn localize(a: &RatFunMatrix<FieldElem>, point: &Point<FieldElem>, cap: usize) -> Result<LocalSystem<FieldElem>, ExtensionError> {
    match point {
        Point::RootOf(q) => {
            let k = point_field(q, cap)?;
            if a.entries().any(|f| !ratfun_is_rational(f)) {
                return Err(ExtensionError::Tower);
            }
            let a = a.map(|f| f.map(|c| c.to_rat_elem().expect("rational coefficient")));
            Ok(localize_at(&a, point, Some(k.generator())))
        }
        _ => Ok(localize_at(a, point, None)),
    }
}

/// True when every coefficient is rational-valued.
pub fn ratfun_is_rational(f: &RatFun<FieldElem>) -> bool {
    f.num().coeffs().iter().chain(f.den().coeffs()).all(|c| c.to_rational().is_some())
}
