//! Canonical strings. Denominators are monic and, over the rationals or a
//! declared extension, printed as sorted products of irreducible factors.

use std::cmp::Ordering;

use crate::algebra::chart::Point;
use crate::algebra::factor::{compare_elem_polys, factor_elem};
use crate::algebra::field::{Field, FieldElem};
use crate::algebra::matrix::{Matrix, RatFunMatrix};
use crate::algebra::poly::Poly;
use crate::algebra::ratfun::RatFun;
use crate::local::Exponent;
use crate::param::specialize::ParamMatrix;
use crate::param::ParamSpace;

fn factor_piece(p: &Poly<FieldElem>, mult: usize, var: &str) -> String {
    let s = p.display_with(var);
    let base = if p.term_count() > 1 || p.coeffs().iter().any(|c| c.is_compound()) { format!("({s})") } else { s };
    if mult > 1 {
        format!("{base}^{mult}")
    } else {
        base
    }
}

/// `(z^2+1)/(z*(z-1))`.
pub fn ratfun_to_string(f: &RatFun<FieldElem>, var: &str) -> String {
    if f.is_poly() {
        return f.num().display_with(var);
    }
    let fac = factor_elem(f.den());
    if !fac.is_complete() || fac.factors.iter().any(|x| !x.certified) {
        return f.display_with(var);
    }
    let mut factors = fac.factors;
    factors.sort_by(|a, b| {
        let by_root = match (a.poly.degree(), b.poly.degree()) {
            (Some(1), Some(1)) => match (a.poly.coeff(0).to_rational(), b.poly.coeff(0).to_rational()) {
                (Some(x), Some(y)) => y.cmp(&x),
                _ => Ordering::Equal,
            },
            _ => Ordering::Equal,
        };
        a.poly.degree().cmp(&b.poly.degree()).then(by_root).then_with(|| compare_elem_polys(&a.poly, &b.poly))
    });
    let pieces: Vec<String> = factors.iter().map(|x| factor_piece(&x.poly, x.multiplicity, var)).collect();
    let den = if pieces.len() > 1 { format!("({})", pieces.join("*")) } else { pieces[0].clone() };
    let num = f.num().display_with(var);
    let num = if f.num().term_count() > 1 || f.num().coeffs().iter().any(|c| c.is_compound()) { format!("({num})") } else { num };
    format!("{num}/{den}")
}

pub fn matrix_to_string(m: &RatFunMatrix<FieldElem>, var: &str) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let cells: Vec<String> = (0..m.cols()).map(|j| ratfun_to_string(&m[(i, j)], var)).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

/// Rows of entry strings, for JSON.
pub fn matrix_cells(m: &RatFunMatrix<FieldElem>, var: &str) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| ratfun_to_string(&m[(i, j)], var)).collect()).collect()
}

pub fn constant_matrix_to_string(m: &Matrix<FieldElem>) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let cells: Vec<String> = (0..m.cols()).map(|j| m[(i, j)].to_string()).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

/// `params: a, b` header (when any) followed by the matrix literal.
pub fn document_to_string(space: &ParamSpace, m: &ParamMatrix) -> String {
    let body = if space.is_empty() {
        matrix_to_string(&m.map(|f| f.map(|c| c.as_const().expect("no parameters").clone())), "z")
    } else {
        m.display_with("z")
    };
    if space.is_empty() {
        body
    } else {
        format!("params: {}\n{}", space.names().join(", "), body)
    }
}

pub fn point_to_string(p: &Point<FieldElem>) -> String {
    p.display_with("z")
}

/// Exact exponents print as values, the others as `root(x^2-2)`.
pub fn exponent_to_string(e: &Exponent) -> String {
    match e {
        Exponent::Exact { value, .. } => value.to_string(),
        Exponent::Factor { poly, .. } => format!("root({})", poly.display_with("x")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse::{parse_document, parse_matrix};
    use proptest::prelude::*;

    #[test]
    fn factored_denominators() {
        let m = parse_matrix("[[(z^2+1)/(z^2-z), 1/(z^3-2*z^2+z)], [-3/2, z/(2*z^2+2)]]").unwrap();
        assert_eq!(matrix_to_string(&m, "z"), "[[(z^2+1)/(z*(z-1)), 1/(z*(z-1)^2)], [-3/2, 1/2*z/(z^2+1)]]");
    }

    fn entry() -> impl Strategy<Value = String> {
        let atom = prop_oneof![
            (-5i64..6).prop_map(|v| format!("({v})")),
            Just("z".to_string()),
            Just("a".to_string()),
            (1i64..4).prop_map(|k| format!("z^{k}")),
        ];
        proptest::collection::vec((atom, 0usize..3), 1..5).prop_map(|parts| {
            let mut s = String::from("1");
            for (a, op) in parts {
                let sym = ["+", "*", "/"][op];
                s = format!("({s}){sym}({a}+1)");
            }
            s
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(es in proptest::collection::vec(entry(), 4), parametric in any::<bool>()) {
            let es: Vec<String> = es.into_iter().map(|e| if parametric { e } else { e.replace('a', "2") }).collect();
            let text = format!("{}[[{}, {}], [{}, {}]]", if parametric { "params: a\n" } else { "" }, es[0], es[1], es[2], es[3]);
            let doc = match parse_document(&text, None) {
                Ok(d) => d,
                Err(_) => return Ok(()),
            };
            let printed = document_to_string(&doc.space, &doc.matrix);
            let again = parse_document(&printed, None).unwrap();
            prop_assert_eq!(&again, &doc);
            prop_assert_eq!(document_to_string(&again.space, &again.matrix), printed);
        }
    }
}
