//! Exact arithmetic: fields, polynomials, rational functions, series,
//! matrices and factorization.

pub mod chart;
pub mod factor;
pub mod field;
pub mod laurent;
pub mod matrix;
pub mod modgcd;
pub mod numeric;
pub mod poly;
pub mod ratfun;

pub use field::{Field, FieldElem, NumberField};
pub use matrix::{Matrix, RatFunMatrix};
pub use poly::Poly;
pub use ratfun::RatFun;
