//! Regular and irregular singular points of linear systems `y' = A(z) y`
//! with rational-function coefficients.
//!
//! Points are decided exactly by lattice saturation: the `k[t]`-span of the
//! iterates of `t nabla_A` either stabilizes, which yields a gauge to a simple
//! pole, or its valuations fall below a fixed cutoff. Parametric systems are
//! analyzed generically and checked on random specializations, and
//! [`monodromy`] gives numerical loops for cross-checking exponents.

pub mod algebra;
pub mod cli;
pub mod global;
pub mod io;
pub mod lattice;
pub mod local;
pub mod monodromy;
pub mod param;
