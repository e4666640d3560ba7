//! Numeric monodromy around each pole, checked against the exponents and
//! against the product relation.

use std::f64::consts::PI;

use num_complex::Complex64;
use regsing::algebra::FieldElem;
use regsing::io::parse_matrix;
use regsing::monodromy::{
    all_local_monodromies, exponent_consistency, loop_product, Consistency, NumericSystem, TransferOptions,
};

fn main() {
    let text = "[[1/(3*z) + 1/(z-1), 1/z], [0, -1/(2*(z-1)) + 1/(4*(z+2))]]";
    let a = parse_matrix(text).unwrap();
    let sys = NumericSystem::new(&a).unwrap();
    let opts = TransferOptions::default();
    let loops: Vec<_> = all_local_monodromies(&sys, &opts).into_iter().map(Result::unwrap).collect();
    for m in &loops {
        let eig: Vec<String> = m.eigenvalues().iter().map(|z| format!("{:.6}{:+.6}i", z.re, z.im)).collect();
        println!("pole {:>5.2}: eigenvalues {}  (error estimate {:.1e})", m.geometry.point.re, eig.join(", "), m.error_estimate);
    }
    for p in [-2, 0, 1] {
        if let Ok(Consistency::Checked { max_error, .. }) = exponent_consistency(&a, &FieldElem::int(p), &opts) {
            println!("exp(2 pi i exponent) vs eigenvalues at {p}: {max_error:.1e}");
        }
    }
    let product = loop_product(&loops.iter().map(|m| m.matrix.clone()).collect::<Vec<_>>());
    let eig = regsing::monodromy::eigenvalues(&product);
    // The system is triangular, so the loop around all poles has eigenvalues
    // exp(2 pi i s) with s the residue sums along the diagonal.
    println!("product eigenvalues {:?}", eig.iter().map(|z| format!("{:.6}{:+.6}i", z.re, z.im)).collect::<Vec<_>>());
    let want: Vec<Complex64> = [1.0 / 3.0 + 1.0, -0.5 + 0.25].iter().map(|s| Complex64::new(0.0, 2.0 * PI * s).exp()).collect();
    println!("expected {:?}", want.iter().map(|z| format!("{:.6}{:+.6}i", z.re, z.im)).collect::<Vec<_>>());
}
