//! Build Fuchsian systems from residues and check the residue at infinity.

use regsing::algebra::{Field, FieldElem, Matrix};
use regsing::global::{classify_all, fuchsian_from_residues, infinity_residue, AnalysisOptions};
use regsing::io::print::{constant_matrix_to_string, point_to_string};
use regsing::io::matrix_to_string;

fn q(n: i64, d: i64) -> FieldElem {
    FieldElem::frac(n, d)
}

fn main() {
    let points = [q(0, 1), q(1, 1), q(-1, 2)];
    let residues = [
        Matrix::from_rows(vec![vec![q(1, 2), q(1, 1)], vec![q(0, 1), q(0, 1)]]),
        Matrix::from_rows(vec![vec![q(0, 1), q(0, 1)], vec![q(1, 1), q(1, 3)]]),
        Matrix::from_rows(vec![vec![q(-1, 4), q(0, 1)], vec![q(2, 1), q(1, 5)]]),
    ];
    let a = fuchsian_from_residues(&points, &residues).unwrap();
    println!("A = {}", matrix_to_string(&a, "z"));
    let sum = residues.iter().fold(Matrix::zeros(2, 2), |s, r| s.add(r));
    let at_inf = infinity_residue(&a).unwrap();
    println!("residue at infinity {} = -sum: {}", constant_matrix_to_string(&at_inf), at_inf == sum.neg());
    let report = classify_all(&a, &AnalysisOptions::default()).unwrap();
    for e in &report.entries {
        println!("  {:>6}  {}", point_to_string(&e.point), e.class().label());
    }
    // Residues summing to zero make infinity an ordinary point.
    let balanced = fuchsian_from_residues(&[q(0, 1), q(2, 1)], &[Matrix::from_rows(vec![vec![q(1, 3)]]), Matrix::from_rows(vec![vec![q(-1, 3)]])]).unwrap();
    let r = classify_all(&balanced, &AnalysisOptions::default()).unwrap();
    let inf = r.entries.last().unwrap();
    println!("balanced: infinity is {} (zero residue: {})", inf.class().label(), infinity_residue(&balanced).unwrap().entries().all(Field::is_zero));
}
