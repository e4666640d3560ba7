//! Residues, exponents and integer resonances at a regular singular point.

use regsing::algebra::chart::Point;
use regsing::algebra::FieldElem;
use regsing::global::{analyze_point, AnalysisOptions};
use regsing::io::parse_matrix;
use regsing::io::print::exponent_to_string;
use regsing::local::integer_resonances;

fn main() {
    let opts = AnalysisOptions::default();
    for text in ["[[1/(2*z), 1], [0, -1/(3*z)]]", "[[1/z, 1/z], [0, -1/z]]", "[[0, 1/z], [2/z, 0]]", "[[0, 1/z], [0, 0]]"] {
        let a = parse_matrix(text).unwrap();
        let analysis = analyze_point(&a, &Point::Finite(FieldElem::int(0)), &opts);
        let data = analysis.residue.as_ref().expect("regular singular at 0");
        let exps: Vec<String> = analysis.class.exponents().iter().map(exponent_to_string).collect();
        let res: Vec<String> = integer_resonances(&data.char_poly).iter().map(|m| m.to_string()).collect();
        println!("{text}");
        println!("  class {}, char poly {}", analysis.class.label(), data.char_poly.display_with("x"));
        println!("  exponents [{}], integer resonances {{{}}}", exps.join(", "), res.join(", "));
    }
}
