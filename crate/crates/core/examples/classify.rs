//! Classify every singular point of a few systems on the Riemann sphere.

use regsing::global::{classify_all, AnalysisOptions};
use regsing::io::parse_matrix;
use regsing::io::print::point_to_string;

fn main() {
    let systems = [
        ("Euler", "[[1/(2*z)]]"),
        ("Airy", "[[0, 1], [z, 0]]"),
        ("hypergeometric", "[[0, 1/z], [-1/(3*(z-1)), (1/2)/z + 1/(z-1)]]"),
        ("apparent pole", "[[1/z]]"),
        ("irrational poles", "[[1/(z^2-2), 1], [0, 1/(3*z)]]"),
    ];
    let opts = AnalysisOptions::default();
    for (name, text) in systems {
        let a = parse_matrix(text).expect("valid matrix");
        let report = classify_all(&a, &opts).expect("classification");
        println!("{name}: {text}");
        for e in &report.entries {
            println!("  {:>18}  {}", point_to_string(&e.point), e.class().label());
        }
        println!("  regular singular system: {}\n", report.is_regular_singular_system);
    }
}
