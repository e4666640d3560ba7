//! Generic analysis of a parametric system, one specialization, and a sweep
//! over random admissible parameter values.

use regsing::algebra::FieldElem;
use regsing::global::{classify_all, AnalysisOptions};
use regsing::io::parse_document;
use regsing::io::print::point_to_string;
use regsing::param::specialize::{analyze_generic, preservation_sweep, specialize_matrix, Specialization};

fn main() {
    let doc = parse_document("params: a, b\n[[a/(z*(z-1)), 0], [b, 1/(z-a)]]", None).unwrap();
    let sys = doc.system();
    let opts = AnalysisOptions::default();
    let generic = analyze_generic(&sys, &opts).unwrap();
    for g in &generic.points {
        println!("generic point {}", g.point.display_with("z"));
    }
    println!("bad locus: {:?}", generic.bad_locus.display_with(sys.space.names()));

    let c = Specialization::new(&sys.space, vec![FieldElem::int(2), FieldElem::int(-1)]).unwrap();
    let m = specialize_matrix(&sys.space, &sys.matrix, &c).unwrap();
    let report = classify_all(&m, &opts).unwrap();
    let singular: Vec<String> = report.singular_points.iter().map(point_to_string).collect();
    println!("a = 2, b = -1: singular points {singular:?}, regular singular {}", report.is_regular_singular_system);

    let sweep = preservation_sweep(&sys, 100, 7, &opts).unwrap();
    println!("sweep: {}/{} samples passed, {} rejected draws", sweep.passes(), sweep.requested, sweep.rejected);
}
