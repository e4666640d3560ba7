//! Undo a pole-raising gauge transformation and print the simple-pole
//! certificate.

use regsing::algebra::chart::{localize, Point};
use regsing::algebra::FieldElem;
use regsing::global::gauge;
use regsing::io::{matrix_to_string, parse_matrix};
use regsing::lattice::{reduce_to_simple_pole, saturate, t_pole_order, Reduction, SaturationOutcome};

fn main() {
    let a = parse_matrix("[[1/(3*z), 0], [1, -1/(2*z)]]").unwrap();
    let f = parse_matrix("[[z^2, 0], [0, 1]]").unwrap();
    let b = gauge(&a, &f).unwrap();
    println!("A  = {}", matrix_to_string(&a, "z"));
    println!("B  = {}  (pole order {} at 0)", matrix_to_string(&b, "z"), t_pole_order(&b) + 1);

    let local = localize(&b, &Point::Finite(FieldElem::int(0)), 6).unwrap();
    if let SaturationOutcome::Stable { lattice, steps } = saturate(&local.matrix) {
        println!("saturated after {steps} steps, basis {}", matrix_to_string(&lattice.hermite_basis(), "t"));
    }
    match reduce_to_simple_pole(&local.matrix) {
        Reduction::Reduced(cert) => {
            println!("F  = {}", matrix_to_string(&cert.f, "t"));
            println!("A' = {}", matrix_to_string(&cert.a_prime, "t"));
            println!("identity A' F = F A + F' holds: {}", cert.verify(&local.matrix));
        }
        Reduction::NotRegularSingular(d) => println!("diverged: {d:?}"),
    }

    let airy = parse_matrix("[[0, 1], [z, 0]]").unwrap();
    let at_inf = localize(&airy, &Point::Infinity, 6).unwrap();
    if let Reduction::NotRegularSingular(d) = reduce_to_simple_pole(&at_inf.matrix) {
        println!("Airy at infinity: valuation {} fell below the cutoff {} after {} steps", d.valuation_drop, d.cutoff, d.steps);
    }
}
