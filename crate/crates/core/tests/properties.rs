//! Randomized invariants of the exact and numeric layers.

mod common;

use std::sync::Arc;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use regsing::algebra::chart::{invert_system, localize_chart, localize_gauge, Chart};
use regsing::algebra::{Field, Matrix, NumberField, Poly};
use regsing::global::{classify_all, fuchsian_from_residues, gauge, mobius, pole_points, AnalysisOptions, Mobius};
use regsing::lattice::{reduce_to_simple_pole, saturate, scale_lattice, t_pole_order, Reduction, SaturationOutcome};
use regsing::local::{analyze_matrix, power_series_solution, Exponent, PointClass};
use regsing::monodromy::{abel_check, transfer, NumericSystem, Path, TransferOptions};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

/// Entries `c * d` with `d` from a small menu of local shapes at 0.
fn local_system(rng: &mut impl Rng, n: usize) -> M {
    let dens = [t_pow(0), t_pow(-1), t_pow(-2), constant(int(1)).div_fn(&t().sub_fn(&constant(int(1)))).unwrap()];
    M::from_rows(
        (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        if rng.random_bool(0.3) {
                            return R::zero_fn();
                        }
                        dens[rng.random_range(0..dens.len())].scale(&rational(rng, 3))
                    })
                    .collect()
            })
            .collect(),
    )
}

fn random_gauge(rng: &mut impl Rng, n: usize) -> M {
    if rng.random_bool(0.5) {
        shearing_gauge(rng, n, 2)
    } else {
        poly_gauge(rng, n, 1)
    }
}

fn fuchsian(rng: &mut impl Rng, n: usize, d: usize) -> (Vec<K>, M) {
    let pts = distinct_points(rng, d);
    let rs: Vec<Matrix<K>> = (0..d).map(|_| const_matrix(rng, n, 2)).collect();
    let a = fuchsian_from_residues(&pts, &rs).unwrap();
    (pts, a)
}

fn is_stable(o: &SaturationOutcome<K>) -> bool {
    matches!(o, SaturationOutcome::Stable { .. })
}

/// No entry of `m` has a pole at 0.
fn holomorphic_at_zero(m: &M) -> bool {
    m.entries().all(|f| f.valuation().is_none_or(|v| v >= 0))
}

fn exponent_sum(exps: &[Exponent]) -> K {
    exps.iter().fold(K::zero(), |s, e| match e {
        Exponent::Exact { value, multiplicity } => s.add(&value.mul(&int(*multiplicity as i64))),
        // Sum of the roots of a monic factor of degree d is minus its x^(d-1) coefficient.
        Exponent::Factor { poly, multiplicity, .. } => {
            let d = poly.degree().unwrap();
            s.sub(&poly.coeff(d - 1).mul(&int(*multiplicity as i64)))
        }
    })
}

fn labels(a: &M, opts: &AnalysisOptions) -> Vec<(String, &'static str)> {
    let r = classify_all(a, opts).unwrap();
    r.entries.iter().map(|e| (e.point.display_with("z"), e.class().label())).collect()
}

fn point_of(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(6.0..8.0), rng.random_range(-1.0..1.0))
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn infinity_chart_is_an_involution(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=2);
        let a = local_system(&mut r, n);
        prop_assert_eq!(invert_system(&invert_system(&a)), a);
    }

    #[test]
    fn localization_commutes_with_gauge(seed in any::<u64>(), p in -3i64..=3, at_infinity in any::<bool>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=2);
        let a = local_system(&mut r, n);
        let f = random_gauge(&mut r, n);
        let chart = if at_infinity { Chart::Inversion } else { Chart::Shift(int(p)) };
        let lhs = localize_chart(&gauge(&a, &f).unwrap(), &chart);
        let rhs = gauge(&localize_chart(&a, &chart), &localize_gauge(&f, &chart)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn trace_of_residue_is_the_exponent_sum(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=3);
        let a = local_system(&mut r, n);
        let analysis = analyze_matrix(&a);
        if let Some(data) = &analysis.residue {
            prop_assert_eq!(data.residue.trace(), exponent_sum(analysis.class.exponents()));
            prop_assert_eq!(data.char_poly.degree(), Some(n));
            prop_assert!(data.char_poly.is_monic());
        }
    }

    #[test]
    fn regular_points_have_power_series_solutions(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=2);
        // Gauging a holomorphic system keeps 0 regular.
        let b = lift(&const_matrix(&mut r, n, 2)).add(&lift(&const_matrix(&mut r, n, 2)).map(|f| f.mul_fn(&t())));
        let a = gauge(&b, &random_gauge(&mut r, n)).unwrap();
        let analysis = analyze_matrix(&a);
        prop_assert!(matches!(analysis.class, PointClass::Regular { .. }), "{}", analysis.class.label());
        let cert = analysis.regular.as_ref().unwrap();
        prop_assert!(cross_multiplied(&a, &cert.f, &cert.a_prime));
        let order = 2 * n;
        let ys = power_series_solution(&cert.a_prime, order).unwrap();
        prop_assert!(!ys[0].det().is_zero());
        // Y' - A' Y vanishes to order 2n.
        let y = ys.iter().enumerate().fold(M::zeros(n, n), |s, (m, c)| s.add(&lift(c).map(|f| f.mul_fn(&t_pow(m as i64)))));
        let residual = y.derivative().sub(&cert.a_prime.mul(&y));
        prop_assert!(residual.entries().all(|f| f.valuation().is_none_or(|v| v >= order as i64)));
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn saturation_verdict_is_gauge_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=2);
        let a = local_system(&mut r, n);
        let g = gauge(&a, &random_gauge(&mut r, n)).unwrap();
        prop_assert_eq!(is_stable(&saturate(&a)), is_stable(&saturate(&g)));
    }

    #[test]
    fn reduction_is_idempotent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=3);
        let a = gauge(&simple_pole_system(&mut r, n), &shearing_gauge(&mut r, n, 2)).unwrap();
        let Reduction::Reduced(first) = reduce_to_simple_pole(&a) else {
            return Err(TestCaseError::fail("regular singular input diverged"));
        };
        let Reduction::Reduced(second) = reduce_to_simple_pole(&first.a_prime) else {
            return Err(TestCaseError::fail("reduced form diverged"));
        };
        prop_assert!(cross_multiplied(&first.a_prime, &second.f, &second.a_prime));
        let inv = second.f.inverse().unwrap();
        prop_assert!(holomorphic_at_zero(&second.f) && holomorphic_at_zero(&inv));
        prop_assert!(t_pole_order(&second.a_prime) <= t_pole_order(&first.a_prime));
    }

    #[test]
    fn scaling_preserves_stability(seed in any::<u64>(), m in -3i64..=3) {
        let mut r = rng(seed);
        let n = r.random_range(1..=2);
        let a = gauge(&simple_pole_system(&mut r, n), &shearing_gauge(&mut r, n, 2)).unwrap();
        let SaturationOutcome::Stable { lattice, .. } = saturate(&a) else {
            return Err(TestCaseError::fail("regular singular input diverged"));
        };
        prop_assert!(lattice.is_stable(&a));
        let scaled = scale_lattice(&lattice, &t_pow(m)).unwrap();
        prop_assert!(scaled.is_stable(&a));
    }

    #[test]
    fn singular_points_are_poles_or_infinity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=2);
        let a = local_system(&mut r, n);
        let opts = AnalysisOptions::default();
        let report = classify_all(&a, &opts).unwrap();
        let poles = pole_points(&a, &opts);
        prop_assert!(report.singular_points.iter().all(|p| p.is_infinity() || poles.contains(p)));
    }

    #[test]
    fn unused_extension_leaves_the_report_unchanged(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=2);
        let a = local_system(&mut r, n);
        let min_poly = Poly::from_coeffs([-2, 0, 1].map(|c: i64| num_rational::BigRational::from_integer(c.into())).to_vec());
        let field: Arc<NumberField> = NumberField::new(&min_poly, "x", 6).unwrap();
        let plain = AnalysisOptions::default();
        let extended = AnalysisOptions { extension: Some(field), ..AnalysisOptions::default() };
        prop_assert_eq!(labels(&a, &plain), labels(&a, &extended));
    }

    #[test]
    fn classification_is_mobius_covariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=2);
        let d = r.random_range(1..=3);
        let (_, a) = fuchsian(&mut r, n, d);
        let map = loop {
            let c: Vec<K> = (0..4).map(|_| int(r.random_range(-2..=2))).collect();
            if let Ok(m) = Mobius::new(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()) {
                break m;
            }
        };
        let opts = AnalysisOptions::default();
        let before = classify_all(&a, &opts).unwrap();
        let after = classify_all(&mobius(&a, &map), &opts).unwrap();
        let mut want: Vec<String> = before
            .singular_points
            .iter()
            .map(|p| map.preimage(p).unwrap().display_with("z"))
            .collect();
        let mut got: Vec<String> = after.singular_points.iter().map(|p| p.display_with("z")).collect();
        want.sort();
        got.sort();
        prop_assert_eq!(got, want);
        for e in &before.entries {
            let q = map.preimage(&e.point).unwrap();
            prop_assert_eq!(after.class_at(&q).map(PointClass::label).unwrap_or("regular"), e.class().label());
        }
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn transfers_compose_along_paths(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = r.random_range(1..=3);
        let (_, a) = fuchsian(&mut r, 2, d);
        let sys = NumericSystem::new(&a).unwrap();
        let opts = TransferOptions::default();
        let (p, q, s) = (point_of(&mut r), point_of(&mut r), point_of(&mut r));
        let first = Path::line(p, q);
        let second = Path::polyline(&[q, Complex64::new(q.re, 3.0), s]);
        let t1 = transfer(&sys, &first, &opts).unwrap();
        let t2 = transfer(&sys, &second, &opts).unwrap();
        let whole = transfer(&sys, &first.then(&second), &opts).unwrap();
        let err = (&whole.matrix - &t2.matrix * &t1.matrix).norm();
        let scale = whole.matrix.norm().max(1.0);
        prop_assert!(err <= 10.0 * (whole.error_estimate + t1.error_estimate + t2.error_estimate) * scale + 1e-12 * scale, "{err:e}");
    }

    #[test]
    fn homotopic_paths_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = r.random_range(1..=3);
        let (_, a) = fuchsian(&mut r, 2, d);
        let sys = NumericSystem::new(&a).unwrap();
        let opts = TransferOptions::default();
        let (p, q) = (point_of(&mut r), point_of(&mut r));
        // Both paths stay right of every pole, so they are homotopic.
        let direct = transfer(&sys, &Path::line(p, q), &opts).unwrap();
        let detour = transfer(&sys, &Path::polyline(&[p, Complex64::new(9.0, -3.0), Complex64::new(10.0, 4.0), q]), &opts).unwrap();
        let err = (&direct.matrix - &detour.matrix).norm() / direct.matrix.norm().max(1.0);
        prop_assert!(err <= 10.0 * opts.tolerance.max(direct.error_estimate + detour.error_estimate), "{err:e}");
    }

    #[test]
    fn determinant_follows_the_trace(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = r.random_range(1..=3);
        let (_, a) = fuchsian(&mut r, 2, d);
        let sys = NumericSystem::new(&a).unwrap();
        let opts = TransferOptions::default();
        let b = point_of(&mut r);
        let c = |re, im| Complex64::new(re, im);
        let path = if r.random_bool(0.5) {
            Path::polyline(&[b, c(b.re, 5.0), c(-1.0, 5.0)])
        } else {
            // A closed loop around every pole.
            Path::polyline(&[b, c(b.re, 5.0), c(-6.0, 5.0), c(-6.0, -5.0), c(b.re, -5.0), b])
        };
        let t = transfer(&sys, &path, &opts).unwrap();
        prop_assert!(abel_check(&sys, &path, &t).relative_error < 1e-8);
    }
}
