//! Floating point helpers: polynomial roots by Aberth iteration.

use num_complex::Complex64;

/// Horner evaluation of `p` and `p'` (coefficients low-first).
fn eval_with_derivative(p: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for c in p.iter().rev() {
        d = d * x + v;
        v = v * x + c;
    }
    (v, d)
}

/// All complex roots of a polynomial given low-first; the leading
/// coefficient must be nonzero.
pub fn poly_roots(p: &[Complex64]) -> Vec<Complex64> {
    let mut p: Vec<Complex64> = p.to_vec();
    while p.last().is_some_and(|c| c.norm() == 0.0) {
        p.pop();
    }
    let n = p.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = p[n];
    let p: Vec<Complex64> = p.iter().map(|c| c / lead).collect();
    let radius = 1.0 + p[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(0.5 * radius, theta)
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (v, d) = eval_with_derivative(&p, z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let sum: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * sum);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    // a few Newton polishing steps
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (v, d) = eval_with_derivative(&p, *zi);
            if d.norm() > 0.0 {
                let step = v / d;
                if step.is_finite() {
                    *zi -= step;
                }
            }
        }
    }
    z
}

/// Error estimate `n |p(z)| / |p'(z)|` for a simple root.
pub fn root_error(p: &[Complex64], z: Complex64) -> f64 {
    let (v, d) = eval_with_derivative(p, z);
    let n = p.len().saturating_sub(1).max(1) as f64;
    if d.norm() == 0.0 {
        f64::INFINITY
    } else {
        n * v.norm() / d.norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_roots() {
        // (x-1)(x-2)(x+3) = x^3 - 7x + 6
        let p: Vec<Complex64> = [6.0, -7.0, 0.0, 1.0].iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let mut r: Vec<f64> = poly_roots(&p).iter().map(|z| z.re).collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in r.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn roots_of_unity() {
        let mut p = vec![Complex64::new(0.0, 0.0); 9];
        p[0] = Complex64::new(-1.0, 0.0);
        p[8] = Complex64::new(1.0, 0.0);
        for z in poly_roots(&p) {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            assert!(root_error(&p, z) < 1e-12);
        }
    }
}
