//! Random corpora shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regsing::algebra::{Field, FieldElem, Matrix, Poly, RatFun, RatFunMatrix};
use regsing::cli::{run, Cli, Outcome};

use clap::Parser;

pub type K = FieldElem;
pub type R = RatFun<K>;
pub type M = RatFunMatrix<K>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int(v: i64) -> K {
    K::int(v)
}

pub fn rational(rng: &mut impl Rng, range: i64) -> K {
    K::frac(rng.random_range(-range..=range), rng.random_range(1..=3))
}

pub fn t() -> R {
    R::var()
}

pub fn t_pow(k: i64) -> R {
    R::var_pow(k)
}

pub fn constant(c: K) -> R {
    R::constant(c)
}

pub fn poly(rng: &mut impl Rng, deg: usize, range: i64) -> Poly<K> {
    Poly::from_coeffs((0..=deg).map(|_| int(rng.random_range(-range..=range))).collect())
}

pub fn const_matrix(rng: &mut impl Rng, n: usize, range: i64) -> Matrix<K> {
    Matrix::from_rows((0..n).map(|_| (0..n).map(|_| rational(rng, range)).collect()).collect())
}

pub fn invertible_const(rng: &mut impl Rng, n: usize) -> Matrix<K> {
    loop {
        let m = Matrix::from_rows((0..n).map(|_| (0..n).map(|_| int(rng.random_range(-2..=2))).collect()).collect());
        if !m.det().is_zero() {
            return m;
        }
    }
}

pub fn lift(m: &Matrix<K>) -> M {
    M::from_constant(m)
}

/// `R/t + B0 + B1 t`.
pub fn simple_pole_system(rng: &mut impl Rng, n: usize) -> M {
    let r = lift(&const_matrix(rng, n, 3)).map(|f| f.mul_fn(&t_pow(-1)));
    let b0 = lift(&const_matrix(rng, n, 2));
    let b1 = lift(&const_matrix(rng, n, 2)).map(|f| f.mul_fn(&t()));
    r.add(&b0).add(&b1)
}

/// `U diag(t^k) W` with constant invertible `U`, `W` and `k` in `0..=max_k`.
pub fn shearing_gauge(rng: &mut impl Rng, n: usize, max_k: i64) -> M {
    let u = lift(&invertible_const(rng, n));
    let w = lift(&invertible_const(rng, n));
    let d: Vec<R> = (0..n).map(|_| t_pow(rng.random_range(0..=max_k))).collect();
    u.mul(&Matrix::diagonal(&d)).mul(&w)
}

/// Polynomial entries of degree at most `deg`, nonzero determinant.
pub fn poly_gauge(rng: &mut impl Rng, n: usize, deg: usize) -> M {
    loop {
        let f = Matrix::from_rows((0..n).map(|_| (0..n).map(|_| R::from_poly(poly(rng, deg, 2))).collect()).collect());
        if !f.det().is_zero() {
            return f;
        }
    }
}

/// `A' F = F A + F'`, multiplied out entry by entry.
pub fn cross_multiplied(a: &M, f: &M, a_prime: &M) -> bool {
    let n = a.rows();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let lhs = (0..n).fold(R::zero_fn(), |s, k| s.add_fn(&a_prime[(i, k)].mul_fn(&f[(k, j)])));
            let rhs = (0..n).fold(f[(i, j)].derivative(), |s, k| s.add_fn(&f[(i, k)].mul_fn(&a[(k, j)])));
            lhs == rhs
        })
    })
}

/// Distinct small rational points.
pub fn distinct_points(rng: &mut impl Rng, d: usize) -> Vec<K> {
    let mut out: Vec<K> = Vec::new();
    while out.len() < d {
        let p = rational(rng, 4);
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

pub fn run_cli(args: &[&str]) -> Outcome {
    let mut full = vec!["regsing"];
    full.extend_from_slice(args);
    run(&Cli::try_parse_from(full).expect("valid arguments"))
}

/// Writes `text` into a fresh temporary file.
pub fn input_file(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}
