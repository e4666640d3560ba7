//! Modular gcd of rational polynomials.
//!
//! Images modulo word-sized primes are combined by CRT and lifted to the
//! rationals by rational reconstruction; a candidate is accepted only after it
//! divides both inputs exactly, so the result never depends on luck.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Poly;

const MAX_PRIMES: usize = 64;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The largest primes below `2^31`, descending.
fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| (1..1u64 << 31).rev().filter(|&n| is_prime(n)).take(MAX_PRIMES).collect())
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn reduce(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

/// Integer coefficients of a primitive multiple of `a`, lowest degree first.
fn integer_poly(a: &[BigRational]) -> Vec<BigInt> {
    let l = a.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = a.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    ints.into_iter().map(|c| c / &g).collect()
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn rem_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let li = inv_mod(b[db], p);
    while r.len() > db {
        let c = mul_mod(*r.last().unwrap(), li, p);
        let k = r.len() - 1 - db;
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = (r[k + j] + p - mul_mod(c, *bj, p)) % p;
        }
        trim(&mut r);
    }
    r
}

/// Monic gcd modulo `p` of nonzero polynomials.
fn gcd_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = rem_mod(&a, &b, p);
        a = b;
        b = r;
    }
    let li = inv_mod(*a.last().unwrap(), p);
    a.iter().map(|c| mul_mod(*c, li, p)).collect()
}

/// `n/d ≡ x (mod m)` with `|n|, d <= sqrt(m/2)`.
fn rational_reconstruct(x: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), x.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        (r0, r1, t0, t1) = (r1, r2, t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

fn divides(d: &Poly<BigRational>, a: &Poly<BigRational>) -> bool {
    a.div_exact(d).is_some()
}

/// Monic gcd of two nonzero polynomials; `None` only if the prime budget runs
/// out before a candidate verifies.
pub fn rational_gcd(a: &Poly<BigRational>, b: &Poly<BigRational>) -> Option<Poly<BigRational>> {
    let ai = integer_poly(a.coeffs());
    let bi = integer_poly(b.coeffs());
    let (la, lb) = (ai.last().unwrap().clone(), bi.last().unwrap().clone());
    let mut best: Option<usize> = None;
    let mut residues: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    for &p in primes() {
        if reduce(&la, p) == 0 || reduce(&lb, p) == 0 {
            continue;
        }
        let ap: Vec<u64> = ai.iter().map(|c| reduce(c, p)).collect();
        let bp: Vec<u64> = bi.iter().map(|c| reduce(c, p)).collect();
        let g = gcd_mod(&ap, &bp, p);
        let deg = g.len() - 1;
        if deg == 0 {
            return Some(Poly::one());
        }
        match best {
            Some(d) if deg > d => continue,
            Some(d) if deg == d => {
                let pb = BigInt::from(p);
                // CRT: x ≡ r (mod modulus), x ≡ g (mod p)
                let minv = BigInt::from(inv_mod(reduce(&modulus, p), p));
                for (r, gp) in residues.iter_mut().zip(&g) {
                    let diff = (BigInt::from(*gp) - &*r).mod_floor(&pb);
                    *r += &modulus * ((diff * &minv).mod_floor(&pb));
                }
                modulus *= &pb;
            }
            _ => {
                best = Some(deg);
                residues = g.iter().map(|c| BigInt::from(*c)).collect();
                modulus = BigInt::from(p);
            }
        }
        let coeffs: Option<Vec<BigRational>> = residues.iter().map(|r| rational_reconstruct(r, &modulus)).collect();
        if let Some(coeffs) = coeffs {
            let cand = Poly::from_coeffs(coeffs);
            if divides(&cand, a) && divides(&cand, b) {
                return Some(cand);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::rat;

    fn poly(c: &[(i64, i64)]) -> Poly<BigRational> {
        Poly::from_coeffs(c.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    fn euclid(a: &Poly<BigRational>, b: &Poly<BigRational>) -> Poly<BigRational> {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    #[test]
    fn agrees_with_euclid() {
        let f = poly(&[(1, 3), (-2, 1), (5, 7)]);
        let g = poly(&[(-4, 1), (0, 1), (1, 2), (3, 1)]);
        let h = poly(&[(7, 5), (1, 1)]);
        for (a, b) in [(f.mul(&h), g.mul(&h)), (f.mul(&f).mul(&h), f.mul(&g)), (f.clone(), g.clone()), (h.clone(), h.mul(&g))] {
            assert_eq!(rational_gcd(&a, &b).unwrap(), euclid(&a, &b));
        }
    }

    #[test]
    fn large_coefficients() {
        let big = BigRational::new(BigInt::from(10).pow(40) + 7, BigInt::from(3).pow(30));
        let f = Poly::from_coeffs(vec![big.clone(), rat(1, 1), big.recip()]);
        let g = poly(&[(2, 9), (-1, 1), (1, 1)]);
        let a = f.mul(&g);
        let b = f.mul(&poly(&[(11, 1), (1, 1)]));
        assert_eq!(rational_gcd(&a, &b).unwrap(), f.monic());
    }
}
