//! Dense matrices over a [`Field`], and the rational-function matrices that
//! represent systems `y' = A y`.

use std::fmt;

use super::field::Field;
use super::poly::Poly;
use super::ratfun::RatFun;

#[derive(Clone, PartialEq)]
pub struct Matrix<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

/// An `n x n` matrix of rational functions.
pub type RatFunMatrix<K> = Matrix<RatFun<K>>;

/// Column vector of rational functions.
pub type RatFunVec<K> = Vec<RatFun<K>>;

impl<K: Field> Matrix<K> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![K::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = K::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_columns(cols: &[Vec<K>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn diagonal(entries: &[K]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<K> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<K> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<K>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &K> {
        self.data.iter()
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> Matrix<L> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<L: Field, E>(&self, f: impl Fn(&K) -> Result<L, E>) -> Result<Matrix<L>, E> {
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_, _>>()? })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }

    pub fn scale(&self, c: &K) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[K]) -> Vec<K> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(K::zero(), |acc, k| {
                    let (a, b) = (&self[(i, k)], &v[k]);
                    if a.is_zero() || b.is_zero() { acc } else { acc.add(&a.mul(b)) }
                })
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn trace(&self) -> K {
        (0..self.rows.min(self.cols)).fold(K::zero(), |acc, i| acc.add(&self[(i, i)]))
    }

    fn pivot_in_column(&self, col: usize, from: usize) -> Option<usize> {
        (from..self.rows).filter(|&r| !self[(r, col)].is_zero()).min_by_key(|&r| self[(r, col)].complexity())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = m.pivot_in_column(c, r) else { continue };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].mul(&inv);
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let t = f.mul(&m[(r, j)]);
                        m[(i, j)] = m[(i, j)].sub(&t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> K {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = K::one();
        for c in 0..n {
            let Some(p) = m.pivot_in_column(c, c) else {
                return K::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = det.neg();
            }
            let piv = m[(c, c)].clone();
            det = det.mul(&piv);
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].mul(&inv);
                for j in c..n {
                    let t = f.mul(&m[(c, j)]);
                    m[(i, j)] = m[(i, j)].sub(&t);
                }
            }
        }
        det
    }

    /// `None` for singular matrices.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = K::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(out)
    }

    /// Basis of the right kernel.
    pub fn kernel(&self) -> Vec<Vec<K>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![K::zero(); self.cols];
                v[f] = K::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = r[(row, f)].neg();
                }
                v
            })
            .collect()
    }

    /// Basis of the column space, taken from the original columns.
    pub fn column_space(&self) -> Vec<Vec<K>> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&c| self.column(c)).collect()
    }

    /// Characteristic polynomial `det(x I - M)` by Faddeev-LeVerrier.
    pub fn char_poly(&self) -> Poly<K> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![K::zero(); n + 1];
        coeffs[n] = K::one();
        let mut m = Self::zeros(n, n);
        let id = Self::identity(n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k
            m = self.mul(&m).add(&id.scale(&coeffs[n - k + 1]));
            let c = self.mul(&m).trace().neg().div(&K::from_i64(k as i64));
            coeffs[n - k] = c;
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Block `[r0, r1) x [c0, c1)`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut out = Self::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out[(i - r0, j - c0)] = self[(i, j)].clone();
            }
        }
        out
    }
}

impl<K: Field> std::ops::Index<(usize, usize)> for Matrix<K> {
    type Output = K;
    fn index(&self, (i, j): (usize, usize)) -> &K {
        &self.data[i * self.cols + j]
    }
}

impl<K: Field> std::ops::IndexMut<(usize, usize)> for Matrix<K> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut K {
        &mut self.data[i * self.cols + j]
    }
}

impl<K: Field> fmt::Debug for Matrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<K: Field> RatFunMatrix<K> {
    /// Entrywise derivative.
    pub fn derivative(&self) -> Self {
        self.map(|f| f.derivative())
    }

    /// Lift a constant matrix.
    pub fn from_constant(m: &Matrix<K>) -> Self {
        m.map(|c| RatFun::constant(c.clone()))
    }

    /// Value at 0 of every entry; `None` if some entry has a pole there.
    pub fn value_at_zero(&self) -> Option<Matrix<K>> {
        let mut out = Matrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].value_at_zero()?;
            }
        }
        Some(out)
    }

    /// Minimum valuation at 0 over all entries (`None` for the zero matrix).
    pub fn valuation(&self) -> Option<i64> {
        self.data.iter().filter_map(|f| f.valuation()).min()
    }

    /// Pole order at 0: `max(0, -valuation)`.
    pub fn pole_order(&self) -> usize {
        self.valuation().map_or(0, |v| (-v).max(0) as usize)
    }

    pub fn map_fn(&self, f: impl Fn(&RatFun<K>) -> RatFun<K>) -> Self {
        self.map(f)
    }

    pub fn display_with(&self, var: &str) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let cells: Vec<String> = (0..self.cols).map(|j| self[(i, j)].display_with(var)).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

/// `F A F^{-1} + F' F^{-1}`; `None` when `F` is singular.
pub fn gauge<K: Field>(a: &RatFunMatrix<K>, f: &RatFunMatrix<K>) -> Option<RatFunMatrix<K>> {
    let fi = f.inverse()?;
    Some(gauge_with_inverse(a, f, &fi))
}

pub fn gauge_with_inverse<K: Field>(a: &RatFunMatrix<K>, f: &RatFunMatrix<K>, f_inv: &RatFunMatrix<K>) -> RatFunMatrix<K> {
    f.mul(a).add(&f.derivative()).mul(f_inv)
}

/// The cross-multiplied gauge relation `A' F = F A + F'`, checked without
/// any division.
pub fn gauge_identity_holds<K: Field>(a: &RatFunMatrix<K>, f: &RatFunMatrix<K>, a_prime: &RatFunMatrix<K>) -> bool {
    a_prime.mul(f) == f.mul(a).add(&f.derivative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{rat, FieldElem};
    use num_rational::BigRational;

    fn q(rows: &[&[i64]]) -> Matrix<BigRational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| rat(v, 1)).collect()).collect())
    }

    #[test]
    fn determinant_inverse_kernel() {
        let m = q(&[&[2, 1], &[4, 3]]);
        assert_eq!(m.det(), rat(2, 1));
        assert_eq!(m.mul(&m.inverse().unwrap()), Matrix::identity(2));
        let s = q(&[&[1, 2], &[2, 4]]);
        assert!(s.inverse().is_none());
        let k = s.kernel();
        assert_eq!(k.len(), 1);
        assert!(s.mul_vec(&k[0]).iter().all(|x| num_traits::Zero::is_zero(x)));
    }

    #[test]
    fn characteristic_polynomial() {
        // [[0,1],[0,0]] -> x^2 ; [[1,2],[3,4]] -> x^2 - 5x - 2
        assert_eq!(q(&[&[0, 1], &[0, 0]]).char_poly().display_with("x"), "x^2");
        assert_eq!(q(&[&[1, 2], &[3, 4]]).char_poly().display_with("x"), "x^2-5*x-2");
    }

    #[test]
    fn gauge_by_logarithmic_derivative() {
        type R = RatFun<FieldElem>;
        let z = R::var();
        let zero = RatFunMatrix::<FieldElem>::zeros(1, 1);
        let f = Matrix::from_rows(vec![vec![z.clone()]]);
        let a = gauge(&zero, &f).unwrap();
        assert_eq!(a[(0, 0)], R::var_pow(-1));
        assert!(gauge_identity_holds(&zero, &f, &a));
        // identity gauge leaves A alone
        assert_eq!(gauge(&a, &Matrix::identity(1)).unwrap(), a);
    }
}
