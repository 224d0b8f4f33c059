use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use super::field::{GroundField, Scalar};

/// Rational matrices with at least this many entries are reduced modulo
/// several primes and reconstructed instead of eliminated directly.
const MULTIMODULAR_MIN: usize = 256;

/// Dense row-major matrix over a [`GroundField`].
///
/// Matrices act on column vectors: a map `k^n -> k^m` is an `m x n` matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: GroundField,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Reduced row echelon form: nonzero rows only, pivots leftmost-first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    pub rows: Vec<Vec<Scalar>>,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: GroundField, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: GroundField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: GroundField, cols: usize, rows: Vec<Vec<Scalar>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r);
        }
        Matrix {
            field,
            rows: n,
            cols,
            data,
        }
    }

    pub fn from_columns(field: GroundField, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged column");
            for (i, s) in c.iter().enumerate() {
                m.set(i, j, s.clone());
            }
        }
        m
    }

    pub fn from_i64(field: GroundField, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            field,
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn field(&self) -> GroundField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        debug_assert!(self.field.check(&v));
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Scalar) {
        let idx = i * self.cols + j;
        self.data[idx] = self.field.add(&self.data[idx], v);
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero_vec(&self.data)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.field, self.rows)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        assert_eq!(self.field, other.field, "field mismatch in product");
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if f.is_zero(a) {
                    continue;
                }
                f.axpy(out_row, a, other.row(k));
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !f.is_zero(a) && !f.is_zero(b) {
                        acc = f.add(&acc, &f.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.field.add_vec(&self.data, &other.data),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.field.sub_vec(&self.data, &other.data),
        }
    }

    pub fn scale(&self, a: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.field.scale_vec(a, &self.data),
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let rows = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend_from_slice(other.row(i));
                r
            })
            .collect();
        Self::from_rows(self.field, cols, rows)
    }

    /// Kronecker product; row `(i, k)` of the result is `i * other.rows + k`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut m = Self::zeros(self.field, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if self.field.is_zero(a) {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let v = self.field.mul(a, other.get(k, l));
                        m.set(i * other.rows + k, j * other.cols + l, v);
                    }
                }
            }
        }
        m
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut m = Self::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, other);
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn echelon(&self) -> Echelon {
        let pivots;
        let rows;
        match self.field {
            GroundField::Prime(p) => {
                let mut buf: Vec<u64> = self
                    .data
                    .iter()
                    .map(|s| match s {
                        Scalar::Mod(v) => *v,
                        Scalar::Rat(_) => unreachable!(),
                    })
                    .collect();
                let arith = ModP(p);
                pivots = rref_in_place(&arith, &mut buf, self.rows, self.cols);
                rows = (0..pivots.len())
                    .map(|i| {
                        buf[i * self.cols..(i + 1) * self.cols]
                            .iter()
                            .map(|&v| Scalar::Mod(v))
                            .collect()
                    })
                    .collect();
            }
            GroundField::Rationals if self.rows * self.cols >= MULTIMODULAR_MIN => {
                let data: Vec<&BigRational> = self
                    .data
                    .iter()
                    .map(|s| match s {
                        Scalar::Rat(q) => q.as_ref(),
                        Scalar::Mod(_) => unreachable!(),
                    })
                    .collect();
                let (p, r) = super::multimod::rref(&data, self.rows, self.cols);
                pivots = p;
                rows = r
                    .into_iter()
                    .map(|row| row.into_iter().map(|q| Scalar::Rat(Box::new(q))).collect())
                    .collect();
            }
            GroundField::Rationals => {
                let mut buf: Vec<BigRational> = self
                    .data
                    .iter()
                    .map(|s| match s {
                        Scalar::Rat(q) => q.as_ref().clone(),
                        Scalar::Mod(_) => unreachable!(),
                    })
                    .collect();
                pivots = rref_in_place(&Rat, &mut buf, self.rows, self.cols);
                rows = (0..pivots.len())
                    .map(|i| {
                        buf[i * self.cols..(i + 1) * self.cols]
                            .iter()
                            .map(|q| Scalar::Rat(Box::new(q.clone())))
                            .collect()
                    })
                    .collect();
            }
        }
        Echelon { rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// A lower bound for the rank, exact over finite fields. Over Q this is
    /// the rank modulo a large prime.
    pub fn rank_lower_bound(&self) -> usize {
        match self.field {
            GroundField::Rationals if self.rows * self.cols >= MULTIMODULAR_MIN => {
                let data: Vec<&BigRational> = self
                    .data
                    .iter()
                    .map(|s| match s {
                        Scalar::Rat(q) => q.as_ref(),
                        Scalar::Mod(_) => unreachable!(),
                    })
                    .collect();
                super::multimod::rank_lower_bound(&data, self.rows, self.cols)
            }
            _ => self.rank(),
        }
    }

    /// Null space basis, one vector per free column in increasing order.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let f = self.field;
        let ech = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&j| !is_pivot[j])
            .map(|j| {
                let mut v = f.zero_vec(self.cols);
                v[j] = f.one();
                for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                    v[p] = f.neg(&row[j]);
                }
                v
            })
            .collect()
    }

    /// A solution of `self * x = v` with all free variables zero.
    pub fn solve(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(v.len(), self.rows, "right-hand side length");
        let f = self.field;
        let aug = self.hstack(&Matrix::from_columns(f, self.rows, &[v.to_vec()]));
        let ech = aug.echelon();
        if ech.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = f.zero_vec(self.cols);
        for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
            x[p] = row[self.cols].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = self.hstack(&Matrix::identity(self.field, n));
        let ech = aug.echelon();
        if ech.pivots.len() < n || ech.pivots[n - 1] >= n {
            return None;
        }
        let rows = ech.rows.iter().map(|r| r[n..].to_vec()).collect();
        Some(Matrix::from_rows(self.field, n, rows))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|s| s.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub(super) trait Arith {
    type E: Clone;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `a - b * c`
    fn sub_mul(&self, a: &Self::E, b: &Self::E, c: &Self::E) -> Self::E;
}

pub(super) struct ModP(pub(super) u64);
pub(super) struct Rat;

impl Arith for ModP {
    type E = u64;
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn inv(&self, a: &u64) -> u64 {
        let p = self.0;
        let (mut base, mut exp, mut acc) = (*a, p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        acc
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.0
    }
    fn sub_mul(&self, a: &u64, b: &u64, c: &u64) -> u64 {
        let p = self.0;
        (a + p - b * c % p) % p
    }
}

impl Arith for Rat {
    type E = BigRational;
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn sub_mul(&self, a: &BigRational, b: &BigRational, c: &BigRational) -> BigRational {
        a - b * c
    }
}

/// Gauss-Jordan elimination, leftmost pivot first. Leaves the nonzero rows
/// of the reduced form at the top of `m` and returns the pivot columns.
pub(super) fn rref_in_place<A: Arith>(arith: &A, m: &mut [A::E], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(src) = (r..rows).find(|&i| !arith.is_zero(&m[i * cols + c])) else {
            continue;
        };
        if src != r {
            for j in 0..cols {
                m.swap(src * cols + j, r * cols + j);
            }
        }
        let inv = arith.inv(&m[r * cols + c]);
        for j in c..cols {
            m[r * cols + j] = arith.mul(&m[r * cols + j], &inv);
        }
        let pivot_row: Vec<A::E> = m[r * cols..(r + 1) * cols].to_vec();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = m[i * cols + c].clone();
            if arith.is_zero(&factor) {
                continue;
            }
            for j in c..cols {
                if !arith.is_zero(&pivot_row[j]) {
                    m[i * cols + j] = arith.sub_mul(&m[i * cols + j], &factor, &pivot_row[j]);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> GroundField {
        GroundField::prime(2).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::from_i64(f2(), &[&[1, 1], &[1, 1]]).rank(), 1);
        assert_eq!(Matrix::zeros(f2(), 3, 2).rank(), 0);
        assert_eq!(Matrix::identity(GroundField::Rationals, 4).rank(), 4);
    }

    #[test]
    fn kernel_examples() {
        assert!(Matrix::identity(f2(), 3).kernel_basis().is_empty());
        assert_eq!(Matrix::zeros(f2(), 2, 3).kernel_basis().len(), 3);
        // [1,1] over F_2: the only nonzero null vector among all four of F_2^2 is (1,1).
        let m = Matrix::from_i64(f2(), &[&[1, 1]]);
        let brute: Vec<Vec<Scalar>> = (0..4u64)
            .map(|i| vec![Scalar::Mod(i & 1), Scalar::Mod(i >> 1)])
            .filter(|v| f2().is_zero_vec(&m.mul_vec(v)) && !f2().is_zero_vec(v))
            .collect();
        assert_eq!(m.kernel_basis(), brute);
    }

    #[test]
    fn solve_examples() {
        let f = f2();
        let v = vec![Scalar::Mod(1), Scalar::Mod(0), Scalar::Mod(1)];
        assert_eq!(Matrix::identity(f, 3).solve(&v), Some(v.clone()));
        assert_eq!(Matrix::zeros(f, 3, 2).solve(&v), None);
        let m = Matrix::from_i64(f, &[&[1, 1], &[0, 0]]);
        let rhs = vec![Scalar::Mod(1), Scalar::Mod(0)];
        // candidates (1,0) and (0,1) both solve; free variable x1 = 0 picks (1,0)
        assert_eq!(m.solve(&rhs), Some(vec![Scalar::Mod(1), Scalar::Mod(0)]));
    }

    #[test]
    fn rational_inverse() {
        let q = GroundField::Rationals;
        let m = Matrix::from_i64(q, &[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(Matrix::from_i64(q, &[&[1, 2], &[2, 4]]).inverse().is_none());
    }
}
