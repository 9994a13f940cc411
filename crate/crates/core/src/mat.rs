//! Matrix algebra over possibly noncommutative entry rings, and the constant
//! matrices of the theory.
//!
//! Index orders are frozen everywhere: rows and columns of 2x2 matrices are
//! indexed by (+, -), of 4x4 matrices by (++, +-, -+, --). Superscripts in
//! the source formulas are row indices, subscripts are column indices.

use crate::ring::Laurent;

/// Entry ring for matrices. `mul` must preserve factor order so that
/// matrices over noncommutative rings multiply correctly.
pub trait Entry: Clone {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
}

impl Entry for Laurent {
    fn zero() -> Self {
        Laurent::zero()
    }
    fn is_zero(&self) -> bool {
        Laurent::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<T>,
}

impl<T: Entry> Mat<T> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c));
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Mat::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = rhs.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn add(&self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for i in 0..self.rows * self.cols {
            out.data[i] = out.data[i].add(&rhs.data[i]);
        }
        out
    }

    pub fn transpose(&self) -> Mat<T> {
        let mut out = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Kronecker product: (A (.) B)^{ik}_{jl} = A^i_j * B^k_l, the A-factor
    /// written first in every entry product.
    pub fn kronecker(&self, rhs: &Mat<T>) -> Mat<T> {
        let mut out = Mat::zero(self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.set(i * rhs.rows + k, j * rhs.cols + l, a.mul(rhs.get(k, l)));
                    }
                }
            }
        }
        out
    }

    /// tr_L(X)^b_a = sum_i X^{(i,b)}_{(i,a)} for a 4x4 matrix.
    pub fn partial_trace_left(&self) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (4, 4));
        let mut out = Mat::zero(2, 2);
        for b in 0..2 {
            for a in 0..2 {
                let mut acc = T::zero();
                for i in 0..2 {
                    acc = acc.add(self.get(2 * i + b, 2 * i + a));
                }
                out.set(b, a, acc);
            }
        }
        out
    }

    /// tr_R(X)^b_a = sum_i X^{(b,i)}_{(a,i)} for a 4x4 matrix.
    pub fn partial_trace_right(&self) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (4, 4));
        let mut out = Mat::zero(2, 2);
        for b in 0..2 {
            for a in 0..2 {
                let mut acc = T::zero();
                for i in 0..2 {
                    acc = acc.add(self.get(2 * b + i, 2 * a + i));
                }
                out.set(b, a, acc);
            }
        }
        out
    }

    pub fn map<U: Entry>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl Mat<Laurent> {
    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.set(i, i, Laurent::one());
        }
        m
    }

    pub fn scale(&self, c: &Laurent) -> Self {
        self.map(|x| x * c)
    }
}

fn l(k: i64) -> Laurent {
    Laurent::omega(k)
}

fn ln(k: i64) -> Laurent {
    -&Laurent::omega(k)
}

fn z() -> Laurent {
    Laurent::zero()
}

/// C = [[0, w], [-w^5, 0]]
pub fn c_mat() -> Mat<Laurent> {
    Mat::from_rows(vec![vec![z(), l(1)], vec![ln(5), z()]])
}

/// C^-1 = -A^3 C = [[0, -w^-5], [w^-1, 0]]
pub fn c_inv_mat() -> Mat<Laurent> {
    Mat::from_rows(vec![vec![z(), ln(-5)], vec![l(-1), z()]])
}

/// Braiding operator in the basis (++, +-, -+, --), with A = w^-2.
pub fn r_mat() -> Mat<Laurent> {
    let a = Laurent::a_pow(1);
    let ai = Laurent::a_pow(-1);
    let mid = &Laurent::a_pow(1) - &Laurent::a_pow(-3);
    Mat::from_rows(vec![
        vec![a.clone(), z(), z(), z()],
        vec![z(), z(), ai.clone(), z()],
        vec![z(), ai, mid, z()],
        vec![z(), z(), z(), a],
    ])
}

/// Inverse braiding operator.
pub fn r_inv_mat() -> Mat<Laurent> {
    let a = Laurent::a_pow(1);
    let ai = Laurent::a_pow(-1);
    let mid = &Laurent::a_pow(-1) - &Laurent::a_pow(3);
    Mat::from_rows(vec![
        vec![ai.clone(), z(), z(), z()],
        vec![z(), mid, a.clone(), z()],
        vec![z(), a, z(), z()],
        vec![z(), z(), z(), ai],
    ])
}

/// Matrix of the flip v_i (x) v_j -> v_j (x) v_i.
pub fn tau_mat() -> Mat<Laurent> {
    let mut m = Mat::zero(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            m.set(2 * i + j, 2 * j + i, Laurent::one());
        }
    }
    m
}
