use alloc::vec;
use alloc::vec::Vec;

use super::traits::{PadicRing, Ring};
use super::Valuation;
use crate::{Error, Result};

/// A dense row-major matrix whose entries belong to a ring supplied at
/// each operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<F: Clone>(&self, f: impl FnMut(&E) -> F) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<F: Clone, Err>(&self, f: impl FnMut(&E) -> core::result::Result<F, Err>) -> core::result::Result<Matrix<F>, Err> {
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<core::result::Result<_, _>>()? })
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Rows listed in `rows`, in that order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), self.cols, |i, j| self.get(rows[i], j).clone())
    }

    pub fn zeros<R: Ring<Elem = E>>(ring: &R, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| ring.add(a, b)).collect() }
    }

    pub fn sub<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| ring.sub(a, b)).collect() }
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, c: &E) -> Self {
        self.map(|x| ring.mul(c, x))
    }

    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = ring.zero();
            for k in 0..self.cols {
                let t = ring.mul(self.get(i, k), other.get(k, j));
                acc = ring.add(&acc, &t);
            }
            acc
        })
    }

    pub fn is_zero<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.data.iter().all(|x| ring.is_zero(x))
    }

    /// Division-free determinant by expansion over column subsets.
    pub fn det<R: Ring<Elem = E>>(&self, ring: &R) -> E {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        assert!(n <= 20, "determinant expansion limited to 20×20");
        // f[mask] = Σ over bijections of the first |mask| rows onto `mask`
        let mut f = vec![ring.zero(); 1 << n];
        f[0] = ring.one();
        for mask in 1usize..(1 << n) {
            let row = mask.count_ones() as usize - 1;
            let mut acc = ring.zero();
            // sign from the number of chosen columns to the right of j
            for j in 0..n {
                if mask & (1 << j) == 0 {
                    continue;
                }
                let rest = mask & !(1 << j);
                if ring.is_zero(&f[rest]) {
                    continue;
                }
                let t = ring.mul(self.get(row, j), &f[rest]);
                let above = (rest >> j).count_ones();
                acc = if above % 2 == 0 { ring.add(&acc, &t) } else { ring.sub(&acc, &t) };
            }
            f[mask] = acc;
        }
        f[(1 << n) - 1].clone()
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Self {
        let rows: Vec<usize> = (0..self.rows).filter(|r| *r != skip_row).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|c| *c != skip_col).collect();
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Classical adjoint: `A·adj(A) = adj(A)·A = det(A)·I`.
    pub fn adjugate<R: Ring<Elem = E>>(&self, ring: &R) -> Self {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 1 {
            return Matrix::identity(ring, 1);
        }
        Matrix::from_fn(n, n, |i, j| {
            let d = self.minor(j, i).det(ring);
            if (i + j) % 2 == 0 {
                d
            } else {
                ring.neg(&d)
            }
        })
    }

    /// Gauss–Jordan inverse; the pivot is the first row holding a unit.
    pub fn inverse<R: Ring<Elem = E>>(&self, ring: &R) -> Result<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(ring, n);
        for col in 0..n {
            let pivot = (col..n).find(|r| ring.is_unit(a.get(*r, col))).ok_or(Error::SingularModP)?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p_inv = ring.try_inverse(a.get(col, col)).ok_or(Error::SingularModP)?;
            for j in 0..n {
                a.set(col, j, ring.mul(a.get(col, j), &p_inv));
                inv.set(col, j, ring.mul(inv.get(col, j), &p_inv));
            }
            for r in 0..n {
                if r == col || ring.is_zero(a.get(r, col)) {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for j in 0..n {
                    let t = ring.mul(&factor, a.get(col, j));
                    a.set(r, j, ring.sub(a.get(r, j), &t));
                    let t = ring.mul(&factor, inv.get(col, j));
                    inv.set(r, j, ring.sub(inv.get(r, j), &t));
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Smallest entry valuation (saturated for the zero matrix).
    pub fn valuation<R: PadicRing<Elem = E>>(&self, ring: &R) -> Valuation {
        self.data.iter().map(|x| ring.valuation(x)).fold(Valuation::saturated(ring.precision()), Valuation::min)
    }
}
