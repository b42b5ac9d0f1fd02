//! Dense exact linear algebra over any [`Field`].
//!
//! Everything is plain Gaussian elimination with the first-nonzero pivot
//! rule; matrices here are at most 27 × 9, so determinism beats cleverness.
//! Nullspace bases are canonical: free variables are set to 1 in ascending
//! column order, which keeps every downstream comparison reproducible.

use crate::field::Field;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
}

pub type LinalgResult<T> = Result<T, LinalgError>;

/// Row-major dense matrix with entries in one field.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<K: Field> {
    rows: usize,
    cols: usize,
    entries: Vec<K>,
}

impl<K: Field> Matrix<K> {
    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        assert!(!rows.is_empty() && !rows[0].is_empty(), "empty matrix");
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> K) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Matrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn zero(rows: usize, cols: usize, proto: &K) -> Self {
        Self::from_fn(rows, cols, |_, _| proto.zero())
    }

    pub fn identity(n: usize, proto: &K) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { proto.one() } else { proto.zero() })
    }

    pub fn column_vector(entries: Vec<K>) -> Self {
        assert!(!entries.is_empty());
        Matrix {
            rows: entries.len(),
            cols: 1,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &K {
        assert!(r < self.rows && c < self.cols, "index out of range");
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: K) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        self.entries[r * self.cols + c] = v;
    }

    pub fn proto(&self) -> &K {
        &self.entries[0]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> Matrix<L> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> LinalgResult<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(rhs.entries.iter())
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn sub(&self, rhs: &Self) -> LinalgResult<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} - {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(rhs.entries.iter())
                .map(|(a, b)| a.sub(b))
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a.neg()).collect(),
        }
    }

    pub fn scale(&self, k: &K) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a.mul(k)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> LinalgResult<Self> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let zero = self.proto().zero();
        Ok(Matrix::from_fn(self.rows, rhs.cols, |r, c| {
            let mut acc = zero.clone();
            for k in 0..self.cols {
                acc = acc.add(&self.at(r, k).mul(rhs.at(k, c)));
            }
            acc
        }))
    }

    /// Kronecker product with the standard block layout:
    /// entry ((r1*rows2 + r2), (c1*cols2 + c2)) = a[r1,c1] * b[r2,c2].
    pub fn kron(&self, rhs: &Self) -> Self {
        Matrix::from_fn(
            self.rows * rhs.rows,
            self.cols * rhs.cols,
            |r, c| {
                let (r1, r2) = (r / rhs.rows, r % rhs.rows);
                let (c1, c2) = (c / rhs.cols, c % rhs.cols);
                self.at(r1, c1).mul(rhs.at(r2, c2))
            },
        )
    }

    pub fn column(&self, c: usize) -> Vec<K> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn row(&self, r: usize) -> Vec<K> {
        (0..self.cols).map(|c| self.at(r, c).clone()).collect()
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0usize;
        for col in 0..m.cols {
            if pivot_row >= m.rows {
                break;
            }
            // first nonzero entry in this column at or below pivot_row
            let found = (pivot_row..m.rows).find(|&r| !m.at(r, col).is_zero());
            let r0 = match found {
                Some(r) => r,
                None => continue,
            };
            if r0 != pivot_row {
                for c in 0..m.cols {
                    let a = m.at(r0, c).clone();
                    let b = m.at(pivot_row, c).clone();
                    m.set(r0, c, b);
                    m.set(pivot_row, c, a);
                }
            }
            let inv = m
                .at(pivot_row, col)
                .inv()
                .expect("pivot is nonzero");
            for c in 0..m.cols {
                let v = m.at(pivot_row, c).mul(&inv);
                m.set(pivot_row, c, v);
            }
            for r in 0..m.rows {
                if r != pivot_row && !m.at(r, col).is_zero() {
                    let f = m.at(r, col).clone();
                    for c in 0..m.cols {
                        let v = m.at(r, c).sub(&f.mul(m.at(pivot_row, c)));
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical basis of the right kernel: one vector per free column, that
    /// free variable set to 1 and the other free variables to 0, in ascending
    /// column order. Every vector is re-verified against the matrix.
    pub fn nullspace(&self) -> Vec<Matrix<K>> {
        let (r, pivots) = self.rref();
        let zero = self.proto().zero();
        let one = self.proto().one();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![zero.clone(); self.cols];
            v[fc] = one.clone();
            for (pi, &pc) in pivots.iter().enumerate() {
                v[pc] = r.at(pi, fc).neg();
            }
            let vec = Matrix::column_vector(v);
            debug_assert!(self.mul(&vec).expect("shape").is_zero());
            basis.push(vec);
        }
        basis
    }

    /// Exact inverse; verified so a bad pivot chain cannot slip through.
    pub fn invert(&self) -> LinalgResult<Self> {
        if self.rows != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "invert on {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut aug = Matrix::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self.at(r, c).clone()
            } else if c - n == r {
                self.proto().one()
            } else {
                self.proto().zero()
            }
        });
        let (reduced, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(LinalgError::Singular);
        }
        aug = reduced;
        let inv = Matrix::from_fn(n, n, |r, c| aug.at(r, c + n).clone());
        debug_assert_eq!(self.mul(&inv).expect("shape"), Matrix::identity(n, self.proto()));
        Ok(inv)
    }

    pub fn det(&self) -> K {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = self.proto().one();
        for col in 0..n {
            let found = (col..n).find(|&r| !m.at(r, col).is_zero());
            let r0 = match found {
                Some(r) => r,
                None => return self.proto().zero(),
            };
            if r0 != col {
                for c in 0..n {
                    let a = m.at(r0, c).clone();
                    let b = m.at(col, c).clone();
                    m.set(r0, c, b);
                    m.set(col, c, a);
                }
                det = det.neg();
            }
            let pivot = m.at(col, col).clone();
            det = det.mul(&pivot);
            let inv = pivot.inv().expect("nonzero pivot");
            for r in col + 1..n {
                if !m.at(r, col).is_zero() {
                    let f = m.at(r, col).mul(&inv);
                    for c in col..n {
                        let v = m.at(r, c).sub(&f.mul(m.at(col, c)));
                        m.set(r, c, v);
                    }
                }
            }
        }
        det
    }

    /// Stack matrices vertically.
    pub fn vstack(blocks: &[Matrix<K>]) -> Self {
        assert!(!blocks.is_empty());
        let cols = blocks[0].cols;
        assert!(blocks.iter().all(|b| b.cols == cols));
        let mut rows = Vec::new();
        for b in blocks {
            for r in 0..b.rows {
                rows.push(b.row(r));
            }
        }
        Matrix::from_rows(rows)
    }

    /// Horizontal concatenation of column vectors into a matrix.
    pub fn from_columns(cols: &[Vec<K>]) -> Self {
        assert!(!cols.is_empty() && !cols[0].is_empty());
        let rows = cols[0].len();
        assert!(cols.iter().all(|c| c.len() == rows));
        Matrix::from_fn(rows, cols.len(), |r, c| cols[c][r].clone())
    }
}

impl<K: Field + fmt::Display> fmt::Display for Matrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Dimension of the sum of two column spans, via a stacked rank computation.
pub fn span_sum_dim<K: Field>(a: &[Matrix<K>], b: &[Matrix<K>]) -> usize {
    let all: Vec<&Matrix<K>> = a.iter().chain(b.iter()).collect();
    if all.is_empty() {
        return 0;
    }
    let rows = all[0].rows();
    let cols: Vec<Vec<K>> = all.iter().map(|m| m.column(0)).collect();
    assert!(all.iter().all(|m| m.cols() == 1 && m.rows() == rows));
    Matrix::from_columns(&cols).rank()
}

/// Dimension of the intersection of two column spans:
/// dim(U ∩ W) = dim U + dim W − dim(U + W).
pub fn span_intersection_dim<K: Field>(a: &[Matrix<K>], b: &[Matrix<K>]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let da = span_sum_dim(a, &[]);
    let db = span_sum_dim(b, &[]);
    da + db - span_sum_dim(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldElement;
    use num::bigint::BigInt;
    use num::rational::BigRational;
    use num::traits::{One, Signed, Zero};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> FieldElement {
        FieldElement::rational(n, d)
    }

    fn qm(rows: Vec<Vec<i64>>) -> Matrix<FieldElement> {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(|v| q(v, 1)).collect())
                .collect(),
        )
    }

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix<FieldElement> {
        Matrix::from_fn(rows, cols, |_, _| q(rng.gen_range(-3..=3), 1))
    }

    /// Independent rank oracle: Bareiss fraction-free elimination over the
    /// integers (entries are scaled to a common denominator first).
    fn bareiss_rank(m: &Matrix<FieldElement>) -> usize {
        let mut rows: Vec<Vec<BigInt>> = (0..m.rows())
            .map(|r| {
                let mut lcm = BigInt::one();
                for c in 0..m.cols() {
                    if let FieldElement::Rat(x) = m.at(r, c) {
                        lcm = num::integer::lcm(lcm, x.denom().clone());
                    }
                }
                (0..m.cols())
                    .map(|c| match m.at(r, c) {
                        FieldElement::Rat(x) => x.numer() * (&lcm / x.denom()),
                        _ => panic!("rational matrices only"),
                    })
                    .collect()
            })
            .collect();
        let (nr, nc) = (m.rows(), m.cols());
        let mut rank = 0;
        let mut prev = BigInt::one();
        let mut row = 0;
        for col in 0..nc {
            let pivot = (row..nr).find(|&r| !rows[r][col].is_zero());
            let pr = match pivot {
                Some(pr) => pr,
                None => continue,
            };
            rows.swap(row, pr);
            for r in (row + 1)..nr {
                for c in (col + 1)..nc {
                    let v = (&rows[row][col] * &rows[r][c] - &rows[r][col] * &rows[row][c])
                        / &prev;
                    rows[r][c] = v;
                }
                rows[r][col] = BigInt::zero();
            }
            prev = rows[row][col].clone();
            rank += 1;
            row += 1;
            if row == nr {
                break;
            }
        }
        rank
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(3, &q(0, 1)).rank(), 3);
        assert_eq!(Matrix::zero(3, 9, &q(0, 1)).rank(), 0);
        // the A9 structure constants have rank 1
        let a9 = crate::msc::catalog::a9_matrix(&q(0, 1));
        assert_eq!(a9.rank(), 1);
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(Matrix::zero(2, 2, &q(0, 1)).nullspace().len(), 2);
        assert!(Matrix::identity(3, &q(0, 1)).nullspace().is_empty());
        let m = qm(vec![vec![1, 1, 0]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        assert_eq!(ns[0].column(0), vec![q(-1, 1), q(1, 1), q(0, 1)]);
        assert_eq!(ns[1].column(0), vec![q(0, 1), q(0, 1), q(1, 1)]);
    }

    #[test]
    fn inversion_examples() {
        let d = Matrix::from_rows(vec![
            vec![q(1, 1), q(0, 1), q(0, 1)],
            vec![q(0, 1), q(3, 2), q(0, 1)],
            vec![q(0, 1), q(0, 1), q(2, 3)],
        ]);
        let inv = d.invert().unwrap();
        assert_eq!(*inv.at(1, 1), q(2, 3));
        assert_eq!(*inv.at(2, 2), q(3, 2));
        let id = Matrix::identity(3, &q(0, 1));
        assert_eq!(id.invert().unwrap(), id);
        assert!(matches!(
            Matrix::zero(3, 3, &q(0, 1)).invert(),
            Err(LinalgError::Singular)
        ));
    }

    #[test]
    fn kron_examples() {
        let e1 = Matrix::column_vector(vec![q(1, 1), q(0, 1), q(0, 1)]);
        let e2 = Matrix::column_vector(vec![q(0, 1), q(1, 1), q(0, 1)]);
        let k = e1.kron(&e2);
        for r in 0..9 {
            assert_eq!(*k.at(r, 0), if r == 1 { q(1, 1) } else { q(0, 1) });
        }
        let i3 = Matrix::identity(3, &q(0, 1));
        assert_eq!(i3.kron(&i3), Matrix::identity(9, &q(0, 1)));
    }

    #[test]
    fn kron_mixed_product_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let m = random_matrix(&mut rng, 3, 3);
            let n = random_matrix(&mut rng, 3, 3);
            let x = random_matrix(&mut rng, 3, 1);
            let y = random_matrix(&mut rng, 3, 1);
            let lhs = m.kron(&n).mul(&x.kron(&y)).unwrap();
            let rhs = m.mul(&x).unwrap().kron(&n.mul(&y).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn kron_transpose_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let m = random_matrix(&mut rng, 2, 3);
        let n = random_matrix(&mut rng, 3, 2);
        assert_eq!(m.kron(&n).transpose(), m.transpose().kron(&n.transpose()));
    }

    #[test]
    fn rank_invariances() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..15 {
            let m = random_matrix(&mut rng, 3, 5);
            let r = m.rank();
            assert_eq!(r, m.transpose().rank());
            assert_eq!(r, bareiss_rank(&m), "generic elimination vs Bareiss");
            // permute rows
            let perm = Matrix::from_rows(vec![m.row(2), m.row(0), m.row(1)]);
            assert_eq!(perm.rank(), r);
            // invertible g on the left
            let g = loop {
                let cand = random_matrix(&mut rng, 3, 3);
                if !cand.det().is_zero() {
                    break cand;
                }
            };
            assert_eq!(g.mul(&m).unwrap().rank(), r);
        }
    }

    #[test]
    fn nullspace_vectors_annihilate_and_are_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..15 {
            let m = random_matrix(&mut rng, 4, 6);
            let ns = m.nullspace();
            assert_eq!(ns.len(), 6 - m.rank());
            for v in &ns {
                assert!(m.mul(v).unwrap().is_zero());
            }
            if !ns.is_empty() {
                let cols: Vec<Vec<FieldElement>> = ns.iter().map(|v| v.column(0)).collect();
                assert_eq!(Matrix::from_columns(&cols).rank(), ns.len());
            }
        }
    }

    #[test]
    fn span_helpers() {
        let u = vec![
            Matrix::column_vector(vec![q(1, 1), q(0, 1), q(0, 1)]),
            Matrix::column_vector(vec![q(0, 1), q(1, 1), q(0, 1)]),
        ];
        let w = vec![Matrix::column_vector(vec![q(1, 1), q(1, 1), q(0, 1)])];
        assert_eq!(span_sum_dim(&u, &w), 2);
        assert_eq!(span_intersection_dim(&u, &w), 1);
        let z: Vec<Matrix<FieldElement>> = vec![];
        assert_eq!(span_intersection_dim(&u, &z), 0);
    }

    #[test]
    fn det_sanity() {
        let m = qm(vec![vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 5]]);
        assert_eq!(m.det(), q(30, 1));
        let singular = qm(vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert!(singular.det().is_zero());
        let _ = BigRational::one().is_positive(); // keep num traits import honest
    }
}
