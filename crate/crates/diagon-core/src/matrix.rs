//! Small dense matrices over exact rationals.
//!
//! Dimensions here are the variable counts of the equations being reduced,
//! so everything is plain Gaussian elimination on `Vec<Vec<Rat>>` rows; no
//! numeric tolerance is involved anywhere.

use crate::error::Error;
use crate::rat::{rat, Rat};
use crate::Result;
use num::{One, Signed, Zero};

/// Dense square-or-rectangular matrix of exact rationals, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: Vec<Vec<Rat>>,
}

impl RatMatrix {
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        if let Some(first) = rows.first() {
            let w = first.len();
            assert!(rows.iter().all(|r| r.len() == w), "ragged matrix rows");
        }
        RatMatrix { rows }
    }

    /// Builds a matrix of `i64` entries, handy in tests and goldens.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        RatMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat(v)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut rows = vec![vec![Rat::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = Rat::one();
        }
        RatMatrix { rows }
    }

    pub fn zero(n_rows: usize, n_cols: usize) -> Self {
        RatMatrix {
            rows: vec![vec![Rat::zero(); n_cols]; n_rows],
        }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn is_square(&self) -> bool {
        self.n_rows() == self.n_cols()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.rows[i][j] = v;
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    pub fn swap_columns(&mut self, a: usize, b: usize) {
        for row in &mut self.rows {
            row.swap(a, b);
        }
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.n_cols(), other.n_rows(), "inner dimension mismatch");
        let mut out = RatMatrix::zero(self.n_rows(), other.n_cols());
        for i in 0..self.n_rows() {
            for j in 0..other.n_cols() {
                let mut acc = Rat::zero();
                for m in 0..self.n_cols() {
                    acc += &self.rows[i][m] * &other.rows[m][j];
                }
                out.rows[i][j] = acc;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.n_cols(), v.len(), "vector length mismatch");
        self.rows
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Determinant by Gaussian elimination (exact).
    #[allow(clippy::needless_range_loop)] // rows are read and written in pairs
    pub fn determinant(&self) -> Rat {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.n_rows();
        let mut m = self.rows.clone();
        let mut det = Rat::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[r][col].is_zero());
            let Some(p) = pivot else {
                return Rat::zero();
            };
            if p != col {
                m.swap(p, col);
                det = -det;
            }
            det *= &m[col][col];
            let inv = m[col][col].recip();
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] * &inv;
                for c in col..n {
                    let sub = &factor * &m[col][c];
                    m[r][c] -= sub;
                }
            }
        }
        det
    }

    /// Rank by Gaussian elimination.
    #[allow(clippy::needless_range_loop)]
    pub fn rank(&self) -> usize {
        let mut m = self.rows.clone();
        let n_rows = self.n_rows();
        let n_cols = self.n_cols();
        let mut rank = 0;
        for col in 0..n_cols {
            let pivot = (rank..n_rows).find(|&r| !m[r][col].is_zero());
            let Some(p) = pivot else { continue };
            m.swap(p, rank);
            let inv = m[rank][col].recip();
            for r in rank + 1..n_rows {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] * &inv;
                for c in col..n_cols {
                    let sub = &factor * &m[rank][c];
                    m[r][c] -= sub;
                }
            }
            rank += 1;
            if rank == n_rows {
                break;
            }
        }
        rank
    }

    /// Exact inverse; errors on singular input.
    #[allow(clippy::needless_range_loop)]
    pub fn inverse(&self) -> Result<RatMatrix> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.n_rows();
        let mut m = self.rows.clone();
        let mut inv = RatMatrix::identity(n).rows;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[r][col].is_zero());
            let Some(p) = pivot else {
                return Err(Error::SingularMatrix);
            };
            m.swap(p, col);
            inv.swap(p, col);
            let scale = m[col][col].recip();
            for c in 0..n {
                m[col][c] *= &scale;
                inv[col][c] *= &scale;
            }
            for r in 0..n {
                if r == col || m[r][col].is_zero() {
                    continue;
                }
                let factor = m[r][col].clone();
                for c in 0..n {
                    let a = &factor * &m[col][c];
                    m[r][c] -= a;
                    let b = &factor * &inv[col][c];
                    inv[r][c] -= b;
                }
            }
        }
        Ok(RatMatrix::from_rows(inv))
    }

    /// True iff every entry is an integer.
    pub fn is_integer(&self) -> bool {
        self.rows
            .iter()
            .all(|row| row.iter().all(crate::rat::is_integer))
    }
}

/// Symmetric matrix of a quadratic form, `f(x) = x^T M x`.
///
/// The off-diagonal entry `M[i][j]` holds half the textual cross
/// coefficient of `x_i x_j`, so forms with odd cross terms yield
/// half-integer entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricMatrix {
    mat: RatMatrix,
}

impl SymmetricMatrix {
    pub fn new(mat: RatMatrix) -> Self {
        assert!(mat.is_square(), "symmetric matrix must be square");
        let n = mat.n_rows();
        for i in 0..n {
            for j in 0..i {
                assert_eq!(mat.get(i, j), mat.get(j, i), "matrix is not symmetric");
            }
        }
        SymmetricMatrix { mat }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        SymmetricMatrix::new(RatMatrix::from_i64(rows))
    }

    pub fn dim(&self) -> usize {
        self.mat.n_rows()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        self.mat.get(i, j)
    }

    pub fn as_matrix(&self) -> &RatMatrix {
        &self.mat
    }

    pub fn is_zero(&self) -> bool {
        self.mat.rows().iter().flatten().all(|v| v.is_zero())
    }

    pub fn rank(&self) -> usize {
        self.mat.rank()
    }

    /// Leading principal minors `M_1 ... M_k`.
    pub fn angular_minors(&self) -> Vec<Rat> {
        let k = self.dim();
        (1..=k)
            .map(|i| {
                let sub: Vec<Vec<Rat>> = (0..i)
                    .map(|r| (0..i).map(|c| self.get(r, c).clone()).collect())
                    .collect();
                RatMatrix::from_rows(sub).determinant()
            })
            .collect()
    }

    /// Conjugates the form by the substitution `x = C y`, giving `C^T M C`.
    pub fn congruent(&self, c: &RatMatrix) -> SymmetricMatrix {
        let n = self.dim();
        assert_eq!(c.n_rows(), n);
        assert_eq!(c.n_cols(), n);
        let mc = self.mat.mul(c);
        let mut out = RatMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rat::zero();
                for m in 0..n {
                    acc += c.get(m, i) * mc.get(m, j);
                }
                out.set(i, j, acc);
            }
        }
        SymmetricMatrix { mat: out }
    }
}

/// Signed absolute value helper used when comparing determinants to 1.
pub fn is_unit(r: &Rat) -> bool {
    r.abs() == Rat::one()
}
