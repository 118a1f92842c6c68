//! Dense matrices with exact rational algorithms: determinant, nullspace,
//! commutators and the inertia of symmetric forms by congruence.

use std::fmt;
use std::ops::Neg;

use num_traits::{FromPrimitive, Num, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<C> {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

pub type RationalMatrix = Matrix<Rational>;

impl<C> Matrix<C> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<C>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix rows");
        Self {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
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

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut C {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[C] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[C] {
        &self.data
    }

    pub fn map<D>(&self, f: impl FnMut(&C) -> D) -> Matrix<D> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<C: Clone> Matrix<C> {
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn column(&self, j: usize) -> Vec<C> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<C>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::Shape(format!(
                "cannot stack {} columns on {}",
                other.cols, self.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }
}

impl<C> Matrix<C>
where
    C: Clone + Num + Neg<Output = C>,
{
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| C::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { C::one() } else { C::zero() })
    }

    pub fn diagonal(entries: &[C]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { C::zero() })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(C::zero(), |acc, k| {
                acc + self.get(i, k).clone() * other.get(k, j).clone()
            })
        }))
    }

    pub fn mul_vec(&self, v: &[C]) -> Vec<C> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(C::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-C::one()))
    }

    pub fn scale(&self, s: &C) -> Self {
        self.map(|a| a.clone() * s.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Result<Self, LinalgError> {
        Ok(self.mul(other)?.sub(&other.mul(self)?))
    }

    /// Bilinear form `uᵀ · self · v`.
    pub fn bilinear(&self, u: &[C], v: &[C]) -> C {
        let mv = self.mul_vec(v);
        u.iter()
            .zip(&mv)
            .fold(C::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }
}

impl<C: FromPrimitive> Matrix<C> {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix rows");
        Self {
            rows: rows.len(),
            cols: ncols,
            data: rows
                .iter()
                .flat_map(|r| r.iter().map(|&x| C::from_i64(x).expect("integer entry")))
                .collect(),
        }
    }
}

impl RationalMatrix {
    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(crate::rational::to_f64)
    }

    /// Determinant by rational Gaussian elimination with first-nonzero pivoting.
    pub fn det(&self) -> Result<Rational, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut m = self.to_rows();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return Ok(Rational::zero());
            };
            if pivot != col {
                m.swap(pivot, col);
                det = -det;
            }
            let p = m[col][col].clone();
            det *= &p;
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] / &p;
                for c in col..n {
                    let delta = &factor * &m[col][c];
                    m[r][c] -= delta;
                }
            }
        }
        Ok(det)
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut m = self.to_rows();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pivot) = (row..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(pivot, row);
            let inv = m[row][col].recip();
            for c in col..self.cols {
                m[row][c] *= &inv;
            }
            for r in 0..self.rows {
                if r == row || m[r][col].is_zero() {
                    continue;
                }
                let factor = m[r][col].clone();
                for c in col..self.cols {
                    let delta = &factor * &m[row][c];
                    m[r][c] -= delta;
                }
            }
            pivots.push(col);
            row += 1;
        }
        let cols = self.cols;
        let data = m.into_iter().flatten().collect();
        (
            RationalMatrix {
                rows: self.rows,
                cols,
                data,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Nullspace basis: one vector per free column, in index order, with that
    /// free variable set to 1 and the other free variables set to 0.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (prow, &pcol) in pivots.iter().enumerate() {
                    v[pcol] = -r.get(prow, f).clone();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<RationalMatrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let augmented = RationalMatrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let (r, pivots) = augmented.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        Ok(RationalMatrix::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    /// Signature of a symmetric form via Sylvester's law of inertia.
    ///
    /// Symmetric Gaussian reduction: a nonzero diagonal pivot contributes its
    /// sign; if every remaining diagonal entry is zero but some off-diagonal
    /// entry `a_ij` is not, the block `[[0, a], [a, 0]]` is eliminated as a
    /// hyperbolic pair contributing one positive and one negative direction.
    pub fn inertia(&self) -> Result<Inertia, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if !self.is_symmetric() {
            return Err(LinalgError::NotSymmetric);
        }
        let mut inertia = Inertia::default();
        let mut m = self.to_rows();
        let mut active: Vec<usize> = (0..self.rows).collect();

        while !active.is_empty() {
            if let Some(pos) = active.iter().position(|&i| !m[i][i].is_zero()) {
                let p = active.remove(pos);
                let d = m[p][p].clone();
                if d.is_positive() {
                    inertia.positive += 1;
                } else {
                    inertia.negative += 1;
                }
                // Schur complement: m[i][j] -= m[i][p] m[p][j] / d
                for &i in &active {
                    if m[i][p].is_zero() {
                        continue;
                    }
                    let factor = &m[i][p] / &d;
                    for &j in &active {
                        let delta = &factor * &m[p][j];
                        m[i][j] -= delta;
                    }
                }
                continue;
            }
            let pair = active.iter().enumerate().find_map(|(ai, &i)| {
                active[ai + 1..]
                    .iter()
                    .find(|&&j| !m[i][j].is_zero())
                    .map(|&j| (i, j))
            });
            let Some((i, j)) = pair else {
                inertia.zero += active.len();
                break;
            };
            inertia.positive += 1;
            inertia.negative += 1;
            active.retain(|&k| k != i && k != j);
            // Inverse of [[0, a], [a, 0]] is [[0, 1/a], [1/a, 0]].
            let a = m[i][j].clone();
            for &r in &active {
                for &c in &active {
                    let delta = (&m[r][i] * &m[j][c] + &m[r][j] * &m[i][c]) / &a;
                    m[r][c] -= delta;
                }
            }
        }
        Ok(inertia)
    }
}

/// Signature triple of a real symmetric form.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn new(positive: usize, negative: usize, zero: usize) -> Self {
        Self {
            positive,
            negative,
            zero,
        }
    }

    pub fn dimension(&self) -> usize {
        self.positive + self.negative + self.zero
    }

    /// One negative direction, everything else positive.
    pub fn is_minkowski(&self) -> bool {
        self.negative == 1 && self.zero == 0 && self.positive >= 1
    }
}

impl fmt::Display for Inertia {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.positive, self.negative, self.zero)
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalMatrix {
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
                write!(f, "{}", format_rational(self.get(i, j)))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Matrix<f64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}
