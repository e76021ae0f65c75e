use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::{Elem, Field, FieldError};

/// A dense `rows x cols` matrix over a shared [`Field`], stored row-major.
#[derive(Clone)]
pub struct Matrix {
    field: Arc<Field>,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

impl Eq for Matrix {}

impl Hash for Matrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.order().hash(state);
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{:?}; {}x{}](", self.field, self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, " / ")?;
            }
            for v in self.row(r) {
                write!(f, "{v}")?;
            }
        }
        write!(f, ")")
    }
}

impl Matrix {
    pub fn new(field: Arc<Field>, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self, FieldError> {
        if data.len() != rows * cols {
            return Err(FieldError::ShapeMismatch {
                expected: (rows, cols),
                len: data.len(),
            });
        }
        if let Some(bad) = data.iter().find(|&&a| !field.contains(a)) {
            return Err(FieldError::InvalidElement {
                index: bad.index(),
                order: field.order(),
            });
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from raw element indices, one `Vec` per row.
    pub fn from_rows(field: Arc<Field>, rows: &[Vec<u32>]) -> Result<Self, FieldError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(FieldError::ShapeMismatch {
                    expected: (rows.len(), cols),
                    len: r.len(),
                });
            }
            for &v in r {
                data.push(field.elem(v)?);
            }
        }
        Ok(Matrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub(crate) fn from_parts(field: Arc<Field>, rows: usize, cols: usize, data: Vec<Elem>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn zeros(field: Arc<Field>, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn identity(field: Arc<Field>, k: usize) -> Self {
        let mut m = Self::zeros(field, k, k);
        for i in 0..k {
            m.data[i * k + i] = Elem::ONE;
        }
        m
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c));
            }
        }
        Matrix::from_parts(Arc::clone(&self.field), self.cols, self.rows, data)
    }

    fn same_shape(&self, other: &Matrix) -> Result<(), FieldError> {
        if self.field != other.field {
            return Err(FieldError::IncompatibleField);
        }
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(FieldError::ShapeMismatch {
                expected: (self.rows, self.cols),
                len: other.data.len(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, FieldError> {
        self.same_shape(other)?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Matrix::from_parts(Arc::clone(f), self.rows, self.cols, data))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, FieldError> {
        self.same_shape(other)?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(Matrix::from_parts(Arc::clone(f), self.rows, self.cols, data))
    }

    pub fn scale(&self, c: Elem) -> Matrix {
        let f = &self.field;
        let data = self.data.iter().map(|&a| f.mul(c, a)).collect();
        Matrix::from_parts(Arc::clone(f), self.rows, self.cols, data)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, FieldError> {
        if self.field != other.field {
            return Err(FieldError::IncompatibleField);
        }
        if self.cols != other.rows {
            return Err(FieldError::ShapeMismatch {
                expected: (self.cols, other.cols),
                len: other.data.len(),
            });
        }
        let f = &self.field;
        let mut out = Matrix::zeros(Arc::clone(f), self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Concatenates blocks left to right; all blocks must share the row count.
    pub fn hstack(blocks: &[&Matrix]) -> Result<Matrix, FieldError> {
        let first = blocks.first().ok_or(FieldError::ShapeMismatch {
            expected: (0, 0),
            len: 0,
        })?;
        let rows = first.rows;
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for b in blocks {
            if b.field != first.field {
                return Err(FieldError::IncompatibleField);
            }
            if b.rows != rows {
                return Err(FieldError::ShapeMismatch {
                    expected: (rows, b.cols),
                    len: b.data.len(),
                });
            }
        }
        for r in 0..rows {
            for b in blocks {
                data.extend_from_slice(b.row(r));
            }
        }
        Ok(Matrix::from_parts(Arc::clone(&first.field), rows, cols, data))
    }

    /// Stacks matrices top to bottom; all must share the column count.
    pub fn vstack(blocks: &[&Matrix]) -> Result<Matrix, FieldError> {
        let first = blocks.first().ok_or(FieldError::ShapeMismatch {
            expected: (0, 0),
            len: 0,
        })?;
        let cols = first.cols;
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            if b.field != first.field {
                return Err(FieldError::IncompatibleField);
            }
            if b.cols != cols {
                return Err(FieldError::ShapeMismatch {
                    expected: (b.rows, cols),
                    len: b.data.len(),
                });
            }
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        Ok(Matrix::from_parts(Arc::clone(&first.field), rows, cols, data))
    }

    /// Columns `start..end` of every row.
    pub fn columns(&self, start: usize, end: usize) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * (end - start));
        for r in 0..self.rows {
            data.extend_from_slice(&self.row(r)[start..end]);
        }
        Matrix::from_parts(Arc::clone(&self.field), self.rows, end - start, data)
    }

    /// Row-reduces in place to reduced row echelon form and returns the pivot
    /// columns. Zero rows end up at the bottom.
    pub fn reduce_in_place(&mut self) -> Vec<usize> {
        let f = Arc::clone(&self.field);
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| !self.data[i * cols + c].is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.data[r * cols + c]).expect("pivot is nonzero");
            if inv != Elem::ONE {
                for j in c..cols {
                    let v = self.data[r * cols + j];
                    self.data[r * cols + j] = f.mul(inv, v);
                }
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = self.data[i * cols + c];
                if factor.is_zero() {
                    continue;
                }
                let nf = f.neg(factor);
                for j in c..cols {
                    let v = f.add(self.data[i * cols + j], f.mul(nf, self.data[r * cols + j]));
                    self.data[i * cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        // forward elimination only
        let f = &self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut m = self.data.clone();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| !m[i * cols + c].is_zero()) else {
                continue;
            };
            if pr != r {
                for j in c..cols {
                    m.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(m[r * cols + c]).expect("pivot is nonzero");
            for i in r + 1..rows {
                let factor = m[i * cols + c];
                if factor.is_zero() {
                    continue;
                }
                let t = f.neg(f.mul(factor, inv));
                for j in c..cols {
                    m[i * cols + j] = f.add(m[i * cols + j], f.mul(t, m[r * cols + j]));
                }
            }
            r += 1;
        }
        r
    }

    /// Reduced row echelon form with zero rows removed.
    pub fn rref(&self) -> Matrix {
        let mut m = self.clone();
        let rank = m.reduce_in_place().len();
        m.data.truncate(rank * m.cols);
        m.rows = rank;
        m
    }

    pub fn is_rref(&self) -> bool {
        let mut last_pivot: Option<usize> = None;
        for r in 0..self.rows {
            let Some(p) = self.row(r).iter().position(|a| !a.is_zero()) else {
                return false;
            };
            if last_pivot.is_some_and(|lp| p <= lp) || self.get(r, p) != Elem::ONE {
                return false;
            }
            if (0..self.rows).any(|i| i != r && !self.get(i, p).is_zero()) {
                return false;
            }
            last_pivot = Some(p);
        }
        true
    }
}

pub fn mat_rank(m: &Matrix) -> usize {
    m.rank()
}

pub fn mat_rref(m: &Matrix) -> Matrix {
    m.rref()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn gf(q: u32) -> Arc<Field> {
        Field::with_order(q).unwrap()
    }

    #[test]
    fn rank_examples() {
        let f = gf(2);
        assert_eq!(Matrix::zeros(f.clone(), 3, 4).rank(), 0);
        assert_eq!(Matrix::identity(f.clone(), 5).rank(), 5);
        let m = Matrix::from_rows(f.clone(), &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rref_examples() {
        let f = gf(2);
        let id = Matrix::identity(f.clone(), 3);
        assert_eq!(id.rref(), id);
        let m = Matrix::from_rows(f.clone(), &[vec![1, 1], vec![0, 0]]).unwrap();
        assert_eq!(m.rref(), Matrix::from_rows(f, &[vec![1, 1]]).unwrap());
    }

    #[test]
    fn rref_over_gf3() {
        let f = gf(3);
        let m = Matrix::from_rows(f.clone(), &[vec![2, 1, 0], vec![1, 2, 1]]).unwrap();
        let r = m.rref();
        assert!(r.is_rref());
        assert_eq!(r, Matrix::from_rows(f, &[vec![1, 2, 0], vec![0, 0, 1]]).unwrap());
    }

    fn row_span(m: &Matrix) -> HashSet<Vec<Elem>> {
        let f = m.field();
        let q = f.order() as usize;
        let mut out = HashSet::new();
        for mut idx in 0..q.pow(m.rows() as u32) {
            let mut v = vec![Elem::ZERO; m.cols()];
            for r in 0..m.rows() {
                let c = Elem((idx % q) as u16);
                idx /= q;
                for (j, x) in v.iter_mut().enumerate() {
                    *x = f.add(*x, f.mul(c, m.get(r, j)));
                }
            }
            out.insert(v);
        }
        out
    }

    #[test]
    fn equal_row_space_iff_equal_rref_exhaustive() {
        // all 2x3 binary matrices
        let f = gf(2);
        let all: Vec<Matrix> = (0..64u32)
            .map(|bits| {
                let data = (0..6).map(|i| Elem(((bits >> i) & 1) as u16)).collect();
                Matrix::new(f.clone(), 2, 3, data).unwrap()
            })
            .collect();
        let spans: Vec<_> = all.iter().map(row_span).collect();
        for (a, sa) in all.iter().zip(&spans) {
            for (b, sb) in all.iter().zip(&spans) {
                assert_eq!(sa == sb, a.rref() == b.rref(), "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn shape_errors() {
        let f = gf(2);
        assert!(Matrix::new(f.clone(), 2, 2, vec![Elem::ZERO; 3]).is_err());
        assert!(Matrix::from_rows(f.clone(), &[vec![0, 2]]).is_err());
        let a = Matrix::zeros(f.clone(), 2, 2);
        let b = Matrix::zeros(f, 2, 3);
        assert!(a.add(&b).is_err());
        assert!(Matrix::hstack(&[&a, &b]).is_ok());
        assert!(Matrix::vstack(&[&a, &b]).is_err());
        let c = Matrix::zeros(gf(3), 2, 2);
        assert_eq!(a.add(&c), Err(FieldError::IncompatibleField));
    }

    #[test]
    fn mul_by_identity() {
        let f = gf(9);
        let m = Matrix::from_rows(f.clone(), &[vec![1, 5, 8], vec![0, 3, 7]]).unwrap();
        assert_eq!(Matrix::identity(f.clone(), 2).mul(&m).unwrap(), m);
        assert_eq!(m.mul(&Matrix::identity(f, 3)).unwrap(), m);
    }
}
