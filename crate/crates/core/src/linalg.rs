//! Dense exact linear algebra over a [`Field`].
//!
//! Matrices act on column vectors; `a.compose(&b)` is "`b` then `a`" and
//! needs `a.cols() == b.rows()`. Elimination always takes the first nonzero
//! pivot, so returned bases are reproducible.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::{Field, Scalar};

pub type Vector = Vec<Scalar>;

#[derive(Clone)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
    field: Field,
}

// Equality ignores which root of unity the field designates.
impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.field.same_arith(&other.field) && self.data == other.data
    }
}

impl Eq for Matrix {}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.field.format(self.get(r, c))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![field.zero(); rows * cols], field: field.clone() }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data, field: field.clone() }
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeError("ragged rows".into()));
        }
        let n = rows.len();
        Ok(Matrix { rows: n, cols, data: rows.into_iter().flatten().collect(), field: field.clone() })
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: &Field, rows: usize, columns: &[Vector]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn from_i64(field: &Field, rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_fn(field, rows.len(), cols, |r, c| field.from_i64(rows[r][c]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn row(&self, r: usize) -> Vector {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn check_field(&self, other: &Matrix) -> Result<()> {
        if self.field.same_arith(&other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Matrix) -> Matrix {
        self.try_compose(other).expect("compatible shapes")
    }

    pub fn try_compose(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::ShapeError(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = r * out.cols + c;
                    out.data[idx] = f.mul_add(&out.data[idx], a, b);
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols, "vector length");
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                (0..self.cols).fold(f.zero(), |acc, c| {
                    if v[c].is_zero() {
                        acc
                    } else {
                        f.mul_add(&acc, self.get(r, c), &v[c])
                    }
                })
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add");
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data, field: f.clone() }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sub");
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data, field: f.clone() }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let f = &self.field;
        let data = self.data.iter().map(|a| f.mul(a, s)).collect();
        Matrix { rows: self.rows, cols: self.cols, data, field: f.clone() }
    }

    pub fn neg(&self) -> Matrix {
        let f = &self.field;
        let data = self.data.iter().map(|a| f.neg(a)).collect();
        Matrix { rows: self.rows, cols: self.cols, data, field: f.clone() }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, s: &Scalar, other: &Matrix) {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add_scaled");
        if s.is_zero() {
            return;
        }
        let f = self.field.clone();
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a = f.mul_add(a, s, b);
            }
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        Matrix::from_fn(&self.field, rows.len(), cols.len(), |r, c| self.get(rows.start + r, cols.start + c).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(&self.field, idx.len(), self.cols, |r, c| self.get(idx[r], c).clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(&self.field, self.rows, idx.len(), |r, c| self.get(r, idx[c]).clone())
    }

    /// Write `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    pub fn hstack(parts: &[&Matrix]) -> Matrix {
        let field = parts[0].field.clone();
        let rows = parts[0].rows;
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(&field, rows, cols);
        let mut c0 = 0;
        for m in parts {
            assert_eq!(m.rows, rows, "hstack row mismatch");
            out.set_block(0, c0, m);
            c0 += m.cols;
        }
        out
    }

    pub fn vstack(parts: &[&Matrix]) -> Matrix {
        let field = parts[0].field.clone();
        let cols = parts[0].cols;
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Matrix::zeros(&field, rows, cols);
        let mut r0 = 0;
        for m in parts {
            assert_eq!(m.cols, cols, "vstack column mismatch");
            out.set_block(r0, 0, m);
            r0 += m.rows;
        }
        out
    }

    pub fn block_diag(field: &Field, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for m in parts {
            out.set_block(r0, c0, m);
            r0 += m.rows;
            c0 += m.cols;
        }
        out
    }

    pub fn echelon(&self) -> Echelon {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col)).expect("nonzero pivot");
            for c in col..m.cols {
                let v = f.mul(m.get(row, c), &inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    let pv = m.get(row, c);
                    if pv.is_zero() {
                        continue;
                    }
                    let v = f.sub(m.get(r, c), &f.mul(&factor, pv));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of the null space, one column per free variable.
    pub fn kernel(&self) -> Matrix {
        let Echelon { reduced, pivots } = self.echelon();
        let f = &self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(f, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, f.one());
            for (r, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, f.neg(reduced.get(r, fc)));
            }
        }
        out
    }

    /// Basis of the column space: the pivot columns of `self`.
    pub fn image(&self) -> Matrix {
        let pivots = self.echelon().pivots;
        self.select_cols(&pivots)
    }

    /// Some solution of `self * x = b`, with free variables set to zero, or
    /// `None` if the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vector> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let bm = Matrix::from_columns(&self.field, self.rows, &[b.to_vec()]);
        self.solve_matrix(&bm).map(|x| x.column(0))
    }

    /// Some `X` with `self * X = b`, or `None`.
    pub fn solve_matrix(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(b.rows, self.rows, "right-hand side rows");
        let aug = Matrix::hstack(&[self, b]);
        let Echelon { reduced, pivots } = aug.echelon();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let f = &self.field;
        let mut x = Matrix::zeros(f, self.cols, b.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            for c in 0..b.cols {
                x.set(pc, c, reduced.get(r, self.cols + c).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let id = Matrix::identity(&self.field, self.rows);
        let x = self.solve_matrix(&id)?;
        (self.compose(&x) == id).then_some(x)
    }

    /// Coordinates of the standard basis vectors that complete the column
    /// space of `self` to the whole space: the non-pivot rows found by
    /// eliminating on the transpose.
    pub fn complement_coordinates(&self) -> Vec<usize> {
        let pivots = self.transpose().echelon().pivots;
        (0..self.rows).filter(|r| !pivots.contains(r)).collect()
    }

    /// Least `e` standard columns completing `self`'s columns to a basis,
    /// scanning coordinates in increasing order.
    pub fn extend_to_basis(&self) -> Vec<usize> {
        let id = Matrix::identity(&self.field, self.rows);
        let aug = Matrix::hstack(&[self, &id]);
        aug.echelon().pivots.into_iter().filter(|&p| p >= self.cols).map(|p| p - self.cols).collect()
    }
}

/// `dim span(z) - dim span(b)`, after checking `span(b) ⊆ span(z)`.
pub fn subquotient_dim(z: &Matrix, b: &Matrix) -> Result<usize> {
    if z.rows() != b.rows() {
        return Err(Error::ShapeError("subspaces of different ambient spaces".into()));
    }
    let rz = z.rank();
    let rb = b.rank();
    let joint = Matrix::hstack(&[z, b]).rank();
    if joint != rz {
        return Err(Error::NotContained);
    }
    Ok(rz - rb)
}

pub fn solve_linear(a: &Matrix, b: &[Scalar]) -> Result<Option<Vector>> {
    if a.rows() != b.len() {
        return Err(Error::ShapeError("right-hand side length".into()));
    }
    Ok(a.solve(b))
}

pub fn zero_vector(field: &Field, n: usize) -> Vector {
    vec![field.zero(); n]
}

pub fn unit_vector(field: &Field, n: usize, i: usize) -> Vector {
    let mut v = zero_vector(field, n);
    v[i] = field.one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn add_vectors(field: &Field, a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| field.add(x, y)).collect()
}

pub fn scale_vector(field: &Field, s: &Scalar, a: &[Scalar]) -> Vector {
    a.iter().map(|x| field.mul(s, x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FieldSpec;

    fn f7() -> Field {
        Field::new(&FieldSpec::prime_with_root(7, 3, 2)).unwrap()
    }

    fn col(f: &Field, v: &[i64]) -> Vector {
        v.iter().map(|&x| f.from_i64(x)).collect()
    }

    #[test]
    fn solve_examples() {
        let f = f7();
        let id = Matrix::identity(&f, 2);
        assert_eq!(id.solve(&col(&f, &[1, 0])), Some(col(&f, &[1, 0])));
        let z = Matrix::zeros(&f, 2, 2);
        assert_eq!(z.solve(&col(&f, &[1, 0])), None);
        // Free variable set to zero.
        let a = Matrix::from_i64(&f, &[&[1, 1], &[0, 0]]);
        assert_eq!(a.solve(&col(&f, &[3, 0])), Some(col(&f, &[3, 0])));
    }

    #[test]
    fn solve_matches_enumeration() {
        // All 7 solutions of x + y = 3 over F_7; the returned one has y = 0.
        let f = f7();
        let a = Matrix::from_i64(&f, &[&[1, 1], &[0, 0]]);
        let sols: Vec<(i64, i64)> = (0..7)
            .flat_map(|x| (0..7).map(move |y| (x, y)))
            .filter(|(x, y)| (x + y) % 7 == 3)
            .collect();
        assert_eq!(sols.len(), 7);
        let x = a.solve(&col(&f, &[3, 0])).unwrap();
        assert!(sols.contains(&(3, 0)));
        assert_eq!(x, col(&f, &[3, 0]));
    }

    #[test]
    fn subquotient_examples() {
        let f = f7();
        let full = Matrix::identity(&f, 2);
        let empty = Matrix::zeros(&f, 2, 0);
        assert_eq!(subquotient_dim(&full, &empty).unwrap(), 2);
        let v = Matrix::from_i64(&f, &[&[1], &[2]]);
        assert_eq!(subquotient_dim(&v, &v).unwrap(), 0);
        let diag = Matrix::from_i64(&f, &[&[1], &[1]]);
        assert_eq!(subquotient_dim(&full, &diag).unwrap(), 1);
        assert_eq!(subquotient_dim(&v, &diag).unwrap_err(), Error::NotContained);
    }

    #[test]
    fn kernel_image_inverse() {
        let f = f7();
        let a = Matrix::from_i64(&f, &[&[1, 2, 3], &[2, 4, 6]]);
        let k = a.kernel();
        assert_eq!(k.cols(), 2);
        assert!(a.compose(&k).is_zero());
        assert_eq!(a.image().cols(), 1);
        let b = Matrix::from_i64(&f, &[&[2, 1], &[1, 1]]);
        let bi = b.inverse().unwrap();
        assert_eq!(b.compose(&bi), Matrix::identity(&f, 2));
        assert!(a.inverse().is_none());
    }

    #[test]
    fn complement_of_column_space() {
        let f = f7();
        let a = Matrix::from_i64(&f, &[&[1], &[5], &[0]]);
        assert_eq!(a.complement_coordinates(), vec![1, 2]);
        assert_eq!(a.extend_to_basis(), vec![0, 2]);
        let b = Matrix::from_i64(&f, &[&[0], &[1], &[1]]);
        assert_eq!(b.complement_coordinates(), vec![0, 2]);
    }

    #[test]
    fn cyclotomic_elimination() {
        let f = Field::new(&FieldSpec::cyclotomic(5)).unwrap();
        let q = f.q();
        let a = Matrix::from_fn(&f, 3, 3, |r, c| f.pow(&q, (r * c) as u64));
        let ai = a.inverse().expect("Vandermonde in distinct roots");
        assert_eq!(ai.compose(&a), Matrix::identity(&f, 3));
    }
}
