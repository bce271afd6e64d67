use std::ops::{Deref, DerefMut};

use num_complex::Complex64;

use crate::{Error, Result};

/// Inner product `⟨x, y⟩ = Σ_k x_k · conj(y_k)`.
///
/// The conjugate sits on the second argument everywhere in this crate, so
/// `correlations(A, r)[i] = ⟨r, a_i⟩`.
#[inline]
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    debug_assert_eq!(x.len(), y.len());
    let mut re = 0.0;
    let mut im = 0.0;
    for (a, b) in x.iter().zip(y) {
        re += a.re * b.re + a.im * b.im;
        im += a.im * b.re - a.re * b.im;
    }
    Complex64::new(re, im)
}

#[inline]
pub fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn all_finite(x: &[Complex64]) -> bool {
    x.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Dense complex vector.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ComplexVector(Vec<Complex64>);

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if !all_finite(&entries) {
            return Err(Error::NonFinite("vector"));
        }
        Ok(Self(entries))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); len])
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    /// `self - other`, entrywise.
    pub fn sub(&self, other: &[Complex64]) -> Result<ComplexVector> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "vector lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(Self(self.iter().zip(other).map(|(a, b)| a - b).collect()))
    }
}

impl Deref for ComplexVector {
    type Target = [Complex64];

    fn deref(&self) -> &[Complex64] {
        &self.0
    }
}

impl DerefMut for ComplexVector {
    fn deref_mut(&mut self) -> &mut [Complex64] {
        &mut self.0
    }
}

impl From<ComplexVector> for Vec<Complex64> {
    fn from(v: ComplexVector) -> Self {
        v.0
    }
}

/// Dense complex matrix stored column-major, so columns are contiguous slices.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            data: vec![Complex64::new(0.0, 0.0); n_rows * n_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Builds a matrix by evaluating `f(row, col)`, filling column by column.
    pub fn from_fn(
        n_rows: usize,
        n_cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Self {
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for j in 0..n_cols {
            for i in 0..n_rows {
                data.push(f(i, j));
            }
        }
        Self {
            n_rows,
            n_cols,
            data,
        }
    }

    pub fn from_col_major(n_rows: usize, n_cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::InvalidParameter(format!(
                "matrix shape {n_rows}x{n_cols} must be positive"
            )));
        }
        if data.len() != n_rows * n_cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {n_rows}x{n_cols} matrix",
                data.len()
            )));
        }
        if !all_finite(&data) {
            return Err(Error::NonFinite("matrix"));
        }
        Ok(Self {
            n_rows,
            n_cols,
            data,
        })
    }

    /// Row-major convenience constructor, mostly for tests and small examples.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for j in 0..n_cols {
            for row in rows {
                data.push(row[j]);
            }
        }
        Self::from_col_major(n_rows, n_cols, data)
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.n_rows..(j + 1) * self.n_rows]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [Complex64] {
        &mut self.data[j * self.n_rows..(j + 1) * self.n_rows]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[j * self.n_rows + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.data[j * self.n_rows + i] = value;
    }

    pub fn as_col_major(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        all_finite(&self.data)
    }

    pub fn column_norm(&self, j: usize) -> f64 {
        norm(self.col(j))
    }

    /// Copies the listed columns, in the listed order, into a new matrix.
    pub fn select_columns(&self, indices: &[usize]) -> ComplexMatrix {
        let mut data = Vec::with_capacity(self.n_rows * indices.len());
        for &j in indices {
            data.extend_from_slice(self.col(j));
        }
        ComplexMatrix {
            n_rows: self.n_rows,
            n_cols: indices.len(),
            data,
        }
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Result<ComplexVector> {
        if x.len() != self.n_cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix times length-{} vector",
                self.n_rows,
                self.n_cols,
                x.len()
            )));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.n_rows];
        for (j, &xj) in x.iter().enumerate() {
            if xj == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.col(j)) {
                *o += a * xj;
            }
        }
        Ok(ComplexVector(out))
    }

    /// `Σ_k coef_k · a_{cols_k}` for a sparse coefficient list.
    pub fn combine_columns(&self, cols: &[usize], coef: &[Complex64]) -> ComplexVector {
        debug_assert_eq!(cols.len(), coef.len());
        let mut out = vec![Complex64::new(0.0, 0.0); self.n_rows];
        for (&j, &c) in cols.iter().zip(coef) {
            for (o, a) in out.iter_mut().zip(self.col(j)) {
                *o += a * c;
            }
        }
        ComplexVector(out)
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.n_cols != rhs.n_rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.n_rows, self.n_cols, rhs.n_rows, rhs.n_cols
            )));
        }
        let mut out = ComplexMatrix::zeros(self.n_rows, rhs.n_cols);
        for j in 0..rhs.n_cols {
            let dst = &mut out.data[j * self.n_rows..(j + 1) * self.n_rows];
            for (k, &b) in rhs.col(j).iter().enumerate() {
                for (o, a) in dst.iter_mut().zip(self.col(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }
}

/// All inner products `⟨r, a_i⟩`, one per column of `a`.
pub fn correlations(a: &ComplexMatrix, r: &[Complex64]) -> Result<ComplexVector> {
    if r.len() != a.n_rows() {
        return Err(Error::DimensionMismatch(format!(
            "residual length {} against {} rows",
            r.len(),
            a.n_rows()
        )));
    }
    Ok(ComplexVector(
        (0..a.n_cols()).map(|i| inner(r, a.col(i))).collect(),
    ))
}
