use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use super::{Caps, Tolerances};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A dense complex column vector.
#[derive(Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        Self { entries }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![ZERO; dim])
    }

    /// Standard basis vector `|index⟩` of `C^dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[index] = ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_normalized(&self, tol: &Tolerances) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol.norm
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &ComplexVector) -> Complex64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(ZERO, |acc, (a, b)| acc + a.conj() * b)
    }

    /// Kronecker product `|self⟩ ⊗ |other⟩`.
    pub fn tensor(&self, other: &ComplexVector) -> ComplexVector {
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.entries {
            out.extend(other.entries.iter().map(|b| a * b));
        }
        ComplexVector::new(out)
    }

    /// The rank-one operator `|self⟩⟨self|`.
    pub fn projector(&self) -> ComplexMatrix {
        self.outer(self)
    }

    /// `|self⟩⟨other|`.
    pub fn outer(&self, other: &ComplexVector) -> ComplexMatrix {
        let rows = self.dim();
        let cols = other.dim();
        let mut data = Vec::with_capacity(rows * cols);
        for a in &self.entries {
            data.extend(other.entries.iter().map(|b| a * b.conj()));
        }
        ComplexMatrix { rows, cols, data }
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.entries[i]
    }
}

impl fmt::Debug for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.entries).finish()
    }
}

/// A dense, row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::contract("matrix dimensions must be positive"));
        }
        if data.len() != rows * cols {
            return Err(Error::dims(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(x, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[ComplexVector]) -> Result<Self> {
        let Some(first) = columns.first() else {
            return Err(Error::contract("at least one column is required"));
        };
        let rows = first.dim();
        if columns.iter().any(|c| c.dim() != rows) {
            return Err(Error::dims("columns have differing lengths"));
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j][i]))
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

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector::new((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::dims(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// `self += factor · other`.
    pub fn add_scaled(&mut self, factor: Complex64, other: &ComplexMatrix) -> Result<()> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::dims(format!(
                "cannot add {}x{} to {}x{}",
                other.rows, other.cols, self.rows, self.cols
            )));
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += factor * b;
        }
        Ok(())
    }

    /// `self += factor · (a ⊗ b)` without materializing the product.
    pub fn add_scaled_tensor(
        &mut self,
        factor: Complex64,
        a: &ComplexMatrix,
        b: &ComplexMatrix,
    ) -> Result<()> {
        if self.rows != a.rows * b.rows || self.cols != a.cols * b.cols {
            return Err(Error::dims(
                "tensor accumulation target has the wrong shape",
            ));
        }
        let cols = self.cols;
        for ar in 0..a.rows {
            for ac in 0..a.cols {
                let coef = factor * a[(ar, ac)];
                if coef == ZERO {
                    continue;
                }
                for br in 0..b.rows {
                    let row = ar * b.rows + br;
                    let start = row * cols + ac * b.cols;
                    let dst = &mut self.data[start..start + b.cols];
                    let src = &b.data[br * b.cols..(br + 1) * b.cols];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d += coef * s;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn trace(&self) -> Complex64 {
        self.diagonal().into_iter().fold(ZERO, |acc, z| acc + z)
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &ComplexMatrix) -> Result<Complex64> {
        if self.cols != other.rows || self.rows != other.cols {
            return Err(Error::dims("trace of product needs transposed shapes"));
        }
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        Ok(acc)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `‖self − other‖_max`; infinite on a shape mismatch.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖A − A*‖_max`.
    pub fn hermiticity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: &Tolerances) -> bool {
        self.hermiticity_residual() <= tol.herm
    }

    /// Largest off-diagonal modulus.
    pub fn off_diagonal_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    worst = worst.max(self[(i, j)].norm());
                }
            }
        }
        worst
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    /// Traces out the trailing tensor factor of dimension `last`.
    pub fn partial_trace_last(&self, last: usize) -> Result<Self> {
        if !self.is_square() || last == 0 || !self.rows.is_multiple_of(last) {
            return Err(Error::dims(format!(
                "cannot trace a factor of dimension {last} out of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let keep = self.rows / last;
        Ok(Self::from_fn(keep, keep, |i, j| {
            (0..last).fold(ZERO, |acc, t| acc + self[(i * last + t, j * last + t)])
        }))
    }

    /// Square sub-block of size `size` starting at `(start, start)`.
    pub fn diagonal_block(&self, start: usize, size: usize) -> Self {
        Self::from_fn(size, size, |i, j| self[(start + i, start + j)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

/// Kronecker product under the default dimension cap.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    tensor_capped(a, b, Caps::DEFAULT.max_dim)
}

/// Kronecker product `a ⊗ b` with lexicographic index pairing:
/// `(a ⊗ b)[(i·p + k, j·q + l)] = a[(i, j)] · b[(k, l)]` for `b` of shape `p×q`.
pub fn tensor_capped(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    max_dim: usize,
) -> Result<ComplexMatrix> {
    let rows = a.rows as u128 * b.rows as u128;
    let cols = a.cols as u128 * b.cols as u128;
    let needed = rows.max(cols);
    if needed > max_dim as u128 {
        return Err(Error::ResourceCap {
            what: "tensor product dimension",
            needed,
            cap: max_dim as u128,
        });
    }
    let mut out = ComplexMatrix::zeros(rows as usize, cols as usize);
    out.add_scaled_tensor(ONE, a, b)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_tensor_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(tensor(&i2, &i2).unwrap(), ComplexMatrix::identity(4));
    }

    #[test]
    fn basis_projectors_tensor() {
        let p0 = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        let p1 = ComplexMatrix::from_real_diag(&[0.0, 1.0]);
        let out = tensor(&p0, &p1).unwrap();
        assert_eq!(out, ComplexMatrix::from_real_diag(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn plus_state_tensor_square_is_uniform_quarter() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = ComplexVector::from_real(&[h, h]).projector();
        let out = tensor(&plus, &plus).unwrap();
        assert_eq!((out.rows(), out.cols()), (4, 4));
        for z in out.data() {
            assert!((z - c(0.25)).norm() < 1e-15);
        }
    }

    #[test]
    fn tensor_respects_cap() {
        let a = ComplexMatrix::identity(64);
        let err = tensor_capped(&a, &a, 1024).unwrap_err();
        assert!(matches!(
            err,
            Error::ResourceCap {
                needed: 4096,
                cap: 1024,
                ..
            }
        ));
    }

    #[test]
    fn non_square_tensor_shape() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(3, 1);
        let out = tensor(&a, &b).unwrap();
        assert_eq!((out.rows(), out.cols()), (6, 3));
    }

    #[test]
    fn partial_trace_of_product() {
        let a = ComplexMatrix::from_real_diag(&[0.25, 0.75]);
        let b = ComplexVector::from_real(&[0.6, 0.8]).projector();
        let ab = tensor(&a, &b).unwrap();
        assert!(ab.partial_trace_last(2).unwrap().max_abs_diff(&a) < 1e-15);
        assert!(ab.partial_trace_last(3).is_err());
    }

    #[test]
    fn matmul_shape_errors() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(a.matmul(&a).is_err());
        assert!(a.matmul(&a.adjoint()).is_ok());
    }

    #[test]
    fn new_rejects_bad_shapes() {
        assert!(ComplexMatrix::new(2, 2, vec![c(1.0); 3]).is_err());
        assert!(ComplexMatrix::new(0, 2, vec![]).is_err());
    }

    #[test]
    fn outer_product_and_inner() {
        let v = ComplexVector::new(vec![Complex64::new(0.0, 1.0), c(0.0)]);
        assert!((v.inner(&v) - c(1.0)).norm() < 1e-15);
        let p = v.projector();
        assert_eq!(p[(0, 0)], c(1.0));
        assert_eq!(p.hermiticity_residual(), 0.0);
    }
}
