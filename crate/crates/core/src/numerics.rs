//! Dense linear-algebra kernel.
//!
//! Everything here is deliberately small: designs are at most a few hundred
//! entries per side, so a column-major `Vec<f64>` with straightforward loops
//! is fast enough and keeps every reduction in a fixed index order. Two runs
//! on the same input produce bitwise-identical output.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Dense real vector.
pub type DenseVector = Vec<f64>;

/// Pivot floor for Cholesky factorization.
pub const PIVOT_TOL: f64 = 1e-12;

/// Column-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from row-major nested vectors.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let mut m = Self::zeros(nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m.data[j * rows + i] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from column vectors of equal length.
    pub fn from_columns(cols: &[Vec<f64>]) -> Result<Self> {
        let rows = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch("ragged columns".into()));
        }
        Ok(Self {
            rows,
            cols: cols.len(),
            data: cols.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn row(&self, i: usize) -> DenseVector {
        (0..self.cols).map(|j| self[(i, j)]).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }

    /// `self · other`.
    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            for k in 0..self.cols {
                let b = other[(k, j)];
                if b == 0.0 {
                    continue;
                }
                let a = self.col(k);
                let o = out.col_mut(j);
                for i in 0..a.len() {
                    o[i] += a[i] * b;
                }
            }
        }
        Ok(out)
    }

    /// `self · v`.
    pub fn matvec(&self, v: &[f64]) -> Result<DenseVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![0.0; self.rows];
        for (j, &b) in v.iter().enumerate() {
            if b == 0.0 {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.col(j)) {
                *o += a * b;
            }
        }
        Ok(out)
    }

    /// `selfᵀ · v`.
    pub fn tmatvec(&self, v: &[f64]) -> Result<DenseVector> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "transpose of {}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.cols).map(|j| dot(self.col(j), v)).collect())
    }

    /// `selfᵀ · self`.
    pub fn gram(&self) -> DenseMatrix {
        let p = self.cols;
        let mut g = DenseMatrix::zeros(p, p);
        for j in 0..p {
            for i in 0..=j {
                let v = dot(self.col(i), self.col(j));
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        g
    }

    /// Submatrix made of the listed rows (all columns).
    pub fn select_rows(&self, idx: &[usize]) -> DenseMatrix {
        DenseMatrix::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)])
    }

    /// Applies the same permutation to rows and columns.
    pub fn permute_symmetric(&self, perm: &[usize]) -> DenseMatrix {
        DenseMatrix::from_fn(self.rows, self.cols, |i, j| self[(perm[i], perm[j])])
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |s, (x, y)| s + x * y)
}

pub fn norm2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

pub fn norm1(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |s, x| s + x.abs())
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Lower-triangular Cholesky factor `L` with `L·Lᵀ = a`.
pub fn cholesky(a: &DenseMatrix) -> Result<DenseMatrix> {
    if !a.is_symmetric(1e-12) {
        return Err(Error::DimensionMismatch(
            "cholesky requires a symmetric matrix".into(),
        ));
    }
    let n = a.rows();
    let mut l = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d <= PIVOT_TOL || !d.is_finite() {
            return Err(Error::NotPositiveDefinite { index: j, pivot: d });
        }
        let djj = d.sqrt();
        l[(j, j)] = djj;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(l)
}

/// Solves `L·Lᵀ x = b` given the Cholesky factor.
pub fn cholesky_solve(l: &DenseMatrix, b: &[f64]) -> DenseVector {
    let n = l.rows();
    let mut y = b.to_vec();
    for i in 0..n {
        let mut s = y[i];
        for k in 0..i {
            s -= l[(i, k)] * y[k];
        }
        y[i] = s / l[(i, i)];
    }
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[(k, i)] * y[k];
        }
        y[i] = s / l[(i, i)];
    }
    y
}

pub fn solve_spd(a: &DenseMatrix, b: &[f64]) -> Result<DenseVector> {
    if !a.is_square() || a.rows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} system with right-hand side of length {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    let l = cholesky(a)?;
    Ok(cholesky_solve(&l, b))
}

/// Inverse of a symmetric positive-definite matrix.
pub fn inverse_spd(a: &DenseMatrix) -> Result<DenseMatrix> {
    let n = a.rows();
    let l = cholesky(a)?;
    let mut inv = DenseMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e.iter_mut().for_each(|v| *v = 0.0);
        e[j] = 1.0;
        let x = cholesky_solve(&l, &e);
        inv.col_mut(j).copy_from_slice(&x);
    }
    // symmetrize away roundoff
    for j in 0..n {
        for i in 0..j {
            let v = 0.5 * (inv[(i, j)] + inv[(j, i)]);
            inv[(i, j)] = v;
            inv[(j, i)] = v;
        }
    }
    Ok(inv)
}

/// `g(β) = Xᵀ(Y − Xβ)`.
pub fn residual_correlations(x: &DenseMatrix, y: &[f64], beta: &[f64]) -> Result<DenseVector> {
    if y.len() != x.rows() || beta.len() != x.cols() {
        return Err(Error::DimensionMismatch(format!(
            "design {}x{}, response {}, coefficients {}",
            x.rows(),
            x.cols(),
            y.len(),
            beta.len()
        )));
    }
    let fitted = x.matvec(beta)?;
    let resid: DenseVector = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    x.tmatvec(&resid)
}

/// Strict row-wise diagonal dominance: `M_jj > Σ_{i≠j} |M_ij|` for every `j`.
pub fn diag_dominant(m: &DenseMatrix) -> bool {
    if !m.is_square() {
        return false;
    }
    let n = m.rows();
    (0..n).all(|j| {
        let off = (0..n)
            .filter(|&i| i != j)
            .fold(0.0, |s, i| s + m[(i, j)].abs());
        m[(j, j)] > off
    })
}

pub fn soft_threshold(z: f64, lambda: f64) -> f64 {
    let shrunk = z.abs() - lambda;
    if shrunk > 0.0 {
        z.signum() * shrunk
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> DenseMatrix {
        DenseMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn cholesky_identity() {
        let l = cholesky(&DenseMatrix::identity(3)).unwrap();
        assert_eq!(l, DenseMatrix::identity(3));
    }

    #[test]
    fn cholesky_two_by_two() {
        let a = m(&[&[1.0, 0.5], &[0.5, 1.0]]);
        let l = cholesky(&a).unwrap();
        let expect = m(&[&[1.0, 0.0], &[0.5, 0.75f64.sqrt()]]);
        assert!((0..2).all(|i| (0..2).all(|j| (l[(i, j)] - expect[(i, j)]).abs() < 1e-15)));
        let rec = l.matmul(&l.transpose()).unwrap();
        assert!((0..2).all(|i| (0..2).all(|j| (rec[(i, j)] - a[(i, j)]).abs() <= 1e-10)));
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = m(&[&[1.0, 2.0], &[2.0, 1.0]]);
        assert!(matches!(
            cholesky(&a),
            Err(Error::NotPositiveDefinite { index: 1, .. })
        ));
    }

    #[test]
    fn solve_spd_examples() {
        assert_eq!(
            solve_spd(&DenseMatrix::identity(2), &[3.0, -1.0]).unwrap(),
            vec![3.0, -1.0]
        );
        let x = solve_spd(&m(&[&[2.0, 0.0], &[0.0, 4.0]]), &[2.0, 4.0]).unwrap();
        assert!(x.iter().all(|v| (v - 1.0).abs() <= 1e-15));
        assert!(solve_spd(&m(&[&[1.0, 2.0], &[2.0, 1.0]]), &[1.0, 1.0]).is_err());
    }

    #[test]
    fn residual_correlation_examples() {
        let x = DenseMatrix::identity(2);
        assert_eq!(
            residual_correlations(&x, &[1.0, 2.0], &[0.0, 0.0]).unwrap(),
            vec![1.0, 2.0]
        );
        assert_eq!(
            residual_correlations(&x, &[1.0, 2.0], &[1.0, 0.0]).unwrap(),
            vec![0.0, 2.0]
        );
        assert!(residual_correlations(&x, &[1.0], &[0.0, 0.0]).is_err());
    }

    #[test]
    fn residual_correlations_vanish_at_ols() {
        let x = m(&[&[1.0, 0.2], &[0.3, 1.0], &[0.5, -0.4], &[0.1, 0.7]]);
        let y = [1.0, -2.0, 0.5, 3.0];
        let beta = solve_spd(&x.gram(), &x.tmatvec(&y).unwrap()).unwrap();
        let g = residual_correlations(&x, &y, &beta).unwrap();
        assert!(norm_inf(&g) <= 1e-9);
    }

    #[test]
    fn diag_dominance_examples() {
        assert!(diag_dominant(&DenseMatrix::identity(4)));
        let equi = m(&[&[1.0, 0.6, 0.6], &[0.6, 1.0, 0.6], &[0.6, 0.6, 1.0]]);
        assert!(!diag_dominant(&equi));
        // ties are not dominant
        assert!(!diag_dominant(&m(&[&[1.0, 1.0], &[1.0, 1.0]])));
        assert!(!diag_dominant(&DenseMatrix::zeros(2, 3)));
    }

    #[test]
    fn diag_dominance_always_holds_for_two_unit_columns() {
        for &r in &[-0.99, -0.5, 0.0, 0.3, 0.95] {
            let gram = m(&[&[1.0, r], &[r, 1.0]]);
            assert!(diag_dominant(&inverse_spd(&gram).unwrap()), "r = {r}");
        }
    }

    #[test]
    fn soft_threshold_examples() {
        assert_eq!(soft_threshold(2.0, 0.5), 1.5);
        assert_eq!(soft_threshold(0.3, 0.5), 0.0);
        assert_eq!(soft_threshold(-2.0, 0.5), -1.5);
    }
}
