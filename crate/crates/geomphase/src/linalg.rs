//! Dense complex linear algebra for registers of at most three qubits.
//!
//! Everything in this crate lives in dimension 2, 4 or 8, so the storage is a
//! plain row-major `Vec<Complex64>` with no sparsity and no external solver.
//! The only nontrivial algorithm is a cyclic Jacobi eigendecomposition for
//! Hermitian matrices, which backs [`expm_hermitian`].

use num_complex::Complex64;

use crate::{Error, Result};

/// Maximum dimension of any vector or matrix factor handled by this crate.
pub const MAX_DIM: usize = 8;

/// Tolerance used when validating that an input matrix is Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Tolerance used when validating that an input matrix is unitary.
pub const UNITARY_TOL: f64 = 1e-10;

/// Tolerance used when validating that a rotation axis is unit length.
pub const UNIT_AXIS_TOL: f64 = 1e-12;

/// A dense complex vector of dimension 2, 4 or 8 (one, two or three qubits).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    data: Vec<Complex64>,
}

impl ComplexVector {
    /// Builds a vector from raw entries. The dimension must be 2, 4 or 8.
    pub fn new(data: Vec<Complex64>) -> Result<Self> {
        if !matches!(data.len(), 2 | 4 | 8) {
            return Err(Error::Dimension(format!(
                "vector dimension must be 2, 4 or 8, got {}",
                data.len()
            )));
        }
        Ok(Self { data })
    }

    /// The `i`-th computational basis vector in dimension `dim`.
    pub fn basis(dim: usize, i: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::Dimension(format!(
                "basis index {i} out of range for dimension {dim}"
            )));
        }
        let mut data = vec![Complex64::new(0.0, 0.0); dim];
        data[i] = Complex64::new(1.0, 0.0);
        Self::new(data)
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.data[i]
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!(
                "inner product of dimensions {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Entrywise combination `self + scale * other`.
    pub fn add_scaled(&self, other: &Self, scale: Complex64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!(
                "sum of dimensions {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Self::new(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + scale * b)
                .collect(),
        )
    }

    /// Kronecker product of two vectors.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let dim = self.dim() * other.dim();
        if dim > MAX_DIM {
            return Err(Error::Dimension(format!(
                "kron result dimension {dim} exceeds {MAX_DIM}"
            )));
        }
        let mut data = Vec::with_capacity(dim);
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        Self::new(data)
    }

    /// Rank-one density matrix `|self><self|`.
    pub fn outer(&self) -> ComplexMatrix {
        let n = self.dim();
        ComplexMatrix::from_fn(n, n, |i, j| self.data[i] * self.data[j].conj())
    }
}

/// A dense row-major complex matrix with at most 8 rows and 8 columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(
            (1..=MAX_DIM).contains(&rows) && (1..=MAX_DIM).contains(&cols),
            "matrix dimensions {rows}x{cols} outside 1..={MAX_DIM}"
        );
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Builds a matrix entry by entry from a closure over `(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds a matrix from nested rows of real numbers.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        Self::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != v.dim() {
            return Err(Error::Dimension(format!(
                "apply {}x{} to dimension {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        let data = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v.get(j)).sum())
            .collect();
        ComplexVector::new(data)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension(format!(
                "sum of {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conjugate(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.transpose().conjugate()
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise absolute value.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise absolute difference from `rhs`.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        debug_assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Deviation from Hermiticity, `max |H - H^dag|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.rows == self.cols && self.hermiticity_deviation() <= tol
    }

    /// Deviation from unitarity, `max |U U^dag - I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        self.mul(&self.adjoint())
            .expect("square product")
            .max_abs_diff(&Self::identity(self.rows))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    /// Row-major flattening, so that `vec(A X B^T) = (A kron B) vec(X)`.
    pub fn vectorize(&self) -> Result<ComplexVector> {
        ComplexVector::new(self.data.clone())
    }

    /// Inverse of [`Self::vectorize`] for square shapes.
    pub fn from_vectorized(v: &ComplexVector, rows: usize, cols: usize) -> Result<Self> {
        if rows * cols != v.dim() {
            return Err(Error::Dimension(format!(
                "cannot reshape dimension {} into {rows}x{cols}",
                v.dim()
            )));
        }
        Ok(Self {
            rows,
            cols,
            data: v.as_slice().to_vec(),
        })
    }
}

/// Pauli X.
pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

/// Pauli Y.
pub fn pauli_y() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m.set(0, 1, Complex64::new(0.0, -1.0));
    m.set(1, 0, Complex64::new(0.0, 1.0));
    m
}

/// Pauli Z.
pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
}

/// Dot product of a real 3-vector with the Pauli vector, `n . sigma`.
pub fn axis_dot_sigma(axis: [f64; 3]) -> ComplexMatrix {
    let [nx, ny, nz] = axis;
    let mut m = ComplexMatrix::zeros(2, 2);
    m.set(0, 0, Complex64::new(nz, 0.0));
    m.set(0, 1, Complex64::new(nx, -ny));
    m.set(1, 0, Complex64::new(nx, ny));
    m.set(1, 1, Complex64::new(-nz, 0.0));
    m
}

/// Kronecker product. The result must stay within the 8x8 cap.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    if rows > MAX_DIM || cols > MAX_DIM {
        return Err(Error::Dimension(format!(
            "kron result {rows}x{cols} exceeds {MAX_DIM}x{MAX_DIM}"
        )));
    }
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let aij = a.get(i, j);
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    out.set(i * b.rows() + k, j * b.cols() + l, aij * b.get(k, l));
                }
            }
        }
    }
    Ok(out)
}

/// Closed-form SU(2) exponential.
///
/// Returns `exp(-i (angle/2) (axis . sigma)) = cos(angle/2) I - i sin(angle/2)
/// (axis . sigma)`. The axis must be unit length within `1e-12`.
pub fn su2_exp(axis: [f64; 3], angle: f64) -> Result<ComplexMatrix> {
    let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    if (norm - 1.0).abs() > UNIT_AXIS_TOL {
        return Err(Error::NotUnitAxis { norm });
    }
    let c = (angle / 2.0).cos();
    let s = (angle / 2.0).sin();
    let ns = axis_dot_sigma(axis);
    let mut out = ns.scale(Complex64::new(0.0, -s));
    for i in 0..2 {
        let v = out.get(i, i) + Complex64::new(c, 0.0);
        out.set(i, i, v);
    }
    Ok(out)
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns `(eigenvalues, V)` with real eigenvalues in ascending order and
/// unitary `V` whose columns are the corresponding eigenvectors, so that
/// `H = V diag(eigenvalues) V^dag`. The input must be Hermitian within
/// [`HERMITIAN_TOL`]; the iteration itself runs on the Hermitized part.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    if h.rows() != h.cols() {
        return Err(Error::Dimension(format!(
            "eigendecomposition of non-square {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let deviation = h.hermiticity_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = h.rows();
    // Work on (H + H^dag)/2 so roundoff asymmetry cannot bias the iteration.
    let mut a = h.add(&h.adjoint())?.scale(Complex64::new(0.5, 0.0));
    let mut v = ComplexMatrix::identity(n);

    let scale = a.max_abs().max(1.0);
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a.get(p, q).norm());
            }
        }
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let b = apq.norm();
                if b <= 1e-16 * scale {
                    continue;
                }
                // Plane rotation R with R[p][p] = R[q][q] = c,
                // R[p][q] = -s e^{i phi}, R[q][p] = s e^{-i phi}, where
                // phi = arg A[p][q]. The tangent t solves
                // t^2 - 2 tau t - 1 = 0; the smaller root keeps the
                // rotation angle below pi/4 for stability.
                let phase = apq / Complex64::new(b, 0.0);
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (aqq - app) / (2.0 * b);
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let se_pos = phase * s; // s e^{+i phi}
                let se_neg = phase.conj() * s; // s e^{-i phi}
                let cr = Complex64::new(c, 0.0);
                // A <- A R (columns p, q).
                for i in 0..n {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, aip * cr + aiq * se_neg);
                    a.set(i, q, aiq * cr - aip * se_pos);
                }
                // A <- R^dag A (rows p, q).
                for j in 0..n {
                    let apj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, apj * cr + aqj * se_pos);
                    a.set(q, j, aqj * cr - apj * se_neg);
                }
                // V <- V R.
                for i in 0..n {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, vip * cr + viq * se_neg);
                    v.set(i, q, viq * cr - vip * se_pos);
                }
            }
        }
    }

    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (a.get(i, i).re, i)).collect();
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let eigenvalues: Vec<f64> = pairs.iter().map(|(val, _)| *val).collect();
    let mut vs = ComplexMatrix::zeros(n, n);
    for (new_col, (_, old_col)) in pairs.iter().enumerate() {
        for i in 0..n {
            vs.set(i, new_col, v.get(i, *old_col));
        }
    }
    Ok((eigenvalues, vs))
}

/// Unitary propagator `exp(-i h t)` of a Hermitian generator, by
/// eigendecomposition.
pub fn expm_hermitian(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let (eigenvalues, v) = hermitian_eig(h)?;
    let n = h.rows();
    let mut d = ComplexMatrix::zeros(n, n);
    for (i, lambda) in eigenvalues.iter().enumerate() {
        d.set(i, i, Complex64::from_polar(1.0, -lambda * t));
    }
    v.mul(&d)?.mul(&v.adjoint())
}

/// Partial trace of a density matrix over a subset of tensor factors.
///
/// `dims` lists the factor dimensions in tensor order (their product must be
/// the matrix dimension) and `keep` lists the factor indices to retain, in
/// ascending order. The result is the reduced density matrix on the kept
/// factors in their original order.
pub fn partial_trace(rho: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    if rho.rows() != rho.cols() {
        return Err(Error::Dimension(format!(
            "partial trace of non-square {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let total: usize = dims.iter().product();
    if total != rho.rows() {
        return Err(Error::Dimension(format!(
            "factor dimensions {:?} do not multiply to {}",
            dims,
            rho.rows()
        )));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::Dimension(format!(
            "keep indices {:?} invalid for {} factors",
            keep,
            dims.len()
        )));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let keep_dim: usize = keep.iter().map(|&k| dims[k]).product();
    let traced_dim: usize = traced.iter().map(|&k| dims[k]).product();

    // Mixed-radix index built from kept digits I and traced digits K.
    let compose = |kept: usize, tr: usize| -> usize {
        let mut digits = vec![0usize; dims.len()];
        let mut rem = kept;
        for &k in keep.iter().rev() {
            digits[k] = rem % dims[k];
            rem /= dims[k];
        }
        let mut rem = tr;
        for &k in traced.iter().rev() {
            digits[k] = rem % dims[k];
            rem /= dims[k];
        }
        digits
            .iter()
            .zip(dims)
            .fold(0, |acc, (d, dim)| acc * dim + d)
    };

    let mut out = ComplexMatrix::zeros(keep_dim.max(1), keep_dim.max(1));
    for i in 0..keep_dim {
        for j in 0..keep_dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..traced_dim {
                acc += rho.get(compose(i, k), compose(j, k));
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}
