//! Sparse symmetric matrices and preconditioned conjugate gradients.

use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid sparsity pattern: {0}")]
    InvalidPattern(String),
}

/// Square matrix in compressed sparse row form.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Zero-valued matrix on the given pattern. Column indices must be
    /// strictly increasing within each row.
    pub fn from_pattern(n: usize, row_ptr: Vec<usize>, col_idx: Vec<usize>) -> Result<Self, LinalgError> {
        if row_ptr.len() != n + 1 || row_ptr[0] != 0 || *row_ptr.last().unwrap() != col_idx.len() {
            return Err(LinalgError::InvalidPattern("row offsets inconsistent".into()));
        }
        for i in 0..n {
            let row = &col_idx[row_ptr[i]..row_ptr[i + 1]];
            if row.windows(2).any(|w| w[0] >= w[1]) || row.iter().any(|&c| c >= n) {
                return Err(LinalgError::InvalidPattern(format!("row {i} not strictly increasing or out of range")));
            }
        }
        let nnz = col_idx.len();
        Ok(CsrMatrix { n, row_ptr, col_idx, values: vec![0.0; nnz] })
    }

    pub fn identity(n: usize) -> Self {
        CsrMatrix {
            n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn from_dense(a: &DMatrix<f64>) -> Self {
        let n = a.nrows();
        let mut row_ptr = vec![0];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if a[(i, j)] != 0.0 || a[(j, i)] != 0.0 {
                    col_idx.push(j);
                    values.push(a[(i, j)]);
                }
            }
            row_ptr.push(col_idx.len());
        }
        CsrMatrix { n, row_ptr, col_idx, values }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Position of `(i, j)` in the value array, if structurally present.
    pub fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let row = &self.col_idx[self.row_ptr[i]..self.row_ptr[i + 1]];
        row.binary_search(&j).ok().map(|k| self.row_ptr[i] + k)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |k| self.values[k])
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.values[k] * x[self.col_idx[k]];
            }
            *yi = s;
        }
    }

    /// Replaces row and column `i` by the identity row/column.
    pub fn constrain(&mut self, mask: &[bool]) {
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.col_idx[k];
                if mask[i] || mask[j] {
                    self.values[k] = if i == j { 1.0 } else { 0.0 };
                }
            }
        }
    }

    /// Largest `|a_ij - a_ji|` over the stored entries.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.col_idx[k];
                worst = worst.max((self.values[k] - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                a[(i, self.col_idx[k])] = self.values[k];
            }
        }
        a
    }
}

/// A symmetric linear operator usable by [`cg_solve`].
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
    fn diagonal(&self) -> Vec<f64>;
}

impl LinearOperator for CsrMatrix {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.matvec_into(x, y)
    }

    fn diagonal(&self) -> Vec<f64> {
        CsrMatrix::diagonal(self)
    }
}

/// `A + s·M` applied without forming the sum.
#[derive(Debug, Clone, Copy)]
pub struct ScaledSum<'a> {
    pub a: &'a CsrMatrix,
    pub s: f64,
    pub m: &'a CsrMatrix,
}

pub fn add_scaled<'a>(a: &'a CsrMatrix, s: f64, m: &'a CsrMatrix) -> ScaledSum<'a> {
    ScaledSum { a, s, m }
}

impl LinearOperator for ScaledSum<'_> {
    fn dim(&self) -> usize {
        self.a.n
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.a.matvec_into(x, y);
        if self.s != 0.0 {
            let mut t = vec![0.0; y.len()];
            self.m.matvec_into(x, &mut t);
            for (yi, ti) in y.iter_mut().zip(t) {
                *yi += self.s * ti;
            }
        }
    }

    fn diagonal(&self) -> Vec<f64> {
        let mut d = self.a.diagonal();
        if self.s != 0.0 {
            for (di, mi) in d.iter_mut().zip(self.m.diagonal()) {
                *di += self.s * mi;
            }
        }
        d
    }
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm2(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

pub fn norm_inf(x: &[f64]) -> f64 {
    x.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preconditioner {
    None,
    Jacobi,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgOptions {
    pub rel_tol: f64,
    /// Defaults to `10·N` when `None`.
    pub max_iters: Option<usize>,
    pub preconditioner: Preconditioner,
    /// Keep iterating through directions with `pᵀAp < 0` instead of
    /// stopping. Used by plain Newton on indefinite Jacobians.
    pub allow_indefinite: bool,
}

impl Default for CgOptions {
    fn default() -> Self {
        CgOptions { rel_tol: 1e-10, max_iters: None, preconditioner: Preconditioner::Jacobi, allow_indefinite: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CgStatus {
    Converged,
    MaxIters,
    IndefiniteDetected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CgOutcome {
    pub x: Vec<f64>,
    pub status: CgStatus,
    pub iterations: usize,
    pub residual_norm: f64,
    /// A direction with nonpositive curvature was met (and, with
    /// `allow_indefinite`, stepped through).
    pub negative_curvature: bool,
}

fn outcome(
    x: Vec<f64>,
    status: CgStatus,
    iterations: usize,
    residual_norm: f64,
    negative_curvature: bool,
) -> Result<CgOutcome, LinalgError> {
    Ok(CgOutcome { x, status, iterations, residual_norm, negative_curvature })
}

/// Preconditioned conjugate gradients from a zero initial guess.
///
/// On `IndefiniteDetected` the iterate before the offending direction is
/// returned (zero if it was the first). Without `allow_indefinite`, a
/// nonpositive diagonal with Jacobi preconditioning is reported as
/// indefinite immediately.
pub fn cg_solve<O: LinearOperator + ?Sized>(op: &O, b: &[f64], opts: &CgOptions) -> Result<CgOutcome, LinalgError> {
    let n = op.dim();
    if b.len() != n {
        return Err(LinalgError::DimensionMismatch { expected: n, found: b.len() });
    }
    let max_iters = opts.max_iters.unwrap_or(10 * n.max(1));
    let mut x = vec![0.0; n];
    let b_norm = norm2(b);
    let target = opts.rel_tol * b_norm;
    if b_norm == 0.0 {
        return outcome(x, CgStatus::Converged, 0, 0.0, false);
    }

    let inv_diag: Option<Vec<f64>> = match opts.preconditioner {
        Preconditioner::None => None,
        Preconditioner::Jacobi => {
            let d = op.diagonal();
            if !opts.allow_indefinite && d.iter().any(|&v| !(v > 0.0)) {
                return outcome(x, CgStatus::IndefiniteDetected, 0, b_norm, true);
            }
            Some(d.iter().map(|&v| if v != 0.0 { 1.0 / v.abs() } else { 1.0 }).collect())
        }
    };
    let precondition = |r: &[f64], z: &mut [f64]| match &inv_diag {
        Some(inv) => {
            for ((zi, ri), di) in z.iter_mut().zip(r).zip(inv) {
                *zi = ri * di;
            }
        }
        None => z.copy_from_slice(r),
    };

    let mut r = b.to_vec();
    let mut z = vec![0.0; n];
    precondition(&r, &mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut q = vec![0.0; n];
    let mut negative = false;
    let mut r_norm = b_norm;

    for it in 0..max_iters {
        op.apply(&p, &mut q);
        let curvature = dot(&p, &q);
        if !(curvature > 0.0) {
            negative = true;
            if !opts.allow_indefinite || curvature == 0.0 || !curvature.is_finite() {
                return outcome(x, CgStatus::IndefiniteDetected, it, r_norm, true);
            }
        }
        let alpha = rz / curvature;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        r_norm = norm2(&r);
        if r_norm <= target {
            return outcome(x, CgStatus::Converged, it + 1, r_norm, negative);
        }
        precondition(&r, &mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    outcome(x, CgStatus::MaxIters, max_iters, r_norm, negative)
}
