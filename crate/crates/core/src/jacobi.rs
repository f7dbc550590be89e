//! Eigenvalues of dense real symmetric matrices: cyclic Jacobi, and
//! Householder reduction to tridiagonal form followed by Sturm bisection.

use thiserror::Error;

use crate::tridiag::SymTridiagonal;

/// Sweep cap for [`symmetric_eigenvalues`].
pub const MAX_SWEEPS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JacobiError {
    #[error(
        "Jacobi iteration did not converge in {sweeps} sweeps (off-diagonal norm {off_norm:e})"
    )]
    ConvergenceFailure { sweeps: usize, off_norm: f64 },
    #[error("matrix is not square: {len} entries for dimension {dim}")]
    NotSquare { len: usize, dim: usize },
}

/// Dense row-major symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize) -> Self {
        SymmetricMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    /// Builds from row-major data, averaging with the transpose.
    pub fn from_row_major(dim: usize, mut data: Vec<f64>) -> Result<Self, JacobiError> {
        if data.len() != dim * dim {
            return Err(JacobiError::NotSquare {
                len: data.len(),
                dim,
            });
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                let avg = 0.5 * (data[i * dim + j] + data[j * dim + i]);
                data[i * dim + j] = avg;
                data[j * dim + i] = avg;
            }
        }
        Ok(SymmetricMatrix { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Sets both (i, j) and (j, i).
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.dim + j] = value;
        self.data[j * self.dim + i] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// max |A_ij − A_ji|
    pub fn asymmetry(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    fn off_diagonal_norm(&self) -> f64 {
        let n = self.dim;
        let mut sum = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let a = self.data[i * n + j];
                sum += a * a;
            }
        }
        (2.0 * sum).sqrt()
    }
}

/// All eigenvalues of `a` in descending order.
///
/// Iterates cyclic-by-row sweeps until the off-diagonal Frobenius norm falls
/// below `rel_tol`·‖A‖_F.
pub fn symmetric_eigenvalues(a: &SymmetricMatrix, rel_tol: f64) -> Result<Vec<f64>, JacobiError> {
    let n = a.dim;
    let mut m = a.data.clone();
    let scale = a.frobenius_norm();
    if n == 0 {
        return Ok(Vec::new());
    }
    if scale == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let target = rel_tol * scale;
    let mut sweeps = 0;
    loop {
        let off = SymmetricMatrix {
            dim: n,
            data: m.clone(),
        }
        .off_diagonal_norm();
        if off <= target {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(JacobiError::ConvergenceFailure {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        // entries this small relative to the target cannot matter
        let skip = target / (n as f64 * n as f64);
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq.abs() <= skip {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                m[p * n + p] = app - t * apq;
                m[q * n + q] = aqq + t * apq;
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    let new_kp = akp - s * (akq + tau * akp);
                    let new_kq = akq + s * (akp - tau * akq);
                    m[k * n + p] = new_kp;
                    m[p * n + k] = new_kp;
                    m[k * n + q] = new_kq;
                    m[q * n + k] = new_kq;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    Ok(eig)
}

/// Householder reduction A = Q T Qᵀ with T symmetric tridiagonal.
pub fn householder_tridiagonal(a: &SymmetricMatrix) -> SymTridiagonal {
    let n = a.dim;
    let mut m = a.data.clone();
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(1) {
        let lo = k + 1;
        let norm = (lo..n).map(|i| m[i * n + k].powi(2)).sum::<f64>().sqrt();
        let x0 = m[lo * n + k];
        if norm == 0.0 || (n - lo == 1) {
            off.push(x0);
            continue;
        }
        let alpha = -norm.copysign(x0);
        for i in lo..n {
            v[i] = m[i * n + k];
        }
        v[lo] -= alpha;
        let vv: f64 = (lo..n).map(|i| v[i] * v[i]).sum();
        if vv == 0.0 {
            off.push(x0);
            continue;
        }
        let beta = 2.0 / vv;
        // p = β A v, q = p − (β vᵀp / 2) v, A ← A − v qᵀ − q vᵀ
        for i in lo..n {
            let row = &m[i * n + lo..i * n + n];
            p[i] = beta * row.iter().zip(&v[lo..n]).map(|(x, y)| x * y).sum::<f64>();
        }
        let kappa = 0.5 * beta * (lo..n).map(|i| v[i] * p[i]).sum::<f64>();
        for i in lo..n {
            p[i] -= kappa * v[i];
        }
        for i in lo..n {
            let (vi, qi) = (v[i], p[i]);
            let row = &mut m[i * n + lo..i * n + n];
            for (j, x) in row.iter_mut().enumerate() {
                *x -= vi * p[lo + j] + qi * v[lo + j];
            }
        }
        off.push(alpha);
    }
    let diag = (0..n).map(|i| m[i * n + i]).collect();
    SymTridiagonal::new(diag, off)
}

/// All eigenvalues of `a` in descending order via [`householder_tridiagonal`]
/// and bisection to absolute width `tol`.
pub fn eigenvalues_by_bisection(a: &SymmetricMatrix, tol: f64) -> Vec<f64> {
    if a.dim == 0 {
        return Vec::new();
    }
    let t = householder_tridiagonal(a);
    let (_, hi) = t.gershgorin();
    let mut eig = t.eigenvalues_below(hi + 1.0 + hi.abs() * 1e-12, tol);
    eig.reverse();
    eig
}
