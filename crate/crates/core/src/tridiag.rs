//! Symmetric tridiagonal matrices: Sturm counts and bisection.

use rayon::prelude::*;

const PIVOT_GUARD: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiagonal {
    /// `off` holds the sub/super-diagonal and must be one shorter than `diag`.
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(
            off.len() + 1 == diag.len() || (diag.is_empty() && off.is_empty()),
            "off-diagonal length must be diag.len() - 1"
        );
        SymTridiagonal { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off_diag(&self) -> &[f64] {
        &self.off
    }

    /// Number of eigenvalues strictly below `lambda` (negative LDLᵀ pivots of T − λ).
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0_f64;
        for i in 0..self.diag.len() {
            let coupling = if i == 0 {
                0.0
            } else {
                self.off[i - 1] * self.off[i - 1]
            };
            let q_safe = if q.abs() < PIVOT_GUARD {
                PIVOT_GUARD.copysign(q)
            } else {
                q
            };
            q = self.diag[i] - lambda - coupling / q_safe;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing every eigenvalue.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// The k-th smallest eigenvalue (0-based) located to interval width `tol`.
    pub fn kth_eigenvalue(&self, k: usize, tol: f64) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        self.bisect(k, &mut lo, &mut hi, tol)
    }

    fn bisect(&self, k: usize, lo: &mut f64, hi: &mut f64, tol: f64) -> f64 {
        // invariant: count(lo) ≤ k < count(hi)
        while *hi - *lo > tol {
            let mid = 0.5 * (*lo + *hi);
            if mid <= *lo || mid >= *hi {
                break;
            }
            if self.sturm_count(mid) > k {
                *hi = mid;
            } else {
                *lo = mid;
            }
        }
        0.5 * (*lo + *hi)
    }

    /// All eigenvalues strictly below `threshold`, ascending, each to width `tol`.
    pub fn eigenvalues_below(&self, threshold: f64, tol: f64) -> Vec<f64> {
        if self.is_empty() {
            return Vec::new();
        }
        let count = self.sturm_count(threshold);
        let (lo, _) = self.gershgorin();
        (0..count)
            .into_par_iter()
            .map(|k| {
                let (mut a, mut b) = (lo, threshold);
                self.bisect(k, &mut a, &mut b, tol)
            })
            .collect()
    }
}
