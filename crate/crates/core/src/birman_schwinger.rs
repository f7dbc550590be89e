//! Nyström discretization of the Birman–Schwinger kernel
//! K_E = √V₋ (−d²/dx² + E)⁻¹ √V₋ in one dimension.
//!
//! The matrix is built on the midpoints of a uniform grid over the support of
//! V₋ with the symmetric weighting √wᵢ·√V₋(xᵢ)·G_E(xᵢ,xⱼ)·√V₋(xⱼ)·√wⱼ, so it
//! is exactly symmetric and positive semidefinite. An eigenvalue e < 0 of H
//! shows up as an eigenvalue 1 of K_{|e|}, and the number of eigenvalues of
//! K_E above 1 is N_E(V).

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::jacobi::{self, JacobiError, SymmetricMatrix};
use crate::potentials::Potential;

/// Off-diagonal reduction target relative to ‖K‖_F for the Jacobi path.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
/// Absolute bisection width for the Householder path.
pub const BISECTION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum BsError {
    #[error("energy must be positive, got {0}")]
    DomainError(f64),
    #[error("Birman-Schwinger kernels are one-dimensional; potential has n = {0}")]
    Dimension(u32),
    #[error("grid needs at least one point")]
    EmptyGrid,
    #[error(transparent)]
    Jacobi(#[from] JacobiError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Resolvent kernel of −d²/dx² + E on ℝ: e^{−√E|x−y|}/(2√E).
pub fn green_kernel_1d(energy: f64, x: f64, y: f64) -> Result<f64, BsError> {
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(BsError::DomainError(energy));
    }
    Ok(green_unchecked(energy.sqrt(), x, y))
}

fn green_unchecked(kappa: f64, x: f64, y: f64) -> f64 {
    (-kappa * (x - y).abs()).exp() / (2.0 * kappa)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub entries: SymmetricMatrix,
    pub energy: f64,
}

impl KernelMatrix {
    pub fn dim(&self) -> usize {
        self.nodes.len()
    }

    /// CSV with header `i,j,x_i,x_j,value`, upper triangle including the diagonal.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), BsError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["i", "j", "x_i", "x_j", "value"])
            .map_err(csv_io)?;
        for i in 0..self.dim() {
            for j in i..self.dim() {
                w.write_record([
                    i.to_string(),
                    j.to_string(),
                    format!("{:e}", self.nodes[i]),
                    format!("{:e}", self.nodes[j]),
                    format!("{:e}", self.entries.get(i, j)),
                ])
                .map_err(csv_io)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_io(e: csv::Error) -> BsError {
    BsError::Io(std::io::Error::other(e))
}

/// Symmetrized Nyström matrix of K_E on `grid_points` midpoints of the
/// support of V₋. A potential with V₋ ≡ 0 yields the zero matrix.
pub fn build_bs_matrix(
    v: &Potential,
    energy: f64,
    grid_points: usize,
) -> Result<KernelMatrix, BsError> {
    if v.dim() != 1 {
        return Err(BsError::Dimension(v.dim()));
    }
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(BsError::DomainError(energy));
    }
    if grid_points == 0 {
        return Err(BsError::EmptyGrid);
    }
    let r = v.truncation_radius();
    let (lo, hi) = v.negative_support().unwrap_or((-r, r));
    let h = (hi - lo) / grid_points as f64;
    let nodes: Vec<f64> = (0..grid_points)
        .map(|i| lo + (i as f64 + 0.5) * h)
        .collect();
    let weights = vec![h; grid_points];
    let root: Vec<f64> = nodes
        .iter()
        .map(|&x| (v.negative_part(x) * h).sqrt())
        .collect();
    let kappa = energy.sqrt();
    let n = grid_points;
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| root[i] * green_unchecked(kappa, nodes[i], nodes[j]) * root[j])
                .collect()
        })
        .collect();
    let entries = SymmetricMatrix::from_row_major(n, rows.concat())?;
    Ok(KernelMatrix {
        nodes,
        weights,
        entries,
        energy,
    })
}

/// All eigenvalues of K, descending (Householder reduction and bisection).
pub fn bs_eigenvalues(k: &KernelMatrix) -> Result<Vec<f64>, BsError> {
    Ok(jacobi::eigenvalues_by_bisection(
        &k.entries,
        BISECTION_TOLERANCE,
    ))
}

/// All eigenvalues of K, descending, by cyclic Jacobi. Slower; kept as an
/// independent check on [`bs_eigenvalues`].
pub fn bs_eigenvalues_jacobi(k: &KernelMatrix) -> Result<Vec<f64>, BsError> {
    Ok(jacobi::symmetric_eigenvalues(&k.entries, JACOBI_TOLERANCE)?)
}

/// N_E(V) as the number of eigenvalues of K_E exceeding 1.
pub fn counting_via_bs(v: &Potential, energy: f64, grid_points: usize) -> Result<u64, BsError> {
    let k = build_bs_matrix(v, energy, grid_points)?;
    Ok(bs_eigenvalues(&k)?.iter().filter(|&&mu| mu > 1.0).count() as u64)
}

/// Geometric ladder of `points` energies spanning [lo, hi].
pub fn energy_ladder(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![lo];
    }
    let ratio = (hi / lo).powf(1.0 / (points - 1) as f64);
    (0..points).map(|k| lo * ratio.powi(k as i32)).collect()
}

/// One rung of a monotonicity or counting sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BsSample {
    pub energy: f64,
    pub count: u64,
    pub top_eigenvalues: Vec<f64>,
}

/// Spectra of K_E along an energy ladder, keeping the `keep` largest eigenvalues.
pub fn ladder_sweep(
    v: &Potential,
    energies: &[f64],
    grid_points: usize,
    keep: usize,
) -> Result<Vec<BsSample>, BsError> {
    energies
        .iter()
        .map(|&energy| {
            let k = build_bs_matrix(v, energy, grid_points)?;
            let eig = bs_eigenvalues(&k)?;
            Ok(BsSample {
                energy,
                count: eig.iter().filter(|&&mu| mu > 1.0).count() as u64,
                top_eigenvalues: eig.into_iter().take(keep).collect(),
            })
        })
        .collect()
}
