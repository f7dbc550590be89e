//! Negative spectrum of H = −Δ + V by finite differences and Sturm bisection.
//!
//! One-dimensional problems use the three-point Dirichlet Laplacian on
//! [−R, R]. Radial problems in n = 2, 3 are split into angular-momentum
//! channels; each channel is a finite-volume discretization of
//! −r^{1−n}(r^{n−1}f′)′ + (c/r²)f + Vf on a half-offset grid, which after the
//! symmetrizing substitution u = √w·f is the familiar −u″ + [V + c_{n,ℓ}/r²]u.
//! The half-offset grid never samples r = 0 and the finite-volume fluxes
//! vanish there, so the attractive −1/(4r²) term of the n = 2, m = 0 channel
//! needs no special treatment.
//!
//! Cells containing a jump of V use the exact cell average of V instead of
//! the point value, which keeps thin wells at their correct weight.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::potentials::{Potential, PotentialError};
use crate::quadrature;
use crate::tridiag::SymTridiagonal;
use crate::validity::{check_gamma, InvalidGamma};

pub const DEFAULT_GRID_POINTS: usize = 4000;
pub const DEFAULT_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_MAX_CHANNEL: u32 = 400;
pub const MIN_GRID_POINTS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    InvalidGamma(#[from] InvalidGamma),
    #[error("grid needs at least {MIN_GRID_POINTS} points, got {0}")]
    GridTooSmall(usize),
    #[error("dimension mismatch: potential has n = {potential}, requested n = {requested}")]
    DimensionMismatch { potential: u32, requested: u32 },
    #[error("energy must be positive (E = 0 is allowed only for n = 3), got {0}")]
    InvalidEnergy(f64),
    #[error("eigenvalue tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error(
        "channel sweep reached the cap of {max_channel} channels while still finding bound states"
    )]
    ChannelCutoff { max_channel: u32 },
}

/// Discretization parameters shared by every spectral computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumConfig {
    pub grid_points: usize,
    /// Overrides the potential's own cutoff when set.
    pub truncation_radius: Option<f64>,
    /// Bisection width for each eigenvalue.
    pub tolerance: f64,
    /// Combine grids h and ≈h/2 to cancel the O(h²) discretization error.
    pub richardson: bool,
    pub max_channel: u32,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig {
            grid_points: DEFAULT_GRID_POINTS,
            truncation_radius: None,
            tolerance: DEFAULT_TOLERANCE,
            richardson: true,
            max_channel: DEFAULT_MAX_CHANNEL,
        }
    }
}

impl SpectrumConfig {
    pub fn with_grid(mut self, grid_points: usize) -> Self {
        self.grid_points = grid_points;
        self
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.truncation_radius = Some(radius);
        self
    }

    pub fn without_richardson(mut self) -> Self {
        self.richardson = false;
        self
    }

    fn potential(&self, v: &Potential) -> Result<Potential, SpectrumError> {
        match self.truncation_radius {
            Some(r) if r != v.truncation_radius() => Ok(v.with_truncation_radius(r)?),
            _ => Ok(v.clone()),
        }
    }

    fn validate(&self) -> Result<(), SpectrumError> {
        if self.grid_points < MIN_GRID_POINTS {
            return Err(SpectrumError::GridTooSmall(self.grid_points));
        }
        if !(self.tolerance > 0.0) {
            return Err(SpectrumError::InvalidTolerance(self.tolerance));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub value: f64,
    pub multiplicity: u32,
    /// Estimated discretization error (zero when no estimate was made).
    #[serde(default, skip_serializing_if = "is_zero")]
    pub error_estimate: f64,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

/// Sorted negative eigenvalues with multiplicities and discretization metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub dim: u32,
    pub eigenvalues: Vec<Eigenvalue>,
    pub grid_points: usize,
    pub truncation_radius: f64,
    #[serde(default)]
    pub channels_used: u32,
    #[serde(default)]
    pub tolerance: f64,
    #[serde(default)]
    pub extrapolated: bool,
}

impl SpectralResult {
    /// Number of bound states counted with multiplicity.
    pub fn count(&self) -> u64 {
        self.eigenvalues.iter().map(|e| e.multiplicity as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn ground_state(&self) -> Option<f64> {
        self.eigenvalues.first().map(|e| e.value)
    }

    /// Eigenvalues repeated according to multiplicity.
    pub fn values(&self) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .flat_map(|e| std::iter::repeat(e.value).take(e.multiplicity as usize))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountingValue {
    pub energy: f64,
    pub count: u64,
}

/// A Dirichlet discretization of −d²/dx² + V or of one radial channel.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletOperator {
    pub matrix: SymTridiagonal,
    pub dim: u32,
    pub grid_points: usize,
    pub truncation_radius: f64,
    pub spacing: f64,
}

fn sample(v: &Potential, jumps: &[f64], centre: f64, h: f64) -> f64 {
    let (a, b) = (centre - 0.5 * h, centre + 0.5 * h);
    let inside: Vec<f64> = jumps.iter().copied().filter(|j| *j > a && *j < b).collect();
    if inside.is_empty() {
        return v.value(centre);
    }
    let mut breaks = Vec::with_capacity(inside.len() + 2);
    breaks.push(a);
    breaks.extend(inside);
    breaks.push(b);
    // the integrand is piecewise smooth between the breaks
    match quadrature::integrate_with_breaks(|x| v.value(x), &breaks, 1e-13 * h) {
        Ok(q) => q.value / h,
        Err(_) => v.value(centre),
    }
}

/// Three-point finite differences for −d²/dx² + V on [−R, R] with Dirichlet walls.
///
/// Nodes are x_i = −R + (i+1)h, h = 2R/(grid_points+1); the off-diagonal is
/// −1/h² and the diagonal 2/h² + V(x_i).
pub fn discretize_1d(
    v: &Potential,
    grid_points: usize,
) -> Result<DirichletOperator, SpectrumError> {
    if v.dim() != 1 {
        return Err(SpectrumError::DimensionMismatch {
            potential: v.dim(),
            requested: 1,
        });
    }
    if grid_points < MIN_GRID_POINTS {
        return Err(SpectrumError::GridTooSmall(grid_points));
    }
    let r = v.truncation_radius();
    let h = 2.0 * r / (grid_points + 1) as f64;
    let inv_h2 = 1.0 / (h * h);
    let jumps = v.jumps();
    let diag = (0..grid_points)
        .map(|i| {
            let x = -r + (i + 1) as f64 * h;
            2.0 * inv_h2 + sample(v, &jumps, x, h)
        })
        .collect();
    let off = vec![-inv_h2; grid_points - 1];
    Ok(DirichletOperator {
        matrix: SymTridiagonal::new(diag, off),
        dim: 1,
        grid_points,
        truncation_radius: r,
        spacing: h,
    })
}

/// Angular coefficient multiplying 1/r² in the channel operator for f (not u).
fn angular_coefficient(dim: u32, channel: u32) -> f64 {
    let l = channel as f64;
    if dim == 2 {
        l * l
    } else {
        l * (l + 1.0)
    }
}

/// Degeneracy of a radial channel: 2ℓ+1 for n = 3; 1 for m = 0 and 2 otherwise for n = 2.
pub fn channel_multiplicity(dim: u32, channel: u32) -> u32 {
    match (dim, channel) {
        (2, 0) => 1,
        (2, _) => 2,
        _ => 2 * channel + 1,
    }
}

/// Channel operator for radial V in n = 2 or 3 on r_i = (i+½)h, with the
/// Dirichlet wall at r = R = (grid_points + ½)h.
pub fn radial_channel(
    v: &Potential,
    dim: u32,
    channel: u32,
    grid_points: usize,
) -> Result<DirichletOperator, SpectrumError> {
    if !(2..=3).contains(&dim) || v.dim() != dim {
        return Err(SpectrumError::DimensionMismatch {
            potential: v.dim(),
            requested: dim,
        });
    }
    if grid_points < MIN_GRID_POINTS {
        return Err(SpectrumError::GridTooSmall(grid_points));
    }
    let big_r = v.truncation_radius();
    let h = big_r / (grid_points as f64 + 0.5);
    let inv_h2 = 1.0 / (h * h);
    let face = |k: usize| -> f64 {
        // r^{n-1} at face r_{k-1/2} = k h
        let r = k as f64 * h;
        if dim == 2 {
            r
        } else {
            r * r
        }
    };
    let weight = |i: usize| -> f64 {
        // cell average of r^{n-1}
        let r = (i as f64 + 0.5) * h;
        if dim == 2 {
            r
        } else {
            r * r + h * h / 12.0
        }
    };
    let c = angular_coefficient(dim, channel);
    let jumps = v.jumps();
    let diag = (0..grid_points)
        .map(|i| {
            let r = (i as f64 + 0.5) * h;
            (face(i) + face(i + 1)) * inv_h2 / weight(i) + c / (r * r) + sample(v, &jumps, r, h)
        })
        .collect();
    let off = (0..grid_points - 1)
        .map(|i| -face(i + 1) * inv_h2 / (weight(i) * weight(i + 1)).sqrt())
        .collect();
    Ok(DirichletOperator {
        matrix: SymTridiagonal::new(diag, off),
        dim,
        grid_points,
        truncation_radius: big_r,
        spacing: h,
    })
}

/// Every eigenvalue below zero of a discrete operator, each to bisection width `tol`.
pub fn negative_eigenvalues_1d(
    op: &DirichletOperator,
    tol: f64,
) -> Result<SpectralResult, SpectrumError> {
    if !(tol > 0.0) {
        return Err(SpectrumError::InvalidTolerance(tol));
    }
    let eigenvalues = op
        .matrix
        .eigenvalues_below(0.0, tol)
        .into_iter()
        .map(|value| Eigenvalue {
            value,
            multiplicity: 1,
            error_estimate: 0.0,
        })
        .collect();
    Ok(SpectralResult {
        dim: op.dim,
        eigenvalues,
        grid_points: op.grid_points,
        truncation_radius: op.truncation_radius,
        channels_used: 0,
        tolerance: tol,
        extrapolated: false,
    })
}

/// Grid refinement used by Richardson extrapolation: 1-D halves h exactly,
/// radial grids double the point count.
fn fine_grid(dim: u32, grid_points: usize) -> usize {
    if dim == 1 {
        2 * grid_points + 1
    } else {
        2 * grid_points
    }
}

/// Extrapolate e(h) = e₀ + c·h² from two grids, index by index.
fn richardson(coarse: &[f64], h_coarse: f64, fine: &[f64], h_fine: f64) -> Vec<(f64, f64)> {
    let (a, b) = (h_coarse * h_coarse, h_fine * h_fine);
    fine.iter()
        .enumerate()
        .map(|(k, &ef)| match coarse.get(k) {
            Some(&ec) => {
                let extrapolated = (a * ef - b * ec) / (a - b);
                (extrapolated.min(0.0), (ef - ec).abs() * b / (a - b))
            }
            // bound state that only the fine grid resolves; its error is at most its depth
            None => (ef, ef.abs()),
        })
        .filter(|(e, _)| *e < 0.0)
        .collect()
}

fn channel_eigenvalues(
    build: impl Fn(usize) -> Result<DirichletOperator, SpectrumError>,
    dim: u32,
    cfg: &SpectrumConfig,
) -> Result<Vec<(f64, f64)>, SpectrumError> {
    let coarse = build(cfg.grid_points)?;
    let coarse_ev = coarse.matrix.eigenvalues_below(0.0, cfg.tolerance);
    if !cfg.richardson {
        return Ok(coarse_ev.into_iter().map(|e| (e, 0.0)).collect());
    }
    let fine = build(fine_grid(dim, cfg.grid_points))?;
    let fine_ev = fine.matrix.eigenvalues_below(0.0, cfg.tolerance);
    Ok(richardson(
        &coarse_ev,
        coarse.spacing,
        &fine_ev,
        fine.spacing,
    ))
}

fn solve_1d(v: &Potential, cfg: &SpectrumConfig) -> Result<SpectralResult, SpectrumError> {
    let values = channel_eigenvalues(|m| discretize_1d(v, m), 1, cfg)?;
    Ok(SpectralResult {
        dim: 1,
        eigenvalues: values
            .into_iter()
            .map(|(value, error_estimate)| Eigenvalue {
                value,
                multiplicity: 1,
                error_estimate,
            })
            .collect(),
        grid_points: cfg.grid_points,
        truncation_radius: v.truncation_radius(),
        channels_used: 0,
        tolerance: cfg.tolerance,
        extrapolated: cfg.richardson,
    })
}

/// Union of channel spectra with degeneracies, stopping at the first empty channel.
///
/// The stop rule relies on V + c/r² increasing with the channel index, so a
/// channel without bound states has no successor with any.
pub fn negative_eigenvalues_radial(
    v: &Potential,
    dim: u32,
    cfg: &SpectrumConfig,
) -> Result<SpectralResult, SpectrumError> {
    cfg.validate()?;
    let v = cfg.potential(v)?;
    let mut eigenvalues = Vec::new();
    let mut channel = 0;
    loop {
        if channel > cfg.max_channel {
            return Err(SpectrumError::ChannelCutoff {
                max_channel: cfg.max_channel,
            });
        }
        let found = channel_eigenvalues(|m| radial_channel(&v, dim, channel, m), dim, cfg)?;
        if found.is_empty() {
            break;
        }
        let multiplicity = channel_multiplicity(dim, channel);
        eigenvalues.extend(found.into_iter().map(|(value, error_estimate)| Eigenvalue {
            value,
            multiplicity,
            error_estimate,
        }));
        channel += 1;
    }
    eigenvalues.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(SpectralResult {
        dim,
        eigenvalues,
        grid_points: cfg.grid_points,
        truncation_radius: v.truncation_radius(),
        channels_used: channel + 1,
        tolerance: cfg.tolerance,
        extrapolated: cfg.richardson,
    })
}

/// Negative spectrum of −Δ + V in the potential's own dimension.
pub fn spectrum(v: &Potential, cfg: &SpectrumConfig) -> Result<SpectralResult, SpectrumError> {
    cfg.validate()?;
    match v.dim() {
        1 => solve_1d(&cfg.potential(v)?, cfg),
        n => negative_eigenvalues_radial(v, n, cfg),
    }
}

/// Lowest eigenvalue, if any. Radial ground states live in the first channel.
pub fn ground_state(v: &Potential, cfg: &SpectrumConfig) -> Result<Option<f64>, SpectrumError> {
    cfg.validate()?;
    let v = cfg.potential(v)?;
    let lowest = |op: &DirichletOperator| -> Option<f64> {
        (op.matrix.sturm_count(0.0) > 0).then(|| op.matrix.kth_eigenvalue(0, cfg.tolerance))
    };
    let build = |m: usize| match v.dim() {
        1 => discretize_1d(&v, m),
        n => radial_channel(&v, n, 0, m),
    };
    let coarse = build(cfg.grid_points)?;
    let ec = lowest(&coarse);
    if !cfg.richardson {
        return Ok(ec);
    }
    let fine = build(fine_grid(v.dim(), cfg.grid_points))?;
    Ok(match (ec, lowest(&fine)) {
        (Some(ec), Some(ef)) => Some(richardson(&[ec], coarse.spacing, &[ef], fine.spacing)[0].0),
        (None, fine) => fine,
        (Some(ec), None) => Some(ec),
    })
}

/// Σ multiplicity·|e_j|^γ; γ = 0 gives the number of bound states.
pub fn riesz_mean(spec: &SpectralResult, gamma: f64) -> Result<f64, InvalidGamma> {
    check_gamma(gamma, spec.dim)?;
    Ok(spec
        .eigenvalues
        .iter()
        .map(|e| {
            e.multiplicity as f64
                * if gamma == 0.0 {
                    1.0
                } else {
                    e.value.abs().powf(gamma)
                }
        })
        .sum())
}

/// N_E(V) = #{e_j < −E} with multiplicity, from Sturm counts of the shifted
/// operators on the base grid (no eigenvalues are extracted).
pub fn counting_function(
    v: &Potential,
    dim: u32,
    energy: f64,
    cfg: &SpectrumConfig,
) -> Result<CountingValue, SpectrumError> {
    cfg.validate()?;
    if v.dim() != dim {
        return Err(SpectrumError::DimensionMismatch {
            potential: v.dim(),
            requested: dim,
        });
    }
    let zero_allowed = dim == 3;
    if !(energy > 0.0 || (zero_allowed && energy == 0.0)) || !energy.is_finite() {
        return Err(SpectrumError::InvalidEnergy(energy));
    }
    let v = cfg.potential(v)?;
    let count = if dim == 1 {
        discretize_1d(&v, cfg.grid_points)?
            .matrix
            .sturm_count(-energy) as u64
    } else {
        let mut total = 0u64;
        let mut channel = 0;
        loop {
            if channel > cfg.max_channel {
                return Err(SpectrumError::ChannelCutoff {
                    max_channel: cfg.max_channel,
                });
            }
            let op = radial_channel(&v, dim, channel, cfg.grid_points)?;
            let n = op.matrix.sturm_count(-energy) as u64;
            if n == 0 {
                break;
            }
            total += n * channel_multiplicity(dim, channel) as u64;
            channel += 1;
        }
        total
    };
    Ok(CountingValue { energy, count })
}

/// γ ∫₀^∞ N_E E^{γ−1} dE evaluated piecewise exactly.
///
/// N_E is a step function with jumps at the |e_j|, so between consecutive
/// jump energies a < b the integral contributes N·(b^γ − a^γ). The jump
/// locations come from the eigenvalues, while each N is an independent Sturm
/// count at the midpoint of its interval.
pub fn riesz_via_counting(
    v: &Potential,
    dim: u32,
    gamma: f64,
    cfg: &SpectrumConfig,
) -> Result<f64, SpectrumError> {
    check_gamma(gamma, dim)?;
    if !(gamma > 0.0) {
        return Err(SpectrumError::InvalidGamma(InvalidGamma {
            gamma,
            dim,
            rule: "the counting representation requires gamma > 0",
        }));
    }
    let spec = spectrum(v, cfg)?;
    let mut jumps: Vec<f64> = spec.eigenvalues.iter().map(|e| e.value.abs()).collect();
    jumps.sort_by(|a, b| a.total_cmp(b));
    jumps.dedup();
    let mut edges = Vec::with_capacity(jumps.len() + 1);
    edges.push(0.0);
    edges.extend(jumps);
    let pieces: Vec<(f64, f64)> = edges.windows(2).map(|w| (w[0], w[1])).collect();
    let counts = pieces
        .par_iter()
        .map(|&(a, b)| counting_function(v, dim, 0.5 * (a + b), cfg).map(|c| c.count))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(pieces
        .iter()
        .zip(counts)
        .map(|(&(a, b), n)| n as f64 * (b.powf(gamma) - a.powf(gamma)))
        .sum())
}
