//! Orthonormal families on a one-dimensional grid: densities, kinetic
//! energy, Slater determinants, Sobolev quotients and Bessel-potential
//! densities.
//!
//! A family lives on the nodes xᵢ = −R + i·h, i = 0..=M+1, h = 2R/(M+1),
//! and vanishes at both boundary nodes. Inner products are Σ f g h.
//! Derivatives are forward differences over i = 0..=M, which is the
//! quadratic form of the Dirichlet Laplacian used by [`crate::spectrum`].

use std::f64::consts::PI;
use std::io::{Read, Write};

use rayon::prelude::*;
use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::{self, BoundKind, BoundReport, ConstantRequest, ConstantsError};
use crate::quadrature::{self, QuadratureError};

/// Gram tolerance ‖G − I‖_max every family satisfies.
pub const GRAM_TOLERANCE: f64 = 1e-10;
/// Pivot norm below which Gram–Schmidt reports rank deficiency.
pub const RANK_TOLERANCE: f64 = 1e-12;
/// Largest tensor grid a Slater check will allocate (64³ values).
pub const MAX_SLATER_POINTS: usize = 64 * 64 * 64;
/// Absolute quadrature tolerance for Sobolev quotients; kept above the
/// noise of the finite-difference derivative.
pub const SOBOLEV_TOLERANCE: f64 = 1e-10;
/// Zero padding on each side of a Bessel transform, in units of 1/m.
pub const BESSEL_PADDING: f64 = 20.0;

#[derive(Debug, Error)]
pub enum KineticError {
    #[error("grid needs R > 0 and at least one interior point (R = {radius}, M = {interior})")]
    InvalidGrid { radius: f64, interior: usize },
    #[error("function {index} has {len} samples, grid has {expected}")]
    LengthMismatch {
        index: usize,
        len: usize,
        expected: usize,
    },
    #[error("function {index} is linearly dependent on the previous ones (pivot norm {norm:e})")]
    RankDeficient { index: usize, norm: f64 },
    #[error("family is empty")]
    Empty,
    #[error("Slater checks support 2 or 3 particles, got {0}")]
    UnsupportedParticleCount(usize),
    #[error("tensor grid {points}^{particles} exceeds {MAX_SLATER_POINTS} values")]
    GridTooLarge { points: usize, particles: usize },
    #[error("mass must be positive and finite, got {0}")]
    InvalidMass(f64),
    #[error("padding radius {requested} is smaller than the current radius {current}")]
    InvalidPadding { requested: f64, current: f64 },
    #[error("function vanishes identically")]
    ZeroFunction,
    #[error("CSV: {0}")]
    Csv(String),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Constants(#[from] ConstantsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Uniform grid on [−R, R] with `interior` points strictly inside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1d {
    pub radius: f64,
    pub interior: usize,
}

impl Grid1d {
    pub fn new(radius: f64, interior: usize) -> Result<Self, KineticError> {
        if !(radius > 0.0 && radius.is_finite()) || interior == 0 {
            return Err(KineticError::InvalidGrid { radius, interior });
        }
        Ok(Grid1d { radius, interior })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.radius / (self.interior + 1) as f64
    }

    /// Number of nodes including both boundaries.
    pub fn len(&self) -> usize {
        self.interior + 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, i: usize) -> f64 {
        -self.radius + i as f64 * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.node(i)).collect()
    }
}

/// Functions orthonormal under Σ f g h, vanishing at the grid boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthonormalFamily {
    grid: Grid1d,
    functions: Vec<Vec<f64>>,
    label: String,
}

fn dot(a: &[f64], b: &[f64], h: f64) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * h
}

impl OrthonormalFamily {
    /// Modified Gram–Schmidt with one reorthogonalization pass. Boundary
    /// samples are set to zero first.
    pub fn orthonormalize(
        grid: Grid1d,
        raw: Vec<Vec<f64>>,
        label: impl Into<String>,
    ) -> Result<Self, KineticError> {
        if raw.is_empty() {
            return Err(KineticError::Empty);
        }
        let h = grid.spacing();
        let mut out: Vec<Vec<f64>> = Vec::with_capacity(raw.len());
        for (index, mut f) in raw.into_iter().enumerate() {
            if f.len() != grid.len() {
                return Err(KineticError::LengthMismatch {
                    index,
                    len: f.len(),
                    expected: grid.len(),
                });
            }
            f[0] = 0.0;
            *f.last_mut().unwrap() = 0.0;
            for _ in 0..2 {
                for q in &out {
                    let c = dot(&f, q, h);
                    f.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
                }
            }
            let norm = dot(&f, &f, h).sqrt();
            if !(norm >= RANK_TOLERANCE) {
                return Err(KineticError::RankDeficient { index, norm });
            }
            f.iter_mut().for_each(|x| *x /= norm);
            out.push(f);
        }
        Ok(OrthonormalFamily {
            grid,
            functions: out,
            label: label.into(),
        })
    }

    /// The first `count` Dirichlet sine modes √(2/L)·sin(kπ(x+R)/L), L = 2R.
    pub fn box_modes(grid: Grid1d, count: usize) -> Result<Self, KineticError> {
        let l = 2.0 * grid.radius;
        let raw = (1..=count)
            .map(|k| {
                (0..grid.len())
                    .map(|i| {
                        (2.0 / l).sqrt()
                            * (k as f64 * PI * i as f64 / (grid.interior + 1) as f64).sin()
                    })
                    .collect()
            })
            .collect();
        Self::orthonormalize(grid, raw, format!("box_modes(N={count})"))
    }

    /// Gaussians exp(−((x−c)/w)²) at the given centers, orthonormalized in order.
    pub fn gaussians(grid: Grid1d, centers: &[f64], width: f64) -> Result<Self, KineticError> {
        let raw = centers
            .iter()
            .map(|&c| {
                grid.nodes()
                    .iter()
                    .map(|&x| (-((x - c) / width).powi(2)).exp())
                    .collect()
            })
            .collect();
        Self::orthonormalize(
            grid,
            raw,
            format!("gaussians(N={}, width={width})", centers.len()),
        )
    }

    /// Reads columns `x,f1,...,fN`. The x column must be a uniform grid
    /// symmetric about 0 including both boundary nodes.
    pub fn from_csv<R: Read>(input: R, label: impl Into<String>) -> Result<Self, KineticError> {
        let mut reader = csv::Reader::from_reader(input);
        let mut xs = Vec::new();
        let mut columns: Vec<Vec<f64>> = Vec::new();
        for (row, record) in reader.records().enumerate() {
            let record = record.map_err(|e| KineticError::Csv(e.to_string()))?;
            let values = record
                .iter()
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| KineticError::Csv(format!("row {}: {e}", row + 2)))?;
            if values.len() < 2 {
                return Err(KineticError::Csv(format!(
                    "row {}: need x and at least one function",
                    row + 2
                )));
            }
            if columns.is_empty() {
                columns = vec![Vec::new(); values.len() - 1];
            } else if columns.len() != values.len() - 1 {
                return Err(KineticError::Csv(format!(
                    "row {}: inconsistent column count",
                    row + 2
                )));
            }
            xs.push(values[0]);
            for (col, v) in columns.iter_mut().zip(&values[1..]) {
                col.push(*v);
            }
        }
        if xs.len() < 3 {
            return Err(KineticError::Csv("need at least three grid rows".into()));
        }
        let radius = -xs[0];
        let grid = Grid1d::new(radius, xs.len() - 2)?;
        for (i, &x) in xs.iter().enumerate() {
            if (x - grid.node(i)).abs() > 1e-9 * radius {
                return Err(KineticError::Csv(format!(
                    "x column is not a uniform grid on [-{radius}, {radius}] at row {}",
                    i + 2
                )));
            }
        }
        Self::orthonormalize(grid, columns, label)
    }

    /// Writes columns `x,f1,...,fN`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), KineticError> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["x".to_string()];
        header.extend((1..=self.len()).map(|j| format!("f{j}")));
        w.write_record(&header)
            .map_err(|e| KineticError::Csv(e.to_string()))?;
        for (i, x) in self.grid.nodes().into_iter().enumerate() {
            let mut row = vec![x.to_string()];
            row.extend(self.functions.iter().map(|f| f[i].to_string()));
            w.write_record(&row)
                .map_err(|e| KineticError::Csv(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn grid(&self) -> Grid1d {
        self.grid
    }

    pub fn functions(&self) -> &[Vec<f64>] {
        &self.functions
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// max |⟨f_j, f_k⟩ − δ_jk|
    pub fn gram_defect(&self) -> f64 {
        let h = self.grid.spacing();
        let mut worst: f64 = 0.0;
        for (j, a) in self.functions.iter().enumerate() {
            for (k, b) in self.functions.iter().enumerate().skip(j) {
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((dot(a, b, h) - target).abs());
            }
        }
        worst
    }

    /// Same functions on [−R′, R′] with the spacing unchanged. R′ is rounded
    /// down to a whole number of extra cells.
    pub fn zero_pad(&self, radius: f64) -> Result<Self, KineticError> {
        let h = self.grid.spacing();
        if radius < self.grid.radius {
            return Err(KineticError::InvalidPadding {
                requested: radius,
                current: self.grid.radius,
            });
        }
        let extra = ((radius - self.grid.radius) / h + 1e-9).floor() as usize;
        let grid = Grid1d {
            radius: self.grid.radius + extra as f64 * h,
            interior: self.grid.interior + 2 * extra,
        };
        let functions = self
            .functions
            .iter()
            .map(|f| {
                let mut g = vec![0.0; extra];
                g.extend_from_slice(f);
                g.extend(std::iter::repeat(0.0).take(extra));
                g
            })
            .collect();
        Ok(OrthonormalFamily {
            grid,
            functions,
            label: self.label.clone(),
        })
    }
}

/// Sampled density on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityProfile {
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
    pub spacing: f64,
    /// Number of functions summed.
    pub particles: usize,
}

impl DensityProfile {
    /// Σ ρ h
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.spacing
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().fold(0.0, |m, &v| m.max(v))
    }

    /// Σ ρ^p h
    pub fn power_integral(&self, p: f64) -> f64 {
        self.values.iter().map(|v| v.powf(p)).sum::<f64>() * self.spacing
    }

    /// max |ρ(x) − ρ(y)| / |x − y|^{1/2} over all node pairs.
    pub fn holder_quotient(&self) -> f64 {
        let n = self.values.len();
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut worst: f64 = 0.0;
                for j in (i + 1)..n {
                    let q = (self.values[i] - self.values[j]).abs()
                        / (self.nodes[j] - self.nodes[i]).abs().sqrt();
                    worst = worst.max(q);
                }
                worst
            })
            .reduce(|| 0.0, f64::max)
    }

    /// Writes columns `x,rho`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), KineticError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "rho"])
            .map_err(|e| KineticError::Csv(e.to_string()))?;
        for (x, r) in self.nodes.iter().zip(&self.values) {
            w.write_record([x.to_string(), r.to_string()])
                .map_err(|e| KineticError::Csv(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// ρ(x) = Σ_j |f_j(x)|²
pub fn density(fam: &OrthonormalFamily) -> DensityProfile {
    let grid = fam.grid();
    let mut values = vec![0.0; grid.len()];
    for f in fam.functions() {
        values.iter_mut().zip(f).for_each(|(r, v)| *r += v * v);
    }
    DensityProfile {
        nodes: grid.nodes(),
        values,
        spacing: grid.spacing(),
        particles: fam.len(),
    }
}

fn forward_difference_energy(f: &[f64], h: f64) -> f64 {
    f.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum::<f64>() / h
}

/// Σ_j Σ_i ((f_j(x_{i+1}) − f_j(x_i))/h)² h
pub fn kinetic_energy(fam: &OrthonormalFamily) -> f64 {
    let h = fam.grid().spacing();
    fam.functions()
        .iter()
        .map(|f| forward_difference_energy(f, h))
        .sum()
}

/// Σ∫|f_j′|² against K₁·∫ρ³, with K₁ derived from the requested L_{1,1}.
pub fn kinetic_bound_report(
    fam: &OrthonormalFamily,
    request: ConstantRequest,
) -> Result<BoundReport, KineticError> {
    let l11 = constants::resolve_constant(request, 1.0, 1)?;
    let k1 = constants::kn_constant(1, &l11)?;
    let lhs = kinetic_energy(fam);
    let rhs = k1 * density(fam).power_integral(3.0);
    let budget = 1e-10 * lhs.max(rhs);
    Ok(BoundReport::new(
        fam.label().to_string(),
        BoundKind::KineticEnergy,
        lhs,
        rhs,
        l11,
        budget,
    ))
}

/// Φ = (N!)^{−1/2} det f_j(x_k) sampled on the full N-fold tensor grid,
/// with x₁ varying slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct SlaterTensor {
    pub points: usize,
    pub particles: usize,
    pub values: Vec<f64>,
}

/// Builds Φ from 2 or 3 sampled functions of equal length. The functions
/// need not be orthonormal.
pub fn slater_tensor(functions: &[Vec<f64>]) -> Result<SlaterTensor, KineticError> {
    let particles = functions.len();
    if !(2..=3).contains(&particles) {
        return Err(KineticError::UnsupportedParticleCount(particles));
    }
    let points = functions[0].len();
    for (index, f) in functions.iter().enumerate() {
        if f.len() != points {
            return Err(KineticError::LengthMismatch {
                index,
                len: f.len(),
                expected: points,
            });
        }
    }
    if (points as f64).powi(particles as i32) > MAX_SLATER_POINTS as f64 {
        return Err(KineticError::GridTooLarge { points, particles });
    }
    let f = functions;
    let values = if particles == 2 {
        let norm = 0.5f64.sqrt();
        let mut v = Vec::with_capacity(points * points);
        for a in 0..points {
            for b in 0..points {
                v.push(norm * (f[0][a] * f[1][b] - f[1][a] * f[0][b]));
            }
        }
        v
    } else {
        let norm = (1.0f64 / 6.0).sqrt();
        let mut v = Vec::with_capacity(points * points * points);
        for a in 0..points {
            for b in 0..points {
                for c in 0..points {
                    let det = f[0][a] * (f[1][b] * f[2][c] - f[2][b] * f[1][c])
                        - f[1][a] * (f[0][b] * f[2][c] - f[2][b] * f[0][c])
                        + f[2][a] * (f[0][b] * f[1][c] - f[1][b] * f[0][c]);
                    v.push(norm * det);
                }
            }
        }
        v
    };
    Ok(SlaterTensor {
        points,
        particles,
        values,
    })
}

impl SlaterTensor {
    fn stride(&self, axis: usize) -> usize {
        self.points.pow((self.particles - 1 - axis) as u32)
    }

    /// ρ_Φ(x) = N Σ_{x₂..x_N} |Φ(x, x₂, …)|² h^{N−1}
    pub fn one_body_density(&self, h: f64) -> Vec<f64> {
        let block = self.stride(0);
        let weight = self.particles as f64 * h.powi(self.particles as i32 - 1);
        self.values
            .chunks(block)
            .map(|c| weight * c.iter().map(|v| v * v).sum::<f64>())
            .collect()
    }

    /// Σ_k Σ |(Φ(…x_k+h…) − Φ)/h|² h^N with forward differences in each coordinate.
    pub fn kinetic_energy(&self, h: f64) -> f64 {
        let mut total = 0.0;
        for axis in 0..self.particles {
            let stride = self.stride(axis);
            for (idx, v) in self.values.iter().enumerate() {
                if (idx / stride) % self.points + 1 < self.points {
                    total += (self.values[idx + stride] - v).powi(2);
                }
            }
        }
        total * h.powi(self.particles as i32 - 2)
    }
}

/// Discrepancies between the Slater-determinant quantities and the family's.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlaterCheck {
    /// max_x |ρ_Φ(x) − ρ(x)|
    pub density: f64,
    /// |Σ|∇Φ|² − Σ‖f_j′‖²|
    pub kinetic: f64,
}

pub fn slater_reduction_check(fam: &OrthonormalFamily) -> Result<SlaterCheck, KineticError> {
    let h = fam.grid().spacing();
    let phi = slater_tensor(fam.functions())?;
    let rho = density(fam);
    let density_gap = phi
        .one_body_density(h)
        .iter()
        .zip(&rho.values)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let kinetic_gap = (phi.kinetic_energy(h) - kinetic_energy(fam)).abs();
    Ok(SlaterCheck {
        density: density_gap,
        kinetic: kinetic_gap,
    })
}

/// ‖∇f‖₂ / ‖f‖₆ for a radial profile f(r) on (0, R] in three dimensions.
///
/// f′ is a five-point central difference with step 10⁻³·r; both integrals
/// use adaptive quadrature on geometrically growing intervals.
pub fn sobolev_quotient_radial3<F>(f: F, radius: f64) -> Result<f64, KineticError>
where
    F: Fn(f64) -> f64,
{
    let mut breaks = vec![0.0];
    let mut r = 1e-3_f64.min(radius / 2.0);
    while r < radius {
        breaks.push(r);
        r *= 2.0;
    }
    breaks.push(radius);
    let derivative = |r: f64| {
        let d = 1e-3 * r;
        (8.0 * (f(r + d) - f(r - d)) - (f(r + 2.0 * d) - f(r - 2.0 * d))) / (12.0 * d)
    };
    let grad = quadrature::integrate_with_breaks(
        |r| {
            if r > 0.0 {
                4.0 * PI * r * r * derivative(r).powi(2)
            } else {
                0.0
            }
        },
        &breaks,
        SOBOLEV_TOLERANCE,
    )?;
    let sixth = quadrature::integrate_with_breaks(
        |r| {
            if r > 0.0 {
                4.0 * PI * r * r * f(r).powi(6)
            } else {
                0.0
            }
        },
        &breaks,
        SOBOLEV_TOLERANCE,
    )?;
    if sixth.value <= 0.0 {
        return Err(KineticError::ZeroFunction);
    }
    Ok(grad.value.sqrt() / sixth.value.powf(1.0 / 6.0))
}

/// Applies (p² + m²)^{−1/2} to samples with spacing `h` after padding
/// `pad` zeros on each side. Returns the padded result.
pub fn bessel_transform(
    f: &[f64],
    h: f64,
    mass: f64,
    pad: usize,
) -> Result<Vec<f64>, KineticError> {
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(KineticError::InvalidMass(mass));
    }
    let len = f.len() + 2 * pad;
    let mut buf: Vec<Complex<f64>> = vec![Complex::new(0.0, 0.0); len];
    for (slot, &v) in buf[pad..pad + f.len()].iter_mut().zip(f) {
        *slot = Complex::new(v, 0.0);
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(len).process(&mut buf);
    let period = len as f64 * h;
    for (k, c) in buf.iter_mut().enumerate() {
        let signed = if k <= len / 2 {
            k as f64
        } else {
            k as f64 - len as f64
        };
        let p = 2.0 * PI * signed / period;
        *c *= 1.0 / (p * p + mass * mass).sqrt();
    }
    planner.plan_fft_inverse(len).process(&mut buf);
    Ok(buf.iter().map(|c| c.re / len as f64).collect())
}

/// ρ = Σ_j |u_j|² with u_j = (−d²/dx² + m²)^{−1/2} f_j, on the grid padded
/// by 20/m on each side so wrap-around is negligible.
pub fn bessel_density_1d(
    fam: &OrthonormalFamily,
    mass: f64,
) -> Result<DensityProfile, KineticError> {
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(KineticError::InvalidMass(mass));
    }
    let grid = fam.grid();
    let h = grid.spacing();
    let pad = (BESSEL_PADDING / (mass * h)).ceil() as usize;
    let transformed = fam
        .functions()
        .par_iter()
        .map(|f| bessel_transform(f, h, mass, pad))
        .collect::<Result<Vec<_>, _>>()?;
    let len = grid.len() + 2 * pad;
    let mut values = vec![0.0; len];
    for u in &transformed {
        values.iter_mut().zip(u).for_each(|(r, v)| *r += v * v);
    }
    let nodes = (0..len)
        .map(|i| -grid.radius + (i as f64 - pad as f64) * h)
        .collect();
    Ok(DensityProfile {
        nodes,
        values,
        spacing: h,
        particles: fam.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::Verdict;

    fn grid(r: f64, m: usize) -> Grid1d {
        Grid1d::new(r, m).unwrap()
    }

    #[test]
    fn grid_layout() {
        let g = grid(1.0, 3);
        assert_eq!(g.nodes(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!(Grid1d::new(0.0, 3).is_err());
        assert!(Grid1d::new(1.0, 0).is_err());
    }

    #[test]
    fn orthonormal_input_is_unchanged() {
        let fam = OrthonormalFamily::box_modes(grid(1.0, 199), 5).unwrap();
        let again = OrthonormalFamily::orthonormalize(fam.grid(), fam.functions().to_vec(), "copy")
            .unwrap();
        for (a, b) in fam.functions().iter().zip(again.functions()) {
            assert!(a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12));
        }
    }

    #[test]
    fn dependent_input_is_rejected() {
        let g = grid(3.0, 99);
        let base: Vec<f64> = g.nodes().iter().map(|x| (-x * x).exp()).collect();
        let doubled: Vec<f64> = base.iter().map(|x| 2.0 * x).collect();
        let err = OrthonormalFamily::orthonormalize(g, vec![base, doubled], "dup");
        assert!(matches!(
            err,
            Err(KineticError::RankDeficient { index: 1, .. })
        ));
        assert!(matches!(
            OrthonormalFamily::orthonormalize(g, vec![vec![0.0; 3]], "x"),
            Err(KineticError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn overlapping_gaussians_become_orthonormal() {
        let fam = OrthonormalFamily::gaussians(grid(6.0, 599), &[-0.3, 0.0, 0.4], 1.0).unwrap();
        assert!(fam.gram_defect() <= GRAM_TOLERANCE);
        for f in fam.functions() {
            assert_eq!((f[0], *f.last().unwrap()), (0.0, 0.0));
        }
    }

    #[test]
    fn density_integrates_to_particle_number() {
        let g = grid(6.0, 599);
        let one = OrthonormalFamily::gaussians(g, &[0.0], 1.0).unwrap();
        let rho = density(&one);
        assert!((rho.integral() - 1.0).abs() < 1e-12);
        for (r, f) in rho.values.iter().zip(&one.functions()[0]) {
            assert_eq!(*r, f * f);
        }
        let three = OrthonormalFamily::gaussians(g, &[-1.0, 0.0, 1.0], 0.8).unwrap();
        assert!((density(&three).integral() - 3.0).abs() < 1e-8);
        assert!(density(&three).values.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn box_mode_density_closed_form() {
        // Σ_{k≤N} sin²(kθ) = N/2 + 1/4 − sin((2N+1)θ)/(4 sin θ)
        let g = grid(1.0, 399);
        let n = 6;
        let rho = density(&OrthonormalFamily::box_modes(g, n).unwrap());
        for (i, &value) in rho.values.iter().enumerate().skip(1).take(g.interior) {
            let theta = PI * i as f64 / (g.interior + 1) as f64;
            let sum =
                n as f64 / 2.0 + 0.25 - ((2 * n + 1) as f64 * theta).sin() / (4.0 * theta.sin());
            assert!((value - sum).abs() < 1e-12, "{i}");
        }
        assert!((rho.integral() - n as f64).abs() < 1e-10);
    }

    #[test]
    fn sine_kinetic_energy() {
        for m in [99, 199, 399] {
            let g = grid(1.0, m);
            let t = kinetic_energy(&OrthonormalFamily::box_modes(g, 1).unwrap());
            let exact = PI * PI / 4.0;
            let h = g.spacing();
            assert!((t - exact).abs() < exact * h * h, "{m}: {t}");
        }
    }

    #[test]
    fn kinetic_energy_scales_quadratically() {
        let s = 2.0;
        let coarse = grid(10.0, 1999);
        let fine = Grid1d::new(10.0 / s, 1999).unwrap();
        let raw = |g: Grid1d, scale: f64| -> Vec<Vec<f64>> {
            vec![g
                .nodes()
                .iter()
                .map(|&x| (-(scale * x).powi(2)).exp())
                .collect()]
        };
        let t1 = kinetic_energy(
            &OrthonormalFamily::orthonormalize(coarse, raw(coarse, 1.0), "g").unwrap(),
        );
        let t2 =
            kinetic_energy(&OrthonormalFamily::orthonormalize(fine, raw(fine, s), "g").unwrap());
        assert!((t2 / t1 - s * s).abs() < 1e-10);
        let exact = 1.0;
        assert!((t1 - exact).abs() < 1e-3);
    }

    #[test]
    fn box_modes_satisfy_kinetic_inequality() {
        let mut previous = f64::INFINITY;
        for n in [8, 16, 32] {
            let fam = OrthonormalFamily::box_modes(grid(1.0, 3999), n).unwrap();
            let r = kinetic_bound_report(&fam, ConstantRequest::Semiclassical).unwrap();
            assert!(r.ratio >= 1.0 && r.ratio <= 1.2, "{n}: {}", r.ratio);
            assert!(r.ratio < previous);
            assert_eq!(r.verdict, Verdict::Satisfied);
            previous = r.ratio;
        }
    }

    #[test]
    fn single_gaussian_with_conjectured_constant() {
        let fam = OrthonormalFamily::gaussians(grid(8.0, 1599), &[0.0], 1.0).unwrap();
        let r = kinetic_bound_report(&fam, ConstantRequest::Conjectured).unwrap();
        assert!(r.ratio > 1.05, "{}", r.ratio);
        assert_eq!(r.constant.source, constants::ConstantSource::Conjectured);
        assert!(matches!(
            kinetic_bound_report(&fam, ConstantRequest::SharpKnown),
            Err(KineticError::Constants(
                ConstantsError::MissingConstant { .. }
            ))
        ));
    }

    #[test]
    fn zero_padding_preserves_report() {
        let fam = OrthonormalFamily::gaussians(grid(5.0, 499), &[-0.5, 0.5], 0.7).unwrap();
        let padded = fam.zero_pad(9.0).unwrap();
        assert!(
            padded.grid().radius > 8.9
                && (padded.grid().spacing() - fam.grid().spacing()).abs() < 1e-15
        );
        let a = kinetic_bound_report(&fam, ConstantRequest::Semiclassical).unwrap();
        let b = kinetic_bound_report(&padded, ConstantRequest::Semiclassical).unwrap();
        assert!((a.lhs - b.lhs).abs() < 1e-10 && (a.rhs - b.rhs).abs() < 1e-10);
        assert!(fam.zero_pad(1.0).is_err());
    }

    #[test]
    fn slater_identities() {
        let fam = OrthonormalFamily::box_modes(grid(1.0, 46), 2).unwrap();
        let check = slater_reduction_check(&fam).unwrap();
        assert!(check.density < 1e-8 && check.kinetic < 1e-8, "{check:?}");
        let fam3 = OrthonormalFamily::gaussians(grid(3.0, 40), &[-0.5, 0.0, 0.7], 0.8).unwrap();
        let check = slater_reduction_check(&fam3).unwrap();
        assert!(check.density < 1e-8 && check.kinetic < 1e-8, "{check:?}");
    }

    #[test]
    fn slater_antisymmetry() {
        let fam = OrthonormalFamily::box_modes(grid(1.0, 46), 2).unwrap();
        let f = fam.functions();
        let phi = slater_tensor(f).unwrap();
        let swapped = slater_tensor(&[f[1].clone(), f[0].clone()]).unwrap();
        assert!(phi
            .values
            .iter()
            .zip(&swapped.values)
            .all(|(a, b)| *a == -*b));
        let h = fam.grid().spacing();
        assert_eq!(phi.one_body_density(h), swapped.one_body_density(h));
        assert_eq!(phi.kinetic_energy(h), swapped.kinetic_energy(h));
        let degenerate = slater_tensor(&[f[0].clone(), f[0].clone()]).unwrap();
        assert!(degenerate.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn slater_guards() {
        let big = OrthonormalFamily::box_modes(grid(1.0, 70), 3).unwrap();
        assert!(matches!(
            slater_reduction_check(&big),
            Err(KineticError::GridTooLarge { .. })
        ));
        let one = OrthonormalFamily::box_modes(grid(1.0, 10), 1).unwrap();
        assert!(matches!(
            slater_reduction_check(&one),
            Err(KineticError::UnsupportedParticleCount(1))
        ));
    }

    fn lorentz_profile(r: f64) -> f64 {
        (1.0 + r * r).powf(-0.5)
    }

    #[test]
    fn sobolev_quotient_invariances() {
        let gauss = |r: f64| (-r * r).exp();
        let base = sobolev_quotient_radial3(gauss, 40.0).unwrap();
        for s in [0.5, 2.0] {
            let q = sobolev_quotient_radial3(|r| gauss(s * r), 40.0).unwrap();
            assert!((q - base).abs() < 1e-6, "{s}: {q} vs {base}");
        }
        let q = sobolev_quotient_radial3(|r| -3.0 * gauss(r), 40.0).unwrap();
        assert!((q - base).abs() < 1e-9);
        assert!(matches!(
            sobolev_quotient_radial3(|_| 0.0, 10.0),
            Err(KineticError::ZeroFunction)
        ));
    }

    #[test]
    fn sobolev_profile_is_a_local_minimum() {
        let radius = 1e6;
        let base = sobolev_quotient_radial3(lorentz_profile, radius).unwrap();
        let bump = |r: f64| r * r * (-r * r).exp();
        for eps in [-0.1, -0.05, 0.05, 0.1] {
            let q =
                sobolev_quotient_radial3(|r| lorentz_profile(r) + eps * bump(r), radius).unwrap();
            assert!(q > base, "eps {eps}: {q} vs {base}");
        }
        for a in [0.4, 0.45, 0.55, 0.6] {
            let q = sobolev_quotient_radial3(|r: f64| (1.0 + r * r).powf(-a), radius).unwrap();
            assert!(q > base, "a {a}: {q} vs {base}");
        }
    }

    #[test]
    fn bessel_multiplier_norm_bound() {
        let fam = OrthonormalFamily::gaussians(grid(6.0, 599), &[0.0], 0.5).unwrap();
        let h = fam.grid().spacing();
        for m in [0.5, 1.0, 4.0] {
            let u = bessel_transform(&fam.functions()[0], h, m, 400).unwrap();
            let norm = (u.iter().map(|x| x * x).sum::<f64>() * h).sqrt();
            assert!(norm <= 1.0 / m, "{m}: {norm}");
        }
        assert!(bessel_density_1d(&fam, 0.0).is_err());
    }

    #[test]
    fn bessel_density_decays_like_inverse_mass_squared() {
        let fam = OrthonormalFamily::gaussians(grid(6.0, 599), &[0.0], 1.0).unwrap();
        let sup = |m: f64| bessel_density_1d(&fam, m).unwrap().sup();
        let slope = (sup(40.0) / sup(20.0)).ln() / 2f64.ln();
        assert!((slope + 2.0).abs() < 0.05, "{slope}");
    }

    #[test]
    fn bessel_density_bounded_in_particle_number() {
        let g = grid(1.0, 511);
        let values: Vec<f64> = [1, 2, 4, 8, 16, 32, 64]
            .iter()
            .map(|&n| {
                bessel_density_1d(&OrthonormalFamily::box_modes(g, n).unwrap(), 1.0)
                    .unwrap()
                    .sup()
            })
            .collect();
        let at8 = values[3];
        assert!(values.iter().all(|&v| v <= 1.5 * at8), "{values:?}");
    }

    #[test]
    fn orthogonality_lowers_bessel_density() {
        let g = grid(1.0, 511);
        let modes = OrthonormalFamily::box_modes(g, 16).unwrap();
        let one = OrthonormalFamily::gaussians(g, &[0.0], 0.3).unwrap();
        let copies = OrthonormalFamily {
            functions: vec![one.functions()[0].clone(); 16],
            ..one
        };
        let ortho = bessel_density_1d(&modes, 1.0).unwrap().sup();
        let repeated = bessel_density_1d(&copies, 1.0).unwrap().sup();
        assert!(repeated >= 4.0 * ortho, "{repeated} vs {ortho}");
    }

    #[test]
    fn holder_quotient_of_smooth_density_is_finite() {
        let rho = bessel_density_1d(
            &OrthonormalFamily::box_modes(grid(1.0, 127), 4).unwrap(),
            1.0,
        )
        .unwrap();
        let q = rho.holder_quotient();
        assert!(q.is_finite() && q > 0.0);
    }

    #[test]
    fn csv_round_trip() {
        let fam = OrthonormalFamily::gaussians(grid(4.0, 79), &[-0.5, 0.5], 0.9).unwrap();
        let mut buf = Vec::new();
        fam.write_csv(&mut buf).unwrap();
        let back = OrthonormalFamily::from_csv(buf.as_slice(), fam.label()).unwrap();
        assert_eq!(back.grid().interior, fam.grid().interior);
        for (a, b) in fam.functions().iter().zip(back.functions()) {
            assert!(a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12));
        }
        assert!(OrthonormalFamily::from_csv("x,f1\n0,1\n0.3,1\n1,0\n".as_bytes(), "bad").is_err());
        let mut out = Vec::new();
        density(&fam).write_csv(&mut out).unwrap();
        assert!(String::from_utf8(out).unwrap().starts_with("x,rho\n"));
    }
}
