//! Potentials on ℝⁿ (n = 1, 2, 3) and the moments ∫ V₋^{γ+n/2}.
//!
//! Every potential carries an explicit truncation radius `R`; it is treated as
//! zero for |x| > R. In one dimension the evaluation coordinate is the signed
//! position x; for n = 2, 3 it is the radius r and only radial potentials
//! exist.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadrature::{self, QuadratureError, DEFAULT_TOLERANCE};
use crate::validity::{check_gamma, InvalidGamma};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PotentialError {
    #[error("dimension must be 1, 2 or 3, got {0}")]
    UnsupportedDimension(u32),
    #[error("truncation radius must be finite and positive, got {0}")]
    InvalidRadius(f64),
    #[error("invalid parameter for {family}: {reason}")]
    InvalidParameter {
        family: &'static str,
        reason: String,
    },
    #[error("potentials in dimension {0} must be radial")]
    NotRadial(u32),
    #[error("dimension mismatch: potential has n = {potential}, requested n = {requested}")]
    DimensionMismatch { potential: u32, requested: u32 },
    #[error(transparent)]
    InvalidGamma(#[from] InvalidGamma),
    #[error("integrand diverges: {0}")]
    NonIntegrable(QuadratureError),
}

/// The analytic form of a potential, independent of dimension and cutoff.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params")]
pub enum Shape {
    /// −depth on |x| < half_width.
    SquareWell {
        depth: f64,
        half_width: f64,
    },
    /// −λ(λ+1) sech²(|x|).
    PoschlTeller {
        lambda: f64,
    },
    /// −depth · exp(−|x|²/width²).
    GaussianWell {
        depth: f64,
        width: f64,
    },
    /// min(ω²|x|² − depth, 0): an inverted parabolic cap of compact support.
    HarmonicTruncated {
        omega: f64,
        depth: f64,
    },
    /// λ · base(x).
    Scaled {
        lambda: f64,
        base: Box<Shape>,
    },
    Sum {
        terms: Vec<Shape>,
    },
    /// Piecewise-linear interpolant through (nodes, values); zero outside the nodes.
    Tabulated {
        nodes: Vec<f64>,
        values: Vec<f64>,
    },
}

impl Shape {
    pub fn family_name(&self) -> &'static str {
        match self {
            Shape::SquareWell { .. } => "SquareWell",
            Shape::PoschlTeller { .. } => "PoschlTeller",
            Shape::GaussianWell { .. } => "GaussianWell",
            Shape::HarmonicTruncated { .. } => "HarmonicTruncated",
            Shape::Scaled { .. } => "Scaled",
            Shape::Sum { .. } => "Sum",
            Shape::Tabulated { .. } => "Tabulated",
        }
    }

    /// Evaluate at signed position (n = 1) or radius (n ≥ 2), ignoring truncation.
    pub fn eval(&self, t: f64) -> f64 {
        let r = t.abs();
        match self {
            Shape::SquareWell { depth, half_width } => {
                if r < *half_width {
                    -depth
                } else if r == *half_width {
                    -0.5 * depth
                } else {
                    0.0
                }
            }
            Shape::PoschlTeller { lambda } => {
                let c = r.cosh();
                -lambda * (lambda + 1.0) / (c * c)
            }
            Shape::GaussianWell { depth, width } => -depth * (-(r / width).powi(2)).exp(),
            Shape::HarmonicTruncated { omega, depth } => (omega * omega * r * r - depth).min(0.0),
            Shape::Scaled { lambda, base } => {
                if *lambda == 0.0 {
                    0.0
                } else {
                    lambda * base.eval(t)
                }
            }
            Shape::Sum { terms } => terms.iter().map(|s| s.eval(t)).sum(),
            Shape::Tabulated { nodes, values } => interpolate(nodes, values, t),
        }
    }

    fn validate(&self, dim: u32) -> Result<(), PotentialError> {
        let bad = |family, reason: &str| {
            Err(PotentialError::InvalidParameter {
                family,
                reason: reason.to_string(),
            })
        };
        match self {
            Shape::SquareWell { depth, half_width } => {
                if !depth.is_finite() {
                    return bad("SquareWell", "depth must be finite");
                }
                if !(half_width.is_finite() && *half_width > 0.0) {
                    return bad("SquareWell", "half_width must be positive");
                }
            }
            Shape::PoschlTeller { lambda } => {
                if !lambda.is_finite() {
                    return bad("PoschlTeller", "lambda must be finite");
                }
            }
            Shape::GaussianWell { depth, width } => {
                if !depth.is_finite() {
                    return bad("GaussianWell", "depth must be finite");
                }
                if !(width.is_finite() && *width > 0.0) {
                    return bad("GaussianWell", "width must be positive");
                }
            }
            Shape::HarmonicTruncated { omega, depth } => {
                if !(omega.is_finite() && *omega > 0.0) {
                    return bad("HarmonicTruncated", "omega must be positive");
                }
                if !(depth.is_finite() && *depth >= 0.0) {
                    return bad("HarmonicTruncated", "depth must be non-negative");
                }
            }
            Shape::Scaled { lambda, base } => {
                if !lambda.is_finite() {
                    return bad("Scaled", "lambda must be finite");
                }
                base.validate(dim)?;
            }
            Shape::Sum { terms } => {
                if terms.is_empty() {
                    return bad("Sum", "at least one term is required");
                }
                for term in terms {
                    term.validate(dim)?;
                }
            }
            Shape::Tabulated { nodes, values } => {
                if nodes.len() < 2 || nodes.len() != values.len() {
                    return bad(
                        "Tabulated",
                        "need at least two nodes and one value per node",
                    );
                }
                if nodes.iter().chain(values).any(|v| !v.is_finite()) {
                    return bad("Tabulated", "nodes and values must be finite");
                }
                if nodes.windows(2).any(|w| w[1] <= w[0]) {
                    return bad("Tabulated", "nodes must be strictly increasing");
                }
                if dim >= 2 && nodes[0] < 0.0 {
                    return Err(PotentialError::NotRadial(dim));
                }
            }
        }
        Ok(())
    }

    /// Radii (n ≥ 2) or signed positions (n = 1) where the value jumps.
    fn jumps(&self, out: &mut Vec<f64>) {
        match self {
            Shape::SquareWell { depth, half_width } if *depth != 0.0 => {
                out.extend([-half_width, *half_width]);
            }
            Shape::Scaled { lambda, base } if *lambda != 0.0 => base.jumps(out),
            Shape::Sum { terms } => terms.iter().for_each(|s| s.jumps(out)),
            Shape::Tabulated { nodes, values } => {
                if values[0] != 0.0 {
                    out.push(nodes[0]);
                }
                if values[values.len() - 1] != 0.0 {
                    out.push(nodes[nodes.len() - 1]);
                }
            }
            _ => {}
        }
    }

    /// Points where the value or its derivative is not smooth.
    fn kinks(&self, out: &mut Vec<f64>) {
        match self {
            Shape::SquareWell { half_width, .. } => out.extend([-half_width, *half_width]),
            Shape::HarmonicTruncated { omega, depth } => {
                let edge = depth.sqrt() / omega;
                out.extend([-edge, edge]);
            }
            Shape::Scaled { base, .. } => base.kinks(out),
            Shape::Sum { terms } => terms.iter().for_each(|s| s.kinks(out)),
            Shape::Tabulated { nodes, .. } => out.extend(nodes.iter().copied()),
            Shape::PoschlTeller { .. } | Shape::GaussianWell { .. } => {}
        }
    }

    /// Interval outside which V₋ certainly vanishes, or `None` when V₋ ≡ 0.
    fn negative_support(&self) -> Option<(f64, f64)> {
        match self {
            Shape::SquareWell { depth, half_width } => {
                (*depth > 0.0).then_some((-half_width, *half_width))
            }
            Shape::PoschlTeller { lambda } => {
                (lambda * (lambda + 1.0) > 0.0).then_some((f64::NEG_INFINITY, f64::INFINITY))
            }
            Shape::GaussianWell { depth, .. } => {
                (*depth > 0.0).then_some((f64::NEG_INFINITY, f64::INFINITY))
            }
            Shape::HarmonicTruncated { omega, depth } => {
                let edge = depth.sqrt() / omega;
                (*depth > 0.0).then_some((-edge, edge))
            }
            Shape::Scaled { lambda, base } => {
                if *lambda > 0.0 {
                    base.negative_support()
                } else if *lambda < 0.0 {
                    Some((f64::NEG_INFINITY, f64::INFINITY))
                } else {
                    None
                }
            }
            Shape::Sum { terms } => {
                // a sum is negative only where some term is
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for term in terms {
                    let (a, b) = match term.negative_support() {
                        Some(iv) => iv,
                        None => continue,
                    };
                    lo = lo.min(a);
                    hi = hi.max(b);
                }
                (lo < hi).then_some((lo, hi))
            }
            Shape::Tabulated { nodes, values } => values
                .iter()
                .any(|v| *v < 0.0)
                .then(|| (nodes[0], nodes[nodes.len() - 1])),
        }
    }
}

fn interpolate(nodes: &[f64], values: &[f64], t: f64) -> f64 {
    let last = nodes.len() - 1;
    if t < nodes[0] || t > nodes[last] {
        return 0.0;
    }
    let k = nodes.partition_point(|&x| x <= t).clamp(1, last);
    let (x0, x1) = (nodes[k - 1], nodes[k]);
    let w = (t - x0) / (x1 - x0);
    values[k - 1] * (1.0 - w) + values[k] * w
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::SquareWell { depth, half_width } => {
                write!(f, "SquareWell(depth={depth}, half_width={half_width})")
            }
            Shape::PoschlTeller { lambda } => write!(f, "PoschlTeller(lambda={lambda})"),
            Shape::GaussianWell { depth, width } => {
                write!(f, "GaussianWell(depth={depth}, width={width})")
            }
            Shape::HarmonicTruncated { omega, depth } => {
                write!(f, "HarmonicTruncated(omega={omega}, depth={depth})")
            }
            Shape::Scaled { lambda, base } => write!(f, "Scaled({lambda}, {base})"),
            Shape::Sum { terms } => {
                write!(f, "Sum[")?;
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, "]")
            }
            Shape::Tabulated { nodes, .. } => write!(f, "Tabulated({} nodes)", nodes.len()),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PotentialRepr {
    dim: u32,
    #[serde(flatten)]
    shape: Shape,
    truncation_radius: f64,
}

/// A validated potential with its dimension and truncation radius.
///
/// Serialized as `{"dim", "family", "params", "truncation_radius"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PotentialRepr", into = "PotentialRepr")]
pub struct Potential {
    dim: u32,
    shape: Shape,
    truncation_radius: f64,
}

impl TryFrom<PotentialRepr> for Potential {
    type Error = PotentialError;

    fn try_from(r: PotentialRepr) -> Result<Self, Self::Error> {
        Potential::new(r.dim, r.shape, r.truncation_radius)
    }
}

impl From<Potential> for PotentialRepr {
    fn from(p: Potential) -> Self {
        PotentialRepr {
            dim: p.dim,
            shape: p.shape,
            truncation_radius: p.truncation_radius,
        }
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.shape)
    }
}

/// Right-hand side moment ∫ V₋^{γ+n/2} dx with its quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhsIntegral {
    pub gamma: f64,
    pub dim: u32,
    pub value: f64,
    pub abs_error_estimate: f64,
}

impl Potential {
    pub fn new(dim: u32, shape: Shape, truncation_radius: f64) -> Result<Self, PotentialError> {
        if !(1..=3).contains(&dim) {
            return Err(PotentialError::UnsupportedDimension(dim));
        }
        if !(truncation_radius.is_finite() && truncation_radius > 0.0) {
            return Err(PotentialError::InvalidRadius(truncation_radius));
        }
        shape.validate(dim)?;
        Ok(Potential {
            dim,
            shape,
            truncation_radius,
        })
    }

    pub fn square_well(
        dim: u32,
        depth: f64,
        half_width: f64,
        radius: f64,
    ) -> Result<Self, PotentialError> {
        Self::new(dim, Shape::SquareWell { depth, half_width }, radius)
    }

    /// −λ(λ+1) sech²x, whose negative spectrum is exactly −(λ−k)², 0 ≤ k < λ.
    pub fn poschl_teller(dim: u32, lambda: f64, radius: f64) -> Result<Self, PotentialError> {
        Self::new(dim, Shape::PoschlTeller { lambda }, radius)
    }

    pub fn gaussian_well(
        dim: u32,
        depth: f64,
        width: f64,
        radius: f64,
    ) -> Result<Self, PotentialError> {
        Self::new(dim, Shape::GaussianWell { depth, width }, radius)
    }

    pub fn harmonic_truncated(
        dim: u32,
        omega: f64,
        depth: f64,
        radius: f64,
    ) -> Result<Self, PotentialError> {
        Self::new(dim, Shape::HarmonicTruncated { omega, depth }, radius)
    }

    pub fn tabulated(
        dim: u32,
        nodes: Vec<f64>,
        values: Vec<f64>,
        radius: f64,
    ) -> Result<Self, PotentialError> {
        Self::new(dim, Shape::Tabulated { nodes, values }, radius)
    }

    pub fn sum(dim: u32, terms: Vec<Shape>, radius: f64) -> Result<Self, PotentialError> {
        Self::new(dim, Shape::Sum { terms }, radius)
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn truncation_radius(&self) -> f64 {
        self.truncation_radius
    }

    pub fn family(&self) -> &'static str {
        self.shape.family_name()
    }

    /// True unless this is a one-dimensional table that is not mirror symmetric.
    pub fn is_radial(&self) -> bool {
        match (&self.shape, self.dim) {
            (Shape::Tabulated { nodes, values }, 1) => nodes.iter().zip(values).all(|(x, v)| {
                (interpolate(nodes, values, -x) - v).abs() <= 1e-14 * v.abs().max(1.0)
            }),
            _ => true,
        }
    }

    /// Same shape, different cutoff.
    pub fn with_truncation_radius(&self, radius: f64) -> Result<Self, PotentialError> {
        Self::new(self.dim, self.shape.clone(), radius)
    }

    /// V at a signed position (n = 1) or radius (n ≥ 2).
    pub fn value(&self, t: f64) -> f64 {
        if t.abs() > self.truncation_radius {
            0.0
        } else {
            self.shape.eval(t)
        }
    }

    /// V₋(t) = max{−V(t), 0}.
    pub fn negative_part(&self, t: f64) -> f64 {
        (-self.value(t)).max(0.0)
    }

    /// λ·V with exact pointwise semantics.
    pub fn scale(&self, lambda: f64) -> Potential {
        Potential {
            dim: self.dim,
            shape: Shape::Scaled {
                lambda,
                base: Box::new(self.shape.clone()),
            },
            truncation_radius: self.truncation_radius,
        }
    }

    fn clip(&self, mut pts: Vec<f64>, lo: f64, hi: f64) -> Vec<f64> {
        pts.retain(|p| *p > lo && *p < hi);
        pts.push(lo);
        pts.push(hi);
        pts.sort_by(|a, b| a.total_cmp(b));
        pts.dedup();
        pts
    }

    /// Sorted breakpoints covering the evaluation domain: [−R, R] for n = 1,
    /// [0, R] for n ≥ 2.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts = Vec::new();
        self.shape.kinks(&mut pts);
        let r = self.truncation_radius;
        if self.dim == 1 {
            pts.push(0.0);
            self.clip(pts, -r, r)
        } else {
            let pts = pts.into_iter().map(f64::abs).collect();
            self.clip(pts, 0.0, r)
        }
    }

    /// Interior points where V jumps, in evaluation coordinates.
    pub fn jumps(&self) -> Vec<f64> {
        let mut pts = Vec::new();
        self.shape.jumps(&mut pts);
        let r = self.truncation_radius;
        if self.dim >= 2 {
            pts = pts.into_iter().filter(|p| *p > 0.0).collect();
        }
        pts.retain(|p| p.abs() < r);
        pts.sort_by(|a, b| a.total_cmp(b));
        pts.dedup();
        pts
    }

    /// Interval (in evaluation coordinates, clipped to the cutoff) outside
    /// which V₋ vanishes; `None` when V₋ ≡ 0 is known from the parameters.
    pub fn negative_support(&self) -> Option<(f64, f64)> {
        let r = self.truncation_radius;
        let (lo, hi) = self.shape.negative_support()?;
        let (lo, hi) = if self.dim == 1 {
            (lo.max(-r), hi.min(r))
        } else {
            (0.0, lo.abs().max(hi.abs()).min(r))
        };
        (hi > lo).then_some((lo, hi))
    }

    /// ∫ V₋^p dμₙ with dμ₁ = dx, dμ₂ = 2πr dr, dμ₃ = 4πr² dr.
    ///
    /// No admissibility check on p; see [`rhs_integral`] for the checked form.
    pub fn negative_part_moment(
        &self,
        exponent: f64,
        tol: f64,
    ) -> Result<(f64, f64), PotentialError> {
        let breaks = self.breakpoints();
        let q = match self.dim {
            1 => quadrature::integrate_with_breaks(
                |x| power(self.negative_part(x), exponent),
                &breaks,
                tol,
            ),
            2 => quadrature::integrate_with_breaks(
                |r| 2.0 * PI * r * power(self.negative_part(r), exponent),
                &breaks,
                tol,
            ),
            _ => quadrature::integrate_with_breaks(
                |r| 4.0 * PI * r * r * power(self.negative_part(r), exponent),
                &breaks,
                tol,
            ),
        }
        .map_err(PotentialError::NonIntegrable)?;
        Ok((q.value, q.abs_error))
    }
}

// 0^0 is taken as 0: the integrand is supported where V₋ > 0.
fn power(base: f64, exponent: f64) -> f64 {
    if base <= 0.0 {
        0.0
    } else {
        base.powf(exponent)
    }
}

/// ∫ V₋^{γ+n/2} over the truncated domain, at the default tolerance.
pub fn rhs_integral(v: &Potential, gamma: f64, dim: u32) -> Result<RhsIntegral, PotentialError> {
    rhs_integral_with_tol(v, gamma, dim, DEFAULT_TOLERANCE)
}

pub fn rhs_integral_with_tol(
    v: &Potential,
    gamma: f64,
    dim: u32,
    tol: f64,
) -> Result<RhsIntegral, PotentialError> {
    if dim != v.dim {
        return Err(PotentialError::DimensionMismatch {
            potential: v.dim,
            requested: dim,
        });
    }
    check_gamma(gamma, dim)?;
    let (value, err) = v.negative_part_moment(gamma + 0.5 * dim as f64, tol)?;
    Ok(RhsIntegral {
        gamma,
        dim,
        value,
        abs_error_estimate: err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn pt(lambda: f64) -> Potential {
        Potential::poschl_teller(1, lambda, 20.0).unwrap()
    }

    #[test]
    fn negative_part_examples() {
        let barrier = Potential::square_well(1, -5.0, 1.0, 10.0).unwrap();
        assert_eq!(barrier.value(0.0), 5.0);
        assert_eq!(barrier.negative_part(0.0), 0.0);
        let well = Potential::square_well(1, 2.0, 1.0, 10.0).unwrap();
        assert_eq!(well.negative_part(0.3), 2.0);
        let unit = Potential::square_well(1, 1.0, 1.0, 20.0).unwrap();
        assert_eq!(unit.negative_part(0.5), 1.0);
        assert_eq!(unit.negative_part(2.0), 0.0);
    }

    #[test]
    fn truncation_zeroes_value() {
        let v = Potential::gaussian_well(1, 1.0, 5.0, 2.0).unwrap();
        assert!(v.value(1.9) < 0.0);
        assert_eq!(v.value(2.1), 0.0);
    }

    #[test]
    fn rhs_square_well_width() {
        let v = Potential::square_well(1, 1.0, 1.0, 20.0).unwrap();
        let rhs = rhs_integral(&v, 0.5, 1).unwrap();
        assert!((rhs.value - 2.0).abs() < 1e-10);
        assert!(rhs.abs_error_estimate <= DEFAULT_TOLERANCE);
    }

    #[test]
    fn rhs_poschl_teller_sech4() {
        // 4 ∫ sech⁴ = 4 · 4/3
        let rhs = rhs_integral(&pt(1.0), 1.5, 1).unwrap();
        assert!((rhs.value - 16.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn rhs_ball_volume() {
        let v = Potential::square_well(3, 1.0, 1.0, 20.0).unwrap();
        let rhs = rhs_integral(&v, 0.0, 3).unwrap();
        assert!((rhs.value - 4.0 * PI / 3.0).abs() < 1e-9);
        // disc area for n = 2: γ + 1 = 1.5 → depth^1.5 · π
        let v2 = Potential::square_well(2, 4.0, 1.0, 20.0).unwrap();
        let rhs2 = rhs_integral(&v2, 0.5, 2).unwrap();
        assert!((rhs2.value - 8.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn rhs_errors() {
        let v = pt(1.0);
        assert!(matches!(
            rhs_integral(&v, 0.25, 1),
            Err(PotentialError::InvalidGamma(_))
        ));
        assert!(matches!(
            rhs_integral(&v, 1.0, 3),
            Err(PotentialError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn scale_semantics() {
        let w = Potential::gaussian_well(1, 1.5, 0.7, 10.0).unwrap();
        let one = w.scale(1.0);
        let zero = w.scale(0.0);
        for &x in &[-3.0, -0.2, 0.0, 0.5, 2.5] {
            assert_eq!(one.value(x), w.value(x));
            assert_eq!(w.scale(2.5).value(x), 2.5 * w.value(x));
            assert_eq!(zero.value(x), 0.0);
        }
        assert_eq!(rhs_integral(&zero, 1.0, 1).unwrap().value, 0.0);
    }

    #[test]
    fn zero_rhs_iff_nonnegative() {
        let barrier = Potential::gaussian_well(3, -1.0, 1.0, 10.0).unwrap();
        assert_eq!(rhs_integral(&barrier, 1.0, 3).unwrap().value, 0.0);
        let well = Potential::gaussian_well(3, 1e-3, 1.0, 10.0).unwrap();
        assert!(rhs_integral(&well, 1.0, 3).unwrap().value > 0.0);
    }

    #[test]
    fn truncation_consistency_for_decaying_families() {
        for v in [
            pt(2.0),
            Potential::gaussian_well(1, 3.0, 1.0, 20.0).unwrap(),
        ] {
            let a = rhs_integral(&v, 1.0, 1).unwrap();
            let b = rhs_integral(&v.with_truncation_radius(40.0).unwrap(), 1.0, 1).unwrap();
            assert!((a.value - b.value).abs() <= a.abs_error_estimate.max(DEFAULT_TOLERANCE));
        }
    }

    #[test]
    fn harmonic_cap_moment() {
        // ∫_{-1}^{1} (1 − x²) dx = 4/3 for ω = 1, depth = 1 and γ = 1/2
        let v = Potential::harmonic_truncated(1, 1.0, 1.0, 5.0).unwrap();
        assert!((rhs_integral(&v, 0.5, 1).unwrap().value - 4.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn tabulated_interpolation() {
        let v = Potential::tabulated(1, vec![-1.0, 0.0, 1.0], vec![0.0, -2.0, 0.0], 5.0).unwrap();
        assert_eq!(v.value(-0.5), -1.0);
        assert_eq!(v.value(0.0), -2.0);
        assert_eq!(v.value(1.5), 0.0);
        assert!(v.is_radial());
        assert!((rhs_integral(&v, 0.5, 1).unwrap().value - 2.0).abs() < 1e-10);
        let lopsided =
            Potential::tabulated(1, vec![-1.0, 0.0, 2.0], vec![0.0, -2.0, 0.0], 5.0).unwrap();
        assert!(!lopsided.is_radial());
    }

    #[test]
    fn constructors_validate() {
        assert_eq!(
            Potential::square_well(4, 1.0, 1.0, 1.0),
            Err(PotentialError::UnsupportedDimension(4))
        );
        assert!(matches!(
            Potential::square_well(1, 1.0, 1.0, 0.0),
            Err(PotentialError::InvalidRadius(_))
        ));
        assert!(Potential::square_well(1, 1.0, -1.0, 5.0).is_err());
        assert_eq!(
            Potential::tabulated(3, vec![-1.0, 1.0], vec![-1.0, -1.0], 5.0),
            Err(PotentialError::NotRadial(3))
        );
        assert!(Potential::tabulated(1, vec![0.0, 0.0], vec![1.0, 1.0], 5.0).is_err());
        assert!(Potential::sum(1, vec![], 5.0).is_err());
    }

    #[test]
    fn json_schema() {
        let v = Potential::square_well(1, 1.0, 1.0, 20.0).unwrap();
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(
            json,
            r#"{"dim":1,"family":"SquareWell","params":{"depth":1.0,"half_width":1.0},"truncation_radius":20.0}"#
        );
        let scaled = pt(1.0).scale(2.0);
        let back: Potential =
            serde_json::from_str(&serde_json::to_string(&scaled).unwrap()).unwrap();
        assert_eq!(back, scaled);
        let bad = r#"{"dim":3,"family":"Tabulated","params":{"nodes":[-1,1],"values":[0,0]},"truncation_radius":2}"#;
        assert!(serde_json::from_str::<Potential>(bad).is_err());
    }

    #[test]
    fn breakpoints_include_edges() {
        let v = Potential::square_well(1, 1.0, 1.0, 20.0).unwrap();
        assert_eq!(v.breakpoints(), vec![-20.0, -1.0, 0.0, 1.0, 20.0]);
        assert_eq!(v.jumps(), vec![-1.0, 1.0]);
        let v3 = Potential::square_well(3, 1.0, 1.0, 20.0).unwrap();
        assert_eq!(v3.breakpoints(), vec![0.0, 1.0, 20.0]);
        assert_eq!(v3.jumps(), vec![1.0]);
    }

    fn shape_strategy() -> impl Strategy<Value = Shape> {
        let leaf = prop_oneof![
            (0.1..5.0f64, 0.1..3.0f64)
                .prop_map(|(depth, half_width)| Shape::SquareWell { depth, half_width }),
            (0.1..4.0f64).prop_map(|lambda| Shape::PoschlTeller { lambda }),
            (0.1..5.0f64, 0.2..3.0f64)
                .prop_map(|(depth, width)| Shape::GaussianWell { depth, width }),
            (0.2..3.0f64, 0.1..5.0f64)
                .prop_map(|(omega, depth)| Shape::HarmonicTruncated { omega, depth }),
        ];
        leaf.prop_recursive(2, 6, 3, |inner| {
            prop_oneof![
                (0.1..3.0f64, inner.clone()).prop_map(|(lambda, b)| Shape::Scaled {
                    lambda,
                    base: Box::new(b)
                }),
                prop::collection::vec(inner, 1..3).prop_map(|terms| Shape::Sum { terms }),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn json_round_trip(shape in shape_strategy(), dim in 1u32..=3, radius in 1.0..30.0f64) {
            let v = Potential::new(dim, shape, radius).unwrap();
            let back: Potential = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
            prop_assert_eq!(back, v);
        }

        #[test]
        fn homogeneity(shape in shape_strategy(), dim in 1u32..=3, lambda in 0.2..6.0f64, gamma in 0.5..2.5f64) {
            // every generated shape is ≤ 0
            let w = Potential::new(dim, shape, 12.0).unwrap();
            let base = rhs_integral(&w, gamma, dim).unwrap();
            let scaled = rhs_integral(&w.scale(lambda), gamma, dim).unwrap();
            let p = gamma + 0.5 * dim as f64;
            let expected = lambda.powf(p) * base.value;
            let tol = 10.0 * DEFAULT_TOLERANCE * lambda.powf(p).max(1.0);
            prop_assert!((scaled.value - expected).abs() <= tol.max(1e-9 * expected),
                "scaled {} expected {}", scaled.value, expected);
        }

        #[test]
        fn deepening_never_decreases(shape in shape_strategy(), l1 in 0.1..3.0f64, dl in 0.0..3.0f64) {
            let w = Potential::new(1, shape, 10.0).unwrap();
            let a = rhs_integral(&w.scale(l1), 1.0, 1).unwrap().value;
            let b = rhs_integral(&w.scale(l1 + dl), 1.0, 1).unwrap().value;
            prop_assert!(b >= a - 10.0 * DEFAULT_TOLERANCE);
        }
    }

    #[test]
    fn poschl_teller_moment_closed_form() {
        // λ = 2: ∫ (6 sech²)² = 36 · 4/3 = 48
        assert_relative_eq!(
            rhs_integral(&pt(2.0), 1.5, 1).unwrap().value,
            48.0,
            max_relative = 1e-11
        );
    }
}
