//! Lieb–Thirring constants and bound reports.
//!
//! Everything here is a closed-form evaluation except the reports, which
//! combine a Riesz mean from [`crate::spectrum`] with a moment from
//! [`crate::potentials`].

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::potentials::{rhs_integral, Potential, PotentialError};
use crate::quadrature::{self, QuadratureError, DEFAULT_TOLERANCE};
use crate::special::{gamma_ratio, DomainError};
use crate::spectrum::{self, riesz_mean, SpectralResult, SpectrumConfig, SpectrumError};
use crate::validity::{check_gamma, InvalidGamma};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstantsError {
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Gamma(#[from] DomainError),
    #[error(transparent)]
    InvalidGamma(#[from] InvalidGamma),
    #[error("no {requested} constant is known for gamma = {gamma}, n = {dim}")]
    MissingConstant {
        requested: ConstantSource,
        gamma: f64,
        dim: u32,
    },
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("no member of the family has a bound state")]
    NoBoundState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantSource {
    Semiclassical,
    SharpKnown,
    Conjectured,
    UserSupplied,
}

impl fmt::Display for ConstantSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstantSource::Semiclassical => "semiclassical",
            ConstantSource::SharpKnown => "sharp_known",
            ConstantSource::Conjectured => "conjectured",
            ConstantSource::UserSupplied => "user_supplied",
        })
    }
}

/// Non-finite floats as JSON `null`, read back as NaN.
mod nullable {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

/// A constant L_{γ,n} together with where it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantValue {
    pub gamma: f64,
    pub dim: u32,
    #[serde(with = "nullable")]
    pub value: f64,
    pub source: ConstantSource,
}

/// Which constant a bound report should use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantRequest {
    Semiclassical,
    SharpKnown,
    Conjectured,
    UserSupplied(f64),
}

impl ConstantRequest {
    pub fn source(&self) -> ConstantSource {
        match self {
            ConstantRequest::Semiclassical => ConstantSource::Semiclassical,
            ConstantRequest::SharpKnown => ConstantSource::SharpKnown,
            ConstantRequest::Conjectured => ConstantSource::Conjectured,
            ConstantRequest::UserSupplied(_) => ConstantSource::UserSupplied,
        }
    }
}

/// L^c_{γ,n} = 2^{−n} π^{−n/2} Γ(γ+1)/Γ(γ+1+n/2).
pub fn semiclassical_constant(gamma: f64, dim: u32) -> Result<ConstantValue, ConstantsError> {
    if !(gamma >= 0.0 && gamma.is_finite()) || dim == 0 {
        return Err(ConstantsError::Domain(format!(
            "semiclassical constant needs gamma >= 0 and n >= 1, got gamma = {gamma}, n = {dim}"
        )));
    }
    let n = dim as f64;
    let value =
        2f64.powf(-n) * PI.powf(-0.5 * n) * gamma_ratio(gamma + 1.0, gamma + 1.0 + 0.5 * n)?;
    Ok(ConstantValue {
        gamma,
        dim,
        value,
        source: ConstantSource::Semiclassical,
    })
}

/// The conjectured sharp one-dimensional constant for 1/2 < γ < 3/2:
///
/// L_{γ,1} = [√π (γ−½)]⁻¹ · Γ(γ+1)/Γ(γ+½) · ((γ−½)/(γ+½))^{γ+½}.
///
/// The interval is open; the endpoint values 1/2 and 3/16 are reached only
/// as limits.
pub fn conjectured_l_gamma_1(gamma: f64) -> Result<ConstantValue, ConstantsError> {
    if !(gamma > 0.5 && gamma < 1.5) {
        return Err(ConstantsError::Domain(format!(
            "conjectured constant is defined for 1/2 < gamma < 3/2, got {gamma}"
        )));
    }
    let shifted = gamma - 0.5;
    let value = gamma_ratio(gamma + 1.0, gamma + 0.5)? / (PI.sqrt() * shifted)
        * (shifted / (gamma + 0.5)).powf(gamma + 0.5);
    Ok(ConstantValue {
        gamma,
        dim: 1,
        value,
        source: ConstantSource::Conjectured,
    })
}

/// Sharp constants known in closed form: L_{γ,n} = L^c_{γ,n} for γ ≥ 3/2 and
/// L_{1/2,1} = 1/2. Everything else returns `None`.
pub fn known_sharp_constant(gamma: f64, dim: u32) -> Option<ConstantValue> {
    if dim == 0 || !gamma.is_finite() {
        return None;
    }
    if gamma >= 1.5 {
        let c = semiclassical_constant(gamma, dim).ok()?;
        return Some(ConstantValue {
            source: ConstantSource::SharpKnown,
            ..c
        });
    }
    if gamma == 0.5 && dim == 1 {
        return Some(ConstantValue {
            gamma,
            dim,
            value: 0.5,
            source: ConstantSource::SharpKnown,
        });
    }
    None
}

/// Resolve a request to a concrete constant for (γ, n).
pub fn resolve_constant(
    request: ConstantRequest,
    gamma: f64,
    dim: u32,
) -> Result<ConstantValue, ConstantsError> {
    let missing = || ConstantsError::MissingConstant {
        requested: request.source(),
        gamma,
        dim,
    };
    match request {
        ConstantRequest::Semiclassical => semiclassical_constant(gamma, dim),
        ConstantRequest::SharpKnown => known_sharp_constant(gamma, dim).ok_or_else(missing),
        ConstantRequest::Conjectured => {
            if dim != 1 {
                return Err(missing());
            }
            conjectured_l_gamma_1(gamma).map_err(|_| missing())
        }
        ConstantRequest::UserSupplied(value) => {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ConstantsError::Domain(format!(
                    "user constant must be positive, got {value}"
                )));
            }
            Ok(ConstantValue {
                gamma,
                dim,
                value,
                source: ConstantSource::UserSupplied,
            })
        }
    }
}

/// K_n = n (2/L_{1,n})^{2/n} (n+2)^{−1−2/n}, the kinetic-energy constant dual to L_{1,n}.
pub fn kn_constant(dim: u32, l1n: &ConstantValue) -> Result<f64, ConstantsError> {
    if l1n.gamma != 1.0 || l1n.dim != dim || dim == 0 {
        return Err(ConstantsError::Domain(format!(
            "K_n needs L_(1,n) with n = {dim}, got gamma = {}, n = {}",
            l1n.gamma, l1n.dim
        )));
    }
    let n = dim as f64;
    Ok(n * (2.0 / l1n.value).powf(2.0 / n) * (n + 2.0).powf(-1.0 - 2.0 / n))
}

/// L¹_{0,n} = S_n^{−n} for n ≥ 3, with S_n the Sobolev constant.
pub fn sobolev_single_state_relation(sobolev: f64, dim: u32) -> Result<f64, ConstantsError> {
    if dim < 3 || !(sobolev > 0.0) {
        return Err(ConstantsError::Domain(format!(
            "Sobolev relation needs n >= 3 and S > 0, got n = {dim}, S = {sobolev}"
        )));
    }
    Ok(sobolev.powi(-(dim as i32)))
}

/// Which side of the inequality is expected to be larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// Σ|e_j|^γ ≤ L·∫V₋^{γ+n/2}
    RieszMean,
    /// Σ∫|∇f_j|² ≥ K_n·∫ρ^{1+2/n}
    KineticEnergy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Satisfied,
    Violated,
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Satisfied => "satisfied",
            Verdict::Violated => "violated",
            Verdict::NotApplicable => "not_applicable",
        })
    }
}

/// One comparison of the two sides of a Lieb–Thirring-type inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// Potential or family descriptor.
    pub subject: String,
    pub kind: BoundKind,
    pub gamma: f64,
    pub dim: u32,
    #[serde(with = "nullable")]
    pub lhs: f64,
    #[serde(with = "nullable")]
    pub rhs: f64,
    pub constant: ConstantValue,
    /// lhs/rhs; 0 when both vanish, null in JSON when undefined.
    #[serde(with = "nullable")]
    pub ratio: f64,
    /// Absolute slack allowed before a violation is declared.
    pub error_budget: f64,
    pub verdict: Verdict,
}

impl BoundReport {
    pub fn new(
        subject: String,
        kind: BoundKind,
        lhs: f64,
        rhs: f64,
        constant: ConstantValue,
        error_budget: f64,
    ) -> Self {
        let ratio = if rhs > 0.0 {
            lhs / rhs
        } else if lhs > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        let excess = match kind {
            BoundKind::RieszMean => lhs - rhs,
            BoundKind::KineticEnergy => rhs - lhs,
        };
        let verdict = if excess > error_budget {
            Verdict::Violated
        } else {
            Verdict::Satisfied
        };
        BoundReport {
            subject,
            kind,
            gamma: constant.gamma,
            dim: constant.dim,
            lhs,
            rhs,
            constant,
            ratio,
            error_budget,
            verdict,
        }
    }

    /// Placeholder row for a (γ, n, source) combination without a constant.
    pub fn not_applicable(
        subject: String,
        kind: BoundKind,
        gamma: f64,
        dim: u32,
        source: ConstantSource,
    ) -> Self {
        BoundReport {
            subject,
            kind,
            gamma,
            dim,
            lhs: f64::NAN,
            rhs: f64::NAN,
            constant: ConstantValue {
                gamma,
                dim,
                value: f64::NAN,
                source,
            },
            ratio: f64::NAN,
            error_budget: 0.0,
            verdict: Verdict::NotApplicable,
        }
    }

    pub fn csv_row(&self) -> CsvRow {
        CsvRow {
            potential: self.subject.clone(),
            gamma: self.gamma,
            n: self.dim,
            lhs: self.lhs,
            rhs: self.rhs,
            ratio: self.ratio,
            source: self.constant.source,
            verdict: self.verdict,
        }
    }
}

/// Flat CSV form: `potential,gamma,n,lhs,rhs,ratio,source,verdict`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub potential: String,
    pub gamma: f64,
    pub n: u32,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub source: ConstantSource,
    pub verdict: Verdict,
}

/// Serialize reports as CSV with a header row.
pub fn write_reports_csv<W: std::io::Write>(reports: &[BoundReport], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        w.serialize(r.csv_row())?;
    }
    w.flush()?;
    Ok(())
}

/// Absolute uncertainty of Σ m|e|^γ: bisection width plus the Richardson
/// error estimate of every eigenvalue.
fn riesz_uncertainty(spec: &SpectralResult, gamma: f64) -> f64 {
    let bisection = 2.0 * spec.tolerance * spec.count() as f64;
    if gamma == 0.0 {
        return bisection;
    }
    let discretization: f64 = spec
        .eigenvalues
        .iter()
        .map(|e| e.multiplicity as f64 * gamma * e.value.abs().powf(gamma - 1.0) * e.error_estimate)
        .sum();
    bisection + discretization
}

/// Compare Σ|e_j|^γ with C·∫V₋^{γ+n/2} for the requested constant.
pub fn bound_report(
    v: &Potential,
    gamma: f64,
    dim: u32,
    request: ConstantRequest,
    cfg: &SpectrumConfig,
) -> Result<BoundReport, ConstantsError> {
    check_gamma(gamma, dim)?;
    let constant = resolve_constant(request, gamma, dim)?;
    let spec = spectrum::spectrum(v, cfg)?;
    bound_report_from_spectrum(v, &spec, constant)
}

/// As [`bound_report`] but reusing an already computed spectrum.
pub fn bound_report_from_spectrum(
    v: &Potential,
    spec: &SpectralResult,
    constant: ConstantValue,
) -> Result<BoundReport, ConstantsError> {
    let (gamma, dim) = (constant.gamma, constant.dim);
    let lhs = riesz_mean(spec, gamma)?;
    let moment = rhs_integral(v, gamma, dim)?;
    let rhs = constant.value * moment.value;
    let budget = riesz_uncertainty(spec, gamma)
        + 10.0 * constant.value * moment.abs_error_estimate.max(DEFAULT_TOLERANCE);
    Ok(BoundReport::new(
        v.to_string(),
        BoundKind::RieszMean,
        lhs,
        rhs,
        constant,
        budget,
    ))
}

/// Σ|e_j|^γ / (L^c_{γ,n}·∫V₋^{γ+n/2}) for each γ, reusing one spectrum.
///
/// These are lower bounds for the ratio of the true sharp constant to the
/// semiclassical one. A potential without negative part gives ratio 0.
pub fn ratio_curve(
    v: &Potential,
    dim: u32,
    gammas: &[f64],
    cfg: &SpectrumConfig,
) -> Result<Vec<(f64, f64)>, ConstantsError> {
    for &g in gammas {
        check_gamma(g, dim)?;
    }
    if v.dim() != dim {
        return Err(PotentialError::DimensionMismatch {
            potential: v.dim(),
            requested: dim,
        }
        .into());
    }
    let spec = spectrum::spectrum(v, cfg)?;
    gammas
        .iter()
        .map(|&g| {
            let c = semiclassical_constant(g, dim)?;
            Ok((g, bound_report_from_spectrum(v, &spec, c)?.ratio))
        })
        .collect()
}

/// Both sides of the semiclassical phase-space identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceCheck {
    /// (2π)^{−n} ∫∫ [p² + V(x)]₋^γ dp dx by nested quadrature.
    pub lhs: f64,
    /// L^c_{γ,n} ∫ V₋^{γ+n/2} dx.
    pub rhs: f64,
}

impl PhaseSpaceCheck {
    pub fn relative_gap(&self) -> f64 {
        let scale = self.lhs.abs().max(self.rhs.abs());
        if scale == 0.0 {
            0.0
        } else {
            (self.lhs - self.rhs).abs() / scale
        }
    }
}

fn sphere_area(dim: u32) -> f64 {
    match dim {
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 4.0 * PI,
    }
}

/// ∫_{|p|<P} (P² − p²)^γ dp in n dimensions, numerically. The substitution
/// p = P(1 − u²) removes the endpoint singularity for small γ.
fn momentum_integral(depth: f64, gamma: f64, dim: u32) -> Result<f64, QuadratureError> {
    if depth <= 0.0 {
        return Ok(0.0);
    }
    let big_p = depth.sqrt();
    let scale = depth.powf(gamma) * big_p.powi(dim as i32);
    let q = quadrature::adaptive_simpson(
        |u| {
            let p = big_p * (1.0 - u * u);
            let gap = (depth - p * p).max(0.0);
            gap.powf(gamma) * p.powi(dim as i32 - 1) * 2.0 * big_p * u
        },
        0.0,
        1.0,
        1e-13 * scale,
    )?;
    Ok(sphere_area(dim) * q.value)
}

/// Evaluate the phase-space integral and the Γ-formula moment independently.
pub fn phase_space_check(
    v: &Potential,
    gamma: f64,
    dim: u32,
) -> Result<PhaseSpaceCheck, ConstantsError> {
    if v.dim() != dim {
        return Err(PotentialError::DimensionMismatch {
            potential: v.dim(),
            requested: dim,
        }
        .into());
    }
    let c = semiclassical_constant(gamma, dim)?;
    let (moment, _) = v.negative_part_moment(gamma + 0.5 * dim as f64, DEFAULT_TOLERANCE)?;
    let rhs = c.value * moment;
    let measure = |t: f64| match dim {
        1 => 1.0,
        2 => 2.0 * PI * t,
        _ => 4.0 * PI * t * t,
    };
    let tol = 1e-11 * rhs.max(1e-3);
    let outer = quadrature::integrate_with_breaks(
        |t| match momentum_integral(v.negative_part(t), gamma, dim) {
            Ok(inner) => measure(t) * inner,
            Err(_) => f64::NAN,
        },
        &v.breakpoints(),
        tol,
    )?;
    let lhs = (2.0 * PI).powi(-(dim as i32)) * outer.value;
    Ok(PhaseSpaceCheck { lhs, rhs })
}

/// A family of potentials indexed by one or two real parameters.
pub trait PotentialFamily: Sync {
    /// Closed parameter box, one interval per parameter.
    fn bounds(&self) -> Vec<(f64, f64)>;
    fn potential(&self, params: &[f64]) -> Result<Potential, PotentialError>;
    fn describe(&self) -> String;
}

/// λ ↦ λ·W for λ in a closed range.
#[derive(Debug, Clone)]
pub struct ScaledFamily {
    pub base: Potential,
    pub range: (f64, f64),
}

impl PotentialFamily for ScaledFamily {
    fn bounds(&self) -> Vec<(f64, f64)> {
        vec![self.range]
    }

    fn potential(&self, params: &[f64]) -> Result<Potential, PotentialError> {
        Ok(self.base.scale(params[0]))
    }

    fn describe(&self) -> String {
        format!("lambda * {}", self.base)
    }
}

/// Square wells of fixed integral ∫V₋ = strength and half-width a, which
/// approach −strength·δ as a → 0.
#[derive(Debug, Clone)]
pub struct ShrinkingWellFamily {
    pub strength: f64,
    pub half_width_range: (f64, f64),
    pub truncation_radius: f64,
}

impl PotentialFamily for ShrinkingWellFamily {
    fn bounds(&self) -> Vec<(f64, f64)> {
        vec![self.half_width_range]
    }

    fn potential(&self, params: &[f64]) -> Result<Potential, PotentialError> {
        let a = params[0];
        Potential::square_well(1, self.strength / (2.0 * a), a, self.truncation_radius)
    }

    fn describe(&self) -> String {
        format!("square wells with integral {}", self.strength)
    }
}

/// Square wells (depth, half-width) in a box of parameters.
#[derive(Debug, Clone)]
pub struct SquareWellFamily {
    pub dim: u32,
    pub depth_range: (f64, f64),
    pub half_width_range: (f64, f64),
    pub truncation_radius: f64,
}

impl PotentialFamily for SquareWellFamily {
    fn bounds(&self) -> Vec<(f64, f64)> {
        vec![self.depth_range, self.half_width_range]
    }

    fn potential(&self, params: &[f64]) -> Result<Potential, PotentialError> {
        Potential::square_well(self.dim, params[0], params[1], self.truncation_radius)
    }

    fn describe(&self) -> String {
        format!("square wells in n = {}", self.dim)
    }
}

/// Grid scan followed by golden-section refinement along each axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub points_per_axis: usize,
    pub refine_rounds: usize,
    pub golden_iterations: usize,
}

impl Default for ScanSpec {
    fn default() -> Self {
        ScanSpec {
            points_per_axis: 24,
            refine_rounds: 2,
            golden_iterations: 40,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleStateOptimum {
    pub params: Vec<f64>,
    pub ratio: f64,
    pub ground_state: f64,
}

/// |e₁|^γ / ∫V₋^{γ+n/2} for one potential, or `None` without a bound state.
pub fn single_state_ratio(
    v: &Potential,
    gamma: f64,
    dim: u32,
    cfg: &SpectrumConfig,
) -> Result<Option<(f64, f64)>, ConstantsError> {
    let Some(e1) = spectrum::ground_state(v, cfg)? else {
        return Ok(None);
    };
    let moment = rhs_integral(v, gamma, dim)?.value;
    let lhs = if gamma == 0.0 {
        1.0
    } else {
        e1.abs().powf(gamma)
    };
    Ok(Some((lhs / moment, e1)))
}

/// Maximize the single-bound-state ratio over a one- or two-parameter family.
pub fn single_state_ratio_maximize(
    family: &dyn PotentialFamily,
    gamma: f64,
    dim: u32,
    scan: &ScanSpec,
    cfg: &SpectrumConfig,
) -> Result<SingleStateOptimum, ConstantsError> {
    use rayon::prelude::*;

    check_gamma(gamma, dim)?;
    let bounds = family.bounds();
    if bounds.is_empty() || bounds.len() > 2 {
        return Err(ConstantsError::Domain(
            "families must have one or two parameters".into(),
        ));
    }
    let objective = |params: &[f64]| -> Result<Option<(f64, f64)>, ConstantsError> {
        let v = family.potential(params)?;
        single_state_ratio(&v, gamma, dim, cfg)
    };
    let points = scan.points_per_axis.max(2);
    let axis = |k: usize| -> Vec<f64> {
        let (lo, hi) = bounds[k];
        (0..points)
            .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
            .collect()
    };
    let grid: Vec<Vec<f64>> = if bounds.len() == 1 {
        axis(0).into_iter().map(|x| vec![x]).collect()
    } else {
        let (a, b) = (axis(0), axis(1));
        a.iter()
            .flat_map(|&x| b.iter().map(move |&y| vec![x, y]))
            .collect()
    };
    let values = grid
        .par_iter()
        .map(|p| objective(p))
        .collect::<Result<Vec<_>, _>>()?;
    let mut best: Option<(Vec<f64>, f64, f64)> = None;
    for (p, val) in grid.into_iter().zip(values) {
        if let Some((ratio, e1)) = val {
            if best.as_ref().map_or(true, |b| ratio > b.1) {
                best = Some((p, ratio, e1));
            }
        }
    }
    let (mut params, mut ratio, mut e1) = best.ok_or(ConstantsError::NoBoundState)?;
    let steps: Vec<f64> = bounds
        .iter()
        .map(|(lo, hi)| (hi - lo) / (points - 1) as f64)
        .collect();
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..scan.refine_rounds {
        for k in 0..bounds.len() {
            let mut lo = (params[k] - steps[k]).max(bounds[k].0);
            let mut hi = (params[k] + steps[k]).min(bounds[k].1);
            let eval = |x: f64, params: &[f64]| -> Result<f64, ConstantsError> {
                let mut p = params.to_vec();
                p[k] = x;
                Ok(objective(&p)?.map_or(f64::NEG_INFINITY, |(r, _)| r))
            };
            let mut x1 = hi - phi * (hi - lo);
            let mut x2 = lo + phi * (hi - lo);
            let mut f1 = eval(x1, &params)?;
            let mut f2 = eval(x2, &params)?;
            for _ in 0..scan.golden_iterations {
                if f1 < f2 {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + phi * (hi - lo);
                    f2 = eval(x2, &params)?;
                } else {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - phi * (hi - lo);
                    f1 = eval(x1, &params)?;
                }
            }
            let candidate = if f1 > f2 { x1 } else { x2 };
            let mut p = params.clone();
            p[k] = candidate;
            if let Some((r, e)) = objective(&p)? {
                if r > ratio {
                    params = p;
                    ratio = r;
                    e1 = e;
                }
            }
        }
    }
    Ok(SingleStateOptimum {
        params,
        ratio,
        ground_state: e1,
    })
}
