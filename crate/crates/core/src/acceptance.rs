//! The acceptance suite: twelve pass/fail criteria with pinned tolerances.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::birman_schwinger::{self, bs_eigenvalues, build_bs_matrix, energy_ladder};
use crate::constants::{self, bound_report, ConstantRequest};
use crate::kinetic::{self, Grid1d, OrthonormalFamily};
use crate::potentials::{rhs_integral, Potential, Shape};
use crate::spectrum::{self, SpectrumConfig};

pub const CONSTANT_TOL: f64 = 1e-10;
pub const UPPER_ENDPOINT_TOL: f64 = 1e-6;
pub const LOWER_ENDPOINT_TOL: f64 = 1e-4;
pub const ENDPOINT_OFFSET: f64 = 1e-8;
pub const EQUALITY_TOL: f64 = 1e-3;
pub const DELTA_SHARP_TOL: f64 = 0.02;
pub const DELTA_SEMICLASSICAL_TOL: f64 = 0.05;
pub const COUNTING_REL_TOL: f64 = 1e-3;
pub const BS_EIGEN_TOL: f64 = 1e-2;
pub const PHASE_SPACE_REL_TOL: f64 = 1e-5;
pub const WEYL_REL_TOL: f64 = 0.15;
pub const SLATER_TOL: f64 = 1e-8;
pub const KINETIC_RATIO_MAX: f64 = 1.2;
pub const BESSEL_GROWTH_MAX: f64 = 1.5;

/// Knobs for the suite. `constant_scale` multiplies every semiclassical or
/// sharp constant the suite uses; any value other than 1 is a fault.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AcceptanceOptions {
    pub spectrum_grid: usize,
    pub truncation_radius: f64,
    pub bs_grid: usize,
    pub bs_ladder_grid: usize,
    pub slater_grid: usize,
    pub constant_scale: f64,
}

impl Default for AcceptanceOptions {
    fn default() -> Self {
        AcceptanceOptions {
            spectrum_grid: 4000,
            truncation_radius: 20.0,
            bs_grid: 800,
            bs_ladder_grid: 400,
            slater_grid: 48,
            constant_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {}: {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcceptanceReport {
    pub outcomes: Vec<CriterionOutcome>,
}

impl AcceptanceReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failed(&self) -> Vec<&CriterionOutcome> {
        self.outcomes.iter().filter(|o| !o.passed).collect()
    }

    pub fn to_text(&self) -> String {
        let mut s: String = self.outcomes.iter().map(|o| o.line() + "\n").collect();
        let passed = self.outcomes.iter().filter(|o| o.passed).count();
        s.push_str(&format!(
            "{passed}/{} criteria passed\n",
            self.outcomes.len()
        ));
        s
    }
}

pub const CRITERIA: [(u32, &str); 12] = [
    (1, "constants table"),
    (2, "conjectured constant endpoints"),
    (3, "sharp equality cases"),
    (4, "delta-well witness"),
    (5, "counting representation"),
    (6, "Birman-Schwinger correspondence"),
    (7, "phase-space identity"),
    (8, "Weyl asymptotics"),
    (9, "Slater reduction"),
    (10, "kinetic duality"),
    (11, "Bessel density"),
    (12, "determinism"),
];

type Check = Result<(bool, String), String>;

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

fn rel_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn semiclassical(opts: &AcceptanceOptions, gamma: f64, dim: u32) -> Result<f64, String> {
    Ok(constants::semiclassical_constant(gamma, dim)
        .map_err(err)?
        .value
        * opts.constant_scale)
}

fn spectrum_config(opts: &AcceptanceOptions) -> SpectrumConfig {
    SpectrumConfig::default().with_grid(opts.spectrum_grid)
}

fn criterion_1(opts: &AcceptanceOptions) -> Check {
    let cases = [
        (1.5, 1, 3.0 / 16.0),
        (0.5, 1, 0.25),
        (1.0, 1, 2.0 / (3.0 * PI)),
        (0.0, 3, 1.0 / (6.0 * PI * PI)),
    ];
    let mut worst: f64 = 0.0;
    for (g, n, exact) in cases {
        worst = worst.max((semiclassical(opts, g, n)? - exact).abs());
    }
    Ok((
        worst <= CONSTANT_TOL,
        format!("max deviation {worst:.3e} (tol {CONSTANT_TOL:e})"),
    ))
}

fn criterion_2(_: &AcceptanceOptions) -> Check {
    let upper = constants::conjectured_l_gamma_1(1.5 - ENDPOINT_OFFSET)
        .map_err(err)?
        .value;
    let lower = constants::conjectured_l_gamma_1(0.5 + ENDPOINT_OFFSET)
        .map_err(err)?
        .value;
    let ok =
        within(upper, 3.0 / 16.0, UPPER_ENDPOINT_TOL) && within(lower, 0.5, LOWER_ENDPOINT_TOL);
    Ok((ok, format!("L(3/2-) = {upper:.9}, L(1/2+) = {lower:.9}")))
}

fn criterion_3(opts: &AcceptanceOptions) -> Check {
    let cfg = spectrum_config(opts);
    let sharp = constants::known_sharp_constant(1.5, 1)
        .ok_or("no sharp constant at 3/2")?
        .value
        * opts.constant_scale;
    let mut ratios = Vec::new();
    for lambda in [1.0, 2.0] {
        let v = Potential::poschl_teller(1, lambda, opts.truncation_radius).map_err(err)?;
        let r =
            bound_report(&v, 1.5, 1, ConstantRequest::UserSupplied(sharp), &cfg).map_err(err)?;
        ratios.push(r.ratio);
    }
    let ok = ratios.iter().all(|&r| within(r, 1.0, EQUALITY_TOL));
    Ok((
        ok,
        format!(
            "ratios {:.6} (lambda=1), {:.6} (lambda=2)",
            ratios[0], ratios[1]
        ),
    ))
}

fn criterion_4(opts: &AcceptanceOptions) -> Check {
    // the bound state decays like e^{-|x|}, so R = 10 loses nothing and halves h
    let v = Potential::square_well(1, 100.0, 0.01, 10.0).map_err(err)?;
    let cfg = spectrum_config(opts);
    let spec = spectrum::spectrum(&v, &cfg).map_err(err)?;
    let lhs = spectrum::riesz_mean(&spec, 0.5).map_err(err)?;
    let moment = rhs_integral(&v, 0.5, 1).map_err(err)?.value;
    let sharp = constants::known_sharp_constant(0.5, 1)
        .ok_or("no sharp constant at 1/2")?
        .value
        * opts.constant_scale;
    let to_sharp = lhs / (sharp * moment);
    let to_semi = lhs / (semiclassical(opts, 0.5, 1)? * moment);
    let ok = (to_sharp - 1.0).abs() <= DELTA_SHARP_TOL
        && (to_semi - 2.0).abs() <= DELTA_SEMICLASSICAL_TOL * 2.0;
    Ok((
        ok,
        format!(
            "e1 = {:.6}, ratio to sharp {to_sharp:.5}, to semiclassical {to_semi:.5}",
            spec.ground_state().unwrap_or(0.0)
        ),
    ))
}

fn test_potentials_1d(radius: f64) -> Result<Vec<Potential>, String> {
    Ok(vec![
        Potential::poschl_teller(1, 1.0, radius).map_err(err)?,
        Potential::poschl_teller(1, 2.5, radius).map_err(err)?,
        Potential::square_well(1, 4.0, 1.5, radius).map_err(err)?,
        Potential::gaussian_well(1, 10.0, 1.0, radius).map_err(err)?,
        Potential::harmonic_truncated(1, 1.0, 9.0, radius).map_err(err)?,
    ])
}

fn criterion_5(opts: &AcceptanceOptions) -> Check {
    let cfg = spectrum_config(opts);
    let mut potentials = test_potentials_1d(opts.truncation_radius)?;
    potentials.push(Potential::square_well(3, 10.0, 1.0, 5.0).map_err(err)?);
    let cases: Vec<(Potential, f64)> = potentials
        .iter()
        .flat_map(|v| [0.5, 1.0, 1.5, 2.0].map(|g| (v.clone(), g)))
        .collect();
    let gaps = cases
        .par_iter()
        .map(|(v, g)| {
            let spec = spectrum::spectrum(v, &cfg).map_err(err)?;
            let direct = spectrum::riesz_mean(&spec, *g).map_err(err)?;
            let counted = spectrum::riesz_via_counting(v, v.dim(), *g, &cfg).map_err(err)?;
            Ok(rel_gap(direct, counted))
        })
        .collect::<Result<Vec<f64>, String>>()?;
    let worst = gaps.iter().cloned().fold(0.0, f64::max);
    Ok((
        worst <= COUNTING_REL_TOL,
        format!("{} cases, max relative gap {worst:.3e}", cases.len()),
    ))
}

fn criterion_6(opts: &AcceptanceOptions) -> Check {
    let radius = 10.0;
    let cfg = spectrum_config(opts);
    let potentials = test_potentials_1d(radius)?;
    let mut eigen_worst: f64 = 0.0;
    let mut eigen_count = 0;
    for v in &potentials {
        for e in spectrum::spectrum(v, &cfg).map_err(err)?.values() {
            let k = build_bs_matrix(v, e.abs(), opts.bs_grid).map_err(err)?;
            let closest = bs_eigenvalues(&k)
                .map_err(err)?
                .into_iter()
                .map(|mu| (mu - 1.0).abs())
                .fold(f64::INFINITY, f64::min);
            eigen_worst = eigen_worst.max(closest);
            eigen_count += 1;
        }
    }
    let ladder = energy_ladder(0.05, 8.0, 16);
    let mut mismatches = 0;
    let mut monotone = true;
    for v in &potentials {
        let samples = birman_schwinger::ladder_sweep(v, &ladder, opts.bs_ladder_grid, usize::MAX)
            .map_err(err)?;
        for s in &samples {
            let direct = spectrum::counting_function(v, 1, s.energy, &cfg)
                .map_err(err)?
                .count;
            if direct != s.count {
                mismatches += 1;
            }
        }
        for pair in samples.windows(2) {
            let scale = pair[0]
                .top_eigenvalues
                .first()
                .copied()
                .unwrap_or(0.0)
                .abs()
                .max(1.0);
            if pair[0]
                .top_eigenvalues
                .iter()
                .zip(&pair[1].top_eigenvalues)
                .any(|(a, b)| *b > *a + 1e-12 * scale)
            {
                monotone = false;
            }
        }
    }
    let ok = eigen_worst <= BS_EIGEN_TOL && mismatches == 0 && monotone;
    Ok((
        ok,
        format!(
            "{eigen_count} eigenvalues, max |mu - 1| = {eigen_worst:.3e}; ladder mismatches {mismatches}; monotone {monotone}"
        ),
    ))
}

fn smooth_potentials(dim: u32) -> Result<Vec<Potential>, String> {
    let r = 12.0;
    Ok(vec![
        Potential::poschl_teller(dim, 1.0, r).map_err(err)?,
        Potential::gaussian_well(dim, 3.0, 1.2, r).map_err(err)?,
        Potential::gaussian_well(dim, 8.0, 0.6, r).map_err(err)?,
        Potential::sum(
            dim,
            vec![
                Shape::GaussianWell {
                    depth: 2.0,
                    width: 1.0,
                },
                Shape::GaussianWell {
                    depth: 1.0,
                    width: 2.0,
                },
            ],
            r,
        )
        .map_err(err)?,
    ])
}

fn criterion_7(opts: &AcceptanceOptions) -> Check {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for (g, n) in [(1.0, 1), (1.5, 1), (0.0, 3)] {
        for v in smooth_potentials(n)? {
            let c = constants::phase_space_check(&v, g, n).map_err(err)?;
            worst = worst.max(rel_gap(c.lhs, c.rhs * opts.constant_scale));
            cases += 1;
        }
    }
    Ok((
        worst <= PHASE_SPACE_REL_TOL,
        format!("{cases} cases, max relative gap {worst:.3e}"),
    ))
}

fn criterion_8(opts: &AcceptanceOptions) -> Check {
    let v = Potential::square_well(3, 100.0, 1.0, 5.0).map_err(err)?;
    let cfg = spectrum_config(opts);
    let count = spectrum::counting_function(&v, 3, 0.0, &cfg)
        .map_err(err)?
        .count;
    let weyl = semiclassical(opts, 0.0, 3)? * rhs_integral(&v, 0.0, 3).map_err(err)?.value;
    let ratio = count as f64 / weyl;
    Ok((
        (ratio - 1.0).abs() <= WEYL_REL_TOL,
        format!("N0 = {count}, semiclassical {weyl:.3}, ratio {ratio:.4}"),
    ))
}

fn criterion_9(opts: &AcceptanceOptions) -> Check {
    let grid = Grid1d::new(1.0, opts.slater_grid - 2).map_err(err)?;
    let fam = OrthonormalFamily::box_modes(grid, 2).map_err(err)?;
    let check = kinetic::slater_reduction_check(&fam).map_err(err)?;
    let f = fam.functions();
    let phi = kinetic::slater_tensor(f).map_err(err)?;
    let swapped = kinetic::slater_tensor(&[f[1].clone(), f[0].clone()]).map_err(err)?;
    let sign_flips = phi
        .values
        .iter()
        .zip(&swapped.values)
        .all(|(a, b)| *a == -*b);
    let degenerate = kinetic::slater_tensor(&[f[0].clone(), f[0].clone()]).map_err(err)?;
    let vanishes = degenerate.values.iter().all(|&v| v == 0.0);
    let ok = check.density < SLATER_TOL && check.kinetic < SLATER_TOL && sign_flips && vanishes;
    Ok((
        ok,
        format!(
            "density gap {:.2e}, kinetic gap {:.2e}, antisymmetric {sign_flips}, degenerate zero {vanishes}",
            check.density, check.kinetic
        ),
    ))
}

fn criterion_10(opts: &AcceptanceOptions) -> Check {
    let grid = Grid1d::new(1.0, 3999).map_err(err)?;
    let l11 = semiclassical(opts, 1.0, 1)?;
    let mut ratios = Vec::new();
    for n in [8, 16, 32] {
        let fam = OrthonormalFamily::box_modes(grid, n).map_err(err)?;
        let r =
            kinetic::kinetic_bound_report(&fam, ConstantRequest::UserSupplied(l11)).map_err(err)?;
        ratios.push(r.ratio);
    }
    let in_range = ratios
        .iter()
        .all(|&r| (1.0..=KINETIC_RATIO_MAX).contains(&r));
    let decreasing = ratios.windows(2).all(|w| w[1] < w[0]);
    Ok((
        in_range && decreasing,
        format!(
            "ratios {:.5}, {:.5}, {:.5} (N = 8, 16, 32)",
            ratios[0], ratios[1], ratios[2]
        ),
    ))
}

fn criterion_11(_: &AcceptanceOptions) -> Check {
    let grid = Grid1d::new(1.0, 511).map_err(err)?;
    let mass = 1.0;
    let values = (1..=64usize)
        .into_par_iter()
        .map(|n| {
            let fam = OrthonormalFamily::box_modes(grid, n).map_err(err)?;
            Ok(mass * kinetic::bessel_density_1d(&fam, mass).map_err(err)?.sup())
        })
        .collect::<Result<Vec<f64>, String>>()?;
    let at8 = values[7];
    let max = values.iter().cloned().fold(0.0, f64::max);
    Ok((
        max <= BESSEL_GROWTH_MAX * at8,
        format!("m*sup(rho): N=8 {at8:.5}, max over N=1..64 {max:.5}"),
    ))
}

/// Bound-check CSV bytes for a fixed sweep, computed inside a pool of `threads`.
fn sweep_bytes(opts: &AcceptanceOptions, threads: usize) -> Result<Vec<u8>, String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(err)?;
    pool.install(|| {
        let cfg = spectrum_config(opts).with_grid(1000);
        let potentials = test_potentials_1d(opts.truncation_radius)?;
        let tasks: Vec<(Potential, f64)> = potentials
            .iter()
            .flat_map(|v| [0.5, 1.0, 1.5].map(|g| (v.clone(), g)))
            .collect();
        let reports = tasks
            .par_iter()
            .map(|(v, g)| {
                let c = semiclassical(opts, *g, 1)?;
                bound_report(v, *g, 1, ConstantRequest::UserSupplied(c), &cfg).map_err(err)
            })
            .collect::<Result<Vec<_>, String>>()?;
        let mut buf = Vec::new();
        constants::write_reports_csv(&reports, &mut buf).map_err(err)?;
        Ok(buf)
    })
}

fn criterion_12(opts: &AcceptanceOptions) -> Check {
    let a = sweep_bytes(opts, 1)?;
    let b = sweep_bytes(opts, 4)?;
    let c = sweep_bytes(opts, 4)?;
    let ok = a == b && b == c;
    Ok((
        ok,
        format!(
            "{} bytes, serial and parallel runs identical: {ok}",
            a.len()
        ),
    ))
}

/// Run one criterion by id (1..=12).
pub fn run_criterion(id: u32, opts: &AcceptanceOptions) -> CriterionOutcome {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map_or("unknown", |(_, n)| n)
        .to_string();
    let result = match id {
        1 => criterion_1(opts),
        2 => criterion_2(opts),
        3 => criterion_3(opts),
        4 => criterion_4(opts),
        5 => criterion_5(opts),
        6 => criterion_6(opts),
        7 => criterion_7(opts),
        8 => criterion_8(opts),
        9 => criterion_9(opts),
        10 => criterion_10(opts),
        11 => criterion_11(opts),
        12 => criterion_12(opts),
        _ => Err(format!("no criterion {id}")),
    };
    match result {
        Ok((passed, detail)) => CriterionOutcome {
            id,
            name,
            passed,
            detail,
        },
        Err(e) => CriterionOutcome {
            id,
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

/// Run all twelve criteria; outcomes are in criterion order.
pub fn run_all(opts: &AcceptanceOptions) -> AcceptanceReport {
    AcceptanceReport {
        outcomes: CRITERIA
            .iter()
            .map(|(id, _)| run_criterion(*id, opts))
            .collect(),
    }
}
