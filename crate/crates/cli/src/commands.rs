use std::fs;
use std::path::Path;

use ltlab::acceptance::{self, AcceptanceReport};
use ltlab::birman_schwinger::{self, energy_ladder};
use ltlab::constants::{self, BoundKind, BoundReport, ConstantRequest, ConstantsError};
use ltlab::kinetic::{self, Grid1d, KineticError, OrthonormalFamily};
use ltlab::potentials::Potential;
use ltlab::spectrum::{self, SpectralResult};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ExperimentConfig, FamilySpec};
use crate::CliError;

fn numeric<E: std::fmt::Display>(context: &str) -> impl Fn(E) -> CliError + '_ {
    move |e| CliError::Numeric(format!("{context}: {e}"))
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Output(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("report types serialize");
    bytes.push(b'\n');
    bytes
}

fn serialize_rows<'a, T: Serialize + 'a>(
    rows: impl IntoIterator<Item = &'a T>,
) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        for r in rows {
            w.serialize(r)
                .map_err(|e| CliError::Output(e.to_string()))?;
        }
        w.flush().map_err(|e| CliError::Output(e.to_string()))?;
    }
    Ok(buf)
}

/// `bs_counts.csv` row.
#[derive(Serialize)]
struct BsRow {
    index: usize,
    potential: String,
    energy: f64,
    count_bs: u64,
    count_fd: u64,
    /// Largest kernel eigenvalues, `;`-separated.
    top_eigenvalues: String,
}

fn reports_csv(reports: &[BoundReport]) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    constants::write_reports_csv(reports, &mut buf).map_err(|e| CliError::Output(e.to_string()))?;
    Ok(buf)
}

fn spectra(cfg: &ExperimentConfig) -> Result<Vec<SpectralResult>, CliError> {
    let scfg = cfg.spectrum_config();
    cfg.potentials
        .par_iter()
        .enumerate()
        .map(|(i, v)| {
            spectrum::spectrum(v, &scfg).map_err(numeric(&format!("potentials[{i}] ({v})")))
        })
        .collect()
}

#[derive(Serialize)]
struct SpectrumFile<'a> {
    potential: &'a Potential,
    result: &'a SpectralResult,
}

/// One `spectrum_<i>.json` per potential.
pub fn cmd_spectrum(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let results = spectra(cfg)?;
    for (i, (v, spec)) in cfg.potentials.iter().zip(&results).enumerate() {
        write(
            &cfg.output_dir,
            &format!("spectrum_{i}.json"),
            &json(&SpectrumFile {
                potential: v,
                result: spec,
            }),
        )?;
        println!(
            "{v} (n = {}): {} bound states, e1 = {:?}",
            v.dim(),
            spec.count(),
            spec.ground_state()
        );
    }
    Ok(())
}

fn report_or_na(
    result: Result<BoundReport, ConstantsError>,
    subject: &str,
    kind: BoundKind,
    gamma: f64,
    dim: u32,
) -> Result<BoundReport, ConstantsError> {
    match result {
        Err(ConstantsError::MissingConstant { requested, .. }) => Ok(BoundReport::not_applicable(
            subject.to_string(),
            kind,
            gamma,
            dim,
            requested,
        )),
        other => other,
    }
}

/// Bound reports for every (potential, γ, source), in config order.
pub fn bound_reports(cfg: &ExperimentConfig) -> Result<Vec<BoundReport>, CliError> {
    let results = spectra(cfg)?;
    let tasks: Vec<(usize, f64, ConstantRequest)> = (0..cfg.potentials.len())
        .flat_map(|i| {
            cfg.gammas
                .iter()
                .flat_map(move |&g| cfg.sources.iter().map(move |&s| (i, g, s)))
        })
        .collect();
    tasks
        .par_iter()
        .map(|&(i, g, source)| {
            let v = &cfg.potentials[i];
            let report = constants::resolve_constant(source, g, v.dim())
                .and_then(|c| constants::bound_report_from_spectrum(v, &results[i], c));
            report_or_na(report, &v.to_string(), BoundKind::RieszMean, g, v.dim())
                .map_err(numeric(&format!("potentials[{i}] gamma {g}")))
        })
        .collect()
}

/// `bound_check.csv` and `bound_check.json`.
pub fn cmd_bound_check(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let reports = bound_reports(cfg)?;
    let csv = reports_csv(&reports)?;
    write(&cfg.output_dir, "bound_check.csv", &csv)?;
    write(&cfg.output_dir, "bound_check.json", &json(&reports))?;
    print!("{}", String::from_utf8_lossy(&csv));
    Ok(())
}

/// `bs_counts.csv`: kernel counts against Sturm counts on the energy ladder.
pub fn cmd_bs(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let scfg = cfg.spectrum_config();
    let bs = &cfg.bs;
    let ladder = energy_ladder(bs.energy_min, bs.energy_max, bs.ladder_points);
    let one_d: Vec<(usize, Potential)> = cfg
        .potentials
        .iter()
        .enumerate()
        .filter(|(_, v)| v.dim() == 1)
        .map(|(i, v)| {
            (
                i,
                scfg.truncation_radius
                    .map_or(Ok(v.clone()), |r| v.with_truncation_radius(r))
                    .expect("validated radius"),
            )
        })
        .collect();
    for (i, v) in cfg
        .potentials
        .iter()
        .enumerate()
        .filter(|(_, v)| v.dim() != 1)
    {
        eprintln!("bs: skipping potentials[{i}] ({v}): kernels are one-dimensional");
    }
    let rows: Vec<Vec<BsRow>> = one_d
        .par_iter()
        .map(|(i, v)| {
            let ctx = format!("potentials[{i}]");
            let samples = birman_schwinger::ladder_sweep(v, &ladder, bs.grid_points, bs.keep)
                .map_err(numeric(&ctx))?;
            samples
                .into_iter()
                .map(|s| {
                    let fd = spectrum::counting_function(v, 1, s.energy, &scfg)
                        .map_err(numeric(&ctx))?
                        .count;
                    Ok(BsRow {
                        index: *i,
                        potential: v.to_string(),
                        energy: s.energy,
                        count_bs: s.count,
                        count_fd: fd,
                        top_eigenvalues: s
                            .top_eigenvalues
                            .iter()
                            .map(|m| format!("{m:e}"))
                            .collect::<Vec<_>>()
                            .join(";"),
                    })
                })
                .collect()
        })
        .collect::<Result<_, CliError>>()?;
    let bytes = serialize_rows(rows.iter().flatten())?;
    write(&cfg.output_dir, "bs_counts.csv", &bytes)?;
    if bs.export_matrix {
        for (i, v) in &one_d {
            let k = birman_schwinger::build_bs_matrix(v, ladder[0], bs.grid_points)
                .map_err(numeric("kernel export"))?;
            let mut buf = Vec::new();
            k.write_csv(&mut buf).map_err(numeric("kernel export"))?;
            write(&cfg.output_dir, &format!("bs_kernel_{i}.csv"), &buf)?;
        }
    }
    let mismatches = rows
        .iter()
        .flatten()
        .filter(|r| r.count_bs != r.count_fd)
        .count();
    println!(
        "{} ladder rows, {mismatches} count mismatches",
        rows.iter().map(Vec::len).sum::<usize>()
    );
    Ok(())
}

fn build_family(
    spec: &FamilySpec,
    index: usize,
    seed: u64,
) -> Result<OrthonormalFamily, KineticError> {
    match spec {
        FamilySpec::BoxModes {
            count,
            radius,
            interior,
        } => OrthonormalFamily::box_modes(Grid1d::new(*radius, *interior)?, *count),
        FamilySpec::Gaussians {
            centers,
            width,
            radius,
            interior,
        } => OrthonormalFamily::gaussians(Grid1d::new(*radius, *interior)?, centers, *width),
        FamilySpec::RandomGaussians {
            count,
            width,
            radius,
            interior,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(index as u64));
            let centers: Vec<f64> = (0..*count)
                .map(|_| rng.gen_range(-0.5 * radius..=0.5 * radius))
                .collect();
            let fam =
                OrthonormalFamily::gaussians(Grid1d::new(*radius, *interior)?, &centers, *width)?;
            OrthonormalFamily::orthonormalize(
                fam.grid(),
                fam.functions().to_vec(),
                format!("random_gaussians(N={count}, width={width}, seed={seed})"),
            )
        }
        FamilySpec::Csv { path } => {
            let file = fs::File::open(path)?;
            OrthonormalFamily::from_csv(file, format!("csv({})", path.display()))
        }
    }
}

/// `kinetic_extras.csv` row; Slater columns are empty unless N is 2 or 3
/// and the tensor grid fits.
#[derive(Serialize)]
struct FamilyExtras {
    family: String,
    particles: usize,
    grid_points: usize,
    gram_defect: f64,
    bessel_mass: f64,
    bessel_sup: f64,
    holder_quotient: f64,
    slater_density_gap: Option<f64>,
    slater_kinetic_gap: Option<f64>,
}

/// `kinetic.csv` (bound reports), `kinetic_extras.csv` and one
/// `density_<i>.csv` per family.
pub fn cmd_kinetic(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let kc = &cfg.kinetic;
    let families = kc
        .families
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            build_family(spec, i, cfg.seed).map_err(|e| match e {
                KineticError::Io(_) | KineticError::Csv(_) => {
                    CliError::Config(format!("kinetic.families[{i}]: {e}"))
                }
                other => CliError::Numeric(format!("kinetic.families[{i}]: {other}")),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let results = families
        .par_iter()
        .enumerate()
        .map(|(i, fam)| {
            let ctx = format!("kinetic.families[{i}]");
            let reports = kc
                .sources
                .iter()
                .map(|&s| {
                    let r = kinetic::kinetic_bound_report(fam, s).map_err(|e| match e {
                        KineticError::Constants(c) => c,
                        other => ConstantsError::Domain(other.to_string()),
                    });
                    report_or_na(r, fam.label(), BoundKind::KineticEnergy, 1.0, 1)
                        .map_err(numeric(&ctx))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let bessel = kinetic::bessel_density_1d(fam, kc.bessel_mass).map_err(numeric(&ctx))?;
            let slater = match kinetic::slater_reduction_check(fam) {
                Ok(c) => Some(c),
                Err(
                    KineticError::UnsupportedParticleCount(_) | KineticError::GridTooLarge { .. },
                ) => None,
                Err(e) => return Err(numeric(&ctx)(e)),
            };
            let extras = FamilyExtras {
                family: fam.label().to_string(),
                particles: fam.len(),
                grid_points: fam.grid().len(),
                gram_defect: fam.gram_defect(),
                bessel_mass: kc.bessel_mass,
                bessel_sup: bessel.sup(),
                holder_quotient: bessel.holder_quotient(),
                slater_density_gap: slater.map(|c| c.density),
                slater_kinetic_gap: slater.map(|c| c.kinetic),
            };
            let mut density = Vec::new();
            kinetic::density(fam)
                .write_csv(&mut density)
                .map_err(numeric(&ctx))?;
            Ok((reports, extras, density))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let reports: Vec<BoundReport> = results.iter().flat_map(|r| r.0.clone()).collect();
    write(&cfg.output_dir, "kinetic.csv", &reports_csv(&reports)?)?;
    write(&cfg.output_dir, "kinetic.json", &json(&reports))?;
    let extras = serialize_rows(results.iter().map(|r| &r.1))?;
    write(&cfg.output_dir, "kinetic_extras.csv", &extras)?;
    for (i, (_, _, density)) in results.iter().enumerate() {
        write(&cfg.output_dir, &format!("density_{i}.csv"), density)?;
    }
    print!("{}", String::from_utf8_lossy(&reports_csv(&reports)?));
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
struct ConstantRow {
    kind: &'static str,
    gamma: f64,
    n: u32,
    value: f64,
    source: String,
}

fn constant_rows() -> Vec<ConstantRow> {
    let mut rows = Vec::new();
    for n in 1..=3 {
        for g in [0.0, 0.5, 1.0, 1.5, 2.0, 3.0] {
            if let Ok(c) = constants::semiclassical_constant(g, n) {
                rows.push(ConstantRow {
                    kind: "L_semiclassical",
                    gamma: g,
                    n,
                    value: c.value,
                    source: c.source.to_string(),
                });
            }
        }
    }
    for k in 1..10 {
        let g = 0.5 + 0.1 * k as f64;
        if let Ok(c) = constants::conjectured_l_gamma_1(g) {
            rows.push(ConstantRow {
                kind: "L_conjectured",
                gamma: g,
                n: 1,
                value: c.value,
                source: c.source.to_string(),
            });
        }
    }
    for n in 1..=3 {
        for g in [0.5, 1.0, 1.5, 2.0, 3.0] {
            if let Some(c) = constants::known_sharp_constant(g, n) {
                rows.push(ConstantRow {
                    kind: "L_sharp",
                    gamma: g,
                    n,
                    value: c.value,
                    source: c.source.to_string(),
                });
            }
        }
    }
    for n in 1..=3 {
        let l = constants::semiclassical_constant(1.0, n).expect("gamma 1 is valid");
        if let Ok(k) = constants::kn_constant(n, &l) {
            rows.push(ConstantRow {
                kind: "K_n",
                gamma: 1.0,
                n,
                value: k,
                source: l.source.to_string(),
            });
        }
    }
    rows
}

/// `constants.csv`: L^c table, conjectured values, sharp table and K_n.
pub fn cmd_constants(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let rows = constant_rows();
    write(&cfg.output_dir, "constants.csv", &serialize_rows(&rows)?)?;
    println!(
        "{:<16} {:>5} {:>2} {:>22}  source",
        "kind", "gamma", "n", "value"
    );
    for r in &rows {
        println!(
            "{:<16} {:>5} {:>2} {:>22}  {}",
            r.kind, r.gamma, r.n, r.value, r.source
        );
    }
    Ok(())
}

/// `acceptance.txt` and `acceptance.json`; fails when any criterion fails.
pub fn cmd_accept(cfg: &ExperimentConfig) -> Result<AcceptanceReport, CliError> {
    let report = acceptance::run_all(&cfg.acceptance);
    let text = report.to_text();
    write(&cfg.output_dir, "acceptance.txt", text.as_bytes())?;
    write(&cfg.output_dir, "acceptance.json", &json(&report))?;
    print!("{text}");
    if report.all_passed() {
        Ok(report)
    } else {
        let failed: Vec<String> = report
            .failed()
            .iter()
            .map(|o| format!("{} ({})", o.id, o.name))
            .collect();
        Err(CliError::AcceptanceFailed(failed.join(", ")))
    }
}
