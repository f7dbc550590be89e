//! Experiment configuration: one JSON document per run.
//!
//! Command-line flags override the matching fields after the file is read.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use ltlab::acceptance::AcceptanceOptions;
use ltlab::constants::ConstantRequest;
use ltlab::potentials::Potential;
use ltlab::spectrum::SpectrumConfig;
use ltlab::validity::check_gamma;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub potentials: Vec<Potential>,
    pub gammas: Vec<f64>,
    /// Dimensions taking part; empty means "whatever the potentials use".
    pub dims: Vec<u32>,
    pub sources: Vec<ConstantRequest>,
    pub grid_points: usize,
    /// Replaces every potential's own truncation radius when set.
    pub truncation_radius: Option<f64>,
    pub richardson: bool,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub bs: BsConfig,
    pub kinetic: KineticConfig,
    pub acceptance: AcceptanceOptions,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            potentials: vec![
                Potential::poschl_teller(1, 1.0, 20.0).expect("valid"),
                Potential::poschl_teller(1, 2.0, 20.0).expect("valid"),
                Potential::square_well(1, 4.0, 1.5, 20.0).expect("valid"),
                Potential::gaussian_well(1, 10.0, 1.0, 20.0).expect("valid"),
            ],
            gammas: vec![0.5, 1.0, 1.5],
            dims: Vec::new(),
            sources: vec![ConstantRequest::Semiclassical, ConstantRequest::SharpKnown],
            grid_points: ltlab::spectrum::DEFAULT_GRID_POINTS,
            truncation_radius: None,
            richardson: true,
            output_dir: PathBuf::from("out"),
            seed: 0,
            bs: BsConfig::default(),
            kinetic: KineticConfig::default(),
            acceptance: AcceptanceOptions::default(),
        }
    }
}

/// Birman–Schwinger sweep over a geometric energy ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BsConfig {
    pub grid_points: usize,
    pub energy_min: f64,
    pub energy_max: f64,
    pub ladder_points: usize,
    /// Largest kernel eigenvalues kept per energy.
    pub keep: usize,
    /// Also write the kernel matrix at the lowest ladder energy.
    pub export_matrix: bool,
}

impl Default for BsConfig {
    fn default() -> Self {
        BsConfig {
            grid_points: 400,
            energy_min: 0.05,
            energy_max: 8.0,
            ladder_points: 16,
            keep: 4,
            export_matrix: false,
        }
    }
}

/// How to build one orthonormal family on [−radius, radius].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    BoxModes {
        count: usize,
        radius: f64,
        interior: usize,
    },
    Gaussians {
        centers: Vec<f64>,
        width: f64,
        radius: f64,
        interior: usize,
    },
    /// Centers drawn uniformly from [−radius/2, radius/2] with the run seed.
    RandomGaussians {
        count: usize,
        width: f64,
        radius: f64,
        interior: usize,
    },
    /// Columns x, f1, …, fN; relative paths resolve against the config file.
    Csv { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KineticConfig {
    pub families: Vec<FamilySpec>,
    pub sources: Vec<ConstantRequest>,
    pub bessel_mass: f64,
}

impl Default for KineticConfig {
    fn default() -> Self {
        KineticConfig {
            families: vec![
                FamilySpec::BoxModes {
                    count: 8,
                    radius: 1.0,
                    interior: 1999,
                },
                FamilySpec::BoxModes {
                    count: 2,
                    radius: 1.0,
                    interior: 46,
                },
                FamilySpec::Gaussians {
                    centers: vec![0.0],
                    width: 1.0,
                    radius: 8.0,
                    interior: 1599,
                },
            ],
            sources: vec![ConstantRequest::Semiclassical, ConstantRequest::Conjectured],
            bessel_mass: 1.0,
        }
    }
}

/// Flag values that override the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub grid: Option<usize>,
    pub radius: Option<f64>,
}

impl ExperimentConfig {
    /// Reads and validates a config file. Relative CSV family paths are
    /// rewritten against the file's directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for fam in &mut cfg.kinetic.families {
            if let FamilySpec::Csv { path } = fam {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
        }
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(out) = &o.out {
            self.output_dir = out.clone();
        }
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if let Some(grid) = o.grid {
            self.grid_points = grid;
        }
        if let Some(radius) = o.radius {
            self.truncation_radius = Some(radius);
        }
    }

    /// Dimensions in play: `dims` if given, else those of the potentials.
    pub fn dims(&self) -> Vec<u32> {
        if self.dims.is_empty() {
            self.potentials
                .iter()
                .map(|p| p.dim())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect()
        } else {
            self.dims.clone()
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        let dims = self.dims();
        for (i, p) in self.potentials.iter().enumerate() {
            if !dims.contains(&p.dim()) {
                return bad(format!(
                    "potentials[{i}] has n = {} which is not listed in dims {dims:?}",
                    p.dim()
                ));
            }
        }
        for &n in &dims {
            for &g in &self.gammas {
                check_gamma(g, n).map_err(|e| CliError::Config(format!("gammas: {e}")))?;
            }
        }
        if self.grid_points < ltlab::spectrum::MIN_GRID_POINTS {
            return bad(format!(
                "grid_points must be at least {}",
                ltlab::spectrum::MIN_GRID_POINTS
            ));
        }
        if let Some(r) = self.truncation_radius {
            if !(r > 0.0 && r.is_finite()) {
                return bad(format!("truncation_radius must be positive, got {r}"));
            }
        }
        for s in self.sources.iter().chain(&self.kinetic.sources) {
            if let ConstantRequest::UserSupplied(v) = s {
                if !(*v > 0.0 && v.is_finite()) {
                    return bad(format!("user_supplied constant must be positive, got {v}"));
                }
            }
        }
        let bs = &self.bs;
        if bs.grid_points == 0
            || bs.ladder_points == 0
            || !(bs.energy_min > 0.0 && bs.energy_max >= bs.energy_min)
        {
            return bad(
                "bs: need grid_points > 0, ladder_points > 0 and 0 < energy_min <= energy_max"
                    .into(),
            );
        }
        if !(self.kinetic.bessel_mass > 0.0 && self.kinetic.bessel_mass.is_finite()) {
            return bad(format!(
                "kinetic.bessel_mass must be positive, got {}",
                self.kinetic.bessel_mass
            ));
        }
        Ok(())
    }

    pub fn spectrum_config(&self) -> SpectrumConfig {
        let mut cfg = SpectrumConfig::default().with_grid(self.grid_points);
        cfg.truncation_radius = self.truncation_radius;
        cfg.richardson = self.richardson;
        cfg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips() {
        let cfg = ExperimentConfig::default();
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
        cfg.validate().unwrap();
    }

    #[test]
    fn invalid_gamma_for_dimension() {
        let cfg = ExperimentConfig {
            gammas: vec![0.25],
            ..Default::default()
        };
        assert!(matches!(cfg.validate(), Err(CliError::Config(_))));
    }

    #[test]
    fn overrides_take_precedence() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply(&Overrides {
            grid: Some(500),
            radius: Some(7.0),
            seed: Some(9),
            out: Some("x".into()),
        });
        assert_eq!(
            (cfg.grid_points, cfg.truncation_radius, cfg.seed),
            (500, Some(7.0), 9)
        );
        assert_eq!(cfg.spectrum_config().truncation_radius, Some(7.0));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = serde_json::from_str::<ExperimentConfig>(r#"{"gamma": [1.0]}"#).unwrap_err();
        assert!(err.to_string().contains("unknown field"));
    }
}
