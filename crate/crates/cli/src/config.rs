//! Run configuration: built-in defaults, then the TOML file named by
//! `SHARPTOP_CONFIG`, then command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use sharptop_core::funcspaces::SpatialGrid;
use sharptop_core::sampled::{EstimatorConfig, SampleGrid, NEGLIGIBILITY_FLOOR, UNDECIDED_THRESHOLD};

use crate::error::CliError;

pub const CONFIG_ENV: &str = "SHARPTOP_CONFIG";

pub const DEFAULT_GRID: (i32, i32) = (1, 20);
pub const DEFAULT_TOL: f64 = 0.05;

/// The optional keys of a config file.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub grid: Option<String>,
    pub spatial: Option<usize>,
    pub tol: Option<f64>,
    pub undecided: Option<f64>,
    pub floor: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub k_min: i32,
    pub k_max: i32,
    pub spatial: usize,
    pub tol: f64,
    pub undecided: f64,
    pub floor: f64,
    pub seed: u64,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub csv: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            k_min: DEFAULT_GRID.0,
            k_max: DEFAULT_GRID.1,
            spatial: SpatialGrid::default().per_axis,
            tol: DEFAULT_TOL,
            undecided: UNDECIDED_THRESHOLD,
            floor: NEGLIGIBILITY_FLOOR,
            seed: 0,
            out: None,
            csv: None,
        }
    }
}

/// `kmin:kmax`.
pub fn parse_grid(s: &str) -> Result<(i32, i32), CliError> {
    let bad = || CliError::Usage(format!("grid must be kmin:kmax with 0 <= kmin < kmax, got '{s}'"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let a: i32 = a.trim().parse().map_err(|_| bad())?;
    let b: i32 = b.trim().parse().map_err(|_| bad())?;
    if a < 0 || a >= b {
        return Err(bad());
    }
    Ok((a, b))
}

/// Values given on the command line; `None` falls through to the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub grid: Option<String>,
    pub spatial: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(file: Option<&ConfigFile>, flags: &Overrides) -> Result<Self, CliError> {
        let mut c = RunConfig::default();
        if let Some(f) = file {
            if let Some(g) = &f.grid {
                (c.k_min, c.k_max) = parse_grid(g).map_err(|e| CliError::Config(e.to_string()))?;
            }
            c.spatial = f.spatial.unwrap_or(c.spatial);
            c.tol = f.tol.unwrap_or(c.tol);
            c.undecided = f.undecided.unwrap_or(c.undecided);
            c.floor = f.floor.unwrap_or(c.floor);
            c.seed = f.seed.unwrap_or(c.seed);
            c.out = f.out.clone().or(c.out);
            c.csv = f.csv.clone().or(c.csv);
        }
        if let Some(g) = &flags.grid {
            (c.k_min, c.k_max) = parse_grid(g)?;
        }
        c.spatial = flags.spatial.unwrap_or(c.spatial);
        c.tol = flags.tol.unwrap_or(c.tol);
        c.seed = flags.seed.unwrap_or(c.seed);
        c.out = flags.out.clone().or(c.out);
        c.csv = flags.csv.clone().or(c.csv);
        c.validate()?;
        Ok(c)
    }

    /// Reads `SHARPTOP_CONFIG` when set.
    pub fn from_env(flags: &Overrides) -> Result<Self, CliError> {
        let file = match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Some(ConfigFile::load(Path::new(&p))?),
            _ => None,
        };
        Self::resolve(file.as_ref(), flags)
    }

    fn validate(&self) -> Result<(), CliError> {
        for (name, v) in [("tol", self.tol), ("undecided", self.undecided), ("floor", self.floor)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!("{name} must be a positive finite number, got {v}")));
            }
        }
        if self.spatial < 2 {
            return Err(CliError::Config(format!("spatial must be at least 2, got {}", self.spatial)));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<SampleGrid, CliError> {
        Ok(SampleGrid::new(self.k_min, self.k_max)?)
    }

    pub fn spatial_grid(&self) -> SpatialGrid {
        SpatialGrid::new(self.spatial)
    }

    pub fn estimator(&self) -> EstimatorConfig {
        EstimatorConfig {
            floor: self.floor,
            undecided: self.undecided,
        }
    }
}
