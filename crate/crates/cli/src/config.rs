use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use detblow_core::bminimal::BMinimalProfile;
use detblow_core::field::PrimeField;
use detblow_core::graded::Budget;
use detblow_core::hilburch::{sample_nondegenerate, DegreeMatrix, HilbertBurchMatrix};

use crate::error::Failure;
use crate::matrix_io::parse_matrix;

/// Resampling attempts before a seeded instance is declared degenerate.
pub const SAMPLE_RETRIES: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub field: PrimeField,
    pub seed: u64,
    pub max_degree: Option<u32>,
    pub format: Format,
    pub budget: Budget,
}

impl RunConfig {
    pub fn new(p: u64, seed: u64, max_degree: Option<u32>, format: Format, budget: Budget) -> Result<Self, Failure> {
        let field = PrimeField::new(p)?;
        if let Some(cap) = max_degree {
            if cap < 4 {
                return Err(Failure::Input(format!("--max-degree must be at least 4, got {cap}")));
            }
        }
        Ok(RunConfig { field, seed, max_degree, format, budget })
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            field: PrimeField::default(),
            seed: 1,
            max_degree: None,
            format: Format::Text,
            budget: Budget { max_columns: 60_000, max_rows: 2_000_000 },
        }
    }
}

/// Where a matrix comes from: a JSON file or a seeded template.
#[derive(Debug, Clone, Default, Args)]
pub struct MatrixSource {
    /// Matrix JSON file.
    #[arg(long, value_name = "FILE")]
    pub matrix_file: Option<PathBuf>,
    /// Degree matrix with rows separated by `;`, e.g. "2,2,2;1,1,1".
    #[arg(long, value_name = "ROWS")]
    pub degrees: Option<String>,
    /// Template of the minimal-genus curve of this degree in P^3.
    #[arg(long, value_name = "S")]
    pub bminimal: Option<u64>,
    /// All-linear sigma x (sigma + 1) matrix.
    #[arg(long, visible_alias = "sigma", value_name = "SIGMA")]
    pub linear: Option<usize>,
    /// Ambient projective dimension for sampled templates.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
}

/// A matrix together with the curve profile it was built from, if any.
#[derive(Debug, Clone)]
pub struct Source {
    pub matrix: HilbertBurchMatrix,
    pub profile: Option<BMinimalProfile>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SourceInfo {
    pub p: u64,
    pub n: usize,
    pub seed: Option<u64>,
    pub degree_matrix: Vec<Vec<i64>>,
}

impl Source {
    pub fn info(&self) -> SourceInfo {
        SourceInfo {
            p: self.matrix.field.p(),
            n: self.matrix.n,
            seed: self.matrix.seed,
            degree_matrix: self.matrix.degrees.entries.clone(),
        }
    }
}

pub fn linear_degrees(sigma: usize) -> Result<DegreeMatrix, Failure> {
    if sigma == 0 {
        return Err(Failure::Input("sigma must be positive".into()));
    }
    Ok(DegreeMatrix::new(vec![vec![1; sigma + 1]; sigma])?)
}

pub fn sample(cfg: &RunConfig, degrees: &DegreeMatrix, n: usize) -> Result<HilbertBurchMatrix, Failure> {
    if n < 2 {
        return Err(Failure::Input(format!("ambient dimension must be at least 2, got {n}")));
    }
    Ok(sample_nondegenerate(cfg.field, degrees, n, cfg.seed, SAMPLE_RETRIES)?)
}

impl MatrixSource {
    pub fn resolve(&self, cfg: &RunConfig) -> Result<Source, Failure> {
        let given = [self.matrix_file.is_some(), self.degrees.is_some(), self.bminimal.is_some(), self.linear.is_some()]
            .iter()
            .filter(|&&b| b)
            .count();
        if given != 1 {
            return Err(Failure::Input(
                "give exactly one of --matrix-file, --degrees, --bminimal, --linear/--sigma".into(),
            ));
        }
        if let Some(path) = &self.matrix_file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
            let matrix = parse_matrix(&text)?;
            matrix.check_nondegenerate()?;
            return Ok(Source { matrix, profile: None });
        }
        if let Some(s) = self.bminimal {
            if self.n != 3 {
                return Err(Failure::Input("--bminimal templates live in P^3".into()));
            }
            let profile = BMinimalProfile::from_degree(s)?;
            let matrix = sample(cfg, &profile.degree_matrix(), 3)?;
            return Ok(Source { matrix, profile: Some(profile) });
        }
        let degrees = match (&self.degrees, self.linear) {
            (Some(text), _) => DegreeMatrix::parse(text).map_err(Failure::Input)?,
            (None, Some(sigma)) => linear_degrees(sigma)?,
            _ => unreachable!("exactly one source is present"),
        };
        Ok(Source { matrix: sample(cfg, &degrees, self.n)?, profile: None })
    }
}
