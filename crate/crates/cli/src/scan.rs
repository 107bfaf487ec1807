use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use detblow_core::secants::{RankLocusReport, SecantSystem};

use crate::commands::locus_options;
use crate::config::{linear_degrees, sample, RunConfig};
use crate::error::Failure;
use crate::output::Report;

/// Parse `"a"` or the inclusive range `"a..b"`.
pub fn parse_range(text: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::Input(format!("bad range {text:?}; use a or a..b"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    match text.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(bad());
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![num(text)?]),
    }
}

pub fn parse_list(text: &str) -> Result<Vec<u64>, Failure> {
    text.split(',')
        .map(|s| s.trim().parse::<u64>().map_err(|_| Failure::Input(format!("bad seed list {text:?}"))))
        .collect()
}

/// One locus in one cell: a verdict, or `None` past the budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocusCell {
    pub nonempty: Option<bool>,
    pub dimension: Option<i64>,
    pub degree: Option<u64>,
    /// The work budget stopped the computation.
    pub timeout: bool,
}

impl LocusCell {
    fn from_report(r: &RankLocusReport) -> Self {
        LocusCell {
            nonempty: r.is_empty().map(|e| !e),
            dimension: r.dimension,
            degree: r.degree,
            timeout: r.budget_hit,
        }
    }

    fn csv_fields(&self) -> [String; 3] {
        // An unresolved verdict always means the cell ran out of room; a
        // missing measurement may just not have been requested.
        let measured = |v: Option<String>| v.unwrap_or_else(|| if self.timeout { "TIMEOUT".into() } else { String::new() });
        [
            self.nonempty.map(|b| b.to_string()).unwrap_or_else(|| "TIMEOUT".into()),
            measured(self.dimension.map(|d| d.to_string())),
            measured(self.degree.map(|d| d.to_string())),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub n: usize,
    pub sigma: usize,
    pub seed: u64,
    pub lines: LocusCell,
    pub secants: LocusCell,
    /// `sigma <= 2n - 5`
    pub lines_expected: bool,
    /// `sigma <= 2n - 2`
    pub secants_expected: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub command: &'static str,
    pub p: u64,
    pub rows: Vec<ScanRow>,
}

pub const CSV_HEADER: &str = "n,sigma,seed,lines_nonempty,lines_dim,lines_deg,lines_expected,secants_nonempty,secants_dim,secants_deg,secants_expected";

impl Report for ScanReport {
    fn text(&self) -> String {
        self.csv().unwrap()
    }

    fn csv(&self) -> Option<String> {
        let mut out = String::new();
        let _ = writeln!(out, "{CSV_HEADER}");
        for r in &self.rows {
            let [ln, ld, lg] = r.lines.csv_fields();
            let [sn, sd, sg] = r.secants.csv_fields();
            let _ = writeln!(
                out,
                "{},{},{},{ln},{ld},{lg},{},{sn},{sd},{sg},{}",
                r.n, r.sigma, r.seed, r.lines_expected, r.secants_expected
            );
        }
        Some(out)
    }
}

fn empty_cell() -> LocusCell {
    LocusCell { nonempty: None, dimension: None, degree: None, timeout: false }
}

pub fn scan_cell(cfg: &RunConfig, n: usize, sigma: usize, seed: u64, measure: bool) -> ScanRow {
    let mut row = ScanRow {
        n,
        sigma,
        seed,
        lines: empty_cell(),
        secants: empty_cell(),
        lines_expected: sigma + 5 <= 2 * n,
        secants_expected: sigma + 2 <= 2 * n,
        error: None,
    };
    let cell_cfg = RunConfig { seed, ..*cfg };
    let run = || -> Result<(LocusCell, LocusCell), Failure> {
        let hb = sample(&cell_cfg, &linear_degrees(sigma)?, n)?;
        let system = SecantSystem::build(&hb)?;
        let opts = locus_options(&cell_cfg, measure);
        let lines = LocusCell::from_report(&system.line_locus(&opts)?);
        let secants = LocusCell::from_report(&system.secant_locus(&opts)?);
        Ok((lines, secants))
    };
    match run() {
        Ok((l, s)) => {
            row.lines = l;
            row.secants = s;
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

pub fn cmd_phase_scan(cfg: &RunConfig, ns: &[usize], sigmas: &[usize], seeds: &[u64], measure: bool) -> Result<ScanReport, Failure> {
    let mut cells = Vec::new();
    for &n in ns {
        if n < 2 {
            return Err(Failure::Input(format!("ambient dimension must be at least 2, got {n}")));
        }
        for &sigma in sigmas {
            if sigma < n {
                continue;
            }
            for &seed in seeds {
                cells.push((n, sigma, seed));
            }
        }
    }
    let rows = cells.par_iter().map(|&(n, sigma, seed)| scan_cell(cfg, n, sigma, seed, measure)).collect();
    Ok(ScanReport { command: "phase-scan", p: cfg.field.p(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3..5").unwrap(), vec![3, 4, 5]);
        assert_eq!(parse_range("3..=4").unwrap(), vec![3, 4]);
        assert_eq!(parse_range("7").unwrap(), vec![7]);
        assert!(parse_range("5..3").is_err());
        assert_eq!(parse_list("1, 2,3").unwrap(), vec![1, 2, 3]);
    }

    #[test]
    fn twisted_cubic_cells() {
        let cfg = RunConfig::default();
        let report = cmd_phase_scan(&cfg, &[3], &[4, 5], &[1], false).unwrap();
        let secants: Vec<Option<bool>> = report.rows.iter().map(|r| r.secants.nonempty).collect();
        assert_eq!(secants, vec![Some(true), Some(false)]);
        assert!(report.csv().unwrap().starts_with(CSV_HEADER));
    }
}
