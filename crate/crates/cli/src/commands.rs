use std::fmt::Write as _;

use serde::Serialize;

use detblow_core::blowup::{analyze_y, assemble_ideal, en_betti_table, BlowupMode, GeneratorCounts, YReport};
use detblow_core::bminimal::BMinimalProfile;
use detblow_core::hilburch::{analyze, Line, LinePoints, VarietyReport};
use detblow_core::secants::{rational_point, LocusOptions, RankLocusReport, SecantError, SecantSystem};

use crate::config::{MatrixSource, RunConfig, SourceInfo};
use crate::error::Failure;
use crate::matrix_io::MatrixFile;
use crate::output::{opt, Report};

fn degree_rows(rows: &[Vec<i64>]) -> String {
    rows.iter().map(|r| r.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")).collect::<Vec<_>>().join(";")
}

fn header(out: &mut String, src: &SourceInfo) {
    let seed = src.seed.map(|s| format!(", seed {s}")).unwrap_or_default();
    let _ = writeln!(out, "P^{} degree matrix {} (p = {}{seed})", src.n, degree_rows(&src.degree_matrix), src.p);
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub command: &'static str,
    pub source: SourceInfo,
    pub profile: Option<BMinimalProfile>,
    /// Degree predicted by the degree matrix alone.
    pub degree_from_twists: i64,
    pub variety: VarietyReport,
}

impl Report for AnalyzeReport {
    fn text(&self) -> String {
        let v = &self.variety;
        let mut out = String::new();
        header(&mut out, &self.source);
        let _ = writeln!(out, "dimension {}, degree {}, sigma {}", v.dimension, v.degree, v.sigma);
        let _ = writeln!(out, "degree from twists {}", self.degree_from_twists);
        let _ = writeln!(out, "arithmetic genus {}, sectional genus {}", opt(&v.genus), opt(&v.sectional_genus));
        if let Some(p) = &self.profile {
            let _ = writeln!(out, "profile s = {}, d = {}, k = {}, rho = {}, template {:?}", p.s, p.d, p.k, p.rho, p.template);
        }
        let _ = writeln!(out, "t\tH(t)\tdifferences");
        for row in &v.hilbert_table {
            let diffs: Vec<String> = row.differences.iter().map(|d| d.to_string()).collect();
            let _ = writeln!(out, "{}\t{}\t{}", row.t, row.h, diffs.join(" "));
        }
        out
    }
}

pub fn cmd_analyze(cfg: &RunConfig, src: &MatrixSource) -> Result<AnalyzeReport, Failure> {
    let source = src.resolve(cfg)?;
    let variety = analyze(&source.matrix, cfg.max_degree)?;
    Ok(AnalyzeReport {
        command: "analyze",
        source: source.info(),
        profile: source.profile.clone(),
        degree_from_twists: source.matrix.degrees.variety_degree(),
        variety,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LineCheck {
    pub line: Line,
    pub length: usize,
    pub points: LinePoints,
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    /// Point of the secant locus.
    pub parameter: Vec<u64>,
    pub line: Line,
    pub length: usize,
    /// The line meets the variety in a scheme of length at least sigma.
    pub verified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SecantsReport {
    pub command: &'static str,
    pub source: SourceInfo,
    pub lines: Option<RankLocusReport>,
    pub secants: Option<RankLocusReport>,
    /// Nonemptiness predicted by `sigma <= 2n - 5` and `sigma <= 2n - 2`.
    pub lines_expected_nonempty: Option<bool>,
    pub secants_expected_nonempty: Option<bool>,
    pub line_check: Option<LineCheck>,
    pub witness: Option<Witness>,
    pub witness_note: Option<String>,
}

fn locus_text(out: &mut String, name: &str, r: &RankLocusReport) {
    let status = match r.is_empty() {
        Some(true) => "empty".to_string(),
        Some(false) => "nonempty".to_string(),
        None => "undetermined".to_string(),
    };
    let _ = writeln!(
        out,
        "{name}: {status} ({:?}), expected codim {} in P^{}, dimension {}, degree {}{}",
        r.certificate,
        r.expected_codim,
        r.ambient_dim,
        opt(&r.dimension),
        opt(&r.degree),
        if r.budget_hit { ", budget reached" } else { "" }
    );
}

impl Report for SecantsReport {
    fn text(&self) -> String {
        let mut out = String::new();
        header(&mut out, &self.source);
        if let Some(r) = &self.lines {
            locus_text(&mut out, "lines", r);
        }
        if let Some(r) = &self.secants {
            locus_text(&mut out, "secants", r);
        }
        if let (Some(l), Some(s)) = (self.lines_expected_nonempty, self.secants_expected_nonempty) {
            let _ = writeln!(out, "thresholds predict lines nonempty {l}, secants nonempty {s}");
        }
        if let Some(c) = &self.line_check {
            let _ = writeln!(
                out,
                "line {:?} {:?}: length {}, {} rational points, irrational part of degree {}",
                c.line.p,
                c.line.q,
                c.length,
                c.points.points.len(),
                c.points.irrational_degree
            );
        }
        if let Some(w) = &self.witness {
            let _ = writeln!(out, "witness {:?} -> line {:?} {:?}, length {}, verified {}", w.parameter, w.line.p, w.line.q, w.length, w.verified);
        }
        if let Some(note) = &self.witness_note {
            let _ = writeln!(out, "witness: {note}");
        }
        out
    }
}

pub fn locus_options(cfg: &RunConfig, measure: bool) -> LocusOptions {
    LocusOptions { cap: cfg.max_degree, budget: cfg.budget, measure }
}

pub fn cmd_secants(
    cfg: &RunConfig,
    src: &MatrixSource,
    line: Option<&str>,
    witness: bool,
    measure: bool,
) -> Result<SecantsReport, Failure> {
    let source = src.resolve(cfg)?;
    let hb = &source.matrix;
    let mut report = SecantsReport {
        command: "secants",
        source: source.info(),
        lines: None,
        secants: None,
        lines_expected_nonempty: None,
        secants_expected_nonempty: None,
        line_check: None,
        witness: None,
        witness_note: None,
    };
    if let Some(text) = line {
        let line = Line::parse(text).map_err(|e| Failure::Input(format!("bad --line: {e}")))?;
        let length = hb.intersection_length(&line)?;
        let points = hb.points_on_line(&line, cfg.seed)?;
        report.line_check = Some(LineCheck { line, length, points });
        return Ok(report);
    }
    let system = SecantSystem::build(hb)?;
    let opts = locus_options(cfg, measure);
    let (n, sigma) = (system.n, system.sigma);
    report.lines = Some(system.line_locus(&opts)?);
    let gamma = system.secant_locus(&opts)?;
    report.lines_expected_nonempty = Some(sigma + 5 <= 2 * n);
    report.secants_expected_nonempty = Some(sigma + 2 <= 2 * n);
    if witness {
        match (gamma.is_empty(), gamma.dimension) {
            (Some(false), Some(dim)) if dim >= 0 => {
                let ideal = system.secant_ideal()?.with_budget(cfg.budget);
                match rational_point(&ideal, dim as usize, cfg.seed, 8) {
                    Ok(y) => {
                        let line = system.secant_line_from_parameter(&y)?;
                        let length = hb.intersection_length(&line)?;
                        report.witness = Some(Witness { parameter: y, line, length, verified: length >= sigma });
                    }
                    Err(SecantError::NoRationalPoint { attempts }) => {
                        report.witness_note = Some(format!("no rational point on the secant locus after {attempts} attempts"));
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            (Some(true), _) => report.witness_note = Some("secant locus is empty".into()),
            _ => report.witness_note = Some("secant locus was not measured".into()),
        }
    }
    report.secants = Some(gamma);
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct BlowupReport {
    pub command: &'static str,
    pub source: SourceInfo,
    pub mode: BlowupMode,
    pub image_degree: u32,
    pub variables: Vec<String>,
    pub generators: Vec<String>,
    pub counts: GeneratorCounts,
    /// Indices of generators not annihilated by the substitution map.
    pub psi_failures: Vec<usize>,
    pub n_embed: u64,
    pub degree: u64,
    pub dimension: i64,
    pub sectional_genus: Option<i64>,
    /// Eagon–Northcott table as `[index, twist, multiplicity]`, for all-linear sources.
    pub betti_table: Option<Vec<(u32, i64, u64)>>,
    pub betti_consistent: Option<bool>,
    pub y: YReport,
}

impl Report for BlowupReport {
    fn text(&self) -> String {
        let mut out = String::new();
        header(&mut out, &self.source);
        let c = &self.counts;
        let _ = writeln!(out, "mode {:?}, image degree {}", self.mode, self.image_degree);
        let _ = writeln!(
            out,
            "generators: {} minors of X, {} entries of BX, {} minors of B, {} linear forms",
            c.x_minors, c.bx_entries, c.b_minors, c.linear
        );
        let _ = writeln!(out, "psi failures: {}", self.psi_failures.len());
        let _ = writeln!(
            out,
            "Y in P^{}: dimension {}, degree {}, sectional genus {}",
            self.n_embed,
            self.dimension,
            self.degree,
            opt(&self.sectional_genus)
        );
        if let Some(table) = &self.betti_table {
            let cells: Vec<String> = table.iter().map(|(i, t, m)| format!("{m}xS(-{t})@{i}")).collect();
            let _ = writeln!(out, "Eagon-Northcott {} consistent {}", cells.join(" "), opt(&self.betti_consistent));
        }
        for g in &self.generators {
            let _ = writeln!(out, "  {g}");
        }
        out
    }
}

pub fn cmd_blowup(cfg: &RunConfig, src: &MatrixSource, mode: BlowupMode) -> Result<BlowupReport, Failure> {
    let source = src.resolve(cfg)?;
    let pres = assemble_ideal(&source.matrix, mode)?;
    let names = pres.psi.variable_names();
    let y = analyze_y(&pres, cfg.max_degree, 10)?;
    let betti_table = match y.betti_consistent {
        Some(_) => Some(en_betti_table(pres.psi.n, pres.b.rows)?.entries),
        None => None,
    };
    Ok(BlowupReport {
        command: "blowup",
        source: source.info(),
        mode,
        image_degree: pres.psi.image_degree,
        generators: pres.generators().iter().map(|g| g.render(&names)).collect(),
        variables: names,
        counts: y.generator_counts,
        psi_failures: pres.psi_failures(),
        n_embed: y.n_embed,
        degree: y.fit.degree,
        dimension: y.fit.dimension,
        sectional_genus: y.fit.sectional_genus,
        betti_table,
        betti_consistent: y.betti_consistent,
        y,
    })
}

/// `sample` prints the matrix file itself.
#[derive(Debug, Clone, Serialize)]
#[serde(transparent)]
pub struct SampleReport(pub MatrixFile);

impl Report for SampleReport {
    fn text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.0).expect("matrix files always serialize");
        s.push('\n');
        s
    }
}

pub fn cmd_sample(cfg: &RunConfig, src: &MatrixSource) -> Result<SampleReport, Failure> {
    let source = src.resolve(cfg)?;
    Ok(SampleReport(MatrixFile::from_matrix(&source.matrix)))
}
