//! Recompute the worked examples and compare with `data/examples.toml`.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use detblow_core::blowup::{analyze_y, assemble_ideal, BlowupMode};
use detblow_core::hilburch::{analyze, DegreeMatrix, HilbertBurchMatrix, Line};
use detblow_core::liaison::residual;
use detblow_core::linalg::DenseMatrix;
use detblow_core::poly::Form;
use detblow_core::secants::{LocusOptions, SecantSystem};

use crate::config::{linear_degrees, sample, RunConfig};
use crate::error::Failure;
use crate::output::Report;

pub const EXPECTATIONS: &str = include_str!("../data/examples.toml");

#[derive(Debug, Clone, Deserialize)]
pub struct Expectations {
    pub example: Vec<ExampleSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExampleSpec {
    pub id: String,
    pub title: String,
    pub parts: Vec<PartSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartSpec {
    pub label: String,
    pub n: usize,
    pub degrees: Option<String>,
    pub linear: Option<usize>,
    pub curve: Option<VarietyExpectation>,
    pub blowup: Option<BlowupExpectation>,
    pub presentation: Option<PresentationExpectation>,
    pub liaison: Option<LiaisonExpectation>,
    /// Length of the intersection with the line cut out by the first column.
    pub first_column_line: Option<usize>,
    pub secants: Option<LocusExpectation>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarietyExpectation {
    pub dimension: i64,
    pub degree: u64,
    pub genus: Option<i64>,
    pub sigma: Option<u32>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowupExpectation {
    pub mode: BlowupMode,
    pub n_embed: u64,
    pub dimension: i64,
    pub degree: u64,
    pub sectional_genus: i64,
    pub x_minors: usize,
    pub bx_entries: usize,
    pub b_minors: usize,
    pub linear: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationExpectation {
    pub mode: BlowupMode,
    pub image_degree: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiaisonExpectation {
    pub a: i64,
    pub b: i64,
    pub degree: i64,
    pub genus: i64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocusExpectation {
    pub dimension: i64,
    pub degree: u64,
}

pub fn expectations() -> Expectations {
    toml::from_str(EXPECTATIONS).expect("the bundled expectation table parses")
}

pub fn parse_expectations(text: &str) -> Result<Expectations, Failure> {
    toml::from_str(text).map_err(|e| Failure::Input(format!("malformed expectation table: {e}")))
}

pub fn example_ids() -> Vec<String> {
    expectations().example.into_iter().map(|e| e.id).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub part: String,
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExampleResult {
    pub id: String,
    pub title: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExamplesReport {
    pub command: &'static str,
    pub p: u64,
    pub seed: u64,
    pub pass: bool,
    pub examples: Vec<ExampleResult>,
}

impl Report for ExamplesReport {
    fn text(&self) -> String {
        let mut out = String::new();
        for ex in &self.examples {
            let _ = writeln!(out, "{} {} ({})", ex.id, if ex.pass { "PASS" } else { "FAIL" }, ex.title);
            for c in &ex.checks {
                let mark = if c.pass { "ok" } else { "MISMATCH" };
                let _ = writeln!(out, "  {} {}: expected {}, computed {} {mark}", c.part, c.name, c.expected, c.computed);
            }
        }
        out
    }
}

struct Checks<'a> {
    part: &'a str,
    list: Vec<Check>,
}

impl Checks<'_> {
    fn eq<T: ToString + PartialEq>(&mut self, name: &str, expected: T, computed: T) {
        self.list.push(Check {
            part: self.part.to_string(),
            name: name.to_string(),
            pass: expected == computed,
            expected: expected.to_string(),
            computed: computed.to_string(),
        });
    }

    fn eq_opt<T: ToString + PartialEq>(&mut self, name: &str, expected: T, computed: Option<T>) {
        let shown = computed.as_ref().map(|c| c.to_string()).unwrap_or_else(|| "none".into());
        self.list.push(Check {
            part: self.part.to_string(),
            name: name.to_string(),
            pass: computed.as_ref() == Some(&expected),
            expected: expected.to_string(),
            computed: shown,
        });
    }

    fn error(&mut self, name: &str, e: Failure) {
        self.list.push(Check {
            part: self.part.to_string(),
            name: name.to_string(),
            expected: "a result".into(),
            computed: e.to_string(),
            pass: false,
        });
    }
}

/// The line `{l1 = l2 = 0}` for the two linear entries of the first column.
pub fn first_column_line(hb: &HilbertBurchMatrix) -> Result<Line, Failure> {
    let f = hb.field;
    let nv = hb.n + 1;
    let coeffs = |e: &Form| -> Result<Vec<u64>, Failure> {
        if e.degree() != 1 {
            return Err(Failure::Input("first column entries must be linear".into()));
        }
        let mut row = vec![0u64; nv];
        for (m, c) in e.terms() {
            row[m.exps().iter().position(|&x| x == 1).unwrap()] = *c;
        }
        Ok(row)
    };
    if hb.matrix.rows != 2 {
        return Err(Failure::Input("first column line needs exactly two rows".into()));
    }
    let rows = vec![coeffs(hb.matrix.get(0, 0))?, coeffs(hb.matrix.get(1, 0))?];
    let ker = DenseMatrix::from_rows(&rows).kernel(f);
    if ker.len() != nv - 2 || nv != 4 {
        return Err(Failure::Degenerate("first column entries do not cut a line".into()));
    }
    Ok(Line::new(ker[0].clone(), ker[1].clone()))
}

fn part_matrix(cfg: &RunConfig, part: &PartSpec) -> Result<HilbertBurchMatrix, Failure> {
    let degrees = match (&part.degrees, part.linear) {
        (Some(text), None) => DegreeMatrix::parse(text).map_err(Failure::Input)?,
        (None, Some(sigma)) => linear_degrees(sigma)?,
        _ => return Err(Failure::Input(format!("part {} needs exactly one of degrees, linear", part.label))),
    };
    sample(cfg, &degrees, part.n)
}

fn run_part(cfg: &RunConfig, part: &PartSpec) -> Vec<Check> {
    let mut checks = Checks { part: &part.label, list: Vec::new() };
    let hb = match part_matrix(cfg, part) {
        Ok(hb) => hb,
        Err(e) => {
            checks.error("sample", e);
            return checks.list;
        }
    };
    let mut curve_data = None;
    if let Some(exp) = &part.curve {
        match analyze(&hb, cfg.max_degree) {
            Ok(v) => {
                checks.eq("dimension", exp.dimension, v.dimension);
                checks.eq("degree", exp.degree, v.degree);
                checks.eq("degree from twists", exp.degree as i64, hb.degrees.variety_degree());
                if let Some(g) = exp.genus {
                    checks.eq_opt("genus from twists", g, v.genus);
                    checks.eq_opt("sectional genus", g, v.sectional_genus);
                }
                if let Some(s) = exp.sigma {
                    checks.eq("sigma", s, v.sigma);
                }
                curve_data = Some((v.degree as i64, v.sectional_genus));
            }
            Err(e) => checks.error("analyze", e.into()),
        }
    }
    if let Some(exp) = &part.presentation {
        match assemble_ideal(&hb, exp.mode) {
            Ok(pres) => {
                checks.eq("image degree", exp.image_degree, pres.psi.image_degree);
                checks.eq("generators not annihilated", 0, pres.psi_failures().len());
            }
            Err(e) => checks.error("presentation", e.into()),
        }
    }
    let mut y_degree = None;
    if let Some(exp) = &part.blowup {
        let run = || -> Result<_, Failure> {
            let pres = assemble_ideal(&hb, exp.mode)?;
            let failures = pres.psi_failures().len();
            Ok((analyze_y(&pres, cfg.max_degree, 0)?, failures))
        };
        match run() {
            Ok((y, failures)) => {
                let c = y.generator_counts;
                checks.eq("minors of X", exp.x_minors, c.x_minors);
                checks.eq("entries of BX", exp.bx_entries, c.bx_entries);
                checks.eq("minors of B", exp.b_minors, c.b_minors);
                checks.eq("linear forms", exp.linear, c.linear);
                checks.eq("generators not annihilated", 0, failures);
                checks.eq("embedding dimension", exp.n_embed, y.n_embed);
                checks.eq("Y dimension", exp.dimension, y.fit.dimension);
                checks.eq("Y degree", exp.degree, y.fit.degree);
                checks.eq_opt("Y sectional genus", exp.sectional_genus, y.fit.sectional_genus);
                y_degree = Some(y.fit.degree as i64);
            }
            Err(e) => checks.error("blowup", e),
        }
    }
    if let (Some(exp), Some((deg, Some(genus)))) = (&part.liaison, curve_data) {
        match residual(exp.a, exp.b, deg, genus) {
            Ok(r) => {
                checks.eq("residual degree", exp.degree, r.degree);
                checks.eq("residual genus", exp.genus, r.genus);
                if let Some(d) = y_degree {
                    checks.eq("2 g(residual) - 2 = deg Y", d, 2 * r.genus - 2);
                }
            }
            Err(e) => checks.error("residual", e.into()),
        }
    }
    if let Some(len) = part.first_column_line {
        match first_column_line(&hb).and_then(|l| hb.intersection_length(&l).map_err(Failure::from)) {
            Ok(computed) => checks.eq("first column line length", len, computed),
            Err(e) => checks.error("first column line", e),
        }
    }
    if let Some(exp) = &part.secants {
        let opts = LocusOptions { cap: cfg.max_degree, budget: cfg.budget, measure: true };
        match SecantSystem::build(&hb).and_then(|s| s.secant_locus(&opts)) {
            Ok(r) => {
                checks.eq_opt("secant locus dimension", exp.dimension, r.dimension);
                checks.eq_opt("secant locus degree", exp.degree, r.degree);
            }
            Err(e) => checks.error("secant locus", e.into()),
        }
    }
    checks.list
}

pub fn cmd_examples(cfg: &RunConfig, table: &Expectations, ids: &[String]) -> Result<ExamplesReport, Failure> {
    let selected: Vec<&ExampleSpec> = if ids.is_empty() {
        table.example.iter().collect()
    } else {
        ids.iter()
            .map(|id| {
                table
                    .example
                    .iter()
                    .find(|e| &e.id == id)
                    .ok_or_else(|| {
                        let known: Vec<&str> = table.example.iter().map(|e| e.id.as_str()).collect();
                        Failure::Input(format!("unknown example {id:?}; known: {}", known.join(", ")))
                    })
            })
            .collect::<Result<_, _>>()?
    };
    let examples: Vec<ExampleResult> = selected
        .par_iter()
        .map(|ex| {
            let checks: Vec<Check> = ex.parts.par_iter().flat_map_iter(|p| run_part(cfg, p)).collect();
            ExampleResult { id: ex.id.clone(), title: ex.title.clone(), pass: checks.iter().all(|c| c.pass), checks }
        })
        .collect();
    Ok(ExamplesReport {
        command: "examples",
        p: cfg.field.p(),
        seed: cfg.seed,
        pass: examples.iter().all(|e| e.pass),
        examples,
    })
}
