//! Reading and writing Hilbert-Burch matrices as JSON.
//!
//! ```json
//! { "p": 2147483647, "n": 3, "rows": 2, "cols": 3,
//!   "degree_matrix": [[2, 2, 2], [1, 1, 1]],
//!   "entries": [[ [{"monomial": [2, 0, 0, 0], "coeff": 1}], ... ], ...],
//!   "seed": 1 }
//! ```
//!
//! Monomials are exponent vectors of length `n + 1`. Coefficients may be
//! negative and are reduced modulo `p`.

use serde::{Deserialize, Serialize};

use detblow_core::field::PrimeField;
use detblow_core::hilburch::{DegreeMatrix, HilbertBurchMatrix};
use detblow_core::matrix::FormMatrix;
use detblow_core::poly::{Form, Monomial};

use crate::error::Failure;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub monomial: Vec<u8>,
    pub coeff: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub p: u64,
    pub n: usize,
    pub rows: usize,
    pub cols: usize,
    pub degree_matrix: Vec<Vec<i64>>,
    pub entries: Vec<Vec<Vec<Term>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl MatrixFile {
    pub fn from_matrix(hb: &HilbertBurchMatrix) -> Self {
        let m = &hb.matrix;
        let entries = (0..m.rows)
            .map(|i| {
                (0..m.cols)
                    .map(|j| {
                        m.get(i, j)
                            .terms()
                            .iter()
                            .map(|(mono, c)| Term { monomial: mono.exps().to_vec(), coeff: *c as i64 })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        MatrixFile {
            p: hb.field.p(),
            n: hb.n,
            rows: m.rows,
            cols: m.cols,
            degree_matrix: hb.degrees.entries.clone(),
            entries,
            seed: hb.seed,
        }
    }

    pub fn into_matrix(self) -> Result<HilbertBurchMatrix, Failure> {
        let f = PrimeField::new(self.p)?;
        let input = |msg: String| Failure::Input(msg);
        if self.degree_matrix.len() != self.rows {
            return Err(input(format!("degree_matrix has {} rows, expected {}", self.degree_matrix.len(), self.rows)));
        }
        if self.entries.len() != self.rows {
            return Err(input(format!("entries has {} rows, expected {}", self.entries.len(), self.rows)));
        }
        for (i, (drow, erow)) in self.degree_matrix.iter().zip(&self.entries).enumerate() {
            if drow.len() != self.cols {
                return Err(input(format!("degree_matrix row {i} has {} entries, expected {}", drow.len(), self.cols)));
            }
            if erow.len() != self.cols {
                return Err(input(format!("entries row {i} has {} entries, expected {}", erow.len(), self.cols)));
            }
        }
        let degrees = DegreeMatrix::new(self.degree_matrix.clone())?;
        let nv = self.n + 1;
        let mut rows = Vec::with_capacity(self.rows);
        for (i, erow) in self.entries.iter().enumerate() {
            let mut row = Vec::with_capacity(self.cols);
            for (j, cell) in erow.iter().enumerate() {
                let want = degrees.entries[i][j] as u32;
                let mut terms = Vec::with_capacity(cell.len());
                for t in cell {
                    if t.monomial.len() != nv {
                        return Err(input(format!(
                            "entry ({i}, {j}): monomial {:?} has {} exponents, expected {nv}",
                            t.monomial,
                            t.monomial.len()
                        )));
                    }
                    let d: u32 = t.monomial.iter().map(|&e| e as u32).sum();
                    if d != want {
                        return Err(input(format!(
                            "entry ({i}, {j}): monomial {:?} has degree {d}, degree matrix requires {want}",
                            t.monomial
                        )));
                    }
                    terms.push((Monomial::from_slice(&t.monomial), f.from_i64(t.coeff)));
                }
                let form = Form::from_terms(f, nv, want, terms).map_err(|e| input(format!("entry ({i}, {j}): {e}")))?;
                row.push(form);
            }
            rows.push(row);
        }
        let mut hb = HilbertBurchMatrix::new(f, self.n, degrees, FormMatrix::from_rows(rows))?;
        hb.seed = self.seed;
        Ok(hb)
    }
}

/// Parse matrix JSON; syntax errors report line and column.
pub fn parse_matrix(text: &str) -> Result<HilbertBurchMatrix, Failure> {
    let file: MatrixFile = serde_json::from_str(text)
        .map_err(|e| Failure::Input(format!("malformed matrix JSON at line {}, column {}: {e}", e.line(), e.column())))?;
    file.into_matrix()
}

pub fn matrix_to_json(hb: &HilbertBurchMatrix) -> String {
    serde_json::to_string_pretty(&MatrixFile::from_matrix(hb)).expect("matrix files always serialize")
}
