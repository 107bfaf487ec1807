//! Hilbert-Burch matrices and the determinantal varieties they define.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::binary::{binary_gcd, binary_roots, BinaryForm, BinaryGcd};
use crate::field::PrimeField;
use crate::graded::{binomial_i, BettiTable, GradedError, GradedIdeal};
use crate::matrix::FormMatrix;
use crate::poly::{monomials_of_degree, Form};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HbError {
    #[error("matrix must be rho x (rho + 1) with rho >= 1, got {rows} x {cols}")]
    Shape { rows: usize, cols: usize },
    #[error("degree matrix entry ({row}, {col}) is {value}; entries must be positive")]
    NonPositiveDegree { row: usize, col: usize, value: i64 },
    #[error("degree matrix is not additive at rows ({r0}, {r1}), columns ({c0}, {c1})")]
    NotAdditive { r0: usize, r1: usize, c0: usize, c1: usize },
    #[error("entry ({row}, {col}) has degree {found}, degree matrix requires {expected}")]
    EntryDegree { row: usize, col: usize, expected: u32, found: u32 },
    #[error("entry ({row}, {col}) lives in {found} variables, expected {expected}")]
    EntryRing { row: usize, col: usize, expected: usize, found: usize },
    #[error("maximal minor {index} vanishes identically")]
    ZeroMinor { index: usize },
    #[error("line is contained in the variety")]
    LineContained,
    #[error("line must be given by two distinct points with {expected} coordinates")]
    BadLine { expected: usize },
    #[error(transparent)]
    Graded(#[from] GradedError),
}

/// Integer degrees of the entries of a Hilbert-Burch matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeMatrix {
    pub entries: Vec<Vec<i64>>,
}

/// Twist data `e[i][j] = u[i] + v[j]` normalized by `min u = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Twists {
    pub u: Vec<i64>,
    pub v: Vec<i64>,
    /// Degrees of the maximal minors, one per deleted column.
    pub generator_degrees: Vec<i64>,
    /// Degrees of the syzygies given by the rows.
    pub syzygy_degrees: Vec<i64>,
}

impl DegreeMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self, HbError> {
        let dm = DegreeMatrix { entries };
        dm.validate()?;
        Ok(dm)
    }

    /// Parse `"2,2,2;1,1,1"` (rows separated by `;`).
    pub fn parse(text: &str) -> Result<Self, String> {
        let rows: Result<Vec<Vec<i64>>, String> = text
            .split(';')
            .map(|r| {
                r.split(',')
                    .map(|x| x.trim().parse::<i64>().map_err(|e| format!("bad degree {x:?}: {e}")))
                    .collect()
            })
            .collect();
        DegreeMatrix::new(rows?).map_err(|e| e.to_string())
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map(|r| r.len()).unwrap_or(0)
    }

    pub fn validate(&self) -> Result<(), HbError> {
        let rows = self.rows();
        let cols = self.cols();
        if rows == 0 || cols != rows + 1 || self.entries.iter().any(|r| r.len() != cols) {
            return Err(HbError::Shape { rows, cols });
        }
        for (i, r) in self.entries.iter().enumerate() {
            for (j, &e) in r.iter().enumerate() {
                if e <= 0 {
                    return Err(HbError::NonPositiveDegree { row: i, col: j, value: e });
                }
            }
        }
        let e = &self.entries;
        for i in 1..rows {
            for j in 1..cols {
                if e[0][0] + e[i][j] != e[0][j] + e[i][0] {
                    return Err(HbError::NotAdditive { r0: 0, r1: i, c0: 0, c1: j });
                }
            }
        }
        Ok(())
    }

    pub fn twists(&self) -> Twists {
        let e = &self.entries;
        let raw_u: Vec<i64> = (0..self.rows()).map(|i| e[i][0] - e[0][0]).collect();
        let shift = *raw_u.iter().min().unwrap();
        let u: Vec<i64> = raw_u.iter().map(|x| x - shift).collect();
        let v: Vec<i64> = (0..self.cols()).map(|j| e[0][j] - u[0]).collect();
        let s: i64 = u.iter().sum::<i64>() + v.iter().sum::<i64>();
        Twists {
            generator_degrees: v.iter().map(|vj| s - vj).collect(),
            syzygy_degrees: u.iter().map(|ui| s + ui).collect(),
            u,
            v,
        }
    }

    /// Resolution `0 -> (+) S(-n_i) -> (+) S(-d_j) -> I -> 0`.
    pub fn betti_table(&self) -> BettiTable {
        let tw = self.twists();
        let mut entries = Vec::new();
        push_grouped(&mut entries, 1, &tw.generator_degrees);
        push_grouped(&mut entries, 2, &tw.syzygy_degrees);
        BettiTable { entries }
    }

    /// Degree of the codimension-two variety: `(sum n_i^2 - sum d_j^2) / 2`.
    pub fn variety_degree(&self) -> i64 {
        let tw = self.twists();
        let a: i64 = tw.syzygy_degrees.iter().map(|x| x * x).sum();
        let b: i64 = tw.generator_degrees.iter().map(|x| x * x).sum();
        (a - b) / 2
    }

    /// Arithmetic genus of the curve in P^3 read off the twists.
    pub fn curve_genus(&self) -> i64 {
        let tw = self.twists();
        let c3 = |x: i64| binomial_i(x - 1, 3) as i64;
        tw.syzygy_degrees.iter().map(|&n| c3(n)).sum::<i64>()
            - tw.generator_degrees.iter().map(|&d| c3(d)).sum::<i64>()
    }
}

fn push_grouped(out: &mut Vec<(u32, i64, u64)>, index: u32, twists: &[i64]) {
    let mut sorted = twists.to_vec();
    sorted.sort_unstable();
    for t in sorted {
        match out.last_mut() {
            Some(last) if last.0 == index && last.1 == t => last.2 += 1,
            _ => out.push((index, t, 1)),
        }
    }
}

/// A `rho x (rho + 1)` matrix of forms on P^n with prescribed entry degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertBurchMatrix {
    pub field: PrimeField,
    /// Ambient projective dimension; forms live in `n + 1` variables.
    pub n: usize,
    pub degrees: DegreeMatrix,
    pub matrix: FormMatrix,
    pub seed: Option<u64>,
}

impl HilbertBurchMatrix {
    pub fn new(field: PrimeField, n: usize, degrees: DegreeMatrix, matrix: FormMatrix) -> Result<Self, HbError> {
        let hb = HilbertBurchMatrix { field, n, degrees, matrix, seed: None };
        hb.validate()?;
        Ok(hb)
    }

    pub fn rho(&self) -> usize {
        self.matrix.rows
    }

    pub fn validate(&self) -> Result<(), HbError> {
        self.degrees.validate()?;
        let m = &self.matrix;
        if m.rows != self.degrees.rows() || m.cols != self.degrees.cols() {
            return Err(HbError::Shape { rows: m.rows, cols: m.cols });
        }
        for i in 0..m.rows {
            for j in 0..m.cols {
                let e = m.get(i, j);
                if e.nvars() != self.n + 1 {
                    return Err(HbError::EntryRing { row: i, col: j, expected: self.n + 1, found: e.nvars() });
                }
                let want = self.degrees.entries[i][j] as u32;
                if !e.is_zero() && e.degree() != want {
                    return Err(HbError::EntryDegree { row: i, col: j, expected: want, found: e.degree() });
                }
            }
        }
        Ok(())
    }

    /// Signed maximal minors `F_1, ..., F_{rho+1}`.
    pub fn minors(&self) -> Vec<Form> {
        self.matrix.maximal_minors()
    }

    /// Fail when some maximal minor vanishes identically.
    pub fn check_nondegenerate(&self) -> Result<Vec<Form>, HbError> {
        let minors = self.minors();
        if let Some(i) = minors.iter().position(|f| f.is_zero()) {
            return Err(HbError::ZeroMinor { index: i + 1 });
        }
        Ok(minors)
    }

    pub fn ideal(&self) -> Result<GradedIdeal, HbError> {
        Ok(GradedIdeal::new(self.field, self.n + 1, self.minors())?)
    }

    /// Restrict every entry to the line `w = s P + t Q`.
    pub fn restrict_to_line(&self, line: &Line) -> Result<FormMatrix, HbError> {
        let images = line.parametrization(self.field, self.n)?;
        Ok(self.matrix.substitute(&images))
    }

    /// Length of the scheme `V ∩ L`: the degree of the gcd of the restricted
    /// maximal minors.
    pub fn intersection_length(&self, line: &Line) -> Result<usize, HbError> {
        match self.restricted_gcd(line)? {
            BinaryGcd::Contained => Err(HbError::LineContained),
            BinaryGcd::Common(g) => Ok(g.degree),
        }
    }

    fn restricted_gcd(&self, line: &Line) -> Result<BinaryGcd, HbError> {
        let restricted = self.restrict_to_line(line)?;
        let forms: Vec<BinaryForm> = restricted.maximal_minors().iter().map(BinaryForm::from_form).collect();
        Ok(binary_gcd(self.field, &forms))
    }

    /// Rational points of `V ∩ L` with multiplicities, and the degree of the
    /// part defined only over an extension.
    pub fn points_on_line(&self, line: &Line, seed: u64) -> Result<LinePoints, HbError> {
        let g = match self.restricted_gcd(line)? {
            BinaryGcd::Contained => return Err(HbError::LineContained),
            BinaryGcd::Common(g) => g,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let roots = binary_roots(self.field, &g, &mut rng);
        let f = self.field;
        let points = roots
            .roots
            .iter()
            .map(|&((s, t), m)| {
                let pt: Vec<u64> =
                    line.p.iter().zip(&line.q).map(|(&a, &b)| f.add(f.mul(s, a), f.mul(t, b))).collect();
                (pt, m)
            })
            .collect();
        Ok(LinePoints { length: g.degree, points, irrational_degree: roots.irrational_degree })
    }

    /// Genus of a general curve section, computed from the points cut by a
    /// random plane: `sum_{t >= 1} (deg - H_Z(t))`.
    pub fn plane_section_genus(&self, seed: u64, cap: u32) -> Result<(u64, i64), HbError> {
        let f = self.field;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let images: Vec<Form> =
            (0..=self.n).map(|_| Form::linear(f, &[0, 1, 2].map(|_| rng.gen_range(0..f.p())))).collect();
        let section: Vec<Form> = self.minors().iter().map(|g| g.substitute(&images)).collect();
        let ideal = GradedIdeal::new(f, 3, section)?;
        let fit = ideal.hilbert_poly_fit(cap)?;
        let s = fit.degree as i64;
        let mut genus = 0i64;
        for t in 1..=cap {
            let h = ideal.hilbert_function(t)? as i64;
            if h >= s {
                return Ok((fit.degree, genus));
            }
            genus += s - h;
        }
        Err(HbError::Graded(GradedError::InsufficientRange { cap }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinePoints {
    pub length: usize,
    pub points: Vec<(Vec<u64>, usize)>,
    pub irrational_degree: usize,
}

/// The line through two points of P^n, parametrized as `s P + t Q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Line {
    pub p: Vec<u64>,
    pub q: Vec<u64>,
}

impl Line {
    pub fn new(p: Vec<u64>, q: Vec<u64>) -> Self {
        Line { p, q }
    }

    /// Parse `"1,0,0,0;0,1,0,0"`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let pts: Vec<Vec<u64>> = text
            .split(';')
            .map(|r| r.split(',').map(|x| x.trim().parse::<u64>().map_err(|e| e.to_string())).collect())
            .collect::<Result<_, _>>()?;
        if pts.len() != 2 {
            return Err("a line needs exactly two points".into());
        }
        Ok(Line { p: pts[0].clone(), q: pts[1].clone() })
    }

    /// Images of the coordinates `w_k -> P_k s + Q_k t` as forms in (s, t).
    pub fn parametrization(&self, f: PrimeField, n: usize) -> Result<Vec<Form>, HbError> {
        if self.p.len() != n + 1 || self.q.len() != n + 1 {
            return Err(HbError::BadLine { expected: n + 1 });
        }
        let pr: Vec<u64> = self.p.iter().map(|&x| f.reduce(x)).collect();
        let qr: Vec<u64> = self.q.iter().map(|&x| f.reduce(x)).collect();
        let m = crate::linalg::DenseMatrix::from_rows(&[pr.clone(), qr.clone()]);
        if m.rank(f) < 2 {
            return Err(HbError::BadLine { expected: n + 1 });
        }
        Ok(pr.iter().zip(&qr).map(|(&a, &b)| Form::linear(f, &[a, b])).collect())
    }
}

/// A form of the given degree with independent uniform coefficients.
pub fn random_form<R: Rng>(f: PrimeField, nvars: usize, degree: u32, rng: &mut R) -> Form {
    let terms: Vec<_> = monomials_of_degree(nvars, degree).into_iter().map(|m| (m, rng.gen_range(0..f.p()))).collect();
    Form::from_terms(f, nvars, degree, terms).expect("monomials have the requested degree")
}

/// Seed used by the `attempt`-th resampling of a seeded instance.
pub fn attempt_seed(seed: u64, attempt: u32) -> u64 {
    seed.wrapping_add((attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Matrix with independent uniformly random entries of the given degrees.
pub fn sample_generic(f: PrimeField, degrees: &DegreeMatrix, n: usize, seed: u64) -> HilbertBurchMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = degrees
        .entries
        .iter()
        .map(|r| r.iter().map(|&d| random_form(f, n + 1, d as u32, &mut rng)).collect())
        .collect();
    HilbertBurchMatrix { field: f, n, degrees: degrees.clone(), matrix: FormMatrix::from_rows(rows), seed: Some(seed) }
}

/// Sample, resampling with derived seeds while some maximal minor vanishes.
pub fn sample_nondegenerate(
    f: PrimeField,
    degrees: &DegreeMatrix,
    n: usize,
    seed: u64,
    retries: u32,
) -> Result<HilbertBurchMatrix, HbError> {
    let mut last = None;
    for attempt in 0..=retries {
        let hb = sample_generic(f, degrees, n, attempt_seed(seed, attempt));
        match hb.check_nondegenerate() {
            Ok(_) => return Ok(hb),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap())
}

/// One row of the Hilbert table: `H(t)` and its successive differences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertRow {
    pub t: u32,
    pub h: u64,
    /// `Delta^1 H(t), ..., Delta^{n-1} H(t)`.
    pub differences: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietyReport {
    pub n: usize,
    pub rho: usize,
    pub degree_matrix: Vec<Vec<i64>>,
    pub twists: Twists,
    pub dimension: i64,
    pub degree: u64,
    pub sectional_genus: Option<i64>,
    /// Arithmetic genus from the twists, for curves in P^3.
    pub genus: Option<i64>,
    pub sigma: u32,
    pub hilbert_table: Vec<HilbertRow>,
}

/// Hilbert data, degree, sigma and genus of the variety of maximal minors.
pub fn analyze(hb: &HilbertBurchMatrix, max_degree: Option<u32>) -> Result<VarietyReport, HbError> {
    hb.validate()?;
    hb.check_nondegenerate()?;
    let ideal = hb.ideal()?;
    let maxdeg = ideal.max_generator_degree();
    let fit_cap = max_degree.unwrap_or(maxdeg + 8);
    let sigma_cap = max_degree.unwrap_or(maxdeg + 4);
    let fit = ideal.hilbert_poly_fit(fit_cap)?;
    let sigma = ideal.sigma(hb.n, sigma_cap)?;
    let top = fit.fitted_at.max(sigma);
    let values: Vec<i64> = ideal.hilbert_values(top)?.into_iter().map(|h| h as i64).collect();
    let hilbert_table = (0..=top)
        .map(|t| HilbertRow {
            t,
            h: values[t as usize] as u64,
            differences: (1..hb.n).map(|k| crate::graded::difference_at(&values, k, t as usize)).collect(),
        })
        .collect();
    let genus = (hb.n == 3 && fit.dimension == 1).then(|| hb.degrees.curve_genus());
    Ok(VarietyReport {
        n: hb.n,
        rho: hb.rho(),
        degree_matrix: hb.degrees.entries.clone(),
        twists: hb.degrees.twists(),
        dimension: fit.dimension,
        degree: fit.degree,
        sectional_genus: fit.sectional_genus,
        genus,
        sigma,
        hilbert_table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twists_of_a_mixed_matrix() {
        let dm = DegreeMatrix::parse("2,2,2;1,1,1").unwrap();
        let tw = dm.twists();
        assert_eq!(tw.u, vec![1, 0]);
        assert_eq!(tw.generator_degrees, vec![3, 3, 3]);
        assert_eq!(tw.syzygy_degrees, vec![5, 4]);
        assert_eq!(dm.variety_degree(), 7);
        assert_eq!(dm.curve_genus(), 5);
    }

    #[test]
    fn rejects_bad_degree_matrices() {
        assert!(matches!(DegreeMatrix::parse("1,2;2,1,1"), Err(_)));
        assert!(matches!(DegreeMatrix::new(vec![vec![1, 2, 3], vec![2, 1, 1]]), Err(HbError::NotAdditive { .. })));
        assert!(matches!(DegreeMatrix::new(vec![vec![0, 1]]), Err(HbError::NonPositiveDegree { .. })));
    }

    #[test]
    fn secant_of_twisted_cubic() {
        // The standard twisted cubic passes through (1:0:0:0) and (0:0:0:1).
        let f = PrimeField::default();
        let w = |i| Form::var(f, 4, i);
        let m = FormMatrix::from_rows(vec![vec![w(0), w(1), w(2)], vec![w(1), w(2), w(3)]]);
        let hb = HilbertBurchMatrix::new(f, 3, DegreeMatrix::parse("1,1,1;1,1,1").unwrap(), m).unwrap();
        let line = Line::new(vec![1, 0, 0, 0], vec![0, 0, 0, 1]);
        assert_eq!(hb.intersection_length(&line).unwrap(), 2);
        let pts = hb.points_on_line(&line, 3).unwrap();
        assert_eq!(pts.points.len(), 2);
        assert_eq!(pts.irrational_degree, 0);
    }
}
