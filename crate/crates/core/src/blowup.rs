//! Equations of the image of the blow-up of `P^n` along a codimension two
//! determinantal scheme `V`, embedded by forms of degree `e` through `V`.
//!
//! The minors of the Hilbert–Burch matrix split into `F_j` of degree `e - 1`
//! and `G_l` of degree `e`. The map `psi` sends `x_{hj}` to `w_h F_j` and
//! `y_l` to `G_l`. Each row `u` of the matrix gives the syzygy
//! `sum_b M[u][b] F_b = 0`. A row with quadrics against the `F_j` (and
//! linear forms against the `G_l`) becomes a row of the matrix `B`, with
//! `psi(sum_i x_{i nu} B_{ui}) = F_nu * 0`. A row with linear forms against
//! the `F_j` becomes a linear form in the kernel of `psi`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::PrimeField;
use crate::graded::{betti_to_hilbert, binomial, difference_at, BettiTable, GradedError, GradedIdeal, HilbertFit};
use crate::hilburch::{HbError, HilbertBurchMatrix};
use crate::linalg::DenseMatrix;
use crate::matrix::FormMatrix;
use crate::poly::{Form, Monomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlowupError {
    #[error(transparent)]
    Matrix(#[from] HbError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error("minor {column} has degree {degree}; only {low} and {high} fit degree-{target} images")]
    MixedDegrees { column: usize, degree: u32, low: u32, high: u32, target: u32 },
    #[error("row {row} has entries of degree {entry} against minors of degree {minor}; no syzygy of the expected shape")]
    UnsupportedRow { row: usize, entry: u32, minor: u32 },
    #[error("splitting quadric coefficients needs an odd characteristic")]
    EvenCharacteristic,
    #[error("linear forms in the kernel of psi: found {found}, expected {expected} (non-generic instance)")]
    NonGeneric { expected: usize, found: usize },
    #[error("generator {index} does not vanish under psi")]
    NotAnnihilated { index: usize },
    #[error("embedding dimension {computed} from the Hilbert function disagrees with {expected} from the presentation")]
    EmbeddingMismatch { computed: u64, expected: u64 },
    #[error("Eagon–Northcott table needs sigma > n, got sigma = {sigma}, n = {n}")]
    SigmaTooSmall { n: usize, sigma: usize },
}

/// Which linear system embeds the blow-up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlowupMode {
    /// `|sigma H - E|`
    Sigma,
    /// `|(sigma + 1) H - E|`
    SigmaPlusOne,
}

/// The substitution `x_{hj} -> w_h F_j`, `y_l -> G_l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiMap {
    pub field: PrimeField,
    /// `V` lives in `P^n`.
    pub n: usize,
    /// Degree of every image.
    pub image_degree: u32,
    /// Matrix columns whose minors are the `F_j`, in order.
    pub f_columns: Vec<usize>,
    /// Matrix columns whose minors are the `G_l`, in order.
    pub g_columns: Vec<usize>,
    /// Image of each source variable, `x` block first (`h` major).
    pub images: Vec<Form>,
}

impl PsiMap {
    pub fn num_f(&self) -> usize {
        self.f_columns.len()
    }

    pub fn num_g(&self) -> usize {
        self.g_columns.len()
    }

    /// Number of source variables.
    pub fn nvars(&self) -> usize {
        self.images.len()
    }

    /// Index of `x_{hj}`, `j` counted from 0.
    pub fn x_index(&self, h: usize, j: usize) -> usize {
        h * self.num_f() + j
    }

    /// Index of `y_l`, `l` counted from 0.
    pub fn y_index(&self, l: usize) -> usize {
        (self.n + 1) * self.num_f() + l
    }

    /// Names `x_h_j` and `y_l`, with `j` and `l` counted from 1.
    pub fn variable_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.nvars());
        for h in 0..=self.n {
            for j in 0..self.num_f() {
                names.push(format!("x_{}_{}", h, j + 1));
            }
        }
        for l in 0..self.num_g() {
            names.push(format!("y_{}", l + 1));
        }
        names
    }

    pub fn apply(&self, g: &Form) -> Form {
        g.substitute(&self.images)
    }
}

/// Degree of the images for a mode, from `sigma` of `V`.
pub fn image_degree(hb: &HilbertBurchMatrix, mode: BlowupMode) -> u32 {
    let sigma = sigma_from_resolution(hb);
    match mode {
        BlowupMode::Sigma => sigma,
        BlowupMode::SigmaPlusOne => sigma + 1,
    }
}

/// `sigma(V)` from the Hilbert function given by the resolution of `I_V`.
pub fn sigma_from_resolution(hb: &HilbertBurchMatrix) -> u32 {
    let table = hb.degrees.betti_table();
    let vars = hb.n + 1;
    let mut values = Vec::new();
    let mut t = 0usize;
    loop {
        values.push(betti_to_hilbert(&table, vars, t as i64));
        if difference_at(&values, hb.n.saturating_sub(1), t) == 0 {
            return t as u32;
        }
        t += 1;
    }
}

pub fn build_psi(hb: &HilbertBurchMatrix, mode: BlowupMode) -> Result<PsiMap, BlowupError> {
    let minors = hb.check_nondegenerate()?;
    let e = image_degree(hb, mode);
    let f = hb.field;
    let vars = hb.n + 1;
    let (mut f_columns, mut g_columns) = (Vec::new(), Vec::new());
    for (col, m) in minors.iter().enumerate() {
        match m.degree() {
            d if d + 1 == e => f_columns.push(col),
            d if d == e => g_columns.push(col),
            d => return Err(BlowupError::MixedDegrees { column: col, degree: d, low: e - 1, high: e, target: e }),
        }
    }
    let mut images = Vec::with_capacity(vars * f_columns.len() + g_columns.len());
    for h in 0..vars {
        let w = Form::var(f, vars, h);
        for &c in &f_columns {
            images.push(w.mul(&minors[c]));
        }
    }
    for &c in &g_columns {
        images.push(minors[c].clone());
    }
    Ok(PsiMap { field: f, n: hb.n, image_degree: e, f_columns, g_columns, images })
}

/// `(n + 1) x #F` matrix of the variables `x_{hj}`.
pub fn build_x(psi: &PsiMap) -> FormMatrix {
    let nv = psi.nvars();
    let entries = (0..=psi.n)
        .flat_map(|h| (0..psi.num_f()).map(move |j| psi.x_index(h, j)))
        .map(|i| Form::var(psi.field, nv, i))
        .collect();
    FormMatrix::new(psi.n + 1, psi.num_f(), entries)
}

/// Coefficients read off one row of the Hilbert–Burch matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowCoefficients {
    /// Quadrics against the `F_j`, linear forms against the `G_l`.
    /// `delta[l][i]` is the coefficient of `w_i` in `M[u][G_l]`; `beta[j][i][h]`
    /// satisfies `M[u][F_j] = sum_{i,h} beta[j][i][h] w_h w_i` with
    /// `beta[j]` symmetric.
    Quadric { row: usize, delta: Vec<Vec<u64>>, beta: Vec<Vec<Vec<u64>>> },
    /// Linear forms against the `F_j`: `delta[j][h]` is the coefficient of `w_h`.
    Linear { row: usize, delta: Vec<Vec<u64>> },
}

/// Coefficients of a linear form.
pub fn linear_coefficients(l: &Form) -> Vec<u64> {
    let n = l.nvars();
    (0..n).map(|i| l.coeff(&Monomial::var(n, i))).collect()
}

/// Symmetric coefficient matrix of a quadric: `q = sum_{i,h} b[i][h] w_h w_i`.
pub fn split_quadric(q: &Form) -> Result<Vec<Vec<u64>>, BlowupError> {
    let f = q.field();
    if f.p() % 2 == 0 {
        return Err(BlowupError::EvenCharacteristic);
    }
    let n = q.nvars();
    let half = f.inv(2);
    let mut b = vec![vec![0u64; n]; n];
    for (m, c) in q.terms() {
        let support: Vec<usize> = (0..n).filter(|&i| m.exps()[i] > 0).collect();
        match support.as_slice() {
            [i] => b[*i][*i] = *c,
            [i, h] => {
                let v = f.mul(*c, half);
                b[*i][*h] = v;
                b[*h][*i] = v;
            }
            _ => unreachable!("quadric monomials have one or two variables"),
        }
    }
    Ok(b)
}

/// Inverse of `split_quadric`.
pub fn quadric_from_split(f: PrimeField, b: &[Vec<u64>]) -> Form {
    let n = b.len();
    let mut q = Form::zero(f, n, 2);
    for (i, row) in b.iter().enumerate() {
        for (h, &c) in row.iter().enumerate() {
            if c != 0 {
                q = q.add(&Form::var(f, n, i).mul(&Form::var(f, n, h)).scale(c));
            }
        }
    }
    q
}

pub fn extract_coefficients(hb: &HilbertBurchMatrix, psi: &PsiMap) -> Result<Vec<RowCoefficients>, BlowupError> {
    let m = &hb.matrix;
    let e = psi.image_degree;
    let mut out = Vec::with_capacity(m.rows);
    for u in 0..m.rows {
        // deg M[u][b] + deg(minor b) is the same along the row.
        let against_f = psi.f_columns.first().map(|&c| m.get(u, c).degree());
        let against_g = psi.g_columns.first().map(|&c| m.get(u, c).degree());
        let quadric_row = match (against_f, against_g) {
            (Some(2), _) | (None, Some(1)) => true,
            (Some(1), None) => false,
            (Some(d), _) => return Err(BlowupError::UnsupportedRow { row: u, entry: d, minor: e - 1 }),
            (None, Some(d)) => return Err(BlowupError::UnsupportedRow { row: u, entry: d, minor: e }),
            (None, None) => unreachable!("a matrix has columns"),
        };
        if quadric_row {
            let delta = psi.g_columns.iter().map(|&c| linear_coefficients(m.get(u, c))).collect();
            let beta = psi.f_columns.iter().map(|&c| split_quadric(m.get(u, c))).collect::<Result<_, _>>()?;
            out.push(RowCoefficients::Quadric { row: u, delta, beta });
        } else {
            let delta = psi.f_columns.iter().map(|&c| linear_coefficients(m.get(u, c))).collect();
            out.push(RowCoefficients::Linear { row: u, delta });
        }
    }
    Ok(out)
}

/// `B_{ui} = sum_l delta^{ul}_i y_l + sum_{j,h} beta^{uij}_h x_{hj}`, one row per
/// quadric row of the matrix.
pub fn build_b(psi: &PsiMap, coeffs: &[RowCoefficients]) -> FormMatrix {
    let f = psi.field;
    let nv = psi.nvars();
    let mut entries = Vec::new();
    let mut rows = 0;
    for rc in coeffs {
        let RowCoefficients::Quadric { delta, beta, .. } = rc else { continue };
        rows += 1;
        for i in 0..=psi.n {
            let mut terms = Vec::new();
            for (l, d) in delta.iter().enumerate() {
                terms.push((psi.y_index(l), d[i]));
            }
            for (j, b) in beta.iter().enumerate() {
                for h in 0..=psi.n {
                    terms.push((psi.x_index(h, j), b[i][h]));
                }
            }
            entries.push(linear_form(f, nv, &terms));
        }
    }
    FormMatrix::new(rows, psi.n + 1, entries)
}

/// `H_u = sum_{j,h} delta^{uj}_h x_{hj}`, one per linear row of the matrix.
pub fn build_h(psi: &PsiMap, coeffs: &[RowCoefficients]) -> Vec<Form> {
    let nv = psi.nvars();
    coeffs
        .iter()
        .filter_map(|rc| match rc {
            RowCoefficients::Linear { delta, .. } => {
                let terms: Vec<(usize, u64)> = delta
                    .iter()
                    .enumerate()
                    .flat_map(|(j, d)| d.iter().enumerate().map(move |(h, &c)| (psi.x_index(h, j), c)))
                    .collect();
                Some(linear_form(psi.field, nv, &terms))
            }
            RowCoefficients::Quadric { .. } => None,
        })
        .collect()
}

fn linear_form(f: PrimeField, nv: usize, terms: &[(usize, u64)]) -> Form {
    let mut coeffs = vec![0u64; nv];
    for &(i, c) in terms {
        coeffs[i] = f.add(coeffs[i], c);
    }
    Form::linear(f, &coeffs)
}

/// Dimension of the space of linear forms killed by `psi`.
pub fn linear_kernel_dimension(psi: &PsiMap) -> usize {
    let e = psi.image_degree;
    let vars = psi.n + 1;
    let monomials = crate::poly::monomials_of_degree(vars, e);
    let rows: Vec<Vec<u64>> = psi
        .images
        .iter()
        .map(|img| monomials.iter().map(|m| img.coeff(m)).collect())
        .collect();
    rows.len() - DenseMatrix::from_rows(&rows).rank(psi.field)
}

/// The generators of the presentation, grouped by origin.
#[derive(Debug, Clone)]
pub struct BlowupPresentation {
    pub mode: BlowupMode,
    pub psi: PsiMap,
    pub x: FormMatrix,
    pub b: FormMatrix,
    pub h_forms: Vec<Form>,
    pub x_minors: Vec<Form>,
    pub bx_entries: Vec<Form>,
    pub b_minors: Vec<Form>,
    /// Projective dimension of the span of the images, `dim (I_V)_e - 1`.
    pub n_embed: u64,
}

impl BlowupPresentation {
    /// All generators: minors of `X`, entries of `B X`, maximal minors of
    /// `B`, then the linear forms.
    pub fn generators(&self) -> Vec<Form> {
        let mut out = self.x_minors.clone();
        out.extend(self.bx_entries.iter().cloned());
        out.extend(self.b_minors.iter().cloned());
        out.extend(self.h_forms.iter().cloned());
        out
    }

    /// Number of variables of the `x`/`y` ring minus one.
    pub fn ambient_dimension(&self) -> u64 {
        self.psi.nvars() as u64 - 1
    }

    pub fn ideal(&self) -> Result<GradedIdeal, BlowupError> {
        Ok(GradedIdeal::new(self.psi.field, self.psi.nvars(), self.generators())?)
    }

    /// Indices of generators whose image under `psi` is nonzero.
    pub fn psi_failures(&self) -> Vec<usize> {
        let gens = self.generators();
        let flags: Vec<bool> = gens.par_iter().map(|g| self.psi.apply(g).is_zero()).collect();
        flags.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i).collect()
    }
}

pub fn assemble_ideal(hb: &HilbertBurchMatrix, mode: BlowupMode) -> Result<BlowupPresentation, BlowupError> {
    let psi = build_psi(hb, mode)?;
    let coeffs = extract_coefficients(hb, &psi)?;
    let x = build_x(&psi);
    let b = build_b(&psi, &coeffs);
    let h_forms = build_h(&psi, &coeffs);

    let kernel = linear_kernel_dimension(&psi);
    let h_rank = if h_forms.is_empty() {
        0
    } else {
        DenseMatrix::from_rows(&h_forms.iter().map(linear_coefficients).collect::<Vec<_>>()).rank(psi.field)
    };
    if kernel != h_forms.len() || h_rank != h_forms.len() {
        return Err(BlowupError::NonGeneric { expected: h_forms.len(), found: kernel.min(h_rank) });
    }

    let x_minors = if x.cols >= 2 { x.minors(2) } else { Vec::new() };
    let mut bx_entries = Vec::with_capacity(b.rows * x.cols);
    for u in 0..b.rows {
        for nu in 0..x.cols {
            let mut acc = Form::zero(psi.field, psi.nvars(), 2);
            for i in 0..=psi.n {
                acc = acc.add(&x.get(i, nu).mul(b.get(u, i)));
            }
            bx_entries.push(acc);
        }
    }
    let b_minors = if b.rows > psi.n { b.minors(psi.n + 1) } else { Vec::new() };

    let table = hb.degrees.betti_table();
    let e = psi.image_degree as i64;
    let vars = hb.n + 1;
    let piece = binomial(e as u64 + hb.n as u64, hb.n as u64) as i64 - betti_to_hilbert(&table, vars, e);
    let n_embed = (piece - 1) as u64;
    let expected = (psi.nvars() - h_forms.len()) as u64 - 1;
    if n_embed != expected {
        return Err(BlowupError::EmbeddingMismatch { computed: n_embed, expected });
    }

    let pres = BlowupPresentation { mode, psi, x, b, h_forms, x_minors, bx_entries, b_minors, n_embed };
    if let Some(&index) = pres.psi_failures().first() {
        return Err(BlowupError::NotAnnihilated { index });
    }
    Ok(pres)
}

/// Resolution of the ideal of maximal minors of a `sigma x (n + 1)` matrix of
/// linear forms in `sigma + 1` variables: `C(n + i - 1, i - 1) C(sigma, n + i)`
/// copies of `S(-(n + i))` in position `i`, for `i = 1..=sigma - n`.
pub fn en_betti_table(n: usize, sigma: usize) -> Result<BettiTable, BlowupError> {
    if sigma <= n {
        return Err(BlowupError::SigmaTooSmall { n, sigma });
    }
    let entries = (1..=sigma - n)
        .map(|i| {
            let mult = binomial((n + i - 1) as u64, (i - 1) as u64) * binomial(sigma as u64, (n + i) as u64);
            (i as u32, (n + i) as i64, mult)
        })
        .collect();
    Ok(BettiTable { entries })
}

/// Invariants of `Y` read off its Hilbert function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct YReport {
    pub mode: BlowupMode,
    pub image_degree: u32,
    pub n_embed: u64,
    pub ambient_dimension: u64,
    pub generator_counts: GeneratorCounts,
    pub fit: HilbertFit,
    pub hilbert: Vec<u64>,
    /// For matrices of linear forms in mode `sigma`: whether the
    /// Eagon–Northcott table reproduces the Hilbert function.
    pub betti_consistent: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorCounts {
    pub x_minors: usize,
    pub bx_entries: usize,
    pub b_minors: usize,
    pub linear: usize,
}

/// Fit the Hilbert polynomial of `Y` (values up to `cap`, default the top
/// generator degree plus 8) and, for all-linear sources, compare with the
/// Eagon–Northcott table for every `t <= betti_cap`.
pub fn analyze_y(pres: &BlowupPresentation, cap: Option<u32>, betti_cap: u32) -> Result<YReport, BlowupError> {
    let ideal = pres.ideal()?;
    let cap = cap.unwrap_or(ideal.max_generator_degree() + 8);
    let fit = ideal.hilbert_poly_fit(cap)?;
    let all_linear = pres.psi.num_f() == 0 && pres.mode == BlowupMode::Sigma;
    let mut hilbert = ideal.hilbert_values(fit.fitted_at)?;
    let betti_consistent = if all_linear {
        let sigma = pres.b.rows;
        let table = en_betti_table(pres.psi.n, sigma)?;
        hilbert = ideal.hilbert_values(betti_cap.max(fit.fitted_at))?;
        Some((0..=betti_cap).all(|t| betti_to_hilbert(&table, pres.psi.nvars(), t as i64) == hilbert[t as usize] as i64))
    } else {
        None
    };
    Ok(YReport {
        mode: pres.mode,
        image_degree: pres.psi.image_degree,
        n_embed: ideal.effective_vars() as u64 - 1,
        ambient_dimension: pres.ambient_dimension(),
        generator_counts: GeneratorCounts {
            x_minors: pres.x_minors.len(),
            bx_entries: pres.bx_entries.len(),
            b_minors: pres.b_minors.len(),
            linear: pres.h_forms.len(),
        },
        fit,
        hilbert,
        betti_consistent,
    })
}


#[cfg(test)]
mod higher_dimensional {
    use super::*;
    use crate::hilburch::{sample_nondegenerate, DegreeMatrix};

    #[test]
    fn surfaces_in_p4() {
        let f = PrimeField::default();
        for (rows, degree, b_rows, h) in [("2,2,2,2;1,1,1,1;1,1,1,1", 11, 1, 2), ("2,2,2;2,2,2", 12, 2, 0)] {
            let dm = DegreeMatrix::parse(rows).unwrap();
            assert_eq!(dm.variety_degree(), degree);
            let hb = sample_nondegenerate(f, &dm, 4, 1, 5).unwrap();
            let pres = assemble_ideal(&hb, BlowupMode::Sigma).unwrap();
            assert_eq!(pres.psi.image_degree, 5);
            assert_eq!((pres.b.rows, pres.b.cols), (b_rows, 5));
            assert_eq!(pres.x.rows, 5);
            assert_eq!(pres.h_forms.len(), h);
        }
    }
}
