//! Lines on, and sigma-secant lines to, the variety of an all-linear
//! `sigma x (sigma + 1)` matrix on P^n.
//!
//! Writing the entries as `M[i][j] = sum_k delta[k][i][j] w_k`, two
//! coefficient matrices govern the multisecant geometry:
//!
//! * `Z(z)[k][j] = sum_i delta[k][i][j] z_i`, of size `(n+1) x (sigma+1)` on
//!   P^(sigma-1). Its rank `<= n - 1` locus parametrizes lines on V.
//! * `N(y)[i][k] = sum_j delta[k][i][j] y_j`, of size `sigma x (n+1)` on
//!   P^sigma, with `M(w) y = N(y) w`. Where `N(y)` has rank `n - 1` its
//!   kernel is a line meeting V in a scheme of length sigma.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::PrimeField;
use crate::graded::{fit_values, Budget, GradedError, GradedIdeal};
use crate::hilburch::{attempt_seed, HbError, HilbertBurchMatrix, Line};
use crate::linalg::DenseMatrix;
use crate::matrix::FormMatrix;
use crate::poly::{monomials_of_degree, Form, Monomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SecantError {
    #[error("entry ({row}, {col}) is not a linear form")]
    NotLinear { row: usize, col: usize },
    #[error("matrix must be sigma x (sigma + 1), got {rows} x {cols}")]
    Shape { rows: usize, cols: usize },
    #[error("parameter point has {found} coordinates, expected {expected}")]
    PointSize { expected: usize, found: usize },
    #[error("N(y) has rank {rank}; a secant line needs rank {needed}")]
    WrongRank { rank: usize, needed: usize },
    #[error("parameter point does not lie on the secant locus")]
    NotOnLocus,
    #[error("no rational point found after {attempts} attempts")]
    NoRationalPoint { attempts: u32 },
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Hb(#[from] HbError),
}

/// Coefficient tensor of an all-linear matrix together with `Z` and `N`.
#[derive(Debug, Clone)]
pub struct SecantSystem {
    pub field: PrimeField,
    pub n: usize,
    pub sigma: usize,
    /// `delta[k][i][j]`
    pub delta: Vec<Vec<Vec<u64>>>,
    pub z: FormMatrix,
    pub nmat: FormMatrix,
}

impl SecantSystem {
    pub fn build(hb: &HilbertBurchMatrix) -> Result<Self, SecantError> {
        let m = &hb.matrix;
        if m.cols != m.rows + 1 {
            return Err(SecantError::Shape { rows: m.rows, cols: m.cols });
        }
        let (n, sigma, f) = (hb.n, m.rows, hb.field);
        let mut delta = vec![vec![vec![0u64; sigma + 1]; sigma]; n + 1];
        for i in 0..sigma {
            for j in 0..=sigma {
                let e = m.get(i, j);
                if !e.is_zero() && e.degree() != 1 {
                    return Err(SecantError::NotLinear { row: i, col: j });
                }
                for (mono, c) in e.terms() {
                    let k = mono.exps().iter().position(|&x| x == 1).unwrap();
                    delta[k][i][j] = *c;
                }
            }
        }
        let z_rows: Vec<Vec<Form>> = (0..=n)
            .map(|k| {
                (0..=sigma)
                    .map(|j| Form::linear(f, &(0..sigma).map(|i| delta[k][i][j]).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        let n_rows: Vec<Vec<Form>> = (0..sigma)
            .map(|i| {
                (0..=n)
                    .map(|k| Form::linear(f, &(0..=sigma).map(|j| delta[k][i][j]).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        Ok(SecantSystem { field: f, n, sigma, delta, z: FormMatrix::from_rows(z_rows), nmat: FormMatrix::from_rows(n_rows) })
    }

    /// Ideal of `n x n` minors of `Z` in `sigma` variables.
    pub fn line_ideal(&self) -> Result<GradedIdeal, SecantError> {
        Ok(GradedIdeal::new(self.field, self.sigma, self.z.minors(self.n))?)
    }

    /// Ideal of `n x n` minors of `N` in `sigma + 1` variables.
    pub fn secant_ideal(&self) -> Result<GradedIdeal, SecantError> {
        Ok(GradedIdeal::new(self.field, self.sigma + 1, self.nmat.minors(self.n))?)
    }

    pub fn line_locus(&self, opts: &LocusOptions) -> Result<RankLocusReport, SecantError> {
        let ideal = self.line_ideal()?.with_budget(opts.budget);
        Ok(rank_locus_report(LocusKind::Lines, self.n, self.sigma, &ideal, (self.n + 1, self.sigma + 1), opts))
    }

    pub fn secant_locus(&self, opts: &LocusOptions) -> Result<RankLocusReport, SecantError> {
        let ideal = self.secant_ideal()?.with_budget(opts.budget);
        Ok(rank_locus_report(LocusKind::Secants, self.n, self.sigma, &ideal, (self.sigma, self.n + 1), opts))
    }

    /// The line `T_y = ker N(y)` for a point `y` of the secant locus.
    pub fn secant_line_from_parameter(&self, y: &[u64]) -> Result<Line, SecantError> {
        if y.len() != self.sigma + 1 {
            return Err(SecantError::PointSize { expected: self.sigma + 1, found: y.len() });
        }
        let ny = self.nmat.evaluate(y);
        let rank = ny.rank(self.field);
        if rank != self.n - 1 {
            return Err(SecantError::WrongRank { rank, needed: self.n - 1 });
        }
        let ker = ny.kernel(self.field);
        Ok(Line::new(ker[0].clone(), ker[1].clone()))
    }
}

/// How far to push the Hilbert function of a rank locus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocusOptions {
    /// Last degree to compute; defaults to the top minor degree plus 8.
    pub cap: Option<u32>,
    pub budget: Budget,
    /// Fit dimension and degree of a nonempty locus. Without it a locus
    /// certified nonempty by its codimension is not computed at all.
    pub measure: bool,
}

impl Default for LocusOptions {
    fn default() -> Self {
        LocusOptions { cap: None, budget: Budget::default(), measure: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LocusKind {
    Lines,
    Secants,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LocusStatus {
    Empty,
    Nonempty,
    /// Neither certificate was reached within the caps.
    Undetermined,
}

/// How the emptiness verdict was certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certificate {
    /// The ideal contains every form of this degree.
    FullPiece { degree: u32 },
    /// A rank locus of expected codimension at most the ambient dimension
    /// is never empty.
    CodimensionBound,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankLocusReport {
    pub kind: LocusKind,
    pub n: usize,
    pub sigma: usize,
    /// Shape of the coefficient matrix.
    pub matrix_shape: (usize, usize),
    pub target_rank: usize,
    pub ambient_dim: usize,
    pub expected_codim: usize,
    pub status: LocusStatus,
    pub certificate: Certificate,
    /// Fitted dimension and degree, when the fit finished within the caps.
    pub dimension: Option<i64>,
    pub degree: Option<u64>,
    pub hilbert: Vec<u64>,
    /// Set when a Macaulay matrix exceeded the work budget.
    pub budget_hit: bool,
}

impl RankLocusReport {
    pub fn is_empty(&self) -> Option<bool> {
        match self.status {
            LocusStatus::Empty => Some(true),
            LocusStatus::Nonempty => Some(false),
            LocusStatus::Undetermined => None,
        }
    }

    pub fn expected_dim(&self) -> i64 {
        self.ambient_dim as i64 - self.expected_codim as i64
    }
}

fn rank_locus_report(
    kind: LocusKind,
    n: usize,
    sigma: usize,
    ideal: &GradedIdeal,
    shape: (usize, usize),
    opts: &LocusOptions,
) -> RankLocusReport {
    let target_rank = n - 1;
    let ambient_dim = ideal.ring_vars() - 1;
    let expected_codim = (shape.0 - target_rank) * (shape.1 - target_rank);
    let nonempty_by_codim = expected_codim <= ambient_dim;
    let cap = if nonempty_by_codim && !opts.measure {
        None
    } else {
        Some(opts.cap.unwrap_or(ideal.max_generator_degree() + 8))
    };
    let mut values: Vec<i64> = Vec::new();
    let mut status = if nonempty_by_codim { LocusStatus::Nonempty } else { LocusStatus::Undetermined };
    let mut certificate = if nonempty_by_codim { Certificate::CodimensionBound } else { Certificate::None };
    let (mut dimension, mut degree) = (None, None);
    let mut budget_hit = false;
    for t in cap.map(|c| 0..=c).into_iter().flatten() {
        match ideal.hilbert_function(t) {
            Err(_) => {
                budget_hit = true;
                break;
            }
            Ok(h) => {
                values.push(h as i64);
                if t >= 1 && h == 0 {
                    status = LocusStatus::Empty;
                    certificate = Certificate::FullPiece { degree: t };
                    dimension = Some(-1);
                    degree = Some(0);
                    break;
                }
                if nonempty_by_codim {
                    if let Some(fit) = fit_values(&values, ideal.max_generator_degree(), ambient_dim) {
                        if fit.dimension >= 0 {
                            dimension = Some(fit.dimension);
                            degree = Some(fit.degree);
                            break;
                        }
                    }
                }
            }
        }
    }
    RankLocusReport {
        kind,
        n,
        sigma,
        matrix_shape: shape,
        target_rank,
        ambient_dim,
        expected_codim,
        status,
        certificate,
        dimension,
        degree,
        hilbert: values.into_iter().map(|v| v as u64).collect(),
        budget_hit,
    }
}

/// Largest rank of a matrix of forms over `trials` random evaluations.
pub fn generic_rank(m: &FormMatrix, trials: usize, seed: u64) -> usize {
    let f = m.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| {
            let pt: Vec<u64> = (0..m.nvars()).map(|_| rng.gen_range(0..f.p())).collect();
            m.evaluate(&pt).rank(f)
        })
        .max()
        .unwrap_or(0)
}

/// An F_p-rational point on the projective scheme of `ideal`, which must
/// have the given dimension.
///
/// The scheme is cut by `dimension` random hyperplanes; the resulting
/// finite scheme is read through multiplication matrices on a graded piece
/// of its coordinate ring, and simple eigenvalues of a random combination
/// give points. Every returned point is checked against all generators.
pub fn rational_point(ideal: &GradedIdeal, dimension: usize, seed: u64, attempts: u32) -> Result<Vec<u64>, SecantError> {
    let f = ideal.field();
    let v = ideal.ring_vars();
    for attempt in 0..attempts {
        let mut rng = ChaCha8Rng::seed_from_u64(attempt_seed(seed, attempt));
        let vs = v - dimension;
        let basis: Vec<Vec<u64>> = (0..vs).map(|_| (0..v).map(|_| rng.gen_range(0..f.p())).collect()).collect();
        let images: Vec<Form> =
            (0..v).map(|j| Form::linear(f, &basis.iter().map(|row| row[j]).collect::<Vec<_>>())).collect();
        let sliced: Vec<Form> = ideal.generators().iter().map(|g| g.substitute(&images)).collect();
        let Some(points) = finite_scheme_points(f, vs, &sliced, &mut rng)? else { continue };
        for u in points {
            let y: Vec<u64> = (0..v)
                .map(|j| (0..vs).fold(0, |acc, a| f.add(acc, f.mul(u[a], basis[a][j]))))
                .collect();
            if y.iter().all(|&c| c == 0) {
                continue;
            }
            if ideal.generators().iter().all(|g| g.evaluate(&y) == 0) {
                return Ok(y);
            }
        }
    }
    Err(SecantError::NoRationalPoint { attempts })
}

/// Rational points of a finite scheme in P^(nvars-1), or `None` when the
/// slice was not finite and nonempty.
fn finite_scheme_points(
    f: PrimeField,
    nvars: usize,
    gens: &[Form],
    rng: &mut ChaCha8Rng,
) -> Result<Option<Vec<Vec<u64>>>, SecantError> {
    let ideal = GradedIdeal::new(f, nvars, gens.to_vec())?;
    let start = ideal.max_generator_degree();
    // Find t with H(t) = H(t + 1) = H(t + 2) > 0 past the generator degrees.
    let mut t = start;
    let cap = start + 12;
    loop {
        let (a, b, c) = (ideal.hilbert_function(t)?, ideal.hilbert_function(t + 1)?, ideal.hilbert_function(t + 2)?);
        if a == 0 {
            return Ok(None);
        }
        if a == b && b == c {
            break;
        }
        t += 1;
        if t > cap {
            return Ok(None);
        }
    }
    let lo = QuotientPiece::new(f, nvars, gens, t);
    let hi = QuotientPiece::new(f, nvars, gens, t + 1);
    let dim = lo.standard.len();
    if dim != hi.standard.len() || dim == 0 {
        return Ok(None);
    }
    // X_i: A_t -> A_{t+1}, multiplication by x_i.
    let mult: Vec<DenseMatrix> = (0..nvars)
        .map(|i| {
            let mut m = DenseMatrix::zeros(dim, dim);
            for (col, b) in lo.standard.iter().enumerate() {
                let shifted = b.mul(&Monomial::var(nvars, i));
                let nf = hi.normal_form_of_monomial(&shifted);
                for (row, val) in nf.into_iter().enumerate() {
                    m.set(row, col, val);
                }
            }
            m
        })
        .collect();
    let ell: Vec<u64> = (0..nvars).map(|_| rng.gen_range(1..f.p())).collect();
    let mut l = DenseMatrix::zeros(dim, dim);
    for (i, m) in mult.iter().enumerate() {
        for (slot, &x) in l.data.iter_mut().zip(&m.data) {
            *slot = f.add(*slot, f.mul(ell[i], x));
        }
    }
    let Some(linv) = l.inverse(f) else { return Ok(None) };
    let ts: Vec<DenseMatrix> = mult.iter().map(|m| linv.mul(f, m)).collect();
    let r: Vec<u64> = (0..nvars).map(|_| rng.gen_range(1..f.p())).collect();
    let mut t_comb = DenseMatrix::zeros(dim, dim);
    for (i, m) in ts.iter().enumerate() {
        for (slot, &x) in t_comb.data.iter_mut().zip(&m.data) {
            *slot = f.add(*slot, f.mul(r[i], x));
        }
    }
    let cp = t_comb.char_poly(f);
    let mut points = Vec::new();
    for lambda in cp.distinct_roots(f, rng) {
        let mut shifted = t_comb.clone();
        for k in 0..dim {
            let val = f.sub(shifted.get(k, k), lambda);
            shifted.set(k, k, val);
        }
        let ker = shifted.kernel(f);
        if ker.len() != 1 {
            continue;
        }
        let vec = &ker[0];
        let pivot = vec.iter().position(|&x| x != 0).unwrap();
        let inv = f.inv(vec[pivot]);
        let u: Vec<u64> = ts.iter().map(|m| f.mul(m.mul_vec(f, vec)[pivot], inv)).collect();
        points.push(u);
    }
    Ok(Some(points))
}

/// Reduced echelon form of `(I)_t` inside `S_t`, for normal forms.
struct QuotientPiece {
    f: PrimeField,
    index: FxHashMap<Monomial, usize>,
    rref: DenseMatrix,
    pivots: Vec<usize>,
    /// Standard monomials (non-pivot columns) in column order.
    standard: Vec<Monomial>,
    standard_pos: Vec<Option<usize>>,
}

impl QuotientPiece {
    fn new(f: PrimeField, nvars: usize, gens: &[Form], t: u32) -> Self {
        let monos = monomials_of_degree(nvars, t);
        let index: FxHashMap<Monomial, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::new();
        for g in gens.iter().filter(|g| !g.is_zero() && g.degree() <= t) {
            for m in monomials_of_degree(nvars, t - g.degree()) {
                let mut row = vec![0u64; monos.len()];
                for (gm, c) in g.terms() {
                    row[index[&gm.mul(&m)]] = *c;
                }
                rows.push(row);
            }
        }
        let (rref, pivots) = if rows.is_empty() {
            (DenseMatrix::zeros(0, monos.len()), Vec::new())
        } else {
            let r = DenseMatrix::from_rows(&rows).rref(f);
            (r.matrix, r.pivots)
        };
        let mut is_pivot = vec![false; monos.len()];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut standard = Vec::new();
        let mut standard_pos = vec![None; monos.len()];
        for (i, m) in monos.iter().enumerate() {
            if !is_pivot[i] {
                standard_pos[i] = Some(standard.len());
                standard.push(m.clone());
            }
        }
        QuotientPiece { f, index, rref, pivots, standard, standard_pos }
    }

    /// Coordinates of a monomial modulo `(I)_t` on the standard monomials.
    fn normal_form_of_monomial(&self, m: &Monomial) -> Vec<u64> {
        let f = self.f;
        let col = self.index[m];
        let mut out = vec![0u64; self.standard.len()];
        if let Some(pos) = self.standard_pos[col] {
            out[pos] = 1;
            return out;
        }
        // m = pivot of row r: m = -(rest of the row) modulo the ideal.
        let r = self.pivots.iter().position(|&p| p == col).unwrap();
        for (c, slot) in self.standard_pos.iter().enumerate() {
            if let Some(pos) = slot {
                out[*pos] = f.neg(self.rref.get(r, c));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_of_a_finite_scheme() {
        // Three points of P^2: (1:0:0), (0:1:0), (1:1:1), cut out by quadrics.
        let f = PrimeField::default();
        let x = |i| Form::var(f, 3, i);
        let gens = vec![
            x(0).mul(&x(2)).sub(&x(1).mul(&x(2))),
            x(1).mul(&x(2)).sub(&x(2).mul(&x(2))),
            x(0).mul(&x(1)).sub(&x(1).mul(&x(2))),
        ];
        let ideal = GradedIdeal::new(f, 3, gens).unwrap();
        let fit = ideal.hilbert_poly_fit(8).unwrap();
        assert_eq!((fit.dimension, fit.degree), (0, 3));
        let p = rational_point(&ideal, 0, 5, 4).unwrap();
        assert!(ideal.generators().iter().all(|g| g.evaluate(&p) == 0));
    }
}
