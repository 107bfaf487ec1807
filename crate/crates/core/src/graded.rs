//! Homogeneous ideals, Hilbert functions and their fitted polynomials.

use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::PrimeField;
use crate::linalg::DenseMatrix;
use crate::incremental::IncrementalBasis;
use crate::poly::Form;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradedError {
    #[error("degree {degree} needs a {rows} x {columns} Macaulay matrix, over the work budget")]
    BudgetExceeded { degree: u32, rows: usize, columns: usize },
    #[error("no value of t <= {cap} satisfies the vanishing condition")]
    SigmaNotReached { cap: u32 },
    #[error("Hilbert function did not become polynomial for t <= {cap}")]
    InsufficientRange { cap: u32 },
    #[error("generator lives in a ring with {found} variables, expected {expected}")]
    RingMismatch { expected: usize, found: usize },
}

/// Upper limits on the size of a single Macaulay matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_columns: usize,
    pub max_rows: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_columns: 16_000, max_rows: 60_000 }
    }
}

/// Binomial coefficient as u64; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Binomial with an integer top argument, following `C(a, k) = 0` for
/// `a < k` (the convention used when counting monomials).
pub fn binomial_i(a: i64, k: u64) -> u64 {
    if a < 0 {
        0
    } else {
        binomial(a as u64, k)
    }
}

/// Dimension of the space of forms of degree `t` in `nvars` variables.
pub fn monomial_count(nvars: usize, t: u32) -> u64 {
    if nvars == 0 {
        return u64::from(t == 0);
    }
    binomial(t as u64 + nvars as u64 - 1, nvars as u64 - 1)
}

#[derive(Debug, Clone)]
struct Reduced {
    nvars: usize,
    generators: Vec<Form>,
    unit: bool,
}

/// A homogeneous ideal given by generators, with a memo of Hilbert values.
#[derive(Debug)]
pub struct GradedIdeal {
    field: PrimeField,
    ring_vars: usize,
    generators: Vec<Form>,
    budget: Budget,
    reduced: OnceLock<Reduced>,
    engine: Mutex<Engine>,
}

/// Hilbert values computed so far and the basis of the last degree.
#[derive(Debug, Clone, Default)]
struct Engine {
    basis: Option<IncrementalBasis>,
    values: Vec<u64>,
}

impl Clone for GradedIdeal {
    fn clone(&self) -> Self {
        GradedIdeal {
            field: self.field,
            ring_vars: self.ring_vars,
            generators: self.generators.clone(),
            budget: self.budget,
            reduced: self.reduced.clone(),
            engine: Mutex::new(self.engine.lock().unwrap().clone()),
        }
    }
}

impl GradedIdeal {
    pub fn new(field: PrimeField, ring_vars: usize, generators: Vec<Form>) -> Result<Self, GradedError> {
        for g in &generators {
            if g.nvars() != ring_vars {
                return Err(GradedError::RingMismatch { expected: ring_vars, found: g.nvars() });
            }
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(GradedIdeal {
            field,
            ring_vars,
            generators,
            budget: Budget::default(),
            reduced: OnceLock::new(),
            engine: Mutex::new(Engine::default()),
        })
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn ring_vars(&self) -> usize {
        self.ring_vars
    }

    pub fn generators(&self) -> &[Form] {
        &self.generators
    }

    pub fn max_generator_degree(&self) -> u32 {
        self.generators.iter().map(|g| g.degree()).max().unwrap_or(0)
    }

    /// Linear generators are solved for and substituted away; the quotient
    /// ring, hence its Hilbert function, is unchanged.
    fn reduced(&self) -> &Reduced {
        self.reduced.get_or_init(|| eliminate_linear(self.field, self.ring_vars, &self.generators))
    }

    /// Number of variables left after eliminating linear generators.
    pub fn effective_vars(&self) -> usize {
        self.reduced().nvars
    }

    /// `H_{S/I}(t)`.
    pub fn hilbert_function(&self, t: u32) -> Result<u64, GradedError> {
        let red = self.reduced();
        if red.unit {
            return Ok(0);
        }
        if red.nvars == 0 {
            return Ok(u64::from(t == 0));
        }
        let mut engine = self.engine.lock().unwrap();
        let engine = &mut *engine;
        let basis = engine
            .basis
            .get_or_insert_with(|| IncrementalBasis::new(self.field, red.nvars, &red.generators));
        while engine.values.len() <= t as usize {
            let step = basis.next_step_size();
            if step.rows > 0 && (step.columns > self.budget.max_columns || step.rows > self.budget.max_rows) {
                return Err(GradedError::BudgetExceeded {
                    degree: engine.values.len() as u32,
                    rows: step.rows,
                    columns: step.columns,
                });
            }
            engine.values.push(basis.advance());
        }
        Ok(engine.values[t as usize])
    }

    /// `dim_k (I)_t`.
    pub fn ideal_piece_dimension(&self, t: u32) -> Result<u64, GradedError> {
        Ok(monomial_count(self.ring_vars, t) - self.hilbert_function(t)?)
    }

    /// Hilbert values for `t = 0..=up_to`.
    pub fn hilbert_values(&self, up_to: u32) -> Result<Vec<u64>, GradedError> {
        (0..=up_to).map(|t| self.hilbert_function(t)).collect()
    }

    /// Smallest `t >= 0` with `Delta^{n-1} H(t) = 0`, where `n + 1` is the
    /// number of variables of the ambient ring. `cap` bounds the search.
    pub fn sigma(&self, n: usize, cap: u32) -> Result<u32, GradedError> {
        let mut values = Vec::new();
        for t in 0..=cap {
            values.push(self.hilbert_function(t)? as i64);
            if difference_at(&values, n.saturating_sub(1), t as usize) == 0 {
                return Ok(t);
            }
        }
        Err(GradedError::SigmaNotReached { cap })
    }

    /// Fit the Hilbert polynomial from values up to `cap`.
    pub fn hilbert_poly_fit(&self, cap: u32) -> Result<HilbertFit, GradedError> {
        let mut values: Vec<i64> = Vec::new();
        let start = self.max_generator_degree();
        let max_m = self.ring_vars.saturating_sub(1);
        for t in 0..=cap {
            values.push(self.hilbert_function(t)? as i64);
            if let Some(fit) = fit_values(&values, start, max_m) {
                return Ok(fit);
            }
        }
        Err(GradedError::InsufficientRange { cap })
    }

    /// Whether `(I)_t = S_t` for some `t <= cap`; `Ok(None)` if not decided.
    pub fn emptiness_degree(&self, cap: u32) -> Result<Option<u32>, GradedError> {
        for t in 1..=cap {
            if self.hilbert_function(t)? == 0 {
                return Ok(Some(t));
            }
        }
        Ok(None)
    }
}

/// `Delta^k H(t)` with `H(s) = 0` for `s < 0`.
pub fn difference_at(values: &[i64], k: usize, t: usize) -> i64 {
    // Delta^k H(t) = sum_j (-1)^j C(k, j) H(t - j)
    let mut total = 0i64;
    for j in 0..=k {
        if j > t {
            break;
        }
        let c = binomial(k as u64, j as u64) as i64;
        let h = values[t - j];
        total += if j % 2 == 0 { c * h } else { -c * h };
    }
    total
}

/// Fitted Hilbert polynomial data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertFit {
    /// Dimension of the projective scheme; `-1` for the empty scheme.
    pub dimension: i64,
    pub degree: u64,
    /// Genus of a general curve section, for positive dimension.
    pub sectional_genus: Option<i64>,
    /// Last degree used by the fit.
    pub fitted_at: u32,
}

/// Try to read off the Hilbert polynomial from values `H(0..=t)`.
///
/// Accepts the smallest `m` for which `Delta^{m+1} H` vanishes at the last
/// two degrees, both at or beyond `start`, using only genuine values
/// (no negative arguments inside the window).
pub fn fit_values(values: &[i64], start: u32, max_m: usize) -> Option<HilbertFit> {
    let t = values.len() - 1;
    if t == 0 {
        return None;
    }
    if values[t] == 0 {
        return Some(HilbertFit { dimension: -1, degree: 0, sectional_genus: None, fitted_at: t as u32 });
    }
    if (t as u32) < start {
        return None;
    }
    for m in 0..=max_m {
        if t < m + 2 {
            break;
        }
        if difference_at(values, m + 1, t) == 0 && difference_at(values, m + 1, t - 1) == 0 {
            let degree = difference_at(values, m, t);
            if degree <= 0 {
                return None;
            }
            let sectional_genus = (m >= 1).then(|| {
                let lin = difference_at(values, m - 1, t);
                1 - (lin - degree * t as i64)
            });
            return Some(HilbertFit {
                dimension: m as i64,
                degree: degree as u64,
                sectional_genus,
                fitted_at: t as u32,
            });
        }
    }
    None
}

fn eliminate_linear(field: PrimeField, nvars: usize, gens: &[Form]) -> Reduced {
    if gens.iter().any(|g| g.degree() == 0) {
        return Reduced { nvars, generators: Vec::new(), unit: true };
    }
    let linear: Vec<Vec<u64>> = gens
        .iter()
        .filter(|g| g.degree() == 1)
        .map(|g| {
            let mut row = vec![0u64; nvars];
            for (m, c) in g.terms() {
                let i = m.exps().iter().position(|&e| e == 1).unwrap();
                row[i] = *c;
            }
            row
        })
        .collect();
    if linear.is_empty() {
        return Reduced { nvars, generators: gens.to_vec(), unit: false };
    }
    let rref = DenseMatrix::from_rows(&linear).rref(field);
    let mut is_pivot = vec![false; nvars];
    for &c in &rref.pivots {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..nvars).filter(|&c| !is_pivot[c]).collect();
    let new_n = free.len();
    let mut images: Vec<Form> = vec![Form::zero(field, new_n, 1); nvars];
    for (k, &c) in free.iter().enumerate() {
        images[c] = Form::var(field, new_n, k);
    }
    for (r, &c) in rref.pivots.iter().enumerate() {
        let coeffs: Vec<u64> = free.iter().map(|&j| field.neg(rref.matrix.get(r, j))).collect();
        images[c] = Form::linear(field, &coeffs);
    }
    if new_n == 0 {
        return Reduced { nvars: 0, generators: Vec::new(), unit: false };
    }
    let generators = gens
        .iter()
        .filter(|g| g.degree() >= 2)
        .map(|g| g.substitute(&images))
        .filter(|g| !g.is_zero())
        .collect();
    Reduced { nvars: new_n, generators, unit: false }
}

/// A graded free resolution summarized by `(index, twist, multiplicity)`;
/// index 1 holds the generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub entries: Vec<(u32, i64, u64)>,
}

/// `H_{S/I}(t)` from a resolution of `I` over a ring with `ring_vars`
/// variables.
pub fn betti_to_hilbert(table: &BettiTable, ring_vars: usize, t: i64) -> i64 {
    let n = ring_vars as u64 - 1;
    let mut total = binomial_i(t + n as i64, n) as i64;
    for &(i, twist, mult) in &table.entries {
        let v = binomial_i(t - twist + n as i64, n) as i64 * mult as i64;
        total += if i % 2 == 1 { -v } else { v };
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Form;

    #[test]
    fn betti_examples() {
        let hyper = BettiTable { entries: vec![(1, 4, 1)] };
        assert_eq!(betti_to_hilbert(&hyper, 5, 4), 69);
        let en = BettiTable { entries: vec![(1, 4, 5), (2, 5, 4)] };
        assert_eq!(betti_to_hilbert(&en, 6, 5), 226);
    }

    #[test]
    fn twisted_cubic_hilbert_data() {
        let f = PrimeField::default();
        let x = |i| Form::var(f, 4, i);
        let gens = vec![
            x(0).mul(&x(2)).sub(&x(1).mul(&x(1))),
            x(0).mul(&x(3)).sub(&x(1).mul(&x(2))),
            x(1).mul(&x(3)).sub(&x(2).mul(&x(2))),
        ];
        let ideal = GradedIdeal::new(f, 4, gens).unwrap();
        assert_eq!(ideal.hilbert_values(4).unwrap(), vec![1, 4, 7, 10, 13]);
        assert_eq!(ideal.sigma(3, 6).unwrap(), 2);
        let fit = ideal.hilbert_poly_fit(10).unwrap();
        assert_eq!((fit.dimension, fit.degree, fit.sectional_genus), (1, 3, Some(0)));
    }

    #[test]
    fn linear_generators_are_eliminated() {
        let f = PrimeField::default();
        let x = |i| Form::var(f, 3, i);
        // a point in P^2 cut by two lines
        let ideal = GradedIdeal::new(f, 3, vec![x(0).sub(&x(1)), x(2)]).unwrap();
        assert_eq!(ideal.effective_vars(), 1);
        assert_eq!(ideal.hilbert_values(3).unwrap(), vec![1, 1, 1, 1]);
        assert_eq!(ideal.ideal_piece_dimension(2).unwrap(), 5);
        let fit = ideal.hilbert_poly_fit(6).unwrap();
        assert_eq!((fit.dimension, fit.degree), (0, 1));
    }
}
