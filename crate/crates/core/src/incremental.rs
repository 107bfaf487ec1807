//! Degree-by-degree reduced bases of a homogeneous ideal.
//!
//! The basis of `(I)_t` is kept in reduced row echelon form with respect to
//! descending grevlex columns: each element is a leading monomial plus a
//! dense tail over the standard monomials of degree `t`, of which there are
//! only `H(t)`. The next degree is spanned by `x_i * b` for basis elements
//! `b` together with the generators of that degree.
//!
//! Among the shifted rows, the first one with a given leading column becomes
//! a pivot. Pivots are reduced among themselves in one backward sweep, after
//! which their tails live on the few non-pivot columns. The span of the
//! remaining shifted rows is reached with random elements `l * g`, `l` a
//! linear form and `g` in `(I)_t`, whose residuals feed a small dense echelon
//! form. Sampling stops after two consecutive residuals add nothing; a
//! missed direction has probability below `2 / p` per draw.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::PrimeField;
use crate::macaulay::MonomialIndexer;
use crate::poly::Form;

/// Reduced basis of `(I)_t` for the current degree `t`.
#[derive(Debug, Clone)]
pub struct IncrementalBasis {
    field: PrimeField,
    nvars: usize,
    generators: BTreeMap<u32, Vec<Vec<(Vec<u8>, u64)>>>,
    degree: Option<u32>,
    /// Leading columns of the basis, in degree `t`.
    lead: Vec<u32>,
    /// Row-major `lead.len() x standard.len()` tails.
    tails: Vec<u64>,
    /// Columns of the standard monomials, in degree `t`.
    standard: Vec<u32>,
    /// Set once `(I)_t` is all of `S_t`; every later piece is full too.
    full: bool,
    seed: u64,
}

/// Size of the next elimination, for budget checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepSize {
    pub rows: usize,
    pub columns: usize,
}

const NONE: u32 = u32::MAX;

impl IncrementalBasis {
    pub fn new(field: PrimeField, nvars: usize, generators: &[Form]) -> Self {
        let mut by_degree: BTreeMap<u32, Vec<Vec<(Vec<u8>, u64)>>> = BTreeMap::new();
        for g in generators.iter().filter(|g| !g.is_zero()) {
            let terms = g.terms().iter().map(|(m, c)| (m.exps().to_vec(), *c)).collect();
            by_degree.entry(g.degree()).or_default().push(terms);
        }
        IncrementalBasis {
            field,
            nvars,
            generators: by_degree,
            degree: None,
            lead: Vec::new(),
            tails: Vec::new(),
            standard: Vec::new(),
            full: false,
            seed: 0x6b1d_35e7,
        }
    }

    /// Seed for the random elements used to span shifted rows.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Degree of the basis currently held, if any step was taken.
    pub fn degree(&self) -> Option<u32> {
        self.degree
    }

    /// Size of the elimination that `advance` would perform next.
    pub fn next_step_size(&self) -> StepSize {
        let t = self.next_degree();
        let columns = MonomialIndexer::new(self.nvars, t).count();
        if self.full {
            return StepSize { rows: 0, columns };
        }
        let gens = self.generators.get(&t).map(|g| g.len()).unwrap_or(0);
        StepSize { rows: self.lead.len() * self.nvars + gens, columns }
    }

    fn next_degree(&self) -> u32 {
        self.degree.map(|d| d + 1).unwrap_or(0)
    }

    /// Compute the basis of the next degree and return `H(t)` for it.
    pub fn advance(&mut self) -> u64 {
        let t = self.next_degree();
        self.degree = Some(t);
        if self.full {
            return 0;
        }
        let f = self.field;
        let nv = self.nvars;
        let idx = MonomialIndexer::new(nv, t);
        let ncols = idx.count();
        let gen_rows: Vec<Vec<(u32, u64)>> = match self.generators.get(&t) {
            Some(gens) => gens.iter().map(|g| normalized_row(f, &idx, g)).collect(),
            None => Vec::new(),
        };
        if self.lead.is_empty() && gen_rows.is_empty() {
            self.standard = (0..ncols as u32).collect();
            self.tails.clear();
            return ncols as u64;
        }
        let h_prev = self.standard.len();
        let up = if t > 0 { up_table(nv, t - 1, &idx) } else { Vec::new() };

        // Pass 1: first row per leading column pivots.
        let mut pivot_src: Vec<u32> = vec![NONE; ncols];
        let mut shift_extras = false;
        for (r, &lc) in self.lead.iter().enumerate() {
            for var in 0..nv {
                let c = up[lc as usize * nv + var] as usize;
                if pivot_src[c] == NONE {
                    pivot_src[c] = (r * nv + var) as u32;
                } else {
                    shift_extras = true;
                }
            }
        }
        let shift_count = (self.lead.len() * nv) as u32;
        let mut gen_extras = Vec::new();
        for (gi, row) in gen_rows.iter().enumerate() {
            let c = row[0].0 as usize;
            if pivot_src[c] == NONE {
                pivot_src[c] = shift_count + gi as u32;
            } else {
                gen_extras.push(gi);
            }
        }
        let mut kpos: Vec<u32> = vec![NONE; ncols];
        let mut pidx: Vec<u32> = vec![NONE; ncols];
        let mut nonpivot: Vec<u32> = Vec::new();
        let mut npiv = 0u32;
        for c in 0..ncols {
            if pivot_src[c] == NONE {
                kpos[c] = nonpivot.len() as u32;
                nonpivot.push(c as u32);
            } else {
                pidx[c] = npiv;
                npiv += 1;
            }
        }
        let k = nonpivot.len();
        let cx = Columns { field: f, k, kpos: &kpos, pidx: &pidx };

        // Pass 2: reduce pivot rows from the last column backwards.
        let mut reduced = vec![0u64; npiv as usize * k];
        let mut acc = vec![0u64; k];
        let mut entries: Vec<(u32, u64)> = Vec::with_capacity(h_prev + 1);
        for c in (0..ncols).rev() {
            let si = pivot_src[c];
            if si == NONE {
                continue;
            }
            if si < shift_count {
                let (r, var) = ((si as usize) / nv, (si as usize) % nv);
                self.shift_entries(r, var, &up, &mut entries);
            } else {
                entries.clear();
                entries.extend_from_slice(&gen_rows[(si - shift_count) as usize]);
            }
            acc.iter_mut().for_each(|x| *x = 0);
            for &(col, val) in &entries[1..] {
                cx.add(&mut acc, col, val, &reduced);
            }
            f.reduce_all(&mut acc);
            let p = pidx[c] as usize;
            reduced[p * k..(p + 1) * k].copy_from_slice(&acc);
        }

        // Pass 3: residuals on the non-pivot columns.
        let mut dense = DenseEchelon::new(k);
        for &gi in &gen_extras {
            if dense.rank() == k {
                break;
            }
            acc.iter_mut().for_each(|x| *x = 0);
            for &(col, val) in &gen_rows[gi] {
                cx.add(&mut acc, col, val, &reduced);
            }
            f.reduce_all(&mut acc);
            dense.insert(f, acc.clone());
        }
        if shift_extras && dense.rank() < k {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ ((t as u64) << 32));
            let mut row = vec![0u64; ncols];
            let mut quiet = 0;
            while quiet < 2 && dense.rank() < k {
                self.random_shift_element(&mut rng, &up, &mut row);
                acc.iter_mut().for_each(|x| *x = 0);
                for (col, &val) in row.iter().enumerate() {
                    if val != 0 {
                        cx.add(&mut acc, col as u32, val, &reduced);
                    }
                }
                f.reduce_all(&mut acc);
                if dense.insert(f, acc.clone()) {
                    quiet = 0;
                } else {
                    quiet += 1;
                }
            }
        }

        // Pass 4: assemble the reduced basis of degree t.
        let mut is_dense_pivot = vec![false; k];
        for &q in &dense.pivots {
            is_dense_pivot[q as usize] = true;
        }
        let keep: Vec<usize> = (0..k).filter(|&q| !is_dense_pivot[q]).collect();
        let h = keep.len();
        if h == 0 {
            self.full = true;
            self.lead.clear();
            self.tails.clear();
            self.standard.clear();
            return 0;
        }
        let mut lead = Vec::with_capacity(npiv as usize + dense.rank());
        let mut tails = Vec::with_capacity((npiv as usize + dense.rank()) * h);
        for c in 0..ncols {
            if pivot_src[c] == NONE {
                continue;
            }
            let p = pidx[c] as usize;
            acc.copy_from_slice(&reduced[p * k..(p + 1) * k]);
            for (di, &q) in dense.pivots.iter().enumerate() {
                let a = f.reduce(acc[q as usize]);
                if a != 0 {
                    f.axpy(&mut acc, f.neg(a), &dense.rows[di]);
                }
            }
            lead.push(c as u32);
            tails.extend(keep.iter().map(|&q| f.reduce(acc[q])));
        }
        for (di, &q) in dense.pivots.iter().enumerate() {
            lead.push(nonpivot[q as usize]);
            tails.extend(keep.iter().map(|&pos| dense.rows[di][pos]));
        }
        self.lead = lead;
        self.tails = tails;
        self.standard = keep.iter().map(|&q| nonpivot[q]).collect();
        h as u64
    }

    /// Entries of `x_var * basis[r]` in degree `t + 1`, leading entry first.
    fn shift_entries(&self, r: usize, var: usize, up: &[u32], out: &mut Vec<(u32, u64)>) {
        let nv = self.nvars;
        let h = self.standard.len();
        out.clear();
        out.push((up[self.lead[r] as usize * nv + var], 1));
        for (s, &c) in self.tails[r * h..(r + 1) * h].iter().enumerate() {
            if c != 0 {
                out.push((up[self.standard[s] as usize * nv + var], c));
            }
        }
    }

    /// Dense row of `l * g` for a random linear form `l` and a random
    /// element `g` of the current basis span.
    fn random_shift_element(&self, rng: &mut ChaCha8Rng, up: &[u32], row: &mut [u64]) {
        let f = self.field;
        let nv = self.nvars;
        let h = self.standard.len();
        let p = f.p();
        let coeffs: Vec<u64> = (0..self.lead.len()).map(|_| rng.gen_range(0..p)).collect();
        let mut std_part = vec![0u64; h];
        for (r, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                f.axpy(&mut std_part, c, &self.tails[r * h..(r + 1) * h]);
            }
        }
        f.reduce_all(&mut std_part);
        let linear: Vec<u64> = (0..nv).map(|_| rng.gen_range(0..p)).collect();
        row.iter_mut().for_each(|x| *x = 0);
        let terms = self.lead.iter().zip(&coeffs).chain(self.standard.iter().zip(&std_part));
        for (&col, &g) in terms {
            if g == 0 {
                continue;
            }
            let base = col as usize * nv;
            for (var, &l) in linear.iter().enumerate() {
                let c = up[base + var] as usize;
                row[c] = f.reduce(row[c] + g * l);
            }
        }
    }
}

/// Column bookkeeping for one degree step.
struct Columns<'a> {
    field: PrimeField,
    k: usize,
    kpos: &'a [u32],
    pidx: &'a [u32],
}

impl Columns<'_> {
    /// Add `val * column` to the accumulator, replacing a pivot column by
    /// minus its reduced tail.
    #[inline]
    fn add(&self, acc: &mut [u64], col: u32, val: u64, reduced: &[u64]) {
        let q = self.kpos[col as usize];
        if q != NONE {
            acc[q as usize] += val;
        } else {
            let p = self.pidx[col as usize] as usize;
            self.field.axpy(acc, self.field.neg(val), &reduced[p * self.k..(p + 1) * self.k]);
        }
    }
}

/// `up[c * nvars + i]` is the column of `x_i * m_c` in degree `t + 1`.
fn up_table(nvars: usize, t: u32, next: &MonomialIndexer) -> Vec<u32> {
    let all = MonomialIndexer::new(nvars, t).all_monomials();
    let mut out = Vec::with_capacity(all.len() * nvars);
    for mut e in all {
        for var in 0..nvars {
            e[var] += 1;
            out.push(next.index(&e) as u32);
            e[var] -= 1;
        }
    }
    out
}

/// Generator row scaled so its grevlex-leading coefficient is one, with the
/// leading entry first.
fn normalized_row(f: PrimeField, idx: &MonomialIndexer, terms: &[(Vec<u8>, u64)]) -> Vec<(u32, u64)> {
    let mut row: Vec<(u32, u64)> = terms.iter().map(|(e, c)| (idx.index(e) as u32, *c)).collect();
    row.sort_unstable_by_key(|x| x.0);
    let inv = f.inv(row[0].1);
    row.into_iter().map(|(c, v)| (c, f.mul(v, inv))).collect()
}

/// Incrementally maintained reduced echelon form of dense vectors.
struct DenseEchelon {
    width: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<u32>,
}

impl DenseEchelon {
    fn new(width: usize) -> Self {
        DenseEchelon { width, rows: Vec::new(), pivots: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Insert a reduced vector; returns whether the rank grew.
    fn insert(&mut self, f: PrimeField, mut v: Vec<u64>) -> bool {
        debug_assert_eq!(v.len(), self.width);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let a = f.reduce(v[p as usize]);
            if a != 0 {
                f.axpy(&mut v, f.neg(a), row);
            }
        }
        f.reduce_all(&mut v);
        let Some(p) = v.iter().position(|&x| x != 0) else { return false };
        let inv = f.inv(v[p]);
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let a = row[p];
            if a != 0 {
                f.axpy(row, f.neg(a), &v);
                f.reduce_all(row);
            }
        }
        self.rows.push(v);
        self.pivots.push(p as u32);
        true
    }
}
