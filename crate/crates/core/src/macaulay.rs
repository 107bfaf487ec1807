//! Ranks of Macaulay matrices: the span of all `m * g` in a fixed degree.
//!
//! Columns are the monomials of degree `t` in graded reverse lexicographic
//! order, largest first, so the leading column of `m * g` is `m` times the
//! leading monomial of `g`. Rows whose leading column is new become pivots
//! without any arithmetic; the remaining rows are reduced one at a time in
//! a dense accumulator and either vanish or contribute a new pivot.

use crate::field::PrimeField;
use crate::poly::{monomials_of_degree, Form};

/// Ranks monomials of one degree in descending grevlex order.
#[derive(Debug, Clone)]
pub struct MonomialIndexer {
    nvars: usize,
    degree: u32,
    binom: Vec<Vec<u64>>,
}

impl MonomialIndexer {
    pub fn new(nvars: usize, degree: u32) -> Self {
        let top = degree as usize + nvars + 1;
        let mut binom = vec![vec![0u64; nvars + 1]; top + 1];
        for n in 0..=top {
            binom[n][0] = 1;
            for k in 1..=nvars.min(n) {
                binom[n][k] = binom[n - 1][k - 1] + if k <= n - 1 { binom[n - 1][k] } else { 0 };
            }
        }
        MonomialIndexer { nvars, degree, binom }
    }

    /// Number of monomials of the indexed degree.
    pub fn count(&self) -> usize {
        if self.nvars == 0 {
            return usize::from(self.degree == 0);
        }
        self.binom[self.degree as usize + self.nvars - 1][self.nvars - 1] as usize
    }

    /// Exponent vectors of all monomials, indexed by position.
    pub fn all_monomials(&self) -> Vec<Vec<u8>> {
        let mut out = vec![Vec::new(); self.count()];
        for m in monomials_of_degree(self.nvars, self.degree) {
            let i = self.index(m.exps());
            out[i] = m.exps().to_vec();
        }
        out
    }

    /// Position of an exponent vector (which must have the indexed degree).
    #[inline]
    pub fn index(&self, exps: &[u8]) -> usize {
        // Descending grevlex equals ascending lex on the reversed vector.
        let v = self.nvars;
        let mut rem = self.degree as usize;
        let mut rank = 0u64;
        for i in 0..v.saturating_sub(1) {
            let c = exps[v - 1 - i] as usize;
            let k = v - i - 1;
            rank += self.binom[rem + k][k] - self.binom[rem - c + k][k];
            rem -= c;
        }
        rank as usize
    }
}

/// Rank of the degree-`t` piece spanned by `generators`, stopping early
/// once `stop_at` is reached.
pub fn macaulay_rank(field: PrimeField, nvars: usize, generators: &[Form], t: u32, stop_at: usize) -> usize {
    let idx = MonomialIndexer::new(nvars, t);
    let ncols = idx.count();
    let stop_at = stop_at.min(ncols);
    if stop_at == 0 {
        return 0;
    }
    let gens = prepare(field, nvars, generators, t);
    if gens.is_empty() {
        return 0;
    }
    let mut pivot_of: Vec<u32> = vec![u32::MAX; ncols];
    let mut store = RowStore::default();
    let mut extras: Vec<(usize, usize)> = Vec::new();

    // Pass 1: one pivot per distinct leading column, taken verbatim.
    for (gi, g) in gens.iter().enumerate() {
        for (mi, m) in g.multipliers.iter().enumerate() {
            let lead = idx.index(&add_exps(m, &g.terms[g.lead].0));
            if pivot_of[lead] == u32::MAX {
                let row = build_row(&idx, m, g);
                pivot_of[lead] = store.push(&row[1..]);
            } else {
                extras.push((gi, mi));
            }
        }
    }
    let mut rank = store.len();
    if rank >= stop_at {
        return stop_at;
    }

    // Pass 2: reduce the remaining rows.
    let mut acc = vec![0u64; ncols];
    let p = field.p();
    let mut tail: Vec<(u32, u32)> = Vec::new();
    for (gi, mi) in extras {
        let g = &gens[gi];
        let row = build_row(&idx, &g.multipliers[mi], g);
        let start = row[0].0 as usize;
        for &(c, v) in &row {
            acc[c as usize] = v as u64;
        }
        let mut j = start;
        while j < ncols {
            let a = acc[j];
            if a == 0 {
                j += 1;
                continue;
            }
            let pr = pivot_of[j];
            if pr != u32::MAX {
                let factor = p - a;
                let (cols, vals) = store.get(pr);
                for (&c, &v) in cols.iter().zip(vals) {
                    let slot = &mut acc[c as usize];
                    *slot = field.reduce(*slot + factor * v as u64);
                }
                acc[j] = 0;
                j += 1;
            } else {
                let inv = field.inv(a);
                acc[j] = 0;
                tail.clear();
                for (c, slot) in acc.iter_mut().enumerate().skip(j + 1) {
                    if *slot != 0 {
                        tail.push((c as u32, field.mul(*slot, inv) as u32));
                        *slot = 0;
                    }
                }
                pivot_of[j] = store.push(&tail);
                rank += 1;
                break;
            }
        }
        if rank >= stop_at {
            return stop_at;
        }
    }
    rank
}

struct PreparedGen {
    /// Terms scaled so the grevlex-leading coefficient is one.
    terms: Vec<(Vec<u8>, u32)>,
    lead: usize,
    multipliers: Vec<Vec<u8>>,
}

fn prepare(field: PrimeField, nvars: usize, generators: &[Form], t: u32) -> Vec<PreparedGen> {
    let mut out: Vec<PreparedGen> = Vec::new();
    for g in generators {
        if g.is_zero() || g.degree() > t {
            continue;
        }
        let d = g.degree();
        let gidx = MonomialIndexer::new(nvars, d);
        let lead = g
            .terms()
            .iter()
            .enumerate()
            .min_by_key(|(_, (m, _))| gidx.index(m.exps()))
            .map(|(i, _)| i)
            .unwrap();
        let inv = field.inv(g.terms()[lead].1);
        let terms = g
            .terms()
            .iter()
            .map(|(m, c)| (m.exps().to_vec(), field.mul(*c, inv) as u32))
            .collect();
        let multipliers = monomials_of_degree(nvars, t - d).into_iter().map(|m| m.exps().to_vec()).collect();
        out.push(PreparedGen { terms, lead, multipliers });
    }
    // Sparse generators first: their multiples make the cheapest pivots.
    out.sort_by_key(|g| g.terms.len());
    out
}

#[inline]
fn add_exps(a: &[u8], b: &[u8]) -> [u8; 64] {
    let mut out = [0u8; 64];
    for i in 0..a.len() {
        out[i] = a[i] + b[i];
    }
    out
}

/// Row entries sorted by column; the first entry is the leading one with
/// coefficient one.
fn build_row(idx: &MonomialIndexer, m: &[u8], g: &PreparedGen) -> Vec<(u32, u32)> {
    let mut row: Vec<(u32, u32)> = g
        .terms
        .iter()
        .map(|(e, c)| (idx.index(&add_exps(m, e)[..m.len()]) as u32, *c))
        .collect();
    row.sort_unstable_by_key(|x| x.0);
    row
}

#[derive(Default)]
struct RowStore {
    offsets: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<u32>,
}

impl RowStore {
    fn push(&mut self, entries: &[(u32, u32)]) -> u32 {
        self.offsets.push(self.cols.len());
        for &(c, v) in entries {
            self.cols.push(c);
            self.vals.push(v);
        }
        (self.offsets.len() - 1) as u32
    }

    fn len(&self) -> usize {
        self.offsets.len()
    }

    fn get(&self, i: u32) -> (&[u32], &[u32]) {
        let i = i as usize;
        let start = self.offsets[i];
        let end = self.offsets.get(i + 1).copied().unwrap_or(self.cols.len());
        (&self.cols[start..end], &self.vals[start..end])
    }
}
