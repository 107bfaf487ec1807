//! Matrices whose entries are forms, and their minors.

use rustc_hash::FxHashMap;

use crate::field::PrimeField;
use crate::linalg::DenseMatrix;
use crate::poly::Form;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormMatrix {
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries.
    pub entries: Vec<Form>,
}

impl FormMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Form>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count does not match the shape");
        FormMatrix { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Form>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let entries: Vec<Form> = rows.into_iter().flatten().collect();
        Self::new(r, c, entries)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Form {
        &self.entries[i * self.cols + j]
    }

    pub fn field(&self) -> PrimeField {
        self.entries[0].field()
    }

    pub fn nvars(&self) -> usize {
        self.entries[0].nvars()
    }

    pub fn transpose(&self) -> Self {
        let mut e = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                e.push(self.get(i, j).clone());
            }
        }
        FormMatrix::new(self.cols, self.rows, e)
    }

    /// Apply the same substitution to every entry.
    pub fn substitute(&self, images: &[Form]) -> Self {
        FormMatrix::new(self.rows, self.cols, self.entries.iter().map(|e| e.substitute(images)).collect())
    }

    pub fn evaluate(&self, point: &[u64]) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).evaluate(point));
            }
        }
        m
    }

    /// Signed maximal minors of a `rho x (rho + 1)` matrix:
    /// `F_b = (-1)^b det(M without column b)` with `b` counted from 1.
    /// With this sign each row satisfies `sum_b M[i][b] F_b = 0`.
    pub fn maximal_minors(&self) -> Vec<Form> {
        assert_eq!(self.cols, self.rows + 1, "maximal minors need a rho x (rho+1) matrix");
        let all: u64 = (1u64 << self.cols) - 1;
        let rows: Vec<usize> = (0..self.rows).collect();
        let minors = self.minors_of_rows(&rows);
        (0..self.cols)
            .map(|b| {
                let m = &minors[&(all & !(1u64 << b))];
                if (b + 1) % 2 == 1 {
                    m.neg()
                } else {
                    m.clone()
                }
            })
            .collect()
    }

    /// Determinants of all square submatrices on the given rows, keyed by
    /// the column bitmask. Expansion runs along the last listed row, so
    /// intermediate results are shared between column subsets.
    fn minors_of_rows(&self, rows: &[usize]) -> FxHashMap<u64, Form> {
        assert!(self.cols <= 63);
        let f = self.field();
        let nv = self.nvars();
        let mut level: FxHashMap<u64, Form> = FxHashMap::default();
        level.insert(0, Form::constant(f, nv, 1));
        for (k, &r) in rows.iter().enumerate() {
            let mut next: FxHashMap<u64, Form> = FxHashMap::default();
            for mask in subsets_of_size(self.cols, k + 1) {
                next.insert(mask, self.expand(r, mask, &level));
            }
            level = next;
        }
        level
    }

    fn expand(&self, r: usize, mask: u64, prev: &FxHashMap<u64, Form>) -> Form {
        let mut acc: Option<Form> = None;
        let mut pos = 0;
        let size = mask.count_ones() as usize;
        for c in 0..self.cols {
            if mask & (1 << c) == 0 {
                continue;
            }
            let sub = &prev[&(mask & !(1u64 << c))];
            let entry = self.get(r, c);
            if !entry.is_zero() && !sub.is_zero() {
                let mut term = entry.mul(sub);
                // Expansion along the last row of a size x size block.
                if (size - 1 + pos) % 2 == 1 {
                    term = term.neg();
                }
                acc = Some(match acc {
                    None => term,
                    Some(a) => {
                        if a.is_zero() {
                            term
                        } else {
                            a.add(&term)
                        }
                    }
                });
            }
            pos += 1;
        }
        acc.unwrap_or_else(|| {
            let c = mask.trailing_zeros() as usize;
            let deg = self.get(r, c).degree() + prev[&(mask & !(1u64 << c))].degree();
            Form::zero(self.field(), self.nvars(), deg)
        })
    }

    /// All `size x size` minors, ordered by row subset then column subset
    /// (both in increasing bitmask order), skipping none.
    pub fn minors(&self, size: usize) -> Vec<Form> {
        assert!(size >= 1 && size <= self.rows.min(self.cols));
        assert!(self.rows <= 63 && self.cols <= 63);
        let f = self.field();
        let nv = self.nvars();
        // level maps (row mask, col mask) -> determinant
        let mut level: FxHashMap<(u64, u64), Form> = FxHashMap::default();
        level.insert((0, 0), Form::constant(f, nv, 1));
        for k in 1..=size {
            let mut next: FxHashMap<(u64, u64), Form> = FxHashMap::default();
            for rmask in subsets_of_size(self.rows, k) {
                let last = 63 - rmask.leading_zeros() as usize;
                let rprev = rmask & !(1u64 << last);
                for cmask in subsets_of_size(self.cols, k) {
                    let first = cmask.trailing_zeros() as usize;
                    let nominal = self.get(last, first).degree()
                        + level[&(rprev, cmask & !(1u64 << first))].degree();
                    let mut acc = Form::zero(f, nv, nominal);
                    let mut pos = 0;
                    for c in 0..self.cols {
                        if cmask & (1 << c) == 0 {
                            continue;
                        }
                        let sub = &level[&(rprev, cmask & !(1u64 << c))];
                        let entry = self.get(last, c);
                        if !entry.is_zero() && !sub.is_zero() {
                            let mut term = entry.mul(sub);
                            if (k - 1 + pos) % 2 == 1 {
                                term = term.neg();
                            }
                            acc = if acc.is_zero() { term } else { acc.add(&term) };
                        }
                        pos += 1;
                    }
                    next.insert((rmask, cmask), acc);
                }
            }
            level = next;
        }
        let mut out = Vec::new();
        for rmask in subsets_of_size(self.rows, size) {
            for cmask in subsets_of_size(self.cols, size) {
                out.push(level.remove(&(rmask, cmask)).unwrap());
            }
        }
        out
    }
}

/// Bitmasks of all `k`-element subsets of `{0, ..., n-1}` in increasing order.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    if k == 0 {
        out.push(0);
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().fold(0u64, |m, &i| m | (1 << i)));
        let mut i = k;
        loop {
            if i == 0 {
                out.sort_unstable();
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Form;

    #[test]
    fn signed_minors_of_a_row() {
        let f = PrimeField::new(101).unwrap();
        let m = FormMatrix::from_rows(vec![vec![Form::var(f, 2, 0), Form::var(f, 2, 1)]]);
        let minors = m.maximal_minors();
        assert_eq!(minors[0], Form::var(f, 2, 1).neg());
        assert_eq!(minors[1], Form::var(f, 2, 0));
    }

    #[test]
    fn all_minors_match_scalar_determinants() {
        let f = PrimeField::new(101).unwrap();
        let vals = [[3u64, 1, 4, 1], [5, 9, 2, 6], [5, 3, 5, 8]];
        let rows: Vec<Vec<Form>> =
            vals.iter().map(|r| r.iter().map(|&v| Form::constant(f, 1, v)).collect()).collect();
        let m = FormMatrix::from_rows(rows);
        let minors = m.minors(2);
        assert_eq!(minors.len(), 3 * 6);
        let mut idx = 0;
        for rm in subsets_of_size(3, 2) {
            for cm in subsets_of_size(4, 2) {
                let r: Vec<usize> = (0..3).filter(|i| rm & (1 << i) != 0).collect();
                let c: Vec<usize> = (0..4).filter(|i| cm & (1 << i) != 0).collect();
                let d = DenseMatrix::from_rows(&[
                    vec![vals[r[0]][c[0]], vals[r[0]][c[1]]],
                    vec![vals[r[1]][c[0]], vals[r[1]][c[1]]],
                ]);
                assert_eq!(minors[idx].evaluate(&[0]), d.determinant(f));
                idx += 1;
            }
        }
    }
}
