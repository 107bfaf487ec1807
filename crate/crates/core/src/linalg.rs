//! Dense linear algebra over F_p.

use crate::field::PrimeField;
use crate::upoly::UPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

/// Result of Gauss-Jordan elimination.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: DenseMatrix,
    /// Pivot column of each nonzero row, increasing.
    pub pivots: Vec<usize>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        DenseMatrix { rows: r, cols: c, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, f: PrimeField, other: &DenseMatrix) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.reduce(out.data[idx] + a * other.get(k, j));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, f: PrimeField, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(0, |acc, (&a, &b)| f.reduce(acc + a * b)))
            .collect()
    }

    /// Reduced row echelon form.
    pub fn rref(&self, f: PrimeField) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, c) != 0) else { continue };
            if piv != r {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c));
            for j in c..m.cols {
                let v = m.get(r, j);
                m.set(r, j, f.mul(v, inv));
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor == 0 {
                    continue;
                }
                let neg = f.neg(factor);
                for j in c..m.cols {
                    let v = f.reduce(m.get(i, j) + neg * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self, f: PrimeField) -> usize {
        self.rref(f).pivots.len()
    }

    /// Basis of the right kernel `{v : M v = 0}`.
    pub fn kernel(&self, f: PrimeField) -> Vec<Vec<u64>> {
        let Rref { matrix, pivots } = self.rref(f);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = f.neg(matrix.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    pub fn determinant(&self, f: PrimeField) -> u64 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = 1u64;
        for c in 0..n {
            let Some(piv) = (c..n).find(|&i| m.get(i, c) != 0) else { return 0 };
            if piv != c {
                for j in 0..n {
                    m.data.swap(piv * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let p = m.get(c, c);
            det = f.mul(det, p);
            let inv = f.inv(p);
            for i in c + 1..n {
                let factor = f.mul(m.get(i, c), inv);
                if factor == 0 {
                    continue;
                }
                let neg = f.neg(factor);
                for j in c..n {
                    let v = f.reduce(m.get(i, j) + neg * m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self, f: PrimeField) -> Option<DenseMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let r = aug.rref(f);
        if r.pivots.len() < n || r.pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.matrix.get(i, n + j));
            }
        }
        Some(inv)
    }

    /// Characteristic polynomial `det(x I - M)` by evaluation at n + 1
    /// points and Lagrange interpolation.
    pub fn char_poly(&self, f: PrimeField) -> UPoly {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        assert!((n as u64) < f.p(), "matrix too large for interpolation over F_p");
        let xs: Vec<u64> = (0..=n as u64).collect();
        let ys: Vec<u64> = xs
            .iter()
            .map(|&x| {
                let mut m = self.clone();
                for v in m.data.iter_mut() {
                    *v = f.neg(*v);
                }
                for i in 0..n {
                    let v = f.add(m.get(i, i), x);
                    m.set(i, i, v);
                }
                m.determinant(f)
            })
            .collect();
        interpolate(f, &xs, &ys)
    }
}

/// Lagrange interpolation through the points `(xs[i], ys[i])`.
pub fn interpolate(f: PrimeField, xs: &[u64], ys: &[u64]) -> UPoly {
    let mut total = UPoly::zero();
    for i in 0..xs.len() {
        let mut basis = UPoly::one();
        let mut denom = 1u64;
        for j in 0..xs.len() {
            if i == j {
                continue;
            }
            basis = basis.mul(f, &UPoly::linear_root(f, xs[j]));
            denom = f.mul(denom, f.sub(xs[i], xs[j]));
        }
        let scale = f.mul(ys[i], f.inv(denom));
        let term = UPoly::new(basis.coeffs.iter().map(|&c| f.mul(c, scale)).collect());
        total = total.add(f, &term);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_rank() {
        let f = PrimeField::new(101).unwrap();
        let m = DenseMatrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(m.rank(f), 2);
        let k = m.kernel(f);
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(f, &k[0]).iter().all(|&x| x == 0));
    }

    #[test]
    fn char_poly_of_companion() {
        let f = PrimeField::new(101).unwrap();
        // companion of x^2 - 3x + 2
        let m = DenseMatrix::from_rows(&[vec![0, f.neg(2)], vec![1, 3]]);
        assert_eq!(m.char_poly(f), UPoly::new(vec![2, f.neg(3), 1]));
        let inv = m.inverse(f).unwrap();
        assert_eq!(m.mul(f, &inv), DenseMatrix::identity(2));
    }
}
