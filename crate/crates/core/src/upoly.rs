//! Univariate polynomials over F_p: gcd, modular powers and root finding.
//!
//! Coefficients are stored lowest degree first with no trailing zeros, so
//! the zero polynomial is the empty vector.

use rand::Rng;

use crate::field::PrimeField;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly {
    pub coeffs: Vec<u64>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UPoly { coeffs: vec![1] }
    }

    /// `x - r`
    pub fn linear_root(f: PrimeField, r: u64) -> Self {
        UPoly::new(vec![f.neg(r), 1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn eval(&self, f: PrimeField, x: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn monic(&self, f: PrimeField) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = f.inv(self.lead());
        UPoly { coeffs: self.coeffs.iter().map(|&c| f.mul(c, inv)).collect() }
    }

    pub fn add(&self, f: PrimeField, other: &UPoly) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| f.add(*self.coeffs.get(i).unwrap_or(&0), *other.coeffs.get(i).unwrap_or(&0)))
            .collect();
        UPoly::new(c)
    }

    pub fn sub(&self, f: PrimeField, other: &UPoly) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| f.sub(*self.coeffs.get(i).unwrap_or(&0), *other.coeffs.get(i).unwrap_or(&0)))
            .collect();
        UPoly::new(c)
    }

    pub fn mul(&self, f: PrimeField, other: &UPoly) -> Self {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.reduce(c[i + j] + a * b);
            }
        }
        UPoly::new(c)
    }

    /// Quotient and remainder; panics when dividing by zero.
    pub fn divrem(&self, f: PrimeField, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = f.inv(d.lead());
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = f.mul(r[i], inv);
            if c == 0 {
                continue;
            }
            q[i - dd] = c;
            for (j, &b) in d.coeffs.iter().enumerate() {
                let k = i - dd + j;
                r[k] = f.sub(r[k], f.mul(c, b));
            }
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn rem(&self, f: PrimeField, d: &UPoly) -> UPoly {
        self.divrem(f, d).1
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, f: PrimeField, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// `self^e mod m`
    pub fn powmod(&self, f: PrimeField, mut e: u64, m: &UPoly) -> UPoly {
        let mut base = self.rem(f, m);
        let mut acc = UPoly::one().rem(f, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base).rem(f, m);
            }
            base = base.mul(f, &base).rem(f, m);
            e >>= 1;
        }
        acc
    }

    /// Distinct roots in F_p, sorted ascending.
    pub fn distinct_roots<R: Rng>(&self, f: PrimeField, rng: &mut R) -> Vec<u64> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let m = self.monic(f);
        // gcd with x^p - x isolates the product of distinct linear factors.
        let x = UPoly::new(vec![0, 1]);
        let xp = x.powmod(f, f.p(), &m);
        let g = m.gcd(f, &xp.sub(f, &x));
        let mut roots = Vec::new();
        split_linear(f, &g, rng, &mut roots);
        roots.sort_unstable();
        roots
    }

    /// Roots in F_p with multiplicities, sorted by root.
    pub fn roots_with_multiplicity<R: Rng>(&self, f: PrimeField, rng: &mut R) -> Vec<(u64, usize)> {
        let roots = self.distinct_roots(f, rng);
        let mut out = Vec::with_capacity(roots.len());
        for r in roots {
            let lin = UPoly::linear_root(f, r);
            let mut q = self.clone();
            let mut mult = 0;
            loop {
                let (qq, rr) = q.divrem(f, &lin);
                if !rr.is_zero() {
                    break;
                }
                mult += 1;
                q = qq;
            }
            out.push((r, mult));
        }
        out
    }
}

/// Split a squarefree product of distinct linear factors (Cantor-Zassenhaus).
fn split_linear<R: Rng>(f: PrimeField, g: &UPoly, rng: &mut R, out: &mut Vec<u64>) {
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let m = g.monic(f);
            out.push(f.neg(m.coeffs[0]));
        }
        Some(_) => loop {
            let a = rng.gen_range(0..f.p());
            let shifted = UPoly::new(vec![a, 1]);
            let h = shifted.powmod(f, (f.p() - 1) / 2, g).sub(f, &UPoly::one());
            let d = g.gcd(f, &h);
            let dd = d.degree().unwrap_or(0);
            if dd > 0 && dd < g.degree().unwrap() {
                let (q, _) = g.divrem(f, &d);
                split_linear(f, &d, rng, out);
                split_linear(f, &q, rng, out);
                return;
            }
        },
    }
}
