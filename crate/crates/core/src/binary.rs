//! Binary forms in (s, t) and their gcd.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::field::PrimeField;
use crate::poly::Form;
use crate::upoly::UPoly;

/// A homogeneous form in two variables; `coeffs[i]` multiplies
/// `s^i * t^(degree - i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryForm {
    pub degree: usize,
    pub coeffs: Vec<u64>,
}

impl BinaryForm {
    pub fn new(degree: usize, mut coeffs: Vec<u64>) -> Self {
        coeffs.resize(degree + 1, 0);
        BinaryForm { degree, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Convert a form in two variables (s first) into coefficient form.
    pub fn from_form(f: &Form) -> Self {
        assert_eq!(f.nvars(), 2, "binary forms need exactly two variables");
        let d = f.degree() as usize;
        let mut coeffs = vec![0u64; d + 1];
        for (m, c) in f.terms() {
            coeffs[m.exps()[0] as usize] = *c;
        }
        BinaryForm { degree: d, coeffs }
    }

    /// Exponent of `s` dividing the form (None for zero).
    fn s_valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    /// Exponent of `t` dividing the form (None for zero).
    fn t_valuation(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0).map(|i| self.degree - i)
    }

    /// Dehomogenized part with all powers of s and t removed.
    fn core(&self) -> UPoly {
        let a = self.s_valuation().unwrap_or(0);
        UPoly::new(self.coeffs[a..].to_vec())
    }

    pub fn eval(&self, f: PrimeField, s: u64, t: u64) -> u64 {
        let mut acc = 0;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                let v = f.mul(c, f.mul(f.pow(s, i as u64), f.pow(t, (self.degree - i) as u64)));
                acc = f.add(acc, v);
            }
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BinaryGcd {
    /// Every input form vanishes identically.
    Contained,
    /// Monic (in the highest power of s) common divisor.
    Common(BinaryForm),
}

impl BinaryGcd {
    pub fn degree(&self) -> Option<usize> {
        match self {
            BinaryGcd::Contained => None,
            BinaryGcd::Common(g) => Some(g.degree),
        }
    }
}

/// Greatest common divisor of a family of binary forms.
pub fn binary_gcd(f: PrimeField, forms: &[BinaryForm]) -> BinaryGcd {
    let nonzero: Vec<&BinaryForm> = forms.iter().filter(|g| !g.is_zero()).collect();
    if nonzero.is_empty() {
        return BinaryGcd::Contained;
    }
    let a = nonzero.iter().map(|g| g.s_valuation().unwrap()).min().unwrap();
    let b = nonzero.iter().map(|g| g.t_valuation().unwrap()).min().unwrap();
    let mut g = nonzero[0].core();
    for h in &nonzero[1..] {
        g = g.gcd(f, &h.core());
    }
    let g = g.monic(f);
    let gd = g.degree().unwrap_or(0);
    let degree = a + b + gd;
    let mut coeffs = vec![0u64; degree + 1];
    for (i, &c) in g.coeffs.iter().enumerate() {
        coeffs[a + i] = c;
    }
    BinaryGcd::Common(BinaryForm { degree, coeffs })
}

/// Rational roots of a binary form as points `(s, t)` with multiplicities,
/// plus the degree of the part without rational roots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryRoots {
    pub roots: Vec<((u64, u64), usize)>,
    pub irrational_degree: usize,
}

pub fn binary_roots<R: Rng>(f: PrimeField, g: &BinaryForm, rng: &mut R) -> BinaryRoots {
    let mut roots = Vec::new();
    let a = g.s_valuation().unwrap_or(0);
    let b = g.t_valuation().unwrap_or(0);
    // s = 0 is the parameter point (0, 1); t = 0 is (1, 0).
    if a > 0 {
        roots.push(((0, 1), a));
    }
    if b > 0 {
        roots.push(((1, 0), b));
    }
    let core = g.core();
    let mut rational = 0;
    for (r, m) in core.roots_with_multiplicity(f, rng) {
        if r == 0 {
            continue;
        }
        roots.push(((r, 1), m));
        rational += m;
    }
    let irrational_degree = core.degree().unwrap_or(0) - rational;
    BinaryRoots { roots, irrational_degree }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_keeps_axis_factors() {
        let f = PrimeField::new(101).unwrap();
        // s^2 t (s - t) and s t^2 (s - t)
        let a = BinaryForm::new(4, vec![0, 0, f.neg(1), 1, 0]);
        let b = BinaryForm::new(4, vec![0, f.neg(1), 1, 0, 0]);
        let g = binary_gcd(f, &[a, b]);
        // s t (s - t) = -s t^2 + s^2 t
        assert_eq!(g, BinaryGcd::Common(BinaryForm::new(3, vec![0, f.neg(1), 1, 0])));
    }

    #[test]
    fn all_zero_is_contained() {
        let f = PrimeField::new(101).unwrap();
        let z = BinaryForm::new(2, vec![]);
        assert_eq!(binary_gcd(f, &[z.clone(), z]), BinaryGcd::Contained);
    }
}
