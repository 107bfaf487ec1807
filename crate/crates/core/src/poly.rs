//! Sparse homogeneous forms over a prime field.
//!
//! Terms are kept sorted in descending lexicographic order of exponent
//! vectors. All terms of a form share one total degree, so this is the
//! graded-lex order and it fixes a canonical text rendering.

use std::fmt::Write as _;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;
use thiserror::Error;

use crate::field::PrimeField;

pub type Exponents = SmallVec<[u8; 24]>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("term of degree {found} in a form of degree {expected}")]
    NotHomogeneous { expected: u32, found: u32 },
    #[error("monomial has {found} exponents, ring has {expected} variables")]
    VariableCount { expected: usize, found: usize },
    #[error("exponent {0} exceeds the supported maximum of 255")]
    ExponentTooLarge(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Exponents);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn from_slice(exps: &[u8]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exps(&self) -> &[u8] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }
}

/// Every monomial of total degree `degree` in `nvars` variables, in
/// descending lexicographic order.
pub fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur: Exponents = SmallVec::from_elem(0, nvars);
    fn rec(i: usize, left: u32, cur: &mut Exponents, out: &mut Vec<Monomial>) {
        let n = cur.len();
        if i + 1 == n {
            cur[i] = left as u8;
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e as u8;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if nvars == 0 {
        if degree == 0 {
            out.push(Monomial(SmallVec::new()));
        }
        return out;
    }
    rec(0, degree, &mut cur, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    field: PrimeField,
    nvars: usize,
    degree: u32,
    terms: Vec<(Monomial, u64)>,
}

impl Form {
    pub fn zero(field: PrimeField, nvars: usize, degree: u32) -> Self {
        Form { field, nvars, degree, terms: Vec::new() }
    }

    pub fn constant(field: PrimeField, nvars: usize, c: u64) -> Self {
        let c = field.reduce(c);
        let terms = if c == 0 { Vec::new() } else { vec![(Monomial::one(nvars), c)] };
        Form { field, nvars, degree: 0, terms }
    }

    pub fn var(field: PrimeField, nvars: usize, i: usize) -> Self {
        Form { field, nvars, degree: 1, terms: vec![(Monomial::var(nvars, i), 1)] }
    }

    /// Linear form `sum_i coeffs[i] * x_i`.
    pub fn linear(field: PrimeField, coeffs: &[u64]) -> Self {
        let n = coeffs.len();
        let terms = coeffs
            .iter()
            .enumerate()
            .filter_map(|(i, &c)| {
                let c = field.reduce(c);
                (c != 0).then(|| (Monomial::var(n, i), c))
            })
            .collect();
        Form { field, nvars: n, degree: 1, terms }
    }

    /// Build from arbitrary terms; duplicates are combined and zeros dropped.
    pub fn from_terms<I>(field: PrimeField, nvars: usize, degree: u32, terms: I) -> Result<Self, FormError>
    where
        I: IntoIterator<Item = (Monomial, u64)>,
    {
        let mut acc: FxHashMap<Monomial, u64> = FxHashMap::default();
        for (m, c) in terms {
            if m.0.len() != nvars {
                return Err(FormError::VariableCount { expected: nvars, found: m.0.len() });
            }
            let d = m.degree();
            if d != degree {
                return Err(FormError::NotHomogeneous { expected: degree, found: d });
            }
            let e = acc.entry(m).or_insert(0);
            *e = field.add(*e, field.reduce(c));
        }
        Ok(Self::from_map(field, nvars, degree, acc))
    }

    fn from_map(field: PrimeField, nvars: usize, degree: u32, acc: FxHashMap<Monomial, u64>) -> Self {
        let mut terms: Vec<(Monomial, u64)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Form { field, nvars, degree, terms }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &[(Monomial, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Leading term in the graded-lex order.
    pub fn leading(&self) -> Option<&(Monomial, u64)> {
        self.terms.first()
    }

    /// Coefficient of a given monomial.
    pub fn coeff(&self, m: &Monomial) -> u64 {
        self.terms
            .binary_search_by(|probe| m.cmp(&probe.0))
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    fn combine(&self, other: &Form, sign_other: bool) -> Form {
        assert_eq!(self.nvars, other.nvars, "forms live in different rings");
        let f = self.field;
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if sign_other { other.neg() } else { other.clone() };
        }
        assert_eq!(self.degree, other.degree, "adding forms of different degrees");
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                std::cmp::Ordering::Less
            } else if j == b.len() {
                std::cmp::Ordering::Greater
            } else {
                a[i].0.cmp(&b[j].0)
            };
            match ord {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if sign_other { f.neg(b[j].1) } else { b[j].1 };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if sign_other { f.sub(a[i].1, b[j].1) } else { f.add(a[i].1, b[j].1) };
                    if c != 0 {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Form { field: f, nvars: self.nvars, degree: self.degree, terms: out }
    }

    pub fn add(&self, other: &Form) -> Form {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.combine(other, true)
    }

    pub fn neg(&self) -> Form {
        let f = self.field;
        Form {
            field: f,
            nvars: self.nvars,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(*c))).collect(),
        }
    }

    pub fn scale(&self, c: u64) -> Form {
        let f = self.field;
        let c = f.reduce(c);
        if c == 0 {
            return Form::zero(f, self.nvars, self.degree);
        }
        Form {
            field: f,
            nvars: self.nvars,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), f.mul(*a, c))).collect(),
        }
    }

    pub fn mul(&self, other: &Form) -> Form {
        assert_eq!(self.nvars, other.nvars, "forms live in different rings");
        let f = self.field;
        let degree = self.degree + other.degree;
        if self.is_zero() || other.is_zero() {
            return Form::zero(f, self.nvars, degree);
        }
        let mut acc: FxHashMap<Monomial, u64> = FxHashMap::default();
        acc.reserve(self.terms.len() * other.terms.len() / 2 + 1);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let e = acc.entry(ma.mul(mb)).or_insert(0);
                *e = f.reduce(*e + ca * cb);
            }
        }
        Form::from_map(f, self.nvars, degree, acc)
    }

    pub fn pow(&self, e: u32) -> Form {
        let mut acc = Form::constant(self.field, self.nvars, 1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluate at a point given by scalar coordinates.
    pub fn evaluate(&self, point: &[u64]) -> u64 {
        assert_eq!(point.len(), self.nvars);
        let f = self.field;
        let mut total = 0u64;
        for (m, c) in &self.terms {
            let mut v = *c;
            for (x, &e) in point.iter().zip(m.0.iter()) {
                if e > 0 {
                    v = f.mul(v, f.pow(*x, e as u64));
                }
            }
            total = f.add(total, v);
        }
        total
    }

    /// Substitute `x_i -> images[i]`. All images must share one degree.
    ///
    /// Uses a multivariate Horner scheme so the number of form products is
    /// governed by distinct exponent prefixes rather than by the term count.
    pub fn substitute(&self, images: &[Form]) -> Form {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let f = self.field;
        let target_vars = images.first().map(|g| g.nvars).unwrap_or(0);
        let image_degree = images.iter().find(|g| !g.is_zero()).map(|g| g.degree).unwrap_or(0);
        let out_degree = self.degree * image_degree;
        if self.is_zero() {
            return Form::zero(f, target_vars, out_degree);
        }
        let mut powers: Vec<Vec<Form>> = vec![Vec::new(); self.nvars];
        let mut r = subst_rec(&self.terms, 0, images, &mut powers, f, target_vars);
        r.degree = out_degree;
        r
    }

    /// Canonical text rendering with the given variable names.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let f = self.field;
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let v = f.centered(*c);
            let mag = v.unsigned_abs();
            if idx == 0 {
                if v < 0 {
                    s.push('-');
                }
            } else {
                s.push_str(if v < 0 { " - " } else { " + " });
            }
            let mut parts: Vec<String> = Vec::new();
            if mag != 1 || m.degree() == 0 {
                parts.push(mag.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(names[i].clone()),
                    _ => parts.push(format!("{}^{}", names[i], e)),
                }
            }
            let _ = write!(s, "{}", parts.join("*"));
        }
        s
    }

    /// Rendering with default names `x0, x1, ...`.
    pub fn to_text(&self) -> String {
        self.render(&default_names("x", self.nvars))
    }
}

pub fn default_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn power<'a>(powers: &'a mut [Vec<Form>], images: &[Form], v: usize, e: usize, f: PrimeField, nv: usize) -> &'a Form {
    let cache = &mut powers[v];
    if cache.is_empty() {
        cache.push(Form::constant(f, nv, 1));
    }
    while cache.len() <= e {
        let next = cache.last().unwrap().mul(&images[v]);
        cache.push(next);
    }
    &cache[e]
}

fn subst_rec(
    terms: &[(Monomial, u64)],
    v: usize,
    images: &[Form],
    powers: &mut [Vec<Form>],
    f: PrimeField,
    nv: usize,
) -> Form {
    if v == images.len() {
        let c = terms.iter().fold(0, |acc, (_, c)| f.add(acc, *c));
        return Form::constant(f, nv, c);
    }
    // Terms are sorted descending, so equal exponents of x_v are contiguous
    // and appear in decreasing order.
    let mut acc: Option<Form> = None;
    let mut prev_e: usize = 0;
    let mut start = 0;
    while start < terms.len() {
        let e = terms[start].0 .0[v] as usize;
        let mut end = start;
        while end < terms.len() && terms[end].0 .0[v] as usize == e {
            end += 1;
        }
        let inner = subst_rec(&terms[start..end], v + 1, images, powers, f, nv);
        acc = Some(match acc {
            None => inner,
            Some(a) => {
                let shifted = a.mul(power(powers, images, v, prev_e - e, f, nv));
                add_loose(&shifted, &inner)
            }
        });
        prev_e = e;
        start = end;
    }
    let a = acc.unwrap();
    a.mul(power(powers, images, v, prev_e, f, nv))
}

/// Sum of two forms that may carry inconsistent nominal degrees only
/// because one of them is zero.
fn add_loose(a: &Form, b: &Form) -> Form {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    a.add(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    #[test]
    fn monomial_enumeration_counts_and_order() {
        let ms = monomials_of_degree(3, 2);
        assert_eq!(ms.len(), 6);
        assert_eq!(ms[0].exps(), &[2, 0, 0]);
        assert_eq!(ms[5].exps(), &[0, 0, 2]);
        for w in ms.windows(2) {
            assert!(w[0] > w[1]);
        }
    }

    #[test]
    fn product_and_render() {
        let f = fp();
        let x = Form::var(f, 2, 0);
        let y = Form::var(f, 2, 1);
        let p = x.sub(&y).mul(&x.add(&y));
        assert_eq!(p.to_text(), "x0^2 - x1^2");
    }

    #[test]
    fn substitution_matches_evaluation() {
        let f = fp();
        let g = Form::from_terms(
            f,
            3,
            3,
            vec![
                (Monomial::from_slice(&[2, 1, 0]), 3),
                (Monomial::from_slice(&[0, 1, 2]), 5),
                (Monomial::from_slice(&[1, 1, 1]), 7),
                (Monomial::from_slice(&[0, 0, 3]), 1),
            ],
        )
        .unwrap();
        let images = vec![
            Form::linear(f, &[1, 2]),
            Form::linear(f, &[3, 0]),
            Form::linear(f, &[4, 9]),
        ];
        let h = g.substitute(&images);
        assert_eq!(h.degree(), 3);
        for (s, t) in [(1u64, 2u64), (5, 7), (0, 1), (13, 40)] {
            let pt: Vec<u64> = images.iter().map(|l| l.evaluate(&[s, t])).collect();
            assert_eq!(h.evaluate(&[s, t]), g.evaluate(&pt));
        }
    }
}
