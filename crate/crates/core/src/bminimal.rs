//! Curves in P^3 of minimal genus among those with the largest possible
//! first nonvanishing difference of the Hilbert function of a plane section.
//!
//! For a degree `s` the profile is `s = C(d + 1, 2) + k` with `1 <= k <= d + 1`
//! and `d` smallest with `s <= C(d + 2, 2)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graded::{binomial, BettiTable};
use crate::hilburch::DegreeMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProfileError {
    #[error("degree {0} is below 3, where no such curve exists")]
    DegreeTooSmall(u64),
}

/// Which of the two matrix templates a profile uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Template {
    /// `d <= 2k`: `k` identical rows holding `2k - d` linear columns and
    /// `d - k + 1` quadric columns.
    LinearColumns,
    /// `d > 2k`: `k` quadric rows on top of `d - 2k` linear rows, with
    /// `d - k + 1` columns.
    LinearRows,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BMinimalProfile {
    pub s: u64,
    pub d: u64,
    pub k: u64,
    pub sigma: u64,
    pub rho: u64,
    pub template: Template,
    /// Number of minimal generators of degree `d`.
    pub generators_deg_d: u64,
    /// Number of minimal generators of degree `d + 1`.
    pub generators_deg_d1: u64,
}

impl BMinimalProfile {
    pub fn from_degree(s: u64) -> Result<Self, ProfileError> {
        if s < 3 {
            return Err(ProfileError::DegreeTooSmall(s));
        }
        let mut d = 1;
        while s > binomial(d + 2, 2) {
            d += 1;
        }
        let k = s - binomial(d + 1, 2);
        let (rho, template) = if d <= 2 * k { (k, Template::LinearColumns) } else { (d - k, Template::LinearRows) };
        Ok(BMinimalProfile {
            s,
            d,
            k,
            sigma: d + 1,
            rho,
            template,
            generators_deg_d: d + 1 - k,
            generators_deg_d1: (2 * k).saturating_sub(d),
        })
    }

    /// Degree matrix of the template, rows first.
    pub fn degree_matrix(&self) -> DegreeMatrix {
        let (d, k) = (self.d as usize, self.k as usize);
        let cols = self.rho as usize + 1;
        let entries: Vec<Vec<i64>> = match self.template {
            Template::LinearColumns => {
                let lin = 2 * k - d;
                (0..k).map(|_| (0..cols).map(|j| if j < lin { 1 } else { 2 }).collect()).collect()
            }
            Template::LinearRows => (0..self.rho as usize)
                .map(|i| vec![if i < k { 2 } else { 1 }; cols])
                .collect(),
        };
        DegreeMatrix::new(entries).expect("templates are additive with positive entries")
    }

    pub fn betti_table(&self) -> BettiTable {
        self.degree_matrix().betti_table()
    }

    /// Arithmetic genus read from the resolution of the template.
    pub fn genus_from_twists(&self) -> i64 {
        self.degree_matrix().curve_genus()
    }
}

/// `sum_{t >= 1} (s - min(C(t + 2, 2), s))`: the genus of a curve whose
/// general plane section imposes independent conditions as early as possible.
pub fn genus_minimal(s: u64) -> u64 {
    let mut total = 0;
    let mut t = 1;
    loop {
        let h = binomial(t + 2, 2).min(s);
        if h == s {
            return total;
        }
        total += s - h;
        t += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_profiles() {
        let p = BMinimalProfile::from_degree(7).unwrap();
        assert_eq!((p.d, p.k, p.rho, p.sigma), (3, 1, 2, 4));
        assert_eq!(p.template, Template::LinearRows);
        assert_eq!(p.degree_matrix().entries, vec![vec![2, 2, 2], vec![1, 1, 1]]);
        assert_eq!(genus_minimal(7), 5);
        assert_eq!(p.genus_from_twists(), 5);

        let p = BMinimalProfile::from_degree(10).unwrap();
        assert_eq!((p.d, p.k, p.rho), (3, 4, 4));
        assert_eq!(p.degree_matrix().entries, vec![vec![1; 5]; 4]);
        assert_eq!(genus_minimal(10), 11);
    }

    #[test]
    fn triangular_degrees_fall_to_the_smaller_d() {
        // s = C(d + 1, 2) is reached as (d - 1, k = d), an all-linear matrix.
        let p = BMinimalProfile::from_degree(6).unwrap();
        assert_eq!((p.d, p.k), (2, 3));
        assert_eq!(p.generators_deg_d, 0);
        assert!(p.degree_matrix().entries.iter().flatten().all(|&e| e == 1));
    }

    #[test]
    fn templates_agree_when_d_equals_2k() {
        // s = 12 gives d = 4, k = 2: a 2 x 3 matrix of quadrics either way.
        let p = BMinimalProfile::from_degree(12).unwrap();
        assert_eq!((p.d, p.k), (4, 2));
        assert_eq!(p.degree_matrix().entries, vec![vec![2, 2, 2]; 2]);
        let other = BMinimalProfile { template: Template::LinearRows, rho: p.d - p.k, ..p.clone() };
        assert_eq!(other.degree_matrix(), p.degree_matrix());
    }
}
