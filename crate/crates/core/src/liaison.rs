//! Degree and genus of a curve linked to a given one by a complete
//! intersection of surfaces of degrees `a` and `b` in P^3.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiaisonError {
    #[error("curve of degree {deg} does not fit in a complete intersection of degree {ab}")]
    DegreeTooLarge { deg: i64, ab: i64 },
    #[error("surface degrees must be positive")]
    NonPositive,
    #[error("linkage data ({a}, {b}, {deg}, {genus}) gives a non-integral genus")]
    NonIntegral { a: i64, b: i64, deg: i64, genus: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residual {
    pub degree: i64,
    pub genus: i64,
}

/// `deg C' = ab - deg C` and `g(C) - g(C') = ((a + b)/2 - 2)(deg C - deg C')`.
pub fn residual(a: i64, b: i64, deg: i64, genus: i64) -> Result<Residual, LiaisonError> {
    if a <= 0 || b <= 0 {
        return Err(LiaisonError::NonPositive);
    }
    let ab = a * b;
    if deg > ab || deg <= 0 {
        return Err(LiaisonError::DegreeTooLarge { deg, ab });
    }
    let other = ab - deg;
    // Work with twice the genus difference to stay in integers.
    let twice = (a + b - 4) * (deg - other);
    if twice % 2 != 0 {
        return Err(LiaisonError::NonIntegral { a, b, deg, genus });
    }
    Ok(Residual { degree: other, genus: genus - twice / 2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linked_pairs() {
        assert_eq!(residual(4, 4, 7, 5).unwrap(), Residual { degree: 9, genus: 9 });
        assert_eq!(residual(4, 4, 6, 3).unwrap(), Residual { degree: 10, genus: 11 });
        // twisted cubic and a line in a quadric-cubic intersection
        assert_eq!(residual(2, 3, 3, 0).unwrap(), Residual { degree: 3, genus: 0 });
    }

    #[test]
    fn linking_twice_returns() {
        for (a, b, d, g) in [(4, 4, 7, 5), (3, 5, 4, 1), (4, 6, 10, 11)] {
            let r = residual(a, b, d, g).unwrap();
            assert_eq!(residual(a, b, r.degree, r.genus).unwrap(), Residual { degree: d, genus: g });
        }
    }

    #[test]
    fn rejects_overlarge_degree() {
        assert!(residual(2, 2, 5, 0).is_err());
    }
}
