use std::fmt;

use detblow_core::blowup::BlowupError;
use detblow_core::bminimal::ProfileError;
use detblow_core::field::FieldError;
use detblow_core::graded::GradedError;
use detblow_core::hilburch::HbError;
use detblow_core::liaison::LiaisonError;
use detblow_core::secants::SecantError;

/// A failed command, classified by exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// Malformed or inconsistent input (exit 1).
    Input(String),
    /// The instance is degenerate: vanishing minor, contained line, non-generic data (exit 2).
    Degenerate(String),
    /// A degree cap or work budget was reached before an answer (exit 3).
    Cap(String),
    /// Computed values differ from the expectation table (exit 4).
    Mismatch(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 1,
            Failure::Degenerate(_) => 2,
            Failure::Cap(_) => 3,
            Failure::Mismatch(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Degenerate(m) | Failure::Cap(m) | Failure::Mismatch(m) => m,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self {
            Failure::Input(_) => "input error",
            Failure::Degenerate(_) => "degenerate instance",
            Failure::Cap(_) => "cap exceeded",
            Failure::Mismatch(_) => "expectation mismatch",
        };
        write!(f, "{kind}: {}", self.message())
    }
}

impl std::error::Error for Failure {}

impl From<GradedError> for Failure {
    fn from(e: GradedError) -> Self {
        match e {
            GradedError::RingMismatch { .. } => Failure::Input(e.to_string()),
            _ => Failure::Cap(e.to_string()),
        }
    }
}

impl From<HbError> for Failure {
    fn from(e: HbError) -> Self {
        match e {
            HbError::Graded(g) => g.into(),
            HbError::ZeroMinor { .. } | HbError::LineContained => Failure::Degenerate(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<SecantError> for Failure {
    fn from(e: SecantError) -> Self {
        match e {
            SecantError::Graded(g) => g.into(),
            SecantError::Hb(h) => h.into(),
            SecantError::WrongRank { .. } | SecantError::NotOnLocus | SecantError::NoRationalPoint { .. } => {
                Failure::Degenerate(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<BlowupError> for Failure {
    fn from(e: BlowupError) -> Self {
        match e {
            BlowupError::Matrix(h) => h.into(),
            BlowupError::Graded(g) => g.into(),
            BlowupError::NonGeneric { .. } | BlowupError::NotAnnihilated { .. } | BlowupError::EmbeddingMismatch { .. } => {
                Failure::Degenerate(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<ProfileError> for Failure {
    fn from(e: ProfileError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<LiaisonError> for Failure {
    fn from(e: LiaisonError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<FieldError> for Failure {
    fn from(e: FieldError) -> Self {
        Failure::Input(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_errors_keep_their_class() {
        let cap = HbError::Graded(GradedError::InsufficientRange { cap: 9 });
        assert_eq!(Failure::from(cap).exit_code(), 3);
        let zero = SecantError::Hb(HbError::ZeroMinor { index: 2 });
        assert_eq!(Failure::from(zero).exit_code(), 2);
        assert_eq!(Failure::from(HbError::Shape { rows: 2, cols: 2 }).exit_code(), 1);
    }
}
