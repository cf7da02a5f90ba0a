//! Kernel error type shared by every algebra module.

use thiserror::Error;

/// Errors raised by the algebra kernel.
///
/// Variants fall into two classes: contract violations on the caller's side
/// (bad sizes, poles where none are allowed, inhomogeneous operands) and
/// internal identity failures, which indicate a kernel bug and are surfaced
/// loudly instead of being swallowed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("pole at substitution: variable #{0} occurs with negative exponent and is bound to zero")]
    PoleAtSubstitution(u32),
    #[error("variable #{0} occurs with negative exponent and is bound to a non-monomial value")]
    NonInvertibleSubstitution(u32),
    #[error("form contains the differential of variable #{0}")]
    FrameContainsDifferential(u32),
    #[error("matrix size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("inhomogeneous operand: {0}")]
    InhomogeneousOperand(String),
    #[error("degree error: {0}")]
    DegreeError(String),
    #[error("supplied matrices are not an inverse pair")]
    NotInversePair,
    #[error("pole in coefficient: variable #{0}")]
    PoleInCoefficient(u32),
    #[error("homotopy operator applied to a form with a degree-zero component")]
    DegreeZeroInput,
    #[error("not log shape: {0}")]
    NotLogShape(String),
    #[error("variable #{0} is not a log variable")]
    NotLogVariable(u32),
    #[error("connection is not flat")]
    NotFlat,
    #[error("residue is not closed: {0}")]
    ResidueNotClosed(String),
    #[error("no primitive: homotopy witness failed to re-differentiate to its target")]
    NoPrimitive,
    #[error("unsupported degree {0} for the requested convention")]
    UnsupportedDegree(u32),
    #[error("internal identity failure: {0}")]
    InternalIdentityFailure(String),
}

impl Error {
    /// Stable short name for structured error reporting.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::PoleAtSubstitution(_) => "PoleAtSubstitution",
            Error::NonInvertibleSubstitution(_) => "NonInvertibleSubstitution",
            Error::FrameContainsDifferential(_) => "FrameContainsDifferential",
            Error::SizeMismatch(_, _) => "SizeMismatch",
            Error::InhomogeneousOperand(_) => "InhomogeneousOperand",
            Error::DegreeError(_) => "DegreeError",
            Error::NotInversePair => "NotInversePair",
            Error::PoleInCoefficient(_) => "PoleInCoefficient",
            Error::DegreeZeroInput => "DegreeZeroInput",
            Error::NotLogShape(_) => "NotLogShape",
            Error::NotLogVariable(_) => "NotLogVariable",
            Error::NotFlat => "NotFlat",
            Error::ResidueNotClosed(_) => "ResidueNotClosed",
            Error::NoPrimitive => "NoPrimitive",
            Error::UnsupportedDegree(_) => "UnsupportedDegree",
            Error::InternalIdentityFailure(_) => "InternalIdentityFailure",
        }
    }

    /// True for errors that can only arise from a kernel bug, never from
    /// valid input.
    pub fn is_identity_failure(&self) -> bool {
        matches!(
            self,
            Error::InternalIdentityFailure(_) | Error::ResidueNotClosed(_) | Error::NoPrimitive
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
