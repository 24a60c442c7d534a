//! Crate-wide error type. Every precondition violation maps to one variant
//! with enough payload to reconstruct what was rejected.

use alloc::string::String;
use core::fmt;

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Error raised by the exact-arithmetic and Floquet layers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operation undefined for the zero polynomial.
    ZeroPolynomial,
    /// A slice of a nonzero polynomial collapsed to zero at the given value.
    ZeroSlice,
    /// Parameter set violates `omega > 0`, `nu1 >= 0`, or `gamma >= 0`.
    InvalidParams(String),
    /// `x >= 0` and `g >= 0` are required for a dimensionless point.
    NegativePoint { x: f64, g: f64 },
    /// The drive offset is not on the resonance `nu0 = (n+1)*omega`.
    ResonanceViolated { nu0_over_omega: f64, expected: u32 },
    /// Cofactor-expansion determinant is guarded to small matrices.
    BruteForceTooLarge { n: u32, max: u32 },
    /// The point does not satisfy the constraint polynomial.
    OffVariety { residual: f64 },
    /// The resonance operator is not singular enough at the given point.
    NullSpaceResidual { sigma_min: f64 },
    /// A generic argument range violation; the message names the condition.
    Precondition(String),
    /// Fewer than two real branches found near a degeneracy.
    MissingDoublet { n: u32, j: u32 },
    /// `gamma = 0` makes the second amplitude recovery singular.
    GammaZero,
    /// Integration tolerance outside `[1e-14, 1e-6]`.
    TolOutOfRange(f64),
    /// Adaptive step size underflowed before reaching the end time.
    StepUnderflow { tau: f64 },
    /// Step budget exhausted before reaching the end time.
    StepBudgetExhausted { tau: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroPolynomial => write!(f, "operation undefined for the zero polynomial"),
            Error::ZeroSlice => write!(f, "polynomial slice collapsed to the zero polynomial"),
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::NegativePoint { x, g } => {
                write!(f, "dimensionless point requires x >= 0 and g >= 0, got x = {x}, g = {g}")
            }
            Error::ResonanceViolated { nu0_over_omega, expected } => write!(
                f,
                "resonance condition nu0 = (n+1)*omega violated: nu0/omega = {nu0_over_omega} \
                 is not within 1e-9 of n+1 = {expected}"
            ),
            Error::BruteForceTooLarge { n, max } => write!(
                f,
                "cofactor determinant is an oracle for small sizes only: n = {n} exceeds {max}"
            ),
            Error::OffVariety { residual } => write!(
                f,
                "point is not on the constraint variety: polynomial value {residual:.3e} exceeds 1e-6 in magnitude"
            ),
            Error::NullSpaceResidual { sigma_min } => write!(
                f,
                "resonance operator is not singular at this point: sigma_min = {sigma_min:.3e} \
                 exceeds 1e-8 (root not polished enough?)"
            ),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::MissingDoublet { n, j } => write!(
                f,
                "fewer than two real branches near the degeneracy (n = {n}, j = {j}): \
                 branch split or left the real axis"
            ),
            Error::GammaZero => {
                write!(f, "gamma = 0 makes the second amplitude recovery singular")
            }
            Error::TolOutOfRange(t) => {
                write!(f, "tolerance {t:.3e} outside the supported range [1e-14, 1e-6]")
            }
            Error::StepUnderflow { tau } => {
                write!(f, "adaptive step size underflowed at tau = {tau}")
            }
            Error::StepBudgetExhausted { tau } => {
                write!(f, "step budget exhausted at tau = {tau}")
            }
        }
    }
}

impl core::error::Error for Error {}
