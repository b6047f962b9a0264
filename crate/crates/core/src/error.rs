//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Moments do not describe a physical Gaussian state (D₀ ≤ 0, b > D₀, or
    /// the Heisenberg bound (D₀+b)(D₀−b) ≥ 1/16 violated beyond tolerance).
    #[error("non-physical Gaussian moments: {0}")]
    NonPhysicalMoments(String),

    /// |⟨a⟩| = 0, so the Fock-space phase φ_β is undefined.
    #[error("state center is zero; Fock-space parameterization undefined")]
    DegenerateCenter,

    /// The adaptive integrator could not proceed (step underflow or
    /// non-finite state). Carries the last good time.
    #[error("integration failed at t = {t}: {reason}")]
    IntegrationFailure { t: f64, reason: String },

    /// Population reached the edge of the truncated Fock basis.
    #[error("Fock truncation too small: {0}")]
    TruncationOverflow(String),

    /// A matrix expected to be Hermitian is not, beyond tolerance.
    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NonHermitianInput(f64),

    /// A density matrix has an eigenvalue below the clipping tolerance.
    #[error("density matrix has eigenvalue {0:.3e} below -1e-9")]
    NegativeSpectrum(f64),

    /// Steady-state shape formulas requested past the parametric-instability
    /// threshold 2η_β|β|² sin(Δθ) ≥ κ, where D₀+b diverges.
    #[error("steady-state shape outside validity: 2*eta*|beta|^2*sin(dtheta) >= kappa")]
    InstabilityBound,

    /// Invalid simulation configuration.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
