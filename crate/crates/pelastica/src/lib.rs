//! Numerical construction, classification and verification of p-elasticae
//! in `R^n`: critical curves of the p-bending energy under fixed length.
//!
//! The crate is organised around a small set of building blocks:
//!
//! * [`pelliptic`] — p-elliptic special functions (incomplete/complete
//!   integrals, amplitude, `cn_p`, `sech_p`, `tanh_p`) and the derived
//!   constants `q_p^*`, `varpi_p^*`, `phi^*(p)`, `P_m`, `p_m^*`.
//! * [`curvekit`] — the `SampledCurve` data model and the constructors for
//!   lines, flat-core loops and curves, wavelike arcs, figure-eights,
//!   leaves and closed m-leafed curves.
//! * [`geom`] — discrete measurements: length, bending energy, curvature
//!   and torsion profiles, multiplicity, embeddedness, affine dimension.
//! * [`elverify`] — Euler–Lagrange certification: weak first-variation
//!   residuals, strong ODE residuals, first-integral drift, boundary checks.
//! * [`spatial`] — torsion-carrying solutions via the curvature ODE and
//!   Frenet reconstruction.
//! * [`pinned`] — the pinned (position-only) boundary value problem.
//! * [`liyau`] — the Li–Yau multiplicity inequality, leafed existence
//!   classification and embeddedness thresholds.

pub mod curvekit;
pub mod elverify;
pub mod geom;
pub mod liyau;
pub mod pelliptic;
pub mod pinned;
pub mod quad;
pub mod root;
pub mod spatial;
pub mod vecn;

pub use curvekit::{FlatCoreSpec, LeafedSpec, OmegaTuple, SampledCurve};
pub use elverify::{ResidualReport, TestFunctionBattery};
pub use geom::EnergyReport;
pub use liyau::LiYauReport;
pub use pelliptic::{CompletePair, Modulus, PExponent};
pub use pinned::PinnedProblem;
pub use spatial::{FrenetState, ParamSet};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested integral is infinite.
    #[error("divergent integral: {0}")]
    Divergence(String),
    /// A bracketing root search could not find a sign change.
    #[error("root bracketing failed: {0}")]
    Bracket(String),
    /// Quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    /// The requested object does not exist (proven nonexistence).
    #[error("nonexistent: {0}")]
    Nonexistent(String),
    /// Curve data violates a structural invariant.
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    /// A multiplier estimate is not determined by the data.
    #[error("cannot estimate: {0}")]
    CannotEstimate(String),
    /// The first integral forbids the requested orbit (w -> 0 with C != 0).
    #[error("first-integral blow-up: {0}")]
    BlowUp(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
