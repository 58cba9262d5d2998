//! Secrecy-outage analysis of a multi-user MISO downlink with multiple
//! single-antenna eavesdroppers.
//!
//! The transmitter beamforms to the strongest of K users; the strongest
//! of M eavesdroppers overhears. The crate provides:
//!
//! * [`specfun`] — log-gamma, incomplete-gamma functions and their
//!   inverses, plus two-sided elementary bounds on the lower incomplete
//!   gamma function;
//! * [`evt`] — the Gumbel limit of χ² maxima, its normalizing constants
//!   and the peaks-over-threshold exceedance levels;
//! * [`outage`] — the exact-asymptotic outage CDF (series and
//!   quadrature), the conditional upper/lower bounds, their closed-form
//!   corollaries, and the scaling law M* ~ K^{1/α};
//! * [`mc`] — seeded, reproducible Monte Carlo simulation of the full
//!   system, with rejection and POT-surrogate conditional sampling.
//!
//! With the default `parallel` feature the Monte Carlo loops and curve
//! evaluation fan out over rayon; disabling it yields a dependency-free
//! sequential build with bit-identical results.

pub mod error;
pub mod evt;
pub mod mc;
pub mod outage;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};
pub use evt::{GumbelParams, NormalizingConstants};
pub use mc::{Conditioning, ConditioningImpl, EmpiricalCdf, SimConfig, TrialRecord};
pub use outage::{
    BoundCurve, ConstantsMode, CurveKind, OutageQuery, ScalingResult, SystemShape,
    Theorem1Strategy, UserThreshold,
};
