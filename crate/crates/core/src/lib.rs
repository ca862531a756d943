//! Numerical verification engine for dual-connection geometry on
//! warped-product contact manifolds.
//!
//! A statistical manifold is specified by a metric field together with a
//! totally symmetric difference tensor; the primal and dual connections are
//! Γ_g ± K. Everything downstream — curvature tensors of all three
//! connections, the statistical curvature with its two-route cross-check,
//! warped-product lifts carrying almost contact structures, induced
//! submanifold geometry with dual second fundamental forms, and the
//! Chen-Ricci lower bound with its equality case — is computed numerically
//! by finite differencing of closed-form fields and machine-checked at
//! seeded sample points.
//!
//! The `suite` module packages the checks into deterministic, serializable
//! reports; the `kenstat` binary in the companion crate is the batch front
//! end.

pub mod chen_ricci;
pub mod curvature;
pub mod error;
pub mod kenmotsu;
pub mod statistical;
pub mod submanifold;
pub mod suite;
pub mod tensor;

pub use error::{GeomError, Result};
