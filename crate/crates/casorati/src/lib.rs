//! Point-local curvature models of the rank-2 complex two-plane Grassmannian
//! and its noncompact dual, with exhaustive numerical verification of the
//! optimal delta-Casorati curvature inequalities for real hypersurfaces.
//!
//! The library models a single tangent point: the quaternionic Kaehler
//! operator algebra on R^{4m}, the ambient curvature tensor of either
//! geometry, intrinsic invariants of a hypersurface through the Gauss
//! equation, hyperplane Casorati extremization, and the inequality and
//! equality-case checks themselves. Everything is deterministic per seed.

pub mod ambient;
pub mod checks;
pub mod delta;
pub mod error;
pub mod hypersurface;
pub mod report;
pub mod runner;
pub mod structure;
pub mod verifier;

pub use ambient::{SpaceKind, SpaceSpec};
pub use error::{Error, Result};
pub use hypersurface::{GeometricSummary, ShapeOperator};
pub use report::{CheckRecord, VerificationReport};
pub use runner::{run, sweep_table, RunConfig};
pub use structure::{AdaptedFrame, StructureBasis};
