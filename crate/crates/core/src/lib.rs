//! Verification engine for three-dimensional paracontact metric
//! (κ̃,μ̃,ν̃)-geometry.
//!
//! Given a coordinate-chart description of a (para)contact metric structure,
//! the crate computes all derived tensors (h, connection, curvature, Ricci),
//! classifies the canonical form of h under the Lorentzian metric, extracts
//! the (κ̃,μ̃,ν̃) coefficient functions, tests harmonicity of the Reeb field,
//! applies D_α-homothetic deformations, and bridges Riemannian contact
//! (κ,μ,ν)-structures to their induced paracontact structures, validating
//! every identity numerically against explicit tolerances.

pub mod bridge;
pub mod chart;
pub mod classify;
pub mod corpus;
pub mod scan;
pub mod deform;
pub mod expr;
pub mod fields;
pub mod geometry;
pub mod harmonic;
pub mod manifest;
pub mod report;
pub mod structures;

pub use chart::{Chart, ChartRef, Constraint};
pub use expr::Expr;
pub use report::{CheckRecord, Report, Verdict};
