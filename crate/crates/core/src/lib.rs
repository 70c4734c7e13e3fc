#![no_std]
#![warn(missing_docs)]
// `!(x > 0.0)` rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! # viscofb-core
//!
//! Viscosity forward-backward splitting for problems of the form
//!
//! ```text
//! find ψ* ∈ Ω := Fix(T1) ∩ Fix(T2) ∩ Fix(T3) ∩ S(Π, Λ)
//!
//! where S(Π, Λ) = { ψ : 0 ∈ Π(ψ) + Λ(ψ) }
//! ```
//!
//! with `Π` maximal monotone, `Λ` inverse strongly monotone, `T1`, `T2`
//! multivalued demicontractive and `T3` multivalued quasi-nonexpansive, all
//! over `R^d` with the dot product. Among the points of `Ω` the viscosity
//! iterations select the one solving
//!
//! ```text
//! ⟨ηΦψ* − γφ(ψ*), ψ* − q⟩ ≤ 0   for all q ∈ Ω.
//! ```
//!
//! The crate is `no_std` and needs only `alloc`. It contains
//!
//! * [`hilbert`] -- points, inner products and exact projections onto simple
//!   convex sets.
//! * [`setvalued`] -- representable set images, distance and Hausdorff
//!   metric, selection rules and sample-based operator-class checkers.
//! * [`monotone`] -- single-valued operators, maximal monotone operators with
//!   closed-form resolvents, and the forward-backward map.
//! * [`schedules`] -- the parameter sequences and their validation.
//! * [`solvers`] -- the three viscosity iterations, plain forward-backward,
//!   and per-iteration inequality audits.
//! * [`problems`] -- the built-in operator and instance catalog.
//!
//! Operator-class checks are certifiers over the samples they are given: a
//! pass means no violation was found, not that the property holds
//! everywhere.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod audit;
pub mod error;
pub mod hilbert;
pub mod monotone;
pub mod problems;
pub mod schedules;
pub mod setvalued;
pub mod solvers;

pub use audit::AuditRecord;
pub use error::{Error, Result};
pub use hilbert::{ConvexSet, Point};

/// Absolute tolerance used by all inequality audits unless overridden.
pub const AUDIT_TOL: f64 = 1e-10;
