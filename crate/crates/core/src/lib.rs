//! Verification toolkit for SU(2) gauge field strengths.
//!
//! Two independent engines check the same operator identities:
//!
//! * [`symca`] normalizes noncommutative expressions in `S`, `S⁻¹`, `B_μ`, `ψ`
//!   and free derivatives, and proves identities as exact normal-form equality.
//! * [`fieldnum`] evaluates concrete SU(2) field configurations with
//!   second-order jets and confirms the same identities to near machine
//!   precision.
//!
//! [`campaign`] drives seeded randomized runs of both and produces
//! deterministic [`report::Report`]s.

pub mod campaign;
pub mod coordexpr;
pub mod fieldfile;
pub mod fieldnum;
pub mod identities;
pub mod instantiate;
pub mod jet;
pub mod liealg;
pub mod report;
pub mod sampling;
pub mod symca;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
