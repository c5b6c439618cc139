//! Exact-arithmetic knot invariants and the purely-cosmetic-surgery
//! obstruction.
//!
//! The crate computes, from a planar-diagram (PD) code:
//!
//! * the Jones polynomial (Kauffman bracket state sum, exact Laurent
//!   arithmetic) and its derivatives at `t = 1`,
//! * the normalized Alexander polynomial via Fox calculus and the Conway
//!   coefficient `a2`,
//! * the finite-type invariants `v2`, `v3` and Lescop's `w3`,
//!
//! and applies the obstruction *`V''(1) != 0` or `V'''(1) != 0` implies no
//! purely cosmetic surgeries* to single knots, two-bridge/Whitehead
//! families, and knot-census tables.
//!
//! Start with the runnable examples (`cargo run --example invariants`) or
//! the `knotinv` binary (`knotinv invariants --pd "X(1,4,2,3) X(3,6,4,5)
//! X(5,2,6,1)"`).

pub mod alexander;
pub mod cli;
pub mod families;
pub mod ftinv;
pub mod cosmetic;
pub mod diagram;
pub mod jones;
pub mod poly;
pub mod verify;

pub use diagram::{DiagramError, PlanarDiagram, SkeinTriple};
pub use poly::{HalfIntLaurent, Rational};
