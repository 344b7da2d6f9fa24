//! Exact symbolic computations in the Chow ring of split quadrics twisted by
//! formal coefficients, mod-2 Steenrod operations on them, and a harness that
//! re-derives the congruences used to compare rationality of cycles over the
//! function field of a quadric with rationality over the base field.
//!
//! Layers, bottom up:
//! - [`arith`]: exact binomials (any integer upper argument), parity via
//!   Lucas, truncated power series.
//! - [`quadric_chow`]: `CH(Q)` of a split quadric, its Steenrod squares and
//!   Chern classes of `-T_Q`.
//! - [`formal_coeffs`]: graded formal symbols for cycles on `Y` and their
//!   integral lifts.
//! - [`twisted_cycles`]: `CH(Q x Y)` as external products.
//! - [`harness`]: the individual checks, parameter sweeps and reports.

pub mod arith;
pub mod formal_coeffs;
pub mod harness;
pub mod quadric_chow;
pub mod twisted_cycles;
