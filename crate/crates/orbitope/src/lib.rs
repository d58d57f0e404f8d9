//! Exact polyhedral invariants and numerical orbit-space maps for spherical
//! homogeneous spaces.
//!
//! The crate has two halves that talk to each other:
//!
//! * an exact-rational half ([`polycore`], [`rootsys`], [`spherical`]) that
//!   builds valuation cones, moment polytopes, toroidal fans and face
//!   stratifications with arbitrary-precision arithmetic, and
//! * a floating-point half ([`momentnum`]) that evaluates projective moment
//!   maps, inverts the toric moment parametrization, runs Kempf–Ness
//!   norm-square minimization and computes Cartan (KAK) decompositions.
//!
//! [`instances`] wires both halves together for a catalog of worked
//! homogeneous spaces (flag variety, toric spaces, SL(2) as a group,
//! SL(2)^3 / diagonal SL(2)), and [`cli`] exposes the pipeline as a small
//! command-line tool.
//!
//! Start with the runnable examples (`cargo run --example valuation_cone`)
//! or the [`instances::registry`] of named models.

pub mod cli;
pub mod instances;
pub mod momentnum;
pub mod polycore;
pub mod rat;
pub mod rootsys;
pub mod spherical;
