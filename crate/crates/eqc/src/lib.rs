//! Exact solver and verification toolkit for detailed-balance equilibria of
//! monomer-polymer systems.
//!
//! A *system* is a finite set of monomer types together with a finite set of
//! polymers, each polymer a non-empty multiset of monomers.  Designating a
//! subset of the polymers as *on-target* with prescribed concentration
//! exponents `mu in (0,1]` (concentrations `c^mu` for a dilution base
//! `c in (0,1)`) induces, through detailed balance, equilibrium exponents for
//! every remaining polymer.  This crate computes those induced exponents
//! exactly — as arbitrary-precision rationals — via a levelizing sweep over a
//! generating set of the canonical-reaction cone, and provides certified
//! per-polymer lower bounds, stability/closure checks, and both symbolic and
//! numeric equilibrium verification.
//!
//! Module layout:
//!
//! * [`model`] — core types (monomers, polymers, systems, on-target specs,
//!   reaction vectors) and the on-target validity check; [`parse`] holds the
//!   text format.
//! * [`hilbert`] — the canonical-reaction cone and its generating set
//!   (Hilbert basis of the integer points), computed by a completion
//!   procedure with explicit resource budgets.
//! * [`levelize`] — the level-assignment sweep producing exact exponents,
//!   the stability check, and concentration evaluation.
//! * [`bounds`] — per-polymer lower bounds (basis scan, exact-rational LP,
//!   bounded enumeration) and entropy-based whole-system bounds.
//! * [`verify`] — symbolic balance certificates, a numeric dual-ascent
//!   equilibrium solver, and a brute-force canonical-reaction oracle.
//! * [`scenarios`] — generators for the worked example systems (a three-level
//!   cascade, AND gates, translator cascades) and the translator leak-bound
//!   calculator.
//!
//! Supporting modules: [`multiset`] (multiset algebra), [`ratio`] (rational
//! parsing/rendering and high-precision evaluation), [`linalg`] (exact
//! integer/rational elimination), [`simplex`] (exact-rational LP).

pub mod bounds;
pub mod cli;
pub mod hilbert;
pub mod levelize;
pub mod linalg;
pub mod model;
pub mod multiset;
pub mod parse;
pub mod ratio;
pub mod scenarios;
pub mod simplex;
pub mod verify;

pub use model::{MonomerId, OnTargetSpec, Polymer, ReactionVec, System};
