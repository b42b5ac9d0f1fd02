//! Exact classification of three-dimensional anti-commutative algebras.
//!
//! An algebra is represented by its matrix of structure constants (MSC): an
//! n × n² matrix whose column (i, j) holds the coordinates of the basis
//! product eᵢ·eⱼ. Everything here is exact: scalars live in ℚ, in odd prime
//! fields, or in multi-quadratic towers ℚ(√d₁, …, √dₖ) grown on demand, so
//! every classification comes with a change-of-basis witness that is checked
//! entry by entry.
//!
//! The crate provides:
//! - [`field`]: exact scalars with on-demand square roots;
//! - [`linalg`]: dense exact linear algebra over any field;
//! - [`msc`]: the structure-constants formalism and the canonical catalog;
//! - [`invariants`]: annihilator / derived-subalgebra / derivation profiles;
//! - [`derivations`]: derivation solvers and automorphism checks, plus the
//!   audit of the published derivation/automorphism families;
//! - [`classify`]: the constructive classification with explicit witnesses;
//! - [`orbits`]: exhaustive finite-field orbit censuses used as ground truth;
//! - [`report`]: machine-readable verification reports.

pub mod classify;
pub mod derivations;
pub mod field;
pub mod fixtures;
pub mod invariants;
pub mod linalg;
pub mod msc;
pub mod orbits;
pub mod report;
pub mod symbolic;
