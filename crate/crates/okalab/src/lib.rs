//! Certified numerics and exact integer calculus for divisors, line
//! bundles, and entire curves on (C*)ⁿ.
//!
//! The crate turns a handful of classical constructions into checkable
//! computations:
//!
//! - [`branchlog`] — branch-tracked complex logarithms, continuation along
//!   loops, and winding numbers with adaptive phase unwrapping.
//! - [`steinfn`] — Stein's infinite-product functions F⁺, F⁻ cutting out
//!   the multivalued divisors w = z^{±i}, evaluated with certified
//!   truncation error bounds, plus their shifted companions and annulus
//!   zero counts.
//! - [`monodromy`] — factors of automorphy and first-Chern-class pairings
//!   ⟨c₁(L(D)), T⟩ on coordinate torus 2-cycles, extracted as winding
//!   numbers, with a direct intersection-count oracle.
//! - [`bundlecalc`] — exact integer exponent matrices for monomial factors
//!   of automorphy, and the extra-zero solvability verdict on declared
//!   support cycles.
//! - [`latticeforms`] — exact pairing of constant (1,1)-forms against
//!   Gaussian-lattice 2-cycles and covering-lattice survival tests.
//! - [`curvelab`] — argument-principle intersection counts of the entire
//!   curve ζ ↦ (e^ζ, e^{iζ}) with algebraic and Stein-type divisors.
//!
//! Every inexact result carries either a certified relative error bound or
//! a winding residual; integer verdicts are rejected rather than rounded
//! through ambiguity.

pub mod branchlog;
pub mod bundlecalc;
pub mod curvelab;
pub mod error;
pub mod latticeforms;
pub mod monodromy;
pub mod steinfn;

pub use error::{Error, Result};
