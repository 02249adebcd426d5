//! Numerics for nonintersecting loop-erased walks and Brownian paths.
//!
//! The crate covers the discrete theory (walk matrices, loop erasure,
//! Fomin determinants with a brute-force certificate), closed-form Poisson
//! and boundary Poisson kernels of the rectangle `(0, L) × (0, π)`, the
//! first-passage densities built from them, the Eynard–Mehta-type
//! correlation kernel of the half strip together with its image under
//! `z ↦ e^z`, and a lattice refinement study tying the discrete and
//! continuum pictures together.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod correlation;
pub mod error;
pub mod figures;
pub mod graph_fomin;
pub mod lattice;
pub mod numerics;
pub mod passage_densities;
pub mod rect_kernels;
pub mod validation;
pub mod weyl;

pub use error::{Error, Result};
